//! Finite-dimensional vector spaces over an exact field, with the
//! information function `d(f) = dim f(V)`.
//!
//! An object is a dimension; `K^n` has the standard basis. A morphism
//! `K^c → K^r` is an `r × c` matrix acting on column vectors. Products are
//! direct sums in block order, so the internal product is the stacked
//! matrix `[f; g]` and the external product is block diagonal.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::category::{require_common_domain, require_same, ArrowIso, Category, CategoryId, Enumerate, IsoWitness, ProductCone};
use crate::dual::Cocartesian;
use crate::error::{Error, Result};
use crate::field::{self, with_arith, Arith, Entries, Field};
use crate::json::{field as json_field, Decode, Envelope};
use crate::measure::{InfoMeasure, Measured};
use crate::rational::{parse as parse_rational, ratio, Rational};
use crate::sample::{Sample, SampleInto, SampleParams, TrialRng};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearMorphism {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Entries,
}

impl LinearMorphism {
    /// From rows of integers, reduced into the field.
    pub fn from_ints(field: Field, rows: usize, cols: usize, data: &[Vec<i64>]) -> Result<Self> {
        check_shape(rows, cols, data.iter().map(Vec::len))?;
        let flat = data.iter().flatten().copied();
        let entries = match field {
            Field::Prime(p) => Entries::Mod(flat.map(|x| x.rem_euclid(p as i64) as u32).collect()),
            Field::Rationals => Entries::Q(flat.map(|x| ratio(x, 1)).collect()),
        };
        Ok(LinearMorphism { field, rows, cols, entries })
    }

    pub fn from_rationals(rows: usize, cols: usize, data: Vec<Vec<Rational>>) -> Result<Self> {
        check_shape(rows, cols, data.iter().map(Vec::len))?;
        Ok(LinearMorphism {
            field: Field::Rationals,
            rows,
            cols,
            entries: Entries::Q(data.into_iter().flatten().collect()),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Dimension of the codomain.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Dimension of the domain.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        with_arith!(field, ar => LinearMorphism { field, rows, cols, entries: wrap(ar, vec![ar.zero(); rows * cols]) })
    }

    pub fn identity(field: Field, n: usize) -> Self {
        with_arith!(field, ar => LinearMorphism { field, rows: n, cols: n, entries: wrap(ar, field::identity(ar, n)) })
    }

    pub fn rank(&self) -> usize {
        with_arith!(self.field, ar => field::rank(ar, unwrap(ar, &self.entries), self.rows, self.cols))
    }

    /// `self · other`; shapes must agree.
    fn mul(&self, other: &LinearMorphism) -> LinearMorphism {
        debug_assert_eq!(self.cols, other.rows);
        with_arith!(self.field, ar => {
            let e = field::matmul(ar, unwrap(ar, &self.entries), unwrap(ar, &other.entries), self.rows, self.cols, other.cols);
            LinearMorphism { field: self.field, rows: self.rows, cols: other.cols, entries: wrap(ar, e) }
        })
    }

    pub fn inverse(&self) -> Option<LinearMorphism> {
        if self.rows != self.cols {
            return None;
        }
        with_arith!(self.field, ar => {
            field::inverse(ar, unwrap(ar, &self.entries), self.rows)
                .map(|e| LinearMorphism { entries: wrap(ar, e), ..self.clone() })
        })
    }

    pub fn transpose(&self) -> LinearMorphism {
        let entries = match &self.entries {
            Entries::Mod(v) => Entries::Mod(field::transpose(v, self.rows, self.cols)),
            Entries::Q(v) => Entries::Q(field::transpose(v, self.rows, self.cols)),
        };
        LinearMorphism { field: self.field, rows: self.cols, cols: self.rows, entries }
    }

    /// The reduced row echelon form: canonical under `f ↦ k ∘ f`, `k` invertible.
    pub fn rref(&self) -> LinearMorphism {
        with_arith!(self.field, ar => {
            let mut e = unwrap(ar, &self.entries).to_vec();
            field::rref(ar, &mut e, self.rows, self.cols, None);
            LinearMorphism { entries: wrap(ar, e), ..self.clone() }
        })
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &LinearMorphism) -> LinearMorphism {
        debug_assert_eq!(self.cols, other.cols);
        let entries = concat(&self.entries, &other.entries);
        LinearMorphism { field: self.field, rows: self.rows + other.rows, cols: self.cols, entries }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &LinearMorphism) -> LinearMorphism {
        debug_assert_eq!(self.rows, other.rows);
        self.transpose().vstack(&other.transpose()).transpose()
    }

    /// `[self 0; 0 other]`
    pub fn block_diag(&self, other: &LinearMorphism) -> LinearMorphism {
        let top = self.hstack(&LinearMorphism::zero(self.field, self.rows, other.cols));
        let bottom = LinearMorphism::zero(self.field, other.rows, self.cols).hstack(other);
        top.vstack(&bottom)
    }

    fn rows_json(&self) -> Vec<Vec<Value>> {
        let cell = |i: usize| -> Value {
            match &self.entries {
                Entries::Mod(v) => Value::from(v[i]),
                Entries::Q(v) => Value::from(v[i].to_string()),
            }
        };
        (0..self.rows).map(|r| (0..self.cols).map(|c| cell(r * self.cols + c)).collect()).collect()
    }
}

fn wrap<A: Arith>(_ar: &A, v: Vec<A::E>) -> Entries {
    A::wrap(v)
}

fn unwrap<'e, A: Arith>(_ar: &A, e: &'e Entries) -> &'e [A::E] {
    A::unwrap(e)
}

fn concat(a: &Entries, b: &Entries) -> Entries {
    match (a, b) {
        (Entries::Mod(x), Entries::Mod(y)) => Entries::Mod(x.iter().chain(y).copied().collect()),
        (Entries::Q(x), Entries::Q(y)) => Entries::Q(x.iter().chain(y).cloned().collect()),
        _ => unreachable!("entries match the field"),
    }
}

fn check_shape(rows: usize, cols: usize, lens: impl ExactSizeIterator<Item = usize>) -> Result<()> {
    if lens.len() != rows {
        return Err(Error::InvalidMorphism(format!("expected {rows} rows, got {}", lens.len())));
    }
    for (i, n) in lens.enumerate() {
        if n != cols {
            return Err(Error::InvalidMorphism(format!("row {i} has {n} entries, expected {cols}")));
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DimJson {
    dim: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PayloadJson {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Value>>,
}

fn parse_entry(field: Field, v: &Value) -> Result<Entries> {
    let bad = || Error::Parse(format!("bad matrix entry {v} for field {field}"));
    let q = match v {
        Value::Number(n) => ratio(n.as_i64().ok_or_else(bad)?, 1),
        Value::String(s) => parse_rational(s)?,
        _ => return Err(bad()),
    };
    Ok(match field {
        Field::Rationals => Entries::Q(vec![q]),
        Field::Prime(p) => {
            if !q.is_integer() {
                return Err(bad());
            }
            let n: i64 = num_traits::ToPrimitive::to_i64(q.numer()).ok_or_else(bad)?;
            Entries::Mod(vec![n.rem_euclid(p as i64) as u32])
        }
    })
}

impl Decode for LinearMorphism {
    fn decode(env: &Envelope) -> Result<Self> {
        env.expect(CategoryId::Finvect)?;
        let dom: DimJson = json_field(&env.domain, "domain")?;
        let cod: DimJson = json_field(&env.codomain, "codomain")?;
        let p: PayloadJson = json_field(&env.payload, "payload")?;
        if (p.rows, p.cols) != (cod.dim, dom.dim) {
            return Err(Error::InvalidMorphism(format!(
                "a {}x{} matrix is not a map from dim {} to dim {}",
                p.rows, p.cols, dom.dim, cod.dim
            )));
        }
        check_shape(p.rows, p.cols, p.entries.iter().map(Vec::len))?;
        let mut entries = match p.field {
            Field::Prime(_) => Entries::Mod(Vec::new()),
            Field::Rationals => Entries::Q(Vec::new()),
        };
        for v in p.entries.iter().flatten() {
            entries = concat(&entries, &parse_entry(p.field, v)?);
        }
        Ok(LinearMorphism { field: p.field, rows: p.rows, cols: p.cols, entries })
    }
}

/// `K`-FinVect for one field `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FinVect {
    field: Field,
}

impl FinVect {
    pub fn new(field: Field) -> Self {
        FinVect { field }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn check_field(&self, f: &LinearMorphism) -> Result<()> {
        require_same("field", &self.field, &f.field)
    }

    fn random_matrix(&self, rows: usize, cols: usize, rng: &mut TrialRng) -> LinearMorphism {
        let entries = match self.field {
            Field::Prime(p) => Entries::Mod((0..rows * cols).map(|_| rng.random_range(0..p)).collect()),
            Field::Rationals => Entries::Q(
                (0..rows * cols)
                    .map(|_| {
                        if rng.random_bool(0.5) {
                            ratio(0, 1)
                        } else {
                            ratio(rng.random_range(-3..=3), rng.random_range(1..=3))
                        }
                    })
                    .collect(),
            ),
        };
        LinearMorphism { field: self.field, rows, cols, entries }
    }

    fn random_invertible(&self, n: usize, rng: &mut TrialRng) -> (LinearMorphism, LinearMorphism) {
        loop {
            let m = self.random_matrix(n, n, rng);
            if let Some(inv) = m.inverse() {
                return (m, inv);
            }
        }
    }
}

/// `d(f) = dim f(V)`, the rank.
pub fn rank_info(f: &LinearMorphism) -> usize {
    f.rank()
}

/// A section `s` with `s ∘ g ∘ f = f` exists iff `g` is injective on the
/// image of `f`, i.e. `rank(g ∘ f) = rank(f)`.
pub fn section_exists_linear(f: &LinearMorphism, g: &LinearMorphism) -> Result<bool> {
    FinVect::new(f.field).section_exists(f, g)
}

impl Category for FinVect {
    type Object = usize;
    type Morphism = LinearMorphism;

    fn id(&self) -> CategoryId {
        CategoryId::Finvect
    }

    fn domain(&self, f: &LinearMorphism) -> usize {
        f.cols
    }

    fn codomain(&self, f: &LinearMorphism) -> usize {
        f.rows
    }

    fn identity(&self, n: &usize) -> Result<LinearMorphism> {
        Ok(LinearMorphism::identity(self.field, *n))
    }

    fn compose(&self, g: &LinearMorphism, f: &LinearMorphism) -> Result<LinearMorphism> {
        self.check_field(f)?;
        self.check_field(g)?;
        require_same("codomain of f vs domain of g", &f.rows, &g.cols)?;
        Ok(g.mul(f))
    }

    fn product(&self, x: &usize, y: &usize) -> Option<ProductCone<usize, LinearMorphism>> {
        let k = self.field;
        Some(ProductCone {
            apex: x + y,
            first: LinearMorphism::identity(k, *x).hstack(&LinearMorphism::zero(k, *x, *y)),
            second: LinearMorphism::zero(k, *y, *x).hstack(&LinearMorphism::identity(k, *y)),
        })
    }

    fn internal_product(&self, f: &LinearMorphism, g: &LinearMorphism) -> Result<Option<LinearMorphism>> {
        self.check_field(f)?;
        self.check_field(g)?;
        require_common_domain(&f.cols, &g.cols)?;
        Ok(Some(f.vstack(g)))
    }

    fn external_product(&self, f: &LinearMorphism, g: &LinearMorphism) -> Result<Option<LinearMorphism>> {
        self.check_field(f)?;
        self.check_field(g)?;
        Ok(Some(f.block_diag(g)))
    }

    fn terminal_object(&self) -> Option<usize> {
        Some(0)
    }

    fn unique_to_terminal(&self, n: &usize) -> Result<LinearMorphism> {
        Ok(LinearMorphism::zero(self.field, 0, *n))
    }

    fn is_arrow_isomorphic(&self, f: &LinearMorphism, g: &LinearMorphism) -> Result<bool> {
        self.check_field(f)?;
        self.check_field(g)?;
        Ok(f.rows == g.rows && f.cols == g.cols && f.rank() == g.rank())
    }

    /// From `P_f f M_f⁻¹ = D = P_g g M_g⁻¹`: `α = M_g⁻¹ M_f` on the domain and
    /// `β = P_g⁻¹ P_f` on the codomain.
    fn arrow_isomorphism(&self, f: &LinearMorphism, g: &LinearMorphism) -> Result<Option<ArrowIso<LinearMorphism>>> {
        if !self.is_arrow_isomorphic(f, g)? {
            return Ok(None);
        }
        let decompose = |h: &LinearMorphism| {
            with_arith!(self.field, ar => {
                let (p, m) = field::rank_decomposition(ar, unwrap(ar, &h.entries), h.rows, h.cols);
                (
                    LinearMorphism { field: self.field, rows: h.rows, cols: h.rows, entries: wrap(ar, p) },
                    LinearMorphism { field: self.field, rows: h.cols, cols: h.cols, entries: wrap(ar, m) },
                )
            })
        };
        let (pf, mf) = decompose(f);
        let (pg, mg) = decompose(g);
        let inv = |m: &LinearMorphism| m.inverse().expect("decomposition factors are invertible");
        Ok(Some(ArrowIso {
            domain: IsoWitness { forward: inv(&mg).mul(&mf), backward: inv(&mf).mul(&mg) },
            codomain: IsoWitness { forward: inv(&pg).mul(&pf), backward: inv(&pf).mul(&pg) },
        }))
    }

    fn section_exists(&self, f: &LinearMorphism, g: &LinearMorphism) -> Result<bool> {
        Ok(self.compose(g, f)?.rank() == f.rank())
    }

    fn encode(&self, f: &LinearMorphism) -> Envelope {
        let payload = PayloadJson { field: f.field, rows: f.rows, cols: f.cols, entries: f.rows_json() };
        Envelope::new(CategoryId::Finvect, &DimJson { dim: f.cols }, &DimJson { dim: f.rows }, &payload)
    }
}

impl Enumerate for FinVect {
    fn objects_up_to(&self, max_size: usize) -> Result<Vec<usize>> {
        Ok((0..=max_size).collect())
    }

    /// Matrices in lexicographic order of their row-major entries. Only
    /// finite fields can be enumerated.
    fn homs(&self, dom: &usize, cod: &usize) -> Result<Vec<LinearMorphism>> {
        let Field::Prime(p) = self.field else {
            return Err(Error::EnumerationBudgetExceeded("hom-sets over the rationals are infinite".into()));
        };
        let n = cod * dom;
        match self.hom_count(dom, cod) {
            Some(c) if c <= 10_000_000 => {}
            _ => return Err(Error::EnumerationBudgetExceeded(format!("{p}^{n} matrices"))),
        }
        Ok(crate::finset::all_maps(n, p as usize)
            .into_iter()
            .map(|v| LinearMorphism {
                field: self.field,
                rows: *cod,
                cols: *dom,
                entries: Entries::Mod(v.into_iter().map(|x| x as u32).collect()),
            })
            .collect())
    }

    fn hom_count(&self, dom: &usize, cod: &usize) -> Option<u128> {
        let p = self.field.order()? as u128;
        p.checked_pow((dom * cod) as u32)
    }

    fn arrow_canonical(&self, f: &LinearMorphism) -> Option<LinearMorphism> {
        let mut d = LinearMorphism::zero(self.field, f.rows, f.cols);
        let r = f.rank();
        let one = LinearMorphism::identity(self.field, 1);
        for i in 0..r {
            set(&mut d, i, i, &one);
        }
        Some(d)
    }

    fn coslice_canonical(&self, f: &LinearMorphism) -> Option<LinearMorphism> {
        Some(f.rref())
    }

    fn precompose_canonical(&self, f: &LinearMorphism) -> Option<LinearMorphism> {
        Some(f.transpose().rref().transpose())
    }
}

/// Copies the single entry of the `1 × 1` matrix `v` into position `(i, j)`.
fn set(m: &mut LinearMorphism, i: usize, j: usize, v: &LinearMorphism) {
    let k = i * m.cols + j;
    match (&mut m.entries, &v.entries) {
        (Entries::Mod(x), Entries::Mod(y)) => x[k] = y[0],
        (Entries::Q(x), Entries::Q(y)) => x[k] = y[0].clone(),
        _ => unreachable!("entries match the field"),
    }
}

impl Sample for FinVect {
    fn random_object(&self, rng: &mut TrialRng, p: &SampleParams) -> usize {
        rng.random_range(0..=p.max_size)
    }

    fn random_morphism_from(&self, dom: &usize, rng: &mut TrialRng, p: &SampleParams) -> LinearMorphism {
        let cod = rng.random_range(0..=p.max_size);
        self.random_matrix(cod, *dom, rng)
    }

    fn random_iso(&self, n: &usize, rng: &mut TrialRng, _p: &SampleParams) -> (usize, IsoWitness<LinearMorphism>) {
        let (forward, backward) = self.random_invertible(*n, rng);
        (*n, IsoWitness { forward, backward })
    }
}

impl SampleInto for FinVect {
    fn random_morphism_into(&self, cod: &usize, rng: &mut TrialRng, p: &SampleParams) -> LinearMorphism {
        let dom = rng.random_range(0..=p.max_size);
        self.random_matrix(*cod, dom, rng)
    }
}

impl Cocartesian for FinVect {
    fn dual_id(&self) -> CategoryId {
        CategoryId::FinvectDual
    }

    fn coproduct(&self, x: &usize, y: &usize) -> (usize, LinearMorphism, LinearMorphism) {
        let cone = self.product(x, y).expect("direct sums exist");
        (cone.apex, cone.first.transpose(), cone.second.transpose())
    }

    /// `[f | g]: w ⊕ u ↦ f(w) + g(u)`.
    fn copair(&self, f: &LinearMorphism, g: &LinearMorphism) -> Result<LinearMorphism> {
        self.check_field(f)?;
        self.check_field(g)?;
        require_common_domain(&f.rows, &g.rows)?;
        Ok(f.hstack(g))
    }

    fn initial_object(&self) -> usize {
        0
    }

    fn unique_from_initial(&self, n: &usize) -> LinearMorphism {
        LinearMorphism::zero(self.field, *n, 0)
    }

    fn cosection_exists(&self, f: &LinearMorphism, g: &LinearMorphism) -> Result<bool> {
        Ok(self.compose(f, g)?.rank() == f.rank())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Rank;

impl InfoMeasure<FinVect> for Rank {
    fn name(&self) -> String {
        "rank".into()
    }

    fn exact(&self) -> bool {
        true
    }

    fn eval(&self, f: &LinearMorphism) -> Result<Option<Measured>> {
        Ok(Some(Measured::count(f.rank() as u64)))
    }
}

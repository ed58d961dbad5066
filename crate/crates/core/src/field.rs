//! Exact scalar fields: `GF(p)` and `ℚ`, and row-major matrix algebra over
//! them.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Field {
    /// Integers mod a prime `p < 2³¹`.
    Prime(u32),
    Rationals,
}

impl Field {
    pub const GF2: Field = Field::Prime(2);
    pub const GF3: Field = Field::Prime(3);

    pub fn prime(p: u32) -> Result<Self> {
        if p < 2 || p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    /// Number of elements, `None` for `ℚ`.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(p as u64),
            Field::Rationals => None,
        }
    }

    pub fn name(self) -> String {
        match self {
            Field::Prime(p) => format!("gf{p}"),
            Field::Rationals => "rational".into(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "rational" {
            return Ok(Field::Rationals);
        }
        let p = s
            .strip_prefix("gf")
            .and_then(|d| d.parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}`; expected gf<p> or rational")))?;
        Field::prime(p).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl TryFrom<String> for Field {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Field> for String {
    fn from(f: Field) -> String {
        f.name()
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Matrix entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Entries {
    Mod(Vec<u32>),
    Q(Vec<Rational>),
}

pub(crate) trait Arith {
    type E: Clone + PartialEq;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn wrap(v: Vec<Self::E>) -> Entries;
    fn unwrap(e: &Entries) -> &[Self::E];
}

pub(crate) struct ModP(pub u32);

impl Arith for ModP {
    type E = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.0 as u64) as u32
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.0 as u64 - *b as u64) % self.0 as u64) as u32
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.0 as u64) as u32
    }

    fn inv(&self, a: &u32) -> u32 {
        // a^(p-2)
        let p = self.0 as u64;
        let (mut base, mut e, mut acc) = (*a as u64 % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn wrap(v: Vec<u32>) -> Entries {
        Entries::Mod(v)
    }

    fn unwrap(e: &Entries) -> &[u32] {
        match e {
            Entries::Mod(v) => v,
            Entries::Q(_) => unreachable!("entries match the field"),
        }
    }
}

pub(crate) struct Q;

impl Arith for Q {
    type E = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }

    fn one(&self) -> Rational {
        Rational::one()
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }

    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }

    fn inv(&self, a: &Rational) -> Rational {
        a.recip()
    }

    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }

    fn wrap(v: Vec<Rational>) -> Entries {
        Entries::Q(v)
    }

    fn unwrap(e: &Entries) -> &[Rational] {
        match e {
            Entries::Q(v) => v,
            Entries::Mod(_) => unreachable!("entries match the field"),
        }
    }
}

/// Binds `$ar` to the arithmetic of `$field` and runs `$body`.
macro_rules! with_arith {
    ($field:expr, $ar:ident => $body:expr) => {
        match $field {
            $crate::field::Field::Prime(p) => {
                let $ar = &$crate::field::ModP(p);
                $body
            }
            $crate::field::Field::Rationals => {
                let $ar = &$crate::field::Q;
                $body
            }
        }
    };
}
pub(crate) use with_arith;

pub(crate) fn identity<A: Arith>(ar: &A, n: usize) -> Vec<A::E> {
    let mut m = vec![ar.zero(); n * n];
    for i in 0..n {
        m[i * n + i] = ar.one();
    }
    m
}

/// `a · b` for `a` of shape `rows × inner` and `b` of shape `inner × cols`.
pub(crate) fn matmul<A: Arith>(ar: &A, a: &[A::E], b: &[A::E], rows: usize, inner: usize, cols: usize) -> Vec<A::E> {
    let mut out = vec![ar.zero(); rows * cols];
    for i in 0..rows {
        for k in 0..inner {
            let x = &a[i * inner + k];
            if ar.is_zero(x) {
                continue;
            }
            for j in 0..cols {
                let t = ar.mul(x, &b[k * cols + j]);
                out[i * cols + j] = ar.add(&out[i * cols + j], &t);
            }
        }
    }
    out
}

pub(crate) fn transpose<T: Clone>(m: &[T], rows: usize, cols: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(m.len());
    for j in 0..cols {
        for i in 0..rows {
            out.push(m[i * cols + j].clone());
        }
    }
    out
}

/// Reduces `m` to reduced row echelon form in place and returns the pivot
/// columns. Row operations are replayed on `track` (a `rows × rows` matrix)
/// when given, so starting from the identity it ends as `P` with `P·m₀ = m`.
pub(crate) fn rref<A: Arith>(ar: &A, m: &mut [A::E], rows: usize, cols: usize, mut track: Option<&mut [A::E]>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| !ar.is_zero(&m[i * cols + c])) else {
            continue;
        };
        swap_rows(m, cols, i, r);
        if let Some(t) = track.as_deref_mut() {
            swap_rows(t, rows, i, r);
        }
        let s = ar.inv(&m[r * cols + c]);
        scale_row(ar, m, cols, r, &s);
        if let Some(t) = track.as_deref_mut() {
            scale_row(ar, t, rows, r, &s);
        }
        for i in 0..rows {
            if i == r || ar.is_zero(&m[i * cols + c]) {
                continue;
            }
            let factor = m[i * cols + c].clone();
            sub_row(ar, m, cols, i, r, &factor);
            if let Some(t) = track.as_deref_mut() {
                sub_row(ar, t, rows, i, r, &factor);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn swap_rows<T>(m: &mut [T], cols: usize, i: usize, j: usize) {
    if i != j {
        for c in 0..cols {
            m.swap(i * cols + c, j * cols + c);
        }
    }
}

fn scale_row<A: Arith>(ar: &A, m: &mut [A::E], cols: usize, i: usize, s: &A::E) {
    for c in 0..cols {
        m[i * cols + c] = ar.mul(&m[i * cols + c], s);
    }
}

/// `row_i -= factor · row_r`
fn sub_row<A: Arith>(ar: &A, m: &mut [A::E], cols: usize, i: usize, r: usize, factor: &A::E) {
    for c in 0..cols {
        let t = ar.mul(factor, &m[r * cols + c]);
        m[i * cols + c] = ar.sub(&m[i * cols + c], &t);
    }
}

pub(crate) fn rank<A: Arith>(ar: &A, m: &[A::E], rows: usize, cols: usize) -> usize {
    let mut work = m.to_vec();
    rref(ar, &mut work, rows, cols, None).len()
}

pub(crate) fn inverse<A: Arith>(ar: &A, m: &[A::E], n: usize) -> Option<Vec<A::E>> {
    let mut work = m.to_vec();
    let mut inv = identity(ar, n);
    let pivots = rref(ar, &mut work, n, n, Some(&mut inv));
    (pivots.len() == n).then_some(inv)
}

/// Invertible `P` (`rows × rows`) and `M` (`cols × cols`) with
/// `P · m = D · M`, where `D = [I_r 0; 0 0]`. Hence `P · m · M⁻¹ = D`.
pub(crate) fn rank_decomposition<A: Arith>(ar: &A, m: &[A::E], rows: usize, cols: usize) -> (Vec<A::E>, Vec<A::E>) {
    let mut reduced = m.to_vec();
    let mut p = identity(ar, rows);
    let pivots = rref(ar, &mut reduced, rows, cols, Some(&mut p));
    let mut big_m = Vec::with_capacity(cols * cols);
    big_m.extend_from_slice(&reduced[..pivots.len() * cols]);
    for j in (0..cols).filter(|j| !pivots.contains(j)) {
        big_m.extend((0..cols).map(|c| if c == j { ar.one() } else { ar.zero() }));
    }
    (p, big_m)
}

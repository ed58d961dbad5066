//! Discrete memoryless channels: row-stochastic matrices `P(b|a)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ROW_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelJson", into = "ChannelJson")]
pub struct Channel {
    rows: usize,
    cols: usize,
    p: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelJson {
    matrix: Vec<Vec<f64>>,
}

impl TryFrom<ChannelJson> for Channel {
    type Error = Error;

    fn try_from(j: ChannelJson) -> Result<Self> {
        Channel::new(j.matrix)
    }
}

impl From<Channel> for ChannelJson {
    fn from(c: Channel) -> Self {
        ChannelJson { matrix: c.matrix() }
    }
}

impl Channel {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let rows = matrix.len();
        if rows == 0 {
            return Err(Error::InvalidChannel("no input symbols".into()));
        }
        let cols = matrix[0].len();
        if cols == 0 {
            return Err(Error::InvalidChannel("no output symbols".into()));
        }
        let mut p = Vec::with_capacity(rows * cols);
        for (a, row) in matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidChannel(format!("row {a} has {} entries, expected {cols}", row.len())));
            }
            if let Some(x) = row.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(Error::InvalidChannel(format!("row {a} has entry {x} outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::InvalidChannel(format!("row {a} sums to {sum}")));
            }
            p.extend_from_slice(row);
        }
        Ok(Channel { rows, cols, p })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Channel::new((0..n).map(|a| (0..n).map(|b| if a == b { 1.0 } else { 0.0 }).collect()).collect())
    }

    /// Binary symmetric channel with crossover probability `e`.
    pub fn binary_symmetric(e: f64) -> Result<Self> {
        Channel::new(vec![vec![1.0 - e, e], vec![e, 1.0 - e]])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.p[a * self.cols + b]
    }

    pub fn row(&self, a: usize) -> &[f64] {
        &self.p[a * self.cols..(a + 1) * self.cols]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|a| self.row(a).to_vec()).collect()
    }

    /// The channel of two independent uses, `P((b, d) | (a, c)) = P(b|a)·Q(d|c)`,
    /// with row-major pairing of symbols.
    pub fn kronecker(&self, other: &Channel) -> Channel {
        let (rows, cols) = (self.rows * other.rows, self.cols * other.cols);
        let mut p = Vec::with_capacity(rows * cols);
        for a in 0..self.rows {
            for c in 0..other.rows {
                for b in 0..self.cols {
                    for d in 0..other.cols {
                        p.push(self.get(a, b) * other.get(c, d));
                    }
                }
            }
        }
        Channel { rows, cols, p }
    }

    /// `I(A; B)` in bits when the input has distribution `input`.
    pub fn mutual_information(&self, input: &[f64]) -> f64 {
        let out = self.output_distribution(input);
        let mut total = 0.0;
        for (a, &pa) in input.iter().enumerate() {
            if pa > 0.0 {
                total += pa * self.divergence_from(a, &out);
            }
        }
        total
    }

    pub(crate) fn output_distribution(&self, input: &[f64]) -> Vec<f64> {
        let mut q = vec![0.0; self.cols];
        for (a, &pa) in input.iter().enumerate() {
            for (qb, &pab) in q.iter_mut().zip(self.row(a)) {
                *qb += pa * pab;
            }
        }
        q
    }

    /// `D(P(·|a) ‖ q)` in bits.
    pub(crate) fn divergence_from(&self, a: usize, q: &[f64]) -> f64 {
        let mut d = 0.0;
        for (&pab, &qb) in self.row(a).iter().zip(q) {
            if pab > 0.0 {
                d += pab * (pab / qb.max(1e-300)).log2();
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Channel::new(vec![vec![0.5, 0.6]]).is_err());
        assert!(Channel::new(vec![vec![1.5, -0.5]]).is_err());
        assert!(Channel::new(vec![vec![1.0], vec![0.5, 0.5]]).is_err());
        assert!(Channel::new(vec![]).is_err());
        assert!(Channel::new(vec![vec![0.3, 0.7]]).is_ok());
    }

    #[test]
    fn json_shape() {
        let c: Channel = serde_json::from_str(r#"{"matrix": [[0.9, 0.1], [0.1, 0.9]]}"#).unwrap();
        assert_eq!(c, Channel::binary_symmetric(0.1).unwrap());
        let back = serde_json::to_string(&c).unwrap();
        assert_eq!(back, r#"{"matrix":[[0.9,0.1],[0.1,0.9]]}"#);
        assert!(serde_json::from_str::<Channel>(r#"{"matrix": [[0.9, 0.2]]}"#).is_err());
    }

    #[test]
    fn kronecker_shape() {
        let c = Channel::binary_symmetric(0.25).unwrap().kronecker(&Channel::identity(3).unwrap());
        assert_eq!((c.rows(), c.cols()), (6, 6));
        assert_eq!(c.get(0, 0), 0.75);
        assert_eq!(c.get(0, 3), 0.25);
        assert_eq!(c.get(4, 1), 0.25);
    }

    #[test]
    fn mutual_information_of_noiseless_channel() {
        let c = Channel::identity(4).unwrap();
        assert_eq!(c.mutual_information(&[0.25; 4]), 2.0);
        assert_eq!(c.mutual_information(&[1.0, 0.0, 0.0, 0.0]), 0.0);
    }
}

//! Channel capacity by Blahut–Arimoto iteration.
//!
//! Each step evaluates, for the current input `p` and its output
//! distribution `q`, the divergences `D_a = D(P(·|a) ‖ q)`. Then
//! `Σ_a p_a D_a = I(p)` is a lower bound on capacity and `max_a D_a` an upper
//! bound. The update `p_a ← p_a·2^{D_a} / Z` is the usual posterior form
//! `p_a ∝ 2^{Σ_b P(b|a) log q(a|b)}` with the common factors cancelled.

use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};

pub const DEFAULT_EPSILON: f64 = 1e-9;
pub const DEFAULT_MAX_ITERS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub capacity: f64,
    pub input_dist: Vec<f64>,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// The state after one evaluation of the bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub iteration: usize,
    /// The input distribution the bounds were evaluated at.
    pub input: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
}

/// An unbounded iterator over Blahut–Arimoto steps, starting from the
/// uniform input.
#[derive(Debug, Clone)]
pub struct Iterations<'a> {
    channel: &'a Channel,
    p: Vec<f64>,
    iteration: usize,
}

impl<'a> Iterations<'a> {
    pub fn new(channel: &'a Channel) -> Self {
        let n = channel.rows();
        Iterations { channel, p: vec![1.0 / n as f64; n], iteration: 0 }
    }
}

impl Iterator for Iterations<'_> {
    type Item = Step;

    fn next(&mut self) -> Option<Step> {
        self.iteration += 1;
        let q = self.channel.output_distribution(&self.p);
        let d: Vec<f64> = (0..self.channel.rows()).map(|a| self.channel.divergence_from(a, &q)).collect();
        let mut lower = 0.0;
        for (&pa, &da) in self.p.iter().zip(&d) {
            lower += pa * da;
        }
        let upper = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let step = Step { iteration: self.iteration, input: self.p.clone(), lower, upper };

        // Shift exponents by the maximum to keep 2^D in range.
        let mut z = 0.0;
        for (pa, &da) in self.p.iter_mut().zip(&d) {
            *pa *= (da - upper).exp2();
            z += *pa;
        }
        for pa in &mut self.p {
            *pa /= z;
        }
        Some(step)
    }
}

pub fn blahut_arimoto(channel: &Channel, eps: f64, max_iters: usize) -> Result<CapacityResult> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    if max_iters == 0 {
        return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
    }
    let mut last = None;
    for step in Iterations::new(channel).take(max_iters) {
        let done = step.upper - step.lower <= eps;
        last = Some(step);
        if done {
            break;
        }
    }
    let step = last.expect("max_iters >= 1");
    // Rounding can leave I(p) a hair negative on useless channels.
    let lower = step.lower.max(0.0);
    let upper = step.upper.max(lower);
    Ok(CapacityResult {
        capacity: lower,
        converged: upper - lower <= eps,
        input_dist: step.input,
        lower_bound: lower,
        upper_bound: upper,
        iterations: step.iteration,
    })
}

pub fn capacity(channel: &Channel, eps: f64) -> Result<CapacityResult> {
    blahut_arimoto(channel, eps, DEFAULT_MAX_ITERS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h2(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn identity_is_exact_at_first_iteration() {
        let r = blahut_arimoto(&Channel::identity(4).unwrap(), 1e-9, 10).unwrap();
        assert_eq!(r.capacity, 2.0);
        assert_eq!(r.iterations, 1);
        assert!(r.converged);
    }

    #[test]
    fn binary_symmetric() {
        let r = capacity(&Channel::binary_symmetric(0.1).unwrap(), 1e-9).unwrap();
        assert!((r.capacity - (1.0 - h2(0.1))).abs() < 1e-9);
        assert!((r.capacity - 0.531004).abs() < 1e-6);
        assert!(r.lower_bound <= r.capacity && r.capacity <= r.upper_bound);
    }

    #[test]
    fn useless_channel() {
        let c = Channel::new(vec![vec![0.3, 0.7]; 3]).unwrap();
        let r = capacity(&c, 1e-9).unwrap();
        assert_eq!(r.capacity, 0.0);
        assert_eq!(r.iterations, 1);
        for p in r.input_dist {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let c = Channel::new(vec![vec![0.6, 0.3, 0.1], vec![0.1, 0.2, 0.7]]).unwrap();
        let r = blahut_arimoto(&c, 1e-15, 1).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn bad_arguments() {
        let c = Channel::identity(2).unwrap();
        assert!(blahut_arimoto(&c, 0.0, 10).is_err());
        assert!(blahut_arimoto(&c, 1e-9, 0).is_err());
    }

    #[test]
    fn z_channel() {
        // C = log2(1 + (1-e) e^{e/(1-e)}) for the Z-channel with crossover e.
        let e: f64 = 0.5;
        let c = Channel::new(vec![vec![1.0, 0.0], vec![e, 1.0 - e]]).unwrap();
        let s = e.powf(e / (1.0 - e));
        let expected = (1.0 + (1.0 - e) * s).log2();
        let r = capacity(&c, 1e-10).unwrap();
        assert!((r.capacity - expected).abs() < 1e-9, "{} vs {expected}", r.capacity);
    }
}

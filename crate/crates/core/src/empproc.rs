//! Empirical processes of errors and residuals and their sup statistics.
//!
//! `K_n(x) = sum_i (1{e_i <= x} - F(x))` is evaluated for whatever sample is
//! passed in: errors give `K_n`, residuals give the residual process, and a
//! plug-in scale gives the estimated-parameter versions `L_n`.

use serde::{Deserialize, Serialize};

use crate::lrd::DistributionSpec;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    ByN,
    BySigmaN1,
    BySigmaN2,
    BySqrtN,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpSupResult {
    /// `sup_x |F_n(x) - F(x)|`, the process divided by `n`.
    pub sup_value: f64,
    pub argmax_x: f64,
    pub n: usize,
    pub normalization: Normalization,
    /// `sup_value * n / normalizer`.
    pub scaled_value: f64,
}

impl EmpSupResult {
    /// Re-expresses the sup of the raw process relative to another normalizer
    /// (for example `sigma_{n,1}`).
    pub fn rescaled(mut self, normalization: Normalization, normalizer: f64) -> Self {
        self.normalization = normalization;
        self.scaled_value = self.sup_value * self.n as f64 / normalizer;
        self
    }

    pub fn rescaled_sqrt_n(self) -> Self {
        let root = (self.n as f64).sqrt();
        self.rescaled(Normalization::BySqrtN, root)
    }

    /// The raw (unnormalized) sup of the process.
    pub fn raw_sup(&self) -> f64 {
        self.sup_value * self.n as f64
    }
}

fn sorted(sample: &[f64]) -> Vec<f64> {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Exact `sup_x |F_n(x) - F(x)|` by enumerating both one-sided limits at every
/// distinct order statistic. Tied values form a single jump of height `k/n`.
pub fn ks_sup(sample: &[f64], dist: &DistributionSpec) -> Result<EmpSupResult> {
    if sample.is_empty() {
        return Err(Error::TooFew { min: 1, got: 0 });
    }
    let s = sorted(sample);
    let n = s.len();
    let nf = n as f64;
    let mut best = -1.0;
    let mut arg = s[0];
    let mut i = 0;
    while i < n {
        let v = s[i];
        let mut j = i + 1;
        while j < n && s[j] == v {
            j += 1;
        }
        let f = dist.cdf(v);
        let d = (j as f64 / nf - f).abs().max((f - i as f64 / nf).abs());
        if d > best {
            best = d;
            arg = v;
        }
        i = j;
    }
    Ok(EmpSupResult {
        sup_value: best,
        argmax_x: arg,
        n,
        normalization: Normalization::ByN,
        scaled_value: best,
    })
}

/// `max(|F_n(x) - F(x)|, |F_n(x-) - F(x)|)` at a single point.
pub fn sup_at(sample: &[f64], dist: &DistributionSpec, x: f64) -> f64 {
    let nf = sample.len() as f64;
    let le = sample.iter().filter(|&&v| v <= x).count() as f64;
    let lt = sample.iter().filter(|&&v| v < x).count() as f64;
    let f = dist.cdf(x);
    (le / nf - f).abs().max((lt / nf - f).abs())
}

/// The functional `H` defining `theta_hat = (1/n) sum H(e_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaFunctional {
    /// `H(u) = u^2`, a variance estimate.
    Square,
}

pub fn estimate_theta(residuals: &[f64], h: ThetaFunctional) -> Result<f64> {
    if residuals.len() < 2 {
        return Err(Error::TooFew {
            min: 2,
            got: residuals.len(),
        });
    }
    let n = residuals.len() as f64;
    match h {
        ThetaFunctional::Square => Ok(residuals.iter().map(|r| r * r).sum::<f64>() / n),
    }
}

/// Scale estimate `sqrt((1/n) sum e_i^2)`; zero is rejected.
pub fn estimate_scale(sample: &[f64]) -> Result<f64> {
    let var = estimate_theta(sample, ThetaFunctional::Square)?;
    let scale = var.sqrt();
    if scale > 0.0 {
        Ok(scale)
    } else {
        Err(Error::NonPositive {
            name: "estimated scale",
            value: scale,
        })
    }
}

/// Sup statistic against `F(.; theta_hat)` for the Gaussian scale family.
pub fn l_sup(sample: &[f64], theta_hat: f64) -> Result<EmpSupResult> {
    let dist = DistributionSpec::gaussian(theta_hat)?;
    ks_sup(sample, &dist)
}

/// `sum_i (1{s_i <= x} - F(x))`.
pub fn eval_process(sample: &[f64], dist: &DistributionSpec, x: f64) -> f64 {
    let count = sample.iter().filter(|&&v| v <= x).count() as f64;
    count - sample.len() as f64 * dist.cdf(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrd::std_normal_cdf;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn std() -> DistributionSpec {
        DistributionSpec::standard()
    }

    #[test]
    fn single_point_at_median() {
        let r = ks_sup(&[0.0], &std()).unwrap();
        assert_eq!(r.sup_value, 0.5);
        assert_eq!(r.argmax_x, 0.0);
    }

    #[test]
    fn three_point_sample() {
        // Six candidates: |1/3 - P(-1)|, P(-1), |2/3 - 1/2|, |1/3 - 1/2|, 1 - P(1), |2/3 - P(1)|.
        let p = std_normal_cdf(-1.0);
        let candidates = [1.0 / 3.0 - p, p, 1.0 / 6.0, 1.0 / 6.0, p, 1.0 / 3.0 - p];
        let expected = candidates.iter().cloned().fold(0.0, f64::max);
        let r = ks_sup(&[1.0, -1.0, 0.0], &std()).unwrap();
        assert_abs_diff_eq!(r.sup_value, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(r.sup_value, 0.17468, epsilon = 1e-5);
        // -1 and 1 tie up to rounding.
        assert!(r.argmax_x == -1.0 || r.argmax_x == 1.0);
        assert_abs_diff_eq!(
            sup_at(&[1.0, -1.0, 0.0], &std(), r.argmax_x),
            r.sup_value,
            epsilon = 1e-15
        );
    }

    #[test]
    fn ties_form_one_jump() {
        let r = ks_sup(&[0.0, 0.0], &std()).unwrap();
        assert_eq!(r.sup_value, 0.5);
        let r = ks_sup(&[5.0, 5.0, 5.0, -5.0], &std()).unwrap();
        assert_abs_diff_eq!(r.sup_value, 0.75, epsilon = 1e-6);
    }

    #[test]
    fn empty_sample_rejected() {
        assert!(ks_sup(&[], &std()).is_err());
    }

    #[test]
    fn theta_estimates() {
        assert_eq!(
            estimate_theta(&[1.0, -1.0], ThetaFunctional::Square).unwrap(),
            1.0
        );
        assert_eq!(
            estimate_theta(&[0.0, 0.0, 3.0, -3.0], ThetaFunctional::Square).unwrap(),
            4.5
        );
        assert!(estimate_theta(&[1.0], ThetaFunctional::Square).is_err());
        assert!(estimate_scale(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn l_sup_identities() {
        let s = [-1.3, -0.2, 0.4, 0.9, 2.2];
        assert_eq!(l_sup(&s, 1.0).unwrap(), ks_sup(&s, &std()).unwrap());
        let doubled: Vec<f64> = s.iter().map(|v| 2.0 * v).collect();
        let a = l_sup(&doubled, 2.0).unwrap().sup_value;
        let b = ks_sup(&s, &std()).unwrap().sup_value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        assert!(l_sup(&s, 0.0).is_err());
    }

    #[test]
    fn process_values() {
        let s = [-1.0, 0.0, 1.0];
        assert_abs_diff_eq!(eval_process(&s, &std(), 0.0), 0.5, epsilon = 1e-15);
        let x = -3.0;
        assert_abs_diff_eq!(
            eval_process(&s, &std(), x),
            -3.0 * std_normal_cdf(x),
            epsilon = 1e-15
        );
        let x = 2.5;
        assert_abs_diff_eq!(
            eval_process(&s, &std(), x),
            3.0 * (1.0 - std_normal_cdf(x)),
            epsilon = 1e-14
        );
    }

    #[test]
    fn rescaling_is_consistent() {
        let r = ks_sup(&[-0.3, 0.1, 0.7, 1.9], &std()).unwrap();
        let scaled = r.rescaled(Normalization::BySigmaN1, 3.0);
        assert_abs_diff_eq!(
            scaled.scaled_value,
            r.sup_value * 4.0 / 3.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            r.rescaled_sqrt_n().scaled_value,
            r.sup_value * 2.0,
            epsilon = 1e-15
        );
    }

    proptest! {
        #[test]
        fn matches_dense_grid(sample in prop::collection::vec(-3.0f64..3.0, 1..200)) {
            let r = ks_sup(&sample, &std()).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.sup_value));
            let mut s = sample.clone();
            s.sort_by(f64::total_cmp);
            let steps = 100_000;
            let (lo, hi) = (-8.0, 8.0);
            let mut dense: f64 = 0.0;
            let mut k = 0;
            for i in 0..=steps {
                let x = lo + (hi - lo) * i as f64 / steps as f64;
                while k < s.len() && s[k] <= x { k += 1; }
                dense = dense.max((k as f64 / s.len() as f64 - std_normal_cdf(x)).abs());
            }
            // The grid approaches the sup from below, up to the cdf's
            // variation over one grid cell (density bound 0.4).
            let cell = (hi - lo) / steps as f64;
            prop_assert!(dense <= r.sup_value + 1e-12);
            prop_assert!(r.sup_value - dense <= 0.4 * cell + 1e-12);
            prop_assert!((sup_at(&sample, &std(), r.argmax_x) - r.sup_value).abs() < 1e-12);
        }

        #[test]
        fn permutation_invariant(mut sample in prop::collection::vec(-3.0f64..3.0, 1..50), seed in 0u64..1000) {
            let a = ks_sup(&sample, &std()).unwrap();
            let len = sample.len();
            let mut state = seed;
            for i in (1..len).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                sample.swap(i, j);
            }
            prop_assert_eq!(a, ks_sup(&sample, &std()).unwrap());
        }
    }
}

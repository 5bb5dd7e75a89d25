//! Monte Carlo check of the stochastic triangle inequality.

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::bdf::{evaluate, sample_ball, volume, BdfExpr};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleRow {
    pub epsilon: f64,
    /// Estimate of `Pr[kappa(x1 - x2) <= 2 eps]` for `x1, x2` uniform in the
    /// `eps`-ball.
    pub probability: f64,
    pub samples: usize,
    /// `V(eps) / V(2 eps)`, exact.
    pub volume_ratio: f64,
}

/// Both quantities must stay bounded away from zero as `eps -> 0`.
pub fn stochastic_triangle_check(
    expr: &BdfExpr,
    epsilons: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<TriangleRow>> {
    let d = expr.validate()?;
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut x1, mut x2, mut diff) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    epsilons
        .iter()
        .map(|&eps| {
            if !(eps > 0.0 && eps <= 0.25) {
                return Err(Error::InvalidParameter(format!(
                    "epsilon = {eps} must lie in (0, 1/4]"
                )));
            }
            let mut hits = 0usize;
            for _ in 0..samples {
                sample_ball(expr, eps, &mut rng, &mut x1);
                sample_ball(expr, eps, &mut rng, &mut x2);
                for i in 0..d {
                    diff[i] = x1[i] - x2[i];
                }
                if evaluate(expr, &diff)? <= 2.0 * eps {
                    hits += 1;
                }
            }
            Ok(TriangleRow {
                epsilon: eps,
                probability: if samples == 0 {
                    f64::NAN
                } else {
                    hits as f64 / samples as f64
                },
                samples,
                volume_ratio: volume(expr, eps)? / volume(expr, 2.0 * eps)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdf::leading_term;
    use crate::parse;

    #[test]
    fn leaf_ratio_is_one_half() {
        let rows = stochastic_triangle_check(&parse("x1").unwrap(), &[0.25, 0.1, 1e-3], 1000, 1).unwrap();
        for r in rows {
            assert!((r.volume_ratio - 0.5).abs() < 1e-12);
            // the leaf ball is an interval: the difference always stays within 2 eps
            assert_eq!(r.probability, 1.0);
        }
    }

    #[test]
    fn ratio_tends_to_two_to_minus_depth() {
        let e = parse("max(x1,min(x2,x3))").unwrap();
        let rows = stochastic_triangle_check(&e, &[1e-6], 0, 0).unwrap();
        let (_, d) = leading_term(&e);
        assert!((rows[0].volume_ratio - 2f64.powi(-(d as i32))).abs() < 1e-5);
    }

    #[test]
    fn mcd_probability_bounded_below() {
        let rows = stochastic_triangle_check(&parse("min(x1,x2)").unwrap(), &[1e-3], 100_000, 7).unwrap();
        assert!(rows[0].probability > 0.2, "{:?}", rows[0]);
    }

    #[test]
    fn epsilon_range_is_enforced() {
        let e = parse("x1").unwrap();
        assert!(stochastic_triangle_check(&e, &[0.3], 10, 0).is_err());
        assert!(stochastic_triangle_check(&e, &[0.0], 10, 0).is_err());
    }
}

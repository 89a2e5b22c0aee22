//! LRU miss-ratio analysis.
//!
//! Move-to-front is LRU with a cache as large as the catalog, so the page
//! default (miss) probability of an LRU cache holding `k` of `n` files is
//! `P(S_n >= k)`. With the cache sized proportionally, `k = alpha n`, the
//! limit law gives the asymptotic miss probability `1 - F(alpha)` for
//! `alpha` below `1 - p0` and zero beyond.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limit_law::LimitLaw;
use crate::mtf_sim::{self, RequestProbabilities, SampleMethod};

/// Where a miss curve came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveSource {
    Asymptotic,
    Empirical,
}

/// Pairs of (cache fraction alpha, miss probability pi).
#[derive(Debug, Clone, Serialize)]
pub struct MissCurve {
    pub points: Vec<(f64, f64)>,
    pub source: CurveSource,
}

impl MissCurve {
    /// CSV with an `alpha,pi` header, six significant digits.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "alpha,pi")?;
        for &(alpha, pi) in &self.points {
            writeln!(out, "{},{}", format_sig6(alpha), format_sig6(pi))?;
        }
        Ok(())
    }

    /// JSON array of `[alpha, pi]` pairs.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.points).expect("pairs serialize")
    }
}

/// Positional format with six significant digits.
fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (5 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Asymptotic miss probability for a cache holding fraction `alpha` of the
/// catalog: the survival function of the limit law.
pub fn page_default_asymptotic(law: &LimitLaw, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!(
            "cache fraction alpha must lie in [0, 1], got {alpha}"
        )));
    }
    Ok(law.survival(alpha))
}

/// Empirical miss probability for a cache of `k` items: the fraction of `m`
/// stationary search costs at least `k`.
pub fn page_default_empirical(
    p: &RequestProbabilities,
    k: usize,
    m: usize,
    seed: u64,
) -> Result<f64> {
    if k > p.len() {
        return Err(Error::Domain(format!(
            "cache size k must lie in [0, n] = [0, {}], got {k}",
            p.len()
        )));
    }
    let samples = mtf_sim::sample_search_costs(p, m, seed, SampleMethod::Bernoulli)?;
    let misses = samples.costs.iter().filter(|&&c| (c as usize) >= k).count();
    Ok(misses as f64 / m as f64)
}

/// Asymptotic miss curve on a uniform `alpha` grid over [0, 1], endpoints
/// included.
pub fn miss_curve(law: &LimitLaw, grid_size: usize) -> Result<MissCurve> {
    if grid_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "miss-curve grid needs at least 2 points, got {grid_size}"
        )));
    }
    let points = (0..grid_size)
        .map(|i| {
            let alpha = i as f64 / (grid_size - 1) as f64;
            page_default_asymptotic(law, alpha).map(|pi| (alpha, pi))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MissCurve {
        points,
        source: CurveSource::Asymptotic,
    })
}

/// Smallest cache fraction whose asymptotic miss probability is at most
/// `pi_target`, by bisection on the nonincreasing survival function.
pub fn cache_size_for_target(law: &LimitLaw, pi_target: f64) -> Result<f64> {
    if !(0.0 < pi_target && pi_target <= 1.0) {
        return Err(Error::Domain(format!(
            "miss-probability target must lie in (0, 1], got {pi_target}"
        )));
    }
    if page_default_asymptotic(law, 0.0)? <= pi_target {
        return Ok(0.0);
    }
    let mut lo = 0.0f64;
    let mut hi = law.support_end();
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if page_default_asymptotic(law, mid)? <= pi_target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightFamily;
    use approx::assert_relative_eq;

    fn dirac_law() -> LimitLaw {
        LimitLaw::new(WeightFamily::dirac())
    }

    fn gamma1_law() -> LimitLaw {
        LimitLaw::new(WeightFamily::gamma(1.0).unwrap())
    }

    #[test]
    fn asymptotic_examples() {
        assert_relative_eq!(
            page_default_asymptotic(&dirac_law(), 0.3).unwrap(),
            0.7,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            page_default_asymptotic(&gamma1_law(), 0.5).unwrap(),
            0.25,
            epsilon = 1e-12
        );
        assert_eq!(page_default_asymptotic(&dirac_law(), 1.0).unwrap(), 0.0);
        assert_eq!(page_default_asymptotic(&dirac_law(), 0.0).unwrap(), 1.0);
        assert!(page_default_asymptotic(&dirac_law(), 1.2).is_err());
    }

    #[test]
    fn survival_is_zero_past_support() {
        let law = LimitLaw::new(WeightFamily::geometric(0.4).unwrap());
        // Support ends at 1 - p = 0.6.
        assert_eq!(page_default_asymptotic(&law, 0.7).unwrap(), 0.0);
        assert!(page_default_asymptotic(&law, 0.59).unwrap() > 0.0);
    }

    #[test]
    fn empirical_trivial_cases() {
        let p = RequestProbabilities::from_weights(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(page_default_empirical(&p, 0, 500, 3).unwrap(), 1.0);
        assert_eq!(page_default_empirical(&p, 3, 500, 3).unwrap(), 0.0);
        assert!(page_default_empirical(&p, 4, 500, 3).is_err());
    }

    #[test]
    fn empirical_matches_bruteforce_two_items() {
        let p = RequestProbabilities::from_weights(&[1.0, 1.0]).unwrap();
        let m = 40_000;
        let pi = page_default_empirical(&p, 1, m, 7).unwrap();
        let band = 3.0 * (0.25f64 / m as f64).sqrt();
        assert!((pi - 0.5).abs() <= band, "{pi}");
    }

    #[test]
    fn miss_curve_examples() {
        let c = miss_curve(&dirac_law(), 3).unwrap();
        assert_eq!(c.points.len(), 3);
        assert_eq!(c.points[0], (0.0, 1.0));
        assert_relative_eq!(c.points[1].1, 0.5, epsilon = 1e-12);
        assert_eq!(c.points[2], (1.0, 0.0));

        let c = miss_curve(&gamma1_law(), 3).unwrap();
        assert_relative_eq!(c.points[1].1, 0.25, epsilon = 1e-12);
        assert_eq!(c.points[2].1, 0.0);

        assert!(miss_curve(&dirac_law(), 1).is_err());
    }

    #[test]
    fn miss_curve_is_monotone_for_builtins() {
        for fam in [
            WeightFamily::dirac(),
            WeightFamily::gamma(0.5).unwrap(),
            WeightFamily::geometric(0.3).unwrap(),
            WeightFamily::poisson(2.0).unwrap(),
        ] {
            let law = LimitLaw::new(fam);
            let c = miss_curve(&law, 200).unwrap();
            for w in c.points.windows(2) {
                assert!(w[1].1 <= w[0].1 + 1e-12, "{:?}", w);
            }
        }
    }

    #[test]
    fn sizing_examples() {
        assert_relative_eq!(
            cache_size_for_target(&dirac_law(), 0.3).unwrap(),
            0.7,
            epsilon = 1e-9
        );
        assert_relative_eq!(
            cache_size_for_target(&gamma1_law(), 0.25).unwrap(),
            0.5,
            epsilon = 1e-9
        );
        assert_eq!(cache_size_for_target(&dirac_law(), 1.0).unwrap(), 0.0);
        assert!(cache_size_for_target(&dirac_law(), 0.0).is_err());
    }

    #[test]
    fn sizing_round_trips_through_survival() {
        for law in [dirac_law(), gamma1_law()] {
            for i in 1..10 {
                let alpha = i as f64 / 10.0 * law.support_end();
                let pi = page_default_asymptotic(&law, alpha).unwrap();
                let back = cache_size_for_target(&law, pi).unwrap();
                assert!((back - alpha).abs() <= 1e-8, "alpha {alpha}: {back}");
            }
        }
    }

    #[test]
    fn csv_uses_six_significant_digits() {
        let curve = MissCurve {
            points: vec![(0.0, 1.0), (0.123456789, 0.000123456789)],
            source: CurveSource::Asymptotic,
        };
        let mut buf = Vec::new();
        curve.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "alpha,pi\n0,1.00000\n0.123457,0.000123457\n");
    }

    #[test]
    fn json_is_array_of_pairs() {
        let curve = miss_curve(&dirac_law(), 3).unwrap();
        let json = curve.to_json();
        assert_eq!(json, "[[0.0,1.0],[0.5,0.5],[1.0,0.0]]");
    }
}

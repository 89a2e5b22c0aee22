//! Finite-catalog machinery: move-to-front dynamics, exact stationary
//! search-cost sampling, a factorial brute-force oracle, and the
//! finite-n transform quadrature.
//!
//! The stationary list order under move-to-front is the size-biased
//! permutation of the request probabilities: scanning the request history
//! backward from the present, the first occurrence of each item gives its
//! rank. Both samplers below draw from that law exactly — no burn-in, no
//! truncation bias.

use std::io::Write;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limit_law::LimitLaw;
use crate::quad::{self, QuadOptions};
use crate::rng::stream_rng;
use crate::weights::WeightFamily;

/// Normalized request probabilities on the simplex.
#[derive(Debug, Clone)]
pub struct RequestProbabilities {
    p: Vec<f64>,
    positive_count: usize,
}

impl RequestProbabilities {
    /// Normalize nonnegative weights into request probabilities.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Degenerate("empty weight vector".into()));
        }
        for &w in weights {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "weights must be finite and nonnegative, got {w}"
                )));
            }
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Degenerate(
                "all-zero weight vector: request distribution undefined".into(),
            ));
        }
        let p: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let positive_count = p.iter().filter(|&&x| x > 0.0).count();
        Ok(RequestProbabilities { p, positive_count })
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.positive_count
    }
}

/// Move-to-front list state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MtfState {
    order: Vec<u32>,
}

impl MtfState {
    /// List in index order, item 0 at the front.
    pub fn identity(n: usize) -> Self {
        MtfState {
            order: (0..n as u32).collect(),
        }
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn position(&self, item: u32) -> Option<usize> {
        self.order.iter().position(|&x| x == item)
    }

    /// Serve a request: move `item` to the front, preserving the relative
    /// order of everything else.
    pub fn step(&mut self, item: u32) -> Result<()> {
        match self.position(item) {
            Some(k) => {
                self.order[..=k].rotate_right(1);
                Ok(())
            }
            None => Err(Error::Domain(format!("item {item} not in the list"))),
        }
    }
}

/// How stationary search costs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMethod {
    /// Replay the request history backward until every positive-probability
    /// item has occurred; first occurrences give the stationary order, then
    /// one more request is looked up in it. Exact, coupon-collector cost.
    Chain,
    /// Draw the requested item, then its backward recurrence time
    /// `T ~ Exp(p_i)`; every other item sits ahead of it independently with
    /// probability `1 - exp(-p_j T)`. Exact, linear cost.
    Bernoulli,
}

impl std::fmt::Display for SampleMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SampleMethod::Chain => write!(f, "chain"),
            SampleMethod::Bernoulli => write!(f, "bernoulli"),
        }
    }
}

impl std::str::FromStr for SampleMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" => Ok(SampleMethod::Chain),
            "bernoulli" => Ok(SampleMethod::Bernoulli),
            other => Err(Error::InvalidParameter(format!(
                "unknown sampling method '{other}' (expected chain|bernoulli)"
            ))),
        }
    }
}

/// Stationary search costs, one independent replica per entry.
#[derive(Debug, Clone)]
pub struct SearchCostSamples {
    pub costs: Vec<u32>,
    /// Catalog size the costs were drawn against.
    pub n: usize,
    pub seed: u64,
    pub method: SampleMethod,
}

impl SearchCostSamples {
    /// Costs scaled to `[0, 1)` by the catalog size.
    pub fn scaled(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.costs.iter().map(|&c| c as f64 / n).collect()
    }

    pub fn mean(&self) -> f64 {
        if self.costs.is_empty() {
            return f64::NAN;
        }
        self.costs.iter().map(|&c| c as f64).sum::<f64>() / self.costs.len() as f64
    }

    /// One cost per line under a `cost` header.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "cost")?;
        for c in &self.costs {
            writeln!(out, "{c}")?;
        }
        Ok(())
    }
}

// Cumulative table for categorical draws. Zero-probability cells collapse to
// their predecessor's cumulative value and can never be selected.
struct Categorical {
    cum: Vec<f64>,
    last_positive: usize,
}

impl Categorical {
    fn new(p: &[f64]) -> Self {
        let mut acc = 0.0;
        let cum: Vec<f64> = p
            .iter()
            .map(|&x| {
                acc += x;
                acc
            })
            .collect();
        let last_positive = p.iter().rposition(|&x| x > 0.0).expect("positive entry");
        Categorical { cum, last_positive }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let u: f64 = rng.random();
        let idx = self.cum.partition_point(|&c| c <= u);
        idx.min(self.last_positive)
    }
}

/// `m` iid draws from the stationary search-cost law for `p`.
///
/// Replica `i` uses random stream `(seed, i)`, so the result is bit-identical
/// for a fixed seed regardless of thread count.
pub fn sample_search_costs(
    p: &RequestProbabilities,
    m: usize,
    seed: u64,
    method: SampleMethod,
) -> Result<SearchCostSamples> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "sample count m must be at least 1".into(),
        ));
    }
    let cat = Categorical::new(p.probs());
    let costs: Vec<u32> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            match method {
                SampleMethod::Chain => chain_sample(p, &cat, &mut rng),
                SampleMethod::Bernoulli => bernoulli_sample(p.probs(), &cat, &mut rng),
            }
        })
        .collect();
    Ok(SearchCostSamples {
        costs,
        n: p.len(),
        seed,
        method,
    })
}

// Backward replay: enumerate past requests (most recent first) until every
// positive item has occurred. The first occurrence of an item is its
// stationary list position; never-requested zero-probability items trail in
// their initial relative order and are never looked up.
fn chain_sample(p: &RequestProbabilities, cat: &Categorical, rng: &mut ChaCha8Rng) -> u32 {
    let n = p.len();
    let mut rank = vec![u32::MAX; n];
    let mut found = 0u32;
    let target = p.positive_count() as u32;
    while found < target {
        let item = cat.draw(rng);
        if rank[item] == u32::MAX {
            rank[item] = found;
            found += 1;
        }
    }
    let next = cat.draw(rng);
    rank[next]
}

// Requested item i was last requested T ~ Exp(p_i) ago; item j is ahead of it
// exactly when j occurred within that window, independently across j given T.
fn bernoulli_sample(p: &[f64], cat: &Categorical, rng: &mut ChaCha8Rng) -> u32 {
    let i = cat.draw(rng);
    let t = -(1.0 - rng.random::<f64>()).ln() / p[i];
    let mut cost = 0u32;
    for (j, &pj) in p.iter().enumerate() {
        if j == i || pj <= 0.0 {
            continue;
        }
        let ahead = -(-pj * t).exp_m1(); // 1 - exp(-p_j t)
        if rng.random::<f64>() < ahead {
            cost += 1;
        }
    }
    cost
}

/// Exact stationary search-cost pmf by enumerating all size-biased orders of
/// the positive-probability items. Factorial work: refused above n = 8.
pub fn stationary_pmf_bruteforce(p: &RequestProbabilities) -> Result<Vec<f64>> {
    let n = p.len();
    if n > 8 {
        return Err(Error::SizeLimit(format!(
            "brute-force enumeration is limited to n <= 8, got {n}"
        )));
    }
    let probs = p.probs();
    let mut positives: Vec<usize> = (0..n).filter(|&i| probs[i] > 0.0).collect();
    let mut pmf = vec![0.0; n];
    sbp_recurse(&mut positives, 1.0, 1.0, 0, probs, &mut pmf);
    Ok(pmf)
}

// At each placement the summed size-biased probability of all completions is
// the prefix probability itself, so P(S = position) accumulates in place.
fn sbp_recurse(
    available: &mut Vec<usize>,
    prefix_prob: f64,
    remaining_mass: f64,
    position: usize,
    p: &[f64],
    pmf: &mut [f64],
) {
    for idx in 0..available.len() {
        let item = available[idx];
        let prob = prefix_prob * p[item] / remaining_mass;
        pmf[position] += prob * p[item];
        available.swap_remove(idx);
        sbp_recurse(
            available,
            prob,
            remaining_mass - p[item],
            position + 1,
            p,
            pmf,
        );
        available.push(item);
        let last = available.len() - 1;
        available.swap(idx, last);
    }
}

/// Laplace transform of the finite-n stationary search cost, by nested
/// quadrature of
///
/// ```text
/// n ∫_0^∞ ∫_t^∞ phi''(r) [phi(r) + e^{-s} (phi(r-t) - phi(r))]^{n-1} dr dt
/// ```
///
/// with `u = r - t` substituted in the inner integral. The bracketed base is
/// a convex combination bounded by 1 analytically; it is clamped to [0, 1]
/// before exponentiation to keep floating-point drift out of the power.
pub fn laplace_sn_quadrature(family: &WeightFamily, n: u32, s: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "catalog size n must be >= 1".into(),
        ));
    }
    if n > 64 {
        return Err(Error::SizeLimit(format!(
            "finite-n transform quadrature is limited to n <= 64 \
             (the integrand conditioning degrades), got {n}"
        )));
    }
    if !(s >= 0.0) {
        return Err(Error::Domain(format!(
            "transform argument must satisfy s >= 0, got {s}"
        )));
    }

    let es = (-s).exp();
    let nf = n as f64;
    // Truncating both axes where phi - p0 and -phi' drop below eps bounds the
    // discarded mass by 2 n eps.
    let cutoff = family.tail_cutoff(1e-8 / nf)?;
    let exponent = (n - 1) as i32;

    let inner_opt = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-9,
        max_intervals: 500,
    };
    let outer_opt = QuadOptions {
        abs_tol: 5e-8 / nf,
        rel_tol: 1e-8,
        max_intervals: 1500,
    };

    let phi = |r: f64| family.phi(r).unwrap_or(f64::NAN);
    let phi2 = |r: f64| family.phi_second(r).unwrap_or(f64::NAN);

    let outer = quad::integrate(
        |t| {
            let inner = quad::integrate(
                |u| {
                    let phi_r = phi(u + t);
                    let base = (phi_r + es * (phi(u) - phi_r)).clamp(0.0, 1.0);
                    phi2(u + t) * base.powi(exponent)
                },
                0.0,
                cutoff,
                &inner_opt,
            );
            inner.map(|r| r.value).unwrap_or(f64::NAN)
        },
        0.0,
        cutoff,
        &outer_opt,
    )?;

    let value = nf * outer.value;
    if !value.is_finite() {
        return Err(Error::NonConvergence(format!(
            "finite-n transform quadrature produced a non-finite value \
             for {family} at n={n}, s={s}"
        )));
    }
    Ok(value)
}

/// Two-sided Kolmogorov-Smirnov distance between the scaled costs and the
/// limit law's CDF.
pub fn ks_statistic(samples: &SearchCostSamples, law: &LimitLaw) -> Result<f64> {
    if samples.costs.is_empty() {
        return Err(Error::Degenerate("no samples".into()));
    }
    let mut scaled = samples.scaled();
    scaled.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    let m = scaled.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in scaled.iter().enumerate() {
        let f = law.cdf(x);
        d = d.max((i + 1) as f64 / m - f).max(f - i as f64 / m);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn request_probabilities_normalize() {
        let p = RequestProbabilities::from_weights(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(p.probs(), &[0.25, 0.25, 0.25, 0.25]);
        let p = RequestProbabilities::from_weights(&[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(p.probs(), &[0.5, 0.25, 0.25]);
        assert_eq!(p.positive_count(), 3);
    }

    #[test]
    fn request_probabilities_reject_bad_input() {
        assert!(RequestProbabilities::from_weights(&[0.0, 0.0, 0.0]).is_err());
        assert!(RequestProbabilities::from_weights(&[]).is_err());
        assert!(RequestProbabilities::from_weights(&[1.0, -0.5]).is_err());
        assert!(RequestProbabilities::from_weights(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn probabilities_sum_to_one() {
        let p = RequestProbabilities::from_weights(&[0.3, 2.7, 0.0, 1.1]).unwrap();
        assert!((p.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        assert_eq!(p.positive_count(), 3);
    }

    #[test]
    fn mtf_step_moves_item_to_front() {
        let mut state = MtfState::identity(3); // [0, 1, 2]
        state.step(2).unwrap();
        assert_eq!(state.order(), &[2, 0, 1]);
        state.step(2).unwrap(); // front item is a fixed point
        assert_eq!(state.order(), &[2, 0, 1]);
        assert!(state.step(5).is_err());
    }

    proptest! {
        #[test]
        fn mtf_step_preserves_permutation(n in 1usize..8, requests in proptest::collection::vec(0u32..8, 0..64)) {
            let mut state = MtfState::identity(n);
            for &r in &requests {
                let item = r % n as u32;
                let before = state.order().to_vec();
                state.step(item).unwrap();
                // Still a permutation.
                let mut sorted = state.order().to_vec();
                sorted.sort_unstable();
                prop_assert_eq!(sorted, (0..n as u32).collect::<Vec<_>>());
                // Requested item in front, everything else in prior order.
                prop_assert_eq!(state.order()[0], item);
                let rest: Vec<u32> = state.order()[1..].to_vec();
                let expected: Vec<u32> = before.into_iter().filter(|&x| x != item).collect();
                prop_assert_eq!(rest, expected);
            }
        }
    }

    #[test]
    fn bruteforce_pmf_symmetric_cases() {
        let p = RequestProbabilities::from_weights(&[1.0, 1.0]).unwrap();
        let pmf = stationary_pmf_bruteforce(&p).unwrap();
        assert_relative_eq!(pmf[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(pmf[1], 0.5, epsilon = 1e-12);

        let p = RequestProbabilities::from_weights(&[1.0, 1.0, 1.0]).unwrap();
        let pmf = stationary_pmf_bruteforce(&p).unwrap();
        for &mass in &pmf {
            assert_relative_eq!(mass, 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bruteforce_pmf_weighted_two_items() {
        let p = RequestProbabilities::from_weights(&[2.0, 1.0]).unwrap();
        let pmf = stationary_pmf_bruteforce(&p).unwrap();
        assert_relative_eq!(pmf[0], 5.0 / 9.0, epsilon = 1e-12);
        assert_relative_eq!(pmf[1], 4.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn bruteforce_pmf_sums_to_one() {
        let p = RequestProbabilities::from_weights(&[0.1, 0.4, 0.2, 0.05, 0.25]).unwrap();
        let pmf = stationary_pmf_bruteforce(&p).unwrap();
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bruteforce_pmf_zero_weight_items_at_bottom() {
        let p = RequestProbabilities::from_weights(&[0.5, 0.0, 0.5]).unwrap();
        let pmf = stationary_pmf_bruteforce(&p).unwrap();
        assert_relative_eq!(pmf[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(pmf[1], 0.5, epsilon = 1e-12);
        assert_eq!(pmf[2], 0.0);
    }

    #[test]
    fn bruteforce_pmf_size_limit() {
        let p = RequestProbabilities::from_weights(&[1.0; 9]).unwrap();
        assert!(matches!(
            stationary_pmf_bruteforce(&p),
            Err(Error::SizeLimit(_))
        ));
    }

    #[test]
    fn single_item_costs_are_zero() {
        let p = RequestProbabilities::from_weights(&[1.0]).unwrap();
        for method in [SampleMethod::Chain, SampleMethod::Bernoulli] {
            let s = sample_search_costs(&p, 10, 1, method).unwrap();
            assert!(s.costs.iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn lone_positive_item_costs_are_zero() {
        let p = RequestProbabilities::from_weights(&[1.0, 0.0, 0.0]).unwrap();
        for method in [SampleMethod::Chain, SampleMethod::Bernoulli] {
            let s = sample_search_costs(&p, 50, 2, method).unwrap();
            assert!(s.costs.iter().all(|&c| c == 0), "{method}");
        }
    }

    #[test]
    fn two_item_mean_matches_symmetry() {
        let p = RequestProbabilities::from_weights(&[1.0, 1.0]).unwrap();
        let m = 20_000;
        let band = 3.0 * (0.25f64 / m as f64).sqrt();
        for method in [SampleMethod::Chain, SampleMethod::Bernoulli] {
            let s = sample_search_costs(&p, m, 11, method).unwrap();
            assert!((s.mean() - 0.5).abs() <= band, "{method}: {}", s.mean());
        }
    }

    #[test]
    fn sampling_is_deterministic_and_seed_sensitive() {
        let p = RequestProbabilities::from_weights(&[3.0, 1.0, 2.0]).unwrap();
        let a = sample_search_costs(&p, 100, 5, SampleMethod::Chain).unwrap();
        let b = sample_search_costs(&p, 100, 5, SampleMethod::Chain).unwrap();
        assert_eq!(a.costs, b.costs);
        let c = sample_search_costs(&p, 100, 6, SampleMethod::Chain).unwrap();
        assert_ne!(a.costs, c.costs);
    }

    #[test]
    fn empirical_pmf_matches_bruteforce_spot_check() {
        let p = RequestProbabilities::from_weights(&[0.5, 0.3, 0.2]).unwrap();
        let exact = stationary_pmf_bruteforce(&p).unwrap();
        let m = 50_000;
        for method in [SampleMethod::Chain, SampleMethod::Bernoulli] {
            let s = sample_search_costs(&p, m, 17, method).unwrap();
            let mut counts = vec![0usize; p.len()];
            for &c in &s.costs {
                counts[c as usize] += 1;
            }
            for k in 0..p.len() {
                let emp = counts[k] as f64 / m as f64;
                let se = (exact[k] * (1.0 - exact[k]) / m as f64).sqrt();
                assert!(
                    (emp - exact[k]).abs() <= 4.0 * se,
                    "{method} cell {k}: {emp} vs {} (se {se})",
                    exact[k]
                );
            }
        }
    }

    #[test]
    fn forward_chain_with_burn_in_agrees_with_oracle() {
        // Drives the actual MtfState dynamics to near-stationarity and
        // compares against the enumeration: ties the chain machinery to the
        // size-biased law it is supposed to realize.
        let p = RequestProbabilities::from_weights(&[0.5, 0.3, 0.2]).unwrap();
        let exact = stationary_pmf_bruteforce(&p).unwrap();
        let cat = Categorical::new(p.probs());
        let m = 30_000;
        let mut counts = vec![0usize; p.len()];
        for rep in 0..m {
            let mut rng = stream_rng(23, rep as u64);
            let mut state = MtfState::identity(p.len());
            for _ in 0..200 {
                state.step(cat.draw(&mut rng) as u32).unwrap();
            }
            let next = cat.draw(&mut rng) as u32;
            counts[state.position(next).unwrap()] += 1;
        }
        for k in 0..p.len() {
            let emp = counts[k] as f64 / m as f64;
            let se = (exact[k] * (1.0 - exact[k]) / m as f64).sqrt();
            assert!(
                (emp - exact[k]).abs() <= 4.0 * se,
                "cell {k}: {emp} vs {} (se {se})",
                exact[k]
            );
        }
    }

    #[test]
    fn laplace_sn_single_item_is_constant_one() {
        for s in [0.0, 0.5, 1.0] {
            let v = laplace_sn_quadrature(&WeightFamily::dirac(), 1, s).unwrap();
            assert!((v - 1.0).abs() <= 1e-6, "s={s}: {v}");
        }
    }

    #[test]
    fn laplace_sn_two_dirac_items_closed_form() {
        let v = laplace_sn_quadrature(&WeightFamily::dirac(), 2, 1.0).unwrap();
        let expect = 0.5 * (1.0 + (-1.0f64).exp());
        assert!((v - expect).abs() <= 1e-6, "{v} vs {expect}");
    }

    #[test]
    fn laplace_sn_equal_weights_geometric_sum() {
        // Point-mass weights give equal request probabilities, so the
        // stationary cost is uniform on {0, .., n-1} and the transform is
        // (1/n) sum_k exp(-s k). Tight anchor for mid-range n.
        for n in [3u32, 4, 8, 16] {
            for s in [0.3, 1.0] {
                let v = laplace_sn_quadrature(&WeightFamily::dirac(), n, s).unwrap();
                let expect = (0..n).map(|k| (-s * k as f64).exp()).sum::<f64>() / n as f64;
                assert!(
                    (v - expect).abs() <= 1e-6,
                    "n={n} s={s}: {v} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn laplace_sn_at_zero_is_one() {
        let fam = WeightFamily::gamma(1.0).unwrap();
        let v = laplace_sn_quadrature(&fam, 3, 0.0).unwrap();
        assert!((v - 1.0).abs() <= 1e-6, "{v}");
    }

    #[test]
    fn laplace_sn_rejects_bad_arguments() {
        let fam = WeightFamily::dirac();
        assert!(laplace_sn_quadrature(&fam, 0, 1.0).is_err());
        assert!(laplace_sn_quadrature(&fam, 65, 1.0).is_err());
        assert!(laplace_sn_quadrature(&fam, 2, -0.1).is_err());
    }

    #[test]
    fn ks_statistic_on_quantile_grid_is_minimal() {
        let law = LimitLaw::new(WeightFamily::dirac());
        let m = 1000usize;
        // Samples placed exactly at the (i - 0.5)/m quantiles, scaled by n.
        let n = 10_000usize;
        let costs: Vec<u32> = (1..=m)
            .map(|i| (((i as f64 - 0.5) / m as f64) * n as f64).round() as u32)
            .collect();
        let samples = SearchCostSamples {
            costs,
            n,
            seed: 0,
            method: SampleMethod::Bernoulli,
        };
        let d = ks_statistic(&samples, &law).unwrap();
        assert!(d <= 0.5 / m as f64 + 1e-4, "{d}");
    }

    #[test]
    fn ks_statistic_detects_degenerate_mismatch() {
        let law = LimitLaw::new(WeightFamily::dirac());
        let samples = SearchCostSamples {
            costs: vec![0; 500],
            n: 100,
            seed: 0,
            method: SampleMethod::Chain,
        };
        let d = ks_statistic(&samples, &law).unwrap();
        assert!((d - 1.0).abs() <= 1e-12, "{d}");
    }

    #[test]
    fn csv_export_shape() {
        let samples = SearchCostSamples {
            costs: vec![3, 0, 2],
            n: 4,
            seed: 9,
            method: SampleMethod::Chain,
        };
        let mut buf = Vec::new();
        samples.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "cost\n3\n0\n2\n");
    }
}

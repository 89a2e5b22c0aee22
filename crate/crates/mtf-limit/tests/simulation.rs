//! Cross-method and convergence diagnostics for the stationary samplers.

use mtf_limit::limit_law::LimitLaw;
use mtf_limit::mtf_sim::{ks_statistic, sample_search_costs, RequestProbabilities, SampleMethod};
use mtf_limit::rng::derive_seed;
use mtf_limit::weights::WeightFamily;

// Upper 0.001 quantiles of the chi-square distribution, df = index + 1.
const CHI2_CRIT_999: [f64; 7] = [10.828, 13.816, 16.266, 18.467, 20.515, 22.458, 24.322];

// Two-sample chi-square statistic for multinomial counts over shared cells.
fn chi_square_two_sample(c1: &[usize], c2: &[usize]) -> (f64, usize) {
    assert_eq!(c1.len(), c2.len());
    let n1: usize = c1.iter().sum();
    let n2: usize = c2.iter().sum();
    let k1 = (n2 as f64 / n1 as f64).sqrt();
    let k2 = (n1 as f64 / n2 as f64).sqrt();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&a, &b) in c1.iter().zip(c2) {
        if a + b == 0 {
            continue;
        }
        let diff = k1 * a as f64 - k2 * b as f64;
        stat += diff * diff / (a + b) as f64;
        cells += 1;
    }
    (stat, cells.saturating_sub(1))
}

#[test]
fn chain_and_bernoulli_target_the_same_law() {
    let p = RequestProbabilities::from_weights(&[0.35, 0.25, 0.2, 0.12, 0.08]).unwrap();
    let m = 100_000;
    let a = sample_search_costs(&p, m, 101, SampleMethod::Chain).unwrap();
    let b = sample_search_costs(&p, m, 202, SampleMethod::Bernoulli).unwrap();
    let count = |s: &mtf_limit::SearchCostSamples| {
        let mut c = vec![0usize; p.len()];
        for &x in &s.costs {
            c[x as usize] += 1;
        }
        c
    };
    let (stat, df) = chi_square_two_sample(&count(&a), &count(&b));
    let crit = CHI2_CRIT_999[df - 1];
    assert!(
        stat <= crit,
        "chi-square {stat:.2} above the 0.001-level critical value {crit} (df {df})"
    );
}

#[test]
fn results_are_identical_across_worker_counts() {
    let p = RequestProbabilities::from_weights(&[0.4, 0.3, 0.2, 0.1]).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                sample_search_costs(&p, 5000, 3, SampleMethod::Chain)
                    .unwrap()
                    .costs
            })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn ks_distance_shrinks_with_catalog_size() {
    let family = WeightFamily::gamma(1.0).unwrap();
    let law = LimitLaw::new(family.clone());
    let seed = 7_777u64;
    let m = 50_000;
    let mut ks_values = Vec::new();
    for n in [10usize, 100, 1000] {
        let weights = family.sample_weights(n, derive_seed(seed, 2 * n as u64));
        let p = RequestProbabilities::from_weights(&weights).unwrap();
        let samples = sample_search_costs(
            &p,
            m,
            derive_seed(seed, 2 * n as u64 + 1),
            SampleMethod::Bernoulli,
        )
        .unwrap();
        ks_values.push(ks_statistic(&samples, &law).unwrap());
    }
    // Nonincreasing up to Monte-Carlo noise: one inversion of at most 0.005.
    let mut inversions = 0;
    for w in ks_values.windows(2) {
        if w[1] > w[0] {
            inversions += 1;
            assert!(
                w[1] - w[0] <= 0.005,
                "KS inversion too large: {ks_values:?}"
            );
        }
    }
    assert!(inversions <= 1, "KS not converging: {ks_values:?}");
}

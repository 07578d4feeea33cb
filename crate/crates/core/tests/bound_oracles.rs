use formation_core::bounds::{differential_entropy, fisher_information, prior_pdf, sdpi_alpha};
use formation_core::sensing::{quantized_estimate, sample_prior_distance};
use formation_core::{bayes_lower_bound, BoundParams, LogBase, QuantizerSpec, RngStream, SensorModel};
use rand_distr::{Distribution, Normal};
use statrs::distribution::{Continuous, Normal as Gauss};

/// Composite Simpson rule with `m` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let inner: f64 = (1..m).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

#[test]
fn prior_integrates_to_one() {
    for l0 in [0.5, 1.0, 4.0, 120.0] {
        let mass = simpson(|r| prior_pdf(r, l0), 0.0, l0, 10_000);
        assert!((mass - 1.0).abs() < 1e-12, "l0={l0}: {mass}");
    }
}

#[test]
fn entropy_matches_quadrature() {
    for l0 in [0.5, 1.0, 4.0, 120.0, 300.0] {
        let integrand = |r: f64| {
            let p = prior_pdf(r, l0);
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        };
        let nats = simpson(integrand, 0.0, l0, 200_000);
        let got = differential_entropy(l0, LogBase::Nats);
        assert!((got - nats).abs() < 1e-6, "l0={l0}: {got} vs {nats}");
        let bits = differential_entropy(l0, LogBase::Bits);
        assert!((bits - nats / std::f64::consts::LN_2).abs() < 1e-6);
    }
}

fn log_likelihood(xs: &[f64], w: f64, sigma: f64) -> f64 {
    let g = Gauss::new(w, sigma).unwrap();
    xs.iter().map(|&x| g.ln_pdf(x)).sum()
}

#[test]
fn fisher_matches_monte_carlo_derivatives() {
    let root = RngStream::new(5);
    for (k, (n, sigma)) in [(1usize, 1.0), (5, 0.5), (10, 2.0), (40, 1.3)].into_iter().enumerate() {
        let mut rng = root.derive(k as u64).rng();
        let w = 30.0;
        let h = 1e-3;
        let noise = Normal::new(w, sigma).unwrap();
        let trials = 40_000;
        let (mut score_sq, mut curvature) = (0.0, 0.0);
        for _ in 0..trials {
            let xs: Vec<f64> = (0..n).map(|_| noise.sample(&mut rng)).collect();
            let (lo, mid, hi) =
                (log_likelihood(&xs, w - h, sigma), log_likelihood(&xs, w, sigma), log_likelihood(&xs, w + h, sigma));
            let score = (hi - lo) / (2.0 * h);
            score_sq += score * score;
            curvature += -(hi - 2.0 * mid + lo) / (h * h);
        }
        let want = fisher_information(n, sigma);
        let by_score = score_sq / trials as f64;
        let by_curvature = curvature / trials as f64;
        assert!((by_score / want - 1.0).abs() < 0.02, "n={n} sigma={sigma}: score {by_score} vs {want}");
        assert!((by_curvature / want - 1.0).abs() < 0.02, "n={n} sigma={sigma}: curvature {by_curvature} vs {want}");
    }
}

#[test]
fn likelihood_ratio_never_drops_below_alpha() {
    for (n, sigma, l0) in [(2usize, 1.0, 1.0), (1, 1.0, 1.0), (10, 2.0, 3.0), (3, 0.7, 0.5)] {
        let p = BoundParams::new(n, sigma, l0, 1.0).unwrap();
        let alpha = sdpi_alpha(&p);
        let g = |k: usize| l0 * k as f64 / 99.0;
        let mut lowest = f64::INFINITY;
        for a in 0..100 {
            for b in 0..100 {
                for c in 0..100 {
                    let (x, w, w2) = (g(a), g(b), g(c));
                    // every sample at the same x is the worst case of the product
                    let log_ratio = n as f64 * (w - w2) * (2.0 * x - w - w2) / (2.0 * sigma * sigma);
                    lowest = lowest.min(log_ratio);
                }
            }
        }
        assert!(lowest.exp() >= alpha * (1.0 - 1e-12), "n={n}: {} < {alpha}", lowest.exp());
        assert!((lowest.exp() / alpha - 1.0).abs() < 1e-9, "alpha is attained at a corner");
    }
}

fn sweep_points() -> Vec<(usize, f64, usize)> {
    let mut v = Vec::new();
    for n in [1, 5, 10, 20, 40, 60] {
        v.push((n, 2.0, 200));
    }
    for sigma in [0.1, 0.5, 0.9, 1.3] {
        v.push((10, sigma, 200));
    }
    for n_r in [50, 100, 150, 200] {
        v.push((10, 0.01, n_r));
    }
    v
}

fn bound_at(n: usize, sigma: f64, n_r: usize) -> f64 {
    let b = (n_r as f64).log2();
    bayes_lower_bound(&BoundParams::new(n, sigma, 120.0, b).unwrap()).unwrap()
}

#[test]
fn bound_is_monotone_over_the_sweep_ranges() {
    let ns: Vec<f64> = [1, 2, 5, 10, 20, 40, 60].iter().map(|&n| bound_at(n, 2.0, 200)).collect();
    assert!(ns.windows(2).all(|w| w[1] <= w[0]), "{ns:?}");
    let sigmas: Vec<f64> = [0.1, 0.3, 0.5, 0.9, 1.3, 2.0].iter().map(|&s| bound_at(10, s, 200)).collect();
    assert!(sigmas.windows(2).all(|w| w[1] >= w[0]), "{sigmas:?}");
    let bits: Vec<f64> = [50, 75, 100, 150, 200].iter().map(|&r| bound_at(10, 0.01, r)).collect();
    assert!(bits.windows(2).all(|w| w[1] <= w[0]), "{bits:?}");
}

/// Mean absolute error of the sample-mean, ring-midpoint estimator with the
/// distance drawn from the disk prior.
fn estimator_error(n: usize, sigma: f64, n_r: usize, stream: &RngStream) -> f64 {
    let q = QuantizerSpec::new(200.0, n_r, 129, 120.0).unwrap();
    let model = SensorModel::new(sigma, n, 0.0).unwrap();
    let mut rng = stream.rng();
    let trials = 10_000;
    let total: f64 = (0..trials)
        .map(|_| {
            let w = sample_prior_distance(120.0, &mut rng);
            (quantized_estimate(w, &model, &q, &mut rng) - w).abs()
        })
        .sum();
    total / trials as f64
}

#[test]
fn estimator_error_dominates_the_bound() {
    let root = RngStream::new(9);
    for (k, (n, sigma, n_r)) in sweep_points().into_iter().enumerate() {
        if n == 1 {
            continue;
        }
        let err = estimator_error(n, sigma, n_r, &root.derive(k as u64));
        let bound = bound_at(n, sigma, n_r);
        assert!(err >= bound, "n={n} sigma={sigma} n_r={n_r}: {err} < {bound}");
    }
}

/// With a single sample the asymptotic information term overstates what one
/// noisy reading can carry, and the bound exceeds the achieved error.
#[test]
fn single_sample_point_sits_above_the_estimator() {
    let err = estimator_error(1, 2.0, 200, &RngStream::new(9).derive(0));
    let bound = bound_at(1, 2.0, 200);
    assert!(err < bound, "{err} vs {bound}");
    assert!(err > 0.7 * bound);
}

use hetsim_core::geometry::{sample_ppp, Point2, Region};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson};

const SAMPLES: usize = 10_000;

fn counts(density: f64, radius_m: f64, seed: u64) -> Vec<u64> {
    let region = Region::disc(Point2::origin(), radius_m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SAMPLES)
        .map(|_| sample_ppp(density, &region, &mut rng).unwrap().len() as u64)
        .collect()
}

#[test]
fn counts_pass_chi_square_against_poisson_pmf() {
    let density = 2.05;
    let region = Region::disc(Point2::origin(), 5000.0).unwrap();
    let mean = density * region.area_km2();
    assert!((mean - 161.0_f64).abs() < 0.1);
    let data = counts(density, 5000.0, 11);
    let pmf = Poisson::new(mean).unwrap();

    // Bins [lo, hi) with expected count ≥ 5, open-ended at both tails.
    let mut edges = vec![0u64];
    let mut acc = 0.0;
    let mut k = 0u64;
    let cutoff = (mean + 10.0 * mean.sqrt()) as u64;
    while k < cutoff {
        acc += pmf.pmf(k) * SAMPLES as f64;
        k += 1;
        if acc >= 5.0 {
            edges.push(k);
            acc = 0.0;
        }
    }
    let last = edges.len() - 1;
    edges[last] = u64::MAX;
    let bins = edges.len() - 1;
    let mut observed = vec![0f64; bins];
    for &c in &data {
        let b = edges.partition_point(|&e| e <= c) - 1;
        observed[b] += 1.0;
    }
    let mut chi2 = 0.0;
    for b in 0..bins {
        let hi = if b + 1 == bins {
            cutoff * 2
        } else {
            edges[b + 1]
        };
        let p: f64 = (edges[b]..hi).map(|j| pmf.pmf(j)).sum();
        let expected = p * SAMPLES as f64;
        chi2 += (observed[b] - expected).powi(2) / expected;
    }
    let critical = ChiSquared::new((bins - 1) as f64)
        .unwrap()
        .inverse_cdf(0.99);
    assert!(chi2 < critical, "chi2 {chi2} ≥ {critical} with {bins} bins");
}

#[test]
fn mean_and_variance_match_intensity() {
    for (density, radius, seed) in [(2.05, 5000.0, 1), (30.75, 1000.0, 2), (0.5, 2000.0, 3)] {
        let lambda_a = density * std::f64::consts::PI * (radius / 1000.0) * (radius / 1000.0);
        let data = counts(density, radius, seed);
        let n = data.len() as f64;
        let mean = data.iter().sum::<u64>() as f64 / n;
        let var = data.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        // Poisson: Var(mean) = λA/n, Var(s²) ≈ (λA + 2(λA)²)/n.
        let se_mean = (lambda_a / n).sqrt();
        let se_var = ((lambda_a + 2.0 * lambda_a * lambda_a) / n).sqrt();
        assert!(
            (mean - lambda_a).abs() < 3.0 * se_mean,
            "mean {mean} vs {lambda_a}"
        );
        assert!(
            (var - lambda_a).abs() < 3.0 * se_var,
            "var {var} vs {lambda_a}"
        );
    }
}

#[test]
fn points_are_uniform_over_the_disc() {
    let region = Region::disc(Point2::new(100.0, -50.0), 1000.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pts = sample_ppp(2000.0, &region, &mut rng).unwrap();
    assert!(pts.len() > 5000);
    let mut inner = 0usize;
    let mut right = 0usize;
    for p in &pts {
        let r = p.distance(region.center());
        assert!(r <= 1000.0 + 1e-9);
        if r < 500.0 {
            inner += 1;
        }
        if p.x > 100.0 {
            right += 1;
        }
    }
    let n = pts.len() as f64;
    // Inner disc holds a quarter of the area; half-plane holds half.
    assert!((inner as f64 / n - 0.25).abs() < 4.0 * (0.25 * 0.75 / n).sqrt());
    assert!((right as f64 / n - 0.5).abs() < 4.0 * (0.25 / n).sqrt());
}

#[test]
fn zero_density_is_empty_and_negative_is_rejected() {
    let region = Region::disc(Point2::origin(), 5000.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(sample_ppp(0.0, &region, &mut rng).unwrap().is_empty());
    assert!(sample_ppp(-1.0, &region, &mut rng).is_err());
}

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ris_coverage_core::geometry::*;
use ris_coverage_core::mcsim::{ks_critical_1pct, ks_uniform};
use ris_coverage_core::sgkernel::{integrate_1d, integrate_to_infinity};

const LAMBDA: f64 = 1.0 / (300.0 * 300.0 * PI);

#[test]
fn ppp_mean_count_on_reference_annulus() {
    let expect = 99.993_055_555_555_56;
    let mean = LAMBDA * PI * (3000.0f64.powi(2) - 25.0f64.powi(2));
    assert!((mean - expect).abs() < 1e-9);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let draws = 10_000;
    let total: usize = (0..draws)
        .map(|_| sample_ppp_annulus(LAMBDA, 25.0, 3000.0, &mut rng).unwrap().len())
        .sum();
    let emp = total as f64 / draws as f64;
    // Poisson: variance equals the mean
    let se = (expect / draws as f64).sqrt();
    assert!((emp - expect).abs() < 3.0 * se, "{emp} vs {expect}");
}

#[test]
fn ppp_points_lie_in_annulus() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts = sample_ppp_annulus(1e-4, 25.0, 400.0, &mut rng).unwrap();
    assert!(!pts.is_empty());
    assert!(pts.iter().all(|p| p.norm() > 25.0 && p.norm() <= 400.0));
}

#[test]
fn ris_radius_distribution() {
    let r_l = 25.0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 100_000;
    let pts: Vec<Point> = (0..n).map(|_| sample_ris(r_l, &mut rng)).collect();
    assert!(pts.iter().all(|p| p.norm() <= r_l));

    let below = pts.iter().filter(|p| p.norm() <= 12.5).count() as f64 / n as f64;
    let se = (0.25 * 0.75 / n as f64).sqrt();
    assert!((below - 0.25).abs() < 4.0 * se, "{below}");

    // E[r^2] = R_L^2 / 2, Var[r^2] = R_L^4 / 12
    let m2 = pts.iter().map(|p| p.norm().powi(2)).sum::<f64>() / n as f64;
    let se2 = (r_l.powi(4) / 12.0 / n as f64).sqrt();
    assert!((m2 - r_l * r_l / 2.0).abs() < 4.0 * se2, "{m2}");

    let angles: Vec<f64> = pts.iter().map(|p| p.y.atan2(p.x)).collect();
    assert!(ks_uniform(&angles, -PI, PI) < ks_critical_1pct(n));
}

#[test]
fn nearest_pdf_normalised() {
    for n in 1..=3 {
        let t = integrate_to_infinity(|x| nearest_bs_pdf(x, n, LAMBDA), 0.0, 300.0, 1e-12).unwrap();
        assert!((t.value - 1.0).abs() < 1e-9, "n={n}: {}", t.value);
    }
    // Rayleigh form for n = 1
    let x = 250.0;
    let rayleigh = 2.0 * PI * LAMBDA * x * (-PI * LAMBDA * x * x).exp();
    assert!((nearest_bs_pdf(x, 1, LAMBDA) - rayleigh).abs() < 1e-15);
}

#[test]
fn nearest_neighbour_distance_matches_pdf() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let r_max = 3000.0;
    let n = 20_000;
    let cdf = |x: f64| 1.0 - (-PI * LAMBDA * x * x).exp();
    let mut u: Vec<f64> = (0..n)
        .map(|_| {
            let pts = sample_ppp_annulus(LAMBDA, 0.0, r_max, &mut rng).unwrap();
            let d = pts.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
            cdf(d)
        })
        .collect();
    u.sort_by(f64::total_cmp);
    assert!(ks_uniform(&u, 0.0, 1.0) < ks_critical_1pct(n));
    // the CDF itself agrees with the integrated density
    let v = integrate_1d(|x| nearest_bs_pdf(x, 1, LAMBDA), 0.0, 400.0, 1e-13).unwrap();
    assert!((v - cdf(400.0)).abs() < 1e-10);
}

#[test]
fn link_angle_always_in_range() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1_000_000 {
        let ris = sample_ris(25.0, &mut rng);
        let bs = sample_ris(3000.0, &mut rng);
        if let Ok(t) = compute_link_angle(bs, ris, Point::ORIGIN) {
            assert!((0.0..=PI).contains(&t));
        }
    }
}

#[test]
fn split_incidence_angle_uniform() {
    let rho = 0.3;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let r_max = 20.0 / (PI * LAMBDA).sqrt();
    let n = 20_000;
    let br: Vec<f64> = (0..n)
        .map(|_| {
            let ris = sample_ris(25.0, &mut rng);
            let bs = sample_ppp_point(&mut rng, 25.0, r_max);
            let t = compute_link_angle(bs, ris, Point::ORIGIN).unwrap();
            split_angle(t, rho).unwrap().0
        })
        .collect();
    assert!(br.iter().all(|&x| x <= rho * PI));
    assert!(ks_uniform(&br, 0.0, rho * PI) < ks_critical_1pct(n));
}

fn sample_ppp_point(rng: &mut ChaCha8Rng, r_min: f64, r_max: f64) -> Point {
    use rand::Rng;
    let r = rng.random_range(r_min * r_min..r_max * r_max).sqrt();
    Point::from_polar(r, rng.random_range(0.0..2.0 * PI))
}

#[test]
fn realization_is_deterministic() {
    let r_max = 20.0 / (PI * LAMBDA).sqrt();
    let a = Realization::sample(LAMBDA, 25.0, r_max, 0.5, 99, &mut ChaCha8Rng::seed_from_u64(99))
        .unwrap();
    let b = Realization::sample(LAMBDA, 25.0, r_max, 0.5, 99, &mut ChaCha8Rng::seed_from_u64(99))
        .unwrap();
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn association_is_permutation_invariant(seed in any::<u64>(), i in 0usize..64, j in 0usize..64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = sample_ppp_annulus(2e-4, 25.0, 300.0, &mut rng).unwrap();
        prop_assume!(pts.len() >= 2);
        let ris = sample_ris(25.0, &mut rng);
        let before = pts[nearest_index(&pts, ris).unwrap()];
        let (i, j) = (i % pts.len(), j % pts.len());
        pts.swap(i, j);
        let after = pts[nearest_index(&pts, ris).unwrap()];
        prop_assert_eq!(before, after);
    }

    #[test]
    fn link_geometry_split_invariants(
        seed in any::<u64>(),
        rho in 0.01f64..0.99,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ris = sample_ris(25.0, &mut rng);
        let bs = sample_ppp_point(&mut rng, 25.0, 2000.0);
        let g = LinkGeometry::from_points(bs, ris, Point::ORIGIN, rho).unwrap();
        prop_assert!((g.theta_br + g.theta_ru - g.theta).abs() < 1e-12);
        prop_assert!((g.theta_br - rho * g.theta).abs() < 1e-12);
        prop_assert!(g.r_br > 0.0 && g.r_ru > 0.0);
    }
}

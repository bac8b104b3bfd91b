use std::f64::consts::PI;

use ris_coverage_core::analytic::{gamma_c_e, gamma_t_e, mean_interference_connected};
use ris_coverage_core::channel::c_ris;
use ris_coverage_core::geometry::{Point, Realization};
use ris_coverage_core::mcsim::*;
use ris_coverage_core::NetworkParams;

fn analytic_expectations(p: &NetworkParams) -> Expectations {
    Expectations { gamma_c_oma: gamma_c_e(p).unwrap(), gamma_t_oma: gamma_t_e(p) }
}

#[test]
fn identical_across_thread_counts() {
    let p = NetworkParams::default().with_snr_db(100.0);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            ScenarioMode::ALL
                .map(|m| estimate_coverage(&p, m, 3_000, 42).unwrap())
                .to_vec()
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn distinct_seeds_give_distinct_draws() {
    let sim = Simulator::new(&NetworkParams::default(), ScenarioMode::RisNoma).unwrap();
    let a = sim.draws(1, 0, 16).unwrap();
    let b = sim.draws(2, 0, 16).unwrap();
    assert_ne!(a, b);
    assert_eq!(a, sim.draws(1, 0, 16).unwrap());
}

#[test]
fn rejects_too_few_trials() {
    let p = NetworkParams::default();
    assert!(estimate_coverage(&p, ScenarioMode::RisNoma, MIN_TRIALS - 1, 1).is_err());
}

#[test]
fn extreme_thresholds() {
    let base = NetworkParams::default().with_snr_db(100.0);
    let e = analytic_expectations(&base);
    for mode in ScenarioMode::ALL {
        let sim = Simulator::new(&base, mode).unwrap();
        let draws = sim.draws(7, 0, 2_000).unwrap();

        let mut high = base.clone();
        high.gamma_sic_th = 1e30;
        high.gamma_t_th = 1e30;
        high.gamma_c_th = 1e30;
        let mut zero = base.clone();
        zero.gamma_sic_th = 0.0;
        zero.gamma_t_th = 0.0;
        zero.gamma_c_th = 0.0;

        for d in &draws {
            let s = d.sinr(&base, base.p_b);
            assert_eq!(coverage_events(&s, &high, mode, &e), (false, false));
            let expect = match mode {
                ScenarioMode::RisOma => (s.gamma_t_oma > 0.0, s.gamma_c_oma > 0.0),
                _ => (s.gamma_t_oma > e.gamma_c_oma, e.gamma_t_oma > s.gamma_c_oma),
            };
            assert_eq!(coverage_events(&s, &zero, mode, &e), expect, "{mode}");
        }
    }
}

#[test]
fn single_hand_placed_base_station() {
    let p = NetworkParams::default();
    let sim = Simulator::new(&p, ScenarioMode::RisNoma).unwrap();
    let ris = Point::new(10.0, 0.0);
    let bs = Point::new(10.0, 200.0);
    let real = Realization {
        bs_points: vec![bs],
        ris,
        ris_orientation: 0.0,
        associated_index: 0,
        rng_seed: 0,
        empty_resamples: 0,
    };
    let (serving, interferers) = sim.typical_link_gains(&real).unwrap();
    assert!(interferers.is_empty());
    // right angle at the RIS, split evenly
    let c = c_ris(PI / 4.0, PI / 4.0, p.half_length);
    let expect = c * c * (200.0f64 * 10.0).powf(-p.alpha_t);
    assert!(((serving - expect) / expect).abs() < 1e-12);

    // unit fading, no interference: the SINRs reduce to their definitions
    let d = TrialDraw { s_t: serving, i_t: 0.0, s_c: 1e-12, i_c: 0.0 };
    let s = d.sinr(&p, p.p_b);
    let snr = p.p_b * serving / p.sigma2;
    assert!((s.gamma_t - p.a_t * snr).abs() < 1e-12 * snr);
    assert!((s.gamma_t_oma - snr).abs() < 1e-12 * snr);
    assert!((s.gamma_sic - p.a_c * snr / (p.a_t * snr + 1.0)).abs() < 1e-12);
}

#[test]
fn traditional_mode_serves_from_nearest_to_user() {
    let p = NetworkParams::default();
    let sim = Simulator::new(&p, ScenarioMode::TraditionalNoma).unwrap();
    let real = Realization {
        bs_points: vec![Point::new(400.0, 0.0), Point::new(0.0, -100.0)],
        ris: Point::new(20.0, 0.0),
        ris_orientation: 0.0,
        associated_index: 0,
        rng_seed: 0,
        empty_resamples: 0,
    };
    let (serving, interferers) = sim.typical_link_gains(&real).unwrap();
    assert!((serving - p.intercept_c * 100f64.powf(-p.alpha_c)).abs() < 1e-24);
    assert_eq!(interferers.len(), 1);
}

#[test]
fn oma_events_ignore_power_split() {
    let p = NetworkParams::default().with_snr_db(100.0);
    let sim = Simulator::new(&p, ScenarioMode::RisOma).unwrap();
    let draws = sim.draws(3, 0, 2_000).unwrap();
    let mut q = p.clone();
    q.a_c = 0.9;
    q.a_t = 0.1;
    let e = analytic_expectations(&p);
    for d in &draws {
        let a = coverage_events(&d.sinr(&p, p.p_b), &p, ScenarioMode::RisOma, &e);
        let b = coverage_events(&d.sinr(&q, q.p_b), &q, ScenarioMode::RisOma, &e);
        assert_eq!(a, b);
    }
}

#[test]
fn coverage_falls_with_threshold() {
    let p = NetworkParams::default().with_snr_db(100.0);
    let mut q = p.clone();
    q.set_gamma_t_th(0.05);
    for mode in ScenarioMode::ALL {
        let (a, _) = estimate_coverage(&p, mode, 5_000, 5).unwrap();
        let (b, _) = estimate_coverage(&q, mode, 5_000, 5).unwrap();
        let sd = a.std_error().hypot(b.std_error());
        assert!(b.probability - a.probability <= 3.0 * sd, "{mode}: {a:?} {b:?}");
    }
}

#[test]
fn powers_share_draws() {
    let p = NetworkParams::default();
    let powers: Vec<f64> = [90.0, 100.0, 110.0].iter().map(|&s| p.clone().with_snr_db(s).p_b).collect();
    let joint =
        estimate_coverage_at_powers(&p, ScenarioMode::RisOma, &powers, 2_000, 9, ExpectationSource::Analytic)
            .unwrap();
    for (k, &pb) in powers.iter().enumerate() {
        let mut q = p.clone();
        q.p_b = pb;
        assert_eq!(estimate_coverage(&q, ScenarioMode::RisOma, 2_000, 9).unwrap(), joint[k]);
    }
    // same draws at growing power: typical OMA coverage cannot drop
    assert!(joint.windows(2).all(|w| w[1].0.probability >= w[0].0.probability));
}

#[test]
fn connected_interference_mean_and_density_scaling() {
    let p = NetworkParams::default();
    let a = estimate_expectations(&p, 20_000, 21).unwrap();
    let analytic = mean_interference_connected(&p).unwrap();
    assert!((a.mean_ic_hat.mean - analytic).abs() < 4.0 * a.mean_ic_hat.std_error());

    let mut half = p.clone();
    half.lambda_b *= 0.5;
    let b = estimate_expectations(&half, 20_000, 22).unwrap();
    let ratio = b.mean_ic_hat.mean / a.mean_ic_hat.mean;
    let rel = (a.mean_ic_hat.std_error() / a.mean_ic_hat.mean)
        .hypot(b.mean_ic_hat.std_error() / b.mean_ic_hat.mean);
    assert!((ratio - 0.5).abs() < 4.0 * 0.5 * rel, "ratio {ratio}");
}

#[test]
fn empirical_expectations_use_separate_streams() {
    let p = NetworkParams::default().with_snr_db(100.0);
    let a = estimate_coverage_with(&p, ScenarioMode::RisNoma, 2_000, 4, ExpectationSource::Empirical)
        .unwrap();
    let b = estimate_coverage_with(&p, ScenarioMode::RisNoma, 2_000, 4, ExpectationSource::Empirical)
        .unwrap();
    assert_eq!(a, b);
    assert!((0.0..=1.0).contains(&a.0.probability));
}

#[test]
fn confidence_interval_width() {
    let c = CoverageEstimate::from_counts(250, 1000, 0);
    assert!((c.ci_halfwidth - 1.96 * (0.25f64 * 0.75 / 1000.0).sqrt()).abs() < 1e-15);
    assert_eq!(CoverageEstimate::from_counts(0, 1000, 0).ci_halfwidth, 0.0);
}

#![allow(clippy::field_reassign_with_default)]

use std::f64::consts::PI;

use ris_coverage_core::analytic::*;
use ris_coverage_core::channel::{c_ris_e, CrisMode};
use ris_coverage_core::sgkernel::{binomial, gauss2f1, integrate_1d};
use ris_coverage_core::NetworkParams;

fn settings(mode: CrisMode) -> AnalyticSettings {
    AnalyticSettings { cris_mode: mode, ..AnalyticSettings::default() }
}

#[test]
fn laplace_connected_at_unit_argument() {
    let p = NetworkParams::default();
    let s = p.m_t as f64 * p.r_c.powf(p.alpha_c) / (p.p_b * p.intercept_c);
    let v = laplace_connected(s, &p).unwrap();
    // exp(-pi lambda r_c^2 (2F1(-0.5, 4; 0.5; -1) - 1)), evaluated independently
    assert!((v - 0.761_919_855_409_114_9).abs() < 1e-12, "{v}");
}

#[test]
fn laplace_transforms_completely_monotone() {
    let p = NetworkParams::default();
    let scale_c = p.r_c.powf(p.alpha_c) / (p.p_b * p.intercept_c);
    let ce = c_ris_e(&p.ris_config().unwrap(), CrisMode::Paper).unwrap();
    let scale_t = p.m_t as f64 * 10.0 * 300f64.powf(p.alpha_t) / (p.p_b * ce);
    for (name, f) in [
        ("connected", Box::new(|s: f64| laplace_connected(s * scale_c, &p).unwrap()) as Box<dyn Fn(f64) -> f64>),
        (
            "typical",
            Box::new(|s: f64| laplace_typical_ris(s * scale_t, 300.0, 10.0, &p, CrisMode::Paper).unwrap()),
        ),
    ] {
        assert_eq!(f(0.0), 1.0);
        let v: Vec<f64> = (0..40).map(|k| f(k as f64 * 0.25)).collect();
        for w in v.windows(3) {
            assert!(w[1] < w[0], "{name} not decreasing");
            assert!(w[2] - 2.0 * w[1] + w[0] > 0.0, "{name} not convex");
        }
    }
}

#[test]
fn laplace_typical_matches_pgfl_integral() {
    let p = NetworkParams::default();
    let (rb, ru) = (300.0f64, 10.0f64);
    let ce = c_ris_e(&p.ris_config().unwrap(), CrisMode::Paper).unwrap();
    let m = p.m_t as f64;
    let a = p.alpha_t;
    for s_scaled in [0.05, 1.0, 20.0] {
        let sigma4 = p.p_b * ce / (m * ru * rb.powf(a));
        let s = s_scaled / sigma4;
        let closed = laplace_typical_ris(s, rb, ru, &p, CrisMode::Paper).unwrap();
        // brute-force PGFL with per-interferer gain P_b C_E / r_ru * r^-alpha,
        // integrated in t = ln(r / r_br0)
        let g = p.p_b * ce / ru;
        let f = |t: f64| {
            let r = rb * t.exp();
            let x = s * g * r.powf(-a) / m;
            -(-m * x.ln_1p()).exp_m1() * r * r
        };
        let integral = integrate_1d(f, 0.0, 120.0, 1e-10).unwrap();
        let pgfl = (-2.0 * PI * p.lambda_b * integral).exp();
        assert!(((closed - pgfl) / pgfl).abs() < 1e-7, "s={s_scaled}: {closed} vs {pgfl}");
    }
}

#[test]
fn mean_interference_scaling() {
    let p = NetworkParams::default();
    let mut q = p.clone();
    q.r_c *= 2.0;
    let r = mean_interference_connected(&q).unwrap() / mean_interference_connected(&p).unwrap();
    assert!((r - 0.25).abs() < 1e-14);
}

#[test]
fn gamma_c_e_limits_and_default() {
    let p = NetworkParams::default();
    // evaluated independently at the default parameters
    let v = gamma_c_e(&p).unwrap();
    assert!(((v - 0.006_328_121_389_108_771) / v).abs() < 1e-12, "{v}");

    let mut q = p.clone();
    q.sigma2 = 1e30;
    assert!(gamma_c_e(&q).unwrap() < 1e-30);

    let mut q = p.clone();
    q.lambda_b = 1e-30;
    let noise_limited = q.p_b * q.intercept_c * q.r_c.powf(-q.alpha_c) / q.sigma2;
    assert!(((gamma_c_e(&q).unwrap() - noise_limited) / noise_limited).abs() < 1e-12);
}

#[test]
fn gamma_t_e_default() {
    let p = NetworkParams::default();
    assert!((c_t_e() - 0.994_325_851_191_506).abs() < 1e-14);
    let v = gamma_t_e(&p);
    assert!(((v - 4.419_226_005_295_582e-6) / v).abs() < 1e-12, "{v}");
}

#[test]
fn upsilon_reference_thresholds() {
    let p = NetworkParams::default();
    let expect = (p.gamma_sic_th / (0.6 - p.gamma_sic_th * 0.4))
        .max(p.gamma_t_th / 0.4)
        .max(gamma_c_e(&p).unwrap());
    assert!((upsilon(&p).unwrap() - expect).abs() < 1e-15);
    assert!((expect - 0.025).abs() < 1e-12);
    // nondecreasing in each argument
    let base = upsilon(&p).unwrap();
    let mut q = p.clone();
    q.gamma_sic_th = 0.02;
    assert!(upsilon(&q).unwrap() >= base);
    let mut q = p.clone();
    q.set_gamma_t_th(0.02);
    assert!(upsilon(&q).unwrap() >= base);
    let mut q = p.clone();
    q.p_b *= 1e6;
    assert!(upsilon(&q).unwrap() >= base);
}

#[test]
fn typical_coverage_interference_limited_form() {
    let mut p = NetworkParams::default();
    p.sigma2 = 0.0;
    let c = coverage_typical(&p, &AnalyticSettings::default()).unwrap();
    // with beta_1 = 0 every inner integral is 1/(2 beta_2)
    let eta = p.fading_t().unwrap().eta;
    let ups = upsilon(&p).unwrap();
    let d = 2.0 / p.alpha_t;
    let expect: f64 = (1..=p.m_t)
        .map(|n| {
            let m = p.m_t as f64;
            let b2 = PI * p.lambda_b * gauss2f1(-d, m, 1.0 - d, -(n as f64) * eta * ups / m).unwrap();
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sign * binomial(p.m_t, n) * PI * p.lambda_b / b2
        })
        .sum();
    assert!((c.raw - expect).abs() < 1e-9, "{} vs {expect}", c.raw);
}

#[test]
fn typical_coverage_monotone() {
    let s = AnalyticSettings::default();
    let base = NetworkParams::default().with_snr_db(95.0);
    let p0 = coverage_typical(&base, &s).unwrap().value;
    let check = |q: NetworkParams, up: bool, what: &str| {
        let v = coverage_typical(&q, &s).unwrap().value;
        if up {
            assert!(v >= p0, "{what}: {v} < {p0}");
        } else {
            assert!(v <= p0, "{what}: {v} > {p0}");
        }
    };
    let mut q = base.clone();
    q.gamma_sic_th = 0.05;
    check(q, false, "gamma_sic_th");
    let mut q = base.clone();
    q.set_gamma_t_th(0.02);
    check(q, false, "gamma_t_th");
    let mut q = base.clone();
    q.sigma2 *= 2.0;
    check(q, false, "sigma2");
    check(base.clone().with_snr_db(97.0), true, "p_b");
    let mut q = base.clone();
    q.half_length = 1.5;
    check(q, true, "half_length");
}

#[test]
fn closed_form_matches_double_integral_at_alpha_four() {
    for snr in [90.0, 95.0, 100.0, 105.0] {
        let mut p = NetworkParams::default().with_snr_db(snr);
        p.alpha_t = 4.0;
        let s = AnalyticSettings::default();
        let a = coverage_typical(&p, &s).unwrap().raw;
        let b = coverage_typical_closed(&p, &s).unwrap().raw;
        assert!((a - b).abs() < 1e-4, "snr {snr}: {a} vs {b}");
        let mut s128 = s;
        s128.chebyshev_order = 128;
        let c = coverage_typical_closed(&p, &s128).unwrap().raw;
        assert!((b - c).abs() < 1e-6, "K convergence at {snr}: {b} vs {c}");
    }
}

#[test]
fn closed_form_survives_huge_erfc_exponent() {
    let mut p = NetworkParams::default().with_snr_db(150.0);
    p.alpha_t = 4.0;
    // beta_2^2 / (4 beta_1 Xi^4) reaches well beyond 700 at the smallest node
    let c = coverage_typical_closed(&p, &AnalyticSettings::default()).unwrap();
    assert!(c.raw.is_finite() && c.value > 0.0 && c.value <= 1.0, "{c:?}");
}

#[test]
fn connected_noise_only_limit() {
    let mut p = NetworkParams::default();
    p.lambda_b = 1e-14;
    let c = coverage_connected_closed(&p).unwrap();
    let eta = p.fading_c().unwrap().eta;
    let gte = gamma_t_e(&p);
    let den = p.a_c - p.a_t * p.gamma_c_th;
    let rca = p.r_c.powf(p.alpha_c);
    let mut expect = 0.0;
    for n in 1..=p.m_c {
        let ne = n as f64 * eta;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let mu2 = ne * gte * p.sigma2 / p.intercept_c;
        let mu4 = ne * p.gamma_c_th * p.sigma2 / (den * p.p_b * p.intercept_c);
        expect += sign * binomial(p.m_c, n) * ((-mu2 * rca).exp() - (-mu4 * rca).exp());
    }
    assert!((c.raw - expect).abs() < 1e-9, "{} vs {expect}", c.raw);
}

#[test]
fn connected_small_threshold_clamps() {
    let mut p = NetworkParams::default();
    p.set_gamma_c_th(1e-12);
    let c = coverage_connected_closed(&p).unwrap();
    // both sums approach one, so the difference collapses and is clamped
    assert!(c.raw.abs() < 1e-3, "{c:?}");
    assert!((0.0..=1.0).contains(&c.value));
}

#[test]
fn coverage_outputs_in_unit_interval() {
    for snr in [60.0, 90.0, 120.0] {
        let p = NetworkParams::default().with_snr_db(snr);
        let pair = coverage_pair(&p, &AnalyticSettings::default()).unwrap();
        assert!((0.0..=1.0).contains(&pair.p_typical));
        assert!((0.0..=1.0).contains(&pair.p_connected));
    }
}

#[test]
fn binomial_sums_well_conditioned_at_defaults() {
    for snr in [90.0, 100.0, 105.0] {
        let p = NetworkParams::default().with_snr_db(snr);
        for m in [1u32, 4, 8] {
            let mut q = p.clone();
            q.m_t = m;
            let c = coverage_typical(&q, &settings(CrisMode::Corrected)).unwrap();
            assert!(c.cancellation < CANCELLATION_LIMIT, "m={m}: {}", c.cancellation);
        }
    }
}

//! Cross-validation suite: every check compares an engine against an
//! independent oracle or against the other engine and reports PASS, FAIL
//! or EXPECTED-DIVERGENCE with the measured errors.
//!
//! Checks that compare the closed forms with the simulator use the
//! corrected angle-averaged RIS constant; the printed constant is off by a
//! factor of about two (see the RIS-constant check) and would bias the
//! comparison.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use ris_coverage_core::analytic::{
    coverage_connected_closed, coverage_typical, coverage_typical_closed,
    mean_interference_connected, AnalyticSettings,
};
use ris_coverage_core::channel::{c_ris_e, pathloss_ris_approx, pathloss_ris_exact, CrisMode, RisConfig};
use ris_coverage_core::geometry::{ris_axis_for, LinkGeometry, Point};
use ris_coverage_core::mcsim::{
    estimate_coverage_at_powers, estimate_expectations, ks_critical_1pct, ks_uniform,
    sample_serving_link_angles, sample_typical_link_angles, CoverageEstimate, ExpectationSource,
    ScenarioMode,
};
use ris_coverage_core::sgkernel::{erfc, gamma_fn, gauss2f1};
use ris_coverage_core::NetworkParams;

use crate::config::{default_snr_points, parse_config};
use crate::oracles;
use crate::sweep::{run_sweep, write_csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A documented disagreement that is measured and reported, not a
    /// defect of the implementation.
    ExpectedDivergence,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ExpectedDivergence => "EXPECTED-DIVERGENCE",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: &'static str,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl CheckResult {
    fn new(id: &'static str, name: &'static str, pass: bool, detail: String) -> Self {
        let status = if pass { Status::Pass } else { Status::Fail };
        CheckResult { id, name, status, detail }
    }

    fn error(id: &'static str, name: &'static str, err: impl fmt::Display) -> Self {
        CheckResult { id, name, status: Status::Fail, detail: format!("evaluation failed: {err}") }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}: {}", self.status.as_str(), self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    pub trials: usize,
    pub seed: u64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { trials: 100_000, seed: 42 }
    }
}

/// Monte Carlo coverage of one scenario over the transmit-SNR sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrSweep {
    pub snr_db: Vec<f64>,
    pub typical: Vec<CoverageEstimate>,
    pub connected: Vec<CoverageEstimate>,
}

fn mc_snr_sweep(p: &NetworkParams, mode: ScenarioMode, opts: ValidationOptions) -> Result<SnrSweep, String> {
    let snr_db = default_snr_points();
    let powers: Vec<f64> = snr_db.iter().map(|&s| p.clone().with_snr_db(s).p_b).collect();
    log::info!("monte carlo sweep: {mode}, {} trials", opts.trials);
    let est = estimate_coverage_at_powers(p, mode, &powers, opts.trials, opts.seed, ExpectationSource::Analytic)
        .map_err(|e| e.to_string())?;
    Ok(SnrSweep {
        snr_db,
        typical: est.iter().map(|e| e.0).collect(),
        connected: est.iter().map(|e| e.1).collect(),
    })
}

/// Analytic typical-user coverage (corrected RIS constant) over the sweep.
fn analytic_typical(p: &NetworkParams) -> Result<Vec<f64>, String> {
    default_snr_points()
        .iter()
        .map(|&s| {
            coverage_typical(&p.clone().with_snr_db(s), &validation_settings())
                .map(|c| c.value)
                .map_err(|e| e.to_string())
        })
        .collect()
}

pub fn validation_settings() -> AnalyticSettings {
    AnalyticSettings { cris_mode: CrisMode::Corrected, ..AnalyticSettings::default() }
}

/// Window radius, in units of `1/sqrt(pi lambda_b)`, for the angle check.
pub const ANGLE_WINDOW_NORM: f64 = 1000.0;

/// Difference `a - b` of two independent estimates and its standard error.
fn diff(a: &CoverageEstimate, b: &CoverageEstimate) -> (f64, f64) {
    (a.probability - b.probability, a.std_error().hypot(b.std_error()))
}

/// The validation suite; Monte Carlo sweeps shared between checks are
/// computed once.
pub struct Suite {
    pub opts: ValidationOptions,
    defaults: OnceLock<Result<SnrSweep, String>>,
}

impl Suite {
    pub fn new(opts: ValidationOptions) -> Self {
        Suite { opts, defaults: OnceLock::new() }
    }

    /// RIS-aided NOMA at the default parameters.
    fn default_sweep(&self) -> &Result<SnrSweep, String> {
        self.defaults
            .get_or_init(|| mc_snr_sweep(&NetworkParams::default(), ScenarioMode::RisNoma, self.opts))
    }

    /// Runs every check in order, handing each result to `report` as soon
    /// as it is available.
    pub fn run_all(&self, mut report: impl FnMut(&CheckResult)) -> Vec<CheckResult> {
        let checks: [&dyn Fn() -> Vec<CheckResult>; 11] = [
            &|| vec![self.special_functions()],
            &|| self.ris_constant(),
            &|| vec![self.far_field()],
            &|| vec![self.mean_interference()],
            &|| vec![self.closed_form_equivalence()],
            &|| self.bound_directions(),
            &|| vec![self.ris_beats_direct()],
            &|| vec![self.monotone_in_length_and_exponent()],
            &|| vec![self.density_sensitivity()],
            &|| vec![self.angle_distribution()],
            &|| vec![self.determinism()],
        ];
        let mut out = Vec::new();
        for check in checks {
            for r in check() {
                report(&r);
                out.push(r);
            }
        }
        out
    }

    /// `2F1`, `erfc` and `Gamma` against the independent oracles.
    pub fn special_functions(&self) -> CheckResult {
        const NAME: &str = "special functions vs independent oracles";
        let mut worst_h: f64 = 0.0;
        let mut points = 0;
        for alpha in [2.4, 3.0, 4.0] {
            let a = -2.0 / alpha;
            for m in [1.0, 2.0, 4.0, 8.0] {
                for k in 0..=16 {
                    let z = -100.0 * (k as f64 / 16.0).powi(2);
                    let got = match gauss2f1(a, m, 1.0 + a, z) {
                        Ok(v) => v,
                        Err(e) => return CheckResult::error("1", NAME, e),
                    };
                    let want = oracles::hyp2f1(a, m, 1.0 + a, z);
                    worst_h = worst_h.max(((got - want) / want).abs());
                    points += 1;
                }
            }
        }
        let worst_e = (-120..=120)
            .map(|k| k as f64 * 0.05)
            .map(|x| (erfc(x) - oracles::erfc(x)).abs())
            .fold(0.0, f64::max);
        let mut worst_g: f64 = 0.0;
        for k in 1..=200 {
            let x = 0.01 + (k - 1) as f64 * 0.1;
            let got = match gamma_fn(x) {
                Ok(v) => v,
                Err(e) => return CheckResult::error("1", NAME, e),
            };
            worst_g = worst_g.max(((got - oracles::gamma(x)) / got).abs());
        }
        CheckResult::new(
            "1",
            NAME,
            worst_h <= 1e-9 && worst_e <= 1e-12 && worst_g <= 1e-12,
            format!(
                "2F1 max rel err {worst_h:.2e} over {points} points (tol 1e-9); erfc max abs err {worst_e:.2e} (tol 1e-12); gamma max rel err {worst_g:.2e} (tol 1e-12)"
            ),
        )
    }

    /// Corrected angle-averaged RIS constant against direct quadrature,
    /// and the measured divergence of the printed form.
    pub fn ris_constant(&self) -> Vec<CheckResult> {
        const NAME: &str = "corrected RIS constant vs numeric average";
        let k = NetworkParams::default().wavenumber;
        let mut worst: f64 = 0.0;
        let mut ratios = Vec::new();
        for i in 1..=9 {
            let rho = i as f64 / 10.0;
            let cfg = match RisConfig::new(0.75, k, 0.0, rho) {
                Ok(c) => c,
                Err(e) => return vec![CheckResult::error("2", NAME, e)],
            };
            let vals = [CrisMode::Corrected, CrisMode::Numeric, CrisMode::Paper].map(|m| c_ris_e(&cfg, m));
            let [Ok(corr), Ok(num), Ok(paper)] = vals else {
                return vec![CheckResult::error("2", NAME, "constant evaluation failed")];
            };
            worst = worst.max(((corr - num) / num).abs());
            ratios.push((rho, num / paper));
        }
        let at_half = ratios[4].1;
        vec![
            CheckResult::new(
                "2",
                NAME,
                worst <= 1e-8,
                format!("max rel err {worst:.2e} over rho_a = 0.1..0.9 (tol 1e-8)"),
            ),
            CheckResult {
                id: "2-printed",
                name: "printed RIS constant vs numeric average",
                status: Status::ExpectedDivergence,
                detail: format!(
                    "numeric/printed ratio {at_half:.6} at rho_a = 0.5; {}",
                    ratios
                        .iter()
                        .map(|(r, q)| format!("{r:.1}: {q:.4}"))
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            },
        ]
    }

    /// Exact aperture integral against the far-field product law at
    /// `alpha_t = 1` with a specular split.
    pub fn far_field(&self) -> CheckResult {
        const NAME: &str = "far-field RIS path loss vs exact aperture integral";
        let l = 0.75;
        let cfg = match RisConfig::new(l, NetworkParams::default().wavenumber, 0.0, 0.5) {
            Ok(c) => c,
            Err(e) => return CheckResult::error("3", NAME, e),
        };
        let theta = PI / 3.0;
        let mut errs = Vec::new();
        for ratio in [10.0, 100.0, 1000.0] {
            let r = ratio * l;
            let ris = Point::new(r, 0.0);
            let bs = Point::new(r + r * (PI - theta).cos(), r * (PI - theta).sin());
            let axis = ris_axis_for(bs, ris, Point::ORIGIN, 0.5);
            let res = LinkGeometry::from_points(bs, ris, Point::ORIGIN, 0.5).and_then(|g| {
                let exact = pathloss_ris_exact(&g, bs, ris, axis, &cfg, 1e-12)?;
                let approx = pathloss_ris_approx(g.r_br, g.r_ru, g.theta_br, g.theta_ru, &cfg, 1.0)?;
                Ok(((exact - approx) / approx).abs())
            });
            match res {
                Ok(e) => errs.push(e),
                Err(e) => return CheckResult::error("3", NAME, e),
            }
        }
        let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
        CheckResult::new(
            "3",
            NAME,
            decreasing && errs[2] < 0.01,
            format!(
                "rel err {:.3e}, {:.3e}, {:.3e} at min(r)/L = 10, 100, 1000 (need < 1% at 1000, strictly decreasing)",
                errs[0], errs[1], errs[2]
            ),
        )
    }

    /// Simulated mean interference at the connected user against its
    /// closed form, at the default density and at a quarter of it.
    pub fn mean_interference(&self) -> CheckResult {
        const NAME: &str = "mean connected-user interference, simulation vs closed form";
        let mut parts = Vec::new();
        let mut pass = true;
        for (label, scale) in [("lambda_b", 1.0), ("lambda_b/4", 0.25)] {
            let mut p = NetworkParams::default();
            p.lambda_b *= scale;
            let est = match estimate_expectations(&p, self.opts.trials, self.opts.seed) {
                Ok(e) => e,
                Err(e) => return CheckResult::error("4", NAME, e),
            };
            let want = match mean_interference_connected(&p) {
                Ok(v) => v,
                Err(e) => return CheckResult::error("4", NAME, e),
            };
            let z = (est.mean_ic_hat.mean - want) / est.mean_ic_hat.std_error();
            pass &= z.abs() <= 3.0;
            parts.push(format!(
                "{label}: {:.4e} vs {want:.4e} W ({z:+.2} standard errors)",
                est.mean_ic_hat.mean
            ));
        }
        CheckResult::new("4", NAME, pass, format!("{} (tol 3)", parts.join("; ")))
    }

    /// Double-integral and Chebyshev/erfc forms of the typical-user
    /// coverage at `alpha_t = 4`.
    pub fn closed_form_equivalence(&self) -> CheckResult {
        const NAME: &str = "typical-user double integral vs closed form at alpha_t = 4";
        let settings = validation_settings();
        let mut worst: f64 = 0.0;
        for snr in default_snr_points() {
            let mut p = NetworkParams::default().with_snr_db(snr);
            p.alpha_t = 4.0;
            match (coverage_typical(&p, &settings), coverage_typical_closed(&p, &settings)) {
                (Ok(a), Ok(b)) => worst = worst.max((a.raw - b.raw).abs()),
                (Err(e), _) | (_, Err(e)) => return CheckResult::error("5", NAME, e),
            }
        }
        CheckResult::new(
            "5",
            NAME,
            worst <= 1e-4,
            format!("max abs diff {worst:.2e} over 90..105 dB (tol 1e-4)"),
        )
    }

    /// Analytic typical coverage bounds the simulation from above and the
    /// analytic connected coverage bounds it from below.
    pub fn bound_directions(&self) -> Vec<CheckResult> {
        const NAME_T: &str = "typical-user analytic coverage is an upper bound";
        const NAME_C: &str = "connected-user analytic coverage is a lower bound";
        let mc = match self.default_sweep() {
            Ok(s) => s,
            Err(e) => return vec![CheckResult::error("6a", NAME_T, e), CheckResult::error("6b", NAME_C, e)],
        };
        let p = NetworkParams::default();
        let typical = match analytic_typical(&p) {
            Ok(v) => v,
            Err(e) => return vec![CheckResult::error("6a", NAME_T, &e), CheckResult::error("6b", NAME_C, e)],
        };
        let connected: Result<Vec<f64>, String> = mc
            .snr_db
            .iter()
            .map(|&s| {
                coverage_connected_closed(&p.clone().with_snr_db(s)).map(|c| c.value).map_err(|e| e.to_string())
            })
            .collect();
        let connected = match connected {
            Ok(v) => v,
            Err(e) => return vec![CheckResult::error("6b", NAME_C, e)],
        };
        let fmt_gaps = |g: &[f64]| g.iter().map(|x| format!("{x:+.3}")).collect::<Vec<_>>().join(" ");

        // margin > 0 means the bound holds with room to spare
        let gap_t: Vec<f64> = typical.iter().zip(&mc.typical).map(|(a, m)| a - m.probability).collect();
        let ok_t = typical
            .iter()
            .zip(&mc.typical)
            .all(|(a, m)| *a >= m.probability - 3.0 * m.ci_halfwidth);
        let gap_c: Vec<f64> = connected.iter().zip(&mc.connected).map(|(a, m)| a - m.probability).collect();
        let ok_c = connected
            .iter()
            .zip(&mc.connected)
            .all(|(a, m)| *a <= m.probability + 3.0 * m.ci_halfwidth);
        vec![
            CheckResult::new(
                "6a",
                NAME_T,
                ok_t,
                format!("analytic - MC at 90..105 dB: {} ({} trials)", fmt_gaps(&gap_t), self.opts.trials),
            ),
            CheckResult::new(
                "6b",
                NAME_C,
                ok_c,
                format!("analytic - MC at 90..105 dB: {} ({} trials)", fmt_gaps(&gap_c), self.opts.trials),
            ),
        ]
    }

    /// RIS-aided NOMA serves the typical user better than a direct link.
    pub fn ris_beats_direct(&self) -> CheckResult {
        const NAME: &str = "typical-user coverage, RIS-aided NOMA above direct-link NOMA";
        let ris = match self.default_sweep() {
            Ok(s) => s,
            Err(e) => return CheckResult::error("7a", NAME, e),
        };
        let direct = match mc_snr_sweep(&NetworkParams::default(), ScenarioMode::TraditionalNoma, self.opts) {
            Ok(s) => s,
            Err(e) => return CheckResult::error("7a", NAME, e),
        };
        let mut worst_z = f64::INFINITY;
        for (a, b) in ris.typical.iter().zip(&direct.typical) {
            let (d, sd) = diff(a, b);
            worst_z = worst_z.min(if sd > 0.0 { d / sd } else if d > 0.0 { f64::INFINITY } else { 0.0 });
        }
        CheckResult::new(
            "7a",
            NAME,
            worst_z > 3.0,
            format!(
                "RIS {:.3}..{:.3} vs direct {:.3}..{:.3}; smallest difference {worst_z:.1} standard errors (need > 3)",
                ris.typical[0].probability,
                ris.typical.last().map_or(0.0, |e| e.probability),
                direct.typical[0].probability,
                direct.typical.last().map_or(0.0, |e| e.probability),
            ),
        )
    }

    /// Coverage nondecreasing in the RIS length and nonincreasing in the
    /// RIS path-loss exponent.
    #[allow(clippy::needless_range_loop)]
    pub fn monotone_in_length_and_exponent(&self) -> CheckResult {
        const NAME: &str = "coverage monotone in RIS length (up) and RIS exponent (down)";
        let base = NetworkParams::default();
        let mut worst_mc = f64::INFINITY;
        let mut analytic_ok = true;
        let mut notes = Vec::new();
        for (label, values, sign) in [("L", [0.75, 1.5, 3.0], 1.0), ("alpha_t", [2.5, 3.0, 4.0], -1.0)] {
            let mut sweeps = Vec::new();
            let mut analytic = Vec::new();
            for v in values {
                let mut p = base.clone();
                if label == "L" {
                    p.half_length = v;
                } else {
                    p.alpha_t = v;
                }
                let mc = if label == "L" && v == base.half_length {
                    self.default_sweep().clone()
                } else {
                    mc_snr_sweep(&p, ScenarioMode::RisNoma, self.opts)
                };
                match (mc, analytic_typical(&p)) {
                    (Ok(m), Ok(a)) => {
                        sweeps.push(m);
                        analytic.push(a);
                    }
                    (Err(e), _) | (_, Err(e)) => return CheckResult::error("7b", NAME, e),
                }
            }
            for w in 0..2 {
                for k in 0..sweeps[w].snr_db.len() {
                    for (lo, hi) in [
                        (&sweeps[w].typical[k], &sweeps[w + 1].typical[k]),
                        (&sweeps[w].connected[k], &sweeps[w + 1].connected[k]),
                    ] {
                        let (d, sd) = diff(hi, lo);
                        let d = sign * d;
                        worst_mc = worst_mc.min(if sd > 0.0 { d / sd } else if d >= 0.0 { 0.0 } else { f64::NEG_INFINITY });
                    }
                    if sign * (analytic[w + 1][k] - analytic[w][k]) < -1e-9 {
                        analytic_ok = false;
                    }
                }
            }
            let at = |i: usize| sweeps[i].typical.last().map_or(0.0, |e| e.probability);
            notes.push(format!(
                "{label} {:?}: MC P_t at 105 dB {:.3}, {:.3}, {:.3}",
                values,
                at(0),
                at(1),
                at(2)
            ));
        }
        CheckResult::new(
            "7b",
            NAME,
            worst_mc >= -3.0 && analytic_ok,
            format!(
                "{}; worst MC step {worst_mc:+.1} standard errors (need >= -3); analytic typical monotone: {analytic_ok}",
                notes.join("; ")
            ),
        )
    }

    /// Halving the BS density moves the typical-user curve more than the
    /// connected-user curve (largest vertical gap over the sweep).
    pub fn density_sensitivity(&self) -> CheckResult {
        const NAME: &str = "density change moves typical-user curve more than connected-user curve";
        let full = match self.default_sweep() {
            Ok(s) => s,
            Err(e) => return CheckResult::error("7c", NAME, e),
        };
        let mut p = NetworkParams::default();
        p.lambda_b *= 0.5;
        let half = match mc_snr_sweep(&p, ScenarioMode::RisNoma, self.opts) {
            Ok(s) => s,
            Err(e) => return CheckResult::error("7c", NAME, e),
        };
        let max_gap = |a: &[CoverageEstimate], b: &[CoverageEstimate]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| diff(x, y))
                .max_by(|x, y| x.0.abs().total_cmp(&y.0.abs()))
                .map(|(d, sd)| (d.abs(), sd))
                .unwrap_or((0.0, 0.0))
        };
        let (gt, st) = max_gap(&full.typical, &half.typical);
        let (gc, sc) = max_gap(&full.connected, &half.connected);
        let sd = st.hypot(sc);
        let analytic = (|| -> Result<(f64, f64), String> {
            let a_full = analytic_typical(&NetworkParams::default())?;
            let a_half = analytic_typical(&p)?;
            let c = |q: &NetworkParams| -> Result<Vec<f64>, String> {
                default_snr_points()
                    .iter()
                    .map(|&s| {
                        coverage_connected_closed(&q.clone().with_snr_db(s))
                            .map(|c| c.value)
                            .map_err(|e| e.to_string())
                    })
                    .collect()
            };
            let (c_full, c_half) = (c(&NetworkParams::default())?, c(&p)?);
            let g = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            Ok((g(&a_full, &a_half), g(&c_full, &c_half)))
        })();
        let analytic_note = match analytic {
            Ok((t, c)) => format!("analytic gaps {t:.3} (typical) and {c:.3} (connected)"),
            Err(e) => format!("analytic gaps unavailable: {e}"),
        };
        CheckResult::new(
            "7c",
            NAME,
            gt - gc > 3.0 * sd,
            format!(
                "MC max gap {gt:.3} (typical) vs {gc:.3} (connected), difference {:.1} standard errors (need > 3); {analytic_note}",
                if sd > 0.0 { (gt - gc) / sd } else { f64::INFINITY }
            ),
        )
    }

    /// The BS-RIS-user angle of a typical BS is uniform on `[0, pi]`.
    ///
    /// The BS is drawn from a window of radius `1000/sqrt(pi lambda_b)`
    /// around the user. The window of the coverage simulator (20 in the
    /// same units) tilts the direction seen from the RIS by
    /// `O(r_ru / R_max)`, which a 10^6-sample KS test already resolves.
    pub fn angle_distribution(&self) -> CheckResult {
        const NAME: &str = "BS-RIS-user angle uniform on [0, pi]";
        let p = NetworkParams::default();
        let n = self.opts.trials;
        let wide = NetworkParams { r_max_norm: ANGLE_WINDOW_NORM, ..p.clone() };
        let theta = sample_typical_link_angles(&wide, n, self.opts.seed);
        let d = ks_uniform(&theta, 0.0, PI);
        let crit = ks_critical_1pct(n);
        let serving = sample_serving_link_angles(&p, n.min(20_000), self.opts.seed)
            .map(|s| format!("{:.4} for the associated BS (diagnostic, {} samples)", ks_uniform(&s, 0.0, PI), s.len()))
            .unwrap_or_else(|e| format!("associated BS sampling failed: {e}"));
        CheckResult::new(
            "8",
            NAME,
            d < crit,
            format!("KS distance {d:.4} vs 1% critical value {crit:.4} at {n} samples; {serving}"),
        )
    }

    /// The sweep CSV is byte-identical with one and with four workers.
    pub fn determinism(&self) -> CheckResult {
        const NAME: &str = "sweep output independent of worker count";
        let cfg = match parse_config(
            &format!(
                "sweep_values = 90, 100\nengines = montecarlo\ntrials = 2000\nseed = {}",
                self.opts.seed
            ),
            "determinism",
        ) {
            Ok(c) => c,
            Err(e) => return CheckResult::error("9", NAME, e),
        };
        let render = |threads: usize| -> Result<Vec<u8>, String> {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| e.to_string())?;
            let out = pool.install(|| run_sweep(&cfg));
            let mut buf = Vec::new();
            write_csv(&cfg, &out, &mut buf).map_err(|e| e.to_string())?;
            Ok(buf)
        };
        match (render(1), render(4)) {
            (Ok(a), Ok(b)) => CheckResult::new(
                "9",
                NAME,
                a == b,
                format!("{} bytes with 1 worker, {} bytes with 4, identical: {}", a.len(), b.len(), a == b),
            ),
            (Err(e), _) | (_, Err(e)) => CheckResult::error("9", NAME, e),
        }
    }
}

//! Monte Carlo ground truth for the coverage probabilities.
//!
//! Every trial draws its own network snapshot from a counter-based stream
//! (`ChaCha8` keyed by the master seed, stream = trial index), so results do
//! not depend on how trials are spread over threads. A trial is reduced to
//! four per-watt quantities ([`TrialDraw`]); the SINRs at any transmit power
//! follow from those, which lets one set of draws serve a whole SNR sweep.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use rayon::prelude::*;

use crate::analytic::{gamma_c_e, gamma_t_e};
use crate::channel::{c_ris, c_ris_clamped_mean, pathloss_direct, RisConfig};
use crate::error::{Error, Result};
use crate::geometry::{nearest_index, Point, Realization};
use crate::params::NetworkParams;

pub const MIN_TRIALS: usize = 1_000;

/// Warm-up draws for empirical expectations use streams with this bit set,
/// disjoint from the main trials.
const WARMUP_STREAM: u64 = 1 << 63;

/// Normal quantile of the reported two-sided 95% intervals.
pub const Z95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioMode {
    RisNoma,
    RisOma,
    TraditionalNoma,
}

impl ScenarioMode {
    pub const ALL: [ScenarioMode; 3] =
        [ScenarioMode::RisNoma, ScenarioMode::RisOma, ScenarioMode::TraditionalNoma];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioMode::RisNoma => "ris_noma",
            ScenarioMode::RisOma => "ris_oma",
            ScenarioMode::TraditionalNoma => "traditional_noma",
        }
    }
}

impl std::fmt::Display for ScenarioMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ScenarioMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ScenarioMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown scenario mode '{s}'")))
    }
}

/// SINR/SNR values of one trial, all linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrSample {
    pub gamma_sic: f64,
    pub gamma_t: f64,
    pub gamma_c: f64,
    pub gamma_t_oma: f64,
    pub gamma_c_oma: f64,
}

/// Received powers of one trial per watt of BS transmit power.
///
/// `i_t` already carries the `rho_t` scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialDraw {
    pub s_t: f64,
    pub i_t: f64,
    pub s_c: f64,
    pub i_c: f64,
}

impl TrialDraw {
    pub fn sinr(&self, p: &NetworkParams, p_b: f64) -> SinrSample {
        let st = p_b * self.s_t;
        let sc = p_b * self.s_c;
        let nt = p_b * self.i_t + p.sigma2;
        let nc = p_b * self.i_c + p.sigma2;
        SinrSample {
            gamma_sic: p.a_c * st / (p.a_t * st + nt),
            gamma_t: p.a_t * st / nt,
            gamma_c: p.a_c * sc / (p.a_t * sc + nc),
            gamma_t_oma: st / nt,
            gamma_c_oma: sc / nc,
        }
    }
}

/// Reference values of the expectations in the SIC-order conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectations {
    /// `E[gamma_c^OMA]`, compared against the typical user's OMA SNR.
    pub gamma_c_oma: f64,
    /// `E[gamma_t^OMA]`, compared against the connected user's OMA SNR.
    pub gamma_t_oma: f64,
}

/// Where the expectations of the coverage events come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpectationSource {
    /// The closed-form approximations `gamma_c^E` and `gamma_t^E`.
    Analytic,
    /// Sample means over `trials / 10` separate warm-up draws.
    Empirical,
}

impl ExpectationSource {
    pub fn as_str(self) -> &'static str {
        match self {
            ExpectationSource::Analytic => "analytic",
            ExpectationSource::Empirical => "empirical",
        }
    }
}

impl std::str::FromStr for ExpectationSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(ExpectationSource::Analytic),
            "empirical" => Ok(ExpectationSource::Empirical),
            _ => Err(Error::domain(format!("unknown expectation source '{s}'"))),
        }
    }
}

/// Coverage events of one trial: `(typical covered, connected covered)`.
pub fn coverage_events(
    s: &SinrSample,
    p: &NetworkParams,
    mode: ScenarioMode,
    e: &Expectations,
) -> (bool, bool) {
    match mode {
        ScenarioMode::RisOma => (s.gamma_t_oma > p.gamma_t_th, s.gamma_c_oma > p.gamma_c_th),
        ScenarioMode::RisNoma | ScenarioMode::TraditionalNoma => (
            s.gamma_sic > p.gamma_sic_th && s.gamma_t > p.gamma_t_th && s.gamma_t_oma > e.gamma_c_oma,
            s.gamma_c > p.gamma_c_th && e.gamma_t_oma > s.gamma_c_oma,
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageEstimate {
    pub probability: f64,
    /// Half-width of the 95% normal-approximation interval.
    pub ci_halfwidth: f64,
    pub trials: usize,
    pub seed: u64,
}

impl CoverageEstimate {
    pub fn from_counts(successes: usize, trials: usize, seed: u64) -> Self {
        let p = successes as f64 / trials as f64;
        CoverageEstimate {
            probability: p,
            ci_halfwidth: Z95 * (p * (1.0 - p) / trials as f64).sqrt(),
            trials,
            seed,
        }
    }

    /// Standard error implied by the interval.
    pub fn std_error(&self) -> f64 {
        self.ci_halfwidth / Z95
    }
}

/// The random stream of trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Per-configuration constants of the sampler.
#[derive(Debug, Clone)]
pub struct Simulator {
    params: NetworkParams,
    mode: ScenarioMode,
    ris: RisConfig,
    fading_t: Gamma<f64>,
    fading_c: Gamma<f64>,
    r_max: f64,
    /// Mean RIS-reflected interference from beyond `r_max`, per watt, times
    /// `r_ru^alpha_t`.
    tail_ris: f64,
    /// Mean direct-link interference from beyond `r_max`, per watt.
    tail_direct: f64,
    /// Poisson count of the connected user's interferers.
    connected_count: Poisson<f64>,
}

impl Simulator {
    pub fn new(p: &NetworkParams, mode: ScenarioMode) -> Result<Self> {
        p.validate()?;
        let ris = p.ris_config()?;
        let r_max = p.r_max();
        let two_pi_lam = 2.0 * PI * p.lambda_b;
        let tail_ris = c_ris_clamped_mean(&ris)? * two_pi_lam * r_max.powf(2.0 - p.alpha_t)
            / (p.alpha_t - 2.0);
        let tail_direct =
            p.intercept_c * two_pi_lam * r_max.powf(2.0 - p.alpha_c) / (p.alpha_c - 2.0);
        let mean_c = p.lambda_b * PI * (r_max * r_max - p.r_c * p.r_c);
        Ok(Simulator {
            params: p.clone(),
            mode,
            ris,
            fading_t: p.fading_t()?.power_distribution(),
            fading_c: p.fading_c()?.power_distribution(),
            r_max,
            tail_ris,
            tail_direct,
            connected_count: Poisson::new(mean_c)
                .map_err(|e| Error::domain(format!("Poisson mean {mean_c}: {e}")))?,
        })
    }

    pub fn params(&self) -> &NetworkParams {
        &self.params
    }

    pub fn mode(&self) -> ScenarioMode {
        self.mode
    }

    /// RIS gain of the path `bs -> ris -> origin` from the actual angle at
    /// the RIS, split in the ratio `rho_a` and clamped.
    fn ris_gain(&self, bs: Point, ris: Point, r_ru: f64) -> f64 {
        let (bx, by) = (bs.x - ris.x, bs.y - ris.y);
        let (ux, uy) = (-ris.x, -ris.y);
        // angle between the directions to the BS and to the user
        let theta = (bx * uy - by * ux).abs().atan2(bx * ux + by * uy);
        let rho = self.ris.rho_a;
        let c = c_ris(rho * theta, (1.0 - rho) * theta, self.ris.half_length);
        c * c * (bx.hypot(by) * r_ru).powf(-self.params.alpha_t)
    }

    /// Path gains of the typical user's serving link and of every
    /// interfering BS, in `bs_points` order with the serving entry skipped.
    pub fn typical_link_gains(&self, real: &Realization) -> Result<(f64, Vec<f64>)> {
        let p = &self.params;
        let (serving, mut gains) = match self.mode {
            ScenarioMode::RisNoma | ScenarioMode::RisOma => {
                let r_ru = real.ris.norm();
                let gains = real.bs_points.iter().map(|&b| self.ris_gain(b, real.ris, r_ru));
                (real.associated_index, gains.collect())
            }
            ScenarioMode::TraditionalNoma => {
                let i = nearest_index(&real.bs_points, Point::ORIGIN).expect("nonempty");
                let gains = real
                    .bs_points
                    .iter()
                    .map(|b| pathloss_direct(b.norm(), p.intercept_c, p.alpha_c))
                    .collect::<Result<Vec<_>>>()?;
                (i, gains)
            }
        };
        let s = gains.remove(serving);
        Ok((s, gains))
    }

    /// Samples one trial.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, stream: u64) -> Result<TrialDraw> {
        let p = &self.params;
        let real = Realization::sample(p.lambda_b, p.r_l, self.r_max, p.rho_a, stream, rng)?;
        let (serving, interferers) = self.typical_link_gains(&real)?;
        let s_t = self.fading_t.sample(rng) * serving;
        let field: f64 = interferers.iter().map(|g| g * self.fading_t.sample(rng)).sum();
        let i_t = match self.mode {
            ScenarioMode::RisNoma | ScenarioMode::RisOma => {
                let tail = self.tail_ris * real.ris.norm().powf(-p.alpha_t);
                p.rho_t * (field + tail)
            }
            ScenarioMode::TraditionalNoma => field + self.tail_direct,
        };

        // The connected user sees its own PPP outside the disk of radius r_c.
        let s_c = self.fading_c.sample(rng) * pathloss_direct(p.r_c, p.intercept_c, p.alpha_c)?;
        let n = self.connected_count.sample(rng) as usize;
        let (lo2, hi2) = (p.r_c * p.r_c, self.r_max * self.r_max);
        let mut i_c = self.tail_direct;
        for _ in 0..n {
            let d2: f64 = rng.random_range(lo2..hi2);
            i_c += self.fading_t.sample(rng) * p.intercept_c * d2.powf(-0.5 * p.alpha_c);
        }
        Ok(TrialDraw { s_t, i_t, s_c, i_c })
    }

    /// Draws trials `0..count` of the given stream family, in order.
    pub fn draws(&self, seed: u64, family: u64, count: usize) -> Result<Vec<TrialDraw>> {
        (0..count)
            .into_par_iter()
            .with_min_len(64)
            .map(|i| {
                let stream = family | i as u64;
                self.draw(&mut trial_rng(seed, stream), stream)
            })
            .collect()
    }
}

/// One trial at the configured transmit power.
pub fn run_trial<R: Rng + ?Sized>(
    p: &NetworkParams,
    mode: ScenarioMode,
    rng: &mut R,
) -> Result<SinrSample> {
    let sim = Simulator::new(p, mode)?;
    Ok(sim.draw(rng, 0)?.sinr(p, p.p_b))
}

fn check_trials(trials: usize) -> Result<()> {
    if trials < MIN_TRIALS {
        Err(Error::domain(format!("at least {MIN_TRIALS} trials required, got {trials}")))
    } else {
        Ok(())
    }
}

fn mean(values: impl Iterator<Item = f64>) -> (f64, f64, usize) {
    // two-pass for the variance; sequential so the sum order is fixed
    let v: Vec<f64> = values.collect();
    let n = v.len();
    let m = v.iter().sum::<f64>() / n as f64;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n.max(2) - 1) as f64;
    (m, var, n)
}

/// Typical- and connected-user coverage at the configured power.
pub fn estimate_coverage(
    p: &NetworkParams,
    mode: ScenarioMode,
    trials: usize,
    seed: u64,
) -> Result<(CoverageEstimate, CoverageEstimate)> {
    estimate_coverage_with(p, mode, trials, seed, ExpectationSource::Analytic)
}

pub fn estimate_coverage_with(
    p: &NetworkParams,
    mode: ScenarioMode,
    trials: usize,
    seed: u64,
    source: ExpectationSource,
) -> Result<(CoverageEstimate, CoverageEstimate)> {
    Ok(estimate_coverage_at_powers(p, mode, &[p.p_b], trials, seed, source)?[0])
}

/// Coverage at several transmit powers from a single set of draws.
pub fn estimate_coverage_at_powers(
    p: &NetworkParams,
    mode: ScenarioMode,
    powers: &[f64],
    trials: usize,
    seed: u64,
    source: ExpectationSource,
) -> Result<Vec<(CoverageEstimate, CoverageEstimate)>> {
    check_trials(trials)?;
    let sim = Simulator::new(p, mode)?;
    let draws = sim.draws(seed, 0, trials)?;
    let warmup = match source {
        ExpectationSource::Analytic => Vec::new(),
        ExpectationSource::Empirical => sim.draws(seed, WARMUP_STREAM, trials / 10)?,
    };
    powers
        .iter()
        .map(|&p_b| {
            let mut at = p.clone();
            at.p_b = p_b;
            let e = match source {
                ExpectationSource::Analytic => Expectations {
                    gamma_c_oma: gamma_c_e(&at)?,
                    gamma_t_oma: gamma_t_e(&at),
                },
                ExpectationSource::Empirical => Expectations {
                    gamma_c_oma: mean(warmup.iter().map(|d| d.sinr(&at, p_b).gamma_c_oma)).0,
                    gamma_t_oma: mean(warmup.iter().map(|d| d.sinr(&at, p_b).gamma_t_oma)).0,
                },
            };
            let (mut nt, mut nc) = (0, 0);
            for d in &draws {
                let (t, c) = coverage_events(&d.sinr(&at, p_b), &at, mode, &e);
                nt += t as usize;
                nc += c as usize;
            }
            Ok((
                CoverageEstimate::from_counts(nt, trials, seed),
                CoverageEstimate::from_counts(nc, trials, seed),
            ))
        })
        .collect()
}

/// A sample mean with its 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub ci_halfwidth: f64,
}

impl MeanEstimate {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let (m, var, n) = mean(values);
        MeanEstimate { mean: m, ci_halfwidth: Z95 * (var / n as f64).sqrt() }
    }

    pub fn std_error(&self) -> f64 {
        self.ci_halfwidth / Z95
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationEstimates {
    pub gamma_c_e_hat: MeanEstimate,
    pub gamma_t_e_hat: MeanEstimate,
    /// Mean interference at the connected user, in watts.
    pub mean_ic_hat: MeanEstimate,
    pub trials: usize,
}

/// Empirical means of the two OMA SNRs and of the connected user's
/// interference, under RIS-aided NOMA at the configured power.
pub fn estimate_expectations(
    p: &NetworkParams,
    trials: usize,
    seed: u64,
) -> Result<ExpectationEstimates> {
    check_trials(trials)?;
    let sim = Simulator::new(p, ScenarioMode::RisNoma)?;
    let draws = sim.draws(seed, 0, trials)?;
    Ok(ExpectationEstimates {
        gamma_c_e_hat: MeanEstimate::of(draws.iter().map(|d| d.sinr(p, p.p_b).gamma_c_oma)),
        gamma_t_e_hat: MeanEstimate::of(draws.iter().map(|d| d.sinr(p, p.p_b).gamma_t_oma)),
        mean_ic_hat: MeanEstimate::of(draws.iter().map(|d| d.i_c * p.p_b)),
        trials,
    })
}

/// BS-RIS-user angles for a BS placed uniformly on the simulated annulus,
/// i.e. a typical point of the BS process.
pub fn sample_typical_link_angles(p: &NetworkParams, samples: usize, seed: u64) -> Vec<f64> {
    let (lo2, hi2) = (p.r_l * p.r_l, p.r_max().powi(2));
    (0..samples)
        .into_par_iter()
        .with_min_len(1024)
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let ris = crate::geometry::sample_ris(p.r_l, &mut rng);
            let bs = Point::from_polar(
                rng.random_range(lo2..hi2).sqrt(),
                rng.random_range(0.0..2.0 * PI),
            );
            crate::geometry::compute_link_angle(bs, ris, Point::ORIGIN).unwrap_or(0.0)
        })
        .collect()
}

/// BS-RIS-user angles of the associated (nearest-to-RIS) BS.
pub fn sample_serving_link_angles(
    p: &NetworkParams,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let r_max = p.r_max();
    (0..samples)
        .into_par_iter()
        .with_min_len(256)
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let real = Realization::sample(p.lambda_b, p.r_l, r_max, p.rho_a, i as u64, &mut rng)?;
            crate::geometry::compute_link_angle(real.serving_bs(), real.ris, Point::ORIGIN)
        })
        .collect()
}

/// One-sample Kolmogorov-Smirnov distance to the uniform law on `[lo, hi]`.
pub fn ks_uniform(samples: &[f64], lo: f64, hi: f64) -> f64 {
    let mut v: Vec<f64> = samples.iter().map(|x| (x - lo) / (hi - lo)).collect();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &u)| {
            let u = u.clamp(0.0, 1.0);
            ((i as f64 + 1.0) / n - u).max(u - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value of the KS distance for `n` samples.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

//! Run configuration: a flat `key = value` text file with `#` comments.
//!
//! Missing keys take the default network parameters. Powers may be given
//! in dBm (`p_b_dbm`, `sigma2_dbm`) or in watts (`p_b_w`, `sigma2_w`) and
//! are converted to watts once, here. Serialization always writes watts
//! with round-trip float formatting so that reloading is lossless.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ris_coverage_core::analytic::AnalyticSettings;
use ris_coverage_core::channel::CrisMode;
use ris_coverage_core::mcsim::{ExpectationSource, ScenarioMode, MIN_TRIALS};
use ris_coverage_core::params::dbm_to_watts;
use ris_coverage_core::{Error as CoreError, NetworkParams};

use crate::{CliError, Result};

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// `P_b / sigma^2` in dB.
    TransmitSnrDb,
    /// RIS half-length `L` in metres.
    RisHalflength,
    AlphaT,
    LambdaB,
}

impl SweepVariable {
    pub const ALL: [SweepVariable; 4] = [
        SweepVariable::TransmitSnrDb,
        SweepVariable::RisHalflength,
        SweepVariable::AlphaT,
        SweepVariable::LambdaB,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::TransmitSnrDb => "transmit_snr_db",
            SweepVariable::RisHalflength => "ris_halflength",
            SweepVariable::AlphaT => "alpha_t",
            SweepVariable::LambdaB => "lambda_b",
        }
    }

    /// `base` with this variable set to `value`.
    pub fn apply(self, base: &NetworkParams, value: f64) -> NetworkParams {
        let mut p = base.clone();
        match self {
            SweepVariable::TransmitSnrDb => p = p.with_snr_db(value),
            SweepVariable::RisHalflength => p.half_length = value,
            SweepVariable::AlphaT => p.alpha_t = value,
            SweepVariable::LambdaB => p.lambda_b = value,
        }
        p
    }
}

impl FromStr for SweepVariable {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SweepVariable::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| format!("unknown sweep variable '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engines {
    pub analytic: bool,
    pub montecarlo: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    /// Nonempty and strictly increasing.
    pub values: Vec<f64>,
    /// Nonempty, without duplicates, in [`ScenarioMode::ALL`] order.
    pub modes: Vec<ScenarioMode>,
    pub engines: Engines,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: NetworkParams,
    pub analytic: AnalyticSettings,
    pub expectations: ExpectationSource,
    pub sweep: SweepSpec,
    pub trials: usize,
    pub seed: u64,
    pub output: PathBuf,
    pub emit_plot: bool,
}

/// The eight-point transmit-SNR sweep over [90, 105] dB.
pub fn default_snr_points() -> Vec<f64> {
    (0..8).map(|k| 90.0 + 15.0 * k as f64 / 7.0).collect()
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: NetworkParams::default(),
            analytic: AnalyticSettings::default(),
            expectations: ExpectationSource::Analytic,
            sweep: SweepSpec {
                variable: SweepVariable::TransmitSnrDb,
                values: default_snr_points(),
                modes: ScenarioMode::ALL.to_vec(),
                engines: Engines { analytic: true, montecarlo: true },
            },
            trials: 100_000,
            seed: 42,
            output: PathBuf::from("coverage.csv"),
            emit_plot: false,
        }
    }
}

/// Keys accepted in a config file, in serialization order.
pub const KEYS: &[&str] = &[
    "lambda_b",
    "r_l",
    "r_c",
    "p_b_w",
    "p_b_dbm",
    "sigma2_w",
    "sigma2_dbm",
    "a_c",
    "a_t",
    "alpha_c",
    "alpha_t",
    "intercept_c",
    "half_length",
    "wavenumber",
    "phase_offset",
    "m_t",
    "m_c",
    "rho_t",
    "rho_a",
    "gamma_sic_th",
    "gamma_t_th",
    "gamma_c_th",
    "bandwidth",
    "r_max_norm",
    "cris_mode",
    "chebyshev_order",
    "analytic_tol",
    "expectations",
    "sweep_variable",
    "sweep_values",
    "modes",
    "engines",
    "trials",
    "seed",
    "output",
    "emit_plot",
];

struct Entry {
    line: usize,
    value: String,
}

struct Entries<'a> {
    path: &'a str,
    map: HashMap<String, Entry>,
}

impl Entries<'_> {
    fn err(&self, line: usize, msg: impl Into<String>) -> CliError {
        CliError::Parse { path: self.path.to_string(), line, msg: msg.into() }
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.map.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|err| self.err(e.line, format!("{key}: cannot parse '{}': {err}", e.value))),
        }
    }

    fn set<T: FromStr>(&self, key: &str, target: &mut T) -> Result<()>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = self.parse(key)? {
            *target = v;
        }
        Ok(())
    }

    /// A value given either in watts or in dBm, but not both.
    fn power(&self, watts: &str, dbm: &str) -> Result<Option<f64>> {
        match (self.parse::<f64>(watts)?, self.parse::<f64>(dbm)?) {
            (Some(_), Some(_)) => {
                Err(self.err(self.map[dbm].line, format!("{watts} and {dbm} are mutually exclusive")))
            }
            (Some(w), None) => Ok(Some(w)),
            (None, Some(d)) => Ok(Some(dbm_to_watts(d))),
            (None, None) => Ok(None),
        }
    }

    fn list<T>(&self, key: &str, f: impl Fn(&str) -> std::result::Result<T, String>) -> Result<Option<Vec<T>>> {
        let Some(e) = self.map.get(key) else { return Ok(None) };
        e.value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| f(s).map_err(|m| self.err(e.line, format!("{key}: {m}"))))
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    fn line_of(&self, key: &str) -> usize {
        self.map.get(key).map_or(0, |e| e.line)
    }
}

/// Parses config text; `origin` names the source in error messages.
pub fn parse_config(text: &str, origin: &str) -> Result<RunConfig> {
    let mut entries = Entries { path: origin, map: HashMap::new() };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(entries.err(line, format!("expected `key = value`, found '{content}'")));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(entries.err(line, format!("unknown key '{key}'")));
        }
        if let Some(prev) = entries.map.get(key) {
            return Err(entries.err(line, format!("duplicate key '{key}' (first set on line {})", prev.line)));
        }
        entries.map.insert(key.to_string(), Entry { line, value: value.to_string() });
    }
    let e = &entries;

    let mut cfg = RunConfig::default();
    let p = &mut cfg.params;
    e.set("lambda_b", &mut p.lambda_b)?;
    e.set("r_l", &mut p.r_l)?;
    e.set("r_c", &mut p.r_c)?;
    if let Some(s) = e.power("sigma2_w", "sigma2_dbm")? {
        p.sigma2 = s;
    }
    if let Some(pb) = e.power("p_b_w", "p_b_dbm")? {
        p.p_b = pb;
    }
    // a single power fraction fixes the other through a_c + a_t = 1
    match (e.parse::<f64>("a_c")?, e.parse::<f64>("a_t")?) {
        (Some(ac), Some(at)) => (p.a_c, p.a_t) = (ac, at),
        (Some(ac), None) => (p.a_c, p.a_t) = (ac, 1.0 - ac),
        (None, Some(at)) => (p.a_c, p.a_t) = (1.0 - at, at),
        (None, None) => {}
    }
    e.set("alpha_c", &mut p.alpha_c)?;
    e.set("alpha_t", &mut p.alpha_t)?;
    e.set("intercept_c", &mut p.intercept_c)?;
    e.set("half_length", &mut p.half_length)?;
    e.set("wavenumber", &mut p.wavenumber)?;
    e.set("phase_offset", &mut p.phase_offset)?;
    e.set("m_t", &mut p.m_t)?;
    e.set("m_c", &mut p.m_c)?;
    e.set("rho_t", &mut p.rho_t)?;
    e.set("rho_a", &mut p.rho_a)?;
    e.set("gamma_sic_th", &mut p.gamma_sic_th)?;
    e.set("gamma_t_th", &mut p.gamma_t_th)?;
    e.set("gamma_c_th", &mut p.gamma_c_th)?;
    e.set("bandwidth", &mut p.bandwidth)?;
    e.set("r_max_norm", &mut p.r_max_norm)?;
    // rates follow the thresholds and the bandwidth
    let (gt, gc) = (p.gamma_t_th, p.gamma_c_th);
    p.set_gamma_t_th(gt);
    p.set_gamma_c_th(gc);

    if let Some(v) = e.parse::<String>("cris_mode")? {
        cfg.analytic.cris_mode = CrisMode::from_str(&v)
            .map_err(|err| e.err(e.line_of("cris_mode"), err.to_string()))?;
    }
    e.set("chebyshev_order", &mut cfg.analytic.chebyshev_order)?;
    e.set("analytic_tol", &mut cfg.analytic.tol)?;
    if let Some(v) = e.parse::<String>("expectations")? {
        cfg.expectations = ExpectationSource::from_str(&v)
            .map_err(|err| e.err(e.line_of("expectations"), err.to_string()))?;
    }
    e.set("sweep_variable", &mut cfg.sweep.variable)?;
    if let Some(v) = e.list("sweep_values", |s| s.parse::<f64>().map_err(|err| format!("'{s}': {err}")))? {
        cfg.sweep.values = v;
    }
    if let Some(v) = e.list("modes", |s| ScenarioMode::from_str(s).map_err(|err| err.to_string()))? {
        cfg.sweep.modes = ScenarioMode::ALL.into_iter().filter(|m| v.contains(m)).collect();
    }
    if let Some(v) = e.list("engines", |s| match s {
        "analytic" | "montecarlo" => Ok(s.to_string()),
        _ => Err(format!("unknown engine '{s}' (expected analytic or montecarlo)")),
    })? {
        cfg.sweep.engines = Engines {
            analytic: v.iter().any(|s| s == "analytic"),
            montecarlo: v.iter().any(|s| s == "montecarlo"),
        };
    }
    e.set("trials", &mut cfg.trials)?;
    e.set("seed", &mut cfg.seed)?;
    if let Some(v) = e.parse::<String>("output")? {
        cfg.output = PathBuf::from(v);
    }
    e.set("emit_plot", &mut cfg.emit_plot)?;

    validate(&cfg, e)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig, e: &Entries) -> Result<()> {
    cfg.params.validate()?;
    let s = &cfg.sweep;
    if s.values.is_empty() {
        return Err(e.err(e.line_of("sweep_values"), "sweep_values must be nonempty"));
    }
    if s.values.iter().any(|v| !v.is_finite()) || s.values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(e.err(e.line_of("sweep_values"), "sweep_values must be finite and strictly increasing"));
    }
    if s.modes.is_empty() {
        return Err(e.err(e.line_of("modes"), "modes must be nonempty"));
    }
    if !(s.engines.analytic || s.engines.montecarlo) {
        return Err(e.err(e.line_of("engines"), "engines must be nonempty"));
    }
    if s.engines.montecarlo && cfg.trials < MIN_TRIALS {
        return Err(e.err(e.line_of("trials"), format!("trials must be at least {MIN_TRIALS}")));
    }
    if cfg.analytic.chebyshev_order == 0 {
        return Err(e.err(e.line_of("chebyshev_order"), "chebyshev_order must be >= 1"));
    }
    if !(cfg.analytic.tol > 0.0) {
        return Err(e.err(e.line_of("analytic_tol"), "analytic_tol must be positive"));
    }
    // every sweep point must itself be a valid parameter set
    for &v in &s.values {
        s.variable.apply(&cfg.params, v).validate().map_err(|err| match err {
            CoreError::Config(m) => {
                CoreError::Config(format!("at {} = {v}: {m}", s.variable.as_str()))
            }
            other => other,
        })?;
    }
    Ok(())
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text, &path.display().to_string())
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

/// Writes every key, so `parse_config(&serialize(cfg))` reproduces `cfg`.
pub fn serialize(cfg: &RunConfig) -> String {
    let p = &cfg.params;
    let mut out = String::from("# ris-coverage run configuration\n");
    let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").expect("string write");
    kv("lambda_b", format!("{:?}", p.lambda_b));
    kv("r_l", format!("{:?}", p.r_l));
    kv("r_c", format!("{:?}", p.r_c));
    kv("p_b_w", format!("{:?}", p.p_b));
    kv("sigma2_w", format!("{:?}", p.sigma2));
    kv("a_c", format!("{:?}", p.a_c));
    kv("a_t", format!("{:?}", p.a_t));
    kv("alpha_c", format!("{:?}", p.alpha_c));
    kv("alpha_t", format!("{:?}", p.alpha_t));
    kv("intercept_c", format!("{:?}", p.intercept_c));
    kv("half_length", format!("{:?}", p.half_length));
    kv("wavenumber", format!("{:?}", p.wavenumber));
    kv("phase_offset", format!("{:?}", p.phase_offset));
    kv("m_t", p.m_t.to_string());
    kv("m_c", p.m_c.to_string());
    kv("rho_t", format!("{:?}", p.rho_t));
    kv("rho_a", format!("{:?}", p.rho_a));
    kv("gamma_sic_th", format!("{:?}", p.gamma_sic_th));
    kv("gamma_t_th", format!("{:?}", p.gamma_t_th));
    kv("gamma_c_th", format!("{:?}", p.gamma_c_th));
    kv("bandwidth", format!("{:?}", p.bandwidth));
    kv("r_max_norm", format!("{:?}", p.r_max_norm));
    kv("cris_mode", cfg.analytic.cris_mode.as_str().to_string());
    kv("chebyshev_order", cfg.analytic.chebyshev_order.to_string());
    kv("analytic_tol", format!("{:?}", cfg.analytic.tol));
    kv("expectations", cfg.expectations.as_str().to_string());
    kv("sweep_variable", cfg.sweep.variable.as_str().to_string());
    kv("sweep_values", join(&cfg.sweep.values, |v| format!("{v:?}")));
    kv("modes", join(&cfg.sweep.modes, |m| m.as_str().to_string()));
    let engines: Vec<&str> = [
        (cfg.sweep.engines.analytic, "analytic"),
        (cfg.sweep.engines.montecarlo, "montecarlo"),
    ]
    .into_iter()
    .filter_map(|(on, name)| on.then_some(name))
    .collect();
    kv("engines", engines.join(", "));
    kv("trials", cfg.trials.to_string());
    kv("seed", cfg.seed.to_string());
    kv("output", cfg.output.display().to_string());
    kv("emit_plot", cfg.emit_plot.to_string());
    out
}

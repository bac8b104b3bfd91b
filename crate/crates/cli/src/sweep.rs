//! Parameter sweeps over both engines and their CSV output.
//!
//! The CSV starts with one `#` metadata line (sweep variable, `r_c`, the
//! analytic constant mode and the expectation source), followed by the
//! header row
//! `sweep_value,mode,p_t_analytic,p_c_analytic,p_t_mc,p_t_ci,p_c_mc,p_c_ci,trials,seed`.
//! The analytic engine covers RIS-aided NOMA only; its columns are empty
//! for the other modes, for disabled engines, and for failed evaluations.
//! Failures are listed in a `<output>.diagnostics.txt` sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};

use ris_coverage_core::analytic::coverage_pair;
use ris_coverage_core::mcsim::{
    estimate_coverage_at_powers, estimate_coverage_with, CoverageEstimate, ScenarioMode,
};

use crate::config::{RunConfig, SweepVariable};
use crate::{plot, CliError, Result};

pub const CSV_COLUMNS: [&str; 10] = [
    "sweep_value",
    "mode",
    "p_t_analytic",
    "p_c_analytic",
    "p_t_mc",
    "p_t_ci",
    "p_c_mc",
    "p_c_ci",
    "trials",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub mode: ScenarioMode,
    pub p_t_analytic: Option<f64>,
    pub p_c_analytic: Option<f64>,
    pub p_t_mc: Option<CoverageEstimate>,
    pub p_c_mc: Option<CoverageEstimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub sweep_value: f64,
    pub mode: ScenarioMode,
    pub engine: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub diagnostics: Vec<Diagnostic>,
}

type McResult = std::result::Result<(CoverageEstimate, CoverageEstimate), String>;

/// Monte Carlo estimates of one mode at every sweep value. A transmit-SNR
/// sweep evaluates all powers on one shared set of draws.
fn monte_carlo(cfg: &RunConfig, mode: ScenarioMode) -> Vec<McResult> {
    let s = &cfg.sweep;
    if s.variable == SweepVariable::TransmitSnrDb {
        let powers: Vec<f64> =
            s.values.iter().map(|&v| s.variable.apply(&cfg.params, v).p_b).collect();
        match estimate_coverage_at_powers(&cfg.params, mode, &powers, cfg.trials, cfg.seed, cfg.expectations)
        {
            Ok(v) => v.into_iter().map(Ok).collect(),
            Err(e) => vec![Err(e.to_string()); powers.len()],
        }
    } else {
        s.values
            .iter()
            .map(|&v| {
                let p = s.variable.apply(&cfg.params, v);
                estimate_coverage_with(&p, mode, cfg.trials, cfg.seed, cfg.expectations)
                    .map_err(|e| e.to_string())
            })
            .collect()
    }
}

/// Evaluates every (sweep value, mode) pair of the configuration.
pub fn run_sweep(cfg: &RunConfig) -> SweepOutput {
    let s = &cfg.sweep;
    let mut out = SweepOutput::default();
    let mc: Vec<Option<Vec<McResult>>> = s
        .modes
        .iter()
        .map(|&m| {
            s.engines.montecarlo.then(|| {
                log::info!("monte carlo: {m}, {} points x {} trials", s.values.len(), cfg.trials);
                monte_carlo(cfg, m)
            })
        })
        .collect();
    for (i, &v) in s.values.iter().enumerate() {
        let p = s.variable.apply(&cfg.params, v);
        let analytic = (s.engines.analytic && s.modes.contains(&ScenarioMode::RisNoma))
            .then(|| coverage_pair(&p, &cfg.analytic));
        for (k, &mode) in s.modes.iter().enumerate() {
            let mut row = SweepRow {
                sweep_value: v,
                mode,
                p_t_analytic: None,
                p_c_analytic: None,
                p_t_mc: None,
                p_c_mc: None,
            };
            if mode == ScenarioMode::RisNoma {
                match &analytic {
                    Some(Ok(pair)) => {
                        row.p_t_analytic = Some(pair.p_typical);
                        row.p_c_analytic = Some(pair.p_connected);
                    }
                    Some(Err(e)) => out.diagnostics.push(Diagnostic {
                        sweep_value: v,
                        mode,
                        engine: "analytic",
                        message: e.to_string(),
                    }),
                    None => {}
                }
            }
            match mc[k].as_ref().map(|r| &r[i]) {
                Some(Ok((t, c))) => {
                    row.p_t_mc = Some(*t);
                    row.p_c_mc = Some(*c);
                }
                Some(Err(e)) => out.diagnostics.push(Diagnostic {
                    sweep_value: v,
                    mode,
                    engine: "montecarlo",
                    message: e.clone(),
                }),
                None => {}
            }
            out.rows.push(row);
        }
    }
    out
}

/// The `#` metadata line heading the CSV.
pub fn metadata_line(cfg: &RunConfig) -> String {
    let p = &cfg.params;
    format!(
        "# ris-coverage sweep: sweep_variable={} r_c={} m lambda_b={} per m^2 p_b={} W sigma2={} W cris_mode={} expectations={}",
        cfg.sweep.variable.as_str(),
        p.r_c,
        p.lambda_b,
        p.p_b,
        p.sigma2,
        cfg.analytic.cris_mode.as_str(),
        cfg.expectations.as_str(),
    )
}

fn field(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Writes the metadata line, the header and one record per row.
pub fn write_csv<W: Write>(cfg: &RunConfig, out: &SweepOutput, mut w: W) -> Result<()> {
    writeln!(w, "{}", metadata_line(cfg)).map_err(|e| CliError::io(&cfg.output, e))?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(CSV_COLUMNS)?;
    for r in &out.rows {
        csv.write_record([
            r.sweep_value.to_string(),
            r.mode.as_str().to_string(),
            field(r.p_t_analytic),
            field(r.p_c_analytic),
            field(r.p_t_mc.map(|e| e.probability)),
            field(r.p_t_mc.map(|e| e.ci_halfwidth)),
            field(r.p_c_mc.map(|e| e.probability)),
            field(r.p_c_mc.map(|e| e.ci_halfwidth)),
            r.p_t_mc.map_or_else(String::new, |e| e.trials.to_string()),
            cfg.seed.to_string(),
        ])?;
    }
    csv.flush().map_err(|e| CliError::io(&cfg.output, e))?;
    Ok(())
}

/// `coverage.csv` -> `coverage.<suffix>`.
pub fn sibling_path(output: &Path, suffix: &str) -> PathBuf {
    let stem = output.file_stem().map_or_else(|| "coverage".into(), |s| s.to_string_lossy().into_owned());
    output.with_file_name(format!("{stem}.{suffix}"))
}

pub fn diagnostics_path(output: &Path) -> PathBuf {
    sibling_path(output, "diagnostics.txt")
}

/// Writes the CSV, the diagnostics sidecar when anything failed, and the
/// plot script when requested. Evaluation failures are reported as an
/// error after all files are written.
pub fn write_outputs(cfg: &RunConfig, out: &SweepOutput) -> Result<()> {
    let file = std::fs::File::create(&cfg.output).map_err(|e| CliError::io(&cfg.output, e))?;
    write_csv(cfg, out, std::io::BufWriter::new(file))?;
    let sidecar = diagnostics_path(&cfg.output);
    if !out.diagnostics.is_empty() {
        let text: String = out
            .diagnostics
            .iter()
            .map(|d| format!("{} {} {}: {}\n", d.sweep_value, d.mode, d.engine, d.message))
            .collect();
        std::fs::write(&sidecar, text).map_err(|e| CliError::io(&sidecar, e))?;
    }
    if cfg.emit_plot {
        let path = sibling_path(&cfg.output, "gp");
        let script = plot::plot_script(cfg, &out.rows, &cfg.output);
        std::fs::write(&path, script).map_err(|e| CliError::io(&path, e))?;
    }
    if out.diagnostics.is_empty() {
        Ok(())
    } else {
        Err(CliError::SweepFailures { failed: out.diagnostics.len(), sidecar })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn analytic_only_leaves_mc_columns_empty() {
        let cfg = parse_config("engines = analytic\nsweep_values = 95", "t").unwrap();
        let out = run_sweep(&cfg);
        assert_eq!(out.rows.len(), 3);
        assert!(out.diagnostics.is_empty());
        let mut buf = Vec::new();
        write_csv(&cfg, &out, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with('#') && lines[0].contains("r_c=100"));
        assert_eq!(lines[1], CSV_COLUMNS.join(","));
        let noma: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(noma[1], "ris_noma");
        assert!(!noma[2].is_empty() && !noma[3].is_empty());
        assert!(noma[4..9].iter().all(|f| f.is_empty()));
        assert_eq!(noma[9], "42");
        let oma: Vec<&str> = lines[3].split(',').collect();
        assert!(oma[2..9].iter().all(|f| f.is_empty()));
    }

    #[test]
    fn rows_in_sweep_then_mode_order() {
        let cfg = parse_config(
            "engines = montecarlo\ntrials = 1000\nsweep_values = 90, 100\nmodes = ris_oma, ris_noma",
            "t",
        )
        .unwrap();
        let out = run_sweep(&cfg);
        let order: Vec<(f64, ScenarioMode)> = out.rows.iter().map(|r| (r.sweep_value, r.mode)).collect();
        assert_eq!(
            order,
            vec![
                (90.0, ScenarioMode::RisNoma),
                (90.0, ScenarioMode::RisOma),
                (100.0, ScenarioMode::RisNoma),
                (100.0, ScenarioMode::RisOma),
            ]
        );
        assert!(out.rows.iter().all(|r| r.p_t_mc.is_some() && r.p_t_analytic.is_none()));
    }

    #[test]
    fn sibling_names() {
        assert_eq!(diagnostics_path(Path::new("out/a.csv")), Path::new("out/a.diagnostics.txt"));
        assert_eq!(sibling_path(Path::new("a.csv"), "gp"), Path::new("a.gp"));
    }
}

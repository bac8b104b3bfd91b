//! Gnuplot script drawing coverage against the sweep variable, one panel
//! per user and one curve per (mode, engine) that has data.

use std::fmt::Write as _;
use std::path::Path;

use ris_coverage_core::mcsim::ScenarioMode;

use crate::config::{RunConfig, SweepVariable};
use crate::sweep::SweepRow;

fn axis_label(v: SweepVariable) -> &'static str {
    match v {
        SweepVariable::TransmitSnrDb => "transmit SNR [dB]",
        SweepVariable::RisHalflength => "RIS half-length L [m]",
        SweepVariable::AlphaT => "RIS path-loss exponent alpha_t",
        SweepVariable::LambdaB => "BS density [1/m^2]",
    }
}

/// A curve: mode, engine name and its CSV column (1-based).
struct Curve {
    mode: ScenarioMode,
    engine: &'static str,
    column: usize,
}

fn curves(rows: &[SweepRow], modes: &[ScenarioMode], typical: bool) -> Vec<Curve> {
    let mut out = Vec::new();
    for &mode in modes {
        let mine = || rows.iter().filter(move |r| r.mode == mode);
        let analytic = mine().any(|r| if typical { r.p_t_analytic } else { r.p_c_analytic }.is_some());
        let mc = mine().any(|r| if typical { r.p_t_mc } else { r.p_c_mc }.is_some());
        if analytic {
            out.push(Curve { mode, engine: "analytic", column: if typical { 3 } else { 4 } });
        }
        if mc {
            out.push(Curve { mode, engine: "monte carlo", column: if typical { 5 } else { 7 } });
        }
    }
    out
}

/// The script text; `csv_path` is referenced verbatim.
pub fn plot_script(cfg: &RunConfig, rows: &[SweepRow], csv_path: &Path) -> String {
    let csv = csv_path.display().to_string().replace('"', "\\\"");
    let mut s = String::new();
    let _ = writeln!(s, "# coverage probability vs {}", cfg.sweep.variable.as_str());
    let _ = writeln!(s, "set datafile separator \",\"");
    let _ = writeln!(s, "set xlabel \"{}\"", axis_label(cfg.sweep.variable));
    let _ = writeln!(s, "set ylabel \"coverage probability\"");
    let _ = writeln!(s, "set yrange [0:1]");
    let _ = writeln!(s, "set key left top");
    if cfg.sweep.variable == SweepVariable::LambdaB {
        let _ = writeln!(s, "set logscale x");
    }
    let _ = writeln!(s, "set multiplot layout 1,2");
    for (typical, title) in [(true, "typical user"), (false, "connected user")] {
        let _ = writeln!(s, "set title \"{title}\"");
        let cs = curves(rows, &cfg.sweep.modes, typical);
        if cs.is_empty() {
            let _ = writeln!(s, "# no data for the {title}");
            continue;
        }
        let parts: Vec<String> = cs
            .iter()
            .map(|c| {
                format!(
                    "\"{csv}\" using 1:(strcol(2) eq \"{}\" ? ${} : 1/0) with linespoints title \"{} {}\"",
                    c.mode.as_str(),
                    c.column,
                    c.mode.as_str(),
                    c.engine
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
    }
    let _ = writeln!(s, "unset multiplot");
    s
}

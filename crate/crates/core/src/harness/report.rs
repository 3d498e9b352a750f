//! Report files: the CSV table, a JSON summary, and plot data with a
//! renderer script. All writes go through a temp file + atomic rename.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rug::Float;
use serde::Serialize;

use crate::error::Result;
use crate::harness::fit::RateFit;
use crate::harness::run::{Check, ExtraEnvelope, SandwichRatio, ScenarioRun};

pub const CSV_HEADER: &str = "scenario,n,log_e_n,e_n_sq_hi,e_n_sq_lo,A_lower,env_lower,A_cheb,\
                              env_cheb,A_taylor,env_taylor,cert_upper_log,precision_bits,moment_eps";

/// Decimal rendering truncated to 40 significant digits. MPFR's conversion
/// is the shortest digit string that rounds back to the value at the
/// requested length, so the output is deterministic across runs.
pub fn fmt40(x: &Float) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let s = x.to_string_radix(10, Some(40));
    // drop trailing zero digits of the mantissa only
    match s.split_once(['e', 'E']) {
        Some((mant, exp)) if mant.contains('.') => {
            format!("{}e{}", mant.trim_end_matches('0').trim_end_matches('.'), exp)
        }
        None if s.contains('.') => s.trim_end_matches('0').trim_end_matches('.').to_string(),
        _ => s,
    }
}

fn fmt_f64(x: f64) -> String {
    let mut s = format!("{x:e}");
    if let Some(stripped) = s.strip_suffix("e0") {
        s = stripped.to_string();
    }
    s
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// One scenario's CSV rows.
fn csv_rows(out: &mut String, run: &ScenarioRun) {
    for r in &run.rows {
        let moment_eps = Float::with_val(64, r.ln_eps).exp();
        let cert = r
            .cert_upper_log
            .as_ref()
            .map(fmt40)
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            run.id,
            r.n,
            fmt40(&r.log_e_n),
            fmt40(&r.e_n_sq_hi),
            fmt40(&r.e_n_sq_lo),
            opt_f64(r.a_lower),
            opt_f64(r.env_lower),
            opt_f64(r.a_cheb),
            opt_f64(r.env_cheb),
            opt_f64(r.a_taylor),
            opt_f64(r.env_taylor),
            cert,
            r.precision_bits,
            fmt40(&moment_eps),
        )
        .unwrap();
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_csv(path: &Path, runs: &[ScenarioRun]) -> Result<()> {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for run in runs {
        csv_rows(&mut out, run);
    }
    write_atomic(path, &out)
}

#[derive(Serialize)]
struct ScenarioSummary<'a> {
    id: &'a str,
    passed: bool,
    fits: &'a [RateFit],
    sandwich: &'a [SandwichRatio],
    checks: &'a [Check],
    extra_envelopes: &'a [ExtraEnvelope],
    failures: &'a [String],
}

#[derive(Serialize)]
struct Summary<'a> {
    passed: bool,
    scenarios: Vec<ScenarioSummary<'a>>,
}

pub fn write_summary(path: &Path, runs: &[ScenarioRun]) -> Result<()> {
    let summary = Summary {
        passed: runs.iter().all(|r| r.passed()),
        scenarios: runs
            .iter()
            .map(|r| ScenarioSummary {
                id: &r.id,
                passed: r.passed(),
                fits: &r.fits,
                sandwich: &r.sandwich,
                checks: &r.checks,
                extra_envelopes: &r.extras,
                failures: &r.failures,
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_atomic(path, &text)
}

/// Two-column (plus envelope columns) plot data per scenario and a gnuplot
/// script rendering them; any plain-text plotter can consume the .dat files.
pub fn write_plot_data(dir: &Path, runs: &[ScenarioRun]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut script = String::from(
        "set logscale xy\nset xlabel 'n'\nset ylabel '|log e_n|'\nset key left top\n",
    );
    for run in runs {
        let mut out = String::from("# n abs_log_e_n env_lower env_cheb env_taylor\n");
        for r in &run.rows {
            writeln!(
                out,
                "{} {} {} {} {}",
                r.n,
                fmt_f64(-r.log_e_n.to_f64()),
                opt_f64(r.env_lower.filter(|v| *v > 0.0)),
                opt_f64(r.env_cheb.filter(|v| *v > 0.0)),
                opt_f64(r.env_taylor.filter(|v| *v > 0.0)),
            )
            .unwrap();
        }
        let path = dir.join(format!("{}.dat", run.id));
        write_atomic(&path, &out)?;
        writeln!(
            script,
            "plot '{id}.dat' using 1:2 with linespoints title '{id} |log e_n|'\npause -1",
            id = run.id
        )
        .unwrap();
        written.push(path);
    }
    let script_path = dir.join("plot.gnuplot");
    write_atomic(&script_path, &script)?;
    written.push(script_path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::real;

    #[test]
    fn fmt40_roundtrip_and_truncation() {
        let x = real(256, 1.0) / real(256, 3.0);
        let s = fmt40(&x);
        assert!(s.starts_with("3.33333333333333333333333333333333333333"));
        assert_eq!(fmt40(&real(64, 0.0)), "0");
        // sub-f64 magnitudes survive
        let tiny = real(256, -8000.0).exp();
        let s = fmt40(&tiny);
        assert!(s.contains("e-"), "{s}");
    }

    #[test]
    fn header_is_pinned() {
        assert_eq!(
            CSV_HEADER,
            "scenario,n,log_e_n,e_n_sq_hi,e_n_sq_lo,A_lower,env_lower,A_cheb,env_cheb,\
             A_taylor,env_taylor,cert_upper_log,precision_bits,moment_eps"
        );
    }
}

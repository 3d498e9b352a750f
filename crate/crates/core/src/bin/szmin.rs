//! Command-line harness for the Szegő minimum laboratory.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use szmin::harness::{self, fit, reproduce, Config, ScenarioConfig};
use szmin::polynomials::{chebyshev_arc, max_modulus_off_arc};
use szmin::szego::levinson_stable;

#[derive(Parser)]
#[command(
    name = "szmin",
    about = "Szegő minimum problem laboratory: prediction errors, decay envelopes, \
             certified polynomial bounds",
    after_help = "SZMIN_PREC sets a default working-precision floor in bits for \
                  commands that don't specify one."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every scenario in a config file and write report files
    Run {
        /// TOML config path
        config: PathBuf,
        /// output directory (overrides the config's output_dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in corollary reproduction and report pass/fail
    Reproduce {
        /// registry id (cor_61, cor_62, cor_i, cor_ii, cor_iii_p2,
        /// cor_iii_p3, cor_iv) or "all"
        id: String,
    },
    /// Compute e_n for a weight spec
    En {
        /// TOML scenario fragment (inline string or file path) with
        /// profile / zero_set / smooth / support_arc
        spec: String,
        #[arg(long)]
        n: u64,
    },
    /// Evaluate the decay envelopes for a weight spec
    Bounds {
        /// TOML scenario fragment (inline string or file path)
        spec: String,
        #[arg(long)]
        n: u64,
    },
    /// Extremal polynomial constructions
    Poly {
        #[command(subcommand)]
        which: PolyCmd,
    },
    /// Fit growth models to the |log e_n| series of a results CSV
    Fit {
        /// CSV produced by `szmin run`
        csv: PathBuf,
    },
}

#[derive(Subcommand)]
enum PolyCmd {
    /// Monic arc-Chebyshev polynomial for the arc |theta| <= alpha
    Cheb {
        /// even degree
        #[arg(long)]
        n: usize,
        /// arc half-width in radians
        #[arg(long)]
        alpha: f64,
    },
}

/// A weight spec on the command line: inline TOML, or a path to a TOML file.
fn parse_spec(spec: &str, n: u64) -> anyhow::Result<ScenarioConfig> {
    let text = if std::path::Path::new(spec).is_file() {
        std::fs::read_to_string(spec)?
    } else {
        spec.to_string()
    };
    #[derive(serde::Deserialize)]
    struct Fragment {
        profile: Option<szmin::weights::ProfileFunction>,
        zero_set: Option<szmin::weights::ZeroSetSpec>,
        smooth: Option<szmin::szego::TrigPoly>,
        support_arc: Option<(f64, f64)>,
    }
    let f: Fragment = toml::from_str(&text).context("parsing weight spec")?;
    let sc = ScenarioConfig {
        id: "cli".into(),
        profile: f.profile,
        zero_set: f.zero_set,
        smooth: f.smooth,
        support_arc: f.support_arc,
        n: vec![n],
        methods: vec![
            harness::Method::Lower,
            harness::Method::Chebyshev,
            harness::Method::Taylor,
        ],
        predicted: None,
        precision_bits: env_prec(),
        ln_eps: None,
        cert_max_n: 0,
    };
    sc.validate()?;
    Ok(sc)
}

fn env_prec() -> Option<u32> {
    std::env::var("SZMIN_PREC").ok().and_then(|s| s.parse().ok())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("szmin: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<bool> {
    match cli.cmd {
        Cmd::Run { config, out } => {
            let mut cfg = Config::load(&config)?;
            if let Some(prec) = env_prec() {
                for sc in &mut cfg.scenarios {
                    sc.precision_bits.get_or_insert(prec);
                }
            }
            let out_dir = out.unwrap_or_else(|| cfg.output_dir.clone());
            let ok = harness::run_and_report(&cfg, &out_dir)?;
            println!(
                "reports written to {} ({})",
                out_dir.display(),
                if ok { "all checks passed" } else { "CHECKS FAILED" }
            );
            Ok(ok)
        }
        Cmd::Reproduce { id } => {
            let ids: Vec<&str> = if id == "all" {
                reproduce::ALL_IDS.to_vec()
            } else {
                vec![id.as_str()]
            };
            let mut all_ok = true;
            for id in ids {
                let rep = harness::reproduce(id)?;
                println!(
                    "{}: {} — {}",
                    rep.id,
                    if rep.passed { "pass" } else { "FAIL" },
                    rep.detail
                );
                all_ok &= rep.passed;
            }
            Ok(all_ok)
        }
        Cmd::En { spec, n } => {
            let sc = parse_spec(&spec, n)?;
            let run = harness::run_scenario(&sc)?;
            let row = &run.rows[0];
            println!("n = {n}");
            println!("log e_n = {}", row.log_e_n.to_f64());
            println!("e_n     = {}", row.log_e_n.clone().exp().to_f64());
            println!("precision_bits = {}", row.precision_bits);
            Ok(true)
        }
        Cmd::Bounds { spec, n } => {
            let sc = parse_spec(&spec, n)?;
            let w = sc
                .weight()?
                .context("bounds requires a profile and zero_set")?;
            for (name, res) in [
                ("lower", szmin::bounds::lower_envelope(&w, n)),
                ("chebyshev", szmin::bounds::upper_envelope_chebyshev(&w, n)),
                (
                    "taylor",
                    szmin::bounds::upper_envelope_taylor(&w, &w.profile, n),
                ),
            ] {
                match res {
                    Ok(b) => println!("{name}: A = {:.6e}, value = {:.6e}", b.a, b.value),
                    Err(e) => println!("{name}: unavailable ({e})"),
                }
            }
            Ok(true)
        }
        Cmd::Poly {
            which: PolyCmd::Cheb { n, alpha },
        } => {
            let p = chebyshev_arc(n, alpha, 256)?;
            for (k, c) in p.coeffs.iter().enumerate() {
                println!("c[{k}] = {}", c.real().to_f64());
            }
            let m = max_modulus_off_arc(&p, alpha);
            println!(
                "max |T| off the arc = {} (2 cos^n(alpha/2) = {})",
                m.value.to_f64(),
                2.0 * (alpha / 2.0).cos().powi(n as i32)
            );
            Ok(true)
        }
        Cmd::Fit { csv } => {
            let text = std::fs::read_to_string(&csv)?;
            let mut lines = text.lines();
            let header = lines.next().context("empty CSV")?;
            let cols: Vec<&str> = header.split(',').collect();
            let (Some(n_ix), Some(v_ix)) = (
                cols.iter().position(|c| *c == "n"),
                cols.iter().position(|c| *c == "log_e_n"),
            ) else {
                bail!("CSV is missing the n / log_e_n columns");
            };
            let mut series: BTreeMap<String, Vec<(u64, f64)>> = BTreeMap::new();
            for line in lines {
                let f: Vec<&str> = line.split(',').collect();
                if f.len() <= v_ix.max(n_ix) {
                    continue;
                }
                let n: u64 = f[n_ix].parse()?;
                let v: f64 = -f[v_ix].parse::<f64>()?;
                if v > 0.0 {
                    series.entry(f[0].to_string()).or_default().push((n, v));
                }
            }
            for (id, pts) in &series {
                println!("{id}:");
                match fit::fit_all(pts) {
                    Ok(fits) => {
                        for f in fits {
                            println!(
                                "  {:?}: beta = {:.4} +- {:.4}, R² = {:.6}",
                                f.model, f.beta, f.stderr, f.r2
                            );
                        }
                    }
                    Err(e) => println!("  no fit: {e}"),
                }
            }
            Ok(true)
        }
    }
}

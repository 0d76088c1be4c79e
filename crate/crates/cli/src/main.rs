//! Command-line front end for the strategic security-investment library.
//!
//! Exit codes: 0 on success, 2 on config errors, 3 on solver errors.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use secinvest::attacker::AttackerParams;
use secinvest::baseline::compare_models;
use secinvest::config::{Config, SweepOutputs, SweepVariable};
use secinvest::fixed_point::solve_fpe;
use secinvest::report;
use secinvest::{Error, Result};

#[derive(Parser)]
#[command(
    name = "secinvest",
    about = "Optimal security investment against a rational attacker",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate the attacker's best response across hardening levels.
    AttackerCurve {
        /// Model config file; its breach family and economics seed the run.
        #[arg(long)]
        model: PathBuf,
        /// Override the attacker's gain from a breach.
        #[arg(long = "G")]
        gain: Option<f64>,
        /// Override the attacker's unit effort cost.
        #[arg(long = "c")]
        cost: Option<f64>,
        /// Intrinsic vulnerability the defender hardens from.
        #[arg(long)]
        v: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve the defender's problem at one vulnerability or across a sweep.
    DefenderPolicy {
        #[arg(long)]
        scenario: PathBuf,
        /// Single vulnerability to solve for.
        #[arg(long)]
        v: Option<f64>,
        /// Sweep `lo:hi:n` instead of a single point; emits CSV.
        #[arg(long = "v-sweep")]
        v_sweep: Option<String>,
        /// CSV destination for sweeps (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report stationarity fixed points and the decision partition.
    FixedPoints {
        #[arg(long)]
        scenario: PathBuf,
        /// Emit structured JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Compare the strategic optimum with the classic one-sided optimum.
    CompareGl {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long = "v-sweep")]
        v_sweep: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the sweep a spec file describes; writes sweep.csv and sweep.svg.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
    },
}

fn main() {
    // Restore default SIGPIPE so a closed pipe (e.g. `secinvest ... | head`)
    // ends the process instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Err(e) = run(cli.cmd) {
        eprintln!("error: {e}");
        std::process::exit(if e.is_config() { 2 } else { 3 });
    }
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::AttackerCurve { model, gain, cost, v, samples, out } => {
            attacker_curve(&model, gain, cost, v, samples, &out)
        }
        Cmd::DefenderPolicy { scenario, v, v_sweep, out } => {
            defender_policy(&scenario, v, v_sweep.as_deref(), out.as_deref())
        }
        Cmd::FixedPoints { scenario, json } => fixed_points(&scenario, json),
        Cmd::CompareGl { scenario, v_sweep, out } => compare_gl(&scenario, &v_sweep, &out),
        Cmd::Sweep { spec, out_dir } => sweep(&spec, &out_dir),
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config { line: 0, msg: msg.into() }
}

fn parse_sweep_arg(raw: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = raw.split(':').collect();
    let bad = || config_err(format!("--v-sweep: expected lo:hi:n, got `{raw}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi && n >= 2) {
        return Err(config_err("--v-sweep: need finite lo < hi and n >= 2"));
    }
    Ok((lo, hi, n))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn attacker_curve(
    model_path: &Path,
    gain: Option<f64>,
    cost: Option<f64>,
    v: f64,
    samples: usize,
    out: &Path,
) -> Result<()> {
    if samples < 2 {
        return Err(config_err("--samples: need at least 2"));
    }
    let cfg = Config::from_file(model_path)?;
    let model = cfg.build_model()?;
    let attacker =
        AttackerParams::new(gain.unwrap_or(cfg.gain), cost.unwrap_or(cfg.attack_cost))?;
    if !(0.0 < v && v < 1.0) {
        return Err(config_err("--v: must lie in (0, 1)"));
    }

    let mut csv = String::from("s,z,y_star,T_star,net_gain\n");
    let lo = v * 1e-3;
    for i in 0..samples {
        // The top grid point can land one ulp above v; clamp it back.
        let s = (lo + (v - lo) * i as f64 / (samples - 1) as f64).min(v);
        let z = model.effort(s, v)?;
        let resp = attacker.best_response(s)?;
        csv.push_str(&format!(
            "{s:.11e},{z:.11e},{:.11e},{:.11e},{:.11e}\n",
            resp.effort, resp.breach_chance, resp.net_gain
        ));
    }
    write_text(out, &csv)
}

fn defender_policy(
    scenario_path: &Path,
    v: Option<f64>,
    v_sweep: Option<&str>,
    out: Option<&Path>,
) -> Result<()> {
    let mut cfg = Config::from_file(scenario_path)?;
    match (v, v_sweep) {
        (Some(v), None) => {
            let scenario = cfg.build_scenario()?;
            let sol = scenario.solve_defender(v)?;
            println!("v         {v}");
            println!("interval  {}", sol.interval);
            println!("decision  {}", sol.decision);
            println!("s_star    {}", sol.s_star);
            println!("z_star    {}", sol.z_star);
            println!("cost      {}", sol.expected_cost);
            println!("s1        {}", fmt_opt(sol.s1));
            println!("s2        {}", fmt_opt(sol.s2));
            Ok(())
        }
        (None, Some(raw)) => {
            let (lo, hi, n) = parse_sweep_arg(raw)?;
            cfg.variable = Some(SweepVariable::Vulnerability);
            cfg.range = Some((lo, hi, n));
            cfg.outputs = SweepOutputs {
                policy: true,
                attacker: false,
                baseline: false,
                fixed_points: false,
            };
            let result = report::run_sweep(&cfg)?;
            let csv = report::emit_csv(&result);
            match out {
                Some(path) => write_text(path, &csv),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
        _ => Err(config_err("pass exactly one of --v or --v-sweep")),
    }
}

fn fixed_points(scenario_path: &Path, json: bool) -> Result<()> {
    let cfg = Config::from_file(scenario_path)?;
    let scenario = cfg.build_scenario()?;
    let report = solve_fpe(&scenario)?;

    if json {
        let value = serde_json::json!({
            "cost_ratio": scenario.cost_ratio(),
            "s_hat": report.s_hat,
            "v_hat": report.v_hat,
            "roots": report.roots,
            "tangent": report.tangent,
            "critical": {
                "ratio": report.critical.ratio,
                "at": report.critical.at,
                "boundary": report.critical.boundary,
            },
            "partition": report
                .partition
                .iter()
                .map(|cell| {
                    serde_json::json!({
                        "lo": cell.lo,
                        "hi": cell.hi,
                        "interval": cell.interval.to_string(),
                        "s1_above_v": cell.s1_above_v,
                    })
                })
                .collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&value).expect("plain tree"));
        return Ok(());
    }

    println!("cost_ratio  {}", scenario.cost_ratio());
    println!("s_hat       {}", report.s_hat);
    println!("v_hat       {}", report.v_hat);
    let roots: Vec<String> = report.roots.iter().map(|r| r.to_string()).collect();
    println!("roots       {}", if roots.is_empty() { "-".into() } else { roots.join(", ") });
    println!("tangent     {}", report.tangent);
    println!(
        "critical    {} at v = {}{}",
        report.critical.ratio,
        report.critical.at,
        if report.critical.boundary { " (domain edge)" } else { "" }
    );
    println!("partition");
    for cell in &report.partition {
        println!("  ({:.6}, {:.6}]  {}", cell.lo, cell.hi, cell.interval);
    }
    Ok(())
}

fn compare_gl(scenario_path: &Path, v_sweep: &str, out: &Path) -> Result<()> {
    let cfg = Config::from_file(scenario_path)?;
    let scenario = cfg.build_scenario()?;
    let (lo, hi, n) = parse_sweep_arg(v_sweep)?;
    if lo <= 0.0 || hi >= 1.0 {
        return Err(config_err("--v-sweep: vulnerabilities must stay inside (0, 1)"));
    }

    let mut csv = String::from(
        "v,decision,s_star,z_star,cost,s_gl,z_gl,gl_cost,investment_gap,bound_ratio\n",
    );
    for i in 0..n {
        let v = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let cmp = compare_models(&scenario, v)?;
        csv.push_str(&format!(
            "{v:.11e},{},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}\n",
            cmp.strategic.decision,
            cmp.strategic.s_star,
            cmp.strategic.z_star,
            cmp.strategic.expected_cost,
            cmp.baseline.s_gl,
            cmp.baseline.z_gl,
            cmp.baseline.total_cost,
            cmp.investment_gap,
            cmp.baseline.bound_ratio,
        ));
    }
    write_text(out, &csv)
}

fn sweep(spec_path: &Path, out_dir: &Path) -> Result<()> {
    let cfg = Config::from_file(spec_path)?;
    let result = report::run_sweep(&cfg)?;
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let csv_path = out_dir.join("sweep.csv");
    let svg_path = out_dir.join("sweep.svg");
    report::write_csv(&result, &csv_path)?;
    report::write_svg(&result, &svg_path)?;
    println!("{}", csv_path.display());
    println!("{}", svg_path.display());
    Ok(())
}

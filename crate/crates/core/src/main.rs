use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spacefill::curvature::{weighted_area, weighted_gauss_breakdown, weighted_mean, weighted_volume};
use spacefill::diagnostics::{general_position_check, gradient_jump_probe};
use spacefill::gradient::gauss_gradient;
use spacefill::io::{
    format_float, parse_diagram_str, parse_momentum, DegeneracyDoc, FdCheckDoc, GaussBreakdownDoc, GradientDoc,
    IntrinsicVolumesDoc, Num, ProbeDoc, Provenance, ResultDocument,
};
use spacefill::oracles::{fd_gradient, FdConfig};
use spacefill::{BallSet, Diagram, Error};

#[derive(Parser)]
#[command(name = "spacefill", version, about = "Weighted intrinsic volumes of unions of balls")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print weighted volume, area, mean and Gaussian curvature.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        mc_samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of v, a, m, k.
        #[arg(long, default_value = "v,a,m,k")]
        measures: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the gradient of the weighted Gaussian curvature.
    Grad {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Compare the analytic gradient with central finite differences.
    Fdcheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-5)]
        step: f64,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Report near-violations of general position.
    Degeneracy {
        #[arg(long)]
        input: PathBuf,
        /// Length tolerance (default: 1e-9 times the largest radius).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sample K and its gradient along a straight path and report jumps.
    Probe {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        momentum: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        tau_min: f64,
        #[arg(long, default_value_t = 1.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum Failure {
    Error(Error),
    Tolerance(String),
    Degenerate(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Tolerance(_) => 1,
            Failure::Degenerate(_) => 2,
            Failure::Error(e) => match e {
                Error::Parse { .. } | Error::Io(_) => 3,
                Error::CoincidentCenters(..) => 2,
                e if e.is_degenerate() => 2,
                _ => 1,
            },
        }
    }
}

fn load(path: &Path) -> Result<(Vec<u8>, BallSet), Failure> {
    let bytes = std::fs::read(path).map_err(Error::from)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: e.to_string(),
    })?;
    Ok((bytes, parse_diagram_str(&text)?))
}

fn write_json(path: &Option<PathBuf>, doc: &ResultDocument) -> Result<(), Failure> {
    if let Some(p) = path {
        std::fs::write(p, doc.to_json()).map_err(Error::from)?;
    }
    Ok(())
}

fn compute(input: &Path, samples: u64, seed: u64, measures: &str, json: &Option<PathBuf>) -> Result<(), Failure> {
    let mut wanted = [false; 4];
    for m in measures.split(',').map(str::trim).filter(|m| !m.is_empty()) {
        match m.to_ascii_lowercase().as_str() {
            "v" => wanted[0] = true,
            "a" => wanted[1] = true,
            "m" => wanted[2] = true,
            "k" => wanted[3] = true,
            other => {
                return Err(Failure::Error(Error::Validation {
                    line: 0,
                    message: format!("unknown measure '{other}'"),
                }))
            }
        }
    }
    let (bytes, balls) = load(input)?;
    let dg = Diagram::new(balls)?;
    let mut doc = IntrinsicVolumesDoc::default();
    if wanted[0] {
        let (v, se) = weighted_volume(&dg, samples, seed);
        println!("V = {v} ± {se}");
        doc.volume = Some(Num(v));
        doc.volume_std_error = Some(Num(se));
    }
    if wanted[1] {
        let a = weighted_area(&dg);
        println!("A = {a}");
        doc.area = Some(Num(a));
    }
    if wanted[2] {
        let m = weighted_mean(&dg);
        println!("M = {m}");
        doc.mean = Some(Num(m));
    }
    if wanted[3] {
        let b = weighted_gauss_breakdown(&dg);
        let k = b.patches + b.arcs + b.corners;
        println!("K = {k}");
        doc.gauss = Some(Num(k));
        doc.gauss_breakdown = Some(GaussBreakdownDoc {
            patches: Num(b.patches),
            arcs: Num(b.arcs),
            corners: Num(b.corners),
        });
    }
    let mut prov = Provenance::new(&bytes, &dg.balls);
    if wanted[0] {
        prov.seed = Some(seed);
        prov.mc_samples = Some(samples);
    }
    let mut out = ResultDocument::new(prov);
    out.intrinsic_volumes = Some(doc);
    write_json(json, &out)
}

fn grad(input: &Path, json: &Option<PathBuf>) -> Result<(), Failure> {
    let (bytes, balls) = load(input)?;
    let dg = Diagram::new(balls)?;
    let g = gauss_gradient(&dg)?;
    for (i, v) in g.g.iter().enumerate() {
        println!("{i} {} {} {}", format_float(v.x), format_float(v.y), format_float(v.z));
    }
    let mut doc = ResultDocument::new(Provenance::new(&bytes, &dg.balls));
    doc.gradient = Some(GradientDoc::from(&g));
    write_json(json, &doc)
}

fn fdcheck(input: &Path, step: f64, tol: f64, json: &Option<PathBuf>) -> Result<(), Failure> {
    let (bytes, balls) = load(input)?;
    let dg = Diagram::new(balls.clone())?;
    let analytic = gauss_gradient(&dg)?.stacked();
    let cfg = FdConfig { step, rel_tol: tol };
    let k = |b: &BallSet| Diagram::new(b.clone()).map(|d| spacefill::curvature::weighted_gauss(&d));
    let fd = fd_gradient(&k, &balls, &cfg)?;
    let worst = analytic
        .iter()
        .zip(&fd)
        .map(|(&a, &f)| FdConfig::relative_error(a, f))
        .fold(0.0, f64::max);
    let passed = analytic.iter().zip(&fd).all(|(&a, &f)| cfg.accepts(a, f));
    println!("max relative error = {worst:e}");
    println!("{}", if passed { "PASS" } else { "FAIL" });
    let mut prov = Provenance::new(&bytes, &balls);
    prov.tolerances.fd_step = Some(Num(step));
    prov.tolerances.fd_tol = Some(Num(tol));
    let mut doc = ResultDocument::new(prov);
    doc.fdcheck = Some(FdCheckDoc {
        analytic: analytic.into_iter().map(Num).collect(),
        finite_difference: fd.into_iter().map(Num).collect(),
        max_relative_error: Num(worst),
        passed,
    });
    write_json(json, &doc)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!("relative error {worst:e} exceeds {tol:e}")))
    }
}

fn degeneracy(input: &Path, tol: Option<f64>, json: &Option<PathBuf>) -> Result<(), Failure> {
    let (bytes, balls) = load(input)?;
    let tol = tol.unwrap_or_else(|| balls.length_tolerance());
    let report = general_position_check(&balls, tol)?;
    println!("min residual = {}", report.min_residual);
    for v in &report.violations {
        let event = v.event.map(|e| format!(" {e:?}")).unwrap_or_default();
        println!(
            "condition {} {:?} residual {:e}{event}",
            v.condition, v.simplex, v.residual
        );
    }
    let mut prov = Provenance::new(&bytes, &balls);
    prov.tolerances.degeneracy = Some(Num(tol));
    let mut doc = ResultDocument::new(prov);
    doc.degeneracy = Some(DegeneracyDoc::from(&report));
    write_json(json, &doc)?;
    if report.violations.is_empty() {
        println!("general position");
        Ok(())
    } else {
        Err(Failure::Degenerate(format!("{} violation(s)", report.violations.len())))
    }
}

fn probe(
    input: &Path,
    momentum: &Path,
    tau_min: f64,
    tau_max: f64,
    steps: usize,
    json: &Option<PathBuf>,
) -> Result<(), Failure> {
    let (bytes, balls) = load(input)?;
    let t = parse_momentum(momentum, balls.len())?;
    let report = gradient_jump_probe(&balls, &t, tau_min, tau_max, steps)?;
    for s in &report.samples {
        match (s.gauss, s.grad_norm) {
            (Some(k), Some(g)) => println!("tau {} K {k} |G| {g}", s.tau),
            _ => println!("tau {} degenerate: {}", s.tau, s.error.as_deref().unwrap_or("")),
        }
    }
    for e in &report.events {
        let k = e.gauss_jump().map_or("undefined".to_string(), |j| j.to_string());
        let g = e.grad_jump().map_or("undefined".to_string(), |j| j.to_string());
        println!("event tau {} K jump {k} gradient jump {g}", e.tau);
    }
    let mut doc = ResultDocument::new(Provenance::new(&bytes, &balls));
    doc.probe = Some(ProbeDoc::from(&report));
    write_json(json, &doc)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Compute {
            input,
            mc_samples,
            seed,
            measures,
            json,
        } => compute(input, *mc_samples, *seed, measures, json),
        Command::Grad { input, json } => grad(input, json),
        Command::Fdcheck { input, step, tol, json } => fdcheck(input, *step, *tol, json),
        Command::Degeneracy { input, tol, json } => degeneracy(input, *tol, json),
        Command::Probe {
            input,
            momentum,
            tau_min,
            tau_max,
            steps,
            json,
        } => probe(input, momentum, *tau_min, *tau_max, *steps, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Error(e) => e.to_string(),
                Failure::Tolerance(m) | Failure::Degenerate(m) => m.clone(),
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.exit_code())
        }
    }
}

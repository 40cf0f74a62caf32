use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use twine_apps::{synth_qaoa, synth_qft, synth_qft_approx, synth_trotter_mfim, QaoaAngles, QuboProblem, Synthesis};
use twine_core::io::{from_json, from_qasm, to_json, to_qasm};
use twine_core::{binomial, k_body_labels, metrics, Circuit, LabelState, Metrics};
use twine_graph::{generator, is_all_to_all};
use twine_noise::{circuit_fidelity, circuit_fidelity_effective, NoiseParams};
use twine_topology::{build_family, graph_from_json, ConnectivityGraph, Hgp};
use twine_verify::{connectivity_check, generator_check};
/// Stdout writes that end the process quietly once the reader is gone.
macro_rules! out {
    ($($t:tt)*) => {{ if writeln!(std::io::stdout(), $($t)*).is_err() { std::process::exit(0) } }};
}
macro_rules! out_raw {
    ($($t:tt)*) => {{ if write!(std::io::stdout(), $($t)*).is_err() { std::process::exit(0) } }};
}

#[derive(Parser)]
#[command(name = "twine", version, about = "Parity-label generator and algorithm synthesis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize a circuit, certify it and print a JSON report.
    Synth(SynthArgs),
    /// Metrics of a generator or of a circuit file.
    Metrics(MetricsArgs),
    /// CSV sweep of generator metrics over n.
    Table(TableArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Algo {
    Gen,
    Qft,
    QftApprox,
    Qaoa,
    Trotter,
}

#[derive(Clone, Copy, PartialEq, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Qasm,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    /// lnn:N, ladder:N, grid:RxC, heavy-hex:CELLS, all-to-all:N or custom:FILE
    #[arg(long)]
    graph: String,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// JSON file {"beta": [...], "alpha": [...]}
    #[arg(long)]
    angles: Option<PathBuf>,
    /// JSON file {"n", "J", "h", "M", "g"}
    #[arg(long)]
    problem: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Trotter step length.
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    /// Circuit file. Without it the circuit goes to stdout and the report to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write outputs even if certification fails (exit code stays 2).
    #[arg(long)]
    allow_uncertified: bool,
    /// Noise score as F2Q,FIDLE.
    #[arg(long)]
    noise: Option<String>,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long, required_unless_present = "circuit")]
    graph: Option<String>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Circuit in JSON or QASM instead of a generator.
    #[arg(long, conflicts_with = "graph")]
    circuit: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// Comma-separated families: lnn, all-to-all, grid, ladder, heavy-hex.
    #[arg(long, value_delimiter = ',', default_value = "lnn")]
    families: Vec<String>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 4)]
    min: usize,
    #[arg(long, default_value_t = 40)]
    max: usize,
    #[arg(long, default_value_t = 1)]
    step: usize,
    /// Compare mu and nu with their limits on stderr.
    #[arg(long)]
    check_asymptote: bool,
}

enum Fail {
    Usage(String),
    Uncertified,
}

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match cli.cmd {
        Cmd::Synth(a) => synth(&a),
        Cmd::Metrics(a) => cmd_metrics(&a),
        Cmd::Table(a) => table(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Uncertified) => ExitCode::from(2),
    }
}

fn load_graph(spec: &str) -> Result<(ConnectivityGraph, Option<Hgp>), Fail> {
    if let Some(path) = spec.strip_prefix("custom:") {
        let text = fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{path}: {e}")))?;
        return Ok(graph_from_json(&text)?);
    }
    Ok((build_family(spec.parse()?)?, None))
}

fn read_json<T>(path: &Option<PathBuf>, what: &str, parse: impl Fn(&str) -> Result<T, Fail>) -> Result<T, Fail> {
    let path = path.as_ref().ok_or_else(|| Fail::Usage(format!("--{what} is required")))?;
    let text = fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    parse(&text)
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (q, &w) in p.iter().enumerate() {
        inv[w] = q;
    }
    inv
}

fn synth(a: &SynthArgs) -> Result<(), Fail> {
    let (g, hgp) = load_graph(&a.graph)?;
    let n = g.n();
    let hgp = hgp.as_ref();
    let mut report = json!({ "algo": algo_name(a.algo), "graph": a.graph, "n": n });
    let conn = |c: &Circuit| connectivity_check(c, &g);
    let (circuit, certified, labels) = if a.algo == Algo::Gen {
        let c = generator(&g, hgp, a.k)?;
        let cert = generator_check(&c, &LabelState::singles(n), &k_body_labels(n, a.k))?.with_connectivity(&conn(&c));
        report["k"] = json!(a.k);
        report["certificate"] = json!({
            "missing": cert.missing.len(),
            "clean": cert.clean,
            "connectivity_ok": cert.connectivity_ok,
            "first_violation": cert.first_violation.map(|(m, gate)| json!([m, format!("{gate:?}")])),
        });
        report["output_permutation"] = json!(cert.permutation.as_deref().map(inverse));
        (c, cert.ok(), binomial(n, a.k) as usize)
    } else {
        let (s, labels) = run_app(a, &g, hgp)?;
        let cc = conn(&s.circuit);
        let sched = s.schedule.verify(&s.circuit);
        report["certificate"] = json!({
            "schedule_ok": sched.is_ok(),
            "schedule_error": sched.as_ref().err().map(|e| e.to_string()),
            "clean": true,
            "connectivity_ok": cc.connectivity_ok,
            "first_violation": cc.first_violation.map(|(m, gate)| json!([m, format!("{gate:?}")])),
            "rotations": s.schedule.records.len(),
        });
        report["output_permutation"] = json!(s.output);
        report["order"] = json!(s.order);
        (s.circuit.clone(), sched.is_ok() && cc.connectivity_ok, labels)
    };
    let m = metrics(&circuit, labels.max(1))?;
    report["metrics"] = serde_json::to_value(&m)?;
    report["certified"] = json!(certified);
    if let Some(spec) = &a.noise {
        report["noise"] = noise_score(spec, &m, n)?;
    }
    if !certified && !a.allow_uncertified {
        eprintln!("{}", serde_json::to_string_pretty(&report)?);
        eprintln!("error: certification failed");
        return Err(Fail::Uncertified);
    }
    let text = match a.format {
        Format::Json => to_json(&circuit),
        Format::Qasm => to_qasm(&circuit),
    };
    match &a.out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
            report["out"] = json!(path.display().to_string());
            out!("{}", serde_json::to_string_pretty(&report)?);
        }
        None => {
            out_raw!("{text}");
            if !text.ends_with('\n') {
                out!();
            }
            eprintln!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    if certified {
        Ok(())
    } else {
        Err(Fail::Uncertified)
    }
}

fn algo_name(a: Algo) -> &'static str {
    match a {
        Algo::Gen => "gen",
        Algo::Qft => "qft",
        Algo::QftApprox => "qft-approx",
        Algo::Qaoa => "qaoa",
        Algo::Trotter => "trotter",
    }
}

/// Runs an algorithm synthesizer; also returns the size of its label set.
fn run_app(a: &SynthArgs, g: &ConnectivityGraph, hgp: Option<&Hgp>) -> Result<(Synthesis, usize), Fail> {
    let n = g.n();
    let problem = |a: &SynthArgs| read_json(&a.problem, "problem", |s| Ok(QuboProblem::from_json(s)?));
    Ok(match a.algo {
        Algo::Qft => (synth_qft(g, hgp)?, binomial(n, 2) as usize),
        Algo::QftApprox => {
            if !is_all_to_all(g) || hgp.is_some() {
                return Err(Fail::Usage("qft-approx drops CX gates of the all-to-all fan-out and needs an all-to-all graph".into()));
            }
            (synth_qft_approx(n, a.threshold)?, binomial(n, 2) as usize)
        }
        Algo::Qaoa => {
            let pr = problem(a)?;
            let angles: QaoaAngles = read_json(&a.angles, "angles", |s| Ok(serde_json::from_str(s)?))?;
            let terms = pr.interaction_labels().len();
            (synth_qaoa(&pr, g, hgp, a.p, &angles)?, terms)
        }
        Algo::Trotter => {
            let pr = problem(a)?;
            let terms = pr.interaction_labels().len();
            (synth_trotter_mfim(&pr, g, hgp, a.tau)?, terms)
        }
        Algo::Gen => unreachable!("generators are handled by the caller"),
    })
}

fn noise_score(spec: &str, m: &Metrics, n: usize) -> Result<Value, Fail> {
    let (a, b) = spec.split_once(',').ok_or_else(|| Fail::Usage(format!("--noise expects F2Q,FIDLE, got {spec}")))?;
    let p = NoiseParams::new(a.trim().parse()?, b.trim().parse()?)?;
    Ok(json!({
        "f_2q": p.f_2q,
        "f_idle": p.f_idle,
        "physical": p.is_physical(),
        "fidelity": circuit_fidelity(m, n, &p),
        "fidelity_effective": circuit_fidelity_effective(m, n, &p),
    }))
}

fn cmd_metrics(a: &MetricsArgs) -> Result<(), Fail> {
    let (c, k) = match (&a.circuit, &a.graph) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
            let c = if text.trim_start().starts_with('{') { from_json(&text)? } else { from_qasm(&text)? };
            (c, a.k)
        }
        (None, Some(spec)) => {
            let (g, hgp) = load_graph(spec)?;
            (generator(&g, hgp.as_ref(), a.k)?, a.k)
        }
        (None, None) => return Err(Fail::Usage("--graph or --circuit is required".into())),
    };
    let m = metrics(&c, (binomial(c.n(), k) as usize).max(1))?;
    out!("{}", serde_json::to_string_pretty(&json!({ "n": c.n(), "k": k, "metrics": m }))?);
    Ok(())
}

/// Family instance with n qubits, if the family has one.
fn family_at(family: &str, n: usize) -> Option<String> {
    match family {
        "lnn" | "all-to-all" => Some(format!("{family}:{n}")),
        "grid" => (n % 3 == 0 && n >= 6).then(|| format!("grid:3x{}", n / 3)),
        "ladder" => (n % 2 == 0 && n >= 4).then(|| format!("ladder:{n}")),
        "heavy-hex" => (n >= 4 && (n - 1) % 3 == 0).then(|| format!("heavy-hex:{}", (n - 1) / 3)),
        _ => None,
    }
}

/// Limits of mu and nu where they are known for this k.
fn targets(family: &str, k: usize) -> (Option<f64>, Option<f64>) {
    let kf = k as f64;
    match family {
        "lnn" => (Some(2.0), (k > 2).then_some(kf)),
        "all-to-all" => (Some(1.0), (k > 2).then_some(kf / 2.0)),
        "grid" => ((k == 2).then_some(4.0 / 3.0), None),
        "heavy-hex" => ((k == 2).then_some(5.0 / 3.0), None),
        "ladder" => ((k == 2).then_some(1.5), None),
        _ => (None, None),
    }
}

fn table(a: &TableArgs) -> Result<(), Fail> {
    let known = ["lnn", "all-to-all", "grid", "ladder", "heavy-hex"];
    if let Some(f) = a.families.iter().find(|f| !known.contains(&f.as_str())) {
        return Err(Fail::Usage(format!("unknown family {f}; expected one of {}", known.join(", "))));
    }
    if a.step == 0 {
        return Err(Fail::Usage("--step must be positive".into()));
    }
    out!("family,k,n,count,depth,mu,nu");
    for fam in &a.families {
        let ns: Vec<usize> = (a.min..=a.max).step_by(a.step).filter(|&n| family_at(fam, n).is_some()).collect();
        let mut rows = Vec::new();
        for (n, m) in ns.iter().zip(sweep(fam, a.k, &ns)) {
            let Some(m) = m else { continue };
            out!("{fam},{},{n},{},{},{:.6},{:.6}", a.k, m.cnot_count, m.cnot_depth, m.mu_n, m.nu_n);
            rows.push((*n, m.mu_n, m.nu_n));
        }
        if a.check_asymptote {
            check_asymptote(fam, a.k, &rows);
        }
    }
    Ok(())
}

/// Generator metrics for each n, built on scoped worker threads. None where
/// the family has no generator of this order.
fn sweep(fam: &str, k: usize, ns: &[usize]) -> Vec<Option<Metrics>> {
    let one = |n: usize| {
        let g = build_family(family_at(fam, n)?.parse().ok()?).ok()?;
        metrics(&generator(&g, None, k).ok()?, binomial(n, k) as usize).ok()
    };
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(ns.len().max(1));
    let chunk = ns.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = ns.chunks(chunk).map(|part| s.spawn(move || part.iter().map(|&n| one(n)).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect()
    })
}

fn check_asymptote(fam: &str, k: usize, rows: &[(usize, f64, f64)]) {
    let (mu_t, nu_t) = targets(fam, k);
    for (name, target, pick) in [("mu", mu_t, 1usize), ("nu", nu_t, 2)] {
        let Some(t) = target else { continue };
        let mut last: Option<f64> = None;
        let mut monotone = true;
        for &(n, mu, nu) in rows {
            let v = if pick == 1 { mu } else { nu };
            let err = (v - t).abs() / t;
            if last.is_some_and(|l| err > l + 1e-12) {
                monotone = false;
                eprintln!("{fam} k={k} {name}: n={n} {v:.6} target {t:.6} rel_err {err:.4} (non-monotone)");
            } else {
                eprintln!("{fam} k={k} {name}: n={n} {v:.6} target {t:.6} rel_err {err:.4}");
            }
            last = Some(err);
        }
        eprintln!("{fam} k={k} {name}: convergence {}", if monotone { "monotone" } else { "non-monotone" });
    }
}

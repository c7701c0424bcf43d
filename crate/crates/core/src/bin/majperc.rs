use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use majperc::growth::{
    block_scenario, verify_corollary_growcells, verify_lemma_growcloud, ForcingPattern,
    GoodnessParams, Verdict,
};
use majperc::harness::{
    build_matchings, coupled_trial, parse_p_grid, resolve_threads, run_scan, trial_initial,
    trial_instance, write_scan_csv, write_trials_jsonl, ExperimentConfig, GraphKind, Instance,
    MatchingSource, ScanResult,
};
use majperc::lattice::{tessellate, Metric};
use majperc::matchings::{check_admissible, AugmentedGraph};
use majperc::theory::{critical_prob, theorem_window, wheel_pplus};
use majperc::ubiquity::{
    check_lemma_needstable, check_ubiquity, component_diameter_stats, components, CellSet,
};
use majperc::{engine, Error, Graph, Lattice};

#[derive(Parser)]
#[command(
    name = "majperc",
    version,
    about = "Strong-majority bootstrap percolation on augmented tori"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical probabilities, the wheel threshold and the parameter window
    Theory(TheoryArgs),
    /// Build L(n,k) or L*(n,k,r) and report its shape
    BuildGraph(GraphArgs),
    /// Write an admissible matching tuple as JSON
    SampleMatchings(GraphArgs),
    /// Independent trials at a single p, as JSON lines
    Simulate(RunArgs),
    /// Dissemination frequency over a grid of p
    Scan(RunArgs),
    /// M_r on L* against M_2r on L from shared initial sets
    Coupled(RunArgs),
    /// Growth checks over a parameter grid
    Verify(VerifyArgs),
    /// Cell-level diagnostics of one trial
    Diagnose(DiagnoseArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphOpt {
    Lattice,
    Star,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatchingOpt {
    Det,
    Sample,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Args)]
struct TheoryArgs {
    /// Degree range `a..b`
    #[arg(long, default_value = "3..12")]
    d: String,
    /// Torus side for the parameter window
    #[arg(long)]
    n: Option<u64>,
    /// Natural log of the torus side, for sizes beyond 64 bits
    #[arg(long, conflicts_with = "n")]
    ln_n: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    p0: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Clone)]
struct GraphArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, value_enum, default_value = "star")]
    graph: GraphOpt,
    #[arg(long, value_enum, default_value = "sample")]
    matching: MatchingOpt,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, conflicts_with = "p_grid")]
    p: Option<f64>,
    /// `a:b:step`
    #[arg(long)]
    p_grid: Option<String>,
    #[arg(long, default_value_t = 1)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "star")]
    graph: GraphOpt,
    #[arg(long, value_enum, default_value = "sample")]
    matching: MatchingOpt,
    #[arg(long)]
    fixed_matching: bool,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 10)]
    k_max: u32,
    /// Largest `a` and `b` in the grid
    #[arg(long, default_value_t = 3)]
    ab_max: u32,
    /// Largest `k` for the cell-block scenarios
    #[arg(long, default_value_t = 8)]
    cells_k_max: u32,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Ubiquity tolerance; defaults to k^-100
    #[arg(long)]
    eps: Option<f64>,
    /// Trial index to diagnose
    #[arg(long, default_value_t = 0)]
    trial: u64,
}

enum Failure {
    Assertion(String),
    Usage(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::WrappedNeighbourhood { .. } => {
                Failure::Usage(e.to_string())
            }
            Error::InvariantViolation(_) => Failure::Assertion(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_range(s: &str) -> Result<(u32, u32), Failure> {
    let bad = || Failure::Usage(format!("expected a range a..b, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn theory(args: TheoryArgs) -> CliResult {
    let (lo, hi) = parse_range(&args.d)?;
    let json = args.format == Some(Format::Jsonl);
    let mut out = io::stdout().lock();
    if !json {
        writeln!(
            out,
            "{:>5} {:>12} {:>14} {:>12}",
            "d", "p_tilde", "argmin_y", "floor_cut"
        )?;
    }
    for d in lo..=hi {
        let r = critical_prob(d)?;
        if json {
            writeln!(out, "{}", serde_json::to_string(&r)?)?;
        } else {
            writeln!(
                out,
                "{:>5} {:>12.6} {:>14.6e} {:>12.6}",
                d, r.p_tilde, r.argmin_y, r.floor_cut_p_tilde
            )?;
        }
    }
    let w = wheel_pplus();
    if json {
        writeln!(out, "{}", json!({ "wheel_pplus": w }))?;
    } else {
        writeln!(out, "wheel p+ = {w:.6}")?;
    }
    let ln_n = args.ln_n.or(args.n.map(|n| (n as f64).ln()));
    if let Some(ln_n) = ln_n {
        let win = theorem_window(ln_n, args.p0)?;
        if json {
            writeln!(out, "{}", serde_json::to_string(&win)?)?;
        } else {
            writeln!(out, "window at ln n = {ln_n:.4}, p0 = {}", args.p0)?;
            writeln!(out, "  p_min = {:.6}", win.p_min)?;
            writeln!(
                out,
                "  k in [{}, {}] at p = {:.6}, r_max = {}",
                win.k_min, win.k_max, win.p, win.r_max
            )?;
            writeln!(out, "  nonempty = {}", win.nonempty)?;
        }
    }
    Ok(())
}

fn graph_kind(g: GraphOpt) -> GraphKind {
    match g {
        GraphOpt::Lattice => GraphKind::Lattice,
        GraphOpt::Star => GraphKind::Star,
    }
}

fn matching_source(m: MatchingOpt) -> MatchingSource {
    match m {
        MatchingOpt::Det => MatchingSource::Det,
        MatchingOpt::Sample => MatchingSource::Sample,
    }
}

fn graph_config(a: &GraphArgs) -> ExperimentConfig {
    ExperimentConfig {
        base_seed: a.seed,
        matching: matching_source(a.matching),
        ..ExperimentConfig::new(a.n, a.k, a.r, graph_kind(a.graph))
    }
}

fn build_graph(a: GraphArgs) -> CliResult {
    let cfg = graph_config(&a);
    cfg.validate()?;
    let lattice = Lattice::stencil(a.n, a.k)?;
    let mut out = output(&a.out)?;
    let summary = match cfg.graph {
        GraphKind::Lattice => json!({
            "graph": "lattice", "n": a.n, "k": a.k,
            "vertices": lattice.num_vertices(), "degree": lattice.regular_degree(),
        }),
        GraphKind::Star => {
            let m = build_matchings(&cfg, a.seed)?;
            let report = check_admissible(&m, &lattice);
            let g = AugmentedGraph::new(lattice, m)?;
            json!({
                "graph": "star", "n": a.n, "k": a.k, "r": a.r,
                "vertices": g.num_vertices(), "degree": g.regular_degree(),
                "admissible": report.is_admissible(),
                "threshold": engine::Rule::majority(a.r).threshold(g.regular_degree().unwrap_or(0)),
            })
        }
    };
    writeln!(out, "{summary}")?;
    Ok(())
}

fn sample_matchings(a: GraphArgs) -> CliResult {
    let cfg = graph_config(&a);
    let m = build_matchings(&cfg, a.seed)?;
    let mut out = output(&a.out)?;
    serde_json::to_writer(&mut out, &m.to_document())?;
    writeln!(out)?;
    Ok(())
}

fn run_config(a: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let p_grid = match (&a.p_grid, a.p) {
        (Some(g), _) => parse_p_grid(g)?,
        (None, Some(p)) => vec![p],
        (None, None) => return Err(Failure::Usage("one of --p or --p-grid is required".into())),
    };
    let cfg = ExperimentConfig {
        p_grid,
        trials: a.trials,
        base_seed: a.seed,
        matching: matching_source(a.matching),
        fixed_matching: a.fixed_matching,
        t: a.t,
        threads: Some(resolve_threads(a.threads)),
        ..ExperimentConfig::new(a.n, a.k, a.r, graph_kind(a.graph))
    };
    cfg.validate()?;
    let (t, capped) = cfg.resolved_t();
    if capped {
        eprintln!("note: tessellation side 100k^3 exceeds n/2; using t = {t}");
    }
    Ok(cfg)
}

fn scan_checks(scan: &ScanResult) -> CliResult {
    if scan.lemma42_failures > 0 {
        return Err(Failure::Assertion(format!(
            "{} trials failed the four-matched-vertices check",
            scan.lemma42_failures
        )));
    }
    if !scan.monotone() {
        return Err(Failure::Assertion(format!(
            "frequency decreases in p: {:?}",
            scan.monotonicity_violations
        )));
    }
    Ok(())
}

fn simulate(a: RunArgs) -> CliResult {
    let cfg = run_config(&a)?;
    let scan = run_scan(&cfg)?;
    let mut out = output(&a.out)?;
    match a.format.unwrap_or(Format::Jsonl) {
        Format::Jsonl => write_trials_jsonl(&mut out, &cfg, &scan.records)?,
        Format::Csv => write_scan_csv(&mut out, &scan)?,
    }
    out.flush()?;
    scan_checks(&scan)
}

fn scan(a: RunArgs) -> CliResult {
    let cfg = run_config(&a)?;
    let scan = run_scan(&cfg)?;
    let mut out = output(&a.out)?;
    match a.format.unwrap_or(Format::Csv) {
        Format::Jsonl => write_trials_jsonl(&mut out, &cfg, &scan.records)?,
        Format::Csv => write_scan_csv(&mut out, &scan)?,
    }
    out.flush()?;
    scan_checks(&scan)
}

fn coupled(a: RunArgs) -> CliResult {
    let cfg = run_config(&a)?;
    let mut out = output(&a.out)?;
    for i in 0..u64::from(cfg.trials) {
        let rec = coupled_trial(&cfg, i)?;
        writeln!(out, "{}", serde_json::to_string(&rec)?)?;
    }
    out.flush()?;
    Ok(())
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Fail(why) => format!("FAIL ({why})"),
        Verdict::Skipped(why) => format!("skip ({why})"),
    }
}

fn verify(a: VerifyArgs) -> CliResult {
    let mut out = io::stdout().lock();
    let (mut pass, mut fail) = (0u32, 0u32);
    writeln!(
        out,
        "{:>3} {:>3} {:>2} {:>2} {:>3} {:>8} {:>5}  verdict",
        "k", "m", "a", "b", "r", "pattern", "n"
    )?;
    for k in 3..=a.k_max {
        for m in 2..k {
            let params = GoodnessParams {
                k,
                m,
                r: k.div_ceil(m),
            };
            if !params.satisfiable() {
                continue;
            }
            for aa in 0..=a.ab_max {
                for b in 0..=a.ab_max {
                    for pat in ForcingPattern::ALL {
                        let rep = verify_lemma_growcloud(k, m, aa, b, params.r, pat);
                        match rep.verdict {
                            Verdict::Pass => pass += 1,
                            Verdict::Fail(_) => fail += 1,
                            Verdict::Skipped(_) => {}
                        }
                        writeln!(
                            out,
                            "{:>3} {:>3} {:>2} {:>2} {:>3} {:>8} {:>5}  {}",
                            k,
                            m,
                            aa,
                            b,
                            params.r,
                            pat.name(),
                            rep.n,
                            verdict_text(&rep.verdict)
                        )?;
                    }
                }
            }
        }
    }
    writeln!(out, "cell blocks:")?;
    for k in 3..=a.cells_k_max {
        for m in 2..k {
            let params = GoodnessParams {
                k,
                m,
                r: k.div_ceil(m),
            };
            if !params.satisfiable() {
                continue;
            }
            for pat in ForcingPattern::ALL {
                let s = block_scenario(params, pat, 3, true)?;
                let rep = verify_corollary_growcells(&s);
                match rep.verdict {
                    Verdict::Pass => pass += 1,
                    Verdict::Fail(_) => fail += 1,
                    Verdict::Skipped(_) => {}
                }
                writeln!(
                    out,
                    "{:>3} {:>3} {:>3} {:>8}  {}",
                    k,
                    m,
                    params.r,
                    pat.name(),
                    verdict_text(&rep.verdict)
                )?;
            }
        }
    }
    writeln!(out, "passed {pass}, failed {fail}")?;
    if fail > 0 {
        return Err(Failure::Assertion(format!("{fail} growth checks failed")));
    }
    Ok(())
}

fn diagnose(a: DiagnoseArgs) -> CliResult {
    let cfg = run_config(&a.run)?;
    let p = cfg.p_grid[0];
    let eps = a.eps.unwrap_or_else(|| f64::from(cfg.k).powi(-100));
    let tess = tessellate(cfg.n, cfg.resolved_t().0)?;
    let instance = trial_instance(&cfg, a.trial)?;
    let initial = trial_initial(&cfg, a.trial, p)?;
    let inactive = instance.run(cfg.rule(), &initial).state.inactive_set();
    let needstable = match &instance {
        Instance::Star(g) => Some(check_lemma_needstable(g, &inactive, &tess)),
        Instance::Lattice(_) => None,
    };
    let r_cells = CellSet::touching(&tess, &inactive);
    let z = r_cells.complement();
    let report = check_ubiquity(&z, eps)?;
    let stats = component_diameter_stats(&r_cells);
    let largest_active = components(&z, Metric::L1)
        .iter()
        .map(|c| c.size)
        .max()
        .unwrap_or(0);
    let mut out = output(&a.run.out)?;
    let doc = json!({
        "config_hash": cfg.hash(),
        "p": p,
        "trial": a.trial,
        "t": tess.t(),
        "inactive": inactive.count_ones(..),
        "largest_active_component": largest_active,
        "ubiquity": report,
        "diameter_stats": stats.rows,
        "claim_bounds": stats.claim_bounds(eps),
        "lemma42": &needstable,
    });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    out.flush()?;
    if let Some(Verdict::Fail(why)) = needstable.map(|r| r.verdict) {
        return Err(Failure::Assertion(why));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Theory(a) => theory(a),
        Command::BuildGraph(a) => build_graph(a),
        Command::SampleMatchings(a) => sample_matchings(a),
        Command::Simulate(a) => simulate(a),
        Command::Scan(a) => scan(a),
        Command::Coupled(a) => coupled(a),
        Command::Verify(a) => verify(a),
        Command::Diagnose(a) => diagnose(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

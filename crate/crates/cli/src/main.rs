use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use bianchi_core::arith::make_ring;
use bianchi_core::pipeline::{self, Report, Settings};
use bianchi_core::polyhedron::{face_pairings, floor_decomposition};
use bianchi_core::reference::{compare, Comparison};
use bianchi_core::torsion::{classify_type, extract, reduce};
use bianchi_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bianchi", version, about = "Homology and equivariant K-homology of Bianchi groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline and print homology, torsion and K-homology tables.
    Run(RunArgs),
    /// Check computed values against the published tables; exit 1 on any mismatch.
    Compare(RunArgs),
    /// Write the polyhedron or a torsion graph of a cached complex.
    Export(ExportArgs),
}

#[derive(Args, Clone)]
struct CacheArgs {
    /// Cache directory for orbit complexes and reports.
    #[arg(long, env = "BIANCHI_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Largest hemisphere norm the floor search may reach.
    #[arg(long, default_value_t = 4000)]
    norm_cap: u64,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Values of m: comma separated, ranges as a..b (inclusive).
    #[arg(short = 'm', required = true, value_delimiter = ',')]
    m: Vec<String>,
    /// Primes for mod-ℓ homology and torsion subcomplexes.
    #[arg(short = 'l', value_delimiter = ',', default_value = "2,3", value_parser = parse_prime)]
    l: Vec<u64>,
    #[arg(long, default_value_t = 10)]
    qmax: usize,
    /// Also compute Bredon homology and equivariant K-homology.
    #[arg(long)]
    ksh: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Time budget per m, in seconds.
    #[arg(long)]
    budget: Option<u64>,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(short = 'm')]
    m: u64,
    #[arg(value_enum)]
    what: Artifact,
    #[arg(short = 'l', default_value_t = 3, value_parser = parse_prime)]
    l: u64,
    #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
    format: ExportFormat,
    /// Output file; standard output if absent.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum Artifact {
    Polyhedron,
    TorsionGraph,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Json,
    Obj,
    Dot,
}

fn parse_prime(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(l @ (2 | 3 | 5)) => Ok(l),
        _ => Err(format!("ℓ must be one of 2, 3, 5 (got {s})")),
    }
}

fn expand_m(items: &[String]) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for item in items {
        let bad = || format!("cannot read m from {item:?}");
        if let Some((a, b)) = item.split_once("..") {
            let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            out.extend(a..=b);
        } else {
            out.push(item.trim().parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

fn settings(a: &RunArgs, k_homology: bool) -> Settings {
    Settings {
        norm_cap: a.cache.norm_cap,
        q_max: a.qmax,
        primes: a.l.clone(),
        k_homology,
        budget: a.budget.map(Duration::from_secs),
    }
}

fn error_record(m: Option<u64>, e: &Error) -> Value {
    json!({ "m": m, "error": { "kind": e.kind(), "message": e.to_string() } })
}

/// Reports in input order, computed one thread per m.
fn reports(ms: &[u64], s: &Settings, cache: Option<&Path>, reuse: bool) -> Vec<Result<Report, Error>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = ms
            .iter()
            .map(|&m| {
                scope.spawn(move || {
                    if let (true, Some(dir)) = (reuse, cache) {
                        if let Some(r) = pipeline::load_report(dir, m, s)? {
                            return Ok(r);
                        }
                    }
                    let r = pipeline::run(m, s, cache)?;
                    if let Some(dir) = cache {
                        pipeline::save_report(dir, &r, s)?;
                    }
                    Ok(r)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(Error::Internal("worker panicked".into())))).collect()
    })
}

fn markdown_report(r: &Report) -> String {
    let mut s = format!("## m = {}\n\n", r.m);
    let c = &r.cells;
    let _ = writeln!(s, "class number {}, orbit cells {} / {} / {}, orbifold Euler characteristic {}\n", r.class_number, c.vertices, c.edges, c.faces, r.orbifold_euler_characteristic);
    let h = &r.homology;
    let mut head = "| q | H_q |".to_string();
    let mut rule = "|---|---|".to_string();
    for d in &h.mod_l {
        let _ = write!(head, " dim H_q(F_{}) |", d.l);
        rule += "---|";
    }
    let _ = writeln!(s, "{head}\n{rule}");
    for q in 0..=h.q_max {
        let g = h.integral[q].as_ref().map_or("?".to_string(), |g| g.to_string());
        let mut line = format!("| {q} | {g} |");
        for d in &h.mod_l {
            let v = q.checked_sub(d.first_degree).and_then(|i| d.dims.get(i)).map_or(String::new(), |x| x.to_string());
            let _ = write!(line, " {v} |");
        }
        let _ = writeln!(s, "{line}");
    }
    s += "\n";
    for e in &h.extensions {
        let parts: Vec<String> = e.e_infinity.iter().map(|g| g.to_string()).collect();
        let _ = writeln!(s, "extension in degree {}: E∞ terms {} resolve to {} ({})", e.q, parts.join(", "), e.resolved, e.method);
    }
    for t in &r.torsion {
        let _ = writeln!(s, "{}-torsion subcomplex: {}", t.l, t.homeo_type);
    }
    if let Some(k) = &r.k_homology {
        let _ = writeln!(s, "K_0 = {}, K_1 = {}", k.k0, k.k1);
        for w in &k.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
    }
    let _ = writeln!(s, "rigidity exceptions: {}, axes exceptions: {}", r.rigidity_failures.len(), r.axes_failures.len());
    s
}

fn markdown_comparison(m: u64, cs: &[Comparison]) -> String {
    let mut s = format!("## m = {m}\n\n| quantity | expected | computed | match | anchor |\n|---|---|---|---|---|\n");
    for c in cs {
        let mark = if c.matches { "yes" } else { "NO" };
        let _ = writeln!(s, "| {} | {} | {} | {mark} | {} |", c.quantity, c.expected, c.computed, c.anchor);
    }
    s
}

fn cmd_run(a: &RunArgs, comparing: bool) -> ExitCode {
    let ms = match expand_m(&a.m) {
        Ok(ms) => ms,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let s = settings(a, a.ksh || comparing);
    let results = reports(&ms, &s, a.cache.cache_dir.as_deref(), comparing);
    let mut failed = false;
    let mut mismatch = false;
    let mut docs = Vec::new();
    let mut text = String::new();
    for (&m, r) in ms.iter().zip(&results) {
        match r {
            Err(e) => {
                failed = true;
                eprintln!("m = {m}: {e}");
                docs.push(error_record(Some(m), e));
                let _ = writeln!(text, "## m = {m}\n\nerror ({}): {e}\n", e.kind());
            }
            Ok(r) if comparing => {
                let cs = compare(r);
                let bad: Vec<&Comparison> = cs.iter().filter(|c| !c.matches).collect();
                for c in &bad {
                    eprintln!("m = {m}: {} differs: expected {}, computed {} [{}]", c.quantity, c.expected, c.computed, c.anchor);
                }
                mismatch |= !bad.is_empty();
                docs.push(json!({ "m": m, "mismatches": bad.len(), "comparisons": cs }));
                text += &markdown_comparison(m, &cs);
                text += "\n";
            }
            Ok(r) => {
                docs.push(json!({ "m": m, "report": r }));
                text += &markdown_report(r);
                text += "\n";
            }
        }
    }
    match a.format {
        Format::Json => {
            let schema = if comparing { "bianchi-compare/1" } else { "bianchi-run/1" };
            let doc = json!({ "schema": schema, "results": docs });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serialisable"));
        }
        Format::Markdown => print!("{text}"),
    }
    if failed {
        ExitCode::from(2)
    } else if mismatch {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn export(a: &ExportArgs) -> Result<String, Error> {
    let dir = a.cache.cache_dir.as_deref().ok_or_else(|| Error::UnknownArtifact("no cache directory given".into()))?;
    make_ring(a.m)?;
    let complex = pipeline::load_cached(dir, a.m)?;
    match (a.what, a.format) {
        (Artifact::Polyhedron, f @ (ExportFormat::Json | ExportFormat::Obj)) => {
            let floor = floor_decomposition(complex.ring, a.cache.norm_cap)?;
            let p = face_pairings(&floor)?;
            Ok(match f {
                ExportFormat::Json => p.to_json() + "\n",
                _ => p.to_obj(),
            })
        }
        (Artifact::TorsionGraph, ExportFormat::Dot) => Ok(reduce(&extract(&complex, a.l)).to_dot(&format!("torsion_m{}_l{}", a.m, a.l))),
        (Artifact::TorsionGraph, ExportFormat::Json) => {
            let g = reduce(&extract(&complex, a.l));
            let doc = json!({ "schema": "bianchi-torsion-graph/1", "m": a.m, "l": a.l, "homeo_type": classify_type(&g), "graph": g });
            Ok(serde_json::to_string_pretty(&doc).expect("serialisable") + "\n")
        }
        (Artifact::Polyhedron, ExportFormat::Dot) => Err(Error::UnknownArtifact("polyhedron in dot format".into())),
        (Artifact::TorsionGraph, ExportFormat::Obj) => Err(Error::UnknownArtifact("torsion graph in obj format".into())),
    }
}

fn cmd_export(a: &ExportArgs) -> ExitCode {
    match export(a) {
        Ok(text) => {
            let written = match &a.output {
                Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(e.to_string())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    println!("{}", error_record(Some(a.m), &e));
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("{e}");
            println!("{}", error_record(Some(a.m), &e));
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(a) => cmd_run(a, false),
        Command::Compare(a) => cmd_run(a, true),
        Command::Export(a) => cmd_export(a),
    }
}

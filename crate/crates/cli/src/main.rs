use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use nilclean_core::cache::{CacheKey, ResultCache};
use nilclean_core::dsl::{self, Context, DslError, Elaborated};
use nilclean_core::hash::bimodule_hash;
use nilclean_core::theorems::{self, Analysis, CorpusOptions, TheoremReport, Verdict};
use nilclean_core::{
    canonical_hash, enumerate_bimodules, FinAbGroup, GroupType, ValidatedRing, DEFAULT_BUDGET,
    TOOL_VERSION,
};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_AXIOM: u8 = 3;

#[derive(Parser)]
#[command(
    name = "nilclean",
    version,
    about = "Nil clean index of finite rings and triangular matrix rings"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Node budget for bimodule enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Nil clean index with witness and histogram of |η(a)|.
    Index { expr: String },
    /// η(a) for one element.
    Eta { expr: String, element: usize },
    /// Idempotent elements.
    Idem { expr: String },
    /// Nilpotent elements.
    Nilp { expr: String },
    /// Units.
    Units { expr: String },
    /// Isomorphism type of a group given as a type (`C2xC6`) or as the
    /// additive group of a ring expression.
    ClassifyGroup { spec: String },
    /// Run one theorem check on a triangular instance.
    Verify(VerifyArgs),
    /// Sweep every triangular instance over a catalog of rings.
    Corpus(CorpusArgs),
    /// Enumerate A–B-bimodule structures on an abelian group.
    EnumBimodules(EnumArgs),
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum TheoremArg {
    Main,
    L25,
    L26,
    T41,
    P42,
    Eta,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    theorem: TheoremArg,
    /// Full instance expression, e.g. `Tri(Z2, reg, Z2)`.
    #[arg(long, conflicts_with_all = ["a", "m", "b"])]
    expr: Option<String>,
    #[arg(long = "A", requires_all = ["m", "b"])]
    a: Option<String>,
    /// `reg`, `nat(<type>)` or `file(<path>)`.
    #[arg(long = "M")]
    m: Option<String>,
    #[arg(long = "B")]
    b: Option<String>,
    /// For `eta`: check a single flat element instead of all of them.
    #[arg(long)]
    element: Option<usize>,
}

#[derive(Args)]
struct CorpusArgs {
    /// Catalog file with one ring expression per line, or `default`.
    #[arg(long, default_value = "default")]
    catalog: String,
    /// Module orders to sweep.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    m_orders: Vec<usize>,
    /// Cache directory (default: $NILCLEAN_CACHE or .nilclean-cache).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Reuse cached instance results.
    #[arg(long)]
    resume: bool,
    /// Write JSONL here; without it JSONL goes to stdout and the summary to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumArgs {
    #[arg(long = "A")]
    a: String,
    #[arg(long = "B")]
    b: String,
    /// Group type such as `C2xC2`, or an order to take every type of that order.
    #[arg(long = "M")]
    m: String,
    /// Save each structure as `<k>.bimod` in this directory.
    #[arg(long)]
    write_dir: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        let code = if e.is_axiom_violation() {
            EXIT_AXIOM
        } else {
            EXIT_INPUT
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.jobs {
        // Ignored if a pool already exists; nothing else builds one first.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    match &cli.command {
        Command::Index { expr } => cmd_index(g, expr),
        Command::Eta { expr, element } => cmd_eta(g, expr, *element),
        Command::Idem { expr } => cmd_list(g, expr, "idempotents", ValidatedRing::idempotents),
        Command::Nilp { expr } => cmd_list(g, expr, "nilpotents", ValidatedRing::nilpotents),
        Command::Units { expr } => cmd_list(g, expr, "units", ValidatedRing::units),
        Command::ClassifyGroup { spec } => cmd_classify(g, spec),
        Command::Verify(args) => cmd_verify(g, args),
        Command::Corpus(args) => cmd_corpus(g, args),
        Command::EnumBimodules(args) => cmd_enum(g, args),
    }
}

fn context(g: &Global) -> Context {
    Context {
        base_dir: PathBuf::from("."),
        budget: g.budget,
    }
}

fn build(g: &Global, expr: &str) -> Result<Elaborated, Failure> {
    Ok(dsl::build(expr, &context(g))?)
}

fn print_json(v: &impl Serialize) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn decode(e: &Elaborated, x: usize) -> Option<[usize; 3]> {
    e.triangular.as_ref().map(|t| {
        let (a, w, b) = t.decode(x);
        [a, w, b]
    })
}

fn show(e: &Elaborated, x: usize) -> String {
    match decode(e, x) {
        Some([a, w, b]) => format!("{x} = ({a}, {w}, {b})"),
        None => x.to_string(),
    }
}

fn open_cache(g: &Global, dir: Option<&Path>) -> Result<Option<ResultCache>, Failure> {
    if g.no_cache {
        return Ok(None);
    }
    let dir = dir
        .map(Path::to_path_buf)
        .unwrap_or_else(ResultCache::default_dir);
    ResultCache::open(&dir)
        .map(Some)
        .map_err(|e| Failure::input(format!("cache directory {}: {e}", dir.display())))
}

/// The cached part of an index report; `expr` is added on output.
#[derive(Serialize, Deserialize)]
struct IndexBlob {
    hash: String,
    order: usize,
    nin: usize,
    witness: usize,
    histogram: BTreeMap<usize, usize>,
}

fn cmd_index(g: &Global, expr: &str) -> CmdResult {
    let e = build(g, expr)?;
    let hash = canonical_hash(&e.ring);
    let cache = open_cache(g, None)?;
    let key = CacheKey::new(hash.clone(), "index", TOOL_VERSION);
    let blob = match cache.as_ref().and_then(|c| c.get::<IndexBlob>(&key)) {
        Some(b) => b,
        None => {
            let r = e.ring.nil_clean_index_par();
            let b = IndexBlob {
                hash,
                order: e.ring.order(),
                nin: r.nin,
                witness: r.witness,
                histogram: r.histogram,
            };
            if let Some(c) = &cache {
                if let Err(err) = c.put(&key, &b) {
                    eprintln!("warning: could not write cache: {err}");
                }
            }
            b
        }
    };
    if g.json {
        print_json(&json!({
            "expr": expr,
            "hash": blob.hash,
            "order": blob.order,
            "nin": blob.nin,
            "witness": blob.witness,
            "histogram": blob.histogram,
        }));
    } else {
        let hist: Vec<String> = blob
            .histogram
            .iter()
            .map(|(k, v)| format!("{k}:{v}"))
            .collect();
        println!("expr       {expr}");
        println!("hash       {}", blob.hash);
        println!("order      {}", blob.order);
        println!("nin        {}", blob.nin);
        println!("witness    {}", show(&e, blob.witness));
        println!("histogram  {}", hist.join(" "));
    }
    Ok(0)
}

fn cmd_eta(g: &Global, expr: &str, element: usize) -> CmdResult {
    let e = build(g, expr)?;
    let n = e.ring.order();
    if element >= n {
        return Err(Failure::input(format!(
            "element {element} out of range 0..{n}"
        )));
    }
    let eta = e.ring.eta(element);
    if g.json {
        let decoded: Option<Vec<[usize; 3]>> = e
            .triangular
            .as_ref()
            .map(|_| eta.members.iter().filter_map(|&x| decode(&e, x)).collect());
        print_json(&json!({
            "expr": expr,
            "element": element,
            "triple": decode(&e, element),
            "size": eta.len(),
            "members": eta.members,
            "triples": decoded,
        }));
    } else {
        println!("eta({}) has {} member(s)", show(&e, element), eta.len());
        for &x in &eta.members {
            println!("  {}", show(&e, x));
        }
    }
    Ok(0)
}

fn cmd_list(g: &Global, expr: &str, what: &str, f: fn(&ValidatedRing) -> Vec<usize>) -> CmdResult {
    let e = build(g, expr)?;
    let xs = f(&e.ring);
    if g.json {
        let decoded: Option<Vec<[usize; 3]>> = e
            .triangular
            .as_ref()
            .map(|_| xs.iter().filter_map(|&x| decode(&e, x)).collect());
        print_json(&json!({ "expr": expr, what: xs, "count": xs.len(), "triples": decoded }));
    } else {
        println!("{} {what}", xs.len());
        for &x in &xs {
            println!("  {}", show(&e, x));
        }
    }
    Ok(0)
}

fn cmd_classify(g: &Global, spec: &str) -> CmdResult {
    let t = match spec.trim().parse::<GroupType>() {
        Ok(t) => t,
        Err(_) => {
            let e = build(g, spec)?;
            FinAbGroup::additive_group_of(&e.ring)
                .classify()
                .map_err(|err| Failure::input(err.to_string()))?
        }
    };
    if g.json {
        print_json(&json!({
            "input": spec,
            "type": t,
            "order": t.order(),
            "invariant_factors": t.invariant_factors(),
        }));
    } else {
        println!("{t}");
    }
    Ok(0)
}

fn instance_expr(args: &VerifyArgs) -> Result<String, Failure> {
    match (&args.expr, &args.a, &args.m, &args.b) {
        (Some(e), None, None, None) => Ok(e.clone()),
        (None, Some(a), Some(m), Some(b)) => Ok(format!("Tri({a}, {m}, {b})")),
        _ => Err(Failure::input("give either --expr or all of --A, --M, --B")),
    }
}

fn render_report(r: &TheoremReport) -> String {
    let mut out = String::new();
    let verdict = match r.verdict {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::NotApplicable => "N/A",
    };
    let _ = writeln!(
        out,
        "{:<10} {verdict:<4} {}",
        r.theorem_id.as_str(),
        r.claimed
    );
    if r.observed != Value::Null {
        let _ = writeln!(out, "           observed {}", r.observed);
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "           witness  {w}");
    }
    if let Some(reason) = &r.reason {
        let _ = writeln!(out, "           reason   {reason}");
    }
    out
}

fn cmd_verify(g: &Global, args: &VerifyArgs) -> CmdResult {
    let expr = instance_expr(args)?;
    let e = build(g, &expr)?;
    let spec = e
        .triangular
        .as_ref()
        .ok_or_else(|| Failure::input(format!("{expr} is not a triangular ring")))?;
    let theorem_err = |err: theorems::TheoremError| Failure::input(err.to_string());
    let analysis = Analysis::new(spec)
        .map_err(theorem_err)?
        .with_label(expr.clone());
    let reports: Vec<TheoremReport> = match args.theorem {
        TheoremArg::Main => vec![analysis.verify_main().map_err(theorem_err)?],
        TheoremArg::L25 => analysis.lemma_bounds().into(),
        TheoremArg::L26 => vec![analysis.lemma_two_power()],
        TheoremArg::T41 => vec![analysis.index2_sufficiency()],
        TheoremArg::P42 => vec![analysis.index3_sufficiency()],
        TheoremArg::Eta => match args.element {
            Some(x) if x >= e.ring.order() => {
                return Err(Failure::input(format!(
                    "element {x} out of range 0..{}",
                    e.ring.order()
                )))
            }
            Some(x) => vec![analysis.eta_crosscheck(x)],
            None => vec![analysis.eta_crosscheck_all()],
        },
    };
    for r in &reports {
        if g.json {
            print_json(r);
        } else {
            print!("{}", render_report(r));
        }
    }
    let failed = reports.iter().any(|r| r.verdict == Verdict::Fail);
    Ok(if failed { EXIT_FAIL } else { 0 })
}

fn cmd_corpus(g: &Global, args: &CorpusArgs) -> CmdResult {
    let catalog = if args.catalog == "default" {
        dsl::default_catalog()
    } else {
        dsl::load_catalog(Path::new(&args.catalog), g.budget)?
    };
    let cache = open_cache(g, args.cache.as_deref())?;
    if args.resume && cache.is_none() {
        return Err(Failure::input("--resume needs a cache"));
    }
    let start = Instant::now();
    let run = theorems::run_corpus(
        &catalog,
        &CorpusOptions {
            m_orders: args.m_orders.clone(),
            budget: g.budget,
            jobs: g.jobs,
            cache: cache.as_ref(),
            resume: args.resume,
        },
    )
    .map_err(|e| Failure::input(e.to_string()))?;
    let wall = start.elapsed().as_secs_f64();
    let jsonl = run.to_jsonl();
    let summary_text = if g.json {
        let mut v = serde_json::to_value(&run.summary).expect("serializable");
        v["cache_hits"] = json!(run.cache_hits);
        v["wall_time_s"] = json!(wall);
        format!("{v}\n")
    } else {
        render_summary(&run, wall)
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, &jsonl)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            print!("{summary_text}");
        }
        None => {
            print!("{jsonl}");
            eprint!("{summary_text}");
        }
    }
    Ok(if run.summary.totals.fail > 0 {
        EXIT_FAIL
    } else {
        0
    })
}

fn render_summary(run: &theorems::CorpusRun, wall: f64) -> String {
    let s = &run.summary;
    let mut out = String::new();
    let _ = writeln!(out, "instances  {}", s.instances);
    let _ = writeln!(out, "checks     {}", s.checks);
    let _ = writeln!(out, "cache hits {}", run.cache_hits);
    let _ = writeln!(out, "wall time  {wall:.2}s");
    let _ = writeln!(
        out,
        "{:<12}{:>8}{:>8}{:>8}",
        "theorem", "pass", "fail", "n/a"
    );
    for (id, c) in &s.by_theorem {
        let _ = writeln!(
            out,
            "{:<12}{:>8}{:>8}{:>8}",
            id.as_str(),
            c.pass,
            c.fail,
            c.not_applicable
        );
    }
    let t = &s.totals;
    let _ = writeln!(
        out,
        "{:<12}{:>8}{:>8}{:>8}",
        "total", t.pass, t.fail, t.not_applicable
    );
    for sk in &s.skipped {
        let _ = writeln!(
            out,
            "skipped    {} / {} / {}: {}",
            sk.a, sk.m_type, sk.b, sk.reason
        );
    }
    out
}

fn cmd_enum(g: &Global, args: &EnumArgs) -> CmdResult {
    let a = build(g, &args.a)?.ring;
    let b = build(g, &args.b)?.ring;
    let types = match args.m.trim().parse::<usize>() {
        Ok(0) => return Err(Failure::input("group order must be positive")),
        Ok(n) => GroupType::all_of_order(n),
        Err(_) => vec![args
            .m
            .parse::<GroupType>()
            .map_err(|e| Failure::input(e.to_string()))?],
    };
    if let Some(dir) = &args.write_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    }
    let mut k = 0;
    let mut rows = Vec::new();
    for t in &types {
        let found = enumerate_bimodules(&a, &b, &FinAbGroup::from_type(t), g.budget)
            .map_err(|e| Failure::from(DslError::from(e)))?;
        if !g.json {
            println!("{t}: {} structure(s)", found.len());
        }
        for bm in &found {
            let hash = bimodule_hash(bm);
            let mut row = json!({ "index": k, "m_type": t, "hash": hash });
            if let Some(dir) = &args.write_dir {
                let path = dir.join(format!("{k}.bimod"));
                std::fs::write(&path, nilclean_core::io::render_bimodule_file(bm))
                    .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
                row["file"] = json!(path.display().to_string());
            }
            if !g.json {
                println!("  #{k} {hash}");
            }
            rows.push(row);
            k += 1;
        }
    }
    if g.json {
        print_json(&json!({ "a": args.a, "b": args.b, "count": k, "structures": rows }));
    }
    Ok(0)
}

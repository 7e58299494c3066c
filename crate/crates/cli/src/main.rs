//! Command-line front end for the structural Ramsey workbench.
//!
//! Every command reads its inputs, computes, and prints one JSON document
//! on stdout; identical invocations produce byte-identical output. Numeric
//! results carry the query echoed back. Exit codes: 0 on success, 1 for
//! malformed input (diagnostics on stderr), 2 for structured errors such as
//! exceeded caps (a JSON error document on stdout).

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use ramsey_core::approx::{
    scheme_dual_orders, scheme_enumerated, scheme_linear_orders, star, verify_scheme, EmbedScheme,
};
use ramsey_core::arrowcheck::{
    check_arrow, min_threshold, search_witness, ArrowQuery, SearchConfig, SearchMode,
};
use ramsey_core::category::{Category, Direct, Dual};
use ramsey_core::fraisse::{one_point_extension, saturate_stage, Age};
use ramsey_core::paramwords::enumerate_parameter_words;
use ramsey_core::quotients::{hom_classes, GroupFamily};
use ramsey_core::relstruct::{Embedding, Structure};
use ramsey_core::rigidsurj::{enumerate_rigid_surjections, RigidSurjection};
use ramsey_core::selftest;

#[derive(Parser)]
#[command(name = "ramsey", version, about = "finite-scale structural Ramsey workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate rigid surjections, parameter words, embeddings or hom-classes.
    Enumerate {
        #[command(subcommand)]
        what: EnumerateCmd,
    },
    /// Decide a Ramsey arrow C → (B)^A_{k,t}.
    Arrow(ArrowArgs),
    /// Least threshold t for which the arrow holds.
    #[command(name = "min-t")]
    MinT(MinTArgs),
    /// Scan a candidate range for the least witness C.
    Witness(WitnessArgs),
    /// Exhaustively verify an approximation scheme's defining identity.
    #[command(name = "verify-scheme")]
    VerifyScheme(VerifySchemeArgs),
    /// Compute the ⋆-composition h ⋆ f in a scheme.
    Star(StarArgs),
    /// Build a deterministic saturated stage of a Fraïssé limit.
    #[command(name = "fraisse-stage")]
    FraisseStage(FraisseStageArgs),
    /// Run the named check suite (or all suites).
    Selftest(SelftestArgs),
}

#[derive(Subcommand)]
enum EnumerateCmd {
    /// All rigid surjections n ↠ m.
    Rsurj {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// All m-parameter words of length n over the alphabet.
    Words {
        #[arg(long, default_value_t = 0)]
        alphabet: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// All embeddings A ↪ B between structures.
    Emb {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
    },
    /// The hom-set quotient hom(A,B)/~𝔊.
    Classes {
        #[arg(long, default_value = "direct")]
        category: String,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long, default_value = "identity")]
        family: String,
    },
}

#[derive(Args)]
struct ArrowArgs {
    #[arg(long, default_value = "direct")]
    category: String,
    #[arg(long = "A")]
    a: String,
    #[arg(long = "B")]
    b: String,
    #[arg(long = "C")]
    c: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value = "identity")]
    family: String,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct MinTArgs {
    #[arg(long, default_value = "direct")]
    category: String,
    #[arg(long = "A")]
    a: String,
    #[arg(long = "B")]
    b: String,
    #[arg(long = "C")]
    c: String,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "identity")]
    family: String,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long, default_value = "direct")]
    category: String,
    #[arg(long = "A")]
    a: String,
    #[arg(long = "B")]
    b: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    /// Candidate linear orders range over sizes from..=to.
    #[arg(long)]
    from: usize,
    #[arg(long)]
    to: usize,
    #[arg(long, default_value = "identity")]
    family: String,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct SearchArgs {
    /// Search mode: backtracking or naive.
    #[arg(long, default_value = "backtracking")]
    mode: String,
    /// Worker threads for the backtracking search.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Cap on |hom(A,C)/~| for backtracking.
    #[arg(long = "max-classes", default_value_t = 40)]
    max_classes: usize,
    /// Cap on k^N for the naive enumeration (RAMSEY_CAP_COLORINGS overrides).
    #[arg(long = "max-colorings")]
    max_colorings: Option<u128>,
    /// Prune colorings that are not canonical under Aut(C).
    #[arg(long, default_value_t = false)]
    symmetry: bool,
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig, CliError> {
        let mode = match self.mode.as_str() {
            "backtracking" => SearchMode::Backtracking,
            "naive" => SearchMode::Naive,
            other => return Err(CliError::Parse(format!("unknown mode {other}"))),
        };
        let mut cfg = SearchConfig {
            max_classes: self.max_classes,
            symmetry_reduction: self.symmetry,
            workers: self.workers.max(1),
            mode,
            ..SearchConfig::default()
        };
        if let Some(cap) = self.max_colorings {
            cfg.max_naive_colorings = cap;
        } else if let Ok(env_cap) = std::env::var("RAMSEY_CAP_COLORINGS") {
            cfg.max_naive_colorings = env_cap
                .parse()
                .map_err(|_| CliError::Parse(format!("bad RAMSEY_CAP_COLORINGS: {env_cap}")))?;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct VerifySchemeArgs {
    /// Scheme name: linear, dual-linear, or enumerated:<age>.
    scheme: String,
    /// Largest object size on the verification grid.
    #[arg(long = "size-max", visible_alias = "s-max", default_value_t = 3)]
    size_max: usize,
    /// Truncation window (targets for linear, domain size for dual-linear).
    #[arg(long, visible_alias = "n-max", visible_alias = "targets-max")]
    window: Option<usize>,
    /// Stage construction rounds for enumerated schemes.
    #[arg(long, default_value_t = 2)]
    rounds: usize,
    #[arg(long = "seed-size", default_value_t = 2)]
    seed_size: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct StarArgs {
    /// Scheme name: linear, dual-linear, or enumerated:<age>.
    #[arg(long)]
    scheme: String,
    /// The S-endomorphism truncation: a rigid surjection JSON for
    /// dual-linear, a JSON array of prefix targets otherwise.
    #[arg(long = "h")]
    h: String,
    /// The finite morphism: a rigid surjection JSON for dual-linear, an
    /// embedding JSON ({"dom":…,"cod":…,"map":…}) otherwise; for the linear
    /// scheme dom/cod may be plain sizes.
    #[arg(long = "f")]
    f: String,
    #[arg(long, default_value_t = 16)]
    window: usize,
    #[arg(long, default_value_t = 2)]
    rounds: usize,
    #[arg(long = "seed-size", default_value_t = 2)]
    seed_size: usize,
}

#[derive(Args)]
struct FraisseStageArgs {
    #[arg(long)]
    age: String,
    #[arg(long)]
    rounds: usize,
    #[arg(long = "seed-size")]
    seed_size: usize,
    /// Write the stage JSON to a file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Suite name; all suites when omitted.
    suite: Option<String>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

enum CliError {
    /// Malformed input: diagnostics on stderr, exit 1.
    Parse(String),
    /// Structured failure: JSON on stdout, exit 2.
    Semantic(ramsey_core::Error),
}

impl From<ramsey_core::Error> for CliError {
    fn from(e: ramsey_core::Error) -> Self {
        CliError::Semantic(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Parse(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Semantic(e)) => {
            emit(&json!({ "error": e.to_string() }));
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(value: &T) {
    use std::io::Write;
    let text = serde_json::to_string(value).expect("serializable output");
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").and_then(|()| out.flush()).is_err() {
        // downstream closed the pipe
        std::process::exit(0);
    }
}

/// `lo:N`, `graph:@file.json`, `@file.json`, or inline structure JSON.
fn parse_structure(spec: &str) -> Result<Structure, CliError> {
    if let Some(n) = spec.strip_prefix("lo:") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::Parse(format!("bad linear order size in {spec:?}")))?;
        return Ok(Structure::linear_order(n));
    }
    let path = spec
        .strip_prefix("graph:@")
        .or_else(|| spec.strip_prefix('@'));
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Parse(format!("cannot read {p}: {e}")))?,
        None if spec.trim_start().starts_with('{') => spec.to_string(),
        None => {
            return Err(CliError::Parse(format!(
                "expected lo:N, graph:@file, @file or inline JSON, got {spec:?}"
            )))
        }
    };
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("bad structure JSON: {e}")))
}

/// A finite linear order for the dual category: a plain size or `lo:N`.
fn parse_order_size(spec: &str) -> Result<usize, CliError> {
    let body = spec.strip_prefix("lo:").unwrap_or(spec);
    body.parse()
        .map_err(|_| CliError::Parse(format!("bad order size {spec:?}")))
}

fn parse_family<C: Category>(name: &str) -> Result<GroupFamily<C>, CliError> {
    match name {
        "identity" | "id" => Ok(GroupFamily::IdentityOnly),
        "automorphism" | "aut" => Ok(GroupFamily::FullAutomorphism),
        other => Err(CliError::Parse(format!(
            "unknown family {other}; expected identity or automorphism"
        ))),
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Enumerate { what } => enumerate(what),
        Command::Arrow(args) => arrow(args),
        Command::MinT(args) => min_t(args),
        Command::Witness(args) => witness(args),
        Command::VerifyScheme(args) => verify_scheme_cmd(args),
        Command::Star(args) => star_cmd(args),
        Command::FraisseStage(args) => fraisse_stage(args),
        Command::Selftest(args) => selftest_cmd(args),
    }
}

fn enumerate(what: EnumerateCmd) -> Result<(), CliError> {
    match what {
        EnumerateCmd::Rsurj { n, m } => {
            let items = enumerate_rigid_surjections(n, m)?;
            emit(&json!({
                "query": {"enumerate": "rsurj", "n": n, "m": m},
                "count": items.len(),
                "items": items,
            }));
        }
        EnumerateCmd::Words { alphabet, n, m } => {
            let items = enumerate_parameter_words(alphabet, n, m)?;
            emit(&json!({
                "query": {"enumerate": "words", "alphabet": alphabet, "n": n, "m": m},
                "count": items.len(),
                "items": items,
            }));
        }
        EnumerateCmd::Emb { a, b } => {
            let sa = parse_structure(&a)?;
            let sb = parse_structure(&b)?;
            let items = ramsey_core::relstruct::enumerate_embeddings(&sa, &sb)?;
            emit(&json!({
                "query": {"enumerate": "emb", "A": sa, "B": sb},
                "count": items.len(),
                "items": items.iter().map(|e| e.map().to_vec()).collect::<Vec<_>>(),
            }));
        }
        EnumerateCmd::Classes {
            category,
            a,
            b,
            family,
        } => match category.as_str() {
            "direct" => {
                let sa = parse_structure(&a)?;
                let sb = parse_structure(&b)?;
                let fam = parse_family::<Direct>(&family)?;
                let classes = hom_classes(&Direct, &sa, &sb, &fam)?;
                emit(&json!({
                    "query": {"enumerate": "classes", "category": "direct", "A": sa, "B": sb, "family": fam.tag()},
                    "count": classes.len(),
                    "classes": classes,
                }));
            }
            "dual" => {
                let na = parse_order_size(&a)?;
                let nb = parse_order_size(&b)?;
                let fam = parse_family::<Dual>(&family)?;
                let classes = hom_classes(&Dual, &na, &nb, &fam)?;
                emit(&json!({
                    "query": {"enumerate": "classes", "category": "dual", "A": na, "B": nb, "family": fam.tag()},
                    "count": classes.len(),
                    "classes": classes,
                }));
            }
            other => return Err(CliError::Parse(format!("unknown category {other}"))),
        },
    }
    Ok(())
}

fn arrow(args: ArrowArgs) -> Result<(), CliError> {
    let cfg = args.search.config()?;
    match args.category.as_str() {
        "direct" => {
            let q = ArrowQuery::<Direct> {
                a: parse_structure(&args.a)?,
                b: parse_structure(&args.b)?,
                c: parse_structure(&args.c)?,
                colors: args.k,
                threshold: args.t,
                family: parse_family(&args.family)?,
            };
            let result = check_arrow(&Direct, &q, &cfg)?;
            emit(&json!({
                "query": {"category": "direct", "A": q.a, "B": q.b, "C": q.c,
                          "k": q.colors, "t": q.threshold, "family": q.family.tag()},
                "holds": result.holds,
                "counterexample": result.counterexample,
            }));
        }
        "dual" => {
            let q = ArrowQuery::<Dual> {
                a: parse_order_size(&args.a)?,
                b: parse_order_size(&args.b)?,
                c: parse_order_size(&args.c)?,
                colors: args.k,
                threshold: args.t,
                family: parse_family(&args.family)?,
            };
            let result = check_arrow(&Dual, &q, &cfg)?;
            emit(&json!({
                "query": {"category": "dual", "A": q.a, "B": q.b, "C": q.c,
                          "k": q.colors, "t": q.threshold, "family": q.family.tag()},
                "holds": result.holds,
                "counterexample": result.counterexample,
            }));
        }
        other => return Err(CliError::Parse(format!("unknown category {other}"))),
    }
    Ok(())
}

fn min_t(args: MinTArgs) -> Result<(), CliError> {
    let cfg = args.search.config()?;
    match args.category.as_str() {
        "direct" => {
            let a = parse_structure(&args.a)?;
            let b = parse_structure(&args.b)?;
            let c = parse_structure(&args.c)?;
            let fam = parse_family::<Direct>(&args.family)?;
            let t = min_threshold(&Direct, &a, &b, &c, args.k, &fam, &cfg)?;
            emit(&json!({
                "query": {"category": "direct", "A": a, "B": b, "C": c, "k": args.k, "family": fam.tag()},
                "t": t,
            }));
        }
        "dual" => {
            let a = parse_order_size(&args.a)?;
            let b = parse_order_size(&args.b)?;
            let c = parse_order_size(&args.c)?;
            let fam = parse_family::<Dual>(&args.family)?;
            let t = min_threshold(&Dual, &a, &b, &c, args.k, &fam, &cfg)?;
            emit(&json!({
                "query": {"category": "dual", "A": a, "B": b, "C": c, "k": args.k, "family": fam.tag()},
                "t": t,
            }));
        }
        other => return Err(CliError::Parse(format!("unknown category {other}"))),
    }
    Ok(())
}

fn witness(args: WitnessArgs) -> Result<(), CliError> {
    let cfg = args.search.config()?;
    if args.from > args.to {
        return Err(CliError::Parse("--from exceeds --to".to_string()));
    }
    match args.category.as_str() {
        "direct" => {
            let a = parse_structure(&args.a)?;
            let b = parse_structure(&args.b)?;
            let fam = parse_family::<Direct>(&args.family)?;
            let candidates: Vec<Structure> =
                (args.from..=args.to).map(Structure::linear_order).collect();
            let out = search_witness(&Direct, &a, &b, args.k, args.t, &fam, &candidates, &cfg)?;
            emit(&json!({
                "query": {"category": "direct", "A": a, "B": b, "k": args.k, "t": args.t,
                          "family": fam.tag(), "from": args.from, "to": args.to},
                "found": out.found.as_ref().map(|c| c.size()),
                "skipped": out.skipped.iter().map(|(c, e)| json!({"candidate": c.size(), "error": e.to_string()})).collect::<Vec<_>>(),
            }));
        }
        "dual" => {
            let a = parse_order_size(&args.a)?;
            let b = parse_order_size(&args.b)?;
            let fam = parse_family::<Dual>(&args.family)?;
            let candidates: Vec<usize> = (args.from..=args.to).collect();
            let out = search_witness(&Dual, &a, &b, args.k, args.t, &fam, &candidates, &cfg)?;
            emit(&json!({
                "query": {"category": "dual", "A": a, "B": b, "k": args.k, "t": args.t,
                          "family": fam.tag(), "from": args.from, "to": args.to},
                "found": out.found,
                "skipped": out.skipped.iter().map(|(c, e)| json!({"candidate": c, "error": e.to_string()})).collect::<Vec<_>>(),
            }));
        }
        other => return Err(CliError::Parse(format!("unknown category {other}"))),
    }
    Ok(())
}

fn build_enumerated_scheme(
    age_name: &str,
    rounds: usize,
    seed_size: usize,
) -> Result<EmbedScheme, CliError> {
    let age = Age::parse(age_name)?;
    let stage = saturate_stage(age, rounds, seed_size)?;
    Ok(scheme_enumerated(&stage, one_point_extension(age))?)
}

fn verify_scheme_cmd(args: VerifySchemeArgs) -> Result<(), CliError> {
    let workers = args.workers.max(1);
    let (report, window) = match args.scheme.as_str() {
        "linear" => {
            let window = args.window.unwrap_or(8);
            let scheme = scheme_linear_orders(window);
            (verify_scheme(&scheme, args.size_max, workers)?, window)
        }
        "dual-linear" => {
            let window = args.window.unwrap_or(7);
            let scheme = scheme_dual_orders(window);
            (verify_scheme(&scheme, args.size_max, workers)?, window)
        }
        name => match name.strip_prefix("enumerated:") {
            Some(age_name) => {
                let scheme = build_enumerated_scheme(age_name, args.rounds, args.seed_size)?;
                let window = scheme.stage().size();
                (verify_scheme(&scheme, args.size_max, workers)?, window)
            }
            None => {
                return Err(CliError::Parse(format!(
                    "unknown scheme {name}; expected linear, dual-linear or enumerated:<age>",
                )))
            }
        },
    };
    emit(&json!({
        "query": {"scheme": args.scheme, "size_max": args.size_max, "window": window},
        "checked": report.checked,
        "failures": report.failures,
    }));
    Ok(())
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("bad {what} JSON: {e}")))
}

/// Embedding JSON whose dom/cod may be plain linear-order sizes.
fn parse_lo_embedding(text: &str) -> Result<Embedding, CliError> {
    #[derive(serde::Deserialize)]
    struct Compact {
        dom: usize,
        cod: usize,
        map: Vec<usize>,
    }
    if let Ok(c) = serde_json::from_str::<Compact>(text) {
        return Ok(Embedding::new(
            Structure::linear_order(c.dom),
            Structure::linear_order(c.cod),
            c.map,
        )?);
    }
    parse_json("embedding", text)
}

fn star_cmd(args: StarArgs) -> Result<(), CliError> {
    match args.scheme.as_str() {
        "dual-linear" => {
            let h: RigidSurjection = parse_json("rigid surjection", &args.h)?;
            let f: RigidSurjection = parse_json("rigid surjection", &args.f)?;
            let scheme = scheme_dual_orders(args.window.max(h.dom()));
            let result = star(&scheme, &h, &f)?;
            emit(&json!({
                "query": {"scheme": "dual-linear", "h": h, "f": f},
                "result": result,
            }));
        }
        "linear" => {
            let targets: Vec<usize> = parse_json("targets array", &args.h)?;
            let f = parse_lo_embedding(&args.f)?;
            let window = args
                .window
                .max(targets.iter().copied().max().unwrap_or(0) + 1);
            let scheme = scheme_linear_orders(window);
            let h = scheme.prefix_endo(targets)?;
            let result = star(&scheme, &h, &f)?;
            emit(&json!({
                "query": {"scheme": "linear", "h": h.map(), "f": f},
                "result": {"dom": result.dom().size(), "cod": result.cod().size(), "map": result.map()},
            }));
        }
        name => match name.strip_prefix("enumerated:") {
            Some(age_name) => {
                let scheme = build_enumerated_scheme(age_name, args.rounds, args.seed_size)?;
                let targets: Vec<usize> = parse_json("targets array", &args.h)?;
                let f: Embedding = parse_json("embedding", &args.f)?;
                let h = scheme.prefix_endo(targets)?;
                let result = star(&scheme, &h, &f)?;
                emit(&json!({
                    "query": {"scheme": args.scheme, "h": h.map(), "f": f},
                    "result": result,
                }));
            }
            None => {
                return Err(CliError::Parse(format!(
                    "unknown scheme {name}; expected linear, dual-linear or enumerated:<age>",
                )))
            }
        },
    }
    Ok(())
}

fn fraisse_stage(args: FraisseStageArgs) -> Result<(), CliError> {
    let age = Age::parse(&args.age)?;
    let stage = saturate_stage(age, args.rounds, args.seed_size)?;
    match args.out {
        Some(path) => {
            let text = serde_json::to_string(&stage).expect("serializable stage");
            std::fs::write(&path, text + "\n")
                .map_err(|e| CliError::Parse(format!("cannot write {}: {e}", path.display())))?
        }
        None => emit(&stage),
    }
    Ok(())
}

fn selftest_cmd(args: SelftestArgs) -> Result<(), CliError> {
    let workers = args.workers.max(1);
    let reports = match &args.suite {
        Some(name) => vec![selftest::run_suite(name, workers)?],
        None => selftest::run_all(workers)?,
    };
    let ok = reports.iter().all(|r| r.ok());
    emit(&json!({ "suites": reports, "ok": ok }));
    if ok {
        Ok(())
    } else {
        Err(CliError::Semantic(ramsey_core::Error::Internal(
            "selftest failures".to_string(),
        )))
    }
}

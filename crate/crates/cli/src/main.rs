//! `misere`: command-line access to the census, table checks, tame ladders,
//! realization and the game oracles.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use misere::catalog::{classify_p2_checked, make_r, make_tn, tame_power, GrundyLabeledBM};
use misere::classifier::{
    enumerate_quotients, enumerate_quotients_with, is_quotient_with, Census, CensusJson, EnumerateOptions,
    QuotientVerdict, SearchLimits,
};
use misere::games::{
    almost_tame_check, check_phi_range, faithfulness_check_code, grundy_sequence, parse_position,
    AlmostTameVerdict, GameStore, GamesJson, OctalCode, Oracle, Outcome, PhiJson, Position,
};
use misere::monoid::{isomorphic, reduce, BipartiteMonoid, MonoidJson};
use misere::transition::{realize_games, validate, TransitionJson, TransitionPair};

use io::{Failure, Output};

/// Largest order the census runs without `--deep`.
const DESK_ORDER: usize = 14;

#[derive(Parser, Debug)]
#[command(name = "misere", version, about = "Misère quotients: census, verification and game oracles")]
struct Cli {
    /// Output style on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads [default: MISERE_JOBS, else all cores].
    #[arg(long, global = true, env = "MISERE_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Census of quotients by order.
    Enumerate(EnumerateArgs),
    /// Check a transition table for validity.
    VerifyTable(InputArgs),
    /// Decide whether a reduced bipartite monoid is a quotient.
    IsQuotient(IsQuotientArgs),
    /// Reduce a bipartite monoid.
    Reduce(InputOutArgs),
    /// Climb the tame ladder from t2, r8 or a file.
    Tame(TameArgs),
    /// Classify a |P| = 2 quotient as T_n or R_n.
    Classify(InputArgs),
    /// Build games realizing a valid transition table.
    Realize(RealizeArgs),
    /// Outcome of a position.
    Outcome(OutcomeArgs),
    /// Grundy sequence of an octal or hexadecimal code.
    Grundy(GrundyArgs),
    /// Check the almost-tame hypotheses for a code and pretending function.
    AlmostTame(AlmostTameArgs),
    /// Test two bipartite monoids for isomorphism.
    Iso(IsoArgs),
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    max_order: u64,
    /// Allow orders above 14; the census file is rewritten after each order.
    #[arg(long)]
    deep: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worklist cap per order; hitting it makes the census partial.
    #[arg(long, default_value_t = 5_000_000)]
    max_worklist: usize,
    /// Search nodes per quotient test before giving up.
    #[arg(long, default_value_t = 2_000_000)]
    max_nodes: usize,
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct InputOutArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IsQuotientArgs {
    #[arg(long)]
    input: PathBuf,
    /// Needed when the known quotients below the input's order exceed 14.
    #[arg(long)]
    deep: bool,
    #[arg(long, default_value_t = 2_000_000)]
    max_nodes: usize,
}

#[derive(Args, Debug)]
struct TameArgs {
    /// `t2`, `r8`, or a monoid file.
    #[arg(long)]
    base: String,
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RealizeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OutcomeArgs {
    #[arg(long)]
    games: PathBuf,
    /// Sum such as `2*g3+g7`; `0` is the empty sum.
    #[arg(long)]
    position: String,
    #[arg(long, conflicts_with = "normal")]
    misere: bool,
    #[arg(long)]
    normal: bool,
}

#[derive(Args, Debug)]
struct GrundyArgs {
    #[arg(long)]
    code: String,
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=100_000))]
    to: u32,
}

#[derive(Args, Debug)]
struct AlmostTameArgs {
    #[arg(long)]
    code: String,
    #[arg(long)]
    n0: usize,
    #[arg(long)]
    quotient: PathBuf,
    #[arg(long)]
    phi: PathBuf,
}

#[derive(Args, Debug)]
struct IsoArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { io::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(io::EXIT_USAGE);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let out = Output { format: cli.format };
    match run(&cli.command, &out) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: &Command, out: &Output) -> Result<u8, Failure> {
    match cmd {
        Command::Enumerate(a) => enumerate(a, out),
        Command::VerifyTable(a) => verify_table(a, out),
        Command::IsQuotient(a) => is_quotient(a, out),
        Command::Reduce(a) => reduce_cmd(a, out),
        Command::Tame(a) => tame(a, out),
        Command::Classify(a) => classify(a, out),
        Command::Realize(a) => realize(a, out),
        Command::Outcome(a) => outcome(a, out),
        Command::Grundy(a) => grundy(a, out),
        Command::AlmostTame(a) => almost_tame(a, out),
        Command::Iso(a) => iso(a, out),
    }
}

fn census_summary(c: &Census) -> String {
    let mut s = String::new();
    for (order, n) in &c.counts {
        let noun = if *n == 1 { "class" } else { "classes" };
        s.push_str(&format!("order {order}: {n} {noun}\n"));
    }
    if c.complete {
        s.push_str("census complete\n");
    } else {
        s.push_str("census partial: a search limit was hit, counts are lower bounds\n");
    }
    s
}

fn enumerate(a: &EnumerateArgs, out: &Output) -> Result<u8, Failure> {
    let n = a.max_order as usize;
    if n > DESK_ORDER && !a.deep {
        return Err(Failure::usage(format!("orders above {DESK_ORDER} need --deep")));
    }
    if let Some(p) = &a.out {
        io::check_out_path(p)?;
    }
    let opts =
        EnumerateOptions { limits: SearchLimits { max_nodes: a.max_nodes }, max_worklist: a.max_worklist };
    let mut checkpoint_err = None;
    let census = enumerate_quotients_with(n, opts, &mut |c| {
        if let (true, Some(p)) = (a.deep, &a.out) {
            let mut partial = CensusJson::from_census(c);
            partial.complete = false;
            if let Err(e) = io::write_json(p, &serde_json::to_value(&partial).expect("census serializes")) {
                checkpoint_err.get_or_insert(e);
            }
        }
    });
    if let Some(e) = checkpoint_err {
        return Err(e);
    }
    let doc = serde_json::to_value(CensusJson::from_census(&census)).expect("census serializes");
    if let Some(p) = &a.out {
        io::write_json(p, &doc)?;
    }
    out.emit(&census_summary(&census), &doc);
    Ok(if census.complete { 0 } else { io::EXIT_PARTIAL })
}

fn verify_table(a: &InputArgs, out: &Output) -> Result<u8, Failure> {
    let text = io::read(&a.input)?;
    let t = TransitionJson::parse(&text).map_err(|e| Failure::data(&a.input, e))?;
    let r = validate(&t);
    let flag = |ok: bool| if ok { "ok" } else { "FAILED" };
    let mut s = format!(
        "parity: {}\ncompleteness: {}\nclosure: {}\nwell-foundedness: {}\n",
        flag(r.parity_ok),
        flag(r.completeness_ok),
        flag(r.closure_ok),
        flag(r.wellfounded_ok)
    );
    for c in &r.counterexamples {
        s.push_str(&format!("  {c}\n"));
    }
    s.push_str(if r.valid() { "valid\n" } else { "not valid\n" });
    let doc = json!({
        "valid": r.valid(),
        "parity": r.parity_ok,
        "completeness": r.completeness_ok,
        "closure": r.closure_ok,
        "wellfounded": r.wellfounded_ok,
        "rank": r.rank,
        "counterexamples": r.counterexamples.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "pairs": t.pairs.len(),
    });
    out.emit(&s, &doc);
    Ok(if r.valid() { 0 } else { io::EXIT_NO })
}

fn is_quotient(a: &IsQuotientArgs, out: &Output) -> Result<u8, Failure> {
    let b = io::load_monoid(&a.input)?;
    if !b.is_reduced() {
        return Err(Failure::data(&a.input, "the bipartite monoid is not reduced"));
    }
    if b.in_p(b.identity()) {
        return Err(Failure::data(&a.input, "the identity lies in P"));
    }
    let below = b.size().saturating_sub(1);
    if below > DESK_ORDER && !a.deep {
        return Err(Failure::usage(format!("inputs above order {} need --deep", DESK_ORDER + 1)));
    }
    let census = enumerate_quotients(below.max(1));
    let verdict = is_quotient_with(&b, &census.known(), SearchLimits { max_nodes: a.max_nodes });
    let partial = !census.complete;
    let (s, doc, code) = match &verdict {
        QuotientVerdict::Quotient { sequence } => (
            format!("quotient: construction sequence {sequence:?}\n"),
            json!({"verdict": "quotient", "sequence": sequence}),
            0,
        ),
        QuotientVerdict::NotQuotient if !partial => {
            ("not a quotient\n".to_string(), json!({"verdict": "not-quotient"}), io::EXIT_NO)
        }
        _ => {
            ("unknown: a search limit was hit\n".to_string(), json!({"verdict": "unknown"}), io::EXIT_PARTIAL)
        }
    };
    out.emit(&s, &doc);
    Ok(code)
}

fn reduce_cmd(a: &InputOutArgs, out: &Output) -> Result<u8, Failure> {
    let b = io::load_monoid(&a.input)?;
    let r = reduce(&b);
    let monoid = MonoidJson::from_bm(&r.reduced).to_value();
    if let Some(p) = &a.out {
        io::write_json(p, &monoid)?;
    }
    let doc = json!({"monoid": monoid, "projection": r.projection});
    out.emit(&format!("order {} reduces to order {}\n", b.size(), r.reduced.size()), &doc);
    Ok(0)
}

fn tame(a: &TameArgs, out: &Output) -> Result<u8, Failure> {
    let base = match a.base.as_str() {
        "t2" => make_tn(2).bm,
        "r8" => make_r(2).bm,
        path => io::load_monoid(&PathBuf::from(path))?,
    };
    if a.steps > 8 || base.size() << a.steps > 512 {
        return Err(Failure::usage("tame ladder larger than 512 elements"));
    }
    let t = tame_power(&base, a.steps);
    let doc = MonoidJson::from_bm(&t).to_value();
    if let Some(p) = &a.out {
        io::write_json(p, &doc)?;
    }
    out.emit(&format!("order {} after {} steps gives order {}\n", base.size(), a.steps, t.size()), &doc);
    Ok(0)
}

fn classify(a: &InputArgs, out: &Output) -> Result<u8, Failure> {
    let b = io::load_monoid(&a.input)?;
    let c = classify_p2_checked(&b);
    let s = if c.anomaly {
        "anomaly: |P| = 2 but neither T_n nor R_n\n".to_string()
    } else {
        format!("{}\n", c.label)
    };
    let doc = json!({
        "label": c.label.to_string(),
        "order": c.label.order(),
        "anomaly": c.anomaly,
    });
    out.emit(&s, &doc);
    Ok(0)
}

fn realize(a: &RealizeArgs, out: &Output) -> Result<u8, Failure> {
    let text = io::read(&a.input)?;
    let t = TransitionJson::parse(&text).map_err(|e| Failure::data(&a.input, e))?;
    let r = realize_games(&t).map_err(|e| Failure::data(&a.input, e))?;
    let mut doc = serde_json::to_value(GamesJson::export(&r.store, &r.roots())).expect("games serialize");
    let elements: Vec<u32> = r.element_games.iter().map(|g| g.0).collect();
    let pairs: Vec<Value> = r
        .pair_games
        .iter()
        .map(|(p, g): (&TransitionPair, _)| json!({"x": p.value, "E": p.options.iter().collect::<Vec<_>>(), "game": g.0}))
        .collect();
    doc["elements"] = json!(elements);
    doc["pairs"] = json!(pairs);
    if let Some(p) = &a.out {
        io::write_json(p, &doc)?;
    }
    let s = format!(
        "realized {} elements and {} pairs with {} games\n",
        elements.len(),
        pairs.len(),
        doc["games"].as_array().map_or(0, Vec::len)
    );
    out.emit(&s, &doc);
    Ok(0)
}

fn outcome(a: &OutcomeArgs, out: &Output) -> Result<u8, Failure> {
    let text = io::read(&a.games)?;
    let gj = GamesJson::parse(&text).map_err(|e| Failure::data(&a.games, e))?;
    let mut store = GameStore::new();
    let ids = gj.load(&mut store).map_err(|e| Failure::data(&a.games, e))?;
    let terms = parse_position(&a.position).map_err(|e| Failure::usage(format!("--position: {e}")))?;
    let mut parts = Vec::new();
    for (k, id) in terms {
        let g = *ids.get(&id).ok_or_else(|| Failure::data(&a.games, format!("no game with id {id}")))?;
        parts.extend(std::iter::repeat_n(g, k as usize));
    }
    let p = Position::new(parts);
    let mut oracle = Oracle::new(&store);
    let (conv, o) =
        if a.normal { ("normal", oracle.outcome_normal(&p)) } else { ("misere", oracle.outcome_misere(&p)) };
    let letter = match o {
        Outcome::P => "P",
        Outcome::N => "N",
    };
    out.emit(&format!("{letter}\n"), &json!({"outcome": letter, "convention": conv}));
    Ok(0)
}

fn parse_code(text: &str) -> Result<OctalCode, Failure> {
    text.parse().map_err(|e| Failure::usage(format!("--code {text:?}: {e}")))
}

fn grundy(a: &GrundyArgs, out: &Output) -> Result<u8, Failure> {
    let code = parse_code(&a.code)?;
    let values = grundy_sequence(&code, a.to);
    let line: Vec<String> = values.iter().map(u32::to_string).collect();
    out.emit(&format!("{}\n", line.join(" ")), &json!({"code": code.to_string(), "values": values}));
    Ok(0)
}

fn almost_tame(a: &AlmostTameArgs, out: &Output) -> Result<u8, Failure> {
    let code = parse_code(&a.code)?;
    let b = io::load_monoid(&a.quotient)?;
    let phi = PhiJson::parse(&io::read(&a.phi)?).map_err(|e| Failure::data(&a.phi, e))?;
    check_phi_range(&phi, &b).map_err(|e| Failure::data(&a.phi, e))?;
    let labels = faithfulness_check_code(&code, &phi, &b).labels;
    let v = almost_tame_check(&code, a.n0, &GrundyLabeledBM { bm: b, labels }, &phi);
    let mut s = format!("{}\n", v.statement());
    let doc = match &v {
        AlmostTameVerdict::Ladder { base_order, window } => {
            for (n, x) in window {
                s.push_str(&format!("  heap {n} -> element {x}\n"));
            }
            json!({"verdict": "ladder", "statement": v.statement(), "base_order": base_order, "window": window})
        }
        AlmostTameVerdict::Inapplicable(f) => json!({
            "verdict": "inapplicable",
            "failures": f.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        }),
    };
    out.emit(&s, &doc);
    Ok(if matches!(v, AlmostTameVerdict::Ladder { .. }) { 0 } else { io::EXIT_NO })
}

fn iso(a: &IsoArgs, out: &Output) -> Result<u8, Failure> {
    let x: BipartiteMonoid = io::load_monoid(&a.a)?;
    let y = io::load_monoid(&a.b)?;
    match isomorphic(&x, &y) {
        Some(map) => {
            out.emit("isomorphic\n", &json!({"isomorphic": true, "map": map}));
            Ok(0)
        }
        None => {
            out.emit("not isomorphic\n", &json!({"isomorphic": false}));
            Ok(io::EXIT_NO)
        }
    }
}

//! `qball`: which positive surgeries on positive torus knots bound rational
//! homology balls. The library does the work; this binary parses arguments,
//! serializes results and maps verdicts onto exit codes:
//!
//!   0  success / positive verdict (bounds, embedding found, test passed)
//!   1  valid input, negative verdict
//!   2  usage or domain error (bad arguments, non-coprime pair, ...)
//!   3  inconclusive (lattice search hit its node budget)
//!
//! Output is JSON by default, one document per invocation, with sorted keys
//! so identical invocations are byte-identical. Big integers and exact
//! rationals are emitted as decimal strings ("841", "-3/2"); floating point
//! never appears in machine output. `--human` switches to prose, where
//! decimal approximations are marked with `≈`.

use std::io::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use qball::cfrac::{self, Rational, WeightString};
use qball::classify::{self, FamilyTag, LatticeOutcome, Report, ScanOptions};
use qball::floer::{self, DInvVerdict, SlopeBounds, VSequence};
use qball::lattice::{self, Embedding, EmbeddingResult, SearchStatus};
use qball::lisca::{self, LensSpace, LiscaTag};
use qball::plumbing::{self, GramMatrix, PlumbingTree, SurgeryTriple, TreeKind};
use qball::seq::{self, SeqKind};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "qball", version, about = "rational-ball verdicts for surgeries on torus knots")]
struct Cli {
    /// prose output instead of JSON (approximations marked with ≈)
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// evaluate one of the integer sequences behind the families
    Seq {
        /// fib, r, s or t
        kind: String,
        /// index (fib accepts -1 and up, the rest 0 and up)
        index: i64,
    },
    /// negative continued fractions: expand, eval, dual, stats
    Cfrac {
        #[command(subcommand)]
        op: CfracOp,
    },
    /// plumbing tree of n-surgery on T(p,q): vertices, Gram matrix, Seifert data
    Plumbing {
        p: String,
        q: String,
        n: String,
        /// print the tree in DOT format instead of JSON
        #[arg(long)]
        dot: bool,
    },
    /// search for an embedding of the plumbing lattice into Z^rank
    Embed(EmbedCmd),
    /// knot Floer data: V-sequences, cables, d-invariant tests, slope bounds
    Floer {
        #[command(subcommand)]
        op: FloerOp,
    },
    /// lens space recognition and the lens/reducible surgery tests
    Lens(LensCmd),
    /// does n-surgery on T(p,q) bound a rational homology ball?
    Classify { p: String, q: String, n: String },
    /// classify and cross-check every admissible triple with 2 <= p < q <= pmax
    Scan {
        #[arg(long)]
        pmax: u64,
        /// only surgery coefficients that are perfect squares
        #[arg(long)]
        squares: bool,
        /// CSV rows (the default)
        #[arg(long)]
        csv: bool,
        /// one JSON object per row instead of CSV
        #[arg(long, conflicts_with = "csv")]
        jsonl: bool,
        #[arg(long)]
        lattice_budget: Option<u64>,
        /// skip the lattice search above this rank
        #[arg(long)]
        rank_cap: Option<usize>,
    },
    /// run classifier, d-invariant test and lattice search side by side
    Xcheck {
        p: String,
        q: String,
        n: String,
        #[arg(long)]
        lattice_budget: Option<u64>,
        #[arg(long)]
        rank_cap: Option<usize>,
    },
    /// enumerate the first members of the bounding families
    Families {
        /// a single family 1..=18 (default: all)
        #[arg(long)]
        id: Option<u8>,
        /// members per family (default 5)
        #[arg(long)]
        count: Option<usize>,
    },
}

#[derive(Subcommand)]
enum CfracOp {
    /// expand a fraction x/y into its weight string
    Expand { fraction: String },
    /// evaluate a weight string like [3,2,2] back to a fraction
    Eval { string: String },
    /// complementary dual of a weight string
    Dual { string: String },
    /// length, value and the I and J invariants of a weight string
    Stats { string: String },
}

#[derive(Args)]
struct EmbedCmd {
    /// surgery triple p q n
    #[arg(value_name = "P Q N", num_args = 0..=3)]
    triple: Vec<String>,
    /// explicit Gram matrix as a JSON array of rows, e.g. '[[2,1],[1,3]]'
    #[arg(long, conflicts_with = "triple")]
    gram: Option<String>,
    /// node budget for the search (default from QBALL_LATTICE_BUDGET or 10^8)
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum FloerOp {
    /// torus knot V-sequence
    Vseq {
        p: u64,
        q: u64,
        /// print only the first K values
        #[arg(long)]
        upto: Option<u64>,
    },
    /// V-sequence of the (p,q)-cable of a base torus knot
    Cable {
        p: u64,
        q: u64,
        /// base torus knot as "p0,q0"
        #[arg(long)]
        base: String,
        #[arg(long)]
        upto: Option<u64>,
    },
    /// do the d-invariants of n-surgery on T(p,q) permit a rational ball?
    Dtest { p: u64, q: u64, n: u64 },
    /// window of cabling slopes compatible with a bounding cable
    Bounds {
        #[arg(long)]
        nu: u64,
        #[arg(long)]
        v0: u64,
        /// use the q = 1 regime of the lower bound
        #[arg(long)]
        q_one: bool,
    },
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct LensCmd {
    #[command(subcommand)]
    op: Option<LensOp>,
    /// order of the lens space L(p, q)
    p: Option<String>,
    q: Option<String>,
}

#[derive(Subcommand)]
enum LensOp {
    /// does pq-surgery on T(p,q) (a connected sum of two lens spaces) bound?
    Reducible { p: String, q: String },
    /// weight string of (pq+1)- or (pq-1)-surgery on T(p,q), with its tag
    String {
        p: String,
        q: String,
        /// +1 or -1
        sign: String,
    },
}

/// A semantic usage error: bad numbers, non-coprime pairs, malformed lists.
/// Rendered like clap's own errors and mapped to exit code 2.
struct Usage(String);

impl From<qball::Error> for Usage {
    fn from(e: qball::Error) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult = Result<u8, Usage>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("qball: {msg}");
            eprintln!("run `qball --help` for usage");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Seq { kind, index } => cmd_seq(cli, kind, *index),
        Command::Cfrac { op } => cmd_cfrac(cli, op),
        Command::Plumbing { p, q, n, dot } => cmd_plumbing(cli, p, q, n, *dot),
        Command::Embed(args) => cmd_embed(cli, args),
        Command::Floer { op } => cmd_floer(cli, op),
        Command::Lens(args) => cmd_lens(cli, args),
        Command::Classify { p, q, n } => cmd_classify(cli, p, q, n),
        Command::Scan {
            pmax,
            squares,
            csv: _,
            jsonl,
            lattice_budget,
            rank_cap,
        } => cmd_scan(*pmax, *squares, *jsonl, *lattice_budget, *rank_cap),
        Command::Xcheck {
            p,
            q,
            n,
            lattice_budget,
            rank_cap,
        } => cmd_xcheck(cli, p, q, n, *lattice_budget, *rank_cap),
        Command::Families { id, count } => cmd_families(cli, *id, *count),
    }
}

// ---- argument parsing helpers ----

fn parse_bigint(s: &str, what: &str) -> Result<BigInt, Usage> {
    BigInt::from_str(s.trim()).map_err(|_| Usage(format!("{what} must be an integer, got {s:?}")))
}

fn parse_triple(p: &str, q: &str, n: &str) -> Result<SurgeryTriple, Usage> {
    let t = SurgeryTriple::new(
        parse_bigint(p, "p")?,
        parse_bigint(q, "q")?,
        parse_bigint(n, "n")?,
    )?;
    Ok(t)
}

/// "x/y" or a bare integer.
fn parse_fraction(s: &str) -> Result<Rational, Usage> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (parse_bigint(a, "numerator")?, parse_bigint(b, "denominator")?),
        None => (parse_bigint(s, "fraction")?, BigInt::from(1)),
    };
    if den == BigInt::from(0) {
        return Err(Usage("denominator must be nonzero".into()));
    }
    Ok(Rational::new(num, den))
}

/// "[3,2,2]", "3,2,2" or "3 2 2".
fn parse_weights(s: &str) -> Result<WeightString, Usage> {
    let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
    let entries: Vec<i64> = trimmed
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Usage(format!("weight {t:?} is not an integer")))
        })
        .collect::<Result<_, _>>()?;
    Ok(WeightString::new(entries)?)
}

/// --budget flag, else QBALL_LATTICE_BUDGET, else the library default.
fn resolve_budget(flag: Option<u64>) -> Result<u64, Usage> {
    let budget = match flag {
        Some(b) => b,
        None => match std::env::var("QBALL_LATTICE_BUDGET") {
            Ok(s) => s.trim().parse::<u64>().map_err(|_| {
                Usage(format!("QBALL_LATTICE_BUDGET must be an integer, got {s:?}"))
            })?,
            Err(_) => lattice::DEFAULT_BUDGET,
        },
    };
    if budget < lattice::MIN_BUDGET {
        return Err(Usage(format!(
            "lattice budget must be at least {}, got {budget}",
            lattice::MIN_BUDGET
        )));
    }
    Ok(budget)
}

// ---- serialization helpers ----

fn emit(value: &Value) {
    println!("{value}");
}

fn rat_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rat_approx(r: &Rational) -> String {
    match r.to_f64() {
        Some(x) => format!("≈ {x:.6}"),
        None => "≈ ?".into(),
    }
}

fn weights_json(ws: &WeightString) -> Value {
    Value::from(ws.entries().to_vec())
}

fn family_json(tag: &FamilyTag) -> Value {
    json!({
        "id": tag.id(),
        "branch": tag.branch().map(|b| b.symbol().to_string()),
        "index": tag.index().to_string(),
        "label": tag.to_string(),
    })
}

fn lisca_tag_json(tag: &LiscaTag) -> Value {
    let lens = tag.lens();
    json!({
        "family": tag.family().name(),
        "label": tag.to_string(),
        "i_value": tag.i_value(),
        "string": weights_json(&tag.realize()),
        "lens": { "p": lens.p().to_string(), "q": lens.q().to_string() },
    })
}

fn dtest_json(verdict: &DInvVerdict) -> Value {
    match verdict {
        DInvVerdict::NotSquare { n } => json!({
            "pass": false,
            "square": false,
            "n": n.to_string(),
        }),
        DInvVerdict::Square { m, labels, failures } => json!({
            "pass": failures.is_empty(),
            "square": true,
            "m": m,
            "labels": labels,
            "failures": failures
                .iter()
                .map(|f| json!({ "k": f.k, "expected": f.expected, "actual": f.actual }))
                .collect::<Vec<_>>(),
        }),
    }
}

fn embedding_json(e: &Embedding) -> Value {
    Value::from(
        e.columns()
            .iter()
            .map(|c| Value::from(c.clone()))
            .collect::<Vec<_>>(),
    )
}

fn profile_json(e: &Embedding) -> Value {
    let profile = lattice::embedding_profile(e);
    json!({
        "per_basis": profile
            .per_basis
            .iter()
            .map(|b| json!({ "hits": b.hit_count, "contribution": b.contribution }))
            .collect::<Vec<_>>(),
        "total": profile.total(),
    })
}

// ---- subcommands ----

fn cmd_seq(cli: &Cli, kind: &str, index: i64) -> CmdResult {
    let kind_lc = kind.to_ascii_lowercase();
    let value = match kind_lc.as_str() {
        "fib" | "f" => seq::fibonacci(index)?,
        "r" | "s" | "t" => {
            let k = match kind_lc.as_str() {
                "r" => SeqKind::R,
                "s" => SeqKind::S,
                _ => SeqKind::T,
            };
            let n = u64::try_from(index)
                .map_err(|_| Usage(format!("{kind} index must be nonnegative, got {index}")))?;
            seq::pell(k, n)?
        }
        _ => return Err(Usage(format!("unknown sequence {kind:?}; use fib, r, s or t"))),
    };
    if cli.human {
        println!("{kind_lc}({index}) = {value}");
    } else {
        emit(&json!({
            "schema": "qball.seq/1",
            "kind": kind_lc,
            "index": index,
            "value": value.to_string(),
        }));
    }
    Ok(EXIT_OK)
}

fn cmd_cfrac(cli: &Cli, op: &CfracOp) -> CmdResult {
    match op {
        CfracOp::Expand { fraction } => {
            let value = parse_fraction(fraction)?;
            let ws = cfrac::expand(&value)?;
            if cli.human {
                println!("{} = {ws}", rat_str(&value));
            } else {
                emit(&json!({
                    "schema": "qball.cfrac/1",
                    "op": "expand",
                    "value": rat_str(&value),
                    "string": weights_json(&ws),
                }));
            }
        }
        CfracOp::Eval { string } => {
            let ws = parse_weights(string)?;
            let value = cfrac::evaluate(&ws);
            if cli.human {
                println!("{ws} = {}", rat_str(&value));
            } else {
                emit(&json!({
                    "schema": "qball.cfrac/1",
                    "op": "eval",
                    "string": weights_json(&ws),
                    "value": rat_str(&value),
                }));
            }
        }
        CfracOp::Dual { string } => {
            let ws = parse_weights(string)?;
            let dual = cfrac::dual(&ws);
            let value = cfrac::evaluate(&dual);
            if cli.human {
                println!("dual of {ws} is {dual} = {}", rat_str(&value));
            } else {
                emit(&json!({
                    "schema": "qball.cfrac/1",
                    "op": "dual",
                    "string": weights_json(&ws),
                    "dual": weights_json(&dual),
                    "value": rat_str(&value),
                }));
            }
        }
        CfracOp::Stats { string } => {
            let ws = parse_weights(string)?;
            let value = cfrac::evaluate(&ws);
            let stats = cfrac::stats(&ws);
            if cli.human {
                println!(
                    "{ws}: length {}, value {}, I = {}, J = {}",
                    ws.len(),
                    rat_str(&value),
                    stats.i_value,
                    stats.j_value
                );
            } else {
                emit(&json!({
                    "schema": "qball.cfrac/1",
                    "op": "stats",
                    "string": weights_json(&ws),
                    "length": ws.len(),
                    "value": rat_str(&value),
                    "i_value": stats.i_value,
                    "j_value": stats.j_value,
                }));
            }
        }
    }
    Ok(EXIT_OK)
}

fn tree_kind_str(kind: TreeKind) -> &'static str {
    match kind {
        TreeKind::Gamma1 => "gamma1",
        TreeKind::Gamma2 => "gamma2",
    }
}

fn cmd_plumbing(cli: &Cli, p: &str, q: &str, n: &str, dot: bool) -> CmdResult {
    let t = parse_triple(p, q, n)?;
    let tree = plumbing::surgery_plumbing(&t)?;
    if dot {
        print!("{}", tree.to_dot());
        return Ok(EXIT_OK);
    }
    let g = plumbing::gram(&tree);
    let det = g.determinant();
    let seifert = plumbing::seifert_invariants(&t)?;
    if cli.human {
        print_tree_human(&t, &tree, &g, &det, &seifert);
        return Ok(EXIT_OK);
    }
    let meta = tree.meta();
    emit(&json!({
        "schema": "qball.plumbing/1",
        "p": t.p().to_string(),
        "q": t.q().to_string(),
        "n": t.n().to_string(),
        "kind": tree_kind_str(tree.kind()),
        "rank": tree.rank(),
        "weights": tree.weights(),
        "edges": tree.edges().iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "legs": tree.legs().iter().map(|l| Value::from(l.clone())).collect::<Vec<_>>(),
        "two_chain": tree.two_leg_ids(),
        "meta": {
            "k": meta.k,
            "r": meta.r,
            "two_chain_len": meta.two_leg_len,
            "a_leg": weights_json(&meta.a_leg),
            "b_leg": weights_json(&meta.b_leg),
        },
        "boundary_reversed": tree.boundary_reversed(),
        "i_value": tree.i_value(),
        "gram": (0..g.order()).map(|i| Value::from(g.row(i).to_vec())).collect::<Vec<_>>(),
        "determinant": det.to_string(),
        "seifert": {
            "e0": seifert.e0,
            "fractions": seifert.fractions.iter().map(rat_str).collect::<Vec<_>>(),
            "euler_number": rat_str(&seifert.euler_number()),
            "det_is_zero": seifert.det_is_zero(),
        },
    }));
    Ok(EXIT_OK)
}

fn print_tree_human(
    t: &SurgeryTriple,
    tree: &PlumbingTree,
    g: &GramMatrix,
    det: &BigInt,
    seifert: &plumbing::SeifertData,
) {
    println!("{t}: {} tree, rank {}", tree_kind_str(tree.kind()), tree.rank());
    println!("weights: {:?}", tree.weights());
    for (name, leg) in ["a-leg", "b-leg", "2-chain"].iter().zip(tree.legs()) {
        let ws: Vec<i64> = leg.iter().map(|&v| tree.weights()[v]).collect();
        println!("{name}: vertices {leg:?} weights {ws:?}");
    }
    println!("|det G| = {} (n = {})", det.magnitude(), t.n());
    let euler = seifert.euler_number();
    println!(
        "I = {}, e0 = {}, euler number {} {}",
        tree.i_value(),
        seifert.e0,
        rat_str(&euler),
        rat_approx(&euler)
    );
    let _ = g;
}

fn search_status_str(status: &SearchStatus) -> &'static str {
    match status {
        SearchStatus::Found(_) => "found",
        SearchStatus::None => "none",
        SearchStatus::Inconclusive => "inconclusive",
    }
}

fn embed_exit(status: &SearchStatus) -> u8 {
    match status {
        SearchStatus::Found(_) => EXIT_OK,
        SearchStatus::None => EXIT_NEGATIVE,
        SearchStatus::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn cmd_embed(cli: &Cli, args: &EmbedCmd) -> CmdResult {
    let budget = resolve_budget(args.budget)?;
    let (doc, result, verdict_word) = match (&args.gram, args.triple.as_slice()) {
        (Some(gram_json), []) => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(gram_json)
                .map_err(|e| Usage(format!("--gram expects a JSON array of rows: {e}")))?;
            let order = rows.len();
            if rows.iter().any(|r| r.len() != order) {
                return Err(Usage("--gram matrix must be square".into()));
            }
            let g = GramMatrix::from_parts(order, rows.into_iter().flatten().collect())?;
            let result = lattice::find_embedding(&g, budget)?;
            let doc = json!({
                "schema": "qball.embed/1",
                "mode": "gram",
                "order": order,
                "budget": budget,
            });
            (doc, result, None)
        }
        (None, [p, q, n]) => {
            let t = parse_triple(p, q, n)?;
            let tree = plumbing::surgery_plumbing(&t)?;
            let g = plumbing::gram(&tree);
            let result = lattice::find_embedding(&g, budget)?;
            let verdict = match result.status {
                SearchStatus::Found(_) => "Unobstructed",
                SearchStatus::None => "Obstructed",
                SearchStatus::Inconclusive => "Inconclusive",
            };
            let doc = json!({
                "schema": "qball.embed/1",
                "mode": "triple",
                "p": t.p().to_string(),
                "q": t.q().to_string(),
                "n": t.n().to_string(),
                "kind": tree_kind_str(tree.kind()),
                "rank": tree.rank(),
                "budget": budget,
            });
            (doc, result, Some(verdict))
        }
        _ => {
            return Err(Usage(
                "embed takes either a triple `p q n` or --gram <json>, not both or neither".into(),
            ))
        }
    };

    let mut doc = doc;
    let obj = doc.as_object_mut().expect("embed doc is an object");
    obj.insert("status".into(), json!(search_status_str(&result.status)));
    obj.insert("nodes".into(), json!(result.nodes_explored));
    obj.insert("budget_hit".into(), json!(result.budget_hit));
    if let Some(word) = verdict_word {
        obj.insert("verdict".into(), json!(word));
    }
    if let SearchStatus::Found(ref e) = result.status {
        obj.insert("witness".into(), embedding_json(e));
        obj.insert("profile".into(), profile_json(e));
    }

    if cli.human {
        print_embed_human(&result, verdict_word);
    } else {
        emit(&doc);
    }
    Ok(embed_exit(&result.status))
}

fn print_embed_human(result: &EmbeddingResult, verdict_word: Option<&'static str>) {
    let headline = verdict_word.unwrap_or(match result.status {
        SearchStatus::Found(_) => "embeds",
        SearchStatus::None => "does not embed",
        SearchStatus::Inconclusive => "inconclusive",
    });
    println!("{headline} ({} nodes explored)", result.nodes_explored);
    if result.budget_hit {
        println!("node budget exhausted; raise --budget for a definite answer");
    }
    if let SearchStatus::Found(ref e) = result.status {
        for (i, col) in e.columns().iter().enumerate() {
            println!("v{i} -> {col:?}");
        }
    }
}

fn cmd_floer(cli: &Cli, op: &FloerOp) -> CmdResult {
    match op {
        FloerOp::Vseq { p, q, upto } => {
            let v = floer::torus_v(*p, *q)?;
            print_vseq(cli, json!({"p": p, "q": q}), "qball.floer.vseq/1", &v, *upto);
            Ok(EXIT_OK)
        }
        FloerOp::Cable { p, q, base, upto } => {
            let (p0, q0) = parse_base_pair(base)?;
            let base_v = floer::torus_v(p0, q0)?;
            let v = floer::cable_v(&base_v, *p, *q, None)?;
            print_vseq(
                cli,
                json!({"p": p, "q": q, "base_p": p0, "base_q": q0}),
                "qball.floer.cable/1",
                &v,
                *upto,
            );
            Ok(EXIT_OK)
        }
        FloerOp::Dtest { p, q, n } => {
            let v = floer::torus_v(*p, *q)?;
            let verdict = floer::square_surgery_test(&v, *n);
            let pass = verdict.pass();
            if cli.human {
                print_dtest_human(*p, *q, *n, &verdict);
            } else {
                let mut doc = json!({
                    "schema": "qball.floer.dtest/1",
                    "p": p,
                    "q": q,
                    "n": n.to_string(),
                });
                let obj = doc.as_object_mut().expect("dtest doc is an object");
                for (k, v) in dtest_json(&verdict).as_object().expect("dtest fields") {
                    obj.insert(k.clone(), v.clone());
                }
                emit(&doc);
            }
            Ok(if pass { EXIT_OK } else { EXIT_NEGATIVE })
        }
        FloerOp::Bounds { nu, v0, q_one } => {
            let b = floer::slope_bounds(*nu, *v0, *q_one)?;
            if cli.human {
                print_bounds_human(&b);
            } else {
                emit(&json!({
                    "schema": "qball.floer.bounds/1",
                    "nu": nu,
                    "v0": v0,
                    "q_one": q_one,
                    "lower": rat_str(&b.lower),
                    "lower_is_strict": b.lower_is_strict,
                    "lower_is_exact": b.lower_is_exact,
                    "upper": rat_str(&b.upper),
                }));
            }
            Ok(EXIT_OK)
        }
    }
}

fn parse_base_pair(s: &str) -> Result<(u64, u64), Usage> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Usage(format!("--base expects \"p0,q0\", got {s:?}")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| Usage(format!("--base component {t:?} is not a nonnegative integer")))
    };
    Ok((parse(a)?, parse(b)?))
}

fn print_vseq(cli: &Cli, header: Value, schema: &str, v: &VSequence, upto: Option<u64>) {
    let shown: Vec<u64> = match upto {
        Some(k) => v.values().iter().copied().take(k as usize).collect(),
        None => v.values().to_vec(),
    };
    let truncated = shown.len() < v.values().len();
    if cli.human {
        println!("nu+ = {}", v.nu_plus());
        println!("V = {shown:?}{}", if truncated { " ..." } else { "" });
        return;
    }
    let mut doc = json!({
        "schema": schema,
        "nu_plus": v.nu_plus(),
        "values": shown,
        "truncated": truncated,
    });
    let obj = doc.as_object_mut().expect("vseq doc is an object");
    for (k, val) in header.as_object().expect("vseq header") {
        obj.insert(k.clone(), val.clone());
    }
    emit(&doc);
}

fn print_dtest_human(p: u64, q: u64, n: u64, verdict: &DInvVerdict) {
    match verdict {
        DInvVerdict::NotSquare { n } => {
            println!("({p}, {q}; {n}): fail, surgery coefficient is not a perfect square");
        }
        DInvVerdict::Square { m, labels, failures } if failures.is_empty() => {
            println!(
                "({p}, {q}; {n}) = ({p}, {q}; {m}^2): pass, all {} required d-invariants vanish",
                labels.len()
            );
        }
        DInvVerdict::Square { m, failures, .. } => {
            println!("({p}, {q}; {n}) = ({p}, {q}; {m}^2): fail");
            for f in failures {
                println!("  V_{} = {} but a ball needs {}", f.k, f.actual, f.expected);
            }
        }
    }
}

fn print_bounds_human(b: &SlopeBounds) {
    let lo_rel = if b.lower_is_strict { "<" } else { "<=" };
    println!(
        "{} {lo_rel} q/p < {} ({} {}, upper {})",
        rat_str(&b.lower),
        rat_str(&b.upper),
        if b.lower_is_exact { "lower exact" } else { "lower rounded down" },
        rat_approx(&b.lower),
        rat_approx(&b.upper),
    );
}

fn cmd_lens(cli: &Cli, args: &LensCmd) -> CmdResult {
    match &args.op {
        Some(LensOp::Reducible { p, q }) => cmd_lens_reducible(cli, p, q),
        Some(LensOp::String { p, q, sign }) => cmd_lens_string(cli, p, q, sign),
        None => {
            let (p, q) = match (&args.p, &args.q) {
                (Some(p), Some(q)) => (p, q),
                _ => return Err(Usage("lens expects `lens p q` or a subcommand".into())),
            };
            let lens = LensSpace::new(parse_bigint(p, "p")?, parse_bigint(q, "q")?)?;
            let tag = lisca::lens_bounds(&lens);
            let bounds = tag.is_some();
            if cli.human {
                match &tag {
                    Some(t) => println!("{lens} bounds a rational ball: {t}"),
                    None => println!("{lens} does not bound a rational ball"),
                }
            } else {
                emit(&json!({
                    "schema": "qball.lens/1",
                    "p": lens.p().to_string(),
                    "q": lens.q().to_string(),
                    "string": weights_json(&lens.string()),
                    "bounds": bounds,
                    "tag": tag.as_ref().map(lisca_tag_json),
                }));
            }
            Ok(if bounds { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn cmd_lens_reducible(cli: &Cli, p: &str, q: &str) -> CmdResult {
    let p = parse_bigint(p, "p")?;
    let q = parse_bigint(q, "q")?;
    let bounds = lisca::reducible_bounds(p.clone(), q.clone())?;
    // pq-surgery splits as L(p, p - (q mod p)) # L(q, q - p)
    let r = ((&q % &p) + &p) % &p;
    let l1 = LensSpace::new(p.clone(), &p - r)?;
    let l2 = LensSpace::new(q.clone(), &q - &p)?;
    let summand = |l: &LensSpace| {
        let tag = lisca::lens_bounds(l);
        json!({
            "p": l.p().to_string(),
            "q": l.q().to_string(),
            "bounds": tag.is_some(),
            "tag": tag.as_ref().map(lisca_tag_json),
        })
    };
    if cli.human {
        println!(
            "({p}, {q}; {}) = {l1} # {l2}: {}",
            &p * &q,
            if bounds { "bounds a rational ball" } else { "does not bound" }
        );
    } else {
        emit(&json!({
            "schema": "qball.lens.reducible/1",
            "p": p.to_string(),
            "q": q.to_string(),
            "n": (&p * &q).to_string(),
            "bounds": bounds,
            "summands": [summand(&l1), summand(&l2)],
        }));
    }
    Ok(if bounds { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_lens_string(cli: &Cli, p: &str, q: &str, sign: &str) -> CmdResult {
    let p = parse_bigint(p, "p")?;
    let q = parse_bigint(q, "q")?;
    let sign = match sign.trim() {
        "+1" | "+" | "1" => 1i64,
        "-1" | "-" => -1i64,
        other => return Err(Usage(format!("sign must be +1 or -1, got {other:?}"))),
    };
    let ws = lisca::lens_surgery_string(p.clone(), q.clone(), sign)?;
    let n = &p * &q + sign;
    let lens = LensSpace::new(n.clone(), &p * &p)?;
    let tag = lisca::lens_bounds(&lens);
    let bounds = tag.is_some();
    if cli.human {
        let verdict = if bounds { "bounds" } else { "does not bound" };
        println!("({p}, {q}; {n}) is {lens} with string {ws}; {verdict}");
        if let Some(t) = &tag {
            println!("tag {t} realizes {}", t.realize());
        }
    } else {
        emit(&json!({
            "schema": "qball.lens.string/1",
            "p": p.to_string(),
            "q": q.to_string(),
            "sign": sign,
            "n": n.to_string(),
            "lens": { "p": lens.p().to_string(), "q": lens.q().to_string() },
            "string": weights_json(&ws),
            "bounds": bounds,
            "tag": tag.as_ref().map(lisca_tag_json),
        }));
    }
    Ok(if bounds { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_classify(cli: &Cli, p: &str, q: &str, n: &str) -> CmdResult {
    let t = parse_triple(p, q, n)?;
    let verdict = classify::classify(&t);
    if cli.human {
        match (&verdict.witness, verdict.obstruction_note) {
            (Some(tag), _) => println!("{t} bounds a rational homology ball: family {tag}"),
            (None, Some(note)) => println!("{t} does not bound: {note}"),
            (None, None) => println!("{t} does not bound a rational homology ball"),
        }
    } else {
        emit(&json!({
            "schema": "qball.classify/1",
            "p": t.p().to_string(),
            "q": t.q().to_string(),
            "n": t.n().to_string(),
            "bounds": verdict.bounds,
            "family": verdict.witness.as_ref().map(family_json),
            "note": verdict.obstruction_note,
        }));
    }
    Ok(if verdict.bounds { EXIT_OK } else { EXIT_NEGATIVE })
}

fn dtest_cell(report: &Report) -> &'static str {
    match report.dtest_pass() {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "skipped",
    }
}

fn cmd_scan(
    pmax: u64,
    squares: bool,
    jsonl: bool,
    lattice_budget: Option<u64>,
    rank_cap: Option<usize>,
) -> CmdResult {
    let opts = ScanOptions {
        squares_only: squares,
        lattice_budget: resolve_budget(lattice_budget)?,
        rank_cap: rank_cap.unwrap_or(classify::DEFAULT_RANK_CAP),
    };
    let reports = classify::scan(pmax, opts)?;
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let (mut total, mut bounding, mut inconsistent) = (0u64, 0u64, 0u64);
    if !jsonl {
        writeln!(out, "p,q,n,bounds,family,dtest,lattice,consistent").expect("stdout");
    }
    for report in reports {
        total += 1;
        let bounds = report.family.is_some();
        bounding += bounds as u64;
        inconsistent += !report.consistent as u64;
        let family = report.family.as_ref();
        if jsonl {
            let row = json!({
                "schema": "qball.scan-row/1",
                "p": report.triple.p().to_string(),
                "q": report.triple.q().to_string(),
                "n": report.triple.n().to_string(),
                "bounds": bounds,
                "family": family.map(|t| t.to_string()),
                "dtest": dtest_cell(&report),
                "lattice": report.lattice.label(),
                "consistent": report.consistent,
            });
            writeln!(out, "{row}").expect("stdout");
        } else {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                report.triple.p(),
                report.triple.q(),
                report.triple.n(),
                bounds,
                family.map(|t| t.to_string()).unwrap_or_default(),
                dtest_cell(&report),
                report.lattice.label(),
                report.consistent,
            )
            .expect("stdout");
        }
    }
    out.flush().expect("stdout");
    eprintln!("scan: {total} triples, {bounding} bounding, {inconsistent} inconsistent");
    Ok(if inconsistent > 0 { EXIT_NEGATIVE } else { EXIT_OK })
}

fn cmd_xcheck(
    cli: &Cli,
    p: &str,
    q: &str,
    n: &str,
    lattice_budget: Option<u64>,
    rank_cap: Option<usize>,
) -> CmdResult {
    let t = parse_triple(p, q, n)?;
    let budget = resolve_budget(lattice_budget)?;
    let report = classify::cross_check(&t, budget, rank_cap.unwrap_or(classify::DEFAULT_RANK_CAP));
    if cli.human {
        println!(
            "{t}: family {}, d-test {}, lattice {}, {}",
            report.family.as_ref().map(|f| f.to_string()).unwrap_or_else(|| "none".into()),
            dtest_cell(&report),
            report.lattice.label(),
            if report.consistent { "consistent" } else { "INCONSISTENT" }
        );
    } else {
        emit(&json!({
            "schema": "qball.xcheck/1",
            "p": t.p().to_string(),
            "q": t.q().to_string(),
            "n": t.n().to_string(),
            "bounds": report.family.is_some(),
            "family": report.family.as_ref().map(family_json),
            "dtest": report.dtest.as_ref().map(dtest_json),
            "lattice": report.lattice.label(),
            "consistent": report.consistent,
        }));
    }
    if !report.consistent {
        Ok(EXIT_NEGATIVE)
    } else if matches!(report.lattice, LatticeOutcome::Inconclusive) {
        Ok(EXIT_INCONCLUSIVE)
    } else {
        Ok(EXIT_OK)
    }
}

fn cmd_families(cli: &Cli, id: Option<u8>, count: Option<usize>) -> CmdResult {
    let count = count.unwrap_or(5);
    if count == 0 {
        return Err(Usage("--count must be positive".into()));
    }
    let ids: Vec<u8> = match id {
        Some(k) => vec![k],
        None => (1..=classify::FAMILY_COUNT).collect(),
    };
    let mut families = Vec::new();
    for k in &ids {
        let members = classify::first_members(*k, count)?;
        families.push((k, members));
    }
    if cli.human {
        for (k, members) in &families {
            for tag in members {
                println!("{k:>2}  {tag:<14} {}", classify::family_enumerate(tag));
            }
        }
    } else {
        emit(&json!({
            "schema": "qball.families/1",
            "count": count,
            "families": families
                .iter()
                .map(|(k, members)| {
                    json!({
                        "id": k,
                        "members": members
                            .iter()
                            .map(|tag| {
                                let t = classify::family_enumerate(tag);
                                let mut row = family_json(tag);
                                let obj = row.as_object_mut().expect("family row");
                                obj.insert("p".into(), json!(t.p().to_string()));
                                obj.insert("q".into(), json!(t.q().to_string()));
                                obj.insert("n".into(), json!(t.n().to_string()));
                                row
                            })
                            .collect::<Vec<_>>(),
                    })
                })
                .collect::<Vec<_>>(),
        }));
    }
    Ok(EXIT_OK)
}

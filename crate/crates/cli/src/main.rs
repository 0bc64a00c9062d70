use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use pentaform::analysis::{self, BlockUnion};
use pentaform::axioms::{self, Violation};
use pentaform::dot::export_dot;
use pentaform::game::{self, GmViolation, PentaformGame, RoundTrip};
use pentaform::io::{self, Document};
use pentaform::relation::{Coords, Quintuple, QuintupleSet, TupleRelation};
use pentaform::value::{Atom, Value};
use serde_json::{json, Value as Json};

/// Validate, inspect, convert and compose pentaform games.
#[derive(Parser)]
#[command(name = "pentaform", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the pentaform axioms (or the Gm conditions for a gm-game).
    Validate { file: PathBuf },
    /// Show components, root, start and end nodes, information sets and feasible actions.
    Info { file: PathBuf },
    /// Print the rows of one situation.
    Slice {
        file: PathBuf,
        /// Situation, as an atom or a set such as `{2,3}`.
        #[arg(long)]
        situation: String,
    },
    /// Project onto coordinates such as `JI` or `WA`.
    Project {
        file: PathBuf,
        #[arg(long)]
        coords: String,
    },
    /// Write the game tree as Graphviz DOT (`-` for stdout).
    Tree {
        file: PathBuf,
        #[arg(long)]
        dot: PathBuf,
    },
    /// Convert between pentaform games and Gm games.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the conversion round trip and the equality battery.
    Roundtrip { file: PathBuf },
    /// List the subroots.
    Subroots { file: PathBuf },
    /// Extract the subgame at a subroot.
    Subgame {
        file: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Combine blocks.
    Union {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Pair)]
        mode: Mode,
    },
    /// Check perfect recall and no-absentmindedness.
    Recall { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Gm,
    Pentaform,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pair,
    Family,
    Chain,
}

/// A check that ran but failed; exits with status 1.
#[derive(Debug)]
struct Semantic(String);

impl std::fmt::Display for Semantic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Semantic {}

fn semantic(msg: impl Into<String>) -> anyhow::Error {
    Semantic(msg.into()).into()
}

struct Output {
    ok: bool,
    text: String,
    json: Json,
}

impl Output {
    fn new(ok: bool, text: String, json: Json) -> Self {
        Output { ok, text, json }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else if !out.text.is_empty() {
                print!("{}", out.text);
                if !out.text.ends_with('\n') {
                    println!();
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let code = if e.is::<Semantic>() { 1 } else { 2 };
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!({ "ok": false, "error": format!("{e:#}") })).expect("json"));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}

fn load(path: &Path) -> anyhow::Result<Document> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = io::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(parsed.document)
}

fn gm_failure(errs: &[GmViolation]) -> anyhow::Error {
    let lines: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
    semantic(format!("not a Gm game: {}", lines.join("; ")))
}

/// The quintuple set of a document; Gm games go through P.
fn relation(doc: Document) -> anyhow::Result<QuintupleSet> {
    Ok(match doc {
        Document::QuintupleSet(q) | Document::PentaformGame { rows: q, .. } => q,
        Document::GmGame(raw) => {
            let g = raw.validate().map_err(|e| gm_failure(&e))?;
            game::pentaform_of(&g).into_parts().0
        }
    })
}

fn require_pentaform(q: &QuintupleSet) -> anyhow::Result<()> {
    match axioms::validate(q).violations().next() {
        Some(v) => Err(semantic(format!("not a pentaform: {v}"))),
        None => Ok(()),
    }
}

fn pentaform_game(doc: Document) -> anyhow::Result<PentaformGame> {
    match doc {
        Document::PentaformGame { rows, utility } => PentaformGame::new(rows, utility).map_err(|e| semantic(e.to_string())),
        Document::GmGame(raw) => Ok(game::pentaform_of(&raw.validate().map_err(|e| gm_failure(&e))?)),
        Document::QuintupleSet(_) => bail!("expected a pentaform-game or gm-game document, found quintuple-set"),
    }
}

fn atom(s: &str) -> anyhow::Result<Atom> {
    Atom::new(s).map_err(|e| anyhow!("{e}"))
}

fn row_json(r: &Quintuple) -> Json {
    json!({
        "i": r.i.to_string(), "j": r.j.to_string(), "w": r.w.as_str(), "a": r.a.as_str(), "y": r.y.as_str()
    })
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn braces<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    format!("{{{}}}", strings(xs).join(", "))
}

fn violation_json(v: &Violation) -> Json {
    json!({
        "axiom": v.axiom.code(),
        "message": v.message,
        "rows": v.rows.iter().map(row_json).collect::<Vec<_>>(),
        "nodes": strings(&v.nodes),
    })
}

fn rows_text(q: &QuintupleSet) -> String {
    q.iter().map(|r| format!("{r}\n")).collect()
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    match &cli.command {
        Command::Validate { file } => validate(load(file)?),
        Command::Info { file } => info(&relation(load(file)?)?),
        Command::Slice { file, situation } => {
            let q = relation(load(file)?)?;
            let j: Value = situation.parse().map_err(|e| anyhow!("bad situation: {e}"))?;
            let s = q.slice(&j);
            if s.is_empty() {
                eprintln!("warning: no rows have situation {j}");
            }
            Ok(Output::new(true, rows_text(&s), serde_json::from_str(&io::serialize(&Document::QuintupleSet(s)))?))
        }
        Command::Project { file, coords } => {
            let q = relation(load(file)?)?;
            let c: Coords = coords.parse().map_err(|e| anyhow!("bad coordinates: {e}"))?;
            Ok(project(&q.project(&c)))
        }
        Command::Tree { file, dot } => {
            let q = relation(load(file)?)?;
            let text = export_dot(&q).map_err(|e| semantic(e.to_string()))?;
            if dot.as_os_str() == "-" {
                Ok(Output::new(true, text.clone(), json!({ "dot": text })))
            } else {
                std::fs::write(dot, &text).with_context(|| format!("writing {}", dot.display()))?;
                Ok(Output::new(
                    true,
                    format!("wrote {}\n", dot.display()),
                    json!({ "written": dot.display().to_string(), "nodes": q.nodes().len(), "edges": q.len() }),
                ))
            }
        }
        Command::Convert { file, to, output } => convert(load(file)?, *to, output.as_deref()),
        Command::Roundtrip { file } => roundtrip(load(file)?),
        Command::Subroots { file } => {
            let q = relation(load(file)?)?;
            require_pentaform(&q)?;
            let t = analysis::subroots(&q)?;
            Ok(Output::new(true, format!("subroots: {}\n", braces(&t)), json!({ "subroots": strings(&t) })))
        }
        Command::Subgame { file, at } => {
            let q = relation(load(file)?)?;
            require_pentaform(&q)?;
            let sub = analysis::subgame(&q, &atom(at)?).map_err(|e| semantic(e.to_string()))?;
            let doc = io::serialize(&Document::QuintupleSet(sub));
            Ok(Output::new(true, doc.clone(), serde_json::from_str(&doc)?))
        }
        Command::Union { files, mode } => union(files, *mode),
        Command::Recall { file } => recall(&relation(load(file)?)?),
    }
}

fn validate(doc: Document) -> anyhow::Result<Output> {
    match doc {
        Document::GmGame(raw) => match raw.validate() {
            Ok(_) => Ok(Output::new(true, "Gm game: valid\n".into(), json!({ "kind": "gm-game", "valid": true, "violations": [] }))),
            Err(errs) => {
                let mut text = String::new();
                for e in &errs {
                    writeln!(text, "{e}")?;
                }
                text.push_str("Gm game: invalid\n");
                let list: Vec<Json> = errs
                    .iter()
                    .map(|e| json!({ "condition": format!("{:?}", e.condition), "message": e.message }))
                    .collect();
                Ok(Output::new(false, text, json!({ "kind": "gm-game", "valid": false, "violations": list })))
            }
        },
        doc => {
            let kind = doc.kind();
            let (q, utility) = match doc {
                Document::PentaformGame { rows, utility } => (rows, Some(utility)),
                Document::QuintupleSet(q) => (q, None),
                Document::GmGame(_) => unreachable!(),
            };
            let report = axioms::validate(&q);
            let mut text = format!("{report}\n");
            let mut ok = report.is_pentaform();
            let axioms_json: Vec<Json> = report
                .iter()
                .map(|(a, r)| match r {
                    Ok(()) => json!({ "axiom": a.code(), "ok": true }),
                    Err(v) => json!({ "axiom": a.code(), "ok": false, "violation": violation_json(v) }),
                })
                .collect();
            let mut out = json!({
                "kind": kind,
                "pentaform": report.is_pentaform(),
                "block": report.is_block(),
                "axioms": axioms_json,
            });
            if let (Some(u), true) = (utility, ok) {
                let verdict = PentaformGame::new(q, u).err().map(|e| e.to_string());
                writeln!(text, "utility: {}", verdict.as_deref().unwrap_or("ok"))?;
                ok = verdict.is_none();
                out["utility_error"] = json!(verdict);
            }
            out["valid"] = json!(ok);
            Ok(Output::new(ok, text, out))
        }
    }
}

fn info(q: &QuintupleSet) -> anyhow::Result<Output> {
    let c = q.components();
    let root = q.root().ok();
    let mut text = String::new();
    writeln!(text, "rows: {}", q.len())?;
    writeln!(text, "I: {}", braces(&c.players))?;
    writeln!(text, "J: {}", braces(&c.situations))?;
    writeln!(text, "W: {}", braces(&c.decision_nodes))?;
    writeln!(text, "A: {}", braces(&c.actions))?;
    writeln!(text, "Y: {}", braces(&c.successors))?;
    writeln!(text, "root: {}", root.as_ref().map_or("none".to_string(), |r| r.to_string()))?;
    writeln!(text, "start nodes: {}", braces(q.start_nodes()))?;
    writeln!(text, "end nodes: {}", braces(q.end_nodes()))?;
    let mut sets = Vec::new();
    writeln!(text, "situations:")?;
    for j in &c.situations {
        let w = q.info_set(j)?;
        let a = q.action_set(j)?;
        writeln!(text, "  {j}: W_j = {}, A_j = {}", braces(&w), braces(&a))?;
        sets.push(json!({ "situation": j.to_string(), "nodes": strings(&w), "actions": strings(&a) }));
    }
    let feasibility = q.feasibility();
    writeln!(text, "feasible actions:")?;
    let mut f_json = serde_json::Map::new();
    for (w, acts) in feasibility.iter() {
        writeln!(text, "  F({w}) = {}", braces(acts))?;
        f_json.insert(w.to_string(), json!(strings(acts)));
    }
    let out = json!({
        "rows": q.len(),
        "players": strings(&c.players),
        "situations": strings(&c.situations),
        "decision_nodes": strings(&c.decision_nodes),
        "actions": strings(&c.actions),
        "successors": strings(&c.successors),
        "root": root.map(|r| r.to_string()),
        "start_nodes": strings(q.start_nodes()),
        "end_nodes": strings(q.end_nodes()),
        "information_sets": sets,
        "feasibility": f_json,
    });
    Ok(Output::new(true, text, out))
}

fn project(t: &TupleRelation) -> Output {
    let tuples: Vec<Vec<String>> = t.tuples().iter().map(strings).collect();
    let text = tuples.iter().map(|v| format!("⟨{}⟩\n", v.join(", "))).collect();
    Output::new(true, text, json!({ "coords": t.coords().to_string(), "tuples": tuples }))
}

fn convert(doc: Document, to: Target, output: Option<&Path>) -> anyhow::Result<Output> {
    let converted = match (doc, to) {
        (Document::QuintupleSet(_), _) => bail!("convert needs a game document, found quintuple-set"),
        (Document::PentaformGame { rows, utility }, Target::Gm) => {
            let pg = PentaformGame::new(rows, utility).map_err(|e| semantic(e.to_string()))?;
            Document::GmGame(game::standardize(&pg).into_raw())
        }
        (Document::GmGame(raw), Target::Pentaform) => {
            let pg = game::pentaform_of(&raw.validate().map_err(|e| gm_failure(&e))?);
            let (rows, utility) = pg.into_parts();
            Document::PentaformGame { rows, utility }
        }
        (Document::GmGame(_), Target::Gm) => bail!("input is already a gm-game"),
        (Document::PentaformGame { .. }, Target::Pentaform) => bail!("input is already a pentaform-game"),
    };
    let text = io::serialize(&converted);
    match output {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            Ok(Output::new(
                true,
                format!("wrote {}\n", path.display()),
                json!({ "written": path.display().to_string(), "kind": converted.kind() }),
            ))
        }
        None => Ok(Output::new(true, text.clone(), serde_json::from_str(&text)?)),
    }
}

fn battery_output(header: String, battery: Vec<game::Equality>, mut json: Json) -> Output {
    let ok = battery.iter().all(|e| e.holds);
    let mut text = header;
    for e in &battery {
        text.push_str(&format!("{e}\n"));
    }
    json["equalities"] = battery
        .iter()
        .map(|e| json!({ "label": e.label.to_string(), "statement": e.statement, "holds": e.holds }))
        .collect();
    json["ok"] = json!(ok);
    Output::new(ok, text, json)
}

fn roundtrip(doc: Document) -> anyhow::Result<Output> {
    match doc {
        Document::GmGame(raw) => {
            let g = raw.validate().map_err(|e| gm_failure(&e))?;
            let rt = game::sp_roundtrip(&g);
            let header = format!("SP: {}\n", describe(&rt));
            let battery = game::gm_battery(&g);
            let mut out = battery_output(header, battery, json!({ "direction": "SP", "roundtrip": describe(&rt) }));
            out.ok &= rt.is_identity();
            out.json["ok"] = json!(out.ok);
            Ok(out)
        }
        doc => {
            let pg = pentaform_game(doc)?;
            let rt = game::ps_roundtrip(&pg);
            let header = format!("PS: {}\n", describe(&rt));
            let json = json!({ "direction": "PS", "roundtrip": describe(&rt) });
            match game::pentaform_battery(&pg) {
                Ok(battery) => {
                    let mut out = battery_output(header, battery, json);
                    out.ok &= rt.is_identity();
                    out.json["ok"] = json!(out.ok);
                    Ok(out)
                }
                Err(e) => {
                    let mut json = json;
                    json["ok"] = json!(false);
                    json["error"] = json!(e.to_string());
                    Ok(Output::new(false, format!("{header}{e}\n"), json))
                }
            }
        }
    }
}

fn describe(rt: &RoundTrip) -> String {
    match rt {
        RoundTrip::Identity => "identity".into(),
        RoundTrip::Rewritten(_) => "rewritten (situations replaced by information sets)".into(),
        RoundTrip::Mismatch(c) => format!("mismatch in {}", c.join(", ")),
    }
}

fn block_union_output(u: BlockUnion) -> Output {
    let pentaform = axioms::is_pentaform(&u.union);
    let mut text = String::new();
    text.push_str(&format!("start nodes: {}\n", braces(&u.start_nodes)));
    text.push_str(&format!("end nodes: {}\n", braces(&u.end_nodes)));
    text.push_str(&format!(
        "pentaform: {}{}\n",
        pentaform,
        u.root().map(|r| format!(" (root {r})")).unwrap_or_default()
    ));
    text.push_str(&io::serialize(&Document::QuintupleSet(u.union.clone())));
    let doc: Json = serde_json::from_str(&io::serialize(&Document::QuintupleSet(u.union))).expect("json");
    Output::new(
        true,
        text,
        json!({
            "start_nodes": strings(&u.start_nodes),
            "end_nodes": strings(&u.end_nodes),
            "pentaform": pentaform,
            "union": doc,
        }),
    )
}

fn union(files: &[PathBuf], mode: Mode) -> anyhow::Result<Output> {
    let family = files
        .iter()
        .map(|f| relation(load(f)?))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let fail = |e: analysis::CompositionError| semantic(e.to_string());
    match mode {
        Mode::Pair => {
            let [q1, q2] = family.as_slice() else {
                bail!("--mode pair takes exactly two files, got {}", family.len());
            };
            Ok(block_union_output(analysis::union_pair(q1, q2).map_err(fail)?))
        }
        Mode::Family => Ok(block_union_output(analysis::union_family(&family).map_err(fail)?)),
        Mode::Chain => {
            let q = analysis::union_chain(&family).map_err(fail)?;
            let root = q.root().expect("chains are pentaforms");
            let doc = io::serialize(&Document::QuintupleSet(q));
            Ok(Output::new(
                true,
                format!("root: {root}\n{doc}"),
                json!({ "root": root.to_string(), "union": serde_json::from_str::<Json>(&doc)? }),
            ))
        }
    }
}

fn recall(q: &QuintupleSet) -> anyhow::Result<Output> {
    require_pentaform(q)?;
    let pr = analysis::check_perfect_recall(q)?;
    let nam = analysis::check_no_absentmindedness(q)?;
    let mut text = String::new();
    match &pr {
        None => text.push_str("perfect recall: yes\n"),
        Some(w) => writeln!(text, "perfect recall: no ({w})")?,
    }
    match &nam {
        None => text.push_str("no absentmindedness: yes\n"),
        Some(w) => writeln!(text, "no absentmindedness: no ({w})")?,
    }
    let json = json!({
        "perfect_recall": pr.is_none(),
        "perfect_recall_witness": pr.as_ref().map(|w| strings([&w.y1, &w.y2, &w.y3])),
        "no_absentmindedness": nam.is_none(),
        "absentmindedness_witness": nam.as_ref().map(|w| strings([&w.y1, &w.y2])),
    });
    Ok(Output::new(pr.is_none() && nam.is_none(), text, json))
}

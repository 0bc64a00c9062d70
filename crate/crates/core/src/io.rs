//! JSON documents for quintuple sets and games.
//!
//! Every document carries `"kind"` and `"version": "1"`. Values are written
//! `{"atom": "x"}` or `{"set": ["x", "y"]}`; utilities are numbers or the
//! strings `"inf"` and `"-inf"`. Output is canonical: rows, sets and maps
//! are sorted, and equal documents serialize to identical bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{ExtendedReal, RawGmGame, UtilityProfile};
use crate::relation::{Quintuple, QuintupleSet};
use crate::tree::Run;
use crate::value::{Atom, Value};

pub const VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON at {path}: {message}")]
    Json { path: String, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unknown document kind {0:?}")]
    UnknownKind(String),
    #[error("unsupported version {0:?} (expected \"1\")")]
    UnsupportedVersion(String),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema { path: path.into(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    QuintupleSet(QuintupleSet),
    /// Unvalidated; see [`crate::game::PentaformGame::new`].
    PentaformGame { rows: QuintupleSet, utility: UtilityProfile },
    /// Unvalidated; see [`RawGmGame::validate`].
    GmGame(RawGmGame),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::QuintupleSet(_) => "quintuple-set",
            Document::PentaformGame { .. } => "pentaform-game",
            Document::GmGame(_) => "gm-game",
        }
    }

    /// The rows of a quintuple-set or pentaform-game document.
    pub fn rows(&self) -> Option<&QuintupleSet> {
        match self {
            Document::QuintupleSet(q) | Document::PentaformGame { rows: q, .. } => Some(q),
            Document::GmGame(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub document: Document,
    /// Duplicate entries that were merged.
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
enum ValueDto {
    #[serde(rename = "atom")]
    Atom(String),
    #[serde(rename = "set")]
    Set(Vec<String>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RealDto {
    Number(f64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowDto {
    i: ValueDto,
    j: ValueDto,
    w: ValueDto,
    a: ValueDto,
    y: ValueDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UtilityDto {
    player: ValueDto,
    run: Vec<String>,
    value: RealDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelDto {
    w: String,
    y: String,
    action: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ControlDto {
    node: String,
    player: ValueDto,
}

#[derive(Deserialize)]
struct Probe {
    kind: String,
    version: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuintupleSetDto {
    kind: String,
    version: String,
    rows: Vec<RowDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PentaformGameDto {
    kind: String,
    version: String,
    rows: Vec<RowDto>,
    utility: Vec<UtilityDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GmGameDto {
    kind: String,
    version: String,
    nodes: Vec<String>,
    edges: Vec<[String; 2]>,
    info_sets: Vec<Vec<String>>,
    labels: Vec<LabelDto>,
    control: Vec<ControlDto>,
    utility: Vec<UtilityDto>,
}

fn typed<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| IoError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn parse(text: &str) -> Result<Parsed, IoError> {
    let probe: Probe = typed(text)?;
    if probe.version != VERSION {
        return Err(IoError::UnsupportedVersion(probe.version));
    }
    let mut warnings = Vec::new();
    let document = match probe.kind.as_str() {
        "quintuple-set" => {
            let dto: QuintupleSetDto = typed(text)?;
            Document::QuintupleSet(rows_from(dto.rows, &mut warnings)?)
        }
        "pentaform-game" => {
            let dto: PentaformGameDto = typed(text)?;
            Document::PentaformGame {
                rows: rows_from(dto.rows, &mut warnings)?,
                utility: utility_from(dto.utility, &mut warnings)?,
            }
        }
        "gm-game" => Document::GmGame(gm_from(typed(text)?, &mut warnings)?),
        _ => return Err(IoError::UnknownKind(probe.kind)),
    };
    Ok(Parsed { document, warnings })
}

fn atom_at(path: &str, s: String) -> Result<Atom, IoError> {
    Atom::new(s).map_err(|e| schema(path, e.to_string()))
}

fn value_at(path: &str, v: ValueDto) -> Result<Value, IoError> {
    match v {
        ValueDto::Atom(s) => Ok(Value::Atom(atom_at(path, s)?)),
        ValueDto::Set(items) => items
            .into_iter()
            .enumerate()
            .map(|(k, s)| atom_at(&format!("{path}.set[{k}]"), s))
            .collect::<Result<BTreeSet<_>, _>>()
            .map(Value::Set),
    }
}

fn node_at(path: &str, v: ValueDto) -> Result<Atom, IoError> {
    match v {
        ValueDto::Atom(s) => atom_at(path, s),
        ValueDto::Set(_) => Err(schema(path, "must be an atom, not a set")),
    }
}

fn nodes_at(path: &str, items: Vec<String>) -> Result<BTreeSet<Atom>, IoError> {
    items
        .into_iter()
        .enumerate()
        .map(|(k, s)| atom_at(&format!("{path}[{k}]"), s))
        .collect()
}

fn rows_from(rows: Vec<RowDto>, warnings: &mut Vec<String>) -> Result<QuintupleSet, IoError> {
    let mut q = QuintupleSet::new();
    for (k, r) in rows.into_iter().enumerate() {
        let p = format!("rows[{k}]");
        let row = Quintuple::new(
            value_at(&format!("{p}.i"), r.i)?,
            value_at(&format!("{p}.j"), r.j)?,
            node_at(&format!("{p}.w"), r.w)?,
            node_at(&format!("{p}.a"), r.a)?,
            node_at(&format!("{p}.y"), r.y)?,
        );
        if !q.insert(row.clone()) {
            warnings.push(format!("{p}: duplicate row {row} ignored"));
        }
    }
    Ok(q)
}

fn real_at(path: &str, v: RealDto) -> Result<ExtendedReal, IoError> {
    match v {
        RealDto::Number(x) => ExtendedReal::from_f64(x).map_err(|e| schema(path, e.to_string())),
        RealDto::Text(s) => match s.as_str() {
            "inf" => Ok(ExtendedReal::PosInf),
            "-inf" => Ok(ExtendedReal::NegInf),
            _ => Err(schema(path, format!("expected a number, \"inf\" or \"-inf\", found {s:?}"))),
        },
    }
}

fn utility_from(entries: Vec<UtilityDto>, warnings: &mut Vec<String>) -> Result<UtilityProfile, IoError> {
    let mut u = UtilityProfile::new();
    for (k, e) in entries.into_iter().enumerate() {
        let p = format!("utility[{k}]");
        let player = value_at(&format!("{p}.player"), e.player)?;
        let run = Run::new(nodes_at(&format!("{p}.run"), e.run)?);
        let value = real_at(&format!("{p}.value"), e.value)?;
        match u.get(&player, &run) {
            Some(old) if old == value => warnings.push(format!("{p}: duplicate utility entry ignored")),
            Some(old) => {
                return Err(schema(p, format!("u_{player} on {run} is given as both {old} and {value}")))
            }
            None => u.set(player, run, value),
        }
    }
    Ok(u)
}

fn gm_from(dto: GmGameDto, warnings: &mut Vec<String>) -> Result<RawGmGame, IoError> {
    let nodes = nodes_at("nodes", dto.nodes)?;
    let mut edges = BTreeSet::new();
    for (k, [w, y]) in dto.edges.into_iter().enumerate() {
        let p = format!("edges[{k}]");
        let e = (atom_at(&format!("{p}[0]"), w)?, atom_at(&format!("{p}[1]"), y)?);
        if !edges.insert(e) {
            warnings.push(format!("{p}: duplicate edge ignored"));
        }
    }
    let mut info_sets = BTreeSet::new();
    for (k, h) in dto.info_sets.into_iter().enumerate() {
        let p = format!("info_sets[{k}]");
        if !info_sets.insert(nodes_at(&p, h)?) {
            warnings.push(format!("{p}: duplicate information set ignored"));
        }
    }
    let mut labels = BTreeMap::new();
    for (k, l) in dto.labels.into_iter().enumerate() {
        let p = format!("labels[{k}]");
        let edge = (atom_at(&format!("{p}.w"), l.w)?, atom_at(&format!("{p}.y"), l.y)?);
        let action = atom_at(&format!("{p}.action"), l.action)?;
        match labels.get(&edge) {
            Some(old) if *old == action => warnings.push(format!("{p}: duplicate label ignored")),
            Some(old) => return Err(schema(p, format!("edge labelled both {old} and {action}"))),
            None => {
                labels.insert(edge, action);
            }
        }
    }
    let mut control = BTreeMap::new();
    for (k, c) in dto.control.into_iter().enumerate() {
        let p = format!("control[{k}]");
        let node = atom_at(&format!("{p}.node"), c.node)?;
        let player = value_at(&format!("{p}.player"), c.player)?;
        match control.get(&node) {
            Some(old) if *old == player => warnings.push(format!("{p}: duplicate control entry ignored")),
            Some(old) => return Err(schema(p, format!("node {node} controlled by both {old} and {player}"))),
            None => {
                control.insert(node, player);
            }
        }
    }
    let utility = utility_from(dto.utility, warnings)?;
    Ok(RawGmGame { nodes, edges, info_sets, labels, control, utility })
}

fn value_dto(v: &Value) -> ValueDto {
    match v {
        Value::Atom(a) => ValueDto::Atom(a.to_string()),
        Value::Set(s) => ValueDto::Set(s.iter().map(Atom::to_string).collect()),
    }
}

fn atom_dto(a: &Atom) -> ValueDto {
    ValueDto::Atom(a.to_string())
}

fn rows_dto(q: &QuintupleSet) -> Vec<RowDto> {
    q.iter()
        .map(|r| RowDto {
            i: value_dto(&r.i),
            j: value_dto(&r.j),
            w: atom_dto(&r.w),
            a: atom_dto(&r.a),
            y: atom_dto(&r.y),
        })
        .collect()
}

fn strings<'a>(xs: impl IntoIterator<Item = &'a Atom>) -> Vec<String> {
    xs.into_iter().map(Atom::to_string).collect()
}

fn utility_dto(u: &UtilityProfile) -> Vec<UtilityDto> {
    u.iter()
        .flat_map(|(player, ui)| {
            ui.iter().map(move |(run, x)| UtilityDto {
                player: value_dto(player),
                run: strings(&run.nodes),
                value: match x {
                    ExtendedReal::NegInf => RealDto::Text("-inf".into()),
                    ExtendedReal::PosInf => RealDto::Text("inf".into()),
                    ExtendedReal::Finite(x) => RealDto::Number(*x),
                },
            })
        })
        .collect()
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn serialize(doc: &Document) -> String {
    let kind = doc.kind().to_string();
    let version = VERSION.to_string();
    let mut out = match doc {
        Document::QuintupleSet(q) => serde_json::to_string_pretty(&QuintupleSetDto { kind, version, rows: rows_dto(q) }),
        Document::PentaformGame { rows, utility } => serde_json::to_string_pretty(&PentaformGameDto {
            kind,
            version,
            rows: rows_dto(rows),
            utility: utility_dto(utility),
        }),
        Document::GmGame(g) => serde_json::to_string_pretty(&GmGameDto {
            kind,
            version,
            nodes: strings(&g.nodes),
            edges: g.edges.iter().map(|(w, y)| [w.to_string(), y.to_string()]).collect(),
            info_sets: g.info_sets.iter().map(strings).collect(),
            labels: g
                .labels
                .iter()
                .map(|((w, y), a)| LabelDto { w: w.to_string(), y: y.to_string(), action: a.to_string() })
                .collect(),
            control: g
                .control
                .iter()
                .map(|(w, i)| ControlDto { node: w.to_string(), player: value_dto(i) })
                .collect(),
            utility: utility_dto(&g.utility),
        }),
    }
    .expect("documents always serialize");
    out.push('\n');
    out
}

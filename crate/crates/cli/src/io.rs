//! JSON documents for instances and schedules, plus a DOT input subset.
//!
//! JSON is the canonical interchange form: levels are first-class in a
//! depth-two instance, so the document spells them out. DOT is accepted as
//! input-only convenience for graphs written down as plain edge lists; the
//! levels are then inferred from longest paths. Parse errors carry
//! line/column positions, and instance-validation failures on DOT input
//! point back at the first occurrence of the offending vertex.

use std::collections::BTreeMap;
use std::iter::Peekable;
use std::path::Path;
use std::str::Chars;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use duosched::{
    Boundary, DepthTwoDag, Direction, GraphError, HingeDecision, HingeVertex, InstanceComparison,
    Processor, Schedule, infer_levels,
};

/// How an instance file is encoded.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InstanceFormat {
    Json,
    Dot,
}

impl InstanceFormat {
    /// Picks the format from a file extension: `.dot` is DOT, everything
    /// else is treated as canonical JSON.
    pub fn from_path(path: &Path) -> InstanceFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("dot") => InstanceFormat::Dot,
            _ => InstanceFormat::Json,
        }
    }
}

/// Errors reading instance or schedule documents.
#[derive(Error, Debug)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid instance near line {line}, column {column}: {source}")]
    GraphAt {
        line: usize,
        column: usize,
        source: GraphError,
    },
    #[error("invalid instance: {source}")]
    Graph {
        #[from]
        source: GraphError,
    },
    #[error("invalid schedule document: {message}")]
    Schedule { message: String },
}

impl ParseError {
    fn from_json(err: &serde_json::Error) -> ParseError {
        ParseError::Syntax {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }

    fn schedule(message: impl Into<String>) -> ParseError {
        ParseError::Schedule { message: message.into() }
    }
}

/// A depth-two instance on the wire: explicit levels, edges as name pairs,
/// and room for free-form provenance notes.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<BTreeMap<String, serde_json::Value>>,
}

impl InstanceDocument {
    pub fn from_dag(g: &DepthTwoDag) -> InstanceDocument {
        let names = |level: &[duosched::VertexId]| -> Vec<String> {
            level.iter().map(|&v| g.name(v).to_string()).collect()
        };
        InstanceDocument {
            a: names(g.a_level()),
            b: names(g.b_level()),
            c: names(g.c_level()),
            edges: g
                .edges()
                .map(|(u, v)| (g.name(u).to_string(), g.name(v).to_string()))
                .collect(),
            metadata: None,
        }
    }

    pub fn to_dag(&self) -> Result<DepthTwoDag, GraphError> {
        DepthTwoDag::build(&self.a, &self.b, &self.c, &self.edges)
    }

    pub fn from_json(text: &str) -> Result<InstanceDocument, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::from_json(&e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance document serializes")
    }
}

/// One occupied slot of a schedule document.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
#[serde(deny_unknown_fields)]
pub struct SlotEntry {
    pub vertex: String,
    pub time: u32,
    pub processor: String,
}

/// One side of one hinge decision, flattened for the wire: `stage` names
/// the boundary (`"bc"` first, `"ab"` second), `side` tells whether the
/// pair closes the earlier level (`"right"`) or opens the later one
/// (`"left"`), and `first`/`second` are vertex names with `null` standing
/// for an imaginary (idle) component.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
#[serde(deny_unknown_fields)]
pub struct TraceEntry {
    pub stage: String,
    pub kind: String,
    pub side: String,
    pub first: Option<String>,
    pub second: Option<String>,
    pub case: String,
}

/// Claims attached to a schedule document by whoever produced it.
#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFlags {
    pub optimal_claimed: bool,
    pub fallback: bool,
}

/// A schedule on the wire. `direction` is `"forward"` for real time or
/// `"reverse"` for the reversed frame the construction works in.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDocument {
    pub makespan: u32,
    pub direction: String,
    pub slots: Vec<SlotEntry>,
    pub hinge_trace: Vec<TraceEntry>,
    pub flags: ScheduleFlags,
}

/// Expands hinge decisions into wire rows, one per hinge side.
pub fn trace_entries(g: &DepthTwoDag, trace: &[HingeDecision]) -> Vec<TraceEntry> {
    let name = |slot: HingeVertex| slot.real().map(|v| g.name(v).to_string());
    trace
        .iter()
        .flat_map(|d| {
            let stage = match d.boundary {
                Boundary::Bc => "bc",
                Boundary::Ab => "ab",
            };
            let row = |side: &str, pair: (HingeVertex, HingeVertex)| TraceEntry {
                stage: stage.to_string(),
                kind: d.kind.to_string(),
                side: side.to_string(),
                first: name(pair.0),
                second: name(pair.1),
                case: d.case.to_string(),
            };
            [row("right", d.hinge.right), row("left", d.hinge.left)]
        })
        .collect()
}

impl ScheduleDocument {
    pub fn from_schedule(g: &DepthTwoDag, s: &Schedule, flags: ScheduleFlags) -> ScheduleDocument {
        let mut slots: Vec<SlotEntry> = s
            .iter()
            .map(|(v, a)| SlotEntry {
                vertex: g.name(v).to_string(),
                time: a.time,
                processor: a.processor.to_string(),
            })
            .collect();
        slots.sort_by(|x, y| (x.time, &x.processor).cmp(&(y.time, &y.processor)));
        ScheduleDocument {
            makespan: s.makespan(),
            direction: match s.direction {
                Direction::Forward => "forward".to_string(),
                Direction::Reverse => "reverse".to_string(),
            },
            slots,
            hinge_trace: trace_entries(g, &s.trace),
            flags,
        }
    }

    /// Rebuilds the slot assignment against `g`. Structural problems
    /// (unknown names, double assignment, bad enum strings) are document
    /// errors; scheduling violations are deliberately *not* checked here,
    /// so a broken schedule can still be loaded and diagnosed.
    pub fn to_schedule(&self, g: &DepthTwoDag) -> Result<Schedule, ParseError> {
        let direction = match self.direction.as_str() {
            "forward" => Direction::Forward,
            "reverse" => Direction::Reverse,
            other => {
                return Err(ParseError::schedule(format!(
                    "direction must be \"forward\" or \"reverse\", got {other:?}"
                )))
            }
        };
        let mut s = Schedule::empty(g.vertex_count(), direction);
        for entry in &self.slots {
            let v = g.vertex_by_name(&entry.vertex).ok_or_else(|| {
                ParseError::schedule(format!("slot names unknown vertex {:?}", entry.vertex))
            })?;
            if s.assignment(v).is_some() {
                return Err(ParseError::schedule(format!(
                    "vertex {:?} is assigned twice",
                    entry.vertex
                )));
            }
            if entry.time == 0 {
                return Err(ParseError::schedule(format!(
                    "vertex {:?} sits at time 0; slots are 1-based",
                    entry.vertex
                )));
            }
            let processor = match entry.processor.as_str() {
                "P1" => Processor::P1,
                "P2" => Processor::P2,
                other => {
                    return Err(ParseError::schedule(format!(
                        "processor must be \"P1\" or \"P2\", got {other:?}"
                    )))
                }
            };
            s.set(v, entry.time, processor);
        }
        if s.makespan() != self.makespan {
            return Err(ParseError::schedule(format!(
                "document states makespan {} but the last occupied slot is {}",
                self.makespan,
                s.makespan()
            )));
        }
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<ScheduleDocument, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::from_json(&e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule document serializes")
    }
}

/// One line of a comparison report file: the per-instance record, plus the
/// full instance for mismatches so they can be replayed directly.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
pub struct ReportRow {
    pub digest: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub algorithm_makespan: Option<u32>,
    pub oracle_makespan: u32,
    #[serde(rename = "match")]
    pub matched: bool,
    pub hinge_trace: Vec<TraceEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceDocument>,
}

impl ReportRow {
    pub fn new(record: &InstanceComparison, g: &DepthTwoDag) -> ReportRow {
        let matched = record.matches();
        ReportRow {
            digest: record.digest.clone(),
            vertex_count: record.vertex_count,
            edge_count: record.edge_count,
            algorithm_makespan: record.algorithm_makespan,
            oracle_makespan: record.oracle_makespan,
            matched,
            hinge_trace: trace_entries(g, &record.trace),
            instance: (!matched).then(|| InstanceDocument::from_dag(g)),
        }
    }
}

/// Reads an instance in either supported format.
pub fn parse_instance(text: &str, format: InstanceFormat) -> Result<DepthTwoDag, ParseError> {
    match format {
        InstanceFormat::Json => Ok(InstanceDocument::from_json(text)?.to_dag()?),
        InstanceFormat::Dot => {
            let parsed = parse_dot(text)?;
            infer_levels(&parsed.names, &parsed.edges).map_err(|source| {
                match offending_name(&source).and_then(|n| parsed.positions.get(n)) {
                    Some(pos) => ParseError::GraphAt {
                        line: pos.line,
                        column: pos.column,
                        source,
                    },
                    None => ParseError::Graph { source },
                }
            })
        }
    }
}

/// The vertex a graph error complains about, when it names one.
fn offending_name(err: &GraphError) -> Option<&str> {
    match err {
        GraphError::DuplicateName(n) | GraphError::OrphanSink(n) | GraphError::OrphanMiddle(n) => {
            Some(n)
        }
        GraphError::UnknownEndpoint { unknown, .. } => Some(unknown),
        GraphError::IntraLevelEdge { from, .. }
        | GraphError::SkipLevelEdge { from, .. }
        | GraphError::BackwardEdge { from, .. } => Some(from),
        GraphError::DepthExceeded { .. } | GraphError::CycleDetected => None,
    }
}

/// 1-based position of a token in its source text.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct SourcePos {
    line: usize,
    column: usize,
}

struct DotGraph {
    names: Vec<String>,
    edges: Vec<(String, String)>,
    positions: BTreeMap<String, SourcePos>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    Ident(String),
    LBrace,
    RBrace,
    Arrow,
    Semi,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("{name:?}"),
            Token::LBrace => "'{'".to_string(),
            Token::RBrace => "'}'".to_string(),
            Token::Arrow => "'->'".to_string(),
            Token::Semi => "';'".to_string(),
        }
    }
}

struct Lexer<'a> {
    chars: Peekable<Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Lexer<'a> {
        Lexer { chars: text.chars().peekable(), line: 1, column: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, pos: SourcePos, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: pos.line, column: pos.column, message: message.into() }
    }

    fn next_token(&mut self) -> Result<Option<(Token, SourcePos)>, ParseError> {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
        let pos = SourcePos { line: self.line, column: self.column };
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        let token = match c {
            '{' => {
                self.bump();
                Token::LBrace
            }
            '}' => {
                self.bump();
                Token::RBrace
            }
            ';' => {
                self.bump();
                Token::Semi
            }
            '-' => {
                self.bump();
                if self.chars.peek() == Some(&'>') {
                    self.bump();
                    Token::Arrow
                } else {
                    return Err(self.error(pos, "expected '->'"));
                }
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        name.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Token::Ident(name)
            }
            other => return Err(self.error(pos, format!("unexpected character {other:?}"))),
        };
        Ok(Some((token, pos)))
    }

    fn require(&mut self, wanted: &str) -> Result<(Token, SourcePos), ParseError> {
        let pos = SourcePos { line: self.line, column: self.column };
        self.next_token()?
            .ok_or_else(|| self.error(pos, format!("expected {wanted}, found end of input")))
    }
}

/// Parses the DOT subset `digraph <id>? { (name ; | name -> name ;)* }`.
fn parse_dot(text: &str) -> Result<DotGraph, ParseError> {
    let mut lx = Lexer::new(text);
    let mut graph = DotGraph { names: Vec::new(), edges: Vec::new(), positions: BTreeMap::new() };
    let note = |name: &str, pos: SourcePos, graph: &mut DotGraph| {
        if !graph.positions.contains_key(name) {
            graph.names.push(name.to_string());
            graph.positions.insert(name.to_string(), pos);
        }
    };

    let (tok, pos) = lx.require("'digraph'")?;
    match tok {
        Token::Ident(word) if word == "digraph" => {}
        other => return Err(lx.error(pos, format!("expected 'digraph', found {}", other.describe()))),
    }
    let (mut tok, mut pos) = lx.require("'{'")?;
    if matches!(tok, Token::Ident(_)) {
        (tok, pos) = lx.require("'{'")?; // optional graph name
    }
    if tok != Token::LBrace {
        return Err(lx.error(pos, format!("expected '{{', found {}", tok.describe())));
    }
    loop {
        let (tok, pos) = lx.require("a vertex name or '}'")?;
        let from = match tok {
            Token::RBrace => break,
            Token::Ident(name) => name,
            other => {
                return Err(
                    lx.error(pos, format!("expected a vertex name or '}}', found {}", other.describe()))
                )
            }
        };
        note(&from, pos, &mut graph);
        let (tok, pos) = lx.require("'->' or ';'")?;
        match tok {
            Token::Semi => {}
            Token::Arrow => {
                let (tok, pos) = lx.require("a vertex name")?;
                let Token::Ident(to) = tok else {
                    return Err(
                        lx.error(pos, format!("expected a vertex name, found {}", tok.describe()))
                    );
                };
                note(&to, pos, &mut graph);
                let (tok, pos) = lx.require("';'")?;
                if tok != Token::Semi {
                    return Err(lx.error(pos, format!("expected ';', found {}", tok.describe())));
                }
                graph.edges.push((from, to));
            }
            other => {
                return Err(lx.error(pos, format!("expected '->' or ';', found {}", other.describe())))
            }
        }
    }
    if let Some((tok, pos)) = lx.next_token()? {
        return Err(lx.error(pos, format!("expected end of input, found {}", tok.describe())));
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use duosched::schedule_depth_two;

    fn chain_doc() -> &'static str {
        r#"{"a":["a"],"b":["b"],"c":["c"],"edges":[["a","b"],["b","c"]]}"#
    }

    #[test]
    fn json_instance_round_trips_identically() {
        let doc = InstanceDocument::from_json(chain_doc()).unwrap();
        let again = InstanceDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
        let g = doc.to_dag().unwrap();
        assert_eq!(InstanceDocument::from_dag(&g), doc);
    }

    #[test]
    fn dot_input_infers_the_levels() {
        let g = parse_instance("digraph { a -> b; b -> c; }", InstanceFormat::Dot).unwrap();
        assert_eq!(g.a_level().len(), 1);
        assert_eq!(g.b_level().len(), 1);
        assert_eq!(g.c_level().len(), 1);
        assert_eq!(g.name(g.a_level()[0]), "a");
    }

    #[test]
    fn dot_accepts_a_graph_name_and_node_statements() {
        let g = parse_instance(
            "digraph tiny {\n  lone;\n  lone -> w;\n}",
            InstanceFormat::Dot,
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 2);
    }

    #[test]
    fn dot_syntax_errors_carry_positions() {
        let err = parse_instance("digraph {\n a -> ;\n}", InstanceFormat::Dot).unwrap_err();
        match err {
            ParseError::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, 7);
            }
            other => panic!("expected a syntax error, got {other}"),
        }
    }

    #[test]
    fn dot_cycles_are_rejected() {
        let err = parse_instance("digraph { a -> b; b -> a; }", InstanceFormat::Dot).unwrap_err();
        assert!(matches!(err, ParseError::Graph { source: GraphError::CycleDetected }));
    }

    #[test]
    fn dot_build_errors_point_at_the_offending_vertex() {
        // The direct a -> d edge skips the middle level once b pushes d to
        // depth two; the error should point at a's first occurrence.
        let err = parse_instance(
            "digraph {\n a -> b;\n b -> d;\n a -> d;\n}",
            InstanceFormat::Dot,
        )
        .unwrap_err();
        match err {
            ParseError::GraphAt { line, column, source } => {
                assert!(matches!(source, GraphError::SkipLevelEdge { .. }));
                assert_eq!((line, column), (2, 2));
            }
            other => panic!("expected a positioned graph error, got {other}"),
        }
    }

    #[test]
    fn degenerate_bipartite_json_loads() {
        let g = parse_instance(
            r#"{"a":[],"b":["b"],"c":["c"],"edges":[["b","c"]]}"#,
            InstanceFormat::Json,
        )
        .unwrap();
        assert!(g.a_level().is_empty());
        assert_eq!(g.vertex_count(), 2);
    }

    #[test]
    fn schedule_document_round_trips_through_a_schedule() {
        let g = InstanceDocument::from_json(chain_doc()).unwrap().to_dag().unwrap();
        let s = schedule_depth_two(&g).unwrap();
        let flags = ScheduleFlags { optimal_claimed: true, fallback: false };
        let doc = ScheduleDocument::from_schedule(&g, &s, flags);
        let again = ScheduleDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
        let rebuilt = again.to_schedule(&g).unwrap();
        assert_eq!(rebuilt.makespan(), s.makespan());
        assert!(duosched::check_feasible(&g, &rebuilt).is_empty());
    }

    #[test]
    fn schedule_document_rejects_unknown_vertices_and_wrong_makespan() {
        let g = InstanceDocument::from_json(chain_doc()).unwrap().to_dag().unwrap();
        let doc = ScheduleDocument {
            makespan: 1,
            direction: "forward".to_string(),
            slots: vec![SlotEntry {
                vertex: "zz".to_string(),
                time: 1,
                processor: "P1".to_string(),
            }],
            hinge_trace: Vec::new(),
            flags: ScheduleFlags { optimal_claimed: false, fallback: false },
        };
        assert!(matches!(doc.to_schedule(&g), Err(ParseError::Schedule { .. })));

        let mut wrong = doc.clone();
        wrong.slots[0].vertex = "a".to_string();
        wrong.makespan = 9;
        assert!(matches!(wrong.to_schedule(&g), Err(ParseError::Schedule { .. })));
    }

    #[test]
    fn trace_rows_come_in_right_left_pairs() {
        let g = InstanceDocument::from_json(
            r#"{"a":["a1","a2"],"b":["b1","b2"],"c":["c1","c2"],
                "edges":[["a1","b1"],["a1","b2"],["a2","b1"],["a2","b2"],
                         ["b1","c1"],["b1","c2"],["b2","c1"],["b2","c2"]]}"#,
        )
        .unwrap()
        .to_dag()
        .unwrap();
        let s = schedule_depth_two(&g).unwrap();
        let rows = trace_entries(&g, &s.trace);
        assert!(!rows.is_empty());
        assert_eq!(rows.len() % 2, 0);
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].side, "right");
            assert_eq!(pair[1].side, "left");
            assert_eq!(pair[0].stage, pair[1].stage);
        }
    }
}

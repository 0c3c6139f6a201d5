//! Line-oriented text format for networks.
//!
//! ```text
//! # comment
//! nodes a b c d e f g h
//! gate gate1 in(a,b) out(c,d) { 00->00; 01->01; 10->11; 11->10 }
//! link d -> e
//! fix b=1 input
//! drive h
//! ```
//!
//! A gate's table may continue over several lines until the closing `}`.
//! Nodes must be declared before a statement references them.

use crate::error::{Error, ParseErrorKind, Result};
use crate::hilbert::NodeOrder;

use super::{link_name, pack, pattern_string, Gate, Network, Pin, PinKind, TruthTable};

fn err(line: usize, kind: ParseErrorKind) -> Error {
    Error::Parse { line, kind }
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    err(line, ParseErrorKind::Syntax(msg.into()))
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.s[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.s[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(syntax(self.line, format!("expected {token:?}")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = &self.s[self.pos..];
        let end = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        let id = &rest[..end];
        if !is_ident(id) {
            return Err(syntax(self.line, "expected a name"));
        }
        self.pos += end;
        Ok(id)
    }

    fn name_list(&mut self) -> Result<Vec<&'a str>> {
        self.eat("(")?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.s[self.pos..].starts_with(')') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.ident()?);
            self.skip_ws();
            match self.s[self.pos..].chars().next() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(syntax(self.line, "expected ',' or ')' in node list")),
            }
        }
    }
}

struct PendingPin {
    line: usize,
    node: String,
    value: bool,
    kind: Option<PinKind>,
}

#[derive(Default)]
struct Builder {
    nodes: Vec<String>,
    gates: Vec<Gate>,
    pins: Vec<PendingPin>,
    drive: Option<(usize, String)>,
}

impl Builder {
    fn require_node(&self, line: usize, name: &str) -> Result<()> {
        if self.nodes.iter().any(|n| n == name) {
            Ok(())
        } else {
            Err(err(line, ParseErrorKind::UndeclaredNode(name.to_string())))
        }
    }

    fn nodes_stmt(&mut self, line: usize, rest: &str) -> Result<()> {
        let names: Vec<&str> = rest
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        if names.is_empty() {
            return Err(syntax(line, "'nodes' needs at least one name"));
        }
        for name in names {
            if !is_ident(name) {
                return Err(syntax(line, format!("invalid node name {name:?}")));
            }
            if self.nodes.iter().any(|n| n == name) {
                return Err(err(line, ParseErrorKind::DuplicateNode(name.to_string())));
            }
            self.nodes.push(name.to_string());
        }
        Ok(())
    }

    /// `header` is the text between `gate` and `{`; `rows` are the table's
    /// non-empty row texts with their line numbers.
    fn gate_stmt(&mut self, line: usize, header: &str, rows: &[(usize, String)]) -> Result<()> {
        let mut cur = Cursor {
            s: header,
            pos: 0,
            line,
        };
        let name = cur.ident()?.to_string();
        cur.eat("in")?;
        let inputs = cur.name_list()?;
        cur.eat("out")?;
        let outputs = cur.name_list()?;
        cur.skip_ws();
        if cur.pos != header.len() {
            return Err(syntax(line, "unexpected text before '{'"));
        }
        if self.gates.iter().any(|g| g.name == name) {
            return Err(err(line, ParseErrorKind::DuplicateGate(name)));
        }
        let mut seen: Vec<&str> = Vec::new();
        for n in inputs.iter().chain(&outputs) {
            self.require_node(line, n)?;
            if seen.contains(n) {
                return Err(err(
                    line,
                    ParseErrorKind::RepeatedGateNode {
                        gate: name,
                        node: n.to_string(),
                    },
                ));
            }
            seen.push(n);
        }
        let (ia, oa) = (inputs.len(), outputs.len());
        let mut parsed: Vec<(u64, u64)> = Vec::new();
        for (row_line, text) in rows {
            let (i, o) = text
                .split_once("->")
                .ok_or_else(|| syntax(*row_line, format!("row {text:?} needs '->'")))?;
            let (i, o) = (i.trim(), o.trim());
            let bits = |s: &str| -> Result<Vec<bool>> {
                s.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(syntax(*row_line, format!("row {text:?} is not binary"))),
                    })
                    .collect()
            };
            let (ib, ob) = (bits(i)?, bits(o)?);
            if ib.len() != ia || ob.len() != oa {
                return Err(err(
                    *row_line,
                    ParseErrorKind::ArityMismatch {
                        gate: name,
                        detail: format!(
                            "row {text:?} has {}->{} bits, gate has {ia}->{oa} nodes",
                            ib.len(),
                            ob.len()
                        ),
                    },
                ));
            }
            let ip = pack(&ib);
            if parsed.iter().any(|&(p, _)| p == ip) {
                return Err(err(
                    *row_line,
                    ParseErrorKind::DuplicatePattern {
                        gate: name,
                        pattern: pattern_string(ip, ia),
                    },
                ));
            }
            parsed.push((ip, pack(&ob)));
        }
        if parsed.is_empty() {
            return Err(err(line, ParseErrorKind::EmptyTable(name)));
        }
        let table = TruthTable::new(ia, oa, parsed).map_err(|e| syntax(line, e.to_string()))?;
        self.gates.push(Gate::new(name, &inputs, &outputs, table));
        Ok(())
    }

    fn link_stmt(&mut self, line: usize, rest: &str) -> Result<()> {
        let (from, to) = rest
            .split_once("->")
            .ok_or_else(|| syntax(line, "expected 'link <from> -> <to>'"))?;
        let (from, to) = (from.trim(), to.trim());
        if !is_ident(from) || !is_ident(to) {
            return Err(syntax(line, "expected 'link <from> -> <to>'"));
        }
        self.require_node(line, from)?;
        self.require_node(line, to)?;
        if from == to {
            return Err(err(
                line,
                ParseErrorKind::RepeatedGateNode {
                    gate: link_name(from, to),
                    node: from.to_string(),
                },
            ));
        }
        let name = link_name(from, to);
        if self.gates.iter().any(|g| g.name == name) {
            return Err(err(line, ParseErrorKind::DuplicateGate(name)));
        }
        self.gates.push(Gate::link(from, to));
        Ok(())
    }

    fn fix_stmt(&mut self, line: usize, rest: &str) -> Result<()> {
        let (node, rhs) = rest
            .split_once('=')
            .ok_or_else(|| syntax(line, "expected 'fix <node>=<0|1> [input|output]'"))?;
        let node = node.trim();
        if !is_ident(node) {
            return Err(syntax(line, format!("invalid node name {node:?}")));
        }
        let mut words = rhs.split_whitespace();
        let value = match words.next() {
            Some("0") => false,
            Some("1") => true,
            Some(other) => return Err(err(line, ParseErrorKind::PinValue(other.to_string()))),
            None => return Err(err(line, ParseErrorKind::PinValue(String::new()))),
        };
        let kind = match words.next() {
            None => None,
            Some("input") => Some(PinKind::Input),
            Some("output") => Some(PinKind::Output),
            Some(other) => return Err(syntax(line, format!("unknown pin kind {other:?}"))),
        };
        if words.next().is_some() {
            return Err(syntax(line, "trailing text after pin"));
        }
        self.require_node(line, node)?;
        if self.pins.iter().any(|p| p.node == node) {
            return Err(err(line, ParseErrorKind::MultiplePins(node.to_string())));
        }
        self.pins.push(PendingPin {
            line,
            node: node.to_string(),
            value,
            kind,
        });
        Ok(())
    }

    fn drive_stmt(&mut self, line: usize, rest: &str) -> Result<()> {
        let node = rest.trim();
        if !is_ident(node) {
            return Err(syntax(line, "expected 'drive <node>'"));
        }
        self.require_node(line, node)?;
        if self.drive.is_some() {
            return Err(err(line, ParseErrorKind::MultipleDrives));
        }
        self.drive = Some((line, node.to_string()));
        Ok(())
    }

    fn finish(self) -> Result<Network> {
        let is_gate_output = |n: &str| self.gates.iter().any(|g| g.outputs.iter().any(|o| o == n));
        let pins: Vec<Pin> = self
            .pins
            .iter()
            .map(|p| Pin {
                node: p.node.clone(),
                value: p.value,
                kind: p.kind.unwrap_or(if is_gate_output(&p.node) {
                    PinKind::Output
                } else {
                    PinKind::Input
                }),
            })
            .collect();
        if let Some((line, d)) = &self.drive {
            if !pins.iter().any(|p| &p.node == d && p.kind == PinKind::Output) {
                return Err(err(*line, ParseErrorKind::DriveWithoutOutputPin(d.clone())));
            }
        }
        let last_line = self.pins.iter().map(|p| p.line).max().unwrap_or(1);
        let nodes = NodeOrder::new(self.nodes).map_err(|e| syntax(last_line, e.to_string()))?;
        Network::new(nodes, self.gates, pins, self.drive.map(|(_, d)| d))
    }
}

/// Parses the network DSL. Errors carry 1-based line numbers.
pub fn parse_network(text: &str) -> Result<Network> {
    let mut b = Builder::default();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l)));
    while let Some((line, raw)) = lines.next() {
        let stmt = raw.trim();
        if stmt.is_empty() {
            continue;
        }
        let (keyword, rest) = stmt
            .split_once(char::is_whitespace)
            .unwrap_or((stmt, ""));
        match keyword {
            "nodes" => b.nodes_stmt(line, rest)?,
            "link" => b.link_stmt(line, rest)?,
            "fix" => b.fix_stmt(line, rest)?,
            "drive" => b.drive_stmt(line, rest)?,
            "gate" => {
                let (header, body) = rest
                    .split_once('{')
                    .ok_or_else(|| syntax(line, "gate needs a '{ ... }' table"))?;
                let mut chunks: Vec<(usize, String)> = Vec::new();
                let mut closed = false;
                let push_chunk = |ln: usize, s: &str, chunks: &mut Vec<(usize, String)>| -> Result<bool> {
                    match s.split_once('}') {
                        Some((inside, after)) => {
                            if !after.trim().is_empty() {
                                return Err(syntax(ln, "unexpected text after '}'"));
                            }
                            chunks.push((ln, inside.to_string()));
                            Ok(true)
                        }
                        None => {
                            chunks.push((ln, s.to_string()));
                            Ok(false)
                        }
                    }
                };
                if push_chunk(line, body, &mut chunks)? {
                    closed = true;
                }
                while !closed {
                    match lines.next() {
                        Some((ln, more)) => {
                            if push_chunk(ln, more, &mut chunks)? {
                                closed = true;
                            }
                        }
                        None => return Err(syntax(line, "unterminated gate table")),
                    }
                }
                let rows: Vec<(usize, String)> = chunks
                    .iter()
                    .flat_map(|(ln, s)| {
                        s.split(';')
                            .map(str::trim)
                            .filter(|r| !r.is_empty())
                            .map(move |r| (*ln, r.to_string()))
                    })
                    .collect();
                b.gate_stmt(line, header.trim(), &rows)?;
            }
            other => return Err(syntax(line, format!("unknown statement {other:?}"))),
        }
    }
    b.finish()
}

pub(super) fn render(net: &Network) -> String {
    let mut out = String::new();
    out.push_str("nodes ");
    out.push_str(&net.nodes().names().join(" "));
    out.push('\n');
    for g in net.gates() {
        if g.is_link_sugar() {
            out.push_str(&format!("link {} -> {}\n", g.inputs[0], g.outputs[0]));
            continue;
        }
        let rows: Vec<String> = g
            .table
            .rows()
            .map(|(i, o)| {
                format!(
                    "{}->{}",
                    pattern_string(i, g.table.in_arity()),
                    pattern_string(o, g.table.out_arity())
                )
            })
            .collect();
        out.push_str(&format!(
            "gate {} in({}) out({}) {{ {} }}\n",
            g.name,
            g.inputs.join(","),
            g.outputs.join(","),
            rows.join("; ")
        ));
    }
    for p in net.pins() {
        out.push_str(&format!("fix {}={} {}\n", p.node, u8::from(p.value), p.kind));
    }
    if let Some(d) = net.drive_node() {
        out.push_str(&format!("drive {d}\n"));
    }
    out
}

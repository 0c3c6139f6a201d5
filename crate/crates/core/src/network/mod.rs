//! Boolean networks: gates with truth tables, pins, and a drive node.
//!
//! Links (inverting wires) are ordinary two-node gates with the table
//! `{0->1, 1->0}`; the DSL's `link` statement is sugar for one.

mod dsl;

use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hilbert::{Assignment, NodeOrder};

pub use dsl::parse_network;

/// Default cap on node count for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 24;

/// Packs a bit slice into an integer, first bit most significant.
pub(crate) fn pack(bits: &[bool]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
}

pub(crate) fn pattern_string(pattern: u64, width: usize) -> String {
    (0..width)
        .map(|i| if (pattern >> (width - 1 - i)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// A gate's truth table: a partial function from input patterns to output
/// patterns. Patterns are packed with the gate's first listed node as the
/// most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    in_arity: usize,
    out_arity: usize,
    rows: BTreeMap<u64, u64>,
}

impl TruthTable {
    pub fn new<I>(in_arity: usize, out_arity: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut map = BTreeMap::new();
        for (i, o) in rows {
            if in_arity < 64 && i >> in_arity != 0 || out_arity < 64 && o >> out_arity != 0 {
                return Err(Error::InvalidNetwork(format!(
                    "row {i}->{o} exceeds arity {in_arity}/{out_arity}"
                )));
            }
            if map.insert(i, o).is_some() {
                return Err(Error::InvalidNetwork(format!(
                    "input pattern {} listed twice",
                    pattern_string(i, in_arity)
                )));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidNetwork("empty truth table".into()));
        }
        Ok(TruthTable {
            in_arity,
            out_arity,
            rows: map,
        })
    }

    /// Builds a table from `"in->out"` bitstring rows.
    pub fn from_strs(rows: &[(&str, &str)]) -> Result<Self> {
        let (first_in, first_out) = rows
            .first()
            .ok_or_else(|| Error::InvalidNetwork("empty truth table".into()))?;
        let (ia, oa) = (first_in.len(), first_out.len());
        let parsed = rows
            .iter()
            .map(|(i, o)| {
                let ib: Assignment = i.parse()?;
                let ob: Assignment = o.parse()?;
                if ib.len() != ia || ob.len() != oa {
                    return Err(Error::InvalidNetwork(format!("row {i}->{o} has wrong arity")));
                }
                Ok((pack(ib.bits()), pack(ob.bits())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ia, oa, parsed)
    }

    pub fn not() -> Self {
        Self::new(1, 1, [(0, 1), (1, 0)]).expect("static table")
    }

    pub fn in_arity(&self) -> usize {
        self.in_arity
    }

    pub fn out_arity(&self) -> usize {
        self.out_arity
    }

    pub fn rows(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.rows.iter().map(|(&i, &o)| (i, o))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn output_for(&self, input: u64) -> Option<u64> {
        self.rows.get(&input).copied()
    }

    pub fn contains(&self, input: u64, output: u64) -> bool {
        self.output_for(input) == Some(output)
    }

    /// True when every input pattern has a row.
    pub fn is_total(&self) -> bool {
        self.rows.len() as u128 == 1u128 << self.in_arity
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub table: TruthTable,
}

impl Gate {
    pub fn new(
        name: impl Into<String>,
        inputs: &[&str],
        outputs: &[&str],
        table: TruthTable,
    ) -> Self {
        Gate {
            name: name.into(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
            table,
        }
    }

    /// An inverting wire `from -> to`.
    pub fn link(from: &str, to: &str) -> Self {
        Gate::new(link_name(from, to), &[from], &[to], TruthTable::not())
    }

    /// Input nodes followed by output nodes.
    pub fn nodes(&self) -> impl Iterator<Item = &String> {
        self.inputs.iter().chain(&self.outputs)
    }

    pub fn arity(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    /// True if `(inputs ++ outputs)` packed as one pattern is a table row.
    pub fn accepts_local(&self, local: u64) -> bool {
        let out_bits = self.outputs.len();
        let input = local >> out_bits;
        let output = local & ((1u64 << out_bits) - 1);
        self.table.contains(input, output)
    }

    pub(crate) fn is_link_sugar(&self) -> bool {
        self.inputs.len() == 1
            && self.outputs.len() == 1
            && self.table == TruthTable::not()
            && self.name == link_name(&self.inputs[0], &self.outputs[0])
    }

    /// Output column equal to the parity of all inputs, if any; needs at
    /// least two inputs and a total table.
    pub fn parity_output(&self) -> Option<usize> {
        let ia = self.table.in_arity();
        if ia < 2 || !self.table.is_total() {
            return None;
        }
        let parity = |x: u64| (x.count_ones() & 1) as u64;
        let oa = self.table.out_arity();
        (0..oa).find(|&k| {
            let shift = oa - 1 - k;
            self.table.rows().all(|(i, o)| (o >> shift) & 1 == parity(i))
        })
    }

    /// Short description of the table's logic, used in reports.
    pub fn kind(&self) -> &'static str {
        if self.table == TruthTable::not() {
            "NOT"
        } else if self.parity_output().is_some() {
            "XOR-type"
        } else {
            "custom"
        }
    }
}

pub(crate) fn link_name(from: &str, to: &str) -> String {
    format!("link_{from}_{to}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PinKind {
    Input,
    Output,
}

impl fmt::Display for PinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PinKind::Input => "input",
            PinKind::Output => "output",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pin {
    pub node: String,
    pub value: bool,
    pub kind: PinKind,
}

impl Pin {
    pub fn new(node: &str, value: bool, kind: PinKind) -> Self {
        Pin {
            node: node.to_string(),
            value,
            kind,
        }
    }
}

/// Which pins a constraint check includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinSelection {
    None,
    InputsOnly,
    All,
}

impl PinSelection {
    pub fn includes(self, kind: PinKind) -> bool {
        match self {
            PinSelection::None => false,
            PinSelection::InputsOnly => kind == PinKind::Input,
            PinSelection::All => true,
        }
    }
}

/// A validated Boolean network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    nodes: NodeOrder,
    gates: Vec<Gate>,
    pins: Vec<Pin>,
    drive: Option<String>,
}

impl Network {
    pub fn new(
        nodes: NodeOrder,
        gates: Vec<Gate>,
        pins: Vec<Pin>,
        drive: Option<String>,
    ) -> Result<Self> {
        let declared = |n: &str| -> Result<()> {
            nodes.position(n).map(|_| ()).map_err(|_| {
                Error::InvalidNetwork(format!("node {n:?} is not declared"))
            })
        };
        for (gi, g) in gates.iter().enumerate() {
            if gates[..gi].iter().any(|o| o.name == g.name) {
                return Err(Error::InvalidNetwork(format!("duplicate gate {:?}", g.name)));
            }
            if g.inputs.len() != g.table.in_arity() || g.outputs.len() != g.table.out_arity() {
                return Err(Error::InvalidNetwork(format!(
                    "gate {:?} arity does not match its table",
                    g.name
                )));
            }
            let mut seen: Vec<&String> = Vec::new();
            for n in g.nodes() {
                declared(n)?;
                if seen.contains(&n) {
                    return Err(Error::InvalidNetwork(format!(
                        "gate {:?} uses node {n:?} more than once",
                        g.name
                    )));
                }
                seen.push(n);
            }
        }
        for (pi, p) in pins.iter().enumerate() {
            declared(&p.node)?;
            if pins[..pi].iter().any(|o| o.node == p.node) {
                return Err(Error::InvalidNetwork(format!(
                    "node {:?} is pinned more than once",
                    p.node
                )));
            }
        }
        if let Some(d) = &drive {
            declared(d)?;
            if !pins
                .iter()
                .any(|p| &p.node == d && p.kind == PinKind::Output)
            {
                return Err(Error::InvalidNetwork(format!(
                    "drive node {d:?} carries no output pin"
                )));
            }
        }
        Ok(Network {
            nodes,
            gates,
            pins,
            drive,
        })
    }

    pub fn nodes(&self) -> &NodeOrder {
        &self.nodes
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, name: &str) -> Option<&Gate> {
        self.gates.iter().find(|g| g.name == name)
    }

    pub fn pins(&self) -> &[Pin] {
        &self.pins
    }

    pub fn pin(&self, node: &str) -> Option<&Pin> {
        self.pins.iter().find(|p| p.node == node)
    }

    pub fn drive_node(&self) -> Option<&str> {
        self.drive.as_deref()
    }

    /// The output pin carried by the drive node.
    pub fn drive_pin(&self) -> Option<&Pin> {
        self.drive.as_deref().and_then(|d| self.pin(d))
    }

    pub fn dim(&self) -> usize {
        self.nodes.dim()
    }

    /// Copy with a different pin set; the drive node is kept only if it
    /// still carries an output pin.
    pub fn with_pins(&self, pins: Vec<Pin>) -> Result<Network> {
        let drive = self.drive.clone().filter(|d| {
            pins.iter()
                .any(|p| &p.node == d && p.kind == PinKind::Output)
        });
        Network::new(self.nodes.clone(), self.gates.clone(), pins, drive)
    }

    /// Copy with one gate replaced.
    pub fn with_gate_replaced(&self, name: &str, gate: Gate) -> Result<Network> {
        let gates = self
            .gates
            .iter()
            .map(|g| if g.name == name { gate.clone() } else { g.clone() })
            .collect();
        Network::new(self.nodes.clone(), gates, self.pins.clone(), self.drive.clone())
    }

    /// Canonical DSL text; [`parse_network`] reads it back to an equal value.
    pub fn to_dsl(&self) -> String {
        dsl::render(self)
    }

    /// SHA-256 of the canonical DSL text, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_dsl().as_bytes()))
    }

    /// Whether `assignment` satisfies every gate and, when `include_pins`,
    /// every pin.
    pub fn assignment_satisfies(&self, assignment: &Assignment, include_pins: bool) -> Result<bool> {
        let pins = if include_pins {
            PinSelection::All
        } else {
            PinSelection::None
        };
        Checker::new(self, pins).check(assignment)
    }

    /// Every satisfying assignment in ascending basis-index order.
    pub fn brute_force_solutions(&self, include_pins: bool) -> Result<Vec<Assignment>> {
        let pins = if include_pins {
            PinSelection::All
        } else {
            PinSelection::None
        };
        self.brute_force_with(pins, DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn brute_force_with(&self, pins: PinSelection, limit: usize) -> Result<Vec<Assignment>> {
        let n = self.nodes.len();
        if n > limit {
            return Err(Error::TooManyNodes { nodes: n, limit });
        }
        let checker = Checker::new(self, pins);
        let mut out = Vec::new();
        for k in 0..(1usize << n) {
            let a = Assignment::from_index(k, n);
            if checker.check(&a)? {
                out.push(a);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}

/// Gate and pin checks on assignment bits, with node positions resolved once.
struct Checker<'a> {
    n: usize,
    gates: Vec<(&'a TruthTable, Vec<usize>, Vec<usize>)>,
    pins: Vec<(usize, bool)>,
}

impl<'a> Checker<'a> {
    fn new(net: &'a Network, pins: PinSelection) -> Self {
        let pos = |n: &String| net.nodes.position(n).expect("validated network");
        Checker {
            n: net.nodes.len(),
            gates: net
                .gates
                .iter()
                .map(|g| {
                    (
                        &g.table,
                        g.inputs.iter().map(pos).collect(),
                        g.outputs.iter().map(pos).collect(),
                    )
                })
                .collect(),
            pins: net
                .pins
                .iter()
                .filter(|p| pins.includes(p.kind))
                .map(|p| (pos(&p.node), p.value))
                .collect(),
        }
    }

    fn check(&self, a: &Assignment) -> Result<bool> {
        if a.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: a.len(),
            });
        }
        let bits = a.bits();
        let gather = |idx: &[usize]| idx.iter().fold(0u64, |acc, &i| (acc << 1) | u64::from(bits[i]));
        let gates_ok = self
            .gates
            .iter()
            .all(|(t, ins, outs)| t.contains(gather(ins), gather(outs)));
        let pins_ok = self.pins.iter().all(|&(i, v)| bits[i] == v);
        Ok(gates_ok && pins_ok)
    }
}

fn fig1_gate_table() -> TruthTable {
    TruthTable::from_strs(&[("00", "00"), ("01", "01"), ("10", "11"), ("11", "10")])
        .expect("static table")
}

/// The eight-node network of the reference example: two invertible XOR
/// gates joined by an inverting wire, with `b = 1`, `f = 0` pinned on the
/// input side and `h = 1` on the output side.
pub fn builtin_fig1() -> Network {
    Network::new(
        NodeOrder::new(["a", "b", "c", "d", "e", "f", "g", "h"]).expect("static"),
        vec![
            Gate::new("gate1", &["a", "b"], &["c", "d"], fig1_gate_table()),
            Gate::link("d", "e"),
            Gate::new("gate3", &["e", "f"], &["g", "h"], fig1_gate_table()),
        ],
        vec![
            Pin::new("b", true, PinKind::Input),
            Pin::new("f", false, PinKind::Input),
            Pin::new("h", true, PinKind::Output),
        ],
        Some("h".into()),
    )
    .expect("static network")
}

/// `builtin_fig1` with an extra output pin `g = 0`, which makes it
/// unsatisfiable.
pub fn builtin_fig1_unsat() -> Network {
    builtin_fig1()
        .with_pins(vec![
            Pin::new("b", true, PinKind::Input),
            Pin::new("f", false, PinKind::Input),
            Pin::new("g", false, PinKind::Output),
            Pin::new("h", true, PinKind::Output),
        ])
        .expect("static network")
}

/// A single inverting wire `r -> s` with no pins.
pub fn builtin_link() -> Network {
    Network::new(
        NodeOrder::new(["r", "s"]).expect("static"),
        vec![Gate::link("r", "s")],
        vec![],
        None,
    )
    .expect("static network")
}

/// The three-qubit XOR gate `v = t xor u`.
pub fn builtin_xor() -> Network {
    Network::new(
        NodeOrder::new(["t", "u", "v"]).expect("static"),
        vec![Gate::new(
            "xor",
            &["t", "u"],
            &["v"],
            TruthTable::from_strs(&[("00", "0"), ("01", "1"), ("10", "1"), ("11", "0")])
                .expect("static"),
        )],
        vec![],
        None,
    )
    .expect("static network")
}

pub const BUILTIN_NAMES: [&str; 4] = ["fig1", "fig1-unsat", "link", "xor"];

pub fn builtin(name: &str) -> Option<Network> {
    match name {
        "fig1" => Some(builtin_fig1()),
        "fig1-unsat" => Some(builtin_fig1_unsat()),
        "link" => Some(builtin_link()),
        "xor" => Some(builtin_xor()),
        _ => None,
    }
}

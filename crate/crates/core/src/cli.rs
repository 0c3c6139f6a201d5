//! Command-line front end. The binary only forwards to [`main_with_args`].

use std::ffi::OsString;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dynamics::{
    closed_form_link, closed_form_triplet, evolve, triplet_watchdog, DriveSchedule, LeakModel, Trajectory,
    TripletDrive, TripletRule, WatchdogConfig,
};
use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use crate::network::{builtin, builtin_link, parse_network, Network, PinSelection, BUILTIN_NAMES};
use crate::protocol::{drive_network, run_protocol, Decision, ProtocolConfig, DEFAULT_CONFIDENCE, DEFAULT_MIN_SUCCESS_PROB};
use crate::statics::{constraint_mask, network_hamiltonian, ConstraintMask, EnergyParams, PenaltyHamiltonian};

pub const SEED_ENV: &str = "STATNET_SEED";

#[derive(Debug, Parser)]
#[command(name = "statnet", version, about = "Boolean networks as constrained qubit registers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summarize a network: nodes, gates, pins, mask sizes, gate subspaces.
    Check(CommonArgs),
    /// List every assignment satisfying all gates and pins.
    SolveBrute(CommonArgs),
    /// Watchdog evolution of the two-node link against its closed form.
    SimulateLink(SimArgs),
    /// Two particles watched by the symmetrizer against their closed form.
    SimulateTriplet(TripletArgs),
    /// Watchdog evolution of a network's drive node from its preparation.
    SimulateNetwork(CommonArgs),
    /// Prepare, drive, measure and check over several shots.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LeakArg {
    None,
    UniformExcited,
}

impl From<LeakArg> for LeakModel {
    fn from(l: LeakArg) -> Self {
        match l {
            LeakArg::None => LeakModel::None,
            LeakArg::UniformExcited => LeakModel::UniformExcited,
        }
    }
}

/// Flags shared by every command. Each command reads the ones it needs.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// DSL file or builtin name: fig1, fig1-unsat, link, xor [default: fig1, or link for simulate-link].
    #[arg(long)]
    pub network: Option<String>,
    /// Step size [default: tau / 1000].
    #[arg(long)]
    pub dt: Option<f64>,
    /// Total duration of the drive.
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// linear, cosine-ramp or exponential-relax.
    #[arg(long, default_value = "linear")]
    pub schedule: String,
    /// Initial drive angle [default: pi/6 for simulate-link/-triplet, the prepared angle otherwise].
    #[arg(long)]
    pub theta: Option<f64>,
    /// Measurement rounds (run).
    #[arg(long, default_value_t = 100)]
    pub shots: u64,
    /// Base seed (run); the STATNET_SEED environment variable takes precedence.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = LeakArg::None)]
    pub leak: LeakArg,
    /// Trace format for simulate commands; run always writes JSON.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Drop the constraint projector from the dynamics.
    #[arg(long)]
    pub no_mask: bool,
    /// Write masks and Hamiltonian diagonals as JSON to this path (check).
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

impl CommonArgs {
    fn network_or(&self, default: &str) -> Result<(String, Network)> {
        let name = self.network.clone().unwrap_or_else(|| default.to_string());
        let net = load_network(&name)?;
        Ok((name, net))
    }

    fn dt(&self) -> f64 {
        self.dt.unwrap_or(self.tau * 1e-3)
    }

    fn schedule(&self, theta: f64, phi_final: f64) -> Result<DriveSchedule> {
        DriveSchedule::new(self.schedule.parse()?, theta, phi_final, self.tau, self.dt())
    }

    fn protocol_config(&self) -> Result<ProtocolConfig> {
        Ok(ProtocolConfig {
            kind: self.schedule.parse()?,
            tau: self.tau,
            dt: self.dt(),
            leak: self.leak.into(),
            theta: self.theta,
            no_mask: self.no_mask,
            ..ProtocolConfig::default()
        })
    }
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Total rotation [default: pi/2 - theta].
    #[arg(long)]
    pub phi_final: Option<f64>,
    /// Exit with status 1 if the largest closed-form deviation exceeds this.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DriveArg {
    Particle1,
    Particle2,
    Both,
}

#[derive(Debug, Args)]
pub struct TripletArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// Which particle's diagonal is driven.
    #[arg(long, value_enum, default_value_t = DriveArg::Particle1)]
    pub drive: DriveArg,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Assumed per-shot success probability behind the unsatisfiable verdict.
    #[arg(long, default_value_t = DEFAULT_MIN_SUCCESS_PROB)]
    pub min_success_prob: f64,
    /// Confidence needed to report unsatisfiable rather than inconclusive.
    #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
    pub confidence: f64,
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            code
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a, out),
        Command::SolveBrute(a) => cmd_solve_brute(a, out),
        Command::SimulateLink(a) => cmd_simulate_link(a, out, err),
        Command::SimulateTriplet(a) => cmd_simulate_triplet(a, out, err),
        Command::SimulateNetwork(a) => cmd_simulate_network(a, out, err),
        Command::Run(a) => cmd_run(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// A builtin name or a path to a DSL file.
pub fn load_network(spec: &str) -> Result<Network> {
    if let Some(net) = builtin(spec) {
        return Ok(net);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| {
        Error::Io(format!(
            "{spec}: {e} (builtins: {})",
            BUILTIN_NAMES.join(", ")
        ))
    })?;
    parse_network(&text)
}

fn emit(path: &Option<PathBuf>, out: &mut dyn Write, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn join(names: &[String]) -> String {
    names.join(",")
}

/// Text report for `check`.
pub fn check_report(name: &str, net: &Network) -> Result<String> {
    let mut s = String::new();
    let nodes = net.nodes().names();
    let _ = writeln!(s, "network: {name}");
    let _ = writeln!(s, "nodes: {} ({})", nodes.len(), nodes.join(" "));
    let _ = writeln!(s, "gates: {}", net.gates().len());
    for g in net.gates() {
        let _ = writeln!(
            s,
            "  {} ({}) in({}) out({}) rows={}",
            g.name,
            g.kind(),
            join(&g.inputs),
            join(&g.outputs),
            g.table.len()
        );
    }
    let pins: Vec<String> = net.pins().iter().map(|p| format!("{}={} {}", p.node, u8::from(p.value), p.kind)).collect();
    let _ = writeln!(s, "pins: {}", if pins.is_empty() { "(none)".into() } else { pins.join(", ") });
    let _ = writeln!(s, "drive: {}", net.drive_node().unwrap_or("(none)"));
    let inputs_only = constraint_mask(net, PinSelection::InputsOnly).count_ones();
    let all = constraint_mask(net, PinSelection::All).count_ones();
    let _ = writeln!(s, "mask support without output pins: {inputs_only}");
    let _ = writeln!(s, "mask support with all pins: {all}");
    let _ = writeln!(s, "solutions with all pins: {}", net.brute_force_solutions(true)?.len());
    for g in net.gates() {
        let k = g.arity();
        let rank = (0..1u64 << k).filter(|&p| g.accepts_local(p)).count();
        match g.parity_output() {
            Some(col) if g.outputs.len() > 1 => {
                let _ = writeln!(s, "{}: gate subspace dim: {rank} of {}", g.name, 1u64 << k);
                // the gate restricted to its inputs and parity output
                let oa = g.outputs.len();
                let mut core: Vec<(u64, u64)> = g
                    .table
                    .rows()
                    .map(|(i, o)| (i, (o >> (oa - 1 - col)) & 1))
                    .collect();
                core.sort_unstable();
                core.dedup();
                let _ = writeln!(
                    s,
                    "{}: XOR-type gate subspace dim: {} of {} ({} -> {})",
                    g.name,
                    core.len(),
                    1u64 << (g.inputs.len() + 1),
                    join(&g.inputs),
                    g.outputs[col]
                );
            }
            _ => {
                let _ = writeln!(s, "{}: {} gate subspace dim: {rank} of {}", g.name, g.kind(), 1u64 << k);
            }
        }
    }
    Ok(s)
}

#[derive(Serialize)]
struct Dump<'a> {
    nodes: &'a [String],
    masks: Vec<MaskDump>,
    hamiltonian: HamDump<'a>,
}

#[derive(Serialize)]
struct MaskDump {
    label: String,
    support: Vec<usize>,
}

#[derive(Serialize)]
struct HamDump<'a> {
    label: &'a str,
    params: &'a std::collections::BTreeMap<String, f64>,
    diagonal: &'a [f64],
}

fn mask_dump(m: &ConstraintMask) -> MaskDump {
    MaskDump {
        label: m.label().to_string(),
        support: m.support(),
    }
}

fn cmd_check(a: &CommonArgs, out: &mut dyn Write) -> Result<i32> {
    let (name, net) = a.network_or("fig1")?;
    let report = check_report(&name, &net)?;
    emit(&a.out, out, &report)?;
    if let Some(path) = &a.dump {
        let mut masks: Vec<MaskDump> = net
            .gates()
            .iter()
            .map(|g| mask_dump(&crate::statics::gate_mask(&net, g)))
            .collect();
        masks.extend(net.pins().iter().map(|p| mask_dump(&crate::statics::pin_mask(&net, p))));
        masks.push(mask_dump(&constraint_mask(&net, PinSelection::InputsOnly).relabel("network_inputs_only")));
        masks.push(mask_dump(&constraint_mask(&net, PinSelection::All).relabel("network_all_pins")));
        let h = network_hamiltonian(&net, &EnergyParams::default(), PinSelection::All)?;
        let dump = Dump {
            nodes: net.nodes().names(),
            masks,
            hamiltonian: HamDump {
                label: h.label(),
                params: h.params(),
                diagonal: h.energies(),
            },
        };
        let text = serde_json::to_string_pretty(&dump).map_err(|e| Error::Io(e.to_string()))? + "\n";
        std::fs::write(path, text)?;
    }
    Ok(0)
}

fn cmd_solve_brute(a: &CommonArgs, out: &mut dyn Write) -> Result<i32> {
    let (_, net) = a.network_or("fig1")?;
    let sols = net.brute_force_solutions(true)?;
    let text = if sols.is_empty() {
        "(none)\n".to_string()
    } else {
        sols.iter().map(|s| format!("{s}\n")).collect()
    };
    emit(&a.out, out, &text)?;
    Ok(if sols.is_empty() { 1 } else { 0 })
}

/// One trace row; `deviation` only for traces with a closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub phi: f64,
    pub p0: f64,
    pub p1: f64,
    pub alpha_sq: f64,
    pub beta_sq: f64,
    pub energy: f64,
    pub step_overlap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation_from_closed_form: Option<f64>,
}

pub fn trace_rows(tr: &Trajectory, closed: Option<&dyn Fn(f64) -> StateVector>) -> Result<Vec<TraceRow>> {
    tr.points
        .iter()
        .map(|p| {
            let deviation = match closed {
                Some(f) => Some(p.state.max_abs_diff(&f(p.phi))?),
                None => None,
            };
            Ok(TraceRow {
                t: p.t,
                phi: p.phi,
                p0: p.p0,
                p1: p.p1,
                alpha_sq: p.alpha_sq,
                beta_sq: p.beta_sq,
                energy: p.energy,
                step_overlap: p.step_overlap,
                deviation_from_closed_form: deviation,
            })
        })
        .collect()
}

/// CSV with a header line, `{:.16e}` floats and `\n` line endings.
pub fn rows_to_csv(rows: &[TraceRow]) -> String {
    let with_dev = rows.first().is_some_and(|r| r.deviation_from_closed_form.is_some());
    let mut s = String::from("t,phi,p0,p1,alpha_sq,beta_sq,energy,step_overlap");
    if with_dev {
        s.push_str(",deviation_from_closed_form");
    }
    s.push('\n');
    for r in rows {
        let vals = [r.t, r.phi, r.p0, r.p1, r.alpha_sq, r.beta_sq, r.energy, r.step_overlap];
        let cells: Vec<String> = vals
            .iter()
            .chain(r.deviation_from_closed_form.iter())
            .map(|v| format!("{v:.16e}"))
            .collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn render_rows(rows: &[TraceRow], format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => rows_to_csv(rows),
        Format::Json => serde_json::to_string_pretty(rows).map_err(|e| Error::Io(e.to_string()))? + "\n",
    })
}

fn finish_trace(
    rows: &[TraceRow],
    common: &CommonArgs,
    tolerance: Option<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let format = common.format.unwrap_or(Format::Csv);
    emit(&common.out, out, &render_rows(rows, format)?)?;
    let max_dev = rows
        .iter()
        .filter_map(|r| r.deviation_from_closed_form)
        .fold(0.0, f64::max);
    if let Some(path) = &common.out {
        writeln!(out, "wrote {} rows to {}; max deviation {max_dev:.3e}", rows.len(), path.display())?;
    }
    match tolerance {
        Some(tol) if max_dev > tol => {
            writeln!(err, "max deviation {max_dev:.3e} exceeds tolerance {tol:.3e}")?;
            Ok(1)
        }
        _ => Ok(0),
    }
}

fn angles(a: &SimArgs) -> (f64, f64) {
    let theta = a.common.theta.unwrap_or(PI / 6.0);
    (theta, a.phi_final.unwrap_or(FRAC_PI_2 - theta))
}

/// Link watchdog trajectory, optionally without the constraint projector.
pub fn simulate_link(schedule: &DriveSchedule, no_mask: bool, leak: LeakModel) -> Result<Trajectory> {
    let net = builtin_link();
    let mask = constraint_mask(&net, PinSelection::All);
    let config = if no_mask {
        let h = PenaltyHamiltonian::from_mask(&mask, 1.0)?;
        WatchdogConfig::new(ConstraintMask::all_ones(4, "none"), "r").hamiltonian(h)
    } else {
        WatchdogConfig::new(mask, "r")
    };
    evolve(&closed_form_link(schedule.theta0, 0.0), &config.leak(leak), schedule)
}

fn cmd_simulate_link(a: &SimArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let c = &a.common;
    let (name, net) = c.network_or("link")?;
    let link_mask = constraint_mask(&builtin_link(), PinSelection::All);
    if net.dim() != 4 || constraint_mask(&net, PinSelection::All).bits() != link_mask.bits() {
        return Err(Error::InvalidArgument(format!("{name} is not a two-node link")));
    }
    let (theta, phi_final) = angles(a);
    let schedule = c.schedule(theta, phi_final)?;
    let tr = simulate_link(&schedule, c.no_mask, c.leak.into())?;
    let closed = |phi: f64| closed_form_link(theta, phi);
    let rows = trace_rows(&tr, Some(&closed))?;
    finish_trace(&rows, c, a.tolerance, out, err)
}

fn cmd_simulate_triplet(a: &TripletArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (theta, phi_final) = angles(&a.sim);
    let schedule = a.sim.common.schedule(theta, phi_final)?;
    let drive = match a.drive {
        DriveArg::Particle1 => TripletDrive::Particle1,
        DriveArg::Particle2 => TripletDrive::Particle2,
        DriveArg::Both => TripletDrive::Both,
    };
    let tr = triplet_watchdog(&schedule, drive, TripletRule::ContinuousLimit)?;
    let closed = |phi: f64| closed_form_triplet(theta, phi);
    let rows = trace_rows(&tr, Some(&closed))?;
    finish_trace(&rows, &a.sim.common, a.sim.tolerance, out, err)
}

fn cmd_simulate_network(a: &CommonArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (_, net) = a.network_or("fig1")?;
    let (_, tr) = drive_network(&net, &a.protocol_config()?)?;
    let rows = trace_rows(&tr, None)?;
    finish_trace(&rows, a, None, out, err)
}

/// `STATNET_SEED` if set, else the flag.
pub fn effective_seed(flag: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn cmd_run(a: &RunArgs, out: &mut dyn Write) -> Result<i32> {
    let c = &a.common;
    if c.format == Some(Format::Csv) {
        return Err(Error::InvalidArgument("run writes JSON only".into()));
    }
    let (_, net) = c.network_or("fig1")?;
    let seed = effective_seed(c.seed)?;
    let config = ProtocolConfig {
        min_success_prob: a.min_success_prob,
        confidence_target: a.confidence,
        ..c.protocol_config()?
    };
    let result = run_protocol(&net, &config, c.shots, seed)?;
    let text = serde_json::to_string_pretty(&result).map_err(|e| Error::Io(e.to_string()))? + "\n";
    emit(&c.out, out, &text)?;
    if c.out.is_some() {
        writeln!(out, "{}: {} of {} samples are solutions", result.decision, result.n_solutions, result.shots)?;
    }
    Ok(match result.decision {
        Decision::Satisfiable => 0,
        Decision::Unsatisfiable | Decision::Inconclusive => 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(std::iter::once("statnet").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn check_fig1() {
        let (code, out, _) = run(&["check", "--network", "fig1"]);
        assert_eq!(code, 0);
        assert!(out.contains("solutions with all pins: 1\n"));
        assert!(out.contains("gate1: XOR-type gate subspace dim: 4 of 8 (a,b -> d)"));
        assert!(out.contains("link_d_e: NOT gate subspace dim: 2 of 4"));
    }

    #[test]
    fn check_xor() {
        let (code, out, _) = run(&["check", "--network", "xor"]);
        assert_eq!(code, 0);
        assert!(out.contains("xor: XOR-type gate subspace dim: 4 of 8\n"));
    }

    #[test]
    fn solve_brute_codes() {
        assert_eq!(run(&["solve-brute", "--network", "fig1"]), (0, "11101011\n".into(), String::new()));
        assert_eq!(run(&["solve-brute", "--network", "fig1-unsat"]).0, 1);
        assert_eq!(run(&["solve-brute", "--network", "/nonexistent/x.net"]).0, 2);
        assert_eq!(run(&["solve-brute", "--bogus"]).0, 2);
    }

    #[test]
    fn csv_header() {
        let (code, out, _) = run(&["simulate-link", "--dt", "0.25"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,phi,p0,p1,alpha_sq,beta_sq,energy,step_overlap,deviation_from_closed_form"
        );
        assert_eq!(lines.count(), 5);
    }

    #[test]
    fn bad_schedule_is_error() {
        assert_eq!(run(&["simulate-link", "--dt", "0.3"]).0, 2);
        assert_eq!(run(&["simulate-link", "--schedule", "zigzag"]).0, 2);
    }
}

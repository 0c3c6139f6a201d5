//! Prepare, drive, measure, check, repeat.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::dynamics::{evolve, DriveSchedule, LeakModel, ScheduleKind, Trajectory, WatchdogConfig};
use crate::error::{Error, Result};
use crate::hilbert::{Assignment, StateVector};
use crate::network::{Network, PinSelection};
use crate::statics::{constraint_mask, ConstraintMask, PenaltyHamiltonian};

pub const DEFAULT_MIN_SUCCESS_PROB: f64 = 0.5;
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

/// Ground state of the gates and input pins, output pins left free.
#[derive(Debug, Clone, PartialEq)]
pub struct Preparation {
    pub state: StateVector,
    /// Satisfying assignments with drive node 0 and 1. Without a drive node
    /// everything counts as sector 0.
    pub n_sector0: usize,
    pub n_sector1: usize,
    /// `sin²θ` is the drive node's sector-1 mass.
    pub theta: f64,
}

/// Uniform, equal-phase superposition over assignments satisfying every gate
/// and every input pin.
pub fn prepare_ground(net: &Network) -> Result<Preparation> {
    prepare_weighted(net, |_| 1.0)
}

/// As [`prepare_ground`] with real amplitudes `weight(assignment)` before
/// normalization.
pub fn prepare_weighted(net: &Network, weight: impl Fn(&Assignment) -> f64) -> Result<Preparation> {
    let mask = constraint_mask(net, PinSelection::InputsOnly);
    let support = mask.support();
    if support.is_empty() {
        return Err(Error::Unpreparable);
    }
    let order = net.nodes().clone();
    let mut amps = vec![0.0; net.dim()];
    for &k in &support {
        let w = weight(&order.assignment(k));
        if !w.is_finite() {
            return Err(Error::InvalidArgument(format!("weight {w} is not finite")));
        }
        amps[k] = w;
    }
    let state = StateVector::from_real(order, &amps)?
        .normalize()
        .map_err(|_| Error::Unpreparable)?;
    let (n_sector0, n_sector1, p1) = match net.drive_node() {
        Some(z) => {
            let shift = net.nodes().shift(z)?;
            let n1 = support.iter().filter(|&&k| (k >> shift) & 1 == 1).count();
            (support.len() - n1, n1, state.reduced_diag(z)?.p1)
        }
        None => (support.len(), 0, 0.0),
    };
    Ok(Preparation {
        state,
        n_sector0,
        n_sector1,
        theta: p1.clamp(0.0, 1.0).sqrt().asin(),
    })
}

/// Preparation whose drive-node sector-1 mass is `sin²θ`, uniform within
/// each sector.
pub fn prepare_with_theta(net: &Network, theta: f64) -> Result<Preparation> {
    let z = net.drive_node().ok_or(Error::NoDriveNode)?;
    let uniform = prepare_ground(net)?;
    let pos = net.nodes().position(z)?;
    let (s, c) = theta.sin_cos();
    let (n0, n1) = (uniform.n_sector0, uniform.n_sector1);
    for (n, w, sector) in [(n0, c, 0u8), (n1, s, 1u8)] {
        if n == 0 && w.abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "theta = {theta} puts weight on drive sector {sector}, which has no prepared states"
            )));
        }
    }
    let w0 = if n0 > 0 { c.abs() / (n0 as f64).sqrt() } else { 0.0 };
    let w1 = if n1 > 0 { s.abs() / (n1 as f64).sqrt() } else { 0.0 };
    prepare_weighted(net, |a| if a.bits()[pos] { w1 } else { w0 })
}

/// Schedule and dynamics settings for a protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub kind: ScheduleKind,
    pub tau: f64,
    pub dt: f64,
    pub leak: LeakModel,
    /// Assumed per-shot chance of seeing a solution when one exists.
    pub min_success_prob: f64,
    /// Confidence needed to call a network unsatisfiable.
    pub confidence_target: f64,
    /// Start from [`prepare_with_theta`] instead of the uniform preparation.
    pub theta: Option<f64>,
    /// Drop the constraint projector from the dynamics.
    pub no_mask: bool,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            kind: ScheduleKind::LinearRamp,
            tau: 1.0,
            dt: 1e-3,
            leak: LeakModel::None,
            min_success_prob: DEFAULT_MIN_SUCCESS_PROB,
            confidence_target: DEFAULT_CONFIDENCE,
            theta: None,
            no_mask: false,
        }
    }
}

/// Drive from the prepared angle to the drive pin's value sector.
pub fn protocol_schedule(net: &Network, prep: &Preparation, config: &ProtocolConfig) -> Result<DriveSchedule> {
    let pin = net.drive_pin().ok_or(Error::NoDriveNode)?;
    let phi_final = if pin.value { FRAC_PI_2 - prep.theta } else { -prep.theta };
    DriveSchedule::new(config.kind, prep.theta, phi_final, config.tau, config.dt)
}

fn prepare(net: &Network, config: &ProtocolConfig) -> Result<Preparation> {
    match config.theta {
        Some(theta) => prepare_with_theta(net, theta),
        None => prepare_ground(net),
    }
}

/// Watchdog trajectory from the preparation, masked by gates and input pins.
pub fn drive_network(net: &Network, config: &ProtocolConfig) -> Result<(Preparation, Trajectory)> {
    let z = net.drive_node().ok_or(Error::NoDriveNode)?;
    let prep = prepare(net, config)?;
    let schedule = protocol_schedule(net, &prep, config)?;
    let mask = constraint_mask(net, PinSelection::InputsOnly);
    let wd = if config.no_mask {
        let h = PenaltyHamiltonian::from_mask(&mask, 1.0)?;
        WatchdogConfig::new(ConstraintMask::all_ones(net.dim(), "none"), z).hamiltonian(h)
    } else {
        WatchdogConfig::new(mask, z)
    };
    let tr = evolve(&prep.state, &wd.leak(config.leak), &schedule)?;
    Ok((prep, tr))
}

/// Per-shot generator: stream `shot` of the ChaCha20 generator keyed by `seed`.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Computational-basis measurement: index `k` with probability `|amps[k]|²`.
pub fn measure_sample(v: &StateVector, rng: &mut impl Rng) -> Assignment {
    let probs = v.probabilities();
    let total: f64 = probs.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last = k;
        acc += p;
        if u < acc {
            return v.order().assignment(k);
        }
    }
    v.order().assignment(last)
}

/// Drive the network once and measure.
pub fn run_once(net: &Network, config: &ProtocolConfig, rng: &mut impl Rng) -> Result<(StateVector, Assignment)> {
    let (_, tr) = drive_network(net, config)?;
    let state = tr.final_state().clone();
    let sample = measure_sample(&state, rng);
    Ok((state, sample))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Satisfiable,
    Unsatisfiable,
    Inconclusive,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Satisfiable => "satisfiable",
            Decision::Unsatisfiable => "unsatisfiable",
            Decision::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolResult {
    pub network_hash: String,
    pub shots: u64,
    pub seed: u64,
    pub schedule: Option<DriveSchedule>,
    pub decision: Decision,
    pub confidence: f64,
    pub n_solutions: u64,
    /// `None` for a shot whose dynamics failed.
    pub samples: Vec<Option<String>>,
    pub good_universe_prob_final: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// `shots` independent drive-and-measure rounds with offline checking.
///
/// The dynamics are deterministic, so the trajectory is computed once and
/// each shot only draws its own measurement. A degenerate trajectory counts
/// every shot as failed.
pub fn run_protocol(net: &Network, config: &ProtocolConfig, shots: u64, seed: u64) -> Result<ProtocolResult> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    check_prob("min_success_prob", config.min_success_prob, true)?;
    check_prob("confidence", config.confidence_target, false)?;
    net.drive_node().ok_or(Error::NoDriveNode)?;
    let prep = prepare(net, config)?;
    let schedule = protocol_schedule(net, &prep, config)?;

    let (samples, alpha, failure) = match drive_network(net, config) {
        Ok((_, tr)) => {
            let last = tr.points.last().expect("nonempty");
            let samples = (0..shots)
                .map(|shot| Some(measure_sample(&last.state, &mut shot_rng(seed, shot))))
                .collect::<Vec<_>>();
            (samples, Some(last.alpha_sq), None)
        }
        Err(e @ Error::DegenerateDynamics { .. }) => (vec![None; shots as usize], None, Some(e.to_string())),
        Err(e) => return Err(e),
    };

    let mut n_solutions = 0;
    for a in samples.iter().flatten() {
        if net.assignment_satisfies(a, true)? {
            n_solutions += 1;
        }
    }
    let (decision, confidence) = if n_solutions > 0 {
        (Decision::Satisfiable, 1.0)
    } else {
        let c = 1.0 - (1.0 - config.min_success_prob).powf(shots as f64);
        if c >= config.confidence_target {
            (Decision::Unsatisfiable, c)
        } else {
            (Decision::Inconclusive, c)
        }
    };
    Ok(ProtocolResult {
        network_hash: net.content_hash(),
        shots,
        seed,
        schedule: Some(schedule),
        decision,
        confidence,
        n_solutions,
        samples: samples.into_iter().map(|s| s.map(|a| a.to_string())).collect(),
        good_universe_prob_final: alpha,
        failure,
    })
}

fn check_prob(name: &str, p: f64, allow_one: bool) -> Result<()> {
    let ok = p > 0.0 && (p < 1.0 || (allow_one && p == 1.0));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} = {p} out of range")))
    }
}

/// Smallest `n` with `1 - (1 - p_good)^n ≥ confidence`.
pub fn repetition_bound(p_good: f64, confidence: f64) -> Result<u64> {
    check_prob("p_good", p_good, true)?;
    check_prob("confidence", confidence, false)?;
    if p_good == 1.0 {
        return Ok(1);
    }
    let reached = |n: u64| 1.0 - (1.0 - p_good).powf(n as f64) >= confidence;
    let mut n = ((1.0 - confidence).ln() / (1.0 - p_good).ln()).ceil().max(1.0) as u64;
    while !reached(n) {
        n += 1;
    }
    while n > 1 && reached(n - 1) {
        n -= 1;
    }
    Ok(n)
}

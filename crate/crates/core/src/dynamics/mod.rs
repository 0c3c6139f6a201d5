//! Watchdog evolution: a constrained register whose drive node follows a
//! prescribed rotation while staying as close as possible to its previous
//! state at every step.

mod triplet;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{NodeOrder, StateVector, C64};
use crate::statics::{ConstraintMask, PenaltyHamiltonian};

pub use triplet::{
    closed_form_triplet, singlet_amplitude, triplet_watchdog, triplet_watchdog_demo, zeno_variant,
    TripletDrive, TripletRule, TRIPLET_NODES,
};

/// Targets at or below this are treated as an empty sector.
pub const ZERO_TARGET: f64 = 1e-30;

/// Relative slack on `tau / dt` being an integer.
const GRID_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    #[serde(rename = "linear")]
    LinearRamp,
    CosineRamp,
    ExponentialRelax,
}

impl ScheduleKind {
    pub fn name(self) -> &'static str {
        match self {
            ScheduleKind::LinearRamp => "linear",
            ScheduleKind::CosineRamp => "cosine-ramp",
            ScheduleKind::ExponentialRelax => "exponential-relax",
        }
    }

    /// Fraction of the total rotation reached at `x = t / tau`.
    fn progress(self, x: f64) -> f64 {
        match self {
            ScheduleKind::LinearRamp => x,
            ScheduleKind::CosineRamp => (1.0 - (PI * x).cos()) / 2.0,
            ScheduleKind::ExponentialRelax => 1.0 - (-5.0 * x).exp(),
        }
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "linear-ramp" => Ok(ScheduleKind::LinearRamp),
            "cosine-ramp" | "cosine" => Ok(ScheduleKind::CosineRamp),
            "exponential-relax" | "exponential" => Ok(ScheduleKind::ExponentialRelax),
            _ => Err(Error::InvalidSchedule(format!("unknown schedule kind {s:?}"))),
        }
    }
}

/// Rotation `φ(t)` of the drive node away from its initial angle `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveSchedule {
    pub kind: ScheduleKind,
    pub theta0: f64,
    pub phi_final: f64,
    pub tau: f64,
    pub dt: f64,
    #[serde(skip)]
    steps: usize,
}

impl DriveSchedule {
    pub fn new(kind: ScheduleKind, theta0: f64, phi_final: f64, tau: f64, dt: f64) -> Result<Self> {
        for (name, v) in [("theta", theta0), ("phi_final", phi_final), ("tau", tau), ("dt", dt)] {
            if !v.is_finite() {
                return Err(Error::InvalidSchedule(format!("{name} is not finite")));
            }
        }
        if dt <= 0.0 {
            return Err(Error::InvalidSchedule(format!("dt = {dt} must be positive")));
        }
        if tau < dt * (1.0 - GRID_TOL) {
            return Err(Error::InvalidSchedule(format!("tau = {tau} is shorter than dt = {dt}")));
        }
        let ratio = tau / dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > GRID_TOL * ratio.max(1.0) {
            return Err(Error::InvalidSchedule(format!(
                "tau / dt = {ratio} is not an integer"
            )));
        }
        if steps > 1e8 {
            return Err(Error::InvalidSchedule(format!("{steps} steps is too many")));
        }
        Ok(DriveSchedule {
            kind,
            theta0,
            phi_final,
            tau,
            dt,
            steps: steps as usize,
        })
    }

    /// With `dt = tau / 1000`.
    pub fn with_default_dt(kind: ScheduleKind, theta0: f64, phi_final: f64, tau: f64) -> Result<Self> {
        Self::new(kind, theta0, phi_final, tau, tau * 1e-3)
    }

    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::new(self.kind, self.theta0, self.phi_final, self.tau, dt)
    }

    pub fn with_theta(&self, theta0: f64) -> Self {
        DriveSchedule { theta0, ..*self }
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Grid time `k · tau / N`; the last point is exactly `tau`.
    pub fn time(&self, k: usize) -> f64 {
        (k as f64 * self.tau) / self.steps as f64
    }

    pub fn phi(&self, t: f64) -> Result<f64> {
        let slack = GRID_TOL * self.tau;
        if !(t >= -slack && t <= self.tau + slack) {
            return Err(Error::InvalidArgument(format!(
                "t = {t} outside [0, {}]",
                self.tau
            )));
        }
        let x = (t / self.tau).clamp(0.0, 1.0);
        Ok(self.phi_final * self.kind.progress(x))
    }
}

/// Drive-node sector masses `(cos²[θ+φ(t)], sin²[θ+φ(t)])`.
pub fn schedule_targets(s: &DriveSchedule, t: f64) -> Result<(f64, f64)> {
    let a = s.theta0 + s.phi(t)?;
    Ok((a.cos().powi(2), a.sin().powi(2)))
}

/// What the step does when a sector must be populated but holds no
/// constraint-satisfying state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LeakModel {
    #[default]
    None,
    /// Put that sector's mass uniformly on its constraint-violating states.
    UniformExcited,
}

impl fmt::Display for LeakModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeakModel::None => "none",
            LeakModel::UniformExcited => "uniform-excited",
        })
    }
}

impl FromStr for LeakModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(LeakModel::None),
            "uniform-excited" => Ok(LeakModel::UniformExcited),
            _ => Err(Error::InvalidArgument(format!("unknown leak model {s:?}"))),
        }
    }
}

/// One step of the watchdog. The result lies in the mask's subspace (unless
/// the leak model had to place mass outside it), has drive-node sector
/// masses equal to `targets`, and within each sector is the positive
/// rescale of the projected previous state.
///
/// A [`Error::DegenerateDynamics`] raised here reports `t = 0`; [`evolve`]
/// fills in the grid time.
pub fn watchdog_step(
    prev: &StateVector,
    mask: &ConstraintMask,
    drive_node: &str,
    targets: (f64, f64),
    leak: LeakModel,
) -> Result<StateVector> {
    step_at(0.0, prev, mask, drive_node, targets, leak)
}

fn step_at(
    t: f64,
    prev: &StateVector,
    mask: &ConstraintMask,
    node: &str,
    (p0, p1): (f64, f64),
    leak: LeakModel,
) -> Result<StateVector> {
    if !(p0 >= 0.0 && p1 >= 0.0) || (p0 + p1 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "targets ({p0}, {p1}) are not a distribution"
        )));
    }
    let shift = prev.order().shift(node)?;
    let projected = prev.apply_mask(mask)?;
    let (c0, c1) = projected.sector_split(node)?;
    let mut amps = vec![C64::new(0.0, 0.0); prev.dim()];
    for (sector, c, p) in [(0u8, c0, p0), (1u8, c1, p1)] {
        if p <= ZERO_TARGET {
            continue;
        }
        let dir = sector_direction(&c, mask, shift, sector, leak).ok_or_else(|| Error::DegenerateDynamics {
            t,
            node: node.to_string(),
            sector,
        })?;
        let w = p.sqrt();
        for (a, d) in amps.iter_mut().zip(dir.amps()) {
            *a += d * w;
        }
    }
    StateVector::from_amplitudes(prev.order().clone(), amps)?.normalize()
}

/// Unit vector to scale by `√p` in one sector, or `None` if nothing is
/// admissible.
fn sector_direction(
    c: &StateVector,
    mask: &ConstraintMask,
    shift: usize,
    sector: u8,
    leak: LeakModel,
) -> Option<StateVector> {
    let n = c.norm();
    if n > 0.0 && n.is_finite() {
        return Some(c.scale(1.0 / n));
    }
    let in_sector = |k: usize| (k >> shift) & 1 == usize::from(sector);
    let inside: Vec<usize> = (0..mask.dim()).filter(|&k| in_sector(k) && mask.contains(k)).collect();
    if !inside.is_empty() {
        return StateVector::uniform(c.order().clone(), &inside).ok();
    }
    match leak {
        LeakModel::None => None,
        LeakModel::UniformExcited => {
            let outside: Vec<usize> = (0..mask.dim()).filter(|&k| in_sector(k) && !mask.contains(k)).collect();
            StateVector::uniform(c.order().clone(), &outside).ok()
        }
    }
}

/// Inputs to [`evolve`] besides the initial state and schedule.
#[derive(Debug, Clone)]
pub struct WatchdogConfig {
    pub mask: ConstraintMask,
    pub drive_node: String,
    pub leak: LeakModel,
    /// Used for the energy diagnostic; defaults to `1 - mask`.
    pub hamiltonian: Option<PenaltyHamiltonian>,
}

impl WatchdogConfig {
    pub fn new(mask: ConstraintMask, drive_node: impl Into<String>) -> Self {
        WatchdogConfig {
            mask,
            drive_node: drive_node.into(),
            leak: LeakModel::None,
            hamiltonian: None,
        }
    }

    pub fn leak(mut self, leak: LeakModel) -> Self {
        self.leak = leak;
        self
    }

    pub fn hamiltonian(mut self, h: PenaltyHamiltonian) -> Self {
        self.hamiltonian = Some(h);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub phi: f64,
    pub state: StateVector,
    pub p0: f64,
    pub p1: f64,
    /// Mass inside the constrained subspace.
    pub alpha_sq: f64,
    /// Mass outside it.
    pub beta_sq: f64,
    pub energy: f64,
    /// `|⟨Ψ(t)|Ψ(t−dt)⟩|`, 1 at `t = 0`.
    pub step_overlap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub schedule: DriveSchedule,
    pub points: Vec<TrajectoryPoint>,
    pub leak_model: LeakModel,
}

impl Trajectory {
    pub fn final_state(&self) -> &StateVector {
        &self.points.last().expect("trajectories are never empty").state
    }
}

/// Diagnostics recorded alongside each state.
pub(crate) struct PointProbe<'a> {
    pub node: &'a str,
    pub alpha_sq: &'a dyn Fn(&StateVector) -> f64,
    pub energy: &'a dyn Fn(&StateVector) -> Result<f64>,
}

pub(crate) fn make_point(
    probe: &PointProbe<'_>,
    t: f64,
    phi: f64,
    state: StateVector,
    prev: Option<&StateVector>,
) -> Result<TrajectoryPoint> {
    let d = state.reduced_diag(probe.node)?;
    let alpha_sq = (probe.alpha_sq)(&state).clamp(0.0, 1.0);
    let step_overlap = match prev {
        Some(p) => p.inner(&state)?.norm().min(1.0),
        None => 1.0,
    };
    Ok(TrajectoryPoint {
        t,
        phi,
        p0: d.p0,
        p1: d.p1,
        alpha_sq,
        beta_sq: 1.0 - alpha_sq,
        energy: (probe.energy)(&state)?,
        step_overlap,
        state,
    })
}

/// Repeated [`watchdog_step`] over the schedule's grid.
pub fn evolve(psi0: &StateVector, config: &WatchdogConfig, schedule: &DriveSchedule) -> Result<Trajectory> {
    let norm = psi0.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("initial state has norm {norm}")));
    }
    let mask = &config.mask;
    if mask.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            left: psi0.dim(),
            right: mask.dim(),
        });
    }
    psi0.order().shift(&config.drive_node)?;
    let default_h;
    let h = match &config.hamiltonian {
        Some(h) => h,
        None => {
            default_h = PenaltyHamiltonian::from_mask(mask, 1.0)?;
            &default_h
        }
    };
    let alpha = |v: &StateVector| v.apply_mask(mask).map(|m| m.norm_sqr()).unwrap_or(0.0);
    let energy = |v: &StateVector| h.expected_energy(v);
    let probe = PointProbe {
        node: &config.drive_node,
        alpha_sq: &alpha,
        energy: &energy,
    };

    let mut points = Vec::with_capacity(schedule.steps() + 1);
    points.push(make_point(&probe, 0.0, schedule.phi(0.0)?, psi0.clone(), None)?);
    for k in 1..=schedule.steps() {
        let t = schedule.time(k);
        let prev = &points[k - 1].state;
        let next = step_at(
            t,
            prev,
            mask,
            &config.drive_node,
            schedule_targets(schedule, t)?,
            config.leak,
        )?;
        let point = make_point(&probe, t, schedule.phi(t)?, next, Some(prev))?;
        points.push(point);
    }
    Ok(Trajectory {
        schedule: *schedule,
        points,
        leak_model: config.leak,
    })
}

pub fn link_order() -> NodeOrder {
    NodeOrder::new(["r", "s"]).expect("static")
}

/// `cos[θ+φ]|01⟩ + sin[θ+φ]|10⟩`.
pub fn closed_form_link(theta: f64, phi: f64) -> StateVector {
    let a = theta + phi;
    StateVector::from_real(link_order(), &[0.0, a.cos(), a.sin(), 0.0]).expect("dimension 4")
}

/// Identity on `|00⟩, |11⟩`, rotation by `φ` in the `(|01⟩, |10⟩)` plane with
/// `Q|01⟩ = cos φ|01⟩ + sin φ|10⟩`.
pub fn q_rs_apply(phi: f64, v: &StateVector) -> Result<StateVector> {
    if v.dim() != 4 {
        return Err(Error::DimensionMismatch { left: 4, right: v.dim() });
    }
    let (c, s) = (phi.cos(), phi.sin());
    let a = v.amps();
    let amps = vec![a[0], c * a[1] - s * a[2], s * a[1] + c * a[2], a[3]];
    StateVector::from_amplitudes(v.order().clone(), amps)
}

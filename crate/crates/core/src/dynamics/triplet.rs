//! Two labelled two-state particles watched by the symmetrizer `S₁₂`.
//!
//! The watchdog keeps the state in the range of `S₁₂` while one particle's
//! diagonal (or both) follows the schedule. Inside that range the drive acts
//! as `M = S Π S`, which has eigenvalues `0, ½, 1` on `|00⟩, |+⟩, |11⟩`.
//!
//! A single max-overlap step `n ∝ (1 + κM)⁻¹ c` is only first order in `dt`
//! once `M` has more than two eigenvalues. Its `dt → 0` limit is the tilt
//! `n_k ∝ c_k e^{s m_k}` in the eigenbasis of `M`, which composes exactly
//! and is what [`TripletRule::ContinuousLimit`] applies at every grid point.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use super::{make_point, schedule_targets, DriveSchedule, LeakModel, PointProbe, Trajectory};
use crate::error::{Error, Result};
use crate::hilbert::{NodeOrder, StateVector, C64};

pub const TRIPLET_NODES: [&str; 2] = ["p1", "p2"];

const ENDPOINT_TOL: f64 = 1e-12;
const REACH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripletDrive {
    Particle1,
    Particle2,
    Both,
}

impl std::str::FromStr for TripletDrive {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "particle1" | "1" => Ok(TripletDrive::Particle1),
            "particle2" | "2" => Ok(TripletDrive::Particle2),
            "both" => Ok(TripletDrive::Both),
            _ => Err(Error::InvalidArgument(format!("unknown triplet drive {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TripletRule {
    /// Exponential tilt, exact for any grid.
    #[default]
    ContinuousLimit,
    /// One Lagrange step per grid interval; converges at first order.
    DiscreteOverlap,
}

fn order() -> NodeOrder {
    NodeOrder::new(TRIPLET_NODES).expect("static")
}

/// `cos²θ'|00⟩ + sinθ'cosθ'(|01⟩+|10⟩) + sin²θ'|11⟩` with `θ' = θ+φ`.
pub fn closed_form_triplet(theta: f64, phi: f64) -> StateVector {
    let a = theta + phi;
    let (s, c) = a.sin_cos();
    StateVector::from_real(order(), &[c * c, s * c, s * c, s * s]).expect("dimension 4")
}

/// `⟨singlet|v⟩` with `singlet = (|01⟩ - |10⟩)/√2`.
pub fn singlet_amplitude(v: &StateVector) -> C64 {
    (v.amps()[1] - v.amps()[2]) * FRAC_1_SQRT_2
}

/// Integer spanning vectors of the symmetric subspace, `|00⟩, |01⟩+|10⟩,
/// |11⟩`, with their squared norms. Keeping them unnormalized makes the
/// restricted drive exactly `diag(0, ½, 1)` for every drive choice.
const SYM: [[f64; 4]; 3] = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
const SYM_NORM_SQR: [f64; 3] = [1.0, 2.0, 1.0];

fn drive_diag(drive: TripletDrive) -> [f64; 4] {
    match drive {
        TripletDrive::Particle1 => [0.0, 0.0, 1.0, 1.0],
        TripletDrive::Particle2 => [0.0, 1.0, 0.0, 1.0],
        TripletDrive::Both => [0.0, 0.5, 0.5, 1.0],
    }
}

/// Drive restricted to the symmetric subspace, diagonalized.
struct Spectrum {
    values: Vector3<f64>,
    /// Columns are eigenvectors in the symmetric basis.
    vectors: Matrix3<f64>,
}

impl Spectrum {
    fn new(drive: TripletDrive) -> Self {
        let d = drive_diag(drive);
        let m = Matrix3::from_fn(|i, j| {
            (0..4).map(|k| SYM[i][k] * d[k] * SYM[j][k]).sum::<f64>() / (SYM_NORM_SQR[i] * SYM_NORM_SQR[j]).sqrt()
        });
        let eig = SymmetricEigen::new(m);
        Spectrum {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        }
    }

    fn to_eigen(&self, v: &StateVector) -> [C64; 3] {
        let sym: Vec<C64> = (0..3)
            .map(|i| (0..4).map(|k| v.amps()[k] * SYM[i][k]).sum::<C64>() / SYM_NORM_SQR[i].sqrt())
            .collect();
        let mut y = [C64::new(0.0, 0.0); 3];
        for (k, yk) in y.iter_mut().enumerate() {
            *yk = (0..3).map(|i| sym[i] * self.vectors[(i, k)]).sum();
        }
        y
    }

    fn back_from_eigen(&self, y: &[C64; 3]) -> Result<StateVector> {
        let sym: Vec<C64> = (0..3)
            .map(|i| (0..3).map(|k| y[k] * self.vectors[(i, k)]).sum::<C64>() / SYM_NORM_SQR[i].sqrt())
            .collect();
        let amps = (0..4).map(|k| (0..3).map(|i| sym[i] * SYM[i][k]).sum()).collect();
        StateVector::from_amplitudes(order(), amps)?.normalize()
    }
}

/// Mean of `m` under weights `w_k e^{2 s m_k}`, computed without overflow.
fn tilted_mean(w: &[f64; 3], m: &Vector3<f64>, s: f64) -> f64 {
    let live = (0..3).filter(|&k| w[k] > 0.0);
    let top = live.clone().map(|k| 2.0 * s * m[k]).fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for k in live {
        let e = w[k] * (2.0 * s * m[k] - top).exp();
        num += e * m[k];
        den += e;
    }
    num / den
}

/// Root of an increasing function on `(lo, hi)` by bisection to machine
/// resolution.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn step(
    spec: &Spectrum,
    prev: &StateVector,
    target: f64,
    rule: TripletRule,
    t: f64,
) -> Result<StateVector> {
    let y = spec.to_eigen(prev);
    let w = [y[0].norm_sqr(), y[1].norm_sqr(), y[2].norm_sqr()];
    let m = &spec.values;
    let live: Vec<usize> = (0..3).filter(|&k| w[k] > 0.0).collect();
    if live.is_empty() {
        return Err(Error::DegenerateState);
    }
    let lo_m = live.iter().map(|&k| m[k]).fold(f64::INFINITY, f64::min);
    let hi_m = live.iter().map(|&k| m[k]).fold(f64::NEG_INFINITY, f64::max);
    let unreachable = || Error::DegenerateDynamics {
        t,
        node: TRIPLET_NODES[0].to_string(),
        sector: if target > hi_m { 1 } else { 0 },
    };
    if target < lo_m - REACH_TOL || target > hi_m + REACH_TOL {
        return Err(unreachable());
    }
    // At the ends of the reachable range the tilt diverges; take its limit.
    let edge = if target <= lo_m + ENDPOINT_TOL * 1e-3 {
        Some(lo_m)
    } else if target >= hi_m - ENDPOINT_TOL * 1e-3 {
        Some(hi_m)
    } else {
        None
    };
    if let Some(e) = edge {
        let mut out = [C64::new(0.0, 0.0); 3];
        for &k in &live {
            if (m[k] - e).abs() <= ENDPOINT_TOL {
                out[k] = y[k];
            }
        }
        return spec.back_from_eigen(&out);
    }

    let current = tilted_mean(&w, m, 0.0);
    let mut out = y;
    match rule {
        TripletRule::ContinuousLimit => {
            let f = |s: f64| tilted_mean(&w, m, s) - target;
            let mut span = 1.0;
            let (lo, hi) = if current < target {
                while f(span) < 0.0 {
                    span *= 2.0;
                }
                (0.0, span)
            } else {
                while f(-span) > 0.0 {
                    span *= 2.0;
                }
                (-span, 0.0)
            };
            let s = bisect(lo, hi, f);
            let top = live.iter().map(|&k| s * m[k]).fold(f64::NEG_INFINITY, f64::max);
            for &k in &live {
                out[k] = y[k] * (s * m[k] - top).exp();
            }
        }
        TripletRule::DiscreteOverlap => {
            // n_k ∝ y_k / (1 + κ m_k); the mean decreases in κ.
            let mean = |kappa: f64| {
                let (mut num, mut den) = (0.0, 0.0);
                for &k in &live {
                    let e = w[k] / (1.0 + kappa * m[k]).powi(2);
                    num += e * m[k];
                    den += e;
                }
                num / den
            };
            let g = |kappa: f64| target - mean(kappa);
            let kappa = if current < target {
                let floor = if hi_m > 0.0 { -1.0 / hi_m } else { -1.0 };
                bisect(floor, 0.0, g)
            } else {
                let mut span = 1.0;
                while g(span) < 0.0 {
                    span *= 2.0;
                }
                bisect(0.0, span, g)
            };
            for &k in &live {
                out[k] = y[k] / (1.0 + kappa * m[k]);
            }
        }
    }
    spec.back_from_eigen(&out)
}

fn alpha_sq(v: &StateVector) -> f64 {
    1.0 - singlet_amplitude(v).norm_sqr()
}

fn run(
    schedule: &DriveSchedule,
    mut next: impl FnMut(&StateVector, usize, f64) -> Result<StateVector>,
) -> Result<Trajectory> {
    let energy = |v: &StateVector| Ok(1.0 - alpha_sq(v));
    let probe = PointProbe {
        node: TRIPLET_NODES[0],
        alpha_sq: &alpha_sq,
        energy: &energy,
    };
    let psi0 = closed_form_triplet(schedule.theta0, 0.0);
    let mut points = Vec::with_capacity(schedule.steps() + 1);
    points.push(make_point(&probe, 0.0, schedule.phi(0.0)?, psi0, None)?);
    for k in 1..=schedule.steps() {
        let t = schedule.time(k);
        let prev = &points[k - 1].state;
        let state = next(prev, k, t)?;
        let point = make_point(&probe, t, schedule.phi(t)?, state, Some(prev))?;
        points.push(point);
    }
    Ok(Trajectory {
        schedule: *schedule,
        points,
        leak_model: LeakModel::None,
    })
}

/// Watchdog evolution of `closed_form_triplet(θ, 0)` under `S₁₂` with the
/// chosen drive following the schedule.
pub fn triplet_watchdog(schedule: &DriveSchedule, drive: TripletDrive, rule: TripletRule) -> Result<Trajectory> {
    let spec = Spectrum::new(drive);
    run(schedule, |prev, _, t| {
        let (_, p1) = schedule_targets(schedule, t)?;
        step(&spec, prev, p1, rule, t)
    })
}

/// [`triplet_watchdog`] from angle `theta`, driving particle 1.
pub fn triplet_watchdog_demo(theta: f64, schedule: &DriveSchedule) -> Result<Trajectory> {
    triplet_watchdog(
        &schedule.with_theta(theta),
        TripletDrive::Particle1,
        TripletRule::ContinuousLimit,
    )
}

/// Rotate particle 1 by each schedule increment, leave particle 2 alone,
/// then project with `S₁₂` and renormalize.
///
/// This does not freeze: inside the symmetric subspace `S(G⊗1)S` is half the
/// collective generator, so the state turns at half the scheduled rate.
pub fn zeno_variant(schedule: &DriveSchedule) -> Result<Trajectory> {
    run(schedule, |prev, k, t| {
        let delta = schedule.phi(t)? - schedule.phi(schedule.time(k - 1))?;
        let (s, c) = delta.sin_cos();
        let a = prev.amps();
        // R(δ)|0⟩ = c|0⟩ + s|1⟩ on the first particle.
        let rotated = [
            c * a[0] - s * a[2],
            c * a[1] - s * a[3],
            s * a[0] + c * a[2],
            s * a[1] + c * a[3],
        ];
        let mid = (rotated[1] + rotated[2]) * 0.5;
        let sym = vec![rotated[0], mid, mid, rotated[3]];
        StateVector::from_amplitudes(order(), sym)?.normalize()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::ScheduleKind;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn linear(theta: f64, phi: f64, dt: f64) -> DriveSchedule {
        DriveSchedule::new(ScheduleKind::LinearRamp, theta, phi, 1.0, dt).unwrap()
    }

    fn max_dev(tr: &Trajectory, theta: f64, rate: f64) -> f64 {
        tr.points
            .iter()
            .map(|p| {
                p.state
                    .max_abs_diff(&closed_form_triplet(theta, rate * p.phi))
                    .unwrap()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_triplet(0.0, 0.0).amps()[0], C64::new(1.0, 0.0));
        assert!((closed_form_triplet(0.0, FRAC_PI_2).amps()[3].re - 1.0).abs() < 1e-15);
        for a in closed_form_triplet(PI / 8.0, PI / 8.0).amps() {
            assert!((a.re - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn drive_spectrum() {
        for d in [TripletDrive::Particle1, TripletDrive::Particle2, TripletDrive::Both] {
            let mut v: Vec<f64> = Spectrum::new(d).values.iter().copied().collect();
            v.sort_by(f64::total_cmp);
            assert_eq!(v, vec![0.0, 0.5, 1.0]);
        }
    }

    #[test]
    fn continuous_rule_tracks_closed_form() {
        let theta = PI / 6.0;
        let tr = triplet_watchdog(&linear(theta, PI / 3.0, 1e-3), TripletDrive::Particle1, TripletRule::ContinuousLimit).unwrap();
        assert!(max_dev(&tr, theta, 1.0) < 1e-12);
        for p in &tr.points {
            assert_eq!(singlet_amplitude(&p.state), C64::new(0.0, 0.0));
        }
        let last = tr.points.last().unwrap();
        assert!((last.p1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn discrete_rule_is_first_order() {
        let theta = PI / 6.0;
        let errs: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
            .iter()
            .map(|&dt| {
                let tr = triplet_watchdog(&linear(theta, PI / 3.0, dt), TripletDrive::Particle1, TripletRule::DiscreteOverlap).unwrap();
                max_dev(&tr, theta, 1.0)
            })
            .collect();
        assert!(errs[0] > 1e-4);
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((1.8..2.2).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn drives_give_identical_trajectories() {
        let s = linear(0.4, 0.9, 1e-2);
        let rule = TripletRule::ContinuousLimit;
        let one = triplet_watchdog(&s, TripletDrive::Particle1, rule).unwrap();
        assert_eq!(one, triplet_watchdog(&s, TripletDrive::Particle2, rule).unwrap());
        assert_eq!(one, triplet_watchdog(&s, TripletDrive::Both, rule).unwrap());
    }

    #[test]
    fn constant_when_not_driven() {
        let tr = triplet_watchdog_demo(PI / 4.0, &linear(0.0, 0.0, 0.1)).unwrap();
        for p in &tr.points {
            assert!(p.state.max_abs_diff(&closed_form_triplet(PI / 4.0, 0.0)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn unreachable_from_pole() {
        let err = triplet_watchdog_demo(0.0, &linear(0.0, 0.5, 0.1)).unwrap_err();
        assert!(matches!(err, Error::DegenerateDynamics { .. }));
    }

    #[test]
    fn zeno_variant_turns_at_half_rate() {
        let theta = PI / 6.0;
        let tr = zeno_variant(&linear(theta, PI / 3.0, 1e-3)).unwrap();
        assert!(max_dev(&tr, theta, 1.0) > 0.1);
        assert!(max_dev(&tr, theta, 0.5) < 1e-3);
        let moved = tr.points.last().unwrap().state.max_abs_diff(&tr.points[0].state).unwrap();
        assert!(moved > 0.1);
    }
}

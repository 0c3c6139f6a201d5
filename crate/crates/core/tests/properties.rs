use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use statnet::dynamics::{
    closed_form_link, evolve, q_rs_apply, triplet_watchdog, watchdog_step, DriveSchedule, LeakModel, ScheduleKind,
    TripletDrive, TripletRule, WatchdogConfig,
};
use statnet::fock::{
    embed_qubit_vector, lift_qubit_vector, two_site_basis, FockVector, Mode, ModeBasis,
};
use statnet::network::{builtin_fig1, builtin_link};
use statnet::protocol::{measure_sample, repetition_bound, run_protocol, shot_rng, ProtocolConfig};
use statnet::statics::{constraint_mask, network_mask};
use statnet::{
    parse_network, Assignment, ConstraintMask, Error, Gate, Network, NodeOrder, ParseErrorKind, Pin, PinKind,
    PinSelection, StateVector, TruthTable, C64,
};

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn order(n: usize) -> NodeOrder {
    NodeOrder::new(NAMES[..n].iter().copied()).unwrap()
}

fn complex_amps(dim: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

/// Normalized 3-node state with possibly zero entries.
fn state3() -> impl Strategy<Value = StateVector> {
    (complex_amps(8), prop::collection::vec(any::<bool>(), 8))
        .prop_filter_map("nonzero", |(a, keep)| {
            let a = a.into_iter().zip(keep).map(|(x, k)| if k { x } else { C64::new(0.0, 0.0) }).collect();
            StateVector::from_amplitudes(order(3), a).ok()?.normalize().ok()
        })
}

fn mask(dim: usize) -> impl Strategy<Value = ConstraintMask> {
    prop::collection::vec(any::<bool>(), dim).prop_map(|b| ConstraintMask::new(b, "random"))
}

/// A gate over distinct random nodes of an `n`-node network with a random
/// table that may be partial.
fn gate(n: usize, idx: usize) -> impl Strategy<Value = Gate> {
    (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), 1usize..=2, 1usize..=2)
        .prop_flat_map(move |(perm, ins, outs)| {
            let outs = outs.min(n - ins);
            let rows = prop::collection::btree_map(0u64..(1 << ins), 0u64..(1 << outs), 1..=(1usize << ins));
            (Just(perm), Just(ins), Just(outs), rows)
        })
        .prop_map(move |(perm, ins, outs, rows)| {
            let inputs: Vec<&str> = perm[..ins].iter().map(|&k| NAMES[k]).collect();
            let outputs: Vec<&str> = perm[ins..ins + outs].iter().map(|&k| NAMES[k]).collect();
            Gate::new(format!("g{idx}"), &inputs, &outputs, TruthTable::new(ins, outs, rows).unwrap())
        })
}

fn network() -> impl Strategy<Value = Network> {
    (3usize..=6, 0usize..=3)
        .prop_flat_map(|(n, k)| {
            let gates: Vec<BoxedStrategy<Gate>> = (0..k).map(|i| gate(n, i).boxed()).collect();
            let pins = prop::collection::vec(prop::option::of((any::<bool>(), any::<bool>())), n);
            (Just(n), gates, pins)
        })
        .prop_map(|(n, gates, pins)| {
            let pins = pins
                .iter()
                .enumerate()
                .filter_map(|(k, p)| {
                    p.map(|(v, out)| Pin::new(NAMES[k], v, if out { PinKind::Output } else { PinKind::Input }))
                })
                .collect();
            Network::new(order(n), gates, pins, None).unwrap()
        })
}

fn indices(net: &Network, sols: &[Assignment]) -> Vec<usize> {
    sols.iter().map(|a| net.nodes().basis_index(a).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn masks_are_idempotent_and_commute(v in state3(), m1 in mask(8), m2 in mask(8)) {
        let once = v.apply_mask(&m1).unwrap();
        prop_assert_eq!(once.apply_mask(&m1).unwrap(), once.clone());
        prop_assert_eq!(once.apply_mask(&m2).unwrap(), v.apply_mask(&m2).unwrap().apply_mask(&m1).unwrap());
        prop_assert_eq!(once.apply_mask(&m2).unwrap(), v.apply_mask(&m1.and(&m2).unwrap()).unwrap());
    }

    #[test]
    fn sector_masses_sum_to_one(v in state3(), node in 0usize..3) {
        let d = v.reduced_diag(NAMES[node]).unwrap();
        prop_assert!((d.p0 + d.p1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sector_split_reassembles(v in state3(), node in 0usize..3) {
        let (c0, c1) = v.sector_split(NAMES[node]).unwrap();
        for k in 0..8 {
            prop_assert_eq!(c0.amps()[k] + c1.amps()[k], v.amps()[k]);
        }
    }

    #[test]
    fn inner_product_is_conjugate_symmetric(a in state3(), b in state3()) {
        prop_assert_eq!(a.inner(&b).unwrap(), b.inner(&a).unwrap().conj());
    }

    #[test]
    fn basis_index_round_trips(n in 1usize..=6, k in 0usize..64) {
        let o = order(n);
        let k = k % o.dim();
        prop_assert_eq!(o.basis_index(&o.assignment(k)).unwrap(), k);
    }

    #[test]
    fn oracle_agrees_with_mask(net in network()) {
        for sel in [PinSelection::All, PinSelection::InputsOnly, PinSelection::None] {
            let oracle = indices(&net, &net.brute_force_with(sel, 24).unwrap());
            prop_assert_eq!(oracle, constraint_mask(&net, sel).support());
        }
    }

    #[test]
    fn dsl_round_trips(net in network()) {
        prop_assert_eq!(parse_network(&net.to_dsl()).unwrap(), net);
    }

    #[test]
    fn repeated_pattern_is_rejected(p in 0u8..4, q in 0u8..2, r in 0u8..2) {
        let text = format!(
            "nodes x y z\ngate g in(x,y) out(z) {{ {p:02b}->{q}; {p:02b}->{r} }}\n"
        );
        match parse_network(&text) {
            Err(Error::Parse { line: 2, kind: ParseErrorKind::DuplicatePattern { .. } }) => {}
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn watchdog_step_contract(prev in state3(), m in mask(8), node in 0usize..3, angle in 0.0f64..FRAC_PI_2) {
        let targets = (angle.cos().powi(2), angle.sin().powi(2));
        let z = NAMES[node];
        match watchdog_step(&prev, &m, z, targets, LeakModel::None) {
            Ok(next) => {
                prop_assert!((next.norm() - 1.0).abs() < 1e-12);
                prop_assert_eq!(next.apply_mask(&m).unwrap(), next.clone());
                let d = next.reduced_diag(z).unwrap();
                prop_assert!((d.p0 - targets.0).abs() < 1e-12 && (d.p1 - targets.1).abs() < 1e-12);
            }
            Err(Error::DegenerateDynamics { sector, .. }) => {
                let shift = 2 - node;
                let populated = m.support().iter().any(|&k| (k >> shift) & 1 == usize::from(sector));
                prop_assert!(!populated);
            }
            Err(e) => prop_assert!(false, "unexpected {}", e),
        }
    }

    /// No admissible candidate overlaps the previous state more than the step.
    #[test]
    fn watchdog_step_maximizes_overlap(
        prev in state3(),
        m in mask(8),
        angle in 0.05f64..1.5,
        candidates in prop::collection::vec(complex_amps(8), 32),
    ) {
        let targets = (angle.cos().powi(2), angle.sin().powi(2));
        let Ok(next) = watchdog_step(&prev, &m, "a", targets, LeakModel::None) else { return Ok(()) };
        let best = next.inner(&prev).unwrap().norm();
        for c in candidates {
            let v = StateVector::from_amplitudes(order(3), c).unwrap().apply_mask(&m).unwrap();
            let (c0, c1) = v.sector_split("a").unwrap();
            let (n0, n1) = (c0.norm(), c1.norm());
            if n0 == 0.0 || n1 == 0.0 {
                continue;
            }
            let amps = (0..8)
                .map(|k| c0.amps()[k] * (targets.0.sqrt() / n0) + c1.amps()[k] * (targets.1.sqrt() / n1))
                .collect();
            let cand = StateVector::from_amplitudes(order(3), amps).unwrap();
            prop_assert!(cand.inner(&prev).unwrap().norm() <= best + 1e-12);
        }
    }

    #[test]
    fn evolve_preserves_norm_and_mask(
        prev in state3(),
        m in mask(8),
        theta in 0.0f64..FRAC_PI_2,
        phi in -PI..PI,
        steps in 1usize..60,
    ) {
        let s = DriveSchedule::new(ScheduleKind::CosineRamp, theta, phi, 1.0, 1.0 / steps as f64).unwrap();
        if let Ok(tr) = evolve(&prev, &WatchdogConfig::new(m.clone(), "b"), &s) {
            for p in &tr.points[1..] {
                prop_assert!((p.state.norm() - 1.0).abs() < 1e-12);
                prop_assert_eq!(p.state.apply_mask(&m).unwrap(), p.state.clone());
            }
        }
    }

    #[test]
    fn link_mask_is_redundant_away_from_the_edges(theta in 0.05f64..1.5, frac in 0.0f64..1.0, steps in 1usize..200) {
        let phi = (-theta + 0.01) + frac * (FRAC_PI_2 - 0.02);
        let s = DriveSchedule::new(ScheduleKind::LinearRamp, theta, phi, 1.0, 1.0 / steps as f64).unwrap();
        let psi0 = closed_form_link(theta, 0.0);
        let masked = evolve(&psi0, &WatchdogConfig::new(network_mask(&builtin_link(), true), "r"), &s).unwrap();
        let free = evolve(&psi0, &WatchdogConfig::new(ConstraintMask::all_ones(4, "none"), "r"), &s).unwrap();
        for (x, y) in masked.points.iter().zip(&free.points) {
            prop_assert!(x.state.max_abs_diff(&y.state).unwrap() < 1e-9);
            prop_assert!(x.state.max_abs_diff(&q_rs_apply(x.phi, &psi0).unwrap()).unwrap() < 1e-9);
            prop_assert!(x.energy.abs() < 1e-12);
        }
    }

    #[test]
    fn q_rs_is_unitary(v in complex_amps(4), phi in -PI..PI) {
        let v = StateVector::from_amplitudes(NodeOrder::new(["r", "s"]).unwrap(), v).unwrap();
        let q = q_rs_apply(phi, &v).unwrap();
        prop_assert!((q.norm() - v.norm()).abs() < 1e-12);
        prop_assert!(q_rs_apply(-phi, &q).unwrap().max_abs_diff(&v).unwrap() < 1e-12);
    }

    #[test]
    fn triplet_drives_are_interchangeable(theta in 0.0f64..FRAC_PI_2, frac in 0.0f64..1.0, steps in 1usize..100) {
        let phi = -theta + frac * FRAC_PI_2;
        let s = DriveSchedule::new(ScheduleKind::LinearRamp, theta, phi, 1.0, 1.0 / steps as f64).unwrap();
        let one = triplet_watchdog(&s, TripletDrive::Particle1, TripletRule::ContinuousLimit).unwrap();
        for d in [TripletDrive::Particle2, TripletDrive::Both] {
            prop_assert_eq!(&triplet_watchdog(&s, d, TripletRule::ContinuousLimit).unwrap().points, &one.points);
        }
    }

    #[test]
    fn qubit_embedding_is_isometric(v in complex_amps(4)) {
        let basis = two_site_basis();
        let q = StateVector::from_amplitudes(basis.qubit_order(), v).unwrap();
        let lifted = lift_qubit_vector(&basis, &q).unwrap();
        prop_assert!((lifted.norm() - q.norm()).abs() < 1e-12);
        prop_assert_eq!(embed_qubit_vector(&lifted).unwrap(), q);
    }

    #[test]
    fn ladder_operators_anticommute(coeffs in complex_amps(16), i in 0usize..4, j in 0usize..4) {
        let basis = ModeBasis::new(["r", "s"]).unwrap();
        let v = coeffs
            .iter()
            .enumerate()
            .fold(FockVector::zero(&basis), |acc, (occ, &c)| acc.add(&FockVector::occupation(&basis, occ as u64).scale(c)));
        let (mi, mj) = (Mode::from_index(i), Mode::from_index(j));
        let cc = v.create(mj).create(mi).add(&v.create(mi).create(mj));
        prop_assert!(cc.norm() < 1e-12);
        let aa = v.annihilate(mj).annihilate(mi).add(&v.annihilate(mi).annihilate(mj));
        prop_assert!(aa.norm() < 1e-12);
        let mixed = v.create(mj).annihilate(mi).add(&v.annihilate(mi).create(mj));
        let expect = if i == j { v.clone() } else { FockVector::zero(&basis) };
        prop_assert!(mixed.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn samples_land_on_support(v in state3(), seed in any::<u64>(), shot in 0u64..1000) {
        let a = measure_sample(&v, &mut shot_rng(seed, shot));
        let k = v.order().basis_index(&a).unwrap();
        prop_assert!(v.amps()[k].norm_sqr() > 0.0);
    }

    #[test]
    fn repetition_bound_is_minimal(p in 0.01f64..1.0, conf in 0.5f64..0.999) {
        let n = repetition_bound(p, conf).unwrap();
        let reach = |n: u64| 1.0 - (1.0 - p).powf(n as f64) >= conf;
        prop_assert!(reach(n));
        prop_assert!(n == 1 || !reach(n - 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn protocol_is_deterministic(seed in any::<u64>(), shots in 1u64..20) {
        let config = ProtocolConfig { dt: 1e-2, ..ProtocolConfig::default() };
        let net = builtin_fig1();
        let a = run_protocol(&net, &config, shots, seed).unwrap();
        prop_assert_eq!(&a, &run_protocol(&net, &config, shots, seed).unwrap());
        for s in a.samples.iter().flatten() {
            prop_assert!(net.assignment_satisfies(&s.parse().unwrap(), true).unwrap());
        }
    }
}

#[test]
fn link_matches_equivalent_gate() {
    let net = builtin_fig1();
    let not = TruthTable::from_strs(&[("0", "1"), ("1", "0")]).unwrap();
    let swapped = net
        .with_gate_replaced("link_d_e", Gate::new("wire", &["d"], &["e"], not))
        .unwrap();
    for sel in [PinSelection::All, PinSelection::InputsOnly] {
        assert_eq!(
            net.brute_force_with(sel, 24).unwrap(),
            swapped.brute_force_with(sel, 24).unwrap()
        );
    }
}

//! Diagonal constraint projectors and penalty Hamiltonians.
//!
//! Every operator here is diagonal in the computational basis, so a projector
//! is stored as a 0/1 indicator and a Hamiltonian as its list of energies.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hilbert::{NodeOrder, StateVector};
use crate::network::{Gate, Network, Pin, PinSelection};

/// Default penalty for a violated gate row.
pub const DEFAULT_GATE_ENERGY: f64 = 1.0;
/// Default drive energy as a fraction of the gate energy.
pub const DEFAULT_DRIVE_FRACTION: f64 = 0.01;

/// 0/1 diagonal projector over basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintMask {
    bits: Vec<bool>,
    label: String,
}

impl ConstraintMask {
    pub fn new(bits: Vec<bool>, label: impl Into<String>) -> Self {
        ConstraintMask {
            bits,
            label: label.into(),
        }
    }

    pub fn all_ones(dim: usize, label: impl Into<String>) -> Self {
        Self::new(vec![true; dim], label)
    }

    pub fn dim(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn contains(&self, index: usize) -> bool {
        self.bits.get(index).copied().unwrap_or(false)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn support(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(k, _)| k)
            .collect()
    }

    /// Product of two projectors.
    pub fn and(&self, other: &ConstraintMask) -> Result<ConstraintMask> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(ConstraintMask {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a && *b).collect(),
            label: format!("{}*{}", self.label, other.label),
        })
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

fn shifts(order: &NodeOrder, nodes: impl Iterator<Item = impl AsRef<str>>) -> Vec<usize> {
    nodes
        .map(|n| order.shift(n.as_ref()).expect("validated network"))
        .collect()
}

fn gather(k: usize, shifts: &[usize]) -> u64 {
    shifts
        .iter()
        .fold(0u64, |acc, &s| (acc << 1) | ((k >> s) & 1) as u64)
}

/// Projector onto basis states whose restriction to the gate's nodes is a
/// row of its truth table.
pub fn gate_mask(net: &Network, gate: &Gate) -> ConstraintMask {
    let sh = shifts(net.nodes(), gate.nodes());
    let bits = (0..net.dim()).map(|k| gate.accepts_local(gather(k, &sh))).collect();
    ConstraintMask::new(bits, gate.name.clone())
}

pub fn pin_mask(net: &Network, pin: &Pin) -> ConstraintMask {
    let s = net.nodes().shift(&pin.node).expect("validated network");
    let bits = (0..net.dim())
        .map(|k| ((k >> s) & 1 == 1) == pin.value)
        .collect();
    ConstraintMask::new(bits, format!("pin_{}", pin.node))
}

/// Product of all gate projectors and the selected pin projectors.
pub fn constraint_mask(net: &Network, pins: PinSelection) -> ConstraintMask {
    let mut bits = vec![true; net.dim()];
    let masks = net
        .gates()
        .iter()
        .map(|g| gate_mask(net, g))
        .chain(
            net.pins()
                .iter()
                .filter(|p| pins.includes(p.kind))
                .map(|p| pin_mask(net, p)),
        );
    for m in masks {
        for (b, &keep) in bits.iter_mut().zip(m.bits()) {
            *b &= keep;
        }
    }
    ConstraintMask::new(bits, "network")
}

/// Gates and input pins always; output pins when asked.
pub fn network_mask(net: &Network, include_output_pins: bool) -> ConstraintMask {
    constraint_mask(
        net,
        if include_output_pins {
            PinSelection::All
        } else {
            PinSelection::InputsOnly
        },
    )
}

/// Per-violation energies for one gate. Overrides are keyed by the gate-local
/// pattern (inputs then outputs, first node most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct GateEnergies {
    pub base: f64,
    pub overrides: BTreeMap<u64, f64>,
}

impl Default for GateEnergies {
    fn default() -> Self {
        GateEnergies::uniform(DEFAULT_GATE_ENERGY)
    }
}

impl GateEnergies {
    pub fn uniform(base: f64) -> Self {
        GateEnergies {
            base,
            overrides: BTreeMap::new(),
        }
    }

    pub fn with_override(mut self, local_pattern: u64, energy: f64) -> Self {
        self.overrides.insert(local_pattern, energy);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.base > 0.0) || !self.base.is_finite() {
            return Err(Error::InvalidEnergy {
                name: "E".into(),
                value: self.base,
            });
        }
        for (&p, &e) in &self.overrides {
            if !(e >= self.base) || !e.is_finite() {
                return Err(Error::InvalidEnergy {
                    name: format!("E[{p}]"),
                    value: e,
                });
            }
        }
        Ok(())
    }

    fn energy_for(&self, local: u64) -> f64 {
        self.overrides.get(&local).copied().unwrap_or(self.base)
    }
}

/// Energy constants for a whole network.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyParams {
    pub gate: GateEnergies,
    /// Pin energy `E_h`.
    pub pin: f64,
    /// Drive energy `E_z`, small against the gate energy.
    pub drive: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        EnergyParams {
            gate: GateEnergies::default(),
            pin: DEFAULT_GATE_ENERGY,
            drive: DEFAULT_DRIVE_FRACTION * DEFAULT_GATE_ENERGY,
        }
    }
}

/// Nonnegative diagonal Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyHamiltonian {
    energies: Vec<f64>,
    label: String,
    params: BTreeMap<String, f64>,
}

impl PenaltyHamiltonian {
    pub fn zero(dim: usize, label: impl Into<String>) -> Self {
        PenaltyHamiltonian {
            energies: vec![0.0; dim],
            label: label.into(),
            params: BTreeMap::new(),
        }
    }

    /// `energy * (1 - mask)`.
    pub fn from_mask(mask: &ConstraintMask, energy: f64) -> Result<Self> {
        if !(energy > 0.0) {
            return Err(Error::InvalidEnergy {
                name: "E".into(),
                value: energy,
            });
        }
        Ok(PenaltyHamiltonian {
            energies: mask.bits().iter().map(|&b| if b { 0.0 } else { energy }).collect(),
            label: mask.label().to_string(),
            params: BTreeMap::from([("E".to_string(), energy)]),
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Sorted indices with zero energy.
    pub fn ground_space(&self) -> Vec<usize> {
        self.energies
            .iter()
            .enumerate()
            .filter(|(_, &e)| e == 0.0)
            .map(|(k, _)| k)
            .collect()
    }

    /// `⟨v|H|v⟩`.
    pub fn expected_energy(&self, v: &StateVector) -> Result<f64> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: v.dim(),
                right: self.dim(),
            });
        }
        Ok(self
            .energies
            .iter()
            .zip(v.amps())
            .map(|(e, a)| e * a.norm_sqr())
            .sum())
    }
}

pub fn expected_energy(v: &StateVector, h: &PenaltyHamiltonian) -> Result<f64> {
    h.expected_energy(v)
}

pub fn ground_space(h: &PenaltyHamiltonian) -> Vec<usize> {
    h.ground_space()
}

/// Zero on the gate's rows, at least `energies.base` elsewhere.
pub fn gate_hamiltonian(net: &Network, gate: &Gate, energies: &GateEnergies) -> Result<PenaltyHamiltonian> {
    energies.validate()?;
    let sh = shifts(net.nodes(), gate.nodes());
    let values = (0..net.dim())
        .map(|k| {
            let local = gather(k, &sh);
            if gate.accepts_local(local) {
                0.0
            } else {
                energies.energy_for(local)
            }
        })
        .collect();
    let mut params = BTreeMap::from([("E".to_string(), energies.base)]);
    for (p, e) in &energies.overrides {
        params.insert(format!("E[{p}]"), *e);
    }
    Ok(PenaltyHamiltonian {
        energies: values,
        label: gate.name.clone(),
        params,
    })
}

/// `energy` wherever `node` holds `excited_value`, zero elsewhere.
pub fn one_qubit_hamiltonian(
    order: &NodeOrder,
    node: &str,
    excited_value: bool,
    energy: f64,
) -> Result<PenaltyHamiltonian> {
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(Error::InvalidEnergy {
            name: format!("E_{node}"),
            value: energy,
        });
    }
    let s = order.shift(node)?;
    Ok(PenaltyHamiltonian {
        energies: (0..order.dim())
            .map(|k| if ((k >> s) & 1 == 1) == excited_value { energy } else { 0.0 })
            .collect(),
        label: format!("H_{node}"),
        params: BTreeMap::from([(format!("E_{node}"), energy)]),
    })
}

/// Holds `pin.node` at `pin.value`.
pub fn pin_hamiltonian(net: &Network, pin: &Pin, energy: f64) -> Result<PenaltyHamiltonian> {
    one_qubit_hamiltonian(net.nodes(), &pin.node, !pin.value, energy)
}

/// Pointwise sum.
pub fn total_hamiltonian(dim: usize, parts: &[PenaltyHamiltonian]) -> Result<PenaltyHamiltonian> {
    let mut total = PenaltyHamiltonian::zero(dim, "H_N");
    for h in parts {
        if h.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: h.dim(),
            });
        }
        for (t, e) in total.energies.iter_mut().zip(&h.energies) {
            *t += e;
        }
        for (k, v) in &h.params {
            total.params.insert(format!("{}.{k}", h.label), *v);
        }
    }
    Ok(total)
}

/// Every gate Hamiltonian plus the selected pin Hamiltonians.
pub fn network_hamiltonian_parts(
    net: &Network,
    params: &EnergyParams,
    pins: PinSelection,
) -> Result<Vec<PenaltyHamiltonian>> {
    let mut parts = net
        .gates()
        .iter()
        .map(|g| gate_hamiltonian(net, g, &params.gate))
        .collect::<Result<Vec<_>>>()?;
    for p in net.pins().iter().filter(|p| pins.includes(p.kind)) {
        parts.push(pin_hamiltonian(net, p, params.pin)?);
    }
    Ok(parts)
}

pub fn network_hamiltonian(
    net: &Network,
    params: &EnergyParams,
    pins: PinSelection,
) -> Result<PenaltyHamiltonian> {
    total_hamiltonian(net.dim(), &network_hamiltonian_parts(net, params, pins)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{Assignment, C64};
    use crate::network::{builtin_fig1, builtin_link, builtin_xor, TruthTable};
    use std::f64::consts::PI;

    fn a(s: &str) -> Assignment {
        s.parse().unwrap()
    }

    #[test]
    fn not_gate_mask() {
        let net = builtin_link();
        let m = gate_mask(&net, &net.gates()[0]);
        assert_eq!(m.bits(), &[false, true, true, false]);
    }

    #[test]
    fn xor_gate_mask() {
        let net = builtin_xor();
        let m = gate_mask(&net, &net.gates()[0]);
        assert_eq!(m.count_ones(), 4);
        assert_eq!(m.support(), vec![0b000, 0b011, 0b101, 0b110]);
    }

    #[test]
    fn total_table_gives_all_ones() {
        let net = Network::new(
            NodeOrder::new(["x", "y"]).unwrap(),
            vec![Gate::new(
                "any",
                &["x", "y"],
                &[],
                TruthTable::new(2, 0, (0..4).map(|i| (i, 0))).unwrap(),
            )],
            vec![],
            None,
        )
        .unwrap();
        assert_eq!(gate_mask(&net, &net.gates()[0]).count_ones(), 4);
    }

    #[test]
    fn pin_masks() {
        let net = builtin_fig1();
        let b = net.pin("b").unwrap();
        assert_eq!(pin_mask(&net, b).count_ones(), 128);
        let one = Network::new(
            NodeOrder::new(["x"]).unwrap(),
            vec![],
            vec![Pin::new("x", false, crate::network::PinKind::Input)],
            None,
        )
        .unwrap();
        assert_eq!(pin_mask(&one, &one.pins()[0]).bits(), &[true, false]);
        let all_pins = constraint_mask(&net.with_pins(net.pins().to_vec()).unwrap(), PinSelection::All);
        let pins_only = net
            .pins()
            .iter()
            .map(|p| pin_mask(&net, p))
            .reduce(|x, y| x.and(&y).unwrap())
            .unwrap();
        assert_eq!(pins_only.count_ones(), 32);
        assert!(all_pins.count_ones() <= 32);
    }

    #[test]
    fn fig1_network_masks() {
        let net = builtin_fig1();
        let full = network_mask(&net, true);
        assert_eq!(full.support(), vec![235]);
        let relaxed = network_mask(&net, false);
        let o = net.nodes();
        assert_eq!(
            relaxed.support(),
            vec![
                o.basis_index(&a("01010000")).unwrap(),
                o.basis_index(&a("11101011")).unwrap()
            ]
        );
        let free = Network::new(NodeOrder::new(["x", "y"]).unwrap(), vec![], vec![], None).unwrap();
        assert_eq!(network_mask(&free, true).count_ones(), 4);
    }

    fn hrs(ec: f64, ed: f64) -> PenaltyHamiltonian {
        let net = builtin_link();
        let e = GateEnergies::uniform(1.0).with_override(0b00, ec).with_override(0b11, ed);
        gate_hamiltonian(&net, &net.gates()[0], &e).unwrap()
    }

    #[test]
    fn link_hamiltonian_values() {
        let net = builtin_link();
        let h = hrs(1.5, 2.5);
        let st = |s: &str| StateVector::basis_state(net.nodes().clone(), &a(s)).unwrap();
        assert_eq!(h.expected_energy(&st("01")).unwrap(), 0.0);
        assert_eq!(h.expected_energy(&st("00")).unwrap(), 1.5);
        assert_eq!(h.expected_energy(&st("11")).unwrap(), 2.5);
        assert_eq!(h.ground_space(), vec![0b01, 0b10]);
    }

    #[test]
    fn link_state_has_zero_energy_for_any_angle() {
        let net = builtin_link();
        let h = hrs(1.0, 1.0);
        for i in 0..=16 {
            let th = PI * i as f64 / 16.0;
            let v = StateVector::from_real(net.nodes().clone(), &[0.0, th.cos(), th.sin(), 0.0])
                .unwrap();
            assert_eq!(h.expected_energy(&v).unwrap(), 0.0);
        }
    }

    #[test]
    fn nonpositive_energies_rejected() {
        let net = builtin_link();
        let g = &net.gates()[0];
        assert!(gate_hamiltonian(&net, g, &GateEnergies::uniform(0.0)).is_err());
        assert!(gate_hamiltonian(&net, g, &GateEnergies::uniform(1.0).with_override(0, 0.5)).is_err());
        assert!(one_qubit_hamiltonian(net.nodes(), "r", false, -1.0).is_err());
    }

    #[test]
    fn one_qubit_hamiltonian_values() {
        let net = builtin_link();
        let h = one_qubit_hamiltonian(net.nodes(), "r", false, 0.01).unwrap();
        let st = |s: &str| StateVector::basis_state(net.nodes().clone(), &a(s)).unwrap();
        assert_eq!(h.expected_energy(&st("10")).unwrap(), 0.0);
        assert_eq!(h.expected_energy(&st("01")).unwrap(), 0.01);
        let th = PI / 6.0;
        let v = StateVector::from_real(net.nodes().clone(), &[0.0, th.cos(), th.sin(), 0.0]).unwrap();
        assert!((h.expected_energy(&v).unwrap() - 0.01 * th.cos().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn uniform_state_energy() {
        let o = NodeOrder::new(["x", "y"]).unwrap();
        let mask = ConstraintMask::new(vec![true, true, false, false], "m");
        let h = PenaltyHamiltonian::from_mask(&mask, 3.0).unwrap();
        let v = StateVector::uniform(o, &[0, 1, 2, 3]).unwrap();
        assert!((h.expected_energy(&v).unwrap() - 1.5).abs() < 1e-15);
        let zero = StateVector::zeros(NodeOrder::new(["x"]).unwrap());
        assert!(h.expected_energy(&zero).is_err());
    }

    #[test]
    fn total_hamiltonian_zero_sets() {
        let net = builtin_fig1();
        let params = EnergyParams::default();
        let hn = network_hamiltonian(&net, &params, PinSelection::InputsOnly).unwrap();
        assert_eq!(hn.ground_space().len(), 2);
        let hz = pin_hamiltonian(&net, net.drive_pin().unwrap(), params.drive).unwrap();
        let both = total_hamiltonian(net.dim(), &[hn, hz]).unwrap();
        assert_eq!(both.ground_space(), vec![235]);
        assert_eq!(total_hamiltonian(4, &[]).unwrap().ground_space(), vec![0, 1, 2, 3]);
        assert!(total_hamiltonian(4, &[PenaltyHamiltonian::zero(8, "x")]).is_err());
    }

    #[test]
    fn network_energy_is_sum_of_parts() {
        let net = builtin_fig1();
        let parts = network_hamiltonian_parts(&net, &EnergyParams::default(), PinSelection::All).unwrap();
        let total = total_hamiltonian(net.dim(), &parts).unwrap();
        let amps: Vec<C64> = (0..net.dim())
            .map(|k| C64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let v = StateVector::from_amplitudes(net.nodes().clone(), amps).unwrap().normalize().unwrap();
        let sum: f64 = parts.iter().map(|h| h.expected_energy(&v).unwrap()).sum();
        assert!((total.expected_energy(&v).unwrap() - sum).abs() < 1e-12);
    }
}

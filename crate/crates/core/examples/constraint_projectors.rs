// Diagonal masks and penalty Hamiltonians for a single XOR gate.
//
//     cargo run --example constraint_projectors

use statnet::network::builtin_xor;
use statnet::statics::{gate_hamiltonian, gate_mask};
use statnet::{GateEnergies, StateVector};

pub fn run_example() -> Result<usize, Box<dyn std::error::Error>> {
    let net = builtin_xor();
    let gate = &net.gates()[0];
    let mask = gate_mask(&net, gate);
    // Penalize the forbidden row 11->1 more than the others.
    let energies = GateEnergies::uniform(1.0).with_override(0b111, 3.0);
    let h = gate_hamiltonian(&net, gate, &energies)?;

    for k in 0..net.dim() {
        let a = net.nodes().assignment(k);
        println!("{a}  allowed={}  energy={}", mask.contains(k), h.energies()[k]);
    }
    assert_eq!(h.ground_space(), mask.support());

    // A uniform superposition loses the forbidden half under the projector
    // and carries mean energy (1+1+1+3)/8.
    let all: Vec<usize> = (0..net.dim()).collect();
    let psi = StateVector::uniform(net.nodes().clone(), &all)?;
    let kept = psi.apply_mask(&mask)?;
    println!("mass kept by the mask: {:.3}", kept.norm_sqr());
    println!("mean penalty: {:.3}", h.expected_energy(&psi)?);
    Ok(mask.count_ones())
}

fn main() {
    run_example().expect("projector example");
}

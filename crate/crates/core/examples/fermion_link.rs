// Two fermions on the two sites of a wire: antisymmetrizer counts, the
// embedded qubit states, and the second-quantized link Hamiltonian.
//
//     cargo run --example fermion_link

use statnet::fock::{
    antisymmetrizer, fock_basis_two, gate_fock_ground_assignments, hrs_fock, verify_second_quantization,
    verify_second_quantization_with, LinkEnergies, SignConvention,
};
use statnet::network::builtin_xor;

pub fn run_example() -> Result<bool, Box<dyn std::error::Error>> {
    let a2 = antisymmetrizer(2, 4)?;
    let a3 = antisymmetrizer(3, 6)?;
    println!("antisymmetric dimension: {:.0} for two fermions, {:.0} for three", a2.trace(), a3.trace());

    for s in fock_basis_two() {
        println!("|{}>  occupations {:?}", s.label, s.occupation.support());
    }

    let params = LinkEnergies {
        base: 1.0,
        ea: 2.0,
        eb: 3.0,
        ec: 4.0,
        ed: 5.0,
    };
    println!("diagonal on |a>..|f>: {:?}", hrs_fock(&params)?);
    let ok = verify_second_quantization(&params);
    println!("ladder form matches the diagonal: {ok}");
    // Dropping the fermionic signs breaks the match.
    println!("without signs: {}", verify_second_quantization_with(&params, SignConvention::Unsigned));

    let net = builtin_xor();
    let (zero, evaluated) = gate_fock_ground_assignments(&net, &net.gates()[0], 1.0)?;
    let names: Vec<String> = zero.iter().map(|a| a.to_string()).collect();
    println!("XOR zero set {names:?} out of {evaluated} three-fermion states");
    Ok(ok)
}

fn main() {
    run_example().expect("fermion example");
}

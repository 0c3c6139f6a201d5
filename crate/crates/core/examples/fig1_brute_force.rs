// Parse a network from text, enumerate its solutions and compare with the
// constraint mask.
//
//     cargo run --example fig1_brute_force

use statnet::statics::network_mask;
use statnet::{parse_network, Assignment, PinSelection};

const FIG1: &str = "\
# two invertible XOR gates joined by an inverting wire
nodes a b c d e f g h
gate gate1 in(a,b) out(c,d) { 00->00; 01->01; 10->11; 11->10 }
link d -> e
gate gate3 in(e,f) out(g,h) { 00->00; 01->01; 10->11; 11->10 }
fix b=1 input
fix f=0 input
fix h=1 output
drive h
";

pub fn run_example() -> Result<Vec<Assignment>, Box<dyn std::error::Error>> {
    let net = parse_network(FIG1)?;
    let solutions = net.brute_force_solutions(true)?;
    for s in &solutions {
        println!("solution {s}");
    }
    let mask = network_mask(&net, true);
    println!("mask support {:?} of {}", mask.support(), mask.dim());

    // The input pins alone leave one assignment per value of the free input.
    let prepared = net.brute_force_with(PinSelection::InputsOnly, 24)?;
    println!("{} assignments satisfy the gates and input pins", prepared.len());
    println!("{} satisfy the gates alone", net.brute_force_solutions(false)?.len());
    assert_eq!(solutions.len(), mask.count_ones());
    Ok(solutions)
}

fn main() {
    run_example().expect("fig1 example");
}

// Reproducible computational-basis sampling.
//
//     cargo run --example measurement_sampling

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use statnet::protocol::{measure_sample, shot_rng};
use statnet::{NodeOrder, StateVector};

pub fn run_example() -> Result<BTreeMap<String, u32>, Box<dyn std::error::Error>> {
    let bell = StateVector::from_real(NodeOrder::new(["x", "y"])?, &[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2])?;
    let mut rng = shot_rng(42, 0);
    let mut counts = BTreeMap::new();
    for _ in 0..10_000 {
        *counts.entry(measure_sample(&bell, &mut rng).to_string()).or_insert(0) += 1;
    }
    println!("{counts:?}");

    // Each shot has its own stream, so shot 3 does not depend on shots 0..2.
    let a = measure_sample(&bell, &mut shot_rng(42, 3));
    let b = measure_sample(&bell, &mut shot_rng(42, 3));
    assert_eq!(a, b);
    Ok(counts)
}

fn main() {
    run_example().expect("sampling example");
}

// Prepare, drive, measure and check: the full decision procedure.
//
//     cargo run --example sat_protocol

use statnet::dynamics::LeakModel;
use statnet::network::{builtin_fig1, builtin_fig1_unsat};
use statnet::{Pin, PinKind};
use statnet::protocol::{drive_network, prepare_ground, repetition_bound, run_protocol, Decision, ProtocolConfig};

pub fn run_example() -> Result<Decision, Box<dyn std::error::Error>> {
    let config = ProtocolConfig::default();
    let net = builtin_fig1();
    let prep = prepare_ground(&net)?;
    println!(
        "prepared {} + {} states, theta = {:.4}",
        prep.n_sector0, prep.n_sector1, prep.theta
    );
    let result = run_protocol(&net, &config, 100, 7)?;
    println!(
        "fig1: {} ({} of {} shots solved)",
        result.decision, result.n_solutions, result.shots
    );

    let unsat = builtin_fig1_unsat();
    let r = run_protocol(&unsat, &config, 100, 7)?;
    println!("fig1 with g=0: {} at confidence {:.6}", r.decision, r.confidence);

    // Pinning a=0 as well forces h=0, so the drive has nowhere to go.
    let stuck = net.with_pins(vec![
        Pin::new("a", false, PinKind::Input),
        Pin::new("b", true, PinKind::Input),
        Pin::new("f", false, PinKind::Input),
        Pin::new("h", true, PinKind::Output),
    ])?;
    let r = run_protocol(&stuck, &config, 10, 7)?;
    println!("fig1 with a=0: {}", r.decision);
    if let Some(f) = &r.failure {
        println!("  dynamics stopped: {f}");
    }
    // Letting the drive push mass into violating states instead of failing.
    let leaky = ProtocolConfig {
        leak: LeakModel::UniformExcited,
        ..config.clone()
    };
    let (_, tr) = drive_network(&stuck, &leaky)?;
    let last = tr.points.last().expect("nonempty");
    println!("with leaking: final mass outside the constraints {:.3}", last.beta_sq);

    for p in [0.5, 0.99, 0.01] {
        println!("shots for 99% confidence at p={p}: {}", repetition_bound(p, 0.99)?);
    }
    Ok(result.decision)
}

fn main() {
    run_example().expect("protocol example");
}

// Drive a network's output node from its prepared state and watch the
// register settle on the solution.
//
//     cargo run --example network_dynamics

use statnet::dynamics::ScheduleKind;
use statnet::network::builtin_fig1;
use statnet::protocol::{drive_network, ProtocolConfig};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let net = builtin_fig1();
    let config = ProtocolConfig {
        kind: ScheduleKind::ExponentialRelax,
        dt: 0.1,
        ..ProtocolConfig::default()
    };
    let (prep, tr) = drive_network(&net, &config)?;
    println!("start angle {:.4}", prep.theta);
    for p in &tr.points {
        println!("t={:.1}  p1={:.4}  inside={:.4}", p.t, p.p1, p.alpha_sq);
    }
    // The relaxing schedule stops just short of the full rotation.
    let last = tr.final_state();
    let mut best = String::new();
    let mut best_p = 0.0;
    for k in last.support() {
        let a = net.nodes().assignment(k).to_string();
        let p = last.amps()[k].norm_sqr();
        println!("P({a}) = {p:.6}");
        if p > best_p {
            (best, best_p) = (a, p);
        }
    }
    Ok(best)
}

fn main() {
    run_example().expect("network example");
}

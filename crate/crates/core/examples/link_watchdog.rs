// The watched wire rotates rigidly inside its two allowed states.
//
//     cargo run --example link_watchdog

use std::f64::consts::PI;

use statnet::cli::{rows_to_csv, simulate_link, trace_rows};
use statnet::dynamics::{closed_form_link, q_rs_apply, DriveSchedule, LeakModel, ScheduleKind};

pub fn run_example() -> Result<f64, Box<dyn std::error::Error>> {
    let theta = PI / 6.0;
    let schedule = DriveSchedule::new(ScheduleKind::LinearRamp, theta, PI / 3.0, 1.0, 1e-3)?;
    let tr = simulate_link(&schedule, false, LeakModel::None)?;
    let psi0 = &tr.points[0].state;
    let mut worst: f64 = 0.0;
    for p in &tr.points {
        worst = worst
            .max(p.state.max_abs_diff(&closed_form_link(theta, p.phi))?)
            .max(p.state.max_abs_diff(&q_rs_apply(p.phi, psi0)?)?);
    }
    println!("largest deviation from the rotation: {worst:.2e}");

    // Without the projector the run coincides, except when a sector starts empty.
    let free = simulate_link(&schedule, true, LeakModel::None)?;
    println!("unmasked final state equal: {}", free.final_state().max_abs_diff(tr.final_state())? < 1e-12);
    let edge = schedule.with_theta(0.0);
    let masked = simulate_link(&edge, false, LeakModel::None)?;
    let unmasked = simulate_link(&edge, true, LeakModel::None)?;
    println!(
        "from |01>: |11> amplitude {:.3} with the mask, {:.3} without",
        masked.final_state().amps()[3].norm(),
        unmasked.final_state().amps()[3].norm()
    );

    let coarse = schedule.with_dt(0.25)?;
    let rows = trace_rows(&simulate_link(&coarse, false, LeakModel::None)?, None)?;
    print!("{}", rows_to_csv(&rows));
    Ok(worst)
}

fn main() {
    run_example().expect("link example");
}

// Watching the symmetric subspace of two particles: driving one of them
// drags the other along.
//
//     cargo run --example triplet_watchdog

use std::f64::consts::PI;

use statnet::dynamics::{
    closed_form_triplet, singlet_amplitude, triplet_watchdog, zeno_variant, DriveSchedule, ScheduleKind,
    TripletDrive, TripletRule,
};

pub fn run_example() -> Result<f64, Box<dyn std::error::Error>> {
    let theta = PI / 6.0;
    let s = DriveSchedule::new(ScheduleKind::CosineRamp, theta, PI / 3.0, 1.0, 1e-2)?;
    let one = triplet_watchdog(&s, TripletDrive::Particle1, TripletRule::ContinuousLimit)?;
    let both = triplet_watchdog(&s, TripletDrive::Both, TripletRule::ContinuousLimit)?;
    println!("drive particle 1 vs both identical: {}", one.points == both.points);

    let mut worst: f64 = 0.0;
    for p in &one.points {
        worst = worst.max(p.state.max_abs_diff(&closed_form_triplet(theta, p.phi))?);
        assert_eq!(singlet_amplitude(&p.state).norm(), 0.0);
    }
    println!("deviation from the closed form: {worst:.2e}");

    // One max-overlap step per interval converges only at first order.
    for dt in [1e-2, 5e-3] {
        let d = triplet_watchdog(&s.with_dt(dt)?, TripletDrive::Particle1, TripletRule::DiscreteOverlap)?;
        let mut err: f64 = 0.0;
        for p in &d.points {
            err = err.max(p.state.max_abs_diff(&closed_form_triplet(theta, p.phi))?);
        }
        println!("discrete rule, dt={dt}: max error {err:.2e}");
    }

    // Rotating particle 1 and re-projecting turns at half the rate.
    let z = zeno_variant(&s)?;
    let half = z.final_state().max_abs_diff(&closed_form_triplet(theta, PI / 6.0))?;
    println!("rotate-then-project run vs half rotation: {half:.2e}");
    Ok(worst)
}

fn main() {
    run_example().expect("triplet example");
}

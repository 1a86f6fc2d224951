//! Finite-time ramp against the sudden limit, and metric estimates from
//! excitation probabilities.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_8, PI};

use tensormono::quantum_geometry::metric_analytic;
use tensormono::quench_sim::{estimate_metric_diag, estimate_metric_offdiag, evolve, Direction, QuenchSchedule};
use tensormono::{Coord, HyperPoint};

fn main() -> tensormono::Result<()> {
    let p = HyperPoint::on_sphere(FRAC_PI_3, FRAC_PI_4, 0.0);
    let dir = Direction::Axis(Coord::Theta1);
    let sudden = evolve(&p, &QuenchSchedule::sudden(dir, FRAC_PI_8)?)?.p_excited;
    println!("sudden     P = {sudden:.9}");
    for t in [9e-9, 3e-9, 1e-9, 1e-10] {
        let out = evolve(&p, &QuenchSchedule::paper_2020(dir, FRAC_PI_8)?.with_ramp_time(t)?)?;
        println!(
            "T = {:5.1} ns P = {:.9}  rel. deviation {:.2e}  ({} slices)",
            t * 1e9,
            out.p_excited,
            (out.p_excited - sudden) / sudden,
            out.steps_used
        );
    }

    let g = metric_analytic(&p)?.metric();
    for denom in [8.0, 16.0, 1024.0] {
        let s = QuenchSchedule::sudden(dir, PI / denom)?;
        let g11 = estimate_metric_diag(&p, Coord::Theta1, &s)?;
        let g12 = estimate_metric_offdiag(&p, (Coord::Theta1, Coord::Theta2), &s)?;
        println!("dq = pi/{denom:<4}: g_t1t1 {g11:.6} (exact {:.6}), g_t1t2 {g12:.6} (exact {:.6})", g[(0, 0)], g[(0, 1)]);
    }
    Ok(())
}

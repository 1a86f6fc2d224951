//! The frame rotation that parks the initial ground state in level |0>,
//! and the invariance of quench probabilities under it.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_8};

use tensormono::quantum_geometry::ground_state;
use tensormono::quench_sim::{evolve, evolve_in_frame, frame_rotation, Direction, QuenchSchedule};
use tensormono::{Coord, HyperPoint};

fn main() -> tensormono::Result<()> {
    let p = HyperPoint::on_sphere(FRAC_PI_3, FRAC_PI_4, 0.0);
    let r = frame_rotation(&p)?;
    println!("alpha1 {:.6} alpha2 {:.6} beta1 {:.6} beta2 {:.6}", r.alpha1, r.alpha2, r.beta1, r.beta2);
    let v = r.unitary * ground_state(&p.family(), &p.angles())?;
    println!("U_R psi_- = [{:.3}, {:.3}, {:.3}]", v[0], v[1], v[2]);
    let s = QuenchSchedule::paper_2020(Direction::pair(Coord::Theta1, Coord::Theta2)?, FRAC_PI_8)?;
    let a = evolve(&p, &s)?.p_excited;
    let b = evolve_in_frame(&p, &s)?.p_excited;
    println!("P original {a:.12}, rotated {b:.12}, difference {:.1e}", (a - b).abs());
    Ok(())
}

//! Quantum metric of the ground band: closed form against the sum-over-states
//! and overlap (finite-difference) routes, then a coarse map.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

use tensormono::quantum_geometry::{metric_analytic, metric_field, qgt_finite_difference, qgt_perturbation, MapGrid};
use tensormono::{HyperPoint, MonopoleFamily};

fn main() -> tensormono::Result<()> {
    let p = HyperPoint::on_sphere(FRAC_PI_3, FRAC_PI_4, 0.0);
    let exact = metric_analytic(&p)?.metric();
    let pert = qgt_perturbation(&p.family(), &p.angles())?.metric();
    let fd = qgt_finite_difference(&p.family(), &p.angles(), 1e-3)?.metric();
    println!("closed form {exact:.6}");
    println!("perturbation max deviation {:.2e}", (pert - exact).abs().max());
    println!("finite difference max deviation {:.2e}", (fd - exact).abs().max());

    let table = metric_field(&MapGrid::new(7, 7, 0.0)?, &MonopoleFamily::unit(0.0))?;
    print!("{}", table.to_csv());
    Ok(())
}

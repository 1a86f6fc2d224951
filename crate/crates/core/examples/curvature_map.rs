//! The 3-form curvature `4 sqrt(det g)` and its signed version for the
//! monopole and the anti-monopole.

use std::f64::consts::FRAC_PI_2;

use tensormono::quantum_geometry::{metric_analytic, signed_curvature, tensor_curvature};
use tensormono::{HyperPoint, MonopoleFamily};

fn main() -> tensormono::Result<()> {
    for (t1, t2) in [(FRAC_PI_2, FRAC_PI_2), (FRAC_PI_2 / 2.0, FRAC_PI_2), (1.0, 0.5), (0.0, 1.0)] {
        let g = metric_analytic(&HyperPoint::on_sphere(t1, t2, 0.0))?;
        let a = [t1, t2, 0.0];
        println!(
            "t1 {t1:.3} t2 {t2:.3}: 4 sqrt(det g) = {:.6}, sin^2 t1 sin t2 = {:.6}, signed {:+.6} (monopole) {:+.6} (anti-monopole)",
            tensor_curvature(&g)?.value(),
            t1.sin().powi(2) * t2.sin(),
            signed_curvature(&MonopoleFamily::unit(0.0), &a)?.value(),
            signed_curvature(&MonopoleFamily::unit(0.0).anti(), &a)?.value(),
        );
    }
    Ok(())
}

use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::error::{invalid, Error, Result};
use crate::linalg::{eigensystem_unchecked, fidelity, CVector3};
use crate::qudit_models::{Angles, Coord, ParamFamily};

use super::{GeometricTensor, GAP_THRESHOLD};

const MAX_STEP: f64 = 0.1;

/// Gauge-fixed ground state of a family member.
pub fn ground_state<F: ParamFamily>(family: &F, angles: &Angles) -> Result<CVector3> {
    let es = eigensystem_unchecked(&family.hamiltonian(angles));
    let gap = es.ground_gap();
    if gap <= GAP_THRESHOLD {
        return Err(Error::Degenerate { gap, threshold: GAP_THRESHOLD });
    }
    Ok(es.states[0])
}

/// `1 - |<u(a)|u(b)>|^2`.
pub fn overlap_distance<F: ParamFamily>(family: &F, a: &Angles, b: &Angles) -> Result<f64> {
    Ok(1.0 - fidelity(&ground_state(family, a)?, &ground_state(family, b)?))
}

fn displaced(a: &Angles, dir: &[f64; 3], h: f64) -> Angles {
    [a[0] + h * dir[0], a[1] + h * dir[1], a[2] + h * dir[2]]
}

/// Symmetrized `ds^2 / h^2` along a direction.
fn second_moment<F: ParamFamily>(family: &F, a: &Angles, dir: &[f64; 3], h: f64) -> Result<f64> {
    let fwd = overlap_distance(family, a, &displaced(a, dir, h))?;
    let bwd = overlap_distance(family, a, &displaced(a, dir, -h))?;
    Ok(0.5 * (fwd + bwd) / (h * h))
}

/// Quantum metric from ground-state overlaps at displaced points.
///
/// Diagonal entries use `ds^2 = 1 - |<u(a)|u(a + h e_mu)>|^2 ~ g_mu_mu h^2`;
/// off-diagonal entries use polarization along `e_mu + e_nu`. The polar
/// angles must stay inside `[0, pi]` after displacement.
pub fn qgt_finite_difference<F: ParamFamily>(family: &F, angles: &Angles, step: f64) -> Result<GeometricTensor> {
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(invalid(format!("step {step} must lie in (0, {MAX_STEP}]")));
    }
    for (k, &t) in angles[..2].iter().enumerate() {
        // the diagonal pair e_t1 + e_t2 moves both polar angles by the same step
        if t - step < 0.0 || t + step > PI {
            return Err(invalid(format!(
                "polar angle {} = {t} is within one step of the chart boundary",
                Coord::ALL[k].label()
            )));
        }
    }
    let units = Coord::ALL.map(|c| c.unit());
    let diag = [
        second_moment(family, angles, &units[0], step)?,
        second_moment(family, angles, &units[1], step)?,
        second_moment(family, angles, &units[2], step)?,
    ];
    let mut g = Matrix3::from_diagonal(&diag.into());
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let mut dir = [0.0; 3];
        dir[i] = 1.0;
        dir[j] = 1.0;
        let both = second_moment(family, angles, &dir, step)?;
        let off = 0.5 * (both - diag[i] - diag[j]);
        g[(i, j)] = off;
        g[(j, i)] = off;
    }
    Ok(GeometricTensor::from_metric(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit_models::{HyperPoint, MonopoleFamily};
    use crate::quantum_geometry::metric_analytic;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn error_at(step: f64) -> f64 {
        let p = HyperPoint::on_sphere(FRAC_PI_3, FRAC_PI_4, 1.0);
        let g = qgt_finite_difference(&p.family(), &p.angles(), step).unwrap().metric();
        (g - metric_analytic(&p).unwrap().metric()).abs().max()
    }

    #[test]
    fn agrees_with_closed_form() {
        assert!(error_at(1e-3) < 1e-5);
    }

    #[test]
    fn converges_at_second_order() {
        let (e1, e2) = (error_at(2e-2), error_at(1e-2));
        let ratio = e1 / e2;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rejects_chart_boundary_and_bad_step() {
        let f = MonopoleFamily::unit(0.0);
        assert!(qgt_finite_difference(&f, &[0.0005, 1.0, 0.0], 1e-3).is_err());
        assert!(qgt_finite_difference(&f, &[1.0, PI - 1e-4, 0.0], 1e-3).is_err());
        assert!(qgt_finite_difference(&f, &[1.0, 1.0, 0.0], 0.0).is_err());
        assert!(qgt_finite_difference(&f, &[1.0, 1.0, 0.0], 0.5).is_err());
    }

    #[test]
    fn overlap_distance_is_gauge_free() {
        let f = MonopoleFamily::unit(0.0);
        let a = [1.0, 1.0, 0.0];
        assert!(overlap_distance(&f, &a, &a).unwrap().abs() < 1e-14);
        let u = ground_state(&f, &a).unwrap();
        let v = u * num_complex::Complex64::from_polar(1.0, 0.77);
        assert!((fidelity(&u, &v) - 1.0).abs() < 1e-14);
    }
}

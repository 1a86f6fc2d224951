use nalgebra::Matrix3;
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::linalg::{CMatrix3, CVector3};
use crate::quantum_geometry::ground_state;
use crate::qudit_models::HyperPoint;

/// Frame rotation `U_R` that takes the initial ground state to basis state
/// `|0>` through two Euler-type rotations in the `(0,2)` and `(0,1)` planes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameRotation {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub unitary: CMatrix3,
}

/// Rotation `[[cos a, -sin a], [sin a, cos a]]` embedded in levels `(i, j)`.
fn rot_y(i: usize, j: usize, a: f64) -> CMatrix3 {
    let (s, c) = a.sin_cos();
    let mut m = CMatrix3::identity();
    m[(i, i)] = C64::new(c, 0.0);
    m[(i, j)] = C64::new(-s, 0.0);
    m[(j, i)] = C64::new(s, 0.0);
    m[(j, j)] = C64::new(c, 0.0);
    m
}

/// Relative phase `diag(e^{i b/2}, e^{-i b/2})` on levels `(i, j)`.
fn rot_z(i: usize, j: usize, b: f64) -> CMatrix3 {
    let mut m = CMatrix3::identity();
    m[(i, i)] = C64::from_polar(1.0, 0.5 * b);
    m[(j, j)] = C64::from_polar(1.0, -0.5 * b);
    m
}

/// `U_R` for the ground state at `point`.
pub fn frame_rotation(point: &HyperPoint) -> Result<FrameRotation> {
    Ok(frame_rotation_for_state(&ground_state(&point.family(), &point.angles())?))
}

/// `U_R = R01y(alpha2) R01z(beta2) R02y(alpha1) R02z(beta1)`. Zero
/// amplitudes take the principal value `atan2(0, 0) = 0` for their phase.
pub fn frame_rotation_for_state(psi: &CVector3) -> FrameRotation {
    let (a0, a2) = (psi[0].arg(), psi[2].arg());
    let (m0, m1, m2) = (psi[0].norm(), psi[1].norm(), psi[2].norm());
    let beta1 = a2 - a0;
    let alpha1 = m2.atan2(-m0);
    let gamma = 0.5 * (a0 + a2);
    let beta2 = (-psi[1]).arg() - gamma;
    let rho = m0.hypot(m2);
    let alpha2 = (-m1).atan2(rho);
    let unitary: Matrix3<C64> = rot_y(0, 1, alpha2) * rot_z(0, 1, beta2) * rot_y(0, 2, alpha1) * rot_z(0, 2, beta1);
    FrameRotation { alpha1, alpha2, beta1, beta2, unitary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigensystem, unitarity_defect};
    use crate::quench_sim::{evolve, evolve_in_frame, Direction, QuenchSchedule};
    use crate::qudit_models::Coord;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_8};

    #[test]
    fn maps_ground_state_to_level_zero() {
        for (t1, t2, p, l) in [(FRAC_PI_3, FRAC_PI_4, 0.0, 0.0), (2.2, 0.4, 1.3, 0.0), (1.0, 2.5, 4.0, 0.6)] {
            let point = HyperPoint::on_sphere(t1, t2, p).with_offset(l);
            let r = frame_rotation(&point).unwrap();
            assert!(unitarity_defect(&r.unitary) < 1e-12);
            let v = r.unitary * ground_state(&point.family(), &point.angles()).unwrap();
            assert!((v[0].norm() - 1.0).abs() < 1e-12);
            assert!(v[1].norm() < 1e-12 && v[2].norm() < 1e-12);
        }
    }

    #[test]
    fn angle_conventions_at_zero_phi() {
        let point = HyperPoint::on_sphere(FRAC_PI_3, FRAC_PI_4, 0.0);
        let r = frame_rotation(&point).unwrap();
        assert!((r.alpha2 + FRAC_PI_4).abs() < 1e-12);
        assert!((r.beta2 - 0.5 * r.beta1).abs() < 1e-12);
    }

    #[test]
    fn spectrum_is_unchanged() {
        let point = HyperPoint::on_sphere(0.9, 2.0, 0.5);
        let r = frame_rotation(&point).unwrap();
        let h = crate::build_h4d(&point);
        let e0 = eigensystem(&h).unwrap().energies;
        let e1 = eigensystem(&h.conjugate_by(&r.unitary)).unwrap().energies;
        for k in 0..3 {
            assert!((e0[k] - e1[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn rotated_frame_probabilities_match() {
        let point = HyperPoint::on_sphere(FRAC_PI_3, FRAC_PI_4, 0.0);
        for s in [
            QuenchSchedule::sudden(Direction::Axis(Coord::Theta1), FRAC_PI_8).unwrap(),
            QuenchSchedule::paper_2020(Direction::pair(Coord::Theta2, Coord::Phi).unwrap(), FRAC_PI_8).unwrap(),
        ] {
            let a = evolve(&point, &s).unwrap().p_excited;
            let b = evolve_in_frame(&point, &s).unwrap().p_excited;
            assert!((a - b).abs() < 1e-10);
        }
    }
}

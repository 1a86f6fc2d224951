use nalgebra::{Matrix2, SymmetricEigen, Vector2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

use super::GAP_THRESHOLD;

/// Monopole charge of the spin-1/2 Weyl Hamiltonian; `-1` flips `q_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiracCharge {
    #[default]
    Plus,
    Minus,
}

impl DiracCharge {
    pub fn sign(self) -> f64 {
        match self {
            DiracCharge::Plus => 1.0,
            DiracCharge::Minus => -1.0,
        }
    }
}

/// Ground-band metric over `(theta, phi)` and the Berry curvature `F_{theta phi}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracGeometry {
    pub metric: Matrix2<f64>,
    pub berry: f64,
}

/// Closed forms for `q . sigma` on the unit sphere:
/// `g = diag(1/4, sin^2 theta / 4)`, `F = 2 sqrt(det g) = sin theta / 2`.
pub fn dirac_monopole_geometry(theta: f64, _phi: f64) -> DiracGeometry {
    let s = theta.sin();
    DiracGeometry {
        metric: Matrix2::new(0.25, 0.0, 0.0, 0.25 * s * s),
        berry: 0.5 * s,
    }
}

fn pauli_hamiltonian(q: [f64; 3]) -> Matrix2<C64> {
    Matrix2::new(
        C64::new(q[2], 0.0),
        C64::new(q[0], -q[1]),
        C64::new(q[0], q[1]),
        C64::new(-q[2], 0.0),
    )
}

fn field(theta: f64, phi: f64, charge: DiracCharge) -> ([f64; 3], [[f64; 3]; 2]) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let x = charge.sign();
    let q = [x * st * cp, st * sp, ct];
    let dq = [[x * ct * cp, ct * sp, -st], [-x * st * sp, st * cp, 0.0]];
    (q, dq)
}

/// Ground-band geometry of `(+-q_x, q_y, q_z) . sigma` by the two-level
/// sum-over-states formula.
pub fn dirac_qgt_perturbation(theta: f64, phi: f64, charge: DiracCharge) -> Result<DiracGeometry> {
    let (q, dq) = field(theta, phi, charge);
    let eig = SymmetricEigen::new(pauli_hamiltonian(q));
    let (lo, hi) = if eig.eigenvalues[0] <= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let gap = eig.eigenvalues[hi] - eig.eigenvalues[lo];
    if gap <= GAP_THRESHOLD {
        return Err(Error::Degenerate { gap, threshold: GAP_THRESHOLD });
    }
    let u0: Vector2<C64> = eig.eigenvectors.column(lo).into();
    let u1: Vector2<C64> = eig.eigenvectors.column(hi).into();
    let d = dq.map(|dqm| {
        let amp = u1.dotc(&(pauli_hamiltonian(dqm) * u0)) / (-gap);
        u1 * amp
    });
    let chi = Matrix2::from_fn(|i, j| d[i].dotc(&d[j]));
    Ok(DiracGeometry {
        metric: chi.map(|z| z.re),
        berry: -2.0 * chi[(0, 1)].im,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn closed_form_examples() {
        let g = dirac_monopole_geometry(FRAC_PI_2, 0.3);
        assert_eq!(g.metric[(1, 1)], 0.25);
        assert_eq!(g.berry, 0.5);
        assert_eq!(dirac_monopole_geometry(0.0, 1.0).berry, 0.0);
        assert!((g.berry - 2.0 * g.metric.determinant().sqrt()).abs() < 1e-15);
    }

    #[test]
    fn perturbation_matches_closed_form() {
        let num = dirac_qgt_perturbation(1.0, 2.0, DiracCharge::Plus).unwrap();
        let want = dirac_monopole_geometry(1.0, 2.0);
        assert!((num.metric - want.metric).abs().max() < 1e-8);
        assert!((num.berry - want.berry).abs() < 1e-8);
    }

    #[test]
    fn reversed_charge_flips_curvature() {
        let plus = dirac_qgt_perturbation(0.7, 4.0, DiracCharge::Plus).unwrap();
        let minus = dirac_qgt_perturbation(0.7, 4.0, DiracCharge::Minus).unwrap();
        assert!((plus.berry + minus.berry).abs() < 1e-12);
        assert!((plus.metric - minus.metric).abs().max() < 1e-12);
    }
}

//! Dense 3x3 complex Hermitian operators and their eigensystems.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};

pub type CVector3 = Vector3<C64>;
pub type CMatrix3 = Matrix3<C64>;

pub(crate) const HERMITIAN_TOL: f64 = 1e-12;
const GAUGE_TIE: f64 = 1e-12;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A 3x3 complex Hermitian matrix.
///
/// Construction through [`HermitianOperator3::new`] checks Hermiticity to
/// within `1e-12`; the model builders in this crate produce exactly
/// Hermitian matrices and use the unchecked constructor.
#[derive(Clone, Copy, PartialEq)]
pub struct HermitianOperator3(CMatrix3);

impl HermitianOperator3 {
    pub fn new(m: CMatrix3) -> Result<Self> {
        let dev = hermiticity_defect(&m);
        if dev > HERMITIAN_TOL {
            return Err(invalid(format!("matrix is not Hermitian (defect {dev:.3e})")));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix without checking Hermiticity; [`eigensystem`] re-checks.
    pub fn from_matrix_unchecked(m: CMatrix3) -> Self {
        Self(m)
    }

    pub fn zero() -> Self {
        Self(CMatrix3::zeros())
    }

    /// Builds the Hermitian matrix whose upper triangle is given row by row
    /// (`d` real diagonal, `u` = entries (0,1), (0,2), (1,2)).
    pub fn from_upper(d: [f64; 3], u: [C64; 3]) -> Self {
        let m = CMatrix3::new(
            c(d[0], 0.0), u[0], u[1],
            u[0].conj(), c(d[1], 0.0), u[2],
            u[1].conj(), u[2].conj(), c(d[2], 0.0),
        );
        Self(m)
    }

    pub fn matrix(&self) -> &CMatrix3 {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0 * c(s, 0.0))
    }

    /// `U H U^dagger`.
    pub fn conjugate_by(&self, u: &CMatrix3) -> Self {
        let m = u * self.0 * u.adjoint();
        // symmetrize away rounding so the result stays exactly Hermitian
        Self((m + m.adjoint()) * c(0.5, 0.0))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Exact unitary `exp(-i H t)` from the eigendecomposition.
    pub fn propagator(&self, t: f64) -> CMatrix3 {
        let es = eigensystem_unchecked(self);
        let mut u = CMatrix3::zeros();
        for (k, e) in es.energies.iter().enumerate() {
            let v = es.states[k];
            let phase = C64::from_polar(1.0, -e * t);
            u += v * v.adjoint() * phase;
        }
        u
    }
}

impl fmt::Debug for HermitianOperator3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("HermitianOperator3").field(&self.0).finish()
    }
}

impl Add for HermitianOperator3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for HermitianOperator3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul<f64> for HermitianOperator3 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

pub(crate) fn hermiticity_defect(m: &CMatrix3) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Sorted, orthonormal, gauge-fixed eigensystem of a 3x3 Hermitian matrix.
///
/// `energies` ascend; `states[k]` belongs to `energies[k]`. Each state has
/// its largest-magnitude component real and positive (ties go to the lowest
/// index).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem3 {
    pub energies: [f64; 3],
    pub states: [CVector3; 3],
}

impl Eigensystem3 {
    pub fn ground(&self) -> &CVector3 {
        &self.states[0]
    }

    /// Gap between the lowest level and the next one.
    pub fn ground_gap(&self) -> f64 {
        self.energies[1] - self.energies[0]
    }

    /// Columns are the eigenvectors.
    pub fn unitary(&self) -> CMatrix3 {
        CMatrix3::from_columns(&self.states)
    }

    pub fn reconstruct(&self) -> CMatrix3 {
        let v = self.unitary();
        let d = CMatrix3::from_diagonal(&Vector3::from_iterator(
            self.energies.iter().map(|&e| c(e, 0.0)),
        ));
        v * d * v.adjoint()
    }
}

/// Diagonalizes a Hermitian operator.
///
/// Inputs built through [`HermitianOperator3::new`] are Hermitian by
/// construction; the check here guards operators assembled by hand with
/// [`HermitianOperator3::from_matrix_unchecked`].
pub fn eigensystem(h: &HermitianOperator3) -> Result<Eigensystem3> {
    let dev = hermiticity_defect(&h.0);
    if dev > HERMITIAN_TOL {
        return Err(invalid(format!("matrix is not Hermitian (defect {dev:.3e})")));
    }
    Ok(eigensystem_unchecked(h))
}

pub(crate) fn eigensystem_unchecked(h: &HermitianOperator3) -> Eigensystem3 {
    let eig = SymmetricEigen::new(h.0);
    let mut pairs: Vec<(f64, CVector3)> = (0..3)
        .map(|k| {
            let v: CVector3 = eig.eigenvectors.column(k).into_owned();
            (eig.eigenvalues[k], fix_gauge(v.normalize()))
        })
        .collect();
    // exact ties are broken on the vectors so the order is reproducible
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| lexicographic(&a.1, &b.1)));
    Eigensystem3 {
        energies: [pairs[0].0, pairs[1].0, pairs[2].0],
        states: [pairs[0].1, pairs[1].1, pairs[2].1],
    }
}

fn lexicographic(a: &CVector3, b: &CVector3) -> Ordering {
    for k in 0..3 {
        for (x, y) in [(a[k].re, b[k].re), (a[k].im, b[k].im)] {
            match x.partial_cmp(&y) {
                Some(Ordering::Equal) | None => continue,
                Some(o) => return o,
            }
        }
    }
    Ordering::Equal
}

/// Rotates the global phase so the largest-magnitude component is real
/// positive. Components within `1e-12` of the maximum count as ties and the
/// lowest index wins.
pub fn fix_gauge(v: CVector3) -> CVector3 {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return v;
    }
    let k = v
        .iter()
        .position(|z| z.norm() >= max - GAUGE_TIE)
        .unwrap_or(0);
    let phase = v[k].conj() / v[k].norm();
    v * phase
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &CVector3, b: &CVector3) -> f64 {
    a.dotc(b).norm_sqr()
}

pub fn unitarity_defect(u: &CMatrix3) -> f64 {
    (u.adjoint() * u - CMatrix3::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> HermitianOperator3 {
        HermitianOperator3::from_upper([0.3, -1.2, 0.5], [c(0.4, -0.7), c(0.0, 0.2), c(-1.1, 0.3)])
    }

    #[test]
    fn reconstructs_and_is_orthonormal() {
        let h = sample();
        let es = eigensystem(&h).unwrap();
        assert!((es.reconstruct() - h.matrix()).iter().all(|z| z.norm() < 1e-10));
        for i in 0..3 {
            for j in 0..3 {
                let d = if i == j { 1.0 } else { 0.0 };
                assert!((es.states[i].dotc(&es.states[j]) - c(d, 0.0)).norm() < 1e-10);
            }
        }
        assert!(es.energies[0] <= es.energies[1] && es.energies[1] <= es.energies[2]);
    }

    #[test]
    fn gauge_makes_largest_component_real_positive() {
        let es = eigensystem(&sample()).unwrap();
        for v in es.states {
            let k = (0..3)
                .max_by(|&a, &b| v[a].norm().partial_cmp(&v[b].norm()).unwrap())
                .unwrap();
            assert!(v[k].im.abs() < 1e-14 && v[k].re > 0.0);
        }
    }

    #[test]
    fn repeated_calls_are_identical() {
        let h = sample();
        assert_eq!(eigensystem(&h).unwrap(), eigensystem(&h).unwrap());
    }

    #[test]
    fn zero_matrix_is_triply_degenerate() {
        let es = eigensystem(&HermitianOperator3::zero()).unwrap();
        assert_eq!(es.energies, [0.0; 3]);
        assert!(unitarity_defect(&es.unitary()) < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = *sample().matrix();
        m[(0, 1)] += c(1e-6, 0.0);
        assert!(HermitianOperator3::new(m).is_err());
        assert!(eigensystem(&HermitianOperator3::from_matrix_unchecked(m)).is_err());
    }

    #[test]
    fn propagator_is_unitary() {
        let u = sample().propagator(0.37);
        assert!(unitarity_defect(&u) < 1e-12);
    }
}

//! Quantum geometric tensor, quantum metric, Berry curvature and the 3-form
//! curvature of the ground band, from closed forms and numerical routes.

mod dirac;
mod finite_difference;
mod perturbation;

pub use dirac::{dirac_monopole_geometry, dirac_qgt_perturbation, DiracCharge, DiracGeometry};
pub use finite_difference::{ground_state, overlap_distance, qgt_finite_difference};
pub use perturbation::{
    jet_from_states, phase_curvature_wedge, qgt_perturbation, signed_curvature, state_jet, tensor_phase_form,
    StateJet, GAP_THRESHOLD,
};

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::qudit_models::{Angles, HyperPoint, MonopoleFamily};
use crate::sweep::SweepResult;

/// Below this `sin theta1 sin theta2` the chart is treated as a pole.
pub const CHART_POLE_TOL: f64 = 1e-12;
const DET_NOISE: f64 = 1e-12;

/// `chi_{mu nu}` over `(theta1, theta2, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricTensor {
    pub chi: Matrix3<C64>,
}

impl GeometricTensor {
    pub fn from_metric(g: Matrix3<f64>) -> Self {
        Self { chi: g.map(|x| C64::new(x, 0.0)) }
    }

    /// `g = Re chi`.
    pub fn metric(&self) -> Matrix3<f64> {
        self.chi.map(|z| z.re)
    }

    /// `F = -2 Im chi`.
    pub fn berry(&self) -> Matrix3<f64> {
        self.chi.map(|z| -2.0 * z.im)
    }

    pub fn metric_det(&self) -> f64 {
        self.metric().determinant()
    }
}

/// Value of the 3-form component `H_{theta1 theta2 phi}` at a point.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CurvatureScalar(pub f64);

impl CurvatureScalar {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub(crate) fn is_chart_pole(a: &Angles) -> bool {
    (a[0].sin() * a[1].sin()).abs() < CHART_POLE_TOL
}

/// Closed-form ground-band metric of `H_4D` on the 3-sphere.
pub fn metric_analytic(point: &HyperPoint) -> Result<GeometricTensor> {
    if point.lambda_offset != 0.0 {
        return Err(invalid("closed-form metric is only defined for zero offset"));
    }
    if point.r <= 0.0 {
        return Err(Error::Degenerate { gap: 0.0, threshold: GAP_THRESHOLD });
    }
    Ok(GeometricTensor::from_metric(sphere_metric(point.theta1, point.theta2)))
}

fn sphere_metric(t1: f64, t2: f64) -> Matrix3<f64> {
    let (s1, c1) = t1.sin_cos();
    let (s2, c2) = t2.sin_cos();
    let g11 = (3.0 - (2.0 * t2).cos()) / 8.0;
    let g22 = 0.25 * s1 * s1 * (2.0 * c2 * c2 - (c1 * c1 - 2.0) * s2 * s2);
    let g33 = -0.25 * s1 * s1 * s2 * s2 * (s1 * s1 * s2 * s2 - 2.0);
    let g12 = 0.25 * c1 * c2 * s1 * s2;
    let g13 = -0.25 * c2 * s1 * s1 * s2 * s2;
    let g23 = 0.25 * c1 * s1.powi(3) * s2.powi(3);
    Matrix3::new(g11, g12, g13, g12, g22, g23, g13, g23, g33)
}

/// Image polar angle and its derivative under the offset map
/// `(chi r cos t1 + Lambda, r sin t1) -> t1'`.
pub fn offset_map(family: &MonopoleFamily, theta1: f64) -> Result<(f64, f64)> {
    let r = family.radius;
    let chi = family.chirality.sign();
    let (s, c) = theta1.sin_cos();
    let x = chi * r * c + family.lambda_offset;
    let y = r * s;
    let rho2 = x * x + y * y;
    if rho2 < GAP_THRESHOLD * GAP_THRESHOLD {
        return Err(Error::Degenerate { gap: rho2.sqrt(), threshold: GAP_THRESHOLD });
    }
    let image = y.atan2(x);
    let jac = (chi * r * r + family.lambda_offset * r * c) / rho2;
    Ok((image, jac))
}

/// Closed-form metric of any monopole family, obtained by pulling the
/// unit-sphere metric back through the offset map (only `theta1` moves).
pub fn metric_analytic_offset(family: &MonopoleFamily, angles: &Angles) -> Result<GeometricTensor> {
    let (image, jac) = offset_map(family, angles[0])?;
    let mut g = sphere_metric(image, angles[1]);
    for k in 0..3 {
        g[(0, k)] *= jac;
        g[(k, 0)] *= jac;
    }
    Ok(GeometricTensor::from_metric(g))
}

/// Signed closed-form curvature `sin^2 t1' sin t2 dt1'/dt1` of a monopole family.
pub fn curvature_analytic(family: &MonopoleFamily, angles: &Angles) -> Result<CurvatureScalar> {
    if is_chart_pole(angles) {
        return Ok(CurvatureScalar(0.0));
    }
    let (image, jac) = offset_map(family, angles[0])?;
    Ok(CurvatureScalar(image.sin().powi(2) * angles[1].sin() * jac))
}

/// `4 sqrt(det g)`. Determinants in `(-1e-12, 0)` count as zero; anything
/// more negative is a numerical failure.
pub fn tensor_curvature(metric: &GeometricTensor) -> Result<CurvatureScalar> {
    let det = metric.metric_det();
    if det < -DET_NOISE {
        return Err(Error::Numerical(format!("metric determinant {det:.3e} is negative")));
    }
    Ok(CurvatureScalar(4.0 * det.max(0.0).sqrt()))
}

/// `4 sqrt(max(det g, 0))` for metrics estimated from finite-step data, which
/// need not be positive semidefinite.
pub fn tensor_curvature_estimated(metric: &Matrix3<f64>) -> CurvatureScalar {
    CurvatureScalar(4.0 * metric.determinant().max(0.0).sqrt())
}

/// Column names of metric maps.
pub const METRIC_COLUMNS: [&str; 8] = ["theta1", "theta2", "g_t1t1", "g_t2t2", "g_pp", "g_t1t2", "g_t1p", "g_t2p"];

/// Column names of curvature maps.
pub const CURVATURE_COLUMNS: [&str; 3] = ["theta1", "theta2", "h_t1t2p"];

/// Uniform `(theta1, theta2)` map grid over `[0, pi]^2`, endpoints included,
/// at fixed `phi`. Points are ordered with `theta1` outermost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapGrid {
    pub n_theta1: usize,
    pub n_theta2: usize,
    pub phi: f64,
}

impl MapGrid {
    pub fn new(n_theta1: usize, n_theta2: usize, phi: f64) -> Result<Self> {
        if n_theta1 < 2 || n_theta2 < 2 {
            return Err(invalid("map grids need at least two points per axis"));
        }
        Ok(Self { n_theta1, n_theta2, phi })
    }

    pub fn len(&self) -> usize {
        self.n_theta1 * self.n_theta2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<Angles> {
        let step = |n: usize| PI / (n - 1) as f64;
        let (h1, h2) = (step(self.n_theta1), step(self.n_theta2));
        (0..self.n_theta1)
            .flat_map(|i| (0..self.n_theta2).map(move |j| (i, j)))
            .map(|(i, j)| [i as f64 * h1, j as f64 * h2, self.phi])
            .collect()
    }

    pub fn is_pole(&self, a: &Angles) -> bool {
        is_chart_pole(a)
    }
}

/// Closed-form metric map of a monopole family. Degenerate points give NaN rows.
pub fn metric_field(grid: &MapGrid, family: &MonopoleFamily) -> Result<SweepResult> {
    let rows: Vec<Result<Vec<f64>>> = grid
        .points()
        .par_iter()
        .map(|a| match metric_analytic_offset(family, a) {
            Ok(t) => Ok(metric_row(a, &t.metric())),
            Err(Error::Degenerate { .. }) => Ok(metric_row(a, &Matrix3::from_element(f64::NAN))),
            Err(e) => Err(e),
        })
        .collect();
    collect_rows(&METRIC_COLUMNS, rows)
}

/// Signed curvature map of a monopole family.
pub fn curvature_field(grid: &MapGrid, family: &MonopoleFamily) -> Result<SweepResult> {
    let rows: Vec<Result<Vec<f64>>> = grid
        .points()
        .par_iter()
        .map(|a| match curvature_analytic(family, a) {
            Ok(k) => Ok(vec![a[0], a[1], k.value()]),
            Err(Error::Degenerate { .. }) => Ok(vec![a[0], a[1], f64::NAN]),
            Err(e) => Err(e),
        })
        .collect();
    collect_rows(&CURVATURE_COLUMNS, rows)
}

pub(crate) fn metric_row(a: &Angles, g: &Matrix3<f64>) -> Vec<f64> {
    vec![a[0], a[1], g[(0, 0)], g[(1, 1)], g[(2, 2)], g[(0, 1)], g[(0, 2)], g[(1, 2)]]
}

fn collect_rows(columns: &[&str], rows: Vec<Result<Vec<f64>>>) -> Result<SweepResult> {
    let mut table = SweepResult::new(columns.iter().copied());
    for row in rows {
        table.push(row?)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn analytic(t1: f64, t2: f64) -> Matrix3<f64> {
        metric_analytic(&HyperPoint::on_sphere(t1, t2, 0.0)).unwrap().metric()
    }

    #[test]
    fn closed_form_examples() {
        let g = analytic(FRAC_PI_2, FRAC_PI_2);
        assert!((g[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((g[(1, 1)] - 0.5).abs() < 1e-15);
        assert!((g[(2, 2)] - 0.25).abs() < 1e-15);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!(g[(i, j)].abs() < 1e-15);
        }
        let g = analytic(0.0, 1.2);
        assert_eq!(g[(1, 1)], 0.0);
        assert_eq!(g[(2, 2)], 0.0);
    }

    #[test]
    fn rejects_offset_and_origin() {
        assert!(metric_analytic(&HyperPoint::on_sphere(1.0, 1.0, 0.0).with_offset(0.1)).is_err());
        assert!(metric_analytic(&HyperPoint::on_sphere(1.0, 1.0, 0.0).with_radius(0.0)).is_err());
    }

    #[test]
    fn curvature_examples() {
        let k = |t1, t2| tensor_curvature(&metric_analytic(&HyperPoint::on_sphere(t1, t2, 0.0)).unwrap()).unwrap().value();
        assert!((k(FRAC_PI_2, FRAC_PI_2) - 1.0).abs() < 1e-12);
        assert!((analytic(FRAC_PI_2, FRAC_PI_2).determinant() - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(k(0.0, 0.7), 0.0);
        assert!((k(FRAC_PI_4, FRAC_PI_2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn curvature_identity_on_grid() {
        for i in 0..=60 {
            for j in 0..=60 {
                let (t1, t2) = (PI * i as f64 / 60.0, PI * j as f64 / 60.0);
                let k = tensor_curvature(&GeometricTensor::from_metric(analytic(t1, t2))).unwrap();
                assert!((k.value() - t1.sin().powi(2) * t2.sin()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn negative_determinant_is_a_failure() {
        let g = GeometricTensor::from_metric(Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, -1e-6)));
        assert!(matches!(tensor_curvature(&g), Err(Error::Numerical(_))));
        let g = GeometricTensor::from_metric(Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, -1e-14)));
        assert_eq!(tensor_curvature(&g).unwrap().value(), 0.0);
    }

    #[test]
    fn offset_pullback_reduces_to_closed_form() {
        let fam = MonopoleFamily::unit(0.0);
        let a = [FRAC_PI_3, FRAC_PI_4, 1.0];
        let g = metric_analytic_offset(&fam, &a).unwrap().metric();
        assert!((g - analytic(a[0], a[1])).abs().max() < 1e-15);
        assert!((curvature_analytic(&fam, &a).unwrap().value() - a[0].sin().powi(2) * a[1].sin()).abs() < 1e-15);
    }

    #[test]
    fn offset_curvature_magnitude_is_four_root_det() {
        for lambda in [-2.0, -0.9, 0.5, 1.1, 3.0] {
            for fam in [MonopoleFamily::unit(lambda), MonopoleFamily::unit(lambda).anti()] {
                let a = [2.3, 0.8, 0.0];
                let signed = curvature_analytic(&fam, &a).unwrap().value();
                let mag = tensor_curvature(&metric_analytic_offset(&fam, &a).unwrap()).unwrap().value();
                assert!((signed.abs() - mag).abs() < 1e-12, "lambda {lambda}");
            }
        }
    }
}

//! Quadrature of curvature forms into topological charges: the first Chern
//! number of the spin-1/2 monopole on S^2 and the Dixmier-Douady charge of
//! the spin-1 tensor monopole on S^3.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::eigensystem_unchecked;
use crate::quantum_geometry::{
    curvature_analytic, dirac_qgt_perturbation, is_chart_pole, signed_curvature, tensor_curvature_estimated,
    tensor_phase_form, DiracCharge, GAP_THRESHOLD,
};
use crate::quench_sim::{estimate_metric, QuenchSchedule};
use crate::qudit_models::{Angles, MonopoleFamily, ParamFamily};
use crate::sweep::{Metadata, SweepResult};

/// One-dimensional rule on `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Midpoint,
    Simpson,
}

impl Rule {
    /// Nodes and weights for `n` intervals on `[0, pi]`.
    fn nodes(self, n: usize) -> Vec<(f64, f64)> {
        let h = PI / n as f64;
        match self {
            Rule::Midpoint => (0..n).map(|i| ((i as f64 + 0.5) * h, h)).collect(),
            Rule::Simpson => (0..=n)
                .map(|i| {
                    let w = if i == 0 || i == n {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    (i as f64 * h, w * h / 3.0)
                })
                .collect(),
        }
    }
}

/// Product grid over `(theta1, theta2, phi)`. Polar counts are intervals on
/// `[0, pi]`; `n_phi` periodic nodes on `[0, 2 pi)`, where `n_phi = 1`
/// collapses the `phi` integral to a factor `2 pi` for `phi`-symmetric families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub n_theta1: usize,
    pub n_theta2: usize,
    pub n_phi: usize,
    pub rule: Rule,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self { n_theta1: 60, n_theta2: 60, n_phi: 1, rule: Rule::Simpson }
    }
}

impl QuadratureGrid {
    pub fn new(n_theta1: usize, n_theta2: usize, n_phi: usize, rule: Rule) -> Result<Self> {
        if n_theta1 == 0 || n_theta2 == 0 || n_phi == 0 {
            return Err(invalid("grid counts must be positive"));
        }
        if rule == Rule::Simpson && (n_theta1 % 2 == 1 || n_theta2 % 2 == 1) {
            return Err(invalid("Simpson rule needs even interval counts"));
        }
        Ok(Self { n_theta1, n_theta2, n_phi, rule })
    }

    /// 240 x 60 Simpson: resolves the narrow integrand near `|Lambda| = 1`.
    pub fn phase_diagram() -> Self {
        Self { n_theta1: 240, ..Self::default() }
    }

    pub fn doubled(&self) -> Self {
        Self { n_theta1: 2 * self.n_theta1, n_theta2: 2 * self.n_theta2, ..*self }
    }

    fn shifted(&self) -> Self {
        Self { rule: Rule::Midpoint, ..*self }
    }

    fn phi_nodes(&self) -> Vec<(f64, f64)> {
        let h = TAU / self.n_phi as f64;
        (0..self.n_phi).map(|k| (k as f64 * h, h)).collect()
    }
}

/// How the 3-form curvature is obtained at each node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricSource {
    /// Closed-form metric pulled back through the offset map.
    Analytic,
    /// Sum-over-states QGT.
    Perturbation,
    /// Metric estimated from simulated quench probabilities.
    Quench(QuenchSchedule),
}

/// Method tag carried by results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Perturbation,
    Quench,
}

impl MetricSource {
    pub fn method(&self) -> Method {
        match self {
            MetricSource::Analytic => Method::Analytic,
            MetricSource::Perturbation => Method::Perturbation,
            MetricSource::Quench(_) => Method::Quench,
        }
    }

    pub fn delta_q(&self) -> Option<f64> {
        match self {
            MetricSource::Quench(s) => Some(s.delta_q),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargeResult {
    pub value: f64,
    pub grid: QuadratureGrid,
    pub method: Method,
    pub delta_q: Option<f64>,
    /// True when a degenerate node forced the half-step (midpoint) grid.
    pub grid_shifted: bool,
}

fn degenerate_at<F: ParamFamily>(family: &F, a: &Angles) -> Option<f64> {
    let gap = eigensystem_unchecked(&family.hamiltonian(a)).ground_gap();
    (gap <= GAP_THRESHOLD).then_some(gap)
}

/// `(1 / 2 pi^2) sum w H(theta1, theta2, phi)`. Rows of constant `theta1` are
/// summed in parallel and reduced in index order.
fn integrate<F, G>(family: &F, grid: &QuadratureGrid, integrand: G) -> Result<f64>
where
    F: ParamFamily,
    G: Fn(&Angles) -> Result<f64> + Sync,
{
    let phi_nodes = if grid.n_phi == 1 {
        if !family.phi_symmetric() {
            return Err(invalid("collapsing the phi integral needs a phi-symmetric family"));
        }
        vec![(0.0, TAU)]
    } else {
        grid.phi_nodes()
    };
    let t1 = grid.rule.nodes(grid.n_theta1);
    let t2 = grid.rule.nodes(grid.n_theta2);
    let rows: Vec<Result<f64>> = t1
        .par_iter()
        .map(|&(x1, w1)| {
            let mut acc = 0.0;
            for &(x2, w2) in &t2 {
                for &(p, wp) in &phi_nodes {
                    let a = [x1, x2, p];
                    if is_chart_pole(&a) {
                        if let Some(gap) = degenerate_at(family, &a) {
                            return Err(Error::Degenerate { gap, threshold: GAP_THRESHOLD });
                        }
                        continue;
                    }
                    acc += w1 * w2 * wp * integrand(&a)?;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = 0.0;
    for r in rows {
        total += r?;
    }
    Ok(total / (2.0 * PI * PI))
}

fn integrate_with_shift<F, G>(family: &F, grid: &QuadratureGrid, integrand: G) -> Result<(f64, QuadratureGrid, bool)>
where
    F: ParamFamily,
    G: Fn(&Angles) -> Result<f64> + Sync,
{
    match integrate(family, grid, &integrand) {
        Ok(v) => Ok((v, *grid, false)),
        Err(Error::Degenerate { .. }) if grid.rule == Rule::Simpson => {
            let shifted = grid.shifted();
            Ok((integrate(family, &shifted, &integrand)?, shifted, true))
        }
        Err(e) => Err(e),
    }
}

fn quench_integrand<F: ParamFamily>(family: &F, a: &Angles, schedule: &QuenchSchedule) -> Result<f64> {
    let sign = match tensor_phase_form(family, a)? {
        Some(form) => form.signum(),
        None => return Ok(0.0),
    };
    let g = estimate_metric(family, a, schedule)?;
    Ok(sign * tensor_curvature_estimated(&g).value())
}

/// Dixmier-Douady charge of the unit-radius monopole family with offset `Lambda`.
pub fn dd_invariant(source: &MetricSource, grid: &QuadratureGrid, lambda_offset: f64) -> Result<ChargeResult> {
    dd_invariant_for(&MonopoleFamily::unit(lambda_offset), source, grid)
}

/// Dixmier-Douady charge of a monopole family. If a node sits on a band
/// touching, a Simpson grid is replaced by the half-step midpoint grid and
/// the result is flagged.
pub fn dd_invariant_for(family: &MonopoleFamily, source: &MetricSource, grid: &QuadratureGrid) -> Result<ChargeResult> {
    let (value, grid, grid_shifted) = match source {
        MetricSource::Analytic => {
            integrate_with_shift(family, grid, |a| Ok(curvature_analytic(family, a)?.value()))?
        }
        MetricSource::Perturbation => return dd_invariant_perturbation(family, grid),
        MetricSource::Quench(s) => {
            let s = s.validated()?;
            integrate_with_shift(family, grid, |a| quench_integrand(family, a, &s))?
        }
    };
    Ok(ChargeResult { value, grid, method: source.method(), delta_q: source.delta_q(), grid_shifted })
}

/// Dixmier-Douady charge of any family from the signed perturbative 3-form.
pub fn dd_invariant_perturbation<F: ParamFamily>(family: &F, grid: &QuadratureGrid) -> Result<ChargeResult> {
    let (value, grid, grid_shifted) =
        integrate_with_shift(family, grid, |a| Ok(signed_curvature(family, a)?.value()))?;
    Ok(ChargeResult { value, grid, method: Method::Perturbation, delta_q: None, grid_shifted })
}

/// Columns of a `Lambda` sweep.
pub const SWEEP_COLUMNS: [&str; 3] = ["lambda", "q_dd", "grid_shifted"];

/// `Q_DD(Lambda)` table, evaluated in parallel and kept in input order.
pub fn lambda_sweep(lambdas: &[f64], source: &MetricSource, grid: &QuadratureGrid) -> Result<SweepResult> {
    let results: Vec<Result<ChargeResult>> = lambdas.par_iter().map(|&l| dd_invariant(source, grid, l)).collect();
    let mut table = SweepResult::new(SWEEP_COLUMNS);
    table.metadata = Metadata::new(serde_json::Value::Null);
    for (&l, r) in lambdas.iter().zip(results) {
        let r = r?;
        if r.grid_shifted {
            table.metadata.notes.push(format!("lambda {l}: node on a band touching, midpoint grid used"));
        }
        table.push(vec![l, r.value, if r.grid_shifted { 1.0 } else { 0.0 }])?;
    }
    Ok(table)
}

/// Integration order of the 2-form on S^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `(theta, phi)`.
    #[default]
    Standard,
    /// `(phi, theta)`.
    Reversed,
}

/// S^2 grid: `n_theta` intervals on `[0, pi]`, `n_phi` periodic nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    pub rule: Rule,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize, rule: Rule) -> Result<Self> {
        QuadratureGrid::new(n_theta, 2, n_phi, rule)?;
        Ok(Self { n_theta, n_phi, rule })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChernResult {
    pub value: f64,
    pub grid: SphereGrid,
    pub charge: i8,
    pub orientation: Orientation,
}

/// `C1 = (1 / 2 pi) integral F` of the lower band of `(+-q_x, q_y, q_z) . sigma`.
pub fn chern1(grid: &SphereGrid, charge: DiracCharge, orientation: Orientation) -> Result<ChernResult> {
    let hp = TAU / grid.n_phi as f64;
    let thetas = grid.rule.nodes(grid.n_theta);
    let rows: Vec<Result<f64>> = thetas
        .par_iter()
        .map(|&(t, w)| {
            let mut acc = 0.0;
            for k in 0..grid.n_phi {
                acc += w * hp * dirac_qgt_perturbation(t, k as f64 * hp, charge)?.berry;
            }
            Ok(acc)
        })
        .collect();
    let mut total = 0.0;
    for r in rows {
        total += r?;
    }
    let sign = match orientation {
        Orientation::Standard => 1.0,
        Orientation::Reversed => -1.0,
    };
    Ok(ChernResult {
        value: sign * total / TAU,
        grid: *grid,
        charge: charge.sign() as i8,
        orientation,
    })
}

//! Simulated measurement protocol: linear parameter ramps, unitary evolution,
//! excitation probabilities and metric estimates built from them.

mod frame;

pub use frame::{frame_rotation, frame_rotation_for_state, FrameRotation};

use std::f64::consts::TAU;

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{fidelity, CMatrix3, CVector3, HermitianOperator3};
use crate::quantum_geometry::{ground_state, metric_analytic_offset, metric_row, MapGrid, METRIC_COLUMNS};
use crate::qudit_models::{Angles, Conjugated, Coord, HyperPoint, MonopoleFamily, ParamFamily};
use crate::sweep::SweepResult;

/// `2 pi x 5 MHz`.
pub const DEFAULT_OMEGA0: f64 = TAU * 5e6;
/// Ramp time of the `paper-2020` preset.
pub const PRESET_RAMP_TIME: f64 = 9e-9;
pub const DEFAULT_STEPS: usize = 256;
/// Largest change of `p_excited` accepted when the slice count doubles.
pub const STEP_TOL: f64 = 1e-8;
const MAX_STEPS: usize = 1 << 16;

/// Quench direction in raw coordinate increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Axis(Coord),
    Pair(Coord, Coord),
}

impl Direction {
    pub fn pair(mu: Coord, nu: Coord) -> Result<Self> {
        if mu == nu {
            return Err(invalid("a two-axis quench needs distinct axes"));
        }
        let (a, b) = if mu.index() < nu.index() { (mu, nu) } else { (nu, mu) };
        Ok(Direction::Pair(a, b))
    }

    pub fn vector(self) -> Angles {
        match self {
            Direction::Axis(c) => c.unit(),
            Direction::Pair(a, b) => {
                let mut v = a.unit();
                v[b.index()] += 1.0;
                v
            }
        }
    }
}

/// Linear ramp `q(t) = q + (t/T) delta_q e` driven at frequency scale `omega0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuenchSchedule {
    pub direction: Direction,
    pub delta_q: f64,
    /// Seconds; zero is the ideal sudden quench.
    pub ramp_time: f64,
    pub n_steps: usize,
    /// Angular frequency (rad/s) multiplying the dimensionless Hamiltonian.
    pub omega0: f64,
}

impl QuenchSchedule {
    pub fn sudden(direction: Direction, delta_q: f64) -> Result<Self> {
        Self { direction, delta_q, ramp_time: 0.0, n_steps: DEFAULT_STEPS, omega0: DEFAULT_OMEGA0 }.validated()
    }

    /// `T = 9 ns`, `omega0 = 2 pi x 5 MHz`.
    pub fn paper_2020(direction: Direction, delta_q: f64) -> Result<Self> {
        Self::sudden(direction, delta_q)?.with_ramp_time(PRESET_RAMP_TIME)
    }

    pub fn with_ramp_time(mut self, ramp_time: f64) -> Result<Self> {
        self.ramp_time = ramp_time;
        self.validated()
    }

    pub fn with_steps(mut self, n_steps: usize) -> Result<Self> {
        self.n_steps = n_steps;
        self.validated()
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.delta_q > 0.0 && self.delta_q.is_finite()) {
            return Err(invalid(format!("delta_q must be positive, got {}", self.delta_q)));
        }
        if !(self.ramp_time >= 0.0 && self.ramp_time.is_finite()) {
            return Err(invalid(format!("ramp_time must be non-negative, got {}", self.ramp_time)));
        }
        if self.n_steps == 0 {
            return Err(invalid("n_steps must be at least 1"));
        }
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return Err(invalid(format!("omega0 must be positive, got {}", self.omega0)));
        }
        Ok(self)
    }

    /// Dimensionless ramp strength `omega0 T`.
    pub fn strength(&self) -> f64 {
        self.omega0 * self.ramp_time
    }

    fn point_at(&self, start: &Angles, fraction: f64) -> Angles {
        let e = self.direction.vector();
        let s = fraction * self.delta_q;
        [start[0] + s * e[0], start[1] + s * e[1], start[2] + s * e[2]]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuenchOutcome {
    /// `1 - |<psi_-(q + delta_q e)|final_state>|^2`.
    pub p_excited: f64,
    pub final_state: CVector3,
    pub schedule: QuenchSchedule,
    /// Slices used for the reported value (0 in the sudden limit).
    pub steps_used: usize,
    pub converged: bool,
    pub warnings: Vec<String>,
}

/// Drive Hamiltonian along the ramp in units of `Omega_0`: half the
/// coupling matrix of the family at `q(t)`.
pub fn ramp_hamiltonian(start: &HyperPoint, schedule: &QuenchSchedule, t: f64) -> Result<HermitianOperator3> {
    ramp_hamiltonian_family(&start.family(), &start.angles(), schedule, t)
}

pub fn ramp_hamiltonian_family<F: ParamFamily>(
    family: &F,
    start: &Angles,
    schedule: &QuenchSchedule,
    t: f64,
) -> Result<HermitianOperator3> {
    let big_t = schedule.ramp_time;
    if !(0.0..=big_t).contains(&t) {
        return Err(invalid(format!("time {t} outside the ramp [0, {big_t}]")));
    }
    let fraction = if big_t > 0.0 { t / big_t } else { 0.0 };
    Ok(family.hamiltonian(&schedule.point_at(start, fraction)).scale(0.5))
}

fn propagate<F: ParamFamily>(family: &F, start: &Angles, schedule: &QuenchSchedule, psi0: &CVector3, n: usize) -> CVector3 {
    let big_t = schedule.ramp_time;
    let dt = big_t / n as f64;
    let mut psi = *psi0;
    for k in 0..n {
        let fraction = (k as f64 + 0.5) / n as f64;
        let h = family.hamiltonian(&schedule.point_at(start, fraction)).scale(0.5 * schedule.omega0);
        psi = h.propagator(dt) * psi;
    }
    psi
}

/// Ramp from the ground state at `start` and project onto the ground state
/// of the final Hamiltonian.
pub fn evolve(start: &HyperPoint, schedule: &QuenchSchedule) -> Result<QuenchOutcome> {
    evolve_family(&start.family(), &start.angles(), schedule)
}

/// Same protocol for any family, starting from its ground state.
pub fn evolve_family<F: ParamFamily>(family: &F, start: &Angles, schedule: &QuenchSchedule) -> Result<QuenchOutcome> {
    let psi0 = ground_state(family, start)?;
    evolve_from(family, start, schedule, &psi0)
}

/// Protocol in the frame `H' = U_R H U_R^dagger`, starting from basis state
/// `|0>` as in the experiment.
pub fn evolve_in_frame(start: &HyperPoint, schedule: &QuenchSchedule) -> Result<QuenchOutcome> {
    let rotation = frame_rotation(start)?;
    let rotated = Conjugated::new(start.family(), rotation.unitary);
    let mut e0 = CVector3::zeros();
    e0[0] = crate::linalg::c(1.0, 0.0);
    evolve_from(&rotated, &start.angles(), schedule, &e0)
}

/// Protocol with the whole schedule conjugated by a fixed unitary.
pub fn evolve_conjugated(start: &HyperPoint, schedule: &QuenchSchedule, unitary: &CMatrix3) -> Result<QuenchOutcome> {
    evolve_family(&Conjugated::new(start.family(), *unitary), &start.angles(), schedule)
}

fn evolve_from<F: ParamFamily>(
    family: &F,
    start: &Angles,
    schedule: &QuenchSchedule,
    psi0: &CVector3,
) -> Result<QuenchOutcome> {
    let schedule = schedule.validated()?;
    let target = ground_state(family, &schedule.point_at(start, 1.0))?;
    let p_of = |psi: &CVector3| 1.0 - fidelity(&target, psi);
    if schedule.ramp_time == 0.0 {
        return Ok(QuenchOutcome {
            p_excited: p_of(psi0),
            final_state: *psi0,
            schedule,
            steps_used: 0,
            converged: true,
            warnings: Vec::new(),
        });
    }
    let mut n = schedule.n_steps;
    let mut coarse = propagate(family, start, &schedule, psi0, n);
    loop {
        let fine = propagate(family, start, &schedule, psi0, 2 * n);
        let change = (p_of(&fine) - p_of(&coarse)).abs();
        if change < STEP_TOL || 2 * n >= MAX_STEPS {
            let converged = change < STEP_TOL;
            let warnings = if converged {
                Vec::new()
            } else {
                vec![format!("p_excited still changes by {change:.2e} at {} slices", 2 * n)]
            };
            return Ok(QuenchOutcome {
                p_excited: p_of(&fine),
                final_state: fine,
                schedule,
                steps_used: 2 * n,
                converged,
                warnings,
            });
        }
        n *= 2;
        coarse = fine;
    }
}

fn run_p<F: ParamFamily>(family: &F, start: &Angles, schedule: &QuenchSchedule, direction: Direction) -> Result<f64> {
    Ok(evolve_family(family, start, &schedule.with_direction(direction))?.p_excited)
}

/// `g_mu_mu ~ P_mu_mu / delta_q^2`.
pub fn estimate_metric_diag(start: &HyperPoint, axis: Coord, schedule: &QuenchSchedule) -> Result<f64> {
    let p = run_p(&start.family(), &start.angles(), schedule, Direction::Axis(axis))?;
    Ok(p / (schedule.delta_q * schedule.delta_q))
}

/// `g_mu_nu ~ (P_mu_nu - P_mu_mu - P_nu_nu) / (2 delta_q^2)` from three runs
/// sharing one schedule.
pub fn estimate_metric_offdiag(start: &HyperPoint, axes: (Coord, Coord), schedule: &QuenchSchedule) -> Result<f64> {
    let pair = Direction::pair(axes.0, axes.1)?;
    let (fam, a) = (start.family(), start.angles());
    let (mu, nu) = match pair {
        Direction::Pair(mu, nu) => (mu, nu),
        Direction::Axis(_) => unreachable!(),
    };
    let p_mn = run_p(&fam, &a, schedule, pair)?;
    let p_mm = run_p(&fam, &a, schedule, Direction::Axis(mu))?;
    let p_nn = run_p(&fam, &a, schedule, Direction::Axis(nu))?;
    Ok((p_mn - p_mm - p_nn) / (2.0 * schedule.delta_q * schedule.delta_q))
}

/// Full 3x3 metric estimate from six runs (three single-axis, three pairs).
pub fn estimate_metric<F: ParamFamily>(family: &F, start: &Angles, schedule: &QuenchSchedule) -> Result<Matrix3<f64>> {
    let dq2 = schedule.delta_q * schedule.delta_q;
    let mut diag = [0.0; 3];
    for c in Coord::ALL {
        diag[c.index()] = run_p(family, start, schedule, Direction::Axis(c))?;
    }
    let mut g = Matrix3::from_diagonal(&nalgebra::Vector3::new(diag[0], diag[1], diag[2]));
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let p = run_p(family, start, schedule, Direction::Pair(Coord::ALL[i], Coord::ALL[j]))?;
        let off = (p - diag[i] - diag[j]) / 2.0;
        g[(i, j)] = off;
        g[(j, i)] = off;
    }
    Ok(g / dq2)
}

/// Metric map estimated from quench probabilities on a `(theta1, theta2)`
/// grid at fixed `phi`. Chart-pole rows use the analytic limit; degenerate
/// points give NaN rows. Columns follow [`METRIC_COLUMNS`].
pub fn quench_metric_field(grid: &MapGrid, schedule: &QuenchSchedule, lambda_offset: f64) -> Result<SweepResult> {
    let family = MonopoleFamily::unit(lambda_offset);
    let schedule = schedule.validated()?;
    let points = grid.points();
    let rows: Vec<Result<Vec<f64>>> = points
        .par_iter()
        .map(|a| {
            let g = if grid.is_pole(a) {
                metric_analytic_offset(&family, a).map(|t| t.metric())
            } else {
                estimate_metric(&family, a, &schedule)
            };
            match g {
                Ok(g) => Ok(metric_row(a, &g)),
                Err(Error::Degenerate { .. }) => Ok(metric_row(a, &Matrix3::from_element(f64::NAN))),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut table = SweepResult::new(METRIC_COLUMNS);
    for row in rows {
        table.push(row?)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;
    use crate::quantum_geometry::{metric_analytic, overlap_distance};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_8, PI};

    fn reference() -> HyperPoint {
        HyperPoint::on_sphere(FRAC_PI_3, FRAC_PI_4, 0.0)
    }

    fn axis(c: Coord, dq: f64) -> QuenchSchedule {
        QuenchSchedule::sudden(Direction::Axis(c), dq).unwrap()
    }

    #[test]
    fn schedule_validation() {
        let d = Direction::Axis(Coord::Theta1);
        assert!(QuenchSchedule::sudden(d, 0.0).is_err());
        assert!(QuenchSchedule::sudden(d, 0.1).unwrap().with_ramp_time(-1.0).is_err());
        assert!(QuenchSchedule::sudden(d, 0.1).unwrap().with_steps(0).is_err());
        assert!(Direction::pair(Coord::Phi, Coord::Phi).is_err());
        let s = QuenchSchedule::paper_2020(d, 0.1).unwrap();
        assert!((s.strength() - 0.2827433388).abs() < 1e-9);
    }

    #[test]
    fn ramp_endpoints() {
        let p = reference();
        let s = QuenchSchedule::paper_2020(Direction::Axis(Coord::Theta1), FRAC_PI_8).unwrap();
        let h0 = ramp_hamiltonian(&p, &s, 0.0).unwrap();
        assert!(h0.max_abs_diff(&p.family().hamiltonian(&p.angles()).scale(0.5)) < 1e-15);
        let h1 = ramp_hamiltonian(&p, &s, s.ramp_time).unwrap();
        let end = HyperPoint::on_sphere(FRAC_PI_3 + FRAC_PI_8, FRAC_PI_4, 0.0);
        assert!(h1.max_abs_diff(&end.family().hamiltonian(&end.angles()).scale(0.5)) < 1e-15);
        let s2 = s.with_direction(Direction::pair(Coord::Theta1, Coord::Theta2).unwrap());
        let hm = ramp_hamiltonian(&p, &s2, 0.5 * s.ramp_time).unwrap();
        let mid = HyperPoint::on_sphere(FRAC_PI_3 + FRAC_PI_8 / 2.0, FRAC_PI_4 + FRAC_PI_8 / 2.0, 0.0);
        assert!(hm.max_abs_diff(&mid.family().hamiltonian(&mid.angles()).scale(0.5)) < 1e-15);
        assert!(ramp_hamiltonian(&p, &s, 2.0 * s.ramp_time).is_err());
    }

    #[test]
    fn sudden_limit_is_the_overlap() {
        let p = reference();
        let out = evolve(&p, &axis(Coord::Theta1, FRAC_PI_8)).unwrap();
        let end = [FRAC_PI_3 + FRAC_PI_8, FRAC_PI_4, 0.0];
        let direct = overlap_distance(&p.family(), &end, &p.angles()).unwrap();
        assert_eq!(out.p_excited, direct);
        assert_eq!(out.steps_used, 0);
    }

    #[test]
    fn phi_quench_on_chart_line_excites_nothing() {
        let p = HyperPoint::on_sphere(1.1, 0.0, 0.3);
        let out = evolve(&p, &QuenchSchedule::paper_2020(Direction::Axis(Coord::Phi), FRAC_PI_8).unwrap()).unwrap();
        assert!(out.p_excited.abs() < 1e-12);
    }

    #[test]
    fn finite_ramp_conserves_norm_and_converges() {
        let p = reference();
        let s = QuenchSchedule::paper_2020(Direction::Axis(Coord::Theta1), FRAC_PI_8).unwrap();
        let out = evolve(&p, &s).unwrap();
        assert!(out.converged);
        assert!((out.final_state.norm() - 1.0).abs() < 1e-10);
        let sudden = evolve(&p, &axis(Coord::Theta1, FRAC_PI_8)).unwrap().p_excited;
        assert!(((out.p_excited - sudden) / sudden).abs() < 0.02);
        let h = ramp_hamiltonian(&p, &s, 0.3 * s.ramp_time).unwrap().scale(s.omega0);
        assert!(unitarity_defect(&h.propagator(s.ramp_time / 256.0)) < 1e-12);
    }

    #[test]
    fn diag_estimates() {
        let p = reference();
        let g = metric_analytic(&p).unwrap().metric();
        let est = estimate_metric_diag(&p, Coord::Theta1, &axis(Coord::Theta1, PI / 1024.0)).unwrap();
        assert!((est - g[(0, 0)]).abs() < 1e-3);
        let coarse = estimate_metric_diag(&p, Coord::Theta1, &axis(Coord::Theta1, FRAC_PI_8)).unwrap();
        assert!((coarse - g[(0, 0)]).abs() > (est - g[(0, 0)]).abs());
        let eq = HyperPoint::on_sphere(FRAC_PI_2, FRAC_PI_2, 0.0);
        let gpp = estimate_metric_diag(&eq, Coord::Phi, &axis(Coord::Phi, PI / 1024.0)).unwrap();
        assert!((gpp - 0.25).abs() < 1e-3);
    }

    #[test]
    fn offdiag_estimates() {
        let p = reference();
        let g = metric_analytic(&p).unwrap().metric();
        let s = axis(Coord::Theta1, PI / 1024.0);
        let est = estimate_metric_offdiag(&p, (Coord::Theta1, Coord::Theta2), &s).unwrap();
        assert!((est - g[(0, 1)]).abs() < 1e-3);
        let rev = estimate_metric_offdiag(&p, (Coord::Theta2, Coord::Theta1), &s).unwrap();
        assert_eq!(est, rev);
        let eq = HyperPoint::on_sphere(1.0, FRAC_PI_2, 0.0);
        assert!(estimate_metric_offdiag(&eq, (Coord::Theta1, Coord::Phi), &s).unwrap().abs() < 1e-3);
    }

    #[test]
    fn metric_field_shape_and_accuracy() {
        let grid = MapGrid::new(6, 5, 0.0).unwrap();
        let s = axis(Coord::Theta1, PI / 1024.0);
        let t = quench_metric_field(&grid, &s, 0.0).unwrap();
        assert_eq!(t.rows.len(), 30);
        for row in &t.rows {
            let g = metric_analytic(&HyperPoint::on_sphere(row[0], row[1], 0.0)).unwrap().metric();
            let want = metric_row(&[row[0], row[1], 0.0], &g);
            for k in 2..8 {
                assert!((row[k] - want[k]).abs() < 5e-3);
            }
        }
    }
}

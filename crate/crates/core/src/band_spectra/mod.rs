//! Lattice band structure along momentum cuts, Weyl-node search and the
//! spectroscopic brightness of the dressed states.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::eigensystem_unchecked;
use crate::qudit_models::{build_bloch, dressed_states, wrap_momentum, BlochPoint, DressedStates, RabiDrive};
use crate::sweep::SweepResult;

/// Refined gaps below this count as band touchings.
pub const NODE_TOL: f64 = 1e-9;
const BISECTION_STEPS: usize = 60;
const SAME_POINT: f64 = 1e-6;
const WEYL_SCAN: usize = 24;

/// Momentum axis of a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    #[default]
    Kx,
    Ky,
    Kz,
    Kw,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::Kx => 0,
            Axis::Ky => 1,
            Axis::Kz => 2,
            Axis::Kw => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandSample {
    pub k: f64,
    pub e_minus: f64,
    pub e_zero: f64,
    pub e_plus: f64,
}

/// Band energies along one momentum axis, in units of `Omega_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandCut {
    pub axis: Axis,
    /// Remaining momenta; the entry of `axis` is ignored.
    pub fixed: [f64; 4],
    pub samples: Vec<BandSample>,
    pub lambda_offset: f64,
}

/// Columns of a band-cut table.
pub const BAND_COLUMNS: [&str; 4] = ["k", "e_minus", "e_zero", "e_plus"];

fn point_on(axis: Axis, fixed: &[f64; 4], k: f64, lambda: f64) -> BlochPoint {
    let mut kv = *fixed;
    kv[axis.index()] = k;
    BlochPoint::new(kv, lambda)
}

fn lower_gap(p: &BlochPoint) -> f64 {
    eigensystem_unchecked(&build_bloch(p)).ground_gap()
}

/// Eigenvalues of the Bloch Hamiltonian at `n_samples` evenly spaced momenta
/// on `[-pi, pi]`.
pub fn band_cut(lambda_offset: f64, axis: Axis, fixed: [f64; 4], n_samples: usize) -> Result<BandCut> {
    if n_samples < 2 {
        return Err(invalid("a band cut needs at least two samples"));
    }
    let step = TAU / (n_samples - 1) as f64;
    let samples = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let k = -PI + i as f64 * step;
            let e = eigensystem_unchecked(&build_bloch(&point_on(axis, &fixed, k, lambda_offset))).energies;
            BandSample { k, e_minus: e[0], e_zero: e[1], e_plus: e[2] }
        })
        .collect();
    Ok(BandCut { axis, fixed, samples, lambda_offset })
}

impl BandCut {
    pub fn to_table(&self) -> SweepResult {
        let mut t = SweepResult::new(BAND_COLUMNS);
        t.rows = self.samples.iter().map(|s| vec![s.k, s.e_minus, s.e_zero, s.e_plus]).collect();
        t
    }

    pub fn min_gap(&self) -> f64 {
        self.samples.iter().map(|s| s.e_zero - s.e_minus).fold(f64::INFINITY, f64::min)
    }
}

/// Location and refined gap of a band touching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapClosure {
    pub k: f64,
    pub gap: f64,
}

/// Bisection on the sign of the central-difference slope of `f` in `[a, b]`.
fn refine_minimum(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..BISECTION_STEPS {
        let m = 0.5 * (a + b);
        let h = 1e-3 * (b - a);
        if h == 0.0 {
            break;
        }
        if f(m + h) > f(m - h) {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

fn same_momentum(a: f64, b: f64) -> bool {
    wrap_momentum(a - b).abs() < SAME_POINT
}

/// Band touchings along a cut: local minima of the sampled gap, refined by
/// bisection and kept when the refined gap is below [`NODE_TOL`].
pub fn gap_closures(cut: &BandCut) -> Vec<GapClosure> {
    let gaps: Vec<f64> = cut.samples.iter().map(|s| s.e_zero - s.e_minus).collect();
    let n = gaps.len();
    let gap_at = |k: f64| lower_gap(&point_on(cut.axis, &cut.fixed, k, cut.lambda_offset));
    let mut out: Vec<GapClosure> = Vec::new();
    for i in 0..n {
        let left = if i > 0 { gaps[i - 1] } else { f64::INFINITY };
        let right = if i + 1 < n { gaps[i + 1] } else { f64::INFINITY };
        if gaps[i] > left || gaps[i] > right {
            continue;
        }
        let lo = cut.samples[i.saturating_sub(1)].k;
        let hi = cut.samples[(i + 1).min(n - 1)].k;
        let k = wrap_momentum(refine_minimum(gap_at, lo, hi));
        let gap = gap_at(k);
        if gap < NODE_TOL && !out.iter().any(|c| same_momentum(c.k, k)) {
            out.push(GapClosure { k, gap });
        }
    }
    out.sort_by(|a, b| a.k.total_cmp(&b.k));
    out
}

/// A refined band touching in the four-dimensional Brillouin zone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylPoint {
    pub k: [f64; 4],
    pub gap: f64,
}

fn coupling_norm(k: [f64; 4], lambda: f64) -> f64 {
    let d = BlochPoint::new(k, lambda).coupling();
    d.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Band touchings of the lattice model: a coarse periodic 4D scan for local
/// minima of `|d(k)|`, each refined by bisection along `kx`.
pub fn find_weyl_points(lambda_offset: f64) -> Vec<WeylPoint> {
    let n = WEYL_SCAN;
    let h = TAU / n as f64;
    let coord = |i: usize| -PI + (i % n) as f64 * h;
    let at = |idx: [usize; 4]| coupling_norm(idx.map(coord), lambda_offset);
    let candidates: Vec<[usize; 4]> = (0..n.pow(4))
        .into_par_iter()
        .map(|flat| [flat / (n * n * n), (flat / (n * n)) % n, (flat / n) % n, flat % n])
        .filter(|&idx| {
            let v = at(idx);
            // a linear node passes within half a cell of some grid point
            v < 2.0 * h
                && (0..4).all(|ax| {
                    let mut up = idx;
                    let mut down = idx;
                    up[ax] = (idx[ax] + 1) % n;
                    down[ax] = (idx[ax] + n - 1) % n;
                    v <= at(up) && v <= at(down)
                })
        })
        .collect();
    let mut out: Vec<WeylPoint> = Vec::new();
    for idx in candidates {
        let k0 = idx.map(coord);
        let fixed = k0;
        let gap_at = |kx: f64| lower_gap(&point_on(Axis::Kx, &fixed, kx, lambda_offset));
        let kx = wrap_momentum(refine_minimum(gap_at, k0[0] - h, k0[0] + h));
        let gap = gap_at(kx);
        let k = [kx, fixed[1], fixed[2], fixed[3]].map(wrap_momentum);
        if gap < NODE_TOL && !out.iter().any(|w| (0..4).all(|u| same_momentum(w.k[u], k[u]))) {
            out.push(WeylPoint { k, gap });
        }
    }
    out.sort_by(|a, b| a.k.partial_cmp(&b.k).expect("finite momenta"));
    out
}

/// Relative peak heights of the three dressed-state transitions from bare level `|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrightnessRecord {
    pub p_plus: f64,
    pub p_zero: f64,
    pub p_minus: f64,
    /// `P_+ / P_0`; `None` when the first transition is undriven.
    pub ratio: Option<f64>,
}

/// Populations `|<1|psi>|^2` of the dressed states.
pub fn brightness(drive: &RabiDrive) -> Result<BrightnessRecord> {
    let d = dressed_states(drive)?;
    let p_plus = DressedStates::level_one_population(&d.plus);
    let p_zero = DressedStates::level_one_population(&d.zero);
    let p_minus = DressedStates::level_one_population(&d.minus);
    let ratio = (drive.first().norm_sqr() > 0.0).then(|| p_plus / p_zero);
    Ok(BrightnessRecord { p_plus, p_zero, p_minus, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit_models::{build_h4d, HyperPoint};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn kx_closures(l: f64) -> Vec<GapClosure> {
        gap_closures(&band_cut(l, Axis::Kx, [0.0; 4], 201).unwrap())
    }

    #[test]
    fn closures_on_the_kx_cut() {
        let c = kx_closures(0.0);
        assert_eq!(c.len(), 2);
        assert!((c[0].k + FRAC_PI_2).abs() < 1e-9 && (c[1].k - FRAC_PI_2).abs() < 1e-9);
        let c = kx_closures(0.5);
        assert_eq!(c.len(), 2);
        assert!((c[1].k - FRAC_PI_3).abs() < 1e-9);
        assert!(c.iter().all(|x| x.gap < NODE_TOL));
        let c = kx_closures(1.0);
        assert_eq!(c.len(), 1);
        // quadratic touching: the gap only fixes the position to about sqrt(NODE_TOL)
        assert!(c[0].k.abs() < 1e-4);
        assert!(kx_closures(2.0).is_empty());
    }

    #[test]
    fn gapped_cut_minimum() {
        let cut = band_cut(2.0, Axis::Kx, [0.0; 4], 101).unwrap();
        assert!((cut.min_gap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn middle_band_vanishes() {
        for axis in [Axis::Kx, Axis::Ky, Axis::Kw] {
            let cut = band_cut(0.3, axis, [0.2, -1.0, 0.7, 2.0], 64).unwrap();
            for s in &cut.samples {
                assert!(s.e_zero.abs() < 1e-10);
                assert!(s.e_minus <= s.e_zero && s.e_zero <= s.e_plus);
            }
        }
    }

    #[test]
    fn weyl_points_on_the_kx_line() {
        let w = find_weyl_points(0.0);
        assert_eq!(w.len(), 2);
        assert!((w[1].k[0] - FRAC_PI_2).abs() < 1e-9);
        assert!(w.iter().all(|p| p.gap < NODE_TOL && p.k[1..].iter().all(|&k| k == 0.0)));
        let w = find_weyl_points(0.5);
        assert_eq!(w.len(), 2);
        assert!((w[0].k[0] + FRAC_PI_3).abs() < 1e-9);
        assert_eq!(find_weyl_points(1.0).len(), 1);
        assert!(find_weyl_points(1.5).is_empty());
    }

    #[test]
    fn nodes_off_the_kx_line_below_minus_one() {
        // d_x vanishes with one of ky, kz, kw at pi once Lambda < -1
        let w = find_weyl_points(-2.0);
        assert!(!w.is_empty());
        assert!(w.iter().all(|p| p.k[1..].iter().any(|&k| (k.abs() - PI).abs() < 1e-12)));
    }

    #[test]
    fn linearized_model_near_node() {
        // lattice and linear bands differ at second order in the distance to the node
        for dk in [0.04, 0.02, 0.01, 0.005] {
            let q = [dk, 0.5 * dk, -0.3 * dk, 0.2 * dk];
            let k = [FRAC_PI_2 + q[0], q[1], q[2], q[3]];
            let lattice = eigensystem_unchecked(&build_bloch(&BlochPoint::new(k, 0.0))).energies[2];
            let lin = eigensystem_unchecked(&build_h4d(&HyperPoint::from_cartesian(q)).scale(0.5)).energies[2];
            assert!((lattice - lin).abs() < 0.1 * dk * dk, "dk {dk}");
        }
    }

    #[test]
    fn brightness_examples() {
        let b = brightness(&RabiDrive::new(1.0, 0.0, 1.0, 0.0)).unwrap();
        assert!((b.p_plus - 0.25).abs() < 1e-12 && (b.p_zero - 0.5).abs() < 1e-12);
        assert!((b.ratio.unwrap() - 0.5).abs() < 1e-12);
        let b = brightness(&RabiDrive::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!(b.p_plus.abs() < 1e-12 && (b.p_zero - 1.0).abs() < 1e-12);
        assert_eq!(brightness(&RabiDrive::new(0.0, 0.0, 1.0, 0.0)).unwrap().ratio, None);
        assert!(brightness(&RabiDrive::new(0.0, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn brightness_matches_eigenvectors() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let d = RabiDrive::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let b = brightness(&d).unwrap();
            let o2 = d.amplitude().powi(2);
            assert!((b.p_plus - d.second().norm_sqr() / (2.0 * o2)).abs() < 1e-10);
            assert!((b.p_zero - d.first().norm_sqr() / o2).abs() < 1e-10);
            assert!((b.p_plus - b.p_minus).abs() < 1e-12);
            let es = eigensystem_unchecked(&crate::build_hexp(&d));
            let from_eig: Vec<f64> = es.states.iter().map(|v| v[2].norm_sqr()).collect();
            assert!((from_eig[0] - b.p_minus).abs() < 1e-10);
            assert!((from_eig[1] - b.p_zero).abs() < 1e-10);
            assert!((from_eig[2] - b.p_plus).abs() < 1e-10);
        }
    }
}

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};
use crate::linalg::{c, CVector3};

/// The four Rabi frequencies `(Omega^1_x, Omega^1_y, Omega^2_x, Omega^2_y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiDrive {
    pub omega1_x: f64,
    pub omega1_y: f64,
    pub omega2_x: f64,
    pub omega2_y: f64,
}

impl RabiDrive {
    pub fn new(omega1_x: f64, omega1_y: f64, omega2_x: f64, omega2_y: f64) -> Self {
        Self { omega1_x, omega1_y, omega2_x, omega2_y }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.omega1_x, self.omega1_y, self.omega2_x, self.omega2_y]
    }

    /// `Omega_0 = sqrt(sum of squares)`.
    pub fn amplitude(&self) -> f64 {
        self.as_array().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Complex coupling `Omega^1_x + i Omega^1_y` of the first transition.
    pub fn first(&self) -> C64 {
        c(self.omega1_x, self.omega1_y)
    }

    /// Complex coupling `Omega^2_x + i Omega^2_y` of the second transition.
    pub fn second(&self) -> C64 {
        c(self.omega2_x, self.omega2_y)
    }
}

/// Dressed eigenstates of the driven qutrit, in the matrix basis of
/// [`build_hexp`](super::build_hexp).
///
/// Energies are measured from the undriven zero point: `+Omega_0/2`, `0`,
/// `-Omega_0/2` for `plus`, `zero`, `minus`.
///
/// The bare level probed in spectroscopy (`|1>`) is the *last* matrix
/// component: the bare-level listing is the matrix basis in reverse order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedStates {
    pub plus: CVector3,
    pub zero: CVector3,
    pub minus: CVector3,
    pub energies: [f64; 3],
}

impl DressedStates {
    /// Amplitudes in bare-level order `(|1>, |2>, |3>)`.
    pub fn bare_level(v: &CVector3) -> CVector3 {
        CVector3::new(v[2], v[1], v[0])
    }

    /// Population of bare level `|1>`.
    pub fn level_one_population(v: &CVector3) -> f64 {
        v[2].norm_sqr()
    }
}

/// Closed-form dressed states of the driven qutrit.
pub fn dressed_states(drive: &RabiDrive) -> Result<DressedStates> {
    let omega0 = drive.amplitude();
    if omega0 == 0.0 {
        return Err(invalid("dressed states need a nonzero drive"));
    }
    let a = drive.first() / omega0;
    let b = drive.second() / omega0;
    let s = c(FRAC_1_SQRT_2, 0.0);
    Ok(DressedStates {
        plus: CVector3::new(a.conj(), c(1.0, 0.0), b.conj()) * s,
        zero: CVector3::new(b, c(0.0, 0.0), -a),
        minus: CVector3::new(a.conj(), c(-1.0, 0.0), b.conj()) * s,
        energies: [omega0 / 2.0, 0.0, -omega0 / 2.0],
    })
}

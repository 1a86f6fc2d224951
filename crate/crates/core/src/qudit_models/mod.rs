//! Spin-1 Hamiltonians: the 4D Weyl-like monopole Hamiltonian, the
//! Rabi-driven qutrit Hamiltonian and the lattice Bloch Hamiltonian, all in
//! units of the drive amplitude with `hbar = 1`.

mod dressed;
mod family;

pub use dressed::{dressed_states, DressedStates, RabiDrive};
pub use family::{Chirality, Conjugated, MonopoleFamily, ParamFamily};

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use crate::error::{invalid, Error, Result};
use num_complex::Complex64 as C64;

use crate::linalg::{c, CVector3, HermitianOperator3};

/// Coordinates on the 3-sphere in the order `(theta1, theta2, phi)`.
pub type Angles = [f64; 3];

/// Label of a hyperspherical coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    Theta1,
    Theta2,
    Phi,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::Theta1, Coord::Theta2, Coord::Phi];

    pub fn index(self) -> usize {
        match self {
            Coord::Theta1 => 0,
            Coord::Theta2 => 1,
            Coord::Phi => 2,
        }
    }

    pub fn unit(self) -> Angles {
        let mut e = [0.0; 3];
        e[self.index()] = 1.0;
        e
    }

    pub fn label(self) -> &'static str {
        match self {
            Coord::Theta1 => "t1",
            Coord::Theta2 => "t2",
            Coord::Phi => "p",
        }
    }
}

/// A point in 4D parameter space in hyperspherical coordinates, plus the
/// offset added to the `qx` (Omega^1_x) coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperPoint {
    pub r: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub phi: f64,
    pub lambda_offset: f64,
}

impl HyperPoint {
    /// Unit-radius point without offset.
    pub fn on_sphere(theta1: f64, theta2: f64, phi: f64) -> Self {
        Self { r: 1.0, theta1, theta2, phi, lambda_offset: 0.0 }
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.r = r;
        self
    }

    pub fn with_offset(mut self, lambda: f64) -> Self {
        self.lambda_offset = lambda;
        self
    }

    pub fn angles(&self) -> Angles {
        [self.theta1, self.theta2, self.phi]
    }

    /// `(qx, qy, qz, qw)` without the offset.
    pub fn to_cartesian(&self) -> [f64; 4] {
        let (s1, c1) = self.theta1.sin_cos();
        let (s2, c2) = self.theta2.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        let r = self.r;
        [r * c1, r * s1 * c2, r * s1 * s2 * cp, r * s1 * s2 * sp]
    }

    /// Coupling vector entering the Hamiltonian: the Cartesian point with
    /// `lambda_offset` added to `qx`.
    pub fn coupling(&self) -> [f64; 4] {
        let mut q = self.to_cartesian();
        q[0] += self.lambda_offset;
        q
    }

    /// Inverse chart. `phi` is set to 0 where `sin theta1 sin theta2 = 0` and
    /// `theta2` to 0 where `sin theta1 = 0`.
    pub fn from_cartesian(q: [f64; 4]) -> Self {
        let [x, y, z, w] = q;
        let r = (x * x + y * y + z * z + w * w).sqrt();
        let rho3 = (y * y + z * z + w * w).sqrt();
        let rho2 = (z * z + w * w).sqrt();
        let theta1 = rho3.atan2(x);
        let theta2 = if rho3 == 0.0 { 0.0 } else { rho2.atan2(y) };
        let phi = if rho2 == 0.0 { 0.0 } else { w.atan2(z).rem_euclid(TAU) };
        Self { r, theta1, theta2, phi, lambda_offset: 0.0 }
    }

    /// The one-parameter family through this point (same radius, offset).
    pub fn family(&self) -> MonopoleFamily {
        MonopoleFamily::new(self.r, self.lambda_offset)
    }
}

/// A point of the 4D lattice Brillouin zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint {
    pub k: [f64; 4],
    pub lambda_offset: f64,
}

impl BlochPoint {
    pub fn new(k: [f64; 4], lambda_offset: f64) -> Self {
        Self { k, lambda_offset }
    }

    /// `d_x = 3 + Lambda - sum_u cos k_u`.
    pub fn d_x(&self) -> f64 {
        3.0 + self.lambda_offset - self.k.iter().map(|k| k.cos()).sum::<f64>()
    }

    /// The coupling vector `(d_x, sin ky, sin kz, sin kw)`.
    pub fn coupling(&self) -> [f64; 4] {
        [self.d_x(), self.k[1].sin(), self.k[2].sin(), self.k[3].sin()]
    }
}

/// Gell-Mann matrices `lambda_1, lambda_2, lambda_6, lambda_7`.
pub fn gell_mann(index: u8) -> Result<HermitianOperator3> {
    let z = c(0.0, 0.0);
    let u = match index {
        1 => [c(1.0, 0.0), z, z],
        2 => [c(0.0, -1.0), z, z],
        6 => [z, z, c(1.0, 0.0)],
        7 => [z, z, c(0.0, -1.0)],
        _ => return Err(invalid(format!("Gell-Mann index {index} not in {{1, 2, 6, 7}}"))),
    };
    Ok(HermitianOperator3::from_upper([0.0; 3], u))
}

/// `q . (lambda_1, lambda_2, lambda_6, lambda_7^*)` for a raw coupling vector.
pub fn coupling_hamiltonian(q: [f64; 4]) -> HermitianOperator3 {
    let [x, y, z, w] = q;
    HermitianOperator3::from_upper([0.0; 3], [c(x, -y), c(0.0, 0.0), c(z, w)])
}

/// The tensor-monopole Hamiltonian `H_4D` at a hyperspherical point, with
/// the offset added to `qx`. The monopole point `r = 0` is allowed.
pub fn build_h4d(point: &HyperPoint) -> HermitianOperator3 {
    coupling_hamiltonian(point.coupling())
}

/// The driven-qutrit Hamiltonian: one half of the coupling Hamiltonian with
/// the four Rabi frequencies as couplings.
pub fn build_hexp(drive: &RabiDrive) -> HermitianOperator3 {
    coupling_hamiltonian(drive.as_array()).scale(0.5)
}

/// Lattice Bloch Hamiltonian `H_k` in units of the drive amplitude, i.e.
/// with the same one-half prefactor as [`build_hexp`].
pub fn build_bloch(point: &BlochPoint) -> HermitianOperator3 {
    coupling_hamiltonian(point.coupling()).scale(0.5)
}

/// Closed-form ground state `(cos t1 - i cos t2 sin t1, -1, sin t1 sin t2 e^{-i phi}) / sqrt 2`.
pub fn ground_state_analytic(point: &HyperPoint) -> Result<CVector3> {
    if point.lambda_offset != 0.0 {
        return Err(invalid("closed-form ground state requires zero offset"));
    }
    if point.r <= 0.0 {
        return Err(Error::Degenerate { gap: 0.0, threshold: 0.0 });
    }
    let (s1, c1) = point.theta1.sin_cos();
    let (s2, c2) = point.theta2.sin_cos();
    let v = CVector3::new(
        c(c1, -c2 * s1),
        c(-1.0, 0.0),
        C64::from_polar(s1 * s2, -point.phi),
    );
    Ok(v * c(FRAC_1_SQRT_2, 0.0))
}

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_momentum(k: f64) -> f64 {
    (k + PI).rem_euclid(TAU) - PI
}

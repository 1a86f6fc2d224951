use crate::linalg::{CMatrix3, HermitianOperator3};

use super::{coupling_hamiltonian, Angles, Coord};

/// A Hamiltonian family over the sphere coordinates `(theta1, theta2, phi)`
/// with analytic coordinate derivatives.
pub trait ParamFamily: Sync {
    fn hamiltonian(&self, angles: &Angles) -> HermitianOperator3;

    fn derivative(&self, angles: &Angles, coord: Coord) -> HermitianOperator3;

    /// Unitary taking model-basis vectors to the basis this family works in.
    /// The tensor-connection phase is read off in the model basis.
    fn model_frame(&self) -> Option<CMatrix3> {
        None
    }

    /// True when the spectrum and geometry do not depend on `phi`.
    fn phi_symmetric(&self) -> bool {
        false
    }
}

impl<F: ParamFamily + ?Sized> ParamFamily for &F {
    fn hamiltonian(&self, angles: &Angles) -> HermitianOperator3 {
        (**self).hamiltonian(angles)
    }
    fn derivative(&self, angles: &Angles, coord: Coord) -> HermitianOperator3 {
        (**self).derivative(angles, coord)
    }
    fn model_frame(&self) -> Option<CMatrix3> {
        (**self).model_frame()
    }
    fn phi_symmetric(&self) -> bool {
        (**self).phi_symmetric()
    }
}

/// Monopole (`+`) or anti-monopole (`-`) low-energy Hamiltonian `H_4D^{+-}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chirality {
    Monopole,
    AntiMonopole,
}

impl Chirality {
    pub fn sign(self) -> f64 {
        match self {
            Chirality::Monopole => 1.0,
            Chirality::AntiMonopole => -1.0,
        }
    }
}

/// `H_4D^{+-}` on a sphere of fixed radius, with coupling
/// `(chi r cos t1 + Lambda, r sin t1 cos t2, r sin t1 sin t2 cos phi, r sin t1 sin t2 sin phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonopoleFamily {
    pub radius: f64,
    pub lambda_offset: f64,
    pub chirality: Chirality,
}

impl MonopoleFamily {
    pub fn new(radius: f64, lambda_offset: f64) -> Self {
        Self { radius, lambda_offset, chirality: Chirality::Monopole }
    }

    pub fn unit(lambda_offset: f64) -> Self {
        Self::new(1.0, lambda_offset)
    }

    pub fn anti(mut self) -> Self {
        self.chirality = Chirality::AntiMonopole;
        self
    }

    pub fn coupling(&self, a: &Angles) -> [f64; 4] {
        let r = self.radius;
        let (s1, c1) = a[0].sin_cos();
        let (s2, c2) = a[1].sin_cos();
        let (sp, cp) = a[2].sin_cos();
        [
            self.chirality.sign() * r * c1 + self.lambda_offset,
            r * s1 * c2,
            r * s1 * s2 * cp,
            r * s1 * s2 * sp,
        ]
    }

    fn coupling_derivative(&self, a: &Angles, coord: Coord) -> [f64; 4] {
        let r = self.radius;
        let (s1, c1) = a[0].sin_cos();
        let (s2, c2) = a[1].sin_cos();
        let (sp, cp) = a[2].sin_cos();
        match coord {
            Coord::Theta1 => [
                -self.chirality.sign() * r * s1,
                r * c1 * c2,
                r * c1 * s2 * cp,
                r * c1 * s2 * sp,
            ],
            Coord::Theta2 => [0.0, -r * s1 * s2, r * s1 * c2 * cp, r * s1 * c2 * sp],
            Coord::Phi => [0.0, 0.0, -r * s1 * s2 * sp, r * s1 * s2 * cp],
        }
    }
}

impl ParamFamily for MonopoleFamily {
    fn hamiltonian(&self, angles: &Angles) -> HermitianOperator3 {
        coupling_hamiltonian(self.coupling(angles))
    }

    fn derivative(&self, angles: &Angles, coord: Coord) -> HermitianOperator3 {
        coupling_hamiltonian(self.coupling_derivative(angles, coord))
    }

    fn phi_symmetric(&self) -> bool {
        // the offset only enters the qx coupling, leaving the (qz, qw) rotation intact
        true
    }
}

/// A family conjugated by a fixed unitary: `U H(q) U^dagger`.
#[derive(Debug, Clone, Copy)]
pub struct Conjugated<F> {
    pub inner: F,
    pub unitary: CMatrix3,
}

impl<F: ParamFamily> Conjugated<F> {
    pub fn new(inner: F, unitary: CMatrix3) -> Self {
        Self { inner, unitary }
    }
}

impl<F: ParamFamily> ParamFamily for Conjugated<F> {
    fn hamiltonian(&self, angles: &Angles) -> HermitianOperator3 {
        self.inner.hamiltonian(angles).conjugate_by(&self.unitary)
    }

    fn derivative(&self, angles: &Angles, coord: Coord) -> HermitianOperator3 {
        self.inner.derivative(angles, coord).conjugate_by(&self.unitary)
    }

    fn model_frame(&self) -> Option<CMatrix3> {
        Some(match self.inner.model_frame() {
            Some(m) => self.unitary * m,
            None => self.unitary,
        })
    }

    fn phi_symmetric(&self) -> bool {
        self.inner.phi_symmetric()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit_models::{build_h4d, HyperPoint};

    #[test]
    fn matches_h4d_builder() {
        let p = HyperPoint::on_sphere(0.9, 2.2, 5.1).with_radius(1.3).with_offset(-0.4);
        let fam = p.family();
        assert!(fam.hamiltonian(&p.angles()).max_abs_diff(&build_h4d(&p)) < 1e-15);
    }

    #[test]
    fn derivatives_match_central_differences() {
        let fams = [MonopoleFamily::new(1.7, 0.3), MonopoleFamily::unit(-0.8).anti()];
        let a = [1.1, 0.6, 2.4];
        let h = 1e-6;
        for fam in fams {
            for coord in Coord::ALL {
                let mut ap = a;
                let mut am = a;
                ap[coord.index()] += h;
                am[coord.index()] -= h;
                let fd = (fam.hamiltonian(&ap) - fam.hamiltonian(&am)).scale(0.5 / h);
                assert!(fd.max_abs_diff(&fam.derivative(&a, coord)) < 1e-9);
            }
        }
    }
}

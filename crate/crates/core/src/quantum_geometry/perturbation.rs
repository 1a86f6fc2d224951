use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::linalg::{eigensystem_unchecked, CMatrix3, CVector3, HermitianOperator3};
use crate::qudit_models::{Angles, Coord, ParamFamily};

use super::{is_chart_pole, tensor_curvature, CurvatureScalar, GeometricTensor};

/// Minimum ground-band gap for the geometric quantities to be defined.
pub const GAP_THRESHOLD: f64 = 1e-8;
const PHASE_NODE_TOL: f64 = 1e-12;

/// Ground state with its first coordinate derivatives in the parallel-transport
/// gauge (`<u|d_mu u> = 0`).
#[derive(Debug, Clone, Copy)]
pub struct StateJet {
    pub energies: [f64; 3],
    pub state: CVector3,
    pub derivatives: [CVector3; 3],
}

/// Sum-over-states derivatives
/// `d_mu u_0 = sum_{n != 0} u_n <u_n|d_mu H|u_0> / (E_0 - E_n)`.
pub fn state_jet<F: ParamFamily>(family: &F, angles: &Angles) -> Result<StateJet> {
    let es = eigensystem_unchecked(&family.hamiltonian(angles));
    let gap = es.ground_gap();
    if gap <= GAP_THRESHOLD {
        return Err(Error::Degenerate { gap, threshold: GAP_THRESHOLD });
    }
    let dh = Coord::ALL.map(|coord| family.derivative(angles, coord));
    Ok(jet_from_states(&es.energies, &es.states, &dh))
}

/// The same sum for a given eigenbasis (ascending energies) and coordinate
/// derivatives of the Hamiltonian. Any phases on `states` drop out of
/// the tensor built from the result.
pub fn jet_from_states(energies: &[f64; 3], states: &[CVector3; 3], dh: &[HermitianOperator3; 3]) -> StateJet {
    let u0 = states[0];
    let derivatives = dh.each_ref().map(|d| {
        let dh_u0 = d.matrix() * u0;
        (1..3).fold(CVector3::zeros(), |acc, n| {
            let un = states[n];
            acc + un * (un.dotc(&dh_u0) / (energies[0] - energies[n]))
        })
    });
    StateJet { energies: *energies, state: u0, derivatives }
}

impl StateJet {
    /// `chi_{mu nu} = <d_mu u|d_nu u>`; the projector term vanishes in this gauge.
    pub fn geometric_tensor(&self) -> GeometricTensor {
        let d = &self.derivatives;
        GeometricTensor { chi: Matrix3::from_fn(|i, j| d[i].dotc(&d[j])) }
    }

    /// Gradient of the relative phase `arg(v_1 conj(v_2))` of the state in
    /// the model basis. `None` where either component vanishes.
    pub fn phase_gradient(&self, frame: Option<&CMatrix3>) -> Option<[f64; 3]> {
        let to_model = |v: &CVector3| match frame {
            Some(u) => u.adjoint() * v,
            None => *v,
        };
        let v = to_model(&self.state);
        if v[1].norm() < PHASE_NODE_TOL || v[2].norm() < PHASE_NODE_TOL {
            return None;
        }
        Some(self.derivatives.map(|d| {
            let dv = to_model(&d);
            (dv[1] / v[1]).im - (dv[2] / v[2]).im
        }))
    }
}

/// `(d phi ^ F)_{012}` for a gradient and an antisymmetric 2-form, with the
/// coordinate order given by the index positions.
pub fn phase_curvature_wedge(dphase: &[f64; 3], f: &Matrix3<f64>) -> f64 {
    dphase[0] * f[(1, 2)] + dphase[1] * f[(2, 0)] + dphase[2] * f[(0, 1)]
}

/// Ground-band quantum geometric tensor by the sum-over-states formula.
pub fn qgt_perturbation<F: ParamFamily>(family: &F, angles: &Angles) -> Result<GeometricTensor> {
    Ok(state_jet(family, angles)?.geometric_tensor())
}

/// Signed 3-form `d phi ^ F` of the tensor connection, where `phi` is the
/// relative phase of the two lower components and `F` the ground-band Berry
/// curvature. `None` on phase nodes.
pub fn tensor_phase_form<F: ParamFamily>(family: &F, angles: &Angles) -> Result<Option<f64>> {
    let jet = state_jet(family, angles)?;
    let frame = family.model_frame();
    Ok(jet
        .phase_gradient(frame.as_ref())
        .map(|dphi| phase_curvature_wedge(&dphi, &jet.geometric_tensor().berry())))
}

/// Generalized curvature `H_{theta1 theta2 phi}`: magnitude `4 sqrt(det g)`,
/// sign from the orientation of the tensor-connection 3-form. Chart poles
/// return the analytic limit 0.
pub fn signed_curvature<F: ParamFamily>(family: &F, angles: &Angles) -> Result<CurvatureScalar> {
    if is_chart_pole(angles) {
        return Ok(CurvatureScalar(0.0));
    }
    let jet = state_jet(family, angles)?;
    let chi = jet.geometric_tensor();
    let magnitude = tensor_curvature(&chi)?.value();
    let frame = family.model_frame();
    let sign = match jet.phase_gradient(frame.as_ref()) {
        Some(dphi) => phase_curvature_wedge(&dphi, &chi.berry()).signum(),
        None => return Ok(CurvatureScalar(0.0)),
    };
    Ok(CurvatureScalar(sign * magnitude))
}

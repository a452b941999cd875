use super::{shared_marginal, split};
use crate::error::{Error, Result};
use crate::states::DensityOperator;
use crate::tensor::{embed, HermitianEig, MatrixFunction, C64};

/// Acceptance thresholds for the compatibility test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Trace distance allowed between the two reductions onto `B`.
    pub marginal: f64,
    /// Bound on the normalised commutator `‖ΘΘ† − Θ†Θ‖_F / ‖Θ‖_F²`.
    pub normality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            marginal: 1e-8,
            normality: 1e-8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PetzRecovery {
    /// Renormalised output on the labels of `ρ_AB` followed by the new
    /// labels of `ρ_BC`.
    pub state: DensityOperator,
    /// Trace of the map output before renormalisation.
    pub raw_trace: f64,
}

/// Rotated Petz map `𝒫ᵗ_{B→BC}` applied to `ρ_AB`:
/// `ρ_BC^{(1+it)/2} ρ_B^{−(1+it)/2} ρ_AB ρ_B^{−(1−it)/2} ρ_BC^{(1−it)/2}`.
/// `ρ_B` is taken from `ρ_BC`; the inverse powers act on its support only.
pub fn petz_recover(
    rho_ab: &DensityOperator,
    rho_bc: &DensityOperator,
    t: f64,
    tol: &Tolerances,
) -> Result<PetzRecovery> {
    let s = split(rho_ab.layout(), rho_bc.layout())?;
    let (rho_b, distance) = shared_marginal(rho_ab, rho_bc, &s.b)?;
    if distance > tol.marginal {
        return Err(Error::OverlapMismatch {
            distance,
            tolerance: tol.marginal,
        });
    }
    let z = C64::new(0.5, 0.5 * t);
    let x = HermitianEig::new(rho_bc.matrix())?.apply(MatrixFunction::Power(z))?;
    let y = HermitianEig::new(rho_b.matrix())?.apply(MatrixFunction::Power(-z))?;
    let k_small = x * embed(&y, &s.b, rho_bc.layout())?;
    let k = embed(&k_small, rho_bc.layout(), &s.parent)?;
    let ab = embed(rho_ab.matrix(), rho_ab.layout(), &s.parent)?;
    // embedding ρ_AB pads with the identity on C
    let out = &k * ab * k.adjoint();
    let raw_trace = out.trace().re;
    let state = DensityOperator::new(s.parent, out.unscale(raw_trace))?;
    Ok(PetzRecovery { state, raw_trace })
}

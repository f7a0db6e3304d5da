//! Berry, Aharonov-Anandan and dynamical phases in closed form.
//!
//! For an eigenstate ξ_n = (x_n, y_n, z_n, w_n) whose x and w components carry
//! e^{∓iθ}, the Berry phase over one turn of the field is
//! γ^B_n = i∮⟨ξ_n|∂_θ ξ_n⟩dθ = 2π(|x_n|² − |w_n|²), which expands to
//!
//! ```text
//! γ^B_n = 2π · 32Γ²ω₀(2E_n − J) / (𝒩_n [(2E_n − J)² − 4ω₀²]²)
//! ```
//!
//! for n = 1, 2, 3, and γ^B_4 = 0. The Aharonov-Anandan phase of a state
//! prepared in an eigenstate of ℋ̃ is the same expression with ω₀ → ω₀ − ω₁.
//!
//! All phases are raw (unwrapped) unless converted with
//! [`PhaseBreakdown::principal`] or [`principal_value`].

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::linalg::{Label, SpinParams, TwoSpinState};
use crate::spectral::{self, triplet_energies, DEGENERACY_REL_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseConvention {
    /// Unwrapped values; total = dynamical + geometric exactly.
    Raw,
    /// Each component mapped into (−π, π].
    Principal,
}

/// Phase accumulated by eigenpath `label` over one cycle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseBreakdown {
    pub label: Label,
    pub total: f64,
    pub dynamical: f64,
    pub geometric: f64,
    pub convention: PhaseConvention,
}

impl PhaseBreakdown {
    fn raw(label: Label, dynamical: f64, geometric: f64) -> Self {
        PhaseBreakdown {
            label,
            total: dynamical + geometric,
            dynamical,
            geometric,
            convention: PhaseConvention::Raw,
        }
    }

    pub fn principal(&self) -> Self {
        PhaseBreakdown {
            label: self.label,
            total: principal_value(self.total),
            dynamical: principal_value(self.dynamical),
            geometric: principal_value(self.geometric),
            convention: PhaseConvention::Principal,
        }
    }
}

/// Maps an angle into (−π, π].
pub fn principal_value(phase: f64) -> f64 {
    let r = phase.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// 2π(|x|² − |w|²) read off the amplitudes of a state.
pub fn amplitude_phase(state: &TwoSpinState) -> f64 {
    let a = state.amplitudes();
    TAU * (a[0].norm_sqr() - a[3].norm_sqr())
}

/// Berry phase γ^B_n of instantaneous eigenstate `label`. Independent of ω₁.
pub fn berry_phase(omega0: f64, gamma: f64, j: f64, label: Label) -> Result<f64> {
    if label == Label::SINGLET {
        return Ok(0.0);
    }
    let energy = triplet_energies(omega0, gamma, j)?[label.index()];
    let scale = [omega0, gamma, j].iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let (a, b) = spectral::denominators(omega0, gamma, j, energy);
    if a.abs() < DEGENERACY_REL_TOL * scale || b.abs() < DEGENERACY_REL_TOL * scale {
        let sys = spectral::build(omega0, gamma, j, 0.0, 0.0)?;
        return Ok(amplitude_phase(sys.state(label)));
    }
    // (2E − J)² − 4ω₀² = a·b
    let g2 = gamma * gamma;
    let norm = 2.0 + 4.0 * g2 / (a * a) + 4.0 * g2 / (b * b);
    let denom = a * b;
    Ok(TAU * 32.0 * g2 * omega0 * (2.0 * energy - j) / (norm * denom * denom))
}

/// Dynamical, Berry and total phase of eigenpath `label` over τ = 2π/|ω₁|
/// in the adiabatic limit. For ω₁ < 0 the loop is traversed backwards and
/// the geometric part changes sign.
pub fn adiabatic_phases(params: &SpinParams, label: Label) -> Result<PhaseBreakdown> {
    let (omega0, gamma) = params.equal_coupling()?;
    let tau = params.period()?;
    let energy = energy_of(omega0, gamma, params.j, label)?;
    let geometric = params.orientation() * berry_phase(omega0, gamma, params.j, label)?;
    Ok(PhaseBreakdown::raw(label, -energy * tau, geometric))
}

/// Aharonov-Anandan phase β^A_n for the cycling state ξ̃_n.
pub fn aa_phase(params: &SpinParams, label: Label) -> Result<f64> {
    let (omega0, gamma) = params.equal_coupling()?;
    Ok(params.orientation() * berry_phase(omega0 - params.omega1, gamma, params.j, label)?)
}

/// β_n = −Ẽ_n τ split into dynamical and Aharonov-Anandan parts.
pub fn aa_breakdown(params: &SpinParams, label: Label) -> Result<PhaseBreakdown> {
    let (omega0, gamma) = params.equal_coupling()?;
    let tau = params.period()?;
    let energy = energy_of(omega0 - params.omega1, gamma, params.j, label)?;
    let total = -energy * tau;
    let geometric = aa_phase(params, label)?;
    Ok(PhaseBreakdown {
        label,
        total,
        dynamical: total - geometric,
        geometric,
        convention: PhaseConvention::Raw,
    })
}

fn energy_of(omega0: f64, gamma: f64, j: f64, label: Label) -> Result<f64> {
    if label == Label::SINGLET {
        Ok(-j / 2.0)
    } else {
        Ok(triplet_energies(omega0, gamma, j)?[label.index()])
    }
}

/// z-projection of spin a in the reduced single-spin model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinZ {
    Up,
    Down,
}

impl SpinZ {
    pub fn value(self) -> f64 {
        match self {
            SpinZ::Up => 1.0,
            SpinZ::Down => -1.0,
        }
    }
}

/// Berry phase −π(1 − cos Θ) of spin b alone in the effective field
/// (ω_b0 + Jσ_az)ẑ + Γ_b x̂, treating σ_az as conserved. This reduced
/// model ignores the coupling of spin a to the rotating field and is kept
/// only for comparison with the two-spin phases.
pub fn legacy_single_spin_phase(omega_b0: f64, gamma_b: f64, j: f64, sigma_az: SpinZ) -> Result<f64> {
    if !(omega_b0.is_finite() && gamma_b.is_finite() && j.is_finite()) {
        return Err(Error::NonFinite("legacy phase inputs"));
    }
    let axial = omega_b0 + j * sigma_az.value();
    let length = axial.hypot(gamma_b);
    if length == 0.0 {
        return Err(Error::ZeroAxis);
    }
    Ok(-PI * (1.0 - axial / length))
}

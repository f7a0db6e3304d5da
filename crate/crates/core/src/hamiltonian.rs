//! Lab-frame and rotating-frame Hamiltonians.
//!
//! ℋ(t) = ½(ω_a0 σ_az + ω_b0 σ_bz + J σ_az σ_bz)
//!      + Σ_α (Γ_α/2)(σ_αx cos ω₁t + σ_αy sin ω₁t)
//!
//! With V(t) = exp(−iω₁t(σ_az+σ_bz)/2) the lab-frame Hamiltonian is
//! ℋ(t) = V(t) ℋ(0) V†(t), and the rotating-frame Hamiltonian
//! ℋ̃ = ℋ(0) − (ω₁/2)(σ_az+σ_bz) is time independent.

use nalgebra::Matrix4;

use crate::error::Result;
use crate::linalg::{Operator4, SpinParams, C64};

/// Time-dependent Hamiltonian of the two-spin system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianModel {
    params: SpinParams,
}

impl HamiltonianModel {
    pub fn new(params: SpinParams) -> Result<Self> {
        params.validate()?;
        Ok(HamiltonianModel { params })
    }

    pub fn params(&self) -> &SpinParams {
        &self.params
    }

    pub fn at(&self, t: f64) -> Operator4 {
        h_total(&self.params, t)
    }

    pub fn rotating_frame(&self) -> Operator4 {
        h_rotating_frame(&self.params)
    }

    pub fn frame_rotation(&self, t: f64) -> Operator4 {
        frame_rotation(&self.params, t)
    }
}

/// Diagonal ℋ₀ = ½(ω_a0 σ_az + ω_b0 σ_bz + J σ_az σ_bz).
pub fn h_static(params: &SpinParams) -> Operator4 {
    diagonal_part(params.omega_a0, params.omega_b0, params.j)
}

/// Full ℋ(t).
pub fn h_total(params: &SpinParams, t: f64) -> Operator4 {
    with_transverse(
        diagonal_part(params.omega_a0, params.omega_b0, params.j),
        params,
        params.omega1 * t,
    )
}

/// ℋ̃ = ℋ(0) − (ω₁/2)(σ_az + σ_bz).
pub fn h_rotating_frame(params: &SpinParams) -> Operator4 {
    with_transverse(
        diagonal_part(
            params.omega_a0 - params.omega1,
            params.omega_b0 - params.omega1,
            params.j,
        ),
        params,
        0.0,
    )
}

/// V(t) = diag(e^{−iω₁t}, 1, 1, e^{+iω₁t}).
pub fn frame_rotation(params: &SpinParams, t: f64) -> Operator4 {
    let angle = params.omega1 * t;
    Operator4::phase_diagonal([-angle, 0.0, 0.0, angle])
}

fn diagonal_part(omega_a0: f64, omega_b0: f64, j: f64) -> Operator4 {
    Operator4::real_diagonal([
        0.5 * (omega_a0 + omega_b0 + j),
        0.5 * (omega_a0 - omega_b0 - j),
        0.5 * (-omega_a0 + omega_b0 - j),
        0.5 * (-omega_a0 - omega_b0 + j),
    ])
}

/// Adds (Γ_α/2)(σ_αx cos θ + σ_αy sin θ) for both spins. The 2×2 block is
/// [[0, e^{−iθ}], [e^{iθ}, 0]].
fn with_transverse(diag: Operator4, params: &SpinParams, angle: f64) -> Operator4 {
    let mut m: Matrix4<C64> = *diag.matrix();
    let rot = C64::from_polar(1.0, -angle);
    let a = rot * (0.5 * params.gamma_a);
    let b = rot * (0.5 * params.gamma_b);
    // spin a flips: ↑↑↔↓↑ and ↑↓↔↓↓
    for (up, down) in [(0, 2), (1, 3)] {
        m[(up, down)] = a;
        m[(down, up)] = a.conj();
    }
    // spin b flips: ↑↑↔↑↓ and ↓↑↔↓↓
    for (up, down) in [(0, 1), (2, 3)] {
        m[(up, down)] = b;
        m[(down, up)] = b.conj();
    }
    Operator4::hermitian(m).expect("constructed with exact conjugate symmetry")
}

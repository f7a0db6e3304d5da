//! Closed-form eigensystem of ℋ(t) for equally coupled spins.
//!
//! The singlet (|↑↓⟩ − |↓↑⟩)/√2 is an eigenstate with E₄ = −J/2. The other
//! three energies are E_n = v_n + J/6 where v_n solve the depressed cubic
//! v³ + pv + q = 0, taken in trigonometric form:
//!
//! ```text
//! E₁ = √(−p/3)·cos Φ          + J/6
//! E₂ = √(−p/3)·cos(Φ + 2π/3)  + J/6
//! E₃ = √(−p/3)·cos(Φ − 2π/3)  + J/6,   Φ = ⅓·arccos(−q / (2√(−(p/3)³)))
//! ```
//!
//! The matching eigenvectors are
//! `(−2Γe^{−iω₁t}/(2ω₀+J−2E), 1, 1, −2Γe^{iω₁t}/(−2ω₀+J−2E)) / √𝒩`.
//! A denominator vanishes only when ω₀ = 0 (for the state with E = J/2) or
//! Γ = 0. In the first case that state is the orthogonal complement of the
//! other two; in the second the triplet block is diagonalized numerically.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use nalgebra::{Matrix3, Matrix4, SymmetricEigen, Vector3};

use crate::error::{Error, Result};
use crate::linalg::{Label, SpinParams, TwoSpinState, C64};

/// Relative threshold on the eigenvector denominators 2ω₀+J−2E and −2ω₀+J−2E.
pub const DEGENERACY_REL_TOL: f64 = 1e-8;
/// Largest admissible overshoot of the arccos argument before clamping.
pub const ARCCOS_EXCESS_TOL: f64 = 1e-9;

const TWO_PI_3: f64 = 2.0 * PI / 3.0;

/// Coefficients of the depressed cubic and the trigonometric angle Φ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicCoefficients {
    pub p: f64,
    pub q: f64,
    pub phi: f64,
}

impl CubicCoefficients {
    /// The three roots v_n in label order.
    pub fn roots(&self) -> [f64; 3] {
        let amp = (-self.p / 3.0).sqrt();
        [
            amp * self.phi.cos(),
            amp * (self.phi + TWO_PI_3).cos(),
            amp * (self.phi - TWO_PI_3).cos(),
        ]
    }
}

pub fn cubic_coefficients(omega0: f64, gamma: f64, j: f64) -> Result<CubicCoefficients> {
    check_finite(omega0, gamma, j)?;
    let (w2, g2) = (omega0 * omega0, gamma * gamma);
    let p = -(4.0 * j * j / 3.0 + 4.0 * w2 + 4.0 * g2);
    let q = 16.0 / 27.0 * j * j * j + (8.0 * g2 - 16.0 * w2) * j / 3.0;
    if p == 0.0 {
        return Err(Error::DegenerateParameters);
    }
    let amp = (-p / 3.0).sqrt();
    let arg = -q / (2.0 * amp * amp * amp);
    if arg.abs() - 1.0 > ARCCOS_EXCESS_TOL {
        return Err(Error::ArccosDomain(arg));
    }
    let phi = arg.clamp(-1.0, 1.0).acos() / 3.0;
    Ok(CubicCoefficients { p, q, phi })
}

/// Energies (E₁, E₂, E₃) of the triplet-sector eigenstates.
///
/// Negative J is evaluated through E₁[−J] = −E₂[J], E₂[−J] = −E₁[J],
/// E₃[−J] = −E₃[J] so that the sign-reversal relations hold bit for bit.
pub fn triplet_energies(omega0: f64, gamma: f64, j: f64) -> Result<[f64; 3]> {
    check_finite(omega0, gamma, j)?;
    if omega0 == 0.0 && gamma == 0.0 && j == 0.0 {
        return Ok([0.0; 3]);
    }
    if j == 0.0 {
        let r = omega0.hypot(gamma);
        return Ok([r, -r, 0.0]);
    }
    if j < 0.0 {
        let e = trig_energies(omega0, gamma, -j)?;
        return Ok([-e[1], -e[0], -e[2]]);
    }
    trig_energies(omega0, gamma, j)
}

fn trig_energies(omega0: f64, gamma: f64, j: f64) -> Result<[f64; 3]> {
    let cubic = cubic_coefficients(omega0, gamma, j)?;
    Ok(cubic.roots().map(|v| v + j / 6.0))
}

fn check_finite(omega0: f64, gamma: f64, j: f64) -> Result<()> {
    if omega0.is_finite() && gamma.is_finite() && j.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("omega0, gamma or J"))
    }
}

/// How the triplet eigenvectors were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenMethod {
    ClosedForm,
    /// One state had a vanishing denominator (ω₀ ≈ 0) and was completed as
    /// the orthogonal complement of the other two closed-form states.
    Complement,
    /// Several denominators vanished (Γ ≈ 0); triplet block diagonalized
    /// numerically.
    NumericalFallback,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenPair {
    pub label: Label,
    pub energy: f64,
    pub state: TwoSpinState,
}

/// Four labeled eigenpairs; label 4 is the singlet.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    pairs: [EigenPair; 4],
    time: f64,
    method: EigenMethod,
}

impl EigenSystem {
    pub fn pair(&self, label: Label) -> &EigenPair {
        &self.pairs[label.index()]
    }

    pub fn energy(&self, label: Label) -> f64 {
        self.pairs[label.index()].energy
    }

    pub fn state(&self, label: Label) -> &TwoSpinState {
        &self.pairs[label.index()].state
    }

    pub fn pairs(&self) -> &[EigenPair; 4] {
        &self.pairs
    }

    pub fn energies(&self) -> [f64; 4] {
        self.pairs.map(|p| p.energy)
    }

    /// Reference time of the instantaneous eigenstates.
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn method(&self) -> EigenMethod {
        self.method
    }

    /// Matrix whose n-th column is ξ_n.
    pub fn basis_matrix(&self) -> Matrix4<C64> {
        let mut m = Matrix4::zeros();
        for (k, pair) in self.pairs.iter().enumerate() {
            m.set_column(k, pair.state.vector());
        }
        m
    }
}

/// Instantaneous eigensystem of ℋ(t).
pub fn eigensystem(params: &SpinParams, t: f64) -> Result<EigenSystem> {
    let (omega0, gamma) = params.equal_coupling()?;
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    build(omega0, gamma, params.j, params.omega1 * t, t)
}

/// Eigensystem of the rotating-frame Hamiltonian ℋ̃: the same construction
/// with ω₀ → ω₀ − ω₁ and ω₁t → 0.
pub fn tilde_eigensystem(params: &SpinParams) -> Result<EigenSystem> {
    let (omega0, gamma) = params.equal_coupling()?;
    build(omega0 - params.omega1, gamma, params.j, 0.0, 0.0)
}

/// The eigenvector denominators (2ω₀+J−2E, −2ω₀+J−2E).
///
/// Their product equals 4Γ²(2E−J)/(2E+J) on the spectrum, which gives the
/// smaller one without the cancellation that direct subtraction suffers for
/// small Γ.
pub(crate) fn denominators(omega0: f64, gamma: f64, j: f64, energy: f64) -> (f64, f64) {
    let a = 2.0 * omega0 + j - 2.0 * energy;
    let b = -2.0 * omega0 + j - 2.0 * energy;
    let plus = 2.0 * energy + j;
    let scale = [omega0, gamma, j].iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    if plus.abs() < 1e-3 * scale {
        return (a, b);
    }
    let product = 4.0 * gamma * gamma * (2.0 * energy - j) / plus;
    if a.abs() < 0.5 * b.abs() {
        (product / b, b)
    } else if b.abs() < 0.5 * a.abs() {
        (a, product / a)
    } else {
        (a, b)
    }
}

/// Eigensystem for explicit (ω₀, Γ, J) at field angle `angle` = ω₁t.
pub(crate) fn build(omega0: f64, gamma: f64, j: f64, angle: f64, time: f64) -> Result<EigenSystem> {
    let energies = triplet_energies(omega0, gamma, j)?;
    let threshold = DEGENERACY_REL_TOL * [omega0, gamma, j].iter().fold(1.0_f64, |m, v| m.max(v.abs()));

    // Triplet-block coordinates (x, √2·y, w) at angle 0.
    let closed: [Option<Vector3<f64>>; 3] = energies.map(|e| {
        let (a, b) = denominators(omega0, gamma, j, e);
        if a.abs() < threshold || b.abs() < threshold {
            return None;
        }
        let (x, w) = (-2.0 * gamma / a, -2.0 * gamma / b);
        let norm = (2.0 + x * x + w * w).sqrt();
        Some(Vector3::new(x / norm, SQRT_2 / norm, w / norm))
    });
    let missing: Vec<usize> = (0..3).filter(|&k| closed[k].is_none()).collect();

    let (block, method) = match missing.as_slice() {
        [] => (closed.map(Option::unwrap), EigenMethod::ClosedForm),
        [k] => {
            let others: Vec<Vector3<f64>> = closed.iter().flatten().copied().collect();
            let mut out = [Vector3::zeros(); 3];
            for m in 0..3 {
                out[m] = match closed[m] {
                    Some(v) => v,
                    None => others[0].cross(&others[1]),
                };
            }
            out[*k] = fix_sign(out[*k]);
            (out, EigenMethod::Complement)
        }
        _ => (fallback_triplet(omega0, gamma, j, &energies), EigenMethod::NumericalFallback),
    };

    let down = C64::from_polar(1.0, -angle);
    let up = C64::from_polar(1.0, angle);
    let mut pairs = [EigenPair {
        label: Label::SINGLET,
        energy: -j / 2.0,
        state: TwoSpinState::singlet(),
    }; 4];
    for (k, label) in Label::TRIPLET.iter().enumerate() {
        let v = block[k];
        let y = C64::new(v[1] * FRAC_1_SQRT_2, 0.0);
        pairs[k] = EigenPair {
            label: *label,
            energy: energies[k],
            state: TwoSpinState::new([down * v[0], y, y, up * v[2]])?,
        };
    }
    Ok(EigenSystem { pairs, time, method })
}

/// Makes y = z real positive when present, otherwise the first sizeable
/// amplitude.
fn fix_sign(v: Vector3<f64>) -> Vector3<f64> {
    let pivot = [v[1], v[0], v[2]].into_iter().find(|c| c.abs() > 1e-12).unwrap_or(1.0);
    v * pivot.signum()
}

/// Diagonalizes ℋ(0) on the triplet block {|↑↑⟩, (|↑↓⟩+|↓↑⟩)/√2, |↓↓⟩};
/// labels are assigned by matching sorted energies.
fn fallback_triplet(omega0: f64, gamma: f64, j: f64, energies: &[f64; 3]) -> [Vector3<f64>; 3] {
    let c = gamma * FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let block = Matrix3::new(
        omega0 + j / 2.0, c, 0.0,
        c, -j / 2.0, c,
        0.0, c, -omega0 + j / 2.0,
    );
    let eig = SymmetricEigen::new(block);

    let mut numeric = [0usize, 1, 2];
    numeric.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let mut labels = [0usize, 1, 2];
    labels.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]).then(a.cmp(&b)));

    let mut out = [Vector3::zeros(); 3];
    for (&label, &col) in labels.iter().zip(numeric.iter()) {
        out[label] = fix_sign(eig.eigenvectors.column(col).into_owned());
    }
    out
}

/// Largest deviations found when checking the sign-reversal relations
/// under (Γ, ω₀, J) → (−Γ, −ω₀, −J).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryReport {
    /// max over E₁[−J]+E₂[J], E₂[−J]+E₁[J], E₃[−J]+E₃[J], E₄[−J]+E₄[J].
    pub energy_deviation: f64,
    /// max over n of 1 − |⟨ξ_n[Γ,ω₀,J] | ξ_σ(n)[−Γ,−ω₀,−J]⟩| with σ = (1 2).
    pub state_deviation: f64,
}

impl SymmetryReport {
    pub fn holds_within(&self, tol: f64) -> bool {
        self.energy_deviation <= tol && self.state_deviation <= tol
    }
}

pub fn symmetry_check(params: &SpinParams) -> Result<SymmetryReport> {
    let (omega0, gamma) = params.equal_coupling()?;
    let j = params.j;
    let original = build(omega0, gamma, j, 0.0, 0.0)?;
    let reversed = build(-omega0, -gamma, -j, 0.0, 0.0)?;

    const PARTNER: [Label; 4] = [Label::TWO, Label::ONE, Label::THREE, Label::SINGLET];
    let mut energy_deviation = 0.0_f64;
    let mut state_deviation = 0.0_f64;
    for label in Label::ALL {
        let partner = PARTNER[label.index()];
        energy_deviation = energy_deviation.max((reversed.energy(partner) + original.energy(label)).abs());
        let overlap = original.state(label).inner(reversed.state(partner)).norm();
        state_deviation = state_deviation.max((1.0 - overlap).abs());
    }
    Ok(SymmetryReport {
        energy_deviation,
        state_deviation,
    })
}

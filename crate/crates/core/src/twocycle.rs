//! Two-cycle sign-reversal protocols.
//!
//! In the adiabatic scheme the signs of ω₀, Γ and J are reversed at the end
//! of the first cycle. Each eigenstate then continues as an eigenstate of the
//! switched Hamiltonian with the opposite energy, so the dynamical phases of
//! the two cycles cancel while the Berry phases add, leaving the purely
//! geometric gate U_B = diag(e^{2iγ₁^B}, e^{2iγ₂^B}, e^{2iγ₃^B}, 1).
//!
//! In the nonadiabatic scheme ω₁ is reversed as well. Then ℋ̃ → −ℋ̃, the
//! second cycle undoes the first exactly and every state returns to itself.

use crate::error::Result;
use crate::evolution::{evolve, Propagation};
use crate::hamiltonian::{h_rotating_frame, h_total};
use crate::linalg::{Label, Operator4, SpinParams, TwoSpinState, C64};
use crate::phases::{aa_breakdown, berry_phase};
use crate::spectral::{build, eigensystem};

/// Parameters negated in the second cycle relative to the first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlipSet {
    pub omega0: bool,
    pub omega1: bool,
    pub gamma: bool,
    pub j: bool,
}

impl FlipSet {
    pub const NONE: FlipSet = FlipSet {
        omega0: false,
        omega1: false,
        gamma: false,
        j: false,
    };
    pub const ADIABATIC: FlipSet = FlipSet {
        omega0: true,
        omega1: false,
        gamma: true,
        j: true,
    };
    pub const NONADIABATIC: FlipSet = FlipSet {
        omega0: true,
        omega1: true,
        gamma: true,
        j: true,
    };
    /// Flips only ω₀ and J; breaks the eigenpath hand-off.
    pub const FIELD_AND_COUPLING: FlipSet = FlipSet {
        omega0: true,
        omega1: false,
        gamma: false,
        j: true,
    };

    /// Applies the flips to both spins.
    pub fn apply(&self, p: &SpinParams) -> SpinParams {
        let sign = |flip: bool| if flip { -1.0 } else { 1.0 };
        SpinParams {
            omega_a0: sign(self.omega0) * p.omega_a0,
            omega_b0: sign(self.omega0) * p.omega_b0,
            gamma_a: sign(self.gamma) * p.gamma_a,
            gamma_b: sign(self.gamma) * p.gamma_b,
            j: sign(self.j) * p.j,
            omega1: sign(self.omega1) * p.omega1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleSegment {
    pub params: SpinParams,
    /// One field period 2π/|ω₁| of this segment.
    pub duration: f64,
    pub flips: FlipSet,
}

/// Two consecutive field cycles; the second restarts its clock at angle 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleProtocol {
    segments: [CycleSegment; 2],
}

impl CycleProtocol {
    pub fn new(params: &SpinParams, flips: FlipSet) -> Result<Self> {
        params.validate()?;
        let second = flips.apply(params);
        Ok(CycleProtocol {
            segments: [
                CycleSegment {
                    params: *params,
                    duration: params.period()?,
                    flips: FlipSet::NONE,
                },
                CycleSegment {
                    params: second,
                    duration: second.period()?,
                    flips,
                },
            ],
        })
    }

    pub fn adiabatic(params: &SpinParams) -> Result<Self> {
        Self::new(params, FlipSet::ADIABATIC)
    }

    pub fn nonadiabatic(params: &SpinParams) -> Result<Self> {
        Self::new(params, FlipSet::NONADIABATIC)
    }

    pub fn segments(&self) -> &[CycleSegment; 2] {
        &self.segments
    }

    /// Evolves `initial` through both segments, switching parameters
    /// instantaneously between them.
    pub fn run(&self, initial: &TwoSpinState, method: Propagation) -> Result<TwoSpinState> {
        let mut state = *initial;
        for seg in &self.segments {
            state = evolve(&seg.params, &state, seg.duration, method)?.final_state;
        }
        Ok(state)
    }

    /// U₂·U₁.
    pub fn propagator(&self, method: Propagation) -> Result<Operator4> {
        let mut total = Operator4::identity();
        for seg in &self.segments {
            let u = evolve(&seg.params, &TwoSpinState::up_up(), seg.duration, method)?.propagator;
            total = u * total;
        }
        Ok(total)
    }
}

/// The ideal adiabatic two-cycle gate.
#[derive(Clone, Debug, PartialEq)]
pub struct BerryGate {
    /// 2γ_n^B for n = 1..4.
    pub phases: [f64; 4],
    /// diag(e^{2iγ_n^B}) in the eigenbasis {ξ₁..ξ₄} at t = 0.
    pub eigenbasis: Operator4,
    /// W·diag(e^{2iγ_n^B})·W† with W the eigenvector matrix.
    pub computational: Operator4,
}

impl BerryGate {
    pub fn apply(&self, state: &TwoSpinState) -> Result<TwoSpinState> {
        self.computational.act(state)
    }
}

pub fn berry_gate(omega0: f64, gamma: f64, j: f64) -> Result<BerryGate> {
    let mut phases = [0.0; 4];
    for label in Label::TRIPLET {
        phases[label.index()] = 2.0 * berry_phase(omega0, gamma, j, label)?;
    }
    let eigenbasis = Operator4::phase_diagonal(phases);
    let w = build(omega0, gamma, j, 0.0, 0.0)?.basis_matrix();
    let matrix = w * eigenbasis.matrix() * w.adjoint();
    Ok(BerryGate {
        phases,
        eigenbasis,
        computational: Operator4::unitary(matrix)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdiabaticTwoCycle {
    pub final_state: TwoSpinState,
    /// U_B·ψ(0).
    pub ideal_state: TwoSpinState,
    /// ‖ψ(2τ) − U_B·ψ(0)‖.
    pub deviation: f64,
}

pub fn run_adiabatic_two_cycle(
    params: &SpinParams,
    initial: &TwoSpinState,
    method: Propagation,
) -> Result<AdiabaticTwoCycle> {
    let (omega0, gamma) = params.equal_coupling()?;
    let protocol = CycleProtocol::adiabatic(params)?;
    let final_state = protocol.run(initial, method)?;
    let ideal_state = berry_gate(omega0, gamma, params.j)?.apply(initial)?;
    Ok(AdiabaticTwoCycle {
        final_state,
        ideal_state,
        deviation: final_state.distance(&ideal_state),
    })
}

/// Phase and fidelity of ξ_n(0) after the adiabatic two-cycle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenpathPhase {
    pub label: Label,
    /// arg⟨ξ_n(0)|ψ(2τ)⟩.
    pub phase: f64,
    /// |⟨ξ_n(0)|ψ(2τ)⟩|.
    pub fidelity: f64,
    /// 2γ_n^B, the adiabatic limit of `phase`.
    pub ideal: f64,
}

pub fn adiabatic_eigenpath_phase(params: &SpinParams, label: Label, method: Propagation) -> Result<EigenpathPhase> {
    let (omega0, gamma) = params.equal_coupling()?;
    let start = *eigensystem(params, 0.0)?.state(label);
    let end = CycleProtocol::adiabatic(params)?.run(&start, method)?;
    let overlap = start.inner(&end);
    let ideal = if label == Label::SINGLET {
        0.0
    } else {
        2.0 * berry_phase(omega0, gamma, params.j, label)?
    };
    Ok(EigenpathPhase {
        label,
        phase: overlap.arg(),
        fidelity: overlap.norm(),
        ideal,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AaTwoCycle {
    pub final_state: TwoSpinState,
    /// ‖U₂·U₁ − I‖_max.
    pub identity_defect: f64,
}

/// Nonadiabatic scheme with exact propagators; valid for any initial state
/// and for unequal couplings.
pub fn run_aa_two_cycle(params: &SpinParams, initial: &TwoSpinState) -> Result<AaTwoCycle> {
    let u = CycleProtocol::nonadiabatic(params)?.propagator(Propagation::Exact)?;
    Ok(AaTwoCycle {
        final_state: u.act(initial)?,
        identity_defect: u.max_abs_diff(&Operator4::identity()),
    })
}

/// Dynamical phase β_n^d = −Ẽ_nτ − β_n^A of eigenpath n in a single cycle.
pub fn one_cycle_dynamical_residual(params: &SpinParams, label: Label) -> Result<f64> {
    Ok(aa_breakdown(params, label)?.dynamical)
}

/// How ξ_n at the end of cycle 1 continues under the cycle-2 Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Handoff {
    pub label: Label,
    /// Eigenlabel of the switched Hamiltonian with the largest overlap.
    pub partner: Label,
    /// |⟨ξ'_partner(0)|ξ_n(τ)⟩|.
    pub overlap: f64,
    /// ‖ℋ'(0)ξ_n(τ) − E'_partner ξ_n(τ)‖.
    pub residual: f64,
    pub partner_energy: f64,
}

impl Handoff {
    pub fn holds_within(&self, tol: f64) -> bool {
        (1.0 - self.overlap).abs() <= tol && self.residual <= tol
    }
}

pub fn eigenpath_handoff(params: &SpinParams, label: Label, flips: FlipSet) -> Result<Handoff> {
    let tau = params.period()?;
    let state = *eigensystem(params, tau)?.state(label);
    let switched = flips.apply(params);
    let next = eigensystem(&switched, 0.0)?;
    let h = h_total(&switched, 0.0);

    let mut best = Label::ONE;
    let mut overlap = -1.0;
    for m in Label::ALL {
        let o = next.state(m).inner(&state).norm();
        if o > overlap {
            best = m;
            overlap = o;
        }
    }
    let energy = next.energy(best);
    let residual = (h.apply(&state) - state.vector() * C64::new(energy, 0.0)).norm();
    Ok(Handoff {
        label,
        partner: best,
        overlap,
        residual,
        partner_energy: energy,
    })
}

/// (−E_n[J]τ) + (−E_partner[−J]τ) with the partner map 1↔2, 3→3, 4→4.
pub fn dynamical_cancellation(params: &SpinParams, label: Label) -> Result<f64> {
    const PARTNER: [Label; 4] = [Label::TWO, Label::ONE, Label::THREE, Label::SINGLET];
    let tau = params.period()?;
    let first = eigensystem(params, 0.0)?;
    let second = eigensystem(&FlipSet::ADIABATIC.apply(params), 0.0)?;
    Ok(-first.energy(label) * tau + -second.energy(PARTNER[label.index()]) * tau)
}

/// max |ℋ̃' + ℋ̃| entrywise for the nonadiabatic flip.
pub fn spectral_negation_defect(params: &SpinParams) -> Result<f64> {
    params.validate()?;
    let flipped = FlipSet::NONADIABATIC.apply(params);
    let sum = h_rotating_frame(params).add_scaled(1.0, &h_rotating_frame(&flipped));
    Ok(crate::linalg::max_abs(sum.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::phases::principal_value;
    use proptest::prelude::*;

    const BERRY_111: [f64; 3] = [5.473403608711892, -2.4358937658608655, -3.0375098428510254];

    #[test]
    fn protocol_shapes() {
        let p = SpinParams::equal(1.0, 0.5, 0.3, 0.2);
        let a = CycleProtocol::adiabatic(&p).unwrap();
        assert_eq!(a.segments().len(), 2);
        let s = a.segments()[1].params;
        assert_eq!((s.omega_a0, s.gamma_b, s.j, s.omega1), (-1.0, -0.5, -0.3, 0.2));
        let n = CycleProtocol::nonadiabatic(&p).unwrap();
        assert_eq!(n.segments()[1].params.omega1, -0.2);
        assert_eq!(n.segments()[0].duration, n.segments()[1].duration);
        assert_eq!(CycleProtocol::adiabatic(&SpinParams::equal(1.0, 1.0, 1.0, 0.0)), Err(Error::NoCycle));
    }

    #[test]
    fn berry_gate_examples() {
        let g = berry_gate(0.0, 1.0, 1.0).unwrap();
        assert!(g.computational.max_abs_diff(&Operator4::identity()) < 1e-14);

        let g = berry_gate(1.0, 1.0, 1.0).unwrap();
        for k in 0..3 {
            assert!((g.phases[k] - 2.0 * BERRY_111[k]).abs() < 1e-12);
            assert!((g.eigenbasis.entry(k, k) - C64::from_polar(1.0, 2.0 * BERRY_111[k])).norm() < 1e-12);
        }
        assert_eq!(g.eigenbasis.entry(3, 3), C64::new(1.0, 0.0));
        let sys = eigensystem(&SpinParams::equal(1.0, 1.0, 1.0, 0.0), 0.0).unwrap();
        for label in Label::ALL {
            let out = g.apply(sys.state(label)).unwrap();
            let overlap = sys.state(label).inner(&out);
            assert!((overlap - g.eigenbasis.entry(label.index(), label.index())).norm() < 1e-12);
        }
    }

    #[test]
    fn singlet_two_cycle_is_trivial() {
        for w1 in [0.4, 0.1, 0.025] {
            let p = SpinParams::equal(1.0, 1.0, 1.0, w1);
            let r = run_adiabatic_two_cycle(&p, &TwoSpinState::singlet(), Propagation::Exact).unwrap();
            assert!(r.deviation < 1e-10, "{w1}: {}", r.deviation);
            let e = adiabatic_eigenpath_phase(&p, Label::SINGLET, Propagation::Exact).unwrap();
            assert!(e.phase.abs() < 1e-10);
        }
    }

    #[test]
    fn adiabatic_phase_approaches_twice_berry() {
        for label in Label::TRIPLET {
            let err = |w1: f64| {
                let e = adiabatic_eigenpath_phase(&SpinParams::equal(1.0, 1.0, 1.0, w1), label, Propagation::Exact).unwrap();
                principal_value(e.phase - e.ideal).abs()
            };
            let errs: Vec<f64> = [0.2, 0.1, 0.05, 0.025].iter().map(|w| err(*w)).collect();
            assert!(errs.windows(2).all(|w| w[1] < w[0]), "{label}: {errs:?}");
        }
        let p = SpinParams::equal(1.0, 1.0, 1.0, 0.02);
        let psi = TwoSpinState::new([C64::new(0.6, 0.0), C64::new(0.0, 0.5), C64::new(0.3, 0.1), C64::new(-0.2, 0.4)]).unwrap();
        let r = run_adiabatic_two_cycle(&p, &psi, Propagation::Exact).unwrap();
        assert!(r.deviation < 0.05, "{}", r.deviation);
    }

    #[test]
    fn aa_two_cycle_examples() {
        let p = SpinParams::equal(1.0, 1.0, 1.0, 0.1);
        let psi = TwoSpinState::new([C64::new(0.1, 0.7), C64::new(0.3, 0.0), C64::new(-0.5, 0.2), C64::new(0.4, -0.1)]).unwrap();
        let r = run_aa_two_cycle(&p, &psi).unwrap();
        assert!(r.identity_defect <= 1e-12);
        assert!(r.final_state.distance(&psi) <= 1e-12);

        let diag = SpinParams::equal(0.8, 0.0, -1.2, 0.3);
        assert!(run_aa_two_cycle(&diag, &psi).unwrap().identity_defect <= 1e-13);

        for k in 0..4 {
            let b = TwoSpinState::basis(k);
            let out = run_aa_two_cycle(&p, &b).unwrap().final_state;
            assert!((b.inner(&out) - C64::new(1.0, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn dynamical_residual_examples() {
        let p = SpinParams::equal(1.0, 1.0, 1.0, 0.1);
        let r = one_cycle_dynamical_residual(&p, Label::SINGLET).unwrap();
        assert!((r - 31.41592653589793).abs() < 1e-10);
        assert_eq!(one_cycle_dynamical_residual(&SpinParams::equal(1.0, 1.0, 0.0, 0.1), Label::SINGLET).unwrap(), 0.0);
        let r = one_cycle_dynamical_residual(&SpinParams::equal(1.1, 1.0, 1.0, 0.1), Label::ONE).unwrap();
        assert!((r + 115.23936938891194).abs() < 1e-9);
    }

    #[test]
    fn negative_control_breaks_handoff() {
        let p = SpinParams::equal(1.0, 1.0, 1.0, 0.1);
        for label in Label::TRIPLET {
            let h = eigenpath_handoff(&p, label, FlipSet::FIELD_AND_COUPLING).unwrap();
            assert!(h.overlap < 1.0 - 1e-6, "{label}: {h:?}");
        }
    }

    fn triple() -> impl Strategy<Value = (f64, f64, f64)> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
    }

    proptest! {
        #[test]
        fn handoff_reverses_energy((w, g, j) in triple(), w1 in prop_oneof![-2.0..-0.05f64, 0.05..2.0f64]) {
            let p = SpinParams::equal(w, g, j, w1);
            let partner = [Label::TWO, Label::ONE, Label::THREE, Label::SINGLET];
            let first = eigensystem(&p, 0.0).unwrap();
            for label in Label::ALL {
                let h = eigenpath_handoff(&p, label, FlipSet::ADIABATIC).unwrap();
                prop_assert!(h.residual <= 1e-10, "{:?}", h);
                prop_assert!((h.partner_energy + first.energy(label)).abs() <= 1e-10);
                // labels only coincide with the partner map off degeneracies
                if Label::ALL.iter().all(|m| *m == label || (first.energy(*m) - first.energy(label)).abs() > 1e-6) {
                    prop_assert_eq!(h.partner, partner[label.index()]);
                    prop_assert!((1.0 - h.overlap).abs() <= 1e-10);
                }
            }
        }

        #[test]
        fn spectral_negation(f in prop::array::uniform5(-3.0..3.0f64), w1 in -2.0..2.0f64) {
            let p = SpinParams::equal(f[0], f[1], f[2], w1);
            prop_assert!(spectral_negation_defect(&p).unwrap() <= 1e-14);
            let q = SpinParams { omega_a0: f[0], omega_b0: f[3], gamma_a: f[1], gamma_b: f[4], j: f[2], omega1: w1 };
            prop_assert!(spectral_negation_defect(&q).unwrap() <= 1e-14);
        }

        #[test]
        fn dynamical_phases_cancel((w, g, j) in triple(), w1 in prop_oneof![-2.0..-0.05f64, 0.05..2.0f64]) {
            let p = SpinParams::equal(w, g, j, w1);
            for label in Label::ALL {
                prop_assert_eq!(dynamical_cancellation(&p, label).unwrap(), 0.0);
            }
        }

        #[test]
        fn aa_two_cycle_identity((w, g, j) in triple(), w1 in prop_oneof![-2.0..-0.05f64, 0.05..2.0f64]) {
            let p = SpinParams::equal(w, g, j, w1);
            prop_assert!(run_aa_two_cycle(&p, &TwoSpinState::up_down()).unwrap().identity_defect <= 1e-12);
        }
    }
}

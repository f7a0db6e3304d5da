//! Time evolution under ℋ(t).
//!
//! The exact propagator follows from the rotating frame:
//! U(t) = V(t)·exp(−iℋ̃t), with the exponential taken from the spectral
//! decomposition of ℋ̃. An independent classic RK4 integrator of
//! U′ = −iℋ(t)U, sampling ℋ analytically at the substep nodes, serves as the
//! oracle for it.

use std::f64::consts::TAU;

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::hamiltonian::{frame_rotation, h_rotating_frame, h_total};
use crate::linalg::{HermitianEigen, Label, Operator4, SpinParams, TwoSpinState, C64};
use crate::spectral::eigensystem;

/// Fewest integrator steps allowed per shortest period of the motion.
pub const MIN_STEPS_PER_PERIOD: usize = 8;
/// Fewest quadrature nodes for [`numeric_dynamical_phase`].
pub const MIN_PHASE_STEPS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    Exact,
    Stepped { steps: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult {
    /// Normalized U·ψ(0).
    pub final_state: TwoSpinState,
    pub propagator: Operator4,
    pub elapsed: f64,
    pub method: Propagation,
    /// ‖U†U − I‖_max of the propagator actually produced.
    pub unitarity_defect: f64,
}

/// U(t) = V(t)·exp(−iℋ̃t). Couplings may differ between the spins.
pub fn exact_propagator(params: &SpinParams, t: f64) -> Result<Operator4> {
    params.validate()?;
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    Ok(frame_rotation(params, t) * h_rotating_frame(params).eigh().evolution(t))
}

pub fn evolve_exact(params: &SpinParams, initial: &TwoSpinState, t: f64) -> Result<EvolutionResult> {
    let propagator = exact_propagator(params, t)?;
    finish(propagator, initial, t, Propagation::Exact)
}

/// Fourth-order Runge-Kutta integration of iU′ = ℋ(t)U over `steps` equal
/// steps. Refuses budgets below [`MIN_STEPS_PER_PERIOD`] steps per
/// min(τ, 2π/‖ℋ‖).
pub fn evolve_stepped(
    params: &SpinParams,
    initial: &TwoSpinState,
    t: f64,
    steps: usize,
) -> Result<EvolutionResult> {
    params.validate()?;
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    if steps == 0 {
        return Err(Error::TooFewSteps { steps, minimum: 1 });
    }
    check_budget(params, t, steps)?;

    let h = t / steps as f64;
    let minus_i = C64::new(0.0, -1.0);
    let generator = |s: f64| h_total(params, s).matrix() * minus_i;
    let half = C64::new(0.5 * h, 0.0);
    let full = C64::new(h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);

    let mut u = Matrix4::<C64>::identity();
    for k in 0..steps {
        let s = k as f64 * h;
        let g0 = generator(s);
        let gm = generator(s + 0.5 * h);
        let g1 = generator(s + h);
        let k1 = g0 * u;
        let k2 = gm * (u + k1 * half);
        let k3 = gm * (u + k2 * half);
        let k4 = g1 * (u + k3 * full);
        u += (k1 + k2 * two + k3 * two + k4) * sixth;
    }
    finish(Operator4::general(u), initial, t, Propagation::Stepped { steps })
}

pub fn evolve(
    params: &SpinParams,
    initial: &TwoSpinState,
    t: f64,
    method: Propagation,
) -> Result<EvolutionResult> {
    match method {
        Propagation::Exact => evolve_exact(params, initial, t),
        Propagation::Stepped { steps } => evolve_stepped(params, initial, t, steps),
    }
}

fn finish(propagator: Operator4, initial: &TwoSpinState, t: f64, method: Propagation) -> Result<EvolutionResult> {
    let unitarity_defect = propagator.unitarity_defect();
    let final_state = propagator.act(initial)?;
    if !final_state.is_finite() {
        return Err(Error::NonFinite("evolved state"));
    }
    Ok(EvolutionResult {
        final_state,
        propagator,
        elapsed: t,
        method,
        unitarity_defect,
    })
}

fn check_budget(params: &SpinParams, t: f64, steps: usize) -> Result<()> {
    if t == 0.0 {
        return Ok(());
    }
    let radius = h_total(params, 0.0).eigh().spectral_radius();
    let mut shortest = f64::INFINITY;
    if params.omega1 != 0.0 {
        shortest = shortest.min(TAU / params.omega1.abs());
    }
    if radius > 0.0 {
        shortest = shortest.min(TAU / radius);
    }
    if shortest.is_infinite() {
        return Ok(());
    }
    let per_period = steps as f64 * shortest / t.abs();
    if per_period < MIN_STEPS_PER_PERIOD as f64 {
        return Err(Error::StepBudget {
            steps,
            per_period,
            minimum: MIN_STEPS_PER_PERIOD,
        });
    }
    Ok(())
}

/// Result of starting in ξ_n(0) and evolving for one field period.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleOutcome {
    pub final_state: TwoSpinState,
    /// arg⟨ξ_n(0)|ψ(τ)⟩; meaningful only when `fidelity` is close to 1.
    pub total_phase: f64,
    /// |⟨ξ_n(0)|ψ(τ)⟩|.
    pub fidelity: f64,
}

pub fn adiabatic_cycle(params: &SpinParams, label: Label, method: Propagation) -> Result<CycleOutcome> {
    let tau = params.period()?;
    let start = *eigensystem(params, 0.0)?.state(label);
    let run = evolve(params, &start, tau, method)?;
    let overlap = start.inner(&run.final_state);
    Ok(CycleOutcome {
        final_state: run.final_state,
        total_phase: overlap.arg(),
        fidelity: overlap.norm(),
    })
}

/// −∫₀ᵗ⟨ψ(s)|ℋ(s)|ψ(s)⟩ds along the exact trajectory, by the trapezoid rule
/// on `steps` intervals.
pub fn numeric_dynamical_phase(params: &SpinParams, initial: &TwoSpinState, t: f64, steps: usize) -> Result<f64> {
    params.validate()?;
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    if steps < MIN_PHASE_STEPS {
        return Err(Error::TooFewSteps {
            steps,
            minimum: MIN_PHASE_STEPS,
        });
    }
    let tilde: HermitianEigen = h_rotating_frame(params).eigh();
    let energy_at = |s: f64| -> Result<f64> {
        let u = frame_rotation(params, s) * tilde.evolution(s);
        let psi = u.act(initial)?;
        Ok(h_total(params, s).expectation(&psi).re)
    };
    let h = t / steps as f64;
    let mut sum = 0.5 * (energy_at(0.0)? + energy_at(t)?);
    for k in 1..steps {
        sum += energy_at(k as f64 * h)?;
    }
    let phase = -sum * h;
    if !phase.is_finite() {
        return Err(Error::NonFinite("dynamical phase"));
    }
    Ok(phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phases::{aa_breakdown, aa_phase, principal_value};
    use crate::spectral::{tilde_eigensystem, triplet_energies};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_state(seed: [f64; 8]) -> TwoSpinState {
        TwoSpinState::new([
            c(seed[0], seed[1]),
            c(seed[2], seed[3]),
            c(seed[4], seed[5]),
            c(seed[6], seed[7]),
        ])
        .unwrap()
    }

    #[test]
    fn identity_at_zero_and_full_period() {
        let p = SpinParams::equal(1.0, 1.0, 1.0, 0.1);
        assert!(exact_propagator(&p, 0.0).unwrap().max_abs_diff(&Operator4::identity()) < 1e-15);
        let tau = p.period().unwrap();
        let u = exact_propagator(&p, tau).unwrap();
        let bare = h_rotating_frame(&p).evolution(tau).unwrap();
        assert!(u.max_abs_diff(&bare) < 1e-14);
    }

    #[test]
    fn diagonal_cases() {
        let p = SpinParams::equal(0.7, 0.0, 1.3, 0.4);
        let t = 5.1;
        let r = evolve_exact(&p, &TwoSpinState::up_down(), t).unwrap();
        let want = C64::from_polar(1.0, 1.3 * t / 2.0);
        assert!((r.final_state.amplitudes()[1] - want).norm() < 1e-13);

        let s = evolve_stepped(&p, &TwoSpinState::up_up(), t, 2000).unwrap();
        let want = C64::from_polar(1.0, -(0.7 + 0.65) * t);
        assert!((s.final_state.amplitudes()[0] - want).norm() < 1e-10);
        assert_eq!(s.method, Propagation::Stepped { steps: 2000 });

        let d = numeric_dynamical_phase(&p, &TwoSpinState::down_down(), t, 100).unwrap();
        assert!((d + (-0.7 + 0.65) * t).abs() < 1e-12);
    }

    #[test]
    fn singlet_closure() {
        let p = SpinParams::equal(1.0, 1.0, 1.0, 0.1);
        let tau = p.period().unwrap();
        let r = evolve_exact(&p, &TwoSpinState::singlet(), tau).unwrap();
        let overlap = TwoSpinState::singlet().inner(&r.final_state);
        assert!((overlap - C64::from_polar(1.0, 0.5 * tau)).norm() < 1e-12);
        let d = numeric_dynamical_phase(&p, &TwoSpinState::singlet(), tau, 100).unwrap();
        assert!((d - 0.5 * tau).abs() < 1e-10);
    }

    #[test]
    fn tilde_eigenstates_follow_closed_form() {
        let p = SpinParams::equal(1.0, 1.0, 1.0, 0.1);
        let sys = tilde_eigensystem(&p).unwrap();
        let tau = p.period().unwrap();
        let t = tau / 3.0;
        for pair in sys.pairs() {
            let a = pair.state.amplitudes();
            let phase = C64::from_polar(1.0, -pair.energy * t);
            let rot = C64::from_polar(1.0, p.omega1 * t);
            let want = [a[0] * rot.conj() * phase, a[1] * phase, a[2] * phase, a[3] * rot * phase];
            for (method, tol) in [(Propagation::Exact, 1e-12), (Propagation::Stepped { steps: 10_000 }, 1e-8)] {
                let got = evolve(&p, &pair.state, t, method).unwrap().final_state.amplitudes();
                for k in 0..4 {
                    assert!((got[k] - want[k]).norm() < tol, "{method:?}: {}", (got[k] - want[k]).norm());
                }
            }
            let full = evolve_exact(&p, &pair.state, tau).unwrap().final_state;
            let overlap = pair.state.inner(&full);
            assert!(overlap.norm() > 1.0 - 1e-12);
            assert!(principal_value(overlap.arg() + pair.energy * tau).abs() < 1e-10);
        }
    }

    #[test]
    fn stepped_matches_exact_at_reference_point() {
        let p = SpinParams::equal(1.0, 1.0, 1.0, 0.1);
        let tau = p.period().unwrap();
        let psi = random_state([0.3, -0.1, 0.8, 0.2, -0.5, 0.4, 0.1, 0.9]);
        let exact = evolve_exact(&p, &psi, tau).unwrap();
        let stepped = evolve_stepped(&p, &psi, tau, 10_000).unwrap();
        assert!(exact.final_state.distance(&stepped.final_state) <= 1e-8);
        assert!(stepped.unitarity_defect <= 1e-9);
        assert!(exact.unitarity_defect <= 1e-12);
    }

    #[test]
    fn fourth_order_convergence() {
        let p = SpinParams {
            omega_a0: 1.2,
            omega_b0: -0.4,
            gamma_a: 0.9,
            gamma_b: 1.5,
            j: 0.7,
            omega1: 0.8,
        };
        let tau = p.period().unwrap();
        let psi = random_state([1.0, 0.0, 0.2, 0.5, -0.3, 0.1, 0.7, -0.6]);
        let exact = evolve_exact(&p, &psi, tau).unwrap().final_state;
        let err = |n| exact.distance(&evolve_stepped(&p, &psi, tau, n).unwrap().final_state);
        let ratio = err(200) / err(400);
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn step_budget_refusal() {
        let p = SpinParams::equal(1.0, 1.0, 1.0, 0.1);
        let tau = p.period().unwrap();
        assert!(matches!(
            evolve_stepped(&p, &TwoSpinState::up_up(), tau, 50),
            Err(Error::StepBudget { .. })
        ));
        assert!(matches!(
            evolve_stepped(&p, &TwoSpinState::up_up(), 1.0, 0),
            Err(Error::TooFewSteps { .. })
        ));
        assert!(matches!(
            numeric_dynamical_phase(&p, &TwoSpinState::up_up(), 1.0, 99),
            Err(Error::TooFewSteps { .. })
        ));
    }

    #[test]
    fn adiabatic_cycle_examples() {
        let p = SpinParams::equal(1.0, 1.0, 1.0, 0.1);
        let tau = p.period().unwrap();
        let s = adiabatic_cycle(&p, Label::SINGLET, Propagation::Exact).unwrap();
        assert!((s.fidelity - 1.0).abs() < 1e-12);
        assert!(principal_value(s.total_phase - 0.5 * tau).abs() < 1e-10);

        let target = |w1: f64| {
            let q = SpinParams::equal(1.0, 1.0, 1.0, w1);
            let b = crate::phases::adiabatic_phases(&q, Label::ONE).unwrap();
            let got = adiabatic_cycle(&q, Label::ONE, Propagation::Exact).unwrap();
            principal_value(got.total_phase - b.total).abs()
        };
        let errs: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|w| target(*w)).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");

        let radius = h_total(&p, 0.0).eigh().spectral_radius();
        let fast = SpinParams::equal(1.0, 1.0, 1.0, 10.0 * radius);
        let out = adiabatic_cycle(&fast, Label::ONE, Propagation::Exact).unwrap();
        assert!(out.fidelity < 1.0 - 1e-6);
    }

    #[test]
    fn dynamical_phase_example() {
        let p = SpinParams::equal(1.1, 1.0, 1.0, 0.1);
        let tau = p.period().unwrap();
        let sys = tilde_eigensystem(&p).unwrap();
        let d = numeric_dynamical_phase(&p, sys.state(Label::ONE), tau, 1000).unwrap();
        assert!((d + 115.23936938891194).abs() < 1e-6);
        assert!((d - aa_breakdown(&p, Label::ONE).unwrap().dynamical).abs() < 1e-6);
        let e = triplet_energies(1.0, 1.0, 1.0).unwrap()[0];
        assert!((d + aa_phase(&p, Label::ONE).unwrap() + e * tau).abs() < 1e-6);
    }

    fn general_params() -> impl Strategy<Value = SpinParams> {
        (
            prop::array::uniform5(-3.0..3.0f64),
            prop_oneof![-2.0..-0.5f64, 0.5..2.0f64],
        )
            .prop_map(|(f, omega1)| SpinParams {
                omega_a0: f[0],
                omega_b0: f[1],
                gamma_a: f[2],
                gamma_b: f[3],
                j: f[4],
                omega1,
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn exact_agrees_with_stepped(p in general_params(), seed in prop::array::uniform8(-1.0..1.0f64)) {
            prop_assume!(seed.iter().any(|v| v.abs() > 0.1));
            let psi = random_state(seed);
            let tau = p.period().unwrap();
            let exact = evolve_exact(&p, &psi, tau).unwrap();
            let stepped = evolve_stepped(&p, &psi, tau, 10_000).unwrap();
            prop_assert!(exact.final_state.distance(&stepped.final_state) <= 1e-7);
            prop_assert!((exact.propagator.apply(&psi) - exact.final_state.vector()).norm() <= 1e-12);
        }

        #[test]
        fn norm_and_schrodinger_equation(p in general_params(), t in -20.0..20.0f64) {
            let u = exact_propagator(&p, t).unwrap();
            prop_assert!(u.unitarity_defect() <= 1e-12);
            // central difference of U against −iℋ(t)U
            let dt = 1e-5;
            let du = (exact_propagator(&p, t + dt).unwrap().matrix() - exact_propagator(&p, t - dt).unwrap().matrix())
                * C64::new(0.5 / dt, 0.0);
            let rhs = h_total(&p, t).matrix() * u.matrix() * C64::new(0.0, -1.0);
            prop_assert!(crate::linalg::max_abs(&(du - rhs)) <= 1e-7 * p.scale().powi(3).max(1.0));
        }

        #[test]
        fn cyclic_rays(w in -3.0..3.0f64, g in -3.0..3.0f64, j in -3.0..3.0f64, w1 in prop_oneof![-2.0..-0.05f64, 0.05..2.0f64]) {
            let p = SpinParams::equal(w, g, j, w1);
            let tau = p.period().unwrap();
            let sys = tilde_eigensystem(&p).unwrap();
            for pair in sys.pairs() {
                let psi = evolve_exact(&p, &pair.state, tau).unwrap().final_state;
                let overlap = pair.state.inner(&psi);
                prop_assert!(overlap.norm() >= 1.0 - 1e-12);
                prop_assert!(principal_value(overlap.arg() + pair.energy * tau).abs() <= 1e-10);
            }
        }
    }
}

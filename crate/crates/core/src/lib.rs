//! Exact dynamics and geometric phases of two Ising-coupled spin-½ particles
//! in a magnetic field with a static z-component and a rotating xy-component.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: complex 4×4 types, the fixed basis order
//!   (↑↑, ↑↓, ↓↑, ↓↓), Pauli operators and [`SpinParams`].
//! * [`hamiltonian`]: lab-frame ℋ(t), rotating-frame ℋ̃ and the frame rotation V(t).
//! * [`spectral`]: closed-form eigensystem (singlet plus trigonometric cubic roots).
//! * [`phases`]: Berry, Aharonov-Anandan and dynamical phases.
//! * [`evolution`]: exact propagator and an independent RK4 integrator.
//! * [`twocycle`]: the sign-reversal two-cycle protocols.
//! * [`cli`]: the `twospin` command-line front end.
//!
//! ħ = 1 throughout; time is measured in units of inverse frequency.

pub mod cli;
pub mod error;
pub mod evolution;
pub mod hamiltonian;
pub mod linalg;
pub mod phases;
pub mod spectral;
pub mod twocycle;

pub use error::{Error, Result};
pub use linalg::{Axis, Label, Operator4, OperatorKind, Site, SpinParams, TwoSpinState, C64};

//! Complex 4×4 linear algebra in the fixed two-spin basis.
//!
//! Every vector and matrix in the crate uses the basis order
//! (|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩); spin `a` is the left tensor factor. Amplitudes
//! of a state are therefore `(x, y, z, w)` in that order.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;
use std::ops::Mul;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum entry of `M - M†` admitted for a hermitian-tagged operator.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Maximum entry of `M†M - I` admitted for a unitary-tagged operator.
pub const UNITARY_TOL: f64 = 1e-12;
/// Allowed drift of the squared norm of a returned state.
pub const NORM_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Which spin an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Site {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Label n ∈ {1, 2, 3, 4} of an eigenpair. Label 4 is always the singlet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(u8);

impl Label {
    pub const ONE: Label = Label(1);
    pub const TWO: Label = Label(2);
    pub const THREE: Label = Label(3);
    pub const SINGLET: Label = Label(4);
    pub const ALL: [Label; 4] = [Label(1), Label(2), Label(3), Label(4)];
    pub const TRIPLET: [Label; 3] = [Label(1), Label(2), Label(3)];

    pub fn new(n: u8) -> Result<Self> {
        if (1..=4).contains(&n) {
            Ok(Label(n))
        } else {
            Err(Error::InvalidLabel(n))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Zero-based position, for indexing arrays of four.
    pub fn index(self) -> usize {
        usize::from(self.0 - 1)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Normalized amplitude vector of the two-spin system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSpinState(Vector4<C64>);

impl TwoSpinState {
    /// Builds a state from raw amplitudes, normalizing them.
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        Self::from_vector(Vector4::from(amplitudes))
    }

    pub fn from_vector(v: Vector4<C64>) -> Result<Self> {
        if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(TwoSpinState(v.unscale(norm)))
    }

    /// Computational basis state by index in the fixed order.
    pub fn basis(index: usize) -> Self {
        assert!(index < 4, "basis index {index} out of range");
        let mut v = Vector4::zeros();
        v[index] = ONE;
        TwoSpinState(v)
    }

    pub fn up_up() -> Self {
        Self::basis(0)
    }

    pub fn up_down() -> Self {
        Self::basis(1)
    }

    pub fn down_up() -> Self {
        Self::basis(2)
    }

    pub fn down_down() -> Self {
        Self::basis(3)
    }

    /// (|↑↓⟩ − |↓↑⟩)/√2.
    pub fn singlet() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        TwoSpinState(Vector4::new(ZERO, h, -h, ZERO))
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn vector(&self) -> &Vector4<C64> {
        &self.0
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &TwoSpinState) -> C64 {
        self.0.dotc(&other.0)
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &TwoSpinState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Euclidean distance between amplitude vectors (global phase matters).
    pub fn distance(&self, other: &TwoSpinState) -> f64 {
        (self.0 - other.0).norm()
    }

    /// Distance after removing the relative global phase.
    pub fn distance_up_to_phase(&self, other: &TwoSpinState) -> f64 {
        let overlap = other.inner(self);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        (self.0 - other.0 * phase).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Structural tag carried by an [`Operator4`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Hermitian,
    Unitary,
    General,
}

/// A 4×4 complex matrix with a checked kind tag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Operator4 {
    matrix: Matrix4<C64>,
    kind: OperatorKind,
}

impl Operator4 {
    pub fn hermitian(matrix: Matrix4<C64>) -> Result<Self> {
        check_finite(&matrix)?;
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Operator4 {
            matrix,
            kind: OperatorKind::Hermitian,
        })
    }

    pub fn unitary(matrix: Matrix4<C64>) -> Result<Self> {
        check_finite(&matrix)?;
        let defect = unitarity_defect(&matrix);
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Operator4 {
            matrix,
            kind: OperatorKind::Unitary,
        })
    }

    pub fn general(matrix: Matrix4<C64>) -> Self {
        Operator4 {
            matrix,
            kind: OperatorKind::General,
        }
    }

    pub fn identity() -> Self {
        Operator4 {
            matrix: Matrix4::identity(),
            kind: OperatorKind::Unitary,
        }
    }

    /// Diagonal unitary with the given phases on the diagonal.
    pub fn phase_diagonal(phases: [f64; 4]) -> Self {
        let d = Vector4::from(phases.map(|p| C64::from_polar(1.0, p)));
        Operator4 {
            matrix: Matrix4::from_diagonal(&d),
            kind: OperatorKind::Unitary,
        }
    }

    /// Hermitian matrix built from a real diagonal.
    pub fn real_diagonal(entries: [f64; 4]) -> Self {
        let d = Vector4::from(entries.map(|e| C64::new(e, 0.0)));
        Operator4 {
            matrix: Matrix4::from_diagonal(&d),
            kind: OperatorKind::Hermitian,
        }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Operator4 {
            matrix: self.matrix.adjoint(),
            kind: self.kind,
        }
    }

    pub fn apply(&self, state: &TwoSpinState) -> Vector4<C64> {
        self.matrix * state.vector()
    }

    /// Applies the operator and renormalizes the result.
    pub fn act(&self, state: &TwoSpinState) -> Result<TwoSpinState> {
        TwoSpinState::from_vector(self.apply(state))
    }

    /// ⟨ψ|M|ψ⟩.
    pub fn expectation(&self, state: &TwoSpinState) -> C64 {
        state.vector().dotc(&self.apply(state))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator4) -> f64 {
        max_abs(&(self.matrix - other.matrix))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }

    /// Real linear combination `self + s * other`; the hermitian tag survives
    /// when both operands are hermitian.
    pub fn add_scaled(&self, s: f64, other: &Operator4) -> Self {
        let kind = match (self.kind, other.kind) {
            (OperatorKind::Hermitian, OperatorKind::Hermitian) => OperatorKind::Hermitian,
            _ => OperatorKind::General,
        };
        Operator4 {
            matrix: self.matrix + other.matrix * C64::new(s, 0.0),
            kind,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        let kind = match self.kind {
            OperatorKind::Hermitian => OperatorKind::Hermitian,
            _ => OperatorKind::General,
        };
        Operator4 {
            matrix: self.matrix * C64::new(s, 0.0),
            kind,
        }
    }

    /// Spectral decomposition of a hermitian operator, eigenvalues ascending.
    pub fn eigh(&self) -> HermitianEigen {
        HermitianEigen::new(&self.matrix)
    }

    /// exp(−i·M·t) for hermitian `M`, via its spectral decomposition.
    pub fn evolution(&self, t: f64) -> Result<Operator4> {
        if self.kind != OperatorKind::Hermitian {
            return Err(Error::NotHermitian(self.hermiticity_defect()));
        }
        Ok(self.eigh().evolution(t))
    }
}

impl Mul for Operator4 {
    type Output = Operator4;

    fn mul(self, rhs: Operator4) -> Operator4 {
        let kind = match (self.kind, rhs.kind) {
            (OperatorKind::Unitary, OperatorKind::Unitary) => OperatorKind::Unitary,
            _ => OperatorKind::General,
        };
        Operator4 {
            matrix: self.matrix * rhs.matrix,
            kind,
        }
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: [f64; 4],
    pub vectors: Matrix4<C64>,
}

impl HermitianEigen {
    pub fn new(m: &Matrix4<C64>) -> Self {
        // Symmetrize first so rounding in the input cannot leak an
        // anti-hermitian part into the QR iteration.
        let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&i, &k| {
            eig.eigenvalues[i]
                .total_cmp(&eig.eigenvalues[k])
                .then(i.cmp(&k))
        });
        let mut vectors = Matrix4::zeros();
        let mut values = [0.0; 4];
        for (dst, &src) in order.iter().enumerate() {
            values[dst] = eig.eigenvalues[src];
            vectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        HermitianEigen { values, vectors }
    }

    /// W·diag(e^{−iλt})·W†.
    pub fn evolution(&self, t: f64) -> Operator4 {
        let phases = Vector4::from(self.values.map(|e| C64::from_polar(1.0, -e * t)));
        let matrix = self.vectors * Matrix4::from_diagonal(&phases) * self.vectors.adjoint();
        Operator4 {
            matrix,
            kind: OperatorKind::Unitary,
        }
    }

    /// Largest |eigenvalue|.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, e| m.max(e.abs()))
    }
}

fn pauli_2x2(axis: Axis) -> Matrix2<C64> {
    let i = C64::new(0.0, 1.0);
    match axis {
        Axis::X => Matrix2::new(ZERO, ONE, ONE, ZERO),
        Axis::Y => Matrix2::new(ZERO, -i, i, ZERO),
        Axis::Z => Matrix2::new(ONE, ZERO, ZERO, -ONE),
    }
}

/// σ_{site,axis} embedded in the two-spin space (spin a ⊗ spin b).
pub fn pauli_operator(site: Site, axis: Axis) -> Operator4 {
    let sigma = pauli_2x2(axis);
    let id = Matrix2::<C64>::identity();
    let matrix: Matrix4<C64> = match site {
        Site::A => sigma.kronecker(&id),
        Site::B => id.kronecker(&sigma),
    };
    Operator4 {
        matrix,
        kind: OperatorKind::Hermitian,
    }
}

/// Hamiltonian parameters, all angular frequencies (rad per unit time).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinParams {
    pub omega_a0: f64,
    pub omega_b0: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub j: f64,
    /// Rotation rate of the transverse field.
    pub omega1: f64,
}

impl SpinParams {
    /// Equal-coupling parameters: ω_a0 = ω_b0 = ω₀ and Γ_a = Γ_b = Γ.
    pub fn equal(omega0: f64, gamma: f64, j: f64, omega1: f64) -> Self {
        SpinParams {
            omega_a0: omega0,
            omega_b0: omega0,
            gamma_a: gamma,
            gamma_b: gamma,
            j,
            omega1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.omega_a0,
            self.omega_b0,
            self.gamma_a,
            self.gamma_b,
            self.j,
            self.omega1,
        ];
        if all.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("spin parameters"))
        }
    }

    pub fn is_equal_coupling(&self) -> bool {
        self.omega_a0 == self.omega_b0 && self.gamma_a == self.gamma_b
    }

    /// (ω₀, Γ) when the two spins are equally coupled.
    pub fn equal_coupling(&self) -> Result<(f64, f64)> {
        self.validate()?;
        if self.is_equal_coupling() {
            Ok((self.omega_a0, self.gamma_a))
        } else {
            Err(Error::UnequalCouplings)
        }
    }

    /// τ = 2π/|ω₁|.
    pub fn period(&self) -> Result<f64> {
        if self.omega1 == 0.0 {
            Err(Error::NoCycle)
        } else if !self.omega1.is_finite() {
            Err(Error::NonFinite("omega1"))
        } else {
            Ok(TAU / self.omega1.abs())
        }
    }

    /// Sense of rotation of the transverse field: −1 for ω₁ < 0, else +1.
    pub fn orientation(&self) -> f64 {
        if self.omega1 < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Spectral scale max(|ω_a0|, |ω_b0|, |Γ_a|, |Γ_b|, |J|, 1).
    pub fn scale(&self) -> f64 {
        [
            self.omega_a0,
            self.omega_b0,
            self.gamma_a,
            self.gamma_b,
            self.j,
        ]
        .iter()
        .fold(1.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Converts laboratory field magnitudes to Hamiltonian frequencies:
/// ω_α0 = −κ_α B₀ and Γ_α = −κ_α B₁.
pub fn field_to_params(
    b0: f64,
    b1: f64,
    kappa_a: f64,
    kappa_b: f64,
    j: f64,
    omega1: f64,
) -> SpinParams {
    SpinParams {
        omega_a0: -kappa_a * b0,
        omega_b0: -kappa_b * b0,
        gamma_a: -kappa_a * b1,
        gamma_b: -kappa_b * b1,
        j,
        omega1,
    }
}

pub(crate) fn max_abs(m: &Matrix4<C64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, c| acc.max(c.norm()))
}

fn hermiticity_defect(m: &Matrix4<C64>) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn unitarity_defect(m: &Matrix4<C64>) -> f64 {
    max_abs(&(m.adjoint() * m - Matrix4::identity()))
}

fn check_finite(m: &Matrix4<C64>) -> Result<()> {
    if m.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("operator entries"))
    }
}

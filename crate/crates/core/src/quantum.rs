//! Two-qubit states, the spin flip, concurrence and entanglement of formation.
//!
//! Amplitudes and matrix indices use the product basis
//! `(up-up, up-down, down-up, down-down)`, with qubit A the left factor.
//! Complex conjugation in the spin flip is taken in this basis.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, HermitianEig, TakagiFactorization};

/// Human-readable name of the basis ordering.
pub const BASIS: &str = "up-up, up-down, down-up, down-down";

/// Allowed deviation of `⟨ψ|ψ⟩` from one for a normalized state.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Hermiticity, trace and positivity tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;

/// Eigenvalues of ρ below this fraction of the trace do not count toward the rank.
pub const RANK_TOL: f64 = 1e-12;

/// Agreement required between the Takagi and R-matrix spectrum routes.
pub const ROUTE_AGREEMENT_TOL: f64 = 1e-9;

/// Norm squared below which a state counts as the zero vector.
pub const ZERO_NORM_SQR: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `σ_y ⊗ σ_y` is a signed anti-diagonal permutation: entry `(k, 3-k)` is `FLIP_SIGNS[k]`.
const FLIP_SIGNS: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];

/// A (possibly subnormalized) two-qubit pure state.
#[derive(Clone, Copy, PartialEq)]
pub struct PureState {
    amps: [Complex64; 4],
}

impl PureState {
    pub const fn new(amps: [Complex64; 4]) -> Self {
        Self { amps }
    }

    pub fn from_real(amps: [f64; 4]) -> Self {
        Self::new(amps.map(|a| Complex64::new(a, 0.0)))
    }

    pub fn from_slice(amps: &[Complex64]) -> Self {
        assert_eq!(amps.len(), 4, "two-qubit states have four amplitudes");
        Self::new([amps[0], amps[1], amps[2], amps[3]])
    }

    pub const fn zero() -> Self {
        Self::new([ZERO; 4])
    }

    /// Product basis vector `k` in `(up-up, up-down, down-up, down-down)` order.
    pub fn basis(k: usize) -> Self {
        let mut amps = [ZERO; 4];
        amps[k] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    /// `(|up-down⟩ - |down-up⟩)/√2`.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real([0.0, h, -h, 0.0])
    }

    /// `(|up-up⟩ + |down-down⟩)/√2`.
    pub fn phi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real([h, 0.0, 0.0, h])
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORMALIZATION_TOL
    }

    /// The state rescaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 <= ZERO_NORM_SQR {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(Complex64::new(1.0 / n2.sqrt(), 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.amps.map(|a| a * s))
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        let mut amps = [ZERO; 4];
        for k in 0..4 {
            amps[k] = a * self.amps[k] + b * other.amps[k];
        }
        Self::new(amps)
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |i, j| self.amps[i] * self.amps[j].conj())
    }

    fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                norm_sqr: self.norm_sqr(),
            })
        }
    }
}

impl fmt::Debug for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.amps.iter()).finish()
    }
}

/// `(σ_y ⊗ σ_y)|ψ*⟩`.
pub fn spin_flip_pure(psi: &PureState) -> PureState {
    let a = psi.amps;
    PureState::new(std::array::from_fn(|k| a[3 - k].conj() * FLIP_SIGNS[k]))
}

/// `⟨a|b̃⟩`. Symmetric in its arguments.
pub fn tilde_inner(a: &PureState, b: &PureState) -> Complex64 {
    let (a, b) = (a.amps, b.amps);
    (-a[0] * b[3] + a[1] * b[2] + a[2] * b[1] - a[3] * b[0]).conj()
}

/// `|⟨ψ|ψ̃⟩|` of a normalized state.
pub fn concurrence_pure(psi: &PureState) -> Result<f64> {
    psi.require_normalized()?;
    Ok(tilde_inner(psi, psi).norm())
}

/// `⟨ψ|ψ̃⟩ / ⟨ψ|ψ⟩`; well defined for subnormalized states.
pub fn preconcurrence(psi: &PureState) -> Result<Complex64> {
    let n2 = psi.norm_sqr();
    if n2 <= ZERO_NORM_SQR {
        return Err(Error::ZeroNorm);
    }
    Ok(tilde_inner(psi, psi) / n2)
}

/// Binary-entropy map from concurrence to entanglement,
/// `h((1 + √(1 - C²))/2)` with `h` the base-2 binary entropy.
pub fn cal_e(c: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&c) {
        return Err(Error::OutOfRange(c));
    }
    let c = c.clamp(0.0, 1.0);
    let x = ((1.0 - c) * (1.0 + c)).sqrt();
    let big = 0.5 * (1.0 + x);
    // (1 - x)/2 rewritten to avoid cancellation at small C.
    let small = 0.5 * c * c / (1.0 + x);
    Ok(binary_entropy(big, small))
}

fn xlog2x(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

fn binary_entropy(p: f64, q: f64) -> f64 {
    (-xlog2x(p.clamp(0.0, 1.0)) - xlog2x(q.clamp(0.0, 1.0))).max(0.0)
}

/// Which qubit's reduced state to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced 2x2 density matrix of one qubit of `|ψ⟩⟨ψ|`.
pub fn reduced_state(psi: &PureState, keep: Subsystem) -> [[Complex64; 2]; 2] {
    let a = psi.amps;
    // Coefficient matrix M[s][t] = a[2s + t]; ρ_A = M M†, ρ_B = Mᵀ M̄.
    let m = |s: usize, t: usize| match keep {
        Subsystem::A => a[2 * s + t],
        Subsystem::B => a[2 * t + s],
    };
    let mut r = [[ZERO; 2]; 2];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..2).map(|k| m(i, k) * m(j, k).conj()).sum();
        }
    }
    r
}

/// Von Neumann entropy (base 2) of the reduced state of `keep`.
pub fn subsystem_entropy(psi: &PureState, keep: Subsystem) -> Result<f64> {
    psi.require_normalized()?;
    let r = reduced_state(psi, keep);
    let (a, d, b) = (r[0][0].re, r[1][1].re, r[0][1]);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let big = 0.5 * (a + d) + half_gap;
    let det = a * d - b.norm_sqr();
    let small = if big > 0.0 { det / big } else { 0.0 };
    Ok(binary_entropy(big, small))
}

/// Entanglement of a normalized pure state: entropy of the qubit-A reduced state.
pub fn entropy_of_entanglement(psi: &PureState) -> Result<f64> {
    subsystem_entropy(psi, Subsystem::A)
}

/// A validated two-qubit density matrix, carrying its eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    eig: HermitianEig,
}

impl DensityMatrix {
    /// Validates a 4x4 matrix. Inputs are never repaired beyond symmetrizing
    /// within tolerance.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected 4x4, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        for i in 0..4 {
            for j in 0..4 {
                let z = matrix[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "non-finite entry at row {i}, column {j}"
                    )));
                }
            }
        }
        let asymmetry = matrix.hermitian_deviation();
        if asymmetry > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (max |ρ_ij - conj(ρ_ji)| = {asymmetry:.3e})"
            )));
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} is not 1")));
        }
        let eig = linalg::jacobi_eigh(matrix.clone());
        let lowest = eig.eigenvalues[3];
        if lowest < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not positive semidefinite (eigenvalue {lowest:.3e})"
            )));
        }
        Ok(Self { matrix, eig })
    }

    pub fn from_pure(psi: &PureState) -> Result<Self> {
        psi.require_normalized()?;
        Self::new(psi.projector())
    }

    /// `Σ |w_i⟩⟨w_i|` over subnormalized members.
    pub fn from_ensemble(members: &[PureState]) -> Result<Self> {
        let mut m = ComplexMatrix::zeros(4, 4);
        for w in members {
            m = m.add(&w.projector());
        }
        Self::new(m)
    }

    pub fn maximally_mixed() -> Self {
        Self::new(ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0)))
            .expect("identity/4 is a valid state")
    }

    /// `p·|singlet⟩⟨singlet| + (1 - p)·I/4`.
    pub fn werner(p: f64) -> Result<Self> {
        let singlet = PureState::singlet().projector();
        let noise = ComplexMatrix::identity(4).scale(Complex64::new(0.25 * (1.0 - p), 0.0));
        Self::new(singlet.scale(Complex64::new(p, 0.0)).add(&noise))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &HermitianEig {
        &self.eig
    }

    /// Number of eigenvalues above [`RANK_TOL`] (relative to the unit trace).
    pub fn rank(&self) -> usize {
        self.eig
            .eigenvalues
            .iter()
            .filter(|&&l| l > RANK_TOL)
            .count()
            .max(1)
    }

    /// Subnormalized eigenvectors `|v_i⟩` with `⟨v_i|v_i⟩` the i-th eigenvalue, descending.
    pub fn subnormalized_eigenvectors(&self) -> Vec<PureState> {
        (0..self.rank())
            .map(|k| {
                let weight = self.eig.eigenvalues[k].max(0.0).sqrt();
                let v = self.eig.eigenvector(k);
                PureState::new(std::array::from_fn(|i| v[i] * weight))
            })
            .collect()
    }

    /// Applies `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†` for 2x2 unitaries.
    pub fn local_unitary(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self> {
        let u = kron2(ua, ub);
        Self::new(u.matmul(&self.matrix).matmul(&u.adjoint()))
    }
}

fn kron2(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip_density(rho: &DensityMatrix) -> DensityMatrix {
    let flipped = spin_flip_matrix(&rho.matrix);
    DensityMatrix::new(flipped).expect("the spin flip preserves validity")
}

pub(crate) fn spin_flip_matrix(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| m[(3 - i, 3 - j)].conj() * (FLIP_SIGNS[i] * FLIP_SIGNS[j]))
}

/// The four λ values (descending) and the rank of ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSpectrum {
    pub lambdas: [f64; 4],
    pub rank: usize,
}

impl LambdaSpectrum {
    /// `λ₁ - λ₂ - λ₃ - λ₄`, which may be negative.
    pub fn signed_concurrence(&self) -> f64 {
        let l = self.lambdas;
        l[0] - l[1] - l[2] - l[3]
    }

    /// `max(0, λ₁ - λ₂ - λ₃ - λ₄)`, capped at 1 against roundoff.
    pub fn concurrence(&self) -> f64 {
        self.signed_concurrence().clamp(0.0, 1.0)
    }

    pub fn max_difference(&self, other: &Self) -> f64 {
        self.lambdas
            .iter()
            .zip(&other.lambdas)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Eigen-ensemble of ρ together with the Takagi factorization of its
/// tilde-Gram matrix `τ_ij = ⟨v_i|ṽ_j⟩`.
#[derive(Debug, Clone)]
pub(crate) struct TildeFrame {
    pub eigen_members: Vec<PureState>,
    pub takagi: TakagiFactorization,
}

impl TildeFrame {
    pub fn new(rho: &DensityMatrix) -> Self {
        let v = rho.subnormalized_eigenvectors();
        let n = v.len();
        let tau = ComplexMatrix::from_fn(n, n, |i, j| tilde_inner(&v[i], &v[j]));
        let takagi = linalg::takagi(&tau).expect("tilde-Gram matrices are symmetric by construction");
        Self {
            eigen_members: v,
            takagi,
        }
    }

    pub fn spectrum(&self) -> LambdaSpectrum {
        let mut lambdas = [0.0; 4];
        for (l, s) in lambdas.iter_mut().zip(&self.takagi.singular_values) {
            *l = *s;
        }
        LambdaSpectrum {
            lambdas,
            rank: self.eigen_members.len(),
        }
    }
}

/// λ-spectrum from the Takagi values of the tilde-Gram matrix of the eigen-ensemble.
pub fn lambda_spectrum(rho: &DensityMatrix) -> LambdaSpectrum {
    TildeFrame::new(rho).spectrum()
}

/// λ-spectrum as the eigenvalues of `R = √(√ρ ρ̃ √ρ)`.
///
/// `√ρ ρ̃ √ρ` is formed in the eigenbasis of ρ, where `√ρ` is diagonal, so
/// the null space of ρ contributes exact zeros instead of roundoff.
pub fn lambda_spectrum_via_r(rho: &DensityMatrix) -> Result<LambdaSpectrum> {
    let q = &rho.eig.eigenvectors;
    let rank = rho.rank();
    let roots: Vec<f64> = (0..4)
        .map(|k| if k < rank { rho.eig.eigenvalues[k].max(0.0).sqrt() } else { 0.0 })
        .collect();
    let flipped = q.adjoint().matmul(&spin_flip_matrix(&rho.matrix)).matmul(q);
    let m = ComplexMatrix::from_fn(4, 4, |i, j| flipped[(i, j)] * (roots[i] * roots[j]));
    let r = linalg::sqrt_psd(&m)?;
    let eig = linalg::herm_eig(&r)?;
    let mut lambdas = [0.0; 4];
    for (l, e) in lambdas.iter_mut().zip(&eig.eigenvalues) {
        *l = e.max(0.0);
    }
    Ok(LambdaSpectrum { lambdas, rank })
}

/// Both spectrum routes, failing if they differ by more than [`ROUTE_AGREEMENT_TOL`].
pub fn lambda_spectrum_checked(rho: &DensityMatrix) -> Result<LambdaSpectrum> {
    let primary = lambda_spectrum(rho);
    let check = lambda_spectrum_via_r(rho)?;
    let difference = primary.max_difference(&check);
    if difference > ROUTE_AGREEMENT_TOL {
        return Err(Error::SpectrumMismatch { difference });
    }
    Ok(primary)
}

/// `C(ρ) = max(0, λ₁ - λ₂ - λ₃ - λ₄)`.
pub fn concurrence_mixed(rho: &DensityMatrix) -> f64 {
    lambda_spectrum(rho).concurrence()
}

/// Entanglement of formation, `𝓔(C(ρ))`.
pub fn eof(rho: &DensityMatrix) -> f64 {
    cal_e(concurrence_mixed(rho)).expect("concurrence is clamped to [0, 1]")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn singlet_flips_to_its_negative() {
        let s = PureState::singlet();
        let flipped = spin_flip_pure(&s);
        assert_eq!(flipped, s.scale(c(-1.0, 0.0)));
    }

    #[test]
    fn up_up_flips_to_minus_down_down() {
        assert_eq!(spin_flip_pure(&PureState::basis(0)), PureState::from_real([0.0, 0.0, 0.0, -1.0]));
    }

    #[test]
    fn product_state_flips_to_orthogonal() {
        let ud = PureState::basis(1);
        assert_eq!(ud.inner(&spin_flip_pure(&ud)), c(0.0, 0.0));
    }

    #[test]
    fn tilde_inner_examples() {
        let s = PureState::singlet();
        assert!((tilde_inner(&s, &s) - c(-1.0, 0.0)).norm() < 1e-15);
        let ud = PureState::basis(1);
        assert_eq!(tilde_inner(&ud, &ud), c(0.0, 0.0));
    }

    #[test]
    fn tilde_inner_matches_explicit_flip() {
        let a = PureState::new([c(0.1, 0.2), c(-0.3, 0.4), c(0.5, -0.1), c(0.2, 0.7)]);
        let b = PureState::new([c(0.3, -0.2), c(0.6, 0.1), c(-0.2, 0.2), c(0.4, 0.0)]);
        let explicit = a.inner(&spin_flip_pure(&b));
        assert!((tilde_inner(&a, &b) - explicit).norm() < 1e-15);
        assert!((tilde_inner(&a, &b) - tilde_inner(&b, &a)).norm() < 1e-15);
    }

    #[test]
    fn pure_concurrence_examples() {
        assert!(close(concurrence_pure(&PureState::singlet()).unwrap(), 1.0, 1e-15));
        assert_eq!(concurrence_pure(&PureState::basis(1)).unwrap(), 0.0);
        let psi = PureState::from_real([0.6, 0.0, 0.0, 0.8]);
        assert!(close(concurrence_pure(&psi).unwrap(), 0.96, 1e-15));
    }

    #[test]
    fn concurrence_requires_normalization() {
        let psi = PureState::from_real([0.5, 0.0, 0.0, 0.5]);
        assert!(matches!(concurrence_pure(&psi), Err(Error::NotNormalized { .. })));
        assert!(matches!(entropy_of_entanglement(&psi), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn preconcurrence_examples() {
        let s = PureState::singlet();
        assert!((preconcurrence(&s).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        let is = s.scale(c(0.0, 1.0));
        assert!((preconcurrence(&is).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(preconcurrence(&PureState::basis(1)).unwrap(), c(0.0, 0.0));
        // Scale-free for subnormalized states.
        let sub = s.scale(c(0.3, 0.0));
        assert!((preconcurrence(&sub).unwrap() - c(-1.0, 0.0)).norm() < 1e-14);
        assert!(matches!(preconcurrence(&PureState::zero()), Err(Error::ZeroNorm)));
    }

    #[test]
    fn cal_e_examples() {
        assert_eq!(cal_e(0.0).unwrap(), 0.0);
        assert!(close(cal_e(1.0).unwrap(), 1.0, 1e-15));
        // h(0.36), evaluated independently with mpmath at 30 digits.
        assert!(close(cal_e(0.96).unwrap(), 0.942_683_189_255_492_2, 1e-14));
        assert!(matches!(cal_e(1.5), Err(Error::OutOfRange(_))));
        assert!(matches!(cal_e(-0.1), Err(Error::OutOfRange(_))));
        assert!(cal_e(f64::NAN).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert!(close(entropy_of_entanglement(&PureState::singlet()).unwrap(), 1.0, 1e-15));
        assert_eq!(entropy_of_entanglement(&PureState::basis(1)).unwrap(), 0.0);
        let psi = PureState::from_real([0.6, 0.0, 0.0, 0.8]);
        assert!(close(entropy_of_entanglement(&psi).unwrap(), 0.942_683_189_255_492_2, 1e-14));
    }

    #[test]
    fn reduced_states_of_product() {
        // |up⟩ ⊗ (|up⟩ + |down⟩)/√2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::from_real([h, h, 0.0, 0.0]);
        let ra = reduced_state(&psi, Subsystem::A);
        let rb = reduced_state(&psi, Subsystem::B);
        assert!(close(ra[0][0].re, 1.0, 1e-15) && ra[1][1].re.abs() < 1e-15);
        assert!(close(rb[0][1].re, 0.5, 1e-15));
        assert!(subsystem_entropy(&psi, Subsystem::B).unwrap().abs() < 1e-12);
    }

    #[test]
    fn flip_of_maximally_mixed() {
        let rho = DensityMatrix::maximally_mixed();
        let flipped = spin_flip_density(&rho);
        assert!(flipped.matrix().sub(rho.matrix()).frobenius_norm() < 1e-15);
    }

    #[test]
    fn flip_of_singlet_projector() {
        let rho = DensityMatrix::from_pure(&PureState::singlet()).unwrap();
        let flipped = spin_flip_density(&rho);
        assert!(flipped.matrix().sub(rho.matrix()).frobenius_norm() < 1e-15);
    }

    #[test]
    fn density_validation() {
        let mut bad = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        bad[(0, 1)] = c(0.1, 0.0);
        assert!(DensityMatrix::new(bad).is_err());
        let trace2 = ComplexMatrix::identity(4).scale(c(0.5, 0.0));
        assert!(DensityMatrix::new(trace2).is_err());
        let negative = ComplexMatrix::from_real_diagonal(&[0.6, 0.5, 0.0, -0.1]);
        assert!(DensityMatrix::new(negative).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn singlet_spectrum() {
        let rho = DensityMatrix::from_pure(&PureState::singlet()).unwrap();
        let spec = lambda_spectrum(&rho);
        assert_eq!(spec.rank, 1);
        assert!(close(spec.lambdas[0], 1.0, 1e-15));
        assert_eq!(&spec.lambdas[1..], &[0.0; 3]);
        assert!(close(concurrence_mixed(&rho), 1.0, 1e-15));
        assert!(close(eof(&rho), 1.0, 1e-14));
    }

    #[test]
    fn maximally_mixed_spectrum() {
        let rho = DensityMatrix::maximally_mixed();
        let spec = lambda_spectrum(&rho);
        assert_eq!(spec.rank, 4);
        for l in spec.lambdas {
            assert!(close(l, 0.25, 1e-15));
        }
        assert_eq!(concurrence_mixed(&rho), 0.0);
        assert_eq!(eof(&rho), 0.0);
    }

    #[test]
    fn werner_half_spectrum() {
        let rho = DensityMatrix::werner(0.5).unwrap();
        let spec = lambda_spectrum(&rho);
        let expected = [0.625, 0.125, 0.125, 0.125];
        for (l, e) in spec.lambdas.iter().zip(expected) {
            assert!(close(*l, e, 1e-14), "{spec:?}");
        }
        assert!(close(concurrence_mixed(&rho), 0.25, 1e-14));
        // 𝓔(0.25) from mpmath at 30 digits.
        assert!(close(eof(&rho), 0.117_618_873_770_917_9, 1e-13));
        let via_r = lambda_spectrum_via_r(&rho).unwrap();
        assert!(spec.max_difference(&via_r) < 1e-12);
    }

    #[test]
    fn separable_werner_has_zero_eof() {
        for p in [0.0, 0.1, 0.2, 0.3, 1.0 / 3.0] {
            let rho = DensityMatrix::werner(p).unwrap();
            assert_eq!(eof(&rho), 0.0, "p = {p}");
        }
    }

    #[test]
    fn local_unitary_with_identity_is_noop() {
        let rho = DensityMatrix::werner(0.7).unwrap();
        let id = ComplexMatrix::identity(2);
        let same = rho.local_unitary(&id, &id).unwrap();
        assert!(same.matrix().sub(rho.matrix()).frobenius_norm() < 1e-15);
    }
}

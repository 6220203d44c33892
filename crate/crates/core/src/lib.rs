//! Entanglement of formation for two-qubit states.
//!
//! The entanglement of formation of a two-qubit density matrix has a closed
//! form in terms of its concurrence, `E(ρ) = 𝓔(C(ρ))`. This crate computes it,
//! builds explicit decompositions that achieve it, and provides a sampling
//! oracle that checks both without trusting the closed form.
//!
//! ```
//! use tangle_core::{eof, optimal_decomposition, DensityMatrix};
//!
//! let rho = DensityMatrix::werner(0.5).unwrap();
//! assert!((eof(&rho) - 0.117_618_873_770_917_9).abs() < 1e-12);
//! let dec = optimal_decomposition(&rho).unwrap();
//! assert!(dec.reconstruction_error(&rho) < 1e-10);
//! ```

pub mod decomposition;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod quantum;
pub mod rng;

pub use decomposition::{
    apply_mixing, eigen_ensemble, equalize_preconcurrence, optimal_decomposition,
    phase_adjusted_ensemble, solve_closure_phases, tilde_orthogonal_ensemble,
    zero_concurrence_ensemble, ClosurePhases, Decomposition, Source, TildeGram,
};
pub use error::{Error, Result};
pub use linalg::{herm_eig, sqrt_psd, takagi, ComplexMatrix, HermitianEig, TakagiFactorization};
pub use oracle::{
    average_concurrence, average_entanglement, minimize_over_decompositions, random_decomposition,
    random_density_matrices, random_density_matrix, verify_formula, Method, RandomSpec,
    VerificationReport,
};
pub use quantum::{
    cal_e, concurrence_mixed, concurrence_pure, entropy_of_entanglement, eof, lambda_spectrum,
    lambda_spectrum_checked, lambda_spectrum_via_r, preconcurrence, spin_flip_density,
    spin_flip_pure, tilde_inner, DensityMatrix, LambdaSpectrum, PureState,
};

pub use num_complex::Complex64;

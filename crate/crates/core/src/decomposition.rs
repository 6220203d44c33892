//! Explicit pure-state decompositions of a two-qubit density matrix.
//!
//! Every decomposition is stored as subnormalized members `|w_i⟩` with
//! `Σ |w_i⟩⟨w_i| = ρ`, so the probability of a member is its norm squared.
//! The optimal ensemble is built in stages:
//!
//! 1. the eigen-ensemble `{v_i}`;
//! 2. the tilde-orthogonal ensemble `{x_i}`, `⟨x_i|x̃_j⟩ = λ_i δ_ij`, from the
//!    Takagi factorization of `τ_ij = ⟨v_i|ṽ_j⟩`;
//! 3. when `λ₁ - λ₂ - λ₃ - λ₄ ≥ 0`, the phase-adjusted ensemble `{y_i}`
//!    followed by real rotations that equalize every member's preconcurrence;
//! 4. otherwise a four-member combination of the `x_i` with closure phases,
//!    every member of which is a product state.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::{
    self, cal_e, preconcurrence, tilde_inner, DensityMatrix, LambdaSpectrum, PureState, TildeFrame,
    ZERO_NORM_SQR,
};

/// Isometry tolerance for mixing matrices.
pub const ISOMETRY_TOL: f64 = 1e-10;

/// Members this close to the target need no further rotation.
pub const EQUALIZE_TOL: f64 = 1e-12;

/// Tolerance on each equalized member's preconcurrence, loosened for very
/// light members by [`member_tol`].
pub const LAST_MEMBER_TOL: f64 = 1e-10;

/// A member of probability `p` mixed from unit-scale vectors carries
/// amplitude errors of order `EPS`, i.e. relative errors of `EPS / √p`, and
/// its preconcurrence cannot be pinned down more finely than that.
pub fn member_tol(w: &PureState) -> f64 {
    LAST_MEMBER_TOL.max(16.0 * f64::EPSILON / w.norm_sqr().sqrt())
}

const BISECTION_CAP: usize = 200;

/// Slack allowed on `λ₁ ≤ λ₂ + λ₃ + λ₄` when solving for closure phases.
const CLOSURE_SLACK: f64 = 1e-12;

/// Where a decomposition came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Eigen,
    TildeOrthogonal,
    PhaseAdjusted,
    Optimal,
    ZeroConcurrence,
    Mixed,
    Sampled,
}

/// An ordered ensemble of subnormalized pure states.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub members: Vec<PureState>,
    pub source: Source,
}

impl Decomposition {
    pub fn new(members: Vec<PureState>, source: Source) -> Self {
        Self { members, source }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.members.iter().map(PureState::norm_sqr).collect()
    }

    pub fn total_probability(&self) -> f64 {
        self.members.iter().map(PureState::norm_sqr).sum()
    }

    /// `Σ |w_i⟩⟨w_i|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        for w in &self.members {
            let a = w.amplitudes();
            for i in 0..4 {
                for j in 0..4 {
                    m[(i, j)] += a[i] * a[j].conj();
                }
            }
        }
        m
    }

    /// Frobenius distance between the reconstructed matrix and `rho`.
    pub fn reconstruction_error(&self, rho: &DensityMatrix) -> f64 {
        self.reconstruct().sub(rho.matrix()).frobenius_norm()
    }

    /// Real parts of the member preconcurrences; zero-norm members give 0.
    pub fn preconcurrences(&self) -> Vec<f64> {
        self.members
            .iter()
            .map(|w| preconcurrence(w).map_or(0.0, |c| c.re))
            .collect()
    }

    /// Concurrence of each member after normalization; zero-norm members give 0.
    pub fn member_concurrences(&self) -> Vec<f64> {
        self.members
            .iter()
            .map(|w| preconcurrence(w).map_or(0.0, |c| c.norm()))
            .collect()
    }

    /// `Σ ⟨w_i|w̃_i⟩`, the probability-weighted preconcurrence.
    pub fn average_preconcurrence(&self) -> Complex64 {
        self.members.iter().map(|w| tilde_inner(w, w)).sum()
    }

    pub fn tilde_gram(&self) -> TildeGram {
        TildeGram::new(&self.members)
    }
}

/// Symmetric matrix of tilde inner products `⟨w_i|w̃_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TildeGram {
    pub entries: ComplexMatrix,
}

impl TildeGram {
    pub fn new(members: &[PureState]) -> Self {
        let n = members.len();
        Self {
            entries: ComplexMatrix::from_fn(n, n, |i, j| tilde_inner(&members[i], &members[j])),
        }
    }

    /// Largest off-diagonal magnitude.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.entries.rows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.entries[(i, j)].norm());
                }
            }
        }
        worst
    }
}

/// Phases `θ_j` with `Σ_j e^{2iθ_j} λ_j = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosurePhases {
    pub thetas: [f64; 4],
}

impl ClosurePhases {
    /// `|Σ_j e^{2iθ_j} λ_j|`.
    pub fn residual(&self, lambdas: &[f64; 4]) -> f64 {
        self.thetas
            .iter()
            .zip(lambdas)
            .map(|(&t, &l)| Complex64::from_polar(l, 2.0 * t))
            .sum::<Complex64>()
            .norm()
    }
}

/// Subnormalized eigenvectors of ρ, largest eigenvalue first.
pub fn eigen_ensemble(rho: &DensityMatrix) -> Decomposition {
    Decomposition::new(rho.subnormalized_eigenvectors(), Source::Eigen)
}

/// `|w_i⟩ = Σ_j U*_ij |v_j⟩` for an `m x n` matrix `U` with orthonormal columns.
pub fn apply_mixing(dec: &Decomposition, u: &ComplexMatrix) -> Result<Decomposition> {
    if u.cols() != dec.len() {
        return Err(Error::MemberCountMismatch {
            cols: u.cols(),
            members: dec.len(),
        });
    }
    let deviation = u.isometry_deviation();
    if deviation > ISOMETRY_TOL {
        return Err(Error::NotIsometry { deviation });
    }
    let members = (0..u.rows())
        .map(|i| {
            let mut amps = [Complex64::new(0.0, 0.0); 4];
            for (j, v) in dec.members.iter().enumerate() {
                let coeff = u[(i, j)].conj();
                for (a, b) in amps.iter_mut().zip(v.amplitudes()) {
                    *a += coeff * b;
                }
            }
            PureState::new(amps)
        })
        .collect();
    Ok(Decomposition::new(members, Source::Mixed))
}

/// Ensemble with `⟨x_i|x̃_j⟩ = λ_i δ_ij`, along with its λ-spectrum.
pub fn tilde_orthogonal_with_spectrum(rho: &DensityMatrix) -> (Decomposition, LambdaSpectrum) {
    let frame = TildeFrame::new(rho);
    let mut dec = apply_mixing(
        &Decomposition::new(frame.eigen_members.clone(), Source::Eigen),
        &frame.takagi.u,
    )
    .expect("Takagi factors are unitary");
    dec.source = Source::TildeOrthogonal;
    (dec, frame.spectrum())
}

pub fn tilde_orthogonal_ensemble(rho: &DensityMatrix) -> Decomposition {
    tilde_orthogonal_with_spectrum(rho).0
}

/// `y₁ = x₁`, `y_j = i·x_j` for `j > 1`.
pub fn phase_adjusted_ensemble(x: &Decomposition) -> Decomposition {
    let i = Complex64::new(0.0, 1.0);
    let members = x
        .members
        .iter()
        .enumerate()
        .map(|(k, w)| if k == 0 { *w } else { w.scale(i) })
        .collect();
    Decomposition::new(members, Source::PhaseAdjusted)
}

/// `(cos φ·a + sin φ·b, -sin φ·a + cos φ·b)`.
fn rotate_pair(a: &PureState, b: &PureState, phi: f64) -> (PureState, PureState) {
    let (s, c) = phi.sin_cos();
    let (s, c) = (Complex64::new(s, 0.0), Complex64::new(c, 0.0));
    (a.combine(c, b, s), a.combine(-s, b, c))
}

fn real_preconcurrence(w: &PureState) -> f64 {
    preconcurrence(w).map_or(0.0, |c| c.re)
}

/// Rotation angle in `[0, π/2]` at which `cos φ·a + sin φ·b` has
/// preconcurrence `target`, given `a` above and `b` below it (or the
/// reverse). Returns the rotated pair, the first of which is the one fixed.
fn hit_target(a: &PureState, b: &PureState, target: f64) -> (PureState, PureState) {
    let sign = if real_preconcurrence(a) >= target { 1.0 } else { -1.0 };
    let g = |phi: f64| sign * (real_preconcurrence(&rotate_pair(a, b, phi).0) - target);
    let (mut left, mut right) = (0.0, FRAC_PI_2);
    let mut phi = if g(left) <= 0.0 { left } else { right };
    if g(left) > 0.0 && g(right) < 0.0 {
        // Bisect to the end of floating-point resolution: whatever this
        // member misses by is handed on to the last member, divided by that
        // member's probability.
        let mut best = (f64::INFINITY, left);
        for _ in 0..BISECTION_CAP {
            let mid = 0.5 * (left + right);
            if mid <= left || mid >= right {
                break;
            }
            let gm = g(mid);
            if gm.abs() < best.0 {
                best = (gm.abs(), mid);
            }
            if gm == 0.0 {
                break;
            }
            if gm > 0.0 {
                left = mid;
            } else {
                right = mid;
            }
        }
        phi = best.1;
    }
    rotate_pair(a, b, phi)
}

/// Mixes members pairwise with real rotations until every member has
/// preconcurrence `target`.
///
/// Real rotations conserve the sum of tilde self-products, so the roundoff
/// left behind by every retired member ends up on the last active one,
/// divided by its probability. The order is chosen to keep that member
/// heavy: each step takes the lightest member still off target, pairs it with
/// the member on the other side of `target` carrying the largest weighted
/// excess `p·|c - target|`, rotates the pair by an angle found by bisection
/// until one of them hits `target` (whichever choice leaves the heavier
/// member active), and retires that one. The last member's landing on the
/// target is checked, not assumed.
pub fn equalize_preconcurrence(y: &Decomposition, target: f64) -> Result<Decomposition> {
    let mut members = y.members.clone();
    let mut active: Vec<usize> = (0..members.len()).collect();

    while active.len() > 1 {
        let value = |k: usize| real_preconcurrence(&members[k]);
        let off: Vec<usize> = active.iter().copied().filter(|&k| (value(k) - target).abs() > EQUALIZE_TOL).collect();
        // Ties go to the lowest index because `active` stays sorted.
        let Some(&light) = off.iter().min_by(|&&x, &&y| members[x].norm_sqr().total_cmp(&members[y].norm_sqr())) else {
            break;
        };
        let above = value(light) > target;
        let excess = |k: usize| members[k].norm_sqr() * (value(k) - target).abs();
        let partner = active
            .iter()
            .copied()
            .filter(|&k| k != light && (value(k) > target) != above)
            .max_by(|&x, &y| excess(x).total_cmp(&excess(y)));
        // Without a partner only roundoff is left to fix; the final check
        // below decides whether it is small enough.
        let Some(partner) = partner else {
            break;
        };
        // The last pair is aimed at its own weighted mean, which differs from
        // `target` only by accumulated roundoff; that way both members share
        // the roundoff.
        let aim = if active.len() == 2 {
            let (ma, mb) = (&members[light], &members[partner]);
            let mean = (tilde_inner(ma, ma) + tilde_inner(mb, mb)).re / (ma.norm_sqr() + mb.norm_sqr());
            if (mean - target).abs() <= LAST_MEMBER_TOL { mean } else { target }
        } else {
            target
        };
        // Either member may be the one fixed, and flipping the partner's sign
        // reaches the other solution of the same pair; the fixed vector is set
        // directly to full precision, so keep the heaviest one active.
        let minus = Complex64::new(-1.0, 0.0);
        let (ml, mp) = (members[light], members[partner]);
        let (fixed, kept, z_fixed, z_kept) = [
            (light, partner, hit_target(&ml, &mp, aim)),
            (light, partner, hit_target(&ml, &mp.scale(minus), aim)),
            (partner, light, hit_target(&mp, &ml, aim)),
            (partner, light, hit_target(&mp, &ml.scale(minus), aim)),
        ]
        .into_iter()
        .map(|(f, k, (zf, zk))| (f, k, zf, zk))
        .max_by(|x, y| x.3.norm_sqr().total_cmp(&y.3.norm_sqr()))
        .expect("four candidates");
        let reached = real_preconcurrence(&z_fixed);
        if (reached - aim).abs() > member_tol(&z_fixed) {
            return Err(Error::TargetUnreachable {
                member: fixed,
                value: reached,
                target,
            });
        }
        members[fixed] = z_fixed;
        members[kept] = z_kept;
        active.retain(|&k| k != fixed);
    }

    for &k in &active {
        let value = real_preconcurrence(&members[k]);
        if (value - target).abs() > member_tol(&members[k]) {
            return Err(Error::TargetUnreachable {
                member: k,
                value,
                target,
            });
        }
    }
    Ok(Decomposition::new(members, Source::Optimal))
}

/// Phases closing the polygon with sides `λ₁..λ₄`, with `θ₁ = 0`.
///
/// `λ₃` and `λ₄` are first merged into one side of length `r`, taken at the
/// middle of its feasible range, so the quadrilateral reduces to two
/// triangles `(λ₁, λ₂, r)` and `(r, λ₃, λ₄)` solved by the law of cosines.
pub fn solve_closure_phases(lams: &LambdaSpectrum) -> Result<ClosurePhases> {
    let [l1, l2, l3, l4] = lams.lambdas;
    let rest = l2 + l3 + l4;
    if l1 > rest + CLOSURE_SLACK {
        return Err(Error::NoClosure { largest: l1, rest });
    }
    if l1 <= 0.0 {
        return Ok(ClosurePhases { thetas: [0.0; 4] });
    }
    let lo = (l1 - l2).max(l3 - l4);
    let hi = (l1 + l2).min(l3 + l4);
    let r = (0.5 * (lo + hi)).max(0.0);

    let cos_angle = |num: f64, den: f64| if den > 0.0 { (num / den).clamp(-1.0, 1.0) } else { 1.0 };

    let alpha2 = if l2 > 0.0 {
        cos_angle(r * r - l1 * l1 - l2 * l2, 2.0 * l1 * l2).acos()
    } else {
        0.0
    };
    let tail = -(Complex64::new(l1, 0.0) + Complex64::from_polar(l2, alpha2));
    let beta = if tail.norm() > 0.0 { tail.arg() } else { 0.0 };

    let (alpha3, alpha4) = if l4 <= 0.0 {
        (if l3 > 0.0 { beta } else { 0.0 }, 0.0)
    } else {
        let gamma = cos_angle(r * r + l3 * l3 - l4 * l4, 2.0 * r * l3).acos();
        let alpha3 = beta + gamma;
        let last = tail - Complex64::from_polar(l3, alpha3);
        (alpha3, last.arg())
    };

    Ok(ClosurePhases {
        thetas: [0.0, 0.5 * alpha2, 0.5 * alpha3, 0.5 * alpha4],
    })
}

const SIGN_PATTERN: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

/// Product-state ensemble for `λ₁ - λ₂ - λ₃ - λ₄ < 0`.
///
/// The `x` ensemble is padded with zero vectors up to four members and
/// recombined as `z_k = ½ Σ_j ±e^{iθ_j} x_j`; each `z_k` then has tilde
/// self-product `¼ Σ_j e^{-2iθ_j} λ_j = 0`. Members of zero norm are dropped.
pub fn zero_concurrence_ensemble(x: &Decomposition, lams: &LambdaSpectrum) -> Result<Decomposition> {
    let signed = lams.signed_concurrence();
    if signed >= 0.0 {
        return Err(Error::WrongCase(signed));
    }
    let phases = solve_closure_phases(lams)?;
    let mut padded = x.members.clone();
    padded.resize(4, PureState::zero());

    let members = SIGN_PATTERN
        .iter()
        .map(|signs| {
            let mut z = PureState::zero();
            for ((xj, &theta), &s) in padded.iter().zip(&phases.thetas).zip(signs) {
                z = z.combine(Complex64::new(1.0, 0.0), xj, Complex64::from_polar(0.5 * s, theta));
            }
            z
        })
        .filter(|z| z.norm_sqr() >= ZERO_NORM_SQR)
        .collect();
    Ok(Decomposition::new(members, Source::ZeroConcurrence))
}

/// A decomposition of at most four members whose average entanglement equals
/// the entanglement of formation of `rho`.
pub fn optimal_decomposition(rho: &DensityMatrix) -> Result<Decomposition> {
    let (x, lams) = tilde_orthogonal_with_spectrum(rho);
    let signed = lams.signed_concurrence();
    if signed < 0.0 {
        return zero_concurrence_ensemble(&x, &lams);
    }
    if x.len() == 1 {
        return Ok(Decomposition::new(x.members, Source::Optimal));
    }
    let y = phase_adjusted_ensemble(&x);
    equalize_preconcurrence(&y, signed.min(1.0))
}

/// Average entanglement the optimal decomposition is meant to achieve.
pub fn target_entanglement(rho: &DensityMatrix) -> f64 {
    cal_e(quantum::concurrence_mixed(rho)).expect("concurrence lies in [0, 1]")
}

//! Brute-force checks that do not rely on the closed-form construction.
//!
//! Random decompositions are drawn from Haar-random isometries applied to the
//! eigen-ensemble, which reaches every decomposition of ρ. Average
//! entanglement is computed from reduced-state entropies, never from the
//! concurrence formula, so the comparisons here are independent of it.

use rayon::prelude::*;

use crate::decomposition::{self, apply_mixing, eigen_ensemble, Decomposition, Source};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::{
    concurrence_mixed, eof, subsystem_entropy, tilde_inner, DensityMatrix, PureState, Subsystem,
    ZERO_NORM_SQR,
};
use crate::rng::Rng64;

use num_complex::Complex64;

/// Hard cap on decomposition size for sampling.
pub const MAX_MEMBERS: usize = 16;

/// Members used by default when cycling `m` over `n..=DEFAULT_MAX_MEMBERS`.
pub const DEFAULT_MAX_MEMBERS: usize = 8;

/// A sampled average may undercut the formula by at most this much.
pub const LOWER_BOUND_TOL: f64 = 1e-9;

/// Required agreement between the constructed ensemble and the formula.
pub const CONSTRUCTION_TOL: f64 = 1e-8;

/// Reconstruction tolerance for any decomposition.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// `G G† / Tr(G G†)` with `G` a 4 x rank complex Gaussian matrix.
    Ginibre,
    /// Random mixture of `rank` Haar-random pure states with flat Dirichlet weights.
    MixtureOfPures,
    /// A single Haar-random pure state.
    HaarPure,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ginibre => "ginibre",
            Method::MixtureOfPures => "mixture_of_pures",
            Method::HaarPure => "haar_pure",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ginibre" => Some(Method::Ginibre),
            "mixture_of_pures" | "mixture-of-pures" => Some(Method::MixtureOfPures),
            "haar_pure" | "haar-pure" => Some(Method::HaarPure),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub method: Method,
    pub rank: usize,
    pub count: usize,
    pub seed: u64,
}

impl RandomSpec {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !(1..=4).contains(&self.rank) {
            return Err(format!("rank must be between 1 and 4, got {}", self.rank));
        }
        if self.method == Method::HaarPure && self.rank != 1 {
            return Err(format!("haar_pure states have rank 1, got rank {}", self.rank));
        }
        if self.count == 0 {
            return Err("count must be positive".into());
        }
        Ok(())
    }
}

/// Sequential sampler for states and isometries.
#[derive(Debug, Clone)]
pub struct StateSampler {
    rng: Rng64,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: Rng64::seed(seed) }
    }

    pub fn from_rng(rng: Rng64) -> Self {
        Self { rng }
    }

    pub fn rng(&mut self) -> &mut Rng64 {
        &mut self.rng
    }

    pub fn haar_pure(&mut self) -> PureState {
        let amps = std::array::from_fn(|_| self.rng.complex_gaussian());
        PureState::new(amps)
            .normalized()
            .expect("a Gaussian vector is nonzero with probability one")
    }

    pub fn ginibre(&mut self, rank: usize) -> DensityMatrix {
        let g = ComplexMatrix::from_fn(4, rank, |_, _| self.rng.complex_gaussian());
        let gg = g.matmul(&g.adjoint());
        let tr = gg.trace().re;
        DensityMatrix::new(gg.scale(Complex64::new(1.0 / tr, 0.0))).expect("G G† / Tr is a state")
    }

    pub fn mixture_of_pures(&mut self, rank: usize) -> DensityMatrix {
        let weights: Vec<f64> = (0..rank).map(|_| -(1.0 - self.rng.uniform()).ln()).collect();
        let total: f64 = weights.iter().sum();
        let mut m = ComplexMatrix::zeros(4, 4);
        for w in weights {
            let psi = self.haar_pure();
            m = m.add(&psi.projector().scale(Complex64::new(w / total, 0.0)));
        }
        DensityMatrix::new(m).expect("convex mixtures of states are states")
    }

    pub fn density(&mut self, method: Method, rank: usize) -> DensityMatrix {
        match method {
            Method::Ginibre => self.ginibre(rank),
            Method::MixtureOfPures => self.mixture_of_pures(rank),
            Method::HaarPure => DensityMatrix::from_pure(&self.haar_pure()).expect("normalized"),
        }
    }

    /// Haar-random `m x n` isometry: QR of a Gaussian matrix by modified
    /// Gram–Schmidt, which leaves `R` with a positive real diagonal.
    pub fn haar_isometry(&mut self, m: usize, n: usize) -> ComplexMatrix {
        assert!(n <= m, "isometry needs m >= n");
        let mut q = ComplexMatrix::from_fn(m, n, |_, _| self.rng.complex_gaussian());
        for j in 0..n {
            for k in 0..j {
                let proj: Complex64 = (0..m).map(|i| q[(i, k)].conj() * q[(i, j)]).sum();
                for i in 0..m {
                    let qk = q[(i, k)];
                    q[(i, j)] -= proj * qk;
                }
            }
            let norm = (0..m).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            for i in 0..m {
                q[(i, j)] /= norm;
            }
        }
        q
    }

    /// Decomposition of `rho` with `m` members from a Haar-random isometry.
    pub fn decomposition(&mut self, rho: &DensityMatrix, m: usize) -> Result<Decomposition> {
        let v = eigen_ensemble(rho);
        let n = v.len();
        if m < n || m > MAX_MEMBERS {
            return Err(Error::TooFewMembers { requested: m, rank: n });
        }
        let u = self.haar_isometry(m, n);
        let mut dec = apply_mixing(&v, &u)?;
        dec.source = Source::Sampled;
        Ok(dec)
    }
}

/// `count` states per `spec`, deterministic in the seed.
pub fn random_density_matrices(spec: &RandomSpec) -> Vec<DensityMatrix> {
    let mut sampler = StateSampler::new(spec.seed);
    (0..spec.count).map(|_| sampler.density(spec.method, spec.rank)).collect()
}

/// The first state of the sequence described by `spec`.
pub fn random_density_matrix(spec: &RandomSpec) -> DensityMatrix {
    StateSampler::new(spec.seed).density(spec.method, spec.rank)
}

/// Random `m`-member decomposition of `rho`.
pub fn random_decomposition(rho: &DensityMatrix, m: usize, seed: u64) -> Result<Decomposition> {
    StateSampler::new(seed).decomposition(rho, m)
}

/// `p · E(w / |w|)` for a subnormalized member.
pub fn member_entanglement(w: &PureState) -> f64 {
    let p = w.norm_sqr();
    if p < ZERO_NORM_SQR {
        return 0.0;
    }
    let psi = w.normalized().expect("nonzero");
    p * subsystem_entropy(&psi, Subsystem::A).expect("normalized")
}

/// `Σ_i p_i E(ψ_i)` with `E` the reduced-state entropy.
pub fn average_entanglement(dec: &Decomposition) -> f64 {
    dec.members.iter().map(member_entanglement).sum()
}

/// `Σ_i p_i C(ψ_i) = Σ_i |⟨w_i|w̃_i⟩|`.
pub fn average_concurrence(dec: &Decomposition) -> f64 {
    dec.members.iter().map(|w| tilde_inner(w, w).norm()).sum()
}

/// Result of a random-restart local search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best: f64,
    /// Best value seen so far, recorded after the start of each restart and
    /// after every iteration.
    pub history: Vec<f64>,
}

const STEP_SHRINK: f64 = 0.95;
const STEP_GROWTH: f64 = 1.1;

/// Random-restart greedy search for the least average entanglement.
pub fn minimize_over_decompositions(rho: &DensityMatrix, restarts: usize, iters: usize, seed: u64) -> f64 {
    search_decompositions(rho, restarts, iters, seed).best
}

/// Like [`minimize_over_decompositions`], keeping the convergence history.
///
/// Restart `r` draws a Haar-random decomposition with
/// `m = n + r mod (9 - n)` members. A move mixes two random members by a
/// unitary `[[c, s e^{-iφ}], [-s e^{iφ}, c]]` with angle drawn as
/// `step · N(0, 1)`; if it does not lower the objective the mirrored angle
/// is tried once. Improvements are kept greedily. Every rejection shrinks
/// `step` by 5%, every acceptance grows it by 10% (capped at 1), so the step
/// cannot collapse on long flat stretches.

pub fn search_decompositions(rho: &DensityMatrix, restarts: usize, iters: usize, seed: u64) -> SearchOutcome {
    let n = rho.rank();
    let span = DEFAULT_MAX_MEMBERS + 1 - n;
    let mut best = f64::INFINITY;
    let mut history = Vec::with_capacity(restarts * (iters + 1));

    for restart in 0..restarts.max(1) {
        let mut rng = Rng64::stream(seed, restart as u64);
        let m = n + restart % span;
        let mut sampler = StateSampler::from_rng(rng.clone());
        let dec = sampler.decomposition(rho, m).expect("m lies in n..=8");
        rng = sampler.rng().clone();

        let mut members = dec.members;
        let mut parts: Vec<f64> = members.iter().map(member_entanglement).collect();
        let mut current: f64 = parts.iter().sum();
        best = best.min(current);
        history.push(best);

        let mut step = 1.0;
        for _ in 0..iters {
            if m < 2 {
                history.push(best);
                continue;
            }
            let i = rng.below(m);
            let mut j = rng.below(m - 1);
            if j >= i {
                j += 1;
            }
            let angle = step * rng.normal_pair().0;
            let e = Complex64::from_polar(1.0, std::f64::consts::TAU * rng.uniform());
            let propose = |angle: f64| {
                let (s, c) = angle.sin_cos();
                let wi = members[i].combine(Complex64::new(c, 0.0), &members[j], e.conj() * s);
                let wj = members[i].combine(-e * s, &members[j], Complex64::new(c, 0.0));
                let (pi, pj) = (member_entanglement(&wi), member_entanglement(&wj));
                (current - parts[i] - parts[j] + pi + pj, wi, wj, pi, pj)
            };
            // Mirrored second try: the opposite direction is the natural guess
            // when the first one climbs.
            let mut trial = propose(angle);
            if trial.0 >= current {
                trial = propose(-angle);
            }
            let (candidate, wi, wj, pi, pj) = trial;
            if candidate < current {
                members[i] = wi;
                members[j] = wj;
                parts[i] = pi;
                parts[j] = pj;
                current = candidate;
                step = (step * STEP_GROWTH).min(1.0);
            } else {
                step *= STEP_SHRINK;
            }
            best = best.min(current);
            history.push(best);
        }
    }
    SearchOutcome { best, history }
}

/// Outcome of checking the closed form against sampling and the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub concurrence: f64,
    pub formula_value: f64,
    pub constructed_avg_entanglement: f64,
    pub constructed_reconstruction_error: f64,
    pub min_sampled_avg_entanglement: f64,
    pub min_sampled_avg_concurrence: f64,
    pub samples: usize,
    /// Samples that undercut the formula, plus one if the construction missed it.
    pub violations: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// Order-independent merge of two reports over different states: counts
    /// add up and the minima keep the smaller margin above the formula.
    pub fn merge(&self, other: &Self) -> MergedReport {
        MergedReport::from(self).merge(&MergedReport::from(other))
    }
}

/// Aggregate over many verified states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergedReport {
    pub states: usize,
    pub samples: usize,
    pub violations: usize,
    /// Smallest `sampled average entanglement - formula` seen.
    pub min_entanglement_margin: f64,
    /// Smallest `sampled average concurrence - C(ρ)` seen.
    pub min_concurrence_margin: f64,
}

impl MergedReport {
    pub fn empty() -> Self {
        Self {
            states: 0,
            samples: 0,
            violations: 0,
            min_entanglement_margin: f64::INFINITY,
            min_concurrence_margin: f64::INFINITY,
        }
    }

    pub fn merge(&self, other: &Self) -> Self {
        Self {
            states: self.states + other.states,
            samples: self.samples + other.samples,
            violations: self.violations + other.violations,
            min_entanglement_margin: self.min_entanglement_margin.min(other.min_entanglement_margin),
            min_concurrence_margin: self.min_concurrence_margin.min(other.min_concurrence_margin),
        }
    }
}

impl From<&VerificationReport> for MergedReport {
    fn from(r: &VerificationReport) -> Self {
        Self {
            states: 1,
            samples: r.samples,
            violations: r.violations,
            min_entanglement_margin: r.min_sampled_avg_entanglement - r.formula_value,
            min_concurrence_margin: r.min_sampled_avg_concurrence - r.concurrence,
        }
    }
}

/// Checks the optimal construction and `samples` random decompositions of `rho`.
///
/// Sample `k` uses `m = n + k mod (9 - n)` members.
pub fn verify_formula(rho: &DensityMatrix, samples: usize, seed: u64) -> Result<VerificationReport> {
    let report = verification_report(rho, samples, seed)?;
    if report.passed() {
        Ok(report)
    } else {
        Err(Error::FormulaViolation(Box::new(report)))
    }
}

/// The report of [`verify_formula`] without turning violations into an error.
pub fn verification_report(rho: &DensityMatrix, samples: usize, seed: u64) -> Result<VerificationReport> {
    let c = concurrence_mixed(rho);
    let formula_value = eof(rho);
    let mut violations = 0;

    let optimal = decomposition::optimal_decomposition(rho)?;
    let constructed_avg_entanglement = average_entanglement(&optimal);
    let constructed_reconstruction_error = optimal.reconstruction_error(rho);
    if (constructed_avg_entanglement - formula_value).abs() > CONSTRUCTION_TOL
        || constructed_reconstruction_error > RECONSTRUCTION_TOL
    {
        violations += 1;
    }

    let n = rho.rank();
    let span = DEFAULT_MAX_MEMBERS + 1 - n;
    let mut sampler = StateSampler::new(seed);
    let mut min_e = f64::INFINITY;
    let mut min_c = f64::INFINITY;
    for k in 0..samples {
        let dec = sampler.decomposition(rho, n + k % span)?;
        let e = average_entanglement(&dec);
        let ac = average_concurrence(&dec);
        if e < formula_value - LOWER_BOUND_TOL || ac < c - LOWER_BOUND_TOL {
            violations += 1;
        }
        min_e = min_e.min(e);
        min_c = min_c.min(ac);
    }

    Ok(VerificationReport {
        concurrence: c,
        formula_value,
        constructed_avg_entanglement,
        constructed_reconstruction_error,
        min_sampled_avg_entanglement: min_e,
        min_sampled_avg_concurrence: min_c,
        samples,
        violations,
    })
}

/// Verifies many states in parallel; state `i` uses the seed stream `i`.
/// Output order matches input order.
pub fn verify_many(rhos: &[DensityMatrix], samples: usize, seed: u64) -> Vec<Result<VerificationReport>> {
    rhos.par_iter()
        .enumerate()
        .map(|(i, rho)| verification_report(rho, samples, stream_seed(seed, i as u64)))
        .collect()
}

/// Seed of the `index`-th independent task under `seed`.
pub fn stream_seed(seed: u64, index: u64) -> u64 {
    Rng64::stream(seed, index).next_u64()
}

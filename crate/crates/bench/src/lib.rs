//! Shared fixtures for the criterion benchmarks.

use tangle_core::oracle::{random_density_matrices, Method, RandomSpec};
use tangle_core::DensityMatrix;

/// Seeded rank-`rank` Ginibre states.
pub fn ginibre_workload(rank: usize, count: usize, seed: u64) -> Vec<DensityMatrix> {
    random_density_matrices(&RandomSpec {
        method: Method::Ginibre,
        rank,
        count,
        seed,
    })
}

/// Equal numbers of states of every rank, interleaved.
pub fn mixed_rank_workload(count_per_rank: usize, seed: u64) -> Vec<DensityMatrix> {
    let per_rank: Vec<Vec<DensityMatrix>> = (1..=4)
        .map(|rank| ginibre_workload(rank, count_per_rank, seed.wrapping_add(rank as u64)))
        .collect();
    (0..count_per_rank)
        .flat_map(|i| per_rank.iter().map(move |v| v[i].clone()))
        .collect()
}

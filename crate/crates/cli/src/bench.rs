//! `tangle bench`: single-threaded throughput over pre-generated states.
//!
//! The timed work per matrix is exactly what `tangle eof` (or `decompose`)
//! does: compute the record and serialize it as a JSON line at 15 significant
//! digits. Generation of the workload is not timed.

use std::hint::black_box;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use tangle_core::oracle::StateSampler;
use tangle_core::DensityMatrix;

use crate::record::{to_json_line, Detail, ResultRecord};

/// Ginibre states cycling through ranks 1..=4.
pub fn workload(count: usize, seed: u64) -> Vec<DensityMatrix> {
    let mut sampler = StateSampler::new(seed);
    (0..count).map(|i| sampler.ginibre(1 + i % 4)).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct Timing {
    pub count: usize,
    pub elapsed: Duration,
    /// Bytes of JSON produced; keeps the serialization from being optimized out.
    pub bytes: usize,
}

impl Timing {
    pub fn throughput(&self) -> f64 {
        self.count as f64 / self.elapsed.as_secs_f64()
    }

    fn line(&self, name: &str) -> String {
        format!(
            "{name}: {} matrices in {:.3} s, mean {:.3} us, {:.0} matrices/s",
            self.count,
            self.elapsed.as_secs_f64(),
            self.elapsed.as_secs_f64() * 1e6 / self.count as f64,
            self.throughput()
        )
    }
}

pub fn time_records(states: &[DensityMatrix], detail: Detail) -> Timing {
    let start = Instant::now();
    let mut bytes = 0;
    for (i, rho) in states.iter().enumerate() {
        let record = ResultRecord::compute("bench", rho, detail)
            .unwrap_or_else(|e| panic!("bench state {i} failed: {e}"));
        bytes += black_box(to_json_line(&record)).len();
    }
    Timing { count: states.len(), elapsed: start.elapsed(), bytes }
}

pub fn run(count: usize, seed: u64, eof_only: bool, out: &mut dyn Write) -> io::Result<()> {
    let states = workload(count, seed);
    writeln!(out, "{}", time_records(&states, Detail::Eof).line("eof"))?;
    if !eof_only {
        writeln!(out, "{}", time_records(&states, Detail::Decompose).line("decompose"))?;
    }
    Ok(())
}

//! Random-instance measurements behind `mdag bench`.

use std::time::Instant;

use mdag_core::builder::stats;
use mdag_core::oracle::MaximalityChecker;
use mdag_core::query::Annotated;
use mdag_core::{compact_mdag, BuildError, Builder, Mdag};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CSV_HEADER: &str = "n,sigma,seed,nodes,edges,build_ms,mcs_count_digits,frames_per_solution,max_lm_multiplicity";

/// Two random strings of length `n` over the first `sigma` capital letters.
/// Each `(n, sigma, seed)` gives its own stream.
pub fn random_pair(n: usize, sigma: usize, seed: u64) -> (Vec<u8>, Vec<u8>) {
    assert!((1..=26).contains(&sigma), "sigma must be between 1 and 26");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 8) | sigma as u64);
    let mut draw = || (0..n).map(|_| b'A' + rng.gen_range(0..sigma as u8)).collect::<Vec<u8>>();
    let x = draw();
    let y = draw();
    (x, y)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub sigma: usize,
    pub seed: u64,
    /// Nodes and edges of the pruned graph before compaction.
    pub nodes: usize,
    pub edges: usize,
    pub build_ms: f64,
    pub mcs_count_digits: usize,
    /// Frames of a complete enumeration divided by the number of solutions.
    pub frames_per_solution: f64,
    pub max_lm_multiplicity: usize,
    /// Solutions per second over the first `enum_cap` solutions.
    pub throughput: f64,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:.3},{},{:.4},{}",
            self.n,
            self.sigma,
            self.seed,
            self.nodes,
            self.edges,
            self.build_ms,
            self.mcs_count_digits,
            self.frames_per_solution,
            self.max_lm_multiplicity
        )
    }
}

pub fn run_instance(n: usize, sigma: usize, seed: u64, enum_cap: u64) -> Result<BenchRow, BuildError> {
    let (x, y) = random_pair(n, sigma, seed);
    let start = Instant::now();
    let pruned = Builder::new().build(&x, &y)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let shape = stats(&pruned);
    let dag = compact_mdag(pruned);
    let index = Annotated::new(&dag);
    let count = index.count();
    let frames_per_solution = ratio(&index.full_enumeration_frames(), count);

    let start = Instant::now();
    let mut cursor = index.cursor();
    let mut seen = 0u64;
    while seen < enum_cap && cursor.next_delta().is_some() {
        seen += 1;
    }
    let throughput = seen as f64 / start.elapsed().as_secs_f64().max(1e-9);

    Ok(BenchRow {
        n,
        sigma,
        seed,
        nodes: shape.nodes,
        edges: shape.edges,
        build_ms,
        mcs_count_digits: count.to_string().len(),
        frames_per_solution,
        max_lm_multiplicity: shape.max_lm_multiplicity,
        throughput,
    })
}

/// Smallest `C` with `nodes <= C·n³` on every row.
pub fn cubic_envelope(rows: &[BenchRow]) -> f64 {
    rows.iter().map(|r| r.nodes as f64 / (r.n as f64).powi(3)).fold(0.0, f64::max)
}

fn ratio(a: &num_bigint::BigUint, b: &num_bigint::BigUint) -> f64 {
    // scale both down together so huge counts stay in f64 range
    let shift = b.bits().saturating_sub(900);
    let (a, b) = (a >> shift, b >> shift);
    a.to_f64().unwrap_or(f64::INFINITY) / b.to_f64().unwrap_or(f64::INFINITY)
}

/// Checks the first `cap` solutions of `g` for maximality in `(x, y)`.
/// Returns how many were checked, or the first offender with its rank.
pub fn verify_output(g: &Mdag, x: &[u8], y: &[u8], cap: usize) -> Result<usize, (usize, Vec<u8>)> {
    let checker = MaximalityChecker::new(x, y);
    let index = Annotated::new(g);
    let mut cursor = index.cursor();
    let mut k = 0;
    while k < cap {
        let Some(s) = cursor.next_solution() else { break };
        k += 1;
        if !checker.is_maximal(s) {
            return Err((k, s.to_vec()));
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mdag_core::build_mdag;

    #[test]
    fn pairs_are_reproducible_and_per_length() {
        assert_eq!(random_pair(30, 4, 7), random_pair(30, 4, 7));
        assert_ne!(random_pair(30, 4, 7).0[..20], random_pair(40, 4, 7).0[..20]);
        assert!(random_pair(50, 2, 1).0.iter().all(|c| b"AB".contains(c)));
    }

    #[test]
    fn row_has_every_column() {
        let row = run_instance(20, 4, 3, 1000).unwrap();
        assert_eq!(row.csv().split(',').count(), CSV_HEADER.split(',').count());
        // frames <= 2·solutions + 1
        assert!(row.frames_per_solution <= 3.0);
        assert!(row.max_lm_multiplicity < 40);
    }

    #[test]
    fn ratio_handles_huge_numbers() {
        let big = num_bigint::BigUint::from(3u32).pow(2000);
        assert!((ratio(&(&big * 2u32), &big) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn verify_accepts_real_output_and_reports_offenders() {
        let g = compact_mdag(build_mdag(b"TCACAGAGA", b"ACCCGTAGG"));
        assert_eq!(verify_output(&g, b"TCACAGAGA", b"ACCCGTAGG", 100), Ok(5));
        assert_eq!(verify_output(&g, b"TCACAGAGA", b"ACCCGTAGG", 2), Ok(2));
        // against a longer X every old solution can be extended
        assert_eq!(verify_output(&g, b"TCACAGAGAT", b"ACCCGTAGGT", 9).unwrap_err().0, 1);
    }
}

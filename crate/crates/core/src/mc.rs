//! Deterministic Monte Carlo over uniform directions on `S^{N-1}`.
//!
//! The sample stream is cut into fixed-size chunks; chunk `k` draws from the
//! ChaCha8 stream `k` keyed by the user seed. Workers pick up whole chunks and
//! per-chunk tallies are merged in chunk order, so every estimate is
//! bit-identical for a given `(seed, samples)` whatever the worker count.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Samples per substream chunk.
pub const CHUNK: u64 = 1 << 14;

/// Sample budget, seed and worker count for one estimator run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McPlan {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl McPlan {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, seed, workers: 1 }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

/// Monte Carlo estimate of an `H^{N-1}` measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Binomial estimate from `hits` out of `samples`, scaled by `total`
    /// (the measure of the sampled domain, `N ω_N` for the whole sphere).
    pub fn from_hits(hits: u64, samples: u64, seed: u64, total: f64) -> Self {
        let p = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
        let stderr = if samples == 0 {
            0.0
        } else {
            (p * (1.0 - p) / samples as f64).sqrt() * total
        };
        Self { value: p * total, stderr, samples, seed }
    }

    /// `|self − target| ≤ k·stderr`, with a floor of one part in `1e-12` for
    /// zero-variance estimates.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.stderr + 1e-12 * target.abs().max(1.0)
    }
}

/// Per-chunk accumulator.
pub trait Tally: Default + Send {
    fn merge(&mut self, other: Self);
}

impl Tally for u64 {
    fn merge(&mut self, other: Self) {
        *self += other;
    }
}

/// Draws one uniform direction on `S^{dim-1}` into `out` by normalising a
/// standard Gaussian vector.
#[inline]
pub fn draw_direction(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    loop {
        let mut n2 = 0.0;
        for v in out.iter_mut() {
            let g: f64 = StandardNormal.sample(rng);
            *v = g;
            n2 += g * g;
        }
        if n2 > 1e-24 {
            let inv = 1.0 / n2.sqrt();
            for v in out.iter_mut() {
                *v *= inv;
            }
            return;
        }
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn run_chunk<T, F>(plan: &McPlan, dim: usize, chunk: u64, f: &F) -> T
where
    T: Tally,
    F: Fn(&mut T, &[f64]) + Sync,
{
    let mut rng = chunk_rng(plan.seed, chunk);
    let start = chunk * CHUNK;
    let end = (start + CHUNK).min(plan.samples);
    let mut tally = T::default();
    let mut nu = vec![0.0; dim];
    for _ in start..end {
        draw_direction(&mut rng, &mut nu);
        f(&mut tally, &nu);
    }
    tally
}

/// Runs `f` on `plan.samples` uniform directions and merges the tallies.
pub fn accumulate<T, F>(plan: &McPlan, dim: usize, f: F) -> T
where
    T: Tally,
    F: Fn(&mut T, &[f64]) + Sync,
{
    let chunks = plan.samples.div_ceil(CHUNK);
    let workers = plan.workers.max(1).min(chunks.max(1) as usize);
    let mut parts: Vec<Option<T>> = (0..chunks).map(|_| None).collect();
    if workers <= 1 || cfg!(target_arch = "wasm32") {
        for (k, slot) in parts.iter_mut().enumerate() {
            *slot = Some(run_chunk(plan, dim, k as u64, &f));
        }
    } else {
        let f = &f;
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..workers {
                handles.push(scope.spawn(move || {
                    let mut out = Vec::new();
                    let mut k = w as u64;
                    while k < chunks {
                        out.push((k, run_chunk::<T, F>(plan, dim, k, f)));
                        k += workers as u64;
                    }
                    out
                }));
            }
            for h in handles {
                for (k, t) in h.join().expect("monte carlo worker panicked") {
                    parts[k as usize] = Some(t);
                }
            }
        });
    }
    let mut total = T::default();
    for t in parts.into_iter().flatten() {
        total.merge(t);
    }
    total
}

/// Counts directions for which `pred` holds.
pub fn count_hits<F>(plan: &McPlan, dim: usize, pred: F) -> u64
where
    F: Fn(&[f64]) -> bool + Sync,
{
    accumulate::<u64, _>(plan, dim, |t, nu| {
        if pred(nu) {
            *t += 1;
        }
    })
}

/// The first `count` directions of the stream for `seed`.
pub fn directions(dim: usize, count: u64, seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count as usize);
    let chunks = count.div_ceil(CHUNK);
    for k in 0..chunks {
        let mut rng = chunk_rng(seed, k);
        let n = (count - k * CHUNK).min(CHUNK);
        for _ in 0..n {
            let mut nu = vec![0.0; dim];
            draw_direction(&mut rng, &mut nu);
            out.push(nu);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_count_does_not_change_result() {
        let base = McPlan::new(3 * CHUNK + 17, 42);
        let pred = |nu: &[f64]| nu[0] + 0.3 * nu[1] > 0.2;
        let a = count_hits(&base, 3, pred);
        let b = count_hits(&base.with_workers(4), 3, pred);
        assert_eq!(a, b);
    }

    #[test]
    fn stream_matches_accumulate_order() {
        let dirs = directions(3, CHUNK + 5, 9);
        let hits = count_hits(&McPlan::new(CHUNK + 5, 9), 3, |nu| nu[2] > 0.0);
        let direct = dirs.iter().filter(|d| d[2] > 0.0).count() as u64;
        assert_eq!(hits, direct);
    }

    #[test]
    fn binomial_stderr() {
        let e = McEstimate::from_hits(25, 100, 0, 4.0);
        assert!((e.value - 1.0).abs() < 1e-15);
        assert!((e.stderr - (0.25f64 * 0.75 / 100.0).sqrt() * 4.0).abs() < 1e-15);
    }
}

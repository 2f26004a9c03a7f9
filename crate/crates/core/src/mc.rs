//! Chunked Monte Carlo with per-chunk RNG substreams.
//!
//! A run of `samples` draws is cut into chunks of [`CHUNK_SIZE`]. Chunk `k`
//! draws from the ChaCha8 stream `k` keyed by the master seed, and chunk
//! results are merged in chunk order, so output depends only on
//! `(seed, samples)` and never on how many worker threads ran it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type SubstreamRng = ChaCha8Rng;

pub const CHUNK_SIZE: u64 = 1 << 14;

/// Independent generator for chunk `chunk` of the run keyed by `seed`.
pub fn substream(seed: u64, chunk: u64) -> SubstreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Runs `work(chunk_index, draws_in_chunk, rng)` over every chunk in parallel
/// and returns the per-chunk results in chunk order.
pub fn map_chunks<A, F>(samples: u64, seed: u64, work: F) -> Vec<A>
where
    A: Send,
    F: Fn(u64, u64, &mut SubstreamRng) -> A + Sync,
{
    let chunks = samples.div_ceil(CHUNK_SIZE);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let len = CHUNK_SIZE.min(samples - k * CHUNK_SIZE);
            let mut rng = substream(seed, k);
            work(k, len, &mut rng)
        })
        .collect()
}

/// Collects `samples` independent draws of `draw` in deterministic order.
pub fn collect_draws<V, F>(samples: u64, seed: u64, draw: F) -> Vec<V>
where
    V: Send,
    F: Fn(&mut SubstreamRng) -> V + Sync,
{
    map_chunks(samples, seed, |_, len, rng| (0..len).map(|_| draw(rng)).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn worker_count_does_not_change_results() {
        let run = || collect_draws(100_000, 7, |rng| rng.gen::<u64>());
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
        assert_eq!(one, four);
        assert_eq!(one.len(), 100_000);
    }

    #[test]
    fn substreams_differ() {
        let a: u64 = substream(1, 0).gen();
        let b: u64 = substream(1, 1).gen();
        let c: u64 = substream(2, 0).gen();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}

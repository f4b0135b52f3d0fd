//! Seeded RNG streams for reproducible parallel ensembles.
//!
//! Stream-splitting rule: every task draws from a ChaCha8 generator seeded
//! with the master seed and switched to a per-task stream index. Streams are
//! statistically independent, and results aggregated by task index are
//! identical regardless of worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for stream `stream` under `master_seed`.
pub fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

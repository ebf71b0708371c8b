//! Reproducible random streams.
//!
//! Every replicate or restart draws from its own ChaCha stream selected by
//! `(seed, index)`. ChaCha is counter based, so stream `k` is the same
//! whether it is generated first, last, or on another thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// The random stream for task `index` under master seed `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

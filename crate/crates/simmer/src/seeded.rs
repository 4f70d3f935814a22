//! Named, reproducible random substreams.
//!
//! Every random choice in the pipeline draws from a substream derived from
//! the single root seed and a stable name ("corpus", "split", "svd-init", ...),
//! so reruns are bit-identical and stages can be reordered without
//! perturbing each other's randomness.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use sha2::{Digest, Sha256};

/// Derive a deterministic RNG for `name` from the root seed.
pub fn substream(root_seed: u64, name: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(root_seed.to_le_bytes());
    hasher.update(name.as_bytes());
    let digest = hasher.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(seed)
}

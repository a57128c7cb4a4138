use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random stream `index` under `seed`. ChaCha is counter-based,
/// so stream `r` is the same no matter which thread draws it or when.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

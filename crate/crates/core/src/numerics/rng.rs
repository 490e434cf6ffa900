//! Reproducible random streams.
//!
//! A stream is a ChaCha8 key built from `(seed, stream_id)`. ChaCha's own
//! 64-bit stream counter then indexes *blocks* of replications, so a
//! simulation split into blocks draws the same numbers no matter how the
//! blocks are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator handed to simulation closures.
pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub const fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Same seed, different stream.
    pub const fn with_stream(self, stream_id: u64) -> Self {
        Self { seed: self.seed, stream_id }
    }

    /// Generator for block 0 of this stream.
    pub fn rng(&self) -> StreamRng {
        self.block(0)
    }

    /// Generator for block `index`; blocks of one stream never overlap.
    pub fn block(&self, index: u64) -> StreamRng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream_id.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(index);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn draws(stream: RngStream, block: u64) -> Vec<u64> {
        let mut rng = stream.block(block);
        (0..8).map(|_| rng.random()).collect()
    }

    #[test]
    fn identical_pairs_reproduce() {
        let s = RngStream::new(42, 7);
        assert_eq!(draws(s, 0), draws(RngStream::new(42, 7), 0));
        assert_eq!(draws(s, 3), draws(s, 3));
    }

    #[test]
    fn distinct_pairs_and_blocks_differ() {
        let a = draws(RngStream::new(42, 7), 0);
        assert_ne!(a, draws(RngStream::new(42, 8), 0));
        assert_ne!(a, draws(RngStream::new(43, 7), 0));
        assert_ne!(a, draws(RngStream::new(7, 42), 0));
        assert_ne!(a, draws(RngStream::new(42, 7), 1));
    }

    #[test]
    fn platform_independent_first_word() {
        // Frozen from a reference run; any change breaks CSV reproducibility.
        let first: u64 = RngStream::new(1, 0).rng().random();
        assert_eq!(first, FIRST_WORD_SEED1_STREAM0);
    }

    const FIRST_WORD_SEED1_STREAM0: u64 = 7_037_237_572_835_827_407;
}

//! Folded Reed-Solomon codes with linear-algebraic list decoding.
//!
//! The pipeline: encode a message polynomial into an m-folded codeword
//! ([`frs_code`]), interpolate a multivariate polynomial vanishing on a
//! received word ([`interp`]), recover the affine space of candidate messages
//! from the interpolation polynomial by back-substitution ([`solver`]),
//! enumerate and prune that space against the received word ([`decoder`]),
//! and optionally restrict messages to a subspace-evasive subcode to keep the
//! affine space from blowing up the output list ([`evasive`]).
//!
//! All arithmetic is exact over explicitly constructed finite fields
//! ([`gf`]); nothing here is randomized except where a seed is an explicit
//! argument, and every seeded computation is reproducible from that seed.

pub mod decoder;
pub mod error;
pub mod evasive;
pub mod frs_code;
pub mod gf;
pub mod interp;
pub mod solver;

pub use error::{Error, Result};

/// Derives a per-stream seed from a master seed, so independent trials can
/// each get their own generator while staying reproducible from one number.
/// SplitMix64 finalizer over master + stream * golden-ratio increment; the
/// full 64-bit avalanche keeps adjacent streams uncorrelated.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

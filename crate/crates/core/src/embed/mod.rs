//! LSB embedding and extraction.
//!
//! Three schemes share one traversal order: pixel index 0, 1, 2, ... and,
//! within a pixel, channel R then G then B (grayscale has a single channel).
//!
//! * [`Algorithm::Sequential`] replaces the LSB of each traversed intensity
//!   in order.
//! * [`Algorithm::LsbMatching`] is LSB matching revisited: intensities are
//!   taken in pairs and two bits are carried per pair with at most one ±1
//!   change.
//! * [`Algorithm::RandomSegmented`] splits the traversal into contiguous
//!   segments and replaces LSBs at keyed pseudo-random positions within each.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{BitString, EmbedTrace, ImageBuffer, StegoKey};

pub mod framing;
mod matching;
mod random;
mod sequential;

pub use matching::{embed_lsb_matching, embed_pair, extract_lsb_matching, pair_function};
pub use random::{
    embed_random_segmented, extract_random_segmented, random_segmented_order, segment_sizes, Lcg,
};
pub use sequential::{embed_sequential, extract_sequential};

/// Stego image plus the positions that carry message bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedResult {
    pub stego: ImageBuffer,
    pub trace: EmbedTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    pub max_bits: usize,
    pub max_chars: usize,
}

/// One bit per intensity; eight bits per character.
pub fn capacity(image: &ImageBuffer) -> Capacity {
    let max_bits = image.position_count();
    Capacity {
        max_bits,
        max_chars: max_bits / 8,
    }
}

pub(crate) fn check_capacity(image: &ImageBuffer, bits: usize) -> Result<()> {
    let capacity = image.position_count();
    if bits > capacity {
        Err(Error::CapacityExceeded { bits, capacity })
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) fn with_lsb(value: u8, bit: bool) -> u8 {
    (value & !1) | bit as u8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Sequential LSB replacement (A).
    Sequential,
    /// LSB matching revisited (B).
    LsbMatching,
    /// Keyed random selection within segments (C).
    RandomSegmented,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Sequential,
        Algorithm::LsbMatching,
        Algorithm::RandomSegmented,
    ];

    pub fn letter(self) -> char {
        match self {
            Algorithm::Sequential => 'A',
            Algorithm::LsbMatching => 'B',
            Algorithm::RandomSegmented => 'C',
        }
    }

    pub fn needs_key(self) -> bool {
        self == Algorithm::RandomSegmented
    }

    /// Embeds with whichever scheme `self` names. `key` is required for C
    /// and ignored otherwise.
    pub fn embed(
        self,
        cover: &ImageBuffer,
        bits: &BitString,
        key: Option<&StegoKey>,
    ) -> Result<EmbedResult> {
        match self {
            Algorithm::Sequential => embed_sequential(cover, bits),
            Algorithm::LsbMatching => embed_lsb_matching(cover, bits),
            Algorithm::RandomSegmented => embed_random_segmented(cover, bits, required_key(key)?),
        }
    }

    pub fn extract(
        self,
        stego: &ImageBuffer,
        n_bits: usize,
        key: Option<&StegoKey>,
    ) -> Result<BitString> {
        match self {
            Algorithm::Sequential => extract_sequential(stego, n_bits),
            Algorithm::LsbMatching => extract_lsb_matching(stego, n_bits),
            Algorithm::RandomSegmented => {
                extract_random_segmented(stego, n_bits, required_key(key)?)
            }
        }
    }
}

fn required_key(key: Option<&StegoKey>) -> Result<&StegoKey> {
    key.ok_or_else(|| Error::InvalidKey("algorithm C requires a stego key".into()))
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" | "SEQUENTIAL" => Ok(Algorithm::Sequential),
            "B" | "MATCHING" | "LSB-MATCHING" => Ok(Algorithm::LsbMatching),
            "C" | "RANDOM" | "RANDOM-SEGMENTED" => Ok(Algorithm::RandomSegmented),
            _ => Err(Error::InvalidConfig(format!("unknown algorithm {s:?}"))),
        }
    }
}

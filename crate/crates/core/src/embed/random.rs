//! Keyed random pixel selection with segmentation.
//!
//! The traversal sequence (same order as sequential embedding) is cut into
//! `key.segments` contiguous segments of near-equal size, the first
//! `total % segments` segments taking one extra position. The message is
//! split the same way across segments. Inside segment `i` positions are
//! drawn without replacement from a shrinking pool driven by a 64-bit LCG
//! seeded with `key.seed ^ i`; each draw takes `pool[r]` where
//! `r = output % pool.len()` and swap-removes it.

use std::collections::HashMap;
use std::ops::Range;

use crate::embed::{check_capacity, with_lsb, EmbedResult};
use crate::error::Result;
use crate::image::{BitString, EmbedTrace, ImageBuffer, StegoKey};

const LCG_MULTIPLIER: u64 = 6364136223846793005;
const LCG_INCREMENT: u64 = 1442695040888963407;

/// 64-bit LCG; each step outputs the top 32 bits of the new state.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self
            .state
            .wrapping_mul(LCG_MULTIPLIER)
            .wrapping_add(LCG_INCREMENT);
        (self.state >> 32) as u32
    }
}

/// Splits `total` into `parts` near-equal sizes, larger ones first.
pub fn segment_sizes(total: usize, parts: usize) -> Vec<usize> {
    let (base, extra) = (total / parts, total % parts);
    (0..parts).map(|i| base + usize::from(i < extra)).collect()
}

fn segment_ranges(total: usize, parts: usize) -> Vec<Range<usize>> {
    let mut start = 0;
    segment_sizes(total, parts)
        .into_iter()
        .map(|len| {
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// First `count` draws from a pool holding `range`, in draw order.
///
/// Large draws use a materialized pool; small draws from a large segment
/// emulate it with a sparse map of displaced slots. Both give the same
/// sequence.
pub(crate) fn draw_without_replacement(range: Range<usize>, seed: u64, count: usize) -> Vec<usize> {
    debug_assert!(count <= range.len());
    let mut rng = Lcg::new(seed);
    let mut out = Vec::with_capacity(count);
    if count.saturating_mul(4) >= range.len() {
        let mut pool: Vec<usize> = range.collect();
        for _ in 0..count {
            let r = rng.next_u32() as usize % pool.len();
            out.push(pool.swap_remove(r));
        }
    } else {
        let start = range.start;
        let mut len = range.len();
        let mut displaced: HashMap<usize, usize> = HashMap::with_capacity(count);
        for _ in 0..count {
            let r = rng.next_u32() as usize % len;
            let taken = displaced.get(&r).copied().unwrap_or(r);
            let last = len - 1;
            let last_val = displaced.remove(&last).unwrap_or(last);
            if r != last {
                displaced.insert(r, last_val);
            }
            len -= 1;
            out.push(start + taken);
        }
    }
    out
}

/// Traversal indices written for an `n_bits` message, in embedding order.
pub fn random_segmented_order(total: usize, n_bits: usize, key: &StegoKey) -> Result<Vec<usize>> {
    key.validate(total)?;
    let parts = segment_sizes(n_bits, key.segments);
    let mut order = Vec::with_capacity(n_bits);
    for (i, (range, count)) in segment_ranges(total, key.segments)
        .into_iter()
        .zip(parts)
        .enumerate()
    {
        order.extend(draw_without_replacement(range, key.seed ^ i as u64, count));
    }
    Ok(order)
}

/// The first `count` draws of segment `index`, independent of message length.
pub(crate) fn segment_prefix(total: usize, key: &StegoKey, index: usize, count: usize) -> Vec<usize> {
    let range = segment_ranges(total, key.segments).swap_remove(index);
    let count = count.min(range.len());
    draw_without_replacement(range, key.seed ^ index as u64, count)
}

pub fn embed_random_segmented(
    cover: &ImageBuffer,
    bits: &BitString,
    key: &StegoKey,
) -> Result<EmbedResult> {
    check_capacity(cover, bits.len())?;
    let order = random_segmented_order(cover.position_count(), bits.len(), key)?;
    let mut stego = cover.clone();
    let mut entries = Vec::with_capacity(bits.len());
    for (&index, &bit) in order.iter().zip(bits.bits()) {
        let pos = cover.position_at(index);
        stego.set(pos, with_lsb(cover.get(pos), bit));
        entries.push(pos);
    }
    Ok(EmbedResult {
        stego,
        trace: EmbedTrace::from_entries_unchecked(entries),
    })
}

pub fn extract_random_segmented(
    stego: &ImageBuffer,
    n_bits: usize,
    key: &StegoKey,
) -> Result<BitString> {
    check_capacity(stego, n_bits)?;
    let order = random_segmented_order(stego.position_count(), n_bits, key)?;
    Ok(order
        .into_iter()
        .map(|i| stego.get(stego.position_at(i)) & 1 == 1)
        .collect())
}

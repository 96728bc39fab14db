//! LSB matching revisited.
//!
//! Intensities are consumed two at a time. For a pair `(x1, x2)` carrying
//! bits `(m1, m2)` the first bit is `LSB(y1)` and the second is
//! `f(y1, y2) = LSB(floor(y1 / 2) + y2)`. At most one of the two values
//! moves, and only by one.

use crate::embed::{check_capacity, EmbedResult};
use crate::error::{Error, Result};
use crate::image::{BitString, EmbedTrace, ImageBuffer};

/// `LSB(floor(a / 2) + b)`, evaluated over integers so `a = -1` and `a = 256`
/// are valid probes.
pub fn pair_function(a: i32, b: i32) -> bool {
    (a.div_euclid(2) + b).rem_euclid(2) == 1
}

/// Moves by +1, or by -1 at the top of the range.
fn nudge(x: u8) -> u8 {
    if x == u8::MAX {
        x - 1
    } else {
        x + 1
    }
}

/// Embeds `(m1, m2)` into `(x1, x2)`.
pub fn embed_pair(x1: u8, x2: u8, m1: bool, m2: bool) -> (u8, u8) {
    let (a, b) = (x1 as i32, x2 as i32);
    if (x1 & 1 == 1) == m1 {
        if pair_function(a, b) == m2 {
            (x1, x2)
        } else {
            (x1, nudge(x2))
        }
    } else {
        // exactly one of x1 - 1, x1 + 1 satisfies f(., x2) = m2
        let wanted = if pair_function(a - 1, b) == m2 { a - 1 } else { a + 1 };
        if (0..=255).contains(&wanted) {
            (wanted as u8, x2)
        } else {
            let y1 = if wanted < 0 { 1 } else { 254 };
            let y2 = if pair_function(y1 as i32, b) == m2 { x2 } else { nudge(x2) };
            (y1, y2)
        }
    }
}

fn padded(bits: &BitString) -> BitString {
    let mut out = bits.clone();
    if out.len() % 2 == 1 {
        out.push(false);
    }
    out
}

/// Embeds `bits` pairwise along the traversal order. An odd-length message
/// is padded with one 0 bit; callers extract the padded length.
pub fn embed_lsb_matching(cover: &ImageBuffer, bits: &BitString) -> Result<EmbedResult> {
    let bits = padded(bits);
    check_capacity(cover, bits.len())?;
    let mut stego = cover.clone();
    let mut entries = Vec::with_capacity(bits.len());
    for (k, pair) in bits.bits().chunks_exact(2).enumerate() {
        let p1 = cover.position_at(2 * k);
        let p2 = cover.position_at(2 * k + 1);
        let (y1, y2) = embed_pair(cover.get(p1), cover.get(p2), pair[0], pair[1]);
        stego.set(p1, y1);
        stego.set(p2, y2);
        entries.push(p1);
        entries.push(p2);
    }
    Ok(EmbedResult {
        stego,
        trace: EmbedTrace::from_entries_unchecked(entries),
    })
}

pub fn extract_lsb_matching(stego: &ImageBuffer, n_bits: usize) -> Result<BitString> {
    if n_bits % 2 == 1 {
        return Err(Error::OddBitCount(n_bits));
    }
    check_capacity(stego, n_bits)?;
    let mut out = BitString::new();
    for k in 0..n_bits / 2 {
        let y1 = stego.get(stego.position_at(2 * k));
        let y2 = stego.get(stego.position_at(2 * k + 1));
        out.push(y1 & 1 == 1);
        out.push(pair_function(y1 as i32, y2 as i32));
    }
    Ok(out)
}

use crate::embed::{check_capacity, with_lsb, EmbedResult};
use crate::error::Result;
use crate::image::{BitString, EmbedTrace, ImageBuffer};

/// Replaces the LSB of the i-th traversed intensity with bit i.
pub fn embed_sequential(cover: &ImageBuffer, bits: &BitString) -> Result<EmbedResult> {
    check_capacity(cover, bits.len())?;
    let mut stego = cover.clone();
    let mut entries = Vec::with_capacity(bits.len());
    for (i, &bit) in bits.bits().iter().enumerate() {
        let pos = cover.position_at(i);
        stego.set(pos, with_lsb(cover.get(pos), bit));
        entries.push(pos);
    }
    Ok(EmbedResult {
        stego,
        trace: EmbedTrace::from_entries_unchecked(entries),
    })
}

/// Reads the LSBs of the first `n_bits` traversed intensities.
pub fn extract_sequential(stego: &ImageBuffer, n_bits: usize) -> Result<BitString> {
    check_capacity(stego, n_bits)?;
    Ok((0..n_bits)
        .map(|i| stego.get(stego.position_at(i)) & 1 == 1)
        .collect())
}

//! Self-describing message streams for the command-line tool.
//!
//! A framed stream is a 32-bit big-endian payload bit count followed by the
//! payload bits, so extraction needs no length argument. Library-level
//! embedders take explicit bit counts instead.
//!
//! For random/segmented embedding the positions of the prefix depend on the
//! total stream length, so the extractor searches for the length whose
//! layout reproduces its own prefix.

use crate::embed::random::segment_prefix;
use crate::embed::{segment_sizes, Algorithm, EmbedResult};
use crate::error::{Error, Result};
use crate::image::{BitString, ImageBuffer, StegoKey};

pub const LENGTH_PREFIX_BITS: usize = 32;

/// Length prefix followed by the payload bits.
pub fn frame(payload: &[u8]) -> Result<BitString> {
    let payload_bits = payload.len().checked_mul(8).filter(|&n| n <= u32::MAX as usize);
    let payload_bits = payload_bits.ok_or(Error::CapacityExceeded {
        bits: usize::MAX,
        capacity: u32::MAX as usize,
    })?;
    let mut bits = BitString::new();
    bits.push_u32(payload_bits as u32);
    bits.extend(&BitString::from_bytes(payload));
    Ok(bits)
}

pub fn embed_framed(
    algorithm: Algorithm,
    cover: &ImageBuffer,
    payload: &[u8],
    key: Option<&StegoKey>,
) -> Result<EmbedResult> {
    algorithm.embed(cover, &frame(payload)?, key)
}

/// Result of reading a framed stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedExtraction {
    pub payload: Vec<u8>,
    /// Payload bit count found in the prefix.
    pub declared_bits: u64,
    /// False when the declared length had to be cut to fit the image or
    /// to whole bytes.
    pub complete: bool,
}

/// Reads a framed stream. Garbage prefixes never fail: the declared length
/// is clamped to what the image can hold and `complete` is cleared.
pub fn extract_framed(
    algorithm: Algorithm,
    stego: &ImageBuffer,
    key: Option<&StegoKey>,
) -> Result<FramedExtraction> {
    let capacity = stego.position_count();
    if capacity < LENGTH_PREFIX_BITS {
        return Err(Error::CapacityExceeded {
            bits: LENGTH_PREFIX_BITS,
            capacity,
        });
    }
    match algorithm {
        Algorithm::Sequential | Algorithm::LsbMatching => {
            let prefix = algorithm.extract(stego, LENGTH_PREFIX_BITS, key)?;
            let declared = prefix.read_u32(0).expect("32 prefix bits") as u64;
            let mut available = (capacity - LENGTH_PREFIX_BITS) as u64;
            if algorithm == Algorithm::LsbMatching {
                available &= !1;
            }
            let (payload_bits, complete) = clamp_to_bytes(declared, available);
            let stream = algorithm.extract(stego, LENGTH_PREFIX_BITS + payload_bits, key)?;
            finish(stream, declared, complete)
        }
        Algorithm::RandomSegmented => {
            let key = key.ok_or_else(|| Error::InvalidKey("algorithm C requires a stego key".into()))?;
            key.validate(capacity)?;
            extract_framed_random(stego, key)
        }
    }
}

fn clamp_to_bytes(declared: u64, available: u64) -> (usize, bool) {
    let usable = declared.min(available);
    let whole = usable - usable % 8;
    (whole as usize, whole == declared)
}

fn finish(stream: BitString, declared: u64, complete: bool) -> Result<FramedExtraction> {
    let payload = stream.slice(LENGTH_PREFIX_BITS..stream.len()).to_bytes()?;
    Ok(FramedExtraction {
        payload,
        declared_bits: declared,
        complete,
    })
}

fn extract_framed_random(stego: &ImageBuffer, key: &StegoKey) -> Result<FramedExtraction> {
    let total = stego.position_count();
    let segments = key.segments;
    // first draws of each segment that could hold prefix bits
    let heads: Vec<Vec<usize>> = (0..segments.min(LENGTH_PREFIX_BITS))
        .map(|i| segment_prefix(total, key, i, LENGTH_PREFIX_BITS))
        .collect();
    let read_prefix = |stream_len: usize| -> Option<u64> {
        let parts = segment_sizes(stream_len, segments);
        let mut bits = BitString::new();
        for (head, &part) in heads.iter().zip(&parts) {
            let take = part.min(LENGTH_PREFIX_BITS - bits.len());
            for &index in &head[..take] {
                bits.push(stego.get(stego.position_at(index)) & 1 == 1);
            }
            if bits.len() == LENGTH_PREFIX_BITS {
                break;
            }
        }
        bits.read_u32(0).map(u64::from)
    };
    let consistent = |stream_len: usize| read_prefix(stream_len) == Some((stream_len - LENGTH_PREFIX_BITS) as u64);

    // Lengths that keep the whole prefix in segment 0 share one layout.
    let long_form = (heads[0].len() >= LENGTH_PREFIX_BITS)
        .then(|| read_prefix(total))
        .flatten()
        .filter(|_| segment_sizes(total, segments)[0] >= LENGTH_PREFIX_BITS);
    if let Some(declared) = long_form {
        let stream_len = declared + LENGTH_PREFIX_BITS as u64;
        if stream_len <= total as u64
            && segment_sizes(stream_len as usize, segments)[0] >= LENGTH_PREFIX_BITS
            && declared % 8 == 0
        {
            let stream = Algorithm::RandomSegmented.extract(stego, stream_len as usize, Some(key))?;
            return finish(stream, declared, true);
        }
    }

    // Short streams spread the prefix over several segments.
    let short_limit = total.min(LENGTH_PREFIX_BITS * segments + segments);
    for stream_len in LENGTH_PREFIX_BITS..=short_limit {
        if segment_sizes(stream_len, segments)[0] >= LENGTH_PREFIX_BITS {
            break;
        }
        if consistent(stream_len) && (stream_len - LENGTH_PREFIX_BITS).is_multiple_of(8) {
            let stream = Algorithm::RandomSegmented.extract(stego, stream_len, Some(key))?;
            return finish(stream, (stream_len - LENGTH_PREFIX_BITS) as u64, true);
        }
    }

    // No self-consistent length: fall back to the full-capacity layout.
    let declared = read_prefix(total).unwrap_or(0);
    let (payload_bits, _) = clamp_to_bytes(declared, (total - LENGTH_PREFIX_BITS) as u64);
    let stream = Algorithm::RandomSegmented.extract(stego, LENGTH_PREFIX_BITS + payload_bits, Some(key))?;
    finish(stream, declared, false)
}

//! Parity-majority sterilization.
//!
//! Intensities `2j` ("even") and `2j+1` ("odd") form bucket `j`. Within a
//! grouping region, let `n_e` and `n_o` count the even and odd members of a
//! bucket. If `n_e > n_o` every `2j+1` becomes `2j`; otherwise (ties
//! included) every `2j` becomes `2j+1`. Each bucket ends up with a single
//! value, so LSB-borne payloads are overwritten while no intensity moves
//! by more than one and the bucket's total population is unchanged.

use std::num::NonZeroUsize;

use rayon::prelude::*;

use crate::image::ImageBuffer;

/// Spatial extent over which bucket counts are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroupingScope {
    /// One region per channel.
    #[default]
    WholeChannel,
    /// Non-overlapping `side × side` tiles; tiles on the right and bottom
    /// edges may be smaller.
    SquareBlock(NonZeroUsize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SterilizeConfig {
    pub scope: GroupingScope,
}

impl SterilizeConfig {
    pub fn whole_channel() -> Self {
        Self::default()
    }

    /// Block scope; `None` when `side` is zero.
    pub fn square_block(side: usize) -> Option<Self> {
        NonZeroUsize::new(side).map(|side| Self {
            scope: GroupingScope::SquareBlock(side),
        })
    }
}

/// Replacement table for one region's histogram.
fn majority_map(counts: &[usize; 256]) -> [u8; 256] {
    let mut map = [0u8; 256];
    for j in 0..128 {
        let (even, odd) = (2 * j, 2 * j + 1);
        let target = if counts[even] > counts[odd] { even } else { odd };
        map[even] = target as u8;
        map[odd] = target as u8;
    }
    map
}

fn sterilize_region<I>(plane: &mut [u8], indices: I)
where
    I: Iterator<Item = usize> + Clone,
{
    let mut counts = [0usize; 256];
    for i in indices.clone() {
        counts[plane[i] as usize] += 1;
    }
    let map = majority_map(&counts);
    for i in indices {
        plane[i] = map[plane[i] as usize];
    }
}

/// Sterilizes one row-major plane of the given width.
///
/// `width` only matters for block scope; a plane whose length is not a
/// multiple of `width` is treated as having a short final row.
pub fn sterilize_channel(plane: &[u8], width: usize, config: &SterilizeConfig) -> Vec<u8> {
    let mut out = plane.to_vec();
    match config.scope {
        GroupingScope::WholeChannel => {
            let len = out.len();
            sterilize_region(&mut out, 0..len);
        }
        GroupingScope::SquareBlock(side) => {
            let side = side.get();
            let width = width.max(1);
            let height = plane.len().div_ceil(width);
            let len = plane.len();
            for by in (0..height).step_by(side) {
                for bx in (0..width).step_by(side) {
                    let rows = by..(by + side).min(height);
                    let cols = bx..(bx + side).min(width);
                    let indices = rows
                        .flat_map(move |y| cols.clone().map(move |x| y * width + x))
                        .filter(move |&i| i < len);
                    sterilize_region(&mut out, indices);
                }
            }
        }
    }
    out
}

/// Sterilizes every channel independently.
pub fn sterilize_image(image: &ImageBuffer, config: &SterilizeConfig) -> ImageBuffer {
    let width = image.width();
    let planes: Vec<Vec<u8>> = image
        .planes()
        .par_iter()
        .map(|plane| sterilize_channel(plane, width, config))
        .collect();
    ImageBuffer::from_planes(width, image.height(), planes).expect("shape preserved")
}

/// Positions whose value differs, per channel.
pub fn changed_counts(before: &ImageBuffer, after: &ImageBuffer) -> Vec<usize> {
    before
        .planes()
        .iter()
        .zip(after.planes())
        .map(|(a, b)| a.iter().zip(b).filter(|(x, y)| x != y).count())
        .collect()
}

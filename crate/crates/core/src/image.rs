//! Value types shared by the codec, embedders, sterilizer and metrics.
//!
//! Planes are stored row-major and top-down, one `Vec<u8>` per channel
//! (R, G, B for color). Every pixel index in a trace refers to that layout.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// A decoded raster with one intensity plane per channel.
#[derive(Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    planes: Vec<Vec<u8>>,
}

impl ImageBuffer {
    /// Builds an image from per-channel planes. There must be one or three
    /// planes, each holding exactly `width * height` values.
    pub fn from_planes(width: usize, height: usize, planes: Vec<Vec<u8>>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if planes.len() != 1 && planes.len() != 3 {
            return Err(Error::InvalidImage(format!(
                "expected 1 or 3 channels, got {}",
                planes.len()
            )));
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::InvalidImage("dimensions overflow".into()))?;
        if let Some((c, p)) = planes.iter().enumerate().find(|(_, p)| p.len() != expected) {
            return Err(Error::InvalidImage(format!(
                "plane {c} has {} values, expected {expected}",
                p.len()
            )));
        }
        Ok(Self {
            width,
            height,
            planes,
        })
    }

    /// A grayscale image from a single row-major plane.
    pub fn gray(width: usize, height: usize, plane: Vec<u8>) -> Result<Self> {
        Self::from_planes(width, height, vec![plane])
    }

    /// A constant-valued image.
    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self> {
        Self::from_planes(width, height, vec![vec![value; width * height]; channels])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.planes.len()
    }

    /// Pixel count, `width * height`.
    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    /// Number of addressable intensities, `width * height * channels`.
    pub fn position_count(&self) -> usize {
        self.pixel_count() * self.channels()
    }

    pub fn planes(&self) -> &[Vec<u8>] {
        &self.planes
    }

    pub fn plane(&self, channel: usize) -> &[u8] {
        &self.planes[channel]
    }

    pub fn into_planes(self) -> Vec<Vec<u8>> {
        self.planes
    }

    pub fn get(&self, pos: Position) -> u8 {
        self.planes[pos.channel][pos.pixel]
    }

    pub fn set(&mut self, pos: Position, value: u8) {
        self.planes[pos.channel][pos.pixel] = value;
    }

    /// Maps an index in embedding traversal order (pixel-major, then channel)
    /// onto a position.
    pub fn position_at(&self, traversal_index: usize) -> Position {
        let channels = self.channels();
        Position {
            channel: traversal_index % channels,
            pixel: traversal_index / channels,
        }
    }

    pub fn contains(&self, pos: Position) -> bool {
        pos.channel < self.channels() && pos.pixel < self.pixel_count()
    }

    /// True when `other` has the same width, height and channel count.
    pub fn same_shape(&self, other: &ImageBuffer) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.channels() == other.channels()
    }

    pub(crate) fn check_same_shape(&self, other: &ImageBuffer) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "{}x{}x{} vs {}x{}x{}",
                self.width,
                self.height,
                self.channels(),
                other.width,
                other.height,
                other.channels()
            )))
        }
    }
}

impl fmt::Debug for ImageBuffer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImageBuffer")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("channels", &self.channels())
            .finish_non_exhaustive()
    }
}

/// A single intensity: 0-based channel and row-major pixel index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub channel: usize,
    pub pixel: usize,
}

impl Position {
    pub fn new(channel: usize, pixel: usize) -> Self {
        Self { channel, pixel }
    }
}

/// Ordered message bits.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Builds from 0/1 integers; any non-zero value is a 1.
    pub fn from_u8s(bits: &[u8]) -> Self {
        Self {
            bits: bits.iter().map(|&b| b != 0).collect(),
        }
    }

    /// Expands each byte into 8 bits, most significant first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        let bits = bytes
            .iter()
            .flat_map(|&byte| (0..8).rev().map(move |i| (byte >> i) & 1 == 1))
            .collect();
        Self { bits }
    }

    /// Packs bits back into bytes, most significant first.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        if !self.bits.len().is_multiple_of(8) {
            return Err(Error::NotByteAligned(self.bits.len()));
        }
        Ok(self
            .bits
            .chunks_exact(8)
            .map(|chunk| chunk.iter().fold(0u8, |acc, &b| (acc << 1) | b as u8))
            .collect())
    }

    /// The 32-bit big-endian value stored in `bits[offset..offset + 32]`.
    pub fn read_u32(&self, offset: usize) -> Option<u32> {
        let slice = self.bits.get(offset..offset.checked_add(32)?)?;
        Some(slice.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32))
    }

    pub fn push_u32(&mut self, value: u32) {
        self.bits.extend((0..32).rev().map(|i| (value >> i) & 1 == 1));
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).copied()
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> BitString {
        Self {
            bits: self.bits[range].to_vec(),
        }
    }

    /// Number of positions where `self` and `other` differ, over the shorter length.
    pub fn hamming(&self, other: &BitString) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

/// Expands text bytes into a bit string, MSB first.
pub fn text_to_bits(text: &[u8]) -> BitString {
    BitString::from_bytes(text)
}

/// Inverse of [`text_to_bits`].
pub fn bits_to_text(bits: &BitString) -> Result<Vec<u8>> {
    bits.to_bytes()
}

/// Positions written by an embedder, one per embedded bit, in embedding order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmbedTrace {
    entries: Vec<Position>,
}

pub const TRACE_HEADER: &str = "channel,pixel_index";

impl EmbedTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a trace, rejecting duplicate positions.
    pub fn from_entries(entries: Vec<Position>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(entries.len());
        for &p in &entries {
            if !seen.insert(p) {
                return Err(Error::InvalidTrace(format!(
                    "duplicate entry ({},{})",
                    p.channel, p.pixel
                )));
            }
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<Position>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[Position] {
        &self.entries
    }

    /// Number of embedded bits (S).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Fails if any entry falls outside `image`.
    pub fn check_within(&self, image: &ImageBuffer) -> Result<()> {
        match self.entries.iter().find(|p| !image.contains(**p)) {
            Some(p) => Err(Error::InvalidTrace(format!(
                "entry ({},{}) outside {}x{}x{} image",
                p.channel,
                p.pixel,
                image.width(),
                image.height(),
                image.channels()
            ))),
            None => Ok(()),
        }
    }

    /// Serializes as `channel,pixel_index` CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(20 + self.entries.len() * 10);
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for p in &self.entries {
            out.push_str(&format!("{},{}\n", p.channel, p.pixel));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next().map(str::trim) {
            Some(TRACE_HEADER) => {}
            other => {
                return Err(Error::InvalidTrace(format!(
                    "expected header {TRACE_HEADER:?}, found {other:?}"
                )))
            }
        }
        let mut entries = Vec::new();
        for (n, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::InvalidTrace(format!("line {}: malformed entry {line:?}", n + 2));
            let (c, p) = line.split_once(',').ok_or_else(bad)?;
            let channel = c.trim().parse().map_err(|_| bad())?;
            let pixel = p.trim().parse().map_err(|_| bad())?;
            entries.push(Position { channel, pixel });
        }
        Self::from_entries(entries)
    }
}

/// Key for the random/segmented embedder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StegoKey {
    pub seed: u64,
    pub segments: usize,
}

impl StegoKey {
    pub fn new(seed: u64, segments: usize) -> Self {
        Self { seed, segments }
    }

    /// Checks `1 <= segments <= positions`.
    pub fn validate(&self, positions: usize) -> Result<()> {
        if self.segments == 0 || self.segments > positions {
            return Err(Error::InvalidKey(format!(
                "segments must be in 1..={positions}, got {}",
                self.segments
            )));
        }
        Ok(())
    }
}

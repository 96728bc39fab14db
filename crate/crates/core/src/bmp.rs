//! Reader and writer for uncompressed BMP files.
//!
//! Two variants are supported, both with a 40-byte `BITMAPINFOHEADER`
//! and bottom-up rows:
//!
//! * 8 bits per pixel with a 256-entry identity grayscale palette; the
//!   palette index is the intensity.
//! * 24 bits per pixel, stored on disk as B, G, R.
//!
//! Rows are padded with zero bytes to a multiple of 4. The writer always
//! emits the canonical layout (pixel data at offset 54 or 1078) so output
//! is byte-stable across round trips.

use thiserror::Error;

use crate::image::ImageBuffer;

pub const FILE_HEADER_LEN: usize = 14;
pub const INFO_HEADER_LEN: usize = 40;
const HEADERS_LEN: usize = FILE_HEADER_LEN + INFO_HEADER_LEN;
const PALETTE_ENTRIES: usize = 256;
const PALETTE_LEN: usize = PALETTE_ENTRIES * 4;
/// 72 DPI in pixels per metre.
const PIXELS_PER_METRE: i32 = 2835;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BmpError {
    #[error("truncated BMP: need {needed} bytes, have {actual}")]
    Truncated { needed: usize, actual: usize },
    #[error("not a BMP file (magic {0:02x?})")]
    BadMagic([u8; 2]),
    #[error("unsupported info header size {0} (only 40-byte BITMAPINFOHEADER)")]
    UnsupportedHeader(u32),
    #[error("unsupported bit depth {0} (only 8 and 24)")]
    UnsupportedBitCount(u16),
    #[error("unsupported compression {0} (only uncompressed)")]
    UnsupportedCompression(u32),
    #[error("invalid colour plane count {0}")]
    BadPlaneCount(u16),
    #[error("invalid dimensions {width}x{height} (width and height must be positive)")]
    InvalidDimensions { width: i32, height: i32 },
    #[error("palette has {0} entries, expected 256")]
    PaletteSize(u32),
    #[error("palette entry {0} is not grayscale identity")]
    NonGrayscalePalette(usize),
    #[error("inconsistent sizes: {0}")]
    SizeMismatch(String),
    #[error("cannot write image with {0} channels")]
    UnsupportedChannels(usize),
}

/// Header fields of a parsed file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmpHeaderInfo {
    pub file_size: u32,
    pub pixel_data_offset: u32,
    pub width: u32,
    pub height: u32,
    pub bit_count: u16,
    pub compression: u32,
    /// `(blue, green, red, reserved)` entries, present for 8-bit files only.
    pub palette: Option<Vec<[u8; 4]>>,
}

fn u16_at(bytes: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([bytes[at], bytes[at + 1]])
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap())
}

fn i32_at(bytes: &[u8], at: usize) -> i32 {
    i32::from_le_bytes(bytes[at..at + 4].try_into().unwrap())
}

/// Bytes per stored row: `4 * ceil(bits * width / 32)`.
pub fn row_stride(width: usize, bit_count: u16) -> Option<usize> {
    let row_bits = width.checked_mul(bit_count as usize)?;
    Some(row_bits.checked_add(31)? / 32 * 4)
}

fn need(bytes: &[u8], needed: usize) -> Result<(), BmpError> {
    if bytes.len() < needed {
        Err(BmpError::Truncated {
            needed,
            actual: bytes.len(),
        })
    } else {
        Ok(())
    }
}

/// Decodes a BMP file into an image.
pub fn parse_bmp(bytes: &[u8]) -> Result<ImageBuffer, BmpError> {
    parse_bmp_with_header(bytes).map(|(_, image)| image)
}

/// Decodes a BMP file, also returning the header fields.
pub fn parse_bmp_with_header(bytes: &[u8]) -> Result<(BmpHeaderInfo, ImageBuffer), BmpError> {
    need(bytes, FILE_HEADER_LEN)?;
    if &bytes[0..2] != b"BM" {
        return Err(BmpError::BadMagic([bytes[0], bytes[1]]));
    }
    let file_size = u32_at(bytes, 2);
    let pixel_data_offset = u32_at(bytes, 10);

    need(bytes, FILE_HEADER_LEN + 4)?;
    let info_size = u32_at(bytes, 14);
    if info_size as usize != INFO_HEADER_LEN {
        return Err(BmpError::UnsupportedHeader(info_size));
    }
    need(bytes, HEADERS_LEN)?;

    if file_size as usize != bytes.len() {
        return Err(BmpError::SizeMismatch(format!(
            "header declares {file_size} bytes, file has {}",
            bytes.len()
        )));
    }

    let width = i32_at(bytes, 18);
    let height = i32_at(bytes, 22);
    if width <= 0 || height <= 0 {
        return Err(BmpError::InvalidDimensions { width, height });
    }
    let plane_count = u16_at(bytes, 26);
    if plane_count != 1 {
        return Err(BmpError::BadPlaneCount(plane_count));
    }
    let bit_count = u16_at(bytes, 28);
    if bit_count != 8 && bit_count != 24 {
        return Err(BmpError::UnsupportedBitCount(bit_count));
    }
    let compression = u32_at(bytes, 30);
    if compression != 0 {
        return Err(BmpError::UnsupportedCompression(compression));
    }
    let image_size = u32_at(bytes, 34);
    let colors_used = u32_at(bytes, 46);

    let (width, height) = (width as usize, height as usize);
    let overflow = || BmpError::SizeMismatch("pixel array size overflows".into());
    let stride = row_stride(width, bit_count).ok_or_else(overflow)?;
    let data_len = stride.checked_mul(height).ok_or_else(overflow)?;
    if image_size != 0 && image_size as usize != data_len {
        return Err(BmpError::SizeMismatch(format!(
            "header declares {image_size} pixel bytes, layout needs {data_len}"
        )));
    }

    let offset = pixel_data_offset as usize;
    let palette = if bit_count == 8 {
        if colors_used != 0 && colors_used as usize != PALETTE_ENTRIES {
            return Err(BmpError::PaletteSize(colors_used));
        }
        let palette_end = HEADERS_LEN + PALETTE_LEN;
        need(bytes, palette_end)?;
        if offset < palette_end {
            return Err(BmpError::SizeMismatch(format!(
                "pixel data offset {offset} overlaps the palette ending at {palette_end}"
            )));
        }
        let entries: Vec<[u8; 4]> = bytes[HEADERS_LEN..palette_end]
            .chunks_exact(4)
            .map(|c| [c[0], c[1], c[2], c[3]])
            .collect();
        if let Some(i) = entries
            .iter()
            .enumerate()
            .position(|(i, e)| e[0] as usize != i || e[1] as usize != i || e[2] as usize != i)
        {
            return Err(BmpError::NonGrayscalePalette(i));
        }
        Some(entries)
    } else {
        if offset < HEADERS_LEN {
            return Err(BmpError::SizeMismatch(format!(
                "pixel data offset {offset} overlaps the headers"
            )));
        }
        None
    };

    let data_end = offset.checked_add(data_len).ok_or_else(overflow)?;
    need(bytes, data_end)?;
    let data = &bytes[offset..data_end];

    let pixels = width.checked_mul(height).ok_or_else(overflow)?;
    let planes = if bit_count == 8 {
        let mut plane = Vec::with_capacity(pixels);
        for row in 0..height {
            let start = (height - 1 - row) * stride;
            plane.extend_from_slice(&data[start..start + width]);
        }
        vec![plane]
    } else {
        let mut planes = (0..3).map(|_| Vec::with_capacity(pixels)).collect::<Vec<_>>();
        for row in 0..height {
            let start = (height - 1 - row) * stride;
            for bgr in data[start..start + 3 * width].chunks_exact(3) {
                planes[0].push(bgr[2]);
                planes[1].push(bgr[1]);
                planes[2].push(bgr[0]);
            }
        }
        planes
    };

    let header = BmpHeaderInfo {
        file_size,
        pixel_data_offset,
        width: width as u32,
        height: height as u32,
        bit_count,
        compression,
        palette,
    };
    let image = ImageBuffer::from_planes(width, height, planes)
        .map_err(|e| BmpError::SizeMismatch(e.to_string()))?;
    Ok((header, image))
}

/// Encodes an image as an 8-bit grayscale (one channel) or 24-bit (three
/// channels) BMP in the canonical layout.
pub fn write_bmp(image: &ImageBuffer) -> Result<Vec<u8>, BmpError> {
    let bit_count: u16 = match image.channels() {
        1 => 8,
        3 => 24,
        n => return Err(BmpError::UnsupportedChannels(n)),
    };
    let (width, height) = (image.width(), image.height());
    let too_large = || BmpError::SizeMismatch(format!("{width}x{height} image too large for BMP"));
    let stride = row_stride(width, bit_count).ok_or_else(too_large)?;
    let data_len = stride.checked_mul(height).ok_or_else(too_large)?;
    let offset = HEADERS_LEN + if bit_count == 8 { PALETTE_LEN } else { 0 };
    let file_size = offset + data_len;
    let file_size_u32 = u32::try_from(file_size).map_err(|_| too_large())?;
    let width_i32 = i32::try_from(width).map_err(|_| too_large())?;
    let height_i32 = i32::try_from(height).map_err(|_| too_large())?;

    let mut out = Vec::with_capacity(file_size);
    out.extend_from_slice(b"BM");
    out.extend_from_slice(&file_size_u32.to_le_bytes());
    out.extend_from_slice(&[0; 4]);
    out.extend_from_slice(&(offset as u32).to_le_bytes());

    out.extend_from_slice(&(INFO_HEADER_LEN as u32).to_le_bytes());
    out.extend_from_slice(&width_i32.to_le_bytes());
    out.extend_from_slice(&height_i32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&bit_count.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    out.extend_from_slice(&PIXELS_PER_METRE.to_le_bytes());
    out.extend_from_slice(&PIXELS_PER_METRE.to_le_bytes());
    let colors_used: u32 = if bit_count == 8 { 256 } else { 0 };
    out.extend_from_slice(&colors_used.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());

    if bit_count == 8 {
        for i in 0..=255u8 {
            out.extend_from_slice(&[i, i, i, 0]);
        }
    }

    let pad = stride - width * (bit_count as usize / 8);
    for row in (0..height).rev() {
        let range = row * width..(row + 1) * width;
        if bit_count == 8 {
            out.extend_from_slice(&image.plane(0)[range]);
        } else {
            let (r, g, b) = (
                &image.plane(0)[range.clone()],
                &image.plane(1)[range.clone()],
                &image.plane(2)[range],
            );
            for i in 0..width {
                out.extend_from_slice(&[b[i], g[i], r[i]]);
            }
        }
        out.extend(std::iter::repeat_n(0, pad));
    }
    debug_assert_eq!(out.len(), file_size);
    Ok(out)
}

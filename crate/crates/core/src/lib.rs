//! LSB steganography toolkit built around image sterilization.
//!
//! The crate embeds messages into 8-bit grayscale and 24-bit color BMP
//! images with three LSB schemes, sterilizes images by forcing every
//! intensity pair `{2j, 2j+1}` to its majority parity, and measures how
//! much of the payload the sterilizer reverted along with the usual
//! fidelity numbers (MSE, PSNR, histograms).
//!
//! The modules map onto the pipeline:
//!
//! * [`bmp`] decodes and encodes the two supported BMP variants.
//! * [`image`] holds the shared value types: rasters, bit strings, traces, keys.
//! * [`embed`] implements sequential LSB replacement, LSB matching revisited
//!   and keyed random/segmented embedding.
//! * [`sterilize`] is the parity-majority sterilizer.
//! * [`metrics`] computes accuracy, MSE/PSNR, histograms and corpus statistics.
//! * [`synth`] generates deterministic synthetic covers and texts.
//! * [`experiment`] runs embed → sterilize → measure over a corpus.
//! * [`cli`] backs the `steri` binary.

pub mod bmp;
pub mod cli;
pub mod embed;
pub mod error;
pub mod experiment;
pub mod image;
pub mod metrics;
pub mod sterilize;
pub mod synth;

pub use bmp::{parse_bmp, write_bmp, BmpError, BmpHeaderInfo};
pub use embed::{Algorithm, Capacity, EmbedResult};
pub use error::{Error, Result};
pub use image::{BitString, EmbedTrace, ImageBuffer, Position, StegoKey};
pub use sterilize::{sterilize_channel, sterilize_image, GroupingScope, SterilizeConfig};

#![allow(dead_code)]

use rand::Rng;
use sterilize_core::{BitString, ImageBuffer};

/// Uniform random image; `extremes` biases values towards 0 and 255.
pub fn random_image<R: Rng>(rng: &mut R, max_side: usize, channels: usize, extremes: bool) -> ImageBuffer {
    let w = rng.gen_range(1..=max_side);
    let h = rng.gen_range(1..=max_side);
    let planes = (0..channels)
        .map(|_| {
            (0..w * h)
                .map(|_| {
                    if extremes && rng.gen_bool(0.4) {
                        *[0u8, 1, 254, 255].get(rng.gen_range(0..4)).unwrap()
                    } else {
                        rng.gen()
                    }
                })
                .collect()
        })
        .collect();
    ImageBuffer::from_planes(w, h, planes).unwrap()
}

pub fn random_bits<R: Rng>(rng: &mut R, len: usize) -> BitString {
    (0..len).map(|_| rng.gen_bool(0.5)).collect()
}

pub fn data_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

//! Deterministic synthetic covers and texts for desk-scale experiments.
//!
//! Images are smooth gradients with a low-frequency ripple and small
//! uniform noise, which gives the locally correlated intensities of natural
//! photographs. Texts are word-level prose drawn from a fixed vocabulary.

use crate::embed::Lcg;
use crate::image::ImageBuffer;

fn unit(rng: &mut Lcg) -> f64 {
    rng.next_u32() as f64 / (u32::MAX as f64 + 1.0)
}

/// A `width × height` image with `channels` planes, fully determined by `seed`.
pub fn natural_image(seed: u64, width: usize, height: usize, channels: usize) -> ImageBuffer {
    let mut rng = Lcg::new(seed);
    let planes = (0..channels)
        .map(|_| {
            let base = 40.0 + 140.0 * unit(&mut rng);
            let gx = (unit(&mut rng) - 0.5) * 120.0 / width as f64;
            let gy = (unit(&mut rng) - 0.5) * 120.0 / height as f64;
            let amp = 5.0 + 20.0 * unit(&mut rng);
            let fx = 0.5 + 3.0 * unit(&mut rng);
            let fy = 0.5 + 3.0 * unit(&mut rng);
            let phase = std::f64::consts::TAU * unit(&mut rng);
            let noise = 1.0 + 3.0 * unit(&mut rng);
            let mut plane = Vec::with_capacity(width * height);
            for y in 0..height {
                for x in 0..width {
                    let (u, v) = (x as f64 / width as f64, y as f64 / height as f64);
                    let ripple = amp
                        * (std::f64::consts::TAU * (fx * u + fy * v) + phase).sin();
                    let jitter = (unit(&mut rng) * 2.0 - 1.0) * noise;
                    let value = base + gx * x as f64 + gy * y as f64 + ripple + jitter;
                    plane.push(value.round().clamp(0.0, 255.0) as u8);
                }
            }
            plane
        })
        .collect();
    ImageBuffer::from_planes(width, height, planes).expect("valid synthetic shape")
}

const WORDS: &[&str] = &[
    "the", "of", "and", "a", "to", "in", "was", "he", "that", "it", "his", "had", "with", "as",
    "for", "at", "which", "by", "on", "but", "from", "not", "she", "this", "have", "be", "were",
    "you", "upon", "there", "all", "one", "said", "been", "my", "very", "into", "so", "could",
    "would", "little", "man", "room", "door", "night", "window", "letter", "street", "house",
    "friend", "lamp", "morning", "case", "train", "station", "evening", "garden", "light",
    "quietly", "strange", "inspector", "visitor", "carriage", "hat", "coat", "clock", "fire",
    "matter", "answered", "observed", "remarked", "returned", "walked", "looked", "small",
    "old", "young", "road", "river", "bridge", "stone", "paper", "found", "great", "long",
];

/// Roughly `len` bytes of ASCII prose, fully determined by `seed`.
pub fn synthetic_text(seed: u64, len: usize) -> String {
    let mut rng = Lcg::new(seed);
    let mut out = String::with_capacity(len + 16);
    let mut sentence_start = true;
    while out.len() < len {
        let word = WORDS[rng.next_u32() as usize % WORDS.len()];
        if sentence_start {
            let mut chars = word.chars();
            if let Some(first) = chars.next() {
                out.extend(first.to_uppercase());
                out.push_str(chars.as_str());
            }
            sentence_start = false;
        } else {
            out.push_str(word);
        }
        if rng.next_u32().is_multiple_of(9) {
            out.push_str(". ");
            sentence_start = true;
        } else if rng.next_u32().is_multiple_of(11) {
            out.push_str(", ");
        } else {
            out.push(' ');
        }
    }
    out.truncate(len);
    out
}

//! Evaluation: sterilization accuracy, MSE/PSNR, histograms and corpus
//! statistics.

use std::fmt;

use crate::error::{Error, Result};
use crate::image::{EmbedTrace, ImageBuffer};

/// Peak value squared, `255^2`.
pub const PEAK_SQUARED: f64 = 65025.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Mse {
    pub per_channel: Vec<f64>,
    /// Mean over channels.
    pub combined: f64,
}

/// Sum of squared differences divided by the pixel count, per channel.
pub fn mse(reference: &ImageBuffer, test: &ImageBuffer) -> Result<Mse> {
    reference.check_same_shape(test)?;
    let pixels = reference.pixel_count() as f64;
    let per_channel: Vec<f64> = reference
        .planes()
        .iter()
        .zip(test.planes())
        .map(|(a, b)| {
            let sum: u64 = a
                .iter()
                .zip(b)
                .map(|(&x, &y)| {
                    let d = x as i64 - y as i64;
                    (d * d) as u64
                })
                .sum();
            sum as f64 / pixels
        })
        .collect();
    let combined = per_channel.iter().sum::<f64>() / per_channel.len() as f64;
    Ok(Mse {
        per_channel,
        combined,
    })
}

/// Peak signal-to-noise ratio in dB; infinite for identical images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Finite(f64),
    Infinite,
}

impl Psnr {
    pub fn from_mse(mse: f64) -> Self {
        if mse > 0.0 {
            Psnr::Finite(10.0 * (PEAK_SQUARED / mse).log10())
        } else {
            Psnr::Infinite
        }
    }

    pub fn db(self) -> Option<f64> {
        match self {
            Psnr::Finite(v) => Some(v),
            Psnr::Infinite => None,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.db().unwrap_or(f64::INFINITY)
    }

    pub fn is_infinite(self) -> bool {
        self == Psnr::Infinite
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(v) => write!(f, "{v:.6}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

/// PSNR from the channel-mean MSE.
pub fn psnr(reference: &ImageBuffer, test: &ImageBuffer) -> Result<Psnr> {
    Ok(Psnr::from_mse(mse(reference, test)?.combined))
}

/// Counts behind the accuracy ratio `S'' / S'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AccuracyResult {
    /// Embedded positions.
    pub stego_positions: usize,
    /// Embedded positions where stego differs from cover.
    pub changed: usize,
    /// Changed positions where the sterilized value equals the cover again.
    pub recovered: usize,
}

impl AccuracyResult {
    /// `recovered / changed`, or `None` when nothing was changed.
    pub fn accuracy(&self) -> Option<f64> {
        (self.changed > 0).then(|| self.recovered as f64 / self.changed as f64)
    }

    fn add(&mut self, other: &AccuracyResult) {
        self.stego_positions += other.stego_positions;
        self.changed += other.changed;
        self.recovered += other.recovered;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccuracyReport {
    pub per_channel: Vec<AccuracyResult>,
    pub overall: AccuracyResult,
}

pub fn sterilization_accuracy(
    cover: &ImageBuffer,
    stego: &ImageBuffer,
    sterilized: &ImageBuffer,
    trace: &EmbedTrace,
) -> Result<AccuracyReport> {
    cover.check_same_shape(stego)?;
    cover.check_same_shape(sterilized)?;
    trace.check_within(cover)?;
    let mut per_channel = vec![AccuracyResult::default(); cover.channels()];
    for &pos in trace.entries() {
        let acc = &mut per_channel[pos.channel];
        acc.stego_positions += 1;
        let original = cover.get(pos);
        if stego.get(pos) != original {
            acc.changed += 1;
            if sterilized.get(pos) == original {
                acc.recovered += 1;
            }
        }
    }
    let mut overall = AccuracyResult::default();
    for acc in &per_channel {
        overall.add(acc);
    }
    Ok(AccuracyReport {
        per_channel,
        overall,
    })
}

pub type Histogram = [u64; 256];

pub fn histogram(plane: &[u8]) -> Histogram {
    let mut counts = [0u64; 256];
    for &v in plane {
        counts[v as usize] += 1;
    }
    counts
}

/// Sum of absolute per-bin differences.
pub fn histogram_l1(a: &Histogram, b: &Histogram) -> u64 {
    a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y)).sum()
}

/// `value,count` CSV with 256 data rows.
pub fn histogram_csv(counts: &Histogram) -> String {
    let mut out = String::from("value,count\n");
    for (v, c) in counts.iter().enumerate() {
        out.push_str(&format!("{v},{c}\n"));
    }
    out
}

/// Minimum, maximum, mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateStats {
    pub count: usize,
    pub minimum: f64,
    pub maximum: f64,
    pub average: f64,
    pub std_deviation: f64,
}

pub fn aggregate(values: &[f64]) -> Result<AggregateStats> {
    if values.is_empty() {
        return Err(Error::Empty("aggregate needs at least one value"));
    }
    let n = values.len() as f64;
    let minimum = values.iter().copied().fold(f64::INFINITY, f64::min);
    let maximum = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // sort before summing so the result does not depend on input order
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let average = sorted.iter().sum::<f64>() / n;
    let variance = sorted.iter().map(|v| (v - average).powi(2)).sum::<f64>() / n;
    Ok(AggregateStats {
        count: values.len(),
        minimum,
        maximum,
        average: average.clamp(minimum, maximum),
        std_deviation: variance.sqrt(),
    })
}

/// Fidelity numbers for one channel of a reference/test pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMetrics {
    pub mse: f64,
    pub psnr: Psnr,
    pub histogram_l1: u64,
    pub accuracy: Option<AccuracyResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub per_channel: Vec<ChannelMetrics>,
    pub combined: ChannelMetrics,
}

/// Compares `reference` against `test`. When a cover and trace are given,
/// `reference` is taken as the stego image and `test` as its sterilization.
pub fn metrics_report(
    reference: &ImageBuffer,
    test: &ImageBuffer,
    accuracy_inputs: Option<(&ImageBuffer, &EmbedTrace)>,
) -> Result<MetricsReport> {
    let mse = mse(reference, test)?;
    let accuracy = accuracy_inputs
        .map(|(cover, trace)| sterilization_accuracy(cover, reference, test, trace))
        .transpose()?;
    let histogram_l1s: Vec<u64> = reference
        .planes()
        .iter()
        .zip(test.planes())
        .map(|(a, b)| histogram_l1(&histogram(a), &histogram(b)))
        .collect();
    let per_channel = (0..reference.channels())
        .map(|c| ChannelMetrics {
            mse: mse.per_channel[c],
            psnr: Psnr::from_mse(mse.per_channel[c]),
            histogram_l1: histogram_l1s[c],
            accuracy: accuracy.as_ref().map(|a| a.per_channel[c]),
        })
        .collect();
    Ok(MetricsReport {
        per_channel,
        combined: ChannelMetrics {
            mse: mse.combined,
            psnr: Psnr::from_mse(mse.combined),
            histogram_l1: histogram_l1s.iter().sum(),
            accuracy: accuracy.map(|a| a.overall),
        },
    })
}

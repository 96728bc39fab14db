//! Corpus runs: embed → sterilize → measure for every cover, then aggregate
//! accuracies per channel.
//!
//! Covers are the `.bmp` files of a directory, texts are the regular files
//! of another; both are taken in sorted filename order and texts are cycled
//! when there are fewer of them than covers. Each text is cut to
//! `fill_ratio * max_chars` characters of its cover.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bmp::{parse_bmp, write_bmp};
use crate::embed::{capacity, Algorithm};
use crate::error::{Error, Result};
use crate::image::{text_to_bits, ImageBuffer, StegoKey};
use crate::metrics::{
    aggregate, histogram, histogram_l1, mse, sterilization_accuracy, AccuracyResult,
    AggregateStats, Psnr,
};
use crate::sterilize::{sterilize_image, SterilizeConfig};

pub const ROW_HEADER: &str = "image,channel,S,S_prime,S_double_prime,accuracy,\
mse_stego_sterilized,mse_cover_sterilized,psnr_cover_sterilized,histogram_l1";
pub const AGGREGATE_HEADER: &str =
    "algorithm,channel,images,undefined,minimum,average,maximum,std_deviation";
pub const FAILURE_HEADER: &str = "image,error";

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub covers_dir: PathBuf,
    pub texts_dir: PathBuf,
    pub algorithm: Algorithm,
    pub key: Option<StegoKey>,
    pub fill_ratio: f64,
    pub sterilize: SterilizeConfig,
    /// Where stego and sterilized images are written, if anywhere.
    pub artifacts_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(covers_dir: impl Into<PathBuf>, texts_dir: impl Into<PathBuf>, algorithm: Algorithm) -> Self {
        Self {
            covers_dir: covers_dir.into(),
            texts_dir: texts_dir.into(),
            algorithm,
            key: None,
            fill_ratio: 1.0,
            sterilize: SterilizeConfig::default(),
            artifacts_dir: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fill_ratio > 0.0 && self.fill_ratio <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "fill ratio must be in (0, 1], got {}",
                self.fill_ratio
            )));
        }
        if self.algorithm.needs_key() && self.key.is_none() {
            return Err(Error::InvalidConfig("algorithm C requires a key".into()));
        }
        Ok(())
    }
}

/// One channel of one image.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageRow {
    pub image: String,
    pub channel: &'static str,
    pub accuracy: AccuracyResult,
    pub mse_stego_sterilized: f64,
    pub mse_cover_sterilized: f64,
    pub psnr_cover_sterilized: Psnr,
    pub histogram_l1: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelAggregate {
    pub channel: &'static str,
    /// `None` when every image had undefined accuracy on this channel.
    pub stats: Option<AggregateStats>,
    pub undefined: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub algorithm: Algorithm,
    pub rows: Vec<ImageRow>,
    pub failures: Vec<(String, String)>,
}

pub fn channel_name(channels: usize, channel: usize) -> &'static str {
    match (channels, channel) {
        (1, _) => "gray",
        (_, 0) => "R",
        (_, 1) => "G",
        _ => "B",
    }
}

const CHANNEL_ORDER: [&str; 4] = ["gray", "R", "G", "B"];

impl ExperimentReport {
    /// Accuracy statistics per channel label, images with undefined
    /// accuracy excluded and counted.
    pub fn aggregates(&self) -> Vec<ChannelAggregate> {
        CHANNEL_ORDER
            .iter()
            .filter_map(|&channel| {
                let rows: Vec<&ImageRow> = self.rows.iter().filter(|r| r.channel == channel).collect();
                if rows.is_empty() {
                    return None;
                }
                let values: Vec<f64> = rows.iter().filter_map(|r| r.accuracy.accuracy()).collect();
                Some(ChannelAggregate {
                    channel,
                    stats: aggregate(&values).ok(),
                    undefined: rows.len() - values.len(),
                })
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(ROW_HEADER);
        out.push('\n');
        for r in &self.rows {
            let accuracy = r
                .accuracy
                .accuracy()
                .map_or_else(|| "NA".to_string(), |a| format!("{a:.6}"));
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{:.6},{:.6},{},{}",
                r.image,
                r.channel,
                r.accuracy.stego_positions,
                r.accuracy.changed,
                r.accuracy.recovered,
                accuracy,
                r.mse_stego_sterilized,
                r.mse_cover_sterilized,
                r.psnr_cover_sterilized,
                r.histogram_l1
            );
        }
        out.push('\n');
        out.push_str(AGGREGATE_HEADER);
        out.push('\n');
        for agg in self.aggregates() {
            let images = agg.stats.map_or(0, |s| s.count);
            match agg.stats {
                Some(s) => {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{:.6},{:.6},{:.6},{:.6}",
                        self.algorithm,
                        agg.channel,
                        images,
                        agg.undefined,
                        s.minimum,
                        s.average,
                        s.maximum,
                        s.std_deviation
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "{},{},0,{},NA,NA,NA,NA",
                        self.algorithm, agg.channel, agg.undefined
                    );
                }
            }
        }
        if !self.failures.is_empty() {
            out.push('\n');
            out.push_str(FAILURE_HEADER);
            out.push('\n');
            for (image, reason) in &self.failures {
                let _ = writeln!(out, "{image},\"{}\"", reason.replace('"', "'"));
            }
        }
        out
    }
}

fn sorted_files(dir: &Path, filter: impl Fn(&Path) -> bool) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(format!("reading {}", dir.display()), e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| Error::io(format!("reading {}", dir.display()), e))?
            .path();
        if path.is_file() && filter(&path) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn is_bmp(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("bmp"))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Characters of a text embedded into a cover.
pub fn message_chars(cover: &ImageBuffer, text_len: usize, fill_ratio: f64) -> usize {
    let budget = (fill_ratio * capacity(cover).max_chars as f64).floor() as usize;
    text_len.min(budget)
}

/// Full pipeline for one cover; returns one row per channel.
pub fn evaluate_image(
    name: &str,
    cover: &ImageBuffer,
    text: &[u8],
    config: &ExperimentConfig,
) -> Result<(Vec<ImageRow>, ImageBuffer, ImageBuffer)> {
    let chars = message_chars(cover, text.len(), config.fill_ratio);
    let bits = text_to_bits(&text[..chars]);
    let embedded = config.algorithm.embed(cover, &bits, config.key.as_ref())?;
    let sterilized = sterilize_image(&embedded.stego, &config.sterilize);
    let accuracy = sterilization_accuracy(cover, &embedded.stego, &sterilized, &embedded.trace)?;
    let mse_stego = mse(&embedded.stego, &sterilized)?;
    let mse_cover = mse(cover, &sterilized)?;
    let rows = (0..cover.channels())
        .map(|c| ImageRow {
            image: name.to_string(),
            channel: channel_name(cover.channels(), c),
            accuracy: accuracy.per_channel[c],
            mse_stego_sterilized: mse_stego.per_channel[c],
            mse_cover_sterilized: mse_cover.per_channel[c],
            psnr_cover_sterilized: Psnr::from_mse(mse_cover.per_channel[c]),
            histogram_l1: histogram_l1(&histogram(cover.plane(c)), &histogram(sterilized.plane(c))),
        })
        .collect();
    Ok((rows, embedded.stego, sterilized))
}

fn write_artifact(dir: &Path, name: &str, image: &ImageBuffer) -> Result<()> {
    let path = dir.join(name);
    let bytes = write_bmp(image)?;
    fs::write(&path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn stem(name: &str) -> &str {
    name.rsplit_once('.').map_or(name, |(s, _)| s)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let covers = sorted_files(&config.covers_dir, is_bmp)?;
    if covers.is_empty() {
        return Err(Error::Empty("no .bmp covers found"));
    }
    let texts = sorted_files(&config.texts_dir, |_| true)?;
    if texts.is_empty() {
        return Err(Error::Empty("no text files found"));
    }
    if let Some(dir) = &config.artifacts_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    }

    let outcomes: Vec<(String, Result<Vec<ImageRow>>)> = covers
        .par_iter()
        .enumerate()
        .map(|(i, cover_path)| {
            let name = file_name(cover_path);
            let outcome = (|| {
                let bytes = fs::read(cover_path)
                    .map_err(|e| Error::io(format!("reading {}", cover_path.display()), e))?;
                let cover = parse_bmp(&bytes)?;
                let text_path = &texts[i % texts.len()];
                let text = fs::read(text_path)
                    .map_err(|e| Error::io(format!("reading {}", text_path.display()), e))?;
                let (rows, stego, sterilized) = evaluate_image(&name, &cover, &text, config)?;
                if let Some(dir) = &config.artifacts_dir {
                    write_artifact(dir, &format!("{}_stego.bmp", stem(&name)), &stego)?;
                    write_artifact(dir, &format!("{}_steri.bmp", stem(&name)), &sterilized)?;
                }
                Ok(rows)
            })();
            (name, outcome)
        })
        .collect();

    let mut report = ExperimentReport {
        algorithm: config.algorithm,
        rows: Vec::new(),
        failures: Vec::new(),
    };
    for (name, outcome) in outcomes {
        match outcome {
            Ok(rows) => report.rows.extend(rows),
            Err(e) => report.failures.push((name, e.to_string())),
        }
    }
    Ok(report)
}

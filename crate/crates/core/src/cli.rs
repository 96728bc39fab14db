//! The `steri` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (unreadable or
//! invalid input, capacity problems, truncated extraction).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bmp::{parse_bmp, write_bmp};
use crate::embed::framing::{embed_framed, extract_framed, frame};
use crate::embed::{capacity, Algorithm};
use crate::error::Error;
use crate::experiment::{channel_name, run_experiment, ExperimentConfig};
use crate::image::{EmbedTrace, ImageBuffer, StegoKey};
use crate::metrics::{histogram, histogram_csv, metrics_report, mse, Psnr};
use crate::sterilize::{changed_counts, sterilize_image, SterilizeConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

const DEFAULT_SEGMENTS: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "steri", version, about = "LSB steganography and image sterilization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hide a message file in a cover image
    Embed {
        #[arg(long, value_parser = parse_algorithm)]
        algo: Algorithm,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        msg: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        key: KeyArgs,
    },
    /// Recover a message from a stego image
    Extract {
        #[arg(long, value_parser = parse_algorithm)]
        algo: Algorithm,
        #[arg(long, visible_alias = "in")]
        stego: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        key: KeyArgs,
    },
    /// Force every intensity pair to its majority parity
    Sterilize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Count parities per BLOCK x BLOCK tile instead of per channel
        #[arg(long)]
        block: Option<u32>,
    },
    /// Compare two images; with --cover and --trace also report accuracy
    Metrics {
        /// Reference image (the stego image when measuring accuracy)
        #[arg(long, visible_alias = "ref")]
        stego: PathBuf,
        /// Test image (the sterilized image when measuring accuracy)
        #[arg(long, visible_alias = "test")]
        steri: PathBuf,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Dump intensity histograms as value,count CSV
    Histogram {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output CSV; color images without --channel write NAME_R/_G/_B files
        #[arg(long)]
        out: Option<PathBuf>,
        /// R, G or B (color images only)
        #[arg(long)]
        channel: Option<String>,
    },
    /// Run embed, sterilize and measure over a corpus
    Experiment {
        #[arg(long, value_parser = parse_algorithm)]
        algo: Algorithm,
        /// Directory of cover BMPs
        #[arg(long, visible_alias = "covers")]
        cover: PathBuf,
        /// Directory of message texts
        #[arg(long, visible_alias = "texts")]
        msg: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Fraction of capacity to fill, in (0, 1]
        #[arg(long, default_value_t = 1.0)]
        fill: f64,
        #[arg(long)]
        block: Option<u32>,
        /// Directory for stego and sterilized images
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        key: KeyArgs,
    },
}

#[derive(Debug, Args)]
struct KeyArgs {
    /// Stego key seed (algorithm C)
    #[arg(long)]
    seed: Option<u64>,
    /// Segment count (algorithm C)
    #[arg(long)]
    segments: Option<u32>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

impl KeyArgs {
    fn resolve(&self, algorithm: Algorithm) -> Result<Option<StegoKey>, Failure> {
        if !algorithm.needs_key() {
            return Ok(None);
        }
        let seed = self
            .seed
            .ok_or_else(|| Failure::Usage("algorithm C requires --seed".into()))?;
        let segments = self.segments.map_or(DEFAULT_SEGMENTS, |s| s as usize);
        Ok(Some(StegoKey::new(seed, segments)))
    }
}

fn sterilize_config(block: Option<u32>) -> Result<SterilizeConfig, Failure> {
    match block {
        None => Ok(SterilizeConfig::whole_channel()),
        Some(side) => SterilizeConfig::square_block(side as usize)
            .ok_or_else(|| Failure::Usage("--block must be at least 1".into())),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Data(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))
}

fn load_image(path: &Path) -> Result<ImageBuffer, Failure> {
    let bytes = read(path)?;
    parse_bmp(&bytes).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn save_image(path: &Path, image: &ImageBuffer) -> Result<(), Failure> {
    let bytes = write_bmp(image).map_err(Error::from)?;
    write(path, &bytes)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DATA
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match command {
        Command::Embed {
            algo,
            cover,
            msg,
            out: out_path,
            trace,
            key,
        } => cmd_embed(algo, &cover, &msg, &out_path, trace.as_deref(), &key, out),
        Command::Extract {
            algo,
            stego,
            out: out_path,
            key,
        } => cmd_extract(algo, &stego, &out_path, &key, out, err),
        Command::Sterilize {
            input,
            out: out_path,
            block,
        } => cmd_sterilize(&input, &out_path, block, out),
        Command::Metrics {
            stego,
            steri,
            cover,
            trace,
        } => cmd_metrics(&stego, &steri, trace.as_deref(), cover.as_deref(), out),
        Command::Histogram {
            input,
            out: out_path,
            channel,
        } => cmd_histogram(&input, out_path.as_deref(), channel.as_deref(), out),
        Command::Experiment {
            algo,
            cover,
            msg,
            report,
            fill,
            block,
            out: artifacts,
            key,
        } => {
            let mut config = ExperimentConfig::new(cover, msg, algo);
            config.key = key.resolve(algo)?;
            config.fill_ratio = fill;
            config.sterilize = sterilize_config(block)?;
            config.artifacts_dir = artifacts;
            cmd_experiment(&config, &report, out, err)
        }
    }
}

fn cmd_embed(
    algo: Algorithm,
    cover_path: &Path,
    msg_path: &Path,
    out_path: &Path,
    trace_path: Option<&Path>,
    key: &KeyArgs,
    out: &mut dyn Write,
) -> CmdResult {
    let key = key.resolve(algo)?;
    let cover = load_image(cover_path)?;
    let message = read(msg_path)?;
    let stream_bits = frame(&message)?.len();
    let result = embed_framed(algo, &cover, &message, key.as_ref())?;
    save_image(out_path, &result.stego)?;
    if let Some(path) = trace_path {
        write(path, result.trace.to_csv().as_bytes())?;
    }
    let cap = capacity(&cover).max_bits;
    let _ = writeln!(
        out,
        "embedded {stream_bits} bits ({} payload + 32 length) into {cap}-bit capacity ({:.2}% used)",
        message.len() * 8,
        100.0 * stream_bits as f64 / cap as f64
    );
    Ok(EXIT_OK)
}

fn cmd_extract(
    algo: Algorithm,
    stego_path: &Path,
    out_path: &Path,
    key: &KeyArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let key = key.resolve(algo)?;
    let stego = load_image(stego_path)?;
    let extraction = extract_framed(algo, &stego, key.as_ref())?;
    write(out_path, &extraction.payload)?;
    let _ = writeln!(
        out,
        "extracted {} bytes (declared {} bits)",
        extraction.payload.len(),
        extraction.declared_bits
    );
    if extraction.complete {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(
            err,
            "warning: declared length {} bits does not fit the image; output truncated to {} bytes",
            extraction.declared_bits,
            extraction.payload.len()
        );
        Ok(EXIT_DATA)
    }
}

fn cmd_sterilize(input: &Path, out_path: &Path, block: Option<u32>, out: &mut dyn Write) -> CmdResult {
    let config = sterilize_config(block)?;
    let image = load_image(input)?;
    let sterilized = sterilize_image(&image, &config);
    save_image(out_path, &sterilized)?;
    let changed = changed_counts(&image, &sterilized);
    let mse = mse(&image, &sterilized)?;
    for (c, count) in changed.iter().enumerate() {
        let _ = writeln!(
            out,
            "channel {}: changed={count} mse={:.6} psnr={}",
            channel_name(image.channels(), c),
            mse.per_channel[c],
            Psnr::from_mse(mse.per_channel[c])
        );
    }
    let _ = writeln!(
        out,
        "total: changed={} mse={:.6} psnr={}",
        changed.iter().sum::<usize>(),
        mse.combined,
        Psnr::from_mse(mse.combined)
    );
    Ok(EXIT_OK)
}

fn cmd_metrics(
    ref_path: &Path,
    test_path: &Path,
    trace_path: Option<&Path>,
    cover_path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let accuracy_paths = match (cover_path, trace_path) {
        (Some(c), Some(t)) => Some((c, t)),
        (None, None) => None,
        (Some(_), None) => return Err(Failure::Usage("--cover requires --trace".into())),
        (None, Some(_)) => return Err(Failure::Usage("--trace requires --cover".into())),
    };
    let reference = load_image(ref_path)?;
    let test = load_image(test_path)?;
    let accuracy_inputs = match accuracy_paths {
        Some((c, t)) => {
            let cover = load_image(c)?;
            let text = String::from_utf8(read(t)?)
                .map_err(|_| Failure::Data(format!("{} is not UTF-8", t.display())))?;
            Some((cover, EmbedTrace::from_csv(&text)?))
        }
        None => None,
    };
    let report = metrics_report(
        &reference,
        &test,
        accuracy_inputs.as_ref().map(|(c, t)| (c, t)),
    )?;
    let rows = report
        .per_channel
        .iter()
        .enumerate()
        .map(|(c, m)| (channel_name(reference.channels(), c), m))
        .chain(std::iter::once(("combined", &report.combined)));
    for (label, m) in rows {
        let _ = write!(
            out,
            "{label}: mse={:.6} psnr={} histogram_l1={}",
            m.mse, m.psnr, m.histogram_l1
        );
        if let Some(acc) = m.accuracy {
            let accuracy = acc
                .accuracy()
                .map_or_else(|| "undefined".to_string(), |a| format!("{a:.6}"));
            let _ = write!(
                out,
                " S={} S'={} S''={} accuracy={accuracy}",
                acc.stego_positions, acc.changed, acc.recovered
            );
        }
        let _ = writeln!(out);
    }
    Ok(EXIT_OK)
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

fn cmd_histogram(
    input: &Path,
    out_path: Option<&Path>,
    channel: Option<&str>,
    out: &mut dyn Write,
) -> CmdResult {
    let image = load_image(input)?;
    let selected: Vec<usize> = match (image.channels(), channel) {
        (1, None) => vec![0],
        (1, Some(_)) => return Err(Failure::Usage("--channel applies to color images only".into())),
        (_, None) => vec![0, 1, 2],
        (_, Some(name)) => match name.to_ascii_uppercase().as_str() {
            "R" => vec![0],
            "G" => vec![1],
            "B" => vec![2],
            _ => return Err(Failure::Usage(format!("unknown channel {name:?}"))),
        },
    };
    let split = selected.len() > 1;
    for c in selected {
        let csv = histogram_csv(&histogram(image.plane(c)));
        match out_path {
            Some(path) if split => write(&suffixed(path, channel_name(3, c)), csv.as_bytes())?,
            Some(path) => write(path, csv.as_bytes())?,
            None => {
                if split {
                    let _ = writeln!(out, "# channel {}", channel_name(3, c));
                }
                let _ = write!(out, "{csv}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_experiment(
    config: &ExperimentConfig,
    report_path: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    if config.fill_ratio.is_nan() || config.fill_ratio <= 0.0 || config.fill_ratio > 1.0 {
        return Err(Failure::Usage("--fill must be in (0, 1]".into()));
    }
    let report = run_experiment(config)?;
    write(report_path, report.to_csv().as_bytes())?;
    for agg in report.aggregates() {
        match agg.stats {
            Some(s) => {
                let _ = writeln!(
                    out,
                    "{} {}: min={:.4} avg={:.4} max={:.4} std={:.4} (images={}, undefined={})",
                    report.algorithm,
                    agg.channel,
                    s.minimum,
                    s.average,
                    s.maximum,
                    s.std_deviation,
                    s.count,
                    agg.undefined
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "{} {}: no defined accuracies (undefined={})",
                    report.algorithm, agg.channel, agg.undefined
                );
            }
        }
    }
    for (image, reason) in &report.failures {
        let _ = writeln!(err, "skipped {image}: {reason}");
    }
    Ok(EXIT_OK)
}

//! Regenerates the checked-in synthetic corpus and its golden reports.
//!
//!     cargo run -p sterilize-core --example make_corpus -- crates/core/tests/data

use std::fs;
use std::path::PathBuf;

use sterilize_core::bmp::write_bmp;
use sterilize_core::embed::Algorithm;
use sterilize_core::experiment::{run_experiment, ExperimentConfig};
use sterilize_core::synth::{natural_image, synthetic_text};
use sterilize_core::StegoKey;

pub const SIDE: usize = 64;
pub const GOLDEN_KEY: StegoKey = StegoKey { seed: 2011, segments: 4 };

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/core/tests/data".into())
        .into();
    let covers = root.join("corpus/covers");
    let texts = root.join("corpus/texts");
    fs::create_dir_all(&covers)?;
    fs::create_dir_all(&texts)?;

    for i in 0..10u64 {
        let (name, channels) = if i < 5 {
            (format!("gray_{i:02}.bmp"), 1)
        } else {
            (format!("color_{i:02}.bmp"), 3)
        };
        let image = natural_image(1000 + i, SIDE, SIDE, channels);
        fs::write(covers.join(name), write_bmp(&image)?)?;
        fs::write(
            texts.join(format!("text_{i:02}.txt")),
            synthetic_text(5000 + i, 2000),
        )?;
    }

    for algo in Algorithm::ALL {
        let mut config = ExperimentConfig::new(&covers, &texts, algo);
        config.key = algo.needs_key().then_some(GOLDEN_KEY);
        let report = run_experiment(&config)?;
        let path = root.join(format!("golden_report_{algo}.csv"));
        fs::write(&path, report.to_csv())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

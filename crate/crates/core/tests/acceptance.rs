//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any criterion fails.

mod common;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sterilize_core::bmp::{parse_bmp, write_bmp};
use sterilize_core::embed::{embed_sequential, extract_sequential, Algorithm};
use sterilize_core::experiment::{run_experiment, ExperimentConfig, AGGREGATE_HEADER, ROW_HEADER};
use sterilize_core::metrics::{aggregate, mse, psnr, sterilization_accuracy, Psnr, PEAK_SQUARED};
use sterilize_core::sterilize::changed_counts;
use sterilize_core::synth::natural_image;
use sterilize_core::{
    sterilize_channel, sterilize_image, EmbedTrace, ImageBuffer, Position, SterilizeConfig,
    StegoKey,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(limit_s), || {
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn codec_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB3F);
    let mut originals = Vec::new();
    for i in 0..1000 {
        let channels = if i % 2 == 0 { 1 } else { 3 };
        let img = common::random_image(&mut rng, 64, channels, false);
        let bytes = write_bmp(&img).map_err(|e| e.to_string())?;
        let back = parse_bmp(&bytes).map_err(|e| format!("image {i}: {e}"))?;
        ensure(back == img, || format!("image {i} changed in round trip"))?;
        ensure(write_bmp(&back).unwrap() == bytes, || format!("image {i} not byte-stable"))?;
        originals.push(bytes);
    }
    let mut rejected = 0;
    for (i, original) in originals.iter().enumerate() {
        let mut bytes = original.clone();
        match i % 3 {
            0 => {
                for _ in 0..rng.gen_range(1..6) {
                    let at = rng.gen_range(0..bytes.len().min(80));
                    bytes[at] = rng.gen();
                }
            }
            1 => bytes.truncate(rng.gen_range(0..bytes.len())),
            _ => {
                let at = rng.gen_range(0..bytes.len());
                bytes[at] ^= 1 << rng.gen_range(0..8);
                bytes.truncate(bytes.len() - rng.gen_range(0..3));
            }
        }
        let result = catch_unwind(AssertUnwindSafe(|| parse_bmp(&bytes)));
        match result {
            Err(_) => return Err(format!("parser panicked on mutated file {i}")),
            Ok(Err(_)) => rejected += 1,
            Ok(Ok(img)) => ensure(img.position_count() <= bytes.len(), || {
                format!("mutated file {i} decoded to more pixels than bytes")
            })?,
        }
    }
    within(start.elapsed(), 10)?;
    Ok(format!(
        "1000 images bit-exact, 1000 mutated files without panic ({rejected} rejected), {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn embed_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xE3B);
    let mut boundary_pairs = 0usize;
    for algo in Algorithm::ALL {
        for trial in 0..500 {
            let channels = if trial % 2 == 0 { 1 } else { 3 };
            let extremes = algo == Algorithm::LsbMatching;
            let img = common::random_image(&mut rng, 32, channels, extremes);
            let cap = img.position_count();
            let mut len = rng.gen_range(0..=cap);
            if algo == Algorithm::LsbMatching {
                len &= !1;
            }
            let bits = common::random_bits(&mut rng, len);
            let key = StegoKey::new(rng.gen(), rng.gen_range(1..=cap));
            let res = algo
                .embed(&img, &bits, Some(&key))
                .map_err(|e| format!("{algo} trial {trial}: {e}"))?;
            if extremes {
                boundary_pairs += res
                    .trace
                    .entries()
                    .iter()
                    .filter(|&&p| matches!(img.get(p), 0 | 255))
                    .count();
            }
            let out = algo
                .extract(&res.stego, len, Some(&key))
                .map_err(|e| format!("{algo} trial {trial}: {e}"))?;
            ensure(out == bits, || format!("{algo} trial {trial}: bits differ"))?;
        }
    }
    ensure(boundary_pairs > 1000, || format!("only {boundary_pairs} boundary samples for B"))?;
    within(start.elapsed(), 30)?;
    Ok(format!(
        "3 x 500 exact round trips, {boundary_pairs} B positions at 0/255, {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn check_plane_invariants(plane: &[u8], width: usize, config: &SterilizeConfig) -> Result<(), String> {
    let out = sterilize_channel(plane, width, config);
    ensure(out.len() == plane.len(), || "length changed".into())?;
    let side = match config.scope {
        sterilize_core::GroupingScope::WholeChannel => usize::MAX,
        sterilize_core::GroupingScope::SquareBlock(s) => s.get(),
    };
    let region = |i: usize| {
        if side == usize::MAX {
            (0, 0)
        } else {
            ((i / width) / side, (i % width) / side)
        }
    };
    let mut regions = std::collections::BTreeMap::<(usize, usize), ([u64; 256], [u64; 256], u64)>::new();
    for (i, (&a, &b)) in plane.iter().zip(&out).enumerate() {
        ensure((a as i32 - b as i32).abs() <= 1, || format!("|delta| > 1 at {i}"))?;
        let r = regions.entry(region(i)).or_insert(([0; 256], [0; 256], 0));
        r.0[a as usize] += 1;
        r.1[b as usize] += 1;
        r.2 += (a != b) as u64;
    }
    for (before, after, changed) in regions.values() {
        let mut expected = 0;
        for j in 0..128 {
            let (e, o) = (2 * j, 2 * j + 1);
            ensure(after[e] == 0 || after[o] == 0, || format!("bucket {j} not uniform"))?;
            ensure(after[e] + after[o] == before[e] + before[o], || {
                format!("bucket {j} population changed")
            })?;
            expected += before[e].min(before[o]);
        }
        ensure(*changed == expected, || format!("changed {changed}, expected {expected}"))?;
    }
    ensure(sterilize_channel(&out, width, config) == out, || "not idempotent".into())
}

fn sterilizer_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x57E);
    let configs = [
        SterilizeConfig::whole_channel(),
        SterilizeConfig::square_block(2).unwrap(),
        SterilizeConfig::square_block(5).unwrap(),
    ];
    for trial in 0..500 {
        let width = rng.gen_range(1..40);
        let height = rng.gen_range(1..40);
        let narrow = trial % 2 == 0;
        let plane: Vec<u8> = (0..width * height)
            .map(|_| if narrow { rng.gen_range(0..6) } else { rng.gen() })
            .collect();
        for config in &configs {
            check_plane_invariants(&plane, width, config).map_err(|e| format!("plane {trial}: {e}"))?;
        }
    }
    let adversarial: Vec<Vec<u8>> = vec![
        vec![],
        vec![0],
        vec![255],
        vec![254, 255],
        vec![0, 1, 0, 1, 0, 1],
        (0..=255).collect(),
        (0..=255).rev().collect(),
        [vec![254u8; 100], vec![255u8; 100]].concat(),
        [vec![254u8; 100], vec![255u8; 101]].concat(),
        (0..1000).map(|i| (i % 2) as u8).collect(),
        vec![7; 64],
    ];
    for (i, plane) in adversarial.iter().enumerate() {
        for config in &configs {
            check_plane_invariants(plane, plane.len().clamp(1, 16), config)
                .map_err(|e| format!("fixture {i}: {e}"))?;
        }
    }
    Ok(format!(
        "500 random planes + {} fixtures x 3 scopes, all invariants exact",
        adversarial.len()
    ))
}

/// Direct per-position decision: count the plane's members of this value's
/// pair and pick the majority parity, odd on ties.
fn oracle(plane: &[u8]) -> Vec<u8> {
    plane
        .iter()
        .map(|&v| {
            let even = v & !1;
            let n_even = plane.iter().filter(|&&x| x == even).count();
            let n_odd = plane.iter().filter(|&&x| x == even + 1).count();
            if n_even > n_odd {
                even
            } else {
                even + 1
            }
        })
        .collect()
}

fn brute_force_equivalence() -> Outcome {
    let config = SterilizeConfig::whole_channel();
    let mut cases = 0u64;
    let mut plane = Vec::with_capacity(6);
    for len in 0..=6u32 {
        for code in 0..8u32.pow(len) {
            plane.clear();
            let mut c = code;
            for _ in 0..len {
                plane.push((c % 8) as u8);
                c /= 8;
            }
            let got = sterilize_channel(&plane, len.max(1) as usize, &config);
            let want = oracle(&plane);
            ensure(got == want, || format!("{plane:?}: got {got:?}, oracle {want:?}"))?;
            cases += 1;
        }
    }
    ensure(cases == 299_593, || format!("enumerated {cases} planes"))?;
    Ok(format!("{cases} planes (all lengths 0..=6 over 0..=7) match the oracle"))
}

fn mse_psnr_formulas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x95);
    for trial in 0..200 {
        let img = common::random_image(&mut rng, 24, if trial % 2 == 0 { 1 } else { 3 }, false);
        let bits = common::random_bits(&mut rng, img.position_count());
        let stego = embed_sequential(&img, &bits).unwrap().stego;
        let steri = sterilize_image(&stego, &SterilizeConfig::default());
        let m = mse(&stego, &steri).unwrap();
        for (c, changed) in changed_counts(&stego, &steri).into_iter().enumerate() {
            let want = changed as f64 / img.pixel_count() as f64;
            ensure(m.per_channel[c] == want, || {
                format!("trial {trial} channel {c}: mse {} != {want}", m.per_channel[c])
            })?;
        }
        let formula = 10.0 * (PEAK_SQUARED / mse(&img, &steri).unwrap().combined).log10();
        match psnr(&img, &steri).unwrap() {
            Psnr::Finite(db) => ensure((db - formula).abs() <= 1e-9, || format!("psnr {db} vs {formula}"))?,
            Psnr::Infinite => ensure(formula.is_infinite(), || "unexpected infinite psnr".into())?,
        }
    }
    let gray = Psnr::from_mse(0.0050).db().unwrap();
    ensure((gray - 71.18).abs() <= 0.1, || format!("psnr(0.0050) = {gray:.4} dB"))?;
    Ok(format!("200 exact mse laws, psnr within 1e-9 dB; psnr(0.0050) = {gray:.4} dB vs 71.18 (±0.1)"))
}

fn payload_destruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xDE57);
    let mut total_ber = 0.0;
    for trial in 0..100u64 {
        let channels = if trial % 2 == 0 { 1 } else { 3 };
        let side = rng.gen_range(24..64);
        let cover = natural_image(rng.gen(), side, side, channels);
        let bits = common::random_bits(&mut rng, cover.position_count());
        let stego = embed_sequential(&cover, &bits).unwrap().stego;
        let steri = sterilize_image(&stego, &SterilizeConfig::default());
        let out = extract_sequential(&steri, bits.len()).unwrap();
        ensure(out != bits, || format!("trial {trial}: message survived"))?;
        total_ber += out.hamming(&bits) as f64 / bits.len() as f64;
    }
    let mean = total_ber / 100.0;
    ensure(mean > 0.10, || format!("mean bit-error rate {mean:.4} <= 0.10"))?;
    Ok(format!("100/100 messages destroyed, mean BER {mean:.4} (> 0.10)"))
}

/// Recomputes the aggregate block from the row section's integer columns.
fn recompute_aggregates(csv: &str, algorithm: &str) -> Result<Vec<String>, String> {
    let mut sections = csv.split("\n\n");
    let rows = sections.next().ok_or("no rows section")?;
    let mut lines = rows.lines();
    ensure(lines.next() == Some(ROW_HEADER), || "bad row header".into())?;
    let mut by_channel: Vec<(String, Vec<f64>, usize)> = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let channel = fields[1].to_string();
        let changed: u64 = fields[3].parse().map_err(|_| format!("bad S' in {line}"))?;
        let recovered: u64 = fields[4].parse().map_err(|_| format!("bad S'' in {line}"))?;
        let idx = match by_channel.iter().position(|(c, _, _)| *c == channel) {
            Some(i) => i,
            None => {
                by_channel.push((channel, Vec::new(), 0));
                by_channel.len() - 1
            }
        };
        if changed == 0 {
            by_channel[idx].2 += 1;
        } else {
            by_channel[idx].1.push(recovered as f64 / changed as f64);
        }
    }
    let order = ["gray", "R", "G", "B"];
    by_channel.sort_by_key(|(c, _, _)| order.iter().position(|o| o == c));
    Ok(by_channel
        .into_iter()
        .map(|(channel, values, undefined)| {
            let s = aggregate(&values).expect("defined accuracies");
            format!(
                "{algorithm},{channel},{},{undefined},{:.6},{:.6},{:.6},{:.6}",
                values.len(),
                s.minimum,
                s.average,
                s.maximum,
                s.std_deviation
            )
        })
        .collect())
}

fn corpus_report() -> Outcome {
    let start = Instant::now();
    let data = common::data_dir();
    let covers = data.join("corpus/covers");
    let texts = data.join("corpus/texts");
    let cover_count = fs::read_dir(&covers).map_err(|e| e.to_string())?.count();
    ensure(cover_count == 10, || format!("corpus has {cover_count} covers"))?;

    let mut averages = Vec::new();
    for algo in Algorithm::ALL {
        let mut config = ExperimentConfig::new(&covers, &texts, algo);
        config.key = algo.needs_key().then_some(StegoKey::new(2011, 4));
        let first = run_experiment(&config).map_err(|e| e.to_string())?.to_csv();
        let second = run_experiment(&config).map_err(|e| e.to_string())?.to_csv();
        ensure(first == second, || format!("{algo}: report not deterministic"))?;
        let golden = fs::read_to_string(data.join(format!("golden_report_{algo}.csv")))
            .map_err(|e| e.to_string())?;
        ensure(first == golden, || format!("{algo}: report differs from golden"))?;

        let aggregate_block: Vec<String> = first
            .split("\n\n")
            .nth(1)
            .ok_or("no aggregate section")?
            .lines()
            .skip_while(|l| *l == AGGREGATE_HEADER)
            .map(str::to_string)
            .collect();
        let recomputed = recompute_aggregates(&first, &algo.to_string())?;
        ensure(aggregate_block == recomputed, || {
            format!("{algo}: aggregates {aggregate_block:?} != recomputed {recomputed:?}")
        })?;

        if algo == Algorithm::Sequential {
            for line in &aggregate_block {
                let avg: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
                averages.push((line.split(',').nth(1).unwrap().to_string(), avg));
            }
        }
    }
    within(start.elapsed(), 60)?;
    let summary = averages
        .iter()
        .map(|(c, a)| format!("{c}={a:.4}"))
        .collect::<Vec<_>>()
        .join(" ");
    let overall = averages.iter().map(|(_, a)| a).sum::<f64>() / averages.len() as f64;
    ensure((0.5..=1.0).contains(&overall), || {
        format!(
            "golden reports deterministic and recomputable, but average A accuracy {overall:.4} \
             ({summary}) is outside [0.5, 1.0]"
        )
    })?;
    Ok(format!("golden match, aggregates recomputed exactly, average A accuracy {overall:.4} ({summary})"))
}

fn accuracy_fixtures() -> Outcome {
    let run = |cover: &[u8], stego: &[u8], trace: &[usize]| {
        let cover = ImageBuffer::gray(cover.len(), 1, cover.to_vec()).unwrap();
        let stego = ImageBuffer::gray(stego.len(), 1, stego.to_vec()).unwrap();
        let steri = sterilize_image(&stego, &SterilizeConfig::default());
        let trace = EmbedTrace::from_entries(trace.iter().map(|&p| Position::new(0, p)).collect()).unwrap();
        let acc = sterilization_accuracy(&cover, &stego, &steri, &trace).unwrap().overall;
        (steri.plane(0).to_vec(), (acc.stego_positions, acc.changed, acc.recovered), acc.accuracy())
    };
    let cases = [
        (run(&[2, 2, 2, 2], &[3, 2, 2, 2], &[0]), (vec![2, 2, 2, 2], (1, 1, 1), Some(1.0))),
        (run(&[2, 3], &[3, 3], &[0, 1]), (vec![3, 3], (2, 1, 0), Some(0.0))),
        (run(&[2, 3], &[2, 3], &[0, 1]), (vec![3, 3], (2, 0, 0), None)),
    ];
    for (i, (got, want)) in cases.iter().enumerate() {
        ensure(got == want, || format!("fixture {i}: got {got:?}, want {want:?}"))?;
    }
    Ok("accuracies 1.0, 0.0 and undefined reproduced exactly".into())
}

/// Not a criterion: shows the cover property the corpus band depends on.
fn parity_diagnostic() -> String {
    let mut accs = Vec::new();
    for i in 0..10u64 {
        let base = natural_image(1000 + i, 64, 64, if i < 5 { 1 } else { 3 });
        // a 2x contrast stretch leaves only even intensities
        let planes = base
            .planes()
            .iter()
            .map(|p| p.iter().map(|&v| ((v as f64 - 128.0) * 2.0 + 128.0).round().clamp(0.0, 254.0) as u8 & !1).collect())
            .collect();
        let cover = ImageBuffer::from_planes(64, 64, planes).unwrap();
        let text = fs::read(common::data_dir().join(format!("corpus/texts/text_{i:02}.txt"))).unwrap();
        let chars = cover.position_count() / 8;
        let res = embed_sequential(&cover, &sterilize_core::image::text_to_bits(&text[..chars.min(text.len())])).unwrap();
        let steri = sterilize_image(&res.stego, &SterilizeConfig::default());
        let acc = sterilization_accuracy(&cover, &res.stego, &steri, &res.trace).unwrap();
        accs.extend(acc.per_channel.iter().filter_map(|a| a.accuracy()));
    }
    format!(
        "parity-imbalanced covers (2x contrast stretch of the corpus) give average A accuracy {:.4}",
        accs.iter().sum::<f64>() / accs.len() as f64
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("codec round-trip and fuzz safety", codec_round_trip),
        ("embed/extract round-trip A, B, C", embed_round_trip),
        ("sterilizer invariant suite", sterilizer_invariants),
        ("brute-force oracle equivalence", brute_force_equivalence),
        ("MSE/PSNR formula checks", mse_psnr_formulas),
        ("payload destruction", payload_destruction),
        ("synthetic corpus report", corpus_report),
        ("accuracy metric fixtures", accuracy_fixtures),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("[INFO] {}", parity_diagnostic());
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

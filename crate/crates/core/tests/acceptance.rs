//! End-to-end acceptance checks for the whole pipeline. Each test asserts
//! one shipping requirement at its stated tolerance and prints a PASS line
//! with the measured values (visible with `--nocapture`).

mod common;

use std::time::Instant;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dctmark::attacks;
use dctmark::dct::{dct2d, idct2d, Block, ZERO_BLOCK};
use dctmark::hvs::{compute_factors, BlockStats, EdgeConfig, FactorConfig, GlobalStats};
use dctmark::image::ImageBuffer;
use dctmark::invisible::{
    embed_invisible, encrypt_watermark, extract_watermark, keystream_bits, AlphaConfig,
    BinaryWatermark, Verdict, WatermarkKey,
};
use dctmark::metrics;
use dctmark::visible::{embed_visible, Anchor, PlacementSpec};

use common::{bench_set, mark_bits};

const BENCH_KEY: &str = "acceptance-key-2024";

#[test]
fn dct_round_trip_and_parseval_fidelity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut max_round_trip = 0.0f64;
    let mut max_parseval = 0.0f64;
    for _ in 0..10_000 {
        let mut block: Block = ZERO_BLOCK;
        for row in &mut block {
            for v in row.iter_mut() {
                *v = (rng.next_u32() % 256) as f64 + (rng.next_u32() as f64 / u32::MAX as f64);
            }
        }
        let coeffs = dct2d(&block);
        let back = idct2d(&coeffs);
        let mut spatial_energy = 0.0;
        let mut coeff_energy = 0.0;
        for i in 0..8 {
            for j in 0..8 {
                max_round_trip = max_round_trip.max((back[i][j] - block[i][j]).abs());
                spatial_energy += block[i][j] * block[i][j];
                coeff_energy += coeffs[i][j] * coeffs[i][j];
            }
        }
        max_parseval = max_parseval.max((coeff_energy - spatial_energy).abs() / spatial_energy);
    }
    let elapsed = start.elapsed();
    assert!(max_round_trip < 1e-9, "round trip error {max_round_trip}");
    assert!(
        max_parseval < 1e-9,
        "parseval relative error {max_parseval}"
    );
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "PASS dct fidelity: 10000 blocks, max round-trip {max_round_trip:.3e}, \
         max parseval rel {max_parseval:.3e} ({elapsed:.2?})"
    );
}

#[test]
fn embedding_factors_stay_in_range_and_follow_the_model() {
    let start = Instant::now();
    let cfg = FactorConfig::default();
    let edge = EdgeConfig::default();

    // Real covers: every block's factors inside the configured ranges.
    let mut blocks_checked = 0usize;
    for (name, cover) in &bench_set().covers {
        let plane = dctmark::color::luma_plane(cover).unwrap().extended();
        let mask = dctmark::hvs::detect_edge_blocks(&plane, &edge).unwrap();
        let grid = plane.partition().unwrap().to_dct();
        let (stats, global) = dctmark::hvs::compute_stats(&grid, &mask).unwrap();
        let factors = compute_factors(&stats, &global, &cfg).unwrap();
        for f in &factors {
            assert!(
                f.alpha >= cfg.alpha_min && f.alpha <= cfg.alpha_max,
                "{name}: alpha {} out of range",
                f.alpha
            );
            assert!(
                f.beta >= cfg.beta_min && f.beta <= cfg.beta_max,
                "{name}: beta {} out of range",
                f.beta
            );
        }
        blocks_checked += factors.len();
    }

    // Synthetic grid: alpha rises with texture and peaks where block
    // brightness matches the global mean.
    let global = GlobalStats {
        mu_prime: 0.55,
        c00_min: 0.0,
        c00_max: 2040.0,
        sigma_min: 0.0,
        sigma_max: 1.0,
    };
    let stats = |mu: f64, sigma: f64| BlockStats {
        mu_prime: mu,
        sigma,
        sigma_prime: sigma,
        mu_ac: 0.0,
        is_edge: false,
    };
    let grid: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    for &mu in &grid {
        let mut last = f64::NEG_INFINITY;
        for &sigma in &grid {
            let f = dctmark::hvs::factors_for(&stats(mu, sigma), &global, &cfg);
            assert!(f.alpha >= last, "alpha not monotone in texture at mu {mu}");
            last = f.alpha;
        }
    }
    for &sigma in &grid {
        let alphas: Vec<f64> = grid
            .iter()
            .map(|&mu| dctmark::hvs::factors_for(&stats(mu, sigma), &global, &cfg).alpha)
            .collect();
        // Peak sits at the grid point nearest the global mean (0.55 -> 0.5 or 0.6).
        let peak = alphas
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(
            grid[peak] == 0.5 || grid[peak] == 0.6,
            "alpha peak at mu {} for sigma {sigma}",
            grid[peak]
        );
        // And falls off monotonically on both sides of the peak.
        for w in alphas[peak..].windows(2) {
            assert!(w[0] >= w[1] - 1e-12);
        }
        for w in alphas[..=peak].windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "PASS factor model: {blocks_checked} real blocks in range, \
         100-point synthetic grid monotone and peaked ({elapsed:.2?})"
    );
}

#[test]
fn visible_watermark_keeps_benchmark_quality() {
    let start = Instant::now();
    let set = bench_set();
    let factors = FactorConfig::default();
    let edge = EdgeConfig::default();
    let mut summary = String::new();
    for (name, cover) in &set.covers {
        let psnr_at = |intensity: u32| {
            let spec = PlacementSpec {
                anchor: Anchor::MiddleCenter,
                target_width: set.logo.width(),
                target_height: set.logo.height(),
                intensity,
            };
            let marked = embed_visible(cover, &set.logo, &spec, &factors, &edge).unwrap();
            metrics::psnr(cover, &marked, 8)
                .unwrap()
                .expect("logo fusion always changes some pixel")
        };
        let p3 = psnr_at(3);
        let p10 = psnr_at(10);
        let p20 = psnr_at(20);
        assert!(p10 >= 35.0, "{name}: intensity 10 gives {p10:.2} dB");
        assert!(
            p3 >= p10 && p10 >= p20,
            "{name}: psnr not monotone: {p3:.2} / {p10:.2} / {p20:.2}"
        );
        summary.push_str(&format!(" {name} {p10:.1}dB"));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("PASS visible quality: intensity 10 >= 35 dB, monotone in intensity:{summary} ({elapsed:.2?})");
}

#[test]
fn invisible_round_trip_with_right_and_wrong_keys() {
    let start = Instant::now();
    let set = bench_set();
    let wm = mark_bits();
    let key = WatermarkKey::new(BENCH_KEY).unwrap();
    let alpha = AlphaConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut summary = String::new();

    for (name, cover) in &set.covers {
        let marked = embed_invisible(cover, &wm, &key, &alpha).unwrap();
        let own = extract_watermark(&marked, cover, &wm, &key).unwrap();
        assert!(
            own.match_fraction >= 0.99,
            "{name}: correct key matches only {:.4}",
            own.match_fraction
        );
        assert_eq!(own.verdict, Verdict::Authentic, "{name}");
        summary.push_str(&format!(" {name} {:.4}", own.match_fraction));

        for _ in 0..10 {
            let wrong = WatermarkKey::new(format!("wrong key {:08x}", rng.next_u32())).unwrap();
            let d = extract_watermark(&marked, cover, &wm, &wrong).unwrap();
            assert!(
                (d.match_fraction - 0.5).abs() <= 0.06,
                "{name}: wrong key matched {:.4}",
                d.match_fraction
            );
            assert_eq!(d.verdict, Verdict::NotAuthentic, "{name}");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("PASS invisible round trip: correct key{summary}, 40 wrong keys all near 0.5 ({elapsed:.2?})");
}

#[test]
fn invisible_watermark_survives_attack_suite() {
    let start = Instant::now();
    let set = bench_set();
    let wm = mark_bits();
    let key = WatermarkKey::new(BENCH_KEY).unwrap();
    let alpha = AlphaConfig::default();
    let suite = attacks::default_suite();

    let mut lines = String::new();
    for (name, cover) in &set.covers {
        let marked = embed_invisible(cover, &wm, &key, &alpha).unwrap();
        let rows = attacks::run_attack_matrix(
            &marked,
            cover,
            &wm,
            &key,
            dctmark::invisible::DEFAULT_THRESHOLD,
            &suite,
        )
        .unwrap();
        for row in &rows {
            lines.push_str(&format!(
                "  {name} / {}: match {:.4}, reliable {}, {}\n",
                row.label,
                row.decision.match_fraction,
                row.decision.reliable_count,
                row.decision.verdict
            ));
        }
        for row in &rows {
            assert_eq!(
                row.decision.verdict,
                Verdict::Authentic,
                "{name} did not survive {} (match {:.4})",
                row.label,
                row.decision.match_fraction
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!("PASS attack resilience: all 28 cells authentic ({elapsed:.2?})\n{lines}");
}

#[test]
fn invisible_watermark_is_statistically_stealthy() {
    let start = Instant::now();
    let set = bench_set();
    let wm = mark_bits();
    let key = WatermarkKey::new(BENCH_KEY).unwrap();
    let alpha = AlphaConfig::default();
    let mut summary = String::new();
    for (name, cover) in &set.covers {
        let marked = embed_invisible(cover, &wm, &key, &alpha).unwrap();
        let mean = metrics::mean_signed_diff(cover, &marked).unwrap();
        let psnr = metrics::psnr(cover, &marked, 8)
            .unwrap()
            .expect("embedding changes some pixel");
        assert!(mean.abs() < 0.5, "{name}: mean signed diff {mean:.4}");
        assert!(psnr >= 40.0, "{name}: psnr {psnr:.2} dB");
        summary.push_str(&format!(" {name} mean {mean:+.3} psnr {psnr:.1}dB"));
    }
    let elapsed = start.elapsed();
    println!("PASS invisible stealth:{summary} ({elapsed:.2?})");
}

#[test]
fn quality_metrics_match_reference_values() {
    // Identity compare: zero error, infinite PSNR.
    let img = ImageBuffer::filled(16, 16, 3, 90).unwrap();
    let q = metrics::quality(&img, &img, 8).unwrap();
    assert_eq!(q.mse, 0.0);
    assert_eq!(q.psnr_db, None);
    assert_eq!(q.to_string(), "MSE 0, PSNR inf");

    // One full-scale sample difference in a 2x2 RGB pair: MSE 255^2 / 12.
    let a = ImageBuffer::filled(2, 2, 3, 0).unwrap();
    let mut b = ImageBuffer::filled(2, 2, 3, 0).unwrap();
    b.set_sample(0, 0, 0, 255);
    let q = metrics::quality(&a, &b, 8).unwrap();
    assert_eq!(q.mse, 5418.75);
    assert_eq!(format!("{:.2}", q.psnr_db.unwrap()), "10.79");

    // Uniform off-by-one: MSE exactly 1.
    let c = ImageBuffer::filled(8, 8, 1, 100).unwrap();
    let d = ImageBuffer::filled(8, 8, 1, 101).unwrap();
    let q = metrics::quality(&c, &d, 8).unwrap();
    assert_eq!(q.mse, 1.0);
    assert_eq!(format!("{:.2}", q.psnr_db.unwrap()), "48.13");

    println!("PASS metrics oracle: identity/5418.75/1.0 cases exact to 2 dp");
}

#[test]
fn keystream_involution_and_avalanche() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    // Encrypting twice restores every payload.
    for i in 0..1000 {
        let w = (rng.next_u32() % 64 + 1) as usize;
        let h = (rng.next_u32() % 64 + 1) as usize;
        let bits: Vec<u8> = (0..w * h).map(|_| (rng.next_u32() & 1) as u8).collect();
        let wm = BinaryWatermark::from_bits(w, h, bits).unwrap();
        let key = WatermarkKey::new(format!("payload key {i:04}")).unwrap();
        assert_eq!(encrypt_watermark(&encrypt_watermark(&wm, &key), &key), wm);
    }

    // A one-character key change flips a healthy share of the stream.
    let base = "the quick brown fox jumps";
    let baseline = keystream_bits(&WatermarkKey::new(base).unwrap(), 4096);
    let mut min_flip = 1.0f64;
    for i in 0..10 {
        let pos = (rng.next_u32() as usize) % base.len();
        let mut altered: Vec<char> = base.chars().collect();
        let replacement = (b'A' + (i as u8)) as char;
        assert_ne!(altered[pos], replacement);
        altered[pos] = replacement;
        let altered: String = altered.into_iter().collect();
        let stream = keystream_bits(&WatermarkKey::new(altered).unwrap(), 4096);
        let flips = baseline.iter().zip(&stream).filter(|(a, b)| a != b).count() as f64 / 4096.0;
        assert!(flips >= 0.4, "only {:.1}% flips", flips * 100.0);
        min_flip = min_flip.min(flips);
    }
    let elapsed = start.elapsed();
    println!(
        "PASS keystream: 1000 involutions exact, min avalanche {:.1}% ({elapsed:.2?})",
        min_flip * 100.0
    );
}

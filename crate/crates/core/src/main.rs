//! Command-line front end: embedding, authentication, metrics, attacks, and
//! a benchmark runner, one operation per invocation.
//!
//! Exit codes: 0 success (or authentic), 1 not-authentic, 2 usage or I/O
//! error. Inputs are never modified in place. A plain `key = value` config
//! file can pre-set any tuning flag; explicit flags win.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use dctmark::attacks::{self, AttackSpec, Corner};
use dctmark::error::{Error, Result};
use dctmark::hvs::{EdgeConfig, FactorConfig};
use dctmark::image::ImageBuffer;
use dctmark::invisible::{
    embed_invisible, extract_watermark_with_threshold, AlphaConfig, BinaryWatermark, Verdict,
    WatermarkKey, DEFAULT_THRESHOLD,
};
use dctmark::metrics;
use dctmark::visible::{embed_visible, Anchor, PlacementSpec};

#[derive(Parser)]
#[command(
    name = "dctmark",
    version,
    about = "Block-DCT visible and invisible image watermarking",
    after_help = "Exit codes: 0 success/authentic, 1 not-authentic, 2 usage or I/O error."
)]
struct Cli {
    /// Plain key = value file pre-setting tuning flags (alpha-min, alpha-max,
    /// beta-min, beta-max, alpha-dc, alpha-ac, edge-threshold, edge-fraction,
    /// threshold, intensity, anchor, key). Explicit flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Overlay a translucent watermark image on a cover image.
    EmbedVisible(EmbedVisibleArgs),
    /// Hide an encrypted binary watermark in a cover image.
    EmbedInvisible(EmbedInvisibleArgs),
    /// Check a suspect image for a hidden watermark (needs the original).
    Authenticate(AuthenticateArgs),
    /// Report MSE and PSNR between two images.
    Metrics(MetricsArgs),
    /// Apply a robustness attack to an image.
    Attack(AttackArgs),
    /// Re-authenticate after every attack in a suite and tabulate survival.
    AttackMatrix(AttackMatrixArgs),
    /// Run the full benchmark grid over a set of images.
    Bench(BenchArgs),
}

#[derive(Args)]
struct EmbedVisibleArgs {
    /// Cover image (PNG, JPEG, or BMP).
    #[arg(long)]
    cover: PathBuf,
    /// Watermark image to overlay.
    #[arg(long)]
    watermark: PathBuf,
    /// Placement: top/middle/bottom x left/center/right, e.g. bottom-right.
    #[arg(long)]
    anchor: Option<Anchor>,
    /// Watermark target width (shrunk to fit; defaults to its natural width).
    #[arg(long)]
    width: Option<u32>,
    /// Watermark target height (shrunk to fit; defaults to its natural height).
    #[arg(long)]
    height: Option<u32>,
    /// Overlay strength, 10 (faint) to 100 (strong).
    #[arg(long)]
    intensity: Option<u32>,
    /// Lower bound of the cover-preservation factor.
    #[arg(long)]
    alpha_min: Option<f64>,
    /// Upper bound of the cover-preservation factor.
    #[arg(long)]
    alpha_max: Option<f64>,
    /// Lower bound of the watermark-strength factor.
    #[arg(long)]
    beta_min: Option<f64>,
    /// Upper bound of the watermark-strength factor.
    #[arg(long)]
    beta_max: Option<f64>,
    /// Sobel gradient magnitude above which a pixel counts as an edge.
    #[arg(long)]
    edge_threshold: Option<f64>,
    /// Fraction of edge pixels above which a block is an edge block.
    #[arg(long)]
    edge_fraction: Option<f64>,
    /// Output path (written as PNG).
    #[arg(long)]
    out: PathBuf,
    /// Append a CSV row describing this run.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedInvisibleArgs {
    /// Cover image.
    #[arg(long)]
    cover: PathBuf,
    /// Watermark image, binarized at intensity 128.
    #[arg(long)]
    watermark: PathBuf,
    /// Passphrase (6 to 56 characters) encrypting the watermark.
    #[arg(long)]
    key: Option<String>,
    /// Relative strength applied to the DC coefficient.
    #[arg(long)]
    alpha_dc: Option<f64>,
    /// Relative strength applied to the low AC coefficients.
    #[arg(long)]
    alpha_ac: Option<f64>,
    /// Output path (written as PNG).
    #[arg(long)]
    out: PathBuf,
    /// Append a CSV row describing this run.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct AuthenticateArgs {
    /// Image to check.
    #[arg(long)]
    suspect: PathBuf,
    /// Unwatermarked original of the same dimensions.
    #[arg(long)]
    original: PathBuf,
    /// Watermark image that was embedded, binarized at intensity 128.
    #[arg(long)]
    watermark: PathBuf,
    /// Passphrase used at embedding time.
    #[arg(long)]
    key: Option<String>,
    /// Minimum match fraction for an authentic verdict.
    #[arg(long)]
    threshold: Option<f64>,
    /// Append a CSV row describing this run.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// First image.
    #[arg(long)]
    a: PathBuf,
    /// Second image, same dimensions.
    #[arg(long)]
    b: PathBuf,
    /// Append a CSV row describing this run.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    /// Image to attack.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output path (written as PNG).
    #[arg(long)]
    out: PathBuf,
    /// One of jpeg, gray-quantize, blur, crop, median, jitter, composite.
    #[arg(long)]
    kind: String,
    /// JPEG quality, 1 to 100.
    #[arg(long)]
    quality: Option<u8>,
    /// Gray levels, 16 or 256.
    #[arg(long)]
    levels: Option<u16>,
    /// Blur radius in pixels (Gaussian sigma is radius / 2).
    #[arg(long)]
    radius: Option<f64>,
    /// Fraction of the area a crop blanks out, in (0, 1].
    #[arg(long)]
    fraction: Option<f64>,
    /// Corner the crop removes: top-left, top-right, bottom-left, bottom-right.
    #[arg(long)]
    corner: Option<String>,
    /// Median window size (odd).
    #[arg(long)]
    window: Option<u32>,
    /// Maximum per-axis pixel displacement for jitter.
    #[arg(long)]
    displacement: Option<u32>,
    /// Seed for the jitter generator.
    #[arg(long)]
    seed: Option<u64>,
    /// Steps of a composite attack, e.g. "blur radius=1, jpeg quality=75".
    #[arg(long)]
    steps: Option<String>,
    /// Append a CSV row describing this run.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct AttackMatrixArgs {
    /// Watermarked image to attack.
    #[arg(long)]
    watermarked: PathBuf,
    /// Unwatermarked original.
    #[arg(long)]
    original: PathBuf,
    /// Watermark image that was embedded.
    #[arg(long)]
    watermark: PathBuf,
    /// Passphrase used at embedding time.
    #[arg(long)]
    key: Option<String>,
    /// Minimum match fraction for an authentic verdict.
    #[arg(long)]
    threshold: Option<f64>,
    /// Attack suite file (key = value blocks, blank-line separated);
    /// the stock seven-attack suite when omitted.
    #[arg(long)]
    suite: Option<PathBuf>,
    /// CSV output path.
    #[arg(long, default_value = "attack_matrix.csv")]
    report: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated benchmark image paths.
    #[arg(long, value_delimiter = ',', required = true)]
    images: Vec<PathBuf>,
    /// Logo for visible embedding; also the invisible payload unless --mark is given.
    #[arg(long)]
    logo: PathBuf,
    /// Payload image for invisible embedding, binarized at intensity 128.
    #[arg(long)]
    mark: Option<PathBuf>,
    /// Passphrase for the invisible runs.
    #[arg(long, default_value = "benchmark-pass")]
    key: String,
    /// CSV output path.
    #[arg(long, default_value = "bench_report.csv")]
    report: PathBuf,
}

/// Values from a `key = value` config file. Only tuning knobs are accepted;
/// a typo'd key is an error rather than a silent no-op.
struct FileConfig {
    values: HashMap<String, String>,
}

const CONFIG_KEYS: &[&str] = &[
    "alpha-min",
    "alpha-max",
    "beta-min",
    "beta-max",
    "alpha-dc",
    "alpha-ac",
    "edge-threshold",
    "edge-fraction",
    "threshold",
    "intensity",
    "anchor",
    "key",
];

impl FileConfig {
    fn empty() -> Self {
        Self {
            values: HashMap::new(),
        }
    }

    fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Unreadable {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        let mut values = HashMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("config: expected key = value, got {line:?}"))
            })?;
            let (k, v) = (k.trim(), v.trim());
            if !CONFIG_KEYS.contains(&k) {
                return Err(Error::Parse(format!("config: unknown key {k:?}")));
            }
            values.insert(k.to_string(), v.to_string());
        }
        Ok(Self { values })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Parse(format!("config: invalid value {v:?} for {key}"))),
        }
    }

    /// Flag value if given, else config value, else the default.
    fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    fn factor_config(
        &self,
        alpha_min: Option<f64>,
        alpha_max: Option<f64>,
        beta_min: Option<f64>,
        beta_max: Option<f64>,
    ) -> Result<FactorConfig> {
        let d = FactorConfig::default();
        Ok(FactorConfig {
            alpha_min: self.resolve(alpha_min, "alpha-min", d.alpha_min)?,
            alpha_max: self.resolve(alpha_max, "alpha-max", d.alpha_max)?,
            beta_min: self.resolve(beta_min, "beta-min", d.beta_min)?,
            beta_max: self.resolve(beta_max, "beta-max", d.beta_max)?,
        })
    }

    fn key(&self, flag: Option<String>) -> Result<WatermarkKey> {
        let phrase = match flag {
            Some(k) => k,
            None => self.get::<String>("key")?.ok_or_else(|| {
                Error::InvalidConfig("no --key given (flag or config file)".into())
            })?,
        };
        WatermarkKey::new(phrase)
    }
}

/// Quotes a CSV field if it contains a comma, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

const REPORT_HEADER: &str =
    "operation,input_a,input_b,params,mse,psnr_db,match_fraction,reliable_count,verdict";

/// One uniform report row; fields that do not apply stay empty.
struct ReportRow<'a> {
    operation: &'a str,
    input_a: &'a str,
    input_b: &'a str,
    params: String,
    mse: Option<f64>,
    psnr_db: Option<Option<f64>>,
    match_fraction: Option<f64>,
    reliable_count: Option<usize>,
    verdict: Option<Verdict>,
}

impl ReportRow<'_> {
    fn to_csv(&self) -> String {
        let fields = [
            self.operation.to_string(),
            self.input_a.to_string(),
            self.input_b.to_string(),
            self.params.clone(),
            self.mse.map(|v| format!("{v}")).unwrap_or_default(),
            self.psnr_db.map(format_psnr).unwrap_or_default(),
            self.match_fraction
                .map(|v| format!("{v:.6}"))
                .unwrap_or_default(),
            self.reliable_count
                .map(|v| v.to_string())
                .unwrap_or_default(),
            self.verdict.map(|v| v.to_string()).unwrap_or_default(),
        ];
        fields
            .iter()
            .map(|f| csv_field(f))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn format_psnr(psnr: Option<f64>) -> String {
    match psnr {
        Some(db) => format!("{db:.4}"),
        None => "inf".to_string(),
    }
}

/// Appends a row to the report file, writing the header first if the file is
/// new or empty.
fn append_report(path: &Path, row: &ReportRow) -> Result<()> {
    let need_header = std::fs::metadata(path)
        .map(|m| m.len() == 0)
        .unwrap_or(true);
    let mut text = String::new();
    if need_header {
        text.push_str(REPORT_HEADER);
        text.push('\n');
    }
    text.push_str(&row.to_csv());
    text.push('\n');
    use std::io::Write;
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::Unwritable {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
    file.write_all(text.as_bytes())
        .map_err(|e| Error::Unwritable {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Unwritable {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

fn lossy(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.config.as_deref().map(FileConfig::load).transpose() {
        Ok(c) => c.unwrap_or_else(FileConfig::empty),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command, &cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, cfg: &FileConfig) -> Result<ExitCode> {
    match command {
        Command::EmbedVisible(args) => cmd_embed_visible(args, cfg),
        Command::EmbedInvisible(args) => cmd_embed_invisible(args, cfg),
        Command::Authenticate(args) => cmd_authenticate(args, cfg),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Attack(args) => cmd_attack(args),
        Command::AttackMatrix(args) => cmd_attack_matrix(args, cfg),
        Command::Bench(args) => cmd_bench(args, cfg),
    }
}

fn cmd_embed_visible(args: EmbedVisibleArgs, cfg: &FileConfig) -> Result<ExitCode> {
    let cover = ImageBuffer::load(&args.cover)?;
    let wm = ImageBuffer::load(&args.watermark)?;

    let anchor = match args.anchor {
        Some(a) => a,
        None => match cfg.get::<String>("anchor")? {
            Some(name) => name.parse()?,
            None => Anchor::MiddleCenter,
        },
    };
    let intensity = cfg.resolve(args.intensity, "intensity", 50u32)?;
    if !(10..=100).contains(&intensity) {
        return Err(Error::InvalidConfig(format!(
            "--intensity must lie in 10..=100, got {intensity}"
        )));
    }
    let spec = PlacementSpec {
        anchor,
        target_width: args.width.unwrap_or(wm.width()),
        target_height: args.height.unwrap_or(wm.height()),
        intensity,
    };
    let factors =
        cfg.factor_config(args.alpha_min, args.alpha_max, args.beta_min, args.beta_max)?;
    let edge = EdgeConfig {
        threshold: cfg.resolve(
            args.edge_threshold,
            "edge-threshold",
            EdgeConfig::default().threshold,
        )?,
        min_fraction: cfg.resolve(
            args.edge_fraction,
            "edge-fraction",
            EdgeConfig::default().min_fraction,
        )?,
    };

    let marked = embed_visible(&cover, &wm, &spec, &factors, &edge)?;
    marked.save(&args.out)?;

    let q = metrics::quality(&cover, &marked, 8)?;
    println!(
        "visible watermark embedded: anchor {}, target {}x{}, intensity {}",
        spec.anchor, spec.target_width, spec.target_height, spec.intensity
    );
    println!("{q}");
    println!("wrote {}", lossy(&args.out));

    if let Some(report) = &args.report {
        append_report(
            report,
            &ReportRow {
                operation: "embed-visible",
                input_a: &lossy(&args.cover),
                input_b: &lossy(&args.watermark),
                params: format!(
                    "anchor={} width={} height={} intensity={}",
                    spec.anchor, spec.target_width, spec.target_height, spec.intensity
                ),
                mse: Some(q.mse),
                psnr_db: Some(q.psnr_db),
                match_fraction: None,
                reliable_count: None,
                verdict: None,
            },
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_embed_invisible(args: EmbedInvisibleArgs, cfg: &FileConfig) -> Result<ExitCode> {
    let cover = ImageBuffer::load(&args.cover)?;
    let wm_img = ImageBuffer::load(&args.watermark)?;
    let wm = BinaryWatermark::from_image(&wm_img)?;
    let key = cfg.key(args.key)?;
    let alpha = AlphaConfig {
        alpha_dc: cfg.resolve(args.alpha_dc, "alpha-dc", AlphaConfig::default().alpha_dc)?,
        alpha_ac: cfg.resolve(args.alpha_ac, "alpha-ac", AlphaConfig::default().alpha_ac)?,
    };

    let marked = embed_invisible(&cover, &wm, &key, &alpha)?;
    marked.save(&args.out)?;

    let q = metrics::quality(&cover, &marked, 8)?;
    println!(
        "invisible watermark embedded: {}x{} bits, alpha_dc {}, alpha_ac {}",
        wm.width(),
        wm.height(),
        alpha.alpha_dc,
        alpha.alpha_ac
    );
    println!("{q}");
    println!("wrote {}", lossy(&args.out));

    if let Some(report) = &args.report {
        append_report(
            report,
            &ReportRow {
                operation: "embed-invisible",
                input_a: &lossy(&args.cover),
                input_b: &lossy(&args.watermark),
                params: format!(
                    "bits={}x{} alpha-dc={} alpha-ac={}",
                    wm.width(),
                    wm.height(),
                    alpha.alpha_dc,
                    alpha.alpha_ac
                ),
                mse: Some(q.mse),
                psnr_db: Some(q.psnr_db),
                match_fraction: None,
                reliable_count: None,
                verdict: None,
            },
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_authenticate(args: AuthenticateArgs, cfg: &FileConfig) -> Result<ExitCode> {
    let suspect = ImageBuffer::load(&args.suspect)?;
    let original = ImageBuffer::load(&args.original)?;
    let wm_img = ImageBuffer::load(&args.watermark)?;
    let wm = BinaryWatermark::from_image(&wm_img)?;
    let key = cfg.key(args.key)?;
    let threshold = cfg.resolve(args.threshold, "threshold", DEFAULT_THRESHOLD)?;

    let decision = extract_watermark_with_threshold(&suspect, &original, &wm, &key, threshold)?;
    println!("match_fraction {:.6}", decision.match_fraction);
    println!("reliable_count {}", decision.reliable_count);
    println!("verdict {}", decision.verdict);

    if let Some(report) = &args.report {
        append_report(
            report,
            &ReportRow {
                operation: "authenticate",
                input_a: &lossy(&args.suspect),
                input_b: &lossy(&args.original),
                params: format!("threshold={threshold}"),
                mse: None,
                psnr_db: None,
                match_fraction: Some(decision.match_fraction),
                reliable_count: Some(decision.reliable_count),
                verdict: Some(decision.verdict),
            },
        )?;
    }
    Ok(match decision.verdict {
        Verdict::Authentic => ExitCode::SUCCESS,
        Verdict::NotAuthentic => ExitCode::from(1),
    })
}

fn cmd_metrics(args: MetricsArgs) -> Result<ExitCode> {
    let a = ImageBuffer::load(&args.a)?;
    let b = ImageBuffer::load(&args.b)?;
    let q = metrics::quality(&a, &b, 8)?;
    println!("{q}");

    if let Some(report) = &args.report {
        append_report(
            report,
            &ReportRow {
                operation: "metrics",
                input_a: &lossy(&args.a),
                input_b: &lossy(&args.b),
                params: String::new(),
                mse: Some(q.mse),
                psnr_db: Some(q.psnr_db),
                match_fraction: None,
                reliable_count: None,
                verdict: None,
            },
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn attack_from_args(args: &AttackArgs) -> Result<AttackSpec> {
    let spec = match args.kind.as_str() {
        "jpeg" => AttackSpec::Jpeg {
            quality: args.quality.unwrap_or(75),
        },
        "gray-quantize" => AttackSpec::GrayQuantize {
            levels: args.levels.unwrap_or(16),
        },
        "blur" => AttackSpec::Blur {
            radius: args.radius.unwrap_or(1.0),
        },
        "crop" => AttackSpec::Crop {
            fraction: args.fraction.unwrap_or(0.25),
            corner: args
                .corner
                .as_deref()
                .map(Corner::from_str)
                .transpose()?
                .unwrap_or(Corner::TopLeft),
        },
        "median" => AttackSpec::Median {
            window: args.window.unwrap_or(3),
        },
        "jitter" => AttackSpec::Jitter {
            displacement: args.displacement.unwrap_or(1),
            seed: args.seed.unwrap_or(1),
        },
        "composite" => {
            let steps = args
                .steps
                .as_deref()
                .ok_or_else(|| Error::InvalidConfig("--kind composite needs --steps".into()))?;
            attacks::parse_steps(steps)?
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown attack kind {other:?}; expected jpeg, gray-quantize, \
                 blur, crop, median, jitter, or composite"
            )))
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn cmd_attack(args: AttackArgs) -> Result<ExitCode> {
    let img = ImageBuffer::load(&args.input)?;
    let spec = attack_from_args(&args)?;
    let out = attacks::attack(&img, &spec)?;
    out.save(&args.out)?;

    let q = metrics::quality(&img, &out, 8)?;
    println!("applied {spec}");
    println!("{q}");
    println!("wrote {}", lossy(&args.out));

    if let Some(report) = &args.report {
        append_report(
            report,
            &ReportRow {
                operation: "attack",
                input_a: &lossy(&args.input),
                input_b: "",
                params: spec.to_string(),
                mse: Some(q.mse),
                psnr_db: Some(q.psnr_db),
                match_fraction: None,
                reliable_count: None,
                verdict: None,
            },
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_attack_matrix(args: AttackMatrixArgs, cfg: &FileConfig) -> Result<ExitCode> {
    let watermarked = ImageBuffer::load(&args.watermarked)?;
    let original = ImageBuffer::load(&args.original)?;
    let wm_img = ImageBuffer::load(&args.watermark)?;
    let wm = BinaryWatermark::from_image(&wm_img)?;
    let key = cfg.key(args.key)?;
    let threshold = cfg.resolve(args.threshold, "threshold", DEFAULT_THRESHOLD)?;

    let suite = match &args.suite {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Unreadable {
                path: path.clone(),
                reason: e.to_string(),
            })?;
            attacks::parse_suite(&text)?
        }
        None => attacks::default_suite(),
    };

    let rows = attacks::run_attack_matrix(&watermarked, &original, &wm, &key, threshold, &suite)?;

    let label_w = rows
        .iter()
        .map(|r| r.label.len())
        .chain(["label".len()])
        .max()
        .unwrap();
    let attack_w = rows
        .iter()
        .map(|r| r.attack.len())
        .chain(["attack".len()])
        .max()
        .unwrap();
    println!(
        "{:label_w$}  {:attack_w$}  {:>8}  {:>8}  verdict",
        "label", "attack", "match", "reliable"
    );
    let mut csv = String::from("label,attack,match_fraction,reliable_count,verdict\n");
    for row in &rows {
        println!(
            "{:label_w$}  {:attack_w$}  {:>8.4}  {:>8}  {}",
            row.label,
            row.attack,
            row.decision.match_fraction,
            row.decision.reliable_count,
            row.decision.verdict
        );
        writeln!(
            csv,
            "{},{},{:.6},{},{}",
            csv_field(&row.label),
            csv_field(&row.attack),
            row.decision.match_fraction,
            row.decision.reliable_count,
            row.decision.verdict
        )
        .expect("writing to String cannot fail");
    }
    write_text(&args.report, &csv)?;
    println!("wrote {}", lossy(&args.report));

    let all_authentic = rows
        .iter()
        .all(|r| r.decision.verdict == Verdict::Authentic);
    Ok(if all_authentic {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_bench(args: BenchArgs, cfg: &FileConfig) -> Result<ExitCode> {
    let logo = ImageBuffer::load(&args.logo)?;
    let mark_img = match &args.mark {
        Some(p) => ImageBuffer::load(p)?,
        None => logo.clone(),
    };
    let mark = BinaryWatermark::from_image(&mark_img)?;
    let key = WatermarkKey::new(args.key.clone())?;
    let threshold = cfg.resolve(None, "threshold", DEFAULT_THRESHOLD)?;
    let factors = cfg.factor_config(None, None, None, None)?;
    let alpha = AlphaConfig {
        alpha_dc: cfg.resolve(None, "alpha-dc", AlphaConfig::default().alpha_dc)?,
        alpha_ac: cfg.resolve(None, "alpha-ac", AlphaConfig::default().alpha_ac)?,
    };
    let edge = EdgeConfig::default();

    let mut csv = String::from("image,operation,params,psnr_db,match_fraction,verdict\n");
    let mut emit =
        |image: &str, operation: &str, params: &str, psnr: String, mf: String, verdict: String| {
            println!("{image}: {operation} [{params}] psnr={psnr} match={mf} {verdict}");
            writeln!(
                csv,
                "{},{},{},{},{},{}",
                csv_field(image),
                csv_field(operation),
                csv_field(params),
                psnr,
                mf,
                verdict
            )
            .expect("writing to String cannot fail");
        };

    for path in &args.images {
        let cover = ImageBuffer::load(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| lossy(path));

        // Visible overlays at the three reference strengths.
        for intensity in [3u32, 10, 20] {
            let spec = PlacementSpec {
                anchor: Anchor::MiddleCenter,
                target_width: logo.width(),
                target_height: logo.height(),
                intensity,
            };
            let marked = embed_visible(&cover, &logo, &spec, &factors, &edge)?;
            let psnr = metrics::psnr(&cover, &marked, 8)?;
            emit(
                &name,
                "visible",
                &format!("intensity={intensity} anchor=middle-center"),
                format_psnr(psnr),
                String::new(),
                String::new(),
            );
        }

        // Invisible embedding at defaults plus self-authentication.
        let marked = embed_invisible(&cover, &mark, &key, &alpha)?;
        let psnr = metrics::psnr(&cover, &marked, 8)?;
        let own = extract_watermark_with_threshold(&marked, &cover, &mark, &key, threshold)?;
        emit(
            &name,
            "invisible",
            &format!("alpha-dc={} alpha-ac={}", alpha.alpha_dc, alpha.alpha_ac),
            format_psnr(psnr),
            format!("{:.6}", own.match_fraction),
            own.verdict.to_string(),
        );

        // Robustness: attack the invisibly marked image and re-authenticate.
        for (label, spec) in attacks::default_suite() {
            let attacked = attacks::attack(&marked, &spec)?;
            let psnr = metrics::psnr(&marked, &attacked, 8)?;
            let decision =
                extract_watermark_with_threshold(&attacked, &cover, &mark, &key, threshold)?;
            emit(
                &name,
                "attack",
                &format!("{label}: {spec}"),
                format_psnr(psnr),
                format!("{:.6}", decision.match_fraction),
                decision.verdict.to_string(),
            );
        }
    }

    write_text(&args.report, &csv)?;
    println!("wrote {}", lossy(&args.report));
    Ok(ExitCode::SUCCESS)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fincut_core::export::render_overlay;
use fincut_core::io::save_rgb;
use fincut_core::pipeline::{
    atomic_write, evaluate_corpus, generate_corpus, records_to_csv, run_on_image,
};
use fincut_core::{Error, PipelineConfig, Result};

/// Head-cut planning for flatfish processing lines.
#[derive(Parser)]
#[command(name = "fincut", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect the cut on one image and emit the robot XML.
    Cut(CutArgs),
    /// Generate a labeled synthetic corpus for regression runs.
    GenCorpus(GenCorpusArgs),
    /// Run the pipeline over a labeled corpus and score it.
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
struct CutArgs {
    /// Input image (PNG, PGM, ...), grayscale or color.
    image: PathBuf,
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the XML here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write an inspection overlay image here.
    #[arg(long)]
    overlay: Option<PathBuf>,
    /// Dump intermediate images into this directory.
    #[arg(long)]
    debug_dir: Option<PathBuf>,
    /// Endpoint detector: `hull` or `hough`.
    #[arg(long)]
    method: Option<String>,
    /// Curve family: `ellipse` or `parabola`.
    #[arg(long)]
    curve: Option<String>,
    /// Bow direction: `body` or `nose`.
    #[arg(long)]
    bulge: Option<String>,
    /// Mirror the frame when the specimen faces the wrong way.
    #[arg(long)]
    auto_flip: bool,
}

#[derive(Args)]
struct GenCorpusArgs {
    /// Directory to fill with scenes, masks and landmark sidecars.
    #[arg(long)]
    out: PathBuf,
    /// Number of scenes.
    #[arg(long, default_value_t = 50)]
    count: u64,
    /// Generator seed; same seed, same corpus.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// How many of the last scenes hide the blind-side fold entirely.
    #[arg(long, default_value_t = 0)]
    adversarial: u64,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Corpus directory produced by gen-corpus.
    dir: PathBuf,
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Endpoint detector override: `hull` or `hough`.
    #[arg(long)]
    method: Option<String>,
    /// Landmark distance budget as a fraction of image height.
    #[arg(long, default_value_t = 0.02)]
    tolerance: f64,
    /// Write one CSV row per image here.
    #[arg(long)]
    out_csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.category().exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cut(args) => cut(args),
        Command::GenCorpus(args) => gen_corpus(args),
        Command::Evaluate(args) => evaluate(args),
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<PipelineConfig> {
    match path {
        Some(p) => PipelineConfig::from_file(p),
        None => Ok(PipelineConfig::default()),
    }
}

fn cut(args: CutArgs) -> Result<()> {
    let mut cfg = load_config(args.config.as_ref())?;
    if let Some(v) = &args.method {
        cfg.set("method", v)?;
    }
    if let Some(v) = &args.curve {
        cfg.set("curve", v)?;
    }
    if let Some(v) = &args.bulge {
        cfg.set("bulge", v)?;
    }
    if args.auto_flip {
        cfg.auto_flip = true;
    }

    let run = run_on_image(&args.image, &cfg, args.debug_dir.as_deref())?;

    eprintln!(
        "nose ({}, {}); cut from ({}, {}) to ({}, {}); {} points{}{}",
        run.nose.x,
        run.nose.y,
        run.head_begin.x,
        run.head_begin.y,
        run.head_end.x,
        run.head_end.y,
        run.points_mm.len(),
        if run.eyes_reversed { "; eyes reversed" } else { "" },
        if run.curve.clipped { "; curve clipped by frame" } else { "" },
    );

    if let Some(path) = &args.overlay {
        let overlay = render_overlay(
            &run.working,
            &[run.nose, run.head_begin, run.head_end],
            &run.curve,
        );
        save_rgb(&overlay, path)?;
    }

    match &args.out {
        Some(path) => atomic_write(path, run.xml.as_bytes())?,
        None => print!("{}", run.xml),
    }
    Ok(())
}

fn gen_corpus(args: GenCorpusArgs) -> Result<()> {
    if args.count == 0 {
        return Err(Error::InvalidInput("count must be at least 1".into()));
    }
    if args.adversarial > args.count {
        return Err(Error::InvalidInput(format!(
            "adversarial ({}) cannot exceed count ({})",
            args.adversarial, args.count
        )));
    }
    let stems = generate_corpus(&args.out, args.count, args.seed, args.adversarial)?;
    println!(
        "wrote {} scenes to {} ({} with a hidden fold)",
        stems.len(),
        args.out.display(),
        args.adversarial
    );
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Result<()> {
    let mut cfg = load_config(args.config.as_ref())?;
    if let Some(v) = &args.method {
        cfg.set("method", v)?;
    }
    if !(args.tolerance > 0.0 && args.tolerance < 1.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must lie in (0, 1), got {}",
            args.tolerance
        )));
    }
    let (records, summary) = evaluate_corpus(&args.dir, &cfg, args.tolerance)?;
    if let Some(path) = &args.out_csv {
        atomic_write(path, records_to_csv(&records).as_bytes())?;
    }
    print!("{summary}");
    let all_hit = summary.hits == summary.scored && summary.errors == 0;
    if !all_hit {
        for r in records.iter().filter(|r| {
            r.hit == Some(false) || (r.status == "error" && !r.hidden_notch)
        }) {
            eprintln!(
                "  miss: {} ({})",
                r.stem,
                r.error.as_deref().unwrap_or("landmarks out of tolerance")
            );
        }
    }
    Ok(())
}

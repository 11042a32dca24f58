//! Command-line front end.
//!
//! Exit status: 0 success, 1 usage or I/O error, 2 capacity exceeded,
//! 3 corrupt, tampered or mismatched input.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use revmark::codec::{embed_sequence_with, extract_sequence, EmbedOptions};
use revmark::corpus::{generate, CorpusKind, CorpusSpec, KindName};
use revmark::io::frames::is_raw_path;
use revmark::io::{read_logo, read_sequence, write_logo, write_sequence, FrameSource};
use revmark::metrics::{capacity_distortion_sweep, frame_groups, psnr, write_sweep_csv};
use revmark::sidecar::SidecarFile;
use revmark::{Error, FrameSequence, Threshold};

#[derive(Parser)]
#[command(
    name = "revmark",
    version,
    about = "Reversible watermarking of grayscale frame sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Frames are a directory of PGM files, or a `.raw` file described by
/// `--dims` and `--frames`.
#[derive(Args, Clone)]
struct RawDims {
    /// Frame size of raw input, as WxH
    #[arg(long, value_parser = parse_dims)]
    dims: Option<(usize, usize)>,
    /// Frame count of raw input
    #[arg(long)]
    frames: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Embed a PBM logo into every frame
    Embed {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        logo: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        sidecar: PathBuf,
        #[arg(long, default_value_t = 8, value_parser = parse_threshold)]
        t_max: u8,
        #[command(flatten)]
        raw: RawDims,
    },
    /// Restore the original frames and the logo
    Extract {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sidecar: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        logo_out: PathBuf,
        #[command(flatten)]
        raw: RawDims,
    },
    /// Embed and extract in memory and check both are bit-exact
    Verify {
        #[arg(long)]
        orig: PathBuf,
        #[arg(long)]
        logo: PathBuf,
        #[arg(long, default_value_t = 8, value_parser = parse_threshold)]
        t_max: u8,
        #[command(flatten)]
        raw: RawDims,
    },
    /// PSNR between two sequences
    Metrics {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        raw: RawDims,
    },
    /// Capacity-distortion sweep over logo sizes, written as CSV
    Sweep {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma separated WxH logo sizes
        #[arg(long, value_delimiter = ',', value_parser = parse_dims, required = true)]
        sizes: Vec<(usize, usize)>,
        #[arg(long)]
        csv: PathBuf,
        /// Seed of the generated logos
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8, value_parser = parse_threshold)]
        t_max: u8,
        #[command(flatten)]
        raw: RawDims,
    },
    /// Write a synthetic test sequence
    GenCorpus {
        /// constant, h-ramp, v-ramp, moving-rect or noise
        #[arg(long)]
        kind: KindName,
        #[arg(long, value_parser = parse_dims)]
        dims: (usize, usize),
        #[arg(long)]
        frames: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Level of the constant kind
        #[arg(long, default_value_t = 100)]
        level: u8,
        /// Pixels per frame for moving-rect
        #[arg(long, default_value_t = 1)]
        speed: usize,
        /// Side of the moving-rect square
        #[arg(long, default_value_t = 16)]
        rect_size: usize,
        /// Smallest noise sample
        #[arg(long, default_value_t = 0)]
        low: u8,
        /// Largest noise sample
        #[arg(long, default_value_t = 255)]
        high: u8,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
    let w = w
        .trim()
        .parse()
        .map_err(|_| format!("bad width in {s:?}"))?;
    let h = h
        .trim()
        .parse()
        .map_err(|_| format!("bad height in {s:?}"))?;
    Ok((w, h))
}

fn parse_threshold(s: &str) -> Result<u8, String> {
    let t: u8 = s.parse().map_err(|_| format!("bad threshold {s:?}"))?;
    Threshold::new(t)
        .map(Threshold::get)
        .map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Lib(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_status(failure: &Failure) -> u8 {
    match failure {
        Failure::Usage(_) => 1,
        Failure::Mismatch(_) => 3,
        Failure::Lib(e) if e.is_capacity() => 2,
        Failure::Lib(e) if e.is_corruption() => 3,
        Failure::Lib(
            Error::MalformedPgm(_)
            | Error::MalformedPbm(_)
            | Error::SizeMismatch { .. }
            | Error::MixedDimensions { .. },
        ) => 3,
        Failure::Lib(_) => 1,
    }
}

fn source(
    path: &Path,
    raw: &RawDims,
    fallback: Option<(usize, usize, usize)>,
) -> Result<FrameSource, Failure> {
    if !is_raw_path(path) {
        return Ok(FrameSource::PgmDir(path.to_path_buf()));
    }
    let dims = raw
        .dims
        .zip(raw.frames)
        .map(|((w, h), n)| (w, h, n))
        .or(fallback);
    let (width, height, frames) = dims.ok_or_else(|| {
        Failure::Usage(format!(
            "{} is raw; pass --dims WxH and --frames N",
            path.display()
        ))
    })?;
    Ok(FrameSource::Raw {
        path: path.to_path_buf(),
        width,
        height,
        frames,
    })
}

fn load(path: &Path, raw: &RawDims) -> Result<FrameSequence, Failure> {
    Ok(read_sequence(&source(path, raw, None)?)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Embed {
            input,
            logo,
            out,
            sidecar,
            t_max,
            raw,
        } => {
            let seq = load(&input, &raw)?;
            let logo = read_logo(&logo)?;
            let options = EmbedOptions {
                max_threshold: Threshold::new(t_max)?,
            };
            let emb = embed_sequence_with(&seq, &logo, &options, None)?;
            write_sequence(&emb.watermarked, &out)?;
            emb.sidecar.write(&sidecar)?;
            eprintln!(
                "embedded {} bits per frame into {} frames: bpp={:.6} psnr_db={:.4} max_t={}",
                logo.len(),
                seq.len(),
                emb.report.bpp,
                emb.report.psnr,
                emb.report.max_threshold()
            );
        }
        Command::Extract {
            input,
            sidecar,
            out,
            logo_out,
            raw,
        } => {
            let side = SidecarFile::read(&sidecar)?;
            let fallback = Some((side.width, side.height, side.frame_count()));
            let seq = read_sequence(&source(&input, &raw, fallback)?)?;
            let (restored, logo) = extract_sequence(&seq, &side)?;
            write_sequence(&restored, &out)?;
            write_logo(&logo, &logo_out)?;
            eprintln!(
                "restored {} frames and a {}x{} logo",
                restored.len(),
                logo.width(),
                logo.height()
            );
        }
        Command::Verify {
            orig,
            logo,
            t_max,
            raw,
        } => {
            let seq = load(&orig, &raw)?;
            let logo = read_logo(&logo)?;
            let options = EmbedOptions {
                max_threshold: Threshold::new(t_max)?,
            };
            let emb = embed_sequence_with(&seq, &logo, &options, None)?;
            println!(
                "psnr_db={:.4} bpp={:.6} max_t={}",
                emb.report.psnr,
                emb.report.bpp,
                emb.report.max_threshold()
            );
            let (restored, recovered) = extract_sequence(&emb.watermarked, &emb.sidecar)?;
            let frames_exact = restored == seq;
            let logo_exact = recovered == logo;
            println!("frames_exact={frames_exact} logo_exact={logo_exact}");
            if !(frames_exact && logo_exact) {
                return Err(Failure::Mismatch("round trip is not bit-exact".into()));
            }
        }
        Command::Metrics { a, b, raw } => {
            let a = load(&a, &raw)?;
            let b = load(&b, &raw)?;
            println!("psnr_db={:.4}", psnr(&a, &b)?);
        }
        Command::Sweep {
            input,
            sizes,
            csv,
            seed,
            t_max,
            raw,
        } => {
            let seq = load(&input, &raw)?;
            let options = EmbedOptions {
                max_threshold: Threshold::new(t_max)?,
            };
            let rows = capacity_distortion_sweep(&seq, &sizes, &options, seed);
            let file = File::create(&csv).map_err(|e| Error::Io {
                path: csv.clone(),
                source: e,
            })?;
            write_sweep_csv(&rows, frame_groups(seq.len()).len(), BufWriter::new(file)).map_err(
                |e| Error::Io {
                    path: csv.clone(),
                    source: e,
                },
            )?;
            eprintln!("wrote {} rows to {}", rows.len(), csv.display());
        }
        Command::GenCorpus {
            kind,
            dims: (width, height),
            frames,
            seed,
            level,
            speed,
            rect_size,
            low,
            high,
            out,
        } => {
            let kind = match kind {
                KindName::Constant => CorpusKind::Constant(level),
                KindName::HRamp => CorpusKind::HorizontalRamp,
                KindName::VRamp => CorpusKind::VerticalRamp,
                KindName::MovingRect => CorpusKind::MovingRect {
                    speed,
                    size: rect_size,
                },
                KindName::Noise => CorpusKind::UniformNoise { seed, low, high },
            };
            let seq = generate(&CorpusSpec::new(kind, frames, width, height))
                .map_err(|e| Failure::Usage(e.to_string()))?;
            write_sequence(&seq, &out)?;
            eprintln!("wrote {frames} frames of {kind} to {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) | Failure::Mismatch(msg) => eprintln!("error: {msg}"),
                Failure::Lib(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_status(&failure))
        }
    }
}

//! Capacity and distortion measurement.

use std::fmt;
use std::io::Write;

use crate::codec::{embed_sequence_with, EmbedOptions};
use crate::error::{Error, Result};
use crate::io::logo::generate_logo;
use crate::video::{Frame, FrameSequence};

/// Frames per group in the per-group PSNR breakdown.
pub const GROUP_SIZE: usize = 6;

const PEAK_SQUARED: f64 = 255.0 * 255.0;

/// Peak signal-to-noise ratio in dB; identical inputs give `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum Psnr {
    Finite(f64),
    Infinite,
}

impl Psnr {
    fn from_mse(mse: f64) -> Self {
        if mse == 0.0 {
            Psnr::Infinite
        } else {
            Psnr::Finite(10.0 * (PEAK_SQUARED / mse).log10())
        }
    }

    pub fn db(self) -> f64 {
        match self {
            Psnr::Finite(v) => v,
            Psnr::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Psnr::Infinite)
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(v) => match f.precision() {
                Some(p) => write!(f, "{v:.p$}"),
                None => write!(f, "{v}"),
            },
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

/// Payload bits per pixel of one frame.
pub fn bpp(bits: usize, width: usize, height: usize) -> f64 {
    bits as f64 / (width * height) as f64
}

/// Lower bound on PSNR when no sample moves by more than `max_change`.
pub fn psnr_floor(max_change: u8) -> f64 {
    10.0 * (PEAK_SQUARED / f64::from(max_change).powi(2)).log10()
}

fn squared_error(a: &Frame, b: &Frame) -> u64 {
    a.samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = u64::from(x.abs_diff(y));
            d * d
        })
        .sum()
}

fn check_same_shape(a: &FrameSequence, b: &FrameSequence) -> Result<()> {
    if a.len() != b.len() || a.width() != b.width() || a.height() != b.height() {
        return Err(Error::DimensionMismatch(format!(
            "{} frames of {}x{} vs {} frames of {}x{}",
            a.len(),
            a.width(),
            a.height(),
            b.len(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

fn psnr_range(a: &FrameSequence, b: &FrameSequence, range: std::ops::Range<usize>) -> Psnr {
    let mut sse = 0u64;
    let mut count = 0usize;
    for k in range {
        sse += squared_error(a.frame(k), b.frame(k));
        count += a.frame(k).samples().len();
    }
    Psnr::from_mse(sse as f64 / count as f64)
}

/// PSNR with the mean squared error taken over every sample of every frame.
pub fn psnr(original: &FrameSequence, watermarked: &FrameSequence) -> Result<Psnr> {
    check_same_shape(original, watermarked)?;
    Ok(psnr_range(original, watermarked, 0..original.len()))
}

/// Consecutive groups of [`GROUP_SIZE`] frames; a trailing partial group is
/// merged into the last full one.
pub fn frame_groups(frames: usize) -> Vec<std::ops::Range<usize>> {
    let groups = (frames / GROUP_SIZE).max(1);
    (0..groups)
        .map(|g| {
            let start = g * GROUP_SIZE;
            let end = if g + 1 == groups {
                frames
            } else {
                start + GROUP_SIZE
            };
            start..end
        })
        .collect()
}

pub fn group_psnrs(original: &FrameSequence, watermarked: &FrameSequence) -> Result<Vec<Psnr>> {
    check_same_shape(original, watermarked)?;
    Ok(frame_groups(original.len())
        .into_iter()
        .map(|r| psnr_range(original, watermarked, r))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub enum SweepStatus {
    Ok,
    Failed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub logo_width: usize,
    pub logo_height: usize,
    pub bits: usize,
    pub bpp: f64,
    pub psnr: Option<Psnr>,
    pub group_psnrs: Vec<Psnr>,
    pub status: SweepStatus,
}

/// Embeds a generated logo of every requested size into a fresh copy of
/// `seq`. Sizes that do not fit become failed rows.
pub fn capacity_distortion_sweep(
    seq: &FrameSequence,
    sizes: &[(usize, usize)],
    options: &EmbedOptions,
    seed: u64,
) -> Vec<SweepRow> {
    sizes
        .iter()
        .map(|&(w, h)| {
            let bits = w * h;
            let mut row = SweepRow {
                logo_width: w,
                logo_height: h,
                bits,
                bpp: bpp(bits, seq.width(), seq.height()),
                psnr: None,
                group_psnrs: Vec::new(),
                status: SweepStatus::Ok,
            };
            let outcome = generate_logo(w, h, seed)
                .and_then(|logo| embed_sequence_with(seq, &logo, options, None))
                .and_then(|emb| Ok((emb.report.psnr, group_psnrs(seq, &emb.watermarked)?)));
            match outcome {
                Ok((psnr, groups)) => {
                    row.psnr = Some(psnr);
                    row.group_psnrs = groups;
                }
                Err(e) => row.status = SweepStatus::Failed(e.to_string()),
            }
            row
        })
        .collect()
}

/// Writes sweep rows as CSV:
/// `logo_w,logo_h,bits,bpp,psnr_db,group_1,...,group_n,status`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], groups: usize, out: W) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let to_io = std::io::Error::from;
    let mut header: Vec<String> = ["logo_w", "logo_h", "bits", "bpp", "psnr_db"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((1..=groups).map(|g| format!("group_{g}")));
    header.push("status".into());
    writer.write_record(&header).map_err(to_io)?;

    for row in rows {
        let mut record = vec![
            row.logo_width.to_string(),
            row.logo_height.to_string(),
            row.bits.to_string(),
            format!("{:.6}", row.bpp),
            row.psnr.map(|p| format!("{p:.4}")).unwrap_or_default(),
        ];
        for g in 0..groups {
            record.push(
                row.group_psnrs
                    .get(g)
                    .map(|p| format!("{p:.4}"))
                    .unwrap_or_default(),
            );
        }
        record.push(match &row.status {
            SweepStatus::Ok => "ok".into(),
            SweepStatus::Failed(msg) => format!("failed: {msg}"),
        });
        writer.write_record(&record).map_err(to_io)?;
    }
    writer.flush()
}

//! Frame and sequence level embedding and extraction.
//!
//! Every frame carries the complete logo. Within a frame the Dot pixels are
//! visited in raster order, then the Cross pixels. Each pixel is predicted
//! from the current (partly watermarked) state and passed through
//! [`embed_pixel`]. Pixels whose new value is ambiguous generate a flag bit
//! that goes onto a stack; expandable pixels carry the top of that stack if
//! any, otherwise the next payload bit. The frame is finished as soon as the
//! payload is used up and the stack is empty; that pixel is recorded in the
//! sidecar.
//!
//! Frames are embedded in increasing order and extracted in decreasing
//! order, so every frame sees exactly the same partner frames on both sides.
//! Extraction walks the pixels of a frame in reverse; an ambiguous pixel's
//! flag is then always the most recent extracted bit not yet claimed.

use crate::error::{Error, Result};
use crate::metrics::{self, Psnr};
use crate::pee::{
    classify_extract, embed_pixel, is_ambiguous, recover_pixel, OutcomeKind, PixelClass, Threshold,
};
use crate::predictor::adaptive_predict;
use crate::sidecar::{SidecarFile, SidecarRecord, MAX_COL, MAX_ROW};
use crate::video::{
    context_frames, traversal_order, FrameSequence, ParitySet, PixelCoord, WatermarkLogo, BORDER,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbedOptions {
    /// Highest threshold tried before a frame is declared full.
    pub max_threshold: Threshold,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            max_threshold: Threshold::MAX,
        }
    }
}

/// What happened at one pixel, as seen by either side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceOutcome {
    Embedded(bool),
    Shifted,
    Unchanged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TraceEntry {
    pub coord: PixelCoord,
    pub prediction: u8,
    pub outcome: TraceOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameReport {
    pub frame: usize,
    pub record: SidecarRecord,
    pub payload_bits: usize,
    pub flag_bits: usize,
    pub embedded: usize,
    pub shifted: usize,
    pub skipped: usize,
}

impl FrameReport {
    pub fn threshold(&self) -> Threshold {
        self.record.threshold
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbedReport {
    pub frames: Vec<FrameReport>,
    pub bpp: f64,
    pub psnr: Psnr,
}

impl EmbedReport {
    pub fn max_threshold(&self) -> Threshold {
        self.frames
            .iter()
            .map(FrameReport::threshold)
            .max()
            .unwrap_or(Threshold::MIN)
    }
}

#[derive(Clone, Debug)]
pub struct Embedding {
    pub watermarked: FrameSequence,
    pub sidecar: SidecarFile,
    pub report: EmbedReport,
}

#[derive(Default)]
struct PassCounters {
    flag_bits: usize,
    embedded: usize,
    shifted: usize,
    skipped: usize,
    /// Largest payload prefix after which the flag stack was empty.
    clean_prefix: usize,
}

struct PassResult {
    last: Option<(usize, usize, ParitySet)>,
    counters: PassCounters,
}

fn check_embeddable(seq: &FrameSequence) -> Result<()> {
    context_frames(0, seq.len())?;
    let (w, h) = (seq.width(), seq.height());
    if h > MAX_ROW + BORDER + 1 || w > MAX_COL + BORDER + 1 {
        return Err(Error::FrameTooLarge {
            width: w,
            height: h,
        });
    }
    Ok(())
}

/// Runs one embedding pass over frame `k`, stopping once `payload` and the
/// flag stack are both exhausted.
fn embed_pass(
    seq: &mut FrameSequence,
    k: usize,
    payload: &[bool],
    t: Threshold,
    mut trace: Option<&mut Vec<TraceEntry>>,
) -> PassResult {
    let (w, h) = (seq.width(), seq.height());
    let mut flags: Vec<bool> = Vec::new();
    let mut next = 0usize;
    let mut counters = PassCounters::default();

    for set in ParitySet::ORDER {
        for (row, col) in traversal_order(w, h, set) {
            let coord = PixelCoord::new(k, row, col);
            let x = seq.sample(coord);
            let prediction = adaptive_predict(seq, coord);
            let pending = flags.last().copied().or_else(|| payload.get(next).copied());
            let outcome = embed_pixel(x, prediction, t, pending);

            let traced = match outcome.kind {
                OutcomeKind::Embedded(b) => {
                    if flags.pop().is_none() {
                        next += 1;
                    }
                    counters.embedded += 1;
                    TraceOutcome::Embedded(b)
                }
                OutcomeKind::Shifted => {
                    counters.shifted += 1;
                    TraceOutcome::Shifted
                }
                OutcomeKind::Skipped => {
                    counters.skipped += 1;
                    TraceOutcome::Unchanged
                }
            };
            seq.frame_mut(k).set(row, col, outcome.new_value);
            if let Some(flag) = outcome.flag {
                flags.push(flag);
                counters.flag_bits += 1;
            }
            if let Some(trace) = trace.as_deref_mut() {
                trace.push(TraceEntry {
                    coord,
                    prediction,
                    outcome: traced,
                });
            }
            if flags.is_empty() {
                counters.clean_prefix = next;
                if next == payload.len() {
                    return PassResult {
                        last: Some((row, col, set)),
                        counters,
                    };
                }
            }
        }
    }
    PassResult {
        last: None,
        counters,
    }
}

/// Embeds `payload` into frame `k` in place at threshold `t`.
///
/// On [`Error::FrameCapacityExceeded`] the frame is left partly modified;
/// callers that retry must restore it first.
pub fn embed_frame(
    seq: &mut FrameSequence,
    k: usize,
    payload: &[bool],
    t: Threshold,
    trace: Option<&mut Vec<TraceEntry>>,
) -> Result<FrameReport> {
    if payload.is_empty() {
        return Err(Error::EmptyLogo);
    }
    check_embeddable(seq)?;
    let pass = embed_pass(seq, k, payload, t, trace);
    let (row, col, set) = pass.last.ok_or(Error::FrameCapacityExceeded {
        frame: k,
        threshold: t.get(),
    })?;
    let c = pass.counters;
    Ok(FrameReport {
        frame: k,
        record: SidecarRecord::new(row, col, t, set)?,
        payload_bits: payload.len(),
        flag_bits: c.flag_bits,
        embedded: c.embedded,
        shifted: c.shifted,
        skipped: c.skipped,
    })
}

pub fn embed_sequence(seq: &FrameSequence, logo: &WatermarkLogo) -> Result<Embedding> {
    embed_sequence_with(seq, logo, &EmbedOptions::default(), None)
}

/// Embeds `logo` into every frame, raising each frame's threshold from 1
/// until it fits. Successful per-pixel decisions are appended to `trace` in
/// processing order.
pub fn embed_sequence_with(
    seq: &FrameSequence,
    logo: &WatermarkLogo,
    options: &EmbedOptions,
    mut trace: Option<&mut Vec<TraceEntry>>,
) -> Result<Embedding> {
    if logo.is_empty() {
        return Err(Error::EmptyLogo);
    }
    check_embeddable(seq)?;
    let payload = logo.bits();
    let mut work = seq.clone();
    let mut reports = Vec::with_capacity(seq.len());
    let mut attempt_trace = Vec::new();

    for k in 0..seq.len() {
        let mut done = None;
        for t in options.max_threshold.ascending_to() {
            attempt_trace.clear();
            let sink = trace.is_some().then_some(&mut attempt_trace);
            match embed_frame(&mut work, k, payload, t, sink) {
                Ok(report) => {
                    done = Some(report);
                    break;
                }
                Err(Error::FrameCapacityExceeded { .. }) => {
                    work.frame_mut(k)
                        .samples_mut()
                        .copy_from_slice(seq.frame(k).samples());
                }
                Err(e) => return Err(e),
            }
        }
        let report = done.ok_or(Error::CapacityExceeded {
            frame: k,
            max_threshold: options.max_threshold.get(),
        })?;
        if let Some(trace) = trace.as_deref_mut() {
            trace.append(&mut attempt_trace);
        }
        reports.push(report);
    }

    let sidecar = SidecarFile {
        width: seq.width(),
        height: seq.height(),
        logo_width: logo.width(),
        logo_height: logo.height(),
        records: reports.iter().map(|r| r.record).collect(),
    };
    let report = EmbedReport {
        bpp: metrics::bpp(payload.len(), seq.width(), seq.height()),
        psnr: metrics::psnr(seq, &work)?,
        frames: reports,
    };
    Ok(Embedding {
        watermarked: work,
        sidecar,
        report,
    })
}

/// Embedding order of frame `k` up to and including the recorded pixel.
fn processed_pixels(
    width: usize,
    height: usize,
    k: usize,
    record: &SidecarRecord,
) -> Result<Vec<(usize, usize)>> {
    let out_of_bounds = || Error::RecordOutOfBounds {
        frame: k,
        row: record.row,
        col: record.col,
    };
    let mut order = traversal_order(width, height, ParitySet::Dot);
    let last_set = traversal_order(width, height, record.set);
    let pos = last_set
        .binary_search(&(record.row, record.col))
        .map_err(|_| out_of_bounds())?;
    match record.set {
        ParitySet::Dot => order.truncate(pos + 1),
        ParitySet::Cross => order.extend_from_slice(&last_set[..=pos]),
    }
    Ok(order)
}

/// Restores frame `k` in place and returns the `payload_len` bits it carried.
pub fn extract_frame(
    seq: &mut FrameSequence,
    k: usize,
    record: &SidecarRecord,
    payload_len: usize,
    mut trace: Option<&mut Vec<TraceEntry>>,
) -> Result<Vec<bool>> {
    context_frames(k, seq.len())?;
    let t = record.threshold;
    let pixels = processed_pixels(seq.width(), seq.height(), k, record)?;
    let mut bits: Vec<bool> = Vec::with_capacity(payload_len + 16);

    for &(row, col) in pixels.iter().rev() {
        let coord = PixelCoord::new(k, row, col);
        let marked = seq.sample(coord);
        let prediction = adaptive_predict(seq, coord);
        let flag = if is_ambiguous(marked, t) {
            Some(bits.pop().ok_or(Error::MissingFlag(coord))?)
        } else {
            None
        };
        let class = classify_extract(marked, prediction, t, flag)?;
        let (original, bit) = recover_pixel(marked, prediction, t, class)?;
        seq.frame_mut(k).set(row, col, original);
        if let Some(b) = bit {
            bits.push(b);
        }
        if let Some(trace) = trace.as_deref_mut() {
            trace.push(TraceEntry {
                coord,
                prediction,
                outcome: match class {
                    PixelClass::Embedded => TraceOutcome::Embedded(bit.unwrap_or_default()),
                    PixelClass::Shifted => TraceOutcome::Shifted,
                    PixelClass::Unchanged => TraceOutcome::Unchanged,
                },
            });
        }
    }

    if bits.len() != payload_len {
        return Err(Error::CorruptStream(format!(
            "frame {k} yielded {} payload bits, expected {payload_len}",
            bits.len()
        )));
    }
    bits.reverse();
    Ok(bits)
}

pub fn extract_sequence(
    watermarked: &FrameSequence,
    sidecar: &SidecarFile,
) -> Result<(FrameSequence, WatermarkLogo)> {
    extract_sequence_with(watermarked, sidecar, None)
}

/// Restores the sequence frame by frame from the last to the first, checking
/// that every frame carried the same logo.
pub fn extract_sequence_with(
    watermarked: &FrameSequence,
    sidecar: &SidecarFile,
    mut trace: Option<&mut Vec<TraceEntry>>,
) -> Result<(FrameSequence, WatermarkLogo)> {
    let n = watermarked.len();
    if sidecar.frame_count() != n
        || sidecar.width != watermarked.width()
        || sidecar.height != watermarked.height()
    {
        return Err(Error::HeaderMismatch(format!(
            "sidecar describes {} frames of {}x{}, video has {n} frames of {}x{}",
            sidecar.frame_count(),
            sidecar.width,
            sidecar.height,
            watermarked.width(),
            watermarked.height()
        )));
    }
    let payload_len = sidecar.logo_width * sidecar.logo_height;
    if payload_len == 0 {
        return Err(Error::HeaderMismatch(
            "sidecar declares an empty logo".into(),
        ));
    }
    context_frames(0, n)?;

    let mut work = watermarked.clone();
    let mut reference: Option<(usize, Vec<bool>)> = None;
    for k in (0..n).rev() {
        let bits = extract_frame(
            &mut work,
            k,
            &sidecar.records[k],
            payload_len,
            trace.as_deref_mut(),
        )?;
        match &reference {
            None => reference = Some((k, bits)),
            Some((first, expected)) => {
                if *expected != bits {
                    return Err(Error::PayloadDisagreement {
                        frame: k,
                        reference: *first,
                    });
                }
            }
        }
    }
    let (_, bits) = reference.expect("at least three frames were extracted");
    let logo = WatermarkLogo::new(sidecar.logo_width, sidecar.logo_height, bits)?;
    Ok((work, logo))
}

/// Payload capacity found by [`probe_capacity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityProbe {
    pub threshold: Threshold,
    pub per_frame: Vec<usize>,
}

impl CapacityProbe {
    /// Largest payload every frame accepted.
    pub fn min_bits(&self) -> usize {
        self.per_frame.iter().copied().min().unwrap_or(0)
    }
}

/// Estimates how many payload bits each frame can take at a fixed threshold.
///
/// Each frame, in embedding order, is filled with a pseudo-random bit stream
/// over its whole interior; its capacity is the longest prefix after which no
/// flag was pending. Since the whole interior is modified, later frames that
/// read watermarked predecessors see a slightly pessimistic state.
pub fn probe_capacity(seq: &FrameSequence, t: Threshold, seed: u64) -> Result<CapacityProbe> {
    check_embeddable(seq)?;
    let interior = traversal_order(seq.width(), seq.height(), ParitySet::Dot).len()
        + traversal_order(seq.width(), seq.height(), ParitySet::Cross).len();
    let mut rng = crate::io::corpus::Lcg64::new(seed);
    let stream: Vec<bool> = (0..=interior).map(|_| rng.next_bit()).collect();
    let mut work = seq.clone();
    let per_frame = (0..seq.len())
        .map(|k| {
            embed_pass(&mut work, k, &stream, t, None)
                .counters
                .clean_prefix
        })
        .collect();
    Ok(CapacityProbe {
        threshold: t,
        per_frame,
    })
}

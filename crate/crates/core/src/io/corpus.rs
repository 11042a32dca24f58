//! Deterministic synthetic frame sequences.
//!
//! The kinds cover static content (constant level, horizontal and vertical
//! ramps), rigid motion at a chosen speed, and uniform noise with no
//! temporal correlation at all.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::video::{Frame, FrameSequence};

pub const RECT_BACKGROUND: u8 = 64;
pub const RECT_FOREGROUND: u8 = 192;

/// 64-bit linear congruential generator,
/// `state = state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`.
///
/// Each draw advances the state once and returns its top byte, so any
/// implementation of these constants reproduces the same streams.
#[derive(Clone, Debug)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
    pub const INCREMENT: u64 = 1_442_695_040_888_963_407;

    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    pub fn next_byte(&mut self) -> u8 {
        (self.next_u64() >> 56) as u8
    }

    pub fn next_bit(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// Uniform in `0..bound` by the multiply-shift method on the top 32 bits.
    pub fn next_below(&mut self, bound: usize) -> usize {
        (((self.next_u64() >> 32) * bound as u64) >> 32) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusKind {
    Constant(u8),
    HorizontalRamp,
    VerticalRamp,
    /// A bright square moving `speed` pixels right per frame over a dark
    /// background, wrapping around.
    MovingRect {
        speed: usize,
        size: usize,
    },
    /// Independent samples uniform on `low..=high`.
    UniformNoise {
        seed: u64,
        low: u8,
        high: u8,
    },
}

impl CorpusKind {
    /// Full-range uniform noise.
    pub fn noise(seed: u64) -> Self {
        CorpusKind::UniformNoise {
            seed,
            low: 0,
            high: 255,
        }
    }
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusKind::Constant(level) => write!(f, "constant({level})"),
            CorpusKind::HorizontalRamp => f.write_str("h-ramp"),
            CorpusKind::VerticalRamp => f.write_str("v-ramp"),
            CorpusKind::MovingRect { speed, size } => {
                write!(f, "moving-rect(speed={speed}, size={size})")
            }
            CorpusKind::UniformNoise { seed, low, high } => {
                write!(f, "noise(seed={seed}, {low}..={high})")
            }
        }
    }
}

/// Kind names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindName {
    Constant,
    HRamp,
    VRamp,
    MovingRect,
    Noise,
}

impl FromStr for KindName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "constant" => KindName::Constant,
            "h-ramp" => KindName::HRamp,
            "v-ramp" => KindName::VRamp,
            "moving-rect" => KindName::MovingRect,
            "noise" | "uniform-noise" => KindName::Noise,
            other => return Err(Error::InvalidSpec(format!("unknown corpus kind {other:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub frames: usize,
    pub width: usize,
    pub height: usize,
}

impl CorpusSpec {
    pub fn new(kind: CorpusKind, frames: usize, width: usize, height: usize) -> Self {
        CorpusSpec {
            kind,
            frames,
            width,
            height,
        }
    }
}

pub fn generate(spec: &CorpusSpec) -> Result<FrameSequence> {
    let CorpusSpec {
        kind,
        frames,
        width: w,
        height: h,
    } = *spec;
    if frames == 0 || w == 0 || h == 0 {
        return Err(Error::InvalidSpec(format!(
            "need at least one frame of at least 1x1, got {frames} of {w}x{h}"
        )));
    }
    let mut out = Vec::with_capacity(frames);
    match kind {
        CorpusKind::Constant(level) => {
            for _ in 0..frames {
                out.push(Frame::filled(w, h, level)?);
            }
        }
        CorpusKind::HorizontalRamp => {
            let samples: Vec<u8> = (0..w * h).map(|p| (p % w).min(255) as u8).collect();
            for _ in 0..frames {
                out.push(Frame::new(w, h, samples.clone())?);
            }
        }
        CorpusKind::VerticalRamp => {
            let samples: Vec<u8> = (0..w * h).map(|p| (p / w).min(255) as u8).collect();
            for _ in 0..frames {
                out.push(Frame::new(w, h, samples.clone())?);
            }
        }
        CorpusKind::MovingRect { speed, size } => {
            if size == 0 || size > w || size > h {
                return Err(Error::InvalidSpec(format!(
                    "{size}x{size} rectangle does not fit a {w}x{h} frame"
                )));
            }
            let span = w - size + 1;
            let top = (h - size) / 2;
            for k in 0..frames {
                let left = (k * speed) % span;
                let mut frame = Frame::filled(w, h, RECT_BACKGROUND)?;
                for row in top..top + size {
                    for col in left..left + size {
                        frame.set(row, col, RECT_FOREGROUND);
                    }
                }
                out.push(frame);
            }
        }
        CorpusKind::UniformNoise { seed, low, high } => {
            if low > high {
                return Err(Error::InvalidSpec(format!(
                    "noise range {low}..={high} is empty"
                )));
            }
            let span = usize::from(high - low) + 1;
            let mut rng = Lcg64::new(seed);
            for _ in 0..frames {
                let samples = (0..w * h)
                    .map(|_| low + rng.next_below(span) as u8)
                    .collect();
                out.push(Frame::new(w, h, samples)?);
            }
        }
    }
    FrameSequence::new(out)
}

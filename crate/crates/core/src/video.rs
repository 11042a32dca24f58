//! Raster types, checkerboard traversal and the temporal frame mapping.

use std::fmt;

use crate::error::{Error, Result};

/// Width of the border that never carries payload. Predictions for the
/// training rows reach two pixels away from the centre.
pub const BORDER: usize = 2;

/// One 8-bit luma raster, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl Frame {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions(format!(
                "frame must be at least 1x1, got {width}x{height}"
            )));
        }
        if samples.len() != width * height {
            return Err(Error::InvalidDimensions(format!(
                "{width}x{height} frame needs {} samples, got {}",
                width * height,
                samples.len()
            )));
        }
        Ok(Frame {
            width,
            height,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Frame::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        debug_assert!(row < self.height && col < self.width);
        self.samples[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        debug_assert!(row < self.height && col < self.width);
        self.samples[row * self.width + col] = value;
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

/// An ordered, non-empty list of equally sized frames.
///
/// Embedding additionally requires at least three frames; that is checked
/// where temporal context is needed so that single frames can still be
/// compared by the metrics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameSequence {
    frames: Vec<Frame>,
}

impl FrameSequence {
    pub fn new(frames: Vec<Frame>) -> Result<Self> {
        let first = frames.first().ok_or(Error::EmptySequence)?;
        let (w, h) = (first.width, first.height);
        for (index, frame) in frames.iter().enumerate() {
            if frame.width != w || frame.height != h {
                return Err(Error::MixedDimensions {
                    index,
                    expected_w: w,
                    expected_h: h,
                    found_w: frame.width,
                    found_h: frame.height,
                });
            }
        }
        Ok(FrameSequence { frames })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn width(&self) -> usize {
        self.frames[0].width
    }

    pub fn height(&self) -> usize {
        self.frames[0].height
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn frame(&self, k: usize) -> &Frame {
        &self.frames[k]
    }

    pub fn frame_mut(&mut self, k: usize) -> &mut Frame {
        &mut self.frames[k]
    }

    #[inline]
    pub fn sample(&self, coord: PixelCoord) -> u8 {
        self.frames[coord.frame].get(coord.row, coord.col)
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }
}

/// Binary payload bitmap, row-major, top-left first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WatermarkLogo {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl WatermarkLogo {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyLogo);
        }
        if bits.len() != width * height {
            return Err(Error::InvalidDimensions(format!(
                "{width}x{height} logo needs {} bits, got {}",
                width * height,
                bits.len()
            )));
        }
        Ok(WatermarkLogo {
            width,
            height,
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PixelCoord {
    pub frame: usize,
    pub row: usize,
    pub col: usize,
}

impl PixelCoord {
    pub fn new(frame: usize, row: usize, col: usize) -> Self {
        PixelCoord { frame, row, col }
    }
}

impl fmt::Display for PixelCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "frame {} ({}, {})", self.frame, self.row, self.col)
    }
}

/// Checkerboard class of a pixel. `Dot` pixels have even `row + col`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParitySet {
    Dot,
    Cross,
}

impl ParitySet {
    /// Embedding visits Dot first, then Cross.
    pub const ORDER: [ParitySet; 2] = [ParitySet::Dot, ParitySet::Cross];

    pub fn of(row: usize, col: usize) -> Self {
        if (row + col).is_multiple_of(2) {
            ParitySet::Dot
        } else {
            ParitySet::Cross
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            ParitySet::Dot => 0,
            ParitySet::Cross => 1,
        }
    }

    pub fn from_bit(bit: u32) -> Self {
        if bit & 1 == 0 {
            ParitySet::Dot
        } else {
            ParitySet::Cross
        }
    }
}

/// True when `(row, col)` lies inside the two-pixel inset of a frame.
pub fn is_interior(width: usize, height: usize, row: usize, col: usize) -> bool {
    row >= BORDER && col >= BORDER && row + BORDER < height && col + BORDER < width
}

/// Interior pixels of one parity class, in raster order.
pub fn traversal_order(width: usize, height: usize, set: ParitySet) -> Vec<(usize, usize)> {
    if width <= 2 * BORDER || height <= 2 * BORDER {
        return Vec::new();
    }
    let mut out = Vec::with_capacity((width - 2 * BORDER) * (height - 2 * BORDER) / 2 + 1);
    for row in BORDER..height - BORDER {
        for col in BORDER..width - BORDER {
            if ParitySet::of(row, col) == set {
                out.push((row, col));
            }
        }
    }
    out
}

/// Partner frames `(primary, secondary)` supplying temporal context for
/// frame `k` of an `n`-frame sequence.
///
/// Frames read successors while two remain; the last two read their
/// predecessors. With exactly three frames the middle one has only one
/// predecessor, so it pairs that with its successor.
pub fn context_frames(k: usize, n: usize) -> Result<(usize, usize)> {
    if n < 3 {
        return Err(Error::SequenceTooShort { frames: n });
    }
    assert!(k < n, "frame index {k} out of range for {n} frames");
    Ok(if k + 3 <= n {
        (k + 1, k + 2)
    } else if k >= 2 {
        (k - 1, k - 2)
    } else {
        // n == 3, k == 1
        (0, 2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn traversal_8x8_dot() {
        assert_eq!(
            traversal_order(8, 8, ParitySet::Dot),
            vec![
                (2, 2),
                (2, 4),
                (3, 3),
                (3, 5),
                (4, 2),
                (4, 4),
                (5, 3),
                (5, 5)
            ]
        );
    }

    #[test]
    fn traversal_empty_interior() {
        assert!(traversal_order(4, 4, ParitySet::Dot).is_empty());
        assert!(traversal_order(4, 100, ParitySet::Cross).is_empty());
        assert_eq!(traversal_order(5, 100, ParitySet::Cross).len(), 48);
        assert!(traversal_order(1, 1, ParitySet::Dot).is_empty());
    }

    #[test]
    fn traversal_sets_partition_interior() {
        for (w, h) in [(8, 8), (9, 7), (5, 5), (13, 6)] {
            let dot = traversal_order(w, h, ParitySet::Dot);
            let cross = traversal_order(w, h, ParitySet::Cross);
            let mut all: Vec<_> = dot.iter().chain(cross.iter()).copied().collect();
            all.sort();
            let mut interior = Vec::new();
            for i in 0..h {
                for j in 0..w {
                    if is_interior(w, h, i, j) {
                        interior.push((i, j));
                    }
                }
            }
            assert_eq!(all, interior, "{w}x{h}");
            assert!(dot.windows(2).all(|p| p[0] < p[1]));
            assert!(cross.windows(2).all(|p| p[0] < p[1]));
        }
        let both = traversal_order(8, 8, ParitySet::Dot).len()
            + traversal_order(8, 8, ParitySet::Cross).len();
        assert_eq!(both, 16);
    }

    #[test]
    fn context_frame_rule() {
        assert_eq!(context_frames(0, 18).unwrap(), (1, 2));
        assert_eq!(context_frames(15, 18).unwrap(), (16, 17));
        assert_eq!(context_frames(16, 18).unwrap(), (15, 14));
        assert_eq!(context_frames(17, 18).unwrap(), (16, 15));
        assert_eq!(context_frames(1, 3).unwrap(), (0, 2));
        assert_eq!(context_frames(2, 3).unwrap(), (1, 0));
        assert!(matches!(
            context_frames(0, 2),
            Err(Error::SequenceTooShort { frames: 2 })
        ));
    }

    #[test]
    fn context_frames_stay_in_range() {
        for n in 3..40 {
            for k in 0..n {
                let (a, b) = context_frames(k, n).unwrap();
                assert!(a < n && b < n && a != k && b != k && a != b, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn sequence_rejects_mixed_dims() {
        let a = Frame::filled(4, 4, 0).unwrap();
        let b = Frame::filled(4, 5, 0).unwrap();
        assert!(matches!(
            FrameSequence::new(vec![a, b]),
            Err(Error::MixedDimensions { index: 1, .. })
        ));
        assert!(matches!(
            FrameSequence::new(vec![]),
            Err(Error::EmptySequence)
        ));
    }

    #[test]
    fn logo_validation() {
        assert!(matches!(
            WatermarkLogo::new(0, 3, vec![]),
            Err(Error::EmptyLogo)
        ));
        assert!(WatermarkLogo::new(2, 2, vec![true; 3]).is_err());
        assert_eq!(
            WatermarkLogo::new(2, 2, vec![true, false, true, true])
                .unwrap()
                .ones(),
            3
        );
    }
}

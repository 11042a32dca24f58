use std::path::PathBuf;

use crate::video::PixelCoord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("sequence has {frames} frame(s); at least 3 are required for temporal context")]
    SequenceTooShort { frames: usize },

    #[error("sequence has no frames")]
    EmptySequence,

    #[error("watermark logo is empty")]
    EmptyLogo,

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("frame {index} is {found_w}x{found_h}, expected {expected_w}x{expected_h}")]
    MixedDimensions {
        index: usize,
        expected_w: usize,
        expected_h: usize,
        found_w: usize,
        found_h: usize,
    },

    #[error("frames of {width}x{height} cannot be addressed by a sidecar record (max 514x1026 rows x cols)")]
    FrameTooLarge { width: usize, height: usize },

    #[error("threshold {0} outside 1..=8")]
    InvalidThreshold(u8),

    #[error("frame {frame}: payload does not fit at threshold {threshold}")]
    FrameCapacityExceeded { frame: usize, threshold: u8 },

    #[error("frame {frame}: payload does not fit at any threshold up to {max_threshold}")]
    CapacityExceeded { frame: usize, max_threshold: u8 },

    #[error("missing flag bit for ambiguous pixel at {0}")]
    MissingFlag(PixelCoord),

    #[error("corrupt stream: {0}")]
    CorruptStream(String),

    #[error("sidecar record {word:#010x} is malformed: {reason}")]
    MalformedRecord { word: u32, reason: &'static str },

    #[error("sidecar record for frame {frame} addresses ({row}, {col}) outside its traversal")]
    RecordOutOfBounds {
        frame: usize,
        row: usize,
        col: usize,
    },

    #[error("malformed sidecar file: {0}")]
    MalformedSidecar(String),

    #[error("sidecar header does not match video: {0}")]
    HeaderMismatch(String),

    #[error("frame {frame} yields a payload that differs from frame {reference}")]
    PayloadDisagreement { frame: usize, reference: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed PGM: {0}")]
    MalformedPgm(String),

    #[error("malformed PBM: {0}")]
    MalformedPbm(String),

    #[error("raw file holds {found} bytes, expected {expected}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid corpus spec: {0}")]
    InvalidSpec(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors meaning the payload does not fit.
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            Error::CapacityExceeded { .. } | Error::FrameCapacityExceeded { .. }
        )
    }

    /// True for errors raised by tampered, mismatched or malformed inputs at
    /// extraction time.
    pub fn is_corruption(&self) -> bool {
        matches!(
            self,
            Error::MissingFlag(_)
                | Error::CorruptStream(_)
                | Error::MalformedRecord { .. }
                | Error::RecordOutOfBounds { .. }
                | Error::MalformedSidecar(_)
                | Error::HeaderMismatch(_)
                | Error::PayloadDisagreement { .. }
                | Error::DimensionMismatch(_)
        )
    }
}

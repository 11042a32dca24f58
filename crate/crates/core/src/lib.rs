//! Reversible watermarking for 8-bit grayscale frame sequences.
//!
//! A binary logo is hidden in every frame by prediction-error expansion.
//! Each interior pixel is predicted from its four rhombus neighbours and the
//! co-located pixels of two partner frames, with weights fitted per pixel by
//! least squares. Small prediction errors are expanded to carry one bit,
//! large ones are shifted out of the way, and pixels that would leave
//! `[0, 255]` are skipped and marked with flag bits. Extraction walks the
//! same pixels in reverse and restores both the frames and the logo exactly.
//!
//! ```
//! use revmark::{corpus, codec, WatermarkLogo};
//!
//! let original = corpus::generate(&corpus::CorpusSpec::new(
//!     corpus::CorpusKind::HorizontalRamp, 4, 32, 32,
//! )).unwrap();
//! let logo = WatermarkLogo::new(4, 4, vec![true, false, true, true,
//!     false, false, true, false, true, true, true, false, false, true, false, false]).unwrap();
//!
//! let embedded = codec::embed_sequence(&original, &logo).unwrap();
//! let (restored, recovered) = codec::extract_sequence(&embedded.watermarked, &embedded.sidecar).unwrap();
//! assert_eq!(restored, original);
//! assert_eq!(recovered, logo);
//! ```

pub mod codec;
pub mod error;
pub mod io;
pub mod metrics;
pub mod pee;
pub mod predictor;
pub mod sidecar;
pub mod video;

pub use error::{Error, Result};
pub use io::corpus;
pub use pee::Threshold;
pub use video::{Frame, FrameSequence, ParitySet, PixelCoord, WatermarkLogo};

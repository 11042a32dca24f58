//! File formats and synthetic inputs.

pub mod corpus;
pub mod frames;
pub mod logo;
pub mod netpbm;

pub use frames::{read_sequence, write_pgm_dir, write_raw, write_sequence, FrameSource};
pub use logo::{generate_logo, read_logo, write_logo};

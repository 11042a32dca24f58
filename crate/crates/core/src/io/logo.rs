//! Logo files and generated test logos.

use std::fs;
use std::path::Path;

use super::corpus::Lcg64;
use super::netpbm::{decode_pbm, encode_pbm};
use crate::error::{Error, Result};
use crate::video::WatermarkLogo;

/// Share of one bits in generated logos, in percent.
pub const ONES_PERCENT: usize = 49;

pub fn read_logo(path: impl AsRef<Path>) -> Result<WatermarkLogo> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pbm(&bytes)
}

pub fn write_logo(logo: &WatermarkLogo, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pbm(logo)).map_err(|e| Error::io(path, e))
}

/// A `width` x `height` logo with `round(49% of the bits)` set, placed by a
/// seeded Fisher-Yates shuffle.
pub fn generate_logo(width: usize, height: usize, seed: u64) -> Result<WatermarkLogo> {
    let n = width * height;
    let ones = (n * ONES_PERCENT + 50) / 100;
    let mut bits: Vec<bool> = (0..n).map(|i| i < ones).collect();
    let mut rng = Lcg64::new(seed);
    for i in (1..n).rev() {
        let j = rng.next_below(i + 1);
        bits.swap(i, j);
    }
    WatermarkLogo::new(width, height, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_share_of_ones() {
        let logo = generate_logo(52, 65, 1).unwrap();
        let share = logo.ones() as f64 / logo.len() as f64;
        assert!((share - 0.49).abs() <= 0.01, "{share}");
        assert_eq!(logo.ones(), 1656);
        assert_eq!(generate_logo(52, 65, 1).unwrap(), logo);
        assert_ne!(generate_logo(52, 65, 2).unwrap(), logo);
    }

    #[test]
    fn generated_logo_is_scattered() {
        let logo = generate_logo(32, 32, 9).unwrap();
        let first_half = logo.bits()[..512].iter().filter(|&&b| b).count();
        assert!(first_half > 200 && first_half < 300);
    }

    #[test]
    fn empty_logo_rejected() {
        assert!(matches!(generate_logo(0, 5, 1), Err(Error::EmptyLogo)));
    }
}

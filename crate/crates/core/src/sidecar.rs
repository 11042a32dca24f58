//! Side information needed to start extraction.
//!
//! Each frame gets one 32-bit word, most significant bit first:
//!
//! ```text
//! row (9) | col (10) | t - 1 (3) | set (1) | reserved, zero (9)
//! ```
//!
//! A sidecar file is a big-endian header followed by one word per frame:
//!
//! ```text
//! magic "RWM1" | u16 version | u16 reserved | u32 frames | u32 width
//! | u32 height | u32 logo width | u32 logo height | frames x u32 record
//! ```

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pee::Threshold;
use crate::video::ParitySet;

pub const MAGIC: u32 = 0x5257_4D31;
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 28;

pub const MAX_ROW: usize = (1 << 9) - 1;
pub const MAX_COL: usize = (1 << 10) - 1;

const ROW_SHIFT: u32 = 23;
const COL_SHIFT: u32 = 13;
const T_SHIFT: u32 = 10;
const SET_SHIFT: u32 = 9;
const RESERVED_MASK: u32 = (1 << 9) - 1;

/// Location of the last processed pixel, the threshold and its parity set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SidecarRecord {
    pub row: usize,
    pub col: usize,
    pub threshold: Threshold,
    pub set: ParitySet,
}

impl SidecarRecord {
    pub fn new(row: usize, col: usize, threshold: Threshold, set: ParitySet) -> Result<Self> {
        if row > MAX_ROW || col > MAX_COL {
            return Err(Error::InvalidDimensions(format!(
                "coordinate ({row}, {col}) does not fit a sidecar record"
            )));
        }
        Ok(SidecarRecord {
            row,
            col,
            threshold,
            set,
        })
    }

    pub fn to_word(&self) -> u32 {
        ((self.row as u32) << ROW_SHIFT)
            | ((self.col as u32) << COL_SHIFT)
            | (u32::from(self.threshold.get() - 1) << T_SHIFT)
            | (self.set.bit() << SET_SHIFT)
    }

    pub fn from_word(word: u32) -> Result<Self> {
        if word & RESERVED_MASK != 0 {
            return Err(Error::MalformedRecord {
                word,
                reason: "reserved bits are not zero",
            });
        }
        let threshold = Threshold::new(((word >> T_SHIFT) & 0b111) as u8 + 1)
            .expect("a 3-bit field plus one is always a valid threshold");
        Ok(SidecarRecord {
            row: (word >> ROW_SHIFT) as usize,
            col: ((word >> COL_SHIFT) & 0x3FF) as usize,
            threshold,
            set: ParitySet::from_bit(word >> SET_SHIFT),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidecarFile {
    pub width: usize,
    pub height: usize,
    pub logo_width: usize,
    pub logo_height: usize,
    pub records: Vec<SidecarRecord>,
}

impl SidecarFile {
    pub fn frame_count(&self) -> usize {
        self.records.len()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 4 * self.records.len());
        out.extend_from_slice(&MAGIC.to_be_bytes());
        out.extend_from_slice(&VERSION.to_be_bytes());
        out.extend_from_slice(&0u16.to_be_bytes());
        for field in [
            self.records.len(),
            self.width,
            self.height,
            self.logo_width,
            self.logo_height,
        ] {
            out.extend_from_slice(&(field as u32).to_be_bytes());
        }
        for record in &self.records {
            out.extend_from_slice(&record.to_word().to_be_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::MalformedSidecar(format!(
                "{} bytes is shorter than the {HEADER_LEN}-byte header",
                bytes.len()
            )));
        }
        let u32_at = |at: usize| u32::from_be_bytes(bytes[at..at + 4].try_into().unwrap());
        let u16_at = |at: usize| u16::from_be_bytes(bytes[at..at + 2].try_into().unwrap());

        if u32_at(0) != MAGIC {
            return Err(Error::MalformedSidecar(format!(
                "bad magic {:#010x}",
                u32_at(0)
            )));
        }
        if u16_at(4) != VERSION {
            return Err(Error::MalformedSidecar(format!(
                "unsupported version {}",
                u16_at(4)
            )));
        }
        if u16_at(6) != 0 {
            return Err(Error::MalformedSidecar(
                "reserved header field is not zero".into(),
            ));
        }
        let frames = u32_at(8) as usize;
        let expected = HEADER_LEN + 4 * frames;
        if bytes.len() != expected {
            return Err(Error::MalformedSidecar(format!(
                "{frames} records need {expected} bytes, file has {}",
                bytes.len()
            )));
        }
        let records = (0..frames)
            .map(|k| SidecarRecord::from_word(u32_at(HEADER_LEN + 4 * k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SidecarFile {
            width: u32_at(12) as usize,
            height: u32_at(16) as usize,
            logo_width: u32_at(20) as usize,
            logo_height: u32_at(24) as usize,
            records,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        SidecarFile::from_bytes(&bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn record_packing_example() {
        let r = SidecarRecord::new(100, 200, Threshold::new(2).unwrap(), ParitySet::Cross).unwrap();
        // (100<<23)|(200<<13)|(1<<10)|(1<<9), computed field by field
        let expected = 100u32 * 8_388_608 + 200 * 8192 + 1024 + 512;
        assert_eq!(expected, 0x3219_0600);
        assert_eq!(r.to_word(), 0x3219_0600);
        assert_eq!(SidecarRecord::from_word(0x3219_0600).unwrap(), r);
    }

    #[test]
    fn reserved_bits_rejected() {
        assert!(matches!(
            SidecarRecord::from_word(0x3219_0601),
            Err(Error::MalformedRecord { .. })
        ));
    }

    #[test]
    fn coordinate_limits() {
        let t = Threshold::MIN;
        assert!(SidecarRecord::new(511, 1023, t, ParitySet::Dot).is_ok());
        assert!(SidecarRecord::new(512, 0, t, ParitySet::Dot).is_err());
        assert!(SidecarRecord::new(0, 1024, t, ParitySet::Dot).is_err());
    }

    #[test]
    fn file_layout() {
        let file = SidecarFile {
            width: 64,
            height: 48,
            logo_width: 8,
            logo_height: 4,
            records: vec![
                SidecarRecord::new(100, 200, Threshold::new(2).unwrap(), ParitySet::Cross)
                    .unwrap();
                3
            ],
        };
        let bytes = file.to_bytes();
        assert_eq!(bytes.len(), HEADER_LEN + 12);
        assert_eq!(&bytes[..4], b"RWM1");
        assert_eq!(&bytes[4..8], &[0, 1, 0, 0]);
        assert_eq!(&bytes[8..12], &[0, 0, 0, 3]);
        assert_eq!(&bytes[12..16], &[0, 0, 0, 64]);
        assert_eq!(&bytes[28..32], &[0x32, 0x19, 0x06, 0x00]);
        assert_eq!(SidecarFile::from_bytes(&bytes).unwrap(), file);
    }

    #[test]
    fn malformed_files() {
        assert!(SidecarFile::from_bytes(&[0; 10]).is_err());
        let good = SidecarFile {
            width: 8,
            height: 8,
            logo_width: 1,
            logo_height: 1,
            records: vec![],
        }
        .to_bytes();
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(SidecarFile::from_bytes(&bad).is_err());
        let mut bad = good.clone();
        bad[5] = 2;
        assert!(SidecarFile::from_bytes(&bad).is_err());
        let mut bad = good.clone();
        bad[11] = 1;
        assert!(SidecarFile::from_bytes(&bad).is_err());
        assert!(SidecarFile::from_bytes(&good).is_ok());
    }

    proptest! {
        #[test]
        fn record_word_round_trip(row in 0..=MAX_ROW, col in 0..=MAX_COL, t in 1u8..=8, cross: bool) {
            let set = if cross { ParitySet::Cross } else { ParitySet::Dot };
            let r = SidecarRecord::new(row, col, Threshold::new(t).unwrap(), set).unwrap();
            prop_assert_eq!(r.to_word() & RESERVED_MASK, 0);
            prop_assert_eq!(SidecarRecord::from_word(r.to_word()).unwrap(), r);
        }
    }
}

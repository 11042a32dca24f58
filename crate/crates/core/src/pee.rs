//! Per-pixel prediction-error expansion and its inverse.
//!
//! With prediction error `e = x - x̂` and threshold `t`:
//!
//! * `|e| < t`: the error is expanded, `x' = x + e + b`, carrying bit `b`;
//! * `e >= t`: shifted up, `x' = x + t`;
//! * `e <= -t`: shifted down, `x' = x - (t - 1)`;
//! * a result outside `[0, 255]` leaves the pixel unchanged (skipped).
//!
//! After embedding, `e' = x' - x̂` lies in `[-2t + 2, 2t - 1]` for expanded
//! pixels and outside it for shifted ones. Values in the ambiguity zone
//! (`≤ t - 2` or `≥ 256 - t`) may be either changed or skipped pixels and
//! need a flag bit to tell them apart.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Threshold(u8);

impl Threshold {
    pub const MIN: Threshold = Threshold(1);
    /// Largest threshold the 3-bit sidecar field can carry.
    pub const MAX: Threshold = Threshold(8);

    pub fn new(t: u8) -> Result<Self> {
        if (1..=8).contains(&t) {
            Ok(Threshold(t))
        } else {
            Err(Error::InvalidThreshold(t))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    fn signed(self) -> i32 {
        i32::from(self.0)
    }

    /// Every threshold from `MIN` up to and including `self`.
    pub fn ascending_to(self) -> impl Iterator<Item = Threshold> {
        (1..=self.0).map(Threshold)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutcomeKind {
    Embedded(bool),
    Shifted,
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PixelOutcome {
    pub kind: OutcomeKind,
    pub new_value: u8,
    /// Flag bit to embed later, present exactly when `new_value` is ambiguous.
    pub flag: Option<bool>,
}

impl PixelOutcome {
    pub fn needs_flag(&self) -> bool {
        self.flag.is_some()
    }

    pub fn consumed_bit(&self) -> Option<bool> {
        match self.kind {
            OutcomeKind::Embedded(b) => Some(b),
            _ => None,
        }
    }
}

/// Classification of a watermarked pixel during extraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PixelClass {
    Embedded,
    Shifted,
    Unchanged,
}

#[inline]
pub fn prediction_error(x: u8, prediction: u8) -> i32 {
    i32::from(x) - i32::from(prediction)
}

#[inline]
pub fn is_ambiguous(value: u8, t: Threshold) -> bool {
    let v = i32::from(value);
    v <= t.signed() - 2 || v >= 256 - t.signed()
}

/// True when a pixel with this error carries a bit at threshold `t`.
#[inline]
pub fn is_expandable(error: i32, t: Threshold) -> bool {
    error.abs() < t.signed()
}

/// Applies expansion or shifting to one pixel.
///
/// # Panics
///
/// If the pixel is expandable and `bit` is `None`.
pub fn embed_pixel(x: u8, prediction: u8, t: Threshold, bit: Option<bool>) -> PixelOutcome {
    let e = prediction_error(x, prediction);
    let tt = t.signed();
    let (candidate, kind) = if e.abs() < tt {
        let b = bit.expect("an expandable pixel must be given a bit");
        (i32::from(x) + e + i32::from(b), OutcomeKind::Embedded(b))
    } else if e >= tt {
        (i32::from(x) + tt, OutcomeKind::Shifted)
    } else {
        (i32::from(x) - (tt - 1), OutcomeKind::Shifted)
    };

    match u8::try_from(candidate) {
        Ok(new_value) => PixelOutcome {
            kind,
            new_value,
            flag: is_ambiguous(new_value, t).then_some(true),
        },
        Err(_) => {
            debug_assert!(is_ambiguous(x, t));
            PixelOutcome {
                kind: OutcomeKind::Skipped,
                new_value: x,
                flag: Some(false),
            }
        }
    }
}

/// Decides how a watermarked pixel was produced.
///
/// `flag` must be supplied exactly when `watermarked` is ambiguous.
pub fn classify_extract(
    watermarked: u8,
    prediction: u8,
    t: Threshold,
    flag: Option<bool>,
) -> Result<PixelClass> {
    match (is_ambiguous(watermarked, t), flag) {
        (true, None) => {
            return Err(Error::CorruptStream(format!(
                "value {watermarked} is ambiguous at t={t} but no flag is available"
            )))
        }
        (false, Some(_)) => {
            return Err(Error::CorruptStream(format!(
                "flag supplied for unambiguous value {watermarked} at t={t}"
            )))
        }
        (true, Some(false)) => return Ok(PixelClass::Unchanged),
        _ => {}
    }
    let e = prediction_error(watermarked, prediction);
    let tt = t.signed();
    Ok(if (-2 * tt + 2..=2 * tt - 1).contains(&e) {
        PixelClass::Embedded
    } else {
        PixelClass::Shifted
    })
}

/// Restores the original sample, returning the carried bit for expanded
/// pixels.
pub fn recover_pixel(
    watermarked: u8,
    prediction: u8,
    t: Threshold,
    class: PixelClass,
) -> Result<(u8, Option<bool>)> {
    let e = prediction_error(watermarked, prediction);
    let tt = t.signed();
    let xw = i32::from(watermarked);
    let (value, bit) = match class {
        PixelClass::Unchanged => return Ok((watermarked, None)),
        PixelClass::Embedded => {
            let b = e.rem_euclid(2);
            let twice = xw + i32::from(prediction) - b;
            if twice % 2 != 0 {
                return Err(Error::CorruptStream(format!(
                    "odd expansion sum {twice} for value {watermarked}"
                )));
            }
            (twice / 2, Some(b == 1))
        }
        PixelClass::Shifted => {
            if e >= 2 * tt {
                (xw - tt, None)
            } else if e <= -2 * tt + 1 {
                (xw + tt - 1, None)
            } else {
                return Err(Error::CorruptStream(format!(
                    "error {e} lies in the expansion band, cannot be a shifted pixel"
                )));
            }
        }
    };
    let value = u8::try_from(value)
        .map_err(|_| Error::CorruptStream(format!("restored value {value} outside [0, 255]")))?;
    Ok((value, bit))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: u8) -> Threshold {
        Threshold::new(v).unwrap()
    }

    #[test]
    fn threshold_range() {
        assert!(Threshold::new(0).is_err());
        assert!(Threshold::new(9).is_err());
        assert_eq!(Threshold::new(8).unwrap(), Threshold::MAX);
        assert_eq!(
            t(3).ascending_to().map(Threshold::get).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn prediction_error_examples() {
        assert_eq!(prediction_error(100, 100), 0);
        assert_eq!(prediction_error(100, 98), 2);
        assert_eq!(prediction_error(0, 255), -255);
    }

    #[test]
    fn ambiguity_examples() {
        assert!(is_ambiguous(255, t(1)));
        assert!(!is_ambiguous(0, t(1)));
        assert!(is_ambiguous(1, t(3)));
        assert!(!is_ambiguous(2, t(3)));
        assert!(is_ambiguous(253, t(3)));
        assert!(!is_ambiguous(252, t(3)));
    }

    #[test]
    fn embed_examples() {
        assert_eq!(
            embed_pixel(100, 100, t(1), Some(false)),
            PixelOutcome {
                kind: OutcomeKind::Embedded(false),
                new_value: 100,
                flag: None
            }
        );
        assert_eq!(
            embed_pixel(100, 98, t(3), Some(true)),
            PixelOutcome {
                kind: OutcomeKind::Embedded(true),
                new_value: 103,
                flag: None
            }
        );
        assert_eq!(
            embed_pixel(100, 98, t(2), None),
            PixelOutcome {
                kind: OutcomeKind::Shifted,
                new_value: 102,
                flag: None
            }
        );
        assert_eq!(
            embed_pixel(255, 254, t(2), Some(true)),
            PixelOutcome {
                kind: OutcomeKind::Skipped,
                new_value: 255,
                flag: Some(false)
            }
        );
    }

    #[test]
    fn shift_down_at_t1_is_identity() {
        let out = embed_pixel(50, 60, t(1), None);
        assert_eq!(out.kind, OutcomeKind::Shifted);
        assert_eq!(out.new_value, 50);
        assert_eq!(
            recover_pixel(50, 60, t(1), PixelClass::Shifted).unwrap(),
            (50, None)
        );
    }

    #[test]
    #[should_panic(expected = "must be given a bit")]
    fn expandable_without_bit_panics() {
        embed_pixel(10, 10, t(1), None);
    }

    #[test]
    fn changed_ambiguous_pixel_gets_flag_one() {
        let out = embed_pixel(254, 254, t(1), Some(true));
        assert_eq!(out.new_value, 255);
        assert_eq!(out.flag, Some(true));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_extract(103, 98, t(3), None).unwrap(),
            PixelClass::Embedded
        );
        assert_eq!(
            classify_extract(102, 98, t(2), None).unwrap(),
            PixelClass::Shifted
        );
        assert_eq!(
            classify_extract(255, 254, t(2), Some(false)).unwrap(),
            PixelClass::Unchanged
        );
        assert!(classify_extract(255, 254, t(2), None).is_err());
        assert!(classify_extract(100, 98, t(2), Some(true)).is_err());
    }

    #[test]
    fn recover_examples() {
        assert_eq!(
            recover_pixel(103, 98, t(3), PixelClass::Embedded).unwrap(),
            (100, Some(true))
        );
        assert_eq!(
            recover_pixel(102, 98, t(2), PixelClass::Shifted).unwrap(),
            (100, None)
        );
        assert_eq!(
            recover_pixel(100, 100, t(1), PixelClass::Embedded).unwrap(),
            (100, Some(false))
        );
        assert_eq!(
            recover_pixel(7, 3, t(8), PixelClass::Unchanged).unwrap(),
            (7, None)
        );
    }

    #[test]
    fn negative_error_bit_uses_euclidean_parity() {
        // e = -2, b = 1 -> x' = 96 + (-2) + 1 = 95, e' = -3
        let out = embed_pixel(96, 98, t(3), Some(true));
        assert_eq!(out.new_value, 95);
        assert_eq!(
            recover_pixel(95, 98, t(3), PixelClass::Embedded).unwrap(),
            (96, Some(true))
        );
    }

    #[test]
    fn shifted_class_in_expansion_band_is_corrupt() {
        assert!(recover_pixel(100, 100, t(2), PixelClass::Shifted).is_err());
    }

    #[test]
    fn exhaustive_pixel_round_trip() {
        for tv in 1..=8u8 {
            let th = t(tv);
            let tt = i32::from(tv);
            for x in 0..=255u8 {
                for p in 0..=255u8 {
                    for b in [false, true] {
                        let out = embed_pixel(x, p, th, Some(b));
                        if out.kind != OutcomeKind::Skipped {
                            assert!((i32::from(out.new_value) - i32::from(x)).abs() <= tt);
                        } else {
                            assert!(is_ambiguous(x, th));
                        }
                        assert_eq!(out.needs_flag(), is_ambiguous(out.new_value, th));
                        let class = classify_extract(out.new_value, p, th, out.flag).unwrap();
                        let (rx, rb) = recover_pixel(out.new_value, p, th, class).unwrap();
                        assert_eq!(rx, x, "x={x} p={p} t={tv} b={b}");
                        assert_eq!(rb, out.consumed_bit());
                    }
                }
            }
        }
    }
}

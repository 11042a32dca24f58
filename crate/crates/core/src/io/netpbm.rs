//! Binary PGM (P5, 8-bit) and PBM (P4) encoding.

use crate::error::{Error, Result};
use crate::video::{Frame, WatermarkLogo};

struct Header {
    magic: [u8; 2],
    fields: Vec<usize>,
    data_offset: usize,
}

/// Parses the magic number and `count` decimal fields, skipping comments.
/// Exactly one whitespace byte separates the last field from the raster.
fn parse_header(bytes: &[u8], count: usize) -> std::result::Result<Header, String> {
    if bytes.len() < 2 {
        return Err("file too short".into());
    }
    let magic = [bytes[0], bytes[1]];
    let mut pos = 2;
    let mut fields = Vec::with_capacity(count);
    while fields.len() < count {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while !matches!(bytes.get(pos), Some(b'\n') | Some(b'\r') | None) {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err("truncated header".into()),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(format!("expected a number at byte {start}"));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        let value = text
            .parse::<usize>()
            .map_err(|_| format!("header value {text} out of range"))?;
        fields.push(value);
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err("missing whitespace before raster data".into()),
    }
    Ok(Header {
        magic,
        fields,
        data_offset: pos,
    })
}

pub fn encode_pgm(frame: &Frame) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.extend_from_slice(frame.samples());
    out
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Frame> {
    let header = parse_header(bytes, 3).map_err(Error::MalformedPgm)?;
    if &header.magic != b"P5" {
        return Err(Error::MalformedPgm(format!(
            "expected magic P5, found {:?}",
            String::from_utf8_lossy(&header.magic)
        )));
    }
    let (w, h, maxval) = (header.fields[0], header.fields[1], header.fields[2]);
    if maxval != 255 {
        return Err(Error::MalformedPgm(format!(
            "maxval {maxval} is not supported, only 8-bit (255) samples"
        )));
    }
    if w == 0 || h == 0 {
        return Err(Error::MalformedPgm(format!("empty image {w}x{h}")));
    }
    let data = &bytes[header.data_offset..];
    let expected = w
        .checked_mul(h)
        .ok_or_else(|| Error::MalformedPgm("size overflow".into()))?;
    if data.len() != expected {
        return Err(Error::MalformedPgm(format!(
            "{w}x{h} raster needs {expected} bytes, found {}",
            data.len()
        )));
    }
    Frame::new(w, h, data.to_vec())
}

pub fn encode_pbm(logo: &WatermarkLogo) -> Vec<u8> {
    let (w, h) = (logo.width(), logo.height());
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let stride = w.div_ceil(8);
    for row in logo.bits().chunks(w) {
        let mut packed = vec![0u8; stride];
        for (j, &bit) in row.iter().enumerate() {
            if bit {
                packed[j / 8] |= 0x80 >> (j % 8);
            }
        }
        out.extend_from_slice(&packed);
    }
    debug_assert_eq!(out.len() - format!("P4\n{w} {h}\n").len(), stride * h);
    out
}

pub fn decode_pbm(bytes: &[u8]) -> Result<WatermarkLogo> {
    let header = parse_header(bytes, 2).map_err(Error::MalformedPbm)?;
    if &header.magic != b"P4" {
        return Err(Error::MalformedPbm(format!(
            "expected magic P4, found {:?}",
            String::from_utf8_lossy(&header.magic)
        )));
    }
    let (w, h) = (header.fields[0], header.fields[1]);
    if w == 0 || h == 0 {
        return Err(Error::MalformedPbm(format!("empty image {w}x{h}")));
    }
    let stride = w.div_ceil(8);
    let data = &bytes[header.data_offset..];
    if data.len() != stride * h {
        return Err(Error::MalformedPbm(format!(
            "{w}x{h} bitmap needs {} bytes, found {}",
            stride * h,
            data.len()
        )));
    }
    let mut bits = Vec::with_capacity(w * h);
    for row in data.chunks(stride) {
        bits.extend((0..w).map(|j| row[j / 8] & (0x80 >> (j % 8)) != 0));
    }
    WatermarkLogo::new(w, h, bits)
}

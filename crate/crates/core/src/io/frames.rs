//! Reading and writing frame sequences.
//!
//! Two layouts are supported: a directory of numbered binary PGM files, and
//! a single headerless raw file holding `frames * width * height` bytes.

use std::fs;
use std::path::{Path, PathBuf};

use super::netpbm::{decode_pgm, encode_pgm};
use crate::error::{Error, Result};
use crate::video::{Frame, FrameSequence};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameSource {
    /// Directory whose `.pgm` files are the frames, ordered by the number in
    /// their names.
    PgmDir(PathBuf),
    Raw {
        path: PathBuf,
        width: usize,
        height: usize,
        frames: usize,
    },
}

/// File name of frame `k` when writing a PGM directory.
pub fn frame_file_name(k: usize) -> String {
    format!("frame_{k:04}.pgm")
}

fn frame_number(path: &Path) -> Option<u64> {
    let stem = path.file_stem()?.to_str()?;
    let digits: String = stem
        .chars()
        .rev()
        .skip_while(|c| !c.is_ascii_digit())
        .take_while(char::is_ascii_digit)
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    digits.parse().ok()
}

fn list_pgm_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let is_pgm = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
        if is_pgm && path.is_file() {
            files.push(path);
        }
    }
    files.sort_by(|a, b| (frame_number(a), a).cmp(&(frame_number(b), b)));
    Ok(files)
}

pub fn read_sequence(source: &FrameSource) -> Result<FrameSequence> {
    match source {
        FrameSource::PgmDir(dir) => {
            let files = list_pgm_files(dir)?;
            if files.is_empty() {
                return Err(Error::EmptySequence);
            }
            let frames = files
                .iter()
                .map(|path| {
                    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
                    decode_pgm(&bytes).map_err(|e| match e {
                        Error::MalformedPgm(msg) => {
                            Error::MalformedPgm(format!("{}: {msg}", path.display()))
                        }
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            FrameSequence::new(frames)
        }
        FrameSource::Raw {
            path,
            width,
            height,
            frames,
        } => {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            let frame_len = width * height;
            let expected = frame_len * frames;
            if bytes.len() != expected {
                return Err(Error::SizeMismatch {
                    expected,
                    found: bytes.len(),
                });
            }
            if expected == 0 {
                return Err(Error::EmptySequence);
            }
            let frames = bytes
                .chunks(frame_len)
                .map(|chunk| Frame::new(*width, *height, chunk.to_vec()))
                .collect::<Result<Vec<_>>>()?;
            FrameSequence::new(frames)
        }
    }
}

/// Writes one PGM per frame into `dir`, creating it if needed.
pub fn write_pgm_dir(seq: &FrameSequence, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (k, frame) in seq.frames().iter().enumerate() {
        let path = dir.join(frame_file_name(k));
        fs::write(&path, encode_pgm(frame)).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

pub fn write_raw(seq: &FrameSequence, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut bytes = Vec::with_capacity(seq.len() * seq.width() * seq.height());
    for frame in seq.frames() {
        bytes.extend_from_slice(frame.samples());
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// True for paths that name a raw sequence file rather than a PGM directory.
pub fn is_raw_path(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("raw"))
}

/// Writes a `.raw` path as a raw file and anything else as a PGM directory.
pub fn write_sequence(seq: &FrameSequence, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if is_raw_path(path) {
        write_raw(seq, path)
    } else {
        write_pgm_dir(seq, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_from_names() {
        assert_eq!(frame_number(Path::new("frame_0012.pgm")), Some(12));
        assert_eq!(frame_number(Path::new("a7b3.pgm")), Some(3));
        assert_eq!(frame_number(Path::new("x.pgm")), None);
    }

    #[test]
    fn numeric_not_lexicographic_order() {
        let dir = tempfile::tempdir().unwrap();
        for k in [10usize, 2, 1] {
            let f = Frame::filled(2, 2, k as u8).unwrap();
            fs::write(dir.path().join(format!("f{k}.pgm")), encode_pgm(&f)).unwrap();
        }
        let seq = read_sequence(&FrameSource::PgmDir(dir.path().into())).unwrap();
        let firsts: Vec<u8> = seq.frames().iter().map(|f| f.get(0, 0)).collect();
        assert_eq!(firsts, vec![1, 2, 10]);
    }

    #[test]
    fn empty_dir_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            read_sequence(&FrameSource::PgmDir(dir.path().into())),
            Err(Error::EmptySequence)
        ));
    }

    #[test]
    fn raw_size_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.raw");
        fs::write(&path, vec![0u8; 100]).unwrap();
        let src = FrameSource::Raw {
            path,
            width: 8,
            height: 8,
            frames: 2,
        };
        assert!(matches!(
            read_sequence(&src),
            Err(Error::SizeMismatch {
                expected: 128,
                found: 100
            })
        ));
    }

    #[test]
    fn mixed_dimensions_in_dir() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("f0.pgm"),
            encode_pgm(&Frame::filled(2, 2, 0).unwrap()),
        )
        .unwrap();
        fs::write(
            dir.path().join("f1.pgm"),
            encode_pgm(&Frame::filled(3, 2, 0).unwrap()),
        )
        .unwrap();
        assert!(matches!(
            read_sequence(&FrameSource::PgmDir(dir.path().into())),
            Err(Error::MixedDimensions { index: 1, .. })
        ));
    }
}

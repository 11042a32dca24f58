use proptest::prelude::*;
use sha2::{Digest, Sha256};

use revmark::codec::{embed_sequence, embed_sequence_with, extract_sequence, EmbedOptions};
use revmark::corpus::{generate, CorpusKind, CorpusSpec};
use revmark::io::netpbm::{decode_pbm, decode_pgm, encode_pbm, encode_pgm};
use revmark::io::{generate_logo, read_sequence, write_pgm_dir, write_raw, FrameSource};
use revmark::metrics::{frame_groups, psnr, Psnr};
use revmark::predictor::{solve_coefficients, TrainingSystem};
use revmark::sidecar::SidecarFile;
use revmark::{Frame, FrameSequence, Threshold, WatermarkLogo};

fn sequence_strategy() -> impl Strategy<Value = FrameSequence> {
    (5usize..20, 5usize..20, 3usize..6, 0u8..=255, 0u8..=40).prop_flat_map(
        |(w, h, n, base, spread)| {
            let samples = proptest::collection::vec(0..=spread, w * h * n);
            samples.prop_map(move |s| {
                let frames = s
                    .chunks(w * h)
                    .map(|c| {
                        Frame::new(w, h, c.iter().map(|&d| base.saturating_add(d)).collect())
                            .unwrap()
                    })
                    .collect();
                FrameSequence::new(frames).unwrap()
            })
        },
    )
}

fn logo_strategy() -> impl Strategy<Value = WatermarkLogo> {
    (1usize..6, 1usize..6).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<bool>(), w * h)
            .prop_map(move |bits| WatermarkLogo::new(w, h, bits).unwrap())
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn digest(seq: &FrameSequence) -> String {
    let mut h = Sha256::new();
    for f in seq.frames() {
        h.update(encode_pgm(f));
    }
    hex(&h.finalize())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embed_is_reversible_or_refused(seq in sequence_strategy(), logo in logo_strategy(), t in 1u8..=8) {
        let options = EmbedOptions { max_threshold: Threshold::new(t).unwrap() };
        match embed_sequence_with(&seq, &logo, &options, None) {
            Ok(emb) => {
                prop_assert!(emb.report.max_threshold().get() <= t);
                let (restored, recovered) = extract_sequence(&emb.watermarked, &emb.sidecar).unwrap();
                prop_assert_eq!(restored, seq);
                prop_assert_eq!(recovered, logo);
            }
            Err(e) => prop_assert!(e.is_capacity(), "{}", e),
        }
    }

    #[test]
    fn sidecar_bytes_round_trip(seq in sequence_strategy(), logo in logo_strategy()) {
        if let Ok(emb) = embed_sequence(&seq, &logo) {
            let bytes = emb.sidecar.to_bytes();
            prop_assert_eq!(bytes.len(), 28 + 4 * seq.len());
            prop_assert_eq!(SidecarFile::from_bytes(&bytes).unwrap(), emb.sidecar);
        }
    }

    #[test]
    fn pgm_and_pbm_round_trip(w in 1usize..40, h in 1usize..40, seed: u64) {
        let frame = generate(&CorpusSpec::new(CorpusKind::noise(seed), 1, w, h)).unwrap().frames()[0].clone();
        prop_assert_eq!(decode_pgm(&encode_pgm(&frame)).unwrap(), frame);
        let logo = generate_logo(w, h, seed).unwrap();
        let bytes = encode_pbm(&logo);
        prop_assert_eq!(bytes.len(), format!("P4\n{w} {h}\n").len() + w.div_ceil(8) * h);
        prop_assert_eq!(decode_pbm(&bytes).unwrap(), logo);
    }

    #[test]
    fn psnr_matches_double_loop(a in sequence_strategy(), seed: u64) {
        let noise = generate(&CorpusSpec::new(
            CorpusKind::UniformNoise { seed, low: 0, high: 3 }, a.len(), a.width(), a.height(),
        )).unwrap();
        let b = FrameSequence::new(
            a.frames().iter().zip(noise.frames()).map(|(f, n)| {
                Frame::new(f.width(), f.height(), f.samples().iter().zip(n.samples())
                    .map(|(&x, &d)| x.saturating_sub(d)).collect()).unwrap()
            }).collect(),
        ).unwrap();
        let mut sum = 0.0f64;
        let mut count = 0.0f64;
        for k in 0..a.len() {
            for i in 0..a.height() {
                for j in 0..a.width() {
                    let d = f64::from(a.frame(k).get(i, j)) - f64::from(b.frame(k).get(i, j));
                    sum += d * d;
                    count += 1.0;
                }
            }
        }
        let got = psnr(&a, &b).unwrap();
        prop_assert_eq!(got, psnr(&b, &a).unwrap());
        if sum == 0.0 {
            prop_assert_eq!(got, Psnr::Infinite);
        } else {
            let expected = 10.0 * (255.0f64 * 255.0 / (sum / count)).log10();
            prop_assert!((got.db() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn groups_partition_frames(n in 1usize..100) {
        let groups = frame_groups(n);
        prop_assert_eq!(groups.len(), (n / 6).max(1));
        prop_assert_eq!(groups[0].start, 0);
        prop_assert_eq!(groups.last().unwrap().end, n);
        for pair in groups.windows(2) {
            prop_assert_eq!(pair[0].end, pair[1].start);
            prop_assert_eq!(pair[0].len(), 6);
        }
    }

    #[test]
    fn solved_weights_fit_exact_systems(
        rows in proptest::array::uniform6(proptest::array::uniform6(-1.0f64..1.0)),
        weights in proptest::array::uniform6(-2.0f64..2.0),
    ) {
        let mut rows = rows;
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] += 3.0;
        }
        let mut targets = [0.0; 6];
        for (y, row) in targets.iter_mut().zip(&rows) {
            *y = row.iter().zip(&weights).map(|(x, v)| x * v).sum();
        }
        let system = TrainingSystem { rows, targets };
        let v = solve_coefficients(&system).unwrap();
        prop_assert!(system.residual(&v) < 1e-9);
        for (a, b) in v.weights().iter().zip(&weights) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn files_on_disk_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let seq = generate(&CorpusSpec::new(
        CorpusKind::MovingRect { speed: 2, size: 8 },
        5,
        40,
        30,
    ))
    .unwrap();
    let logo = generate_logo(7, 6, 4).unwrap();
    let emb = embed_sequence(&seq, &logo).unwrap();

    let dir = tmp.path().join("marked");
    write_pgm_dir(&emb.watermarked, &dir).unwrap();
    let raw = tmp.path().join("marked.raw");
    write_raw(&emb.watermarked, &raw).unwrap();
    let side = tmp.path().join("marked.rwm");
    emb.sidecar.write(&side).unwrap();

    let from_dir = read_sequence(&FrameSource::PgmDir(dir)).unwrap();
    let from_raw = read_sequence(&FrameSource::Raw {
        path: raw,
        width: 40,
        height: 30,
        frames: 5,
    })
    .unwrap();
    assert_eq!(from_dir, emb.watermarked);
    assert_eq!(from_raw, emb.watermarked);

    let (restored, recovered) =
        extract_sequence(&from_dir, &SidecarFile::read(&side).unwrap()).unwrap();
    assert_eq!(restored, seq);
    assert_eq!(recovered, logo);
}

#[test]
fn embedding_is_deterministic() {
    let seq = generate(&CorpusSpec::new(CorpusKind::HorizontalRamp, 6, 32, 32)).unwrap();
    let logo = generate_logo(12, 12, 9).unwrap();
    let a = embed_sequence(&seq, &logo).unwrap();
    let b = embed_sequence(&seq, &logo).unwrap();
    assert_eq!(a.watermarked, b.watermarked);
    assert_eq!(a.sidecar.to_bytes(), b.sidecar.to_bytes());
}

#[test]
fn pinned_digests() {
    // Regression pins: any change to the generators or the codec shows up here.
    let rect = generate(&CorpusSpec::new(
        CorpusKind::MovingRect { speed: 1, size: 16 },
        18,
        64,
        64,
    ))
    .unwrap();
    let noise = generate(&CorpusSpec::new(CorpusKind::noise(1), 3, 16, 16)).unwrap();
    let logo = generate_logo(32, 32, 1).unwrap();
    let emb = embed_sequence(&rect, &logo).unwrap();
    let got = [
        digest(&rect),
        digest(&noise),
        hex(&Sha256::digest(encode_pbm(&logo))),
        digest(&emb.watermarked),
        hex(&Sha256::digest(emb.sidecar.to_bytes())),
    ];
    assert_eq!(got, PINNED);
}

const PINNED: [&str; 5] = [
    "9887b3aeb8b68faa3475e73a59f622a168d7dcc2d4b35347f49e3721e74ae4a5",
    "9d57df007c76bac6f805221b6131fc5ccb940ab1c5c20b15931d490281186ddd",
    "71ab84fb51eac4289e0276ab048606d9abdc89eb5aff2bf5af4153be6c08e61a",
    "a60266dfda8373e7c38891684b873cf288dc4e7bc56b30c7bb959eb90560afd9",
    "949f28dd02bc1b462b768729326917a37941dea4172441e8cea2ed24ccf6fcba",
];

//! A single changed sample in the watermarked frames is caught on extraction.

use revmark::codec::{embed_sequence, extract_sequence};
use revmark::corpus::{generate, CorpusKind, CorpusSpec};
use revmark::io::generate_logo;
use revmark::PixelCoord;

fn main() -> revmark::Result<()> {
    let original = generate(&CorpusSpec::new(CorpusKind::HorizontalRamp, 6, 48, 48))?;
    let logo = generate_logo(16, 16, 2)?;
    let embedded = embed_sequence(&original, &logo)?;

    for coord in [
        PixelCoord::new(0, 10, 10),
        PixelCoord::new(3, 20, 21),
        PixelCoord::new(5, 0, 0),
        PixelCoord::new(2, 40, 30),
    ] {
        let mut tampered = embedded.watermarked.clone();
        let v = tampered.sample(coord);
        tampered
            .frame_mut(coord.frame)
            .set(coord.row, coord.col, v ^ 1);
        match extract_sequence(&tampered, &embedded.sidecar) {
            Err(e) => println!("{coord}: extraction failed: {e}"),
            Ok((frames, recovered)) => {
                let bad_frames = original
                    .frames()
                    .iter()
                    .zip(frames.frames())
                    .filter(|(a, b)| a != b)
                    .count();
                let bad_bits = logo
                    .bits()
                    .iter()
                    .zip(recovered.bits())
                    .filter(|(a, b)| a != b)
                    .count();
                println!("{coord}: {bad_frames} frames differ, {bad_bits} logo bits differ");
            }
        }
    }
    Ok(())
}

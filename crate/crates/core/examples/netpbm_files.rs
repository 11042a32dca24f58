//! Writes a corpus and a logo as Netpbm files, then embeds from disk.

use revmark::codec::{embed_sequence, extract_sequence};
use revmark::corpus::{generate, CorpusKind, CorpusSpec};
use revmark::io::{
    generate_logo, read_logo, read_sequence, write_logo, write_pgm_dir, FrameSource,
};

fn main() -> revmark::Result<()> {
    let root = std::env::temp_dir().join(format!("revmark-example-{}", std::process::id()));
    let frames_dir = root.join("frames");
    let logo_path = root.join("logo.pbm");
    std::fs::create_dir_all(&root).map_err(|e| revmark::Error::Io {
        path: root.clone(),
        source: e,
    })?;

    let seq = generate(&CorpusSpec::new(CorpusKind::VerticalRamp, 6, 40, 40))?;
    write_pgm_dir(&seq, &frames_dir)?;
    write_logo(&generate_logo(10, 10, 5)?, &logo_path)?;
    println!("wrote {} and {}", frames_dir.display(), logo_path.display());

    let loaded = read_sequence(&FrameSource::PgmDir(frames_dir))?;
    let logo = read_logo(&logo_path)?;
    assert_eq!(loaded, seq);

    let embedded = embed_sequence(&loaded, &logo)?;
    let (restored, recovered) = extract_sequence(&embedded.watermarked, &embedded.sidecar)?;
    println!(
        "{}x{}x{} frames, {} ones in the logo, exact round trip: {}",
        loaded.width(),
        loaded.height(),
        loaded.len(),
        logo.ones(),
        restored == loaded && recovered == logo
    );
    let _ = std::fs::remove_dir_all(&root);
    Ok(())
}

//! Capacity and distortion for each synthetic corpus kind.
//!
//! Prints the payload each frame can take at every threshold, then writes
//! a sweep over square logo sizes as CSV to stdout.

use std::io;

use revmark::codec::{probe_capacity, EmbedOptions};
use revmark::corpus::{generate, CorpusKind, CorpusSpec};
use revmark::metrics::{capacity_distortion_sweep, frame_groups, write_sweep_csv};
use revmark::Threshold;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let side = 64;
    let kinds = [
        CorpusKind::Constant(100),
        CorpusKind::HorizontalRamp,
        CorpusKind::MovingRect { speed: 1, size: 16 },
        CorpusKind::MovingRect { speed: 8, size: 16 },
        CorpusKind::UniformNoise {
            seed: 7,
            low: 112,
            high: 143,
        },
        CorpusKind::noise(7),
    ];
    let sizes: Vec<(usize, usize)> = (1..=7).map(|i| (8 * i, 8 * i)).collect();

    for kind in kinds {
        let seq = generate(&CorpusSpec::new(kind, 18, side, side))?;
        let caps = Threshold::MAX
            .ascending_to()
            .map(|t| probe_capacity(&seq, t, 1).map(|p| p.min_bits()))
            .collect::<revmark::Result<Vec<_>>>()?;
        eprintln!("{kind}: bits per frame at t=1..8 {caps:?}");

        println!("# {kind}");
        let rows = capacity_distortion_sweep(&seq, &sizes, &EmbedOptions::default(), 1);
        write_sweep_csv(&rows, frame_groups(seq.len()).len(), io::stdout().lock())?;
    }
    Ok(())
}

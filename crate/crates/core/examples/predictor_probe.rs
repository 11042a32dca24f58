//! Shows the least-squares predictor at work on one pixel.

use revmark::corpus::{generate, CorpusKind, CorpusSpec};
use revmark::predictor::explain;
use revmark::PixelCoord;

fn main() -> revmark::Result<()> {
    let seq = generate(&CorpusSpec::new(
        CorpusKind::UniformNoise {
            seed: 3,
            low: 90,
            high: 130,
        },
        5,
        16,
        16,
    ))?;
    let coord = PixelCoord::new(1, 6, 7);
    let detail = explain(&seq, coord);

    println!("pixel {coord}: actual value {}", seq.sample(coord));
    println!("context [N, S, W, E, ta, tb] = {:?}", detail.context.0);
    println!("fixed estimate {}", detail.estimate);
    println!("training rows and targets:");
    for (row, y) in detail.system.rows.iter().zip(&detail.system.targets) {
        println!("  {row:>6?} -> {y}");
    }
    match &detail.coefficients {
        Ok(v) => {
            let w: Vec<String> = v.weights().iter().map(|x| format!("{x:+.4}")).collect();
            println!("weights [{}]", w.join(", "));
            println!("training residual {:.3e}", detail.system.residual(v));
        }
        Err(_) => println!("singular system, falling back to the fixed estimate"),
    }
    println!("prediction {}", detail.prediction);

    let flat = generate(&CorpusSpec::new(CorpusKind::Constant(80), 3, 8, 8))?;
    let d = explain(&flat, PixelCoord::new(0, 3, 3));
    println!(
        "flat content: singular = {}, prediction {}",
        d.coefficients.is_err(),
        d.prediction
    );
    Ok(())
}

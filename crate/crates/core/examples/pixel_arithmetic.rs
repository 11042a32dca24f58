//! Single-pixel expansion, shifting and overflow handling.

use revmark::pee::{classify_extract, embed_pixel, is_ambiguous, recover_pixel};
use revmark::Threshold;

fn main() -> revmark::Result<()> {
    let t = Threshold::new(2)?;
    let cases = [
        (100, 99, true),
        (100, 101, false),
        (100, 95, true),
        (100, 107, true),
        (255, 250, true),
        (0, 6, false),
        (1, 1, true),
    ];
    println!(
        "t = {t}, ambiguous values are <= {} or >= {}",
        t.get() as i32 - 2,
        256 - t.get() as i32
    );
    println!("    x   x^  bit  ->  x'   outcome        flag  -> back");
    for (x, prediction, bit) in cases {
        let out = embed_pixel(x, prediction, t, Some(bit));
        let class = classify_extract(out.new_value, prediction, t, out.flag)?;
        let (restored, carried) = recover_pixel(out.new_value, prediction, t, class)?;
        println!(
            "{x:>5} {prediction:>4} {:>4}  -> {:>3}   {:<14} {:<5} -> {restored} {}",
            bit as u8,
            out.new_value,
            format!("{:?}", out.kind),
            out.flag.map_or("-".to_string(), |f| (f as u8).to_string()),
            carried.map_or(String::new(), |b| format!("bit {}", b as u8)),
        );
        assert_eq!(restored, x);
    }
    assert!(is_ambiguous(254, t) && !is_ambiguous(1, t));
    Ok(())
}

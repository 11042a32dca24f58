//! Packing of the per-frame side information and its file layout.

use revmark::sidecar::{SidecarFile, SidecarRecord};
use revmark::{ParitySet, Threshold};

fn main() -> revmark::Result<()> {
    let record = SidecarRecord::new(100, 200, Threshold::new(2)?, ParitySet::Cross)?;
    let word = record.to_word();
    println!("row 100, col 200, t 2, Cross -> 0x{word:08X}");
    println!("  row  {:09b}", word >> 23);
    println!("  col  {:010b}", (word >> 13) & 0x3ff);
    println!("  t-1  {:03b}", (word >> 10) & 0x7);
    println!("  set  {}", (word >> 9) & 1);
    assert_eq!(SidecarRecord::from_word(word)?, record);

    let file = SidecarFile {
        width: 64,
        height: 48,
        logo_width: 16,
        logo_height: 16,
        records: vec![
            record,
            SidecarRecord::new(5, 9, Threshold::MIN, ParitySet::Dot)?,
        ],
    };
    let bytes = file.to_bytes();
    println!("{} byte file:", bytes.len());
    for chunk in bytes.chunks(4) {
        let hex: Vec<String> = chunk.iter().map(|b| format!("{b:02x}")).collect();
        println!("  {}", hex.join(" "));
    }
    assert_eq!(SidecarFile::from_bytes(&bytes)?, file);

    let mut bad = bytes.clone();
    bad[bytes.len() - 1] |= 1;
    println!(
        "reserved bit set: {}",
        SidecarFile::from_bytes(&bad).unwrap_err()
    );
    Ok(())
}

//! The four-term sequences `(O, O(E), O(aE + P), O((a+1)E + P))` on `F_m`:
//! exceptional for every `a`, strong exactly when `a ≥ 0`.
//!
//! `cargo run --example seeds`

use tiltsurf::exc::{hirzebruch_seed, is_exceptional, is_strong};

fn main() -> tiltsurf::Result<()> {
    for m in 0..=3 {
        for a in [-1, 0, 2] {
            let seq = hirzebruch_seed(m, a)?;
            let table = seq.ext_table()?;
            println!(
                "F_{m}, a = {a:>2}: exceptional {}, strong {}",
                is_exceptional(&seq)?.holds,
                is_strong(&seq)?.holds
            );
            for k in 0..seq.len() {
                let row: Vec<String> = (0..seq.len())
                    .map(|l| {
                        let e = table.get(k, l);
                        format!("({},{},{})", e.hom, e.ext1, e.ext2)
                    })
                    .collect();
                println!(
                    "    {:>10}  {}",
                    seq.classes()[k].to_string(),
                    row.join(" ")
                );
            }
        }
    }
    Ok(())
}

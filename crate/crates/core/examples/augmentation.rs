//! Growing a full exceptional sequence of line bundles one blow-up at a time
//! and checking it.
//!
//! `cargo run --example augmentation`

use tiltsurf::exc::{
    augment_along, ext2_free, fullness_certificate, hirzebruch_seed, is_exceptional, is_strong,
    standard_augment,
};
use tiltsurf::piclattice::Surface;

fn main() -> tiltsurf::Result<()> {
    let s = Surface::new_hirzebruch(2)?.blow_up_labels(&["P|E", "E1|E", "Q|P'"])?;

    // By hand: one augmentation per blow-up.
    let mut seq = hirzebruch_seed(2, 1)?;
    for (k, position) in [2, 1, 5].into_iter().enumerate() {
        seq = standard_augment(&seq, &s.prefix(k + 1)?, position)?;
        let shown: Vec<String> = seq.classes().iter().map(ToString::to_string).collect();
        println!("after blow-up {}: ({})", k + 1, shown.join(", "));
    }
    assert_eq!(seq, augment_along(&s, 1, &[2, 1, 5])?);

    let full = fullness_certificate(&seq);
    println!(
        "exceptional {}, strong {}, Ext²-free {}, fullness {:?} ({} of {})",
        is_exceptional(&seq)?.holds,
        is_strong(&seq)?.holds,
        ext2_free(&seq)?.holds,
        full.status,
        full.length,
        full.expected_length
    );
    for w in is_strong(&seq)?.witnesses.iter().take(3) {
        println!("    not strong: {w:?}");
    }
    Ok(())
}

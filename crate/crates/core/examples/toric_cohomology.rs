//! Line bundle cohomology on a smooth projective toric surface, total and by
//! torus character, and the rank of multiplication by a section on H¹.
//!
//! `cargo run --example toric_cohomology`

use tiltsurf::piclattice::Surface;
use tiltsurf::toric::{cohomology, cup_product_ranks, graded_cohomology, invariant_rep};

fn main() -> tiltsurf::Result<()> {
    let s = Surface::new_hirzebruch(0)?.blow_up_labels(&["P|E", "E1|E"])?;
    let k = s.canonical_class();
    let classes = [
        s.class_pq(2, -3),
        &s.class_pq(1, 1) - &s.exceptional_pullback_class(1)?,
        &s.exceptional_pullback_class(2)? - &s.exceptional_pullback_class(1)?,
        k.clone(),
    ];
    for c in &classes {
        let h = cohomology(&s, c)?;
        let dual = cohomology(&s, &(&k - c))?;
        println!(
            "{c:>16}: h = ({}, {}, {}), χ = {}, Serre dual ({}, {}, {}), invariant rep {:?}",
            h.h0,
            h.h1,
            h.h2,
            h.euler(),
            dual.h2,
            dual.h1,
            dual.h0,
            invariant_rep(&s, c)?.coeffs()
        );
        let g = graded_cohomology(&s, c)?;
        if !g.h1.is_empty() {
            println!("{:>18}H¹ characters {:?}", "", g.h1);
        }
    }

    // Multiplying H¹(O(-2, 0)) by the section of O(R_2) cutting out R_2.
    let base = s.class_pq(-2, 0);
    let r = s.exceptional_pullback_class(2)?;
    println!(
        "rank of H¹({base}) → H¹({}) by character: {:?}",
        &base + &r,
        cup_product_ranks(&s, &r, &base)?
    );
    Ok(())
}

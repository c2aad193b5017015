//! The endomorphism algebra of a tilting bundle through dimension data:
//! Δ-multiplicities, Cartan matrix, standard modules and the signature of
//! the Auslander algebra of `k[x]/x^t` on a chain block.
//!
//! `cargo run --example qha`

use tiltsurf::exc::augment_along;
use tiltsurf::piclattice::{Center, Side, Surface};
use tiltsurf::qha::{auslander_recognizer, delta_data, good_module_check, rank_order};
use tiltsurf::uext::{ext_graph, hom_table, universal_extension_sequence, BlockModes, Recursion};

fn main() -> tiltsurf::Result<()> {
    let s = Surface::new_hirzebruch(0)?
        .blow_up_labels(&["P|E"])?
        .blow_up(&Center::OnExceptional {
            id: 1,
            side: Side::Left,
        })?
        .blow_up(&Center::OnExceptional {
            id: 2,
            side: Side::Left,
        })?;
    let seq = augment_along(&s, 0, &[1, 1, 1])?;
    let c = universal_extension_sequence(&seq, &BlockModes::default(), Recursion::Above)?;
    let q = delta_data(&c, &hom_table(&c, &seq)?)?;
    println!("status {:?}", q.status);
    println!("M = [P(i) : Δ(j)]\n{}", q.delta_mult);
    println!("C = dim Hom(T_i, T_j)\n{}", q.cartan);
    println!("D = dim Hom(T_i, L_j)\n{}", q.delta_dim);

    for block in ext_graph(&seq)?.nontrivial_blocks() {
        println!(
            "block {block:?}: summands by rank {:?}, Auslander signature {}",
            rank_order(&q, block),
            auslander_recognizer(&q, block)
        );
    }
    // A module filtered by Δ(1) and two copies of Δ(2).
    let mut mult = vec![0; seq.len()];
    mult[0] = 1;
    mult[1] = 2;
    println!(
        "dimension vector of Δ(1) + 2Δ(2): {:?}",
        good_module_check(&q, &mult)?
    );
    Ok(())
}

//! Universal (co)extensions along a chain of blow-ups: the bundle absorbing
//! the whole chain has rank t and the result is a tilting bundle.
//!
//! `cargo run --example chain_tilting -- 4`

use tiltsurf::exc::augment_along;
use tiltsurf::piclattice::{Center, Side, Surface};
use tiltsurf::uext::{
    ext_graph, hom_table, tilting_certificate, universal_extension_sequence, BlockModes, Mode,
    Recursion,
};

fn main() -> tiltsurf::Result<()> {
    let t: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(3);
    let mut s = Surface::new_hirzebruch(0)?.blow_up_labels(&["P|E"])?;
    for v in 1..t {
        s = s.blow_up(&Center::OnExceptional {
            id: v,
            side: Side::Left,
        })?;
    }
    let seq = augment_along(&s, 0, &vec![1; t])?;
    let labels: Vec<String> = seq.classes().iter().map(ToString::to_string).collect();
    println!("sequence: ({})", labels.join(", "));
    print!("{}", ext_graph(&seq)?.to_dot(&labels));

    for mode in [Mode::Extend, Mode::Coextend] {
        let c = universal_extension_sequence(&seq, &BlockModes::uniform(mode), Recursion::Above)?;
        println!("{mode:?}: ranks {:?}", c.ranks());
        for step in &c.trace {
            println!(
                "    T_{} ← L_{}: Ext¹ = {} ({:?})",
                step.object, step.by, step.ext1, step.rule
            );
        }
        let hom = hom_table(&c, &seq)?;
        let cert = tilting_certificate(&c, &seq, &hom);
        println!("  Hom dimensions:\n{}  tilting: {}", hom.dims, cert.pass);
    }
    Ok(())
}

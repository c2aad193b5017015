//! Iterated toric blow-ups: the Picard lattice, intersection form, canonical
//! class and the partial order between exceptional curves.
//!
//! `cargo run --example blowup_lattice`

use tiltsurf::piclattice::{Center, Side, Surface};

fn main() -> tiltsurf::Result<()> {
    let s = Surface::new_hirzebruch(1)?
        .blow_up_labels(&["P|E", "P'|Q"])?
        .blow_up(&Center::OnExceptional {
            id: 1,
            side: Side::Right,
        })?;
    let k = s.canonical_class();
    println!(
        "Pic rank {}, K = {k}, K² = {}",
        s.pic_rank(),
        s.intersect(&k, &k)?
    );

    println!("rays and their self-intersections:");
    for (ray, class) in s.fan().rays().iter().zip(s.ray_classes()) {
        println!(
            "    {:>3} {:?}  {class}  ({})",
            ray.label,
            ray.vector,
            s.intersect(class, class)?
        );
    }

    println!("exceptional curves:");
    for r in s.blowups() {
        let pulled = s.exceptional_pullback_class(r.id)?;
        println!(
            "    R_{}: level {}, center {}, above {:?}, strict transform {}, R² = {}",
            r.id,
            r.level,
            r.center,
            r.ancestors,
            s.strict_transform_class(r.id)?,
            s.intersect(&pulled, &pulled)?
        );
    }
    print!("{}", s.blow_up_graph().to_dot());
    Ok(())
}

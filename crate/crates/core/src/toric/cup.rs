//! Torus-graded pieces of `H¹` and the multiplication
//! `H⁰(A) ⊗ H¹(B) → H¹(A + B)`.
//!
//! For an invariant divisor `D = Σ a_ρ D_ρ` and a character `m`, the graded
//! piece `H^p(O(D))_m` is the reduced cohomology `H̃^{p-1}` of the subcomplex
//! of the fan spanned by the rays with `⟨m, v_ρ⟩ < -a_ρ`. On a complete
//! surface fan these rays form arcs of a cycle, so `H¹_m` is functions on the
//! arcs modulo constants. Multiplying by a section `χ^{m'}` of `O(A)` shrinks
//! the ray set and acts by restriction.
//!
//! Every map between equivariant objects built from these line bundles
//! preserves the character, which is what lets extension bookkeeping run one
//! degree at a time.

use std::collections::BTreeMap;

use super::{cohomology, count_lattice_points, invariant_rep, InvariantDivisor};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::piclattice::{DivisorClass, Surface};

/// A character of the torus, as a point of the dual lattice.
pub type Character = [i64; 2];

/// Dimensions by character; characters not listed have dimension zero.
pub type Weights = BTreeMap<Character, u64>;

/// `H⁰` and `H¹` of a line bundle, split by character.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedCohomology {
    pub h0: Weights,
    pub h1: Weights,
}

/// Component index of every ray in the negative set, and the number of components.
fn negative_arcs(rays: &[[i64; 2]], a: &[i64], m: Character) -> (Vec<Option<usize>>, usize) {
    let n = rays.len();
    let neg: Vec<bool> = rays
        .iter()
        .zip(a)
        .map(|(v, &ak)| m[0] * v[0] + m[1] * v[1] < -ak)
        .collect();
    let mut comp = vec![None; n];
    let Some(start) = (0..n).find(|&k| !neg[k]) else {
        // The whole cycle.
        return (vec![Some(0); n], 1);
    };
    let mut count = 0;
    for step in 1..=n {
        let k = (start + step) % n;
        if neg[k] {
            let prev = (k + n - 1) % n;
            comp[k] = if neg[prev] {
                comp[prev]
            } else {
                count += 1;
                Some(count - 1)
            };
        }
    }
    (comp, count)
}

fn h1_dim(comp: &[Option<usize>], count: usize) -> usize {
    let full = comp.iter().all(Option::is_some);
    if full || count == 0 {
        0
    } else {
        count - 1
    }
}

fn rays_of(s: &Surface) -> Vec<[i64; 2]> {
    s.fan().rays().iter().map(|r| r.vector).collect()
}

/// Grows a centred box until `collect(radius)` reports the expected total.
fn search_box<T>(
    start: i64,
    expected: u64,
    mut collect: impl FnMut(i64) -> (Vec<T>, u64),
) -> Result<Vec<T>> {
    let mut radius = start.max(2);
    loop {
        let (items, total) = collect(radius);
        if total == expected {
            return Ok(items);
        }
        if radius > 1 << 12 {
            return Err(Error::Precondition(format!(
                "character search did not converge (found {total} of {expected})"
            )));
        }
        radius *= 2;
    }
}

fn box_points(radius: i64) -> impl Iterator<Item = Character> {
    (-radius..=radius).flat_map(move |x| (-radius..=radius).map(move |y| [x, y]))
}

/// Characters of `H⁰(O(D))`.
pub fn h0_characters(s: &Surface, d: &InvariantDivisor) -> Result<Vec<Character>> {
    let rays = rays_of(s);
    let expected = count_lattice_points(&rays, d.coeffs());
    let start = d.coeffs().iter().map(|x| x.abs()).sum::<i64>() + 1;
    search_box(start, expected, |r| {
        let pts: Vec<Character> = box_points(r)
            .filter(|&m| {
                rays.iter()
                    .zip(d.coeffs())
                    .all(|(v, &a)| m[0] * v[0] + m[1] * v[1] >= -a)
            })
            .collect();
        let n = pts.len() as u64;
        (pts, n)
    })
}

/// Characters `m` with `H¹(O(c))_m ≠ 0` and their dimensions.
pub fn h1_characters(s: &Surface, c: &DivisorClass) -> Result<Vec<(Character, usize)>> {
    let rays = rays_of(s);
    let d = invariant_rep(s, c)?;
    let expected = cohomology(s, c)?.h1;
    let start = d.coeffs().iter().map(|x| x.abs()).sum::<i64>() + 1;
    search_box(start, expected, |r| {
        let pts: Vec<(Character, usize)> = box_points(r)
            .filter_map(|m| {
                let (comp, count) = negative_arcs(&rays, d.coeffs(), m);
                let h = h1_dim(&comp, count);
                (h > 0).then_some((m, h))
            })
            .collect();
        let n = pts.iter().map(|(_, h)| *h as u64).sum();
        (pts, n)
    })
}

/// `H⁰(O(c))` and `H¹(O(c))` by character, for the invariant representative
/// of `c`. Representatives are additive in the class, so products land in
/// the sum of the degrees.
pub fn graded_cohomology(s: &Surface, c: &DivisorClass) -> Result<GradedCohomology> {
    let d = invariant_rep(s, c)?;
    Ok(GradedCohomology {
        h0: h0_characters(s, &d)?.into_iter().map(|m| (m, 1)).collect(),
        h1: h1_characters(s, c)?
            .into_iter()
            .map(|(m, h)| (m, h as u64))
            .collect(),
    })
}

/// Rank of the multiplication `H⁰(O(A)) ⊗ H¹(O(B)) → H¹(O(A + B))`.
pub fn cup_product_rank(s: &Surface, a: &DivisorClass, b: &DivisorClass) -> Result<u64> {
    Ok(cup_product_ranks(s, a, b)?.values().sum())
}

/// The same multiplication, rank by target character.
pub fn cup_product_ranks(s: &Surface, a: &DivisorClass, b: &DivisorClass) -> Result<Weights> {
    let rays = rays_of(s);
    let ra = invariant_rep(s, a)?;
    let rb = invariant_rep(s, b)?;
    let rab: Vec<i64> = ra
        .coeffs()
        .iter()
        .zip(rb.coeffs())
        .map(|(x, y)| x + y)
        .collect();
    let sections = h0_characters(s, &ra)?;
    let classes = h1_characters(s, b)?;
    if sections.is_empty() || classes.is_empty() {
        return Ok(Weights::new());
    }

    // Columns of the restriction maps, grouped by target character.
    let mut columns: BTreeMap<Character, (usize, Vec<Vec<i64>>)> = BTreeMap::new();
    for &(m, _) in &classes {
        let (src, src_count) = negative_arcs(&rays, rb.coeffs(), m);
        for &mp in &sections {
            let n = [m[0] + mp[0], m[1] + mp[1]];
            let (dst, dst_count) = negative_arcs(&rays, &rab, n);
            if h1_dim(&dst, dst_count) == 0 {
                continue;
            }
            let entry = columns.entry(n).or_insert_with(|| (dst_count, Vec::new()));
            for c in 0..src_count {
                let mut col = vec![0i64; dst_count];
                for (k, d) in dst.iter().enumerate() {
                    if let Some(d) = d {
                        debug_assert!(src[k].is_some(), "negative set must shrink");
                        if src[k] == Some(c) {
                            col[*d] = 1;
                        }
                    }
                }
                entry.1.push(col);
            }
        }
    }

    let mut ranks = Weights::new();
    for (n, (rows, cols)) in columns {
        let m = IntMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i]);
        // Constants map to constants, so the reduced image loses exactly one dimension.
        let r = (m.rank() - 1) as u64;
        if r > 0 {
            ranks.insert(n, r);
        }
    }
    Ok(ranks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arcs_on_square() {
        let f0 = [[1, 0], [0, 1], [-1, 0], [0, -1]];
        // a_P = -2 at m = 0: only the ray P is negative.
        let (comp, count) = negative_arcs(&f0, &[-2, 0, 0, 0], [0, 0]);
        assert_eq!(count, 1);
        assert_eq!(comp, vec![Some(0), None, None, None]);
        let (_, count) = negative_arcs(&f0, &[-1, 0, -1, 0], [0, 0]);
        assert_eq!(count, 2);
        let (comp, count) = negative_arcs(&f0, &[-1, -1, -1, -1], [0, 0]);
        assert_eq!((count, h1_dim(&comp, count)), (1, 0));
    }

    #[test]
    fn h1_characters_sum_to_h1() {
        let s = Surface::new_hirzebruch(1).unwrap();
        let c = s.class_pq(-3, 0);
        let h: usize = h1_characters(&s, &c).unwrap().iter().map(|x| x.1).sum();
        assert_eq!(h as u64, cohomology(&s, &c).unwrap().h1);
        assert_eq!(h, 2);
    }

    #[test]
    fn multiplication_by_one_is_identity() {
        let s = Surface::new_hirzebruch(2)
            .unwrap()
            .blow_up_labels(&["P|E"])
            .unwrap();
        let b = &s.class_pq(-4, 0) + &s.exceptional_pullback_class(1).unwrap();
        let h1 = cohomology(&s, &b).unwrap().h1;
        assert!(h1 > 0);
        assert_eq!(
            cup_product_rank(&s, &DivisorClass::zero(3), &b).unwrap(),
            h1
        );
        let g = graded_cohomology(&s, &b).unwrap();
        assert_eq!(
            cup_product_ranks(&s, &DivisorClass::zero(3), &b).unwrap(),
            g.h1
        );
    }

    #[test]
    fn graded_totals() {
        let s = Surface::new_hirzebruch(1)
            .unwrap()
            .blow_up_labels(&["P|E"])
            .unwrap();
        for c in [
            s.class_pq(2, 1),
            s.class_pq(-3, 0),
            &s.class_p() - &s.exceptional_pullback_class(1).unwrap(),
        ] {
            let g = graded_cohomology(&s, &c).unwrap();
            let h = cohomology(&s, &c).unwrap();
            assert_eq!(g.h0.values().sum::<u64>(), h.h0);
            assert_eq!(g.h1.values().sum::<u64>(), h.h1);
        }
    }
}

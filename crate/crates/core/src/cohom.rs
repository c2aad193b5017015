//! Ext dimensions between line bundles.
//!
//! On a surface `Ext^q(O(a), O(b)) = H^q(O(b - a))`, so every table here is a
//! table of cohomology vectors of differences. Objects that are not line
//! bundles are handled downstream by bilinearity over their filtration
//! multiplicities, using the Euler form collected in [`EulerMatrix`].

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::IntMatrix;
use crate::piclattice::{BlowupId, DivisorClass, Surface};
use crate::toric::{cohomology, CohomologyVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtTriple {
    pub hom: u64,
    pub ext1: u64,
    pub ext2: u64,
}

impl ExtTriple {
    pub const ZERO: Self = Self {
        hom: 0,
        ext1: 0,
        ext2: 0,
    };

    pub fn new(hom: u64, ext1: u64, ext2: u64) -> Self {
        Self { hom, ext1, ext2 }
    }

    pub fn euler(&self) -> i64 {
        self.hom as i64 - self.ext1 as i64 + self.ext2 as i64
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }
}

impl From<CohomologyVector> for ExtTriple {
    fn from(h: CohomologyVector) -> Self {
        Self::new(h.h0, h.h1, h.h2)
    }
}

pub fn ext_dims(s: &Surface, a: &DivisorClass, b: &DivisorClass) -> Result<ExtTriple> {
    Ok(cohomology(s, &(b - a))?.into())
}

/// All `Ext^•(L_k, L_l)` for a list of line bundles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtTable(Vec<Vec<ExtTriple>>);

impl ExtTable {
    pub fn compute(s: &Surface, classes: &[DivisorClass]) -> Result<Self> {
        let rows = classes
            .iter()
            .map(|a| classes.iter().map(|b| ext_dims(s, a, b)).collect())
            .collect::<Result<_>>()?;
        Ok(Self(rows))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, k: usize, l: usize) -> ExtTriple {
        self.0[k][l]
    }

    pub fn euler_matrix(&self) -> EulerMatrix {
        let n = self.len();
        EulerMatrix(IntMatrix::from_fn(n, n, |k, l| self.0[k][l].euler()))
    }
}

/// `X_{kl} = χ(L_k, L_l)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EulerMatrix(pub IntMatrix);

impl EulerMatrix {
    pub fn get(&self, k: usize, l: usize) -> i64 {
        self.0.get(k, l)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    /// `Σ_{k,l} a_k X_{kl} b_l`.
    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0;
        for (k, &ak) in a.iter().enumerate() {
            if ak == 0 {
                continue;
            }
            for (l, &bl) in b.iter().enumerate() {
                acc += ak * self.0.get(k, l) * bl;
            }
        }
        acc
    }
}

pub fn euler_matrix(s: &Surface, classes: &[DivisorClass]) -> Result<EulerMatrix> {
    Ok(ExtTable::compute(s, classes)?.euler_matrix())
}

/// Rank, first Chern class and `2·ch₂` of an object filtered by line bundles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernCharacter {
    pub rank: i64,
    pub c1: DivisorClass,
    pub twice_ch2: i64,
}

impl ChernCharacter {
    pub fn of_line_bundle(s: &Surface, l: &DivisorClass) -> Result<Self> {
        Ok(Self {
            rank: 1,
            c1: l.clone(),
            twice_ch2: s.intersect(l, l)?,
        })
    }

    /// Additive over a filtration with the given multiplicities.
    pub fn of_filtered(s: &Surface, pieces: &[DivisorClass], mult: &[i64]) -> Result<Self> {
        let mut acc = Self {
            rank: 0,
            c1: DivisorClass::zero(s.pic_rank()),
            twice_ch2: 0,
        };
        for (l, &m) in pieces.iter().zip(mult) {
            if m == 0 {
                continue;
            }
            acc.rank += m;
            acc.c1 = &acc.c1 + &(m * l);
            acc.twice_ch2 += m * s.intersect(l, l)?;
        }
        Ok(acc)
    }
}

/// `χ(A, B)` by Hirzebruch–Riemann–Roch on a rational surface:
/// `χ = rk(A^∨⊗B) + c₁(A^∨⊗B)·(-K)/2 + ch₂(A^∨⊗B)`.
pub fn rr_pairing(s: &Surface, a: &ChernCharacter, b: &ChernCharacter) -> Result<i64> {
    let k = s.canonical_class();
    let c1 = &(a.rank * &b.c1) - &(b.rank * &a.c1);
    let twice =
        2 * a.rank * b.rank - s.intersect(&c1, &k)? + a.rank * b.twice_ch2 + b.rank * a.twice_ch2
            - 2 * s.intersect(&a.c1, &b.c1)?;
    debug_assert_eq!(twice % 2, 0);
    Ok(twice / 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairMismatch {
    pub i: BlowupId,
    pub j: BlowupId,
    pub oracle: CohomologyVector,
    pub expected: CohomologyVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcyclicTwistFailure {
    pub blowup: BlowupId,
    pub class: DivisorClass,
    pub twisted: CohomologyVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    /// Ordered pairs `(i, j)` for which `O(R_i - R_j)` was compared.
    pub pairs_checked: usize,
    pub pair_mismatches: Vec<PairMismatch>,
    /// Acyclic pullback classes probed before each blow-up.
    pub acyclic_probes: usize,
    pub acyclic_failures: Vec<AcyclicTwistFailure>,
    pub passed: bool,
}

/// Closed form for `H^•(O(R_i - R_j))`: `(1,1,0)` exactly when `j ≻ i`
/// (the older curve minus the newer one is effective), `(1,0,0)` on the
/// diagonal, zero otherwise.
pub fn pullback_difference_closed_form(s: &Surface, i: BlowupId, j: BlowupId) -> CohomologyVector {
    if i == j {
        CohomologyVector::new(1, 0, 0)
    } else if s.above(j, i) {
        CohomologyVector::new(1, 1, 0)
    } else {
        CohomologyVector::ZERO
    }
}

/// Compares the cohomology oracle with two closed-form statements:
/// the table of `O(R_i - R_j)` over all pairs of blow-ups, and the fact that
/// twisting an acyclic pulled-back line bundle by the new exceptional curve
/// keeps it acyclic.
pub fn lemma_crosscheck(s: &Surface) -> Result<CrosscheckReport> {
    let t = s.num_blowups();
    let mut pair_mismatches = Vec::new();
    for i in 1..=t {
        for j in 1..=t {
            let d = &s.exceptional_pullback_class(i)? - &s.exceptional_pullback_class(j)?;
            let oracle = cohomology(s, &d)?;
            let expected = pullback_difference_closed_form(s, i, j);
            if oracle != expected {
                pair_mismatches.push(PairMismatch {
                    i,
                    j,
                    oracle,
                    expected,
                });
            }
        }
    }

    let mut acyclic_probes = 0;
    let mut acyclic_failures = Vec::new();
    let mut before = s.prefix(0)?;
    for k in 1..=t {
        let after = before.blow_up(&crate::piclattice::Center::Label(
            s.blowups()[k - 1].center.clone(),
        ))?;
        let e_new = after.exceptional_pullback_class(k)?;
        for l in acyclic_probe_classes(&before) {
            if !cohomology(&before, &l)?.is_zero() {
                continue;
            }
            acyclic_probes += 1;
            let twisted = &l.pullback(after.pic_rank())? + &e_new;
            let h = cohomology(&after, &twisted)?;
            if !h.is_zero() {
                acyclic_failures.push(AcyclicTwistFailure {
                    blowup: k,
                    class: twisted,
                    twisted: h,
                });
            }
        }
        before = after;
    }

    let passed = pair_mismatches.is_empty() && acyclic_failures.is_empty();
    Ok(CrosscheckReport {
        pairs_checked: t * t,
        pair_mismatches,
        acyclic_probes,
        acyclic_failures,
        passed,
    })
}

/// A finite probe set of classes: a box of base classes, base classes shifted
/// by one exceptional class, and differences of exceptional classes.
fn acyclic_probe_classes(s: &Surface) -> Vec<DivisorClass> {
    let r = s.pic_rank();
    let base = |a: i64, b: i64| {
        let mut v = vec![0; r];
        v[0] = a;
        v[1] = b;
        DivisorClass::new(v)
    };
    let mut out = Vec::new();
    for a in -3..=3 {
        for b in -3..=3 {
            out.push(base(a, b));
        }
    }
    for u in 2..r {
        for a in -2..=2 {
            for b in -2..=2 {
                for sign in [-1, 1] {
                    let mut c = base(a, b);
                    let mut v = c.coeffs().to_vec();
                    v[u] = sign;
                    c = DivisorClass::new(v);
                    out.push(c);
                }
            }
        }
        for w in 2..r {
            if w != u {
                let mut v = vec![0; r];
                v[u] = 1;
                v[w] = -1;
                out.push(DivisorClass::new(v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piclattice::{Center, Side};

    fn chain(t: usize) -> Surface {
        let mut s = Surface::new_hirzebruch(0)
            .unwrap()
            .blow_up_labels(&["P|E"])
            .unwrap();
        for v in 1..t {
            s = s
                .blow_up(&Center::OnExceptional {
                    id: v,
                    side: Side::Right,
                })
                .unwrap();
        }
        s
    }

    #[test]
    fn line_bundle_is_exceptional() {
        let s = chain(2);
        let l = &s.class_pq(2, 1) - &s.exceptional_pullback_class(1).unwrap();
        assert_eq!(ext_dims(&s, &l, &l).unwrap(), ExtTriple::new(1, 0, 0));
    }

    #[test]
    fn pullback_pair_in_chain() {
        let s = chain(2);
        let (r1, r2) = (
            s.exceptional_pullback_class(1).unwrap(),
            s.exceptional_pullback_class(2).unwrap(),
        );
        // 2 ≻ 1: Ext^•(O(R_2), O(R_1)) = H^•(O(R_1 - R_2)).
        assert_eq!(ext_dims(&s, &r2, &r1).unwrap(), ExtTriple::new(1, 1, 0));
        assert_eq!(ext_dims(&s, &r1, &r2).unwrap(), ExtTriple::ZERO);
    }

    #[test]
    fn fibre_to_section_on_f0() {
        let s = Surface::new_hirzebruch(0).unwrap();
        assert_eq!(
            ext_dims(&s, &s.class_p(), &s.class_q()).unwrap(),
            ExtTriple::ZERO
        );
    }

    #[test]
    fn euler_matrix_of_reversed_chain_is_identity() {
        let s = chain(4);
        let seq: Vec<_> = (1..=4)
            .rev()
            .map(|v| s.exceptional_pullback_class(v).unwrap())
            .collect();
        assert_eq!(euler_matrix(&s, &seq).unwrap().0, IntMatrix::identity(4));
    }

    #[test]
    fn rr_pairing_agrees_with_line_bundle_chi() {
        let s = chain(3);
        let classes = [
            DivisorClass::zero(5),
            s.class_pq(1, 0),
            &s.class_pq(2, 1) - &s.exceptional_pullback_class(2).unwrap(),
            s.exceptional_pullback_class(3).unwrap(),
        ];
        let table = ExtTable::compute(&s, &classes).unwrap();
        for (k, a) in classes.iter().enumerate() {
            for (l, b) in classes.iter().enumerate() {
                let ca = ChernCharacter::of_line_bundle(&s, a).unwrap();
                let cb = ChernCharacter::of_line_bundle(&s, b).unwrap();
                assert_eq!(rr_pairing(&s, &ca, &cb).unwrap(), table.get(k, l).euler());
            }
        }
    }

    #[test]
    fn crosscheck_chain_of_three() {
        let r = lemma_crosscheck(&chain(3)).unwrap();
        assert_eq!(r.pairs_checked, 9);
        assert!(r.pair_mismatches.is_empty(), "{:?}", r.pair_mismatches);
        assert!(r.acyclic_probes > 0);
        assert!(r.passed);
    }

    #[test]
    fn crosscheck_disjoint() {
        let s = Surface::new_hirzebruch(1)
            .unwrap()
            .blow_up_labels(&["P|E", "P'|Q"])
            .unwrap();
        let d =
            &s.exceptional_pullback_class(1).unwrap() - &s.exceptional_pullback_class(2).unwrap();
        assert_eq!(cohomology(&s, &d).unwrap(), CohomologyVector::ZERO);
        assert!(lemma_crosscheck(&s).unwrap().passed);
    }
}

//! Exceptional sequences of line bundles: Hirzebruch seeds, standard
//! augmentation and the certificates attached to a sequence.

use serde::{Deserialize, Serialize};

use crate::cohom::{ExtTable, ExtTriple};
use crate::error::{Error, Result};
use crate::piclattice::{BlowupId, DivisorClass, Surface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedParams {
    pub m: i64,
    pub a: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Augmentation {
    pub blowup: BlowupId,
    /// 1-based position in the sequence before augmenting.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A Hirzebruch seed followed by standard augmentations, one per blow-up.
    Standard {
        seed: SeedParams,
        augmentations: Vec<Augmentation>,
    },
    HandBuilt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBundleSequence {
    surface: Surface,
    classes: Vec<DivisorClass>,
    provenance: Provenance,
}

impl LineBundleSequence {
    pub fn hand_built(surface: Surface, classes: Vec<DivisorClass>) -> Result<Self> {
        for c in &classes {
            if c.rank() != surface.pic_rank() {
                return Err(Error::DimensionMismatch {
                    expected: surface.pic_rank(),
                    found: c.rank(),
                });
            }
        }
        Ok(Self {
            surface,
            classes,
            provenance: Provenance::HandBuilt,
        })
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn classes(&self) -> &[DivisorClass] {
        &self.classes
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn ext_table(&self) -> Result<ExtTable> {
        ExtTable::compute(&self.surface, &self.classes)
    }

    /// The sequence with the member at 1-based `position` removed.
    pub fn without(&self, position: usize) -> Result<Self> {
        check_position(position, self.len())?;
        let mut classes = self.classes.clone();
        classes.remove(position - 1);
        Self::hand_built(self.surface.clone(), classes)
    }

    /// The same classes in reverse order.
    pub fn reversed(&self) -> Self {
        let mut classes = self.classes.clone();
        classes.reverse();
        Self {
            surface: self.surface.clone(),
            classes,
            provenance: Provenance::HandBuilt,
        }
    }
}

fn check_position(position: usize, len: usize) -> Result<()> {
    if position == 0 || position > len {
        return Err(Error::PositionOutOfRange { position, len });
    }
    Ok(())
}

/// `(O, O(P), O(Q + aP), O(Q + (a+1)P))` on F_m.
pub fn hirzebruch_seed(m: i64, a: i64) -> Result<LineBundleSequence> {
    let s = Surface::new_hirzebruch(m)?;
    let classes = vec![
        DivisorClass::zero(2),
        s.class_p(),
        s.class_pq(a, 1),
        s.class_pq(a + 1, 1),
    ];
    Ok(LineBundleSequence {
        surface: s,
        classes,
        provenance: Provenance::Standard {
            seed: SeedParams { m, a },
            augmentations: Vec::new(),
        },
    })
}

/// `(L_1+e, …, L_{i-1}+e, L_i, L_i+e, L_{i+1}, …, L_n)` on the blow-up `s'`,
/// where `e` is the class of the new exceptional curve.
pub fn standard_augment(
    seq: &LineBundleSequence,
    blown_up: &Surface,
    position: usize,
) -> Result<LineBundleSequence> {
    let t = seq.surface.num_blowups();
    if blown_up.num_blowups() != t + 1 || blown_up.prefix(t)? != seq.surface {
        return Err(Error::SurfaceMismatch(format!(
            "expected a single blow-up of a surface with {t} blow-ups"
        )));
    }
    check_position(position, seq.len())?;
    let rank = blown_up.pic_rank();
    let e = blown_up.exceptional_pullback_class(t + 1)?;
    let mut classes = Vec::with_capacity(seq.len() + 1);
    for (k, c) in seq.classes.iter().enumerate() {
        let c = c.pullback(rank)?;
        let k = k + 1;
        if k < position {
            classes.push(&c + &e);
        } else if k == position {
            classes.push(c.clone());
            classes.push(&c + &e);
        } else {
            classes.push(c);
        }
    }
    let provenance = match &seq.provenance {
        Provenance::Standard {
            seed,
            augmentations,
        } => {
            let mut augmentations = augmentations.clone();
            augmentations.push(Augmentation {
                blowup: t + 1,
                position,
            });
            Provenance::Standard {
                seed: *seed,
                augmentations,
            }
        }
        Provenance::HandBuilt => Provenance::HandBuilt,
    };
    Ok(LineBundleSequence {
        surface: blown_up.clone(),
        classes,
        provenance,
    })
}

/// A violating ordered pair, 1-based positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub source: usize,
    pub target: usize,
    pub ext: ExtTriple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub holds: bool,
    pub witnesses: Vec<PairWitness>,
}

impl Certificate {
    fn from_witnesses(witnesses: Vec<PairWitness>) -> Self {
        Self {
            holds: witnesses.is_empty(),
            witnesses,
        }
    }
}

fn scan(table: &ExtTable, bad: impl Fn(usize, usize, ExtTriple) -> bool) -> Certificate {
    let n = table.len();
    let mut witnesses = Vec::new();
    for j in 0..n {
        for k in 0..n {
            let ext = table.get(j, k);
            if bad(j, k, ext) {
                witnesses.push(PairWitness {
                    source: j + 1,
                    target: k + 1,
                    ext,
                });
            }
        }
    }
    Certificate::from_witnesses(witnesses)
}

/// `Ext^•(L_i, L_i) = (1,0,0)` and `Ext^•(L_j, L_k) = 0` for `j > k`.
pub fn exceptional_from_table(table: &ExtTable) -> Certificate {
    scan(table, |j, k, ext| match j.cmp(&k) {
        std::cmp::Ordering::Equal => ext != ExtTriple::new(1, 0, 0),
        std::cmp::Ordering::Greater => !ext.is_zero(),
        std::cmp::Ordering::Less => false,
    })
}

/// Exceptional, and no higher Ext in the forward direction.
pub fn strong_from_table(table: &ExtTable) -> Certificate {
    let mut cert = exceptional_from_table(table);
    let forward = scan(table, |j, k, ext| j < k && (ext.ext1 != 0 || ext.ext2 != 0));
    cert.witnesses.extend(forward.witnesses);
    cert.holds = cert.witnesses.is_empty();
    cert
}

/// `Ext²` vanishes between any two members, in both directions.
pub fn ext2_free_from_table(table: &ExtTable) -> Certificate {
    scan(table, |_, _, ext| ext.ext2 != 0)
}

pub fn is_exceptional(seq: &LineBundleSequence) -> Result<Certificate> {
    Ok(exceptional_from_table(&seq.ext_table()?))
}

pub fn is_strong(seq: &LineBundleSequence) -> Result<Certificate> {
    Ok(strong_from_table(&seq.ext_table()?))
}

pub fn ext2_free(seq: &LineBundleSequence) -> Result<Certificate> {
    Ok(ext2_free_from_table(&seq.ext_table()?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fullness {
    /// Right length, and built from a seed by one standard augmentation per blow-up.
    Full,
    /// Right length, but fullness is not implied by how the sequence was built.
    LengthConsistentOnly,
    FailsLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullnessCertificate {
    pub status: Fullness,
    pub length: usize,
    /// Rank of the Grothendieck group, `pic_rank + 2`.
    pub expected_length: usize,
}

pub fn fullness_certificate(seq: &LineBundleSequence) -> FullnessCertificate {
    let expected_length = seq.surface.k0_rank();
    let length = seq.len();
    let by_construction = match &seq.provenance {
        Provenance::Standard { augmentations, .. } => {
            augmentations.len() == seq.surface.num_blowups()
                && augmentations
                    .iter()
                    .enumerate()
                    .all(|(k, a)| a.blowup == k + 1)
        }
        Provenance::HandBuilt => false,
    };
    let status = if length != expected_length {
        Fullness::FailsLength
    } else if by_construction {
        Fullness::Full
    } else {
        Fullness::LengthConsistentOnly
    };
    FullnessCertificate {
        status,
        length,
        expected_length,
    }
}

/// Seed on `surface.prefix(0)` followed by one augmentation per blow-up of
/// `surface`, at the given 1-based positions.
pub fn augment_along(surface: &Surface, a: i64, positions: &[usize]) -> Result<LineBundleSequence> {
    let t = surface.num_blowups();
    if positions.len() != t {
        return Err(Error::Precondition(format!(
            "{} augmentation positions given for {t} blow-ups",
            positions.len()
        )));
    }
    let mut seq = hirzebruch_seed(surface.base_m(), a)?;
    for (k, &pos) in positions.iter().enumerate() {
        let next = surface.prefix(k + 1)?;
        seq = standard_augment(&seq, &next, pos)?;
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piclattice::{Center, Side};

    #[test]
    fn seed_f0_is_strong() {
        let seq = hirzebruch_seed(0, 0).unwrap();
        assert!(is_exceptional(&seq).unwrap().holds);
        assert!(is_strong(&seq).unwrap().holds);
        assert_eq!(fullness_certificate(&seq).status, Fullness::Full);
    }

    #[test]
    fn negative_a_is_not_strong() {
        let seq = hirzebruch_seed(2, -1).unwrap();
        assert!(is_exceptional(&seq).unwrap().holds);
        let strong = is_strong(&seq).unwrap();
        assert!(!strong.holds);
        assert!(!strong.witnesses.is_empty());
    }

    #[test]
    fn reversed_seed_fails_with_witness() {
        let seq = hirzebruch_seed(0, 0).unwrap().reversed();
        let cert = is_exceptional(&seq).unwrap();
        assert!(!cert.holds);
        assert!(cert.witnesses.iter().any(|w| w.source > w.target));
    }

    #[test]
    fn augment_at_one_on_f0() {
        let seq = hirzebruch_seed(0, 0).unwrap();
        let s1 = seq.surface().blow_up(&Center::Label("P|E".into())).unwrap();
        let aug = standard_augment(&seq, &s1, 1).unwrap();
        let e = s1.exceptional_pullback_class(1).unwrap();
        assert_eq!(
            aug.classes(),
            &[
                DivisorClass::zero(3),
                e,
                s1.class_p(),
                s1.class_q(),
                s1.class_pq(1, 1)
            ]
        );
        assert!(is_exceptional(&aug).unwrap().holds);
    }

    #[test]
    fn augment_at_last_position() {
        let seq = hirzebruch_seed(1, 0).unwrap();
        let s1 = seq.surface().blow_up(&Center::Cone(1)).unwrap();
        let aug = standard_augment(&seq, &s1, 4).unwrap();
        assert_eq!(aug.len(), 5);
        let e = s1.exceptional_pullback_class(1).unwrap();
        assert_eq!(aug.classes()[4], &aug.classes()[3] + &e);
        assert_eq!(aug.classes()[0], &DivisorClass::zero(3) + &e);
    }

    #[test]
    fn augmentation_errors() {
        let seq = hirzebruch_seed(0, 0).unwrap();
        let s2 = seq.surface().blow_up_labels(&["P|E", "P'|Q"]).unwrap();
        assert!(matches!(
            standard_augment(&seq, &s2, 1),
            Err(Error::SurfaceMismatch(_))
        ));
        let s1 = s2.prefix(1).unwrap();
        assert_eq!(
            standard_augment(&seq, &s1, 5),
            Err(Error::PositionOutOfRange {
                position: 5,
                len: 4
            })
        );
    }

    #[test]
    fn chain_sequence_is_ext2_free_but_not_strong() {
        let mut s = Surface::new_hirzebruch(0)
            .unwrap()
            .blow_up_labels(&["P|E"])
            .unwrap();
        for v in 1..3 {
            s = s
                .blow_up(&Center::OnExceptional {
                    id: v,
                    side: Side::Left,
                })
                .unwrap();
        }
        let seq = augment_along(&s, 0, &[1, 1, 1]).unwrap();
        assert_eq!(seq.len(), 7);
        assert!(is_exceptional(&seq).unwrap().holds);
        assert!(ext2_free(&seq).unwrap().holds);
        assert!(!is_strong(&seq).unwrap().holds);
        assert_eq!(fullness_certificate(&seq).status, Fullness::Full);
    }

    #[test]
    fn fullness_levels() {
        let seq = hirzebruch_seed(0, 0).unwrap();
        let hb =
            LineBundleSequence::hand_built(seq.surface().clone(), seq.classes().to_vec()).unwrap();
        assert_eq!(
            fullness_certificate(&hb).status,
            Fullness::LengthConsistentOnly
        );
        let short = seq.without(2).unwrap();
        assert_eq!(fullness_certificate(&short).status, Fullness::FailsLength);
    }
}

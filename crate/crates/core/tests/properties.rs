//! Structural invariants as properties over random blow-up trees.

mod common;

use proptest::prelude::*;
use tiltsurf::cohom::{rr_pairing, ChernCharacter};
use tiltsurf::exc::{augment_along, ext2_free, is_exceptional};
use tiltsurf::matrix::IntMatrix;
use tiltsurf::piclattice::{DivisorClass, Surface};
use tiltsurf::pipeline::{run, PipelineConfig};
use tiltsurf::qha::delta_data;
use tiltsurf::toric::{class_of, cohomology, euler_char, graded_cohomology, invariant_rep};
use tiltsurf::uext::{hom_table, universal_extension_sequence, BlockModes, Mode, Recursion};
use tiltsurf::Error;

fn tree(seed: u64, max_t: usize) -> Surface {
    let mut r = common::rng(seed);
    let t = rand::Rng::gen_range(&mut r, 0..=max_t);
    common::random_tree(&mut r, 3, t)
}

fn class(s: &Surface, coeffs: &[i64]) -> DivisorClass {
    DivisorClass::new(coeffs.iter().cycle().take(s.pic_rank()).copied().collect())
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn intersection_is_symmetric_bilinear(seed in any::<u64>(), a in coeffs(), b in coeffs(), c in coeffs()) {
        let s = tree(seed, 6);
        let (a, b, c) = (class(&s, &a), class(&s, &b), class(&s, &c[..]));
        prop_assert_eq!(s.intersect(&a, &b).unwrap(), s.intersect(&b, &a).unwrap());
        prop_assert_eq!(
            s.intersect(&(&a + &b), &c).unwrap(),
            s.intersect(&a, &c).unwrap() + s.intersect(&b, &c).unwrap()
        );
    }

    #[test]
    fn serre_duality_and_riemann_roch(seed in any::<u64>(), a in coeffs()) {
        let s = tree(seed, 6);
        let c = class(&s, &a);
        let h = cohomology(&s, &c).unwrap();
        let dual = cohomology(&s, &(&s.canonical_class() - &c)).unwrap();
        prop_assert_eq!((h.h0, h.h1, h.h2), (dual.h2, dual.h1, dual.h0));
        prop_assert_eq!(h.euler(), euler_char(&s, &c).unwrap());
        let g = graded_cohomology(&s, &c).unwrap();
        prop_assert_eq!(g.h1.values().sum::<u64>(), h.h1);
    }

    #[test]
    fn invariant_representatives_are_linear(seed in any::<u64>(), a in coeffs(), b in coeffs()) {
        let s = tree(seed, 6);
        let (a, b) = (class(&s, &a), class(&s, &b));
        let (ra, rb) = (invariant_rep(&s, &a).unwrap(), invariant_rep(&s, &b).unwrap());
        let rab = invariant_rep(&s, &(&a + &b)).unwrap();
        let sum: Vec<i64> = ra.coeffs().iter().zip(rb.coeffs()).map(|(x, y)| x + y).collect();
        prop_assert_eq!(rab.coeffs(), &sum[..]);
        prop_assert_eq!(class_of(&s, &ra), a);
    }

    #[test]
    fn augmentation_keeps_exceptional_and_ext2_free(seed in any::<u64>(), a in 0i64..=3) {
        let s = tree(seed, 6);
        let mut r = common::rng(seed ^ 0xa5a5);
        let positions = common::random_positions(&mut r, s.num_blowups());
        let seq = augment_along(&s, a, &positions).unwrap();
        prop_assert_eq!(seq.len(), s.k0_rank());
        prop_assert!(is_exceptional(&seq).unwrap().holds);
        prop_assert!(ext2_free(&seq).unwrap().holds);
    }

    #[test]
    fn candidate_invariants(seed in any::<u64>(), coextend in any::<bool>(), above in any::<bool>()) {
        let s = tree(seed, 6);
        let seq = common::standard_sequence(&s);
        let mode = if coextend { Mode::Coextend } else { Mode::Extend };
        let recursion = if above { Recursion::Above } else { Recursion::Sequence };
        let c = match universal_extension_sequence(&seq, &BlockModes::uniform(mode), recursion) {
            Ok(c) => c,
            Err(Error::UndeterminedBoundaryRank { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let m = c.mult_matrix();
        match mode {
            Mode::Extend => prop_assert!(m.is_upper_unitriangular()),
            Mode::Coextend => prop_assert!(m.is_lower_unitriangular()),
        }
        // rank = 1 + Σ e1 over the steps of each object.
        for summand in &c.summands {
            let p = summand.object.distinguished;
            let grown: u64 = c.trace.iter().filter(|st| st.object == p).map(|st| st.ext1).sum();
            prop_assert_eq!(summand.rank as u64, 1 + grown);
        }
        let h = hom_table(&c, &seq).unwrap();
        prop_assert!(h.certificate.holds);
        let q = delta_data(&c, &h).unwrap();
        let x = c.euler.matrix();
        prop_assert_eq!(&q.cartan, &m.mul(x).mul(&m.transpose()));
        prop_assert_eq!(&q.cartan, &h.dims);
        // Every Hom dimension is the Riemann–Roch pairing of the Chern characters.
        let n = c.len();
        let ch: Vec<ChernCharacter> = c
            .summands
            .iter()
            .map(|t| ChernCharacter::of_filtered(&s, seq.classes(), &t.object.mult).unwrap())
            .collect();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(h.dims.get(i, j), rr_pairing(&s, &ch[i], &ch[j]).unwrap());
            }
        }
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let s = tree(seed, 4);
        let blowups: Vec<serde_json::Value> = s
            .blowups()
            .iter()
            .map(|r| serde_json::json!({ "cone": r.center }))
            .collect();
        let text = serde_json::json!({ "base": s.base_m(), "blowups": blowups }).to_string();
        let config = PipelineConfig::from_json(&text).unwrap();
        match (run(&config), run(&config)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.to_json(), b.to_json());
                // The serialized input alone reproduces the certificates.
                let again = PipelineConfig::from_json(&serde_json::to_string(&a.input).unwrap()).unwrap();
                let c = run(&again).unwrap();
                prop_assert_eq!(
                    serde_json::to_value(&c.certificates).unwrap(),
                    serde_json::to_value(&a.certificates).unwrap()
                );
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            _ => prop_assert!(false, "nondeterministic outcome"),
        }
    }
}

#[test]
fn multiplicity_matrix_is_unimodular_on_chains() {
    for t in 1..=6 {
        let seq = common::standard_sequence(&common::chain(t));
        for mode in [Mode::Extend, Mode::Coextend] {
            let c =
                universal_extension_sequence(&seq, &BlockModes::uniform(mode), Recursion::Sequence)
                    .unwrap();
            let m: IntMatrix = c.mult_matrix();
            assert!(m.is_upper_unitriangular() || m.is_lower_unitriangular());
        }
    }
}

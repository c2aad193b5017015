//! Exact line-bundle cohomology on the fan model.
//!
//! `h0` counts lattice points of the polygon `{u : ⟨u, v_ρ⟩ ≥ -a_ρ}`,
//! `h2` comes from Serre duality as `h0(K - D)`, and `h1` is whatever the
//! Riemann–Roch Euler characteristic leaves over. Everything is integer or
//! rational arithmetic.

mod cup;
mod fan;
mod lattice;

use serde::{Deserialize, Serialize};

pub use cup::{
    cup_product_rank, cup_product_ranks, graded_cohomology, h0_characters, h1_characters,
    Character, GradedCohomology, Weights,
};
pub use fan::{Cone, Fan, Ray};
pub use lattice::count_lattice_points;

use crate::error::{Error, Result};
use crate::piclattice::{DivisorClass, Surface};

/// `Σ a_ρ D_ρ`, with coefficients aligned to the surface's ray list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InvariantDivisor(pub Vec<i64>);

impl InvariantDivisor {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyVector {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
}

impl CohomologyVector {
    pub const ZERO: Self = Self {
        h0: 0,
        h1: 0,
        h2: 0,
    };

    pub fn new(h0: u64, h1: u64, h2: u64) -> Self {
        Self { h0, h1, h2 }
    }

    pub fn euler(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }
}

/// An invariant divisor in the class `c`, built from the pulled-back
/// representatives of the basis elements.
pub fn invariant_rep(s: &Surface, c: &DivisorClass) -> Result<InvariantDivisor> {
    check_rank(s, c)?;
    let mut coeffs = vec![0i64; s.fan().len()];
    for (k, &ck) in c.coeffs().iter().enumerate() {
        if ck == 0 {
            continue;
        }
        for (a, &r) in coeffs.iter_mut().zip(s.basis_rep(k)) {
            *a += ck * r;
        }
    }
    Ok(InvariantDivisor(coeffs))
}

/// Linear-equivalence class of an invariant divisor.
pub fn class_of(s: &Surface, d: &InvariantDivisor) -> DivisorClass {
    let mut acc = DivisorClass::zero(s.pic_rank());
    for (&a, c) in d.coeffs().iter().zip(s.ray_classes()) {
        if a != 0 {
            acc = &acc + &(a * c);
        }
    }
    acc
}

/// `-Σ D_ρ`.
pub fn anticanonical_divisor_rep(s: &Surface) -> InvariantDivisor {
    InvariantDivisor(vec![-1; s.fan().len()])
}

pub fn h0(s: &Surface, d: &InvariantDivisor) -> u64 {
    let rays: Vec<[i64; 2]> = s.fan().rays().iter().map(|r| r.vector).collect();
    count_lattice_points(&rays, d.coeffs())
}

/// Riemann–Roch: `χ(c) = 1 + c·(c - K)/2`.
pub fn euler_char(s: &Surface, c: &DivisorClass) -> Result<i64> {
    let k = s.canonical_class();
    let twice = s.intersect(c, c)? - s.intersect(c, &k)?;
    debug_assert_eq!(twice % 2, 0, "c·(c-K) is always even");
    Ok(1 + twice / 2)
}

pub fn cohomology(s: &Surface, c: &DivisorClass) -> Result<CohomologyVector> {
    let chi = euler_char(s, c)?;
    let h0v = h0(s, &invariant_rep(s, c)?);
    let dual = &s.canonical_class() - c;
    let h2v = h0(s, &invariant_rep(s, &dual)?);
    let h1 = h0v as i64 + h2v as i64 - chi;
    if h1 < 0 {
        return Err(Error::Inconsistent {
            class: c.coeffs().to_vec(),
            h0: h0v,
            h2: h2v,
            chi,
        });
    }
    Ok(CohomologyVector::new(h0v, h1 as u64, h2v))
}

fn check_rank(s: &Surface, c: &DivisorClass) -> Result<()> {
    if c.rank() != s.pic_rank() {
        return Err(Error::DimensionMismatch {
            expected: s.pic_rank(),
            found: c.rank(),
        });
    }
    Ok(())
}

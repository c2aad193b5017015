//! Dimension data of the endomorphism algebra `A = End(T)` of a tilting
//! candidate: Δ-multiplicities, Cartan matrix and dimension vectors of the
//! standard modules.
//!
//! Conventions: right modules, `P(i) = Hom(T, T_i)`, so the dimension vector
//! of `P(i)` over the idempotents is column `i` of `C` and the dimension
//! vector of `Δ(j) = Hom(T, L_j)` is column `j` of `D`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::uext::{HomTable, Mode, TiltingCandidate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QhStatus {
    /// Every nontrivial block was extended: quasi-hereditary with
    /// `Δ(i) = Hom(T, L_i)`, by the filtration the recursion produces.
    Standard,
    /// Every nontrivial block was coextended: the dual statement with
    /// costandard modules.
    Costandard,
    /// Mixed modes, but every nontrivial block has two members.
    TwoMemberBlocks,
    /// Mixed modes on larger blocks; no claim is made.
    Withheld,
}

impl QhStatus {
    pub fn quasi_hereditary(self) -> bool {
        !matches!(self, QhStatus::Withheld)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QhaData {
    /// Order on the idempotents: sequence positions.
    pub order: Vec<usize>,
    /// `M_{ij} = [P(i) : Δ(j)] = mult_j(T_i)`.
    pub delta_mult: IntMatrix,
    /// `C_{ij} = dim Hom(T_i, T_j)`.
    pub cartan: IntMatrix,
    /// `D_{ij} = dim Hom(T_i, L_j)`.
    pub delta_dim: IntMatrix,
    /// `dim Hom(L_j, T_i)` at `(i, j)`; the costandard counterpart of `D`.
    pub nabla_dim: IntMatrix,
    pub status: QhStatus,
}

pub fn delta_data(c: &TiltingCandidate, hom: &HomTable) -> Result<QhaData> {
    if !hom.certificate.holds {
        return Err(Error::Precondition(
            "vanishing certificate does not hold".into(),
        ));
    }
    let m = c.mult_matrix();
    let x = c.euler.matrix();
    let delta_dim = m.mul(x);
    let cartan = delta_dim.mul(&m.transpose());
    let nabla_dim = m.mul(&x.transpose());
    let nontrivial: Vec<_> = c.blocks.iter().filter(|b| b.members.len() > 1).collect();
    let status = if nontrivial.iter().all(|b| b.mode == Mode::Extend) {
        QhStatus::Standard
    } else if nontrivial.iter().all(|b| b.mode == Mode::Coextend) {
        QhStatus::Costandard
    } else if nontrivial.iter().all(|b| b.members.len() == 2) {
        QhStatus::TwoMemberBlocks
    } else {
        QhStatus::Withheld
    };
    Ok(QhaData {
        order: (1..=c.len()).collect(),
        delta_mult: m,
        cartan,
        delta_dim,
        nabla_dim,
        status,
    })
}

/// Block members (1-based) sorted by ascending rank of their summand, ties
/// by position.
pub fn rank_order(q: &QhaData, block: &[usize]) -> Vec<usize> {
    let mut order = block.to_vec();
    order.sort_by_key(|&p| (q.delta_mult.row(p - 1).iter().sum::<i64>(), p));
    order
}

/// The dimension signature of the Auslander algebra of `k[α]/α^n` on a block:
/// in ascending rank order `M` is lower triangular with all ones and
/// `C = [min(i, j)]`.
pub fn auslander_recognizer(q: &QhaData, block: &[usize]) -> bool {
    let order = rank_order(q, block);
    let idx: Vec<usize> = order.iter().map(|p| p - 1).collect();
    let m = q.delta_mult.submatrix(&idx);
    let c = q.cartan.submatrix(&idx);
    let n = idx.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let want_m = i64::from(j <= i);
            let want_c = (i.min(j) + 1) as i64;
            m.get(i, j) == want_m && c.get(i, j) == want_c
        })
    })
}

/// Dimension vector over the idempotents of a Δ-filtered module with the
/// given multiplicities: `Σ_j mult_j · D_{·j}`.
pub fn good_module_check(q: &QhaData, mult: &[i64]) -> Result<Vec<i64>> {
    let n = q.delta_dim.nrows();
    if mult.len() != q.delta_dim.ncols() {
        return Err(Error::DimensionMismatch {
            expected: q.delta_dim.ncols(),
            found: mult.len(),
        });
    }
    if let Some(j) = mult.iter().position(|&x| x < 0) {
        return Err(Error::NegativeMultiplicity(j + 1));
    }
    Ok((0..n)
        .map(|i| {
            mult.iter()
                .enumerate()
                .map(|(j, &x)| x * q.delta_dim.get(i, j))
                .sum()
        })
        .collect())
}

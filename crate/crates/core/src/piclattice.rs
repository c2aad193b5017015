//! Iterated toric blow-ups of Hirzebruch surfaces and their Picard lattices.
//!
//! A [`Surface`] is F_m together with an ordered list of blow-ups at
//! torus-fixed points. The Picard lattice is written in the basis
//! `(P, E, e_1, …, e_t)` where `P` is a fibre, `E` the negative section and
//! `e_v` the class of the total transform `R_v` of the v-th exceptional curve.
//! In this basis the intersection form is
//! `[[0, 1], [1, -m]] ⊕ (-1)^t`.
//!
//! Next to the lattice bookkeeping the surface keeps two tables tied to the
//! fan: the class of every invariant prime divisor `D_ρ`, and for every basis
//! element an invariant divisor representing it. Both are updated by the
//! pullback rule of stellar subdivision.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::toric::Fan;

/// 1-based creation index of a blow-up.
pub type BlowupId = usize;

/// Integer coordinates of a divisor class in the basis `(P, E, e_1, …, e_t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(Vec<i64>);

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self(coeffs)
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn basis(rank: usize, k: usize) -> Self {
        let mut v = vec![0; rank];
        v[k] = 1;
        Self(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The same class pulled back to a surface of larger Picard rank.
    pub fn pullback(&self, rank: usize) -> Result<Self> {
        if rank < self.0.len() {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: self.0.len(),
            });
        }
        let mut v = self.0.clone();
        v.resize(rank, 0);
        Ok(Self(v))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = match k {
                0 => "P".to_string(),
                1 => "E".to_string(),
                _ => format!("e{}", k - 1),
            };
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "{name}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: Self) -> DivisorClass {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: Self) -> DivisorClass {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(rhs.0.iter().map(|a| self * a).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The cone on the clockwise side of the exceptional ray.
    Left,
    /// The cone on the counter-clockwise side of the exceptional ray.
    Right,
}

/// A torus-fixed point to blow up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Center {
    /// Cone index in the current fan.
    Cone(usize),
    /// Cone label `A|B`, e.g. `P|E` or `E1|E`.
    Label(String),
    /// One of the two fixed points on the strict transform of `E_v`.
    OnExceptional { id: BlowupId, side: Side },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupRecord {
    pub id: BlowupId,
    pub level: u32,
    /// The most recent exceptional curve through the center; its level is
    /// exactly one less than ours.
    pub parent: Option<BlowupId>,
    /// Exceptional curves whose strict transforms pass through the center.
    pub incident: Vec<BlowupId>,
    /// All `w` with `id ≻ w`.
    pub ancestors: BTreeSet<BlowupId>,
    /// Label of the blown-up cone at creation time.
    pub center: String,
    /// Label of the ray inserted for this blow-up.
    pub ray: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surface {
    base_m: i64,
    blowups: Vec<BlowupRecord>,
    fan: Fan,
    ray_classes: Vec<DivisorClass>,
    basis_reps: Vec<Vec<i64>>,
}

impl Surface {
    pub fn new_hirzebruch(m: i64) -> Result<Self> {
        if m < 0 {
            return Err(Error::NegativeHirzebruchIndex(m));
        }
        let fan = Fan::hirzebruch(m);
        // Rays P, E, P', Q have classes P, E, P, mP + E.
        let ray_classes = vec![
            DivisorClass(vec![1, 0]),
            DivisorClass(vec![0, 1]),
            DivisorClass(vec![1, 0]),
            DivisorClass(vec![m, 1]),
        ];
        let basis_reps = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]];
        Ok(Self {
            base_m: m,
            blowups: Vec::new(),
            fan,
            ray_classes,
            basis_reps,
        })
    }

    pub fn base_m(&self) -> i64 {
        self.base_m
    }

    pub fn blowups(&self) -> &[BlowupRecord] {
        &self.blowups
    }

    pub fn num_blowups(&self) -> usize {
        self.blowups.len()
    }

    pub fn pic_rank(&self) -> usize {
        2 + self.blowups.len()
    }

    /// Rank of the Grothendieck group.
    pub fn k0_rank(&self) -> usize {
        self.pic_rank() + 2
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn record(&self, v: BlowupId) -> Result<&BlowupRecord> {
        v.checked_sub(1)
            .and_then(|k| self.blowups.get(k))
            .ok_or(Error::UnknownBlowup(v))
    }

    /// Classes of the invariant prime divisors, aligned with `fan().rays()`.
    pub fn ray_classes(&self) -> &[DivisorClass] {
        &self.ray_classes
    }

    /// Invariant divisor (coefficients over the current rays) representing
    /// basis element `k`.
    pub fn basis_rep(&self, k: usize) -> &[i64] {
        &self.basis_reps[k]
    }

    pub fn class_p(&self) -> DivisorClass {
        DivisorClass::basis(self.pic_rank(), 0)
    }

    pub fn class_e(&self) -> DivisorClass {
        DivisorClass::basis(self.pic_rank(), 1)
    }

    pub fn class_q(&self) -> DivisorClass {
        let mut v = vec![0; self.pic_rank()];
        v[0] = self.base_m;
        v[1] = 1;
        DivisorClass(v)
    }

    /// `αP + βQ`, pulled back.
    pub fn class_pq(&self, alpha: i64, beta: i64) -> DivisorClass {
        &(alpha * &self.class_p()) + &(beta * &self.class_q())
    }

    pub fn resolve_center(&self, center: &Center) -> Result<usize> {
        match center {
            Center::Cone(i) if *i < self.fan.len() => Ok(*i),
            Center::Cone(i) => Err(Error::UnknownCenter(format!("cone #{i}"))),
            Center::Label(label) => self
                .fan
                .find_cone(label)
                .ok_or_else(|| Error::UnknownCenter(label.clone())),
            Center::OnExceptional { id, side } => {
                self.record(*id)?;
                let pos = self
                    .fan
                    .exceptional_ray(*id)
                    .ok_or(Error::UnknownBlowup(*id))?;
                let n = self.fan.len();
                Ok(match side {
                    Side::Left => (pos + n - 1) % n,
                    Side::Right => pos,
                })
            }
        }
    }

    pub fn blow_up(&self, center: &Center) -> Result<Surface> {
        let cone_index = self.resolve_center(center)?;
        let cone = self.fan.cone(cone_index);
        let id = self.blowups.len() + 1;
        let rank = self.pic_rank() + 1;

        let mut incident: Vec<BlowupId> = [cone.first, cone.second]
            .iter()
            .filter_map(|&r| self.fan.rays()[r].exceptional)
            .collect();
        incident.sort_unstable();

        let mut ancestors = BTreeSet::new();
        for &u in &incident {
            ancestors.insert(u);
            ancestors.extend(self.blowups[u - 1].ancestors.iter().copied());
        }
        // Exceptional curves meeting in a fixed point are comparable, so the
        // most recent one dominates the other.
        let parent = incident.last().copied();
        debug_assert!(incident.iter().all(
            |&u| Some(u) == parent || self.blowups[parent.unwrap() - 1].ancestors.contains(&u)
        ));
        let level = parent.map_or(1, |p| self.blowups[p - 1].level + 1);

        let center_label = self.fan.cone_label(cone_index);
        let ray_label = format!("E{id}");

        let mut fan = self.fan.clone();
        let (a, b) = (cone.first, cone.second);
        let new_basis: Vec<Vec<i64>> = self
            .basis_reps
            .iter()
            .map(|rep| {
                let mut rep = rep.clone();
                let value = rep[a] + rep[b];
                rep.insert(a + 1, value);
                rep
            })
            .collect();
        let pos = fan.subdivide(cone_index, ray_label.clone(), id);
        debug_assert_eq!(pos, a + 1);

        let e_new = DivisorClass::basis(rank, rank - 1);
        let mut ray_classes: Vec<DivisorClass> = self
            .ray_classes
            .iter()
            .map(|c| c.pullback(rank))
            .collect::<Result<_>>()?;
        ray_classes[a] = &ray_classes[a] - &e_new;
        ray_classes[b] = &ray_classes[b] - &e_new;
        ray_classes.insert(pos, e_new);

        let mut basis_reps = new_basis;
        let mut rep = vec![0; fan.len()];
        rep[pos] = 1;
        basis_reps.push(rep);

        let mut blowups = self.blowups.clone();
        blowups.push(BlowupRecord {
            id,
            level,
            parent,
            incident,
            ancestors,
            center: center_label,
            ray: ray_label,
        });

        Ok(Surface {
            base_m: self.base_m,
            blowups,
            fan,
            ray_classes,
            basis_reps,
        })
    }

    /// Blows up a list of cone labels in order.
    pub fn blow_up_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Surface> {
        labels.iter().try_fold(self.clone(), |s, l| {
            s.blow_up(&Center::Label(l.as_ref().to_string()))
        })
    }

    /// The surface after the first `k` blow-ups, rebuilt from the recorded centers.
    pub fn prefix(&self, k: usize) -> Result<Surface> {
        let mut s = Surface::new_hirzebruch(self.base_m)?;
        for rec in self.blowups.iter().take(k) {
            s = s.blow_up(&Center::Label(rec.center.clone()))?;
        }
        Ok(s)
    }

    fn check(&self, c: &DivisorClass) -> Result<()> {
        if c.rank() != self.pic_rank() {
            return Err(Error::DimensionMismatch {
                expected: self.pic_rank(),
                found: c.rank(),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        let (x, y) = (a.coeffs(), b.coeffs());
        let base = x[0] * y[1] + x[1] * y[0] - self.base_m * x[1] * y[1];
        let exc: i64 = x[2..].iter().zip(&y[2..]).map(|(p, q)| p * q).sum();
        Ok(base - exc)
    }

    /// `K = -(m+2)P - 2E + Σ e_v`.
    pub fn canonical_class(&self) -> DivisorClass {
        let mut v = vec![1; self.pic_rank()];
        v[0] = -(self.base_m + 2);
        v[1] = -2;
        DivisorClass(v)
    }

    /// The class `e_v` of the total transform `R_v`.
    pub fn exceptional_pullback_class(&self, v: BlowupId) -> Result<DivisorClass> {
        self.record(v)?;
        Ok(DivisorClass::basis(self.pic_rank(), v + 1))
    }

    /// Blow-ups whose centers lie on the strict transform of `E_v`.
    pub fn points_on(&self, v: BlowupId) -> Result<Vec<BlowupId>> {
        self.record(v)?;
        Ok(self
            .blowups
            .iter()
            .filter(|r| r.incident.contains(&v))
            .map(|r| r.id)
            .collect())
    }

    /// Class of the strict transform `Ē_v = e_v - Σ e_w` over blow-ups `w`
    /// centered on `Ē_v`.
    pub fn strict_transform_class(&self, v: BlowupId) -> Result<DivisorClass> {
        let mut c = self.exceptional_pullback_class(v)?;
        for w in self.points_on(v)? {
            c.0[w + 1] -= 1;
        }
        Ok(c)
    }

    /// `i ≻ j`: the center of `i` lies on the total transform of `E_j`.
    pub fn above(&self, i: BlowupId, j: BlowupId) -> bool {
        self.record(i)
            .map(|r| r.ancestors.contains(&j))
            .unwrap_or(false)
    }

    pub fn blow_up_graph(&self) -> BlowupGraph {
        BlowupGraph {
            vertices: self
                .blowups
                .iter()
                .map(|r| GraphVertex {
                    id: r.id,
                    level: r.level,
                })
                .collect(),
            edges: self
                .blowups
                .iter()
                .filter_map(|r| r.parent.map(|p| (p, r.id)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphVertex {
    pub id: BlowupId,
    pub level: u32,
}

/// Vertices are blow-ups; there is an edge `v -- w` when `x_w` lies on `E_v`
/// one level down. This is the Hasse diagram of `≻`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupGraph {
    pub vertices: Vec<GraphVertex>,
    /// `(lower, upper)` pairs, i.e. `(parent, child)`.
    pub edges: Vec<(BlowupId, BlowupId)>,
}

impl BlowupGraph {
    /// Connected components, each sorted, listed by least member.
    pub fn components(&self) -> Vec<Vec<BlowupId>> {
        let n = self.vertices.len();
        let mut root: Vec<usize> = (0..=n).collect();
        fn find(root: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while root[x] != x {
                root[x] = root[root[x]];
                x = root[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut root, a), find(&mut root, b));
            root[ra.max(rb)] = ra.min(rb);
        }
        let mut comps: std::collections::BTreeMap<usize, Vec<BlowupId>> = Default::default();
        for v in &self.vertices {
            let r = find(&mut root, v.id);
            comps.entry(r).or_default().push(v.id);
        }
        comps.into_values().collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph blowups {\n  rankdir=BT;\n");
        for v in &self.vertices {
            out.push_str(&format!(
                "  x{} [label=\"x{} (level {})\"];\n",
                v.id, v.id, v.level
            ));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  x{a} -- x{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(m: i64, t: usize) -> Surface {
        let mut s = Surface::new_hirzebruch(m)
            .unwrap()
            .blow_up_labels(&["P|E"])
            .unwrap();
        for v in 1..t {
            s = s
                .blow_up(&Center::OnExceptional {
                    id: v,
                    side: Side::Left,
                })
                .unwrap();
        }
        s
    }

    #[test]
    fn hirzebruch_intersections() {
        let s = Surface::new_hirzebruch(2).unwrap();
        let (p, e, q) = (s.class_p(), s.class_e(), s.class_q());
        assert_eq!(s.intersect(&p, &p).unwrap(), 0);
        assert_eq!(s.intersect(&e, &e).unwrap(), -2);
        assert_eq!(s.intersect(&q, &q).unwrap(), 2);
        let s0 = Surface::new_hirzebruch(0).unwrap();
        assert_eq!(s0.intersect(&s0.class_e(), &s0.class_e()).unwrap(), 0);
        let s1 = Surface::new_hirzebruch(1).unwrap();
        assert_eq!(s1.intersect(&s1.class_q(), &s1.class_e()).unwrap(), 0);
    }

    #[test]
    fn negative_index_rejected() {
        assert_eq!(
            Surface::new_hirzebruch(-1),
            Err(Error::NegativeHirzebruchIndex(-1))
        );
    }

    #[test]
    fn first_blowup() {
        let s = Surface::new_hirzebruch(0)
            .unwrap()
            .blow_up(&Center::Cone(2))
            .unwrap();
        assert_eq!(s.pic_rank(), 3);
        assert_eq!(s.k0_rank(), 5);
        let e1 = s.exceptional_pullback_class(1).unwrap();
        assert_eq!(s.intersect(&e1, &e1).unwrap(), -1);
        let k = s.canonical_class();
        assert_eq!(s.intersect(&k, &k).unwrap(), 7);
    }

    #[test]
    fn unknown_centers() {
        let s = Surface::new_hirzebruch(0).unwrap();
        assert!(matches!(
            s.blow_up(&Center::Label("P|Q'".into())),
            Err(Error::UnknownCenter(_))
        ));
        assert!(matches!(
            s.blow_up(&Center::Cone(4)),
            Err(Error::UnknownCenter(_))
        ));
        assert_eq!(
            s.blow_up(&Center::OnExceptional {
                id: 1,
                side: Side::Left
            }),
            Err(Error::UnknownBlowup(1))
        );
        assert_eq!(
            s.exceptional_pullback_class(1),
            Err(Error::UnknownBlowup(1))
        );
    }

    #[test]
    fn disjoint_blowups_are_unrelated() {
        let s = Surface::new_hirzebruch(0)
            .unwrap()
            .blow_up_labels(&["P|E", "P'|Q"])
            .unwrap();
        let (e1, e2) = (
            s.exceptional_pullback_class(1).unwrap(),
            s.exceptional_pullback_class(2).unwrap(),
        );
        assert_eq!(s.intersect(&e1, &e2).unwrap(), 0);
        assert!(!s.above(1, 2) && !s.above(2, 1));
        assert_eq!(s.blow_up_graph().components(), vec![vec![1], vec![2]]);
    }

    #[test]
    fn chains_are_totally_ordered() {
        let s = chain(0, 3);
        assert!(s.above(2, 1));
        assert!(s.above(3, 2));
        assert!(s.above(3, 1));
        assert!(!s.above(1, 2));
        assert_eq!(s.record(2).unwrap().ancestors, BTreeSet::from([1]));
        let g = s.blow_up_graph();
        assert_eq!(g.edges, vec![(1, 2), (2, 3)]);
        assert_eq!(
            g.vertices.iter().map(|v| v.level).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn strict_transforms() {
        // E_1 with nothing on it, then one point, then two points.
        let s = Surface::new_hirzebruch(0)
            .unwrap()
            .blow_up_labels(&["P|E"])
            .unwrap();
        let st = s.strict_transform_class(1).unwrap();
        assert_eq!(s.intersect(&st, &st).unwrap(), -1);
        let s = s.blow_up_labels(&["P|E1"]).unwrap();
        let st = s.strict_transform_class(1).unwrap();
        assert_eq!(s.intersect(&st, &st).unwrap(), -2);
        let s = s.blow_up_labels(&["E1|E"]).unwrap();
        let st = s.strict_transform_class(1).unwrap();
        assert_eq!(s.intersect(&st, &st).unwrap(), -3);
    }

    #[test]
    fn pullback_differences_square_to_minus_two() {
        let s = chain(1, 3);
        for i in 1..=3 {
            for j in 1..=3 {
                if i == j {
                    continue;
                }
                let d = &s.exceptional_pullback_class(i).unwrap()
                    - &s.exceptional_pullback_class(j).unwrap();
                assert_eq!(s.intersect(&d, &d).unwrap(), -2);
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let s = chain(0, 1);
        let short = DivisorClass::new(vec![1, 0]);
        assert_eq!(
            s.intersect(&short, &short),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn display() {
        assert_eq!(
            DivisorClass::new(vec![2, -1, 0, 1]).to_string(),
            "2P - E + e2"
        );
        assert_eq!(DivisorClass::zero(3).to_string(), "0");
        assert_eq!(DivisorClass::new(vec![0, 0, -1]).to_string(), "-e1");
    }

    #[test]
    fn prefix_replays_history() {
        let s = chain(2, 4);
        let p = s.prefix(2).unwrap();
        assert_eq!(p, chain(2, 2));
    }
}

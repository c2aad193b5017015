//! Complete smooth fans in the plane.
//!
//! Rays are kept in counter-clockwise cyclic order. Cone `i` is spanned by
//! rays `i` and `i + 1 (mod n)`; in a smooth complete fan every such cone is a
//! torus-fixed point of the surface.

use serde::{Deserialize, Serialize};

use crate::piclattice::BlowupId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    pub vector: [i64; 2],
    pub label: String,
    /// Set for rays inserted by a blow-up: the id of that blow-up.
    pub exceptional: Option<BlowupId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    rays: Vec<Ray>,
}

/// The two rays of a cone, as indices into the ray list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cone {
    pub index: usize,
    pub first: usize,
    pub second: usize,
}

impl Fan {
    /// Fan of the Hirzebruch surface F_m with rays (1,0), (0,1), (-1,m), (0,-1).
    ///
    /// Labels follow the divisor classes: `P` and `P'` are the two fibres,
    /// `E` the negative section and `Q` the positive one.
    pub fn hirzebruch(m: i64) -> Self {
        let ray = |v: [i64; 2], label: &str| Ray {
            vector: v,
            label: label.to_string(),
            exceptional: None,
        };
        Self {
            rays: vec![
                ray([1, 0], "P"),
                ray([0, 1], "E"),
                ray([-1, m], "P'"),
                ray([0, -1], "Q"),
            ],
        }
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn cone(&self, index: usize) -> Cone {
        let n = self.rays.len();
        Cone {
            index: index % n,
            first: index % n,
            second: (index + 1) % n,
        }
    }

    pub fn cones(&self) -> impl Iterator<Item = Cone> + '_ {
        (0..self.rays.len()).map(|i| self.cone(i))
    }

    pub fn cone_label(&self, index: usize) -> String {
        let c = self.cone(index);
        format!("{}|{}", self.rays[c.first].label, self.rays[c.second].label)
    }

    /// Finds a cone by its label `A|B`; the order of the two rays is ignored.
    pub fn find_cone(&self, label: &str) -> Option<usize> {
        let (a, b) = label.split_once('|')?;
        let (a, b) = (a.trim(), b.trim());
        self.cones().map(|c| c.index).find(|&i| {
            let c = self.cone(i);
            let (x, y) = (&self.rays[c.first].label, &self.rays[c.second].label);
            (x == a && y == b) || (x == b && y == a)
        })
    }

    pub fn ray_index(&self, label: &str) -> Option<usize> {
        self.rays.iter().position(|r| r.label == label)
    }

    pub fn exceptional_ray(&self, id: BlowupId) -> Option<usize> {
        self.rays.iter().position(|r| r.exceptional == Some(id))
    }

    /// Inserts `v_a + v_b` into cone `index`. Returns the position of the new ray.
    pub(crate) fn subdivide(&mut self, index: usize, label: String, id: BlowupId) -> usize {
        let c = self.cone(index);
        let (a, b) = (self.rays[c.first].vector, self.rays[c.second].vector);
        let ray = Ray {
            vector: [a[0] + b[0], a[1] + b[1]],
            label,
            exceptional: Some(id),
        };
        let pos = c.first + 1;
        self.rays.insert(pos, ray);
        pos
    }

    /// Every cone is unimodular and the rays wind once around the origin.
    pub fn is_smooth_complete(&self) -> bool {
        let n = self.rays.len();
        if n < 3 {
            return false;
        }
        let mut winding = 0.0f64;
        for c in self.cones() {
            let (a, b) = (self.rays[c.first].vector, self.rays[c.second].vector);
            if a[0] * b[1] - a[1] * b[0] != 1 {
                return false;
            }
            let angle = |v: [i64; 2]| (v[1] as f64).atan2(v[0] as f64);
            let mut d = angle(b) - angle(a);
            if d <= 0.0 {
                d += std::f64::consts::TAU;
            }
            winding += d;
        }
        (winding - std::f64::consts::TAU).abs() < 1e-9
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hirzebruch_fan_is_smooth_and_complete() {
        for m in 0..6 {
            assert!(Fan::hirzebruch(m).is_smooth_complete(), "m = {m}");
        }
    }

    #[test]
    fn subdivision_inserts_sum_between_neighbours() {
        let mut fan = Fan::hirzebruch(1);
        let cone = fan.find_cone("E|P").unwrap();
        let pos = fan.subdivide(cone, "E1".into(), 1);
        assert_eq!(fan.rays()[pos].vector, [1, 1]);
        assert_eq!(fan.rays()[pos - 1].label, "P");
        assert_eq!(fan.rays()[pos + 1].label, "E");
        assert!(fan.is_smooth_complete());
        assert!(fan.find_cone("P|E").is_none());
        assert!(fan.find_cone("E1|E").is_some());
    }

    #[test]
    fn wrap_around_cone() {
        let fan = Fan::hirzebruch(0);
        assert_eq!(fan.cone_label(3), "Q|P");
        assert_eq!(fan.find_cone("P|Q"), Some(3));
    }
}

//! Shared corpus of random blow-up trees.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tiltsurf::exc::{augment_along, LineBundleSequence};
use tiltsurf::piclattice::{Center, Side, Surface};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Blows up `t` torus-fixed points chosen uniformly among the cones present
/// at each stage.
pub fn random_tree(rng: &mut impl Rng, max_m: i64, t: usize) -> Surface {
    let mut s = Surface::new_hirzebruch(rng.gen_range(0..=max_m)).unwrap();
    for _ in 0..t {
        let cone = rng.gen_range(0..s.fan().len());
        s = s.blow_up(&Center::Cone(cone)).unwrap();
    }
    s
}

/// Fixed corpus: `count` random trees with up to `max_t` blow-ups.
pub fn corpus(seed: u64, count: usize, max_t: usize) -> Vec<Surface> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let t = r.gen_range(0..=max_t);
            random_tree(&mut r, 3, t)
        })
        .collect()
}

/// The corpus used by the acceptance checks: random trees up to 8 blow-ups.
pub fn test_corpus() -> Vec<Surface> {
    corpus(0x5eed, 40, 8)
}

pub fn random_positions(rng: &mut impl Rng, t: usize) -> Vec<usize> {
    (0..t).map(|k| rng.gen_range(1..=4 + k)).collect()
}

/// Chain of `t` blow-ups on F_0, each on the newest exceptional curve.
pub fn chain(t: usize) -> Surface {
    let mut s = Surface::new_hirzebruch(0).unwrap();
    if t == 0 {
        return s;
    }
    s = s.blow_up_labels(&["P|E"]).unwrap();
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

/// Position-1 augmentations of the `a = 0` seed.
pub fn standard_sequence(s: &Surface) -> LineBundleSequence {
    augment_along(s, 0, &vec![1; s.num_blowups()]).unwrap()
}

pub fn rays(s: &Surface) -> Vec<[i64; 2]> {
    s.fan().rays().iter().map(|r| r.vector).collect()
}

/// Bounding box of the vertices of the arrangement `⟨m, v_ρ⟩ = -a_ρ`, one
/// unit of margin. Outside it every character sees a single arc of negative
/// rays (or none), so all cohomology lives inside.
fn arrangement_box(rays: &[[i64; 2]], a: &[i64]) -> (i64, i64, i64, i64) {
    let (mut x0, mut x1, mut y0, mut y1) = (0i64, 0i64, 0i64, 0i64);
    for p in 0..rays.len() {
        for q in p + 1..rays.len() {
            let (u, v) = (rays[p], rays[q]);
            let det = u[0] * v[1] - u[1] * v[0];
            if det == 0 {
                continue;
            }
            // Cramer's rule for u·m = -a_p, v·m = -a_q.
            let nx = -a[p] * v[1] + a[q] * u[1];
            let ny = -u[0] * a[q] + v[0] * a[p];
            let mx = nx as f64 / det as f64;
            let my = ny as f64 / det as f64;
            x0 = x0.min(mx.floor() as i64);
            x1 = x1.max(mx.ceil() as i64);
            y0 = y0.min(my.floor() as i64);
            y1 = y1.max(my.ceil() as i64);
        }
    }
    (x0 - 1, x1 + 1, y0 - 1, y1 + 1)
}

/// `(h0, h1, h2)` of `O(Σ a_ρ D_ρ)` character by character: with `N_m` the
/// rays where `⟨m, v_ρ⟩ < -a_ρ`, `H^p_m = H̃^{p-1}(N_m)` on the ray cycle.
pub fn oracle_cohomology(rays: &[[i64; 2]], a: &[i64]) -> (u64, u64, u64) {
    let n = rays.len();
    // Arcs need the cyclic order; do not trust the order we were given.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| {
        let ang = |k: usize| (rays[k][1] as f64).atan2(rays[k][0] as f64);
        ang(p).total_cmp(&ang(q))
    });
    let rays: Vec<[i64; 2]> = order.iter().map(|&k| rays[k]).collect();
    let a: Vec<i64> = order.iter().map(|&k| a[k]).collect();
    let (rays, a) = (&rays[..], &a[..]);
    let (x0, x1, y0, y1) = arrangement_box(rays, a);
    let (mut h0, mut h1, mut h2) = (0, 0, 0);
    for x in x0..=x1 {
        for y in y0..=y1 {
            let neg: Vec<bool> = (0..n)
                .map(|k| x * rays[k][0] + y * rays[k][1] < -a[k])
                .collect();
            let count = neg.iter().filter(|&&b| b).count();
            if count == 0 {
                h0 += 1;
            } else if count == n {
                h2 += 1;
            } else {
                let arcs = (0..n).filter(|&k| neg[k] && !neg[(k + n - 1) % n]).count() as u64;
                h1 += arcs - 1;
            }
        }
    }
    (h0, h1, h2)
}

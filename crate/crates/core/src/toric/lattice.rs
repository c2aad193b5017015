use num_integer::Integer;
use num_rational::Ratio;

type Q = Ratio<i128>;

fn ceil_div(n: i128, d: i128) -> i128 {
    -Integer::div_floor(&(-n), &d)
}

/// Number of `u ∈ Z²` with `⟨u, v_ρ⟩ ≥ -a_ρ` for every ray.
///
/// The rays must span a complete fan so that the polygon is bounded. The
/// x-range comes from the feasible pairwise intersections of the boundary
/// lines; each column is then counted in closed form.
pub fn count_lattice_points(rays: &[[i64; 2]], a: &[i64]) -> u64 {
    assert_eq!(rays.len(), a.len());
    let rays: Vec<[i128; 2]> = rays.iter().map(|v| [v[0] as i128, v[1] as i128]).collect();
    let a: Vec<i128> = a.iter().map(|&x| x as i128).collect();

    let feasible = |x: Q, y: Q| {
        rays.iter()
            .zip(&a)
            .all(|(v, &ak)| x * v[0] + y * v[1] + ak >= Q::from_integer(0))
    };

    let mut range: Option<(Q, Q)> = None;
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            let (vi, vj) = (rays[i], rays[j]);
            let det = vi[0] * vj[1] - vi[1] * vj[0];
            if det == 0 {
                continue;
            }
            let x = Q::new(-a[i] * vj[1] + a[j] * vi[1], det);
            let y = Q::new(-a[j] * vi[0] + a[i] * vj[0], det);
            if feasible(x, y) {
                range = Some(match range {
                    None => (x, x),
                    Some((lo, hi)) => (lo.min(x), hi.max(x)),
                });
            }
        }
    }
    let Some((lo, hi)) = range else {
        return 0;
    };

    let mut count: u64 = 0;
    for x in lo.ceil().to_integer()..=hi.floor().to_integer() {
        let mut y_lo = i128::MIN;
        let mut y_hi = i128::MAX;
        let mut ok = true;
        for (v, &ak) in rays.iter().zip(&a) {
            let rhs = -ak - x * v[0];
            match v[1].signum() {
                1 => y_lo = y_lo.max(ceil_div(rhs, v[1])),
                -1 => y_hi = y_hi.min(Integer::div_floor(&rhs, &v[1])),
                _ => ok &= x * v[0] >= -ak,
            }
        }
        if ok && y_lo <= y_hi {
            count += (y_hi - y_lo + 1) as u64;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    const F0: [[i64; 2]; 4] = [[1, 0], [0, 1], [-1, 0], [0, -1]];

    #[test]
    fn unit_square() {
        // O(P + Q) on F_0: 0 ≤ x ≤ 1, 0 ≤ y ≤ 1.
        assert_eq!(count_lattice_points(&F0, &[0, 0, 1, 1]), 4);
    }

    #[test]
    fn single_point_and_empty() {
        assert_eq!(count_lattice_points(&F0, &[0, 0, 0, 0]), 1);
        assert_eq!(count_lattice_points(&F0, &[-1, 0, 0, 0]), 0);
        assert_eq!(count_lattice_points(&F0, &[0, 0, 0, -1]), 0);
    }

    #[test]
    fn rational_vertices() {
        // F_2 with D = D_Q: x ≥ 0, y ≥ 0, -x + 2y ≥ 0, y ≤ 1, a triangle
        // region {0 ≤ x ≤ 2y, 0 ≤ y ≤ 1}: 1 + 3 = 4 points.
        let f2 = [[1, 0], [0, 1], [-1, 2], [0, -1]];
        assert_eq!(count_lattice_points(&f2, &[0, 0, 0, 1]), 4);
    }

    #[test]
    fn ceil_div_signs() {
        assert_eq!(ceil_div(3, 2), 2);
        assert_eq!(ceil_div(-3, 2), -1);
        assert_eq!(ceil_div(4, 2), 2);
    }
}

//! Distance-regularity and intersection numbers.
//!
//! Intersection numbers use the convention
//! `p[c][a][b] = #{w : d(u, w) = a, d(v, w) = b}` for any pair with
//! `d(u, v) = c`; sphere sizes are `h(s) = p[0][s][s]`.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::Zero;

use super::OpinionGraph;

/// Read access to the intersection numbers of a distance-regular graph.
///
/// Implemented both by tables measured on an explicit graph and by closed
/// forms for families too large to materialize.
pub trait IntersectionNumbers {
    fn diameter(&self) -> usize;

    fn sphere_size(&self, s: usize) -> BigInt;

    /// `p[c][a][b]`; zero whenever an index exceeds the diameter.
    fn count(&self, c: usize, a: usize, b: usize) -> BigInt;

    /// `sum over a in a_range of p[c][a][b]`.
    fn count_sum(&self, c: usize, a_range: RangeInclusive<usize>, b: usize) -> BigInt {
        a_range.map(|a| self.count(c, a, b)).sum()
    }

    fn vertex_count(&self) -> BigInt {
        (0..=self.diameter()).map(|s| self.sphere_size(s)).sum()
    }
}

/// Intersection numbers measured on an explicit distance-regular graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTable {
    diameter: usize,
    sphere_sizes: Vec<u64>,
    /// `counts[c][b]` lists the nonzero `(a, p[c][a][b])`, sorted by `a`.
    counts: Vec<HashMap<usize, Vec<(usize, u64)>>>,
}

impl IntersectionTable {
    pub fn sphere_sizes(&self) -> &[u64] {
        &self.sphere_sizes
    }

    #[inline]
    pub fn p(&self, c: usize, a: usize, b: usize) -> u64 {
        self.column(c, b)
            .binary_search_by_key(&a, |&(a, _)| a)
            .map_or(0, |i| self.column(c, b)[i].1)
    }

    fn column(&self, c: usize, b: usize) -> &[(usize, u64)] {
        self.counts.get(c).and_then(|m| m.get(&b)).map_or(&[], Vec::as_slice)
    }

    pub fn h(&self, s: usize) -> u64 {
        self.sphere_sizes.get(s).copied().unwrap_or(0)
    }
}

impl IntersectionNumbers for IntersectionTable {
    fn diameter(&self) -> usize {
        self.diameter
    }

    fn sphere_size(&self, s: usize) -> BigInt {
        BigInt::from(self.h(s))
    }

    fn count(&self, c: usize, a: usize, b: usize) -> BigInt {
        BigInt::from(self.p(c, a, b))
    }

    fn count_sum(&self, c: usize, a_range: RangeInclusive<usize>, b: usize) -> BigInt {
        let total: u64 = self
            .column(c, b)
            .iter()
            .filter(|(a, _)| a_range.contains(a))
            .map(|&(_, k)| k)
            .sum();
        BigInt::from(total)
    }
}

/// Returns the intersection table when `g` is distance-regular, `None`
/// otherwise.
///
/// Regularity is decided through the intersection array: for every vertex
/// `u` and every `w` at distance `i` from it, the numbers of neighbours of
/// `w` at distances `i - 1` and `i + 1` from `u` must depend on `i` alone.
/// A connected graph with a well-defined intersection array has every
/// `p[c][a][b]` well-defined, so the table is then read off one
/// representative pair per distance.
pub fn check_distance_regular(g: &OpinionGraph) -> Option<IntersectionTable> {
    let n = g.vertex_count();
    let diameter = g.diameter();
    let mut down: Vec<Option<usize>> = vec![None; diameter + 1];
    let mut up: Vec<Option<usize>> = vec![None; diameter + 1];

    for u in 0..n {
        if g.eccentricity(u) != diameter {
            return None;
        }
        let row = g.dist_row(u);
        for w in 0..n {
            let i = row[w] as usize;
            let (mut c_i, mut b_i) = (0, 0);
            for &x in g.neighbors(w) {
                match row[x] as usize {
                    d if d + 1 == i => c_i += 1,
                    d if d == i + 1 => b_i += 1,
                    _ => {}
                }
            }
            for (slot, value) in [(&mut down[i], c_i), (&mut up[i], b_i)] {
                match *slot {
                    None => *slot = Some(value),
                    Some(prev) if prev != value => return None,
                    Some(_) => {}
                }
            }
        }
    }

    let base = g.dist_row(0);
    let mut sphere_sizes = vec![0u64; diameter + 1];
    for &d in base {
        sphere_sizes[d as usize] += 1;
    }
    let mut counts = Vec::with_capacity(diameter + 1);
    for c in 0..=diameter {
        let v = base.iter().position(|&d| d as usize == c)?;
        let other = g.dist_row(v);
        let mut pairs: HashMap<(usize, usize), u64> = HashMap::new();
        for w in 0..n {
            *pairs.entry((other[w] as usize, base[w] as usize)).or_insert(0) += 1;
        }
        let mut table: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
        for ((b, a), k) in pairs {
            table.entry(b).or_default().push((a, k));
        }
        table.values_mut().for_each(|col| col.sort_unstable());
        counts.push(table);
    }

    Some(IntersectionTable {
        diameter,
        sphere_sizes,
        counts,
    })
}

/// Closed-form intersection numbers of the hypercube on `2^dim` vertices.
///
/// With `u, v` differing in `c` coordinates, a word `w` flipping `x` of
/// those and `y` of the remaining `dim - c` sits at distance `x + y` from
/// `u` and `c - x + y` from `v`, so `p[c][a][b] = C(c, x) C(dim - c, y)`
/// with `x = (a - b + c) / 2` and `y = a - x`.
#[derive(Clone, Debug)]
pub struct HypercubeIntersections {
    dim: usize,
    binomials: Vec<Vec<BigInt>>,
}

impl HypercubeIntersections {
    pub fn new(dim: usize) -> Self {
        let mut binomials: Vec<Vec<BigInt>> = Vec::with_capacity(dim + 1);
        for n in 0..=dim {
            let mut row = vec![BigInt::from(1u32); n + 1];
            for k in 1..n {
                row[k] = &binomials[n - 1][k - 1] + &binomials[n - 1][k];
            }
            binomials.push(row);
        }
        HypercubeIntersections { dim, binomials }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `C(n, k)`, zero outside `0 <= k <= n <= dim`.
    pub fn binomial(&self, n: usize, k: isize) -> BigInt {
        if k < 0 || n > self.dim || k as usize > n {
            return BigInt::zero();
        }
        self.binomials[n][k as usize].clone()
    }
}

impl IntersectionNumbers for HypercubeIntersections {
    fn diameter(&self) -> usize {
        self.dim
    }

    fn sphere_size(&self, s: usize) -> BigInt {
        self.binomial(self.dim, s as isize)
    }

    fn count(&self, c: usize, a: usize, b: usize) -> BigInt {
        let d = self.dim;
        if c > d || a > d || b > d {
            return BigInt::zero();
        }
        let twice_x = a as isize - b as isize + c as isize;
        if twice_x < 0 || twice_x % 2 != 0 {
            return BigInt::zero();
        }
        let x = twice_x / 2;
        let y = a as isize - x;
        if x > c as isize || y < 0 {
            return BigInt::zero();
        }
        self.binomial(c, x) * self.binomial(d - c, y)
    }

    fn count_sum(&self, c: usize, a_range: RangeInclusive<usize>, b: usize) -> BigInt {
        let d = self.dim;
        if c > d || b > d {
            return BigInt::zero();
        }
        let mut total = BigInt::zero();
        for a in a_range.filter(|&a| a <= d && (a + c + b).is_multiple_of(2)) {
            let twice_x = a as isize - b as isize + c as isize;
            if twice_x < 0 {
                continue;
            }
            let x = (twice_x / 2) as usize;
            if x > c || x > a || a - x > d - c {
                continue;
            }
            total += &self.binomials[c][x] * &self.binomials[d - c][a - x];
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    #[test]
    fn star_is_not_distance_regular() {
        let g = Family::Star { branches: 3, length: 2 }.build().unwrap();
        assert!(check_distance_regular(&g).is_none());
    }

    #[test]
    fn cube_table() {
        let t = check_distance_regular(&Family::Cube.build().unwrap()).unwrap();
        assert_eq!(t.sphere_sizes(), &[1, 3, 3, 1]);
        assert_eq!(t.p(1, 1, 2), 2);
        assert_eq!(t.p(1, 3, 2), 1);
    }

    #[test]
    fn six_cycle_table() {
        let t = check_distance_regular(&Family::Cycle { vertices: 6 }.build().unwrap()).unwrap();
        assert_eq!(t.sphere_sizes(), &[1, 2, 2, 1]);
        assert_eq!(t.p(1, 1, 2), 1);
    }

    #[test]
    fn hypercube_closed_form_matches_measured_table() {
        for dim in 1..=6 {
            let measured = check_distance_regular(&Family::Hypercube { dim }.build().unwrap()).unwrap();
            let closed = HypercubeIntersections::new(dim);
            for c in 0..=dim + 1 {
                for a in 0..=dim + 1 {
                    for b in 0..=dim + 1 {
                        assert_eq!(
                            closed.count(c, a, b),
                            measured.count(c, a, b),
                            "d={dim} p[{c}][{a}][{b}]"
                        );
                    }
                }
            }
            assert_eq!(closed.vertex_count(), BigInt::from(1u64 << dim));
            for c in 0..=dim {
                for b in 0..=dim {
                    let direct: BigInt = (1..=dim).map(|a| closed.count(c, a, b)).sum();
                    assert_eq!(closed.count_sum(c, 1..=dim, b), direct);
                }
            }
        }
    }
}

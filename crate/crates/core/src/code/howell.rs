//! Howell normal form and kernels over Z_m.
//!
//! Z_m has zero divisors, so row echelon form is not canonical. The Howell
//! form adds, for every pivot `p`, the annihilator row `(m/p) * row`, which
//! makes the echelon form unique and membership decidable by reduction.

use num_integer::Integer;

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
/// When `a` divides `b` the cofactors are (±1, 0), so eliminations leave the
/// pivot row untouched.
pub(crate) fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    if a != 0 && b % a == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// A unit `u` mod `m` with `u * a == gcd(a, m) (mod m)`.
fn normalizing_unit(a: i64, m: i64) -> i64 {
    let g = a.gcd(&m);
    let (a1, m1) = (a / g, m / g);
    if m1 == 1 {
        return 1;
    }
    let (_, inv, _) = xgcd(a1.rem_euclid(m1), m1);
    let mut u = inv.rem_euclid(m1);
    while u.gcd(&m) != 1 {
        u += m1;
    }
    u % m
}

#[inline]
fn combine_rows(x: &[i64], y: &[i64], cx: i64, cy: i64, m: i64) -> Vec<i64> {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| (cx * a + cy * b).rem_euclid(m))
        .collect()
}

/// Canonical generating set of a submodule of Z_m^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellForm {
    pub(crate) order: u32,
    pub(crate) ncols: usize,
    pub(crate) rows: Vec<Vec<u32>>,
    /// (pivot column, pivot value) per row; pivot values divide m.
    pub(crate) pivots: Vec<(usize, u32)>,
}

impl HowellForm {
    pub fn compute(generators: &[Vec<u32>], ncols: usize, order: u32) -> Self {
        let m = order as i64;
        let mut a: Vec<Vec<i64>> = generators
            .iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .map(|r| r.iter().map(|&x| x as i64 % m).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for j in 0..ncols {
            let Some(p) = (r..a.len()).find(|&i| a[i][j] != 0) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..a.len() {
                let b = a[i][j];
                if b == 0 {
                    continue;
                }
                let x = a[r][j];
                let (g, s, t) = xgcd(x, b);
                let top = combine_rows(&a[r], &a[i], s, t, m);
                let bottom = combine_rows(&a[r], &a[i], -b / g, x / g, m);
                a[r] = top;
                a[i] = bottom;
            }
            let u = normalizing_unit(a[r][j], m);
            if u != 1 {
                for x in a[r].iter_mut() {
                    *x = (*x * u).rem_euclid(m);
                }
            }
            let piv = a[r][j];
            let (before, rest) = a.split_at_mut(r);
            let prow = &rest[0];
            for row in before.iter_mut() {
                let q = row[j] / piv;
                if q != 0 {
                    for (x, &y) in row.iter_mut().zip(prow) {
                        *x = (*x - q * y).rem_euclid(m);
                    }
                }
            }
            if piv != 1 {
                let ann: Vec<i64> = a[r].iter().map(|&x| (x * (m / piv)) % m).collect();
                if ann.iter().any(|&x| x != 0) {
                    a.push(ann);
                }
            }
            pivots.push((j, piv as u32));
            r += 1;
        }
        debug_assert!(a[r..].iter().all(|row| row.iter().all(|&x| x == 0)));
        a.truncate(r);
        HowellForm {
            order,
            ncols,
            rows: a
                .into_iter()
                .map(|row| row.into_iter().map(|x| x as u32).collect())
                .collect(),
            pivots,
        }
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    /// Reduces `v` against the form; the remainder is zero iff `v` is in the span.
    pub fn contains(&self, v: &[u32]) -> bool {
        let m = self.order as i64;
        let mut w: Vec<i64> = v.iter().map(|&x| x as i64 % m).collect();
        for (row, &(j, p)) in self.rows.iter().zip(&self.pivots) {
            let p = p as i64;
            if w[j] % p != 0 {
                return false;
            }
            let q = w[j] / p;
            if q != 0 {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = (*x - q * y as i64).rem_euclid(m);
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// Number of elements, as a product of the pivot annihilator sizes m/p.
    pub fn cardinality_factors(&self) -> impl Iterator<Item = u32> + '_ {
        self.pivots.iter().map(move |&(_, p)| self.order / p)
    }
}

/// Generators of {x in Z_m^n : g . x = 0 for every row g}.
///
/// Diagonalizes the generator matrix over Z_m with unimodular row and column
/// operations (U G V = D); the kernel is V applied to the annihilators of
/// the diagonal entries.
pub(crate) fn kernel(generators: &[Vec<u32>], ncols: usize, order: u32) -> Vec<Vec<u32>> {
    let m = order as i64;
    let mut a: Vec<Vec<i64>> = generators
        .iter()
        .map(|r| r.iter().map(|&x| x as i64 % m).collect())
        .collect();
    let nrows = a.len();
    // Columns of `v` are stored as rows of `vt`.
    let mut vt: Vec<Vec<i64>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| (i == j) as i64).collect())
        .collect();

    let col_op = |a: &mut Vec<Vec<i64>>, vt: &mut Vec<Vec<i64>>, t: usize, c: usize| {
        let x = a[t][t];
        let b = a[t][c];
        let (g, s, tt) = xgcd(x, b);
        let (u, w) = (-b / g, x / g);
        for row in a.iter_mut() {
            let (p, q) = (row[t], row[c]);
            row[t] = (s * p + tt * q).rem_euclid(m);
            row[c] = (u * p + w * q).rem_euclid(m);
        }
        let new_t = combine_rows(&vt[t], &vt[c], s, tt, m);
        let new_c = combine_rows(&vt[t], &vt[c], u, w, m);
        vt[t] = new_t;
        vt[c] = new_c;
    };

    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        let found = (t..nrows).find_map(|i| (t..ncols).find(|&j| a[i][j] != 0).map(|j| (i, j)));
        let Some((i0, j0)) = found else { break };
        a.swap(t, i0);
        if j0 != t {
            for row in a.iter_mut() {
                row.swap(t, j0);
            }
            vt.swap(t, j0);
        }
        loop {
            for i in t + 1..nrows {
                let b = a[i][t];
                if b == 0 {
                    continue;
                }
                let x = a[t][t];
                let (g, s, tt) = xgcd(x, b);
                let top = combine_rows(&a[t], &a[i], s, tt, m);
                let bottom = combine_rows(&a[t], &a[i], -b / g, x / g, m);
                a[t] = top;
                a[i] = bottom;
            }
            for c in t + 1..ncols {
                if a[t][c] != 0 {
                    col_op(&mut a, &mut vt, t, c);
                }
            }
            if (t + 1..nrows).all(|i| a[i][t] == 0) {
                break;
            }
        }
        diag.push(a[t][t]);
        t += 1;
    }

    let mut out = Vec::new();
    for (i, col) in vt.iter().enumerate() {
        let factor = match diag.get(i) {
            Some(&d) => m / d.gcd(&m),
            None => 1,
        };
        if factor == m {
            continue;
        }
        let g: Vec<u32> = col
            .iter()
            .map(|&x| ((x * factor).rem_euclid(m)) as u32)
            .collect();
        if g.iter().any(|&x| x != 0) {
            out.push(g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn span(gens: &[Vec<u32>], n: usize, m: u32) -> BTreeSet<Vec<u32>> {
        let mut set = BTreeSet::new();
        set.insert(vec![0; n]);
        loop {
            let mut added = Vec::new();
            for v in &set {
                for g in gens {
                    let w: Vec<u32> = v.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
                    if !set.contains(&w) {
                        added.push(w);
                    }
                }
            }
            if added.is_empty() {
                return set;
            }
            set.extend(added);
        }
    }

    #[test]
    fn identity_is_canonical() {
        let h = HowellForm::compute(&[vec![1, 0], vec![0, 1]], 2, 4);
        assert_eq!(h.rows, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn twos_are_canonical() {
        let h = HowellForm::compute(&[vec![2, 0], vec![0, 2]], 2, 4);
        assert_eq!(h.rows, vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn redundant_row_is_dropped() {
        let h = HowellForm::compute(&[vec![1, 1], vec![2, 2]], 2, 4);
        assert_eq!(h.rows, vec![vec![1, 1]]);
        // Both spans have exactly four words.
        assert_eq!(span(&[vec![1, 1], vec![2, 2]], 2, 4).len(), 4);
        assert_eq!(span(&[vec![1, 1]], 2, 4).len(), 4);
    }

    #[test]
    fn annihilator_row_gives_howell_property() {
        // span{(2,1)} over Z_4 contains (0,2), which has a zero leading entry.
        let h = HowellForm::compute(&[vec![2, 1]], 2, 4);
        assert_eq!(h.rows, vec![vec![2, 1], vec![0, 2]]);
        assert!(h.contains(&[0, 2]));
        assert!(!h.contains(&[0, 1]));
    }

    #[test]
    fn random_small_modules_match_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let m = [4u32, 6, 8, 9, 12][rng.gen_range(0..5)];
            let n = rng.gen_range(1..4);
            let r = rng.gen_range(0..4);
            let gens: Vec<Vec<u32>> = (0..r)
                .map(|_| (0..n).map(|_| rng.gen_range(0..m)).collect())
                .collect();
            let h = HowellForm::compute(&gens, n, m);
            let words = span(&gens, n, m);
            let card: u64 = h.cardinality_factors().map(|x| x as u64).product();
            assert_eq!(card, words.len() as u64, "{gens:?} mod {m}");
            // canonical: recomputing from the span itself gives the same rows
            let all: Vec<Vec<u32>> = words.iter().cloned().collect();
            assert_eq!(HowellForm::compute(&all, n, m), h);
            let total = (m as u64).pow(n as u32);
            let mut v = vec![0u32; n];
            for idx in 0..total {
                let mut x = idx;
                for c in v.iter_mut() {
                    *c = (x % m as u64) as u32;
                    x /= m as u64;
                }
                assert_eq!(h.contains(&v), words.contains(&v));
            }
            let ker = kernel(&gens, n, m);
            let kspan = span(&ker, n, m);
            let expected: Vec<Vec<u32>> = (0..total)
                .map(|idx| {
                    let mut x = idx;
                    (0..n)
                        .map(|_| {
                            let c = (x % m as u64) as u32;
                            x /= m as u64;
                            c
                        })
                        .collect::<Vec<u32>>()
                })
                .filter(|v| {
                    gens.iter()
                        .all(|g| g.iter().zip(v).map(|(a, b)| a * b).sum::<u32>() % m == 0)
                })
                .collect();
            assert_eq!(kspan, expected.into_iter().collect::<BTreeSet<_>>());
        }
    }
}

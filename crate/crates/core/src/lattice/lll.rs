//! LLL reduction on integer bases.
//!
//! The basis and its Gram matrix are kept exactly in integers; only the
//! Gram-Schmidt data used for decisions is floating point, recomputed from
//! the exact Gram matrix.

pub const LLL_DELTA: f64 = 0.99;

struct Gso {
    mu: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
    bstar: Vec<f64>,
}

impl Gso {
    fn new(n: usize) -> Self {
        Gso {
            mu: vec![vec![0.0; n]; n],
            r: vec![vec![0.0; n]; n],
            bstar: vec![0.0; n],
        }
    }

    fn compute_row(&mut self, g: &[Vec<i64>], k: usize) {
        for j in 0..k {
            let mut rkj = g[k][j] as f64;
            for i in 0..j {
                rkj -= self.mu[j][i] * self.r[k][i];
            }
            self.r[k][j] = rkj;
            self.mu[k][j] = rkj / self.bstar[j];
        }
        let mut b = g[k][k] as f64;
        for j in 0..k {
            b -= self.mu[k][j] * self.r[k][j];
        }
        self.bstar[k] = b;
    }
}

/// Reduces `rows` in place and returns the unimodular transform `U` with
/// new_rows = U * old_rows.
pub fn lll_reduce_rows(rows: &mut [Vec<i64>], delta: f64) -> Vec<Vec<i64>> {
    let n = rows.len();
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    if n == 0 {
        return u;
    }
    let dot = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let mut g: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| dot(&rows[i], &rows[j])).collect())
        .collect();
    let mut gso = Gso::new(n);
    gso.compute_row(&g, 0);
    let mut k = 1;
    while k < n {
        loop {
            gso.compute_row(&g, k);
            let mut changed = false;
            for j in (0..k).rev() {
                let m = gso.mu[k][j];
                if m.abs() <= 0.5 + 1e-9 {
                    continue;
                }
                let q = m.round() as i64;
                changed = true;
                // b_k -= q b_j
                let (lo, hi) = rows.split_at_mut(k);
                for (x, &y) in hi[0].iter_mut().zip(&lo[j]) {
                    *x -= q * y;
                }
                let (lo, hi) = u.split_at_mut(k);
                for (x, &y) in hi[0].iter_mut().zip(&lo[j]) {
                    *x -= q * y;
                }
                let gkj = g[k][j];
                let gjj = g[j][j];
                for i in 0..n {
                    if i != k {
                        g[k][i] -= q * g[j][i];
                        g[i][k] = g[k][i];
                    }
                }
                g[k][k] += q * q * gjj - 2 * q * gkj;
                for l in 0..j {
                    gso.mu[k][l] -= q as f64 * gso.mu[j][l];
                }
                gso.mu[k][j] -= q as f64;
            }
            if !changed {
                break;
            }
        }
        let m = gso.mu[k][k - 1];
        if gso.bstar[k] < (delta - m * m) * gso.bstar[k - 1] {
            rows.swap(k, k - 1);
            u.swap(k, k - 1);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            gso.compute_row(&g, k - 1);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    u
}

//! Hermite normal form of full-rank integer lattices that contain d Z^n.
//!
//! Knowing d lets every entry off the pivot be kept in [0, d), so the
//! computation never leaves i64 even in dimension 64.

use crate::code::howell::xgcd;

fn lincomb(x: &[i64], y: &[i64], cx: i64, cy: i64, d: i64, from: usize) -> Vec<i64> {
    let mut out = vec![0i64; x.len()];
    for c in from..x.len() {
        let v = (cx as i128 * x[c] as i128 + cy as i128 * y[c] as i128).rem_euclid(d as i128);
        out[c] = v as i64;
    }
    out
}

/// Upper-triangular HNF basis of the lattice spanned by `generators` and
/// `d * Z^n`. Pivots are positive divisors of `d`; entries above a pivot
/// lie in [0, pivot). The result is unique for the lattice.
pub fn hnf_mod(generators: &[Vec<i64>], n: usize, d: i64) -> Vec<Vec<i64>> {
    assert!(d > 0, "modulus must be positive");
    let mut pending: Vec<Vec<i64>> = generators
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "generator has wrong length");
            r.iter().map(|&x| x.rem_euclid(d)).collect::<Vec<_>>()
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut basis: Vec<Vec<i64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut pivot: Option<Vec<i64>> = None;
        let mut rest = Vec::with_capacity(pending.len() + 1);
        for row in pending.drain(..) {
            if row[j] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let (a, b) = (p[j], row[j]);
                    let (g, s, t) = xgcd(a, b);
                    let mut top = lincomb(&p, &row, s, t, d, j + 1);
                    top[j] = g;
                    let bottom = lincomb(&p, &row, -b / g, a / g, d, j + 1);
                    pivot = Some(top);
                    if bottom.iter().any(|&x| x != 0) {
                        rest.push(bottom);
                    }
                }
            }
        }
        let mut e = vec![0i64; n];
        e[j] = d;
        let row = match pivot {
            None => e,
            Some(p) => {
                // fold in d e_j: new pivot gcd(p_j, d), and the leftover
                // (d/g) p - (p_j/g) d e_j, which vanishes in column j
                let (g, s, _t) = xgcd(p[j], d);
                let leftover = lincomb(&p, &e, d / g, 0, d, j + 1);
                if leftover.iter().any(|&x| x != 0) {
                    rest.push(leftover);
                }
                let mut row = lincomb(&p, &e, s, 0, d, j + 1);
                row[j] = g;
                row
            }
        };
        basis.push(row);
        pending = rest;
    }
    // reduce above the diagonal
    for j in 0..n {
        let piv = basis[j][j];
        for i in 0..j {
            let q = basis[i][j].div_euclid(piv);
            if q != 0 {
                let (upper, lower) = basis.split_at_mut(j);
                for (x, &y) in upper[i].iter_mut().zip(&lower[0]).skip(j) {
                    *x -= q * y;
                }
            }
        }
    }
    basis
}

/// Whether `v` lies in the lattice with HNF basis `h` (which contains d Z^n).
pub fn hnf_contains(h: &[Vec<i64>], v: &[i64], d: i64) -> bool {
    let n = h.len();
    let mut w: Vec<i64> = v.iter().map(|&x| x.rem_euclid(d)).collect();
    for j in 0..n {
        let p = h[j][j];
        if w[j] % p != 0 {
            return false;
        }
        let q = w[j] / p;
        if q != 0 {
            for c in j..n {
                w[c] = (w[c] - q * h[j][c]).rem_euclid(d);
            }
        }
    }
    w.iter().all(|&x| x == 0)
}

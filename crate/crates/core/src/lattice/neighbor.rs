//! Even sublattices and even unimodular neighbors of odd unimodular lattices.

use super::LatticeBasis;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct EvenSublattice {
    pub lattice: LatticeBasis,
    /// The input was already even and is returned unchanged.
    pub already_even: bool,
}

fn true_gram_mod2(l: &LatticeBasis) -> Result<Vec<Vec<u8>>> {
    if !l.is_integral() {
        return Err(Error::Domain("lattice is not integral".into()));
    }
    let s = l.scale() as i64;
    Ok(l.gram_scaled()
        .iter()
        .map(|r| r.iter().map(|x| (x / s).rem_euclid(2) as u8).collect())
        .collect())
}

/// {x in L : <x, x> even}, of index 2 when L is odd.
pub fn even_sublattice(l: &LatticeBasis) -> Result<EvenSublattice> {
    let g = true_gram_mod2(l)?;
    let n = l.dim();
    let Some(i0) = (0..n).find(|&i| g[i][i] == 1) else {
        return Ok(EvenSublattice {
            lattice: l.clone(),
            already_even: true,
        });
    };
    let rows = l.rows();
    let gens: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            if i == i0 {
                rows[i0].iter().map(|x| 2 * x).collect()
            } else if g[i][i] == 0 {
                rows[i].clone()
            } else {
                rows[i].iter().zip(&rows[i0]).map(|(a, b)| a + b).collect()
            }
        })
        .collect();
    Ok(EvenSublattice {
        lattice: LatticeBasis::from_generators_mod(l.scale(), &gens, n, 2 * l.exponent()),
        already_even: false,
    })
}

/// Solves G c = diag(G) over GF(2); the vector sum c_j b_j is characteristic:
/// <w, x> and <x, x> have the same parity for every x in L.
pub fn characteristic_vector(l: &LatticeBasis) -> Result<Vec<i64>> {
    let g = true_gram_mod2(l)?;
    let n = l.dim();
    let mut a: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            let mut r = g[i].clone();
            r.push(g[i][i]);
            r
        })
        .collect();
    let mut where_ = vec![usize::MAX; n];
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&i| a[i][col] == 1) else {
            continue;
        };
        a.swap(row, p);
        for i in 0..n {
            if i != row && a[i][col] == 1 {
                let pr = a[row].clone();
                for (x, y) in a[i].iter_mut().zip(pr) {
                    *x ^= y;
                }
            }
        }
        where_[col] = row;
        row += 1;
    }
    if row < n {
        return Err(Error::Domain("Gram matrix is singular mod 2".into()));
    }
    let c: Vec<i64> = (0..n).map(|col| a[where_[col]][n] as i64).collect();
    let rows = l.rows();
    Ok((0..n)
        .map(|k| (0..n).map(|j| c[j] * rows[j][k]).sum())
        .collect())
}

/// The even unimodular lattices sharing the even sublattice with `l`, in the
/// fixed order glue w/2, then w/2 + b, where w is the characteristic vector
/// and b the first odd basis vector.
pub fn even_neighbors(l: &LatticeBasis) -> Result<Vec<LatticeBasis>> {
    let n = l.dim();
    if !n.is_multiple_of(8) {
        return Err(Error::Domain(format!(
            "no even unimodular lattice exists in dimension {n}"
        )));
    }
    let inv = l.invariants();
    if !inv.unimodular {
        return Err(Error::Domain(
            "even neighbors need a unimodular lattice".into(),
        ));
    }
    if inv.even {
        return Err(Error::Domain("lattice is already even".into()));
    }
    let l0 = even_sublattice(l)?.lattice;
    let w = characteristic_vector(l)?;
    let g = true_gram_mod2(l)?;
    let i0 = (0..n)
        .find(|&i| g[i][i] == 1)
        .expect("odd lattice has an odd basis vector");
    let b = &l.rows()[i0];

    // at scale 4s the half-vectors w/2 and w/2 + b have integer coordinates
    let base: Vec<Vec<i64>> = l0
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| 2 * x).collect())
        .collect();
    let d = 2 * l0.exponent();
    let glues = [
        w.clone(),
        w.iter()
            .zip(b)
            .map(|(x, y)| x + 2 * y)
            .collect::<Vec<i64>>(),
    ];
    let mut out = Vec::new();
    for glue in glues {
        let mut gens = base.clone();
        gens.push(glue);
        let nb = LatticeBasis::from_generators_mod(4 * l.scale(), &gens, n, d);
        let ni = nb.invariants();
        if !(ni.even && ni.unimodular) {
            continue;
        }
        if !base.iter().all(|r| nb.contains(r)) {
            return Err(Error::Construction(
                "neighbor does not contain the even sublattice".into(),
            ));
        }
        out.push(nb.normalized());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::EnumOptions;
    use num_rational::{BigRational, Rational64};

    fn identity(n: usize) -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i64).collect())
            .collect()
    }

    #[test]
    fn even_sublattice_of_z2() {
        let z2 = LatticeBasis::new(1, identity(2)).unwrap();
        let e = even_sublattice(&z2).unwrap();
        assert!(!e.already_even);
        assert_eq!(
            e.lattice.invariants().det,
            BigRational::from_integer(4.into())
        );
        assert!(e.lattice.contains(&[1, 1]));
        assert!(e.lattice.contains(&[2, 0]));
        assert!(!e.lattice.contains(&[1, 0]));
    }

    #[test]
    fn even_sublattice_of_z8_is_d8() {
        let z8 = LatticeBasis::new(1, identity(8)).unwrap();
        let d8 = even_sublattice(&z8).unwrap().lattice;
        // oracle: vectors in {-1,0,1}^8 with even coordinate sum and norm 2
        let mut brute = 0;
        for idx in 0..3u32.pow(8) {
            let mut x = idx;
            let (mut norm, mut sum) = (0, 0i64);
            for _ in 0..8 {
                let c = (x % 3) as i64 - 1;
                x /= 3;
                norm += c * c;
                sum += c;
            }
            if norm == 2 && sum % 2 == 0 {
                brute += 1;
            }
        }
        let shells = d8
            .shell_sizes(Rational64::from_integer(2), &EnumOptions::default())
            .unwrap();
        assert_eq!(shells.count_int(2), brute);
        assert_eq!(brute, 112);
    }

    #[test]
    fn even_lattice_flagged() {
        let z8 = LatticeBasis::new(1, identity(8)).unwrap();
        let d8 = even_sublattice(&z8).unwrap().lattice;
        let again = even_sublattice(&d8).unwrap();
        assert!(again.already_even);
    }

    #[test]
    fn neighbors_of_z8_are_e8() {
        let z8 = LatticeBasis::new(1, identity(8)).unwrap();
        let ns = even_neighbors(&z8).unwrap();
        assert_eq!(ns.len(), 2);
        for nb in &ns {
            let inv = nb.invariants();
            assert!(inv.even && inv.unimodular);
            let s = nb
                .shell_sizes(Rational64::from_integer(4), &EnumOptions::default())
                .unwrap();
            assert_eq!(s.count_int(1), 0);
            assert_eq!(s.count_int(2), 240);
            assert_eq!(s.count_int(3), 0);
            assert_eq!(s.count_int(4), 2160);
        }
    }

    #[test]
    fn characteristic_vector_of_z8() {
        let z8 = LatticeBasis::new(1, identity(8)).unwrap();
        assert_eq!(characteristic_vector(&z8).unwrap(), vec![1; 8]);
    }

    #[test]
    fn neighbors_need_dimension_divisible_by_eight() {
        let z4 = LatticeBasis::new(1, identity(4)).unwrap();
        assert!(matches!(even_neighbors(&z4), Err(Error::Domain(_))));
    }
}

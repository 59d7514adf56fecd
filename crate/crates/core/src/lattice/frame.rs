//! Frames: n pairwise orthogonal lattice vectors of a common norm.

use num_rational::Rational64;
use num_traits::Zero;

use super::{construction_a_unchecked, LatticeBasis};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::ring::Modulus;

#[derive(Clone, Debug)]
pub struct Frame {
    host: LatticeBasis,
    /// Rows in the host's scaled coordinates.
    vectors: Vec<Vec<i64>>,
    norm: Rational64,
}

impl Frame {
    /// Validates the frame equation and containment exactly.
    pub fn new(host: LatticeBasis, vectors: Vec<Vec<i64>>, norm: Rational64) -> Result<Frame> {
        let n = host.dim();
        if vectors.len() != n || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::Domain(format!(
                "a frame of a rank-{n} lattice needs {n} vectors of length {n}"
            )));
        }
        let target = norm * Rational64::from_integer(host.scale() as i64);
        if !target.is_integer() || target <= Rational64::zero() {
            return Err(Error::Domain(format!(
                "frame norm {norm} is not realizable at scale {}",
                host.scale()
            )));
        }
        let target = target.to_integer();
        for i in 0..n {
            for j in i..n {
                let d: i64 = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { target } else { 0 };
                if d != want {
                    return Err(Error::Domain(format!(
                        "frame equation fails at ({i}, {j}): scaled inner product {d}, expected {want}"
                    )));
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| !host.contains(&vectors[i])) {
            return Err(Error::Domain(format!(
                "frame vector {i} is not in the lattice"
            )));
        }
        Ok(Frame {
            host,
            vectors,
            norm,
        })
    }

    pub fn host(&self) -> &LatticeBasis {
        &self.host
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    pub fn norm(&self) -> Rational64 {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The same vectors viewed inside another lattice (possibly at another
    /// scale); fails unless every vector lies in `host`.
    pub fn rehost(&self, host: &LatticeBasis) -> Result<Frame> {
        let (s1, s2) = (self.host.scale(), host.scale());
        // new = old * sqrt(s2 / s1)
        let (num, den) = if s2 % s1 == 0 {
            let r = s2 / s1;
            (r.isqrt(), 1)
        } else if s1 % s2 == 0 {
            let r = s1 / s2;
            (1, r.isqrt())
        } else {
            (0, 0)
        };
        let ok = num > 0 && den > 0 && (num * num * s1 == s2 * den * den);
        if !ok {
            return Err(Error::Domain(format!(
                "scales {s1} and {s2} differ by a non-square factor"
            )));
        }
        let (num, den) = (num as i64, den as i64);
        let mut vectors = Vec::with_capacity(self.vectors.len());
        for v in &self.vectors {
            if v.iter().any(|x| (x * num) % den != 0) {
                return Err(Error::Domain("frame vector is not in the lattice".into()));
            }
            vectors.push(v.iter().map(|x| x * num / den).collect());
        }
        Frame::new(host.clone(), vectors, self.norm)
    }
}

/// The frame {sqrt(m) e_i} inside A_m(C).
pub fn standard_frame(code: &LinearCode) -> Result<Frame> {
    let host = super::construction_a(code)?;
    let m = code.modulus().order() as i64;
    let n = code.length();
    let vectors = (0..n)
        .map(|i| (0..n).map(|j| if i == j { m } else { 0 }).collect())
        .collect();
    Frame::new(host, vectors, Rational64::from_integer(m))
}

/// {f_1 + f_2, f_1 - f_2, f_3 + f_4, ...}, a frame of twice the norm.
pub fn double_frame(frame: &Frame) -> Result<Frame> {
    let n = frame.len();
    if !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "cannot double a frame of odd length {n}"
        )));
    }
    let mut vectors = Vec::with_capacity(n);
    for pair in frame.vectors.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        vectors.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        vectors.push(a.iter().zip(b).map(|(x, y)| x - y).collect());
    }
    Frame::new(
        frame.host.clone(),
        vectors,
        frame.norm * Rational64::from_integer(2),
    )
}

/// Rows (<b_r, f_i>)_i for each basis vector b_r of the host; these are
/// integers whenever the host is integral.
pub fn frame_coordinates(frame: &Frame) -> Result<Vec<Vec<i64>>> {
    let s = frame.host.scale() as i64;
    frame
        .host
        .rows()
        .iter()
        .map(|b| {
            frame
                .vectors
                .iter()
                .map(|f| {
                    let d: i64 = b.iter().zip(f).map(|(x, y)| x * y).sum();
                    if d % s != 0 {
                        Err(Error::Domain("frame coordinates are not integral".into()))
                    } else {
                        Ok(d / s)
                    }
                })
                .collect()
        })
        .collect()
}

/// The code over Z_l (l the frame norm) read off the frame coordinates.
/// The result is certified: A_l(code) equals the frame-coordinate image
/// of the host, and the two Gram matrices agree.
pub fn code_from_frame(lattice: &LatticeBasis, frame: &Frame) -> Result<LinearCode> {
    if !frame.norm.is_integer() {
        return Err(Error::Domain(format!(
            "frame norm {} is not an integer",
            frame.norm
        )));
    }
    let l = frame.norm.to_integer();
    let frame = frame.rehost(lattice)?;
    let modulus = u32::try_from(l)
        .ok()
        .and_then(|m| Modulus::new(m).ok())
        .ok_or_else(|| Error::Domain(format!("frame norm {l} is not a usable modulus")))?;
    let coords = frame_coordinates(&frame)?;
    let n = lattice.dim();
    let code = LinearCode::from_rows(modulus, n, &coords)?;

    // Certificate.
    let image = LatticeBasis::from_parts(l as u64, coords.clone(), l);
    let a = construction_a_unchecked(&code);
    if a.hnf() != image.hnf() {
        return Err(Error::Construction(
            "frame image is not A_l of the extracted code".into(),
        ));
    }
    let s = lattice.scale() as i64;
    let g = lattice.gram_scaled();
    for i in 0..n {
        for j in 0..n {
            if image.gram_scaled()[i][j] * s != g[i][j] * l {
                return Err(Error::Construction(
                    "frame coordinates do not preserve the Gram matrix".into(),
                ));
            }
        }
    }
    Ok(code)
}

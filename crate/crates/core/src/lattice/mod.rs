//! Lattices in scaled integer coordinates: Construction A, invariants,
//! reduction, short-vector enumeration, frames and neighbors.
//!
//! A lattice with scale `s` is stored through the integer rows of
//! sqrt(s) * L, so the true inner product of two stored vectors is their
//! integer dot product divided by `s`.

mod enumerate;
mod frame;
mod hnf;
mod lll;
mod neighbor;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};

use crate::code::{LinearCode, MinWeight};
use crate::error::{Error, Result};

pub use enumerate::EnumOptions;
pub use frame::{code_from_frame, double_frame, frame_coordinates, standard_frame, Frame};
pub use hnf::{hnf_contains, hnf_mod};
pub use lll::LLL_DELTA;
pub use neighbor::{characteristic_vector, even_neighbors, even_sublattice, EvenSublattice};

/// A full-rank lattice, stored as integer rows of sqrt(scale) * L.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    scale: u64,
    rows: Vec<Vec<i64>>,
    gram_scaled: Vec<Vec<i64>>,
    /// Smallest d with d Z^n inside the stored (scaled) lattice.
    exponent: i64,
    hnf: OnceLock<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeInvariants {
    /// Determinant of the true Gram matrix.
    pub det: BigRational,
    pub integral: bool,
    pub unimodular: bool,
    pub even: bool,
    pub odd: bool,
}

/// Number of lattice vectors of each norm up to `max_norm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellTable {
    pub counts: BTreeMap<Rational64, u64>,
    pub max_norm: Rational64,
    pub complete: bool,
}

impl ShellTable {
    pub fn count(&self, norm: Rational64) -> u64 {
        self.counts.get(&norm).copied().unwrap_or(0)
    }

    pub fn count_int(&self, norm: i64) -> u64 {
        self.count(Rational64::from_integer(norm))
    }
}

fn bareiss_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Smallest d > 0 with d * rows^{-1} integral.
fn exponent_of(rows: &[Vec<i64>]) -> Result<i64> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect();
            row.extend((0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !a[i][c].is_zero())
            .ok_or_else(|| Error::Domain("basis is singular".into()))?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..2 * n {
                    let v = &a[c][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
    }
    let mut d = BigInt::one();
    for row in &a {
        for x in &row[n..] {
            d = d.lcm(x.denom());
        }
    }
    d.to_i64()
        .filter(|&d| d < (1 << 40))
        .ok_or_else(|| Error::Domain(format!("lattice exponent {d} is too large")))
}

impl LatticeBasis {
    pub fn new(scale: u64, rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if scale == 0 {
            return Err(Error::Input("scale must be positive".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("basis must be square".into()));
        }
        let exponent = exponent_of(&rows)?;
        Ok(Self::from_parts(scale, rows, exponent))
    }

    /// `exponent` must satisfy exponent * Z^n inside the lattice.
    pub(crate) fn from_parts(scale: u64, rows: Vec<Vec<i64>>, exponent: i64) -> Self {
        let gram_scaled = rows
            .iter()
            .map(|a| {
                rows.iter()
                    .map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum())
                    .collect()
            })
            .collect();
        LatticeBasis {
            scale,
            rows,
            gram_scaled,
            exponent,
            hnf: OnceLock::new(),
        }
    }

    /// Lattice generated by `generators` together with d Z^n.
    pub(crate) fn from_generators_mod(
        scale: u64,
        generators: &[Vec<i64>],
        n: usize,
        d: i64,
    ) -> Self {
        let rows = hnf_mod(generators, n, d);
        let b = Self::from_parts(scale, rows.clone(), d);
        let _ = b.hnf.set(rows);
        b
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn gram_scaled(&self) -> &[Vec<i64>] {
        &self.gram_scaled
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Canonical (Hermite) basis of the stored scaled lattice.
    pub fn hnf(&self) -> &[Vec<i64>] {
        self.hnf
            .get_or_init(|| hnf_mod(&self.rows, self.dim(), self.exponent))
    }

    /// Whether a vector in scaled coordinates lies in the lattice.
    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.dim() && hnf_contains(self.hnf(), v, self.exponent)
    }

    /// True iff `other` is the same set of vectors (scales may differ by a square factor).
    pub fn same_lattice(&self, other: &LatticeBasis) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let l = self.scale.lcm(&other.scale);
        match (self.rescaled(l), other.rescaled(l)) {
            (Ok(a), Ok(b)) => a.hnf() == b.hnf(),
            _ => false,
        }
    }

    /// Same lattice at a new scale; the ratio must be a perfect square.
    pub fn rescaled(&self, new_scale: u64) -> Result<LatticeBasis> {
        if !new_scale.is_multiple_of(self.scale) {
            return Err(Error::Input(format!(
                "cannot move scale {} to {new_scale}",
                self.scale
            )));
        }
        let ratio = new_scale / self.scale;
        let t = ratio.isqrt();
        if t * t != ratio {
            return Err(Error::Input(format!("scale ratio {ratio} is not a square")));
        }
        let t = t as i64;
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x * t).collect())
            .collect();
        Ok(Self::from_parts(new_scale, rows, self.exponent * t))
    }

    /// Divides out square factors of the scale that every row coordinate shares.
    pub fn normalized(&self) -> LatticeBasis {
        let mut out = self.clone();
        for p in [2i64, 3, 5, 7, 11, 13] {
            let pp = (p * p) as u64;
            while out.scale.is_multiple_of(pp)
                && out.rows.iter().all(|r| r.iter().all(|x| x % p == 0))
                && out.exponent % p == 0
            {
                let rows = out
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|x| x / p).collect())
                    .collect();
                out = Self::from_parts(out.scale / pp, rows, out.exponent / p);
            }
        }
        out
    }

    pub fn det_gram_scaled(&self) -> BigInt {
        bareiss_det(&self.gram_scaled)
    }

    pub fn is_integral(&self) -> bool {
        let s = self.scale as i64;
        self.gram_scaled.iter().flatten().all(|x| x % s == 0)
    }

    pub fn invariants(&self) -> LatticeInvariants {
        let n = self.dim() as u32;
        let s = BigInt::from(self.scale);
        let det = BigRational::new(self.det_gram_scaled(), s.pow(n));
        let integral = self.is_integral();
        let unimodular = integral && det.is_one();
        let two_s = 2 * self.scale as i64;
        let even_diag = (0..self.dim()).all(|i| self.gram_scaled[i][i] % two_s == 0);
        LatticeInvariants {
            det,
            integral,
            unimodular,
            even: unimodular && even_diag,
            odd: unimodular && !even_diag,
        }
    }

    /// True norm of a scaled-coordinate vector.
    pub fn norm_of(&self, v: &[i64]) -> Rational64 {
        let s: i64 = v.iter().map(|x| x * x).sum();
        Rational64::new(s, self.scale as i64)
    }

    /// LLL-reduced basis of the same lattice and the transform U with
    /// new = U * old.
    pub fn lll_reduce(&self) -> (LatticeBasis, Vec<Vec<i64>>) {
        let mut rows = self.rows.clone();
        let u = lll::lll_reduce_rows(&mut rows, LLL_DELTA);
        (Self::from_parts(self.scale, rows, self.exponent), u)
    }

    fn enumerate(&self, radius_scaled: i64, opts: &EnumOptions) -> enumerate::EnumOutcome {
        let (red, _) = self.lll_reduce();
        enumerate::enumerate_short(red.gram_scaled(), radius_scaled, opts)
    }

    /// Exact shell sizes up to `max_norm` (inclusive).
    pub fn shell_sizes(&self, max_norm: Rational64, opts: &EnumOptions) -> Result<ShellTable> {
        if max_norm < Rational64::zero() {
            return Err(Error::Input("max_norm must be nonnegative".into()));
        }
        let radius = (max_norm * Rational64::from_integer(self.scale as i64))
            .floor()
            .to_integer();
        let out = self.enumerate(radius, opts);
        if !out.complete {
            return Err(Error::Resource {
                what: format!(
                    "shell enumeration to norm {max_norm} exceeded {} nodes",
                    opts.budget.unwrap_or(u64::MAX)
                ),
                certified_floor: None,
            });
        }
        let mut counts = BTreeMap::new();
        counts.insert(Rational64::zero(), 1);
        for (k, v) in out.counts {
            counts.insert(Rational64::new(k, self.scale as i64), v);
        }
        Ok(ShellTable {
            counts,
            max_norm,
            complete: true,
        })
    }

    /// Exact minimum norm. Radii grow one norm step at a time so that an
    /// exhausted budget still certifies every completed radius.
    pub fn min_norm(&self, opts: &EnumOptions) -> Result<Rational64> {
        let (red, _) = self.lll_reduce();
        let s = self.scale as i64;
        let upper = (0..red.dim())
            .map(|i| red.gram_scaled[i][i])
            .min()
            .unwrap_or(0);
        if upper == 0 {
            return Err(Error::Domain(
                "zero-dimensional lattice has no minimum".into(),
            ));
        }
        let integral = self.is_integral();
        // nonzero norms are multiples of the step
        let step = if integral && self.even_by_gram() {
            2 * s
        } else if integral {
            s
        } else {
            1
        };
        let mut floor_scaled = if integral { step } else { 0 };
        let mut radius = step.min(upper);
        let mut spent = 0u64;
        loop {
            let left = opts.budget.map(|b| b.saturating_sub(spent));
            let o = EnumOptions {
                budget: left,
                progress: opts.progress,
            };
            let out = enumerate::enumerate_short(red.gram_scaled(), radius, &o);
            spent += out.nodes;
            if !out.complete {
                return Err(Error::Resource {
                    what: format!(
                        "minimum-norm enumeration at radius {} exceeded the node budget",
                        Rational64::new(radius, s)
                    ),
                    certified_floor: Some(Rational64::new(floor_scaled, s)),
                });
            }
            if let Some((&k, _)) = out.counts.iter().next() {
                return Ok(Rational64::new(k, s));
            }
            if opts.progress {
                eprintln!(
                    "checkpoint: no nonzero vector of norm <= {}",
                    Rational64::new(radius, s)
                );
            }
            assert!(
                radius < upper,
                "basis vector of norm {upper} was not enumerated"
            );
            floor_scaled = radius + step;
            radius = (radius + step).min(upper);
        }
    }

    fn even_by_gram(&self) -> bool {
        let two_s = 2 * self.scale as i64;
        (0..self.dim()).all(|i| self.gram_scaled[i][i] % two_s == 0)
    }

    /// Serializes as `dimension <n> scale <s>` followed by one basis row per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "dimension {} scale {}", self.dim(), self.scale).unwrap();
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty lattice file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, scale) = match fields.as_slice() {
            ["dimension", n, "scale", s] => (
                n.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("dimension: {e}")))?,
                s.parse::<u64>()
                    .map_err(|e| Error::Parse(format!("scale: {e}")))?,
            ),
            _ => return Err(Error::Parse(format!("bad header line: {header}"))),
        };
        let rows = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|x| {
                        x.parse::<i64>()
                            .map_err(|e| Error::Parse(format!("{x}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} rows, found {}",
                rows.len()
            )));
        }
        LatticeBasis::new(scale, rows)
    }
}

/// (1/sqrt(m)) (rho(C) + m Z^n) for a self-dual code over Z_m.
pub fn construction_a(code: &LinearCode) -> Result<LatticeBasis> {
    if !code.is_self_dual() {
        return Err(Error::Domain(
            "Construction A needs a self-dual code".into(),
        ));
    }
    Ok(construction_a_unchecked(code))
}

/// The same lattice without the self-duality check; for arbitrary codes the
/// result need not be integral.
pub fn construction_a_unchecked(code: &LinearCode) -> LatticeBasis {
    let m = code.modulus().order() as i64;
    let gens: Vec<Vec<i64>> = code.canonical_rows().iter().map(|r| r.lift()).collect();
    LatticeBasis::from_generators_mod(m as u64, &gens, code.length(), m)
}

/// d_E(C) from the minimum norm of A_m(C), using min norm = min{m, d_E/m}.
pub fn min_euclidean_weight_via_lattice(
    code: &LinearCode,
    opts: &EnumOptions,
) -> Result<MinWeight> {
    let lattice = construction_a(code)?;
    let m = code.modulus().order() as i64;
    match lattice.min_norm(opts) {
        Ok(mu) => {
            if mu < Rational64::from_integer(m) {
                let d = mu * Rational64::from_integer(m);
                debug_assert!(d.is_integer());
                Ok(MinWeight::Exact(d.to_integer() as u64))
            } else {
                Ok(MinWeight::LowerBound((m * m) as u64))
            }
        }
        Err(Error::Resource {
            certified_floor: Some(f),
            ..
        }) => {
            let b = (f.min(Rational64::from_integer(m)) * Rational64::from_integer(m)).ceil();
            Ok(MinWeight::LowerBound(b.to_integer() as u64))
        }
        Err(e) => Err(e),
    }
}

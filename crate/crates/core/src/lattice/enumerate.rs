//! Fincke–Pohst enumeration of short lattice vectors.
//!
//! Floating point is used only to prune the search tree; the pruning
//! radius is padded by a relative margin and every surviving candidate is
//! re-checked with its exact integer norm.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

const RADIUS_PAD: f64 = 1e-6;
const FLUSH_EVERY: u64 = 1 << 14;

/// Options shared by every enumeration call.
#[derive(Clone, Debug, Default)]
pub struct EnumOptions {
    /// Maximum number of search-tree nodes; `None` means unlimited.
    pub budget: Option<u64>,
    /// Write checkpoint lines to stderr as top-level subtrees finish.
    pub progress: bool,
}

impl EnumOptions {
    pub fn with_budget(budget: u64) -> Self {
        EnumOptions {
            budget: Some(budget),
            progress: false,
        }
    }
}

/// Result of a complete or aborted enumeration.
#[derive(Clone, Debug)]
pub(crate) struct EnumOutcome {
    /// Scaled norm -> number of vectors (both signs counted).
    pub counts: BTreeMap<i64, u64>,
    pub complete: bool,
    pub nodes: u64,
}

struct Ctx<'a> {
    gram: &'a [Vec<i64>],
    mu: Vec<Vec<f64>>,
    bstar: Vec<f64>,
    radius_exact: i64,
    radius: f64,
    nodes: AtomicU64,
    abort: AtomicBool,
    budget: u64,
}

#[derive(Clone)]
struct Prefix {
    x: Vec<i64>,
    partial: f64,
    all_zero: bool,
}

fn cholesky(gram: &[Vec<i64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = gram.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut r = vec![vec![0.0; n]; n];
    let mut bstar = vec![0.0; n];
    for k in 0..n {
        for j in 0..k {
            let mut v = gram[k][j] as f64;
            for i in 0..j {
                v -= mu[j][i] * r[k][i];
            }
            r[k][j] = v;
            mu[k][j] = v / bstar[j];
        }
        let mut b = gram[k][k] as f64;
        for j in 0..k {
            b -= mu[k][j] * r[k][j];
        }
        bstar[k] = b;
    }
    (mu, bstar)
}

impl Ctx<'_> {
    fn exact_norm(&self, x: &[i64]) -> i128 {
        let n = x.len();
        let mut s: i128 = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let mut t: i128 = self.gram[i][i] as i128 * x[i] as i128;
            for j in i + 1..n {
                t += 2 * self.gram[i][j] as i128 * x[j] as i128;
            }
            s += t * x[i] as i128;
        }
        s
    }

    fn interval(&self, level: usize, center: f64, partial: f64) -> Option<(f64, i64, i64)> {
        let rem = (self.radius - partial) / self.bstar[level];
        if rem < 0.0 {
            return None;
        }
        let w = rem.sqrt();
        Some((
            center,
            (center - w).ceil() as i64,
            (center + w).floor() as i64,
        ))
    }

    /// Center sums for a fixed prefix: sums[i][j] = -sum_{k >= j} x_k mu[k][i].
    fn center_sums(&self, x: &[i64]) -> Vec<Vec<f64>> {
        let n = x.len();
        let mut sums = vec![vec![0.0; n + 1]; n];
        for (i, row) in sums.iter_mut().enumerate() {
            for j in (i + 1..n).rev() {
                row[j] = row[j + 1] - x[j] as f64 * self.mu[j][i];
            }
        }
        sums
    }

    /// Depth-first walk below `level`; returns false when aborted.
    /// `sums[level][level + 1]` must be current for the fixed coordinates;
    /// `stale[i]` is the highest coordinate index row i of `sums` has not
    /// yet absorbed.
    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        level: usize,
        x: &mut Vec<i64>,
        sums: &mut [Vec<f64>],
        stale: &mut [usize],
        partial: f64,
        all_zero: bool,
        local_nodes: &mut u64,
        counts: &mut BTreeMap<i64, u64>,
    ) -> bool {
        let Some((center, mut lo, hi)) = self.interval(level, sums[level][level + 1], partial)
        else {
            return true;
        };
        if all_zero {
            lo = lo.max(0);
        }
        for v in lo..=hi {
            *local_nodes += 1;
            if *local_nodes >= FLUSH_EVERY {
                let total = self.nodes.fetch_add(*local_nodes, Ordering::Relaxed) + *local_nodes;
                *local_nodes = 0;
                if total > self.budget {
                    self.abort.store(true, Ordering::Relaxed);
                }
                if self.abort.load(Ordering::Relaxed) {
                    return false;
                }
            }
            x[level] = v;
            let d = partial + self.bstar[level] * (v as f64 - center).powi(2);
            if d > self.radius {
                continue;
            }
            let zero_here = all_zero && v == 0;
            if level == 0 {
                if zero_here {
                    continue;
                }
                let norm = self.exact_norm(x);
                if norm <= self.radius_exact as i128 {
                    // only vectors with positive leading coordinate are visited
                    *counts.entry(norm as i64).or_insert(0) += 2;
                }
            } else {
                let i = level - 1;
                let hi = stale[i].max(level);
                for j in (i + 1..=hi).rev() {
                    sums[i][j] = sums[i][j + 1] - x[j] as f64 * self.mu[j][i];
                }
                if i > 0 {
                    stale[i - 1] = stale[i - 1].max(hi);
                }
                stale[i] = i;
                if !self.walk(i, x, sums, stale, d, zero_here, local_nodes, counts) {
                    x[level] = 0;
                    return false;
                }
            }
        }
        x[level] = 0;
        true
    }

    fn prefixes(&self, depth: usize) -> Vec<Prefix> {
        let n = self.bstar.len();
        let mut out = vec![Prefix {
            x: vec![0; n],
            partial: 0.0,
            all_zero: true,
        }];
        for level in (n - depth..n).rev() {
            let mut next = Vec::new();
            for p in &out {
                let center: f64 = (level + 1..n)
                    .map(|j| -(p.x[j] as f64) * self.mu[j][level])
                    .sum();
                let Some((center, mut lo, hi)) = self.interval(level, center, p.partial) else {
                    continue;
                };
                if p.all_zero {
                    lo = lo.max(0);
                }
                for v in lo..=hi {
                    let d = p.partial + self.bstar[level] * (v as f64 - center).powi(2);
                    if d > self.radius {
                        continue;
                    }
                    let mut x = p.x.clone();
                    x[level] = v;
                    next.push(Prefix {
                        x,
                        partial: d,
                        all_zero: p.all_zero && v == 0,
                    });
                }
            }
            out = next;
        }
        out
    }
}

/// Counts every nonzero x with x^T G x <= radius (G = scaled Gram of an
/// LLL-reduced basis), grouped by exact scaled norm. The zero vector is
/// not included.
pub(crate) fn enumerate_short(gram: &[Vec<i64>], radius: i64, opts: &EnumOptions) -> EnumOutcome {
    let n = gram.len();
    let (mu, bstar) = cholesky(gram);
    let ctx = Ctx {
        gram,
        mu,
        bstar,
        radius_exact: radius,
        radius: radius as f64 * (1.0 + RADIUS_PAD) + RADIUS_PAD,
        nodes: AtomicU64::new(0),
        abort: AtomicBool::new(false),
        budget: opts.budget.unwrap_or(u64::MAX),
    };
    if n == 0 || radius <= 0 {
        return EnumOutcome {
            counts: BTreeMap::new(),
            complete: true,
            nodes: 0,
        };
    }
    // split the top of the tree into enough subtrees to keep workers busy
    let mut depth = 1;
    let mut tasks = ctx.prefixes(depth);
    while depth < n && depth < 4 && tasks.len() < 8 * rayon::current_num_threads().max(1) {
        depth += 1;
        tasks = ctx.prefixes(depth);
    }
    let total_tasks = tasks.len();
    let done = AtomicU64::new(0);
    let results: Vec<Option<BTreeMap<i64, u64>>> = tasks
        .into_par_iter()
        .map(|p| {
            if ctx.abort.load(Ordering::Relaxed) {
                return None;
            }
            let mut counts = BTreeMap::new();
            let mut local = 0u64;
            let mut x = p.x.clone();
            let ok = if depth == n {
                if !p.all_zero {
                    let norm = ctx.exact_norm(&x);
                    if norm <= radius as i128 {
                        counts.insert(norm as i64, 2);
                    }
                }
                true
            } else {
                let mut sums = ctx.center_sums(&x);
                let mut stale: Vec<usize> = (0..n).collect();
                ctx.walk(
                    n - depth - 1,
                    &mut x,
                    &mut sums,
                    &mut stale,
                    p.partial,
                    p.all_zero,
                    &mut local,
                    &mut counts,
                )
            };
            if ctx.nodes.fetch_add(local, Ordering::Relaxed) + local > ctx.budget {
                ctx.abort.store(true, Ordering::Relaxed);
            }
            if opts.progress {
                let d = done.fetch_add(1, Ordering::Relaxed) + 1;
                if d.is_multiple_of(16) || d as usize == total_tasks {
                    eprintln!(
                        "checkpoint: {d}/{total_tasks} subtrees, {} nodes",
                        ctx.nodes.load(Ordering::Relaxed)
                    );
                }
            }
            ok.then_some(counts)
        })
        .collect();
    let nodes = ctx.nodes.load(Ordering::Relaxed);
    let complete = results.iter().all(Option::is_some) && nodes <= ctx.budget;
    let mut counts = BTreeMap::new();
    for r in results.into_iter().flatten() {
        for (k, v) in r {
            *counts.entry(k).or_insert(0) += v;
        }
    }
    EnumOutcome {
        counts,
        complete,
        nodes,
    }
}

//! Two-sided bounds on the joint spectral radius by branch and bound over the
//! product tree.
//!
//! Every node is a product `Π` of length `k` and carries
//! `p(Π) = min_j ‖Π_{1..j}‖^{1/j}` over its prefixes. Any infinite word splits into
//! blocks that are prefixes of tree nodes, so `ρ ≤ max(p)` over the pruned nodes and
//! the current level. The lower bound is the best `ρ(Π)^{1/k}` seen.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, norm_of, Matrix, MatrixSet, NormKind, DEFAULT_EIGEN_TOL};

pub const DEFAULT_BUDGET: u64 = 5_000_000;
pub const DEFAULT_MAX_DEPTH: usize = 40;

#[derive(Clone, Debug)]
pub struct JsrOptions {
    pub norm: NormKind,
    /// Node cap over the whole search.
    pub budget: u64,
    pub max_depth: usize,
}

impl Default for JsrOptions {
    fn default() -> Self {
        Self {
            norm: NormKind::Two,
            budget: DEFAULT_BUDGET,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JsrBounds {
    pub lower: f64,
    pub upper: f64,
    /// Indices of the product achieving `lower`, leftmost factor first.
    pub best_product: Vec<usize>,
    pub depth_reached: usize,
    pub nodes_explored: u64,
    /// True when the search stopped on the budget or depth cap.
    pub inconclusive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    CertifiedBelow,
    CertifiedAbove,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JsrDecision {
    pub verdict: Verdict,
    pub rho_star: f64,
    pub delta: f64,
    pub bounds: JsrBounds,
}

struct Node {
    word: Vec<u8>,
    product: DMatrix<f64>,
    p: f64,
}

enum Stop {
    /// Keep nodes whose `p` exceeds this value.
    Prune(f64),
    Done,
}

/// Generic search; `control(lower, upper)` returns the pruning threshold or asks to stop.
fn search(
    set: &MatrixSet,
    opts: &JsrOptions,
    control: impl Fn(f64, f64) -> Stop,
) -> Result<JsrBounds> {
    if set.len() > 256 {
        return Err(Error::Unsupported("at most 256 matrices".into()));
    }
    let mats: Vec<&DMatrix<f64>> = set.matrices().iter().map(|m| m.inner()).collect();
    let rho = |m: &DMatrix<f64>| -> Result<f64> {
        Ok(eigenvalues(&Matrix::from_inner(m.clone()), DEFAULT_EIGEN_TOL)?.spectral_radius)
    };

    let mut lower = 0.0;
    let mut best_product = vec![0];
    for (i, m) in mats.iter().enumerate() {
        let r = rho(m)?;
        if r > lower {
            lower = r;
            best_product = vec![i];
        }
    }
    let mut level: Vec<Node> = mats
        .iter()
        .enumerate()
        .map(|(i, m)| Node {
            word: vec![i as u8],
            product: (*m).clone(),
            p: norm_of(m, opts.norm),
        })
        .collect();
    let mut nodes = level.len() as u64;
    let mut pruned_max: f64 = 0.0;
    let mut upper = level.iter().map(|n| n.p).fold(0.0, f64::max);
    let mut depth = 1;
    let mut hit_cap = false;

    // Singletons: the spectral radius is the answer.
    if mats.len() == 1 {
        return Ok(JsrBounds {
            lower,
            upper: lower,
            best_product,
            depth_reached: 1,
            nodes_explored: 1,
            inconclusive: false,
        });
    }

    loop {
        let threshold = match control(lower, upper) {
            Stop::Done => break,
            Stop::Prune(t) => t,
        };
        let (keep, cut): (Vec<Node>, Vec<Node>) = level.into_iter().partition(|n| n.p > threshold);
        pruned_max = cut.iter().map(|n| n.p).fold(pruned_max, f64::max);
        let front = keep.iter().map(|n| n.p).fold(0.0, f64::max);
        upper = upper.min(pruned_max.max(front));
        if keep.is_empty() {
            break;
        }
        if let Stop::Done = control(lower, upper) {
            break;
        }
        let children = keep.len() as u64 * mats.len() as u64;
        if depth >= opts.max_depth || nodes + children > opts.budget {
            hit_cap = true;
            break;
        }
        let k = depth + 1;
        let next: Vec<(Node, f64)> = keep
            .par_iter()
            .flat_map_iter(|n| mats.iter().enumerate().map(move |(i, m)| (n, i, *m)))
            .map(|(n, i, m)| {
                let product = &n.product * m;
                let norm = norm_of(&product, opts.norm).powf(1.0 / k as f64);
                let r = rho(&product).unwrap_or(0.0).powf(1.0 / k as f64);
                let mut word = n.word.clone();
                word.push(i as u8);
                (
                    Node {
                        word,
                        product,
                        p: n.p.min(norm),
                    },
                    r,
                )
            })
            .collect();
        nodes += next.len() as u64;
        depth = k;
        let mut lvl = Vec::with_capacity(next.len());
        for (n, r) in next {
            if r > lower {
                lower = r;
                best_product = n.word.iter().map(|&w| w as usize).collect();
            }
            lvl.push(n);
        }
        level = lvl;
    }
    Ok(JsrBounds {
        lower,
        upper: upper.max(lower),
        best_product,
        depth_reached: depth,
        nodes_explored: nodes,
        inconclusive: hit_cap,
    })
}

/// Bounds with relative accuracy `delta`: branches whose `p` is within
/// `lower·(1+delta)` are closed.
pub fn jsr_bounds(set: &MatrixSet, delta: f64, opts: &JsrOptions) -> Result<JsrBounds> {
    if !(delta > 0.0) {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let mut b = search(set, opts, |lower, upper| {
        if upper - lower <= delta * lower {
            Stop::Done
        } else {
            Stop::Prune(lower * (1.0 + delta))
        }
    })?;
    if b.upper - b.lower <= delta * b.lower {
        b.inconclusive = false;
    }
    Ok(b)
}

/// Decides `ρ > 1` against `ρ < 1 + delta`.
pub fn jsr_decide(set: &MatrixSet, delta: f64, opts: &JsrOptions) -> Result<JsrDecision> {
    if !(delta > 0.0) {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let target = 1.0 + delta;
    let b = search(set, opts, |lower, upper| {
        if lower > 1.0 || upper < target {
            Stop::Done
        } else {
            // Close branches already certified below the target.
            Stop::Prune(target * (1.0 - 1e-12))
        }
    })?;
    let verdict = if b.lower > 1.0 {
        Verdict::CertifiedAbove
    } else if b.upper < target {
        Verdict::CertifiedBelow
    } else {
        return Err(Error::JsrInconclusive {
            lower: b.lower,
            upper: b.upper,
            nodes: b.nodes_explored,
            depth: b.depth_reached,
        });
    };
    Ok(JsrDecision {
        verdict,
        rho_star: b.upper,
        delta,
        bounds: b,
    })
}

//! Remez exchange for the Chebyshev polynomial of an exponential system on the half-line.
//!
//! The polynomial interpolates `(-1)^k` at `d` nodes starting at 0. Between consecutive
//! nodes it has exactly one zero, and each lobe after the first has a single critical
//! point, so zeros and extrema are found by bisection on `p` and `p'`.

use nalgebra::{DMatrix, DVector};

use super::basis::NewtonBasis;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exchange {
    /// Move every node to the extremum of its lobe.
    #[default]
    Full,
    /// Move only the node of the lobe with the largest deviation.
    Single,
}

#[derive(Clone, Debug)]
pub struct RemezOptions {
    /// Stop once `max |p| - 1` over the lobe extrema drops below this.
    pub tol: f64,
    pub max_iter: usize,
    pub exchange: Exchange,
    /// Number of continuation steps from the all-ones spectrum.
    pub homotopy_steps: usize,
}

impl Default for RemezOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 200,
            exchange: Exchange::Full,
            homotopy_steps: 8,
        }
    }
}

impl RemezOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Solution {
    pub coeffs: Vec<f64>,
    pub nodes: Vec<f64>,
    pub level: f64,
    pub iterations: usize,
}

fn sign_at(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        -1.0
    } else {
        1.0
    }
}

fn interpolate(basis: &NewtonBasis, nodes: &[f64]) -> Result<Vec<f64>> {
    let d = nodes.len();
    let mut v = DMatrix::zeros(d, d);
    for (k, &x) in nodes.iter().enumerate() {
        for (j, phi) in basis.values(x).into_iter().enumerate() {
            v[(k, j)] = phi;
        }
    }
    let rhs = DVector::from_iterator(d, (0..d).map(sign_at));
    let c = v
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::IllConditioned("singular interpolation matrix".into()))?;
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::IllConditioned("non-finite coefficients".into()));
    }
    let resid = (&v * &c - &rhs).amax();
    if resid > 1e-6 {
        return Err(Error::IllConditioned(format!(
            "interpolation residual {resid:e}"
        )));
    }
    Ok(c.iter().copied().collect())
}

fn bisect(mut lo: f64, mut hi: f64, left_sign: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) * left_sign > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Lobe extrema of the interpolant; the first one is always `0`.
fn extrema(basis: &NewtonBasis, c: &[f64], nodes: &[f64]) -> Result<Vec<f64>> {
    let d = nodes.len();
    let p = |t: f64| basis.value(c, t);
    let dp = |t: f64| basis.value_slope(c, t).1;
    let zeros: Vec<f64> = (0..d - 1)
        .map(|i| bisect(nodes[i], nodes[i + 1], sign_at(i), p))
        .collect();
    let mut ext = vec![0.0; d];
    for i in 1..d.saturating_sub(1) {
        ext[i] = bisect(zeros[i - 1], zeros[i], sign_at(i), dp);
    }
    if d >= 2 {
        let a = zeros[d - 2];
        let mut b = nodes[d - 1].max(a * (1.0 + 1e-12));
        let mut grown = 0;
        loop {
            let (v, s) = basis.value_slope(c, b);
            if v * s <= 0.0 {
                break;
            }
            b = a + 2.0 * (b - a);
            grown += 1;
            if grown > 200 || !b.is_finite() {
                return Err(Error::IllConditioned("last lobe does not close".into()));
            }
        }
        ext[d - 1] = bisect(a, b, sign_at(d - 1), dp);
    }
    if ext.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::IllConditioned("alternance points collapsed".into()));
    }
    Ok(ext)
}

pub(crate) fn solve(basis: &NewtonBasis, init: &[f64], opts: &RemezOptions) -> Result<Solution> {
    let d = basis.dim();
    assert_eq!(init.len(), d);
    let mut nodes = init.to_vec();
    nodes[0] = 0.0;
    let mut last_dev = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let c = interpolate(basis, &nodes)?;
        let ext = extrema(basis, &c, &nodes)?;
        let vals: Vec<f64> = ext.iter().map(|&t| basis.value(&c, t).abs()).collect();
        let dev = vals.iter().copied().fold(0.0, f64::max);
        if dev - 1.0 <= opts.tol {
            let coeffs = c.iter().map(|x| x / dev).collect();
            let level = vals.iter().map(|v| 1.0 - v / dev).fold(0.0, f64::max);
            return Ok(Solution {
                coeffs,
                nodes: ext,
                level,
                iterations: it,
            });
        }
        last_dev = dev;
        match opts.exchange {
            Exchange::Full => nodes = ext,
            Exchange::Single => {
                let worst = (0..d).max_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap();
                nodes[worst] = ext[worst];
            }
        }
    }
    Err(Error::RemezNoConvergence {
        iterations: opts.max_iter,
        deviation: last_dev - 1.0,
    })
}

/// Start for dimension `d` from the alternance of dimension `d - 1`; the two interlace.
fn grow_nodes(prev: &[f64]) -> Vec<f64> {
    let m = prev.len();
    let d = m + 1;
    if m == 1 {
        return vec![0.0, 1.25];
    }
    let mut x = vec![0.0; d];
    x[1] = prev[1] * (d as f64 - 2.0) / (d as f64 - 1.0);
    for k in 2..m {
        x[k] = (prev[k - 1] * prev[k]).sqrt();
    }
    x[m] = prev[m - 1] * (1.0 + 1.15 / (d as f64 - 1.0));
    x
}

/// Alternance for the all-ones spectrum, built up one dimension at a time.
pub(crate) fn laguerre(d: usize, opts: &RemezOptions) -> Result<Solution> {
    let mut nodes = vec![0.0];
    let mut sol = None;
    for k in 1..=d {
        if k > 1 {
            nodes = grow_nodes(&nodes);
        }
        let basis = NewtonBasis::new(vec![1.0; k]);
        let s = solve(&basis, &nodes, opts)?;
        nodes = s.nodes.clone();
        sol = Some(s);
    }
    Ok(sol.expect("d >= 1"))
}

/// Chebyshev polynomial for exponents `g` with `max g = 1`, by continuation along `g^s`.
pub(crate) fn continuation(g: &[f64], opts: &RemezOptions) -> Result<Solution> {
    let d = g.len();
    let start = laguerre(d, opts)?;
    if g.iter().all(|&x| x == 1.0) {
        return Ok(start);
    }
    let loose = RemezOptions {
        tol: opts.tol.max(1e-7),
        ..opts.clone()
    };
    let mut nodes = start.nodes;
    let mut s = 0.0;
    let mut ds = 1.0 / opts.homotopy_steps.max(1) as f64;
    let mut last_err = None;
    while s < 1.0 {
        let s1 = (s + ds).min(1.0);
        let h: Vec<f64> = g.iter().map(|&x| x.powf(s1)).collect();
        let step_opts = if s1 == 1.0 { opts } else { &loose };
        match solve(&NewtonBasis::new(h), &nodes, step_opts) {
            Ok(sol) => {
                if s1 == 1.0 {
                    return Ok(sol);
                }
                nodes = sol.nodes;
                s = s1;
            }
            Err(e) => {
                ds *= 0.5;
                last_err = Some(e);
                if ds < 1e-4 {
                    break;
                }
            }
        }
    }
    // Plain spacing over a window scaled by the smallest exponent.
    let h1 = g[0];
    let span = 3.0 * d as f64 / h1;
    let init: Vec<f64> = (0..d)
        .map(|k| {
            let u = k as f64 / (d as f64 - 1.0);
            span * (1.0 - (0.5 * std::f64::consts::PI * u).cos())
        })
        .collect();
    solve(&NewtonBasis::new(g.to_vec()), &init, opts).map_err(|e| last_err.unwrap_or(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_alternance_small_dimensions() {
        let want = [
            vec![0.0, 1.27846],
            vec![0.0, 0.61035, 3.00971],
            vec![0.0, 0.40635, 1.75198, 4.82719],
        ];
        for w in &want {
            let s = laguerre(w.len(), &RemezOptions::default()).unwrap();
            for (a, b) in s.nodes.iter().zip(w) {
                assert!((a - b).abs() < 2e-5, "{:?} vs {:?}", s.nodes, w);
            }
            assert!(s.level <= 1e-9);
        }
    }

    #[test]
    fn single_exchange_agrees_with_full() {
        let g = [0.4, 0.7, 1.0];
        let full = continuation(&g, &RemezOptions::default()).unwrap();
        let single = continuation(
            &g,
            &RemezOptions {
                exchange: Exchange::Single,
                max_iter: 2000,
                ..RemezOptions::default()
            },
        )
        .unwrap();
        for (a, b) in full.nodes.iter().zip(&single.nodes) {
            assert!((a - b).abs() < 1e-4);
        }
    }
}

//! Certified Euler step sizes.
//!
//! `κ(h, ε)` is the smallest value of `(1 - T)/(T' - εT)` on `[0, ν₂]` over the
//! feasible part `T' > εT`, where `T` is the h-Chebyshev polynomial.

use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expcheb::{self, ExponentSpectrum, ExponentialChebyshev, RemezOptions};
use crate::linalg::{eigenvalues, MatrixSet, DEFAULT_EIGEN_TOL};

/// Factor applied to exact `κ` so the returned step is strictly below it.
pub const SAFETY_FACTOR: f64 = 0.99;

const GRID: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepMethod {
    Prob3Exact,
    Prop2Lower,
    Theorem5,
    Theorem10,
}

impl StepMethod {
    pub fn name(self) -> &'static str {
        match self {
            StepMethod::Prob3Exact => "prob3_exact",
            StepMethod::Prop2Lower => "prop2_lower",
            StepMethod::Theorem5 => "theorem5",
            StepMethod::Theorem10 => "theorem10",
        }
    }
}

impl std::fmt::Display for StepMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepBound {
    pub tau: f64,
    pub method: StepMethod,
    pub epsilon: f64,
    /// Minimizer of the univariate problem, in the time units of the input.
    pub witness: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct StepOptions {
    pub remez: RemezOptions,
    pub eigen_tol: f64,
    pub cluster_tol: f64,
    pub safety: f64,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            remez: RemezOptions::default(),
            eigen_tol: DEFAULT_EIGEN_TOL,
            cluster_tol: expcheb::DEFAULT_CLUSTER_TOL,
            safety: SAFETY_FACTOR,
        }
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Solves the univariate problem for an already computed Chebyshev polynomial.
pub fn kappa_from_chebyshev(t_h: &ExponentialChebyshev, eps: f64) -> Result<StepBound> {
    if !(eps > 0.0) {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    // Work in the normalized time u = h_d t, with ε scaled the same way.
    let s = t_h.spectrum().max();
    let e = eps / s;
    let tt = |u: f64| t_h.value_slope(u / s);
    let (v, sl) = tt(0.0);
    let q = |u: f64| {
        let (v, sl) = tt(u);
        sl / s - e * v
    };
    let g = |u: f64| {
        let (v, sl) = tt(u);
        let den = sl / s - e * v;
        if den > 0.0 {
            (1.0 - v) / den
        } else {
            f64::INFINITY
        }
    };
    let alt = t_h.alternance();
    if alt.len() < 2 {
        // T = -e^{-t}: the objective grows with t, minimum at 0.
        let den = sl / s - e * v;
        if den <= 0.0 {
            return Err(Error::EpsilonTooLarge);
        }
        return Ok(StepBound {
            tau: (1.0 - v) / den / s,
            method: StepMethod::Prob3Exact,
            epsilon: eps,
            witness: Some(0.0),
        });
    }
    let nu2 = alt[1] * s;
    if q(0.0) <= 0.0 {
        return Err(Error::EpsilonTooLarge);
    }

    // First sign change of T' - εT on [0, ν₂].
    let mut tf = nu2;
    let mut prev = 0.0;
    for i in 1..=GRID {
        let u = nu2 * i as f64 / GRID as f64;
        if q(u) <= 0.0 {
            let (mut lo, mut hi) = (prev, u);
            while hi - lo > 1e-12 * nu2.max(1.0) {
                let mid = 0.5 * (lo + hi);
                if q(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            tf = lo;
            break;
        }
        prev = u;
    }
    if !(tf > 0.0) {
        return Err(Error::EpsilonTooLarge);
    }

    let step = tf / GRID as f64;
    let (mut best_i, mut best) = (0, g(0.0));
    for i in 1..GRID {
        let val = g(step * i as f64);
        if val < best {
            best = val;
            best_i = i;
        }
    }
    let a = step * best_i.saturating_sub(1) as f64;
    let b = (step * (best_i + 1) as f64).min(tf);
    let (u_star, val) = golden_min(g, a, b, 1e-12);
    let (u_star, val) = if val < best {
        (u_star, val)
    } else {
        (step * best_i as f64, best)
    };
    Ok(StepBound {
        tau: val / s,
        method: StepMethod::Prob3Exact,
        epsilon: eps,
        witness: Some(u_star / s),
    })
}

pub fn kappa(h: &ExponentSpectrum, eps: f64, opts: &RemezOptions) -> Result<StepBound> {
    if !(eps > 0.0) {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    let t_h = expcheb::remez_chebyshev(h, opts)?;
    kappa_from_chebyshev(&t_h, eps)
}

/// `2ε / (M₂(h) + 2ε²)`, evaluated on `h/h_d` and rescaled.
pub fn kappa_lower_bound(h: &ExponentSpectrum, eps: f64, opts: &RemezOptions) -> Result<StepBound> {
    if !(eps > 0.0) {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    let s = h.max();
    let e = eps / s;
    let m2 = expcheb::markov_constant(&h.scaled(1.0 / s), 2, opts)?;
    Ok(StepBound {
        tau: 2.0 * e / (m2 + 2.0 * e * e) / s,
        method: StepMethod::Prop2Lower,
        epsilon: eps,
        witness: None,
    })
}

static LAGUERRE_M2: OnceLock<Mutex<Vec<Option<f64>>>> = OnceLock::new();

/// `M_{2,d}` for the all-ones spectrum, memoized per dimension.
pub fn laguerre_m2(d: usize, opts: &RemezOptions) -> Result<f64> {
    let cache = LAGUERRE_M2.get_or_init(|| Mutex::new(Vec::new()));
    if let Some(Some(v)) = cache.lock().unwrap().get(d) {
        return Ok(*v);
    }
    let v = expcheb::mkd_from_laguerre(2, d, opts)?;
    let mut c = cache.lock().unwrap();
    if c.len() <= d {
        c.resize(d + 1, None);
    }
    c[d] = Some(v);
    Ok(v)
}

fn theorem10_denominator(d: usize) -> f64 {
    let d = d as f64;
    16.0 * d * d - 24.0 * d + 11.0
}

/// Step valid for every family whose spectral radii are at most `r`.
pub fn uniform_step_bound(
    r: f64,
    eps: f64,
    d: usize,
    method: StepMethod,
    opts: &RemezOptions,
) -> Result<StepBound> {
    if !(r > 0.0 && eps > 0.0) {
        return Err(Error::Domain("r and epsilon must be positive".into()));
    }
    if eps > r {
        return Err(Error::Domain(format!("epsilon {eps} exceeds r {r}")));
    }
    let tau = match method {
        StepMethod::Theorem5 => 2.0 * eps / (laguerre_m2(d, opts)? * r * r),
        StepMethod::Theorem10 => 6.0 * eps / (theorem10_denominator(d) * r * r),
        other => {
            return Err(Error::Domain(format!(
                "{other} needs a spectrum, not a radius"
            )))
        }
    };
    Ok(StepBound {
        tau,
        method,
        epsilon: eps,
        witness: None,
    })
}

/// Step for the family `𝒜 - cI` at accuracy `ε`.
///
/// The exact and lower-bound methods use `h = -sp(A - cI) - ε` per matrix and need
/// every shifted abscissa below `-ε`. `Theorem5` uses the largest spectral radius
/// `r` of the shifted family in `2ε / ((r - ε)² M_{2,d} + 2ε²)`; `Theorem10` is the
/// closed form with `r`.
pub fn family_step_bound(
    set: &MatrixSet,
    c: f64,
    eps: f64,
    method: StepMethod,
    opts: &StepOptions,
) -> Result<StepBound> {
    if !(eps > 0.0) {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    let d = set.dim();
    let spectra = set
        .matrices()
        .par_iter()
        .map(|a| {
            let rep = eigenvalues(&a.shift(-c), opts.eigen_tol)?;
            let _ = rep.real_eigenvalues()?;
            Ok(rep)
        })
        .collect::<Result<Vec<_>>>()?;
    match method {
        StepMethod::Theorem5 | StepMethod::Theorem10 => {
            let r = spectra
                .iter()
                .map(|s| s.spectral_radius)
                .fold(0.0, f64::max);
            if eps >= r {
                return Err(Error::Domain(format!(
                    "epsilon {eps} is not below the largest spectral radius {r}"
                )));
            }
            let tau = if method == StepMethod::Theorem5 {
                let m2 = laguerre_m2(d, &opts.remez)?;
                2.0 * eps / ((r - eps).powi(2) * m2 + 2.0 * eps * eps)
            } else {
                6.0 * eps / (theorem10_denominator(d) * r * r)
            };
            Ok(StepBound {
                tau,
                method,
                epsilon: eps,
                witness: None,
            })
        }
        StepMethod::Prob3Exact | StepMethod::Prop2Lower => {
            let bounds = spectra
                .par_iter()
                .map(|rep| {
                    if rep.spectral_abscissa >= -eps {
                        return Err(Error::ShiftTooSmall {
                            abscissa: rep.spectral_abscissa,
                            bound: -eps,
                        });
                    }
                    let h: Vec<f64> = rep.real_eigenvalues()?.iter().map(|l| -l - eps).collect();
                    let h = ExponentSpectrum::with_cluster_tol(&h, opts.cluster_tol)?;
                    if method == StepMethod::Prob3Exact {
                        kappa(&h, eps, &opts.remez)
                    } else {
                        kappa_lower_bound(&h, eps, &opts.remez)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let mut best = bounds
                .into_iter()
                .min_by(|a, b| a.tau.total_cmp(&b.tau))
                .expect("nonempty set");
            if method == StepMethod::Prob3Exact {
                best.tau *= opts.safety;
            }
            Ok(best)
        }
    }
}

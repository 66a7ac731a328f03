//! Closed-form bounds for the Laguerre-weight Markov constants.

use super::{laguerre_chebyshev, RemezOptions};
use crate::error::{Error, Result};

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Two-sided bounds on `L_{k,d}`, the k-th derivative at zero of the
/// Laguerre-weight Chebyshev polynomial's algebraic part.
pub fn sklyarov_bounds(k: usize, d: usize) -> Result<(f64, f64)> {
    if k == 0 || k >= d {
        return Err(Error::Domain(format!(
            "need 1 <= k <= d-1, got k={k}, d={d}"
        )));
    }
    // 8^k (d-1)!/(d-1-k)! * k!/(2k)!, one factor at a time.
    let hi = (0..k).fold(1.0, |acc, i| {
        acc * 8.0 * (d - 1 - i) as f64 / (k + 1 + i) as f64
    });
    let lo = hi * (1.0 - k as f64 / (2.0 * (d as f64 - 1.0)));
    Ok((lo, hi))
}

/// Upper bound `Σ_j 8^j C(d-1,j) C(k,j) / C(2j,j)` for `M_{k,d}`.
pub fn mkd_upper_bound(k: usize, d: usize) -> f64 {
    (0..=k)
        .filter(|&j| j < d)
        .map(|j| 8f64.powi(j as i32) * binomial(d - 1, j) * binomial(k, j) / binomial(2 * j, j))
        .sum()
}

/// `L_{j,d}` for `j = 0..d`, read from the coefficients of `S_d`.
///
/// With all exponents equal to one the basis is `(-t)^j e^{-t} / j!`, so the j-th
/// coefficient is `± s_d^{(j)}(0)` for the algebraic polynomial `s_d = e^t S_d`.
pub fn laguerre_markov_coefficients(d: usize, opts: &RemezOptions) -> Result<Vec<f64>> {
    let s = laguerre_chebyshev(d, opts)?;
    Ok(s.coefficients().iter().map(|c| c.abs()).collect())
}

/// `M_{k,d} = 1 + Σ_{j=1}^k C(k,j) L_{j,d}`, with `L_{j,d} = 0` for `j ≥ d`.
pub fn mkd_from_laguerre(k: usize, d: usize, opts: &RemezOptions) -> Result<f64> {
    let l = laguerre_markov_coefficients(d, opts)?;
    Ok(1.0
        + (1..=k)
            .filter(|&j| j < d)
            .map(|j| binomial(k, j) * l[j])
            .sum::<f64>())
}

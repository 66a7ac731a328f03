//! Chebyshev polynomials of exponential systems on the half-line and their
//! Markov–Bernstein constants.

mod basis;
mod bounds;
mod remez;

pub use bounds::{
    laguerre_markov_coefficients, mkd_from_laguerre, mkd_upper_bound, sklyarov_bounds,
};
pub use remez::{Exchange, RemezOptions};

use basis::NewtonBasis;

use crate::error::{Error, Result};

/// Relative distance below which neighbouring exponents are merged.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub exponent: f64,
    pub multiplicity: usize,
}

/// Sorted positive exponents `h₁ ≤ … ≤ h_d`, with near-equal entries merged into blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentSpectrum {
    exponents: Vec<f64>,
    blocks: Vec<Block>,
}

impl ExponentSpectrum {
    pub fn new(h: &[f64]) -> Result<Self> {
        Self::with_cluster_tol(h, DEFAULT_CLUSTER_TOL)
    }

    pub fn with_cluster_tol(h: &[f64], tol: f64) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::Spectrum("no exponents".into()));
        }
        if let Some(x) = h.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::Spectrum(format!("exponent {x} is not positive")));
        }
        let mut sorted = h.to_vec();
        sorted.sort_by(f64::total_cmp);

        let mut groups: Vec<Vec<f64>> = vec![vec![sorted[0]]];
        for &x in &sorted[1..] {
            let g = groups.last_mut().unwrap();
            let prev = *g.last().unwrap();
            if x - prev <= tol * x {
                g.push(x);
            } else {
                groups.push(vec![x]);
            }
        }
        let mut exponents = Vec::with_capacity(h.len());
        let mut blocks = Vec::with_capacity(groups.len());
        for g in groups {
            let mean = g.iter().sum::<f64>() / g.len() as f64;
            exponents.extend(std::iter::repeat_n(mean, g.len()));
            blocks.push(Block {
                exponent: mean,
                multiplicity: g.len(),
            });
        }
        Ok(Self { exponents, blocks })
    }

    /// The all-ones spectrum of dimension `d` (the Laguerre case).
    pub fn ones(d: usize) -> Self {
        Self {
            exponents: vec![1.0; d],
            blocks: vec![Block {
                exponent: 1.0,
                multiplicity: d,
            }],
        }
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn min(&self) -> f64 {
        self.exponents[0]
    }

    pub fn max(&self) -> f64 {
        *self.exponents.last().unwrap()
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            exponents: self.exponents.iter().map(|x| x * lambda).collect(),
            blocks: self
                .blocks
                .iter()
                .map(|b| Block {
                    exponent: b.exponent * lambda,
                    multiplicity: b.multiplicity,
                })
                .collect(),
        }
    }

    fn normalized(&self) -> Vec<f64> {
        let m = self.max();
        self.exponents.iter().map(|x| x / m).collect()
    }
}

/// The h-Chebyshev polynomial: unit sup-norm on `[0, ∞)`, equal to `(-1)^k` at its
/// alternance points `0 = ν₁ < … < ν_d`.
///
/// Internally the polynomial is stored for the normalized exponents `h / h_d`;
/// `T_h(t) = T_{h/h_d}(h_d t)`.
#[derive(Clone, Debug)]
pub struct ExponentialChebyshev {
    spectrum: ExponentSpectrum,
    scale: f64,
    basis: NewtonBasis,
    coefficients: Vec<f64>,
    alternance: Vec<f64>,
    equioscillation_level: f64,
    tail_cutoff: f64,
    iterations: usize,
}

impl ExponentialChebyshev {
    pub fn spectrum(&self) -> &ExponentSpectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    /// Coefficients over the divided-difference basis of the normalized exponents.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn alternance(&self) -> Vec<f64> {
        self.alternance.iter().map(|x| x / self.scale).collect()
    }

    pub fn equioscillation_level(&self) -> f64 {
        self.equioscillation_level
    }

    /// Beyond this point `|T| < 1` follows from the coefficient envelope.
    pub fn tail_cutoff(&self) -> f64 {
        self.tail_cutoff / self.scale
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// k-th derivative of `T` at `t`.
    pub fn evaluate(&self, t: f64, k: usize) -> f64 {
        self.scale.powi(k as i32) * self.basis.eval(&self.coefficients, self.scale * t, k)[k]
    }

    /// Value and first derivative at `t`.
    pub fn value_slope(&self, t: f64) -> (f64, f64) {
        let (v, s) = self.basis.value_slope(&self.coefficients, self.scale * t);
        (v, s * self.scale)
    }

    /// `M_k(h) = (-1)^{k+1} T^{(k)}(0)`.
    pub fn markov(&self, k: usize) -> f64 {
        let w = self.basis.derivative_row(k);
        let v: f64 = w.iter().zip(&self.coefficients).map(|(a, b)| a * b).sum();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sign * self.scale.powi(k as i32) * v
    }

    fn compute_tail(&mut self) {
        let g1 = self.basis.exponents()[0];
        let d = self.dim();
        let envelope = |u: f64| {
            let mut term = 1.0;
            let mut sum = 0.0;
            for (j, c) in self.coefficients.iter().enumerate() {
                if j > 0 {
                    term *= u / j as f64;
                }
                sum += c.abs() * term;
            }
            sum * (-g1 * u).exp()
        };
        let last = *self.alternance.last().unwrap();
        // Past (d-1)/g1 the envelope is decreasing.
        let mut u = last.max((d as f64 - 1.0) / g1).max(1.0);
        for _ in 0..400 {
            if envelope(u) < 1.0 {
                break;
            }
            u *= 1.25;
        }
        self.tail_cutoff = u;
    }
}

pub fn evaluate(t_h: &ExponentialChebyshev, t: f64, k: usize) -> f64 {
    t_h.evaluate(t, k)
}

pub fn remez_chebyshev(h: &ExponentSpectrum, opts: &RemezOptions) -> Result<ExponentialChebyshev> {
    if !(opts.tol > 0.0) {
        return Err(Error::Domain("Remez tolerance must be positive".into()));
    }
    let g = h.normalized();
    let sol = remez::continuation(&g, opts)?;
    let mut t = ExponentialChebyshev {
        spectrum: h.clone(),
        scale: h.max(),
        basis: NewtonBasis::new(g),
        coefficients: sol.coeffs,
        alternance: sol.nodes,
        equioscillation_level: sol.level,
        tail_cutoff: f64::INFINITY,
        iterations: sol.iterations,
    };
    t.compute_tail();
    Ok(t)
}

/// `S_d`, the Chebyshev polynomial with the Laguerre weight.
pub fn laguerre_chebyshev(d: usize, opts: &RemezOptions) -> Result<ExponentialChebyshev> {
    if d == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    remez_chebyshev(&ExponentSpectrum::ones(d), opts)
}

pub fn markov_constant(h: &ExponentSpectrum, k: usize, opts: &RemezOptions) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("derivative order must be at least 1".into()));
    }
    Ok(remez_chebyshev(h, opts)?.markov(k))
}

/// Plot samples `(t, T, T', feasible)`, where feasible marks `t ≤ ν₂` and `T' > εT`.
pub fn samples(
    t_h: &ExponentialChebyshev,
    t_max: f64,
    count: usize,
    eps: Option<f64>,
) -> Vec<(f64, f64, f64, bool)> {
    let nu2 = t_h.alternance().get(1).copied().unwrap_or(0.0);
    (0..count)
        .map(|i| {
            let t = t_max * i as f64 / (count.max(2) - 1) as f64;
            let (v, s) = t_h.value_slope(t);
            let feasible = match eps {
                Some(e) => t <= nu2 && s > e * v,
                None => t <= nu2,
            };
            (t, v, s, feasible)
        })
        .collect()
}

//! Newton-type basis for exponential polynomials.
//!
//! The j-th basis function is the divided difference of `x ↦ e^{-t x}` over the
//! first j exponents. It equals `(-t)^{j-1} e^{-h t} / (j-1)!` when the exponents
//! coincide, so clustered and repeated exponents are handled without a special case.
//! All values are read off the first row of `exp(-tJ)`, where `J` is upper
//! bidiagonal with the exponents on the diagonal and ones above it.

#[derive(Clone, Debug)]
pub(crate) struct NewtonBasis {
    h: Vec<f64>,
}

impl NewtonBasis {
    pub fn new(h: Vec<f64>) -> Self {
        debug_assert!(!h.is_empty());
        Self { h }
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn exponents(&self) -> &[f64] {
        &self.h
    }

    /// `exp(-tJ)`, upper triangular, row-major.
    fn exp_neg(&self, t: f64) -> Vec<f64> {
        let n = self.h.len();
        let hmax = self.h.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
        let norm = t.abs() * (hmax + 1.0);
        let mut s = 0;
        while norm / f64::powi(2.0, s) > 0.5 {
            s += 1;
        }
        let w = -t / f64::powi(2.0, s);

        let mut y = vec![0.0; n * n];
        for i in 0..n {
            y[i * n + i] = w * self.h[i];
            if i + 1 < n {
                y[i * n + i + 1] = w;
            }
        }
        let mut e = identity(n);
        let mut term = identity(n);
        for k in 1..40 {
            term = tri_mul(&term, &y, n);
            let inv = 1.0 / k as f64;
            let mut big = 0.0_f64;
            for (e, t) in e.iter_mut().zip(term.iter_mut()) {
                *t *= inv;
                *e += *t;
                big = big.max(t.abs());
            }
            if big < 1e-18 {
                break;
            }
        }
        for _ in 0..s {
            e = tri_mul(&e, &e, n);
        }
        e
    }

    /// Row vector `e₁ᵀ(-J)^k`; its dot product with `exp(-tJ) c` is the k-th derivative.
    pub fn derivative_row(&self, k: usize) -> Vec<f64> {
        let n = self.h.len();
        let mut w = vec![0.0; n];
        w[0] = 1.0;
        for _ in 0..k {
            let mut next = vec![0.0; n];
            for j in 0..n {
                let mut v = w[j] * self.h[j];
                if j > 0 {
                    v += w[j - 1];
                }
                next[j] = -v;
            }
            w = next;
        }
        w
    }

    /// Basis values `φ_j(t)`.
    pub fn values(&self, t: f64) -> Vec<f64> {
        let n = self.h.len();
        let e = self.exp_neg(t);
        e[..n].to_vec()
    }

    /// Derivatives of order `0..=kmax` of `Σ c_j φ_j` at `t`.
    pub fn eval(&self, c: &[f64], t: f64, kmax: usize) -> Vec<f64> {
        let n = self.h.len();
        let e = self.exp_neg(t);
        let mut u = vec![0.0; n];
        for i in 0..n {
            u[i] = (i..n).map(|j| e[i * n + j] * c[j]).sum();
        }
        (0..=kmax)
            .map(|k| dot(&self.derivative_row(k), &u))
            .collect()
    }

    pub fn value(&self, c: &[f64], t: f64) -> f64 {
        dot(&self.values(t), c)
    }

    /// Value and first derivative.
    pub fn value_slope(&self, c: &[f64], t: f64) -> (f64, f64) {
        let v = self.eval(c, t, 1);
        (v[0], v[1])
    }
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn tri_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in i..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in k..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

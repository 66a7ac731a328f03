//! Dense real matrices, spectra and induced norms.

use nalgebra::{Complex, DMatrix, DVector, Schur, SymmetricEigen};

use crate::error::{Error, Result};

/// Default relative tolerance used to decide whether a spectrum is real.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;

/// Square real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    inner: DMatrix<f64>,
}

impl Matrix {
    /// Builds a matrix from rows, rejecting ragged, non-square or non-finite input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::Shape("empty matrix".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {d}",
                    r.len()
                )));
            }
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_row_slice(d, &data)
    }

    pub fn from_row_slice(d: usize, data: &[f64]) -> Result<Self> {
        if d == 0 || data.len() != d * d {
            return Err(Error::Shape(format!(
                "expected {} entries for a {d}x{d} matrix, got {}",
                d * d,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(d, d, data),
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            inner: DMatrix::identity(d, d),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        Self {
            inner: DMatrix::from_diagonal(&DVector::from_column_slice(values)),
        }
    }

    pub(crate) fn from_inner(inner: DMatrix<f64>) -> Self {
        Self { inner }
    }

    pub fn inner(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| self.inner.row(i).iter().copied().collect())
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        Matrix::from_inner(&self.inner * &other.inner)
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix::from_inner(&self.inner * s)
    }

    /// Returns `A + s I`.
    pub fn shift(&self, s: f64) -> Matrix {
        let mut m = self.inner.clone();
        for i in 0..self.dim() {
            m[(i, i)] += s;
        }
        Matrix::from_inner(m)
    }

    /// Returns `I + tau A`.
    pub fn euler(&self, tau: f64) -> Matrix {
        self.scale(tau).shift(1.0)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_inner(self.inner.transpose())
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (&self.inner * DVector::from_column_slice(x))
            .iter()
            .copied()
            .collect()
    }
}

/// Nonempty family of matrices of equal dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSet {
    matrices: Vec<Matrix>,
    labels: Vec<Option<String>>,
}

impl MatrixSet {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self> {
        let n = matrices.len();
        Self::with_labels(matrices, vec![None; n])
    }

    pub fn with_labels(matrices: Vec<Matrix>, labels: Vec<Option<String>>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::Shape("matrix set is empty".into()))?;
        let d = first.dim();
        for (i, m) in matrices.iter().enumerate() {
            if m.dim() != d {
                return Err(Error::Shape(format!(
                    "matrix {i} is {0}x{0}, expected {d}x{d}",
                    m.dim()
                )));
            }
        }
        if labels.len() != matrices.len() {
            return Err(Error::Shape("label count differs from matrix count".into()));
        }
        Ok(Self { matrices, labels })
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn map(&self, f: impl Fn(&Matrix) -> Matrix) -> MatrixSet {
        MatrixSet {
            matrices: self.matrices.iter().map(f).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn shift(&self, s: f64) -> MatrixSet {
        self.map(|m| m.shift(s))
    }

    pub fn scale(&self, s: f64) -> MatrixSet {
        self.map(|m| m.scale(s))
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    /// Sorted by decreasing real part.
    pub eigenvalues: Vec<Complex<f64>>,
    pub is_real: bool,
    pub spectral_radius: f64,
    pub spectral_abscissa: f64,
}

impl SpectrumReport {
    /// Real parts in increasing order, or an error if the spectrum is not real.
    pub fn real_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_real {
            return Err(Error::ComplexSpectrum);
        }
        let mut v: Vec<f64> = self.eigenvalues.iter().map(|z| z.re).collect();
        v.sort_by(f64::total_cmp);
        Ok(v)
    }
}

/// Eigenvalues through the real Schur form, with a cap of `100 d` QR sweeps.
pub fn eigenvalues(a: &Matrix, tol: f64) -> Result<SpectrumReport> {
    let d = a.dim();
    let schur = Schur::try_new(a.inner.clone(), f64::EPSILON, 100 * d.max(1))
        .ok_or(Error::EigenNoConvergence { sweeps: 100 * d })?;
    let mut eig: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    eig.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    let rho = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let abscissa = eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let is_real = eig.iter().all(|z| z.im.abs() <= tol * (1.0 + rho));
    Ok(SpectrumReport {
        eigenvalues: eig,
        is_real,
        spectral_radius: rho,
        spectral_abscissa: abscissa,
    })
}

pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    Ok(eigenvalues(a, DEFAULT_EIGEN_TOL)?.spectral_radius)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NormKind {
    One,
    #[default]
    Two,
    Inf,
}

impl std::str::FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "one" => Ok(NormKind::One),
            "2" | "two" => Ok(NormKind::Two),
            "inf" | "infinity" => Ok(NormKind::Inf),
            _ => Err(Error::Domain(format!("unknown norm `{s}`"))),
        }
    }
}

impl std::fmt::Display for NormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NormKind::One => "1",
            NormKind::Two => "2",
            NormKind::Inf => "inf",
        })
    }
}

/// Induced operator norm. The 2-norm is the square root of the top eigenvalue of `AᵀA`.
pub fn operator_norm(a: &Matrix, kind: NormKind) -> f64 {
    norm_of(&a.inner, kind)
}

pub(crate) fn norm_of(m: &DMatrix<f64>, kind: NormKind) -> f64 {
    match kind {
        NormKind::One => m
            .column_iter()
            .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Inf => m
            .row_iter()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Two => {
            let g = m.transpose() * m;
            let top = SymmetricEigen::new(g)
                .eigenvalues
                .iter()
                .copied()
                .fold(0.0, f64::max);
            top.max(0.0).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spectrum() {
        let r = eigenvalues(&Matrix::identity(2), 1e-9).unwrap();
        assert!(r.is_real);
        assert!((r.spectral_radius - 1.0).abs() < 1e-14);
        assert!((r.spectral_abscissa - 1.0).abs() < 1e-14);
        assert_eq!(r.eigenvalues.len(), 2);
    }

    #[test]
    fn rotation_is_complex() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let r = eigenvalues(&a, 1e-9).unwrap();
        assert!(!r.is_real);
        for z in &r.eigenvalues {
            assert!(z.re.abs() < 1e-14 && (z.im.abs() - 1.0).abs() < 1e-14);
        }
        assert!(r.real_eigenvalues().is_err());
    }

    #[test]
    fn norms_of_small_matrices() {
        for kind in [NormKind::One, NormKind::Two, NormKind::Inf] {
            assert!((operator_norm(&Matrix::identity(3), kind) - 1.0).abs() < 1e-14);
        }
        let d = Matrix::diag(&[3.0, -2.0]);
        assert!((operator_norm(&d, NormKind::Two) - 3.0).abs() < 1e-12);
        let n = Matrix::from_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert!((operator_norm(&n, NormKind::Two) - 2.0).abs() < 1e-12);
        let m = Matrix::from_rows(&[vec![1.0, -2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(operator_norm(&m, NormKind::One), 6.0);
        assert_eq!(operator_norm(&m, NormKind::Inf), 7.0);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]]).is_err());
        assert!(Matrix::from_rows(&[vec![f64::NAN]]).is_err());
        let a = Matrix::identity(2);
        let b = Matrix::identity(3);
        assert!(MatrixSet::new(vec![a, b]).is_err());
        assert!(MatrixSet::new(vec![]).is_err());
    }
}

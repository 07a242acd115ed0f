use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexScalar, Operator, ZERO};
use crate::error::{Error, Result};

/// Square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    inner: DMatrix<ComplexScalar>,
}

impl DenseMatrix {
    pub fn from_rows(rows: &[Vec<ComplexScalar>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::invalid("dense matrix of dimension 0"));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: r.len(),
            });
        }
        Ok(Self {
            inner: DMatrix::from_fn(d, d, |r, c| rows[r][c]),
        })
    }

    pub fn from_matrix(inner: DMatrix<ComplexScalar>) -> Self {
        assert!(inner.is_square(), "dense matrix must be square");
        Self { inner }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_matrix(DMatrix::from_element(dim, dim, ZERO))
    }

    /// Matrix with i.i.d. standard complex Gaussian entries.
    pub fn random_gaussian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for c in 0..dim {
            for r in 0..dim {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                m[(r, c)] = ComplexScalar::new(re, im);
            }
        }
        Self::from_matrix(m)
    }

    /// Unitary from the QR decomposition of a Gaussian matrix, with the
    /// phases of `R`'s diagonal folded back in.
    pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let g = Self::random_gaussian(dim, rng).inner;
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        for c in 0..dim {
            let d = r[(c, c)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { ComplexScalar::new(1.0, 0.0) };
            for row in 0..dim {
                q[(row, c)] *= phase;
            }
        }
        Self::from_matrix(q)
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> ComplexScalar {
        self.inner[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<ComplexScalar> {
        &self.inner
    }

    pub fn rows(&self) -> Vec<Vec<ComplexScalar>> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| self.inner[(r, c)]).collect())
            .collect()
    }

    pub fn multiply(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rhs.dim(),
            });
        }
        Ok(Self::from_matrix(&self.inner * &rhs.inner))
    }

    pub fn add(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rhs.dim(),
            });
        }
        Ok(Self::from_matrix(&self.inner + &rhs.inner))
    }

    pub fn scaled(&self, factor: ComplexScalar) -> DenseMatrix {
        Self::from_matrix(&self.inner * factor)
    }

    pub fn adjoint(&self) -> DenseMatrix {
        Self::from_matrix(self.inner.adjoint())
    }

    /// `max |M^† M - 1| <= tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let g = self.inner.adjoint() * &self.inner;
        let d = self.dim();
        (0..d).all(|r| {
            (0..d).all(|c| {
                let target = if r == c { 1.0 } else { 0.0 };
                (g[(r, c)] - target).norm() <= tol
            })
        })
    }

    pub fn determinant(&self) -> ComplexScalar {
        self.inner.clone().determinant()
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl Operator for DenseMatrix {
    fn dim(&self) -> usize {
        self.inner.nrows()
    }

    fn apply_slice(&self, input: &[ComplexScalar], out: &mut [ComplexScalar]) {
        out.iter_mut().for_each(|o| *o = ZERO);
        for (c, &v) in input.iter().enumerate() {
            if v == ZERO {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                *o += self.inner[(r, c)] * v;
            }
        }
    }

    fn column(&self, col: usize) -> Vec<(usize, ComplexScalar)> {
        (0..self.dim())
            .map(|r| (r, self.inner[(r, col)]))
            .filter(|(_, v)| *v != ZERO)
            .collect()
    }
}

/// Squared Hilbert-Schmidt norm, `sum |m_ij|^2`.
pub fn hs_norm_sq(m: &DenseMatrix) -> f64 {
    m.inner.iter().map(|v| v.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hs_norm_fixtures() {
        assert!((hs_norm_sq(&DenseMatrix::identity(7)) - 7.0).abs() < 1e-15);
        assert_eq!(hs_norm_sq(&DenseMatrix::zeros(4)), 0.0);
    }

    #[test]
    fn hs_norm_matches_trace_of_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 1..6 {
            let m = DenseMatrix::random_gaussian(d, &mut rng);
            let gram = m.adjoint().multiply(&m).unwrap();
            let trace: ComplexScalar = (0..d).map(|i| gram.get(i, i)).sum();
            assert!((hs_norm_sq(&m) - trace.re).abs() < 1e-10);
            assert!(trace.im.abs() < 1e-10);
        }
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 1..10 {
            assert!(DenseMatrix::random_unitary(d, &mut rng).is_unitary(1e-10));
        }
        assert!(!DenseMatrix::random_gaussian(3, &mut rng).is_unitary(1e-3));
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let one = ComplexScalar::new(1.0, 0.0);
        assert!(DenseMatrix::from_rows(&[vec![one, one], vec![one]]).is_err());
        assert!(DenseMatrix::from_rows(&[]).is_err());
    }
}

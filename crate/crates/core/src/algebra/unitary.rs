use super::{root_of_unity, ComplexScalar, DenseMatrix, MonomialUnitary, Operator, WeylTensor, DENSE_LIMIT};
use crate::error::{Error, Result};

/// An operator in whichever representation it was built in.
#[derive(Clone, Debug, PartialEq)]
pub enum Unitary {
    Structured(WeylTensor),
    Monomial(MonomialUnitary),
    Dense(DenseMatrix),
}

impl From<WeylTensor> for Unitary {
    fn from(w: WeylTensor) -> Self {
        Unitary::Structured(w)
    }
}

impl From<MonomialUnitary> for Unitary {
    fn from(m: MonomialUnitary) -> Self {
        Unitary::Monomial(m)
    }
}

impl From<DenseMatrix> for Unitary {
    fn from(m: DenseMatrix) -> Self {
        Unitary::Dense(m)
    }
}

impl Unitary {
    pub fn representation(&self) -> &'static str {
        match self {
            Unitary::Structured(_) => "structured",
            Unitary::Monomial(_) => "monomial",
            Unitary::Dense(_) => "dense",
        }
    }

    pub fn to_monomial(&self) -> Result<MonomialUnitary> {
        match self {
            Unitary::Structured(w) => w.to_monomial(),
            Unitary::Monomial(m) => Ok(m.clone()),
            Unitary::Dense(_) => Err(Error::invalid("dense matrix has no monomial form")),
        }
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        if self.dim() > DENSE_LIMIT {
            return Err(Error::BudgetExceeded(format!(
                "dense expansion of dimension {} (limit {DENSE_LIMIT})",
                self.dim()
            )));
        }
        match self {
            Unitary::Dense(m) => Ok(m.clone()),
            other => Ok(other.to_monomial()?.to_dense()),
        }
    }

    /// `self * rhs`, in the cheaper of the two representations that can hold it.
    pub fn multiply(&self, rhs: &Unitary) -> Result<Unitary> {
        use Unitary::*;
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rhs.dim(),
            });
        }
        Ok(match (self, rhs) {
            (Structured(a), Structured(b)) => match a.multiply(b) {
                Ok(w) => Structured(w),
                Err(_) => Monomial(a.to_monomial()?.multiply(&b.to_monomial()?)?),
            },
            (Dense(_), _) | (_, Dense(_)) => Dense(self.to_dense()?.multiply(&rhs.to_dense()?)?),
            _ => Monomial(self.to_monomial()?.multiply(&rhs.to_monomial()?)?),
        })
    }

    pub fn adjoint(&self) -> Unitary {
        match self {
            Unitary::Structured(w) => Unitary::Structured(w.adjoint()),
            Unitary::Monomial(m) => Unitary::Monomial(m.adjoint()),
            Unitary::Dense(m) => Unitary::Dense(m.adjoint()),
        }
    }

    /// Multiplies by `exp(2 pi i k / modulus)`; exact when a structured
    /// operator's own modulus is a multiple of `modulus`.
    pub fn times_root(&self, k: i64, modulus: usize) -> Result<Unitary> {
        match self {
            Unitary::Structured(w) if w.modulus() % modulus == 0 => {
                Ok(Unitary::Structured(w.times_root(k * (w.modulus() / modulus) as i64)))
            }
            Unitary::Dense(m) => Ok(Unitary::Dense(m.scaled(root_of_unity(modulus, k)))),
            other => Ok(Unitary::Monomial(other.to_monomial()?.scaled(root_of_unity(modulus, k))?)),
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> ComplexScalar {
        match self {
            Unitary::Structured(w) => w.entry(row, col),
            Unitary::Monomial(m) => m.entry(row, col),
            Unitary::Dense(m) => m.get(row, col),
        }
    }

    /// Largest entrywise modulus of `self - other`, without densifying
    /// structured or monomial pairs.
    pub fn max_abs_diff(&self, other: &Unitary) -> Result<f64> {
        use Unitary::*;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        match (self, other) {
            (Structured(a), Structured(b)) if a.modulus() == b.modulus() && a.factors().len() == b.factors().len() => {
                a.max_abs_diff(b)
            }
            (Dense(_), _) | (_, Dense(_)) => self.to_dense()?.max_abs_diff(&other.to_dense()?),
            _ => self.to_monomial()?.max_abs_diff(&other.to_monomial()?),
        }
    }

    pub fn determinant(&self) -> Result<ComplexScalar> {
        match self {
            Unitary::Dense(m) => Ok(m.determinant()),
            other => Ok(other.to_monomial()?.determinant()),
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        match self {
            // unitary by construction
            Unitary::Structured(_) | Unitary::Monomial(_) => true,
            Unitary::Dense(m) => m.is_unitary(tol),
        }
    }
}

impl Operator for Unitary {
    fn dim(&self) -> usize {
        match self {
            Unitary::Structured(w) => w.dim(),
            Unitary::Monomial(m) => Operator::dim(m),
            Unitary::Dense(m) => Operator::dim(m),
        }
    }

    fn apply_slice(&self, input: &[ComplexScalar], out: &mut [ComplexScalar]) {
        match self {
            Unitary::Structured(w) => w.apply_slice(input, out),
            Unitary::Monomial(m) => m.apply_slice(input, out),
            Unitary::Dense(m) => m.apply_slice(input, out),
        }
    }

    fn column(&self, col: usize) -> Vec<(usize, ComplexScalar)> {
        match self {
            Unitary::Structured(w) => w.column(col),
            Unitary::Monomial(m) => m.column(col),
            Unitary::Dense(m) => m.column(col),
        }
    }
}

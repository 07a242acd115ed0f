use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexScalar, Operator, UNITARY_TOL, ZERO};
use crate::error::{Error, Result};

/// Amplitudes over a composite register, row-major with the first register
/// most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<ComplexScalar>,
}

impl StateVector {
    /// Normalized state; fails if `|amps|_2` is off by more than 1e-9.
    pub fn new(dims: Vec<usize>, amps: Vec<ComplexScalar>) -> Result<Self> {
        let s = Self::unnormalized(dims, amps)?;
        let norm = s.norm();
        if (norm - 1.0).abs() > UNITARY_TOL {
            return Err(Error::invalid(format!("state has norm {norm}")));
        }
        Ok(s)
    }

    /// Any vector of the right length, e.g. a linear combination of states.
    pub fn unnormalized(dims: Vec<usize>, amps: Vec<ComplexScalar>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::invalid(format!("register sizes {dims:?} must be non-empty and positive")));
        }
        let len = checked_len(&dims)?;
        if amps.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: amps.len(),
            });
        }
        Ok(Self { dims, amps })
    }

    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let len = checked_len(&dims)?;
        if index >= len {
            return Err(Error::out_of_range("basis index", index, len));
        }
        let mut amps = vec![ZERO; len];
        amps[index] = ComplexScalar::new(1.0, 0.0);
        Self::new(dims, amps)
    }

    /// Equal superposition over a single register.
    pub fn uniform(size: usize) -> Result<Self> {
        let a = ComplexScalar::new(1.0 / (size as f64).sqrt(), 0.0);
        Self::new(vec![size], vec![a; size])
    }

    /// Tensor product; registers are concatenated in order.
    pub fn product(parts: &[&StateVector]) -> Result<Self> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::invalid("product of no states"))?;
        let mut dims = first.dims.clone();
        let mut amps = first.amps.clone();
        for p in rest {
            dims.extend_from_slice(&p.dims);
            checked_len(&dims)?;
            amps = amps
                .iter()
                .flat_map(|a| p.amps.iter().map(move |b| a * b))
                .collect();
        }
        Ok(Self { dims, amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[ComplexScalar] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<ComplexScalar> {
        self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<ComplexScalar> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::invalid(format!(
                "register sizes differ: {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Flat index of a multi-index (one digit per register).
    pub fn index_of(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.dims.len());
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&d, &size)| acc * size + d)
    }

    pub fn digits_of(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.dims.len()];
        for (slot, &size) in digits.iter_mut().zip(&self.dims).rev() {
            *slot = index % size;
            index /= size;
        }
        digits
    }

    /// Number of flat indices spanned by one step of `register`.
    pub fn stride(&self, register: usize) -> usize {
        self.dims[register + 1..].iter().product()
    }

    /// Probability of each value of `register`, summed over all others.
    pub fn marginal(&self, register: usize) -> Result<Vec<f64>> {
        if register >= self.dims.len() {
            return Err(Error::RegisterOutOfRange {
                register,
                count: self.dims.len(),
            });
        }
        let size = self.dims[register];
        let stride = self.stride(register);
        let mut probs = vec![0.0; size];
        for (i, a) in self.amps.iter().enumerate() {
            probs[(i / stride) % size] += a.norm_sqr();
        }
        Ok(probs)
    }

    pub(crate) fn from_parts(dims: Vec<usize>, amps: Vec<ComplexScalar>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), amps.len());
        Self { dims, amps }
    }
}

fn checked_len(dims: &[usize]) -> Result<usize> {
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::BudgetExceeded(format!("state with register sizes {dims:?}")))
}

/// Applies `u` to one register of `state`, leaving the others untouched.
pub fn apply<U: Operator + ?Sized>(u: &U, state: &StateVector, register: usize) -> Result<StateVector> {
    let dims = state.dims();
    if register >= dims.len() {
        return Err(Error::RegisterOutOfRange {
            register,
            count: dims.len(),
        });
    }
    let size = dims[register];
    if u.dim() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: u.dim(),
        });
    }
    let inner = state.stride(register);
    let outer: usize = dims[..register].iter().product();
    let amps = state.amps();
    let mut out = vec![ZERO; amps.len()];
    let mut buf_in = vec![ZERO; size];
    let mut buf_out = vec![ZERO; size];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * size * inner + i;
            for (k, b) in buf_in.iter_mut().enumerate() {
                *b = amps[base + k * inner];
            }
            u.apply_slice(&buf_in, &mut buf_out);
            for (k, b) in buf_out.iter().enumerate() {
                out[base + k * inner] = *b;
            }
        }
    }
    Ok(StateVector::from_parts(dims.to_vec(), out))
}

/// Normalized state with i.i.d. complex Gaussian amplitudes.
pub fn random_state<R: Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> Result<StateVector> {
    let len = checked_len(&dims)?;
    let mut amps: Vec<ComplexScalar> = (0..len)
        .map(|_| ComplexScalar::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector::new(dims, amps)
}

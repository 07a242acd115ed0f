use serde::{Deserialize, Serialize};

use super::{gcd, root_of_unity, ComplexScalar, MonomialUnitary, Operator, MONOMIAL_LIMIT, ZERO};
use crate::error::{Error, Result};

/// One tensor factor `X^shift Z^clock` over `Z_N`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylFactor {
    pub shift: usize,
    pub clock: usize,
}

impl WeylFactor {
    pub const IDENTITY: WeylFactor = WeylFactor { shift: 0, clock: 0 };

    pub fn shift(power: usize) -> Self {
        Self { shift: power, clock: 0 }
    }

    pub fn clock(power: usize) -> Self {
        Self { shift: 0, clock: power }
    }
}

/// `omega^phase * (X^a_1 Z^b_1 ⊗ ... ⊗ X^a_m Z^b_m)` with `omega = exp(2 pi i / N)`.
///
/// All exponents are stored reduced modulo `N`, so equality of values is
/// equality of operators. The dimension is `N^m`; no per-index data is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylTensor {
    modulus: usize,
    phase: usize,
    factors: Vec<WeylFactor>,
}

impl WeylTensor {
    pub fn new(modulus: usize, phase: i64, factors: Vec<WeylFactor>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::invalid("Weyl tensor needs modulus >= 1"));
        }
        let this = Self {
            modulus,
            phase: phase.rem_euclid(modulus as i64) as usize,
            factors: factors
                .into_iter()
                .map(|f| WeylFactor {
                    shift: f.shift % modulus,
                    clock: f.clock % modulus,
                })
                .collect(),
        };
        this.checked_dim()
            .ok_or_else(|| Error::BudgetExceeded(format!("dimension {modulus}^{} overflows", this.factors.len())))?;
        Ok(this)
    }

    pub fn identity(modulus: usize, factor_count: usize) -> Result<Self> {
        Self::new(modulus, 0, vec![WeylFactor::IDENTITY; factor_count])
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// Global phase exponent in `[0, N)`.
    pub fn phase(&self) -> usize {
        self.phase
    }

    pub fn factors(&self) -> &[WeylFactor] {
        &self.factors
    }

    pub fn checked_dim(&self) -> Option<usize> {
        self.modulus.checked_pow(self.factors.len() as u32)
    }

    fn compatible(&self, rhs: &WeylTensor) -> bool {
        self.modulus == rhs.modulus && self.factors.len() == rhs.factors.len()
    }

    fn mismatch(&self, rhs: &WeylTensor) -> Error {
        Error::invalid(format!(
            "Weyl tensors over Z_{}^{} and Z_{}^{} do not compose",
            self.modulus,
            self.factors.len(),
            rhs.modulus,
            rhs.factors.len()
        ))
    }

    /// Exact product, using `Z^b X^c = omega^{bc} X^c Z^b` factorwise.
    pub fn multiply(&self, rhs: &WeylTensor) -> Result<WeylTensor> {
        if !self.compatible(rhs) {
            return Err(self.mismatch(rhs));
        }
        let n = self.modulus;
        let mut phase = (self.phase + rhs.phase) % n;
        let factors = self
            .factors
            .iter()
            .zip(&rhs.factors)
            .map(|(l, r)| {
                phase = (phase + l.clock * r.shift % n) % n;
                WeylFactor {
                    shift: (l.shift + r.shift) % n,
                    clock: (l.clock + r.clock) % n,
                }
            })
            .collect();
        Ok(Self {
            modulus: n,
            phase,
            factors,
        })
    }

    /// `(X^a Z^b)^† = omega^{ab} X^{-a} Z^{-b}` factorwise.
    pub fn adjoint(&self) -> WeylTensor {
        let n = self.modulus;
        let mut phase = (n - self.phase) % n;
        let factors = self
            .factors
            .iter()
            .map(|f| {
                phase = (phase + f.shift * f.clock % n) % n;
                WeylFactor {
                    shift: (n - f.shift) % n,
                    clock: (n - f.clock) % n,
                }
            })
            .collect();
        Self {
            modulus: n,
            phase,
            factors,
        }
    }

    /// Multiplies by `omega^k`.
    pub fn times_root(&self, k: i64) -> WeylTensor {
        let n = self.modulus as i64;
        Self {
            modulus: self.modulus,
            phase: (self.phase as i64 + k).rem_euclid(n) as usize,
            factors: self.factors.clone(),
        }
    }

    /// Same operator up to the global phase.
    pub fn same_operator(&self, other: &WeylTensor) -> bool {
        self.compatible(other) && self.factors == other.factors
    }

    /// Row and phase exponent of the single nonzero entry in column `col`.
    pub fn column_exponent(&self, col: usize) -> (usize, usize) {
        let n = self.modulus;
        let mut rest = col;
        let mut row = 0;
        let mut place = 1;
        let mut exponent = self.phase;
        // least significant factor is the last one
        for f in self.factors.iter().rev() {
            let j = rest % n;
            rest /= n;
            row += ((j + f.shift) % n) * place;
            place *= n;
            exponent = (exponent + f.clock * j % n) % n;
        }
        (row, exponent)
    }

    pub fn entry(&self, row: usize, col: usize) -> ComplexScalar {
        let (r, e) = self.column_exponent(col);
        if r == row {
            root_of_unity(self.modulus, e as i64)
        } else {
            ZERO
        }
    }

    pub fn to_monomial(&self) -> Result<MonomialUnitary> {
        let d = self
            .checked_dim()
            .filter(|&d| d <= MONOMIAL_LIMIT)
            .ok_or_else(|| Error::BudgetExceeded(format!("expanding Z_{}^{} to explicit arrays", self.modulus, self.factors.len())))?;
        let roots: Vec<ComplexScalar> = (0..self.modulus).map(|k| root_of_unity(self.modulus, k as i64)).collect();
        let (perm, phases) = (0..d)
            .map(|c| {
                let (r, e) = self.column_exponent(c);
                (r, roots[e])
            })
            .unzip();
        Ok(MonomialUnitary::from_parts(perm, phases))
    }

    /// Exact largest entrywise modulus of `self - other`.
    ///
    /// Different shift parts put every column's entry on a different row, so
    /// the deviation is 1. Equal shift parts leave phase differences
    /// `omega^{dphase + t g}` where `g = gcd(N, clock differences)`.
    pub fn max_abs_diff(&self, other: &WeylTensor) -> Result<f64> {
        if !self.compatible(other) {
            return Err(self.mismatch(other));
        }
        let n = self.modulus;
        if self.factors.iter().zip(&other.factors).any(|(a, b)| a.shift != b.shift) {
            return Ok(1.0);
        }
        let g = self
            .factors
            .iter()
            .zip(&other.factors)
            .fold(n, |g, (a, b)| gcd(g, (a.clock + n - b.clock) % n));
        let dphase = (self.phase + n - other.phase) % n;
        Ok((0..n / g)
            .map(|t| (ComplexScalar::new(1.0, 0.0) - root_of_unity(n, (dphase + t * g) as i64)).norm())
            .fold(0.0, f64::max))
    }
}

impl Operator for WeylTensor {
    fn dim(&self) -> usize {
        self.checked_dim().expect("dimension checked at construction")
    }

    fn apply_slice(&self, input: &[ComplexScalar], out: &mut [ComplexScalar]) {
        let roots: Vec<ComplexScalar> = (0..self.modulus).map(|k| root_of_unity(self.modulus, k as i64)).collect();
        for (c, &v) in input.iter().enumerate() {
            let (r, e) = self.column_exponent(c);
            out[r] = roots[e] * v;
        }
    }

    fn column(&self, col: usize) -> Vec<(usize, ComplexScalar)> {
        let (r, e) = self.column_exponent(col);
        vec![(r, root_of_unity(self.modulus, e as i64))]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{generalized_pauli, tensor, PauliKind};

    fn explicit(w: &WeylTensor) -> MonomialUnitary {
        // independent expansion through the single-factor generalized Paulis
        let n = w.modulus();
        let omega = root_of_unity(n, 1);
        let parts: Vec<MonomialUnitary> = w
            .factors()
            .iter()
            .map(|f| {
                let x = generalized_pauli(PauliKind::X, n, f.shift as i64, omega).unwrap();
                let z = generalized_pauli(PauliKind::Z, n, f.clock as i64, omega).unwrap();
                x.multiply(&z).unwrap()
            })
            .collect();
        let base = if parts.is_empty() {
            MonomialUnitary::identity(1)
        } else {
            tensor(&parts).unwrap()
        };
        base.scaled(root_of_unity(n, w.phase() as i64)).unwrap()
    }

    fn sample(n: usize, seed: usize, count: usize) -> WeylTensor {
        let factors = (0..count)
            .map(|i| WeylFactor {
                shift: (seed * 7 + i * 3) % n,
                clock: (seed * 5 + i * 11 + 1) % n,
            })
            .collect();
        WeylTensor::new(n, seed as i64, factors).unwrap()
    }

    #[test]
    fn expansion_matches_generalized_paulis() {
        for n in [2, 3, 6] {
            for s in 0..5 {
                let w = sample(n, s, 2);
                assert!(w.to_monomial().unwrap().max_abs_diff(&explicit(&w)).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn symbolic_product_matches_explicit() {
        for n in [2, 4, 6] {
            for s in 0..6 {
                let a = sample(n, s, 3);
                let b = sample(n, s + 13, 3);
                let sym = a.multiply(&b).unwrap().to_monomial().unwrap();
                let exp = explicit(&a).multiply(&explicit(&b)).unwrap();
                assert!(sym.max_abs_diff(&exp).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn adjoint_inverts() {
        let a = sample(6, 4, 3);
        let id = a.multiply(&a.adjoint()).unwrap();
        assert_eq!(id, WeylTensor::identity(6, 3).unwrap());
    }

    #[test]
    fn exact_diff_matches_explicit_diff() {
        for n in [4, 6] {
            for s in 0..8 {
                let a = sample(n, s, 2);
                let b = sample(n, s + 1, 2);
                let b2 = WeylTensor::new(n, s as i64 + 3, a.factors().iter().enumerate().map(|(i, f)| WeylFactor { shift: f.shift, clock: f.clock + i * 2 }).collect()).unwrap();
                for other in [&b, &b2, &a] {
                    let sym = a.max_abs_diff(other).unwrap();
                    let exp = a.to_monomial().unwrap().max_abs_diff(&other.to_monomial().unwrap()).unwrap();
                    assert!((sym - exp).abs() < 1e-12, "{sym} vs {exp}");
                }
            }
        }
    }

    #[test]
    fn empty_tensor_is_scalar() {
        let w = WeylTensor::new(6, 2, vec![]).unwrap();
        assert_eq!(w.dim(), 1);
        assert!((w.entry(0, 0) - root_of_unity(6, 2)).norm() < 1e-15);
    }

    #[test]
    fn large_dimensions_stay_symbolic() {
        let w = WeylTensor::new(120, 0, vec![WeylFactor::shift(1); 4]).unwrap();
        assert_eq!(w.dim(), 120usize.pow(4));
        assert!(matches!(w.to_monomial(), Err(Error::BudgetExceeded(_))));
        let (r, _) = w.column_exponent(0);
        assert_eq!(r, 1 + 120 + 120 * 120 + 120 * 120 * 120);
    }
}

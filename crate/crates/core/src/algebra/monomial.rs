use serde::{Deserialize, Serialize};

use super::{permutation_sign, ComplexScalar, DenseMatrix, Operator, ONE, PHASE_TOL, UNITARY_TOL, ZERO};
use crate::error::{Error, Result};

/// Unitary with exactly one nonzero entry per column: the entry at row
/// `perm[c]`, column `c` is `phases[c]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialUnitary {
    perm: Vec<usize>,
    phases: Vec<ComplexScalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliKind {
    /// Cyclic shift `|j> -> |j+1 mod N>`.
    X,
    /// Clock `|j> -> omega^j |j>`.
    Z,
}

/// Generalized Pauli `X^power` or `Z^power` of dimension `modulus`, with the
/// clock phases taken from the caller-supplied root `omega`.
///
/// `omega` must satisfy `omega^modulus = 1`; it need not be primitive, which
/// lets the caller substitute `omega^y` for `omega`.
pub fn generalized_pauli(
    kind: PauliKind,
    modulus: usize,
    power: i64,
    omega: ComplexScalar,
) -> Result<MonomialUnitary> {
    if modulus == 0 {
        return Err(Error::invalid("generalized Pauli needs N >= 1"));
    }
    if (omega.norm() - 1.0).abs() > PHASE_TOL {
        return Err(Error::invalid(format!("|omega| = {} is not 1", omega.norm())));
    }
    let n = modulus as i64;
    if (omega.powi(n as i32) - ONE).norm() > UNITARY_TOL {
        return Err(Error::invalid(format!("omega is not an N-th root of unity for N = {modulus}")));
    }
    let p = power.rem_euclid(n);
    let (perm, phases) = match kind {
        PauliKind::X => (
            (0..modulus).map(|j| (j + p as usize) % modulus).collect(),
            vec![ONE; modulus],
        ),
        PauliKind::Z => (
            (0..modulus).collect(),
            (0..n).map(|j| omega.powi(((p * j) % n) as i32)).collect(),
        ),
    };
    MonomialUnitary::new(perm, phases)
}

/// Kronecker product of monomial factors, first factor most significant.
pub fn tensor(factors: &[MonomialUnitary]) -> Result<MonomialUnitary> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::invalid("tensor of an empty factor list"))?;
    let mut acc = first.clone();
    for f in rest {
        acc = acc.kron(f);
    }
    Ok(acc)
}

impl MonomialUnitary {
    pub fn new(perm: Vec<usize>, phases: Vec<ComplexScalar>) -> Result<Self> {
        if perm.is_empty() {
            return Err(Error::invalid("monomial unitary of dimension 0"));
        }
        if perm.len() != phases.len() {
            return Err(Error::DimensionMismatch {
                expected: perm.len(),
                found: phases.len(),
            });
        }
        let mut seen = vec![false; perm.len()];
        for &r in &perm {
            if r >= perm.len() || seen[r] {
                return Err(Error::invalid("monomial permutation is not a bijection"));
            }
            seen[r] = true;
        }
        if let Some(p) = phases.iter().find(|p| (p.norm() - 1.0).abs() > PHASE_TOL) {
            return Err(Error::invalid(format!("phase {p} does not have unit modulus")));
        }
        Ok(Self { perm, phases })
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_parts(perm: Vec<usize>, phases: Vec<ComplexScalar>) -> Self {
        debug_assert_eq!(perm.len(), phases.len());
        Self { perm, phases }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_parts((0..dim).collect(), vec![ONE; dim])
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phases(&self) -> &[ComplexScalar] {
        &self.phases
    }

    pub fn entry(&self, row: usize, col: usize) -> ComplexScalar {
        if self.perm[col] == row {
            self.phases[col]
        } else {
            ZERO
        }
    }

    /// Matrix product `self * rhs` in O(d).
    pub fn multiply(&self, rhs: &MonomialUnitary) -> Result<MonomialUnitary> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rhs.dim(),
            });
        }
        let (perm, phases) = rhs
            .perm
            .iter()
            .zip(&rhs.phases)
            .map(|(&mid, &p)| (self.perm[mid], self.phases[mid] * p))
            .unzip();
        Ok(Self::from_parts(perm, phases))
    }

    pub fn kron(&self, rhs: &MonomialUnitary) -> MonomialUnitary {
        let d2 = rhs.dim();
        let mut perm = Vec::with_capacity(self.dim() * d2);
        let mut phases = Vec::with_capacity(self.dim() * d2);
        for (&r1, &p1) in self.perm.iter().zip(&self.phases) {
            for (&r2, &p2) in rhs.perm.iter().zip(&rhs.phases) {
                perm.push(r1 * d2 + r2);
                phases.push(p1 * p2);
            }
        }
        Self::from_parts(perm, phases)
    }

    /// Block-diagonal `self ⊕ rhs`.
    pub fn direct_sum(&self, rhs: &MonomialUnitary) -> MonomialUnitary {
        let off = self.dim();
        let perm = self
            .perm
            .iter()
            .copied()
            .chain(rhs.perm.iter().map(|&r| r + off))
            .collect();
        let phases = self.phases.iter().chain(&rhs.phases).copied().collect();
        Self::from_parts(perm, phases)
    }

    pub fn adjoint(&self) -> MonomialUnitary {
        let mut perm = vec![0; self.dim()];
        let mut phases = vec![ZERO; self.dim()];
        for (c, (&r, &p)) in self.perm.iter().zip(&self.phases).enumerate() {
            perm[r] = c;
            phases[r] = p.conj();
        }
        Self::from_parts(perm, phases)
    }

    pub fn scaled(&self, factor: ComplexScalar) -> Result<MonomialUnitary> {
        Self::new(self.perm.clone(), self.phases.iter().map(|p| p * factor).collect())
    }

    /// `sign(perm) * prod(phases)`.
    pub fn determinant(&self) -> ComplexScalar {
        let prod: ComplexScalar = self.phases.iter().product();
        prod * permutation_sign(&self.perm) as f64
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let d = self.dim();
        let mut m = nalgebra::DMatrix::from_element(d, d, ZERO);
        for (c, (&r, &p)) in self.perm.iter().zip(&self.phases).enumerate() {
            m[(r, c)] = p;
        }
        DenseMatrix::from_matrix(m)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &MonomialUnitary) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok((0..self.dim())
            .map(|c| {
                if self.perm[c] == other.perm[c] {
                    (self.phases[c] - other.phases[c]).norm()
                } else {
                    self.phases[c].norm().max(other.phases[c].norm())
                }
            })
            .fold(0.0, f64::max))
    }
}

impl Operator for MonomialUnitary {
    fn dim(&self) -> usize {
        self.perm.len()
    }

    fn apply_slice(&self, input: &[ComplexScalar], out: &mut [ComplexScalar]) {
        for ((&r, &p), &v) in self.perm.iter().zip(&self.phases).zip(input) {
            out[r] = p * v;
        }
    }

    fn column(&self, col: usize) -> Vec<(usize, ComplexScalar)> {
        vec![(self.perm[col], self.phases[col])]
    }
}

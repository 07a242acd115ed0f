//! Complex linear algebra for the switch simulator.
//!
//! Three operator representations share the [`Operator`] interface:
//!
//! - [`WeylTensor`] keeps a tensor product of generalized Pauli factors
//!   `X^a Z^b` symbolically, with the global phase as an integer exponent of
//!   the root of unity. Products are exact and cost O(number of factors).
//! - [`MonomialUnitary`] stores a permutation and one unit-modulus phase per
//!   column. Products, tensors and determinants cost O(d).
//! - [`DenseMatrix`] is the fallback for perturbed or random sets.
//!
//! [`Unitary`] wraps the three and promotes to the cheapest common
//! representation when they are mixed.
//!
//! Registers of a [`StateVector`] are indexed row-major: the first register is
//! the most significant digit of the flat amplitude index.

mod dense;
mod monomial;
mod state;
mod unitary;
mod weyl;

pub use dense::{hs_norm_sq, DenseMatrix};
pub use monomial::{generalized_pauli, tensor, MonomialUnitary, PauliKind};
pub use state::{apply, random_state, StateVector};
pub use unitary::Unitary;
pub use weyl::{WeylFactor, WeylTensor};

use num_complex::Complex64;

pub type ComplexScalar = Complex64;

/// Modulus tolerance for phases entering the protocol.
pub const PHASE_TOL: f64 = 1e-12;
/// Unitarity and normalization tolerance.
pub const UNITARY_TOL: f64 = 1e-9;
/// Agreement tolerance between a fast path and its oracle.
pub const ORACLE_TOL: f64 = 1e-10;

/// Largest dimension a structured operator is expanded to explicit arrays.
pub const MONOMIAL_LIMIT: usize = 1 << 24;
/// Largest dimension ever expanded to a dense matrix.
pub const DENSE_LIMIT: usize = 1 << 13;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `exp(2 pi i k / modulus)`, with `k` reduced first so large exponents stay exact.
pub fn root_of_unity(modulus: usize, k: i64) -> ComplexScalar {
    assert!(modulus > 0, "root of unity needs a positive modulus");
    let m = modulus as i64;
    let r = k.rem_euclid(m);
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / m as f64)
}

/// Linear operator on `C^dim`.
pub trait Operator {
    fn dim(&self) -> usize;

    /// Writes `self * input` into `out`. Both slices have length `dim`.
    fn apply_slice(&self, input: &[ComplexScalar], out: &mut [ComplexScalar]);

    /// Nonzero entries `(row, value)` of column `col`.
    fn column(&self, col: usize) -> Vec<(usize, ComplexScalar)>;
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Sign of a permutation given as an image table.
pub(crate) fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

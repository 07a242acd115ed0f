//! Permutation labels.
//!
//! A label `x` in `[0, n!)` is expanded in the factorial base,
//! `x = sum_k a_k k!` with `0 <= a_k <= k`. The permutation it names is built
//! from the identity arrangement `U_{n-1} ... U_1 U_0` by shifting `U_k` to the
//! right `a_k` times, for `k = 1, 2, ..., n-1` in that order. The result is
//! stored as `sigma`, where `sigma[p]` is the index of the unitary in position
//! `p` counted from the right, so the product reads
//! `U_{sigma[n-1]} ... U_{sigma[1]} U_{sigma[0]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` for which `n!` fits in a `u64`.
pub const MAX_N: usize = 20;

pub fn factorial(n: usize) -> Result<usize> {
    if n > MAX_N {
        return Err(Error::BudgetExceeded(format!("{n}! does not fit in 64 bits")));
    }
    Ok((1..=n).product())
}

/// Factorial-base digits of a label; `a(k)` for `k = 1..n-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factoradic {
    // coeffs[k - 1] = a_k
    coeffs: Vec<usize>,
}

impl Factoradic {
    /// From `(a_{n-1}, ..., a_1)`, the order the digits are usually written in.
    pub fn from_descending(digits: &[usize]) -> Result<Self> {
        let coeffs: Vec<usize> = digits.iter().rev().copied().collect();
        for (i, &a) in coeffs.iter().enumerate() {
            let k = i + 1;
            if a > k {
                return Err(Error::invalid(format!("coefficient a_{k} = {a} exceeds {k}")));
            }
        }
        Ok(Self { coeffs })
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() + 1
    }

    pub fn a(&self, k: usize) -> usize {
        self.coeffs[k - 1]
    }

    /// `(a_{n-1}, ..., a_1)`.
    pub fn descending(&self) -> Vec<usize> {
        self.coeffs.iter().rev().copied().collect()
    }
}

pub fn label_to_factoradic(x: usize, n: usize) -> Result<Factoradic> {
    check_label(x, n)?;
    let mut coeffs = vec![0; n.saturating_sub(1)];
    let mut rest = x;
    for k in (1..n).rev() {
        let f = factorial(k)?;
        coeffs[k - 1] = rest / f;
        rest %= f;
    }
    Ok(Factoradic { coeffs })
}

pub fn factoradic_to_label(coeffs: &Factoradic) -> usize {
    let mut f = 1;
    let mut x = 0;
    for (i, &a) in coeffs.coeffs.iter().enumerate() {
        f *= i + 1;
        x += a * f;
    }
    x
}

/// `sigma` with `sigma[p]` the unitary in position `p` from the right.
pub fn label_to_permutation(x: usize, n: usize) -> Result<Vec<usize>> {
    let coeffs = label_to_factoradic(x, n)?;
    Ok(shift_arrangement(&coeffs))
}

fn shift_arrangement(coeffs: &Factoradic) -> Vec<usize> {
    let mut order: Vec<usize> = (0..coeffs.n()).collect();
    for k in 1..coeffs.n() {
        // U_k sits at position k until its own shift
        let u = order.remove(k);
        order.insert(k - coeffs.a(k), u);
    }
    order
}

/// Inverse of [`label_to_permutation`]: peels off `U_{n-1}, ..., U_1`, reading
/// each shift count from how far right the unitary ended up.
pub fn permutation_to_label(sigma: &[usize]) -> Result<usize> {
    let n = sigma.len();
    if n == 0 || !is_permutation(sigma) {
        return Err(Error::invalid(format!("{sigma:?} is not a permutation")));
    }
    let mut order = sigma.to_vec();
    let mut coeffs = vec![0; n - 1];
    for k in (1..n).rev() {
        let pos = order.iter().position(|&u| u == k).expect("permutation contains every index");
        coeffs[k - 1] = k - pos;
        order.remove(pos);
    }
    Ok(factoradic_to_label(&Factoradic { coeffs }))
}

pub fn is_permutation(seq: &[usize]) -> bool {
    let mut seen = vec![false; seq.len()];
    seq.iter().all(|&v| v < seq.len() && !std::mem::replace(&mut seen[v], true))
}

pub fn invert(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for (p, &u) in sigma.iter().enumerate() {
        inv[u] = p;
    }
    inv
}

fn check_label(x: usize, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let bound = factorial(n)?;
    if x >= bound {
        return Err(Error::out_of_range("label", x, bound));
    }
    Ok(())
}

/// A label together with its digits and permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationLabel {
    pub n: usize,
    pub x: usize,
    pub coeffs: Factoradic,
    pub sigma: Vec<usize>,
}

impl PermutationLabel {
    pub fn new(x: usize, n: usize) -> Result<Self> {
        let coeffs = label_to_factoradic(x, n)?;
        let sigma = shift_arrangement(&coeffs);
        Ok(Self { n, x, coeffs, sigma })
    }

    /// All labels `0..n!` in order.
    pub fn all(n: usize) -> Result<impl Iterator<Item = PermutationLabel>> {
        let count = factorial(n)?;
        Ok((0..count).map(move |x| Self::new(x, n).expect("label in range")))
    }

    /// The product as written, leftmost factor applied last, e.g. `U_0U_2U_1U_3`.
    pub fn arrangement(&self) -> String {
        self.sigma.iter().rev().map(|u| format!("U_{u}")).collect()
    }

    pub fn bits(&self) -> RouterBits {
        factoradic_to_bits(&self.coeffs)
    }
}

/// Unary encoding of the digits: row `k` holds `b_{k,1}, ..., b_{k,k}` with
/// exactly `a_k` leading ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouterBits {
    rows: Vec<Vec<bool>>,
}

impl RouterBits {
    pub fn from_rows(rows: Vec<Vec<bool>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            let k = i + 1;
            if row.len() != k {
                return Err(Error::invalid(format!("bit row {k} has {} bits, expected {k}", row.len())));
            }
            if row.windows(2).any(|w| !w[0] && w[1]) {
                return Err(Error::invalid(format!("bit row {k} is not monotone: {row:?}")));
            }
        }
        Ok(Self { rows })
    }

    /// `b_{k,j}` for `1 <= j <= k <= n-1`.
    pub fn bit(&self, k: usize, j: usize) -> bool {
        self.rows[k - 1][j - 1]
    }

    pub fn row(&self, k: usize) -> &[bool] {
        &self.rows[k - 1]
    }

    pub fn count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

pub fn factoradic_to_bits(coeffs: &Factoradic) -> RouterBits {
    let rows = (1..coeffs.n())
        .map(|k| (1..=k).map(|j| j <= coeffs.a(k)).collect())
        .collect();
    RouterBits { rows }
}

pub fn bits_to_factoradic(bits: &RouterBits) -> Result<Factoradic> {
    let checked = RouterBits::from_rows(bits.rows.clone())?;
    Ok(Factoradic {
        coeffs: checked
            .rows
            .iter()
            .map(|r| r.iter().filter(|&&b| b).count())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn worked_example_n4() {
        let c = label_to_factoradic(21, 4).unwrap();
        assert_eq!(c.descending(), vec![3, 1, 1]);
        assert_eq!(factoradic_to_label(&Factoradic::from_descending(&[3, 1, 1]).unwrap()), 21);
        let label = PermutationLabel::new(21, 4).unwrap();
        assert_eq!(label.arrangement(), "U_0U_2U_1U_3");
    }

    #[test]
    fn greedy_expansion() {
        assert_eq!(label_to_factoradic(5, 3).unwrap().descending(), vec![2, 1]);
        assert_eq!(label_to_factoradic(0, 5).unwrap().descending(), vec![0; 4]);
        assert_eq!(label_to_factoradic(0, 1).unwrap().descending(), Vec::<usize>::new());
    }

    #[test]
    fn out_of_range() {
        assert!(label_to_factoradic(6, 3).is_err());
        assert!(label_to_permutation(24, 4).is_err());
        assert!(label_to_factoradic(0, 0).is_err());
        assert!(Factoradic::from_descending(&[4, 0, 0]).is_err());
        assert!(Factoradic::from_descending(&[0, 3]).is_err());
    }

    #[test]
    fn label_zero_is_identity() {
        for n in 1..=6 {
            assert_eq!(label_to_permutation(0, n).unwrap(), (0..n).collect::<Vec<_>>());
        }
        assert_eq!(PermutationLabel::new(0, 4).unwrap().arrangement(), "U_3U_2U_1U_0");
    }

    #[test]
    fn labeling_is_a_bijection() {
        for n in 1..=6 {
            let count = factorial(n).unwrap();
            let perms: HashSet<Vec<usize>> = (0..count).map(|x| label_to_permutation(x, n).unwrap()).collect();
            assert_eq!(perms.len(), count);
            assert!(perms.iter().all(|p| is_permutation(p)));
            for x in 0..count {
                assert_eq!(permutation_to_label(&label_to_permutation(x, n).unwrap()).unwrap(), x);
                assert_eq!(factoradic_to_label(&label_to_factoradic(x, n).unwrap()), x);
            }
        }
    }

    #[test]
    fn unary_bits() {
        let c = Factoradic::from_descending(&[2, 0, 0]).unwrap();
        let b = factoradic_to_bits(&c);
        assert_eq!(b.row(3), &[true, true, false]);
        assert_eq!(b.row(1), &[false]);
        assert_eq!(b.count(), 6);
        for label in PermutationLabel::all(4).unwrap() {
            let bits = label.bits();
            assert_eq!(bits_to_factoradic(&bits).unwrap(), label.coeffs);
            for k in 1..4 {
                assert_eq!(bits.row(k).iter().filter(|&&b| b).count(), label.coeffs.a(k));
            }
        }
    }

    #[test]
    fn non_monotone_bits_rejected() {
        assert!(RouterBits::from_rows(vec![vec![false], vec![false, true]]).is_err());
        assert!(RouterBits::from_rows(vec![vec![false, false]]).is_err());
    }
}

//! Fixed-order circuit simulating the n-switch with `n^2` queries, and
//! supersequences of permutations.
//!
//! The control is a string of digits `C_1 ... C_n` in base `n` (`C_1` most
//! significant). For a permutation-encoding string `C_k = sigma(k-1)`. Each of
//! the `n` blocks swaps the target into ancilla slot `C_k`, applies every
//! `U_i` to slot `i`, and swaps back. Registers of the full state are
//! `[digits (n^n), target (d), ancilla_0 (d), ..., ancilla_{n-1} (d)]`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{apply, ComplexScalar, StateVector, Unitary, ZERO};
use crate::construct::UnitarySet;
use crate::error::{Error, Result};
use crate::perm::{factorial, is_permutation, label_to_permutation, permutation_to_label};
use crate::switch::{n_switch_apply, QueryLedger};

/// Largest circuit state simulated, in amplitudes.
pub const CIRCUIT_LIMIT: usize = 1 << 24;

pub type GateSequence = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircuitControl {
    digits: Vec<usize>,
}

impl CircuitControl {
    pub fn new(digits: Vec<usize>) -> Result<Self> {
        let n = digits.len();
        if n == 0 {
            return Err(Error::invalid("control needs at least one digit"));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= n) {
            return Err(Error::out_of_range("control digit", d, n));
        }
        Ok(Self { digits })
    }

    /// Digits `C_k = sigma_x(k-1)`.
    pub fn from_label(x: usize, n: usize) -> Result<Self> {
        Self::new(label_to_permutation(x, n)?)
    }

    /// Parses a string such as `"021"`; requires `n <= 10`.
    pub fn parse(text: &str) -> Result<Self> {
        let digits = text
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::invalid(format!("bad digit {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(digits)
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn n(&self) -> usize {
        self.digits.len()
    }

    pub fn is_permutation(&self) -> bool {
        is_permutation(&self.digits)
    }

    pub fn to_label(&self) -> Option<usize> {
        if self.is_permutation() {
            permutation_to_label(&self.digits).ok()
        } else {
            None
        }
    }

    /// Flat index in the `n^n` digit register.
    pub fn index(&self) -> usize {
        let n = self.n();
        self.digits.iter().fold(0, |acc, &d| acc * n + d)
    }

    pub fn from_index(index: usize, n: usize) -> Result<Self> {
        let size = digit_space(n)?;
        if index >= size {
            return Err(Error::out_of_range("control index", index, size));
        }
        let mut digits = vec![0; n];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        Self::new(digits)
    }

    /// How many blocks route the target through each ancilla slot.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.n()];
        for &d in &self.digits {
            c[d] += 1;
        }
        c
    }
}

fn digit_space(n: usize) -> Result<usize> {
    n.checked_pow(n as u32)
        .ok_or_else(|| Error::BudgetExceeded(format!("{n}^{n} control strings")))
}

/// Equal-weight superposition of the given digit strings.
pub fn control_superposition(controls: &[CircuitControl]) -> Result<StateVector> {
    let n = controls.first().ok_or_else(|| Error::invalid("empty superposition"))?.n();
    let size = digit_space(n)?;
    let mut amps = vec![ZERO; size];
    for c in controls {
        if c.n() != n {
            return Err(Error::invalid("control strings of different lengths"));
        }
        amps[c.index()] += ComplexScalar::new(1.0, 0.0);
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::new(vec![size], amps.into_iter().map(|a| a / norm).collect())
}

/// Moves a control state over permutation labels into the digit register.
pub fn embed_label_control(control: &StateVector, n: usize) -> Result<StateVector> {
    let order = factorial(n)?;
    if control.len() != order {
        return Err(Error::DimensionMismatch {
            expected: order,
            found: control.len(),
        });
    }
    let size = digit_space(n)?;
    let mut amps = vec![ZERO; size];
    for (x, a) in control.amps().iter().enumerate() {
        amps[CircuitControl::from_label(x, n)?.index()] = *a;
    }
    StateVector::new(vec![size], amps)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitState {
    n: usize,
    d: usize,
    state: StateVector,
}

impl CircuitState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// `(<anc| ⊗ 1) |state>` over `[digits, target]`; a unit vector exactly
    /// when the ancillae are in the product state `anc` and unentangled.
    pub fn project_ancillae(&self, ancillae: &[StateVector]) -> Result<StateVector> {
        let refs: Vec<&StateVector> = ancillae.iter().collect();
        let anc = StateVector::product(&refs)?;
        let block = anc.len();
        if !self.state.len().is_multiple_of(block) || ancillae.len() != self.n {
            return Err(Error::invalid("ancilla states do not match the circuit"));
        }
        let amps = self
            .state
            .amps()
            .chunks(block)
            .map(|chunk| chunk.iter().zip(anc.amps()).map(|(s, a)| a.conj() * s).sum())
            .collect();
        StateVector::unnormalized(vec![digit_space(self.n)?, self.d], amps)
    }
}

/// `|0>` in every ancilla.
pub fn default_ancillae(n: usize, d: usize) -> Result<Vec<StateVector>> {
    (0..n).map(|_| StateVector::basis(vec![d], 0)).collect()
}

pub fn run_fixed_circuit(
    set: &UnitarySet,
    control: &StateVector,
    psi: &StateVector,
    ancillae: &[StateVector],
) -> Result<CircuitState> {
    let n = set.n();
    let d = set.d();
    let size = digit_space(n)?;
    if control.len() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: control.len(),
        });
    }
    if ancillae.len() != n {
        return Err(Error::invalid(format!("{} ancillae supplied, expected {n}", ancillae.len())));
    }
    for s in std::iter::once(psi).chain(ancillae) {
        if s.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: s.len() });
        }
    }
    let total = (d as u128).pow(n as u32 + 1) * size as u128;
    if total > CIRCUIT_LIMIT as u128 {
        return Err(Error::BudgetExceeded(format!("circuit state with {total} amplitudes")));
    }
    let flat = |s: &StateVector| StateVector::new(vec![s.len()], s.amps().to_vec());
    let mut parts = vec![flat(control)?, flat(psi)?];
    for a in ancillae {
        parts.push(flat(a)?);
    }
    let refs: Vec<&StateVector> = parts.iter().collect();
    let mut state = StateVector::product(&refs)?;

    for k in 0..n {
        state = controlled_swap(&state, n, d, k);
        for (i, u) in set.unitaries().iter().enumerate() {
            state = apply(u, &state, 2 + i)?;
        }
        state = controlled_swap(&state, n, d, k);
    }
    Ok(CircuitState { n, d, state })
}

/// Swaps the target with ancilla `C_{k+1}`, branch by branch.
fn controlled_swap(state: &StateVector, n: usize, d: usize, k: usize) -> StateVector {
    let mut out = vec![ZERO; state.len()];
    let per_control = d.pow(n as u32 + 1);
    // stride of ancilla i within one control block; target is the top digit
    let strides: Vec<usize> = (0..=n).map(|r| d.pow((n - r) as u32)).collect();
    let digit_place = n.pow((n - 1 - k) as u32);
    for (idx, a) in state.amps().iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        let c = idx / per_control;
        let slot = (c / digit_place) % n;
        let rest = idx % per_control;
        let t = (rest / strides[0]) % d;
        let s = (rest / strides[1 + slot]) % d;
        let swapped = rest - t * strides[0] - s * strides[1 + slot] + s * strides[0] + t * strides[1 + slot];
        out[c * per_control + swapped] = *a;
    }
    StateVector::from_parts(state.dims().to_vec(), out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disentanglement {
    pub disentangled: bool,
    pub purity: f64,
    /// Largest eigenvalue of the ancilla reduced state: the fidelity with
    /// the closest pure ancilla state.
    pub fidelity: f64,
}

/// Purity test on the reduced state of the ancillae; pure within 1e-9 means
/// they carry no correlation with control or target.
pub fn check_ancilla_disentangled(circuit: &CircuitState) -> Result<Disentanglement> {
    let anc = circuit.d.pow(circuit.n as u32);
    let rest = circuit.state.len() / anc;
    let m = DMatrix::from_row_slice(rest, anc, circuit.state.amps());
    // nonzero spectra of M M^† and M^† M coincide
    let gram = if rest <= anc { &m * m.adjoint() } else { m.adjoint() * &m };
    let eig = nalgebra::SymmetricEigen::new(gram);
    let purity: f64 = eig.eigenvalues.iter().map(|l| l * l).sum();
    let fidelity = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Disentanglement {
        disentangled: (1.0 - purity).abs() <= 1e-9,
        purity,
        fidelity,
    })
}

/// Largest amplitude difference between the circuit (with ancillae projected
/// onto `U_i^{n-1}|a_i>`) and the switch, for a control over permutation labels.
pub fn compare_with_switch(
    set: &UnitarySet,
    control: &StateVector,
    psi: &StateVector,
    ancillae: &[StateVector],
) -> Result<f64> {
    let n = set.n();
    let d = set.d();
    let digits = embed_label_control(control, n)?;
    let circuit = run_fixed_circuit(set, &digits, psi, ancillae)?;
    let expected_anc = ancillae
        .iter()
        .zip(set.unitaries())
        .map(|(a, u)| power_apply(u, a, n - 1))
        .collect::<Result<Vec<_>>>()?;
    let projected = circuit.project_ancillae(&expected_anc)?;

    let joint = StateVector::product(&[
        &StateVector::new(vec![control.len()], control.amps().to_vec())?,
        &StateVector::new(vec![d], psi.amps().to_vec())?,
    ])?;
    let switched = n_switch_apply(set, &joint)?;
    let mut expected = vec![ZERO; projected.len()];
    for x in 0..control.len() {
        let c = CircuitControl::from_label(x, n)?.index();
        expected[c * d..(c + 1) * d].copy_from_slice(&switched.amps()[x * d..(x + 1) * d]);
    }
    Ok(projected
        .amps()
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

fn power_apply(u: &Unitary, state: &StateVector, times: usize) -> Result<StateVector> {
    let mut s = StateVector::new(vec![state.len()], state.amps().to_vec())?;
    for _ in 0..times {
        s = apply(u, &s, 0)?;
    }
    Ok(s)
}

pub fn circuit_query_count(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    n.checked_mul(n).ok_or_else(|| Error::BudgetExceeded(format!("{n}^2 queries")))
}

/// Flag counts for the circuit, per control branch in the support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitLedger {
    /// Uses of `U_i` on the target; branches agree iff the ancillae disentangle.
    pub on_target: QueryLedger,
    /// All uses of `U_i`, target plus ancilla.
    pub total: QueryLedger,
}

pub fn count_queries_circuit(control: &StateVector, n: usize) -> Result<CircuitLedger> {
    let size = digit_space(n)?;
    if control.len() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: control.len(),
        });
    }
    let mut on_target = BTreeMap::new();
    let mut total = BTreeMap::new();
    for (idx, a) in control.amps().iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        on_target.insert(idx, CircuitControl::from_index(idx, n)?.counts());
        // every block applies every U_i once, to the target or to its ancilla
        total.insert(idx, vec![n; n]);
    }
    Ok(CircuitLedger {
        on_target: QueryLedger::from_branches(n, on_target),
        total: QueryLedger::from_branches(n, total),
    })
}

// ---- supersequences ----

/// True iff every ordering of `0..n` occurs as a subsequence of `seq`.
pub fn contains_all_permutations(seq: &[usize], n: usize) -> Result<bool> {
    let order = factorial(n)?;
    for x in 0..order {
        let p = label_to_permutation(x, n)?;
        let mut next = 0;
        for &s in seq {
            if next < n && s == p[next] {
                next += 1;
            }
        }
        if next < n {
            return Ok(false);
        }
    }
    Ok(n > 0)
}

/// `ceil((3n^2 - 7n + 19) / 3)`.
pub fn supersequence_upper_bound(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let n = n as u128;
    let num = 3 * n * n + 19 - 7 * n;
    usize::try_from(num.div_ceil(3)).map_err(|_| Error::BudgetExceeded("bound overflows".into()))
}

pub const SUPERSEQUENCE_MAX_N: usize = 4;

/// Exact shortest sequence containing every permutation of `0..n`, by
/// iterative deepening over per-permutation matching progress.
pub fn minimal_supersequence_length(n: usize) -> Result<(usize, GateSequence)> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if n > SUPERSEQUENCE_MAX_N {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive supersequence search is limited to n <= {SUPERSEQUENCE_MAX_N}"
        )));
    }
    let perms: Vec<Vec<usize>> = (0..factorial(n)?)
        .map(|x| label_to_permutation(x, n))
        .collect::<Result<_>>()?;
    let upper = supersequence_upper_bound(n)?;
    for length in n..=upper.max(n) {
        let mut search = Search {
            n,
            perms: &perms,
            seq: Vec::with_capacity(length),
        };
        // relabeling symbols maps solutions to solutions, so start with 0
        let progress = vec![0u8; perms.len()];
        if search.extend(&progress, length, 0) {
            return Ok((length, search.seq));
        }
    }
    Err(Error::VerificationFailed(format!("no supersequence within the bound {upper}")))
}

struct Search<'a> {
    n: usize,
    perms: &'a [Vec<usize>],
    seq: Vec<usize>,
}

impl Search<'_> {
    fn extend(&mut self, progress: &[u8], remaining: usize, symbol: usize) -> bool {
        let next: Vec<u8> = progress
            .iter()
            .zip(self.perms)
            .map(|(&p, perm)| if (p as usize) < self.n && perm[p as usize] == symbol { p + 1 } else { p })
            .collect();
        self.seq.push(symbol);
        let left = remaining - 1;
        let need = next.iter().map(|&p| self.n - p as usize).max().unwrap_or(0);
        if need == 0 {
            return true;
        }
        if need <= left {
            // a repeated symbol never advances any permutation
            for s in (0..self.n).filter(|&s| s != symbol) {
                if self.extend(&next, left, s) {
                    return true;
                }
            }
        }
        self.seq.pop();
        false
    }
}

//! The n-switch, the Fourier readout on its control register and query
//! accounting.
//!
//! Joint states are [`StateVector`]s with registers `[control (n!), target (d)]`.
//! The forward transform on the control maps `|x>` to
//! `(1/sqrt(n!)) sum_s omega^{-xs} |s>`, so a control carrying phases
//! `omega^{xy}` is sent to `|y>`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::algebra::{ComplexScalar, Operator, StateVector, Unitary, ZERO};
use crate::construct::{all_products, UnitarySet};
use crate::error::{Error, Result};
use crate::perm::label_to_permutation;

/// Probabilities below this magnitude count as rounding noise.
const NEGATIVE_SLACK: f64 = 1e-12;
const SUM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("empty distribution"));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -NEGATIVE_SLACK) {
            return Err(Error::invalid(format!("probability {p} is not valid")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::invalid(format!("probabilities sum to {total}")));
        }
        Ok(Self { probs })
    }

    pub fn delta(size: usize, at: usize) -> Result<Self> {
        if at >= size {
            return Err(Error::out_of_range("outcome", at, size));
        }
        let mut probs = vec![0.0; size];
        probs[at] = 1.0;
        Self::new(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Most likely outcome; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        self.probs
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best })
            .0
    }

    pub fn total_variation(&self, other: &OutcomeDistribution) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(0.5 * self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum::<f64>())
    }

    pub fn max_abs_diff(&self, other: &OutcomeDistribution) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// `k` independent outcomes drawn with a generator seeded by `seed`.
    pub fn sample(&self, k: usize, seed: u64) -> Result<Vec<usize>> {
        let weights: Vec<f64> = self.probs.iter().map(|p| p.max(0.0)).collect();
        let dist = WeightedIndex::new(&weights).map_err(|e| Error::invalid(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..k).map(|_| dist.sample(&mut rng)).collect())
    }

    /// Sum of the probabilities of every outcome except `y`.
    pub fn mass_off(&self, y: usize) -> f64 {
        self.probs.iter().enumerate().filter(|(s, _)| *s != y).map(|(_, p)| p).sum()
    }
}

fn check_joint(set: &UnitarySet, state: &StateVector) -> Result<()> {
    let order = set.order();
    match state.dims() {
        [c, t] if *c == order && *t == set.d() => Ok(()),
        [c, t] => Err(Error::invalid(format!(
            "joint state has registers ({c}, {t}), expected ({order}, {})",
            set.d()
        ))),
        dims => Err(Error::invalid(format!("joint state needs two registers, got {dims:?}"))),
    }
}

/// `|x>|psi> -> |x> Pi_x |psi>`, extended linearly.
pub fn n_switch_apply(set: &UnitarySet, state: &StateVector) -> Result<StateVector> {
    check_joint(set, state)?;
    let products = all_products(set)?;
    Ok(apply_products(&products, state))
}

fn apply_products(products: &[Unitary], state: &StateVector) -> StateVector {
    let d = state.dims()[1];
    let mut out = vec![ZERO; state.len()];
    for (x, p) in products.iter().enumerate() {
        let slice = &state.amps()[x * d..(x + 1) * d];
        if slice.iter().all(|a| *a == ZERO) {
            continue;
        }
        p.apply_slice(slice, &mut out[x * d..(x + 1) * d]);
    }
    StateVector::from_parts(state.dims().to_vec(), out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

/// Fourier transform over `Z_{n!}` on the control register (register 0).
pub fn qft_control(state: &StateVector, direction: Direction) -> Result<StateVector> {
    let dims = state.dims();
    if dims.is_empty() {
        return Err(Error::invalid("state has no control register"));
    }
    let size = dims[0];
    let stride = state.stride(0);
    let fft = plan(size, direction);
    let scale = 1.0 / (size as f64).sqrt();
    let mut out = vec![ZERO; state.len()];
    let mut buf = vec![ZERO; size];
    for t in 0..stride {
        for (x, b) in buf.iter_mut().enumerate() {
            *b = state.amps()[x * stride + t];
        }
        fft.process(&mut buf);
        for (s, b) in buf.iter().enumerate() {
            out[s * stride + t] = b * scale;
        }
    }
    Ok(StateVector::from_parts(dims.to_vec(), out))
}

fn plan(size: usize, direction: Direction) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    match direction {
        // rustfft's forward kernel is exp(-2 pi i x s / N)
        Direction::Forward => planner.plan_fft_forward(size),
        Direction::Inverse => planner.plan_fft_inverse(size),
    }
}

/// Control prepared in the uniform superposition, target in `psi`, switch,
/// forward transform, measure the control.
pub fn run_algorithm_pure(set: &UnitarySet, psi: &StateVector) -> Result<OutcomeDistribution> {
    if psi.len() != set.d() {
        return Err(Error::DimensionMismatch {
            expected: set.d(),
            found: psi.len(),
        });
    }
    let target = StateVector::new(vec![set.d()], psi.amps().to_vec())?;
    let control = StateVector::uniform(set.order())?;
    let joint = StateVector::product(&[&control, &target])?;
    let switched = n_switch_apply(set, &joint)?;
    let measured = qft_control(&switched, Direction::Forward)?;
    OutcomeDistribution::new(measured.marginal(0)?)
}

/// Outcome distribution for the target prepared in basis state `|j>`, using
/// only the nonzero entries of column `j` of each product.
pub fn run_algorithm_basis(set: &UnitarySet, j: usize) -> Result<OutcomeDistribution> {
    if j >= set.d() {
        return Err(Error::out_of_range("basis index", j, set.d()));
    }
    let products = all_products(set)?;
    let fft = plan(set.order(), Direction::Forward);
    OutcomeDistribution::new(basis_probs(&products, j, fft.as_ref()))
}

fn basis_probs(products: &[Unitary], j: usize, fft: &dyn Fft<f64>) -> Vec<f64> {
    let order = products.len();
    // row -> amplitudes of that target row across control branches
    let mut rows: BTreeMap<usize, Vec<ComplexScalar>> = BTreeMap::new();
    for (x, p) in products.iter().enumerate() {
        for (r, v) in p.column(j) {
            rows.entry(r).or_insert_with(|| vec![ZERO; order])[x] += v;
        }
    }
    let mut probs = vec![0.0; order];
    let norm = (order * order) as f64;
    for mut branch in rows.into_values() {
        fft.process(&mut branch);
        for (p, a) in probs.iter_mut().zip(&branch) {
            *p += a.norm_sqr() / norm;
        }
    }
    probs
}

/// Target in the maximally mixed state: the average of the basis-state runs.
pub fn run_algorithm_mixed(set: &UnitarySet) -> Result<OutcomeDistribution> {
    let products = all_products(set)?;
    let fft = plan(set.order(), Direction::Forward);
    let mut probs = vec![0.0; set.order()];
    for j in 0..set.d() {
        for (acc, p) in probs.iter_mut().zip(basis_probs(&products, j, fft.as_ref())) {
            *acc += p;
        }
    }
    let d = set.d() as f64;
    OutcomeDistribution::new(probs.into_iter().map(|p| p / d).collect())
}

/// Modal value of `k` draws from `dist`; ties go to the lowest outcome.
pub fn majority_vote_from_distribution(dist: &OutcomeDistribution, k: usize, seed: u64) -> Result<usize> {
    if k == 0 {
        return Err(Error::invalid("need at least one repetition"));
    }
    let mut counts = vec![0usize; dist.len()];
    for s in dist.sample(k, seed)? {
        counts[s] += 1;
    }
    let best = *counts.iter().max().expect("non-empty");
    Ok(counts.iter().position(|&c| c == best).expect("maximum exists"))
}

/// Runs the mixed-input protocol `k` times and returns the most frequent outcome.
pub fn majority_vote_run(set: &UnitarySet, k: usize, seed: u64) -> Result<usize> {
    if k == 0 {
        return Err(Error::invalid("need at least one repetition"));
    }
    majority_vote_from_distribution(&run_algorithm_mixed(set)?, k, seed)
}

/// Per-branch use counts of each unitary, as a flag register would record them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub n: usize,
    pub counts: BTreeMap<usize, Vec<usize>>,
    pub flags_factorize: bool,
    /// Queries per run when every branch agrees, otherwise `None`.
    pub total_queries: Option<usize>,
}

impl QueryLedger {
    pub fn from_branches(n: usize, counts: BTreeMap<usize, Vec<usize>>) -> Self {
        let mut vectors = counts.values();
        let first = vectors.next();
        let flags_factorize = vectors.all(|v| Some(v) == first);
        let total_queries = first.filter(|_| flags_factorize).map(|v| v.iter().sum());
        Self {
            n,
            counts,
            flags_factorize,
            total_queries,
        }
    }
}

/// Ledger for the switch driven by `control`, a state over the `n!` labels.
pub fn count_queries_switch(set: &UnitarySet, control: &StateVector) -> Result<QueryLedger> {
    let order = set.order();
    if control.len() != order {
        return Err(Error::DimensionMismatch {
            expected: order,
            found: control.len(),
        });
    }
    let mut counts = BTreeMap::new();
    for (x, a) in control.amps().iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let mut used = vec![0; set.n()];
        for u in label_to_permutation(x, set.n())? {
            used[u] += 1;
        }
        counts.insert(x, used);
    }
    Ok(QueryLedger::from_branches(set.n(), counts))
}

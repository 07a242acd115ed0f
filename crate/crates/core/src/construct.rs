//! Unitary sets with a prescribed permutation-phase property.
//!
//! A set `{U_0, ..., U_{n-1}}` has property `P_y` when every ordered product
//! satisfies `Pi_x = omega^{xy} Pi_0` with `omega = exp(2 pi i / n!)`. The
//! standard construction tensors `n - 1` generalized Pauli factors of
//! dimension `n!`:
//!
//! ```text
//! U_k     = (Z^{k!})^{⊗k} ⊗ X ⊗ 1^{⊗(n-k-2)}     k < n-1
//! U_{n-1} = (Z^{(n-1)!})^{⊗(n-1)}
//! ```
//!
//! with the clock `Z` built from the root `omega^{-y}`. Adjacent swaps then
//! satisfy `U_j U_k = omega^{y k!} U_k U_j` for `k > j`, and since the label
//! of a permutation counts, with weight `k!`, how often `U_k` moves right past
//! a lower-index unitary, the phases add up to `omega^{xy}`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    hs_norm_sq, root_of_unity, ComplexScalar, DenseMatrix, MonomialUnitary, Operator, Unitary, WeylFactor,
    WeylTensor, MONOMIAL_LIMIT, UNITARY_TOL, ZERO,
};
use crate::error::{Error, Result};
use crate::perm::{factorial, label_to_permutation};

/// Threshold on the Hilbert-Schmidt score for the noisy promise.
pub const PROMISE_THRESHOLD: f64 = 2.0 / 3.0;
pub const DEFAULT_DENSE_BUDGET: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Structured,
    Monomial,
    Dense,
}

impl std::str::FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structured" => Ok(Self::Structured),
            "monomial" => Ok(Self::Monomial),
            "dense" => Ok(Self::Dense),
            other => Err(Error::invalid(format!("unknown representation {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub representation: Representation,
    pub dense_budget: usize,
    pub monomial_budget: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            representation: Representation::Monomial,
            dense_budget: DEFAULT_DENSE_BUDGET,
            monomial_budget: MONOMIAL_LIMIT,
        }
    }
}

impl BuildOptions {
    pub fn with_representation(representation: Representation) -> Self {
        Self {
            representation,
            ..Self::default()
        }
    }
}

/// `n` unitaries of a common dimension, optionally tagged with the property
/// they were built to satisfy.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitarySet {
    n: usize,
    d: usize,
    unitaries: Vec<Unitary>,
    claimed_y: Option<usize>,
    exact: bool,
    omega_power: Option<i64>,
}

impl UnitarySet {
    pub fn new(unitaries: Vec<Unitary>, claimed_y: Option<usize>) -> Result<Self> {
        let n = unitaries.len();
        if n == 0 {
            return Err(Error::invalid("a unitary set needs at least one element"));
        }
        let order = factorial(n)?;
        let d = unitaries[0].dim();
        if let Some(u) = unitaries.iter().find(|u| u.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: u.dim(),
            });
        }
        if let Some(i) = unitaries.iter().position(|u| !u.is_unitary(UNITARY_TOL)) {
            return Err(Error::invalid(format!("U_{i} is not unitary within {UNITARY_TOL}")));
        }
        if let Some(y) = claimed_y {
            if y >= order {
                return Err(Error::out_of_range("claimed y", y, order));
            }
        }
        Ok(Self {
            n,
            d,
            unitaries,
            claimed_y,
            exact: false,
            omega_power: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `n!`, the number of orderings.
    pub fn order(&self) -> usize {
        factorial(self.n).expect("checked at construction")
    }

    pub fn unitaries(&self) -> &[Unitary] {
        &self.unitaries
    }

    pub fn claimed_y(&self) -> Option<usize> {
        self.claimed_y
    }

    /// True when the claimed property holds by construction.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Exponent `c` such that the clock matrices were built from `omega^c`.
    pub fn omega_power(&self) -> Option<i64> {
        self.omega_power
    }

    pub fn representation(&self) -> &'static str {
        let first = self.unitaries[0].representation();
        if self.unitaries.iter().all(|u| u.representation() == first) {
            first
        } else {
            "mixed"
        }
    }

    pub fn to_dense(&self, budget: usize) -> Result<UnitarySet> {
        if self.d > budget {
            return Err(Error::BudgetExceeded(format!("dense set of dimension {} (budget {budget})", self.d)));
        }
        let unitaries = self
            .unitaries
            .iter()
            .map(|u| u.to_dense().map(Unitary::Dense))
            .collect::<Result<_>>()?;
        Ok(Self { unitaries, ..self.clone() })
    }

    /// `V U_i V^†` for every element; preserves every permutation property.
    pub fn conjugated(&self, v: &DenseMatrix) -> Result<UnitarySet> {
        let v = Unitary::Dense(v.clone());
        let vd = v.adjoint();
        let unitaries = self
            .unitaries
            .iter()
            .map(|u| v.multiply(u)?.multiply(&vd))
            .collect::<Result<_>>()?;
        Ok(Self { unitaries, ..self.clone() })
    }

    fn with_provenance(mut self, claimed_y: Option<usize>, exact: bool, omega_power: Option<i64>) -> Self {
        self.claimed_y = claimed_y;
        self.exact = exact;
        self.omega_power = omega_power;
        self
    }
}

/// Standard construction with the clock built from `omega^root_power`.
///
/// With `root_power = c` the elements satisfy `U_k U_j = omega^{c k!} U_j U_k`
/// for `k > j` and the set has property `P_{-c mod n!}`.
pub fn build_standard_set_with_root(n: usize, root_power: i64, opts: BuildOptions) -> Result<UnitarySet> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let order = factorial(n)?;
    let c = root_power.rem_euclid(order as i64) as usize;
    let width = n - 1;
    let unitaries: Vec<WeylTensor> = (0..n)
        .map(|k| {
            let clock = WeylFactor::clock(c * factorial(k)? % order);
            let factors = (0..width)
                .map(|i| {
                    if i < k {
                        clock
                    } else if i == k {
                        WeylFactor::shift(1)
                    } else {
                        WeylFactor::IDENTITY
                    }
                })
                .collect();
            WeylTensor::new(order, 0, factors)
        })
        .collect::<Result<_>>()?;
    let d = unitaries[0]
        .checked_dim()
        .ok_or_else(|| Error::BudgetExceeded(format!("dimension {order}^{width}")))?;
    let unitaries = convert(unitaries, d, opts)?;
    let y = (order as i64 - c as i64).rem_euclid(order as i64) as usize;
    Ok(UnitarySet::new(unitaries, Some(y))?.with_provenance(Some(y), true, Some(c as i64)))
}

/// Standard construction of dimension `n!^{n-1}` with property `P_y`.
pub fn build_standard_set(n: usize, y: usize, opts: BuildOptions) -> Result<UnitarySet> {
    let order = factorial(n.max(1))?;
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if y >= order {
        return Err(Error::out_of_range("y", y, order));
    }
    build_standard_set_with_root(n, -(y as i64), opts)
}

fn convert(unitaries: Vec<WeylTensor>, d: usize, opts: BuildOptions) -> Result<Vec<Unitary>> {
    match opts.representation {
        Representation::Structured => Ok(unitaries.into_iter().map(Unitary::Structured).collect()),
        Representation::Monomial => {
            if d > opts.monomial_budget {
                return Err(Error::BudgetExceeded(format!(
                    "monomial set of dimension {d} (budget {}); use the structured representation",
                    opts.monomial_budget
                )));
            }
            unitaries.iter().map(|u| u.to_monomial().map(Unitary::Monomial)).collect()
        }
        Representation::Dense => {
            if d > opts.dense_budget {
                return Err(Error::BudgetExceeded(format!(
                    "dense set of dimension {d} (budget {}); use the structured representation",
                    opts.dense_budget
                )));
            }
            unitaries
                .iter()
                .map(|u| Ok(Unitary::Dense(u.to_monomial()?.to_dense())))
                .collect()
        }
    }
}

/// The six-dimensional `n = 3` set `{X, ZX, Z^2}`, clock built from `omega^{-y}`.
/// The property is re-verified before returning.
pub fn build_low_dim_set_n3(y: usize) -> Result<UnitarySet> {
    const ORDER: usize = 6;
    if y >= ORDER {
        return Err(Error::out_of_range("y", y, ORDER));
    }
    let c = (ORDER - y) % ORDER;
    let single = |phase: usize, shift: usize, clock: usize| {
        WeylTensor::new(ORDER, phase as i64, vec![WeylFactor { shift, clock }])
    };
    // Z^c X = omega^c X Z^c
    let elements = [single(0, 1, 0)?, single(c, 1, c)?, single(0, 0, 2 * c)?];
    let unitaries = elements
        .iter()
        .map(|w| w.to_monomial().map(Unitary::Monomial))
        .collect::<Result<Vec<_>>>()?;
    let set = UnitarySet::new(unitaries, Some(y))?.with_provenance(Some(y), true, Some(c as i64));
    let dev = property_deviation(&set, y)?;
    if dev > UNITARY_TOL {
        return Err(Error::VerificationFailed(format!(
            "six-dimensional set with y = {y} misses P_{y} by {dev:e}"
        )));
    }
    Ok(set)
}

/// `Pi_x = U_{sigma_x(n-1)} ... U_{sigma_x(1)} U_{sigma_x(0)}`.
pub fn product_for_permutation(set: &UnitarySet, x: usize) -> Result<Unitary> {
    let sigma = label_to_permutation(x, set.n)?;
    let mut acc = set.unitaries[sigma[0]].clone();
    for &u in &sigma[1..] {
        acc = set.unitaries[u].multiply(&acc)?;
    }
    Ok(acc)
}

pub fn all_products(set: &UnitarySet) -> Result<Vec<Unitary>> {
    (0..set.order()).map(|x| product_for_permutation(set, x)).collect()
}

/// `max_x |Pi_x - omega^{xy} Pi_0|_max`.
pub fn property_deviation(set: &UnitarySet, y: usize) -> Result<f64> {
    let order = set.order();
    let products = all_products(set)?;
    let base = &products[0];
    let mut worst: f64 = 0.0;
    for (x, p) in products.iter().enumerate() {
        let target = base.times_root(((x * y) % order) as i64, order)?;
        worst = worst.max(p.max_abs_diff(&target)?);
    }
    Ok(worst)
}

pub fn verify_property_exact(set: &UnitarySet, y: usize, tol: f64) -> Result<bool> {
    if tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    Ok(property_deviation(set, y)? <= tol)
}

/// `max_{k>j} |U_k U_j - omega^{c k!} U_j U_k|_max`.
pub fn pairwise_deviation(set: &UnitarySet, root_power: i64) -> Result<f64> {
    let order = set.order();
    let u = &set.unitaries;
    let mut worst: f64 = 0.0;
    for k in 1..set.n {
        let phase = (root_power * factorial(k)? as i64).rem_euclid(order as i64);
        for j in 0..k {
            let lhs = u[k].multiply(&u[j])?;
            let rhs = u[j].multiply(&u[k])?.times_root(phase, order)?;
            worst = worst.max(lhs.max_abs_diff(&rhs)?);
        }
    }
    Ok(worst)
}

/// Entrywise check of the pairwise relations on randomly chosen columns,
/// following each column through the two factors one at a time. Needs the
/// structured representation; nothing of dimension `d` is built.
pub fn sampled_pairwise_deviation(set: &UnitarySet, root_power: i64, columns: usize, seed: u64) -> Result<f64> {
    let order = set.order();
    let ws: Vec<&WeylTensor> = set
        .unitaries
        .iter()
        .map(|u| match u {
            Unitary::Structured(w) => Ok(w),
            _ => Err(Error::invalid("sampled check needs the structured representation")),
        })
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // (row, exponent over the tensor's own modulus) of `outer * inner` at column c
    let chain = |outer: &WeylTensor, inner: &WeylTensor, c: usize| {
        let (mid, e1) = inner.column_exponent(c);
        let (row, e2) = outer.column_exponent(mid);
        (row, (e1 + e2) % inner.modulus())
    };
    let mut worst: f64 = 0.0;
    for k in 1..set.n {
        for j in 0..k {
            let m = ws[k].modulus();
            let phase = (root_power * factorial(k)? as i64).rem_euclid(order as i64) * (m / order) as i64;
            for _ in 0..columns {
                let c = rng.random_range(0..set.d);
                let (rl, el) = chain(ws[k], ws[j], c);
                let (rr, er) = chain(ws[j], ws[k], c);
                let dev = if rl != rr {
                    1.0
                } else {
                    (root_of_unity(m, el as i64) - root_of_unity(m, er as i64 + phase)).norm()
                };
                worst = worst.max(dev);
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyScore {
    pub y: usize,
    pub score: f64,
}

/// `(1 / (n!^2 d)) |sum_x omega^{-xy} Pi_x|_HS^2`; equals 1 exactly when `P_y` holds.
pub fn property_score(set: &UnitarySet, y: usize) -> Result<PropertyScore> {
    let order = set.order();
    if y >= order {
        return Err(Error::out_of_range("y", y, order));
    }
    let products = all_products(set)?;
    Ok(PropertyScore {
        y,
        score: scores_from_products(&products, order, set.d, &[y])?[0],
    })
}

/// Scores for every `y in [0, n!)`; they sum to 1.
pub fn all_scores(set: &UnitarySet) -> Result<Vec<f64>> {
    let order = set.order();
    let products = all_products(set)?;
    let ys: Vec<usize> = (0..order).collect();
    scores_from_products(&products, order, set.d, &ys)
}

fn scores_from_products(products: &[Unitary], order: usize, d: usize, ys: &[usize]) -> Result<Vec<f64>> {
    let norm = (order * order) as f64 * d as f64;
    let weight = |x: usize, y: usize| root_of_unity(order, -((x * y % order) as i64));

    let structured: Option<Vec<&WeylTensor>> = products
        .iter()
        .map(|p| match p {
            Unitary::Structured(w) => Some(w),
            _ => None,
        })
        .collect();
    if let Some(ws) = structured {
        if ws.iter().all(|w| w.modulus() == ws[0].modulus() && w.factors().len() == ws[0].factors().len()) {
            // distinct Weyl operators are Hilbert-Schmidt orthogonal, each of norm^2 d
            return Ok(ys
                .iter()
                .map(|&y| {
                    let mut groups: HashMap<&[WeylFactor], ComplexScalar> = HashMap::new();
                    for (x, w) in ws.iter().enumerate() {
                        *groups.entry(w.factors()).or_insert(ZERO) +=
                            weight(x, y) * root_of_unity(w.modulus(), w.phase() as i64);
                    }
                    groups.values().map(|c| c.norm_sqr()).sum::<f64>() * d as f64 / norm
                })
                .collect());
        }
    }

    if products.iter().all(|p| !matches!(p, Unitary::Dense(_))) {
        let monos = products.iter().map(Unitary::to_monomial).collect::<Result<Vec<_>>>()?;
        let mut totals = vec![0.0; ys.len()];
        let mut column: Vec<(usize, ComplexScalar)> = Vec::with_capacity(order);
        for c in 0..d {
            for (t, &y) in ys.iter().enumerate() {
                column.clear();
                for (x, m) in monos.iter().enumerate() {
                    let v = weight(x, y) * m.phases()[c];
                    let row = m.perm()[c];
                    match column.iter_mut().find(|(r, _)| *r == row) {
                        Some((_, acc)) => *acc += v,
                        None => column.push((row, v)),
                    }
                }
                totals[t] += column.iter().map(|(_, v)| v.norm_sqr()).sum::<f64>();
            }
        }
        return Ok(totals.into_iter().map(|t| t / norm).collect());
    }

    let dense = products.iter().map(Unitary::to_dense).collect::<Result<Vec<_>>>()?;
    ys.iter()
        .map(|&y| {
            let mut acc = DenseMatrix::zeros(d);
            for (x, m) in dense.iter().enumerate() {
                acc = acc.add(&m.scaled(weight(x, y)))?;
            }
            Ok(hs_norm_sq(&acc) / norm)
        })
        .collect()
}

/// The unique `y` whose score reaches 2/3, if any.
pub fn infer_property(set: &UnitarySet) -> Result<Option<usize>> {
    let scores = all_scores(set)?;
    Ok(scores.iter().position(|&s| s >= PROMISE_THRESHOLD))
}

/// Replaces each `U_i` by `exp(i eps H_i) U_i` with `H_i` a random Hermitian
/// matrix of unit spectral norm drawn from a generator seeded with `seed`.
pub fn perturb_set(set: &UnitarySet, epsilon: f64, seed: u64) -> Result<UnitarySet> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::invalid(format!("epsilon = {epsilon} must be finite and non-negative")));
    }
    if epsilon == 0.0 {
        return Ok(set.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unitaries = set
        .unitaries
        .iter()
        .map(|u| {
            let h = random_hermitian(set.d, &mut rng);
            let e = hermitian_exp_i(&h, epsilon);
            Unitary::Dense(e).multiply(u)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UnitarySet::new(unitaries, set.claimed_y)?.with_provenance(set.claimed_y, false, set.omega_power))
}

fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<ComplexScalar> {
    let g = DenseMatrix::random_gaussian(d, rng).matrix().clone();
    let h = (&g + g.adjoint()) * ComplexScalar::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale > 0.0 {
        h / ComplexScalar::new(scale, 0.0)
    } else {
        h
    }
}

/// `exp(i t H)` for Hermitian `H`, through its eigendecomposition.
fn hermitian_exp_i(h: &DMatrix<ComplexScalar>, t: f64) -> DenseMatrix {
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let d = h.nrows();
    let phases = DMatrix::from_fn(d, d, |r, c| {
        if r == c {
            ComplexScalar::from_polar(1.0, t * eig.eigenvalues[r])
        } else {
            ZERO
        }
    });
    DenseMatrix::from_matrix(v * phases * v.adjoint())
}

/// Set of `n` independent random dense unitaries of dimension `d`.
pub fn random_dense_set(n: usize, d: usize, seed: u64) -> Result<UnitarySet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unitaries = (0..n)
        .map(|_| Unitary::Dense(DenseMatrix::random_unitary(d, &mut rng)))
        .collect();
    UnitarySet::new(unitaries, None)
}

/// True iff `omega^{yd} = 1`, i.e. `n!` divides `y d`; the determinant of
/// `Pi_x = omega^{xy} Pi_0` at `x = 1` forces this.
pub fn validate_dimension(n: usize, y: usize, d: usize) -> Result<bool> {
    let order = factorial(n)? as u128;
    Ok(((y as u128 % order) * (d as u128 % order)).is_multiple_of(order))
}

// ---- JSON fixtures ----

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetFile {
    pub n: usize,
    pub d: usize,
    pub representation: String,
    pub unitaries: Vec<UnitaryRecord>,
    pub claimed_y: Option<usize>,
    pub omega_power: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnitaryRecord {
    Structured {
        modulus: usize,
        phase: usize,
        factors: Vec<[usize; 2]>,
    },
    Monomial {
        perm: Vec<usize>,
        phases: Vec<[f64; 2]>,
    },
    Dense {
        rows: Vec<Vec<[f64; 2]>>,
    },
}

fn pair(c: ComplexScalar) -> [f64; 2] {
    [c.re, c.im]
}

fn unpair(p: &[f64; 2]) -> ComplexScalar {
    ComplexScalar::new(p[0], p[1])
}

impl SetFile {
    pub fn from_set(set: &UnitarySet) -> Self {
        let unitaries = set
            .unitaries
            .iter()
            .map(|u| match u {
                Unitary::Structured(w) => UnitaryRecord::Structured {
                    modulus: w.modulus(),
                    phase: w.phase(),
                    factors: w.factors().iter().map(|f| [f.shift, f.clock]).collect(),
                },
                Unitary::Monomial(m) => UnitaryRecord::Monomial {
                    perm: m.perm().to_vec(),
                    phases: m.phases().iter().copied().map(pair).collect(),
                },
                Unitary::Dense(m) => UnitaryRecord::Dense {
                    rows: m.rows().into_iter().map(|r| r.into_iter().map(pair).collect()).collect(),
                },
            })
            .collect();
        Self {
            n: set.n,
            d: set.d,
            representation: set.representation().to_string(),
            unitaries,
            claimed_y: set.claimed_y,
            omega_power: set.omega_power,
        }
    }

    pub fn into_set(self) -> Result<UnitarySet> {
        let unitaries = self
            .unitaries
            .iter()
            .map(|r| {
                Ok(match r {
                    UnitaryRecord::Structured { modulus, phase, factors } => Unitary::Structured(WeylTensor::new(
                        *modulus,
                        *phase as i64,
                        factors.iter().map(|f| WeylFactor { shift: f[0], clock: f[1] }).collect(),
                    )?),
                    UnitaryRecord::Monomial { perm, phases } => {
                        Unitary::Monomial(MonomialUnitary::new(perm.clone(), phases.iter().map(unpair).collect())?)
                    }
                    UnitaryRecord::Dense { rows } => Unitary::Dense(DenseMatrix::from_rows(
                        &rows.iter().map(|r| r.iter().map(unpair).collect()).collect::<Vec<_>>(),
                    )?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if unitaries.len() != self.n {
            return Err(Error::Format(format!("n = {} but {} unitaries listed", self.n, unitaries.len())));
        }
        let set = UnitarySet::new(unitaries, self.claimed_y)?;
        if set.d != self.d {
            return Err(Error::Format(format!("d = {} but unitaries have dimension {}", self.d, set.d)));
        }
        if set.representation() != self.representation && set.representation() != "mixed" {
            return Err(Error::Format(format!(
                "representation {:?} does not match the listed unitaries ({})",
                self.representation,
                set.representation()
            )));
        }
        let omega_power = self.omega_power;
        Ok(set.with_provenance(self.claimed_y, false, omega_power))
    }
}

pub fn set_to_json(set: &UnitarySet) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SetFile::from_set(set))?)
}

pub fn set_from_json(text: &str) -> Result<UnitarySet> {
    let file: SetFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.into_set()
}

//! The switch protocol with a general periodic phase, `Pi_x = omega^{g(x)} Pi_0`,
//! compared with what period finding would see.
//!
//! Since `Pi_0 |psi>` factors out, the target is one-dimensional here and the
//! control register carries all the information.

use serde::{Deserialize, Serialize};

use crate::algebra::{gcd, root_of_unity, StateVector};
use crate::error::{Error, Result};
use crate::perm::factorial;
use crate::switch::{qft_control, Direction, OutcomeDistribution};

const SUPPORT_TOL: f64 = 1e-9;

/// Exponents `g(x)` for `x in [0, n!)`, periodic with period `r | n!`
/// (as phases, i.e. modulo `n!`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseFunction {
    n: usize,
    values: Vec<i64>,
    period: usize,
}

impl PhaseFunction {
    pub fn new(n: usize, values: Vec<i64>, period: usize) -> Result<Self> {
        let order = factorial(n)?;
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if values.len() != order {
            return Err(Error::DimensionMismatch {
                expected: order,
                found: values.len(),
            });
        }
        if period == 0 || !order.is_multiple_of(period) {
            return Err(Error::invalid(format!("period {period} does not divide {order}")));
        }
        let m = order as i64;
        if let Some(x) = (0..order).find(|&x| (values[(x + period) % order] - values[x]).rem_euclid(m) != 0) {
            return Err(Error::invalid(format!("g is not {period}-periodic at x = {x}")));
        }
        Ok(Self { n, values, period })
    }

    /// `g(x) = x y`, the permutation-phase promise.
    pub fn linear(n: usize, y: usize) -> Result<Self> {
        let order = factorial(n)?;
        let period = order / gcd(order, y % order);
        Self::new(n, (0..order).map(|x| ((x * y) % order) as i64).collect(), period)
    }

    /// `g(x) = x mod r`.
    pub fn modular(n: usize, r: usize) -> Result<Self> {
        let order = factorial(n)?;
        if r == 0 {
            return Err(Error::invalid("period must be positive"));
        }
        Self::new(n, (0..order).map(|x| (x % r) as i64).collect(), r)
    }

    pub fn constant(n: usize, c: i64) -> Result<Self> {
        Self::new(n, vec![c; factorial(n)?], 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn period(&self) -> usize {
        self.period
    }
}

/// Uniform control, phases `omega^{g(x)}`, forward transform, measure.
pub fn run_with_phase_function(pf: &PhaseFunction) -> Result<OutcomeDistribution> {
    let order = pf.values.len();
    let scale = 1.0 / (order as f64).sqrt();
    let amps = pf.values.iter().map(|&g| root_of_unity(order, g) * scale).collect();
    let state = StateVector::new(vec![order, 1], amps)?;
    let out = OutcomeDistribution::new(qft_control(&state, Direction::Forward)?.marginal(0)?)?;
    let spacing = order / pf.period;
    if let Some(s) = (0..order).find(|s| s % spacing != 0 && out.probs()[*s] > SUPPORT_TOL) {
        return Err(Error::VerificationFailed(format!(
            "outcome {s} has weight {} off the multiples of {spacing}",
            out.probs()[s]
        )));
    }
    Ok(out)
}

/// `sin^2(pi r / N) / (r^2 sin^2(pi / N))`, with value 1 at `r = 1`.
pub fn analytic_p0(r: usize, order: usize) -> Result<f64> {
    if r == 0 || r > order {
        return Err(Error::out_of_range("period", r, order + 1));
    }
    if r == 1 {
        return Ok(1.0);
    }
    let pi = std::f64::consts::PI;
    let num = (pi * r as f64 / order as f64).sin().powi(2);
    let den = (r * r) as f64 * (pi / order as f64).sin().powi(2);
    Ok(num / den)
}

/// Weight `1/r` on each multiple of `N/r`.
pub fn uniform_period_distribution(r: usize, order: usize) -> Result<OutcomeDistribution> {
    if r == 0 || !order.is_multiple_of(r) {
        return Err(Error::invalid(format!("period {r} does not divide {order}")));
    }
    let spacing = order / r;
    OutcomeDistribution::new(
        (0..order)
            .map(|s| if s % spacing == 0 { 1.0 / r as f64 } else { 0.0 })
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodComparison {
    pub n: usize,
    pub r: usize,
    pub simulated: Vec<f64>,
    pub simulated_p0: f64,
    pub analytic_p0: f64,
    pub uniform: Vec<f64>,
    pub total_variation: f64,
}

/// Runs `g(x) = x mod r` and sets it against the formula and the uniform
/// distribution over multiples of `n!/r`.
pub fn compare_period(n: usize, r: usize) -> Result<PeriodComparison> {
    let order = factorial(n)?;
    let dist = run_with_phase_function(&PhaseFunction::modular(n, r)?)?;
    let uniform = uniform_period_distribution(r, order)?;
    Ok(PeriodComparison {
        n,
        r,
        simulated_p0: dist.probs()[0],
        analytic_p0: analytic_p0(r, order)?,
        total_variation: dist.total_variation(&uniform)?,
        simulated: dist.probs().to_vec(),
        uniform: uniform.probs().to_vec(),
    })
}

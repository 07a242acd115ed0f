//! The n-router as a network of controlled neighbouring mode swaps, and the
//! switch realized by routing a system through `n` modes.
//!
//! The control bit `b_{k,j}` (`1 <= j <= k < n`) drives a swap of modes
//! `k-j` and `k-j+1`. Listed in increasing `k`, then increasing `j`, the swaps
//! compose to `sigma_x^{-1}` on mode labels; the router applies them in the
//! opposite order so that it sends mode `j` to `sigma_x(j)`, and its inverse is
//! the listed order.
//!
//! Moded states have registers `[control (n!), mode (n), target (d)]`.

use serde::{Deserialize, Serialize};

use crate::algebra::{Operator, StateVector, ZERO};
use crate::construct::UnitarySet;
use crate::error::{Error, Result};
use crate::perm::{factorial, PermutationLabel, RouterBits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlledSwap {
    /// `(k, j)` of the controlling bit.
    pub control: [usize; 2],
    pub modes: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouterNetwork {
    pub n: usize,
    pub swaps: Vec<ControlledSwap>,
}

pub fn build_router_network(n: usize) -> Result<RouterNetwork> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let swaps = (1..n)
        .flat_map(|k| {
            (1..=k).map(move |j| ControlledSwap {
                control: [k, j],
                modes: [k - j, k - j + 1],
            })
        })
        .collect();
    Ok(RouterNetwork { n, swaps })
}

impl RouterNetwork {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.swaps)?)
    }

    fn fires(&self, bits: &RouterBits, swap: &ControlledSwap) -> bool {
        bits.bit(swap.control[0], swap.control[1])
    }

    fn bits(&self, x: usize) -> Result<RouterBits> {
        Ok(PermutationLabel::new(x, self.n)?.bits())
    }

    fn check(&self, x: usize, j: usize) -> Result<()> {
        let order = factorial(self.n)?;
        if x >= order {
            return Err(Error::out_of_range("label", x, order));
        }
        if j >= self.n {
            return Err(Error::out_of_range("mode", j, self.n));
        }
        Ok(())
    }

    fn follow<'a>(&self, bits: &RouterBits, swaps: impl Iterator<Item = &'a ControlledSwap>, mut j: usize) -> usize {
        for s in swaps.filter(|s| self.fires(bits, s)) {
            if j == s.modes[0] {
                j = s.modes[1];
            } else if j == s.modes[1] {
                j = s.modes[0];
            }
        }
        j
    }
}

/// Output mode of a system entering mode `j` under control `x`: `sigma_x(j)`.
pub fn route(network: &RouterNetwork, x: usize, j: usize) -> Result<usize> {
    network.check(x, j)?;
    let bits = network.bits(x)?;
    Ok(network.follow(&bits, network.swaps.iter().rev(), j))
}

/// Output mode under the inverse router: `sigma_x^{-1}(j)`.
pub fn route_inverse(network: &RouterNetwork, x: usize, j: usize) -> Result<usize> {
    network.check(x, j)?;
    let bits = network.bits(x)?;
    Ok(network.follow(&bits, network.swaps.iter(), j))
}

fn check_moded(n: usize, state: &StateVector) -> Result<(usize, usize)> {
    let order = factorial(n)?;
    match state.dims() {
        [c, m, t] if *c == order && *m == n => Ok((order, *t)),
        dims => Err(Error::invalid(format!(
            "moded state registers {dims:?} do not match control {order}, mode {n}"
        ))),
    }
}

/// Applies the controlled swaps coherently, one at a time.
pub fn apply_router(network: &RouterNetwork, state: &StateVector, inverse: bool) -> Result<StateVector> {
    let n = network.n;
    let (order, d) = check_moded(n, state)?;
    let mut amps = state.amps().to_vec();
    let bits: Vec<RouterBits> = (0..order).map(|x| network.bits(x)).collect::<Result<_>>()?;
    let swaps: Vec<&ControlledSwap> = if inverse {
        network.swaps.iter().collect()
    } else {
        network.swaps.iter().rev().collect()
    };
    for s in swaps {
        for (x, b) in bits.iter().enumerate() {
            if !network.fires(b, s) {
                continue;
            }
            let base = x * n * d;
            let (lo, hi) = (base + s.modes[0] * d, base + s.modes[1] * d);
            for t in 0..d {
                amps.swap(lo + t, hi + t);
            }
        }
    }
    Ok(StateVector::from_parts(state.dims().to_vec(), amps))
}

/// `U_m` on the target of every branch whose system sits in mode `m`.
fn apply_mode_unitaries(set: &UnitarySet, state: &StateVector) -> StateVector {
    let n = set.n();
    let d = set.d();
    let mut out = vec![ZERO; state.len()];
    for (block, (input, output)) in state.amps().chunks(d).zip(out.chunks_mut(d)).enumerate() {
        set.unitaries()[block % n].apply_slice(input, output);
    }
    StateVector::from_parts(state.dims().to_vec(), out)
}

/// Sends mode `m` to `m + 1 (mod n)`.
fn increment_mode(n: usize, d: usize, state: &StateVector) -> StateVector {
    let mut out = vec![ZERO; state.len()];
    for (block, chunk) in state.amps().chunks(d).enumerate() {
        let (x, m) = (block / n, block % n);
        let target = (x * n + (m + 1) % n) * d;
        out[target..target + d].copy_from_slice(chunk);
    }
    StateVector::from_parts(state.dims().to_vec(), out)
}

/// Injects the target in mode 0 and runs `n` rounds of router, mode-wise
/// unitaries and inverse router, moving to the next mode between rounds.
/// Returns the `[control, target]` state read out of mode `n - 1`.
pub fn simulate_switch_via_routers(set: &UnitarySet, control: &StateVector, psi: &StateVector) -> Result<StateVector> {
    let n = set.n();
    let d = set.d();
    let order = set.order();
    if control.len() != order {
        return Err(Error::DimensionMismatch {
            expected: order,
            found: control.len(),
        });
    }
    if psi.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: psi.len() });
    }
    let network = build_router_network(n)?;
    let mut state = StateVector::product(&[
        &StateVector::new(vec![order], control.amps().to_vec())?,
        &StateVector::basis(vec![n], 0)?,
        &StateVector::new(vec![d], psi.amps().to_vec())?,
    ])?;
    for round in 0..n {
        state = apply_router(&network, &state, false)?;
        state = apply_mode_unitaries(set, &state);
        state = apply_router(&network, &state, true)?;
        if round + 1 < n {
            state = increment_mode(n, d, &state);
        }
    }
    let readout = state.marginal(1)?;
    let stray: f64 = readout[..n - 1].iter().sum();
    if stray > 1e-9 {
        return Err(Error::VerificationFailed(format!(
            "weight {stray:e} left outside the readout mode"
        )));
    }
    let amps = (0..order)
        .flat_map(|x| {
            let start = (x * n + n - 1) * d;
            state.amps()[start..start + d].to_vec()
        })
        .collect();
    StateVector::new(vec![order, d], amps)
}

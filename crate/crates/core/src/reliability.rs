//! Closed-form and root-solved limits on entangleable qubit counts under
//! decoherence and imperfect single-qubit gates.
//!
//! All times are in seconds. The cube-dilation protocol entangles `lambda^3`
//! more qubits per step, so `N` qubits take `log_lambda N^(1/3)` steps of
//! `dt` each; step counts are evaluated either continuously (the geometric
//! sum in closed form, matching the algebra behind the limits) or discretely
//! (ceiling, for wall-clock questions).

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReliabilityParams {
    /// Per-qubit failure rate, 1/s.
    pub gamma: f64,
    /// Time per expansion step, s.
    pub dt: f64,
    /// Dilation factor per step (> 1).
    pub lam: f64,
    /// Required overall success probability, in (0, 1).
    pub eps: f64,
    /// Average single-qubit gates per qubit per step.
    pub c: f64,
    /// Single-qubit gate success probability, in (0, 1].
    pub p_gate: f64,
}

impl ReliabilityParams {
    pub fn new(gamma: f64, dt: f64, lam: f64, eps: f64, c: f64, p_gate: f64) -> Result<Self> {
        let check_pos = |name: &str, v: f64| -> Result<()> {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be positive and finite"
                )));
            }
            Ok(())
        };
        check_pos("gamma", gamma)?;
        check_pos("dt", dt)?;
        check_pos("c", c)?;
        if !(lam > 1.0) || !lam.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda = {lam} must exceed 1"
            )));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {eps} must lie in (0, 1)"
            )));
        }
        if !(p_gate > 0.0 && p_gate <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "gate success probability {p_gate} must lie in (0, 1]"
            )));
        }
        Ok(Self {
            gamma,
            dt,
            lam,
            eps,
            c,
            p_gate,
        })
    }

    /// The worked headline parameters: 5 ns steps, epsilon = 1/2, a 340 us
    /// excited-state lifetime, lambda = 2, 4 gates per qubit per step, and
    /// single-qubit gate fidelity 1 - 1e-4.
    pub fn paper_defaults() -> Self {
        Self {
            gamma: 1.0 / 340e-6,
            dt: 5e-9,
            lam: 2.0,
            eps: 0.5,
            c: 4.0,
            p_gate: 1.0 - 1e-4,
        }
    }

    /// `ln(1/eps) / (gamma dt)`, the exposure budget every limit is built on.
    fn budget(&self) -> f64 {
        (1.0 / self.eps).ln() / (self.gamma * self.dt)
    }

    fn lam3(&self) -> f64 {
        self.lam.powi(3)
    }
}

/// How fractional step counts are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepCount {
    /// Geometric sum in closed form: `lam^3 (N - 1) / (lam^3 - 1)`.
    Continuous,
    /// Literal power sum over `ceil(log_lam N^(1/3))` steps.
    Discrete,
}

/// Number of expansion steps to reach `n` qubits, before rounding.
pub fn steps_to_reach(params: &ReliabilityParams, n: f64) -> f64 {
    n.ln() / (3.0 * params.lam.ln())
}

fn discrete_steps(params: &ReliabilityParams, n: f64) -> u32 {
    let raw = steps_to_reach(params, n);
    // Guard exact powers of lambda^3 against representation noise.
    if (raw - raw.round()).abs() < 1e-9 {
        raw.round().max(0.0) as u32
    } else {
        raw.ceil().max(0.0) as u32
    }
}

/// Probability that no qubit fails during the whole construction of an
/// `n`-qubit entangled state: `exp(-gamma dt sum_i lam^(3i))`.
pub fn p_success(params: &ReliabilityParams, n: f64, steps: StepCount) -> f64 {
    let exposure = match steps {
        StepCount::Continuous => params.lam3() * (n - 1.0) / (params.lam3() - 1.0),
        StepCount::Discrete => {
            let n_t = discrete_steps(params, n);
            (1..=n_t).map(|i| params.lam3().powi(i as i32)).sum()
        }
    };
    (-params.gamma * params.dt * exposure).exp()
}

/// Decoherence limit for the cube-dilation protocol:
/// `N_lr = 1 + ln(1/eps)/(gamma dt) * (lam^3 - 1)/lam^3`.
pub fn max_qubits_longrange(params: &ReliabilityParams) -> f64 {
    1.0 + params.budget() * (params.lam3() - 1.0) / params.lam3()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NnMode {
    /// Drop the sub-leading terms of the step sum: `(4 ln(1/eps)/(gamma dt))^(3/4)`.
    Bound,
    /// Root-solve `(N^(4/3) + 2N + N^(2/3))/4 = ln(1/eps)/(gamma dt)`.
    Exact,
}

/// Decoherence limit for the nearest-neighbor protocol that grows the cube
/// edge by one site per step.
pub fn max_qubits_nn(params: &ReliabilityParams, mode: NnMode) -> f64 {
    let budget = params.budget();
    match mode {
        NnMode::Bound => (4.0 * budget).powf(0.75),
        NnMode::Exact => {
            let f = |n: f64| 0.25 * (n.powf(4.0 / 3.0) + 2.0 * n + n.powf(2.0 / 3.0)) - budget;
            let mut lo = 1.0f64;
            let mut hi = (4.0 * budget).powf(0.75).max(2.0);
            while f(hi) < 0.0 {
                hi *= 2.0;
            }
            // Bisection to 1e-10 relative.
            while (hi - lo) / hi > 1e-12 {
                let mid = 0.5 * (lo + hi);
                if f(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
    }
}

/// Ratio of the long-range to nearest-neighbor qubit limits. In bound mode
/// (closed form, `lambda = 2` only): `7/(16 sqrt(2)) * (ln(1/eps)/(gamma dt))^(1/4)`.
pub fn advantage_ratio(params: &ReliabilityParams, mode: NnMode) -> Result<f64> {
    match mode {
        NnMode::Bound => {
            if params.lam != 2.0 {
                return Err(Error::InvalidParameter(
                    "closed form valid only for lambda = 2".into(),
                ));
            }
            Ok(7.0 / (16.0 * 2f64.sqrt()) * params.budget().powf(0.25))
        }
        NnMode::Exact => {
            Ok(max_qubits_longrange(params) / max_qubits_nn(params, NnMode::Exact))
        }
    }
}

/// Entanglement ceiling set by imperfect single-qubit gates:
/// `N = 1 + (ln eps / ln P) (lam^3 - 1)/(c lam^3)`. Infinite for `P = 1`.
pub fn max_qubits_gate_fidelity(params: &ReliabilityParams) -> f64 {
    if params.p_gate == 1.0 {
        return f64::INFINITY;
    }
    1.0 + params.eps.ln() / params.p_gate.ln() * (params.lam3() - 1.0)
        / (params.c * params.lam3())
}

/// Wall-clock protocol time for `n` qubits: `dt * ceil(log_lam n^(1/3))`.
pub fn protocol_wall_time(params: &ReliabilityParams, n: f64) -> f64 {
    params.dt * discrete_steps(params, n) as f64
}

/// Fractional-step wall time `dt * log_lam n^(1/3)`.
pub fn protocol_wall_time_continuous(params: &ReliabilityParams, n: f64) -> f64 {
    params.dt * steps_to_reach(params, n)
}

/// Lifetime of the finished `n`-qubit GHZ state: `1 / (n gamma)`.
pub fn ghz_lifetime(params: &ReliabilityParams, n: f64) -> f64 {
    1.0 / (n * params.gamma)
}

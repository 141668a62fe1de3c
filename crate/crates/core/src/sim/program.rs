//! Timed pulse programs: the executable form of a protocol.
//!
//! A program is an ordered list of steps. Evolution steps carry a set of
//! simultaneous two-body terms (controlled-X or ZZ) and a non-negative
//! duration; interaction signs live in the term coefficients, so inverse
//! evolution is expressed by negating strengths, never durations. Local steps
//! apply single-qubit gates instantaneously.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sim::state::PureState;

/// Norm drift allowed after a single evolution step.
pub const STEP_NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalGate {
    X,
    Hadamard,
    RotZ(f64),
}

impl LocalGate {
    fn inverse(self) -> LocalGate {
        match self {
            LocalGate::X => LocalGate::X,
            LocalGate::Hadamard => LocalGate::Hadamard,
            LocalGate::RotZ(theta) => LocalGate::RotZ(-theta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PulseStep {
    /// Simultaneous controlled-X terms `(control, target, strength)`.
    ControlledX {
        pairs: Vec<(usize, usize, f64)>,
        duration: f64,
    },
    /// Simultaneous ZZ terms `(i, j, coefficient)`.
    Zz {
        pairs: Vec<(usize, usize, f64)>,
        duration: f64,
    },
    /// Instantaneous single-qubit gates.
    Locals { gates: Vec<(usize, LocalGate)> },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PulseProgram {
    pub steps: Vec<PulseStep>,
}

impl PulseProgram {
    pub fn new(steps: Vec<PulseStep>) -> Self {
        Self { steps }
    }

    /// Structural checks: indices in range, durations non-negative, and the
    /// control/target disjointness condition on every controlled-X step.
    pub fn validate(&self, n: usize) -> Result<()> {
        for step in &self.steps {
            match step {
                PulseStep::ControlledX { pairs, duration } => {
                    check_duration(*duration)?;
                    let mut controls = vec![false; n];
                    let mut targets = vec![false; n];
                    for &(c, t, _) in pairs {
                        if c >= n || t >= n {
                            return Err(Error::InvalidParameter(format!(
                                "pair ({c}, {t}) out of range for {n} qubits"
                            )));
                        }
                        if c == t {
                            return Err(Error::NonCommutingTerms { qubit: c });
                        }
                        controls[c] = true;
                        targets[t] = true;
                    }
                    if let Some(qubit) = (0..n).find(|&q| controls[q] && targets[q]) {
                        return Err(Error::NonCommutingTerms { qubit });
                    }
                }
                PulseStep::Zz { pairs, duration } => {
                    check_duration(*duration)?;
                    for &(a, b, _) in pairs {
                        if a >= n || b >= n {
                            return Err(Error::InvalidParameter(format!(
                                "pair ({a}, {b}) out of range for {n} qubits"
                            )));
                        }
                        if a == b {
                            return Err(Error::SelfCoupling);
                        }
                    }
                }
                PulseStep::Locals { gates } => {
                    for &(q, _) in gates {
                        if q >= n {
                            return Err(Error::InvalidParameter(format!(
                                "gate qubit {q} out of range for {n} qubits"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Total evolution time (local gates are instantaneous).
    pub fn duration(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| match s {
                PulseStep::ControlledX { duration, .. } | PulseStep::Zz { duration, .. } => {
                    *duration
                }
                PulseStep::Locals { .. } => 0.0,
            })
            .sum()
    }

    /// Exact inverse: steps reversed, evolution strengths negated, local
    /// gates inverted. Durations stay non-negative.
    pub fn inverted(&self) -> PulseProgram {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|step| match step {
                PulseStep::ControlledX { pairs, duration } => PulseStep::ControlledX {
                    pairs: pairs.iter().map(|&(c, t, h)| (c, t, -h)).collect(),
                    duration: *duration,
                },
                PulseStep::Zz { pairs, duration } => PulseStep::Zz {
                    pairs: pairs.iter().map(|&(a, b, v)| (a, b, -v)).collect(),
                    duration: *duration,
                },
                PulseStep::Locals { gates } => PulseStep::Locals {
                    gates: gates.iter().rev().map(|&(q, g)| (q, g.inverse())).collect(),
                },
            })
            .collect();
        PulseProgram { steps }
    }

    /// Relabel qubits: `map[old] = new`.
    pub fn remapped(&self, map: &[usize]) -> PulseProgram {
        let steps = self
            .steps
            .iter()
            .map(|step| match step {
                PulseStep::ControlledX { pairs, duration } => PulseStep::ControlledX {
                    pairs: pairs.iter().map(|&(c, t, h)| (map[c], map[t], h)).collect(),
                    duration: *duration,
                },
                PulseStep::Zz { pairs, duration } => PulseStep::Zz {
                    pairs: pairs.iter().map(|&(a, b, v)| (map[a], map[b], v)).collect(),
                    duration: *duration,
                },
                PulseStep::Locals { gates } => PulseStep::Locals {
                    gates: gates.iter().map(|&(q, g)| (map[q], g)).collect(),
                },
            })
            .collect();
        PulseProgram { steps }
    }

    pub fn extend(&mut self, other: PulseProgram) {
        self.steps.extend(other.steps);
    }

    /// Execute in place. Norm is re-checked after every evolution step.
    pub fn execute(&self, state: &mut PureState) -> Result<()> {
        self.validate(state.n())?;
        for step in &self.steps {
            match step {
                PulseStep::ControlledX { pairs, duration } => {
                    state.controlled_x_step(pairs, *duration)?;
                    check_norm(state)?;
                }
                PulseStep::Zz { pairs, duration } => {
                    state.zz_step(pairs, *duration)?;
                    check_norm(state)?;
                }
                PulseStep::Locals { gates } => {
                    for &(q, gate) in gates {
                        match gate {
                            LocalGate::X => state.apply_x(q),
                            LocalGate::Hadamard => state.apply_hadamard(q),
                            LocalGate::RotZ(theta) => state.apply_rot_z(q, theta),
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_duration(duration: f64) -> Result<()> {
    if !duration.is_finite() || duration < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "step duration {duration} must be finite and non-negative"
        )));
    }
    Ok(())
}

fn check_norm(state: &PureState) -> Result<()> {
    let drift = (state.norm() - 1.0).abs();
    if drift > STEP_NORM_TOLERANCE {
        return Err(Error::Internal(format!(
            "norm drifted by {drift:e} after an evolution step"
        )));
    }
    Ok(())
}

/// Two-qubit program (qubit 0 control, qubit 1 target) realizing CNOT up to a
/// global phase out of a ZZ interaction of coefficient `v`: Hadamards on the
/// target around a controlled-phase built from ZZ evolution for `pi/(4|v|)`
/// plus `Rz(-sign(v) * pi/2)` on both qubits. Works for either sign of `v`.
pub fn cnot_from_zz(v: f64) -> Result<PulseProgram> {
    if v == 0.0 || !v.is_finite() {
        return Err(Error::ZeroInteraction);
    }
    let theta = -v.signum() * FRAC_PI_2;
    Ok(PulseProgram::new(vec![
        PulseStep::Locals {
            gates: vec![(1, LocalGate::Hadamard)],
        },
        PulseStep::Zz {
            pairs: vec![(0, 1, v)],
            duration: PI / (4.0 * v.abs()),
        },
        PulseStep::Locals {
            gates: vec![(0, LocalGate::RotZ(theta)), (1, LocalGate::RotZ(theta))],
        },
        PulseStep::Locals {
            gates: vec![(1, LocalGate::Hadamard)],
        },
    ]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EchoRole {
    Control,
    Target,
}

/// Echo sequence isolating control-target couplings from an always-on ZZ
/// interaction: `+H` for `T`, `-H` for `T/2`, a pi-pulse on all targets,
/// `-H` for `T/2`, and a second pi-pulse restoring the frame. The composite
/// equals `exp(-i sum_{(c,t)} V_ct Z_c Z_t T)`: control-control and
/// target-target couplings cancel, cross couplings accumulate the full `T`.
pub fn echo_program(
    roles: &[Option<EchoRole>],
    t: f64,
    couplings: &[(usize, usize, f64)],
) -> Result<PulseProgram> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "echo time {t} must be positive and finite"
        )));
    }
    if let Some(q) = roles.iter().position(|r| r.is_none()) {
        return Err(Error::UnlabeledQubit(q));
    }
    let n = roles.len();
    for &(a, b, _) in couplings {
        if a >= n || b >= n {
            return Err(Error::InvalidParameter(format!(
                "coupling pair ({a}, {b}) out of range for {n} qubits"
            )));
        }
        if a == b {
            return Err(Error::SelfCoupling);
        }
    }

    let forward: Vec<(usize, usize, f64)> = couplings.to_vec();
    let reversed: Vec<(usize, usize, f64)> =
        couplings.iter().map(|&(a, b, v)| (a, b, -v)).collect();
    let target_pulse = PulseStep::Locals {
        gates: roles
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == Some(EchoRole::Target))
            .map(|(q, _)| (q, LocalGate::X))
            .collect(),
    };

    Ok(PulseProgram::new(vec![
        PulseStep::Zz {
            pairs: forward,
            duration: t,
        },
        PulseStep::Zz {
            pairs: reversed.clone(),
            duration: t / 2.0,
        },
        target_pulse.clone(),
        PulseStep::Zz {
            pairs: reversed,
            duration: t / 2.0,
        },
        target_pulse,
    ]))
}

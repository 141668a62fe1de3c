//! MERA construction-time bounds and a concrete 1D binary schedule builder
//! that lowers long-range two-qubit gates into state-transfer primitives,
//! with small-instance state-vector replay.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::lattice::LatticeSpec;
use crate::schedule::solve_hypercube_times;
use crate::sim::{transfer_program, ProtocolMode, PureState};

/// Scaling regime of the construction-time bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeraRegime {
    /// `alpha < d`: bounded by `log_phi L`.
    Log,
    /// `alpha = d`: bounded by `(log_phi L)^2`.
    LogSquared,
    /// `d < alpha <= d + 1`: bounded by `L^(alpha - d)`.
    Polynomial,
    /// `alpha > d + 1`: bounded by `L`.
    Linear,
}

impl std::fmt::Display for MeraRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeraRegime::Log => write!(f, "alpha<d: log"),
            MeraRegime::LogSquared => write!(f, "alpha=d: log^2"),
            MeraRegime::Polynomial => write!(f, "d<alpha<=d+1: L^(alpha-d)"),
            MeraRegime::Linear => write!(f, "alpha>d+1: L"),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeraLayerTiming {
    pub tau: usize,
    /// `phi^tau`.
    pub length_scale: f64,
    /// This layer's term in the bound sum.
    pub time: f64,
}

/// Construction-time bound for an `L^d` MERA with branching factor `phi`.
#[derive(Debug, Clone, Serialize)]
pub struct MeraPlan {
    pub l: usize,
    pub phi: usize,
    pub d: usize,
    pub alpha: f64,
    pub layers: Vec<MeraLayerTiming>,
    pub total_time: f64,
    pub regime: MeraRegime,
}

fn layer_count(l: usize, phi: usize) -> Result<usize> {
    if phi < 2 {
        return Err(Error::InvalidParameter(format!(
            "branching factor {phi} must be at least 2"
        )));
    }
    if l < phi {
        return Err(Error::NotPowerOfPhi { l, phi });
    }
    let mut v = l;
    let mut s = 0;
    while v > 1 {
        if !v.is_multiple_of(phi) {
            return Err(Error::NotPowerOfPhi { l, phi });
        }
        v /= phi;
        s += 1;
    }
    Ok(s)
}

/// Evaluate the layer-sum bound on the MERA construction time.
///
/// Per-layer transfer over `ell_tau = phi^tau` costs `ell_tau^beta` with
/// `beta = min(alpha - d, 1)` for `alpha > d` and `0` for `alpha < d`; at
/// `alpha = d` the transfer cost at scale `ell_tau` is itself logarithmic,
/// so layer `tau` contributes `tau + 1` and the sum is of order
/// `(log_phi L)^2`. `alpha == d` is detected by exact comparison.
pub fn mera_time_bound(l: usize, phi: usize, alpha: f64, d: usize) -> Result<MeraPlan> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidParameter(format!(
            "dimension {d} unsupported (need 1 <= d <= 3)"
        )));
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "exponent {alpha} must be finite and non-negative"
        )));
    }
    let s = layer_count(l, phi)?;
    let df = d as f64;
    let regime = if alpha < df {
        MeraRegime::Log
    } else if alpha == df {
        MeraRegime::LogSquared
    } else if alpha <= df + 1.0 {
        MeraRegime::Polynomial
    } else {
        MeraRegime::Linear
    };

    let mut layers = Vec::with_capacity(s);
    let mut total = KahanSum::new();
    for tau in 0..s {
        let length_scale = (phi as f64).powi(tau as i32);
        let time = if alpha < df {
            1.0
        } else if alpha == df {
            (tau + 1) as f64
        } else {
            length_scale.powf((alpha - df).min(1.0))
        };
        total.add(time);
        layers.push(MeraLayerTiming {
            tau,
            length_scale,
            time,
        });
    }

    Ok(MeraPlan {
        l,
        phi,
        d,
        alpha,
        layers,
        total_time: total.value(),
        regime,
    })
}

/// The raw geometric layer sum `sum_tau ell_tau^beta` with
/// `beta = clamp(alpha - d, 0, 1)`, continuous in `alpha` (no special case
/// at `alpha = d`). Regime labels jump there; this sum does not.
pub fn mera_transfer_sum(l: usize, phi: usize, alpha: f64, d: usize) -> Result<f64> {
    let s = layer_count(l, phi)?;
    let beta = (alpha - d as f64).clamp(0.0, 1.0);
    let mut total = KahanSum::new();
    for tau in 0..s {
        total.add((phi as f64).powi(tau as i32).powf(beta));
    }
    Ok(total.value())
}

/// One step of a lowered long-range gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum LoweredStep {
    TransferOut { from: usize, to: usize },
    Gate { a: usize, b: usize },
    TransferBack { from: usize, to: usize },
}

/// A two-qubit gate between sites `a < b`, lowered onto transfer primitives
/// when the operands are not adjacent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoweredGate {
    pub a: usize,
    pub b: usize,
    /// Chain sites `a ..= b-1` used by the round-trip transfer; empty for
    /// adjacent operands.
    pub route: Vec<usize>,
    pub steps: Vec<LoweredStep>,
}

impl LoweredGate {
    fn new(a: usize, b: usize) -> Self {
        if b - a == 1 {
            LoweredGate {
                a,
                b,
                route: Vec::new(),
                steps: vec![LoweredStep::Gate { a, b }],
            }
        } else {
            LoweredGate {
                a,
                b,
                route: (a..b).collect(),
                steps: vec![
                    LoweredStep::TransferOut { from: a, to: b - 1 },
                    LoweredStep::Gate { a: b - 1, b },
                    LoweredStep::TransferBack { from: b - 1, to: a },
                ],
            }
        }
    }
}

/// One scale of the lowered schedule. Within a layer the disentangler round
/// and the isometry round are sequential; gates inside a round act on
/// disjoint qubit sets and run in parallel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeraLayer {
    pub tau: usize,
    pub scale: usize,
    pub isometries: Vec<LoweredGate>,
    pub disentanglers: Vec<LoweredGate>,
    /// `2 x` the round-trip gate time at this scale (two rounds per layer).
    pub layer_time: f64,
}

/// Lowered 1D binary MERA schedule over a chain of `l` qubits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeraSchedule {
    pub l: usize,
    pub alpha: f64,
    /// Layers in execution order: coarsest scale first.
    pub layers: Vec<MeraLayer>,
    pub total_time: f64,
}

/// Build the lowered schedule for the 1D binary MERA (`phi = 2`, `d = 1`).
///
/// Executed coarse-to-fine from the all-`|0>` product state: at layer `tau`
/// the active sites are multiples of `2^(tau+1)`; each isometry entangles a
/// new site `2^tau` away, then disentanglers couple neighboring active sites
/// at the same distance. A gate over distance `ell > 1` is lowered to
/// "transfer one operand next to the other, gate, transfer back", routed
/// through the straight chain of `|0>` sites in between.
pub fn build_mera_schedule(l: usize, alpha: f64) -> Result<MeraSchedule> {
    let s = layer_count(l, 2)?;
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "exponent {alpha} must be finite and non-negative"
        )));
    }

    // Full-transfer time over a chain distance, from the shell solver.
    let max_distance = (l / 2).saturating_sub(1);
    let cumulative = if max_distance >= 1 {
        solve_hypercube_times(max_distance, 1, alpha)?.cumulative
    } else {
        Vec::new()
    };
    let transfer_time = |distance: usize| -> f64 {
        if distance == 0 {
            0.0
        } else {
            2.0 * cumulative[distance - 1]
        }
    };

    let mut layers = Vec::with_capacity(s);
    let mut total = KahanSum::new();
    for tau in (0..s).rev() {
        let scale = 1usize << tau;
        let stride = scale * 2;
        let isometries: Vec<LoweredGate> = (0..l)
            .step_by(stride)
            .map(|site| LoweredGate::new(site, site + scale))
            .collect();
        let disentanglers: Vec<LoweredGate> = (0..l)
            .step_by(stride)
            .filter(|site| site + stride < l)
            .map(|site| LoweredGate::new(site + scale, site + stride))
            .collect();
        // Round-trip transfer per gate, two gate rounds per layer; the local
        // gate itself is a scale-independent constant and is excluded.
        let layer_time = 2.0 * (2.0 * transfer_time(scale - 1));
        total.add(layer_time);
        layers.push(MeraLayer {
            tau,
            scale,
            isometries,
            disentanglers,
            layer_time,
        });
    }

    Ok(MeraSchedule {
        l,
        alpha,
        layers,
        total_time: total.value(),
    })
}

/// Gate choices for the replay harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeraGateChoice {
    Identity,
    FixedEntangler,
}

/// The two-qubit unitary used for `FixedEntangler`:
/// `(I (x) Rz(0.4)) CNOT (H (x) I)`, row-major over `|q1 q2>`.
pub fn mera_gate_matrix(choice: MeraGateChoice) -> [[Complex64; 4]; 4] {
    let z = Complex64::ZERO;
    let o = Complex64::ONE;
    match choice {
        MeraGateChoice::Identity => [
            [o, z, z, z],
            [z, o, z, z],
            [z, z, o, z],
            [z, z, z, o],
        ],
        MeraGateChoice::FixedEntangler => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let hadamard_first = [
                [h * o, z, h * o, z],
                [z, h * o, z, h * o],
                [h * o, z, -h * o, z],
                [z, h * o, z, -h * o],
            ];
            let cnot = [
                [o, z, z, z],
                [z, o, z, z],
                [z, z, z, o],
                [z, z, o, z],
            ];
            let rz = Complex64::from_polar(1.0, -0.2);
            let rz_conj = Complex64::from_polar(1.0, 0.2);
            let rz_second = [
                [rz, z, z, z],
                [z, rz_conj, z, z],
                [z, z, rz, z],
                [z, z, z, rz_conj],
            ];
            let mut out = [[z; 4]; 4];
            let prod = matmul4(&cnot, &hadamard_first);
            let full = matmul4(&rz_second, &prod);
            for (row, target) in full.iter().zip(out.iter_mut()) {
                *target = *row;
            }
            out
        }
    }
}

fn matmul4(a: &[[Complex64; 4]; 4], b: &[[Complex64; 4]; 4]) -> [[Complex64; 4]; 4] {
    let mut out = [[Complex64::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

/// Execute the lowered schedule on the state-vector simulator from the
/// all-`|0>` product state. Transfers route through sites that must still be
/// in `|0>`; the structural scratch check makes any violation loud.
pub fn replay_mera(schedule: &MeraSchedule, choice: MeraGateChoice) -> Result<PureState> {
    let n = schedule.l;
    if n > 16 {
        return Err(Error::QubitCapExceeded { n, cap: 16 });
    }
    let gate = mera_gate_matrix(choice);
    let mut state = PureState::zeros(n)?;
    let mut active = vec![false; n];

    for layer in &schedule.layers {
        for (round, iso_round) in [(&layer.isometries, true), (&layer.disentanglers, false)] {
            for lowered in round {
                if iso_round && active[lowered.b] {
                    return Err(Error::ScratchConflict {
                        layer: layer.tau,
                        site: lowered.b,
                    });
                }
                if lowered.route.is_empty() {
                    state.apply_two_qubit(lowered.a, lowered.b, &gate)?;
                } else {
                    if let Some(&site) = lowered.route[1..].iter().find(|&&s| active[s]) {
                        return Err(Error::ScratchConflict {
                            layer: layer.tau,
                            site,
                        });
                    }
                    let m = lowered.b - lowered.a;
                    let chain = LatticeSpec::chain(m, schedule.alpha)?;
                    let map: Vec<usize> = (0..m).map(|i| lowered.a + i).collect();
                    let out =
                        transfer_program(&chain, ProtocolMode::Hypercube)?.remapped(&map);
                    out.execute(&mut state)?;
                    state.apply_two_qubit(lowered.b - 1, lowered.b, &gate)?;
                    out.inverted().execute(&mut state)?;
                }
                active[lowered.a] = true;
                active[lowered.b] = true;
            }
        }
    }
    Ok(state)
}

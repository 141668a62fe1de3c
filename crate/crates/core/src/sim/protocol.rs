//! Protocol builders and end-to-end runs: GHZ construction over a lattice by
//! the greedy or hypercube schedule, and full state transfer.
//!
//! The forward pass spreads a controlled-X cascade from the source until the
//! whole lattice is encoded, producing `a|0..0> + (-i)^(N-1) b|1..1>`. The
//! reverse pass is the exact inverse of the same construction rooted at the
//! destination: inverse steps in reverse order, which swaps the roles of the
//! two end sites and leaves the destination carrying the input state.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{coupling, LatticeSpec};
use crate::schedule::{greedy_schedule_from, solve_hypercube_times, GREEDY_EVENT_TOLERANCE};
use crate::sim::program::{PulseProgram, PulseStep};
use crate::sim::state::{PureState, MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolMode {
    Greedy,
    Hypercube,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolPhase {
    GhzOnly,
    FullTransfer,
}

/// Result of one protocol run.
#[derive(Debug, Clone, Serialize)]
pub struct TransferReport {
    pub n: usize,
    pub mode: ProtocolMode,
    pub phase: ProtocolPhase,
    /// Total evolution time of the executed program.
    pub elapsed: f64,
    /// `|<target|psi>|` against the ideal outcome of the requested phase:
    /// the phase-law GHZ state for `GhzOnly`, the relocated product state
    /// for `FullTransfer`.
    pub fidelity: f64,
    /// Relative phase of the all-ones branch against the all-zeros branch
    /// after the GHZ build, as a unit complex `(re, im)`; `(0, 0)` when the
    /// input amplitudes make it undefined.
    pub ghz_phase: (f64, f64),
    pub final_state: PureState,
}

/// `(-i)^(n-1)`: the phase the all-ones branch accumulates during the build
/// (one completed quarter X rotation per added qubit).
pub fn expected_ghz_phase(n: usize) -> Complex64 {
    match (n - 1) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// The ideal outcome of the GHZ build: `a|0..0> + (-i)^(n-1) b|1..1>`.
pub fn ghz_state(n: usize, a: Complex64, b: Complex64) -> Result<PureState> {
    let mut amps = vec![Complex64::ZERO; 1 << n];
    amps[0] = a;
    amps[(1 << n) - 1] = expected_ghz_phase(n) * b;
    PureState::from_amplitudes(n, amps)
}

fn is_corner(lattice: &LatticeSpec, coords: &[i64]) -> bool {
    coords
        .iter()
        .all(|&c| c == 0 || c == lattice.l() as i64 - 1)
}

/// Forward GHZ-build program rooted at the lattice source.
pub fn ghz_program(lattice: &LatticeSpec, mode: ProtocolMode) -> Result<PulseProgram> {
    ghz_program_rooted(lattice, mode, lattice.source_index())
}

/// Full state-transfer program: the forward build from the source followed by
/// the inverse of the build rooted at the destination.
pub fn transfer_program(lattice: &LatticeSpec, mode: ProtocolMode) -> Result<PulseProgram> {
    let mut program = ghz_program_rooted(lattice, mode, lattice.source_index())?;
    program.extend(ghz_program_rooted(lattice, mode, lattice.destination_index())?.inverted());
    Ok(program)
}

fn ghz_program_rooted(
    lattice: &LatticeSpec,
    mode: ProtocolMode,
    root: usize,
) -> Result<PulseProgram> {
    match mode {
        ProtocolMode::Greedy => Ok(greedy_program(lattice, root)),
        ProtocolMode::Hypercube => hypercube_program(lattice, root),
    }
}

/// Piecewise-constant segments of the greedy clock: between two events the
/// active pairs couple every control to every unfinished site.
fn greedy_program(lattice: &LatticeSpec, root: usize) -> PulseProgram {
    let log = greedy_schedule_from(lattice, root);
    let sites = lattice.sites();
    let alpha = lattice.alpha();
    let n = lattice.site_count();

    let mut completed = vec![false; n];
    let mut steps = Vec::new();
    for window in log.events.windows(2) {
        for &s in &window[0].sites {
            completed[s] = true;
        }
        let duration = window[1].time - window[0].time;
        let mut pairs = Vec::new();
        for control in 0..n {
            if !completed[control] {
                continue;
            }
            for target in 0..n {
                if !completed[target] {
                    let h = coupling(&sites[control], &sites[target], alpha)
                        .expect("distinct sites");
                    pairs.push((control, target, h));
                }
            }
        }
        if duration > 0.0 && !pairs.is_empty() {
            steps.push(PulseStep::ControlledX { pairs, duration });
        }
    }
    PulseProgram::new(steps)
}

/// Hypercube-mode program rooted at a corner. During window `p` the controls
/// are the completed cube of edge `p`; a site whose rotation finishes
/// mid-window is halted (dropped from the active pairs) until its whole
/// shell is promoted at the window boundary.
fn hypercube_program(lattice: &LatticeSpec, root: usize) -> Result<PulseProgram> {
    let root_coords = lattice.site_coords(root);
    if !is_corner(lattice, &root_coords) {
        return Err(Error::InvalidLattice(format!(
            "hypercube mode requires a corner root, got {root_coords:?}"
        )));
    }
    let n = lattice.site_count();
    let alpha = lattice.alpha();
    let sites = lattice.sites();
    let shells = lattice.l() - 1;
    let schedule = solve_hypercube_times(shells, lattice.d(), alpha)?;

    // Distance layer of each site from the root corner: max |s_k - root_k|.
    let layer: Vec<usize> = sites
        .iter()
        .map(|s| {
            s.iter()
                .zip(&root_coords)
                .map(|(&c, &r)| (c - r).unsigned_abs() as usize)
                .max()
                .expect("d >= 1")
        })
        .collect();

    let window_start = |p: usize| if p == 1 { 0.0 } else { schedule.cumulative[p - 2] };

    // Completion time of every site under the halted-rotation bookkeeping.
    let mut completion = vec![0.0f64; n];
    for j in 0..n {
        if layer[j] == 0 {
            continue;
        }
        let mut theta = 0.0;
        let mut done = false;
        for p in 1..=layer[j] {
            let rate: f64 = (0..n)
                .filter(|&i| layer[i] < p)
                .map(|i| coupling(&sites[i], &sites[j], alpha).expect("distinct sites"))
                .sum();
            let dt = schedule.times[p - 1];
            let remaining = std::f64::consts::FRAC_PI_2 - theta;
            if rate * dt >= remaining - 1e-9 {
                completion[j] = (window_start(p) + remaining / rate).min(schedule.cumulative[p - 1]);
                done = true;
                break;
            }
            theta += rate * dt;
        }
        if !done {
            return Err(Error::Internal(format!(
                "site {j} failed to complete by its shell window (layer {})",
                layer[j]
            )));
        }
    }

    let mut steps = Vec::new();
    for p in 1..=shells {
        let t0 = window_start(p);
        let t1 = schedule.cumulative[p - 1];
        // Sub-events: completions strictly inside the window, merged.
        let mut cuts: Vec<f64> = completion
            .iter()
            .copied()
            .filter(|&t| t > t0 + GREEDY_EVENT_TOLERANCE && t < t1 - GREEDY_EVENT_TOLERANCE)
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() <= GREEDY_EVENT_TOLERANCE);
        let mut boundaries = vec![t0];
        boundaries.extend(cuts);
        boundaries.push(t1);

        let controls: Vec<usize> = (0..n).filter(|&i| layer[i] < p).collect();
        for seg in boundaries.windows(2) {
            let (s0, s1) = (seg[0], seg[1]);
            let duration = s1 - s0;
            if duration <= 0.0 {
                continue;
            }
            let mut pairs = Vec::new();
            for &i in &controls {
                for j in 0..n {
                    if layer[j] >= p && completion[j] > s0 + GREEDY_EVENT_TOLERANCE {
                        let h = coupling(&sites[i], &sites[j], alpha).expect("distinct sites");
                        pairs.push((i, j, h));
                    }
                }
            }
            if !pairs.is_empty() {
                steps.push(PulseStep::ControlledX { pairs, duration });
            }
        }
    }
    Ok(PulseProgram::new(steps))
}

/// Run the protocol end to end: prepare `a|0> + b|1>` on the source, build
/// the GHZ state, and for `FullTransfer` undo it from the destination side.
pub fn run_protocol(
    lattice: &LatticeSpec,
    a: Complex64,
    b: Complex64,
    mode: ProtocolMode,
    phase: ProtocolPhase,
) -> Result<TransferReport> {
    let n = lattice.site_count();
    if n > MAX_QUBITS {
        return Err(Error::QubitCapExceeded { n, cap: MAX_QUBITS });
    }
    if mode == ProtocolMode::Hypercube {
        if !is_corner(lattice, lattice.source()) {
            return Err(Error::InvalidLattice(
                "hypercube mode requires the source at a lattice corner".into(),
            ));
        }
        if phase == ProtocolPhase::FullTransfer
            && lattice.mirror(lattice.source()) != lattice.destination()
        {
            return Err(Error::InvalidLattice(
                "hypercube full transfer requires source and destination at opposite corners"
                    .into(),
            ));
        }
    }

    let source = lattice.source_index();
    let mut state = PureState::product_with_qubit(n, source, a, b)?;
    let forward = ghz_program_rooted(lattice, mode, source)?;
    forward.execute(&mut state)?;
    let mut elapsed = forward.duration();

    let amp_zeros = state.amplitude(0);
    let amp_ones = state.amplitude((1 << n) - 1);
    let ghz_phase = if a.norm() > 1e-12 && b.norm() > 1e-12 {
        let ratio = (amp_ones / b) / (amp_zeros / a);
        let unit = ratio / ratio.norm();
        (unit.re, unit.im)
    } else {
        (0.0, 0.0)
    };

    let fidelity = match phase {
        ProtocolPhase::GhzOnly => {
            let ideal = ghz_state(n, a, b)?;
            state.fidelity(&ideal)
        }
        ProtocolPhase::FullTransfer => {
            let reverse =
                ghz_program_rooted(lattice, mode, lattice.destination_index())?.inverted();
            reverse.execute(&mut state)?;
            elapsed += reverse.duration();
            let target =
                PureState::product_with_qubit(n, lattice.destination_index(), a, b)?;
            state.fidelity(&target)
        }
    };

    Ok(TransferReport {
        n,
        mode,
        phase,
        elapsed,
        fidelity,
        ghz_phase,
        final_state: state,
    })
}

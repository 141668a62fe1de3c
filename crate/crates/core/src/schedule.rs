//! Shell-time solver and the greedy event-driven protocol clock.
//!
//! The hypercube scheme grows the control set as nested hypercubes of edge
//! `q = 1, 2, .., L`; the shell times `t_q` follow from the condition that
//! the corner target of each shell accumulates a total rotation of `pi/2`:
//! `sum_{p <= q} H(p, q) t_p = pi/2`. The greedy scheme instead promotes
//! every site to a control the instant its own rotation completes.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::lattice::{coupling, shell_bucketed_sums_with, CouplingTable, LatticeSpec};

/// Simultaneous completions closer than this are merged into one event.
/// Symmetric lattices produce exactly-tied completions that floating point
/// would otherwise split.
pub const GREEDY_EVENT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleMode {
    Hypercube,
    Greedy,
}

/// Solved shell times for one `(L, d, alpha)` instance.
#[derive(Debug, Clone, Serialize)]
pub struct ScheduleResult {
    pub d: usize,
    pub alpha: f64,
    pub mode: ScheduleMode,
    /// `t_1 .. t_L`, in units of the inverse nearest-neighbor coupling.
    pub times: Vec<f64>,
    /// Prefix sums of `times`.
    pub cumulative: Vec<f64>,
    /// `|sum_{p <= q} H(p, q) t_p - pi/2|` per shell.
    pub residuals: Vec<f64>,
}

impl ScheduleResult {
    /// Time to build the GHZ state out to shell `L`.
    pub fn one_way_time(&self) -> f64 {
        *self.cumulative.last().expect("L >= 1")
    }

    /// Full state-transfer time: GHZ build plus the mirrored reversal.
    pub fn transfer_time(&self) -> f64 {
        2.0 * self.one_way_time()
    }
}

/// Solve the shell-time condition by forward substitution:
/// `t_q = (pi/2 - sum_{p < q} H(p, q) t_p) / H(q, q)`.
///
/// Shell rows are computed in parallel (they are independent); the
/// substitution itself is sequential in `q`.
pub fn solve_hypercube_times(l: usize, d: usize, alpha: f64) -> Result<ScheduleResult> {
    if l < 1 {
        return Err(Error::InvalidParameter("need L >= 1 shells".into()));
    }
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidParameter(format!(
            "dimension {d} unsupported (need 1 <= d <= 3)"
        )));
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "coupling exponent {alpha} must be finite and non-negative"
        )));
    }

    let table = CouplingTable::new(alpha, (d * l * l) as u64);
    let rows: Vec<Vec<f64>> = (1..=l)
        .into_par_iter()
        .map(|q| shell_bucketed_sums_with(q, d, &table))
        .collect::<Result<_>>()?;

    let mut times = Vec::with_capacity(l);
    let mut cumulative = Vec::with_capacity(l);
    let mut residuals = Vec::with_capacity(l);
    let mut running = KahanSum::new();
    for q in 1..=l {
        let row = &rows[q - 1];
        let mut dot = KahanSum::new();
        for p in 1..q {
            dot.add(row[p - 1] * times[p - 1]);
        }
        let t_q = (FRAC_PI_2 - dot.value()) / row[q - 1];
        if t_q < 0.0 {
            return Err(Error::PhaseConditionInfeasible { q, t: t_q });
        }
        times.push(t_q);

        let mut full = KahanSum::new();
        for p in 1..=q {
            full.add(row[p - 1] * times[p - 1]);
        }
        residuals.push((full.value() - FRAC_PI_2).abs());

        running.add(t_q);
        cumulative.push(running.value());
    }

    Ok(ScheduleResult {
        d,
        alpha,
        mode: ScheduleMode::Hypercube,
        times,
        cumulative,
        residuals,
    })
}

/// GHZ-build and full-transfer times for the hypercube schedule.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransferTime {
    pub one_way: f64,
    pub round_trip: f64,
}

/// Total state-transfer time over `L` shells: `2 * sum_q t_q` for the full
/// transfer, with the one-way GHZ-build time alongside.
pub fn total_transfer_time(l: usize, d: usize, alpha: f64) -> Result<TransferTime> {
    let schedule = solve_hypercube_times(l, d, alpha)?;
    Ok(TransferTime {
        one_way: schedule.one_way_time(),
        round_trip: schedule.transfer_time(),
    })
}

/// Scaling bound on the shell times: `min(q^(alpha - (d+1)), 1)`.
pub fn tq_scaling_bound(q: usize, d: usize, alpha: f64) -> f64 {
    (q as f64).powf(alpha - (d as f64 + 1.0)).min(1.0)
}

/// One promotion event of the greedy clock: every site in `sites` reached a
/// `pi/2` rotation at `time` and joined the control set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyEvent {
    pub time: f64,
    /// Site indices, ordered lexicographically by coordinates.
    pub sites: Vec<usize>,
}

/// Event log of one greedy run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyEventLog {
    pub source: usize,
    pub destination: usize,
    pub events: Vec<GreedyEvent>,
    /// Completion time per site index.
    pub completion_times: Vec<f64>,
    pub destination_completion: f64,
    pub total_time: f64,
}

/// Run the greedy protocol clock: every non-control site accumulates rotation
/// at the summed coupling rate from all current controls; a site joins the
/// control set the instant its rotation reaches `pi/2`. Rates are piecewise
/// constant between events.
pub fn greedy_schedule(lattice: &LatticeSpec) -> GreedyEventLog {
    greedy_schedule_from(lattice, lattice.source_index())
}

pub(crate) fn greedy_schedule_from(lattice: &LatticeSpec, root: usize) -> GreedyEventLog {
    let n = lattice.site_count();
    let alpha = lattice.alpha();
    let sites = lattice.sites();

    let mut completed = vec![false; n];
    let mut completion_times = vec![f64::NAN; n];
    let mut angle = vec![0.0f64; n];
    let mut rate = vec![0.0f64; n];

    completed[root] = true;
    completion_times[root] = 0.0;
    for j in 0..n {
        if j != root {
            rate[j] = coupling(&sites[root], &sites[j], alpha).expect("distinct sites");
        }
    }

    let mut events = vec![GreedyEvent {
        time: 0.0,
        sites: vec![root],
    }];
    let mut now = 0.0f64;
    let mut remaining = n - 1;

    while remaining > 0 {
        let mut t_min = f64::INFINITY;
        for j in 0..n {
            if !completed[j] {
                let t = now + (FRAC_PI_2 - angle[j]) / rate[j];
                if t < t_min {
                    t_min = t;
                }
            }
        }

        // Site indices ascend in lexicographic coordinate order already.
        let batch: Vec<usize> = (0..n)
            .filter(|&j| {
                !completed[j]
                    && now + (FRAC_PI_2 - angle[j]) / rate[j] <= t_min + GREEDY_EVENT_TOLERANCE
            })
            .collect();

        let dt = t_min - now;
        for j in 0..n {
            if !completed[j] {
                angle[j] += rate[j] * dt;
            }
        }
        for &j in &batch {
            completed[j] = true;
            completion_times[j] = t_min;
            angle[j] = FRAC_PI_2;
        }
        for k in 0..n {
            if !completed[k] {
                for &j in &batch {
                    rate[k] += coupling(&sites[j], &sites[k], alpha).expect("distinct sites");
                }
            }
        }
        remaining -= batch.len();
        events.push(GreedyEvent {
            time: t_min,
            sites: batch,
        });
        now = t_min;
    }

    let destination = lattice.destination_index();
    GreedyEventLog {
        source: root,
        destination,
        events,
        destination_completion: completion_times[destination],
        total_time: now,
        completion_times,
    }
}

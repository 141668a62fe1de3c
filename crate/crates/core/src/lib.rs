// Validation guards are written as `!(v > 0.0)` so NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical laboratory for state transfer and GHZ construction with
//! long-range (`1/r^alpha`) interactions: schedule solvers and scaling fits,
//! an exact state-vector simulator of the protocols, dipolar control-volume
//! integrals with cube-dilation scheduling, decoherence/fidelity limits, and
//! MERA construction-time analysis.

pub mod dipolar;
pub mod error;
pub mod fit;
mod kahan;
pub mod lattice;
pub mod mera;
pub mod reliability;
pub mod schedule;
pub mod sim;

pub use error::{Error, Result};
pub use fit::{fit_scaling, predicted_beta, FitModel, ScalingAnalysis, ScalingFit};
pub use lattice::{
    coupling, hypercube_coupling_sum, shell_bucketed_sums, CouplingModel, CouplingTable,
    LatticeSpec,
};
pub use schedule::{
    greedy_schedule, solve_hypercube_times, total_transfer_time, tq_scaling_bound, GreedyEventLog,
    ScheduleMode, ScheduleResult, TransferTime,
};
pub use sim::{
    cnot_from_zz, echo_program, evolve_controlled_x, run_protocol, EchoRole, ProtocolMode,
    ProtocolPhase, PulseProgram, PulseStep, PureState, TransferReport,
};

pub use dipolar::{
    dilation_schedule, dipole_coupling, dvdx_analytic, prism_interaction, ControlPrism,
    DilationKind, DilationPlan, DipoleCoupling,
};
pub use mera::{
    build_mera_schedule, mera_time_bound, mera_transfer_sum, replay_mera, MeraGateChoice,
    MeraPlan, MeraRegime, MeraSchedule,
};
pub use reliability::{
    advantage_ratio, ghz_lifetime, max_qubits_gate_fidelity, max_qubits_longrange, max_qubits_nn,
    p_success, protocol_wall_time, protocol_wall_time_continuous, NnMode, ReliabilityParams,
    StepCount,
};

//! Exact state-vector simulation of the protocols: pure states, timed pulse
//! programs, gate synthesis from ZZ interactions, and end-to-end protocol
//! runs.

mod program;
mod protocol;
mod state;

pub use program::{
    cnot_from_zz, echo_program, EchoRole, LocalGate, PulseProgram, PulseStep, STEP_NORM_TOLERANCE,
};
pub use protocol::{
    expected_ghz_phase, ghz_program, ghz_state, run_protocol, transfer_program, ProtocolMode,
    ProtocolPhase, TransferReport,
};
pub use state::{evolve_controlled_x, PureState, MAX_QUBITS};

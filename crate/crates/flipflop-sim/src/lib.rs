//! Desk-scale simulator of silicon flip-flop qubits.
//!
//! Implements the full eight-dimensional (and 64-dimensional two-qubit)
//! dynamics of donor flip-flop qubits under piecewise dc sweeps, resonant ac
//! drives and 1/f charge noise, with the universal gate set
//! {Rz(-pi/2), Hadamard, sqrt(iSWAP)}, entanglement-fidelity evaluation,
//! adiabaticity diagnostics and Bloch-trajectory export.
//!
//! Start from the `examples/` directory: one runnable example per capability
//! (gates, noise sweeps, spectral checks, trajectories, calibration). The
//! thin `ffsim` binary drives batch runs from a TOML config.

pub mod adiabatic;
pub mod basis;
pub mod config;
pub mod constants;
pub mod device;
pub mod error;
pub mod gates;
pub mod hamiltonian;
pub mod io;
pub mod linalg;
pub mod noise;
pub mod propagator;
pub mod pulse;
pub mod sweep;

pub use basis::{BasisLabel, DIM1, DIM2, LOGICAL0, LOGICAL1};
pub use constants::{PhysicalConstants, CONSTANTS};
pub use device::{CouplingGeometry, DeviceParams, DeviceWarning};
pub use error::{Result, SimError};
pub use gates::{GateKind, GateResult, GateSpec};
pub use noise::{generate_noise, estimate_psd, NoiseSpec, NoiseTrace};
pub use propagator::{
    bloch_trajectory, propagate, to_rotating_frame, BlochPoint, Frame, FrameSpec, Propagation,
    RecordFlags, TimeGrid,
};
pub use pulse::{AcDrive, PulseSchedule, RampSegment, RampShape};
pub use sweep::{sweep_noise, SweepResult};

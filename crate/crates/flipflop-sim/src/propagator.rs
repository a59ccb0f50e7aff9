//! Time-ordered propagation of the Schrödinger dynamics over a schedule.
//!
//! The unitary is accumulated as the ordered product of midpoint
//! exponentials `exp(-i 2 pi H(t_mid) dt)` (H in Hz). Static noise-free
//! stretches collapse to a single exact exponential; swept or driven
//! stretches (and everything, when noise is present) step at the grid
//! resolution. Step boundaries are anchored to schedule breakpoints, so a
//! propagation split at a breakpoint-aligned time composes exactly.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::basis::{DIM1, LOGICAL0, LOGICAL1};
use crate::device::{CouplingGeometry, DeviceParams};
use crate::error::{Result, SimError};
use crate::hamiltonian::{
    build_single_hamiltonian, build_two_qubit_hamiltonian, position_operator_z,
};
use crate::linalg::{CMatrix, HermitianEigen};
use crate::noise::NoiseTrace;
use crate::pulse::PulseSchedule;

/// Span and resolution of one propagation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    /// Fine step used on swept/driven stretches (s).
    pub dt: f64,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(SimError::Propagation("dt must be positive".into()));
        }
        if t_end < t_start {
            return Err(SimError::Propagation("t_end must be >= t_start".into()));
        }
        Ok(TimeGrid { t_start, t_end, dt })
    }

    pub fn span(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// Reference frame for reported quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Laboratory,
    Rotating,
}

/// Frame selector; `rotation_frequency` is the idling-qubit splitting when
/// rotating.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    pub frame: Frame,
    pub rotation_frequency: f64,
}

impl FrameSpec {
    pub fn laboratory() -> Self {
        FrameSpec { frame: Frame::Laboratory, rotation_frequency: 0.0 }
    }

    pub fn rotating(f: f64) -> Self {
        FrameSpec { frame: Frame::Rotating, rotation_frequency: f }
    }
}

/// What to record along the way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordFlags {
    pub trajectory: bool,
    pub observables: bool,
    /// Target spacing of recorded points (s).
    pub record_dt: f64,
}

impl Default for RecordFlags {
    fn default() -> Self {
        RecordFlags { trajectory: false, observables: false, record_dt: 50e-12 }
    }
}

/// Single-qubit observables at one recorded time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservablePoint {
    pub t: f64,
    pub sz_ff: f64,
    pub sx_ff: f64,
    pub sy_ff: f64,
    pub sz_id: f64,
    pub pop_e: f64,
}

/// Result of one propagation.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub grid: TimeGrid,
    /// Number of exponential factors taken.
    pub n_steps: usize,
    pub dim: usize,
    pub n_qubits: usize,
    /// Accumulated unitary over [t_start, t_end].
    pub unitary: CMatrix,
    /// Recorded times (present when anything was recorded).
    pub times: Option<Vec<f64>>,
    /// Recorded states at `times`.
    pub trajectory: Option<Vec<Vec<C64>>>,
    /// Recorded per-qubit dc fields at `times` (for position-operator
    /// reconstruction).
    pub de_records: Option<Vec<Vec<f64>>>,
    /// Per-qubit observable records.
    pub observables: Option<Vec<Vec<ObservablePoint>>>,
    /// Frame the records are expressed in.
    pub frame: FrameSpec,
}

struct StepPlan {
    t0: f64,
    t1: f64,
    /// static dc, no drive, no noise: one exact exponential
    is_static: bool,
}

fn breakpoints(schedules: &[PulseSchedule], grid: &TimeGrid) -> Vec<f64> {
    let mut pts = vec![grid.t_start, grid.t_end];
    for s in schedules {
        for seg in &s.dc_segments {
            pts.push(seg.t_start);
            pts.push(seg.t_end);
        }
        for d in &s.ac_drives {
            pts.push(d.t_on);
            pts.push(d.t_off);
        }
    }
    pts.retain(|&t| t >= grid.t_start - 1e-18 && t <= grid.t_end + 1e-18);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-16);
    pts
}

fn interval_static(schedules: &[PulseSchedule], t0: f64, t1: f64) -> bool {
    let tm = 0.5 * (t0 + t1);
    for s in schedules {
        for seg in &s.dc_segments {
            if tm >= seg.t_start && tm <= seg.t_end && !seg.is_static() {
                return false;
            }
        }
        for d in &s.ac_drives {
            if d.amplitude > 0.0 && t1 > d.t_on && t0 < d.t_off {
                return false;
            }
        }
    }
    true
}

/// Propagate one or two qubits over `grid`.
///
/// `schedules` holds one schedule per qubit; `geometry` must be present
/// exactly for two qubits; `noise`, when given, holds one trace per qubit
/// covering the grid. `initial` enables state recording.
#[allow(clippy::too_many_arguments)]
pub fn propagate(
    schedules: &[PulseSchedule],
    params: &DeviceParams,
    geometry: Option<&CouplingGeometry>,
    noise: Option<&[NoiseTrace]>,
    grid: &TimeGrid,
    record: &RecordFlags,
    initial: Option<&[C64]>,
) -> Result<Propagation> {
    let n_qubits = schedules.len();
    let dim = match (n_qubits, geometry.is_some()) {
        (1, false) => DIM1,
        (2, true) => DIM1 * DIM1,
        (1, true) => {
            return Err(SimError::Propagation("geometry given for a single qubit".into()))
        }
        (2, false) => {
            return Err(SimError::Propagation("two qubits need a coupling geometry".into()))
        }
        _ => return Err(SimError::Propagation("need one or two schedules".into())),
    };
    if let Some(tr) = noise {
        if tr.len() != n_qubits {
            return Err(SimError::Propagation(format!(
                "{} noise traces for {} qubits",
                tr.len(),
                n_qubits
            )));
        }
        for t in tr.iter() {
            if t.spec.duration() < grid.t_end - 1e-15 {
                return Err(SimError::Propagation(
                    "noise trace does not cover the grid".into(),
                ));
            }
        }
    }
    for s in schedules {
        if s.total_time < grid.t_end - 1e-15 {
            return Err(SimError::Propagation("schedule shorter than the grid".into()));
        }
    }
    let recording = record.trajectory || record.observables;
    let mut psi: Option<Vec<C64>> = match (recording, initial) {
        (true, Some(v)) => {
            if v.len() != dim {
                return Err(SimError::Dimension { expected: dim, got: v.len() });
            }
            Some(v.to_vec())
        }
        (true, None) => {
            return Err(SimError::Propagation(
                "recording requested without an initial state".into(),
            ))
        }
        _ => None,
    };

    let fields_at = |t: f64| -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::with_capacity(n_qubits);
        for (q, s) in schedules.iter().enumerate() {
            let (mut de, eac) = s.evaluate(t)?;
            if let Some(tr) = noise {
                de += tr[q].value_at(t);
            }
            out.push((de, eac));
        }
        Ok(out)
    };
    let build = |fields: &[(f64, f64)]| -> Result<CMatrix> {
        let h = if n_qubits == 1 {
            build_single_hamiltonian(fields[0].0, fields[0].1, params)?
        } else {
            build_two_qubit_hamiltonian(
                fields[0].0,
                fields[0].1,
                fields[1].0,
                fields[1].1,
                params,
                geometry.unwrap(),
            )?
        };
        if !h.is_finite() {
            return Err(SimError::Numerical("non-finite Hamiltonian entries".into()));
        }
        Ok(h)
    };

    let pts = breakpoints(schedules, grid);
    let mut plan = Vec::new();
    for w in pts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 - t0 < 1e-16 {
            continue;
        }
        let is_static = noise.is_none() && interval_static(schedules, t0, t1);
        plan.push(StepPlan { t0, t1, is_static });
    }

    let mut unitary = CMatrix::identity(dim);
    let mut n_steps = 0usize;
    let mut times = Vec::new();
    let mut traj: Vec<Vec<C64>> = Vec::new();
    let mut des: Vec<Vec<f64>> = Vec::new();
    let mut last_record = f64::NEG_INFINITY;

    let mut record_point = |t: f64,
                            psi: &Option<Vec<C64>>,
                            times: &mut Vec<f64>,
                            traj: &mut Vec<Vec<C64>>,
                            des: &mut Vec<Vec<f64>>,
                            last: &mut f64,
                            force: bool|
     -> Result<()> {
        if !recording {
            return Ok(());
        }
        if !force && t - *last < record.record_dt * (1.0 - 1e-9) {
            return Ok(());
        }
        *last = t;
        times.push(t);
        if let Some(p) = psi {
            traj.push(p.clone());
        }
        let mut row = Vec::with_capacity(n_qubits);
        for s in schedules {
            row.push(s.evaluate(t.min(s.total_time))?.0);
        }
        des.push(row);
        Ok(())
    };

    record_point(grid.t_start, &psi, &mut times, &mut traj, &mut des, &mut last_record, true)?;

    for iv in &plan {
        let len = iv.t1 - iv.t0;
        if iv.is_static {
            let fields = fields_at(0.5 * (iv.t0 + iv.t1))?;
            let h = build(&fields)?;
            let eig = HermitianEigen::new(&h)?;
            unitary = eig.propagator(len).mul(&unitary);
            n_steps += 1;
            if recording {
                let m = (len / record.record_dt).ceil().max(1.0) as usize;
                let sub = len / m as f64;
                for k in 0..m {
                    if let Some(p) = psi.as_mut() {
                        *p = eig.propagate_vec(p, sub);
                    }
                    let t = iv.t0 + (k + 1) as f64 * sub;
                    record_point(t, &psi, &mut times, &mut traj, &mut des, &mut last_record,
                                 k + 1 == m)?;
                }
            }
        } else {
            // fixed-dt steps anchored at the interval start; short tail step
            let n = (len / grid.dt).ceil().max(1.0) as usize;
            for k in 0..n {
                let t0 = iv.t0 + k as f64 * grid.dt;
                let t1 = (t0 + grid.dt).min(iv.t1);
                let dtt = t1 - t0;
                if dtt <= 0.0 {
                    break;
                }
                let fields = fields_at(0.5 * (t0 + t1))?;
                let h = build(&fields)?;
                let eig = HermitianEigen::new(&h)?;
                unitary = eig.propagator(dtt).mul(&unitary);
                n_steps += 1;
                if let Some(p) = psi.as_mut() {
                    *p = eig.propagate_vec(p, dtt);
                }
                record_point(t1, &psi, &mut times, &mut traj, &mut des, &mut last_record,
                             (t1 - iv.t1).abs() < 1e-18)?;
            }
        }
    }

    let uerr = unitary.unitarity_error();
    if uerr > 1e-9 {
        return Err(SimError::Numerical(format!("unitarity breach: {uerr:.3e}")));
    }

    let mut prop = Propagation {
        grid: *grid,
        n_steps,
        dim,
        n_qubits,
        unitary,
        times: recording.then_some(times),
        trajectory: (recording && psi.is_some()).then_some(traj),
        de_records: recording.then_some(des),
        observables: None,
        frame: FrameSpec::laboratory(),
    };
    if record.observables {
        prop.observables = Some(compute_observables(&prop, params)?);
    }
    Ok(prop)
}

/// Logical z weight of a single-qubit basis index: -1, +1 or 0.
fn z_weight(idx: usize) -> f64 {
    if idx == LOGICAL0 {
        -1.0
    } else if idx == LOGICAL1 {
        1.0
    } else {
        0.0
    }
}

/// Frame phases exp(+i pi f t z_total(index)) for every basis index.
fn frame_phases(dim: usize, f_rot: f64, t: f64) -> Vec<C64> {
    let arg = std::f64::consts::PI * f_rot * t;
    (0..dim)
        .map(|i| {
            let z = if dim == DIM1 {
                z_weight(i)
            } else {
                z_weight(i / DIM1) + z_weight(i % DIM1)
            };
            C64::from_polar(1.0, arg * z)
        })
        .collect()
}

/// Transform a propagation into the rotating frame of `frame`.
///
/// The returned copy carries the transformed unitary, states and
/// recomputed transverse observables; the input (laboratory) data is left
/// untouched. sigma_z expectations are preserved exactly.
pub fn to_rotating_frame(
    prop: &Propagation,
    frame: &FrameSpec,
    params: &DeviceParams,
) -> Result<Propagation> {
    let mut out = prop.clone();
    out.frame = *frame;
    if frame.frame == Frame::Laboratory || frame.rotation_frequency == 0.0 {
        return Ok(out);
    }
    let f = frame.rotation_frequency;
    let ph_end = frame_phases(prop.dim, f, prop.grid.t_end);
    let mut u = prop.unitary.clone();
    for i in 0..prop.dim {
        for j in 0..prop.dim {
            let v = u.get(i, j) * ph_end[i];
            u.set(i, j, v);
        }
    }
    out.unitary = u;
    if let (Some(times), Some(traj)) = (&prop.times, &prop.trajectory) {
        let new_traj: Vec<Vec<C64>> = times
            .iter()
            .zip(traj.iter())
            .map(|(&t, psi)| {
                let ph = frame_phases(prop.dim, f, t);
                psi.iter().zip(ph.iter()).map(|(a, p)| a * p).collect()
            })
            .collect();
        out.trajectory = Some(new_traj);
    }
    if prop.observables.is_some() {
        out.observables = Some(compute_observables(&out, params)?);
    }
    Ok(out)
}

/// Expectation of a single-qubit operator on qubit `q` of a product-space
/// state.
fn expect_single(psi: &[C64], dim: usize, q: usize, op: &CMatrix) -> f64 {
    if dim == DIM1 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..DIM1 {
            for j in 0..DIM1 {
                let o = op.get(i, j);
                if o != C64::new(0.0, 0.0) {
                    acc += psi[i].conj() * o * psi[j];
                }
            }
        }
        acc.re
    } else {
        let mut acc = C64::new(0.0, 0.0);
        for other in 0..DIM1 {
            for i in 0..DIM1 {
                for j in 0..DIM1 {
                    let o = op.get(i, j);
                    if o == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let (a, b) = if q == 0 {
                        (i * DIM1 + other, j * DIM1 + other)
                    } else {
                        (other * DIM1 + i, other * DIM1 + j)
                    };
                    acc += psi[a].conj() * o * psi[b];
                }
            }
        }
        acc.re
    }
}

/// Reduced logical amplitudes/populations of qubit `q`:
/// (rho00, rho11, rho01) over the logical pair.
fn logical_reduced(psi: &[C64], dim: usize, q: usize) -> (f64, f64, C64) {
    if dim == DIM1 {
        let a0 = psi[LOGICAL0];
        let a1 = psi[LOGICAL1];
        (a0.norm_sqr(), a1.norm_sqr(), a0 * a1.conj())
    } else {
        let mut p0 = 0.0;
        let mut p1 = 0.0;
        let mut coh = C64::new(0.0, 0.0);
        for other in 0..DIM1 {
            let (i0, i1) = if q == 0 {
                (LOGICAL0 * DIM1 + other, LOGICAL1 * DIM1 + other)
            } else {
                (other * DIM1 + LOGICAL0, other * DIM1 + LOGICAL1)
            };
            p0 += psi[i0].norm_sqr();
            p1 += psi[i1].norm_sqr();
            coh += psi[i0] * psi[i1].conj();
        }
        (p0, p1, coh)
    }
}

fn compute_observables(
    prop: &Propagation,
    params: &DeviceParams,
) -> Result<Vec<Vec<ObservablePoint>>> {
    let (times, traj, des) = match (&prop.times, &prop.trajectory, &prop.de_records) {
        (Some(t), Some(tr), Some(d)) => (t, tr, d),
        _ => return Err(SimError::Propagation("no trajectory recorded".into())),
    };
    let mut out = vec![Vec::with_capacity(times.len()); prop.n_qubits];
    // orbital-excited projector (diagonal in the frozen basis)
    let mut proj_e = CMatrix::zeros(DIM1);
    for idx in [2usize, 5, 6, 7] {
        proj_e.set(idx, idx, C64::new(1.0, 0.0));
    }
    for (k, ((&t, psi), de_row)) in times.iter().zip(traj.iter()).zip(des.iter()).enumerate() {
        let _ = k;
        for q in 0..prop.n_qubits {
            let szid_op = position_operator_z(de_row[q], params);
            let (p0, p1, coh) = logical_reduced(psi, prop.dim, q);
            out[q].push(ObservablePoint {
                t,
                sz_ff: p1 - p0,
                sx_ff: 2.0 * coh.re,
                sy_ff: -2.0 * coh.im,
                sz_id: expect_single(psi, prop.dim, q, &szid_op),
                pop_e: expect_single(psi, prop.dim, q, &proj_e),
            });
        }
    }
    Ok(out)
}

/// One point of a Bloch-sphere trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochPoint {
    pub t: f64,
    /// None when the logical population vanished (fully leaked state).
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub z: Option<f64>,
    pub leakage: f64,
}

/// Bloch vector of qubit `qubit` along the recorded trajectory: the state is
/// projected on the logical pair, renormalized, and complemented by its
/// leakage.
pub fn bloch_trajectory(prop: &Propagation, qubit: usize) -> Result<Vec<BlochPoint>> {
    let (times, traj) = match (&prop.times, &prop.trajectory) {
        (Some(t), Some(tr)) => (t, tr),
        _ => return Err(SimError::Propagation("no trajectory recorded".into())),
    };
    if qubit >= prop.n_qubits {
        return Err(SimError::Propagation(format!("no qubit {qubit}")));
    }
    let mut out = Vec::with_capacity(times.len());
    for (&t, psi) in times.iter().zip(traj.iter()) {
        let (p0, p1, coh) = logical_reduced(psi, prop.dim, qubit);
        let pop = p0 + p1;
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let leakage = (norm - pop).max(0.0) / norm.max(f64::MIN_POSITIVE);
        if pop < 1e-12 {
            out.push(BlochPoint { t, x: None, y: None, z: None, leakage });
        } else {
            out.push(BlochPoint {
                t,
                x: Some(2.0 * coh.re / pop),
                y: Some(-2.0 * coh.im / pop),
                z: Some((p1 - p0) / pop),
                leakage,
            });
        }
    }
    Ok(out)
}

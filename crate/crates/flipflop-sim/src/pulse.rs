//! Piecewise dc ramps and resonant ac drives that implement the gates.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Interpolation shape of a dc ramp segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RampShape {
    /// Straight-line interpolation.
    Linear,
    /// Quintic smoothstep (zero first and second derivatives at both ends).
    /// The gate builders use this; it suppresses the diabatic kick a linear
    /// ramp imprints on the spin-orbit subsystem by two orders of magnitude.
    Smoothstep,
}

/// One dc segment: delta_ez swept from `de_start` to `de_end` over
/// [`t_start`, `t_end`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RampSegment {
    pub t_start: f64,
    pub t_end: f64,
    pub de_start: f64,
    pub de_end: f64,
    pub shape: RampShape,
}

impl RampSegment {
    pub fn new(t_start: f64, t_end: f64, de_start: f64, de_end: f64, shape: RampShape) -> Self {
        RampSegment { t_start, t_end, de_start, de_end, shape }
    }

    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn is_static(&self) -> bool {
        self.de_start == self.de_end
    }

    /// Mean slew rate (V/m/s) of the segment envelope.
    pub fn mean_slew(&self) -> f64 {
        (self.de_end - self.de_start) / self.duration()
    }

    /// delta_ez at time `t` (clamped to the segment).
    pub fn de_at(&self, t: f64) -> f64 {
        let f = ((t - self.t_start) / self.duration()).clamp(0.0, 1.0);
        let s = match self.shape {
            RampShape::Linear => f,
            RampShape::Smoothstep => f * f * f * (10.0 + f * (-15.0 + 6.0 * f)),
        };
        self.de_start + (self.de_end - self.de_start) * s
    }
}

/// A resonant ac drive window. The instantaneous field is
/// `amplitude * env(t) * cos(omega t + phase)` for `t` in `[t_on, t_off]`,
/// zero outside. `env` ramps between 0 and 1 with raised-cosine flanks of
/// duration `ramp` inside the window (0 = rectangular).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcDrive {
    /// Peak amplitude (V/m).
    pub amplitude: f64,
    /// Angular frequency (rad/s).
    pub omega: f64,
    /// Phase offset (rad); the cosine argument uses absolute schedule time.
    pub phase: f64,
    pub t_on: f64,
    pub t_off: f64,
    /// Envelope flank duration (s).
    pub ramp: f64,
}

impl AcDrive {
    pub fn envelope(&self, t: f64) -> f64 {
        if t < self.t_on || t > self.t_off {
            return 0.0;
        }
        if self.ramp <= 0.0 {
            return 1.0;
        }
        if t < self.t_on + self.ramp {
            let f = (t - self.t_on) / self.ramp;
            0.5 * (1.0 - (std::f64::consts::PI * f).cos())
        } else if t > self.t_off - self.ramp {
            let f = (self.t_off - t) / self.ramp;
            0.5 * (1.0 - (std::f64::consts::PI * f).cos())
        } else {
            1.0
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let env = self.envelope(t);
        if env == 0.0 {
            0.0
        } else {
            self.amplitude * env * (self.omega * t + self.phase).cos()
        }
    }
}

/// The full piecewise control applied to one qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub dc_segments: Vec<RampSegment>,
    pub ac_drives: Vec<AcDrive>,
    pub total_time: f64,
}

impl PulseSchedule {
    pub fn new(dc_segments: Vec<RampSegment>, ac_drives: Vec<AcDrive>) -> Result<Self> {
        let total_time = dc_segments.last().map(|s| s.t_end).unwrap_or(0.0);
        let s = PulseSchedule { dc_segments, ac_drives, total_time };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dc_segments.is_empty() {
            return Err(SimError::Schedule("no dc segments".into()));
        }
        let mut t = self.dc_segments[0].t_start;
        if t != 0.0 {
            return Err(SimError::Schedule("schedule must start at t = 0".into()));
        }
        for (k, seg) in self.dc_segments.iter().enumerate() {
            if !(seg.t_end > seg.t_start) {
                return Err(SimError::Schedule(format!("segment {k} has non-positive duration")));
            }
            if (seg.t_start - t).abs() > 1e-15 * self.total_time.max(1e-12) {
                return Err(SimError::Schedule(format!(
                    "segment {k} not contiguous: starts at {} after {}",
                    seg.t_start, t
                )));
            }
            t = seg.t_end;
        }
        for d in &self.ac_drives {
            if d.amplitude < 0.0 {
                return Err(SimError::Schedule("drive amplitude must be >= 0".into()));
            }
            if !(d.t_off > d.t_on) {
                return Err(SimError::Schedule("drive window must have t_off > t_on".into()));
            }
        }
        Ok(())
    }

    /// A constant-field schedule (idling qubit).
    pub fn constant(de: f64, duration: f64) -> Result<Self> {
        PulseSchedule::new(
            vec![RampSegment::new(0.0, duration, de, de, RampShape::Linear)],
            vec![],
        )
    }

    /// (delta_ez, instantaneous ac value) at time `t`.
    pub fn evaluate(&self, t: f64) -> Result<(f64, f64)> {
        if t < 0.0 || t > self.total_time * (1.0 + 1e-12) {
            return Err(SimError::Schedule(format!(
                "t = {t} outside schedule [0, {}]",
                self.total_time
            )));
        }
        let de = self.de_at(t);
        let eac: f64 = self.ac_drives.iter().map(|d| d.value(t)).sum();
        Ok((de, eac))
    }

    /// delta_ez at time `t` (callers must pre-check bounds).
    pub(crate) fn de_at(&self, t: f64) -> f64 {
        for seg in &self.dc_segments {
            if t <= seg.t_end {
                return seg.de_at(t);
            }
        }
        self.dc_segments.last().unwrap().de_at(t)
    }

    /// Time-reversal symmetry defect of the dc profile:
    /// max_t |de(t) - de(total - t)| over a dense grid.
    pub fn dc_symmetry_defect(&self, n_samples: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..=n_samples {
            let t = self.total_time * (k as f64) / (n_samples as f64);
            let a = self.de_at(t);
            let b = self.de_at(self.total_time - t);
            worst = worst.max((a - b).abs());
        }
        worst
    }

    /// Shift all segment and drive times by `dt` (used to compose staged
    /// sequences).
    pub fn shifted(&self, dt: f64) -> PulseSchedule {
        let dc = self
            .dc_segments
            .iter()
            .map(|s| RampSegment { t_start: s.t_start + dt, t_end: s.t_end + dt, ..*s })
            .collect();
        let ac = self
            .ac_drives
            .iter()
            .map(|d| AcDrive { t_on: d.t_on + dt, t_off: d.t_off + dt, ..*d })
            .collect();
        PulseSchedule {
            dc_segments: dc,
            ac_drives: ac,
            total_time: self.total_time + dt,
        }
    }

    /// Concatenate another schedule after this one (its times are shifted).
    pub fn then(&self, next: &PulseSchedule) -> PulseSchedule {
        let shifted = next.shifted(self.total_time);
        let mut dc = self.dc_segments.clone();
        dc.extend(shifted.dc_segments);
        let mut ac = self.ac_drives.clone();
        ac.extend(shifted.ac_drives);
        PulseSchedule { dc_segments: dc, ac_drives: ac, total_time: shifted.total_time }
    }
}

/// Build the standard two-step sweep-and-return profile:
/// idle -> (tau1) -> int -> (tau2) -> ct, dwell, mirrored return.
pub fn sweep_and_return(
    de_idle: f64,
    de_int: f64,
    de_ct: f64,
    tau1: f64,
    tau2: f64,
    dwell: f64,
    shape: RampShape,
) -> Result<PulseSchedule> {
    let mut t = 0.0;
    let mut segs = Vec::with_capacity(5);
    let mut push = |t: &mut f64, dur: f64, a: f64, b: f64| {
        segs.push(RampSegment::new(*t, *t + dur, a, b, shape));
        *t += dur;
    };
    push(&mut t, tau1, de_idle, de_int);
    push(&mut t, tau2, de_int, de_ct);
    push(&mut t, dwell, de_ct, de_ct);
    push(&mut t, tau2, de_ct, de_int);
    push(&mut t, tau1, de_int, de_idle);
    PulseSchedule::new(segs, vec![])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rz_like() -> PulseSchedule {
        sweep_and_return(10000.0, 500.0, 290.0, 1.7e-9, 3.5e-9, 21.5e-9, RampShape::Linear)
            .unwrap()
    }

    #[test]
    fn schedule_starts_at_idle_with_no_drive() {
        let s = rz_like();
        let (de, eac) = s.evaluate(0.0).unwrap();
        assert_eq!(de, 10000.0);
        assert_eq!(eac, 0.0);
    }

    #[test]
    fn table_breakpoints() {
        let s = rz_like();
        let (de, _) = s.evaluate(1.7e-9).unwrap();
        assert_abs_diff_eq!(de, 500.0, epsilon = 1e-9);
        // mid-dwell
        let (de, _) = s.evaluate(1.7e-9 + 3.5e-9 + 10.75e-9).unwrap();
        assert_abs_diff_eq!(de, 290.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.total_time, 31.9e-9, epsilon = 1e-18);
    }

    #[test]
    fn dc_profile_continuous_and_symmetric() {
        for shape in [RampShape::Linear, RampShape::Smoothstep] {
            let s =
                sweep_and_return(10000.0, 500.0, 0.0, 1.7e-9, 3.5e-9, 41.5e-9, shape).unwrap();
            // continuity across boundaries
            for seg in &s.dc_segments {
                for tb in [seg.t_start, seg.t_end] {
                    let eps = 1e-15;
                    let a = s.de_at((tb - eps).max(0.0));
                    let b = s.de_at((tb + eps).min(s.total_time));
                    assert!((a - b).abs() < 1e-3);
                }
            }
            assert!(s.dc_symmetry_defect(2000) < 1e-9);
        }
    }

    #[test]
    fn out_of_range_time_rejected() {
        let s = rz_like();
        assert!(s.evaluate(-1e-12).is_err());
        assert!(s.evaluate(s.total_time + 1e-9).is_err());
    }

    #[test]
    fn drive_window_and_envelope() {
        let d = AcDrive {
            amplitude: 180.0,
            omega: 2.0 * std::f64::consts::PI * 11.2e9,
            phase: -std::f64::consts::FRAC_PI_2,
            t_on: 10e-9,
            t_off: 50e-9,
            ramp: 5e-9,
        };
        assert_eq!(d.value(9.9e-9), 0.0);
        assert_eq!(d.value(50.1e-9), 0.0);
        assert_abs_diff_eq!(d.envelope(30e-9), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.envelope(12.5e-9), 0.5, epsilon = 1e-12);
        // rectangular when ramp = 0
        let r = AcDrive { ramp: 0.0, ..d };
        assert_abs_diff_eq!(r.envelope(10e-9), 1.0, epsilon = 0.0);
    }

    #[test]
    fn smoothstep_endpoints_and_midpoint() {
        let seg = RampSegment::new(0.0, 1.0, 0.0, 100.0, RampShape::Smoothstep);
        assert_abs_diff_eq!(seg.de_at(0.0), 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(seg.de_at(1.0), 100.0, epsilon = 0.0);
        assert_abs_diff_eq!(seg.de_at(0.5), 50.0, epsilon = 1e-12);
        // zero slope at the ends
        let h = 1e-6;
        assert!((seg.de_at(h) - seg.de_at(0.0)).abs() < 1e-9);
        assert!((seg.de_at(1.0) - seg.de_at(1.0 - h)).abs() < 1e-9);
    }

    #[test]
    fn malformed_schedules_rejected() {
        // overlapping segments
        let bad = PulseSchedule::new(
            vec![
                RampSegment::new(0.0, 2e-9, 0.0, 1.0, RampShape::Linear),
                RampSegment::new(1e-9, 3e-9, 1.0, 2.0, RampShape::Linear),
            ],
            vec![],
        );
        assert!(bad.is_err());
        // zero-duration segment
        let bad = PulseSchedule::new(
            vec![RampSegment::new(0.0, 0.0, 0.0, 1.0, RampShape::Linear)],
            vec![],
        );
        assert!(bad.is_err());
        // negative drive amplitude
        let bad = PulseSchedule::new(
            vec![RampSegment::new(0.0, 1e-9, 0.0, 0.0, RampShape::Linear)],
            vec![AcDrive {
                amplitude: -1.0,
                omega: 1.0,
                phase: 0.0,
                t_on: 0.0,
                t_off: 1e-9,
                ramp: 0.0,
            }],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn concatenation_shifts_times() {
        let a = PulseSchedule::constant(10000.0, 5e-9).unwrap();
        let b = rz_like();
        let joined = a.then(&b);
        assert_abs_diff_eq!(joined.total_time, 5e-9 + 31.9e-9, epsilon = 1e-20);
        let (de, _) = joined.evaluate(5e-9 + 1.7e-9).unwrap();
        assert_abs_diff_eq!(de, 500.0, epsilon = 1e-9);
    }
}

//! Device parameters of a flip-flop qubit and two-qubit coupling geometry.

use serde::{Deserialize, Serialize};

use crate::constants::CONSTANTS;
use crate::error::{Result, SimError};

/// Physical and device constants of one qubit. Two-qubit systems use one
/// shared set (identical qubits).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceParams {
    /// Donor depth below the interface (m).
    pub d: f64,
    /// Static magnetic field (T).
    pub b0: f64,
    /// Tunnel coupling between donor and interface wells (Hz).
    pub vt: f64,
    /// Electron gyromagnetic ratio (Hz/T).
    pub gamma_e: f64,
    /// Nuclear gyromagnetic ratio (Hz/T).
    pub gamma_n: f64,
    /// Bulk hyperfine coupling (Hz).
    pub a0: f64,
    /// Hyperfine fit constant c (m/V).
    pub c_fit: f64,
    /// Relative shift of the electron g-factor at the interface.
    pub delta_gamma: f64,
    /// Vertical field at the ionization point (V/m); the origin for delta_ez.
    pub ez0: f64,
    /// Operating temperature (K), used by the thermal consistency check.
    pub t_op: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        DeviceParams {
            d: 15e-9,
            b0: 0.4,
            vt: 11.29e9,
            gamma_e: 27.97e9,
            gamma_n: 17.23e6,
            a0: 117e6,
            c_fit: 5.174e-4,
            delta_gamma: -0.002,
            ez0: 0.0,
            t_op: 0.1,
        }
    }
}

/// Non-fatal consistency findings from [`DeviceParams::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum DeviceWarning {
    /// (gamma_e + gamma_n) B0 / A0 at or below 10; the antiparallel-spin qubit
    /// basis assumption degrades.
    WeakZeeman { ratio: f64 },
    /// kB T/h reaches the qubit frequency; thermal occupation not negligible.
    ThermalOccupation { thermal_hz: f64, qubit_hz: f64 },
}

impl DeviceParams {
    /// Preset with the tunnel coupling used for the z-rotation gate.
    pub fn table_rz() -> Self {
        DeviceParams { vt: 11.29e9, ..Default::default() }
    }

    /// Preset with the tunnel coupling used for the Hadamard gate.
    pub fn table_hadamard() -> Self {
        DeviceParams { vt: 11.5e9, ..Default::default() }
    }

    /// Preset with the tunnel coupling used for the two-qubit gate.
    pub fn table_sqrt_iswap() -> Self {
        DeviceParams { vt: 11.58e9, ..Default::default() }
    }

    /// Hard invariants error; soft checks come back as warnings.
    pub fn validate(&self) -> Result<Vec<DeviceWarning>> {
        if !(self.d > 0.0) {
            return Err(SimError::Device("donor depth d must be positive".into()));
        }
        if !(self.b0 > 0.0) {
            return Err(SimError::Device("field b0 must be positive".into()));
        }
        if !(self.vt > 0.0) {
            return Err(SimError::Device("tunnel coupling vt must be positive".into()));
        }
        if !(self.gamma_e > self.gamma_n && self.gamma_n > 0.0) {
            return Err(SimError::Device("need gamma_e > gamma_n > 0".into()));
        }
        if !(self.a0 > 0.0) {
            return Err(SimError::Device("bulk hyperfine a0 must be positive".into()));
        }
        for (name, v) in [
            ("d", self.d),
            ("b0", self.b0),
            ("vt", self.vt),
            ("c_fit", self.c_fit),
            ("delta_gamma", self.delta_gamma),
            ("ez0", self.ez0),
            ("t_op", self.t_op),
        ] {
            if !v.is_finite() {
                return Err(SimError::Device(format!("{name} must be finite")));
            }
        }
        let mut warnings = Vec::new();
        let zeeman = (self.gamma_e + self.gamma_n) * self.b0;
        let ratio = zeeman / self.a0;
        if ratio <= 10.0 {
            warnings.push(DeviceWarning::WeakZeeman { ratio });
        }
        let thermal_hz = CONSTANTS.kb * self.t_op / CONSTANTS.h;
        let qubit_hz = (zeeman * zeeman + self.a0 * self.a0).sqrt();
        if thermal_hz >= qubit_hz {
            warnings.push(DeviceWarning::ThermalOccupation { thermal_hz, qubit_hz });
        }
        Ok(warnings)
    }
}

/// Geometry of a dipole-coupled qubit pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CouplingGeometry {
    /// Inter-qubit distance (m).
    pub r: f64,
    /// Relative permittivity of the host.
    pub eps_r: f64,
    /// Dipoles perpendicular to the separation vector (the only supported
    /// geometry).
    pub perpendicular_dipoles: bool,
}

impl Default for CouplingGeometry {
    fn default() -> Self {
        CouplingGeometry { r: 200e-9, eps_r: 11.7, perpendicular_dipoles: true }
    }
}

impl CouplingGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0) {
            return Err(SimError::Device("inter-qubit distance r must be positive".into()));
        }
        if !(self.eps_r > 1.0) {
            return Err(SimError::Device("relative permittivity must exceed 1".into()));
        }
        if !self.perpendicular_dipoles {
            return Err(SimError::Device(
                "only perpendicular dipole orientation is supported".into(),
            ));
        }
        Ok(())
    }
}

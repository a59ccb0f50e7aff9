//! Single- and two-qubit Hamiltonians of the flip-flop system, in Hz.
//!
//! The single-qubit Hamiltonian is the sum of an orbital term, the Zeeman
//! term (with the orbital-position-dependent g-factor shift) and the
//! hyperfine contact term, assembled in the frozen eight-state basis of
//! [`crate::basis`]. The two-qubit Hamiltonian adds the charge dipole-dipole
//! interaction.

use num_complex::Complex64 as C64;
use std::sync::OnceLock;

use crate::basis::{DIM1, DIM2, LOGICAL0, LOGICAL1, PERM};
use crate::constants::CONSTANTS;
use crate::device::{CouplingGeometry, DeviceParams};
use crate::error::{Result, SimError};
use crate::linalg::{CMatrix, HermitianEigen};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Tunable hyperfine coupling A(delta_ez) = A0 / (1 + exp(c * delta_ez)).
pub fn hyperfine_coupling(de: f64, params: &DeviceParams) -> f64 {
    params.a0 / (1.0 + (params.c_fit * de).exp())
}

/// Orbital splitting eps0 = sqrt(Vt^2 + (d e dEz / h)^2) in Hz.
pub fn orbital_splitting(de: f64, params: &DeviceParams) -> f64 {
    let det = params.d * CONSTANTS.e * de / CONSTANTS.h;
    (params.vt * params.vt + det * det).sqrt()
}

/// Flip-flop transition frequency eps_ff = sqrt(((ge+gn) B0)^2 + A^2) in Hz.
///
/// This is the closed-form estimate; the dressed splitting of the full
/// Hamiltonian (see [`logical_splitting`]) additionally carries the
/// g-factor-shift and orbital-coupling corrections of order 10 MHz.
pub fn flipflop_frequency(de: f64, params: &DeviceParams) -> f64 {
    let zeeman = (params.gamma_e + params.gamma_n) * params.b0;
    let a = hyperfine_coupling(de, params);
    (zeeman * zeeman + a * a).sqrt()
}

/// Charge dipole-dipole coupling g_dd = d^2 e^2 / (16 pi eps0 eps_r h r^3) in Hz.
pub fn dipole_coupling(params: &DeviceParams, geom: &CouplingGeometry) -> f64 {
    let num = params.d * params.d * CONSTANTS.e * CONSTANTS.e;
    let den = 16.0
        * std::f64::consts::PI
        * CONSTANTS.eps0
        * geom.eps_r
        * CONSTANTS.h
        * geom.r.powi(3);
    num / den
}

/// The nine static operator blocks the Hamiltonian is a linear combination of,
/// all in the frozen basis ordering.
struct BasisOps {
    /// sigma_z(orb) (x) 1 (x) 1
    mz: CMatrix,
    /// sigma_x(orb) (x) 1 (x) 1
    mx: CMatrix,
    /// 1 (x) S_z (x) 1
    msz: CMatrix,
    /// sigma_z(orb) (x) S_z (x) 1
    mzsz: CMatrix,
    /// sigma_x(orb) (x) S_z (x) 1
    mxsz: CMatrix,
    /// 1 (x) 1 (x) I_z
    miz: CMatrix,
    /// 1 (x) S.I
    msi: CMatrix,
    /// sigma_z(orb) (x) S.I
    mzsi: CMatrix,
    /// sigma_x(orb) (x) S.I
    mxsi: CMatrix,
}

fn two(rows: [[C64; 2]; 2]) -> CMatrix {
    CMatrix::from_fn(2, |i, j| rows[i][j])
}

fn basis_ops() -> &'static BasisOps {
    static OPS: OnceLock<BasisOps> = OnceLock::new();
    OPS.get_or_init(|| {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let id = CMatrix::identity(2);
        // orbital basis (g, e)
        let sz = two([[one, zero], [zero, -one]]);
        let sx = two([[zero, one], [one, zero]]);
        // electron spin-1/2, basis (down, up)
        let esz = two([[c(-0.5), zero], [zero, c(0.5)]]);
        let esx = two([[zero, c(0.5)], [c(0.5), zero]]);
        let esy = two([[zero, i * c(0.5)], [-i * c(0.5), zero]]);
        // nuclear spin-1/2, basis (Up, Down)
        let niz = two([[c(0.5), zero], [zero, c(-0.5)]]);
        let nix = two([[zero, c(0.5)], [c(0.5), zero]]);
        let niy = two([[zero, -i * c(0.5)], [i * c(0.5), zero]]);

        // S.I on electron (x) nucleus
        let mut sdoti = esx.kron(&nix);
        sdoti.add_scaled(&esy.kron(&niy), one);
        sdoti.add_scaled(&esz.kron(&niz), one);

        let spin_id = CMatrix::identity(4);
        let permute = |m: CMatrix| CMatrix::from_fn(DIM1, |a, b| m.get(PERM[a], PERM[b]));

        BasisOps {
            mz: permute(sz.kron(&spin_id)),
            mx: permute(sx.kron(&spin_id)),
            msz: permute(id.kron(&esz.kron(&id))),
            mzsz: permute(sz.kron(&esz.kron(&id))),
            mxsz: permute(sx.kron(&esz.kron(&id))),
            miz: permute(id.kron(&id.kron(&niz))),
            msi: permute(id.kron(&sdoti)),
            mzsi: permute(sz.kron(&sdoti)),
            mxsi: permute(sx.kron(&sdoti)),
        }
    })
}

/// Coefficients (a, b) of the position operator sigma_z(id) = a sigma_z + b sigma_x
/// in the orbital eigenbasis; a^2 + b^2 = 1.
pub fn position_coefficients(de: f64, params: &DeviceParams) -> (f64, f64) {
    let eps0 = orbital_splitting(de, params);
    let det = params.d * CONSTANTS.e * de / CONSTANTS.h;
    (det / eps0, params.vt / eps0)
}

/// The electron position operator sigma_z(id), tensored with the spin identity,
/// as an 8x8 matrix in the frozen basis. Eigenvalues are +/-1.
pub fn position_operator_z(de: f64, params: &DeviceParams) -> CMatrix {
    let ops = basis_ops();
    let (a, b) = position_coefficients(de, params);
    let mut m = CMatrix::zeros(DIM1);
    m.add_scaled(&ops.mz, c(a));
    m.add_scaled(&ops.mx, c(b));
    m
}

/// Assemble the single-qubit Hamiltonian (8x8, Hz) at dc detuning `de` (V/m)
/// and instantaneous ac field value `eac` (V/m).
pub fn build_single_hamiltonian(de: f64, eac: f64, params: &DeviceParams) -> Result<CMatrix> {
    if !de.is_finite() || !eac.is_finite() {
        return Err(SimError::Numerical("non-finite field input".into()));
    }
    let ops = basis_ops();
    let eps0 = orbital_splitting(de, params);
    let (a, b) = position_coefficients(de, params);
    let drive = params.d * CONSTANTS.e * eac / (2.0 * CONSTANTS.h);
    let hyper = hyperfine_coupling(de, params);
    let ze = params.gamma_e * params.b0;
    let zn = params.gamma_n * params.b0;
    let dg = params.delta_gamma;

    let mut h = CMatrix::zeros(DIM1);
    // orbital: -eps0/2 sz - drive * (a sz + b sx)
    h.add_scaled(&ops.mz, c(-0.5 * eps0 - drive * a));
    h.add_scaled(&ops.mx, c(-drive * b));
    // Zeeman: ge B0 [1 + dg (1 + sz_id)/2] Sz - gn B0 Iz
    h.add_scaled(&ops.msz, c(ze * (1.0 + 0.5 * dg)));
    h.add_scaled(&ops.mzsz, c(ze * dg * 0.5 * a));
    h.add_scaled(&ops.mxsz, c(ze * dg * 0.5 * b));
    h.add_scaled(&ops.miz, c(-zn));
    // hyperfine: A (1 - sz_id)/2 (S.I)
    h.add_scaled(&ops.msi, c(hyper * 0.5));
    h.add_scaled(&ops.mzsi, c(-hyper * 0.5 * a));
    h.add_scaled(&ops.mxsi, c(-hyper * 0.5 * b));
    Ok(h)
}

/// Assemble the two-qubit Hamiltonian (64x64, Hz) for identical qubits at
/// per-qubit detunings and drive values, coupled at distance `geom.r`.
pub fn build_two_qubit_hamiltonian(
    de1: f64,
    de2: f64,
    eac1: f64,
    eac2: f64,
    params: &DeviceParams,
    geom: &CouplingGeometry,
) -> Result<CMatrix> {
    geom.validate()?;
    let h1 = build_single_hamiltonian(de1, eac1, params)?;
    let h2 = build_single_hamiltonian(de2, eac2, params)?;
    let id = CMatrix::identity(DIM1);
    let g = dipole_coupling(params, geom);
    let s1 = position_operator_z(de1, params);
    let s2 = position_operator_z(de2, params);

    let mut h = h1.kron(&id);
    h.add_scaled(&id.kron(&h2), c(1.0));
    let mut hint = CMatrix::identity(DIM2);
    hint.add_scaled(&s1.kron(&id), c(1.0));
    hint.add_scaled(&id.kron(&s2), c(1.0));
    hint.add_scaled(&s1.kron(&s2), c(1.0));
    h.add_scaled(&hint, c(g));
    Ok(h)
}

/// Dressed splitting of the logical transition: the eigenvalue gap between the
/// two stationary states with the largest overlap on |0> and |1>.
///
/// This is the operative qubit frequency (rotating frames, drive resonance);
/// it differs from [`flipflop_frequency`] by the g-factor-shift and
/// orbital-dressing corrections.
pub fn logical_splitting(de: f64, params: &DeviceParams) -> Result<f64> {
    let h = build_single_hamiltonian(de, 0.0, params)?;
    let eig = HermitianEigen::new(&h)?;
    let find = |idx: usize| {
        let mut best = 0;
        let mut w = 0.0;
        for k in 0..DIM1 {
            let o = eig.vectors.get(idx, k).norm_sqr();
            if o > w {
                w = o;
                best = k;
            }
        }
        best
    };
    let k0 = find(LOGICAL0);
    let k1 = find(LOGICAL1);
    if k0 == k1 {
        return Err(SimError::Numerical(
            "logical states map to the same eigenvector".into(),
        ));
    }
    Ok(eig.values[k1] - eig.values[k0])
}

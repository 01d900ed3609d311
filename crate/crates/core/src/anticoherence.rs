//! Polarization moments and anticoherence certification.
//!
//! A state is t-anticoherent when every directional moment ⟨(S·n)^k⟩,
//! k ≤ t, is independent of the unit direction n. Orders 1 and 2 have
//! exact criteria: S = 0, and the second-moment tensor equal to
//! N(N+2)/12 times the identity. Higher orders are certified by sampling
//! a fixed set of 32 probe directions (the 12 icosahedron vertices plus
//! 20 seeded pseudorandom directions), since no closed constants exist
//! beyond the Casimir-fixed k = 2.

use nalgebra::{Matrix3, Vector3};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::polyhedra::icosahedron_vertices;
use crate::spin::{stokes_along, stokes_x, stokes_y, stokes_z, SpinState, C64, CMat};
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-8;

/// Stokes vector, second-moment tensor, and the certified anticoherence
/// order of a state.
#[derive(Debug, Clone)]
pub struct MomentReport {
    /// (⟨S_x⟩, ⟨S_y⟩, ⟨S_z⟩).
    pub stokes_vector: Vector3<f64>,
    /// Hermitian tensor with entries ⟨S_i S_j⟩.
    pub stokes_tensor: Matrix3<C64>,
    /// Largest certified order t (0 when even ⟨S⟩ ≠ 0).
    pub order: usize,
    /// Cap the certification ran to; order == cap means "at least cap".
    pub cap: usize,
    pub tolerance: f64,
    /// c_k = ⟨(S·n)^k⟩ for k = 1..=order (direction-independent values).
    pub directional_constants: Vec<f64>,
}

/// ⟨S⟩ of the state.
pub fn stokes_vector(state: &SpinState) -> Vector3<f64> {
    let n = state.n_quanta();
    let ops = [stokes_x(n), stokes_y(n), stokes_z(n)];
    Vector3::from_fn(|i, _| {
        crate::spin::expectation(state, &ops[i]).expect("Stokes expectations are real")
    })
}

/// Hermitian tensor with entries ⟨S_i S_j⟩ (not symmetrized; the
/// antisymmetric part carries ±i⟨S_k⟩/2).
pub fn stokes_tensor(state: &SpinState) -> Matrix3<C64> {
    let n = state.n_quanta();
    let ops = [stokes_x(n), stokes_y(n), stokes_z(n)];
    Matrix3::from_fn(|i, j| {
        crate::spin::expectation_product(state, &ops[i], &ops[j])
            .expect("operator dimensions match the state")
    })
}

/// ⟨(S·n)^k⟩ for a unit direction n.
pub fn directional_moment(state: &SpinState, n: &Vector3<f64>, k: usize) -> Result<f64> {
    let norm = n.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnitAxis { norm });
    }
    if k == 0 {
        return Ok(1.0);
    }
    let op = stokes_along(state.n_quanta(), n)?;
    let mut v = state.amplitudes().clone();
    for _ in 0..k {
        v = op.matrix() * v;
    }
    let val = state.amplitudes().dotc(&v);
    if val.im.abs() > 1e-9 * (1.0 + val.re.abs()) {
        return Err(Error::ComplexExpectation { imag: val.im });
    }
    Ok(val.re)
}

/// The fixed probe set used for orders t >= 3: the 12 icosahedron vertices
/// plus 20 pseudorandom unit vectors from a seeded generator, so results
/// are reproducible.
pub fn probe_directions() -> Vec<Vector3<f64>> {
    probe_directions_with_seed(0)
}

pub fn probe_directions_with_seed(seed: u64) -> Vec<Vector3<f64>> {
    let mut dirs = icosahedron_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let z: f64 = rng.gen::<f64>() * 2.0 - 1.0;
        let phi: f64 = rng.gen::<f64>() * 2.0 * PI;
        let r = (1.0 - z * z).sqrt();
        dirs.push(Vector3::new(r * phi.cos(), r * phi.sin(), z));
    }
    dirs
}

fn max_entry_norm(m: &Matrix3<C64>) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Certify the anticoherence order up to `t_max`. Orders 1 and 2 use the
/// exact Stokes criteria; higher orders use the probe set, accepting order
/// k when the spread of ⟨(S·n)^k⟩ over the probes stays below
/// tol · max(1, |mean|).
pub fn anticoherence_order(state: &SpinState, t_max: usize, tol: f64) -> Result<MomentReport> {
    anticoherence_order_seeded(state, t_max, tol, 0)
}

/// Same as [`anticoherence_order`] with an explicit seed for the random
/// half of the probe set.
pub fn anticoherence_order_seeded(
    state: &SpinState,
    t_max: usize,
    tol: f64,
    seed: u64,
) -> Result<MomentReport> {
    let n = state.n_quanta() as f64;
    let s = stokes_vector(state);
    let tensor = stokes_tensor(state);

    let mut order = 0;
    let mut constants = Vec::new();

    if t_max >= 1 && s.norm() < tol {
        order = 1;
        constants.push(0.0);
    }
    let iso = n * (n + 2.0) / 12.0;
    if order == 1 && t_max >= 2 {
        let dev = tensor - Matrix3::identity().map(|x: f64| C64::new(x * iso, 0.0));
        if max_entry_norm(&dev) < tol * iso {
            order = 2;
            constants.push(iso);
        }
    }
    if order == 2 && t_max >= 3 {
        let probes = probe_directions_with_seed(seed);
        'orders: for k in 3..=t_max {
            let vals: Vec<f64> = probes
                .iter()
                .map(|d| directional_moment(state, d, k))
                .collect::<Result<_>>()?;
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let spread = vals.iter().fold(0.0f64, |a, v| a.max((v - mean).abs()));
            if spread < tol * mean.abs().max(1.0) {
                order = k;
                constants.push(mean);
            } else {
                break 'orders;
            }
        }
    }

    Ok(MomentReport {
        stokes_vector: s,
        stokes_tensor: tensor,
        order,
        cap: t_max,
        tolerance: tol,
        directional_constants: constants,
    })
}

/// S·n as an explicit matrix, re-exported for convenience in callers that
/// build their own moments.
pub fn stokes_projection_matrix(n_quanta: usize, n: &Vector3<f64>) -> Result<CMat> {
    Ok(stokes_along(n_quanta, n)?.matrix().clone())
}

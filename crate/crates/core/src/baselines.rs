//! Single-parameter and classical baselines: NOON-state variance bounds,
//! the three-NOON combined bound, the shot-noise reference, and the
//! multiparameter advantage ratio.

use nalgebra::Vector3;
use std::f64::consts::PI;

use crate::qfim::trace_bound;
use crate::spin::{stokes_along, RotationSpec, SpinState, C64};
use crate::{Error, Result};

/// (|N,0> + |0,N>)/sqrt(2).
pub fn noon_state(n_quanta: usize) -> Result<SpinState> {
    if n_quanta == 0 {
        return Err(Error::Infeasible("NOON state needs N >= 1".into()));
    }
    let mut amps = vec![C64::new(0.0, 0.0); n_quanta + 1];
    let h = C64::new(1.0 / 2.0f64.sqrt(), 0.0);
    amps[0] = h;
    amps[n_quanta] = h;
    SpinState::new(n_quanta, amps, false)
}

/// Which of the zyz generators the variance refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichAngle {
    Phi,
    Theta,
    Psi,
}

/// Sensitivity axis u = (sin a cos b, sin a sin b, cos a) of a rotated
/// NOON state.
pub fn sensitivity_axis(a: f64, b: f64) -> Vector3<f64> {
    Vector3::new(a.sin() * b.cos(), a.sin() * b.sin(), a.cos())
}

/// The estimation axis each generator projects onto: n_z for Phi,
/// n_Phi = (-sin Phi, cos Phi, 0) for Theta, and the zyz rotation axis
/// (sin T cos Phi, sin T sin Phi, cos T) for Psi.
pub fn generator_axis(which: WhichAngle, cap_phi: f64, cap_theta: f64) -> Vector3<f64> {
    match which {
        WhichAngle::Phi => Vector3::new(0.0, 0.0, 1.0),
        WhichAngle::Theta => Vector3::new(-cap_phi.sin(), cap_phi.cos(), 0.0),
        WhichAngle::Psi => Vector3::new(
            cap_theta.sin() * cap_phi.cos(),
            cap_theta.sin() * cap_phi.sin(),
            cap_theta.cos(),
        ),
    }
}

/// Closed form N^2 (u.n)^2 + N |u x n|^2 for the fourfold variance of
/// S.n on a NOON state aligned along u.
pub fn noon_variance_formula(n_quanta: usize, u: &Vector3<f64>, axis: &Vector3<f64>) -> f64 {
    let nf = n_quanta as f64;
    let dot = u.dot(axis);
    nf * nf * dot * dot + nf * u.cross(axis).norm_squared()
}

/// Numeric 4 Var[H_which] in a NOON state whose sensitivity axis is
/// u(a, b). The state is prepared as exp(-i b S_z) exp(-i a S_y)|NOON>,
/// which carries the z-aligned NOON onto u.
pub fn rotated_noon_h_variance(
    n_quanta: usize,
    a: f64,
    b: f64,
    which: WhichAngle,
    cap_phi: f64,
    cap_theta: f64,
) -> Result<f64> {
    let state = crate::spin::apply_rotation(
        &noon_state(n_quanta)?,
        &RotationSpec::EulerZyz {
            phi: b,
            theta: a,
            psi: 0.0,
        },
    )?;
    let op = stokes_along(n_quanta, &generator_axis(which, cap_phi, cap_theta))?;
    let mean = crate::spin::expectation(&state, &op)?;
    let second = crate::spin::expectation_product(&state, &op, &op)?.re;
    Ok(4.0 * (second - mean * mean))
}

/// Combined variance bound for three single-parameter NOON schemes with
/// N/3 quanta each. `printed` keeps the source formula's 1/N inner
/// factors; `rederived` uses 1/M with M = N/3 per copy. The two disagree
/// and both are reported; neither is silently preferred.
#[derive(Debug, Clone, Copy)]
pub struct ThreeNoonBound {
    pub printed: f64,
    pub rederived: f64,
    /// True when N/3 < 3, below the validated NOON regime (warning, not
    /// an error).
    pub below_validated_range: bool,
}

pub fn three_noon_bound(n_quanta: usize, theta1: f64, theta2: f64) -> Result<ThreeNoonBound> {
    if n_quanta == 0 || n_quanta % 3 != 0 {
        return Err(Error::Divisibility {
            n: n_quanta,
            divisor: 3,
        });
    }
    let nf = n_quanta as f64;
    let inner = |theta: f64, denom_n: f64| -> f64 {
        1.0 / (theta.cos().powi(2) + theta.sin().powi(2) / denom_n)
    };
    let pref = (3.0 / nf).powi(2);
    let printed = pref * (1.0 + inner(theta1, nf) + inner(theta2, nf));
    let m = nf / 3.0;
    let rederived = pref * (1.0 + inner(theta1, m) + inner(theta2, m));
    Ok(ThreeNoonBound {
        printed,
        rederived,
        below_validated_range: n_quanta / 3 < 3,
    })
}

/// three_noon_bound(N,0,0) / trace_bound(N, pi/2) = 3 + 6/N.
pub fn advantage_ratio(n_quanta: usize) -> Result<f64> {
    let noon = three_noon_bound(n_quanta, 0.0, 0.0)?;
    Ok(noon.printed / trace_bound(n_quanta, PI / 2.0)?)
}

/// Shot-noise reference: the directional 4 Var[S.n] of the spin-coherent
/// state |N,0> plus the flat analytic constant N quoted for coherent
/// inputs.
#[derive(Debug, Clone, Copy)]
pub struct ShotNoiseReference {
    pub directional: f64,
    pub coherent_constant: f64,
}

pub fn shot_noise_reference(n_quanta: usize, axis: &Vector3<f64>) -> Result<ShotNoiseReference> {
    let norm = axis.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnitAxis { norm });
    }
    let mut amps = vec![C64::new(0.0, 0.0); n_quanta + 1];
    amps[n_quanta] = C64::new(1.0, 0.0);
    let state = SpinState::new(n_quanta, amps, false)?;
    let op = stokes_along(n_quanta, axis)?;
    let mean = crate::spin::expectation(&state, &op)?;
    let second = crate::spin::expectation_product(&state, &op, &op)?.re;
    Ok(ShotNoiseReference {
        directional: 4.0 * (second - mean * mean),
        coherent_constant: n_quanta as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    MultiAnticoherent,
    ThreeNoon,
    ShotNoise,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::MultiAnticoherent => "multi-anticoherent",
            Scheme::ThreeNoon => "three-noon",
            Scheme::ShotNoise => "shot-noise",
        }
    }
}

/// One row of the scheme-comparison table.
#[derive(Debug, Clone, Copy)]
pub struct ComparisonRow {
    pub scheme: Scheme,
    pub n_quanta: usize,
    pub angles: [f64; 2],
    /// Sum of the three single-angle variance bounds, radians squared.
    pub variance_sum_bound: f64,
}

/// Rows comparing the multiparameter bound at Euler angle `big_theta`
/// against the three-NOON bound at (theta1, theta2) and the shot-noise
/// reference (three copies of N/3 quanta at 1/(N/3) each).
pub fn comparison_rows(
    n_quanta: usize,
    theta1: f64,
    theta2: f64,
    big_theta: f64,
) -> Result<Vec<ComparisonRow>> {
    let noon = three_noon_bound(n_quanta, theta1, theta2)?;
    Ok(vec![
        ComparisonRow {
            scheme: Scheme::MultiAnticoherent,
            n_quanta,
            angles: [big_theta, 0.0],
            variance_sum_bound: trace_bound(n_quanta, big_theta)?,
        },
        ComparisonRow {
            scheme: Scheme::ThreeNoon,
            n_quanta,
            angles: [theta1, theta2],
            variance_sum_bound: noon.printed,
        },
        ComparisonRow {
            scheme: Scheme::ShotNoise,
            n_quanta,
            angles: [0.0, 0.0],
            variance_sum_bound: 9.0 / n_quanta as f64,
        },
    ])
}

//! Shared fixtures for unit tests.

use rand::prelude::*;

use crate::spin::{RotationSpec, SpinState, C64};

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// sqrt(2/3)|1,3> + 1/sqrt(3)|4,0>: Majorana stars at the tetrahedron
/// vertices.
pub(crate) fn tetrahedron_state() -> SpinState {
    let f = (2.0f64 / 3.0).sqrt();
    let g = 1.0 / 3.0f64.sqrt();
    SpinState::new(
        4,
        vec![c(0.0, 0.0), c(f, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(g, 0.0)],
        false,
    )
    .unwrap()
}

/// (|N,0> + |0,N>)/sqrt(2).
pub(crate) fn noon_state(n: usize) -> SpinState {
    let mut amps = vec![c(0.0, 0.0); n + 1];
    let h = 1.0 / 2.0f64.sqrt();
    amps[0] = c(h, 0.0);
    amps[n] = c(h, 0.0);
    SpinState::new(n, amps, false).unwrap()
}

pub(crate) fn random_state(n: usize, rng: &mut impl Rng) -> SpinState {
    let amps: Vec<C64> = (0..=n)
        .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    SpinState::new(n, amps, true).unwrap()
}

pub(crate) fn random_spec(rng: &mut impl Rng) -> RotationSpec {
    use std::f64::consts::PI;
    match rng.gen_range(0..3) {
        0 => RotationSpec::EulerZyz {
            phi: rng.gen::<f64>() * 2.0 * PI,
            theta: rng.gen::<f64>() * PI,
            psi: rng.gen::<f64>() * 2.0 * PI,
        },
        1 => RotationSpec::EulerXyz {
            alpha: rng.gen::<f64>() * 2.0 * PI,
            beta: rng.gen::<f64>() * PI,
            gamma: rng.gen::<f64>() * 2.0 * PI,
        },
        _ => RotationSpec::AxisAngle {
            chi: rng.gen::<f64>() * 2.0 * PI,
            theta: rng.gen::<f64>() * PI,
            phi: rng.gen::<f64>() * 2.0 * PI,
        },
    }
}

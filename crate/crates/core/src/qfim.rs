//! Quantum Fisher information for three-parameter rotation estimation.
//!
//! The probe |psi(theta)> = U(theta)|psi0> has generators
//! H_k = i (d_k U) U-dagger, and the pure-state QFIM is 4 Cov{H_l, H_m}
//! in the rotated state. For euler-zyz the generators have closed forms;
//! for the other parametrizations they are computed by central-difference
//! Frechet derivatives with one Richardson extrapolation level.

use nalgebra::{DVector, Matrix3, Vector3};

use crate::spin::{
    rotation_unitary, stokes_along, stokes_x, stokes_y, stokes_z, HermitianOperator,
    RotationSpec, SpinState, C64, CMat, CVec,
};
use crate::{Error, Result};

/// Finite-difference step for Frechet derivatives of the rotation unitary.
const FD_STEP: f64 = 1e-5;
/// Allowed anti-Hermitian residual of a numeric generator before
/// symmetrization.
const GENERATOR_RESIDUAL_TOL: f64 = 1e-7;

/// One Hermitian generator per estimated angle.
#[derive(Debug, Clone)]
pub struct GeneratorTriple {
    pub h: [HermitianOperator; 3],
}

/// QFIM with derived quantities; inverse fields are populated by [`crb`].
#[derive(Debug, Clone)]
pub struct QfimReport {
    /// Information per squared radian.
    pub matrix: Matrix3<f64>,
    pub determinant: f64,
    pub inverse: Option<Matrix3<f64>>,
    pub trace_of_inverse: Option<f64>,
    pub condition_number: f64,
    pub spec: RotationSpec,
    pub state_descriptor: String,
}

impl QfimReport {
    /// Scale-free singularity criterion: det below 1e-12 (trace/3)^3.
    pub fn is_singular(&self) -> bool {
        let scale = (self.matrix.trace() / 3.0).max(0.0);
        self.determinant < 1e-12 * scale.powi(3)
    }
}

fn max_norm(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Central difference of U along angle k with one Richardson level:
/// (4 D_{h/2} - D_h) / 3.
fn unitary_derivative(n_quanta: usize, spec: &RotationSpec, k: usize) -> Result<CMat> {
    let diff = |h: f64| -> Result<CMat> {
        let mut ap = spec.angles();
        let mut am = spec.angles();
        ap[k] += h;
        am[k] -= h;
        let up = rotation_unitary(n_quanta, &spec.with_angles(ap))?;
        let um = rotation_unitary(n_quanta, &spec.with_angles(am))?;
        Ok((up - um) / C64::new(2.0 * h, 0.0))
    };
    let d_h = diff(FD_STEP)?;
    let d_h2 = diff(FD_STEP / 2.0)?;
    Ok((d_h2 * C64::new(4.0, 0.0) - d_h) / C64::new(3.0, 0.0))
}

fn numeric_generator(n_quanta: usize, spec: &RotationSpec, k: usize) -> Result<HermitianOperator> {
    let du = unitary_derivative(n_quanta, spec, k)?;
    let u = rotation_unitary(n_quanta, spec)?;
    let h = du * u.adjoint() * C64::i();
    let residual = max_norm(&(&h - h.adjoint()));
    if residual > GENERATOR_RESIDUAL_TOL * (1.0 + n_quanta as f64) {
        return Err(Error::DerivativeResidual { residual });
    }
    let sym = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    HermitianOperator::new(sym)
}

/// Generators H_k = i (d_k U) U-dagger for each of the three angles of the
/// spec. euler-zyz uses the closed forms; the other kinds are numeric.
pub fn h_generators(n_quanta: usize, spec: &RotationSpec) -> Result<GeneratorTriple> {
    spec.validate()?;
    match *spec {
        RotationSpec::EulerZyz { phi, theta, .. } => {
            let sx = stokes_x(n_quanta);
            let sy = stokes_y(n_quanta);
            let sz = stokes_z(n_quanta);
            let h_phi = sz.clone();
            let h_theta =
                HermitianOperator::linear_combination(&[(-phi.sin(), &sx), (phi.cos(), &sy)])?;
            let h_psi = HermitianOperator::linear_combination(&[
                (theta.sin() * phi.cos(), &sx),
                (theta.sin() * phi.sin(), &sy),
                (theta.cos(), &sz),
            ])?;
            Ok(GeneratorTriple {
                h: [h_phi, h_theta, h_psi],
            })
        }
        _ => Ok(GeneratorTriple {
            h: [
                numeric_generator(n_quanta, spec, 0)?,
                numeric_generator(n_quanta, spec, 1)?,
                numeric_generator(n_quanta, spec, 2)?,
            ],
        }),
    }
}

fn descriptor(state: &SpinState) -> String {
    format!("N={} pure state", state.n_quanta())
}

/// QFIM via 4 Cov{H_l, H_m} in the rotated state R(spec)|psi0>.
pub fn qfim(state0: &SpinState, spec: &RotationSpec) -> Result<QfimReport> {
    let gens = h_generators(state0.n_quanta(), spec)?;
    let rotated = crate::spin::apply_rotation(state0, spec)?;
    let means: Vec<f64> = gens
        .h
        .iter()
        .map(|op| crate::spin::expectation(&rotated, op))
        .collect::<Result<_>>()?;
    let mut matrix = Matrix3::zeros();
    for l in 0..3 {
        for m in l..3 {
            let prod = crate::spin::expectation_product(&rotated, &gens.h[l], &gens.h[m])?;
            let cov = prod.re - means[l] * means[m];
            matrix[(l, m)] = 4.0 * cov;
            matrix[(m, l)] = 4.0 * cov;
        }
    }
    let eig = matrix.symmetric_eigenvalues();
    let max_abs = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let min_abs = eig.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    let condition_number = if min_abs > 0.0 {
        max_abs / min_abs
    } else {
        f64::INFINITY
    };
    Ok(QfimReport {
        matrix,
        determinant: matrix.determinant(),
        inverse: None,
        trace_of_inverse: None,
        condition_number,
        spec: *spec,
        state_descriptor: descriptor(state0),
    })
}

/// QFIM through the symmetric-logarithmic-derivative route: derivative
/// states d_k|psi(theta)> by central differences, then
/// 4 Re[<d_l psi|d_m psi> - <d_l psi|psi><psi|d_m psi>]. Used as an
/// independent cross-check of [`qfim`].
pub fn qfim_via_sld(state0: &SpinState, spec: &RotationSpec) -> Result<Matrix3<f64>> {
    let n = state0.n_quanta();
    let psi = {
        let u = rotation_unitary(n, spec)?;
        u * state0.amplitudes()
    };
    let derivative = |k: usize| -> Result<CVec> {
        let diff = |h: f64| -> Result<CVec> {
            let mut ap = spec.angles();
            let mut am = spec.angles();
            ap[k] += h;
            am[k] -= h;
            let vp = rotation_unitary(n, &spec.with_angles(ap))? * state0.amplitudes();
            let vm = rotation_unitary(n, &spec.with_angles(am))? * state0.amplitudes();
            Ok((vp - vm) / C64::new(2.0 * h, 0.0))
        };
        let d_h = diff(FD_STEP)?;
        let d_h2 = diff(FD_STEP / 2.0)?;
        Ok((d_h2 * C64::new(4.0, 0.0) - d_h) / C64::new(3.0, 0.0))
    };
    let d: Vec<CVec> = (0..3).map(derivative).collect::<Result<_>>()?;
    let mut out = Matrix3::zeros();
    for l in 0..3 {
        for m in l..3 {
            let overlap = d[l].dotc(&d[m]);
            let berry = d[l].dotc(&psi) * psi.dotc(&d[m]);
            let val = 4.0 * (overlap - berry).re;
            out[(l, m)] = val;
            out[(m, l)] = val;
        }
    }
    Ok(out)
}

/// Populate the Cramér-Rao fields (inverse and its trace) of a report.
/// Fails with the determinant value when the matrix is singular under the
/// scale-free threshold.
pub fn crb(report: &QfimReport) -> Result<QfimReport> {
    if report.is_singular() {
        return Err(Error::Singular {
            det: report.determinant,
        });
    }
    let inverse = report
        .matrix
        .try_inverse()
        .ok_or(Error::Singular {
            det: report.determinant,
        })?;
    let mut out = report.clone();
    out.trace_of_inverse = Some(inverse.trace());
    out.inverse = Some(inverse);
    Ok(out)
}

/// (N(N+2)/3) [[1,0,cos T],[0,1,0],[cos T,0,1]]: the zyz QFIM shared by
/// every 2-anticoherent probe.
pub fn anticoherent_qfim_closed_form(n_quanta: usize, theta: f64) -> Matrix3<f64> {
    let s = n_quanta as f64 * (n_quanta as f64 + 2.0) / 3.0;
    let c = theta.cos();
    Matrix3::new(s, 0.0, s * c, 0.0, s, 0.0, s * c, 0.0, s)
}

/// 3/(N(N+2)) (1 + 2/sin^2 T): trace of the inverse closed-form QFIM.
pub fn trace_bound(n_quanta: usize, theta: f64) -> Result<f64> {
    let s2 = theta.sin().powi(2);
    if s2 < 1e-18 {
        return Err(Error::DivergentBound { theta });
    }
    let nf = n_quanta as f64;
    Ok(3.0 / (nf * (nf + 2.0)) * (1.0 + 2.0 / s2))
}

/// Single-axis QFI I = 4 Var[S.n], cross-checked against the
/// derivative-state form on exp(+i chi S.n)|psi> at chi = 0.
pub fn single_param_qfi(state: &SpinState, n: &Vector3<f64>) -> Result<f64> {
    let op = stokes_along(state.n_quanta(), n)?;
    let mean = crate::spin::expectation(state, &op)?;
    let second = crate::spin::expectation_product(state, &op, &op)?.re;
    let primary = 4.0 * (second - mean * mean);

    // Independent route: finite-difference derivative of the rotated state.
    let diff = |h: f64| -> CVec {
        let up = crate::spin::exp_i_hermitian(&op, h);
        let um = crate::spin::exp_i_hermitian(&op, -h);
        (up * state.amplitudes() - um * state.amplitudes()) / C64::new(2.0 * h, 0.0)
    };
    let d = (diff(FD_STEP / 2.0) * C64::new(4.0, 0.0) - diff(FD_STEP)) / C64::new(3.0, 0.0);
    let alt = 4.0 * (d.dotc(&d).re - d.dotc(state.amplitudes()).norm_sqr());
    let tol = 1e-9 * (1.0 + primary.abs());
    if (primary - alt).abs() > tol {
        return Err(Error::CrossCheck(format!(
            "single-parameter QFI routes disagree: {primary} vs {alt}"
        )));
    }
    Ok(primary)
}

/// Variance of the angle estimate from the projector P = |psi><psi|
/// measured on exp(+i chi S.n)|psi>: Var[P]/|d<P>/d chi|^2, evaluated
/// analytically through the spectrum of S.n.
pub fn projection_variance(state: &SpinState, n: &Vector3<f64>, chi: f64) -> Result<f64> {
    let op = stokes_along(state.n_quanta(), n)?;
    let eig = nalgebra::SymmetricEigen::new(op.matrix().clone());
    let weights: DVector<f64> = DVector::from_iterator(
        state.dim(),
        eig.eigenvectors
            .column_iter()
            .map(|v| v.dotc(state.amplitudes()).norm_sqr()),
    );
    let mut f = C64::new(0.0, 0.0);
    let mut fp = C64::new(0.0, 0.0);
    for (k, p) in weights.iter().enumerate() {
        let lambda = eig.eigenvalues[k];
        let phase = C64::new(0.0, chi * lambda).exp();
        f += phase * *p;
        fp += phase * C64::new(0.0, lambda) * *p;
    }
    let mean = f.norm_sqr();
    let slope = 2.0 * (f.conj() * fp).re;
    if slope.abs() < 1e-12 {
        return Err(Error::VanishingDerivative { chi });
    }
    Ok(mean * (1.0 - mean) / (slope * slope))
}

/// Reparametrization of an information matrix: J^T I J.
pub fn jacobian_transform(j: &Matrix3<f64>, i: &Matrix3<f64>) -> Matrix3<f64> {
    j.transpose() * i * j
}

/// Evenly spaced sweep ranges for the three angles; a count of 1 pins the
/// angle at `start`.
#[derive(Debug, Clone, Copy)]
pub struct ScanGrid {
    pub start: [f64; 3],
    pub stop: [f64; 3],
    pub counts: [usize; 3],
}

impl ScanGrid {
    fn axis_values(&self, k: usize) -> Vec<f64> {
        let c = self.counts[k];
        if c == 1 {
            return vec![self.start[k]];
        }
        let step = (self.stop[k] - self.start[k]) / (c - 1) as f64;
        (0..c).map(|i| self.start[k] + i as f64 * step).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub angles: [f64; 3],
    pub det: f64,
    /// None marks a singular point (written as "inf" downstream).
    pub trace_inv: Option<f64>,
}

/// Evaluate det and Tr[I^-1] over a grid of the spec's angles, in
/// lexicographic row order. Singular points carry no trace value.
pub fn singularity_scan(
    state: &SpinState,
    kind: &RotationSpec,
    grid: &ScanGrid,
) -> Result<Vec<ScanRow>> {
    if grid.counts.iter().any(|&c| c == 0) {
        return Err(Error::InvalidGrid("every axis needs at least one point".into()));
    }
    for k in 0..3 {
        if !grid.start[k].is_finite() || !grid.stop[k].is_finite() {
            return Err(Error::InvalidGrid("non-finite bounds".into()));
        }
        if grid.counts[k] > 1 && grid.stop[k] == grid.start[k] {
            return Err(Error::InvalidGrid(format!(
                "axis {k} has {} points but zero extent",
                grid.counts[k]
            )));
        }
    }
    let (a1, a2, a3) = (
        grid.axis_values(0),
        grid.axis_values(1),
        grid.axis_values(2),
    );
    let mut rows = Vec::with_capacity(a1.len() * a2.len() * a3.len());
    for &x in &a1 {
        for &y in &a2 {
            for &z in &a3 {
                let spec = kind.with_angles([x, y, z]);
                let report = qfim(state, &spec)?;
                let trace_inv = match crb(&report) {
                    Ok(full) => full.trace_of_inverse,
                    Err(Error::Singular { .. }) => None,
                    Err(e) => return Err(e),
                };
                rows.push(ScanRow {
                    angles: [x, y, z],
                    det: report.determinant,
                    trace_inv,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::bloch_rotation;
    use crate::testutil::{noon_state, random_state, tetrahedron_state};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn op_close(a: &HermitianOperator, b: &HermitianOperator, tol: f64) -> bool {
        max_norm(&(a.matrix() - b.matrix())) < tol
    }

    fn random_axis(rng: &mut impl Rng) -> Vector3<f64> {
        let z: f64 = rng.gen::<f64>() * 2.0 - 1.0;
        let phi: f64 = rng.gen::<f64>() * 2.0 * PI;
        let r = (1.0 - z * z).sqrt();
        Vector3::new(r * phi.cos(), r * phi.sin(), z)
    }

    #[test]
    fn zyz_generators_closed_form() {
        let n = 5;
        let theta = 0.7;
        let gens = h_generators(
            n,
            &RotationSpec::EulerZyz {
                phi: 0.0,
                theta,
                psi: 1.3,
            },
        )
        .unwrap();
        assert!(op_close(&gens.h[0], &stokes_z(n), 1e-12));
        assert!(op_close(&gens.h[1], &stokes_y(n), 1e-12));
        let want = HermitianOperator::linear_combination(&[
            (theta.sin(), &stokes_x(n)),
            (theta.cos(), &stokes_z(n)),
        ])
        .unwrap();
        assert!(op_close(&gens.h[2], &want, 1e-12));

        let degenerate = h_generators(
            n,
            &RotationSpec::EulerZyz {
                phi: 0.4,
                theta: 0.0,
                psi: 2.0,
            },
        )
        .unwrap();
        assert!(op_close(&degenerate.h[2], &degenerate.h[0], 1e-12));
    }

    #[test]
    fn numeric_generators_match_zyz_closed_form() {
        let n = 6;
        let spec = RotationSpec::EulerZyz {
            phi: 0.9,
            theta: 1.1,
            psi: -0.4,
        };
        let closed = h_generators(n, &spec).unwrap();
        for k in 0..3 {
            let numeric = numeric_generator(n, &spec, k).unwrap();
            assert!(
                op_close(&numeric, &closed.h[k], 1e-7),
                "generator {k} deviates"
            );
        }
    }

    #[test]
    fn axis_angle_chi_generator_is_minus_projection() {
        let n = 4;
        let (theta, phi) = (0.8, 2.1);
        let spec = RotationSpec::AxisAngle {
            chi: 0.6,
            theta,
            phi,
        };
        let gens = h_generators(n, &spec).unwrap();
        let axis = spec.axis().unwrap();
        let proj = stokes_along(n, &axis).unwrap();
        let minus =
            HermitianOperator::linear_combination(&[(-1.0, &proj)]).unwrap();
        assert!(op_close(&gens.h[0], &minus, 1e-8));
    }

    #[test]
    fn qfim_tetrahedron_values() {
        let tetra = tetrahedron_state();
        let r = qfim(
            &tetra,
            &RotationSpec::EulerZyz {
                phi: 0.3,
                theta: PI / 2.0,
                psi: 1.7,
            },
        )
        .unwrap();
        assert!((r.matrix - Matrix3::identity() * 8.0).amax() < 1e-7);

        let r2 = qfim(
            &tetra,
            &RotationSpec::EulerZyz {
                phi: 0.3,
                theta: PI / 3.0,
                psi: 1.7,
            },
        )
        .unwrap();
        for i in 0..3 {
            assert!((r2.matrix[(i, i)] - 8.0).abs() < 1e-7);
        }
        assert!((r2.matrix[(0, 2)] - 4.0).abs() < 1e-7);
        assert!((r2.matrix[(1, 0)]).abs() < 1e-7);
        assert!((r2.matrix[(1, 2)]).abs() < 1e-7);
    }

    #[test]
    fn qfim_phi_psi_independence_for_anticoherent_state() {
        let tetra = tetrahedron_state();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let theta = 1.234;
        let want = anticoherent_qfim_closed_form(4, theta);
        for _ in 0..6 {
            let spec = RotationSpec::EulerZyz {
                phi: rng.gen::<f64>() * 2.0 * PI,
                theta,
                psi: rng.gen::<f64>() * 2.0 * PI,
            };
            let r = qfim(&tetra, &spec).unwrap();
            assert!((r.matrix - want).amax() < 1e-7);
        }
    }

    #[test]
    fn polarized_state_singular_at_theta_zero() {
        let mut amps = vec![C64::new(0.0, 0.0); 5];
        amps[4] = C64::new(1.0, 0.0);
        let state = SpinState::new(4, amps, false).unwrap();
        let r = qfim(
            &state,
            &RotationSpec::EulerZyz {
                phi: 0.2,
                theta: 0.0,
                psi: 0.9,
            },
        )
        .unwrap();
        assert!(r.determinant.abs() < 1e-12);
        assert!(r.is_singular());
        assert!(matches!(crb(&r), Err(Error::Singular { .. })));
    }

    #[test]
    fn crb_inverse_matches_closed_form() {
        let tetra = tetrahedron_state();
        let theta = PI / 3.0;
        let r = crb(&qfim(
            &tetra,
            &RotationSpec::EulerZyz {
                phi: 0.0,
                theta,
                psi: 0.0,
            },
        )
        .unwrap())
        .unwrap();
        let inv = r.inverse.unwrap();
        let pref = 3.0 / (4.0 * 6.0);
        let s2 = theta.sin().powi(2);
        assert!((inv[(0, 0)] - pref / s2).abs() < 1e-9);
        assert!((inv[(2, 2)] - pref / s2).abs() < 1e-9);
        assert!((inv[(0, 2)] + pref * theta.cos() / s2).abs() < 1e-9);
        assert!((inv[(1, 1)] - pref).abs() < 1e-9);
        let check = r.matrix * inv;
        assert!((check - Matrix3::identity()).amax() < 1e-6);

        let half = crb(&qfim(
            &tetra,
            &RotationSpec::EulerZyz {
                phi: 0.0,
                theta: PI / 2.0,
                psi: 0.0,
            },
        )
        .unwrap())
        .unwrap();
        assert!((half.trace_of_inverse.unwrap() - 0.375).abs() < 1e-9);
    }

    #[test]
    fn closed_form_and_trace_bound_values() {
        assert!((anticoherent_qfim_closed_form(4, PI / 2.0) - Matrix3::identity() * 8.0).amax()
            < 1e-12);
        assert!(
            (anticoherent_qfim_closed_form(12, PI / 2.0) - Matrix3::identity() * 56.0).amax()
                < 1e-12
        );
        assert!(anticoherent_qfim_closed_form(7, 0.0).determinant().abs() < 1e-12);

        assert!((trace_bound(4, PI / 2.0).unwrap() - 0.375).abs() < 1e-15);
        assert!((trace_bound(12, PI / 2.0).unwrap() - 3.0 / 56.0).abs() < 1e-15);
        assert!(matches!(
            trace_bound(4, 0.0),
            Err(Error::DivergentBound { .. })
        ));
        assert!(matches!(
            trace_bound(4, PI),
            Err(Error::DivergentBound { .. })
        ));
    }

    #[test]
    fn single_param_qfi_values() {
        let noon = noon_state(4);
        let z = Vector3::new(0.0, 0.0, 1.0);
        assert!((single_param_qfi(&noon, &z).unwrap() - 16.0).abs() < 1e-9);

        // At N=2 the m=0 and m=2 amplitudes couple through (S.n)^2, adding a
        // phi-dependent cross term; the polar-axis value still equals N^2,
        // but the directional law below requires N >= 3.
        let noon2 = noon_state(2);
        assert!((single_param_qfi(&noon2, &z).unwrap() - 4.0).abs() < 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [3usize, 4, 7] {
            let noon = noon_state(n);
            let nf = n as f64;
            for _ in 0..8 {
                let axis = random_axis(&mut rng);
                let theta = axis.z.clamp(-1.0, 1.0).acos();
                let want = nf * nf * theta.cos().powi(2) + nf * theta.sin().powi(2);
                let got = single_param_qfi(&noon, &axis).unwrap();
                assert!((got - want).abs() < 1e-9, "N={n}: {got} vs {want}");
            }
        }

        let tetra = tetrahedron_state();
        for _ in 0..5 {
            let axis = random_axis(&mut rng);
            assert!((single_param_qfi(&tetra, &axis).unwrap() - 8.0).abs() < 1e-9);
        }
    }

    #[test]
    fn projection_variance_values() {
        let z = Vector3::new(0.0, 0.0, 1.0);
        let noon = noon_state(4);
        let v = projection_variance(&noon, &z, 1e-3).unwrap();
        assert!((v - 1.0 / 16.0).abs() < 1e-4 / 16.0);

        let tetra = tetrahedron_state();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let axis = random_axis(&mut rng);
            let v = projection_variance(&tetra, &axis, 1e-3).unwrap();
            assert!((v - 0.125).abs() < 1e-4 * 0.125, "{v}");
        }
        assert!(matches!(
            projection_variance(&tetra, &z, 0.0),
            Err(Error::VanishingDerivative { .. })
        ));
    }

    #[test]
    fn two_path_equality_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..12 {
            let n = rng.gen_range(1..=12);
            let state = random_state(n, &mut rng);
            let spec = crate::testutil::random_spec(&mut rng);
            let direct = qfim(&state, &spec).unwrap().matrix;
            let sld = qfim_via_sld(&state, &spec).unwrap();
            assert!(
                (direct - sld).amax() < 1e-8 * (1.0 + direct.amax()),
                "N={n} mismatch {:e}",
                (direct - sld).amax()
            );
        }
    }

    #[test]
    fn qfim_is_positive_semidefinite_and_amhm_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let n = rng.gen_range(1..=10);
            let state = random_state(n, &mut rng);
            let spec = crate::testutil::random_spec(&mut rng);
            let r = qfim(&state, &spec).unwrap();
            assert!((r.matrix - r.matrix.transpose()).amax() < 1e-9);
            for ev in r.matrix.symmetric_eigenvalues().iter() {
                assert!(*ev > -1e-9, "eigenvalue {ev}");
            }
            if let Ok(full) = crb(&r) {
                let ti = full.trace_of_inverse.unwrap();
                assert!(ti >= 9.0 / r.matrix.trace() - 1e-9);
            }
        }
    }

    #[test]
    fn zyz_scan_det_tracks_sin_squared() {
        let tetra = tetrahedron_state();
        let grid = ScanGrid {
            start: [0.4, 0.15, 0.9],
            stop: [0.4, PI - 0.15, 0.9],
            counts: [1, 25, 1],
        };
        let kind = RotationSpec::EulerZyz {
            phi: 0.0,
            theta: 0.0,
            psi: 0.0,
        };
        let rows = singularity_scan(&tetra, &kind, &grid).unwrap();
        assert_eq!(rows.len(), 25);
        let ratios: Vec<f64> = rows
            .iter()
            .map(|r| r.det / r.angles[1].sin().powi(2))
            .collect();
        let first = ratios[0];
        for r in &ratios {
            assert!((r - first).abs() < 1e-6 * first.abs());
        }
    }

    #[test]
    fn axis_angle_det_vanishes_at_chi_zero() {
        let tetra = tetrahedron_state();
        let kind = RotationSpec::AxisAngle {
            chi: 0.0,
            theta: 0.0,
            phi: 0.0,
        };
        let grid = ScanGrid {
            start: [1e-5, 1.0, 0.5],
            stop: [1.0, 1.0, 0.5],
            counts: [12, 1, 1],
        };
        let rows = singularity_scan(&tetra, &kind, &grid).unwrap();
        // det (~ chi^4) shrinks toward chi = 0 and the smallest chi is
        // flagged singular.
        assert!(rows[0].det.abs() < 1e-6 * rows[11].det.abs());
        assert!(rows[0].trace_inv.is_none());
    }

    #[test]
    fn jacobian_transform_basics() {
        let i = Matrix3::new(8.0, 0.0, 4.0, 0.0, 8.0, 0.0, 4.0, 0.0, 8.0);
        assert_eq!(jacobian_transform(&Matrix3::identity(), &i), i);
        let j = Matrix3::from_diagonal(&Vector3::new(2.0, 1.0, 1.0));
        let t = jacobian_transform(&j, &i);
        assert!((t.determinant() - 4.0 * i.determinant()).abs() < 1e-9);
        assert!((t[(0, 0)] - 4.0 * i[(0, 0)]).abs() < 1e-12);
        assert!((t[(0, 2)] - 2.0 * i[(0, 2)]).abs() < 1e-12);
    }

    /// zyz angles of an active rotation matrix M = Rz(phi) Ry(theta) Rz(psi).
    fn zyz_from_matrix(m: &Matrix3<f64>) -> [f64; 3] {
        let theta = m[(2, 2)].clamp(-1.0, 1.0).acos();
        let phi = m[(1, 2)].atan2(m[(0, 2)]);
        let psi = m[(2, 1)].atan2(-m[(2, 0)]);
        [phi, theta, psi]
    }

    #[test]
    fn jacobian_reparametrization_xyz_vs_zyz() {
        let tetra = tetrahedron_state();
        let xyz = RotationSpec::EulerXyz {
            alpha: 0.7,
            beta: 1.2,
            gamma: -0.5,
        };
        // Map xyz angles to the zyz angles that realize the same Bloch
        // rotation.
        let zyz_of = |a: [f64; 3]| -> [f64; 3] {
            let spec = xyz.with_angles(a);
            zyz_from_matrix(bloch_rotation(&spec).unwrap().matrix())
        };
        // Sanity: the extracted zyz angles reproduce the rotation.
        let z0 = zyz_of(xyz.angles());
        let zyz_spec = RotationSpec::EulerZyz {
            phi: z0[0],
            theta: z0[1],
            psi: z0[2],
        };
        assert!(
            (bloch_rotation(&zyz_spec).unwrap().matrix()
                - bloch_rotation(&xyz).unwrap().matrix())
            .amax()
                < 1e-12
        );

        // Numeric Jacobian d(zyz)/d(xyz).
        let h = 1e-6;
        let mut j = Matrix3::zeros();
        for col in 0..3 {
            let mut ap = xyz.angles();
            let mut am = xyz.angles();
            ap[col] += h;
            am[col] -= h;
            let zp = zyz_of(ap);
            let zm = zyz_of(am);
            for row in 0..3 {
                j[(row, col)] = (zp[row] - zm[row]) / (2.0 * h);
            }
        }
        let i_zyz = qfim(&tetra, &zyz_spec).unwrap().matrix;
        let i_xyz = qfim(&tetra, &xyz).unwrap().matrix;
        let transformed = jacobian_transform(&j, &i_zyz);
        assert!(
            (transformed - i_xyz).amax() < 1e-6 * (1.0 + i_xyz.amax()),
            "deviation {:e}",
            (transformed - i_xyz).amax()
        );
    }
}

//! Fixed-N two-mode Fock (Dicke) state algebra: states, Stokes operator
//! matrices, SU(2) rotation unitaries, expectation values, and the classical
//! Rodrigues rotation matrix.
//!
//! Basis convention: index m = 0..N labels the ket |m, N-m⟩, with m counting
//! the quanta in mode a. All matrices are indexed accordingly.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Default tolerance for algebraic identities (unitarity, Casimir, ...).
pub const ALGEBRA_TOL: f64 = 1e-10;
/// Default tolerance for state-level checks.
pub const STATE_TOL: f64 = 1e-9;

/// Pure state of N quanta in two bosonic modes, expanded over the Dicke
/// basis |m, N-m⟩ for m = 0..N.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    n_quanta: usize,
    amplitudes: CVec,
}

impl SpinState {
    /// Builds a state from N and N+1 complex amplitudes. With `normalize`
    /// the vector is rescaled to unit norm; otherwise the norm must already
    /// be 1 within 1e-9.
    pub fn new(n_quanta: usize, amplitudes: Vec<C64>, normalize: bool) -> Result<Self> {
        if amplitudes.len() != n_quanta + 1 {
            return Err(Error::AmplitudeCount {
                want: n_quanta + 1,
                got: amplitudes.len(),
            });
        }
        let mut v = CVec::from_vec(amplitudes);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        if normalize {
            v /= C64::new(norm, 0.0);
        } else if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            n_quanta,
            amplitudes: v,
        })
    }

    /// The basis ket |m, N-m⟩.
    pub fn basis_ket(n_quanta: usize, m: usize) -> Self {
        assert!(m <= n_quanta);
        let mut v = CVec::zeros(n_quanta + 1);
        v[m] = C64::new(1.0, 0.0);
        Self {
            n_quanta,
            amplitudes: v,
        }
    }

    pub(crate) fn from_vector_unchecked(n_quanta: usize, amplitudes: CVec) -> Self {
        Self {
            n_quanta,
            amplitudes,
        }
    }

    pub fn n_quanta(&self) -> usize {
        self.n_quanta
    }

    pub fn dim(&self) -> usize {
        self.n_quanta + 1
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    pub fn amplitude(&self, m: usize) -> C64 {
        self.amplitudes[m]
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        if self.n_quanta != other.n_quanta {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Rephases so that the largest-modulus amplitude is real positive.
    pub fn fix_global_phase(&mut self) {
        let mut best = 0usize;
        let mut best_mod = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm() > best_mod {
                best_mod = a.norm();
                best = i;
            }
        }
        let phase = self.amplitudes[best] / C64::new(best_mod, 0.0);
        let correction = phase.conj();
        self.amplitudes *= correction;
    }
}

/// Hermitian matrix over the Dicke basis; checked to equal its conjugate
/// transpose within 1e-12 at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMat,
}

impl HermitianOperator {
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        let dev = (&mat - mat.adjoint()).map(|x| x.norm()).max();
        if dev > 1e-12 {
            return Err(Error::NonHermitian { dev });
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_unchecked(mat: CMat) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// Real linear combination Σ w_i O_i of Hermitian operators.
    pub fn linear_combination(terms: &[(f64, &HermitianOperator)]) -> Result<Self> {
        let dim = terms
            .first()
            .map(|(_, op)| op.dim())
            .ok_or(Error::DimensionMismatch { left: 0, right: 0 })?;
        let mut acc = CMat::zeros(dim, dim);
        for (w, op) in terms {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: op.dim(),
                });
            }
            acc += op.matrix() * C64::new(*w, 0.0);
        }
        Ok(Self { mat: acc })
    }
}

/// A parametrization of SO(3)/SU(2) plus parameter values.
///
/// Sign conventions follow the two cited forms: the Euler products use
/// exp(-i angle generator), the axis-angle form uses exp(+i chi S.n) with
/// axis n = (sin theta cos phi, sin theta sin phi, cos theta).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RotationSpec {
    EulerZyz { phi: f64, theta: f64, psi: f64 },
    EulerXyz { alpha: f64, beta: f64, gamma: f64 },
    AxisAngle { chi: f64, theta: f64, phi: f64 },
}

impl RotationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.angles().iter().all(|a| a.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFiniteAngles)
        }
    }

    pub fn angles(&self) -> [f64; 3] {
        match *self {
            RotationSpec::EulerZyz { phi, theta, psi } => [phi, theta, psi],
            RotationSpec::EulerXyz { alpha, beta, gamma } => [alpha, beta, gamma],
            RotationSpec::AxisAngle { chi, theta, phi } => [chi, theta, phi],
        }
    }

    pub fn with_angles(&self, a: [f64; 3]) -> Self {
        match self {
            RotationSpec::EulerZyz { .. } => RotationSpec::EulerZyz {
                phi: a[0],
                theta: a[1],
                psi: a[2],
            },
            RotationSpec::EulerXyz { .. } => RotationSpec::EulerXyz {
                alpha: a[0],
                beta: a[1],
                gamma: a[2],
            },
            RotationSpec::AxisAngle { .. } => RotationSpec::AxisAngle {
                chi: a[0],
                theta: a[1],
                phi: a[2],
            },
        }
    }

    /// Rotation axis for the axis-angle kind.
    pub fn axis(&self) -> Option<Vector3<f64>> {
        match *self {
            RotationSpec::AxisAngle { theta, phi, .. } => Some(Vector3::new(
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            )),
            _ => None,
        }
    }
}

/// 3x3 real orthogonal matrix with determinant +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    mat: Matrix3<f64>,
}

impl Rotation3 {
    pub fn new(mat: Matrix3<f64>) -> Result<Self> {
        let residual = (mat.transpose() * mat - Matrix3::identity()).amax();
        let det_dev = (mat.determinant() - 1.0).abs();
        if residual > ALGEBRA_TOL || det_dev > ALGEBRA_TOL {
            return Err(Error::NotARotation {
                residual: residual.max(det_dev),
            });
        }
        Ok(Self { mat })
    }

    pub fn identity() -> Self {
        Self {
            mat: Matrix3::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.mat
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            mat: self.mat * other.mat,
        }
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.mat * v
    }

    pub fn inverse(&self) -> Self {
        Self {
            mat: self.mat.transpose(),
        }
    }
}

fn check_unit_axis(axis: &Vector3<f64>) -> Result<()> {
    let norm = axis.norm();
    if (norm - 1.0).abs() > ALGEBRA_TOL {
        return Err(Error::NonUnitAxis { norm });
    }
    Ok(())
}

/// Stokes operator S_x over m = 0..N.
pub fn stokes_x(n_quanta: usize) -> HermitianOperator {
    let dim = n_quanta + 1;
    let mut mat = CMat::zeros(dim, dim);
    for m in 0..n_quanta {
        let v = (((m + 1) * (n_quanta - m)) as f64).sqrt() / 2.0;
        mat[(m + 1, m)] = C64::new(v, 0.0);
        mat[(m, m + 1)] = C64::new(v, 0.0);
    }
    HermitianOperator::from_unchecked(mat)
}

/// Stokes operator S_y, with sign fixed by S_y = -i(a†b - b†a)/2 and a
/// acting on the first index.
pub fn stokes_y(n_quanta: usize) -> HermitianOperator {
    let dim = n_quanta + 1;
    let mut mat = CMat::zeros(dim, dim);
    for m in 0..n_quanta {
        let v = (((m + 1) * (n_quanta - m)) as f64).sqrt() / 2.0;
        mat[(m + 1, m)] = C64::new(0.0, -v);
        mat[(m, m + 1)] = C64::new(0.0, v);
    }
    HermitianOperator::from_unchecked(mat)
}

/// Stokes operator S_z with diagonal entries m - N/2.
pub fn stokes_z(n_quanta: usize) -> HermitianOperator {
    let dim = n_quanta + 1;
    let half = n_quanta as f64 / 2.0;
    let mat = CMat::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::new(i as f64 - half, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    HermitianOperator::from_unchecked(mat)
}

/// Total angular momentum S_0 = (N/2) 1.
pub fn stokes_zero(n_quanta: usize) -> HermitianOperator {
    let dim = n_quanta + 1;
    let half = n_quanta as f64 / 2.0;
    HermitianOperator::from_unchecked(CMat::identity(dim, dim) * C64::new(half, 0.0))
}

/// S·n for a unit axis n.
pub fn stokes_along(n_quanta: usize, axis: &Vector3<f64>) -> Result<HermitianOperator> {
    check_unit_axis(axis)?;
    HermitianOperator::linear_combination(&[
        (axis.x, &stokes_x(n_quanta)),
        (axis.y, &stokes_y(n_quanta)),
        (axis.z, &stokes_z(n_quanta)),
    ])
}

/// exp(i t H) for Hermitian H, via eigendecomposition. Diagonal generators
/// take the direct phase path.
pub fn exp_i_hermitian(op: &HermitianOperator, t: f64) -> CMat {
    let dim = op.dim();
    let mat = op.matrix();
    let mut off_diag = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                off_diag = off_diag.max(mat[(i, j)].norm());
            }
        }
    }
    if off_diag == 0.0 {
        return CMat::from_fn(dim, dim, |i, j| {
            if i == j {
                (C64::new(0.0, t) * mat[(i, i)]).exp()
            } else {
                C64::new(0.0, 0.0)
            }
        });
    }
    let eig = nalgebra::SymmetricEigen::new(mat.clone());
    let phases = CMat::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::new(0.0, t * eig.eigenvalues[i]).exp()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// SU(2) rotation unitary of dimension N+1 for the given spec.
pub fn rotation_unitary(n_quanta: usize, spec: &RotationSpec) -> Result<CMat> {
    spec.validate()?;
    match *spec {
        RotationSpec::EulerZyz { phi, theta, psi } => {
            let rz1 = exp_i_hermitian(&stokes_z(n_quanta), -phi);
            let ry = exp_i_hermitian(&stokes_y(n_quanta), -theta);
            let rz2 = exp_i_hermitian(&stokes_z(n_quanta), -psi);
            Ok(rz1 * ry * rz2)
        }
        RotationSpec::EulerXyz { alpha, beta, gamma } => {
            let rx = exp_i_hermitian(&stokes_x(n_quanta), -alpha);
            let ry = exp_i_hermitian(&stokes_y(n_quanta), -beta);
            let rz = exp_i_hermitian(&stokes_z(n_quanta), -gamma);
            Ok(rx * ry * rz)
        }
        RotationSpec::AxisAngle { chi, .. } => {
            let axis = spec.axis().expect("axis-angle spec has an axis");
            let gen = stokes_along(n_quanta, &axis)?;
            Ok(exp_i_hermitian(&gen, chi))
        }
    }
}

/// R(spec)|psi⟩, renormalized against accumulated roundoff.
pub fn apply_rotation(state: &SpinState, spec: &RotationSpec) -> Result<SpinState> {
    let u = rotation_unitary(state.n_quanta(), spec)?;
    let mut v = u * state.amplitudes();
    let norm = v.norm();
    v /= C64::new(norm, 0.0);
    Ok(SpinState::from_vector_unchecked(state.n_quanta(), v))
}

/// ⟨psi|op|psi⟩ for Hermitian op; errors if the imaginary residue exceeds
/// 1e-10 (signals a non-Hermitian input).
pub fn expectation(state: &SpinState, op: &HermitianOperator) -> Result<f64> {
    if op.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: op.dim(),
        });
    }
    let v = op.matrix() * state.amplitudes();
    let e = state.amplitudes().dotc(&v);
    if e.im.abs() > 1e-10 {
        return Err(Error::ComplexExpectation { imag: e.im });
    }
    Ok(e.re)
}

/// ⟨psi|A B|psi⟩, complex in general.
pub fn expectation_product(
    state: &SpinState,
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<C64> {
    if a.dim() != state.dim() || b.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: a.dim().max(b.dim()),
        });
    }
    let bv = b.matrix() * state.amplitudes();
    let av = a.matrix() * state.amplitudes();
    Ok(av.dotc(&bv))
}

/// The Rodrigues rotation matrix in the cited sign convention: for the
/// unitary exp(+i chi S·n), the Stokes vector transforms as S -> R S with
/// this R.
pub fn rodrigues(chi: f64, axis: &Vector3<f64>) -> Result<Rotation3> {
    check_unit_axis(axis)?;
    let (nx, ny, nz) = (axis.x, axis.y, axis.z);
    let c = chi.cos();
    let s = chi.sin();
    let k = 1.0 - c;
    let mat = Matrix3::new(
        c + nx * nx * k,
        nx * ny * k + nz * s,
        nx * nz * k - ny * s,
        ny * nx * k - nz * s,
        c + ny * ny * k,
        ny * nz * k + nx * s,
        nz * nx * k + ny * s,
        nz * ny * k - nx * s,
        c + nz * nz * k,
    );
    Rotation3::new(mat)
}

/// The classical rotation matrix matching `rotation_unitary(spec)`: for any
/// state, ⟨S⟩ on the rotated state equals this matrix times ⟨S⟩, and the
/// second-moment tensor transforms by conjugation. Composed from Rodrigues
/// factors; the orientation per spec kind is pinned by the covariance tests.
pub fn bloch_rotation(spec: &RotationSpec) -> Result<Rotation3> {
    spec.validate()?;
    let ex = Vector3::new(1.0, 0.0, 0.0);
    let ey = Vector3::new(0.0, 1.0, 0.0);
    let ez = Vector3::new(0.0, 0.0, 1.0);
    match *spec {
        RotationSpec::EulerZyz { phi, theta, psi } => Ok(rodrigues(-phi, &ez)?
            .compose(&rodrigues(-theta, &ey)?)
            .compose(&rodrigues(-psi, &ez)?)),
        RotationSpec::EulerXyz { alpha, beta, gamma } => Ok(rodrigues(-alpha, &ex)?
            .compose(&rodrigues(-beta, &ey)?)
            .compose(&rodrigues(-gamma, &ez)?)),
        RotationSpec::AxisAngle { chi, .. } => {
            rodrigues(chi, &spec.axis().expect("axis-angle spec has an axis"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anticoherence;
    use crate::testutil::{c, random_spec, random_state, tetrahedron_state};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn make_state_normalizes() {
        let s = SpinState::new(2, vec![c(1.0, 0.0); 3], true).unwrap();
        let want = 1.0 / 3.0f64.sqrt();
        for m in 0..3 {
            assert!((s.amplitude(m).re - want).abs() < 1e-14);
        }
    }

    #[test]
    fn make_state_rejects_bad_input() {
        assert!(matches!(
            SpinState::new(2, vec![c(1.0, 0.0); 2], false),
            Err(Error::AmplitudeCount { .. })
        ));
        assert!(matches!(
            SpinState::new(1, vec![c(0.0, 0.0); 2], true),
            Err(Error::ZeroNorm)
        ));
        assert!(matches!(
            SpinState::new(1, vec![c(2.0, 0.0), c(0.0, 0.0)], false),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn stokes_z_single_qubit() {
        let sz = stokes_z(1);
        assert_eq!(sz.matrix()[(0, 0)], c(-0.5, 0.0));
        assert_eq!(sz.matrix()[(1, 1)], c(0.5, 0.0));
    }

    #[test]
    fn stokes_x_band_n2() {
        let sx = stokes_x(2);
        let v = 2.0f64.sqrt() / 2.0;
        assert!((sx.matrix()[(1, 0)].re - v).abs() < 1e-14);
        assert!((sx.matrix()[(2, 1)].re - v).abs() < 1e-14);
    }

    #[test]
    fn casimir_identity() {
        for n in [1usize, 4, 13, 60] {
            let (sx, sy, sz) = (stokes_x(n), stokes_y(n), stokes_z(n));
            let total = sx.matrix() * sx.matrix()
                + sy.matrix() * sy.matrix()
                + sz.matrix() * sz.matrix();
            let half = n as f64 / 2.0;
            let want = half * (half + 1.0);
            let dev = (&total - CMat::identity(n + 1, n + 1) * c(want, 0.0))
                .map(|x| x.norm())
                .max();
            assert!(dev < ALGEBRA_TOL, "casimir dev {dev} at N={n}");
        }
    }

    #[test]
    fn commutator_algebra() {
        let n = 5;
        let ops = [stokes_x(n), stokes_y(n), stokes_z(n)];
        for i in 0..3 {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            let comm = ops[i].matrix() * ops[j].matrix() - ops[j].matrix() * ops[i].matrix();
            let dev = (&comm - ops[k].matrix() * c(0.0, 1.0)).map(|x| x.norm()).max();
            assert!(dev < ALGEBRA_TOL);
        }
    }

    #[test]
    fn zyz_theta_zero_is_diagonal_phases() {
        let n = 3;
        let (phi, psi) = (0.7, -1.1);
        let u = rotation_unitary(
            n,
            &RotationSpec::EulerZyz {
                phi,
                theta: 0.0,
                psi,
            },
        )
        .unwrap();
        for m in 0..=n {
            let want = (c(0.0, -(phi + psi) * (m as f64 - n as f64 / 2.0))).exp();
            assert!((u[(m, m)] - want).norm() < 1e-12);
            for j in 0..=n {
                if j != m {
                    assert!(u[(m, j)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn axis_angle_zero_is_identity() {
        let u = rotation_unitary(
            4,
            &RotationSpec::AxisAngle {
                chi: 0.0,
                theta: 1.0,
                phi: 0.3,
            },
        )
        .unwrap();
        let dev = (&u - CMat::identity(5, 5)).map(|x| x.norm()).max();
        assert!(dev < 1e-12);
    }

    #[test]
    fn degenerate_euler_axis() {
        let u1 = rotation_unitary(
            4,
            &RotationSpec::EulerZyz {
                phi: 0.4,
                theta: 0.0,
                psi: 0.9,
            },
        )
        .unwrap();
        let u2 = rotation_unitary(
            4,
            &RotationSpec::EulerZyz {
                phi: 1.3,
                theta: 0.0,
                psi: 0.0,
            },
        )
        .unwrap();
        assert!((&u1 - &u2).map(|x| x.norm()).max() < 1e-12);
    }

    #[test]
    fn unitarity_across_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 9, 31, 60] {
            let spec = random_spec(&mut rng);
            let u = rotation_unitary(n, &spec).unwrap();
            let dev = (u.adjoint() * &u - CMat::identity(n + 1, n + 1))
                .map(|x| x.norm())
                .max();
            assert!(dev < ALGEBRA_TOL, "unitarity dev {dev} at N={n}");
        }
    }

    #[test]
    fn z_rotation_phases_basis_ket() {
        let n = 4;
        let phi = 0.83;
        let ket = SpinState::basis_ket(n, 3);
        let rotated = apply_rotation(
            &ket,
            &RotationSpec::EulerZyz {
                phi,
                theta: 0.0,
                psi: 0.0,
            },
        )
        .unwrap();
        let want = c(0.0, -phi * (3.0 - 2.0)).exp();
        assert!((rotated.amplitude(3) - want).norm() < 1e-12);
    }

    #[test]
    fn tetrahedron_invariant_under_vertex_rotation() {
        // North-pole Majorana point of the tetrahedron state lies on z.
        let state = tetrahedron_state();
        let rotated = apply_rotation(
            &state,
            &RotationSpec::AxisAngle {
                chi: 2.0 * std::f64::consts::PI / 3.0,
                theta: 0.0,
                phi: 0.0,
            },
        )
        .unwrap();
        let overlap = state.overlap(&rotated).unwrap().norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_pi_rotation_double_cover() {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [4usize, 5] {
            let state = random_state(n, &mut rng);
            let rotated = apply_rotation(
                &state,
                &RotationSpec::AxisAngle {
                    chi: two_pi,
                    theta: 1.1,
                    phi: 0.2,
                },
            )
            .unwrap();
            let ov = state.overlap(&rotated).unwrap();
            let want = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((ov.re - want).abs() < 1e-10 && ov.im.abs() < 1e-10);
        }
    }

    #[test]
    fn expectation_examples() {
        let n = 6;
        let top = SpinState::basis_ket(n, n);
        assert!((expectation(&top, &stokes_z(n)).unwrap() - 3.0).abs() < 1e-14);
        assert!((expectation(&top, &stokes_zero(n)).unwrap() - 3.0).abs() < 1e-14);

        let tetra = tetrahedron_state();
        let sz = stokes_z(4);
        let szz = HermitianOperator::new(sz.matrix() * sz.matrix()).unwrap();
        assert!((expectation(&tetra, &szz).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let s = SpinState::basis_ket(2, 0);
        assert!(matches!(
            expectation(&s, &stokes_z(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rodrigues_examples() {
        let ez = Vector3::new(0.0, 0.0, 1.0);
        let id = rodrigues(0.0, &ez).unwrap();
        assert!((id.matrix() - Matrix3::identity()).amax() < 1e-14);

        let r = rodrigues(std::f64::consts::FRAC_PI_2, &ez).unwrap();
        let want = Matrix3::new(0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert!((r.matrix() - want).amax() < 1e-14);

        let diag = Vector3::new(1.0, 1.0, 1.0) / 3.0f64.sqrt();
        let r = rodrigues(2.0 * std::f64::consts::PI / 3.0, &diag).unwrap();
        let x = r.apply(&Vector3::new(1.0, 0.0, 0.0));
        assert!((x - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-12);

        assert!(matches!(
            rodrigues(1.0, &Vector3::new(1.0, 1.0, 0.0)),
            Err(Error::NonUnitAxis { .. })
        ));
    }

    #[test]
    fn covariance_of_moments_under_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(1..=10);
            let state = random_state(n, &mut rng);
            let spec = random_spec(&mut rng);
            let rotated = apply_rotation(&state, &spec).unwrap();
            let r = bloch_rotation(&spec).unwrap();

            let s0 = anticoherence::stokes_vector(&state);
            let s1 = anticoherence::stokes_vector(&rotated);
            assert!((s1 - r.apply(&s0)).norm() < STATE_TOL);

            let t0 = anticoherence::stokes_tensor(&state);
            let t1 = anticoherence::stokes_tensor(&rotated);
            let rm = r.matrix().map(|x| c(x, 0.0));
            let want = &rm * t0 * rm.transpose();
            assert!((t1 - want).map(|x| x.norm()).max() < STATE_TOL);
        }
    }

    #[test]
    fn rotation_composition_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 6;
        let state = random_state(n, &mut rng);
        let spec1 = random_spec(&mut rng);
        let spec2 = random_spec(&mut rng);
        let u1 = rotation_unitary(n, &spec1).unwrap();
        let u2 = rotation_unitary(n, &spec2).unwrap();
        let prod = &u1 * &u2;
        let dev = (prod.adjoint() * &prod - CMat::identity(n + 1, n + 1))
            .map(|x| x.norm())
            .max();
        assert!(dev < ALGEBRA_TOL);
        let seq = apply_rotation(&apply_rotation(&state, &spec2).unwrap(), &spec1).unwrap();
        let direct_amplitudes = prod * state.amplitudes();
        let dev = (seq.amplitudes() - direct_amplitudes).norm();
        assert!(dev < STATE_TOL);
    }
}

//! Majorana stellar representation: conversion between a spin state and its
//! constellation of sphere points, plus certification of 2-anticoherence via
//! the two-rotational-symmetry criterion.
//!
//! The stellar polynomial convention is locked by the roundtrip: the state
//! with amplitudes c_m has P(z) = Σ_m c_m sqrt(C(N,m)) (-1)^m z^m, whose
//! roots map to sphere points through z = e^{i phi} tan(theta/2). A degree
//! deficit d contributes d points at theta = pi.

use nalgebra::Vector3;

use crate::spin::{self, C64, CMat, SpinState};
use crate::{Error, Result};

/// Default angular tolerance for merging nearby roots into multiplicities.
pub const MERGE_TOL: f64 = 1e-4;

/// One weighted point of a constellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarPoint {
    /// Polar angle in [0, pi].
    pub theta: f64,
    /// Azimuth in [0, 2*pi).
    pub phi: f64,
    /// Multiplicity, at least 1.
    pub mult: usize,
}

impl StarPoint {
    pub fn unit_vector(&self) -> Vector3<f64> {
        Vector3::new(
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        )
    }
}

/// Weighted point set on the unit sphere; N = sum of multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<StarPoint>,
}

impl Constellation {
    /// Validates ranges, multiplicities, and pairwise separation of the
    /// distinct points (they must exceed the merge tolerance).
    pub fn new(points: Vec<StarPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyConstellation);
        }
        for p in &points {
            if !(0.0..=std::f64::consts::PI).contains(&p.theta)
                || !p.phi.is_finite()
                || !(0.0..2.0 * std::f64::consts::PI).contains(&p.phi)
            {
                return Err(Error::InvalidPoint(format!(
                    "theta={} phi={} out of range",
                    p.theta, p.phi
                )));
            }
            if p.mult == 0 {
                return Err(Error::InvalidPoint("multiplicity 0".into()));
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let sep = angular_distance(&points[i].unit_vector(), &points[j].unit_vector());
                if sep <= MERGE_TOL {
                    return Err(Error::InvalidPoint(format!(
                        "points {i} and {j} separated by {sep}, below the merge tolerance"
                    )));
                }
            }
        }
        Ok(Self { points })
    }

    /// Normalizes phi into [0, 2*pi) before validation.
    pub fn from_angles(raw: Vec<(f64, f64, usize)>) -> Result<Self> {
        let tau = 2.0 * std::f64::consts::PI;
        let points = raw
            .into_iter()
            .map(|(theta, phi, mult)| StarPoint {
                theta,
                phi: phi.rem_euclid(tau),
                mult,
            })
            .collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[StarPoint] {
        &self.points
    }

    pub fn total(&self) -> usize {
        self.points.iter().map(|p| p.mult).sum()
    }
}

pub(crate) fn angular_distance(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    // atan2 of (cross, dot) stays accurate near 0 and pi, where acos of the
    // dot product alone loses half the significant digits.
    a.cross(b).norm().atan2(a.dot(b))
}

fn theta_phi(v: &Vector3<f64>) -> (f64, f64) {
    let tau = 2.0 * std::f64::consts::PI;
    let theta = v.z.clamp(-1.0, 1.0).acos();
    // rem_euclid of a tiny negative angle rounds to tau itself; fold it back.
    let mut phi = v.y.atan2(v.x).rem_euclid(tau);
    if phi >= tau {
        phi = 0.0;
    }
    (theta, phi)
}

/// Builds the normalized state whose Majorana points are the given
/// constellation, by applying the point creation operators in sequence.
/// The global phase makes the largest-modulus amplitude real positive.
pub fn constellation_to_state(c: &Constellation) -> Result<SpinState> {
    let total = c.total();
    let mut amps: Vec<C64> = vec![C64::new(1.0, 0.0)];
    let mut quanta = 0usize;
    for p in c.points() {
        let alpha = C64::new((p.theta / 2.0).cos(), 0.0);
        let beta = C64::from_polar((p.theta / 2.0).sin(), p.phi);
        for _ in 0..p.mult {
            let mut next = vec![C64::new(0.0, 0.0); quanta + 2];
            for (m, a) in amps.iter().enumerate() {
                next[m + 1] += alpha * ((m + 1) as f64).sqrt() * a;
                next[m] += beta * ((quanta - m + 1) as f64).sqrt() * a;
            }
            let norm: f64 = next.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for x in next.iter_mut() {
                *x /= norm;
            }
            amps = next;
            quanta += 1;
        }
    }
    debug_assert_eq!(quanta, total);
    let mut state = SpinState::new(total, amps, true)?;
    state.fix_global_phase();
    Ok(state)
}

/// Coefficients of q(w) = p(w + s), computed by repeated synthetic division.
fn shift_polynomial(coeffs: &[C64], s: C64) -> Vec<C64> {
    let mut a = coeffs.to_vec();
    let n = a.len();
    for j in 0..n {
        for i in (j..n - 1).rev() {
            let carry = s * a[i + 1];
            a[i] += carry;
        }
    }
    a
}

fn companion_eigenvalues(coeffs: &[C64]) -> Option<Vec<C64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let mut comp = CMat::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let schur = comp.try_schur(1e-14, 10_000)?;
    let (_, t) = schur.unpack();
    Some(t.diagonal().iter().copied().collect())
}

/// Roots of the monic polynomial with the given coefficients (low to high
/// order), via the companion-matrix eigenvalue method.
///
/// The shifted-QR iteration can stall when the spectrum has exact symmetric
/// pairs (for instance z^N + 1, whose companion matrix is a weighted cyclic
/// permutation). On a convergence failure the polynomial is re-solved at a
/// generic origin shift, which breaks the symmetry, and the roots are mapped
/// back.
fn companion_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let deg = coeffs.len() - 1;
    debug_assert!(deg >= 1);
    if deg == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }
    let shifts = [
        C64::new(0.0, 0.0),
        C64::new(0.37, 0.21),
        C64::new(-0.54, 0.83),
        C64::new(1.13, -0.41),
    ];
    for &s in &shifts {
        let shifted = shift_polynomial(coeffs, s);
        if let Some(mut roots) = companion_eigenvalues(&shifted) {
            for r in roots.iter_mut() {
                *r += s;
            }
            return Ok(roots);
        }
    }
    Err(Error::CrossCheck(
        "polynomial root isolation did not converge".to_string(),
    ))
}

fn polynomial_derivative(coeffs: &[C64]) -> Vec<C64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// A candidate constellation point during root clustering: accumulated
/// multiplicity, a stellar-plane seed (absent for exact poles), and the
/// unit direction.
struct ClusterEntry {
    mult: usize,
    z: Option<C64>,
    dir: Vector3<f64>,
}

impl ClusterEntry {
    /// Folds another (partial) cluster in, weighting by multiplicity. A pole
    /// member clears the seed, leaving only the direction average.
    fn absorb(&mut self, mult: usize, z: Option<C64>, dir: &Vector3<f64>) {
        let (wa, wb) = (self.mult as f64, mult as f64);
        self.z = match (self.z, z) {
            (Some(a), Some(b)) => Some((a * wa + b * wb) / (wa + wb)),
            _ => None,
        };
        let sum = self.dir * wa + dir * wb;
        if sum.norm() > 0.0 {
            self.dir = sum / sum.norm();
        }
        self.mult += mult;
    }
}

/// Sharpens a root cluster of multiplicity m. An m-fold root of p is a
/// simple root of the (m-1)-th derivative, so Newton converges there
/// quadratically; the raw eigenvalue centroid seeds the iteration.
fn refine_cluster(coeffs: &[C64], mult: usize, seed: C64) -> Option<(Vector3<f64>, C64)> {
    let mut z = seed;
    let mut d = coeffs.to_vec();
    for _ in 1..mult {
        d = polynomial_derivative(&d);
    }
    if d.len() < 2 {
        return None;
    }
    for _ in 0..60 {
        let (p, dp) = horner(&d, z);
        if dp.norm() < 1e-300 {
            break;
        }
        let step = p / dp;
        if !step.re.is_finite() || !step.im.is_finite() || step.norm() > 1.0 {
            break;
        }
        z -= step;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    let theta = 2.0 * z.norm().atan();
    let phi = z.im.atan2(z.re);
    Some((
        Vector3::new(
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ),
        z,
    ))
}

/// Unit direction of the stellar-plane point z (theta = 2 atan|z|).
fn dir_of(z: C64) -> Vector3<f64> {
    let theta = 2.0 * z.norm().atan();
    let phi = z.im.atan2(z.re);
    Vector3::new(
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    )
}

/// p, p', p'' at z by extended Horner evaluation.
fn horner2(coeffs: &[C64], z: C64) -> (C64, C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    let mut half_d2p = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        half_d2p = half_d2p * z + dp;
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp, half_d2p * 2.0)
}

/// Local multiplicity estimate at an approximate root: with u = p/p',
/// u' = 1 - p p''/p'^2 tends to 1/m near an m-fold root.
fn estimate_multiplicity(coeffs: &[C64], z: C64) -> usize {
    let deg = coeffs.len() - 1;
    let (p, dp, d2p) = horner2(coeffs, z);
    if dp.norm() < 1e-300 {
        return 1;
    }
    let uprime = 1.0 - (p * d2p / (dp * dp)).re;
    if !uprime.is_finite() || uprime.abs() < 1e-3 {
        return 1;
    }
    let m = (1.0 / uprime).round();
    if m.is_finite() && m >= 1.0 && m <= deg as f64 {
        m as usize
    } else {
        1
    }
}

fn horner(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Extracts the Majorana constellation of a state. Roots closer than
/// `merge_tol` (angular) are clustered into a single multiplicity point at
/// the cluster centroid.
pub fn state_to_constellation(state: &SpinState, merge_tol: f64) -> Result<Constellation> {
    let n = state.n_quanta();
    // Stellar coefficients p_m = c_m sqrt(C(N,m)) (-1)^m.
    let mut coeffs: Vec<C64> = Vec::with_capacity(n + 1);
    let mut weight = 1.0f64;
    for m in 0..=n {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(state.amplitude(m) * C64::new(sign * weight, 0.0));
        if m < n {
            weight *= ((n - m) as f64 / (m + 1) as f64).sqrt();
        }
    }
    let max_abs = coeffs.iter().map(|x| x.norm()).fold(0.0f64, f64::max);
    if max_abs == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let threshold = 1e-12 * max_abs;
    let lo = coeffs
        .iter()
        .position(|x| x.norm() > threshold)
        .expect("nonzero coefficient exists");
    let hi = coeffs
        .iter()
        .rposition(|x| x.norm() > threshold)
        .expect("nonzero coefficient exists");

    let mut units: Vec<(Vector3<f64>, Option<C64>)> = Vec::with_capacity(n);
    // z = 0 roots sit at theta = 0; the degree deficit sits at theta = pi.
    for _ in 0..lo {
        units.push((Vector3::new(0.0, 0.0, 1.0), None));
    }
    for _ in 0..(n - hi) {
        units.push((Vector3::new(0.0, 0.0, -1.0), None));
    }
    let trimmed: Vec<C64> = if hi > lo {
        coeffs[lo..=hi].to_vec()
    } else {
        Vec::new()
    };
    if hi > lo {
        // An m-fold root surfaces as an eigenvalue cluster of radius
        // ~eps^(1/m), and can only be sharpened through the (m-1)-th
        // derivative of the polynomial; plain Newton stalls at the cluster
        // radius. Coarse clustering (10x the merge radius, still far below
        // the point separations the merge radius implies) counts the
        // candidate multiplicity, and the sharpening pulls every member of
        // the cluster onto the same point so the final clustering below sees
        // them as coincident. Sharpened points that travel outside the
        // coarse radius signal a wrong multiplicity guess — the derivative
        // polynomial has extra roots between clusters — and are rejected in
        // favor of a per-root estimate.
        let coarse_tol = 10.0 * merge_tol;
        let mut coarse: Vec<Vec<C64>> = Vec::new();
        for raw in companion_roots(&trimmed)? {
            match coarse
                .iter_mut()
                .find(|cl| angular_distance(&dir_of(cl[0]), &dir_of(raw)) <= coarse_tol)
            {
                Some(cl) => cl.push(raw),
                None => coarse.push(vec![raw]),
            }
        }
        for cl in coarse {
            let k = cl.len();
            let centroid = cl.iter().sum::<C64>() / k as f64;
            let joint = if k > 1 {
                refine_cluster(&trimmed, k, centroid).filter(|(dir, _)| {
                    angular_distance(&dir_of(centroid), dir) <= coarse_tol
                })
            } else {
                None
            };
            for raw in cl {
                let z = match joint {
                    Some((_, zz)) => zz,
                    None => {
                        let m_est = estimate_multiplicity(&trimmed, raw);
                        let mut best = raw;
                        if m_est > 1 {
                            if let Some((dir, zz)) = refine_cluster(&trimmed, m_est, raw) {
                                if angular_distance(&dir_of(raw), &dir) <= coarse_tol {
                                    best = zz;
                                }
                            }
                        }
                        best
                    }
                };
                units.push((dir_of(z), Some(z)));
            }
        }
    }

    // Greedy clustering by angular distance. Clustering starts from the raw
    // eigenvalues: an m-fold root splits into an m-cluster of radius
    // ~eps^(1/m). Each cluster is then sharpened by Newton iteration, and
    // clusters that collapse onto each other afterwards (an over-split
    // multiple root) are merged and re-sharpened.
    let mut entries: Vec<ClusterEntry> = Vec::new();
    for (v, z) in units {
        match entries
            .iter_mut()
            .find(|e| angular_distance(&e.dir, &v) <= merge_tol)
        {
            Some(e) => e.absorb(1, z, &v),
            None => entries.push(ClusterEntry {
                mult: 1,
                z,
                dir: v,
            }),
        }
    }
    for _ in 0..4 {
        for e in entries.iter_mut() {
            if let Some(z0) = e.z {
                if let Some((dir, z)) = refine_cluster(&trimmed, e.mult, z0) {
                    if angular_distance(&e.dir, &dir) <= 10.0 * merge_tol {
                        e.dir = dir;
                        e.z = Some(z);
                    }
                }
            }
        }
        let before = entries.len();
        let mut merged: Vec<ClusterEntry> = Vec::new();
        for e in entries.drain(..) {
            match merged
                .iter_mut()
                .find(|t| angular_distance(&t.dir, &e.dir) <= merge_tol)
            {
                Some(t) => t.absorb(e.mult, e.z, &e.dir),
                None => merged.push(e),
            }
        }
        let stable = merged.len() == before;
        entries = merged;
        if stable {
            break;
        }
    }
    let mut points: Vec<StarPoint> = entries
        .into_iter()
        .map(|e| {
            let (theta, phi) = theta_phi(&e.dir);
            StarPoint {
                theta,
                phi,
                mult: e.mult,
            }
        })
        .collect();
    points.sort_by(|a, b| {
        (a.theta, a.phi)
            .partial_cmp(&(b.theta, b.phi))
            .expect("finite angles")
    });
    Constellation::new(points)
}

/// 1 - |⟨psi|R(chi, n)|psi⟩|: zero means the rotation is a symmetry of the
/// state up to global phase.
pub fn symmetry_check(state: &SpinState, chi: f64, axis: &Vector3<f64>) -> Result<f64> {
    let (theta, phi) = theta_phi(&(axis / axis.norm()));
    let norm = axis.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnitAxis { norm });
    }
    let rotated = spin::apply_rotation(state, &spin::RotationSpec::AxisAngle { chi, theta, phi })?;
    Ok(1.0 - state.overlap(&rotated)?.norm())
}

/// Certificate for the two-rotational-symmetry criterion.
#[derive(Debug, Clone)]
pub struct SymmetryCertificate {
    pub rotations: [(f64, Vector3<f64>); 2],
    pub residuals: [f64; 2],
    /// Angle between the two rotation axes.
    pub axes_angle: f64,
    pub verdict: bool,
    /// Reasons the verdict is false, empty when true.
    pub reasons: Vec<String>,
}

fn is_excluded_angle(chi: f64) -> bool {
    let tau = 2.0 * std::f64::consts::PI;
    let reduced = chi.rem_euclid(tau);
    let dist = |target: f64| (reduced - target).abs();
    dist(0.0) < 1e-9 || dist(std::f64::consts::PI) < 1e-9 || dist(tau) < 1e-9
}

/// Verifies two claimed rotational symmetries of a state. The verdict is
/// true only when both residuals pass, the axes are independent, and neither
/// angle is 0 or pi mod 2*pi (pi-rotations admit states that are not
/// 2-anticoherent, such as NOON states).
pub fn certify_two_symmetries(
    state: &SpinState,
    rot1: (f64, Vector3<f64>),
    rot2: (f64, Vector3<f64>),
    tol: f64,
) -> Result<SymmetryCertificate> {
    let r1 = symmetry_check(state, rot1.0, &rot1.1)?;
    let r2 = symmetry_check(state, rot2.0, &rot2.1)?;
    let cross = rot1.1.cross(&rot2.1).norm();
    let axes_angle = angular_distance(&rot1.1, &rot2.1);
    let mut reasons = Vec::new();
    if r1 >= tol {
        reasons.push(format!("first residual {r1} >= tol {tol}"));
    }
    if r2 >= tol {
        reasons.push(format!("second residual {r2} >= tol {tol}"));
    }
    if cross <= 1e-6 {
        reasons.push("axes are parallel".into());
    }
    if is_excluded_angle(rot1.0) {
        reasons.push("first angle is 0 or pi mod 2*pi".into());
    }
    if is_excluded_angle(rot2.0) {
        reasons.push("second angle is 0 or pi mod 2*pi".into());
    }
    Ok(SymmetryCertificate {
        rotations: [rot1, rot2],
        residuals: [r1, r2],
        axes_angle,
        verdict: reasons.is_empty(),
        reasons,
    })
}

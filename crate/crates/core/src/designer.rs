//! Algebraic construction of 2-anticoherent states: the sparse-support
//! linear-constraint solver and the analytic four-component family on
//! m in {N/4, N/2, 3N/4, N}.
//!
//! A state supported on indices with pairwise gap >= 3 has no c_m c_{m+1}
//! or c_m c_{m+2} cross terms, so 2-anticoherence reduces to three linear
//! constraints on the probabilities p_m = |c_m|^2:
//! sum p = 1, sum p m = N/2, sum p m^2 = N(2N+1)/6. Phases stay free.

use nalgebra::{DMatrix, DVector};

use crate::spin::{SpinState, C64};
use crate::{Error, Result};

const CONSTRAINT_TOL: f64 = 1e-10;
/// Vertex enumeration cap for supports of size >= 4.
const MAX_VERTICES: usize = 64;

/// Probability assignment on a sparse support satisfying the t=2 moment
/// constraints.
#[derive(Debug, Clone)]
pub struct SupportSolution {
    pub n_quanta: usize,
    /// Sorted support indices, pairwise gap >= 3.
    pub support: Vec<usize>,
    /// One feasible probability vector (the unique solution when the
    /// system is determined, otherwise the vertex average).
    pub probabilities: Vec<f64>,
    /// Residual degrees of freedom in the probabilities: max(k - 3, 0).
    pub free_parameters: usize,
    /// Per-support phases for lifting to a state; default 0.
    pub phases: Vec<f64>,
    /// Vertices of the feasible polytope (singleton: the unique solution).
    pub vertices: Vec<Vec<f64>>,
    /// True when vertex enumeration hit the cap.
    pub truncated: bool,
}

fn moment_targets(n: usize) -> [f64; 3] {
    let nf = n as f64;
    [1.0, nf / 2.0, nf * (2.0 * nf + 1.0) / 6.0]
}

fn validate_support(n: usize, support: &[usize]) -> Result<()> {
    if support.is_empty() {
        return Err(Error::InvalidSupport("support is empty".into()));
    }
    for w in support.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidSupport(
                "support must be strictly increasing".into(),
            ));
        }
        if w[1] - w[0] < 3 {
            return Err(Error::GapViolation { a: w[0], b: w[1] });
        }
    }
    if *support.last().unwrap() > n {
        return Err(Error::InvalidSupport(format!(
            "index {} exceeds N = {n}",
            support.last().unwrap()
        )));
    }
    Ok(())
}

/// Solve the 3 moment equations on the given sub-support exactly.
/// Returns None when the system is inconsistent or leaves the simplex.
fn solve_subset(n: usize, subset: &[usize]) -> Option<Vec<f64>> {
    let targets = moment_targets(n);
    let k = subset.len();
    let rows = 3usize;
    let a = DMatrix::from_fn(rows, k, |r, c| (subset[c] as f64).powi(r as i32));
    let b = DVector::from_row_slice(&targets);
    // Least-squares solve; exactness is verified against all three rows.
    let p = a.clone().svd(true, true).solve(&b, 1e-13).ok()?;
    let residual = (&a * &p - &b).amax();
    if residual > CONSTRAINT_TOL {
        return None;
    }
    if p.iter().any(|&x| !(-CONSTRAINT_TOL..=1.0 + CONSTRAINT_TOL).contains(&x)) {
        return None;
    }
    Some(p.iter().map(|&x| x.clamp(0.0, 1.0)).collect())
}

fn constraint_certificate(n: usize, support: &[usize], p: &[f64]) -> Option<String> {
    let targets = moment_targets(n);
    let labels = ["sum p", "sum p*m", "sum p*m^2"];
    for r in 0..3 {
        let got: f64 = support
            .iter()
            .zip(p)
            .map(|(&m, &q)| q * (m as f64).powi(r as i32))
            .sum();
        if (got - targets[r]).abs() > CONSTRAINT_TOL {
            return Some(format!(
                "{} = {got}, required {} (N = {n})",
                labels[r], targets[r]
            ));
        }
    }
    if let Some(&bad) = p.iter().find(|&&q| !(0.0..=1.0).contains(&q)) {
        return Some(format!("probability {bad} outside [0, 1]"));
    }
    None
}

/// Feasible probabilities on `support` for a 2-anticoherent state of N
/// quanta. Supports of size <= 3 solve the (over)determined system;
/// larger supports enumerate the polytope vertices (basic solutions with
/// at most 3 nonzero entries) and return their average as an interior
/// point.
pub fn solve_support(n: usize, support: &[usize]) -> Result<SupportSolution> {
    validate_support(n, support)?;
    let k = support.len();
    let base = SupportSolution {
        n_quanta: n,
        support: support.to_vec(),
        probabilities: Vec::new(),
        free_parameters: k.saturating_sub(3),
        phases: vec![0.0; k],
        vertices: Vec::new(),
        truncated: false,
    };

    if k <= 3 {
        let p = solve_subset(n, support).ok_or_else(|| {
            // Certificate: solve the first k moment equations exactly and
            // report whichever remaining constraint the point violates.
            let targets = moment_targets(n);
            let a = DMatrix::from_fn(k, k, |r, c| (support[c] as f64).powi(r as i32));
            let b = DVector::from_row_slice(&targets[..k]);
            let cert = a
                .lu()
                .solve(&b)
                .and_then(|p| constraint_certificate(n, support, p.as_slice()))
                .unwrap_or_else(|| "system has no solution on the simplex".into());
            Error::Infeasible(cert)
        })?;
        let mut out = base;
        out.vertices = vec![p.clone()];
        out.probabilities = p;
        return Ok(out);
    }

    // Vertices of {p >= 0, Ap = b} are basic solutions supported on at
    // most 3 of the k indices.
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut truncated = false;
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for i in 0..k {
        subsets.push(vec![i]);
        for j in (i + 1)..k {
            subsets.push(vec![i, j]);
            for l in (j + 1)..k {
                subsets.push(vec![i, j, l]);
            }
        }
    }
    'subsets: for idx in &subsets {
        let sub: Vec<usize> = idx.iter().map(|&i| support[i]).collect();
        if let Some(p_sub) = solve_subset(n, &sub) {
            let mut full = vec![0.0; k];
            for (pos, &i) in idx.iter().enumerate() {
                full[i] = p_sub[pos];
            }
            if vertices
                .iter()
                .any(|v| v.iter().zip(&full).all(|(a, b)| (a - b).abs() < 1e-9))
            {
                continue 'subsets;
            }
            if vertices.len() == MAX_VERTICES {
                truncated = true;
                break 'subsets;
            }
            vertices.push(full);
        }
    }
    if vertices.is_empty() {
        return Err(Error::Infeasible(format!(
            "no basic feasible solution on support {support:?} for N = {n}"
        )));
    }
    let mut interior = vec![0.0; k];
    for v in &vertices {
        for (s, x) in interior.iter_mut().zip(v) {
            *s += x / vertices.len() as f64;
        }
    }
    let mut out = base;
    out.probabilities = interior;
    out.vertices = vertices;
    out.truncated = truncated;
    Ok(out)
}

/// Lift a support solution to a state: c_m = sqrt(p_m) e^{i phase_m}.
pub fn state_from_solution(sol: &SupportSolution) -> Result<SpinState> {
    let mut amps = vec![C64::new(0.0, 0.0); sol.n_quanta + 1];
    for ((&m, &p), &phase) in sol
        .support
        .iter()
        .zip(&sol.probabilities)
        .zip(&sol.phases)
    {
        amps[m] = C64::from_polar(p.sqrt(), phase);
    }
    SpinState::new(sol.n_quanta, amps, true)
}

/// Open interval of admissible c^2 for the four-component family.
pub fn psi4_interval(n: usize) -> Result<(f64, f64)> {
    if n % 4 != 0 {
        return Err(Error::Divisibility { n, divisor: 4 });
    }
    if n < 12 {
        return Err(Error::Psi4(format!("N = {n} < 12")));
    }
    let nf = n as f64;
    Ok(((8.0 + nf) / (9.0 * nf), (4.0 + 2.0 * nf) / (9.0 * nf)))
}

/// The analytic 2-anticoherent family on m in {N/4, N/2, 3N/4, N}:
/// squared moduli (c^2, 2(2+N)/(3N) - 3c^2, 3c^2 - (8+N)/(3N),
/// 2(2+N)/(3N) - c^2) at m = (N, 3N/4, N/2, N/4), with phases
/// (0, phases[0], phases[1], phases[2]). The moduli sum to 1 identically.
pub fn psi4_family(n: usize, c_sq: f64, phases: [f64; 3]) -> Result<SpinState> {
    let (lo, hi) = psi4_interval(n)?;
    if !(c_sq > lo && c_sq < hi) {
        return Err(Error::Psi4(format!(
            "c^2 = {c_sq} outside the open interval ({lo}, {hi})"
        )));
    }
    let nf = n as f64;
    let a = 2.0 * (2.0 + nf) / (3.0 * nf);
    let b = (8.0 + nf) / (3.0 * nf);
    let moduli_sq = [c_sq, a - 3.0 * c_sq, 3.0 * c_sq - b, a - c_sq];
    let positions = [n, 3 * n / 4, n / 2, n / 4];
    let all_phases = [0.0, phases[0], phases[1], phases[2]];
    let mut amps = vec![C64::new(0.0, 0.0); n + 1];
    for ((&m, &p), &phase) in positions.iter().zip(&moduli_sq).zip(&all_phases) {
        amps[m] = C64::from_polar(p.sqrt(), phase);
    }
    SpinState::new(n, amps, false)
}

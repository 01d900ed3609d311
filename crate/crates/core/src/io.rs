//! Serialization: JSON schemas for states, constellations, moment and
//! QFIM reports, support solutions; CSV emission for sweep and comparison
//! tables (12 significant digits, "inf" at singular points).

use serde::{Deserialize, Serialize};

use crate::anticoherence::MomentReport;
use crate::baselines::ComparisonRow;
use crate::designer::SupportSolution;
use crate::majorana::{Constellation, SymmetryCertificate};
use crate::qfim::{QfimReport, ScanRow};
use crate::spin::{RotationSpec, SpinState, C64};
use crate::Result;

#[derive(Debug, Serialize, Deserialize)]
pub struct SpinStateJson {
    pub n: usize,
    /// Complex amplitudes c_0..c_N as [re, im] pairs.
    pub amplitudes: Vec<[f64; 2]>,
}

impl SpinStateJson {
    pub fn from_state(state: &SpinState) -> Self {
        Self {
            n: state.n_quanta(),
            amplitudes: state.amplitudes().iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn into_state(self, normalize: bool) -> Result<SpinState> {
        let amps = self
            .amplitudes
            .iter()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        SpinState::new(self.n, amps, normalize)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConstellationPointJson {
    pub theta: f64,
    pub phi: f64,
    pub mult: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConstellationJson {
    pub points: Vec<ConstellationPointJson>,
}

impl ConstellationJson {
    pub fn from_constellation(con: &Constellation) -> Self {
        Self {
            points: con
                .points()
                .iter()
                .map(|p| ConstellationPointJson {
                    theta: p.theta,
                    phi: p.phi,
                    mult: p.mult,
                })
                .collect(),
        }
    }

    pub fn into_constellation(self) -> Result<Constellation> {
        Constellation::from_angles(
            self.points
                .into_iter()
                .map(|p| (p.theta, p.phi, p.mult))
                .collect(),
        )
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MomentReportJson {
    #[serde(rename = "S")]
    pub stokes: [f64; 3],
    /// Hermitian tensor entries as [re, im] pairs, row major.
    #[serde(rename = "S2")]
    pub tensor: [[[f64; 2]; 3]; 3],
    pub order: usize,
    pub cap: usize,
    pub tol: f64,
    pub directional_constants: Vec<f64>,
}

impl MomentReportJson {
    pub fn from_report(r: &MomentReport) -> Self {
        let mut tensor = [[[0.0; 2]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                tensor[i][j] = [r.stokes_tensor[(i, j)].re, r.stokes_tensor[(i, j)].im];
            }
        }
        Self {
            stokes: [r.stokes_vector.x, r.stokes_vector.y, r.stokes_vector.z],
            tensor,
            order: r.order,
            cap: r.cap,
            tol: r.tolerance,
            directional_constants: r.directional_constants.clone(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct QfimReportJson {
    pub matrix: [[f64; 3]; 3],
    pub determinant: f64,
    pub singular: bool,
    pub inverse: Option<[[f64; 3]; 3]>,
    pub trace_of_inverse: Option<f64>,
    pub condition_number: f64,
    pub spec: RotationSpec,
    pub state_descriptor: String,
}

fn mat3_to_rows(m: &nalgebra::Matrix3<f64>) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[(i, j)];
        }
    }
    out
}

impl QfimReportJson {
    pub fn from_report(r: &QfimReport) -> Self {
        Self {
            matrix: mat3_to_rows(&r.matrix),
            determinant: r.determinant,
            singular: r.is_singular(),
            inverse: r.inverse.as_ref().map(mat3_to_rows),
            trace_of_inverse: r.trace_of_inverse,
            condition_number: r.condition_number,
            spec: r.spec,
            state_descriptor: r.state_descriptor.clone(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SupportSolutionJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub support: Vec<usize>,
    pub p: Vec<f64>,
    pub free: usize,
    pub phases: Vec<f64>,
    pub vertices: Vec<Vec<f64>>,
    pub truncated: bool,
}

impl SupportSolutionJson {
    pub fn from_solution(s: &SupportSolution) -> Self {
        Self {
            n: s.n_quanta,
            support: s.support.clone(),
            p: s.probabilities.clone(),
            free: s.free_parameters,
            phases: s.phases.clone(),
            vertices: s.vertices.clone(),
            truncated: s.truncated,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SymmetryCertificateJson {
    pub rotations: [RotationJson; 2],
    pub residuals: [f64; 2],
    pub axes_angle: f64,
    pub verdict: bool,
    pub reasons: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RotationJson {
    pub chi: f64,
    pub axis: [f64; 3],
}

impl SymmetryCertificateJson {
    pub fn from_certificate(c: &SymmetryCertificate) -> Self {
        let rot = |i: usize| RotationJson {
            chi: c.rotations[i].0,
            axis: [
                c.rotations[i].1.x,
                c.rotations[i].1.y,
                c.rotations[i].1.z,
            ],
        };
        Self {
            rotations: [rot(0), rot(1)],
            residuals: c.residuals,
            axes_angle: c.axes_angle,
            verdict: c.verdict,
            reasons: c.reasons.clone(),
        }
    }
}

/// 12 significant digits, locale independent.
pub fn format_sig(x: f64) -> String {
    if x.is_infinite() {
        return "inf".into();
    }
    format!("{x:.11e}")
}

/// Sweep CSV: header `angle1,angle2,angle3,det,trace_inv`, "inf" at
/// singular points.
pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("angle1,angle2,angle3,det,trace_inv\n");
    for r in rows {
        let trace = r.trace_inv.map_or_else(|| "inf".into(), format_sig);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_sig(r.angles[0]),
            format_sig(r.angles[1]),
            format_sig(r.angles[2]),
            format_sig(r.det),
            trace
        ));
    }
    out
}

/// Comparison CSV: header `scheme,N,angle1,angle2,bound`.
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("scheme,N,angle1,angle2,bound\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.scheme.label(),
            r.n_quanta,
            format_sig(r.angles[0]),
            format_sig(r.angles[1]),
            format_sig(r.variance_sum_bound)
        ));
    }
    out
}

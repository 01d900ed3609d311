//! Symmetric constellations: Platonic solids, their duals, truncated
//! tetrahedra, rotation-group orbits, and composition with multiplicities.
//!
//! Canonical orientations: the tetrahedron has one vertex at theta = 0 and
//! ring azimuths 0, 2*pi/3, 4*pi/3; cube and octahedron are axis-aligned;
//! icosahedron and dodecahedron use the standard z-aligned 5-fold axis.

use nalgebra::Vector3;
use std::f64::consts::PI;
use std::str::FromStr;

use crate::majorana::{Constellation, StarPoint};
use crate::spin::{rodrigues, Rotation3};
use crate::{Error, Result};

/// Proper rotation group of one of the solid families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupName {
    /// Tetrahedral, order 12.
    T,
    /// Octahedral, order 24.
    O,
    /// Icosahedral, order 60.
    I,
}

impl GroupName {
    pub fn order(&self) -> usize {
        match self {
            GroupName::T => 12,
            GroupName::O => 24,
            GroupName::I => 60,
        }
    }
}

impl FromStr for GroupName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(GroupName::T),
            "O" | "o" => Ok(GroupName::O),
            "I" | "i" => Ok(GroupName::I),
            other => Err(Error::UnknownSolid(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RotationGroup {
    pub name: GroupName,
    pub elements: Vec<Rotation3>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlatonicSolid {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

impl FromStr for PlatonicSolid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tetrahedron" => Ok(PlatonicSolid::Tetrahedron),
            "cube" => Ok(PlatonicSolid::Cube),
            "octahedron" => Ok(PlatonicSolid::Octahedron),
            "dodecahedron" => Ok(PlatonicSolid::Dodecahedron),
            "icosahedron" => Ok(PlatonicSolid::Icosahedron),
            other => Err(Error::UnknownSolid(other.to_string())),
        }
    }
}

/// Alignment of the truncated tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationAlignment {
    Tetrahedron,
    Dual,
}

/// Active rotation by `angle` about `axis` (unit).
fn rot(axis: &Vector3<f64>, angle: f64) -> Rotation3 {
    // rodrigues(chi, n) is the transpose of the active rotation by chi.
    rodrigues(-angle, axis).expect("unit axis")
}

fn contains(elems: &[Rotation3], candidate: &Rotation3) -> bool {
    elems
        .iter()
        .any(|e| (e.matrix() - candidate.matrix()).amax() < 1e-9)
}

pub(crate) fn tetrahedron_vertices() -> Vec<Vector3<f64>> {
    let ring_theta = (-1.0f64 / 3.0).acos();
    let mut vs = vec![Vector3::new(0.0, 0.0, 1.0)];
    for k in 0..3 {
        let phi = 2.0 * PI * k as f64 / 3.0;
        vs.push(Vector3::new(
            ring_theta.sin() * phi.cos(),
            ring_theta.sin() * phi.sin(),
            ring_theta.cos(),
        ));
    }
    vs
}

fn cube_vertices() -> Vec<Vector3<f64>> {
    let s = 1.0 / 3.0f64.sqrt();
    let mut vs = Vec::new();
    for &x in &[-1.0, 1.0] {
        for &y in &[-1.0, 1.0] {
            for &z in &[-1.0, 1.0] {
                vs.push(Vector3::new(x * s, y * s, z * s));
            }
        }
    }
    vs
}

fn octahedron_vertices() -> Vec<Vector3<f64>> {
    vec![
        Vector3::new(1.0, 0.0, 0.0),
        Vector3::new(-1.0, 0.0, 0.0),
        Vector3::new(0.0, 1.0, 0.0),
        Vector3::new(0.0, -1.0, 0.0),
        Vector3::new(0.0, 0.0, 1.0),
        Vector3::new(0.0, 0.0, -1.0),
    ]
}

pub(crate) fn icosahedron_vertices() -> Vec<Vector3<f64>> {
    let z = 1.0 / 5.0f64.sqrt();
    let r = 2.0 / 5.0f64.sqrt();
    let mut vs = vec![Vector3::new(0.0, 0.0, 1.0), Vector3::new(0.0, 0.0, -1.0)];
    for k in 0..5 {
        let phi = 2.0 * PI * k as f64 / 5.0;
        vs.push(Vector3::new(r * phi.cos(), r * phi.sin(), z));
    }
    for k in 0..5 {
        let phi = 2.0 * PI * k as f64 / 5.0 + PI / 5.0;
        vs.push(Vector3::new(r * phi.cos(), r * phi.sin(), -z));
    }
    vs
}

/// Face centroids (normalized) of a triangle-faced solid: faces are the
/// 3-cliques of the edge graph, with edges the minimal pairwise distances.
fn triangle_face_centers(vertices: &[Vector3<f64>]) -> Vec<Vector3<f64>> {
    let n = vertices.len();
    let mut min_d = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            min_d = min_d.min((vertices[i] - vertices[j]).norm());
        }
    }
    let is_edge = |i: usize, j: usize| ((vertices[i] - vertices[j]).norm() - min_d).abs() < 1e-6;
    let mut centers = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !is_edge(i, j) {
                continue;
            }
            for k in (j + 1)..n {
                if is_edge(i, k) && is_edge(j, k) {
                    let c = vertices[i] + vertices[j] + vertices[k];
                    centers.push(c / c.norm());
                }
            }
        }
    }
    centers
}

fn constellation_from_vectors(vs: &[Vector3<f64>]) -> Constellation {
    let tau = 2.0 * PI;
    let points: Vec<StarPoint> = vs
        .iter()
        .map(|v| {
            let theta = v.z.clamp(-1.0, 1.0).acos();
            // rem_euclid of a tiny negative angle rounds to tau; fold it back.
            let mut phi = v.y.atan2(v.x).rem_euclid(tau);
            if phi >= tau {
                phi = 0.0;
            }
            StarPoint {
                theta,
                phi,
                mult: 1,
            }
        })
        .collect();
    Constellation::new(points).expect("catalog vertices are well separated")
}

/// Full proper rotation group generated from two standard generators by
/// closure (dedup at 1e-9).
pub fn rotation_group(name: GroupName) -> RotationGroup {
    let generators: Vec<Rotation3> = match name {
        GroupName::T => {
            let vs = tetrahedron_vertices();
            vec![rot(&vs[0], 2.0 * PI / 3.0), rot(&vs[1], 2.0 * PI / 3.0)]
        }
        GroupName::O => vec![
            rot(&Vector3::new(0.0, 0.0, 1.0), PI / 2.0),
            rot(&(Vector3::new(1.0, 1.0, 1.0) / 3.0f64.sqrt()), 2.0 * PI / 3.0),
        ],
        GroupName::I => {
            let vs = icosahedron_vertices();
            vec![rot(&vs[0], 2.0 * PI / 5.0), rot(&vs[2], 2.0 * PI / 5.0)]
        }
    };
    let mut elements = vec![Rotation3::identity()];
    loop {
        let mut grew = false;
        let snapshot = elements.clone();
        for e in &snapshot {
            for g in &generators {
                let p = e.compose(g);
                if !contains(&elements, &p) {
                    elements.push(p);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
        assert!(elements.len() <= 120, "group closure runaway");
    }
    RotationGroup { name, elements }
}

/// Distinct images of a unit seed under all group elements, dedup at 1e-8
/// chordal distance; every point has multiplicity 1.
pub fn orbit(group: &RotationGroup, seed: &Vector3<f64>) -> Result<Constellation> {
    let norm = seed.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnitAxis { norm });
    }
    let mut images: Vec<Vector3<f64>> = Vec::new();
    for g in &group.elements {
        let p = g.apply(seed);
        if !images.iter().any(|q| (q - p).norm() < 1e-8) {
            images.push(p);
        }
    }
    Ok(constellation_from_vectors(&images))
}

/// Vertex constellation of a Platonic solid in canonical orientation.
pub fn platonic(solid: PlatonicSolid) -> Constellation {
    match solid {
        PlatonicSolid::Tetrahedron => constellation_from_vectors(&tetrahedron_vertices()),
        PlatonicSolid::Cube => constellation_from_vectors(&cube_vertices()),
        PlatonicSolid::Octahedron => constellation_from_vectors(&octahedron_vertices()),
        PlatonicSolid::Icosahedron => constellation_from_vectors(&icosahedron_vertices()),
        PlatonicSolid::Dodecahedron => {
            constellation_from_vectors(&triangle_face_centers(&icosahedron_vertices()))
        }
    }
}

/// Normalized face centers of the named solid, in the same orientation.
pub fn dual(solid: PlatonicSolid) -> Constellation {
    match solid {
        PlatonicSolid::Tetrahedron => {
            let antipodes: Vec<Vector3<f64>> =
                tetrahedron_vertices().iter().map(|v| -v).collect();
            constellation_from_vectors(&antipodes)
        }
        PlatonicSolid::Cube => platonic(PlatonicSolid::Octahedron),
        PlatonicSolid::Octahedron => platonic(PlatonicSolid::Cube),
        PlatonicSolid::Icosahedron => platonic(PlatonicSolid::Dodecahedron),
        PlatonicSolid::Dodecahedron => platonic(PlatonicSolid::Icosahedron),
    }
}

/// 12 vertices of the truncated tetrahedron sharing the tetrahedral rotation
/// axes of the stated alignment, as the T-group orbit of the standard
/// truncation seed (one third of the way along an edge).
pub fn truncated_tetrahedron(alignment: TruncationAlignment) -> Constellation {
    let vs = tetrahedron_vertices();
    let (v0, v1) = match alignment {
        TruncationAlignment::Tetrahedron => (vs[0], vs[1]),
        TruncationAlignment::Dual => (-vs[0], -vs[1]),
    };
    let seed = v0 + (v1 - v0) / 3.0;
    let seed = seed / seed.norm();
    let group = rotation_group(GroupName::T);
    orbit(&group, &seed).expect("seed is unit")
}

/// Union of constellations with per-part multiplicities applied. Points
/// colliding across parts (chordal distance below 1e-8) are merged with
/// summed multiplicity.
pub fn compose(parts: &[(&Constellation, usize)]) -> Result<Constellation> {
    if parts.is_empty() {
        return Err(Error::EmptyConstellation);
    }
    let mut merged: Vec<(Vector3<f64>, usize)> = Vec::new();
    for (con, factor) in parts {
        for p in con.points() {
            let v = p.unit_vector();
            let mult = p.mult * factor;
            match merged.iter_mut().find(|(q, _)| (q - &v).norm() < 1e-8) {
                Some((_, m)) => *m += mult,
                None => merged.push((v, mult)),
            }
        }
    }
    let tau = 2.0 * PI;
    let points: Vec<StarPoint> = merged
        .into_iter()
        .map(|(v, mult)| {
            // rem_euclid of a tiny negative angle rounds to tau; fold it back.
            let mut phi = v.y.atan2(v.x).rem_euclid(tau);
            if phi >= tau {
                phi = 0.0;
            }
            StarPoint {
                theta: v.z.clamp(-1.0, 1.0).acos(),
                phi,
                mult,
            }
        })
        .collect();
    Constellation::new(points)
}

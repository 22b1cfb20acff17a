//! Quadrilateral coordinates: slopes, matching equations, boundary
//! functionals and the cones they cut out.

use crate::perm::{quad_separating, Perm4};
use crate::tri_core::{build_vertex_link, compute_skeleton, LinkCrossing, Skeleton, Triangulation, VertexKind};
use serde::Serialize;
use thiserror::Error;

/// Quad types in a tetrahedron: 0 = 01|23, 1 = 02|13, 2 = 03|12.
pub const QUAD_NAMES: [&str; 3] = ["01|23", "02|13", "03|12"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QError {
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

/// A vector in quad coordinates, indexed by `3 * tet + quad`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadVector {
    pub coords: Vec<i64>,
}

impl QuadVector {
    pub fn zeros(tets: usize) -> Self {
        QuadVector { coords: vec![0; 3 * tets] }
    }

    pub fn new(coords: Vec<i64>) -> Self {
        assert!(coords.len().is_multiple_of(3), "quad vector length must be a multiple of 3");
        QuadVector { coords }
    }

    pub fn tet_count(&self) -> usize {
        self.coords.len() / 3
    }

    pub fn get(&self, tet: usize, quad: usize) -> i64 {
        self.coords[3 * tet + quad]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_admissible(&self) -> bool {
        is_admissible(&self.coords)
    }

    /// The single nonzero quad type of a tetrahedron, if any.
    pub fn quad_type(&self, tet: usize) -> Option<usize> {
        (0..3).find(|&q| self.get(tet, q) != 0)
    }

    pub fn scaled(&self, k: i64) -> QuadVector {
        QuadVector { coords: self.coords.iter().map(|&c| c.checked_mul(k).expect("quad coordinate overflow")).collect() }
    }

    pub fn plus(&self, other: &QuadVector) -> QuadVector {
        assert_eq!(self.coords.len(), other.coords.len());
        QuadVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.checked_add(*b).expect("quad coordinate overflow"))
                .collect(),
        }
    }
}

/// Nonnegative with at most one nonzero quad type per tetrahedron.
pub fn is_admissible(coords: &[i64]) -> bool {
    coords.iter().all(|&c| c >= 0) && coords.chunks(3).all(|c| c.iter().filter(|&&x| x != 0).count() <= 1)
}

/// Slope of quad `q` at the edge embedding whose vertex map is `perm`
/// (edge from `perm(0)` to `perm(1)`). Quad 02|13 at the edge 0 -> 1 of a
/// positively labelled tetrahedron has slope +1.
pub fn slope(perm: Perm4, q: usize) -> i64 {
    let (a, b, c, d) = (perm.apply(0), perm.apply(1), perm.apply(2), perm.apply(3));
    if q == quad_separating(a, b) {
        0
    } else if q == quad_separating(a, c) {
        perm.sign() as i64
    } else {
        debug_assert_eq!(q, quad_separating(a, d));
        -(perm.sign() as i64)
    }
}

/// One matching equation per interior edge class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QMatchingSystem {
    pub edges: Vec<usize>,
    pub rows: Vec<Vec<i64>>,
    pub dimension: usize,
}

pub fn build_matching_system(tri: &Triangulation) -> QMatchingSystem {
    build_matching_system_with(tri, &compute_skeleton(tri))
}

pub fn build_matching_system_with(tri: &Triangulation, skel: &Skeleton) -> QMatchingSystem {
    let dimension = 3 * tri.tet_count();
    let mut edges = Vec::new();
    let mut rows = Vec::new();
    for (e, class) in skel.interior_edges() {
        let mut row = vec![0i64; dimension];
        for emb in &class.embeddings {
            for q in 0..3 {
                row[3 * emb.tet + q] += slope(emb.perm, q);
            }
        }
        edges.push(e);
        rows.push(row);
    }
    QMatchingSystem { edges, rows, dimension }
}

/// Functionals for one vertex with a closed link of positive genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexFunctionals {
    pub vertex: usize,
    pub genus: i64,
    #[serde(skip)]
    pub cycles: Vec<Vec<LinkCrossing>>,
    pub functionals: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundaryFunctionalSet {
    pub dimension: usize,
    pub vertices: Vec<VertexFunctionals>,
}

impl BoundaryFunctionalSet {
    pub fn rows(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.vertices.iter().flat_map(|v| v.functionals.iter())
    }

    pub fn len(&self) -> usize {
        self.vertices.iter().map(|v| v.functionals.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Functional of a dual path in the link of a vertex: each crossing from
/// triangle A to triangle B adds the quad of B facing the crossed side and
/// subtracts the one of A.
pub fn path_functional(tri: &Triangulation, link_triangles: &[(usize, usize)], path: &[LinkCrossing]) -> Vec<i64> {
    let mut row = vec![0i64; 3 * tri.tet_count()];
    for c in path {
        let (ta, va) = link_triangles[c.from];
        let g = tri.gluing(ta, c.face).expect("link path crosses a glued face");
        let qa = quad_separating(va, c.face);
        let qb = quad_separating(g.perm.apply(va), g.perm.apply(c.face));
        row[3 * ta + qa] -= 1;
        row[3 * g.tet + qb] += 1;
    }
    row
}

pub fn build_boundary_functionals(tri: &Triangulation) -> BoundaryFunctionalSet {
    build_boundary_functionals_with(tri, &compute_skeleton(tri))
}

pub fn build_boundary_functionals_with(tri: &Triangulation, skel: &Skeleton) -> BoundaryFunctionalSet {
    let mut vertices = Vec::new();
    for (v, class) in skel.vertices.iter().enumerate() {
        if class.kind != VertexKind::Ideal {
            continue;
        }
        let link = build_vertex_link(tri, skel, v);
        if link.euler == 2 {
            continue;
        }
        let cycles = link.homology_basis();
        let functionals = cycles.iter().map(|c| path_functional(tri, &link.triangles, c)).collect();
        vertices.push(VertexFunctionals { vertex: v, genus: link.genus, cycles, functionals });
    }
    BoundaryFunctionalSet { dimension: 3 * tri.tet_count(), vertices }
}

fn dot(row: &[i64], x: &[i64]) -> i64 {
    row.iter().zip(x).map(|(a, b)| a * b).sum()
}

pub fn evaluate_nu(f: &BoundaryFunctionalSet, x: &QuadVector) -> Result<Vec<i64>, QError> {
    if x.coords.len() != f.dimension {
        return Err(QError::DimensionMismatch { got: x.coords.len(), expected: f.dimension });
    }
    Ok(f.rows().map(|r| dot(r, &x.coords)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConeMode {
    /// Matching equations only.
    ConeQ,
    /// Matching equations plus vanishing boundary functionals.
    ConeQ0,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintSystem {
    pub matching: QMatchingSystem,
    pub boundary: Option<BoundaryFunctionalSet>,
    pub mode: ConeMode,
}

impl ConstraintSystem {
    pub fn dimension(&self) -> usize {
        self.matching.dimension
    }

    /// Every equation of the system, matching rows first.
    pub fn equations(&self) -> Vec<Vec<i64>> {
        let mut rows = self.matching.rows.clone();
        if let (ConeMode::ConeQ0, Some(b)) = (self.mode, &self.boundary) {
            rows.extend(b.rows().cloned());
        }
        rows
    }

    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        x.len() == self.dimension() && self.equations().iter().all(|r| dot(r, x) == 0)
    }
}

pub fn assemble(tri: &Triangulation, mode: ConeMode) -> ConstraintSystem {
    let skel = compute_skeleton(tri);
    assemble_with(tri, &skel, mode)
}

pub fn assemble_with(tri: &Triangulation, skel: &Skeleton, mode: ConeMode) -> ConstraintSystem {
    let matching = build_matching_system_with(tri, skel);
    let boundary = Some(build_boundary_functionals_with(tri, skel));
    ConstraintSystem { matching, boundary, mode }
}

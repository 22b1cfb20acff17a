//! Normal surfaces recovered from quad vectors and their topology.

use crate::perm::{quad_separating, QUAD_PARTNER};
use crate::qtheory::{build_matching_system_with, QuadVector};
use crate::tri_core::{compute_skeleton, Skeleton, Triangulation};
use crate::union_find::DisjointSet;
use serde::Serialize;
use std::collections::VecDeque;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("vector is spun-normal: no finite triangle completion at an ideal vertex")]
    NotClosed,
    #[error("no consistent nonnegative triangle completion")]
    Inconsistent,
    #[error("vector is not admissible")]
    NotAdmissible,
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("surfaces use different quad types in tetrahedron {0}")]
    Incompatible(usize),
    #[error("surface is empty")]
    Empty,
}

/// Normal disc counts inside one tetrahedron: `tri[v]` triangles cutting off
/// vertex `v`, `quad[q]` quadrilaterals of type `q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct DiscCounts {
    pub tri: [i64; 4],
    pub quad: [i64; 3],
}

impl DiscCounts {
    pub fn quad_type(&self) -> Option<usize> {
        (0..3).find(|&q| self.quad[q] != 0)
    }

    pub fn quad_count(&self) -> i64 {
        self.quad.iter().sum()
    }

    pub fn disc_count(&self) -> i64 {
        self.tri.iter().sum::<i64>() + self.quad_count()
    }

    /// Arcs of this tetrahedron's discs in face `f` around vertex `v`.
    pub fn arcs_at(&self, f: usize, v: usize) -> i64 {
        self.tri[v] + self.quad[quad_separating(v, f)]
    }

    /// Discs meeting the edge between vertices `a` and `b`.
    pub fn edge_weight(&self, a: usize, b: usize) -> i64 {
        let keep = quad_separating(a, b);
        self.tri[a] + self.tri[b] + (0..3).filter(|&q| q != keep).map(|q| self.quad[q]).sum::<i64>()
    }

    /// Edge weights as a symmetric table with zero diagonal.
    pub fn weights(&self) -> [[i64; 4]; 4] {
        std::array::from_fn(|a| std::array::from_fn(|b| if a == b { 0 } else { self.edge_weight(a, b) }))
    }
}

/// A normal surface in standard coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalSurface {
    tri: Arc<Triangulation>,
    coords: Vec<DiscCounts>,
}

/// Which disc an arc belongs to, within its tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscRef {
    Triangle { vertex: usize, index: i64 },
    Quad { index: i64 },
}

impl NormalSurface {
    /// Wraps standard coordinates after checking that arcs match across every
    /// glued face and that each tetrahedron uses at most one quad type.
    pub fn from_standard(tri: Arc<Triangulation>, coords: Vec<DiscCounts>) -> Result<Self, SurfaceError> {
        if coords.len() != tri.tet_count() {
            return Err(SurfaceError::DimensionMismatch { got: coords.len(), expected: tri.tet_count() });
        }
        for c in &coords {
            if c.tri.iter().chain(&c.quad).any(|&x| x < 0) || c.quad.iter().filter(|&&x| x != 0).count() > 1 {
                return Err(SurfaceError::NotAdmissible);
            }
        }
        let s = NormalSurface { tri, coords };
        if !s.arcs_consistent() {
            return Err(SurfaceError::Inconsistent);
        }
        Ok(s)
    }

    pub fn empty(tri: Arc<Triangulation>) -> Self {
        let n = tri.tet_count();
        NormalSurface { tri, coords: vec![DiscCounts::default(); n] }
    }

    pub fn triangulation(&self) -> &Arc<Triangulation> {
        &self.tri
    }

    pub fn coords(&self) -> &[DiscCounts] {
        &self.coords
    }

    pub fn quads(&self) -> QuadVector {
        QuadVector::new(self.coords.iter().flat_map(|c| c.quad).collect())
    }

    /// Triangle coordinates indexed by `4 * tet + vertex`.
    pub fn triangles(&self) -> Vec<i64> {
        self.coords.iter().flat_map(|c| c.tri).collect()
    }

    /// Standard coordinates, seven per tetrahedron (four triangles then three quads).
    pub fn standard_vector(&self) -> Vec<i64> {
        self.coords.iter().flat_map(|c| c.tri.iter().chain(&c.quad).copied().collect::<Vec<_>>()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.iter().all(|c| c.disc_count() == 0)
    }

    pub fn disc_count(&self) -> i64 {
        self.coords.iter().map(|c| c.disc_count()).sum()
    }

    pub fn arcs_consistent(&self) -> bool {
        let t = &self.tri;
        (0..t.tet_count()).all(|a| {
            (0..4).all(|f| match t.gluing(a, f) {
                None => true,
                Some(g) => (0..4)
                    .filter(|&v| v != f)
                    .all(|v| self.coords[a].arcs_at(f, v) == self.coords[g.tet].arcs_at(g.perm.apply(f), g.perm.apply(v))),
            })
        })
    }

    /// Number of points where the surface meets each edge class.
    pub fn edge_weights(&self, skel: &Skeleton) -> Vec<i64> {
        skel.edges
            .iter()
            .map(|e| {
                let m = e.embeddings[0];
                self.coords[m.tet].edge_weight(m.perm.apply(0), m.perm.apply(1))
            })
            .collect()
    }

    pub fn weight(&self) -> i64 {
        self.edge_weights(&compute_skeleton(&self.tri)).iter().sum()
    }

    /// Arcs lying in boundary faces of the triangulation.
    pub fn boundary_arc_count(&self) -> i64 {
        let t = &self.tri;
        let mut n = 0;
        for a in 0..t.tet_count() {
            for f in 0..4 {
                if t.gluing(a, f).is_none() {
                    n += (0..4).filter(|&v| v != f).map(|v| self.coords[a].arcs_at(f, v)).sum::<i64>();
                }
            }
        }
        n
    }

    pub fn euler_characteristic(&self) -> i64 {
        let skel = compute_skeleton(&self.tri);
        self.euler_with(&skel)
    }

    pub fn euler_with(&self, skel: &Skeleton) -> i64 {
        let v: i64 = self.edge_weights(skel).iter().sum();
        let t_total: i64 = self.coords.iter().map(|c| c.tri.iter().sum::<i64>()).sum();
        let q_total: i64 = self.coords.iter().map(|c| c.quad_count()).sum();
        let arc_ends = 3 * t_total + 4 * q_total + self.boundary_arc_count();
        debug_assert!(arc_ends % 2 == 0);
        v - arc_ends / 2 + t_total + q_total
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary_arc_count() > 0
    }

    pub fn is_vertex_linking(&self) -> bool {
        !self.is_empty() && self.coords.iter().all(|c| c.quad_count() == 0)
    }

    fn disc_offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.coords.len() + 1);
        let mut acc = 0usize;
        for c in &self.coords {
            off.push(acc);
            acc += c.disc_count() as usize;
        }
        off.push(acc);
        off
    }

    fn disc_index(&self, off: &[usize], tet: usize, d: DiscRef) -> usize {
        let c = &self.coords[tet];
        off[tet]
            + match d {
                DiscRef::Triangle { vertex, index } => (c.tri[..vertex].iter().sum::<i64>() + index) as usize,
                DiscRef::Quad { index } => (c.tri.iter().sum::<i64>() + index) as usize,
            }
    }

    /// The disc owning arc `j` (counted outward from `v`) in face `f` of
    /// tetrahedron `tet`, and whether its positive side faces `v`. Triangles
    /// point towards their vertex, quads towards the pair holding vertex 0.
    pub fn arc_disc(&self, tet: usize, f: usize, v: usize, j: i64) -> (DiscRef, bool) {
        let c = &self.coords[tet];
        if j < c.tri[v] {
            return (DiscRef::Triangle { vertex: v, index: j }, true);
        }
        let q = quad_separating(v, f);
        let m = j - c.tri[v];
        debug_assert!(m < c.quad[q]);
        let near = v == 0 || QUAD_PARTNER[q][v] == 0;
        let index = if near { m } else { c.quad[q] - 1 - m };
        (DiscRef::Quad { index }, near)
    }

    /// Union-find over disc instances joined across glued faces.
    fn disc_graph(&self) -> (Vec<usize>, DisjointSet, Vec<(usize, usize, bool)>) {
        let off = self.disc_offsets();
        let mut ds = DisjointSet::new(*off.last().unwrap());
        let mut links = Vec::new();
        let t = &self.tri;
        for a in 0..t.tet_count() {
            for f in 0..4 {
                let Some(g) = t.gluing(a, f) else { continue };
                if (g.tet, g.perm.apply(f)) < (a, f) {
                    continue;
                }
                for v in (0..4).filter(|&v| v != f) {
                    let (b, bf, bv) = (g.tet, g.perm.apply(f), g.perm.apply(v));
                    for j in 0..self.coords[a].arcs_at(f, v) {
                        let (da, pa) = self.arc_disc(a, f, v, j);
                        let (db, pb) = self.arc_disc(b, bf, bv, j);
                        let (ia, ib) = (self.disc_index(&off, a, da), self.disc_index(&off, b, db));
                        ds.union(ia, ib);
                        links.push((ia, ib, pa == pb));
                    }
                }
            }
        }
        (off, ds, links)
    }

    /// Connected components, each as its own surface.
    pub fn components(&self) -> Vec<NormalSurface> {
        let (off, mut ds, _) = self.disc_graph();
        let (labels, k) = ds.labels();
        let mut parts = vec![vec![DiscCounts::default(); self.coords.len()]; k];
        for (tet, c) in self.coords.iter().enumerate() {
            for v in 0..4 {
                for i in 0..c.tri[v] {
                    let id = self.disc_index(&off, tet, DiscRef::Triangle { vertex: v, index: i });
                    parts[labels[id]][tet].tri[v] += 1;
                }
            }
            if let Some(q) = c.quad_type() {
                for i in 0..c.quad[q] {
                    let id = self.disc_index(&off, tet, DiscRef::Quad { index: i });
                    parts[labels[id]][tet].quad[q] += 1;
                }
            }
        }
        parts.into_iter().map(|coords| NormalSurface { tri: self.tri.clone(), coords }).collect()
    }

    pub fn component_count(&self) -> usize {
        let (_, mut ds, _) = self.disc_graph();
        ds.labels().1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Whether a transverse orientation exists on every component. In an
    /// orientable ambient manifold this is also orientability.
    pub fn is_two_sided(&self) -> bool {
        let (off, _, links) = self.disc_graph();
        let n = *off.last().unwrap();
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
        for &(a, b, same) in &links {
            adj[a].push((b, same));
            adj[b].push((a, same));
        }
        let mut side = vec![0i8; n];
        for s in 0..n {
            if side[s] != 0 {
                continue;
            }
            side[s] = 1;
            let mut queue = VecDeque::from([s]);
            while let Some(a) = queue.pop_front() {
                for &(b, same) in &adj[a] {
                    let want = if same { side[a] } else { -side[a] };
                    if side[b] == 0 {
                        side[b] = want;
                        queue.push_back(b);
                    } else if side[b] != want {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `(orientable, two_sided)`; the ambient triangulation must be orientable.
    pub fn sidedness(&self) -> (bool, bool) {
        let two = self.is_two_sided();
        (two, two)
    }

    /// Whether the complement of the surface has more pieces than the
    /// triangulation itself.
    pub fn is_separating(&self) -> Result<bool, SurfaceError> {
        if self.is_empty() {
            return Err(SurfaceError::Empty);
        }
        let regions = RegionGraph::new(&self.tri, &self.coords);
        Ok(regions.count > self.tri.tet_components().len())
    }

    pub fn genus(&self) -> i64 {
        let chi = self.euler_characteristic();
        if self.is_two_sided() {
            (2 - chi) / 2
        } else {
            2 - chi
        }
    }

    pub fn properties(&self) -> SurfaceProperties {
        let skel = compute_skeleton(&self.tri);
        let euler = self.euler_with(&skel);
        let comps = self.components();
        let two_sided = self.is_two_sided();
        let genus = comps
            .iter()
            .map(|c| {
                let chi = c.euler_with(&skel);
                if c.is_two_sided() {
                    (2 - chi) / 2
                } else {
                    2 - chi
                }
            })
            .collect();
        SurfaceProperties {
            euler,
            weight: self.edge_weights(&skel).iter().sum(),
            component_count: comps.len(),
            orientable: two_sided,
            two_sided,
            separating: if self.is_empty() { false } else { self.is_separating().unwrap_or(false) },
            genus,
            vertex_linking: self.is_vertex_linking(),
        }
    }

    pub fn scaled(&self, k: i64) -> NormalSurface {
        let coords = self
            .coords
            .iter()
            .map(|c| DiscCounts { tri: c.tri.map(|x| x * k), quad: c.quad.map(|x| x * k) })
            .collect();
        NormalSurface { tri: self.tri.clone(), coords }
    }

    /// Sum of standard coordinates (the geometric sum including any vertex links).
    pub fn standard_sum(&self, other: &NormalSurface) -> Result<NormalSurface, SurfaceError> {
        compatible(self, other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| DiscCounts {
                tri: std::array::from_fn(|v| a.tri[v] + b.tri[v]),
                quad: std::array::from_fn(|q| a.quad[q] + b.quad[q]),
            })
            .collect();
        Ok(NormalSurface { tri: self.tri.clone(), coords })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceProperties {
    pub euler: i64,
    pub weight: i64,
    pub component_count: usize,
    pub orientable: bool,
    pub two_sided: bool,
    pub separating: bool,
    pub genus: Vec<i64>,
    pub vertex_linking: bool,
}

/// Complementary regions of a set of normal discs, glued across faces.
/// Cells per tetrahedron: `tri[v]` slabs at each vertex (slab 0 holds the
/// vertex itself) and `Q + 1` central cells between consecutive quads,
/// cell 0 lying on the side of the pair holding vertex 0.
pub(crate) struct RegionGraph {
    pub count: usize,
}

impl RegionGraph {
    pub fn cells_in(c: &DiscCounts) -> usize {
        c.tri.iter().sum::<i64>() as usize + c.quad_count() as usize + 1
    }

    pub fn slab(off: usize, c: &DiscCounts, v: usize, j: i64) -> usize {
        off + (c.tri[..v].iter().sum::<i64>() + j) as usize
    }

    pub fn central(off: usize, c: &DiscCounts, r: i64) -> usize {
        off + (c.tri.iter().sum::<i64>() + r) as usize
    }

    /// Cell holding face subregion `k` around `v` in face `f` (k counted from
    /// `v`; `None` is the middle of the face, beyond every arc).
    pub fn face_cell(off: usize, c: &DiscCounts, f: usize, v: Option<(usize, i64)>) -> usize {
        let nq = c.quad_count();
        match v {
            Some((v, k)) if k < c.tri[v] => Self::slab(off, c, v, k),
            Some((v, k)) => {
                let m = k - c.tri[v];
                let near = c.quad_type().is_none_or(|q| v == 0 || QUAD_PARTNER[q][v] == 0);
                Self::central(off, c, if near { m } else { nq - m })
            }
            None => match c.quad_type() {
                None => Self::central(off, c, 0),
                Some(q) => {
                    let x = QUAD_PARTNER[q][f];
                    let near = x == 0 || QUAD_PARTNER[q][x] == 0;
                    Self::central(off, c, if near { nq } else { 0 })
                }
            },
        }
    }

    pub fn new(tri: &Triangulation, coords: &[DiscCounts]) -> Self {
        let mut offsets = Vec::with_capacity(coords.len() + 1);
        let mut acc = 0;
        for c in coords {
            offsets.push(acc);
            acc += Self::cells_in(c);
        }
        offsets.push(acc);
        let mut ds = DisjointSet::new(acc);
        for a in 0..tri.tet_count() {
            for f in 0..4 {
                let Some(g) = tri.gluing(a, f) else { continue };
                let (b, bf) = (g.tet, g.perm.apply(f));
                let (ca, cb) = (&coords[a], &coords[b]);
                for v in (0..4).filter(|&v| v != f) {
                    let bv = g.perm.apply(v);
                    for k in 0..ca.arcs_at(f, v) {
                        ds.union(
                            Self::face_cell(offsets[a], ca, f, Some((v, k))),
                            Self::face_cell(offsets[b], cb, bf, Some((bv, k))),
                        );
                    }
                }
                ds.union(Self::face_cell(offsets[a], ca, f, None), Self::face_cell(offsets[b], cb, bf, None));
            }
        }
        RegionGraph { count: ds.labels().1 }
    }
}

fn compatible(a: &NormalSurface, b: &NormalSurface) -> Result<(), SurfaceError> {
    for (t, (x, y)) in a.coords.iter().zip(&b.coords).enumerate() {
        if let (Some(p), Some(q)) = (x.quad_type(), y.quad_type()) {
            if p != q {
                return Err(SurfaceError::Incompatible(t));
            }
        }
    }
    Ok(())
}

/// Recovers triangle coordinates from quads: around each vertex class the
/// corner counts are fixed up to one constant, chosen as small as possible.
pub fn reconstruct(tri: &Arc<Triangulation>, x: &QuadVector) -> Result<NormalSurface, SurfaceError> {
    let skel = compute_skeleton(tri);
    reconstruct_with(tri, &skel, x)
}

pub fn reconstruct_with(tri: &Arc<Triangulation>, skel: &Skeleton, x: &QuadVector) -> Result<NormalSurface, SurfaceError> {
    let n = tri.tet_count();
    if x.coords.len() != 3 * n {
        return Err(SurfaceError::DimensionMismatch { got: x.coords.len(), expected: 3 * n });
    }
    if !x.is_admissible() {
        return Err(SurfaceError::NotAdmissible);
    }
    let mut coords: Vec<DiscCounts> =
        (0..n).map(|t| DiscCounts { tri: [0; 4], quad: [x.get(t, 0), x.get(t, 1), x.get(t, 2)] }).collect();
    let mut value: Vec<[Option<i64>; 4]> = vec![[None; 4]; n];
    let mut conflict = false;
    for class in &skel.vertices {
        let Some(&(t0, v0)) = class.corners.first() else { continue };
        value[t0][v0] = Some(0);
        let mut seen = vec![(t0, v0)];
        let mut queue = VecDeque::from([(t0, v0)]);
        while let Some((t, v)) = queue.pop_front() {
            let here = value[t][v].unwrap();
            for f in (0..4).filter(|&f| f != v) {
                let Some(g) = tri.gluing(t, f) else { continue };
                let (u, w) = (g.tet, g.perm.apply(v));
                let qa = coords[t].quad[quad_separating(v, f)];
                let qb = coords[u].quad[quad_separating(w, g.perm.apply(f))];
                let there = here + qa - qb;
                match value[u][w] {
                    None => {
                        value[u][w] = Some(there);
                        seen.push((u, w));
                        queue.push_back((u, w));
                    }
                    Some(old) if old != there => conflict = true,
                    _ => {}
                }
            }
        }
        let min = seen.iter().map(|&(t, v)| value[t][v].unwrap()).min().unwrap();
        for &(t, v) in &seen {
            coords[t].tri[v] = value[t][v].unwrap() - min;
        }
    }
    if conflict {
        let matching = build_matching_system_with(tri, skel);
        let ok = matching.rows.iter().all(|r| r.iter().zip(&x.coords).map(|(a, b)| a * b).sum::<i64>() == 0);
        return Err(if ok && skel.has_ideal_vertices() { SurfaceError::NotClosed } else { SurfaceError::Inconsistent });
    }
    let s = NormalSurface { tri: tri.clone(), coords };
    debug_assert!(s.arcs_consistent());
    Ok(s)
}

/// Result of a Haken sum: the sum with vertex links removed, and how many
/// copies of each vertex link were removed.
#[derive(Clone, Debug)]
pub struct HakenSum {
    pub surface: NormalSurface,
    /// `(vertex class, copies)` for every removed vertex link.
    pub removed_links: Vec<(usize, i64)>,
}

impl HakenSum {
    pub fn removed_count(&self) -> i64 {
        self.removed_links.iter().map(|&(_, k)| k).sum()
    }
}

pub fn haken_sum(s1: &NormalSurface, s2: &NormalSurface) -> Result<HakenSum, SurfaceError> {
    let full = s1.standard_sum(s2)?;
    let tri = s1.tri.clone();
    let skel = compute_skeleton(&tri);
    let surface = reconstruct_with(&tri, &skel, &full.quads())?;
    let mut removed_links = Vec::new();
    for (v, class) in skel.vertices.iter().enumerate() {
        let Some(&(t, c)) = class.corners.first() else { continue };
        let k = full.coords[t].tri[c] - surface.coords[t].tri[c];
        if k > 0 {
            removed_links.push((v, k));
        }
    }
    Ok(HakenSum { surface, removed_links })
}

/// Number of points in which the link of each vertex class meets the edges.
pub fn vertex_link_weights(skel: &Skeleton) -> Vec<i64> {
    let mut w = vec![0i64; skel.vertices.len()];
    for e in 0..skel.edges.len() {
        for v in skel.edge_ends(e) {
            w[v] += 1;
        }
    }
    w
}

/// The link of vertex class `v` as a normal surface.
pub fn vertex_link_surface(tri: &Arc<Triangulation>, skel: &Skeleton, v: usize) -> NormalSurface {
    let mut coords = vec![DiscCounts::default(); tri.tet_count()];
    for &(t, c) in &skel.vertices[v].corners {
        coords[t].tri[c] += 1;
    }
    NormalSurface { tri: tri.clone(), coords }
}

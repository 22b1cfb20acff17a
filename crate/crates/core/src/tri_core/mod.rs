//! Singular and ideal triangulations: the data model, skeleton, vertex links,
//! parsing, canonical labelling and simplification moves.

mod canonical;
mod io;
mod isosig;
mod link;
pub mod moves;
mod simplify;
mod skeleton;

pub use canonical::canonical_hash;
pub use io::{parse_gluings, write_gluings};
pub use isosig::decode_iso_sig;
pub use link::{build_vertex_link, LinkCrossing, LinkSurface};
pub use simplify::{simplify, SimplifyGoal, SimplifyOutcome, DEFAULT_RESTARTS};
pub use skeleton::{
    compute_skeleton, BoundaryComponent, BoundarySource, EdgeClass, EdgeEmbedding, FaceClass, Skeleton,
    VertexClass, VertexKind,
};

use crate::perm::Perm4;
use serde::Serialize;
use thiserror::Error;

/// Where one face of a tetrahedron is glued.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrientationState {
    Unoriented,
    Oriented,
    NonOrientable,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("face ({tet},{face}) is not paired back consistently")]
    NonInvolutive { tet: usize, face: usize },
    #[error("face ({tet},{face}) is glued to itself")]
    SelfGluedFace { tet: usize, face: usize },
    #[error("face ({tet},{face}) is already glued")]
    AlreadyGlued { tet: usize, face: usize },
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("triangulation is not orientable")]
    NonOrientable,
    #[error("isomorphism signature: {0}")]
    IsoSig(String),
}

/// A triangulation as a face-pairing table.
///
/// Boundary faces may carry a nonzero `mark`; marks travel with faces through
/// moves, cutting and crushing so callers can recognise boundary components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    adj: Vec<[Option<Gluing>; 4]>,
    marks: Vec<[u32; 4]>,
    orientation: OrientationState,
}

impl Triangulation {
    /// `n` tetrahedra with every face on the boundary.
    pub fn new(n: usize) -> Self {
        Triangulation { adj: vec![[None; 4]; n], marks: vec![[0; 4]; n], orientation: OrientationState::Unoriented }
    }

    /// Builds a triangulation from a list of one-sided gluings
    /// `(tet, face, partner, perm)`; the reverse direction is implied.
    pub fn from_gluings(n: usize, gluings: &[(usize, usize, usize, Perm4)]) -> Result<Self, TriError> {
        let mut t = Triangulation::new(n);
        for &(a, f, b, p) in gluings {
            t.join(a, f, b, p)?;
        }
        Ok(t)
    }

    pub fn tet_count(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    #[inline]
    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.adj[tet][face]
    }

    pub fn orientation_state(&self) -> OrientationState {
        self.orientation
    }

    pub fn is_oriented(&self) -> bool {
        self.orientation == OrientationState::Oriented
    }

    pub fn mark(&self, tet: usize, face: usize) -> u32 {
        self.marks[tet][face]
    }

    pub fn set_mark(&mut self, tet: usize, face: usize, mark: u32) {
        self.marks[tet][face] = mark;
    }

    pub fn boundary_face_count(&self) -> usize {
        self.adj.iter().map(|a| a.iter().filter(|g| g.is_none()).count()).sum()
    }

    pub fn has_boundary_faces(&self) -> bool {
        self.boundary_face_count() > 0
    }

    /// Appends a tetrahedron with four boundary faces and returns its index.
    pub fn add_tet(&mut self) -> usize {
        self.adj.push([None; 4]);
        self.marks.push([0; 4]);
        self.orientation = OrientationState::Unoriented;
        self.adj.len() - 1
    }

    /// Glues face `face` of `tet` to face `perm(face)` of `other`.
    pub fn join(&mut self, tet: usize, face: usize, other: usize, perm: Perm4) -> Result<(), TriError> {
        let n = self.adj.len();
        if tet >= n || other >= n || face > 3 {
            return Err(TriError::OutOfRange(format!("join ({tet},{face}) -> {other}")));
        }
        let oface = perm.apply(face);
        if tet == other && oface == face {
            return Err(TriError::SelfGluedFace { tet, face });
        }
        if self.adj[tet][face].is_some() {
            return Err(TriError::AlreadyGlued { tet, face });
        }
        if self.adj[other][oface].is_some() {
            return Err(TriError::AlreadyGlued { tet: other, face: oface });
        }
        self.adj[tet][face] = Some(Gluing { tet: other, perm });
        self.adj[other][oface] = Some(Gluing { tet, perm: perm.inverse() });
        self.marks[tet][face] = 0;
        self.marks[other][oface] = 0;
        self.orientation = OrientationState::Unoriented;
        Ok(())
    }

    /// Makes face `face` of `tet` (and its partner) boundary; returns the old gluing.
    pub fn unjoin(&mut self, tet: usize, face: usize) -> Option<Gluing> {
        let g = self.adj[tet][face].take()?;
        self.adj[g.tet][g.perm.apply(face)] = None;
        self.orientation = OrientationState::Unoriented;
        Some(g)
    }

    /// Removes the listed tetrahedra, turning faces glued to them into boundary
    /// faces, and renumbers the survivors in order.
    pub fn remove_tets(&mut self, doomed: &[usize]) {
        let n = self.adj.len();
        let mut kill = vec![false; n];
        for &t in doomed {
            kill[t] = true;
        }
        for t in 0..n {
            if kill[t] {
                for f in 0..4 {
                    self.unjoin(t, f);
                }
            }
        }
        let mut new_index = vec![usize::MAX; n];
        let mut next = 0;
        for t in 0..n {
            if !kill[t] {
                new_index[t] = next;
                next += 1;
            }
        }
        let mut adj = Vec::with_capacity(next);
        let mut marks = Vec::with_capacity(next);
        for t in 0..n {
            if kill[t] {
                continue;
            }
            let mut row = self.adj[t];
            for g in row.iter_mut().flatten() {
                g.tet = new_index[g.tet];
            }
            adj.push(row);
            marks.push(self.marks[t]);
        }
        self.adj = adj;
        self.marks = marks;
        self.orientation = OrientationState::Unoriented;
    }

    /// Checks the involution invariant of the face pairing.
    pub fn check_invariants(&self) -> Result<(), TriError> {
        let n = self.adj.len();
        for t in 0..n {
            for f in 0..4 {
                if let Some(g) = self.adj[t][f] {
                    if g.tet >= n {
                        return Err(TriError::OutOfRange(format!("({t},{f}) -> {}", g.tet)));
                    }
                    let of = g.perm.apply(f);
                    if g.tet == t && of == f {
                        return Err(TriError::SelfGluedFace { tet: t, face: f });
                    }
                    match self.adj[g.tet][of] {
                        Some(back) if back.tet == t && back.perm == g.perm.inverse() => {}
                        _ => return Err(TriError::NonInvolutive { tet: t, face: f }),
                    }
                }
            }
        }
        if self.orientation == OrientationState::Oriented {
            for row in &self.adj {
                for g in row.iter().flatten() {
                    if g.perm.is_even() {
                        return Err(TriError::NonOrientable);
                    }
                }
            }
        }
        Ok(())
    }

    /// Relabels so that every gluing is orientation-reversing, flipping
    /// tetrahedra by exchanging vertices 2 and 3 where needed.
    pub fn orient(&self) -> Result<Triangulation, TriError> {
        let n = self.adj.len();
        let mut sign = vec![0i32; n];
        for start in 0..n {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                for f in 0..4 {
                    if let Some(g) = self.adj[t][f] {
                        let want = -sign[t] * g.perm.sign();
                        if sign[g.tet] == 0 {
                            sign[g.tet] = want;
                            stack.push(g.tet);
                        } else if sign[g.tet] != want {
                            return Err(TriError::NonOrientable);
                        }
                    }
                }
            }
        }
        let flip = Perm4::transposition(2, 3);
        let vertex_maps: Vec<Perm4> =
            sign.iter().map(|&s| if s < 0 { flip } else { Perm4::IDENTITY }).collect();
        let identity: Vec<usize> = (0..n).collect();
        let mut out = self.relabel(&identity, &vertex_maps);
        out.orientation = OrientationState::Oriented;
        Ok(out)
    }

    /// Orientation state as computed by propagation, without relabelling.
    pub fn detect_orientability(&self) -> OrientationState {
        match self.orient() {
            Ok(_) => OrientationState::Oriented,
            Err(_) => OrientationState::NonOrientable,
        }
    }

    /// Tetrahedron `t` becomes `tet_map[t]` and its vertex `v` becomes
    /// `vertex_maps[t](v)`.
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> Triangulation {
        let n = self.adj.len();
        let mut out = Triangulation::new(n);
        for t in 0..n {
            let nt = tet_map[t];
            let vt = vertex_maps[t];
            for f in 0..4 {
                let nf = vt.apply(f);
                out.marks[nt][nf] = self.marks[t][f];
                if let Some(g) = self.adj[t][f] {
                    let perm = vertex_maps[g.tet].compose(g.perm).compose(vt.inverse());
                    out.adj[nt][nf] = Some(Gluing { tet: tet_map[g.tet], perm });
                }
            }
        }
        out.orientation = match self.orientation {
            OrientationState::Oriented if vertex_maps.iter().all(|p| p.is_even()) => OrientationState::Oriented,
            OrientationState::NonOrientable => OrientationState::NonOrientable,
            _ => OrientationState::Unoriented,
        };
        out
    }

    /// Re-derives the orientation flag after in-place edits, relabelling if needed.
    pub fn reoriented(&self) -> Triangulation {
        match self.orient() {
            Ok(t) => t,
            Err(_) => {
                let mut t = self.clone();
                t.orientation = OrientationState::NonOrientable;
                t
            }
        }
    }

    /// Connected components as sorted lists of tetrahedra.
    pub fn tet_components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let t = members[i];
                i += 1;
                for g in self.adj[t].iter().flatten() {
                    if comp[g.tet] == usize::MAX {
                        comp[g.tet] = id;
                        members.push(g.tet);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The sub-triangulation on the given tetrahedra (which must be closed
    /// under gluing), renumbered in the given order.
    pub fn sub_triangulation(&self, tets: &[usize]) -> Triangulation {
        let mut index = vec![usize::MAX; self.adj.len()];
        for (i, &t) in tets.iter().enumerate() {
            index[t] = i;
        }
        let mut out = Triangulation::new(tets.len());
        for (i, &t) in tets.iter().enumerate() {
            for f in 0..4 {
                out.marks[i][f] = self.marks[t][f];
                if let Some(g) = self.adj[t][f] {
                    assert!(index[g.tet] != usize::MAX, "component not closed under gluing");
                    out.adj[i][f] = Some(Gluing { tet: index[g.tet], perm: g.perm });
                }
            }
        }
        out.orientation = self.orientation;
        out
    }

    /// Splits into connected components.
    pub fn split_components(&self) -> Vec<Triangulation> {
        self.tet_components().iter().map(|c| self.sub_triangulation(c)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.tet_components().len() <= 1
    }
}

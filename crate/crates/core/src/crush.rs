//! Crushing a triangulation along a normal surface.
//!
//! Tetrahedra holding quadrilaterals are flattened and discarded; every face
//! of a surviving tetrahedron is re-glued by chasing its old gluing through
//! the flattened tetrahedra until another surviving face (or the boundary)
//! is reached.

use crate::perm::{Perm4, QUAD_PARTNER};
use crate::surface::NormalSurface;
use crate::tri_core::{compute_skeleton, Triangulation, VertexKind};
use serde::Serialize;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrushError {
    #[error("crushing produced an invalid triangulation")]
    NonManifoldResult,
    #[error("surface does not belong to this triangulation")]
    InvalidSurface,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrushOutcome {
    #[serde(skip)]
    pub result: Triangulation,
    pub removed_tets: usize,
    /// Boundary genera of each connected component of the result.
    pub component_boundary_profiles: Vec<Vec<i64>>,
}

pub fn crush(tri: &Triangulation, s: &NormalSurface) -> Result<CrushOutcome, CrushError> {
    let n = tri.tet_count();
    if s.coords().len() != n || s.triangulation().tet_count() != n {
        return Err(CrushError::InvalidSurface);
    }
    let quad: Vec<Option<usize>> = s.coords().iter().map(|c| c.quad_type()).collect();
    let kept: Vec<usize> = (0..n).filter(|&t| quad[t].is_none()).collect();
    let mut new_index = vec![usize::MAX; n];
    for (i, &t) in kept.iter().enumerate() {
        new_index[t] = i;
    }

    let mut out = Triangulation::new(kept.len());
    for &t in &kept {
        for f in 0..4 {
            let a = new_index[t];
            if out.gluing(a, f).is_some() {
                continue;
            }
            match chase(tri, &quad, t, f) {
                Chase::Face(u, p) => {
                    let (b, bf) = (new_index[u], p.apply(f));
                    if (a, f) == (b, bf) {
                        return Err(CrushError::NonManifoldResult);
                    }
                    if let Some(existing) = out.gluing(b, bf) {
                        if existing.tet != a || existing.perm != p.inverse() {
                            return Err(CrushError::NonManifoldResult);
                        }
                        continue;
                    }
                    out.join(a, f, b, p).map_err(|_| CrushError::NonManifoldResult)?;
                }
                Chase::Boundary(mark) => out.set_mark(a, f, mark),
            }
        }
    }

    let skel = compute_skeleton(&out);
    let input_ideal = compute_skeleton(tri).has_ideal_vertices();
    if !skel.is_valid() || (!input_ideal && skel.vertices.iter().any(|v| v.kind == VertexKind::Ideal)) {
        return Err(CrushError::NonManifoldResult);
    }
    let result = if tri.is_oriented() { out.orient().map_err(|_| CrushError::NonManifoldResult)? } else { out };
    let component_boundary_profiles = result
        .split_components()
        .iter()
        .map(|c| {
            let mut g: Vec<i64> = compute_skeleton(c).boundary_components.iter().map(|b| b.genus()).collect();
            g.sort();
            g
        })
        .collect();
    Ok(CrushOutcome { result, removed_tets: n - kept.len(), component_boundary_profiles })
}

enum Chase {
    /// Surviving tetrahedron reached and the vertex map into it.
    Face(usize, Perm4),
    /// Ran into the boundary (carrying its mark) or around a closed loop of
    /// flattened tetrahedra.
    Boundary(u32),
}

fn chase(tri: &Triangulation, quad: &[Option<usize>], t: usize, f: usize) -> Chase {
    let Some(g) = tri.gluing(t, f) else { return Chase::Boundary(tri.mark(t, f)) };
    let mut p = g.perm;
    let mut u = g.tet;
    let mut seen = HashSet::new();
    while let Some(k) = quad[u] {
        let x = p.apply(f);
        if !seen.insert((u, x)) {
            return Chase::Boundary(0);
        }
        let y = QUAD_PARTNER[k][x];
        p = Perm4::transposition(x, y).compose(p);
        match tri.gluing(u, y) {
            None => return Chase::Boundary(tri.mark(u, y)),
            Some(g2) => {
                p = g2.perm.compose(p);
                u = g2.tet;
            }
        }
    }
    Chase::Face(u, p)
}

//! Local moves on triangulations. Each move checks its own preconditions and
//! returns `None` when illegal; [`checked`] additionally verifies that the
//! result is still a valid triangulation with the same boundary profile.

use super::{compute_skeleton, Gluing, Skeleton, Triangulation};
use crate::perm::{edge_number, Perm4};
use crate::union_find::DisjointSet;
use std::collections::HashMap;

/// Rebuilds a triangulation after replacing some tetrahedra by new ones.
///
/// `slot_map` sends each outward face `(old_tet, face)` of a removed tetrahedron
/// to `(new_tet, vertex map)` where `new_tet` indexes the appended tetrahedra;
/// `internal` lists gluings among the new tetrahedra.
fn rebuild(
    tri: &Triangulation,
    removed: &[usize],
    n_new: usize,
    slot_map: &HashMap<(usize, usize), (usize, Perm4)>,
    internal: &[(usize, usize, usize, Perm4)],
) -> Option<Triangulation> {
    let n = tri.tet_count();
    let mut gone = vec![false; n];
    for &t in removed {
        gone[t] = true;
    }
    let mut new_index = vec![usize::MAX; n];
    let mut k = 0;
    for t in 0..n {
        if !gone[t] {
            new_index[t] = k;
            k += 1;
        }
    }
    let base = k;
    let mut out = Triangulation::new(base + n_new);
    // Translate a face slot of the old triangulation.
    let slot = |t: usize, f: usize| -> Option<(usize, usize, Perm4)> {
        if gone[t] {
            let &(nt, vm) = slot_map.get(&(t, f))?;
            Some((base + nt, vm.apply(f), vm))
        } else {
            Some((new_index[t], f, Perm4::IDENTITY))
        }
    };
    for t in 0..n {
        for f in 0..4 {
            let Some((nt, nf, vm)) = slot(t, f) else { continue };
            match tri.gluing(t, f) {
                None => out.set_mark(nt, nf, tri.mark(t, f)),
                Some(g) => {
                    let of = g.perm.apply(f);
                    if (g.tet, of) < (t, f) {
                        continue;
                    }
                    let (ut, uf, um) = slot(g.tet, of)?;
                    let perm = um.compose(g.perm).compose(vm.inverse());
                    debug_assert_eq!(perm.apply(nf), uf);
                    out.join(nt, nf, ut, perm).ok()?;
                }
            }
        }
    }
    for &(a, f, b, p) in internal {
        out.join(base + a, f, base + b, p).ok()?;
    }
    Some(out)
}

/// 1-4 move: cone tetrahedron `t` from a new interior vertex.
pub fn one_four(tri: &Triangulation, t: usize) -> Option<Triangulation> {
    let mut slot_map = HashMap::new();
    for i in 0..4 {
        slot_map.insert((t, i), (i, Perm4::IDENTITY));
    }
    let mut internal = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            internal.push((i, j, j, Perm4::transposition(i, j)));
        }
    }
    rebuild(tri, &[t], 4, &slot_map, &internal)
}

/// 2-3 move across the face `face` of `tet`.
pub fn two_three(tri: &Triangulation, tet: usize, face: usize) -> Option<Triangulation> {
    let g = tri.gluing(tet, face)?;
    let (t0, f0, t1) = (tet, face, g.tet);
    if t0 == t1 {
        return None;
    }
    let f1 = g.perm.apply(f0);
    let fv: Vec<usize> = (0..4).filter(|&v| v != f0).collect();
    let mut slot_map = HashMap::new();
    // New tetrahedron k belongs to face vertex z = fv[k]: labels 0 = apex of t0,
    // 1 = apex of t1, 2 and 3 = the other two face vertices in order.
    let mut label = [[usize::MAX; 4]; 3];
    for k in 0..3 {
        let z = fv[k];
        let others: Vec<usize> = fv.iter().copied().filter(|&v| v != z).collect();
        let (x, y) = (others[0], others[1]);
        label[k][f0] = 0;
        label[k][z] = 1;
        label[k][x] = 2;
        label[k][y] = 3;
        let phi = Perm4::from_images([label[k][0] as u8, label[k][1] as u8, label[k][2] as u8, label[k][3] as u8])?;
        slot_map.insert((t0, z), (k, phi));
        // From t1: f1 -> 1, g(x) -> 2, g(y) -> 3, g(z) -> 0.
        let mut img = [0u8; 4];
        img[f1] = 1;
        img[g.perm.apply(x)] = 2;
        img[g.perm.apply(y)] = 3;
        img[g.perm.apply(z)] = 0;
        slot_map.insert((t1, g.perm.apply(z)), (k, Perm4::from_images(img)?));
    }
    let mut internal = Vec::new();
    for k in 0..3 {
        for k2 in k + 1..3 {
            let (z, z2) = (fv[k], fv[k2]);
            let w = fv.iter().copied().find(|&v| v != z && v != z2).unwrap();
            let mut img = [0u8; 4];
            img[0] = 0;
            img[1] = 1;
            img[label[k][z2]] = label[k2][z] as u8;
            img[label[k][w]] = label[k2][w] as u8;
            internal.push((k, label[k][z2], k2, Perm4::from_images(img)?));
        }
    }
    rebuild(tri, &[t0, t1], 3, &slot_map, &internal)
}

/// 3-2 move about an interior edge of degree three.
pub fn three_two(tri: &Triangulation, skel: &Skeleton, edge: usize) -> Option<Triangulation> {
    let e = &skel.edges[edge];
    if e.boundary || !e.valid || e.degree() != 3 {
        return None;
    }
    let embs = &e.embeddings;
    let tets: Vec<usize> = embs.iter().map(|m| m.tet).collect();
    if tets[0] == tets[1] || tets[1] == tets[2] || tets[0] == tets[2] {
        return None;
    }
    // New tetrahedra: 0 holds end A, 1 holds end B; vertex 3 is the end,
    // vertices 0..3 the equatorial points e_i = p_i(2).
    let mut slot_map = HashMap::new();
    for (i, m) in embs.iter().enumerate() {
        let p = m.perm;
        let (cur, prev, opp) = (i, (i + 2) % 3, (i + 1) % 3);
        let mut img_a = [0u8; 4];
        img_a[p.apply(0)] = 3;
        img_a[p.apply(2)] = cur as u8;
        img_a[p.apply(3)] = prev as u8;
        img_a[p.apply(1)] = opp as u8;
        slot_map.insert((m.tet, p.apply(1)), (0, Perm4::from_images(img_a)?));
        let mut img_b = [0u8; 4];
        img_b[p.apply(1)] = 3;
        img_b[p.apply(2)] = cur as u8;
        img_b[p.apply(3)] = prev as u8;
        img_b[p.apply(0)] = opp as u8;
        slot_map.insert((m.tet, p.apply(0)), (1, Perm4::from_images(img_b)?));
    }
    rebuild(tri, &tets, 2, &slot_map, &[(0, 3, 1, Perm4::IDENTITY)])
}

/// 4-4 move about an interior edge of degree four, realised as a 2-3 move
/// followed by a 3-2 move.
pub fn four_four(tri: &Triangulation, skel: &Skeleton, edge: usize) -> Option<Triangulation> {
    let e = &skel.edges[edge];
    if e.boundary || !e.valid || e.degree() != 4 {
        return None;
    }
    let mut tets: Vec<usize> = e.embeddings.iter().map(|m| m.tet).collect();
    tets.sort_unstable();
    tets.dedup();
    if tets.len() != 4 {
        return None;
    }
    let m0 = e.embeddings[0];
    let mid = two_three(tri, m0.tet, m0.perm.apply(3))?;
    // Find the degree-3 edge joining the same two vertex classes as before:
    // locate it through the unchanged neighbouring tetrahedron.
    let m2 = e.embeddings[2];
    let removed = [m0.tet, e.embeddings[1].tet];
    let shift = removed.iter().filter(|&&r| r < m2.tet).count();
    let t2_new = m2.tet - shift;
    let skel2 = compute_skeleton(&mid);
    let edge2 = skel2.edge_of[t2_new][m2.edge()];
    three_two(&mid, &skel2, edge2)
}

/// 2-0 move flattening the pillow around an interior edge of degree two.
pub fn two_zero_edge(tri: &Triangulation, skel: &Skeleton, edge: usize) -> Option<Triangulation> {
    let e = &skel.edges[edge];
    if e.boundary || !e.valid || e.degree() != 2 {
        return None;
    }
    let (a, b) = (e.embeddings[0], e.embeddings[1]);
    if a.tet == b.tet {
        return None;
    }
    let (p, q) = (a.perm, b.perm);
    let opp_a = skel.edge_of[a.tet][edge_number(p.apply(2), p.apply(3))];
    let opp_b = skel.edge_of[b.tet][edge_number(q.apply(2), q.apply(3))];
    if opp_a == opp_b || (skel.edges[opp_a].boundary && skel.edges[opp_b].boundary) {
        return None;
    }
    for j in 0..2 {
        let fa = skel.face_of[a.tet][p.apply(j)];
        let fb = skel.face_of[b.tet][q.apply(j)];
        if fa == fb {
            return None;
        }
        if skel.faces[fa].back.is_none() && skel.faces[fb].back.is_none() {
            return None;
        }
    }
    let crossover = tri.gluing(a.tet, p.apply(3))?.perm;
    let mut out = tri.clone();
    for j in 0..2 {
        let top = out.gluing(a.tet, p.apply(j));
        let bottom = out.gluing(b.tet, q.apply(j));
        match (top, bottom) {
            (None, None) => return None,
            (None, Some(_)) => {
                let mark = out.mark(a.tet, p.apply(j));
                let g = out.unjoin(b.tet, q.apply(j)).unwrap();
                out.set_mark(g.tet, g.perm.apply(q.apply(j)), mark);
            }
            (Some(_), None) => {
                let mark = out.mark(b.tet, q.apply(j));
                let g = out.unjoin(a.tet, p.apply(j)).unwrap();
                out.set_mark(g.tet, g.perm.apply(p.apply(j)), mark);
            }
            (Some(tg), Some(bg)) => {
                let top_face = tg.perm.apply(p.apply(j));
                out.unjoin(a.tet, p.apply(j));
                out.unjoin(b.tet, q.apply(j));
                let perm = bg.perm.compose(crossover).compose(tg.perm.inverse());
                out.join(tg.tet, top_face, bg.tet, perm).ok()?;
            }
        }
    }
    out.remove_tets(&[a.tet, b.tet]);
    Some(out)
}

/// Collapses an edge joining two distinct vertices, flattening every
/// tetrahedron around it.
pub fn collapse_edge(tri: &Triangulation, skel: &Skeleton, edge: usize) -> Option<Triangulation> {
    use super::VertexKind::*;
    let e = &skel.edges[edge];
    if !e.valid {
        return None;
    }
    let [v0, v1] = skel.edge_ends(edge);
    if v0 == v1 {
        return None;
    }
    let (k0, k1) = (skel.vertices[v0].kind, skel.vertices[v1].kind);
    if k0 == Invalid || k1 == Invalid {
        return None;
    }
    if k0 != Material && k1 != Material && !(k0 == Boundary && k1 == Boundary && e.boundary) {
        return None;
    }

    // Edges identified in pairs by each triangle containing the edge.
    let mut eds = DisjointSet::new(skel.edges.len());
    let mut triangles = Vec::new();
    for m in &e.embeddings {
        triangles.push((m.tet, m.perm, m.perm.apply(3), m.perm.apply(2)));
    }
    if e.boundary {
        let m = e.embeddings[0];
        triangles.push((m.tet, m.perm, m.perm.apply(2), m.perm.apply(3)));
    }
    let mut seen_faces = std::collections::HashSet::new();
    for &(t, p, face, apex) in &triangles {
        if !seen_faces.insert(skel.face_of[t][face]) {
            continue;
        }
        let upper = skel.edge_of[t][edge_number(p.apply(0), apex)];
        let lower = skel.edge_of[t][edge_number(p.apply(1), apex)];
        if !eds.union(upper, lower) {
            return None;
        }
    }

    // Faces flattened together; boundary acts as one extra node.
    let nf = skel.faces.len();
    let mut fds = DisjointSet::new(nf + 1);
    for m in &e.embeddings {
        let node = |f: usize| {
            let id = skel.face_of[m.tet][f];
            if skel.faces[id].back.is_none() {
                nf
            } else {
                id
            }
        };
        if !fds.union(node(m.perm.apply(0)), node(m.perm.apply(1))) {
            return None;
        }
    }

    let mut out = tri.clone();
    let mut doomed = Vec::new();
    for m in &e.embeddings {
        let p = m.perm;
        let t = m.tet;
        let top = out.gluing(t, p.apply(0));
        let bottom = out.gluing(t, p.apply(1));
        let top_mark = out.mark(t, p.apply(0));
        let bottom_mark = out.mark(t, p.apply(1));
        for f in 0..4 {
            out.unjoin(t, f);
        }
        match (top, bottom) {
            (Some(tg), Some(bg)) => {
                let perm = bg.perm.compose(Perm4::transposition(p.apply(0), p.apply(1))).compose(tg.perm.inverse());
                out.join(tg.tet, tg.perm.apply(p.apply(0)), bg.tet, perm).ok()?;
            }
            (Some(tg), None) => out.set_mark(tg.tet, tg.perm.apply(p.apply(0)), bottom_mark),
            (None, Some(bg)) => out.set_mark(bg.tet, bg.perm.apply(p.apply(1)), top_mark),
            (None, None) => {}
        }
        doomed.push(t);
    }
    doomed.sort_unstable();
    doomed.dedup();
    out.remove_tets(&doomed);
    Some(out)
}

/// Removes a tetrahedron with one, two or three boundary faces.
pub fn shell_boundary(tri: &Triangulation, skel: &Skeleton, t: usize) -> Option<Triangulation> {
    let bdry: Vec<usize> = (0..4).filter(|&f| tri.gluing(t, f).is_none()).collect();
    match bdry.len() {
        1 => {
            let i = bdry[0];
            if skel.vertices[skel.vertex_of[t][i]].kind != super::VertexKind::Material {
                return None;
            }
            let others: Vec<usize> = (0..4).filter(|&x| x != i).collect();
            let es: Vec<usize> = others.iter().map(|&j| skel.edge_of[t][edge_number(i, j)]).collect();
            if es[0] == es[1] || es[1] == es[2] || es[0] == es[2] {
                return None;
            }
            for &j in &others {
                if tri.gluing(t, j).map(|g| g.tet) == Some(t) {
                    return None;
                }
            }
        }
        2 => {
            let (i, j) = (bdry[0], bdry[1]);
            let inner = &skel.edges[skel.edge_of[t][edge_number(i, j)]];
            if inner.boundary || !inner.valid {
                return None;
            }
            let rest: Vec<usize> = (0..4).filter(|&x| x != i && x != j).collect();
            if let Some(g) = tri.gluing(t, rest[0]) {
                if g.tet == t && g.perm.apply(rest[0]) == rest[1] {
                    return None;
                }
            }
        }
        3 => {
            let k = (0..4).find(|&f| tri.gluing(t, f).is_some())?;
            if tri.gluing(t, k).map(|g| g.tet) == Some(t) {
                return None;
            }
        }
        _ => return None,
    }
    let mark = bdry.iter().map(|&f| tri.mark(t, f)).max().unwrap_or(0);
    let mut out = tri.clone();
    let exposed: Vec<Gluing> = (0..4).filter_map(|f| out.gluing(t, f).map(|g| Gluing { tet: g.tet, perm: g.perm })).collect();
    let faces: Vec<usize> = (0..4).filter(|&f| out.gluing(t, f).is_some()).collect();
    for f in 0..4 {
        out.unjoin(t, f);
    }
    for (g, &f) in exposed.iter().zip(&faces) {
        out.set_mark(g.tet, g.perm.apply(f), mark);
    }
    out.remove_tets(&[t]);
    Some(out)
}

/// Folds the two boundary faces meeting along boundary edge `edge` onto
/// each other.
pub fn close_book(tri: &Triangulation, skel: &Skeleton, edge: usize) -> Option<Triangulation> {
    let e = &skel.edges[edge];
    if !e.boundary || !e.valid {
        return None;
    }
    let first = e.embeddings[0];
    let last = *e.embeddings.last()?;
    let (t0, f0, apex0) = (first.tet, first.perm.apply(2), first.perm.apply(3));
    let (t1, f1, apex1) = (last.tet, last.perm.apply(3), last.perm.apply(2));
    if (t0, f0) == (t1, f1) || skel.vertex_of[t0][apex0] == skel.vertex_of[t1][apex1] {
        return None;
    }
    let outer = [
        skel.edge_of[t0][edge_number(first.perm.apply(0), apex0)],
        skel.edge_of[t0][edge_number(first.perm.apply(1), apex0)],
        skel.edge_of[t1][edge_number(last.perm.apply(0), apex1)],
        skel.edge_of[t1][edge_number(last.perm.apply(1), apex1)],
    ];
    for i in 0..4 {
        if outer[i] == edge || outer[i + 1..].contains(&outer[i]) {
            return None;
        }
    }
    let perm = last.perm.compose(Perm4::transposition(2, 3)).compose(first.perm.inverse());
    let mut out = tri.clone();
    out.set_mark(t0, f0, 0);
    out.set_mark(t1, f1, 0);
    out.join(t0, f0, t1, perm).ok()?;
    Some(out)
}

/// Summary used to confirm that a move preserved the manifold's coarse shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryProfile {
    pub components: usize,
    pub boundary: Vec<(bool, i64, u32)>,
}

pub fn boundary_profile(tri: &Triangulation, skel: &Skeleton) -> BoundaryProfile {
    let mut boundary: Vec<(bool, i64, u32)> =
        skel.boundary_components.iter().map(|b| (b.is_ideal(), b.euler, b.mark)).collect();
    boundary.sort_unstable();
    BoundaryProfile { components: tri.tet_components().len(), boundary }
}

/// Accepts a move's output only if it is valid and keeps the boundary profile.
pub fn checked(before: &BoundaryProfile, after: Option<Triangulation>) -> Option<(Triangulation, Skeleton)> {
    let t = after?;
    if t.check_invariants().is_err() {
        return None;
    }
    let s = compute_skeleton(&t);
    if !s.is_valid() || boundary_profile(&t, &s) != *before {
        return None;
    }
    Some((t, s))
}

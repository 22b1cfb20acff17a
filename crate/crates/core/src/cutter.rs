//! Truncating ideal vertices and cutting a triangulation open along a
//! normal surface.

use crate::perm::{Perm4, QUAD_PARTNER};
use crate::surface::{DiscCounts, NormalSurface, RegionGraph};
use crate::tri_core::{compute_skeleton, moves, simplify, Skeleton, SimplifyGoal, Triangulation, VertexKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::atomic::AtomicBool;

/// Face mark for boundary faces lying on a copy of the cut surface.
pub const MARK_COPY_OF_S: u32 = 1;

/// Face mark for the `k`-th boundary component of the original manifold.
pub fn original_mark(k: usize) -> u32 {
    2 + k as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BoundaryTag {
    CopyOfS,
    OriginalBoundary(usize),
}

impl BoundaryTag {
    pub fn from_mark(mark: u32) -> Self {
        if mark == MARK_COPY_OF_S {
            BoundaryTag::CopyOfS
        } else {
            BoundaryTag::OriginalBoundary(mark.saturating_sub(2) as usize)
        }
    }
}

#[derive(Clone, Debug)]
pub struct CutPiece {
    pub triangulation: Triangulation,
    /// `(tag, genus)` per boundary component, in skeleton order.
    pub boundary_tags: Vec<(BoundaryTag, i64)>,
}

impl CutPiece {
    pub fn new(triangulation: Triangulation) -> Self {
        let skel = compute_skeleton(&triangulation);
        let boundary_tags = boundary_tags(&skel);
        CutPiece { triangulation, boundary_tags }
    }
}

pub fn boundary_tags(skel: &Skeleton) -> Vec<(BoundaryTag, i64)> {
    skel.boundary_components.iter().map(|b| (BoundaryTag::from_mark(b.mark), b.genus())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Label {
    V(usize),
    /// Point on the edge `lo < hi` at distance `d` from `lo`.
    E(usize, usize, i64),
    Cell(usize),
    Face(Vec<Label>),
    Disc(usize, usize),
}

/// Point at distance `d` from `a` on the edge towards `b`, given the
/// number `w` of points on that edge.
fn pt(a: usize, b: usize, d: i64, w: i64) -> Label {
    if a < b {
        Label::E(a, b, d)
    } else {
        Label::E(b, a, w + 1 - d)
    }
}

fn map_label(l: &Label, g: Perm4, w: &[[i64; 4]; 4]) -> Label {
    match l {
        Label::V(x) => Label::V(g.apply(*x)),
        Label::E(a, b, d) => pt(g.apply(*a), g.apply(*b), *d, w[*a][*b]),
        Label::Face(pts) => {
            let mut m: Vec<Label> = pts.iter().map(|p| map_label(p, g, w)).collect();
            m.sort();
            Label::Face(m)
        }
        other => other.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PolyKind {
    /// Lies in face `f` of the old tetrahedron.
    TetFace(usize),
    /// A side of a normal disc; becomes boundary with this mark.
    Disc(u32),
}

struct Polygon {
    points: Vec<Label>,
    kind: PolyKind,
    center: Label,
}

/// Where a new face sits: its tetrahedron, face number, and old location.
struct PendingFace {
    tet: usize,
    face: usize,
    labels: [Label; 4],
}

/// Cuts `tri` along the discs in `coords` (which may be empty), truncating
/// every ideal vertex on the way. Disc sides become boundary marked
/// [`MARK_COPY_OF_S`]; truncated vertices and existing boundary faces carry
/// [`original_mark`] of their boundary component unless already marked.
pub fn cut_open(tri: &Triangulation, coords: &[DiscCounts]) -> Triangulation {
    let skel = compute_skeleton(tri);
    let n = tri.tet_count();
    let ideal = |t: usize, v: usize| skel.vertices[skel.vertex_of[t][v]].kind == VertexKind::Ideal;
    let ideal_component: HashMap<usize, usize> = skel
        .boundary_components
        .iter()
        .enumerate()
        .filter_map(|(k, b)| match b.source {
            crate::tri_core::BoundarySource::Ideal { vertex } => Some((vertex, k)),
            _ => None,
        })
        .collect();

    // Disc counts with one truncation triangle nearest each ideal corner.
    let aug: Vec<DiscCounts> = (0..n)
        .map(|t| {
            let mut c = coords.get(t).copied().unwrap_or_default();
            for v in 0..4 {
                if ideal(t, v) {
                    c.tri[v] += 1;
                }
            }
            c
        })
        .collect();

    let mut new_tets: Vec<[Label; 4]> = Vec::new();
    let mut faces = FaceBook::default();
    let mut internal: Vec<(PendingFace, PendingFace)> = Vec::new();

    for t in 0..n {
        let c = aug[t];
        let w = c.weights();
        let p = |a: usize, b: usize, d: i64| pt(a, b, d, w[a][b]);
        let nq = c.quad_count();
        let qt = c.quad_type();
        let near = |v: usize| qt.is_none_or(|q| v == 0 || QUAD_PARTNER[q][v] == 0);
        let n_cells = RegionGraph::cells_in(&c);
        let mut cells: Vec<Vec<Polygon>> = (0..n_cells).map(|_| Vec::new()).collect();
        let dropped = |cell: usize| -> bool { (0..4).any(|v| ideal(t, v) && cell == RegionGraph::slab(0, &c, v, 0)) };

        for f in 0..4 {
            let fv: Vec<usize> = (0..4).filter(|&x| x != f).collect();
            for (i, &v) in fv.iter().enumerate() {
                let a = fv[(i + 1) % 3];
                let b = fv[(i + 2) % 3];
                for k in 0..c.arcs_at(f, v) {
                    let pts = if k == 0 {
                        vec![Label::V(v), p(v, a, 1), p(v, b, 1)]
                    } else {
                        vec![p(v, a, k), p(v, a, k + 1), p(v, b, k + 1), p(v, b, k)]
                    };
                    let cell = RegionGraph::face_cell(0, &c, f, Some((v, k)));
                    cells[cell].push(face_polygon(pts, f));
                }
            }
            // Middle of the face: walk x -> y -> z.
            let mut pts = Vec::new();
            for i in 0..3 {
                let x = fv[i];
                let y = fv[(i + 1) % 3];
                let z = fv[(i + 2) % 3];
                let nx = c.arcs_at(f, x);
                if nx == 0 {
                    pts.push(Label::V(x));
                } else {
                    pts.push(p(x, z, nx));
                    pts.push(p(x, y, nx));
                }
            }
            let cell = RegionGraph::face_cell(0, &c, f, None);
            cells[cell].push(face_polygon(pts, f));
        }

        let mut disc_id = 0;
        for v in 0..4 {
            let others: Vec<usize> = (0..4).filter(|&x| x != v).collect();
            for i in 0..c.tri[v] {
                let pts: Vec<Label> = others.iter().map(|&x| p(v, x, i + 1)).collect();
                let inner = RegionGraph::slab(0, &c, v, i);
                let outer = if i + 1 < c.tri[v] {
                    RegionGraph::slab(0, &c, v, i + 1)
                } else {
                    RegionGraph::central(0, &c, if near(v) { 0 } else { nq })
                };
                let truncation = ideal(t, v) && i == 0;
                let mark =
                    if truncation { original_mark(ideal_component[&skel.vertex_of[t][v]]) } else { MARK_COPY_OF_S };
                for (side, cell) in [(0, inner), (1, outer)] {
                    cells[cell].push(Polygon { points: pts.clone(), kind: PolyKind::Disc(mark), center: Label::Disc(disc_id, side) });
                }
                disc_id += 1;
            }
        }
        if let Some(q) = qt {
            let a = 0;
            let b = QUAD_PARTNER[q][0];
            let far: Vec<usize> = (0..4).filter(|&x| x != a && x != b).collect();
            let (cc, dd) = (far[0], far[1]);
            for i in 0..nq {
                let pts = vec![
                    p(a, cc, c.tri[a] + i + 1),
                    p(a, dd, c.tri[a] + i + 1),
                    p(b, dd, c.tri[b] + i + 1),
                    p(b, cc, c.tri[b] + i + 1),
                ];
                for (side, r) in [(0, i), (1, i + 1)] {
                    let cell = RegionGraph::central(0, &c, r);
                    cells[cell].push(Polygon {
                        points: pts.clone(),
                        kind: PolyKind::Disc(MARK_COPY_OF_S),
                        center: Label::Disc(disc_id, side),
                    });
                }
                disc_id += 1;
            }
        }

        for (ci, polys) in cells.into_iter().enumerate() {
            if dropped(ci) {
                continue;
            }
            let single = polys.len() == 4 && polys.iter().all(|p| p.points.len() == 3);
            let mut cell_tets: Vec<usize> = Vec::new();
            if single {
                let mut verts: Vec<Label> = polys.iter().flat_map(|p| p.points.iter().cloned()).collect();
                verts.sort();
                verts.dedup();
                assert_eq!(verts.len(), 4, "tetrahedral cell must have four corners");
                let labels: [Label; 4] = std::array::from_fn(|i| verts[i].clone());
                let id = new_tets.len();
                new_tets.push(labels.clone());
                for poly in &polys {
                    let opp = (0..4).find(|&i| !poly.points.contains(&labels[i])).unwrap();
                    faces.record(t, id, opp, &labels, poly.kind);
                }
            } else {
                let center = Label::Cell(ci);
                for poly in &polys {
                    let k = poly.points.len();
                    if k == 3 {
                        let labels = [center.clone(), poly.points[0].clone(), poly.points[1].clone(), poly.points[2].clone()];
                        let id = new_tets.len();
                        new_tets.push(labels.clone());
                        faces.record(t, id, 0, &labels, poly.kind);
                        cell_tets.push(id);
                    } else {
                        for j in 0..k {
                            let labels = [
                                center.clone(),
                                poly.center.clone(),
                                poly.points[j].clone(),
                                poly.points[(j + 1) % k].clone(),
                            ];
                            let id = new_tets.len();
                            new_tets.push(labels.clone());
                            faces.record(t, id, 0, &labels, poly.kind);
                            cell_tets.push(id);
                        }
                    }
                }
                // Faces through the cell centre pair up inside the cell.
                let mut open: HashMap<Vec<Label>, PendingFace> = HashMap::new();
                for &id in &cell_tets {
                    for face in 1..4 {
                        let mut key: Vec<Label> = (0..4).filter(|&i| i != face).map(|i| new_tets[id][i].clone()).collect();
                        key.sort();
                        let pf = PendingFace { tet: id, face, labels: new_tets[id].clone() };
                        match open.remove(&key) {
                            Some(other) => internal.push((other, pf)),
                            None => {
                                open.insert(key, pf);
                            }
                        }
                    }
                }
                assert!(open.is_empty(), "cell triangulation left unmatched internal faces");
            }
        }
    }

    let mut out = Triangulation::new(new_tets.len());
    for (a, b) in internal {
        let perm = matching_perm(&a.labels, a.face, &b.labels, b.face, |l| l.clone());
        out.join(a.tet, a.face, b.tet, perm).expect("internal cell gluing");
    }
    for (&(t, f, ref key), &(id, face)) in &faces.slots {
        if out.gluing(id, face).is_some() {
            continue;
        }
        match tri.gluing(t, f) {
            None => {
                let mark = tri.mark(t, f);
                let k = skel.boundary_component_of_face[t][f];
                out.set_mark(id, face, if mark != 0 { mark } else { original_mark(k) });
            }
            Some(g) => {
                let w = aug[t].weights();
                let mut mapped: Vec<Label> = key.iter().map(|l| map_label(l, g.perm, &w)).collect();
                mapped.sort();
                let &(oid, oface) =
                    faces.slots.get(&(g.tet, g.perm.apply(f), mapped)).expect("matching face across the old gluing");
                let perm = matching_perm(&new_tets[id], face, &new_tets[oid], oface, |l| map_label(l, g.perm, &w));
                out.join(id, face, oid, perm).expect("cross gluing");
            }
        }
    }
    for (id, face, mark) in faces.boundary {
        out.set_mark(id, face, mark);
    }
    debug_assert!(out.check_invariants().is_ok());
    out
}

/// New faces lying in old faces, keyed by old tetrahedron, old face and
/// sorted corner labels, and new faces lying on disc sides.
#[derive(Default)]
struct FaceBook {
    slots: BTreeMap<(usize, usize, Vec<Label>), (usize, usize)>,
    boundary: Vec<(usize, usize, u32)>,
}

impl FaceBook {
    fn record(&mut self, t: usize, id: usize, face: usize, labels: &[Label; 4], kind: PolyKind) {
        match kind {
            PolyKind::Disc(mark) => self.boundary.push((id, face, mark)),
            PolyKind::TetFace(f) => {
                let mut key: Vec<Label> = (0..4).filter(|&i| i != face).map(|i| labels[i].clone()).collect();
                key.sort();
                let prev = self.slots.insert((t, f, key), (id, face));
                assert!(prev.is_none(), "duplicate face in old face {f}");
            }
        }
    }
}

fn face_polygon(points: Vec<Label>, f: usize) -> Polygon {
    let mut sorted = points.clone();
    sorted.sort();
    Polygon { points, kind: PolyKind::TetFace(f), center: Label::Face(sorted) }
}

/// Vertex map from tetrahedron A to B across faces `fa`, `fb`, matching
/// labels after applying `map` to the labels of A.
fn matching_perm(a: &[Label; 4], fa: usize, b: &[Label; 4], fb: usize, map: impl Fn(&Label) -> Label) -> Perm4 {
    let mut img = [0u8; 4];
    img[fa] = fb as u8;
    for i in (0..4).filter(|&i| i != fa) {
        let target = map(&a[i]);
        let j = (0..4).find(|&j| j != fb && b[j] == target).expect("face labels match");
        img[i] = j as u8;
    }
    Perm4::from_images(img).expect("face matching is a bijection")
}

/// Compact triangulation with every ideal vertex truncated.
pub fn truncate(tri: &Triangulation) -> Triangulation {
    let skel = compute_skeleton(tri);
    if !skel.has_ideal_vertices() {
        return tri.clone();
    }
    let out = cut_open(tri, &[]);
    if tri.is_oriented() {
        out.orient().unwrap_or(out)
    } else {
        out
    }
}

/// Cuts along a closed two-sided surface, truncating ideal vertices first.
/// Returns one piece per complementary region.
pub fn cut_along(tri: &Triangulation, s: &NormalSurface) -> Vec<CutPiece> {
    let cut = cut_open(tri, s.coords());
    let cut = if tri.is_oriented() { cut.orient().unwrap_or(cut) } else { cut };
    cut.split_components().into_iter().map(CutPiece::new).collect()
}

/// Evidence that the boundary of a piece compresses or that a sphere
/// separates its boundary components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressibilityEvidence {
    pub description: String,
    pub boundary_before: Vec<(BoundaryTag, i64)>,
    pub boundary_after: Vec<Vec<(BoundaryTag, i64)>>,
}

/// Sorted boundary profile used to recognise the same bounded manifold after crushing.
pub fn boundary_signature(tags: &[(BoundaryTag, i64)]) -> Vec<(BoundaryTag, i64)> {
    let mut v = tags.to_vec();
    v.sort();
    v
}

/// Simplifies towards no internal vertices and one vertex per boundary
/// component. When moves stall, crushes normal spheres and discs; a change
/// in the boundary while doing so is returned as evidence.
pub fn normalize_vertices(tri: &Triangulation, seed: u64) -> (Triangulation, Option<CompressibilityEvidence>) {
    normalize_vertices_with(tri, seed, None)
}

/// As [`normalize_vertices`], abandoning the sphere and disc search when
/// `cancel` is raised.
pub fn normalize_vertices_with(
    tri: &Triangulation,
    seed: u64,
    cancel: Option<&AtomicBool>,
) -> (Triangulation, Option<CompressibilityEvidence>) {
    let mut cur = tri.clone();
    loop {
        let out = simplify(&cur, SimplifyGoal::MinimalVertices, seed, crate::tri_core::DEFAULT_RESTARTS);
        if out.goal_met {
            return (out.triangulation, None);
        }
        let t = out.triangulation;
        let before = boundary_tags(&compute_skeleton(&t));
        let Some(e) = crate::pipeline::find_positive_chi_surface(&t, &[], cancel).ok().flatten() else {
            return (t, None);
        };
        let crushed = match crate::crush::crush(&t, &e) {
            Ok(c) => c,
            Err(_) => return (t, None),
        };
        let sig = boundary_signature(&before);
        let parts = crushed.result.split_components();
        let same = parts.into_iter().find(|p| boundary_signature(&boundary_tags(&compute_skeleton(p))) == sig);
        match same {
            Some(p) if !before.is_empty() || p.tet_count() > 0 => cur = p,
            _ => {
                let after = crushed
                    .result
                    .split_components()
                    .iter()
                    .map(|p| boundary_signature(&boundary_tags(&compute_skeleton(p))))
                    .collect();
                return (
                    t,
                    Some(CompressibilityEvidence {
                        description: "crushing a normal sphere or disc changed the boundary".into(),
                        boundary_before: sig,
                        boundary_after: after,
                    }),
                );
            }
        }
    }
}

/// Retriangulations of a piece: `r` random 2-3 moves for each `r` in
/// `rounds`, each simplified, with duplicates (by canonical hash) dropped.
pub fn retriangulation_variants(tri: &Triangulation, rounds: &[usize], seed: u64) -> Vec<Triangulation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &r in rounds {
        let mut attempts = 0;
        loop {
            attempts += 1;
            let mut cur = tri.clone();
            for _ in 0..r {
                let n = cur.tet_count();
                if n == 0 {
                    break;
                }
                for _ in 0..16 {
                    let t = rng.gen_range(0..n);
                    let f = rng.gen_range(0..4);
                    if let Some(next) = moves::two_three(&cur, t, f) {
                        if compute_skeleton(&next).is_valid() {
                            cur = next;
                            break;
                        }
                    }
                }
            }
            let simplified = simplify(&cur, SimplifyGoal::MinimalVertices, rng.gen(), crate::tri_core::DEFAULT_RESTARTS).triangulation;
            let key = crate::tri_core::canonical_hash(&simplified);
            if seen.insert(key) {
                out.push(simplified);
                break;
            }
            if attempts >= 4 {
                break;
            }
        }
    }
    out
}

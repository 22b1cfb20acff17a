use super::Triangulation;
use crate::perm::{edge_number, Perm4, EDGE_VERTICES};
use crate::union_find::DisjointSet;
use serde::Serialize;

/// One appearance of an edge class inside a tetrahedron.
///
/// `perm(0)`, `perm(1)` are the endpoints (in the class orientation); the walk
/// around the edge leaves this tetrahedron through face `perm(3)` and enters
/// through face `perm(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeEmbedding {
    pub tet: usize,
    pub perm: Perm4,
}

impl EdgeEmbedding {
    pub fn edge(&self) -> usize {
        edge_number(self.perm.apply(0), self.perm.apply(1))
    }
}

#[derive(Clone, Debug)]
pub struct EdgeClass {
    pub embeddings: Vec<EdgeEmbedding>,
    pub boundary: bool,
    pub valid: bool,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.embeddings.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VertexKind {
    Material,
    Ideal,
    Boundary,
    Invalid,
}

#[derive(Clone, Debug)]
pub struct VertexClass {
    pub corners: Vec<(usize, usize)>,
    pub kind: VertexKind,
    pub link_euler: i64,
    pub link_closed: bool,
    pub link_orientable: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct FaceClass {
    pub front: (usize, usize),
    pub back: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundarySource {
    /// Boundary faces `(tet, face)` forming one real boundary surface.
    Real { faces: Vec<(usize, usize)> },
    /// The link of an ideal vertex.
    Ideal { vertex: usize },
}

#[derive(Clone, Debug)]
pub struct BoundaryComponent {
    pub source: BoundarySource,
    pub euler: i64,
    pub orientable: bool,
    /// Largest face mark seen on the component (0 for ideal components).
    pub mark: u32,
}

impl BoundaryComponent {
    /// Orientable genus, or the number of cross-caps halved (rounded down) otherwise.
    pub fn genus(&self) -> i64 {
        if self.orientable {
            (2 - self.euler) / 2
        } else {
            2 - self.euler
        }
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self.source, BoundarySource::Ideal { .. })
    }
}

#[derive(Clone, Debug)]
pub struct Skeleton {
    pub edges: Vec<EdgeClass>,
    pub edge_of: Vec<[usize; 6]>,
    pub vertices: Vec<VertexClass>,
    pub vertex_of: Vec<[usize; 4]>,
    pub faces: Vec<FaceClass>,
    pub face_of: Vec<[usize; 4]>,
    pub boundary_components: Vec<BoundaryComponent>,
    /// Real boundary component of each boundary face, `usize::MAX` elsewhere.
    pub boundary_component_of_face: Vec<[usize; 4]>,
}

impl Skeleton {
    pub fn is_valid(&self) -> bool {
        self.edges.iter().all(|e| e.valid) && self.vertices.iter().all(|v| v.kind != VertexKind::Invalid)
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.iter().all(|v| v.kind == VertexKind::Material)
    }

    pub fn has_ideal_vertices(&self) -> bool {
        self.vertices.iter().any(|v| v.kind == VertexKind::Ideal)
    }

    pub fn has_real_boundary(&self) -> bool {
        self.boundary_components.iter().any(|b| !b.is_ideal())
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = (usize, &EdgeClass)> {
        self.edges.iter().enumerate().filter(|(_, e)| !e.boundary)
    }

    pub fn vertex_count_of(&self, kind: VertexKind) -> usize {
        self.vertices.iter().filter(|v| v.kind == kind).count()
    }

    /// Vertex class at end 0 / end 1 of an edge class.
    pub fn edge_ends(&self, e: usize) -> [usize; 2] {
        let emb = self.edges[e].embeddings[0];
        [self.vertex_of[emb.tet][emb.perm.apply(0)], self.vertex_of[emb.tet][emb.perm.apply(1)]]
    }
}

fn edge_start_perm(e: usize) -> Perm4 {
    let [a, b] = EDGE_VERTICES[e];
    let mut rest = (0..4).filter(|&x| x != a && x != b);
    let c = rest.next().unwrap();
    let d = rest.next().unwrap();
    Perm4::new(a as u8, b as u8, c as u8, d as u8)
}

/// Steps across face `perm(exit)` and returns the embedding on the other side,
/// relabelled so the edge keeps its orientation and entry/exit faces swap roles.
fn step(tri: &Triangulation, emb: EdgeEmbedding, exit: usize) -> Option<EdgeEmbedding> {
    let g = tri.gluing(emb.tet, emb.perm.apply(exit))?;
    let p = g.perm.compose(emb.perm).compose(Perm4::transposition(2, 3));
    Some(EdgeEmbedding { tet: g.tet, perm: p })
}

/// Computes edge, vertex and face classes, vertex links and boundary components.
pub fn compute_skeleton(tri: &Triangulation) -> Skeleton {
    let n = tri.tet_count();

    // Edges: walk around each edge.
    let mut edge_of = vec![[usize::MAX; 6]; n];
    let mut edges: Vec<EdgeClass> = Vec::new();
    for t in 0..n {
        for e in 0..6 {
            if edge_of[t][e] != usize::MAX {
                continue;
            }
            let id = edges.len();
            let start = EdgeEmbedding { tet: t, perm: edge_start_perm(e) };
            let limit = 6 * n + 2;
            let mut valid = true;

            // Walk backwards to the start of a boundary chain, if any.
            let mut first = start;
            let mut boundary = false;
            let mut steps = 0;
            loop {
                match step(tri, first, 2) {
                    None => {
                        boundary = true;
                        break;
                    }
                    Some(prev) => {
                        if prev.tet == start.tet && prev.edge() == e {
                            if prev.perm.apply(0) != start.perm.apply(0) {
                                valid = false;
                            }
                            first = start;
                            break;
                        }
                        first = prev;
                    }
                }
                steps += 1;
                if steps > limit {
                    valid = false;
                    first = start;
                    break;
                }
            }

            let mut embeddings = vec![first];
            edge_of[first.tet][first.edge()] = id;
            let mut cur = first;
            loop {
                match step(tri, cur, 3) {
                    None => break,
                    Some(next) => {
                        let slot = next.edge();
                        if next.tet == first.tet && slot == first.edge() {
                            if next.perm.apply(0) != first.perm.apply(0) {
                                valid = false;
                            }
                            break;
                        }
                        if edge_of[next.tet][slot] == id {
                            valid = false;
                            break;
                        }
                        edge_of[next.tet][slot] = id;
                        embeddings.push(next);
                        cur = next;
                    }
                }
                if embeddings.len() > limit {
                    valid = false;
                    break;
                }
            }
            edges.push(EdgeClass { embeddings, boundary, valid });
        }
    }

    // Faces.
    let mut face_of = vec![[usize::MAX; 4]; n];
    let mut faces = Vec::new();
    for t in 0..n {
        for f in 0..4 {
            if face_of[t][f] != usize::MAX {
                continue;
            }
            let id = faces.len();
            face_of[t][f] = id;
            let back = tri.gluing(t, f).map(|g| {
                let of = g.perm.apply(f);
                face_of[g.tet][of] = id;
                (g.tet, of)
            });
            faces.push(FaceClass { front: (t, f), back });
        }
    }

    // Vertices.
    let mut ds = DisjointSet::new(4 * n);
    for t in 0..n {
        for f in 0..4 {
            if let Some(g) = tri.gluing(t, f) {
                for v in (0..4).filter(|&v| v != f) {
                    ds.union(4 * t + v, 4 * g.tet + g.perm.apply(v));
                }
            }
        }
    }
    let mut vertex_of = vec![[usize::MAX; 4]; n];
    let mut root_to_vertex = std::collections::HashMap::new();
    let mut corners_of: Vec<Vec<(usize, usize)>> = Vec::new();
    for t in 0..n {
        for v in 0..4 {
            let r = ds.find(4 * t + v);
            let id = *root_to_vertex.entry(r).or_insert_with(|| {
                corners_of.push(Vec::new());
                corners_of.len() - 1
            });
            vertex_of[t][v] = id;
            corners_of[id].push((t, v));
        }
    }
    let nv = corners_of.len();
    let mut link_v = vec![0i64; nv];
    let mut link_e = vec![0i64; nv];
    let mut link_f = vec![0i64; nv];
    let mut link_closed = vec![true; nv];
    for (id, c) in corners_of.iter().enumerate() {
        link_f[id] = c.len() as i64;
    }
    for edge in &edges {
        let emb = edge.embeddings[0];
        link_v[vertex_of[emb.tet][emb.perm.apply(0)]] += 1;
        link_v[vertex_of[emb.tet][emb.perm.apply(1)]] += 1;
    }
    for face in &faces {
        let (t, f) = face.front;
        for v in (0..4).filter(|&v| v != f) {
            link_e[vertex_of[t][v]] += 1;
            if face.back.is_none() {
                link_closed[vertex_of[t][v]] = false;
            }
        }
    }
    // Link orientability by propagating a sign on corners.
    let mut link_orientable = vec![true; nv];
    let mut corner_sign = vec![0i32; 4 * n];
    for t in 0..n {
        for v in 0..4 {
            if corner_sign[4 * t + v] != 0 {
                continue;
            }
            corner_sign[4 * t + v] = 1;
            let mut stack = vec![(t, v)];
            while let Some((a, av)) = stack.pop() {
                let s = corner_sign[4 * a + av];
                for f in (0..4).filter(|&f| f != av) {
                    if let Some(g) = tri.gluing(a, f) {
                        let bv = g.perm.apply(av);
                        let want = -s * g.perm.sign();
                        let slot = &mut corner_sign[4 * g.tet + bv];
                        if *slot == 0 {
                            *slot = want;
                            stack.push((g.tet, bv));
                        } else if *slot != want {
                            link_orientable[vertex_of[a][av]] = false;
                        }
                    }
                }
            }
        }
    }
    let vertices: Vec<VertexClass> = corners_of
        .into_iter()
        .enumerate()
        .map(|(id, corners)| {
            let euler = link_v[id] - link_e[id] + link_f[id];
            let kind = if link_closed[id] {
                if euler == 2 {
                    VertexKind::Material
                } else {
                    VertexKind::Ideal
                }
            } else if euler == 1 {
                VertexKind::Boundary
            } else {
                VertexKind::Invalid
            };
            VertexClass {
                corners,
                kind,
                link_euler: euler,
                link_closed: link_closed[id],
                link_orientable: link_orientable[id],
            }
        })
        .collect();

    // Real boundary components: boundary faces joined along boundary edges.
    let mut bds = DisjointSet::new(4 * n);
    for edge in edges.iter().filter(|e| e.boundary) {
        let a = edge.embeddings[0];
        let b = *edge.embeddings.last().unwrap();
        bds.union(4 * a.tet + a.perm.apply(2), 4 * b.tet + b.perm.apply(3));
    }
    let mut boundary_component_of_face = vec![[usize::MAX; 4]; n];
    let mut comp_faces: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut root_to_comp = std::collections::HashMap::new();
    for t in 0..n {
        for f in 0..4 {
            if tri.gluing(t, f).is_some() {
                continue;
            }
            let r = bds.find(4 * t + f);
            let id = *root_to_comp.entry(r).or_insert_with(|| {
                comp_faces.push(Vec::new());
                comp_faces.len() - 1
            });
            boundary_component_of_face[t][f] = id;
            comp_faces[id].push((t, f));
        }
    }
    let ambient_orientable = tri.is_oriented() || tri.orient().is_ok();
    let mut boundary_components = Vec::new();
    for faces_here in comp_faces {
        let mut vs = std::collections::BTreeSet::new();
        let mut es = std::collections::BTreeSet::new();
        let mut mark = 0;
        for &(t, f) in &faces_here {
            mark = mark.max(tri.mark(t, f));
            for v in (0..4).filter(|&v| v != f) {
                vs.insert(vertex_of[t][v]);
                for w in (0..4).filter(|&w| w != f && w > v) {
                    es.insert(edge_of[t][edge_number(v, w)]);
                }
            }
        }
        let euler = vs.len() as i64 - es.len() as i64 + faces_here.len() as i64;
        boundary_components.push(BoundaryComponent {
            source: BoundarySource::Real { faces: faces_here },
            euler,
            orientable: ambient_orientable,
            mark,
        });
    }
    for (id, v) in vertices.iter().enumerate() {
        if v.kind == VertexKind::Ideal {
            boundary_components.push(BoundaryComponent {
                source: BoundarySource::Ideal { vertex: id },
                euler: v.link_euler,
                orientable: v.link_orientable,
                mark: 0,
            });
        }
    }

    Skeleton { edges, edge_of, vertices, vertex_of, faces, face_of, boundary_components, boundary_component_of_face }
}

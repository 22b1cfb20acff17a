use super::{Skeleton, Triangulation};
use crate::perm::Perm4;
use crate::union_find::DisjointSet;
use std::collections::HashMap;

/// A step of a dual path in a vertex link: leave triangle `from` through the
/// side lying in tetrahedron face `face` (of the tetrahedron owning `from`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkCrossing {
    pub from: usize,
    pub face: usize,
}

/// The triangulated link of a vertex class. Triangle `i` is the corner
/// `triangles[i] = (tet, vertex)`; its sides are indexed by the tetrahedron
/// faces other than `vertex`.
#[derive(Clone, Debug)]
pub struct LinkSurface {
    pub vertex: usize,
    pub triangles: Vec<(usize, usize)>,
    /// `neighbours[i][f]`: triangle across side `f` and the matching side there.
    pub neighbours: Vec<[Option<(usize, usize)>; 4]>,
    pub euler: i64,
    pub genus: i64,
    pub closed: bool,
    pub orientable: bool,
    index: HashMap<(usize, usize), usize>,
    gluing_perm: Vec<[Option<Perm4>; 4]>,
}

impl LinkSurface {
    pub fn triangle_index(&self, tet: usize, vertex: usize) -> Option<usize> {
        self.index.get(&(tet, vertex)).copied()
    }

    /// Target of a crossing: `(triangle, side)` on the far side.
    pub fn cross(&self, c: LinkCrossing) -> Option<(usize, usize)> {
        self.neighbours[c.from][c.face]
    }

    /// Closed dual cycles forming a basis of H1 of a closed link (2g of them
    /// for an orientable link), found by the tree-cotree construction.
    pub fn homology_basis(&self) -> Vec<Vec<LinkCrossing>> {
        let nt = self.triangles.len();
        if nt == 0 || !self.closed {
            return Vec::new();
        }
        // Dual spanning tree by BFS from triangle 0.
        let mut parent: Vec<Option<LinkCrossing>> = vec![None; nt];
        let mut depth = vec![usize::MAX; nt];
        depth[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut in_dual_tree = HashMap::new();
        while let Some(a) = queue.pop_front() {
            let (_, av) = self.triangles[a];
            for f in (0..4).filter(|&f| f != av) {
                if let Some((b, bf)) = self.neighbours[a][f] {
                    if depth[b] == usize::MAX {
                        depth[b] = depth[a] + 1;
                        parent[b] = Some(LinkCrossing { from: b, face: bf });
                        in_dual_tree.insert((a, f), ());
                        in_dual_tree.insert((b, bf), ());
                        queue.push_back(b);
                    }
                }
            }
        }

        // Link vertices: corners (triangle, tet-vertex) identified across sides.
        let mut corner_ds = DisjointSet::new(4 * nt);
        for a in 0..nt {
            let (_, av) = self.triangles[a];
            for f in (0..4).filter(|&f| f != av) {
                if let Some((b, bf)) = self.neighbours[a][f] {
                    let (_, bv) = self.triangles[b];
                    // Map the two corners of side f of a to those of side bf of b.
                    let perm = self.side_map(a, f);
                    for x in (0..4).filter(|&x| x != av && x != f) {
                        let y = perm[x];
                        debug_assert!(y != bv && y != bf);
                        corner_ds.union(4 * a + x, 4 * b + y);
                    }
                }
            }
        }

        // Primal spanning forest over link edges not dual to the tree.
        let mut primal = DisjointSet::new(4 * nt);
        let mut leftovers = Vec::new();
        let mut seen = HashMap::new();
        for a in 0..nt {
            let (_, av) = self.triangles[a];
            for f in (0..4).filter(|&f| f != av) {
                let Some((b, bf)) = self.neighbours[a][f] else { continue };
                if seen.contains_key(&(b, bf)) {
                    continue;
                }
                seen.insert((a, f), ());
                if in_dual_tree.contains_key(&(a, f)) {
                    continue;
                }
                let ends: Vec<usize> =
                    (0..4).filter(|&x| x != av && x != f).map(|x| corner_ds.find(4 * a + x)).collect();
                if primal.union(ends[0], ends[1]) {
                    continue;
                }
                leftovers.push(LinkCrossing { from: a, face: f });
            }
        }

        leftovers
            .into_iter()
            .map(|c| {
                let (b, _) = self.neighbours[c.from][c.face].unwrap();
                // Cycle: cross c into b, then follow tree paths b -> lca -> c.from.
                let mut up_b = Vec::new();
                let mut down_a = Vec::new();
                let (mut x, mut y) = (b, c.from);
                while depth[x] > depth[y] {
                    let p = parent[x].unwrap();
                    up_b.push(p);
                    x = self.neighbours[p.from][p.face].unwrap().0;
                }
                while depth[y] > depth[x] {
                    let p = parent[y].unwrap();
                    down_a.push(p);
                    y = self.neighbours[p.from][p.face].unwrap().0;
                }
                while x != y {
                    let px = parent[x].unwrap();
                    up_b.push(px);
                    x = self.neighbours[px.from][px.face].unwrap().0;
                    let py = parent[y].unwrap();
                    down_a.push(py);
                    y = self.neighbours[py.from][py.face].unwrap().0;
                }
                let mut cycle = vec![c];
                cycle.extend(up_b);
                for p in down_a.into_iter().rev() {
                    let (to, side) = self.neighbours[p.from][p.face].unwrap();
                    cycle.push(LinkCrossing { from: to, face: side });
                }
                cycle
            })
            .collect()
    }

    /// For side `f` of triangle `a`, the tetrahedron vertex map of the gluing.
    fn side_map(&self, a: usize, f: usize) -> [usize; 4] {
        let perm = self.gluing_perm[a][f].expect("side is glued");
        [perm.apply(0), perm.apply(1), perm.apply(2), perm.apply(3)]
    }
}

/// Assembles the link of vertex class `v` from its corners.
pub fn build_vertex_link(tri: &Triangulation, skel: &Skeleton, v: usize) -> LinkSurface {
    let triangles = skel.vertices[v].corners.clone();
    let index: HashMap<(usize, usize), usize> = triangles.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut neighbours = vec![[None; 4]; triangles.len()];
    let mut gluing_perm = vec![[None; 4]; triangles.len()];
    let mut closed = true;
    for (i, &(t, tv)) in triangles.iter().enumerate() {
        for f in (0..4).filter(|&f| f != tv) {
            match tri.gluing(t, f) {
                Some(g) => {
                    let j = index[&(g.tet, g.perm.apply(tv))];
                    neighbours[i][f] = Some((j, g.perm.apply(f)));
                    gluing_perm[i][f] = Some(g.perm);
                }
                None => closed = false,
            }
        }
    }
    // V - E + F from the link's own cell structure.
    let nt = triangles.len();
    let mut ds = DisjointSet::new(4 * nt);
    let mut sides = 0i64;
    let mut glued_sides = 0i64;
    for (i, &(_, tv)) in triangles.iter().enumerate() {
        for f in (0..4).filter(|&f| f != tv) {
            sides += 1;
            if let (Some((j, _)), Some(perm)) = (neighbours[i][f], gluing_perm[i][f]) {
                glued_sides += 1;
                for x in (0..4).filter(|&x| x != tv && x != f) {
                    ds.union(4 * i + x, 4 * j + perm.apply(x));
                }
            }
        }
    }
    let mut roots = std::collections::HashSet::new();
    for (i, &(_, tv)) in triangles.iter().enumerate() {
        for x in (0..4).filter(|&x| x != tv) {
            roots.insert(ds.find(4 * i + x));
        }
    }
    let edges = (sides - glued_sides) + glued_sides / 2;
    let euler = roots.len() as i64 - edges + nt as i64;
    let orientable = skel.vertices[v].link_orientable;
    let genus = if orientable { (2 - euler) / 2 } else { 2 - euler };
    LinkSurface { vertex: v, triangles, neighbours, euler, genus, closed, orientable, index, gluing_perm }
}

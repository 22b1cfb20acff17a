#![allow(dead_code, clippy::needless_range_loop)]

use essurf_core::crush::CrushOutcome;
use essurf_core::perm::quad_separating;
use essurf_core::qtheory::build_matching_system_with;
use essurf_core::surface::NormalSurface;
use essurf_core::tri_core::{build_vertex_link, compute_skeleton, LinkCrossing};
use essurf_core::{fixtures, Triangulation};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

pub fn oriented(name: &str) -> Triangulation {
    fixtures::load(name).orient().expect("fixture is orientable")
}

/// Fixtures used for sweeps over "every fixture".
pub const ORIENTABLE: &[&str] = &["s3", "t3", "fig8", "m003", "circle_bundle18", "lens3", "lens4", "lens5", "lens7", "lens8"];

// ---------------------------------------------------------------------------
// Brute-force cone enumeration

/// Admissible extremal rays of `{x >= 0, eqs x = 0}` found by checking every
/// admissible support: a support carries an extremal ray exactly when the
/// restricted kernel is one-dimensional and spanned by a strictly positive
/// vector. Rays come back primitive and sorted.
pub fn brute_force_rays(d: usize, eqs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    assert!(d <= 16 && d.is_multiple_of(3));
    let mut out = Vec::new();
    for mask in 1u32..(1 << d) {
        let admissible = (0..d / 3).all(|t| ((mask >> (3 * t)) & 7).count_ones() <= 1);
        if !admissible {
            continue;
        }
        let support: Vec<usize> = (0..d).filter(|&i| mask >> i & 1 == 1).collect();
        if let Some(v) = kernel_ray(eqs, &support) {
            let mut full = vec![0i64; d];
            for (k, &i) in support.iter().enumerate() {
                full[i] = v[k];
            }
            out.push(full);
        }
    }
    out.sort();
    out
}

fn kernel_ray(eqs: &[Vec<i64>], support: &[usize]) -> Option<Vec<i64>> {
    let cols = support.len();
    let mut m: Vec<Vec<BigRational>> = eqs
        .iter()
        .map(|r| support.iter().map(|&i| BigRational::from_integer(BigInt::from(r[i]))).collect())
        .collect();
    // Reduced row echelon form.
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][c].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..cols {
                    let delta = &f * &m[row][k];
                    m[r][k] = &m[r][k] - delta;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    if cols - pivots.len() != 1 {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![BigRational::zero(); cols];
    v[free] = BigRational::one();
    for (r, &c) in pivots.iter().enumerate() {
        v[c] = -m[r][free].clone();
    }
    let positive = v.iter().all(|x| x.is_positive());
    let negative = v.iter().all(|x| x.is_negative());
    if !positive && !negative {
        return None;
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer().abs()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.iter().map(|x| (x / &g).to_i64().unwrap()).collect())
}

// ---------------------------------------------------------------------------
// Euler characteristic of the explicit cell complex

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }

    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

#[derive(Default)]
struct Interner(HashMap<(usize, usize, i64, usize, usize), usize>);

impl Interner {
    fn id(&mut self, key: (usize, usize, i64, usize, usize)) -> usize {
        let n = self.0.len();
        *self.0.entry(key).or_insert(n)
    }
}

/// Disc owning arc `j` (counted outward from corner `v`) in face `f` of a
/// tetrahedron: `(kind, copy)` with kinds 0..4 for triangles and 4..7 for quads.
fn arc_owner(tri: [i64; 4], quad: [i64; 3], f: usize, v: usize, j: i64) -> (usize, i64) {
    if j < tri[v] {
        return (v, j);
    }
    let q = quad_separating(v, f);
    let k = j - tri[v];
    // Quad copies are numbered from the side holding vertex 0.
    let copy = if v == 0 || f == 0 { k } else { quad[q] - 1 - k };
    (4 + q, copy)
}

/// Builds every polygon of the surface, glues polygon sides across faces and
/// counts vertices, edges and polygons of the quotient.
pub fn cell_complex_euler(s: &NormalSurface) -> i64 {
    let tri = s.triangulation();
    let coords = s.coords();
    let mut corners = Interner::default();
    let mut arcs = Interner::default();
    let mut polygons = 0i64;

    for (t, c) in coords.iter().enumerate() {
        assert!(c.quad.iter().filter(|&&x| x != 0).count() <= 1, "non-admissible surface");
        for v in 0..4 {
            for j in 0..c.tri[v] {
                polygons += 1;
                for w in (0..4).filter(|&w| w != v) {
                    corners.id((t, v, j, v.min(w), v.max(w)));
                }
            }
        }
        for q in 0..3 {
            for j in 0..c.quad[q] {
                polygons += 1;
                for a in 0..4 {
                    for b in a + 1..4 {
                        if quad_separating(a, b) != q {
                            corners.id((t, 4 + q, j, a, b));
                        }
                    }
                }
            }
        }
        for f in 0..4 {
            for v in (0..4).filter(|&v| v != f) {
                for j in 0..c.arcs_at(f, v) {
                    arcs.id((t, f, j, v, 0));
                }
            }
        }
    }
    // Sanity: a triangle has three corners, a quad four.
    let expected_corners: i64 = coords.iter().map(|c| 3 * c.tri.iter().sum::<i64>() + 4 * c.quad_count()).sum();
    assert_eq!(corners.0.len() as i64, expected_corners);

    let mut corner_dsu = Dsu((0..corners.0.len()).collect());
    let mut arc_dsu = Dsu((0..arcs.0.len()).collect());
    for (t, c) in coords.iter().enumerate() {
        for f in 0..4 {
            let Some(g) = tri.gluing(t, f) else { continue };
            let c2 = coords[g.tet];
            let f2 = g.perm.apply(f);
            for v in (0..4).filter(|&v| v != f) {
                let v2 = g.perm.apply(v);
                assert_eq!(c.arcs_at(f, v), c2.arcs_at(f2, v2), "arcs disagree across a face");
                for j in 0..c.arcs_at(f, v) {
                    arc_dsu.union(arcs.id((t, f, j, v, 0)), arcs.id((g.tet, f2, j, v2, 0)));
                    let (k1, n1) = arc_owner(c.tri, c.quad, f, v, j);
                    let (k2, n2) = arc_owner(c2.tri, c2.quad, f2, v2, j);
                    for w in (0..4).filter(|&w| w != v && w != f) {
                        let w2 = g.perm.apply(w);
                        let a = corners.id((t, k1, n1, v.min(w), v.max(w)));
                        let b = corners.id((g.tet, k2, n2, v2.min(w2), v2.max(w2)));
                        corner_dsu.union(a, b);
                    }
                }
            }
        }
    }
    assert_eq!(corners.0.len() as i64, expected_corners, "arc endpoint missed a polygon corner");
    corner_dsu.classes() as i64 - arc_dsu.classes() as i64 + polygons
}

// ---------------------------------------------------------------------------
// Crushing

/// Tetrahedra that survive crushing are exactly those without quads.
pub fn assert_crush_law(input: &Triangulation, s: &NormalSurface, out: &CrushOutcome) {
    let quad_tets = s.coords().iter().filter(|c| c.quad_count() > 0).count();
    assert_eq!(out.removed_tets, quad_tets);
    assert_eq!(out.result.tet_count(), input.tet_count() - quad_tets);
}

// ---------------------------------------------------------------------------
// Small loops around edges

/// For every interior edge of an oriented triangulation: the functional of
/// the loop around the edge in the link of its first endpoint, paired with
/// the matching row of that edge.
pub fn small_loop_pairs(tri: &Triangulation) -> Vec<(Vec<i64>, Vec<i64>)> {
    let skel = compute_skeleton(tri);
    let matching = build_matching_system_with(tri, &skel);
    let mut out = Vec::new();
    for (row_index, &e) in matching.edges.iter().enumerate() {
        let embs = &skel.edges[e].embeddings;
        let first = embs[0];
        let v = skel.vertex_of[first.tet][first.perm.apply(0)];
        let link = build_vertex_link(tri, &skel, v);
        // Walk the loop positively with respect to the orientation the link
        // inherits from the oriented triangulation.
        let forward = first.perm.sign() > 0;
        let steps: Vec<_> = if forward { embs.iter().collect() } else { embs.iter().rev().collect() };
        let path: Vec<LinkCrossing> = steps
            .iter()
            .map(|m| LinkCrossing {
                from: link.triangle_index(m.tet, m.perm.apply(0)).expect("corner lies in the link"),
                face: m.perm.apply(if forward { 3 } else { 2 }),
            })
            .collect();
        let loop_row = essurf_core::qtheory::path_functional(tri, &link.triangles, &path);
        out.push((loop_row, matching.rows[row_index].clone()));
    }
    out
}

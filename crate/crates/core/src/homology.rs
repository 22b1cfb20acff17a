//! Integer homology of triangulations through the Smith normal form.

use crate::tri_core::{compute_skeleton, Skeleton, Triangulation};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Sparse integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn from_dense<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = IntegerMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v.into());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for (&(_, j), b) in other.entries.range((k, 0)..(k + 1, 0)) {
                let cur = out.get(i, j);
                out.set(i, j, cur + a * b);
            }
        }
        out
    }
}

/// Result of [`smith_normal_form`]: the positive invariant factors in
/// divisibility order; `rank` is their count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

struct Work {
    rows: Vec<BTreeMap<usize, BigInt>>,
    col_rows: Vec<BTreeSet<usize>>,
}

impl Work {
    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.col_rows[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.col_rows[c].insert(r);
        }
    }

    /// row[target] -= q * row[src]
    fn row_sub(&mut self, target: usize, src: usize, q: &BigInt) {
        let src_row: Vec<(usize, BigInt)> = self.rows[src].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src_row {
            let cur = self.rows[target].get(&c).cloned().unwrap_or_default();
            self.set(target, c, cur - q * v);
        }
    }
}

/// Invariant factors of an integer matrix, using the smallest-magnitude
/// pivot at each step.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithForm {
    let mut w = Work { rows: vec![BTreeMap::new(); a.rows], col_rows: vec![BTreeSet::new(); a.cols] };
    for (&(r, c), v) in &a.entries {
        w.set(r, c, v.clone());
    }
    let mut diag = Vec::new();
    loop {
        let mut pivot: Option<(usize, usize)> = None;
        let mut best: Option<BigInt> = None;
        for (r, row) in w.rows.iter().enumerate() {
            for (&c, v) in row {
                let m = v.abs();
                if best.as_ref().is_none_or(|b| m < *b) {
                    best = Some(m);
                    pivot = Some((r, c));
                    if best.as_ref().is_some_and(|b| b.is_one()) {
                        break;
                    }
                }
            }
            if best.as_ref().is_some_and(|b| b.is_one()) {
                break;
            }
        }
        let Some((r, c)) = pivot else { break };
        let p = w.rows[r][&c].clone();

        let mut leftover = false;
        let others: Vec<usize> = w.col_rows[c].iter().copied().filter(|&i| i != r).collect();
        for i in others {
            let q = w.rows[i][&c].div_floor(&p);
            w.row_sub(i, r, &q);
            if w.rows[i].contains_key(&c) {
                leftover = true;
            }
        }
        if leftover {
            continue;
        }
        // Column c now meets only row r, so column operations touch row r alone.
        let row_cols: Vec<usize> = w.rows[r].keys().copied().filter(|&j| j != c).collect();
        for j in row_cols {
            let v = w.rows[r][&j].mod_floor(&p);
            if !v.is_zero() {
                leftover = true;
            }
            w.set(r, j, v);
        }
        if leftover {
            continue;
        }
        diag.push(p.abs());
        w.set(r, c, BigInt::zero());
    }

    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = &diag[i] / &g * &diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag.sort();
    SmithForm { rank: diag.len(), factors: diag }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub b1_manifold: usize,
    pub b1_boundary: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match i64::try_from(x) {
            Ok(n) => seq.serialize_element(&n)?,
            Err(_) => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    ClosedPositiveB1,
    HalfLivesHalfDies,
    None,
}

/// Boundary matrices of the dual cell complex: 2-cells are interior edges,
/// 1-cells interior faces, 0-cells tetrahedra. Truncated ideal vertices and
/// real boundary faces are absent from this complex, which is a spine of the
/// compact manifold.
pub fn dual_boundary_matrices(tri: &Triangulation, skel: &Skeleton) -> (IntegerMatrix, IntegerMatrix) {
    let interior_faces: Vec<usize> = (0..skel.faces.len()).filter(|&f| skel.faces[f].back.is_some()).collect();
    let mut face_col = vec![usize::MAX; skel.faces.len()];
    for (i, &f) in interior_faces.iter().enumerate() {
        face_col[f] = i;
    }
    let interior_edges: Vec<usize> = skel.interior_edges().map(|(i, _)| i).collect();

    let mut d1 = IntegerMatrix::zeros(tri.tet_count(), interior_faces.len());
    for (i, &f) in interior_faces.iter().enumerate() {
        let fc = skel.faces[f];
        let back = fc.back.expect("interior face");
        d1.add(back.0, i, 1);
        d1.add(fc.front.0, i, -1);
    }

    let mut d2 = IntegerMatrix::zeros(interior_faces.len(), interior_edges.len());
    for (j, &e) in interior_edges.iter().enumerate() {
        for emb in &skel.edges[e].embeddings {
            let exit = emb.perm.apply(3);
            let f = skel.face_of[emb.tet][exit];
            let sign = if skel.faces[f].front == (emb.tet, exit) { 1 } else { -1 };
            d2.add(face_col[f], j, sign);
        }
    }
    (d1, d2)
}

/// First homology of the compact manifold (ideal vertices truncated) and the
/// first Betti number of its boundary.
pub fn homology_profile(tri: &Triangulation) -> HomologyProfile {
    let skel = compute_skeleton(tri);
    homology_profile_with(tri, &skel)
}

pub fn homology_profile_with(tri: &Triangulation, skel: &Skeleton) -> HomologyProfile {
    let (d1, d2) = dual_boundary_matrices(tri, skel);
    let r1 = smith_normal_form(&d1).rank;
    let s2 = smith_normal_form(&d2);
    let b1_manifold = d1.cols() - r1 - s2.rank;
    let torsion = s2.factors.into_iter().filter(|d| !d.is_one()).collect();
    let b1_boundary = skel
        .boundary_components
        .iter()
        .map(|b| if b.orientable { (2 - b.euler) as usize } else { (1 - b.euler) as usize })
        .sum();
    HomologyProfile { b1_manifold, b1_boundary, torsion }
}

/// The two homological sufficient conditions for a closed essential surface.
pub fn certificate_for(profile: &HomologyProfile, closed: bool) -> Certificate {
    if closed {
        if profile.b1_manifold > 0 {
            Certificate::ClosedPositiveB1
        } else {
            Certificate::None
        }
    } else if 2 * profile.b1_manifold > profile.b1_boundary {
        Certificate::HalfLivesHalfDies
    } else {
        Certificate::None
    }
}

pub fn homology_certificate(tri: &Triangulation) -> Certificate {
    let skel = compute_skeleton(tri);
    let profile = homology_profile_with(tri, &skel);
    let closed = skel.is_closed() && !tri.has_boundary_faces();
    certificate_for(&profile, closed)
}

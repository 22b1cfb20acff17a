//! Decision procedures for closed essential surfaces.

use crate::crush::{crush, CrushError};
use crate::cutter::{
    boundary_signature, boundary_tags, cut_along, normalize_vertices_with, retriangulation_variants, BoundaryTag,
    CompressibilityEvidence,
};
use crate::enumerate::{canonical_surface_vector, extremal_rays_bounded, try_enumerate_admissible_rays, EnumError, Exclusions};
use crate::homology::{certificate_for, homology_profile_with, Certificate};
use crate::perm::{edge_number, quad_separating, EDGE_VERTICES};
use crate::qtheory::{assemble_with, build_matching_system_with, ConeMode, QuadVector};
use crate::surface::{reconstruct_with, DiscCounts, NormalSurface};
use crate::tri_core::{compute_skeleton, Skeleton, Triangulation};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("computation cancelled")]
    Cancelled,
    #[error("coordinate overflow during enumeration")]
    Overflow,
    #[error("surface search exceeded {0} intermediate rays")]
    SearchLimit(usize),
    #[error(transparent)]
    Crush(#[from] CrushError),
}

impl From<EnumError> for PipelineError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::Cancelled => PipelineError::Cancelled,
            EnumError::Overflow => PipelineError::Overflow,
            EnumError::TooManyRays(m) => PipelineError::SearchLimit(m),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub seed: u64,
    /// Skip the homology short-circuit and always search surfaces.
    pub skip_homology: bool,
    /// Numbers of random 2-3 moves used to build retriangulation variants.
    pub variant_rounds: Vec<usize>,
    /// Cooperative stop flag, e.g. for a wall-clock timeout.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { seed: 0, skip_homology: false, variant_rounds: vec![0, 2, 4], cancel: None }
    }
}

impl PipelineConfig {
    fn cancelled(&self) -> bool {
        self.cancel.as_ref().is_some_and(|c| c.load(Ordering::Relaxed))
    }
}

/// One of the two simple disc patterns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DiscPattern {
    /// An interior face with all three edges on the boundary.
    Face { tet: usize, face: usize },
    /// The disc cutting through a tetrahedron folded around the degree-one
    /// edge `folded`, bounded by the opposite edge.
    FoldedEdge { tet: usize, folded: [usize; 2] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressingDiscEvidence {
    pub pattern: DiscPattern,
    /// Boundary component holding the disc's boundary curve, which is
    /// nonzero in its mod 2 homology.
    pub boundary_component: usize,
}

/// Boundary edge chains and their mod 2 homology classes on one boundary
/// surface.
struct BoundarySurface {
    edges: Vec<usize>,
    rows: Vec<Vec<u64>>,
    rank: usize,
}

impl BoundarySurface {
    fn new(skel: &Skeleton, k: usize) -> Self {
        let crate::tri_core::BoundarySource::Real { faces } = &skel.boundary_components[k].source else {
            return BoundarySurface { edges: Vec::new(), rows: Vec::new(), rank: 0 };
        };
        let mut edges: BTreeSet<usize> = BTreeSet::new();
        for &(t, f) in faces {
            for [a, b] in EDGE_VERTICES {
                if a != f && b != f {
                    edges.insert(skel.edge_of[t][edge_number(a, b)]);
                }
            }
        }
        let edges: Vec<usize> = edges.into_iter().collect();
        let words = edges.len().div_ceil(64).max(1);
        let mut rows = Vec::new();
        for &(t, f) in faces {
            let mut row = vec![0u64; words];
            for [a, b] in EDGE_VERTICES {
                if a != f && b != f {
                    let i = edges.binary_search(&skel.edge_of[t][edge_number(a, b)]).unwrap();
                    row[i / 64] ^= 1 << (i % 64);
                }
            }
            rows.push(row);
        }
        let rank = gf2_rank(rows.clone());
        BoundarySurface { edges, rows, rank }
    }

    /// Whether the chain with these edge classes (mod 2) is not a boundary.
    fn nontrivial(&self, chain: &[usize]) -> bool {
        let mut row = vec![0u64; self.edges.len().div_ceil(64).max(1)];
        for e in chain {
            let Ok(i) = self.edges.binary_search(e) else { return false };
            row[i / 64] ^= 1 << (i % 64);
        }
        if row.iter().all(|&w| w == 0) {
            return false;
        }
        let mut m = self.rows.clone();
        m.push(row);
        gf2_rank(m) > self.rank
    }
}

fn gf2_rank(mut m: Vec<Vec<u64>>) -> usize {
    let bits = m.first().map_or(0, |r| r.len() * 64);
    let mut rank = 0;
    for c in 0..bits {
        let (w, b) = (c / 64, c % 64);
        let Some(p) = (rank..m.len()).find(|&r| m[r][w] >> b & 1 == 1) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][w] >> b & 1 == 1 {
                let src = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Looks for a singular disc bounded by a short loop of boundary edges
/// that is homologically nontrivial on a boundary surface tagged as a copy
/// of the cut surface. By the loop theorem such a disc certifies that the
/// surface compresses.
pub fn simple_disc_scan(tri: &Triangulation) -> Option<CompressingDiscEvidence> {
    let skel = compute_skeleton(tri);
    let surfaces: Vec<Option<BoundarySurface>> = skel
        .boundary_components
        .iter()
        .enumerate()
        .map(|(k, b)| (BoundaryTag::from_mark(b.mark) == BoundaryTag::CopyOfS).then(|| BoundarySurface::new(&skel, k)))
        .collect();
    let component_of_edge = |e: usize| -> Option<usize> {
        surfaces.iter().position(|s| s.as_ref().is_some_and(|s| s.edges.binary_search(&e).is_ok()))
    };

    for t in 0..tri.tet_count() {
        for f in 0..4 {
            if tri.gluing(t, f).is_none() {
                continue;
            }
            let chain: Vec<usize> = EDGE_VERTICES
                .iter()
                .filter(|[a, b]| *a != f && *b != f)
                .map(|&[a, b]| skel.edge_of[t][edge_number(a, b)])
                .collect();
            if !chain.iter().all(|&e| skel.edges[e].boundary) {
                continue;
            }
            if let Some(k) = component_of_edge(chain[0]) {
                if surfaces[k].as_ref().unwrap().nontrivial(&chain) {
                    return Some(CompressingDiscEvidence { pattern: DiscPattern::Face { tet: t, face: f }, boundary_component: k });
                }
            }
        }
    }
    for (e, class) in skel.interior_edges() {
        if class.embeddings.len() != 1 {
            continue;
        }
        let emb = class.embeddings[0];
        let (a, b, c, d) = (emb.perm.apply(0), emb.perm.apply(1), emb.perm.apply(2), emb.perm.apply(3));
        let opposite = skel.edge_of[emb.tet][edge_number(c, d)];
        if opposite == e || !skel.edges[opposite].boundary {
            continue;
        }
        if let Some(k) = component_of_edge(opposite) {
            if surfaces[k].as_ref().unwrap().nontrivial(&[opposite]) {
                let folded = [a.min(b), a.max(b)];
                return Some(CompressingDiscEvidence {
                    pattern: DiscPattern::FoldedEdge { tet: emb.tet, folded },
                    boundary_component: k,
                });
            }
        }
    }
    None
}

/// Standard-coordinate matching equations (seven coordinates per
/// tetrahedron, triangles then quads), one per arc type of each interior face.
pub fn standard_matching_rows(tri: &Triangulation, skel: &Skeleton) -> Vec<Vec<i64>> {
    let d = 7 * tri.tet_count();
    let mut rows = Vec::new();
    for face in &skel.faces {
        let Some((u, uf)) = face.back else { continue };
        let (t, f) = face.front;
        let g = tri.gluing(t, f).expect("interior face");
        debug_assert_eq!((g.tet, g.perm.apply(f)), (u, uf));
        for v in (0..4).filter(|&v| v != f) {
            let gv = g.perm.apply(v);
            let mut row = vec![0i64; d];
            row[7 * t + v] += 1;
            row[7 * t + 4 + quad_separating(v, f)] += 1;
            row[7 * u + gv] -= 1;
            row[7 * u + 4 + quad_separating(gv, uf)] -= 1;
            rows.push(row);
        }
    }
    rows
}

/// Largest piece searched in standard coordinates after the quadrilateral
/// search comes up empty.
pub const STANDARD_FALLBACK_TETS: usize = 12;

/// Cap on intermediate cone size in the surface search.
pub const MAX_SEARCH_RAYS: usize = 100_000;

/// A connected normal surface with positive Euler characteristic that is
/// not a vertex link and avoids the boundary components whose tags are in
/// `excluded`. Admissible rays of the quadrilateral cone (matching at
/// interior edges) are tried first, each rebuilt with the fewest triangles;
/// small triangulations then fall back to the standard cone.
pub fn find_positive_chi_surface(
    tri: &Triangulation,
    excluded: &[BoundaryTag],
    cancel: Option<&AtomicBool>,
) -> Result<Option<NormalSurface>, PipelineError> {
    let n = tri.tet_count();
    if n == 0 {
        return Ok(None);
    }
    let skel = compute_skeleton(tri);
    let allowed = allowed_discs(&skel, n, excluded);
    let arc_tri = Arc::new(tri.clone());
    let usable = |s: &NormalSurface| -> Option<NormalSurface> {
        for part in s.components() {
            if part.is_vertex_linking() {
                continue;
            }
            let avoids = part.coords().iter().enumerate().all(|(t, c)| {
                (0..4).all(|v| c.tri[v] == 0 || allowed[7 * t + v])
                    && (0..3).all(|q| c.quad[q] == 0 || allowed[7 * t + 4 + q])
            });
            if !avoids {
                continue;
            }
            let part = if part.is_two_sided() { part } else { part.scaled(2) };
            if part.euler_with(&skel) > 0 {
                return Some(part);
            }
        }
        None
    };

    let matching = build_matching_system_with(tri, &skel);
    let quad_allowed: Vec<bool> = (0..n).flat_map(|t| (0..3).map(move |q| (t, q))).map(|(t, q)| allowed[7 * t + 4 + q]).collect();
    let rays = extremal_rays_bounded(
        3 * n,
        &matching.rows,
        &Exclusions::quad_triples(3 * n),
        Some(&quad_allowed),
        cancel,
        MAX_SEARCH_RAYS,
    )?;
    for ray in rays {
        let Ok(s) = reconstruct_with(&arc_tri, &skel, &QuadVector::new(ray)) else { continue };
        if let Some(found) = usable(&s) {
            return Ok(Some(found));
        }
    }
    if n > STANDARD_FALLBACK_TETS {
        return Ok(None);
    }

    let rows = standard_matching_rows(tri, &skel);
    let groups: Vec<Vec<usize>> = (0..n).map(|t| vec![7 * t + 4, 7 * t + 5, 7 * t + 6]).collect();
    let excl = Exclusions::from_groups(7 * n, &groups);
    let rays = extremal_rays_bounded(7 * n, &rows, &excl, Some(&allowed), cancel, MAX_SEARCH_RAYS)?;
    for ray in rays {
        let coords: Vec<DiscCounts> = ray
            .chunks(7)
            .map(|c| DiscCounts { tri: [c[0], c[1], c[2], c[3]], quad: [c[4], c[5], c[6]] })
            .collect();
        if coords.iter().all(|c| c.quad_count() == 0) {
            continue;
        }
        let Ok(s) = NormalSurface::from_standard(arc_tri.clone(), coords) else { continue };
        if let Some(found) = usable(&s) {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Standard coordinates whose discs stay clear of every edge lying on an
/// excluded boundary component.
fn allowed_discs(skel: &Skeleton, n: usize, excluded: &[BoundaryTag]) -> Vec<bool> {
    let mut bad_edge = vec![false; skel.edges.len()];
    for b in &skel.boundary_components {
        if !excluded.contains(&BoundaryTag::from_mark(b.mark)) {
            continue;
        }
        if let crate::tri_core::BoundarySource::Real { faces } = &b.source {
            for &(t, f) in faces {
                for [x, y] in EDGE_VERTICES {
                    if x != f && y != f {
                        bad_edge[skel.edge_of[t][edge_number(x, y)]] = true;
                    }
                }
            }
        }
    }
    let mut allowed = vec![true; 7 * n];
    for t in 0..n {
        let touches = |a: usize, b: usize| bad_edge[skel.edge_of[t][edge_number(a, b)]];
        for v in 0..4 {
            if (0..4).any(|x| x != v && touches(v, x)) {
                allowed[7 * t + v] = false;
            }
        }
        for q in 0..3 {
            if EDGE_VERTICES.iter().any(|&[a, b]| quad_separating(a, b) != q && touches(a, b)) {
                allowed[7 * t + 4 + q] = false;
            }
        }
    }
    allowed
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Compressibility {
    Incompressible,
    Compressible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CompressionWitness {
    SimpleDisc(CompressingDiscEvidence),
    VertexRemoval(CompressibilityEvidence),
    /// Crushing a positive Euler characteristic surface left no component
    /// with the boundary of the piece.
    BoundaryChanged { before: Vec<(BoundaryTag, i64)>, after: Vec<Vec<(BoundaryTag, i64)>> },
}

#[derive(Clone, Debug, Serialize)]
pub struct IncompressibilityVerdict {
    pub verdict: Compressibility,
    /// Side index and evidence for compressible verdicts.
    pub witness: Option<(usize, CompressionWitness)>,
    /// Crush iterations per side, from the variant that settled the side.
    pub iterations: Vec<usize>,
    /// Tetrahedron counts of the cut pieces.
    pub piece_sizes: Vec<usize>,
    /// Tetrahedron counts per side at the start of each crush iteration.
    pub side_sizes: Vec<Vec<usize>>,
}

enum SideResult {
    Exhausted { iterations: usize, sizes: Vec<usize> },
    Compressed { iterations: usize, sizes: Vec<usize>, witness: CompressionWitness },
}

fn run_side(
    piece: &Triangulation,
    seed: u64,
    stop: &AtomicBool,
    global: &PipelineConfig,
) -> Result<SideResult, PipelineError> {
    let mut cur = piece.clone();
    let mut iterations = 0;
    let mut sizes = Vec::new();
    loop {
        if stop.load(Ordering::Relaxed) || global.cancelled() {
            return Err(PipelineError::Cancelled);
        }
        let (t, cert) = normalize_vertices_with(&cur, seed.wrapping_add(iterations as u64), Some(stop));
        if let Some(ev) = cert {
            return Ok(SideResult::Compressed { iterations, sizes, witness: CompressionWitness::VertexRemoval(ev) });
        }
        if let Some(sizes_last) = sizes.last() {
            debug_assert!(t.tet_count() < *sizes_last || t.tet_count() == 0);
        }
        sizes.push(t.tet_count());
        if let Some(ev) = simple_disc_scan(&t) {
            return Ok(SideResult::Compressed { iterations, sizes, witness: CompressionWitness::SimpleDisc(ev) });
        }
        let tags = boundary_tags(&compute_skeleton(&t));
        let excluded: Vec<BoundaryTag> =
            tags.iter().map(|x| x.0).filter(|x| matches!(x, BoundaryTag::OriginalBoundary(_))).collect();
        let Some(e) = find_positive_chi_surface(&t, &excluded, Some(stop))? else {
            return Ok(SideResult::Exhausted { iterations, sizes });
        };
        iterations += 1;
        let out = crush(&t, &e)?;
        let before = boundary_signature(&tags);
        let parts = out.result.split_components();
        let sigs: Vec<Vec<(BoundaryTag, i64)>> =
            parts.iter().map(|p| boundary_signature(&boundary_tags(&compute_skeleton(p)))).collect();
        match parts.into_iter().zip(&sigs).find(|(_, s)| **s == before) {
            Some((p, _)) => {
                debug_assert!(p.tet_count() < t.tet_count());
                cur = p;
            }
            None => {
                return Ok(SideResult::Compressed {
                    iterations,
                    sizes,
                    witness: CompressionWitness::BoundaryChanged { before, after: sigs },
                })
            }
        }
    }
}

/// Runs the cut-and-crush test on both sides of `s`, each over several
/// retriangulations at once. A side is settled by whichever of its variants
/// finishes first; a compression anywhere settles the whole test.
pub fn test_incompressible(
    ambient: &Triangulation,
    s: &NormalSurface,
    config: &PipelineConfig,
) -> Result<IncompressibilityVerdict, PipelineError> {
    let pieces = cut_along(ambient, s);
    let piece_sizes: Vec<usize> = pieces.iter().map(|p| p.triangulation.tet_count()).collect();
    let variants: Vec<Vec<Triangulation>> = pieces
        .par_iter()
        .enumerate()
        .map(|(i, p)| retriangulation_variants(&p.triangulation, &config.variant_rounds, config.seed ^ (i as u64 * 0x9e37)))
        .collect();
    let stops: Vec<AtomicBool> = pieces.iter().map(|_| AtomicBool::new(false)).collect();
    let tasks: Vec<(usize, usize)> =
        variants.iter().enumerate().flat_map(|(i, vs)| (0..vs.len()).map(move |j| (i, j))).collect();

    let finished = AtomicBool::new(false);
    let results: Vec<(usize, Result<SideResult, PipelineError>)> = std::thread::scope(|scope| {
        // Forwards an external cancellation to every side.
        if let Some(global) = &config.cancel {
            let (stops, finished) = (&stops, &finished);
            scope.spawn(move || {
                while !finished.load(Ordering::Relaxed) {
                    if global.load(Ordering::Relaxed) {
                        stops.iter().for_each(|s| s.store(true, Ordering::Relaxed));
                        break;
                    }
                    std::thread::sleep(std::time::Duration::from_millis(20));
                }
            });
        }
        let out = tasks
            .par_iter()
            .map(|&(i, j)| {
                let r = run_side(&variants[i][j], config.seed.wrapping_add(j as u64), &stops[i], config);
                match &r {
                    Ok(SideResult::Compressed { .. }) => stops.iter().for_each(|s| s.store(true, Ordering::Relaxed)),
                    Ok(SideResult::Exhausted { .. }) => stops[i].store(true, Ordering::Relaxed),
                    Err(_) => {}
                }
                (i, r)
            })
            .collect();
        finished.store(true, Ordering::Relaxed);
        out
    });

    let mut iterations = vec![0; pieces.len()];
    let mut side_sizes = vec![Vec::new(); pieces.len()];
    let mut settled = vec![false; pieces.len()];
    let mut witness = None;
    let mut failure = None;
    for (i, r) in results {
        match r {
            Ok(SideResult::Compressed { iterations: it, sizes, witness: w }) => {
                if witness.is_none() {
                    witness = Some((i, w));
                    iterations[i] = it;
                    side_sizes[i] = sizes;
                }
                settled[i] = true;
            }
            Ok(SideResult::Exhausted { iterations: it, sizes }) => {
                if !settled[i] {
                    iterations[i] = it;
                    side_sizes[i] = sizes;
                }
                settled[i] = true;
            }
            Err(PipelineError::Cancelled) => {}
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    if witness.is_some() {
        return Ok(IncompressibilityVerdict { verdict: Compressibility::Compressible, witness, iterations, piece_sizes, side_sizes });
    }
    if settled.iter().all(|&s| s) {
        Ok(IncompressibilityVerdict { verdict: Compressibility::Incompressible, witness: None, iterations, piece_sizes, side_sizes })
    } else {
        Err(failure.unwrap_or(PipelineError::Cancelled))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    HakenByHomology,
    HasClosedEssentialSurface,
    NoClosedEssentialSurface,
    InconclusiveBoundaryParallel,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::HakenByHomology => "HakenByHomology",
            Verdict::HasClosedEssentialSurface => "HasClosedEssentialSurface",
            Verdict::NoClosedEssentialSurface => "NoClosedEssentialSurface",
            Verdict::InconclusiveBoundaryParallel => "InconclusiveBoundaryParallel",
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub homology: f64,
    pub enumeration: f64,
    pub testing: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateRecord {
    pub ray: usize,
    pub genus: i64,
    pub doubled: bool,
    pub separating: Option<bool>,
    pub verdict: Option<Compressibility>,
    pub piece_sizes: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub verdict: Verdict,
    pub witness_ray: Option<QuadVector>,
    pub candidates_total: usize,
    pub candidates_tested: usize,
    pub timings: Timings,
    pub sizes: Vec<Vec<usize>>,
    pub candidates: Vec<CandidateRecord>,
}

struct Candidate {
    ray: usize,
    vector: QuadVector,
    surface: NormalSurface,
    genus: i64,
    doubled: bool,
}

fn candidates(tri: &Triangulation, mode: ConeMode, config: &PipelineConfig) -> Result<(usize, Vec<Candidate>), PipelineError> {
    let skel = compute_skeleton(tri);
    let system = assemble_with(tri, &skel, mode);
    let rays = try_enumerate_admissible_rays(&system, config.cancel.as_deref())?;
    let arc = Arc::new(tri.clone());
    let mut out: Vec<Candidate> = Vec::new();
    for (i, ray) in rays.rays.iter().enumerate() {
        let Ok(c) = canonical_surface_vector(&arc, ray) else { continue };
        if !c.surface.is_connected() || c.surface.has_boundary() {
            continue;
        }
        let genus = c.surface.genus();
        if c.surface.euler_with(&skel) >= 2 {
            continue;
        }
        out.push(Candidate { ray: i, vector: c.vector, surface: c.surface, genus, doubled: c.doubled });
    }
    out.sort_by(|a, b| (a.genus, &a.vector).cmp(&(b.genus, &b.vector)));
    Ok((rays.len(), out))
}

/// Pure verdict rule for ideal inputs given the genera of incompressible
/// candidates (in test order) and the genera of the vertex links.
pub fn ideal_verdict(incompressible_genera: &[i64], link_genera: &[i64]) -> Verdict {
    if incompressible_genera.iter().any(|g| !link_genera.contains(g)) {
        Verdict::HasClosedEssentialSurface
    } else if incompressible_genera.is_empty() {
        Verdict::NoClosedEssentialSurface
    } else {
        Verdict::InconclusiveBoundaryParallel
    }
}

fn decide(tri: &Triangulation, ideal: bool, config: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    let skel = compute_skeleton(tri);
    let mut timings = Timings::default();
    let start = Instant::now();
    if !config.skip_homology {
        let profile = homology_profile_with(tri, &skel);
        let closed = !ideal;
        let cert = certificate_for(&profile, closed);
        timings.homology = start.elapsed().as_secs_f64();
        if cert != Certificate::None {
            return Ok(PipelineReport {
                verdict: Verdict::HakenByHomology,
                witness_ray: None,
                candidates_total: 0,
                candidates_tested: 0,
                timings,
                sizes: Vec::new(),
                candidates: Vec::new(),
            });
        }
    }
    let t0 = Instant::now();
    let mode = if ideal { ConeMode::ConeQ0 } else { ConeMode::ConeQ };
    let (total, cands) = candidates(tri, mode, config)?;
    timings.enumeration = t0.elapsed().as_secs_f64();
    let link_genera: Vec<i64> = skel.boundary_components.iter().filter(|b| b.is_ideal()).map(|b| b.genus()).collect();

    let t1 = Instant::now();
    let mut records = Vec::new();
    let mut sizes = Vec::new();
    let mut incompressible_genera = Vec::new();
    let mut witness_ray = None;
    let mut verdict = None;
    for c in &cands {
        if config.cancelled() {
            return Err(PipelineError::Cancelled);
        }
        let separating = c.surface.is_separating().ok();
        let v = test_incompressible(tri, &c.surface, config)?;
        sizes.push(v.piece_sizes.clone());
        records.push(CandidateRecord {
            ray: c.ray,
            genus: c.genus,
            doubled: c.doubled,
            separating,
            verdict: Some(v.verdict),
            piece_sizes: v.piece_sizes,
        });
        if v.verdict == Compressibility::Incompressible {
            incompressible_genera.push(c.genus);
            if !ideal || !link_genera.contains(&c.genus) {
                witness_ray = Some(c.vector.clone());
                verdict = Some(Verdict::HasClosedEssentialSurface);
                break;
            }
        }
    }
    timings.testing = t1.elapsed().as_secs_f64();
    let verdict = verdict.unwrap_or_else(|| {
        if ideal {
            ideal_verdict(&incompressible_genera, &link_genera)
        } else {
            Verdict::NoClosedEssentialSurface
        }
    });
    Ok(PipelineReport {
        verdict,
        witness_ray,
        candidates_total: total,
        candidates_tested: records.len(),
        timings,
        sizes,
        candidates: records,
    })
}

/// Closed, orientable, irreducible input.
pub fn decide_closed(tri: &Triangulation, config: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    decide(tri, false, config)
}

/// Ideal, orientable input whose compact core is irreducible and
/// boundary-irreducible.
pub fn decide_ideal(tri: &Triangulation, config: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    decide(tri, true, config)
}

/// Picks the procedure from the vertex types of `tri`.
pub fn decide_auto(tri: &Triangulation, config: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    if compute_skeleton(tri).has_ideal_vertices() {
        decide_ideal(tri, config)
    } else {
        decide_closed(tri, config)
    }
}

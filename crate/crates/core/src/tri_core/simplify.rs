use super::moves::{self, boundary_profile, checked, BoundaryProfile};
use super::{compute_skeleton, Skeleton, Triangulation, VertexKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplifyGoal {
    /// Only reduce the number of tetrahedra.
    FewestTets,
    /// Also remove internal vertices and leave one vertex per boundary component.
    MinimalVertices,
}

#[derive(Clone, Debug)]
pub struct SimplifyOutcome {
    pub triangulation: Triangulation,
    pub goal_met: bool,
}

/// Number of random restarts used by [`simplify`] when none is given.
pub const DEFAULT_RESTARTS: usize = 16;

fn vertex_goal_met(skel: &Skeleton) -> bool {
    let material = skel.vertex_count_of(VertexKind::Material);
    let boundary_vertices = skel.vertex_count_of(VertexKind::Boundary);
    let real_components = skel.boundary_components.iter().filter(|b| !b.is_ideal()).count();
    let closed_only = real_components == 0 && !skel.has_ideal_vertices();
    if closed_only {
        material <= 1
    } else {
        material == 0 && boundary_vertices == real_components
    }
}

/// Score used to compare candidate triangulations (smaller is better).
fn score(tri: &Triangulation, skel: &Skeleton) -> (usize, usize) {
    (tri.tet_count(), skel.vertices.len())
}

/// One pass of greedy descent; returns `None` when no reducing move applies.
fn reduce_once(tri: &Triangulation, skel: &Skeleton, profile: &BoundaryProfile) -> Option<(Triangulation, Skeleton)> {
    // Edge collapses remove tetrahedra and vertices together.
    for i in 0..skel.edges.len() {
        if let Some(r) = checked(profile, moves::collapse_edge(tri, skel, i)) {
            return Some(r);
        }
    }
    for (i, e) in skel.edges.iter().enumerate() {
        if !e.boundary && e.degree() == 3 {
            if let Some(r) = checked(profile, moves::three_two(tri, skel, i)) {
                return Some(r);
            }
        }
    }
    for (i, e) in skel.edges.iter().enumerate() {
        if !e.boundary && e.degree() == 2 {
            if let Some(r) = checked(profile, moves::two_zero_edge(tri, skel, i)) {
                return Some(r);
            }
        }
    }
    for t in 0..tri.tet_count() {
        if (0..4).any(|f| tri.gluing(t, f).is_none()) {
            if let Some(r) = checked(profile, moves::shell_boundary(tri, skel, t)) {
                return Some(r);
            }
        }
    }
    // Folding boundary faces together keeps the size but merges boundary
    // vertices, which often unlocks collapses and shelling.
    if boundary_surplus(skel) > 0 {
        for (i, e) in skel.edges.iter().enumerate() {
            if e.boundary {
                if let Some(r) = checked(profile, moves::close_book(tri, skel, i)) {
                    return Some(r);
                }
            }
        }
    }
    None
}

/// Boundary vertices beyond one per real boundary component.
fn boundary_surplus(skel: &Skeleton) -> usize {
    let real = skel.boundary_components.iter().filter(|b| !b.is_ideal()).count();
    skel.vertex_count_of(VertexKind::Boundary).saturating_sub(real)
}

fn descend(mut tri: Triangulation, mut skel: Skeleton, profile: &BoundaryProfile) -> (Triangulation, Skeleton) {
    while let Some((t, s)) = reduce_once(&tri, &skel, profile) {
        tri = t;
        skel = s;
    }
    (tri, skel)
}

/// Applies a few random 2-3 / 4-4 moves to escape a local minimum.
fn perturb(tri: &Triangulation, skel: &Skeleton, profile: &BoundaryProfile, rng: &mut ChaCha8Rng, steps: usize) -> Option<(Triangulation, Skeleton)> {
    let mut cur = (tri.clone(), skel.clone());
    for _ in 0..steps {
        let (t, s) = &cur;
        let mut candidates: Vec<(bool, usize, usize)> = Vec::new();
        for (i, e) in s.edges.iter().enumerate() {
            if !e.boundary && e.degree() == 4 {
                candidates.push((true, i, 0));
            }
        }
        for tet in 0..t.tet_count() {
            for f in 0..4 {
                if let Some(g) = t.gluing(tet, f) {
                    if g.tet != tet && (tet, f) < (g.tet, g.perm.apply(f)) {
                        candidates.push((false, tet, f));
                    }
                }
            }
        }
        candidates.shuffle(rng);
        let mut moved = None;
        for (four, a, b) in candidates.into_iter().take(32) {
            let r = if four && rng.gen_bool(0.5) { moves::four_four(t, s, a) } else if four { None } else { moves::two_three(t, a, b) };
            if let Some(r) = checked(profile, r) {
                moved = Some(r);
                break;
            }
        }
        cur = moved?;
    }
    Some(cur)
}

/// Greedy simplification with random restarts. Never increases the number of
/// tetrahedra; with [`SimplifyGoal::MinimalVertices`] the flag reports
/// whether internal vertices were removed and each boundary component left
/// with a single vertex.
pub fn simplify(tri: &Triangulation, goal: SimplifyGoal, seed: u64, restarts: usize) -> SimplifyOutcome {
    let oriented = tri.is_oriented();
    let skel = compute_skeleton(tri);
    if !skel.is_valid() {
        return SimplifyOutcome { triangulation: tri.clone(), goal_met: vertex_goal_met(&skel) };
    }
    let profile = boundary_profile(tri, &skel);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut best, mut best_skel) = descend(tri.clone(), skel, &profile);
    let target_met = |s: &Skeleton| goal == SimplifyGoal::FewestTets || vertex_goal_met(s);
    let mut stale = 0;
    for _ in 0..restarts {
        if best.tet_count() <= 1 {
            break;
        }
        let steps = rng.gen_range(1..=3);
        let Some((t, s)) = perturb(&best, &best_skel, &profile, &mut rng, steps) else { break };
        let (t, s) = descend(t, s, &profile);
        let better = score(&t, &s) < score(&best, &best_skel) || (!target_met(&best_skel) && target_met(&s) && t.tet_count() <= best.tet_count());
        if better {
            best = t;
            best_skel = s;
            stale = 0;
        } else {
            stale += 1;
            if stale >= restarts.min(8) && target_met(&best_skel) {
                break;
            }
        }
    }
    let goal_met = target_met(&best_skel);
    let triangulation = if oriented { best.reoriented() } else { best };
    SimplifyOutcome { triangulation, goal_met }
}

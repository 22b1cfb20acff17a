mod common;

use common::oriented;
use essurf_core::cutter::{cut_along, normalize_vertices, retriangulation_variants, truncate, BoundaryTag};
use essurf_core::enumerate::{canonical_surface_vector, enumerate_admissible_rays};
use essurf_core::homology::homology_profile;
use essurf_core::qtheory::{assemble, ConeMode};
use essurf_core::surface::NormalSurface;
use essurf_core::tri_core::{canonical_hash, compute_skeleton, moves, VertexKind};
use std::sync::Arc;

fn vertex_surfaces(name: &str, mode: ConeMode) -> (Arc<essurf_core::Triangulation>, Vec<NormalSurface>) {
    let tri = Arc::new(oriented(name));
    let rays = enumerate_admissible_rays(&assemble(&tri, mode));
    let s = rays.rays.iter().filter_map(|r| canonical_surface_vector(&tri, r).ok()).map(|c| c.surface).collect();
    (tri, s)
}

#[test]
fn truncating_closed_fixture_is_identity() {
    for name in ["s3", "t3"] {
        let tri = oriented(name);
        assert_eq!(truncate(&tri), tri);
    }
}

#[test]
fn truncated_ideal_fixtures() {
    for (name, genus) in [("fig8", 1), ("m003", 1), ("circle_bundle18", 1)] {
        let tri = oriented(name);
        let tr = truncate(&tri);
        let skel = compute_skeleton(&tr);
        assert!(skel.is_valid());
        assert!(!skel.has_ideal_vertices());
        assert_eq!(skel.boundary_components.len(), 1, "{name}");
        assert_eq!(skel.boundary_components[0].genus(), genus, "{name}");
        let p = homology_profile(&tr);
        let q = homology_profile(&tri);
        assert_eq!((p.b1_manifold, p.b1_boundary, &p.torsion), (q.b1_manifold, q.b1_boundary, &q.torsion), "{name}");
    }
}

#[test]
fn separating_torus_in_lens_space() {
    let (tri, surfaces) = vertex_surfaces("lens3", ConeMode::ConeQ);
    let s = &surfaces[0];
    assert_eq!(s.is_separating(), Ok(true));
    let pieces = cut_along(&tri, s);
    assert_eq!(pieces.len(), 2);
    let mut solid_torus_like = 0;
    for p in &pieces {
        assert_eq!(p.boundary_tags, vec![(BoundaryTag::CopyOfS, 1)]);
        let skel = compute_skeleton(&p.triangulation);
        assert!(skel.is_valid());
        let h = homology_profile(&p.triangulation);
        assert_eq!((h.b1_manifold, h.b1_boundary), (1, 2));
        if h.torsion.is_empty() {
            solid_torus_like += 1;
        }
    }
    // The torus bounds a solid torus on at least one side.
    assert!(solid_torus_like >= 1);
}

#[test]
fn nonseparating_torus_in_three_torus() {
    let (tri, surfaces) = vertex_surfaces("t3", ConeMode::ConeQ);
    assert!(!surfaces.is_empty());
    for s in &surfaces {
        assert_eq!(s.is_separating(), Ok(false));
        let pieces = cut_along(&tri, s);
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].boundary_tags, vec![(BoundaryTag::CopyOfS, 1), (BoundaryTag::CopyOfS, 1)]);
        // T^2 x I
        let h = homology_profile(&pieces[0].triangulation);
        assert_eq!((h.b1_manifold, h.b1_boundary), (2, 4));
    }
}

#[test]
fn circle_bundle_separating_tori() {
    let (tri, surfaces) = vertex_surfaces("circle_bundle18", ConeMode::ConeQ0);
    let tori: Vec<_> = surfaces.iter().filter(|s| s.euler_characteristic() == 0 && s.is_separating() == Ok(true)).collect();
    assert_eq!(tori.len(), 4);
    for s in tori {
        let pieces = cut_along(&tri, s);
        assert_eq!(pieces.len(), 2);
        let tags: Vec<_> = pieces.iter().flat_map(|p| p.boundary_tags.clone()).collect();
        assert_eq!(tags.iter().filter(|t| **t == (BoundaryTag::CopyOfS, 1)).count(), 2);
        assert_eq!(tags.iter().filter(|t| matches!(t.0, BoundaryTag::OriginalBoundary(_))).count(), 1);
        for p in &pieces {
            assert!(compute_skeleton(&p.triangulation).is_valid());
        }
    }
}

#[test]
fn normalize_leaves_minimal_fixture_alone() {
    let tri = oriented("fig8");
    let (out, cert) = normalize_vertices(&truncate(&tri), 0);
    assert!(cert.is_none());
    let skel = compute_skeleton(&out);
    assert_eq!(skel.vertex_count_of(VertexKind::Material), 0);
    assert_eq!(skel.vertex_count_of(VertexKind::Boundary), 1);

    let t3 = oriented("t3");
    let (same, cert) = normalize_vertices(&t3, 0);
    assert!(cert.is_none());
    assert_eq!(canonical_hash(&same), canonical_hash(&t3));
}

#[test]
fn normalize_removes_internal_vertex() {
    let (tri, surfaces) = vertex_surfaces("t3", ConeMode::ConeQ);
    let piece = cut_along(&tri, &surfaces[0]).remove(0).triangulation;
    let sub = moves::one_four(&piece, 0).unwrap().orient().unwrap();
    let internal = |t| compute_skeleton(t).vertex_count_of(VertexKind::Material);
    assert_eq!(internal(&sub), internal(&piece) + 1);
    let (out, cert) = normalize_vertices(&sub, 1);
    assert!(cert.is_none());
    let skel = compute_skeleton(&out);
    assert_eq!(skel.vertex_count_of(VertexKind::Material), 0);
    assert_eq!(skel.vertex_count_of(VertexKind::Boundary), 2);
    assert_eq!(homology_profile(&out), homology_profile(&piece));
}

#[test]
fn normalize_lens_pieces() {
    let (tri, surfaces) = vertex_surfaces("lens3", ConeMode::ConeQ);
    for piece in cut_along(&tri, &surfaces[0]) {
        let before = compute_skeleton(&piece.triangulation).vertex_count_of(VertexKind::Boundary);
        assert!(before > 1);
        let (out, cert) = normalize_vertices(&piece.triangulation, 0);
        let skel = compute_skeleton(&out);
        match cert {
            // Crushing a compressing disc changed the boundary.
            Some(ev) => assert_eq!(ev.boundary_before, vec![(BoundaryTag::CopyOfS, 1)]),
            None => {
                assert_eq!(skel.vertex_count_of(VertexKind::Boundary), 1);
                assert_eq!(skel.vertex_count_of(VertexKind::Material), 0);
            }
        }
    }
}

#[test]
fn variants_are_distinct_and_equivalent() {
    let (tri, surfaces) = vertex_surfaces("t3", ConeMode::ConeQ);
    let piece = cut_along(&tri, &surfaces[0]).remove(0).triangulation;
    let variants = retriangulation_variants(&piece, &[0, 2, 4, 8], 5);
    assert!(!variants.is_empty());
    let hashes: std::collections::HashSet<String> = variants.iter().map(canonical_hash).collect();
    assert_eq!(hashes.len(), variants.len());
    for v in &variants {
        assert_eq!(homology_profile(v), homology_profile(&piece));
    }
    let again = retriangulation_variants(&piece, &[0, 2, 4, 8], 5);
    assert_eq!(variants, again);
}

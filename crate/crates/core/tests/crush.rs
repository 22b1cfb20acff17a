mod common;

use common::{assert_crush_law, oriented, ORIENTABLE};
use essurf_core::crush::{crush, CrushError};
use essurf_core::enumerate::{canonical_surface_vector, enumerate_admissible_rays};
use essurf_core::homology::homology_profile;
use essurf_core::pipeline::find_positive_chi_surface;
use essurf_core::qtheory::{assemble, ConeMode};
use essurf_core::surface::{vertex_link_surface, NormalSurface};
use essurf_core::tri_core::{compute_skeleton, moves};
use std::sync::Arc;

#[test]
fn empty_surface_changes_nothing() {
    let tri = Arc::new(oriented("t3"));
    let s = NormalSurface::empty(tri.clone());
    let out = crush(&tri, &s).unwrap();
    assert_crush_law(&tri, &s, &out);
    assert_eq!(out.removed_tets, 0);
    assert_eq!(out.result, *tri);
}

#[test]
fn vertex_link_removes_nothing() {
    for name in ["s3", "lens5", "t3"] {
        let tri = Arc::new(oriented(name));
        let skel = compute_skeleton(&tri);
        let s = vertex_link_surface(&tri, &skel, 0);
        let out = crush(&tri, &s).unwrap();
        assert_crush_law(&tri, &s, &out);
        assert_eq!(out.result.tet_count(), tri.tet_count());
    }
}

#[test]
fn foreign_surface_is_rejected() {
    let a = Arc::new(oriented("t3"));
    let b = Arc::new(oriented("fig8"));
    let s = NormalSurface::empty(b);
    assert_eq!(crush(&a, &s).unwrap_err(), CrushError::InvalidSurface);
}

/// Subdividing a tetrahedron creates a normal sphere around the new vertex's
/// neighbourhood; crushing any sphere found keeps the manifold.
#[test]
fn crushing_spheres_after_subdivision() {
    let mut found = 0;
    for name in ["s3", "lens3", "lens7", "t3"] {
        let tri = Arc::new(moves::one_four(&oriented(name), 0).unwrap().orient().unwrap());
        let Some(s) = find_positive_chi_surface(&tri, &[], None).unwrap() else { continue };
        assert_eq!(s.euler_characteristic(), 2);
        let out = crush(&tri, &s).unwrap();
        assert_crush_law(&tri, &s, &out);
        assert!(out.removed_tets > 0);
        let before = homology_profile(&tri);
        let after: Vec<_> = out.result.split_components().iter().map(homology_profile).collect();
        // A sphere in a prime manifold bounds a ball on one side.
        assert!(after.contains(&before), "{name}");
        found += 1;
    }
    assert!(found > 0);
}

/// Every successful crush of a vertex surface obeys the count law.
#[test]
fn tetra_count_law_on_vertex_surfaces() {
    let mut crushed = 0;
    for &name in ORIENTABLE {
        let tri = Arc::new(oriented(name));
        for r in enumerate_admissible_rays(&assemble(&tri, ConeMode::ConeQ0)).rays {
            let Ok(c) = canonical_surface_vector(&tri, &r) else { continue };
            if let Ok(out) = crush(&tri, &c.surface) {
                assert_crush_law(&tri, &c.surface, &out);
                out.result.check_invariants().unwrap();
                assert!(compute_skeleton(&out.result).is_valid());
                crushed += 1;
            }
        }
    }
    assert!(crushed > 0);
}

#[test]
fn lens_torus_profiles() {
    let tri = Arc::new(oriented("lens3"));
    let r = &enumerate_admissible_rays(&assemble(&tri, ConeMode::ConeQ)).rays[0];
    let s = canonical_surface_vector(&tri, r).unwrap().surface;
    let out = crush(&tri, &s).unwrap();
    assert_crush_law(&tri, &s, &out);
    assert_eq!(out.component_boundary_profiles.len(), out.result.split_components().len());
    assert!(out.component_boundary_profiles.iter().all(|p| p.is_empty()));
}

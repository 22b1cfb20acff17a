mod common;

use common::{cell_complex_euler, oriented, ORIENTABLE};
use essurf_core::enumerate::{canonical_surface_vector, enumerate_admissible_rays};
use essurf_core::qtheory::{assemble, evaluate_nu, ConeMode, QuadVector};
use essurf_core::surface::{
    haken_sum, reconstruct, vertex_link_surface, vertex_link_weights, NormalSurface, SurfaceError,
};
use essurf_core::tri_core::{compute_skeleton, moves};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn closed_vertex_surfaces(name: &str) -> (Arc<essurf_core::Triangulation>, Vec<NormalSurface>) {
    let tri = Arc::new(oriented(name));
    let rays = enumerate_admissible_rays(&assemble(&tri, ConeMode::ConeQ0));
    let surfaces = rays.rays.iter().filter_map(|r| canonical_surface_vector(&tri, r).ok()).map(|c| c.surface).collect();
    (tri, surfaces)
}

#[test]
fn zero_vector_gives_empty_surface() {
    let tri = Arc::new(oriented("t3"));
    let s = reconstruct(&tri, &QuadVector::zeros(tri.tet_count())).unwrap();
    assert!(s.is_empty());
    assert_eq!(s.euler_characteristic(), 0);
    assert!(s.components().is_empty());
    assert_eq!(s.is_separating(), Err(SurfaceError::Empty));
}

#[test]
fn vertex_link_expressed_in_quads_is_empty() {
    for name in ["s3", "t3", "lens7"] {
        let tri = Arc::new(oriented(name));
        let skel = compute_skeleton(&tri);
        let link = vertex_link_surface(&tri, &skel, 0);
        assert!(link.quads().is_zero());
        assert!(reconstruct(&tri, &link.quads()).unwrap().is_empty());
    }
}

#[test]
fn figure_eight_link_torus_has_zero_euler() {
    let tri = Arc::new(oriented("fig8"));
    let skel = compute_skeleton(&tri);
    let link = vertex_link_surface(&tri, &skel, 0);
    assert!(link.is_vertex_linking());
    assert_eq!(link.euler_characteristic(), 0);
    assert_eq!(cell_complex_euler(&link), 0);
    assert!(link.is_two_sided());
}

#[test]
fn reconstructed_surfaces_satisfy_matching() {
    for &name in ORIENTABLE {
        let tri = Arc::new(oriented(name));
        for mode in [ConeMode::ConeQ, ConeMode::ConeQ0] {
            for r in enumerate_admissible_rays(&assemble(&tri, mode)).rays {
                if let Ok(s) = reconstruct(&tri, &r.vector) {
                    assert!(s.arcs_consistent(), "{name}");
                    assert_eq!(s.quads(), r.vector);
                }
            }
        }
    }
}

#[test]
fn circle_bundle_closed_rays_classify() {
    let (tri, _) = closed_vertex_surfaces("circle_bundle18");
    let system = assemble(&tri, ConeMode::ConeQ0);
    let rays = enumerate_admissible_rays(&system);
    assert_eq!(rays.len(), 81);
    let functionals = system.boundary.as_ref().unwrap();
    let (mut genus_two, mut sep_tori, mut nonsep_tori) = (0, 0, 0);
    for r in &rays.rays {
        let s = reconstruct(&tri, &r.vector).unwrap();
        assert!(!s.has_boundary());
        assert!(s.components().iter().all(|c| !c.is_vertex_linking()));
        let p = s.properties();
        assert_eq!(p.component_count, 1);
        assert!(p.two_sided);
        match (p.euler, p.separating) {
            (-2, _) => {
                genus_two += 1;
                assert!(evaluate_nu(functionals, &r.vector).unwrap().iter().all(|&x| x == 0));
            }
            (0, true) => sep_tori += 1,
            (0, false) => nonsep_tori += 1,
            other => panic!("unexpected surface {other:?}"),
        }
    }
    assert_eq!((genus_two, sep_tori, nonsep_tori), (9, 4, 68));
}

#[test]
fn circle_bundle_spun_rays() {
    let tri = oriented("circle_bundle18");
    let system = assemble(&tri, ConeMode::ConeQ);
    let rays = enumerate_admissible_rays(&system);
    assert_eq!(rays.len(), 29);
    let f = system.boundary.as_ref().unwrap();
    let spun = rays.rays.iter().filter(|r| evaluate_nu(f, &r.vector).unwrap().iter().any(|&x| x != 0)).count();
    assert_eq!(spun, 20);
}

#[test]
fn components_of_link_union() {
    let tri = Arc::new(moves::one_four(&oriented("s3"), 0).unwrap());
    let skel = compute_skeleton(&tri);
    let last = skel.vertices.len() - 1;
    assert!(last >= 1);
    let a = vertex_link_surface(&tri, &skel, 0);
    let b = vertex_link_surface(&tri, &skel, last);
    let both = a.standard_sum(&b).unwrap();
    assert_eq!(both.components().len(), 2);
    assert_eq!(both.euler_characteristic(), 4);
    assert_eq!(a.is_separating(), Ok(true));
}

#[test]
fn doubled_connected_surface_splits_into_copies() {
    let (_, surfaces) = closed_vertex_surfaces("t3");
    for s in surfaces {
        let doubled = s.scaled(2);
        let comps = doubled.components();
        assert_eq!(comps.len(), 2);
        for c in comps {
            assert_eq!(c.coords(), s.coords());
        }
    }
}

#[test]
fn one_sided_rays_double_to_two_sided() {
    let mut seen = 0;
    for name in ["lens4", "lens8"] {
        let tri = Arc::new(oriented(name));
        for r in enumerate_admissible_rays(&assemble(&tri, ConeMode::ConeQ)).rays {
            let primitive = reconstruct(&tri, &r.vector).unwrap();
            assert_eq!(primitive.sidedness(), (false, false));
            let c = canonical_surface_vector(&tri, &r).unwrap();
            assert!(c.doubled);
            assert_eq!(c.vector, r.vector.scaled(2));
            assert_eq!(c.surface.sidedness(), (true, true));
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn two_sided_rays_are_not_doubled() {
    let tri = Arc::new(oriented("lens7"));
    for r in enumerate_admissible_rays(&assemble(&tri, ConeMode::ConeQ)).rays {
        let c = canonical_surface_vector(&tri, &r).unwrap();
        assert!(!c.doubled);
        assert_eq!(c.vector, r.vector);
    }
}

#[test]
fn spun_rays_do_not_reconstruct() {
    let tri = Arc::new(oriented("fig8"));
    let rays = enumerate_admissible_rays(&assemble(&tri, ConeMode::ConeQ));
    assert!(!rays.is_empty());
    for r in &rays.rays {
        assert_eq!(canonical_surface_vector(&tri, r).unwrap_err(), SurfaceError::NotClosed);
    }
}

#[test]
fn haken_sum_basics() {
    let (tri, surfaces) = closed_vertex_surfaces("t3");
    let s = &surfaces[0];
    let with_empty = haken_sum(s, &NormalSurface::empty(tri.clone())).unwrap();
    assert_eq!(with_empty.surface.coords(), s.coords());
    assert_eq!(with_empty.removed_count(), 0);

    let twice = haken_sum(s, s).unwrap();
    assert_eq!(twice.surface.coords(), s.scaled(2).coords());
    assert_eq!(twice.surface.euler_characteristic(), 2 * s.euler_characteristic());

    let clash = surfaces.iter().find(|o| {
        o.coords().iter().zip(s.coords()).any(|(a, b)| matches!((a.quad_type(), b.quad_type()), (Some(x), Some(y)) if x != y))
    });
    let clash = clash.expect("t3 has incompatible vertex tori");
    assert!(matches!(haken_sum(s, clash), Err(SurfaceError::Incompatible(_))));
}

/// Closed-form Euler characteristic against the glued polygon complex for
/// every vertex surface of every bundled orientable fixture.
#[test]
fn euler_matches_cell_complex() {
    let mut checked = 0;
    for &name in ORIENTABLE {
        let tri = Arc::new(oriented(name));
        let skel = compute_skeleton(&tri);
        for mode in [ConeMode::ConeQ, ConeMode::ConeQ0] {
            for r in enumerate_admissible_rays(&assemble(&tri, mode)).rays {
                let Ok(c) = canonical_surface_vector(&tri, &r) else { continue };
                for s in [reconstruct(&tri, &r.vector).unwrap(), c.surface] {
                    assert_eq!(s.euler_with(&skel), cell_complex_euler(&s), "{name} {:?}", r.vector.coords);
                    checked += 1;
                }
            }
        }
        for v in 0..skel.vertices.len() {
            let link = vertex_link_surface(&tri, &skel, v);
            assert_eq!(link.euler_characteristic(), cell_complex_euler(&link));
            assert_eq!(link.euler_characteristic(), skel.vertices[v].link_euler);
        }
    }
    assert!(checked > 200);
}

fn compatible(a: &NormalSurface, b: &NormalSurface) -> bool {
    a.coords().iter().zip(b.coords()).all(|(x, y)| match (x.quad_type(), y.quad_type()) {
        (Some(p), Some(q)) => p == q,
        _ => true,
    })
}

/// Weight and Euler characteristic add under Haken sum, with removed vertex
/// links accounted for.
#[test]
fn additivity_over_random_compatible_pairs() {
    let pools: Vec<_> = ORIENTABLE
        .iter()
        .map(|&n| closed_vertex_surfaces(n))
        .filter(|(_, s)| !s.is_empty())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pairs = 0;
    let mut attempts = 0;
    while pairs < 600 {
        attempts += 1;
        assert!(attempts < 100_000, "too few compatible pairs");
        let (tri, pool) = &pools[rng.gen_range(0..pools.len())];
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        if !compatible(a, b) {
            continue;
        }
        let (a, b) = (a.scaled(rng.gen_range(1..=3)), b.scaled(rng.gen_range(1..=3)));
        let skel = compute_skeleton(tri);
        let sum = a.standard_sum(&b).unwrap();
        assert_eq!(sum.weight(), a.weight() + b.weight());
        assert_eq!(sum.euler_with(&skel), a.euler_with(&skel) + b.euler_with(&skel));

        let h = haken_sum(&a, &b).unwrap();
        let link_weights = vertex_link_weights(&skel);
        let (mut w, mut chi) = (h.surface.weight(), h.surface.euler_with(&skel));
        for &(v, k) in &h.removed_links {
            w += k * link_weights[v];
            chi += k * skel.vertices[v].link_euler;
        }
        assert_eq!(w, a.weight() + b.weight());
        assert_eq!(chi, a.euler_with(&skel) + b.euler_with(&skel));
        pairs += 1;
    }
}

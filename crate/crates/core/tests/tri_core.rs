mod common;

use common::{oriented, ORIENTABLE};
use essurf_core::fixtures;
use essurf_core::homology::homology_profile;
use essurf_core::perm::ALL_PERMS;
use essurf_core::tri_core::{
    build_vertex_link, canonical_hash, compute_skeleton, decode_iso_sig, moves, parse_gluings, simplify,
    write_gluings, SimplifyGoal, VertexKind,
};
use essurf_core::{OrientationState, TriError, Triangulation};
use proptest::prelude::*;

#[test]
fn single_unglued_tetrahedron() {
    let tri = parse_gluings("tets 1\n0 0 -> bdry\n0 1 -> bdry\n0 2 -> bdry\n0 3 -> bdry\n").unwrap();
    assert_eq!(tri.tet_count(), 1);
    assert_eq!(tri.boundary_face_count(), 4);
    let skel = compute_skeleton(&tri);
    assert_eq!(skel.edges.len(), 6);
    assert!(skel.edges.iter().all(|e| e.boundary));
    assert_eq!(skel.vertices.len(), 4);
    assert!(skel.vertices.iter().all(|v| v.kind == VertexKind::Boundary));
    assert_eq!(tri.detect_orientability(), OrientationState::Oriented);
}

#[test]
fn gluing_table_round_trip() {
    for (name, text) in fixtures::BUNDLED {
        let tri = parse_gluings(text).unwrap();
        let again = parse_gluings(&write_gluings(&tri)).unwrap();
        assert_eq!(tri, again, "{name}");
        tri.check_invariants().unwrap();
    }
}

#[test]
fn inconsistent_pairing_is_rejected() {
    let mut text = String::from("tets 2\n0 0 -> 1 0123\n1 0 -> 0 1023\n");
    for f in 1..4 {
        text.push_str(&format!("0 {f} -> bdry\n"));
    }
    for f in 2..4 {
        text.push_str(&format!("1 {f} -> bdry\n"));
    }
    text.push_str("1 1 -> bdry\n");
    assert!(matches!(parse_gluings(&text), Err(TriError::NonInvolutive { .. })));
}

#[test]
fn malformed_tables_are_rejected() {
    assert!(parse_gluings("").is_err());
    assert!(parse_gluings("tets 1\n0 0 -> bdry\n").is_err());
    assert!(parse_gluings("tets 1\n0 0 -> 0 0123\n0 1 -> bdry\n0 2 -> bdry\n0 3 -> bdry\n").is_err());
    assert!(parse_gluings("tets 1\n0 0 -> 0 0023\n0 1 -> bdry\n0 2 -> bdry\n0 3 -> bdry\n").is_err());
}

#[test]
fn figure_eight_skeleton() {
    let tri = fixtures::load("fig8");
    assert_eq!(tri.tet_count(), 2);
    let skel = compute_skeleton(&tri);
    assert_eq!(skel.edges.len(), 2);
    assert!(skel.edges.iter().all(|e| !e.boundary && e.degree() == 6));
    assert_eq!(skel.vertices.len(), 1);
    assert_eq!(skel.vertices[0].kind, VertexKind::Ideal);
    let link = build_vertex_link(&tri, &skel, 0);
    assert_eq!((link.euler, link.genus), (0, 1));
    assert!(link.closed && link.orientable);
    assert_eq!(tri.detect_orientability(), OrientationState::Oriented);
}

#[test]
fn closed_fixture_vertex_links_are_spheres() {
    for name in ["s3", "t3", "lens3", "lens5", "lens8"] {
        let tri = fixtures::load(name);
        let skel = compute_skeleton(&tri);
        assert!(skel.is_closed() && skel.is_valid());
        for v in 0..skel.vertices.len() {
            assert_eq!(skel.vertices[v].kind, VertexKind::Material);
            let link = build_vertex_link(&tri, &skel, v);
            assert_eq!((link.euler, link.genus), (2, 0), "{name}");
        }
    }
}

#[test]
fn skeleton_counting_identities() {
    for &name in ORIENTABLE {
        let tri = fixtures::load(name);
        let n = tri.tet_count();
        let skel = compute_skeleton(&tri);
        let degrees: usize = skel.edges.iter().map(|e| e.degree()).sum();
        assert_eq!(degrees, 6 * n, "{name}");
        assert_eq!(skel.faces.len(), 2 * n, "{name}");
        let corners: usize = skel.vertices.iter().map(|v| v.corners.len()).sum();
        assert_eq!(corners, 4 * n);
        if skel.is_closed() {
            let chi = skel.vertices.len() as i64 - skel.edges.len() as i64 + skel.faces.len() as i64 - n as i64;
            assert_eq!(chi, 0, "{name}");
        }
    }
}

#[test]
fn iso_sig_decoding() {
    let single = decode_iso_sig("baa").unwrap();
    assert_eq!(single.tet_count(), 1);
    assert_eq!(single.boundary_face_count(), 4);
    assert!(decode_iso_sig("").is_err());
    assert!(decode_iso_sig("b").is_err());

    let fig8 = decode_iso_sig("cPcbbbiht").unwrap();
    assert_eq!(canonical_hash(&fig8), canonical_hash(&fixtures::load("fig8")));
}

#[test]
fn circle_bundle_signature() {
    let tri = decode_iso_sig(fixtures::CIRCLE_BUNDLE_SIG).unwrap();
    assert_eq!(tri.tet_count(), 18);
    let skel = compute_skeleton(&tri);
    assert_eq!(skel.vertices.len(), 1);
    assert_eq!(skel.vertices[0].kind, VertexKind::Ideal);
    // The decoded vertex link is a torus; see the project notes on this fixture.
    let link = build_vertex_link(&tri, &skel, 0);
    assert_eq!((link.euler, link.genus), (0, 1));
    assert_eq!(canonical_hash(&tri), canonical_hash(&fixtures::load("circle_bundle18")));
}

#[test]
fn orientation() {
    for &name in ORIENTABLE {
        let tri = fixtures::load(name).orient().unwrap();
        assert!(tri.is_oriented());
        for t in 0..tri.tet_count() {
            for f in 0..4 {
                if let Some(g) = tri.gluing(t, f) {
                    assert!(!g.perm.is_even(), "{name}: gluing ({t},{f}) preserves orientation");
                }
            }
        }
        assert_eq!(tri.orient().unwrap(), tri);
    }
    let gieseking = fixtures::load("gieseking");
    assert_eq!(gieseking.tet_count(), 1);
    assert_eq!(gieseking.detect_orientability(), OrientationState::NonOrientable);
    assert_eq!(gieseking.orient().unwrap_err(), TriError::NonOrientable);
}

fn relabelled(tri: &Triangulation, shift: usize, perm_seed: &[usize]) -> Triangulation {
    let n = tri.tet_count();
    let tet_map: Vec<usize> = (0..n).map(|t| (t + shift) % n).collect();
    let vertex_maps: Vec<_> = (0..n).map(|t| ALL_PERMS[perm_seed[t % perm_seed.len()] % 24]).collect();
    tri.relabel(&tet_map, &vertex_maps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn canonical_hash_ignores_labels(idx in 0usize..10, shift in 0usize..32, perms in proptest::collection::vec(0usize..24, 1..8)) {
        let tri = fixtures::load(ORIENTABLE[idx]);
        let other = relabelled(&tri, shift, &perms);
        other.check_invariants().unwrap();
        prop_assert_eq!(canonical_hash(&tri), canonical_hash(&other));
    }
}

#[test]
fn canonical_hash_separates_fixtures() {
    let names = ["s3", "fig8", "m003", "t3", "lens3", "lens7"];
    let hashes: Vec<String> = names.iter().map(|n| canonical_hash(&fixtures::load(n))).collect();
    for i in 0..hashes.len() {
        for j in i + 1..hashes.len() {
            assert_ne!(hashes[i], hashes[j], "{} vs {}", names[i], names[j]);
        }
    }
    let single = parse_gluings("tets 1\n0 0 -> bdry\n0 1 -> bdry\n0 2 -> bdry\n0 3 -> bdry\n").unwrap();
    assert_ne!(canonical_hash(&single), canonical_hash(&fixtures::load("fig8")));
}

#[test]
fn minimal_fixture_is_left_alone() {
    let tri = oriented("fig8");
    let out = simplify(&tri, SimplifyGoal::MinimalVertices, 0, 4);
    assert!(out.goal_met);
    assert_eq!(out.triangulation.tet_count(), 2);
}

#[test]
fn simplify_undoes_one_four() {
    for name in ["t3", "lens7", "fig8"] {
        let tri = oriented(name);
        let n = tri.tet_count();
        let sub = moves::one_four(&tri, 0).unwrap().orient().unwrap();
        assert_eq!(sub.tet_count(), n + 3);
        assert_eq!(compute_skeleton(&sub).vertex_count_of(VertexKind::Material), compute_skeleton(&tri).vertex_count_of(VertexKind::Material) + 1);
        let out = simplify(&sub, SimplifyGoal::MinimalVertices, 3, 8);
        assert!(out.goal_met, "{name}");
        assert!(out.triangulation.tet_count() <= n, "{name}");
        assert_eq!(homology_profile(&out.triangulation), homology_profile(&tri), "{name}");
        assert!(out.triangulation.is_oriented());
    }
}

#[test]
fn two_three_and_back() {
    let tri = oriented("t3");
    let hash = canonical_hash(&tri);
    let mut found = false;
    for t in 0..tri.tet_count() {
        for f in 0..4 {
            let Some(up) = moves::two_three(&tri, t, f) else { continue };
            assert_eq!(up.tet_count(), tri.tet_count() + 1);
            assert_eq!(homology_profile(&up), homology_profile(&tri));
            let skel = compute_skeleton(&up);
            for e in 0..skel.edges.len() {
                if let Some(down) = moves::three_two(&up, &skel, e) {
                    if canonical_hash(&down) == hash {
                        found = true;
                    }
                }
            }
        }
    }
    assert!(found);
}

#[test]
fn components_split() {
    let tri = oriented("t3");
    let mut two = tri.clone();
    let n = tri.tet_count();
    for _ in 0..n {
        two.add_tet();
    }
    for t in 0..n {
        for f in 0..4 {
            if let Some(g) = tri.gluing(t, f) {
                if two.gluing(n + t, f).is_none() {
                    two.join(n + t, f, n + g.tet, g.perm).unwrap();
                }
            }
        }
    }
    assert!(!two.is_connected());
    let parts = two.split_components();
    assert_eq!(parts.len(), 2);
    assert!(parts.iter().all(|p| p.tet_count() == n));
}

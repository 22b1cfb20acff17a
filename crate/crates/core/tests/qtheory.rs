mod common;

use common::{oriented, small_loop_pairs, ORIENTABLE};
use essurf_core::perm::{quad_separating, ALL_PERMS};
use essurf_core::qtheory::{
    assemble, build_boundary_functionals, build_matching_system, evaluate_nu, is_admissible, slope, ConeMode,
    QError, QuadVector,
};
use essurf_core::tri_core::parse_gluings;
use essurf_core::Perm4;
use std::sync::Arc;

#[test]
fn slope_examples() {
    let id = Perm4::IDENTITY;
    assert_eq!(slope(id, quad_separating(0, 1)), 0);
    assert_eq!(slope(id, quad_separating(0, 2)), 1);
    assert_eq!(slope(id, quad_separating(0, 3)), -1);
}

#[test]
fn slopes_cancel_at_every_embedding() {
    for p in ALL_PERMS {
        let total: i64 = (0..3).map(|q| slope(p, q)).sum();
        assert_eq!(total, 0);
        assert_eq!((0..3).filter(|&q| slope(p, q) == 0).count(), 1);
        // Reversing the edge keeps the slope when the orientation flips too.
        let rev = p.compose(Perm4::transposition(0, 1)).compose(Perm4::transposition(2, 3));
        for q in 0..3 {
            assert_eq!(slope(rev, q), slope(p, q));
        }
    }
}

#[test]
fn admissibility() {
    assert!(is_admissible(&[0, 0, 0]));
    assert!(!is_admissible(&[1, 1, 0]));
    assert!(!is_admissible(&[0, -1, 0]));
    assert!(is_admissible(&[0, 2, 0, 3, 0, 0]));
    assert!(QuadVector::zeros(4).is_admissible());
}

#[test]
fn unglued_tetrahedron_has_no_equations() {
    let tri = parse_gluings("tets 1\n0 0 -> bdry\n0 1 -> bdry\n0 2 -> bdry\n0 3 -> bdry\n").unwrap();
    let m = build_matching_system(&tri);
    assert!(m.rows.is_empty());
    assert_eq!(m.dimension, 3);
}

#[test]
fn figure_eight_system() {
    let tri = oriented("fig8");
    let m = build_matching_system(&tri);
    assert_eq!(m.rows.len(), 2);
    assert!(m.rows.iter().all(|r| r.len() == 6));
    let f = build_boundary_functionals(&tri);
    assert_eq!(f.len(), 2);
    assert_eq!(evaluate_nu(&f, &QuadVector::zeros(2)).unwrap(), vec![0, 0]);
    let q0 = assemble(&tri, ConeMode::ConeQ0);
    assert_eq!(q0.equations().len(), 4);
    assert!(q0.satisfied_by(&[0; 6]));
    assert_eq!(assemble(&tri, ConeMode::ConeQ).equations().len(), 2);
}

#[test]
fn sphere_links_give_no_functionals() {
    for name in ["s3", "t3", "lens3", "lens8"] {
        let tri = oriented(name);
        assert!(build_boundary_functionals(&tri).is_empty());
        assert_eq!(assemble(&tri, ConeMode::ConeQ).equations(), assemble(&tri, ConeMode::ConeQ0).equations());
    }
}

#[test]
fn circle_bundle_functionals() {
    let tri = oriented("circle_bundle18");
    let f = build_boundary_functionals(&tri);
    // Torus link: two functionals (see the project notes on this fixture).
    assert_eq!(f.len(), 2);
    let m = build_matching_system(&tri);
    assert_eq!(assemble(&tri, ConeMode::ConeQ0).equations().len(), m.rows.len() + 2);
}

#[test]
fn nu_is_linear_and_checks_dimension() {
    let tri = oriented("m003");
    let f = build_boundary_functionals(&tri);
    let x = QuadVector::new(vec![1, 0, 2, 0, 3, 0]);
    let y = QuadVector::new(vec![0, 4, 0, 1, 0, 0]);
    let nx = evaluate_nu(&f, &x).unwrap();
    let ny = evaluate_nu(&f, &y).unwrap();
    let nxy = evaluate_nu(&f, &x.scaled(2).plus(&y)).unwrap();
    for i in 0..nx.len() {
        assert_eq!(nxy[i], 2 * nx[i] + ny[i]);
    }
    assert!(matches!(evaluate_nu(&f, &QuadVector::zeros(3)), Err(QError::DimensionMismatch { .. })));
}

/// Vector of a closed surface from the standard coordinates of its quads
/// satisfies every matching row.
#[test]
fn closed_surfaces_satisfy_matching_rows() {
    use essurf_core::enumerate::{canonical_surface_vector, enumerate_admissible_rays};
    for &name in ORIENTABLE {
        let tri = Arc::new(oriented(name));
        let system = assemble(&tri, ConeMode::ConeQ0);
        for r in enumerate_admissible_rays(&system).rays {
            let Ok(c) = canonical_surface_vector(&tri, &r) else { continue };
            assert!(system.satisfied_by(&c.surface.quads().coords), "{name}");
        }
    }
}

/// The loop around each interior edge in a vertex link yields that edge's
/// matching row, with one sign shared by every edge of every fixture.
#[test]
fn small_loops_give_matching_rows() {
    let mut sign = 0i64;
    let mut edges = 0;
    for &name in ORIENTABLE {
        let tri = oriented(name);
        for (loop_row, row) in small_loop_pairs(&tri) {
            assert!(row.iter().any(|&x| x != 0) || loop_row.iter().all(|&x| x == 0));
            let s = if loop_row == row {
                1
            } else if loop_row.iter().zip(&row).all(|(a, b)| *a == -*b) {
                -1
            } else {
                panic!("{name}: loop {loop_row:?} vs row {row:?}");
            };
            if row.iter().any(|&x| x != 0) {
                if sign == 0 {
                    sign = s;
                }
                assert_eq!(s, sign, "{name}");
            }
            edges += 1;
        }
    }
    assert!(edges > 30);
}

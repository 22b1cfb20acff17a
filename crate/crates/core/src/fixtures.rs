//! Gluing tables bundled with the library.

use crate::tri_core::{parse_gluings, Triangulation};

/// `(name, gluing table)` for every bundled fixture.
pub const BUNDLED: &[(&str, &str)] = &[
    ("s3", include_str!("../fixtures/s3.tri")),
    ("t3", include_str!("../fixtures/t3.tri")),
    ("fig8", include_str!("../fixtures/fig8.tri")),
    ("m003", include_str!("../fixtures/m003.tri")),
    ("circle_bundle18", include_str!("../fixtures/circle_bundle18.tri")),
    ("gieseking", include_str!("../fixtures/gieseking.tri")),
    ("lens3", include_str!("../fixtures/lens3.tri")),
    ("lens4", include_str!("../fixtures/lens4.tri")),
    ("lens5", include_str!("../fixtures/lens5.tri")),
    ("lens7", include_str!("../fixtures/lens7.tri")),
    ("lens8", include_str!("../fixtures/lens8.tri")),
];

/// Iso-sig of the 18-tetrahedron circle bundle over the once-punctured genus-two surface.
pub const CIRCLE_BUNDLE_SIG: &str = "sLLLLPLPMvQAQbefijjlklkjpqqoorrraxaaaaaaaaxhaaaahhh";

/// Names of the ten orientable manifolds used by the batch mini-census.
pub const MINI_CENSUS: &[&str] = &["s3", "t3", "fig8", "m003", "circle_bundle18", "lens3", "lens4", "lens5", "lens7", "lens8"];

pub fn source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses a bundled fixture; panics on an unknown name.
pub fn load(name: &str) -> Triangulation {
    let text = source(name).unwrap_or_else(|| panic!("no bundled fixture named {name}"));
    parse_gluings(text).expect("bundled fixture parses")
}

use super::{Gluing, TriError, Triangulation};
use crate::perm::Perm4;
use std::fmt::Write;

/// Parses the line-based gluing table:
///
/// ```text
/// tets 2
/// 0 0 -> 1 1023
/// 0 1 -> bdry
/// ```
///
/// Every face must appear exactly once; `#` starts a comment line.
pub fn parse_gluings(text: &str) -> Result<Triangulation, TriError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(TriError::Malformed { line: 0, msg: "empty document".into() })?;
    let bad = |line: usize, msg: &str| TriError::Malformed { line, msg: msg.to_string() };
    let mut hparts = header.split_whitespace();
    if hparts.next() != Some("tets") {
        return Err(bad(hline, "expected `tets <n>`"));
    }
    let n: usize = hparts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad(hline, "bad tetrahedron count"))?;
    if hparts.next().is_some() {
        return Err(bad(hline, "trailing tokens"));
    }

    let mut table: Vec<[Option<Option<Gluing>>; 4]> = vec![[None; 4]; n];
    let mut line_of = vec![[0usize; 4]; n];
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() < 4 || parts[2] != "->" {
            return Err(bad(ln, "expected `i f -> j perm` or `i f -> bdry`"));
        }
        let t: usize = parts[0].parse().map_err(|_| bad(ln, "bad tetrahedron index"))?;
        let f: usize = parts[1].parse().map_err(|_| bad(ln, "bad face index"))?;
        if t >= n || f > 3 {
            return Err(bad(ln, "tetrahedron or face out of range"));
        }
        if table[t][f].is_some() {
            return Err(bad(ln, "face listed twice"));
        }
        let entry = if parts[3] == "bdry" {
            if parts.len() != 4 {
                return Err(bad(ln, "trailing tokens"));
            }
            None
        } else {
            if parts.len() != 5 {
                return Err(bad(ln, "expected a permutation"));
            }
            let j: usize = parts[3].parse().map_err(|_| bad(ln, "bad partner index"))?;
            if j >= n {
                return Err(bad(ln, "partner out of range"));
            }
            let perm = parse_perm(parts[4]).ok_or_else(|| bad(ln, "bad permutation"))?;
            Some(Gluing { tet: j, perm })
        };
        table[t][f] = Some(entry);
        line_of[t][f] = ln;
    }

    let mut tri = Triangulation::new(n);
    for t in 0..n {
        for f in 0..4 {
            let entry = table[t][f].ok_or_else(|| bad(0, &format!("face ({t},{f}) missing")))?;
            let Some(g) = entry else { continue };
            let of = g.perm.apply(f);
            if g.tet == t && of == f {
                return Err(TriError::SelfGluedFace { tet: t, face: f });
            }
            match table[g.tet][of] {
                Some(Some(back)) if back.tet == t && back.perm == g.perm.inverse() => {}
                _ => return Err(TriError::NonInvolutive { tet: t, face: f }),
            }
            if (t, f) < (g.tet, of) {
                tri.join(t, f, g.tet, g.perm)?;
            }
        }
    }
    Ok(tri)
}

fn parse_perm(s: &str) -> Option<Perm4> {
    let b = s.as_bytes();
    if b.len() != 4 {
        return None;
    }
    let mut img = [0u8; 4];
    for i in 0..4 {
        if !(b'0'..=b'3').contains(&b[i]) {
            return None;
        }
        img[i] = b[i] - b'0';
    }
    Perm4::from_images(img)
}

/// Writes the gluing table format read by [`parse_gluings`].
pub fn write_gluings(tri: &Triangulation) -> String {
    let mut out = String::new();
    writeln!(out, "tets {}", tri.tet_count()).unwrap();
    for t in 0..tri.tet_count() {
        for f in 0..4 {
            match tri.gluing(t, f) {
                Some(g) => writeln!(out, "{t} {f} -> {} {}", g.tet, g.perm).unwrap(),
                None => writeln!(out, "{t} {f} -> bdry").unwrap(),
            }
        }
    }
    out
}

use super::{TriError, Triangulation};
use crate::perm::Perm4;

fn sval(c: u8) -> Option<usize> {
    match c {
        b'a'..=b'z' => Some((c - b'a') as usize),
        b'A'..=b'Z' => Some((c - b'A') as usize + 26),
        b'0'..=b'9' => Some((c - b'0') as usize + 52),
        b'+' => Some(62),
        b'-' => Some(63),
        _ => None,
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn done(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn char_val(&mut self) -> Result<usize, TriError> {
        let c = *self.bytes.get(self.pos).ok_or_else(|| TriError::IsoSig("truncated signature".into()))?;
        self.pos += 1;
        sval(c).ok_or_else(|| TriError::IsoSig(format!("invalid character {:?}", c as char)))
    }

    /// Little-endian integer spread over `n` characters, six bits each.
    fn int(&mut self, n: usize) -> Result<usize, TriError> {
        let mut v = 0usize;
        for i in 0..n {
            v |= self.char_val()? << (6 * i);
        }
        Ok(v)
    }
}

/// Decodes an isomorphism signature in the census encoding (decode only).
pub fn decode_iso_sig(sig: &str) -> Result<Triangulation, TriError> {
    let err = |m: &str| TriError::IsoSig(m.to_string());
    if sig.is_empty() {
        return Err(err("empty signature"));
    }
    let mut r = Reader { bytes: sig.as_bytes(), pos: 0 };
    let mut tri = Triangulation::new(0);

    while !r.done() {
        let mut n_simp = r.char_val()?;
        if n_simp == 0 {
            continue;
        }
        let n_chars = if n_simp < 63 {
            1
        } else {
            let k = r.char_val()?;
            n_simp = r.int(k)?;
            k
        };
        if n_simp == 0 {
            return Err(err("zero-size component"));
        }

        // Facet actions, three trits per character.
        let n_facets_total = 4 * n_simp;
        let mut actions = Vec::with_capacity(n_facets_total);
        let mut n_facets = 0;
        let mut n_joins = 0;
        while n_facets < n_facets_total {
            let v = r.char_val()?;
            for j in 0..3 {
                let a = (v >> (2 * j)) & 3;
                if n_facets == n_facets_total {
                    if a != 0 {
                        return Err(err("nonzero padding in facet actions"));
                    }
                    continue;
                }
                match a {
                    0 => n_facets += 1,
                    1 => n_facets += 2,
                    2 => {
                        n_facets += 2;
                        n_joins += 1;
                    }
                    _ => return Err(err("invalid facet action")),
                }
                if n_facets > n_facets_total {
                    return Err(err("facet actions overrun"));
                }
                actions.push(a);
            }
        }

        let mut dest = Vec::with_capacity(n_joins);
        for _ in 0..n_joins {
            dest.push(r.int(n_chars)?);
        }
        let mut perms = Vec::with_capacity(n_joins);
        for _ in 0..n_joins {
            let idx = r.char_val()?;
            perms.push(Perm4::from_lex_index(idx).ok_or_else(|| err("permutation index out of range"))?);
        }

        let base = tri.tet_count();
        for _ in 0..n_simp {
            tri.add_tet();
        }
        let mut action_pos = 0;
        let mut next_unused = 1;
        let mut join_pos = 0;
        for pos in 0..n_simp {
            for j in 0..4 {
                if tri.gluing(base + pos, j).is_some() {
                    continue;
                }
                let a = *actions.get(action_pos).ok_or_else(|| err("facet actions exhausted"))?;
                match a {
                    0 => {}
                    1 => {
                        if next_unused >= n_simp {
                            return Err(err("join to nonexistent tetrahedron"));
                        }
                        tri.join(base + pos, j, base + next_unused, Perm4::IDENTITY)?;
                        next_unused += 1;
                    }
                    _ => {
                        let d = dest[join_pos];
                        let g = perms[join_pos];
                        if d >= next_unused {
                            return Err(err("join destination out of order"));
                        }
                        if tri.gluing(base + d, g.apply(j)).is_some() {
                            return Err(err("join destination already glued"));
                        }
                        if d == pos && g.apply(j) == j {
                            return Err(err("face glued to itself"));
                        }
                        tri.join(base + pos, j, base + d, g)?;
                        join_pos += 1;
                    }
                }
                action_pos += 1;
            }
        }
    }
    Ok(tri)
}

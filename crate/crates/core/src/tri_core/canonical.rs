use super::Triangulation;
use crate::perm::{Perm4, ALL_PERMS};

const BOUNDARY: (usize, usize) = (usize::MAX, usize::MAX);

/// Destination sequence of the BFS relabelling that starts at `start` with
/// vertex map `p`; new tetrahedra always receive the identity gluing.
fn code_from(tri: &Triangulation, tets: &[usize], start: usize, p: Perm4) -> Vec<(usize, usize)> {
    let n = tri.tet_count();
    let mut new_index = vec![usize::MAX; n];
    let mut vmap = vec![Perm4::IDENTITY; n];
    let mut order = Vec::with_capacity(tets.len());
    new_index[start] = 0;
    vmap[start] = p;
    order.push(start);
    let mut code = Vec::with_capacity(4 * tets.len());
    let mut i = 0;
    while i < order.len() {
        let t = order[i];
        i += 1;
        let inv = vmap[t].inverse();
        for nf in 0..4 {
            let f = inv.apply(nf);
            match tri.gluing(t, f) {
                None => code.push(BOUNDARY),
                Some(g) => {
                    if new_index[g.tet] == usize::MAX {
                        new_index[g.tet] = order.len();
                        vmap[g.tet] = vmap[t].compose(g.perm.inverse());
                        order.push(g.tet);
                    }
                    let np = vmap[g.tet].compose(g.perm).compose(inv);
                    code.push((new_index[g.tet], np.lex_index()));
                }
            }
        }
    }
    code
}

/// Canonical text token: equal exactly for combinatorially isomorphic
/// triangulations.
pub fn canonical_hash(tri: &Triangulation) -> String {
    let mut parts: Vec<String> = tri
        .tet_components()
        .iter()
        .map(|comp| {
            let mut best: Option<Vec<(usize, usize)>> = None;
            for &s in comp {
                for &p in &ALL_PERMS {
                    let c = code_from(tri, comp, s, p);
                    if best.as_ref().is_none_or(|b| c < *b) {
                        best = Some(c);
                    }
                }
            }
            let body: Vec<String> = best
                .unwrap_or_default()
                .iter()
                .map(|&(t, p)| if (t, p) == BOUNDARY { "b".to_string() } else { format!("{t}.{p}") })
                .collect();
            format!("{}:{}", comp.len(), body.join(","))
        })
        .collect();
    parts.sort();
    parts.join("|")
}

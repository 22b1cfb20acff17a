//! Extremal rays of `{x >= 0, Ax = 0}` restricted to admissible supports,
//! by the double description method.

use crate::qtheory::{is_admissible, ConstraintSystem, QuadVector};
use crate::surface::{reconstruct, NormalSurface, SurfaceError};
use crate::tri_core::Triangulation;
use std::sync::Arc;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::atomic::{AtomicBool, Ordering};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("enumeration cancelled")]
    Cancelled,
    #[error("coordinate overflow during enumeration")]
    Overflow,
    #[error("more than {0} intermediate rays")]
    TooManyRays(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ray {
    pub vector: QuadVector,
    pub admissible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaySet {
    pub rays: Vec<Ray>,
    #[serde(skip)]
    pub system: ConstraintSystem,
}

impl RaySet {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }
}

/// Groups of coordinates of which at most one may be nonzero.
#[derive(Clone, Debug, Default)]
pub struct Exclusions {
    group_of: Vec<Option<usize>>,
}

impl Exclusions {
    pub fn none(dimension: usize) -> Self {
        Exclusions { group_of: vec![None; dimension] }
    }

    /// Consecutive triples, as in quad coordinates.
    pub fn quad_triples(dimension: usize) -> Self {
        Exclusions { group_of: (0..dimension).map(|i| Some(i / 3)).collect() }
    }

    pub fn from_groups(dimension: usize, groups: &[Vec<usize>]) -> Self {
        let mut group_of = vec![None; dimension];
        for (g, members) in groups.iter().enumerate() {
            for &i in members {
                group_of[i] = Some(g);
            }
        }
        Exclusions { group_of }
    }

    fn compatible(&self, support: &Bits) -> bool {
        let mut used = std::collections::HashSet::new();
        support.ones().all(|i| match self.group_of[i] {
            Some(g) => used.insert(g),
            None => true,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn union(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a | b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b))
    }
}

#[derive(Clone, Debug)]
struct WorkRay {
    v: Vec<i128>,
    support: Bits,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn primitive(mut v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        for x in &mut v {
            *x /= g;
        }
    }
    v
}

const PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 4_611_686_018_427_387_847];

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u128;
    let mut b = a as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    r as u64
}

/// Rank of the chosen columns of `rows`, modulo `p`.
fn rank_mod(rows: &[Vec<i64>], cols: &[usize], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> =
        rows.iter().map(|r| cols.iter().map(|&c| r[c].rem_euclid(p as i64) as u64).collect()).collect();
    let (nr, nc) = (m.len(), cols.len());
    let mut rank = 0;
    for c in 0..nc {
        let Some(piv) = (rank..nr).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c], p);
        for r in 0..nr {
            if r != rank && m[r][c] != 0 {
                let f = (m[r][c] as u128 * inv as u128 % p as u128) as u64;
                for k in c..nc {
                    let sub = (f as u128 * m[rank][k] as u128 % p as u128) as u64;
                    m[r][k] = (m[r][k] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    rank
}

/// Whether two rays of the current cone span a 2-dimensional face: the
/// equations restricted to the union of their supports have corank two.
fn adjacent(rows: &[Vec<i64>], support: &Bits) -> bool {
    let cols: Vec<usize> = support.ones().collect();
    let target = cols.len() - 2;
    PRIMES.iter().any(|&p| rank_mod(rows, &cols, p) == target)
}

/// Same question answered from the ray list: no third ray of the cone has
/// its support inside the union.
fn adjacent_by_rays(all: &[&Bits], a: &Bits, b: &Bits, support: &Bits) -> bool {
    all.iter().all(|r| std::ptr::eq(*r, a) || std::ptr::eq(*r, b) || !r.subset_of(support))
}

fn dot(row: &[i64], v: &[i128]) -> Result<i128, EnumError> {
    row.iter().zip(v).try_fold(0i128, |acc, (&a, &b)| {
        (a as i128).checked_mul(b).and_then(|x| acc.checked_add(x)).ok_or(EnumError::Overflow)
    })
}

/// Extremal rays of `{x >= 0, eq x = 0}` whose supports respect `excl`,
/// as primitive integer vectors in lexicographic order. Only coordinates in
/// `allowed` may be nonzero (all when `None`).
pub fn extremal_rays(
    dimension: usize,
    equations: &[Vec<i64>],
    excl: &Exclusions,
    allowed: Option<&[bool]>,
    cancel: Option<&AtomicBool>,
) -> Result<Vec<Vec<i64>>, EnumError> {
    extremal_rays_bounded(dimension, equations, excl, allowed, cancel, usize::MAX)
}

/// As [`extremal_rays`], giving up once an intermediate cone has more than
/// `max_rays` rays.
pub fn extremal_rays_bounded(
    dimension: usize,
    equations: &[Vec<i64>],
    excl: &Exclusions,
    allowed: Option<&[bool]>,
    cancel: Option<&AtomicBool>,
    max_rays: usize,
) -> Result<Vec<Vec<i64>>, EnumError> {
    let mut eqs: Vec<Vec<i64>> = equations.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    eqs.sort_by_key(|r| r.iter().filter(|&&x| x != 0).count());

    let mut rays: Vec<WorkRay> = (0..dimension)
        .filter(|&i| allowed.is_none_or(|a| a[i]))
        .map(|i| {
            let mut v = vec![0i128; dimension];
            v[i] = 1;
            let mut support = Bits::new(dimension);
            support.set(i);
            WorkRay { v, support }
        })
        .collect();

    for k in 0..eqs.len() {
        if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            return Err(EnumError::Cancelled);
        }
        let h = &eqs[k];
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = Vec::new();
        for r in rays {
            let s = dot(h, &r.v)?;
            match s.signum() {
                1 => pos.push((r, s)),
                -1 => neg.push((r, s)),
                _ => next.push(r),
            }
        }
        let prev_inserted = &eqs[..k];
        let all: Vec<&Bits> = pos.iter().chain(&neg).map(|(r, _)| &r.support).chain(next.iter().map(|r| &r.support)).collect();
        let all = &all;
        let combos: Result<Vec<WorkRay>, EnumError> = pos
            .par_iter()
            .flat_map_iter(|(p, hp)| {
                neg.iter().map(move |(n, hn)| {
                    if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
                        return Err(EnumError::Cancelled);
                    }
                    let support = p.support.union(&n.support);
                    let size = support.count();
                    if size > k + 2 || !excl.compatible(&support) {
                        return Ok(None);
                    }
                    let by_rank = k * size * size;
                    let ok = if by_rank < all.len() * support.0.len() * 8 {
                        adjacent(prev_inserted, &support)
                    } else {
                        adjacent_by_rays(all, &p.support, &n.support, &support)
                    };
                    if !ok {
                        return Ok(None);
                    }
                    let mut w = Vec::with_capacity(dimension);
                    for i in 0..dimension {
                        let x = hp
                            .checked_mul(n.v[i])
                            .and_then(|a| hn.checked_mul(p.v[i]).and_then(|b| a.checked_sub(b)))
                            .ok_or(EnumError::Overflow)?;
                        w.push(x);
                    }
                    Ok(Some(WorkRay { v: primitive(w), support }))
                })
            })
            .filter_map(Result::transpose)
            .collect();
        next.extend(combos?);
        next.sort_by(|a, b| a.v.cmp(&b.v));
        next.dedup_by(|a, b| a.v == b.v);
        if next.len() > max_rays {
            return Err(EnumError::TooManyRays(max_rays));
        }
        rays = next;
    }

    let mut out: Vec<Vec<i64>> = rays
        .into_iter()
        .map(|r| r.v.into_iter().map(|x| i64::try_from(x).map_err(|_| EnumError::Overflow)).collect())
        .collect::<Result<_, _>>()?;
    out.sort();
    Ok(out)
}

/// Admissible extremal rays of the cone described by `system`.
pub fn enumerate_admissible_rays(system: &ConstraintSystem) -> RaySet {
    try_enumerate_admissible_rays(system, None).expect("enumeration without cancellation")
}

pub fn try_enumerate_admissible_rays(system: &ConstraintSystem, cancel: Option<&AtomicBool>) -> Result<RaySet, EnumError> {
    let d = system.dimension();
    let vectors = extremal_rays(d, &system.equations(), &Exclusions::quad_triples(d), None, cancel)?;
    let rays = vectors
        .into_iter()
        .map(|coords| {
            let admissible = is_admissible(&coords);
            Ray { vector: QuadVector::new(coords), admissible }
        })
        .collect();
    Ok(RaySet { rays, system: system.clone() })
}

/// Representative surface of a closed vertex ray: the primitive vector, or
/// its double when the primitive surface is one-sided.
#[derive(Clone, Debug)]
pub struct CanonicalSurface {
    pub vector: QuadVector,
    pub doubled: bool,
    pub surface: NormalSurface,
}

pub fn canonical_surface_vector(tri: &Arc<Triangulation>, ray: &Ray) -> Result<CanonicalSurface, SurfaceError> {
    let surface = reconstruct(tri, &ray.vector)?;
    if surface.is_two_sided() {
        Ok(CanonicalSurface { vector: ray.vector.clone(), doubled: false, surface })
    } else {
        let vector = ray.vector.scaled(2);
        let surface = reconstruct(tri, &vector)?;
        Ok(CanonicalSurface { vector, doubled: true, surface })
    }
}

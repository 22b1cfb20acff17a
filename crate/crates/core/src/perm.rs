//! Permutations of the four vertices of a tetrahedron.

use std::fmt;

/// A permutation of {0,1,2,3}, stored as the images of 0..4.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4 {
    img: [u8; 4],
}

/// All 24 permutations in lexicographic order of their image strings.
pub const ALL_PERMS: [Perm4; 24] = {
    let mut out = [Perm4 { img: [0, 1, 2, 3] }; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && a != c && b != c {
                    let d = 6 - a - b - c;
                    out[n] = Perm4 { img: [a as u8, b as u8, c as u8, d as u8] };
                    n += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4 { img: [0, 1, 2, 3] };

    /// Builds a permutation from its images; returns `None` unless they are a
    /// rearrangement of 0..4.
    pub fn from_images(img: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &x in &img {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4 { img })
    }

    /// Panicking variant of [`Perm4::from_images`] for literals.
    pub fn new(a: u8, b: u8, c: u8, d: u8) -> Perm4 {
        Perm4::from_images([a, b, c, d]).expect("not a permutation of 0..4")
    }

    /// The transposition exchanging `a` and `b` (identity if equal).
    pub fn transposition(a: usize, b: usize) -> Perm4 {
        let mut img = [0, 1, 2, 3];
        img.swap(a, b);
        Perm4 { img }
    }

    #[inline]
    pub fn apply(self, i: usize) -> usize {
        self.img[i] as usize
    }

    #[inline]
    pub fn images(self) -> [u8; 4] {
        self.img
    }

    /// `self ∘ other`: apply `other` first.
    #[inline]
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4 {
            img: [
                self.img[other.img[0] as usize],
                self.img[other.img[1] as usize],
                self.img[other.img[2] as usize],
                self.img[other.img[3] as usize],
            ],
        }
    }

    pub fn inverse(self) -> Perm4 {
        let mut img = [0u8; 4];
        for i in 0..4 {
            img[self.img[i] as usize] = i as u8;
        }
        Perm4 { img }
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.img[i] > self.img[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(self) -> bool {
        self.sign() == 1
    }

    /// Index of this permutation in [`ALL_PERMS`].
    pub fn lex_index(self) -> usize {
        ALL_PERMS.iter().position(|&p| p == self).unwrap()
    }

    pub fn from_lex_index(i: usize) -> Option<Perm4> {
        ALL_PERMS.get(i).copied()
    }
}

impl Default for Perm4 {
    fn default() -> Self {
        Perm4::IDENTITY
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.img[0], self.img[1], self.img[2], self.img[3])
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

/// Endpoints of the six tetrahedron edges; edge `i` is opposite edge `5 - i`.
pub const EDGE_VERTICES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Index of the edge joining vertices `a` and `b`.
pub fn edge_number(a: usize, b: usize) -> usize {
    debug_assert!(a != b && a < 4 && b < 4);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    }
}

/// Quad type whose disc keeps `a` and `b` on the same side:
/// 0 = 01|23, 1 = 02|13, 2 = 03|12.
pub fn quad_separating(a: usize, b: usize) -> usize {
    debug_assert!(a != b);
    if a == 0 || b == 0 {
        a + b - 1
    } else {
        // {1,2} pairs with {0,3}, {1,3} with {0,2}, {2,3} with {0,1}
        6 - a - b - 1
    }
}

/// `QUAD_PARTNER[q][v]` is the vertex on the same side of quad type `q` as `v`.
pub const QUAD_PARTNER: [[usize; 4]; 3] = [[1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];

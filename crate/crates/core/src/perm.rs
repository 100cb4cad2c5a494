//! Permutations of the four vertex labels of a tetrahedron.

use std::fmt;

/// A bijection on `{0, 1, 2, 3}`, stored as the image of each label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its images, or `None` if `images` is not a bijection.
    pub fn new(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm4(images))
    }

    /// Permutation swapping `a` and `b`.
    pub fn transposition(a: u8, b: u8) -> Perm4 {
        let mut images = [0, 1, 2, 3];
        images.swap(a as usize, b as usize);
        Perm4(images)
    }

    #[inline]
    pub fn apply(self, i: u8) -> u8 {
        self.0[i as usize]
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Perm4 {
        let mut out = [0u8; 4];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u8;
        }
        Perm4(out)
    }

    /// `self.then(other)` maps `i` to `other(self(i))`.
    pub fn then(self, other: Perm4) -> Perm4 {
        Perm4([
            other.apply(self.0[0]),
            other.apply(self.0[1]),
            other.apply(self.0[2]),
            other.apply(self.0[3]),
        ])
    }

    pub fn is_even(self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 0
    }

    /// All 24 permutations in lexicographic order of their image arrays.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..256u16).filter_map(|code| {
            let images = [
                (code & 3) as u8,
                ((code >> 2) & 3) as u8,
                ((code >> 4) & 3) as u8,
                ((code >> 6) & 3) as u8,
            ];
            Perm4::new([images[3], images[2], images[1], images[0]])
        })
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn there_are_24_and_half_are_even() {
        let all: Vec<_> = Perm4::all().collect();
        assert_eq!(all.len(), 24);
        assert_eq!(all.iter().filter(|p| p.is_even()).count(), 12);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn inverse_and_composition() {
        for p in Perm4::all() {
            assert_eq!(p.then(p.inverse()), Perm4::IDENTITY);
            assert_eq!(p.inverse().then(p), Perm4::IDENTITY);
            for q in Perm4::all() {
                assert_eq!(p.then(q).is_even(), p.is_even() == q.is_even());
            }
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm4::new([0, 0, 1, 2]).is_none());
        assert!(Perm4::new([0, 1, 2, 4]).is_none());
        assert!(!Perm4::transposition(0, 2).is_even());
    }
}

//! Symmetric-group machinery: lexicographic enumeration, sign, ranking, and
//! the signed-sum operator over relabelings.

use std::fmt;

use crate::error::{Error, Result};
use crate::factored::FactoredRational;
use crate::parallel::tree_reduce;

/// A bijection on `{1..k}`, stored as its image sequence: `images[i-1]` is
/// the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(k: u32) -> Self {
        Permutation {
            images: (1..=k).collect(),
        }
    }

    /// Validates that `images` is a permutation of `1..=len`.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &v in &images {
            if v < 1 || v as usize > k || seen[(v - 1) as usize] {
                return Err(Error::InvalidPermutation(k));
            }
            seen[(v - 1) as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// The transposition swapping `i` and `j` inside `S_k`.
    pub fn transposition(k: u32, i: u32, j: u32) -> Self {
        assert!(i >= 1 && j >= 1 && i <= k && j <= k && i != j);
        let mut images: Vec<u32> = (1..=k).collect();
        images.swap((i - 1) as usize, (j - 1) as usize);
        Permutation { images }
    }

    pub fn k(&self) -> u32 {
        self.images.len() as u32
    }

    /// Image of `i` (1-based).
    pub fn image(&self, i: u32) -> u32 {
        self.images[(i - 1) as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `(-1)^inversions`.
    pub fn sign(&self) -> i32 {
        let mut inversions = 0usize;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
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

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.k(), other.k());
        Permutation {
            images: other.images.iter().map(|&v| self.image(v)).collect(),
        }
    }

    /// `k!`.
    pub fn count(k: u32) -> u64 {
        assert!(k <= 20, "k! overflows u64 beyond 20");
        (1..=k as u64).product::<u64>().max(1)
    }

    /// The permutation at position `rank` (0-based) in lexicographic order of
    /// image sequences, via the factorial number system.
    pub fn unrank(k: u32, mut rank: u64) -> Permutation {
        let n = k as usize;
        let mut remaining: Vec<u32> = (1..=k).collect();
        let mut images = Vec::with_capacity(n);
        let mut base = Permutation::count(k);
        for pos in 0..n {
            base /= (n - pos) as u64;
            let digit = (rank / base) as usize;
            rank %= base;
            images.push(remaining.remove(digit));
        }
        Permutation { images }
    }

    /// All of `S_k` in lexicographic order of image sequences; the identity
    /// comes first.
    pub fn all(k: u32) -> Permutations {
        Permutations {
            next: Some((1..=k).collect()),
        }
    }
}

impl fmt::Display for Permutation {
    /// One-line image sequence, e.g. `2 3 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lexicographic iterator over `S_k`.
pub struct Permutations {
    next: Option<Vec<u32>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let out = Permutation {
            images: current.clone(),
        };
        // standard next-permutation step
        let mut v = current;
        let n = v.len();
        let mut i = n.wrapping_sub(1);
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            self.next = None;
        } else {
            let mut j = n - 1;
            while v[j] <= v[i - 1] {
                j -= 1;
            }
            v.swap(i - 1, j);
            v[i..].reverse();
            self.next = Some(v);
        }
        Some(out)
    }
}

/// `Σ_{π ∈ S_k} sign(π) · relabel(e, π)`, accumulated with the factored
/// addition. Partial sums are combined over a fixed binary tree, so the
/// result is identical whatever the worker count.
pub fn antisymmetrize(e: &FactoredRational, k: u32) -> Result<FactoredRational> {
    let max = e.max_var();
    if max > k {
        return Err(Error::IndexOutOfRange { index: max, k });
    }
    let n = Permutation::count(k);
    Ok(tree_reduce(
        0..n,
        1,
        &|range| {
            let mut acc = FactoredRational::zero();
            for r in range {
                let p = Permutation::unrank(k, r);
                let mut t = e.relabeled(&p).expect("variables validated against k");
                if p.sign() < 0 {
                    t = -t;
                }
                acc = &acc + &t;
            }
            acc
        },
        &|a, b| &a + &b,
    ))
}

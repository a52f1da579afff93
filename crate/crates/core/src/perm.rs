//! Coordinate permutations and their action on binary vectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// A bijection of `{1..n}` stored as an image array.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    // 0-based images
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    /// From 1-based images `pi(1), ..., pi(n)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(Error::Parse(format!("not a permutation of 1..={n}: {images:?}")));
            }
            seen[i - 1] = true;
            out.push((i - 1) as u32);
        }
        Ok(Self { images: out })
    }

    /// From disjoint cycles over 1-based points; unlisted points are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p > degree || touched[p - 1] {
                    return Err(Error::Parse(format!("bad cycle {cycle:?} for degree {degree}")));
                }
                touched[p - 1] = true;
                images[p - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    /// Parses cycle notation such as `(1,2,3)(4,5)`; `()` is the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let body = open[..close].trim();
            if !body.is_empty() {
                let cycle = body
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<usize>()
                            .map_err(|e| Error::Parse(format!("bad point {p:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                cycles.push(cycle);
            }
            rest = open[close + 1..].trim_start();
        }
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `pi(i)`, 1-based.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    /// `pi(v)` with `pi(v)_i = v_{pi^{-1}(i)}`: the value at coordinate `i`
    /// moves to coordinate `pi(i)`.
    pub fn apply(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: v.len(),
            });
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(v.len());
        for (i, &p) in self.images.iter().enumerate() {
            if v.get(i + 1) {
                out.set(p as usize + 1, true);
            }
        }
        out
    }

    /// `(self o other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        Self {
            images: other.images.iter().map(|&q| self.images[q as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u32; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p as usize] = i as u32;
        }
        Self { images }
    }

    /// `k`-fold composition; negative `k` powers the inverse.
    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            acc = base.compose_unchecked(&acc);
        }
        acc
    }

    pub fn has_fixed_point(&self) -> bool {
        self.images.iter().enumerate().any(|(i, &p)| i as u32 == p)
    }

    /// Disjoint cycles with 1-based points, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.images[i] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles().iter().fold(1, |acc, c| acc / gcd(acc, c.len()) * c.len())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", body.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

pub fn apply(p: &Permutation, v: &BitVector) -> Result<BitVector> {
    p.apply(v)
}

pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    p.compose(q)
}

pub fn inverse_perm(p: &Permutation) -> Permutation {
    p.inverse()
}

pub fn power_perm(p: &Permutation, k: i64) -> Permutation {
    p.power(k)
}

pub fn has_fixed_point(p: &Permutation) -> bool {
    p.has_fixed_point()
}

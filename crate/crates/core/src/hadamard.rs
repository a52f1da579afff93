//! Hadamard predicates, kernel and rank, and code profiles.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::Family;
use crate::gf2::{basis_of, rank_of, BitMatrix, BitVector};
use crate::propelinear::PropelinearCode;

/// `true` iff `m` is square and its rows are pairwise orthogonal.
///
/// Entries are expected to be `+1`/`-1`; only orthogonality is tested.
pub fn is_hadamard_matrix(m: &[Vec<i8>]) -> Result<bool> {
    let n = m.len();
    if let Some(bad) = m.iter().find(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!(
            "matrix is not square: {n} rows, a row of length {}",
            bad.len()
        )));
    }
    for i in 0..n {
        for j in i + 1..n {
            let dot: i64 = m[i].iter().zip(&m[j]).map(|(&x, &y)| i64::from(x) * i64::from(y)).sum();
            if dot != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `true` iff `c` is a binary Hadamard code of length `4t` containing `e`.
pub fn is_hadamard_code(c: &[BitVector], t: usize) -> bool {
    let n = 4 * t;
    if c.len() != 8 * t || c.iter().any(|v| v.len() != n) {
        return false;
    }
    let set: HashSet<&BitVector> = c.iter().collect();
    if set.len() != c.len() {
        return false;
    }
    if !set.contains(&BitVector::zeros(n)) || !set.contains(&BitVector::ones(n)) {
        return false;
    }
    for v in c {
        if !v.is_zero() && !v.is_all_ones() && v.weight() != 2 * t {
            return false;
        }
        if !set.contains(&v.complement()) {
            return false;
        }
    }
    for (i, x) in c.iter().enumerate() {
        for y in &c[i + 1..] {
            let d = x.distance(y).expect("lengths checked");
            let complementary = d == n;
            if d != 2 * t && !complementary {
                return false;
            }
        }
    }
    true
}

/// Basis and dimension of `K(C) = {z : C + z = C}`.
///
/// Every kernel element maps `c_0` into the code, so the candidates are
/// `c_0 + C` for the first codeword `c_0`. This also covers translates
/// that do not contain `e`.
pub fn kernel(c: &[BitVector]) -> (BitMatrix, usize) {
    let Some(c0) = c.first() else {
        return (BitMatrix::default(), 0);
    };
    let set: HashSet<&BitVector> = c.iter().collect();
    let members: Vec<BitVector> = c
        .iter()
        .map(|x| x.add(c0).expect("codewords share one length"))
        .filter(|z| {
            c.iter().all(|x| {
                let mut s = x.clone();
                s.add_assign(z);
                set.contains(&s)
            })
        })
        .collect();
    let basis = basis_of(&members);
    let k = basis.len();
    (BitMatrix::new(basis).expect("kernel rows share the code length"), k)
}

/// Dimension of the linear span of `c`.
pub fn rank(c: &[BitVector]) -> usize {
    rank_of(c)
}

/// Smallest distance between two distinct codewords; `None` below two words.
pub fn min_distance(c: &[BitVector]) -> Option<usize> {
    let mut best = None;
    for (i, x) in c.iter().enumerate() {
        for y in &c[i + 1..] {
            let d = x.distance(y).ok()?;
            best = Some(best.map_or(d, |b: usize| b.min(d)));
        }
    }
    best
}

fn serialize_rows<S: serde::Serializer>(m: &BitMatrix, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(m.rows())
}

/// Rank, kernel and generators of one code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeProfile {
    pub family: Family,
    pub t: usize,
    pub length: usize,
    pub size: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    #[serde(serialize_with = "serialize_rows")]
    pub kernel_basis: BitMatrix,
    #[serde(skip)]
    pub min_distance: usize,
    pub generator_a: Option<BitVector>,
    pub generator_b: Option<BitVector>,
    pub generator_d: Option<BitVector>,
}

impl CodeProfile {
    pub fn rk(&self) -> (usize, usize) {
        (self.rank, self.kernel_dim)
    }

    pub fn is_linear(&self) -> bool {
        self.rank == self.kernel_dim
    }
}

/// Known rank/kernel bounds for an Hadamard code of length `4t` with rank `r`
/// and kernel dimension `k`. `family` enables the family-specific bounds.
pub fn check_bounds(t: usize, r: usize, k: usize, family: Option<Family>) -> Result<()> {
    let n = 4 * t;
    let s = n.trailing_zeros() as usize;
    let linear = r == k;
    let fail = |what: String| Err(Error::BoundViolation(format!("t = {t}, (r, k) = ({r}, {k}): {what}")));

    // r <= 2^{s+1} t' / 2^k + k - 1, scaled by 2^k
    if k >= 120 {
        return fail("kernel dimension out of range".into());
    }
    let scale = 1u128 << k;
    if (r as u128) * scale > 2 * n as u128 + (k as u128).saturating_sub(1) * scale && k >= 1 {
        return fail("r exceeds 2^(s+1) t' / 2^k + k - 1".into());
    }
    if k == 0 {
        return fail("u must lie in the kernel".into());
    }
    if !linear && !(1 <= k && k < s) {
        return fail(format!("nonlinear code needs 1 <= k <= s - 1 with s = {s}"));
    }
    if s >= 3 && r > 2 * t {
        return fail("r exceeds 2t".into());
    }
    if s == 3 && r != 2 * t {
        return fail("r must equal 2t when s = 3".into());
    }
    if s == 2 && r != n - 1 {
        return fail("r must equal 4t - 1 when s = 2".into());
    }
    if let Some(f) = family {
        if f.is_two_generator() && !linear && k > 3 {
            return fail("two-generator family with k > 3".into());
        }
        if t % 2 == 1 && !linear && (r, k) != (n - 1, 1) {
            return fail("odd t requires (r, k) = (4t - 1, 1)".into());
        }
    }
    Ok(())
}

/// Full profile of an accepted code; runs the bound suite.
pub fn profile(c: &PropelinearCode) -> Result<CodeProfile> {
    let t = c.t();
    let vectors = c.vectors();
    if !is_hadamard_code(&vectors, t) {
        return Err(Error::InvalidInput("code is not an Hadamard code".into()));
    }
    let r = rank(&vectors);
    let (basis, k) = kernel(&vectors);
    let family = c.family();
    check_bounds(t, r, k, Some(family))?;
    let g = c.generators();
    Ok(CodeProfile {
        family,
        t,
        length: c.length(),
        size: c.size(),
        rank: r,
        kernel_dim: k,
        kernel_basis: basis,
        min_distance: min_distance(&vectors).unwrap_or(0),
        generator_a: g.a.as_ref().map(|x| x.vector.clone()),
        generator_b: g.b.as_ref().map(|x| x.vector.clone()),
        generator_d: g.d.as_ref().map(|x| x.vector.clone()),
    })
}

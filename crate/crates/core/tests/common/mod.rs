#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use hfp_core::{assemble, BitVector, Candidate, Family};

pub const EXAMPLE_1: &str = "00011000111001111011110101000010";
pub const EXAMPLE_2: &str = "00000010010101111000111111011010";
pub const ROW_1: &str = "1,1,i,-i,i,1,1,i,-1,1,-i,-i,-i,1,-1,i";
pub const ROW_2: &str = "i,i,i,i,1,i,-i,-1,-i,i,i,-i,-1,i,-i,1";

pub fn bv(s: &str) -> BitVector {
    s.parse().unwrap()
}

/// Expected cell per (t, family) for t = 1..=5: `None` for a blank or
/// undefined cell, otherwise the set of (r, k).
pub fn golden(t: usize, family: Family) -> Option<BTreeSet<(usize, usize)>> {
    let set = |v: &[(usize, usize)]| Some(v.iter().copied().collect());
    match (t, family) {
        (_, Family::TQU) if t % 2 == 0 => None,
        (1, Family::TQU) => set(&[]),
        (1, _) => set(&[(3, 3)]),
        (2, Family::FourTU2) | (2, Family::TwoT4U) => set(&[(4, 4)]),
        (2, Family::TwoT22U) => set(&[]),
        (3, Family::TQU) => set(&[(11, 1)]),
        (4, Family::FourTU2) => set(&[]),
        (4, Family::TwoT22U) => set(&[(5, 5), (6, 3)]),
        (4, Family::TwoT4U) => set(&[(7, 2)]),
        (5, Family::TQU) => set(&[(19, 1)]),
        (3, _) | (5, _) => set(&[]),
        _ => unreachable!("golden data covers t <= 5"),
    }
}

/// Kernel dimension straight from the definition: every z in F^n.
pub fn brute_kernel_dim(code: &[BitVector]) -> usize {
    let n = code[0].len();
    assert!(n <= 16);
    let words: HashSet<u64> = code.iter().map(|v| v.as_word().unwrap()).collect();
    let count = (0u64..1 << n)
        .filter(|z| words.iter().all(|x| words.contains(&(x ^ z))))
        .count();
    assert!(count.is_power_of_two());
    count.trailing_zeros() as usize
}

/// Rank by plain elimination on machine words.
pub fn word_rank(code: &[BitVector]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for v in code {
        let mut x = v.as_word().unwrap();
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Distinct code sets over every vector of length 4t, with no filters.
pub fn brute_force_codes(family: Family, t: usize) -> BTreeSet<Vec<BitVector>> {
    let n = 4 * t;
    let mut out = BTreeSet::new();
    for w in 0u64..1 << n {
        let v = BitVector::from_word(w, n);
        let cands = if family == Family::TQU {
            Candidate::quaternion_choices(&v)
        } else {
            vec![Candidate::Generator(v)]
        };
        for c in cands {
            if let Ok(code) = assemble(family, t, &c) {
                out.insert(code.sorted_vectors());
            }
        }
    }
    out
}

mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use common::*;
use hfp_core::propelinear::{power_elem, GroupLaw};
use hfp_core::{
    candidate_stream, count_candidates, derive_a_from_d, derive_b_from_a, derive_b_from_a_quaternion, element_power,
    family_perms, is_cchm, kernel, rank, run_search, BitVector, Family, Label, Mode, Permutation, PropelinearElement,
    QuaternaryRow, SearchOptions, SearchTask,
};
use proptest::prelude::*;

fn apply(p: &Permutation, w: u64, n: usize) -> u64 {
    p.apply(&BitVector::from_word(w, n)).unwrap().as_word().unwrap()
}

#[test]
fn streams_match_plain_filter() {
    for family in [Family::FourTU2, Family::TwoT22U, Family::TwoT4U, Family::TQU] {
        for t in 1..=4 {
            if family == Family::TQU && t % 2 == 0 {
                continue;
            }
            let n = 4 * t;
            let mut want: Vec<String> = (0u64..1 << n)
                .map(|w| BitVector::from_word(w, n))
                .filter(|v| v.weight() == 2 * t)
                .filter(|v| {
                    let s = v.to_string();
                    let ones = |r: &str| r.chars().filter(|&c| c == '1').count();
                    match family {
                        Family::FourTU2 => ones(&s[..2 * t]) % 2 == 1,
                        Family::TQU => (0..4).all(|r| s.chars().skip(r).step_by(4).filter(|&c| c == '1').count() % 2 == 0),
                        _ => ones(&s[..2 * t]) % 2 == 0,
                    }
                })
                .map(|v| v.to_string())
                .collect();
            want.sort();
            let got: Vec<String> = candidate_stream(family, t).unwrap().map(|v| v.to_string()).collect();
            assert_eq!(got, want, "{family} t={t}");
            assert_eq!(count_candidates(family, t), want.len() as u128);
        }
    }
}

#[test]
fn companion_solves_the_relations() {
    for family in [Family::FourTU2, Family::TwoT22U, Family::TwoT4U] {
        for t in 1..=2 {
            let n = 4 * t;
            let perms = family_perms(family, t).unwrap();
            let pb = perms.b.unwrap();
            let full = (1u64 << n) - 1;
            let b2 = if family == Family::TwoT4U { full } else { 0 };
            for a in 0u64..1 << n {
                let solutions: BTreeSet<u64> = (0u64..1 << n)
                    .filter(|&b| b ^ apply(&pb, b, n) == b2)
                    .filter(|&b| a ^ apply(&perms.a, b, n) == b ^ apply(&pb, a, n))
                    .collect();
                let derived = derive_b_from_a(&BitVector::from_word(a, n), family, t).unwrap();
                assert!(!derived.get(2 * t));
                if !solutions.is_empty() {
                    assert!(solutions.contains(&derived.as_word().unwrap()), "{family} a={a:b}");
                }
            }
        }
    }
}

#[test]
fn quaternion_companions_are_all_solutions() {
    let t = 3;
    let n = 12;
    let perms = family_perms(Family::TQU, t).unwrap();
    let (pa, pb, pd) = (perms.a, perms.b.unwrap(), perms.d.unwrap());
    let full = (1u64 << n) - 1;
    let mut checked = 0;
    for d in candidate_stream(Family::TQU, t).unwrap() {
        let dw = d.as_word().unwrap();
        for f in [(false, false), (false, true), (true, false), (true, true)] {
            let a = derive_a_from_d(&d, f, t).unwrap();
            let aw = a.as_word().unwrap();
            // only a commuting with d can have a companion
            if dw ^ apply(&pd, aw, n) != aw ^ apply(&pa, dw, n) {
                continue;
            }
            let solutions: BTreeSet<u64> = (0u64..1 << n)
                .filter(|&b| b ^ apply(&pb, b, n) == full)
                .filter(|&b| {
                    let ab = aw ^ apply(&pa, b, n);
                    let pab = |v| apply(&pa, apply(&pb, v, n), n);
                    ab ^ pab(aw) == b
                })
                .filter(|&b| dw ^ apply(&pd, b, n) == b ^ apply(&pb, dw, n))
                .collect();
            let derived: BTreeSet<u64> = [false, true]
                .into_iter()
                .filter_map(|seed| derive_b_from_a_quaternion(&a, &d, seed, t).unwrap())
                .map(|b| b.as_word().unwrap())
                .collect();
            assert_eq!(derived, solutions, "d={d} a={a}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn cchm_predicate_matches_gram_matrix() {
    fn unit(c: u8) -> (i64, i64) {
        [(1, 0), (0, 1), (-1, 0), (0, -1)][c as usize % 4]
    }
    for m in [2usize, 4, 6] {
        let total = 1u32 << (2 * m);
        for w in (0..total).step_by(if m == 6 { 7 } else { 1 }) {
            let exps: Vec<u8> = (0..m).map(|j| ((w >> (2 * j)) & 3) as u8).collect();
            let row = QuaternaryRow::new(exps.clone()).unwrap();
            let entry = |j: usize, l: usize| unit(exps[(l + m - j) % m]);
            // M M* = m I over the Gaussian integers
            let mut ok = true;
            for j in 0..m {
                for k in 0..m {
                    let (mut re, mut im) = (0, 0);
                    for l in 0..m {
                        let (a, b) = entry(j, l);
                        let (c, d) = entry(k, l);
                        re += a * c + b * d;
                        im += b * c - a * d;
                    }
                    let want = if j == k { m as i64 } else { 0 };
                    ok &= re == want && im == 0;
                }
            }
            assert_eq!(is_cchm(&row), ok, "{row}");
        }
    }
}

/// Every accepted code of length at most 16.
fn small_codes() -> &'static [Vec<BitVector>] {
    static CODES: OnceLock<Vec<Vec<BitVector>>> = OnceLock::new();
    CODES.get_or_init(|| {
        let mut out = Vec::new();
        for family in [Family::FourTU2, Family::TwoT22U, Family::TwoT4U, Family::TQU] {
            for t in 1..=4 {
                if family == Family::TQU && t % 2 == 0 {
                    continue;
                }
                let task = SearchTask::full(family, t, Mode::All, 1);
                let res = run_search(&task, &SearchOptions::default()).unwrap();
                out.extend(res.codes.into_iter().map(|c| c.codewords));
            }
        }
        assert!(!out.is_empty());
        out
    })
}

fn arb_code(n: usize) -> impl Strategy<Value = Vec<BitVector>> {
    prop::collection::btree_set(0u64..1 << n, 1..24).prop_map(move |set| {
        let mut words: Vec<BitVector> = set.into_iter().map(|w| BitVector::from_word(w, n)).collect();
        if !words.iter().any(BitVector::is_zero) {
            words.push(BitVector::zeros(n));
        }
        words
    })
}

proptest! {
    #[test]
    fn rank_matches_word_elimination(code in (4usize..=16).prop_flat_map(arb_code)) {
        prop_assert_eq!(rank(&code), word_rank(&code));
    }

    #[test]
    fn kernel_matches_definition(code in (4usize..=10).prop_flat_map(arb_code)) {
        prop_assert_eq!(kernel(&code).1, brute_kernel_dim(&code));
    }

    #[test]
    fn kernel_of_subspace_is_itself(gens in prop::collection::vec(0u64..1 << 12, 1..6)) {
        let mut span = BTreeSet::from([0u64]);
        for g in gens {
            let next: Vec<u64> = span.iter().map(|x| x ^ g).collect();
            span.extend(next);
        }
        let code: Vec<BitVector> = span.iter().map(|&w| BitVector::from_word(w, 12)).collect();
        let dim = span.len().trailing_zeros() as usize;
        prop_assert_eq!(kernel(&code).1, dim);
        prop_assert_eq!(rank(&code), dim);
    }

    #[test]
    fn kernel_invariant_under_translation(z in 0u64..1 << 16, pick in 0usize..1000) {
        let codes = small_codes();
        let vectors = &codes[pick % codes.len()];
        let n = vectors[0].len();
        let shift = BitVector::from_word(z & ((1u64 << n) - 1), n);
        let moved: Vec<BitVector> = vectors.iter().map(|x| x.add(&shift).unwrap()).collect();
        prop_assert_eq!(kernel(&moved).1, kernel(vectors).1);
        prop_assert_eq!(brute_kernel_dim(&moved), kernel(vectors).1);
    }

    #[test]
    fn power_expansion_on_random_elements(w in 0u64..1 << 12, j in 0u32..6, i in 0usize..30) {
        let perms = family_perms(Family::TQU, 3).unwrap();
        let law = GroupLaw::new(Family::TQU, 3);
        let x = PropelinearElement::new(BitVector::from_word(w, 12), perms.d.unwrap().power(i64::from(j)), Label::new(0, 0, 0), law).unwrap();
        prop_assert_eq!(element_power(&x, i), power_elem(&x, i).vector);
    }
}

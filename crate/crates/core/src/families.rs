//! The four code families with associated group `C_2t x C_2`, plus the
//! cyclic family used as input to the doubling construction.
//!
//! Each family fixes its generator permutations. The remaining generators
//! are derived from a single candidate vector (`a`, or `d` for `tQu`), and
//! [`assemble`] lays out the `8t` labelled elements straight from the
//! presentation before running the full predicate chain.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::hadamard::is_hadamard_code;
use crate::perm::Permutation;
use crate::propelinear::{
    is_full_propelinear, power_elem, star_elem, Generators, GroupLaw, Label, PropelinearCode, PropelinearElement,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `C_4t x C_2`, `a^2t = u`, `b^2 = e`.
    FourTU2,
    /// `C_2t x C_2 x C_2`, `a^2t = b^2 = e`, `u` a direct factor.
    TwoT22U,
    /// `C_2t x C_4`, `a^2t = e`, `b^2 = u`.
    TwoT4U,
    /// `C_t x Q`, `d^t = e`, `a^2 = b^2 = u`, `aba = b`; odd `t` only.
    TQU,
    /// `C_4t x C_2` with a single `4t`-cycle: the circulant codes.
    Cyclic,
}

impl Family {
    /// The four families of the classification, in table order.
    pub const TABLE: [Family; 4] = [Family::FourTU2, Family::TwoT22U, Family::TwoT4U, Family::TQU];

    pub fn tag(self) -> &'static str {
        match self {
            Family::FourTU2 => "4tu2",
            Family::TwoT22U => "2t22u",
            Family::TwoT4U => "2t4u",
            Family::TQU => "tQu",
            Family::Cyclic => "cyclic4tu",
        }
    }

    /// Families generated by `a`, `b` (and `u`) with the half-split permutations.
    pub fn is_two_generator(self) -> bool {
        matches!(self, Family::FourTU2 | Family::TwoT22U | Family::TwoT4U)
    }

    /// Whether the family is defined at this `t`.
    pub fn check_t(self, t: usize) -> Result<()> {
        let ok = t >= 1 && (self != Family::TQU || t % 2 == 1);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter { family: self, t })
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "4tu2" | "4tu,2" | "i" => Ok(Family::FourTU2),
            "2t22u" | "2t,2,2u" | "ii" => Ok(Family::TwoT22U),
            "2t4u" | "2t,4u" | "iii" => Ok(Family::TwoT4U),
            "tqu" | "t,qu" | "iv" => Ok(Family::TQU),
            "cyclic4tu" | "cyclic-4t_u" | "cyclic" => Ok(Family::Cyclic),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

impl serde::Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.tag())
    }
}

/// Generator permutations of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyPerms {
    pub a: Permutation,
    pub b: Option<Permutation>,
    pub d: Option<Permutation>,
}

pub fn family_perms(family: Family, t: usize) -> Result<FamilyPerms> {
    family.check_t(t)?;
    let n = 4 * t;
    let h = 2 * t;
    let perms = match family {
        Family::FourTU2 | Family::TwoT22U | Family::TwoT4U => FamilyPerms {
            a: Permutation::from_cycles(n, &[(1..=h).collect(), (h + 1..=n).collect()])?,
            b: Some(Permutation::from_cycles(
                n,
                &(1..=h).map(|i| vec![i, i + h]).collect::<Vec<_>>(),
            )?),
            d: None,
        },
        Family::TQU => FamilyPerms {
            a: Permutation::from_cycles(n, &(1..=n).step_by(2).map(|i| vec![i, i + 1]).collect::<Vec<_>>())?,
            b: Some(Permutation::from_cycles(
                n,
                &(0..t)
                    .flat_map(|blk| [vec![4 * blk + 1, 4 * blk + 3], vec![4 * blk + 2, 4 * blk + 4]])
                    .collect::<Vec<_>>(),
            )?),
            d: Some(Permutation::from_cycles(
                n,
                &(1..=4).map(|r| (r..=n).step_by(4).collect()).collect::<Vec<_>>(),
            )?),
        },
        Family::Cyclic => FamilyPerms {
            a: Permutation::from_cycles(n, &[(1..=n).collect()])?,
            b: None,
            d: None,
        },
    };
    Ok(perms)
}

fn check_len(v: &BitVector, t: usize) -> Result<()> {
    if v.len() != 4 * t {
        return Err(Error::LengthMismatch {
            expected: 4 * t,
            found: v.len(),
        });
    }
    Ok(())
}

/// Companion `b` from commutation `ab = ba`, with the free bit `b_2t = 0`.
///
/// `b_i = sum_{j > i} ahat_j` over the first half, `ahat = a + pi_b(a)`; the
/// second half repeats the first for `b^2 = e` and complements it for
/// `b^2 = u`.
pub fn derive_b_from_a(a: &BitVector, family: Family, t: usize) -> Result<BitVector> {
    if !family.is_two_generator() {
        return Err(Error::InvalidParameter { family, t });
    }
    check_len(a, t)?;
    let h = 2 * t;
    let mut b = BitVector::zeros(4 * t);
    let mut acc = false;
    // ahat_j = a_j + a_{j+2t} for j in the first half
    for i in (1..h).rev() {
        acc ^= a.get(i + 1) ^ a.get(i + 1 + h);
        b.set(i, acc);
    }
    let flip = family == Family::TwoT4U;
    for i in 1..=h {
        b.set(i + h, b.get(i) ^ flip);
    }
    Ok(b)
}

fn check_quaternion(t: usize) -> Result<()> {
    if t % 2 == 0 {
        return Err(Error::InvalidParameter { family: Family::TQU, t });
    }
    Ok(())
}

/// `a` from centrality `da = ad` and `a^2 = u`.
///
/// `a_{4i-3} = a_{4t-3} + sum_{j<=i} dhat_{4j-3}` and likewise at `4i-1`, with
/// `dhat = d + pi_a(d)`; the free bits are `(a_{4t-3}, a_{4t-1})`, and
/// `a_{4i-2}`, `a_{4i}` are the complements forced by `a^2 = u`.
pub fn derive_a_from_d(d: &BitVector, free_bits: (bool, bool), t: usize) -> Result<BitVector> {
    check_quaternion(t)?;
    check_len(d, t)?;
    // dhat at 4j-3 is d_{4j-3} + d_{4j-2}; at 4j-1 it is d_{4j-1} + d_{4j}
    let mut a = BitVector::zeros(4 * t);
    let (mut s1, mut s3) = (free_bits.0, free_bits.1);
    for i in 1..=t {
        let base = 4 * i - 3;
        s1 ^= d.get(base) ^ d.get(base + 1);
        s3 ^= d.get(base + 2) ^ d.get(base + 3);
        a.set(base, s1);
        a.set(base + 1, !s1);
        a.set(base + 2, s3);
        a.set(base + 3, !s3);
    }
    Ok(a)
}

fn block(v: &BitVector, i: usize) -> [bool; 4] {
    let base = 4 * i - 3;
    [v.get(base), v.get(base + 1), v.get(base + 2), v.get(base + 3)]
}

/// The two admissible `B_i` for a block `A_i`, or `None` if `A_i` is not
/// one of the four shapes forced by `a^2 = u`.
fn allowed_b_blocks(a_block: [bool; 4]) -> Option<[[bool; 4]; 2]> {
    const F: bool = false;
    const T: bool = true;
    match a_block {
        [F, T, F, T] | [T, F, T, F] => Some([[F, T, T, F], [T, F, F, T]]),
        [F, T, T, F] | [T, F, F, T] => Some([[F, F, T, T], [T, T, F, F]]),
        _ => None,
    }
}

/// `b` for the quaternion family, or `None` when no admissible `b` commutes
/// with `d`.
///
/// Each `B_i` is restricted to the pair dictated by `A_i`. The seed picks
/// `B_1` within its pair and `db = bd` (`B_i = B_{i-1} + (d + pi_b(d))_i`)
/// fixes the rest.
pub fn derive_b_from_a_quaternion(a: &BitVector, d: &BitVector, free_bit: bool, t: usize) -> Result<Option<BitVector>> {
    check_quaternion(t)?;
    check_len(a, t)?;
    check_len(d, t)?;
    let step = |i: usize| {
        let db = block(d, i);
        // pi_b swaps positions 1<->3 and 2<->4 inside a block
        [db[0] ^ db[2], db[1] ^ db[3], db[2] ^ db[0], db[3] ^ db[1]]
    };
    let Some(first) = allowed_b_blocks(block(a, 1)) else {
        return Ok(None);
    };
    let mut b = BitVector::zeros(4 * t);
    let mut cur = first[usize::from(free_bit)];
    for i in 1..=t {
        if i > 1 {
            let s = step(i);
            for (c, x) in cur.iter_mut().zip(s) {
                *c ^= x;
            }
        }
        match allowed_b_blocks(block(a, i)) {
            Some(pair) if pair.contains(&cur) => {}
            _ => return Ok(None),
        }
        for (k, &bit) in cur.iter().enumerate() {
            b.set(4 * i - 3 + k, bit);
        }
    }
    // wrap-around: B_1 = B_t + step(1)
    let s = step(1);
    let wrapped: Vec<bool> = cur.iter().zip(s).map(|(c, x)| c ^ x).collect();
    if wrapped != first[usize::from(free_bit)] {
        return Ok(None);
    }
    Ok(Some(b))
}

/// The input to [`assemble`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Candidate {
    /// Generator `a` of a two-generator or cyclic family.
    Generator(BitVector),
    /// Generator `d` of `tQu` with the residual choices for `a` and `b`.
    Quaternion {
        d: BitVector,
        a_free: (bool, bool),
        b_seed: bool,
    },
}

impl Candidate {
    /// The eight residual choices for one `d`.
    pub fn quaternion_choices(d: &BitVector) -> Vec<Candidate> {
        let mut out = Vec::with_capacity(8);
        for f1 in [false, true] {
            for f2 in [false, true] {
                for seed in [false, true] {
                    out.push(Candidate::Quaternion {
                        d: d.clone(),
                        a_free: (f1, f2),
                        b_seed: seed,
                    });
                }
            }
        }
        out
    }

    pub fn vector(&self) -> &BitVector {
        match self {
            Candidate::Generator(a) => a,
            Candidate::Quaternion { d, .. } => d,
        }
    }
}

/// Why a candidate was turned down; the first failing predicate wins.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reject {
    Malformed(String),
    /// Weight of the candidate is not `2t`.
    Degenerate,
    /// No companion generator satisfies the structural constraints.
    Companion,
    /// `x^power` has weight other than `2t`.
    PowerWeight { power: usize },
    /// A relation of the presentation fails.
    Relation(&'static str),
    /// Two labels land on one vector.
    Collision,
    NotFullPropelinear,
    NotHadamard,
}

impl Reject {
    /// Stable key used in summary counts.
    pub fn key(&self) -> &'static str {
        match self {
            Reject::Malformed(_) => "malformed",
            Reject::Degenerate => "degenerate",
            Reject::Companion => "companion",
            Reject::PowerWeight { .. } => "power_weight",
            Reject::Relation(_) => "relation",
            Reject::Collision => "collision",
            Reject::NotFullPropelinear => "not_full_propelinear",
            Reject::NotHadamard => "not_hadamard",
        }
    }
}

impl fmt::Display for Reject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reject::Malformed(m) => write!(f, "malformed candidate: {m}"),
            Reject::Degenerate => f.write_str("candidate weight is not 2t"),
            Reject::Companion => f.write_str("no admissible companion generator"),
            Reject::PowerWeight { power } => write!(f, "power {power} of the generator has weight other than 2t"),
            Reject::Relation(r) => write!(f, "relation {r} fails"),
            Reject::Collision => f.write_str("two group elements share a vector"),
            Reject::NotFullPropelinear => f.write_str("not full propelinear"),
            Reject::NotHadamard => f.write_str("not an Hadamard code"),
        }
    }
}

fn element(vector: BitVector, perm: &Permutation, label: Label, law: GroupLaw) -> PropelinearElement {
    PropelinearElement {
        vector,
        perm: perm.clone(),
        label,
        law,
    }
}

/// Finds the residual choices for `d` that agree with the given `a`, `b`.
pub fn quaternion_candidate(t: usize, d: &BitVector, a: Option<&BitVector>, b: Option<&BitVector>) -> Result<Candidate> {
    let mut first = None;
    for cand in Candidate::quaternion_choices(d) {
        let Candidate::Quaternion { a_free, b_seed, .. } = &cand else {
            unreachable!()
        };
        let av = derive_a_from_d(d, *a_free, t)?;
        if a.is_some_and(|x| *x != av) {
            continue;
        }
        let Some(bv) = derive_b_from_a_quaternion(&av, d, *b_seed, t)? else {
            continue;
        };
        if b.is_some_and(|x| *x != bv) {
            continue;
        }
        if assemble(Family::TQU, t, &cand).is_ok() {
            return Ok(cand);
        }
        first.get_or_insert(cand);
    }
    first.ok_or_else(|| Error::InvalidInput("no derived generators match the given a and b".into()))
}

/// Derives the companions of `candidate`, lays out the `8t` elements of the
/// presentation and runs the full predicate chain.
pub fn assemble(family: Family, t: usize, candidate: &Candidate) -> Result<PropelinearCode, Reject> {
    let perms = family_perms(family, t).map_err(|e| Reject::Malformed(e.to_string()))?;
    let n = 4 * t;
    if candidate.vector().len() != n {
        return Err(Reject::Malformed(format!(
            "length {} differs from 4t = {n}",
            candidate.vector().len()
        )));
    }
    let law = GroupLaw::new(family, t);
    let e = PropelinearElement::identity(n, law);
    let u = PropelinearElement::all_ones(n, law);
    let weight_ok = |v: &BitVector| v.weight() == 2 * t;

    let (generators, elements) = match (family, candidate) {
        (Family::TQU, Candidate::Quaternion { d, a_free, b_seed }) => {
            if !weight_ok(d) {
                return Err(Reject::Degenerate);
            }
            let av = derive_a_from_d(d, *a_free, t).map_err(|e| Reject::Malformed(e.to_string()))?;
            let bv = derive_b_from_a_quaternion(&av, d, *b_seed, t)
                .map_err(|e| Reject::Malformed(e.to_string()))?
                .ok_or(Reject::Companion)?;
            let dg = element(d.clone(), perms.d.as_ref().unwrap(), Label::new(1, 0, 0), law);
            let ag = element(av, &perms.a, Label::new(0, 1, 0), law);
            let bg = element(bv, perms.b.as_ref().unwrap(), Label::new(0, 2, 0), law);
            if !weight_ok(&ag.vector) || !weight_ok(&bg.vector) {
                return Err(Reject::Companion);
            }
            let mut dpow = vec![e.clone()];
            for j in 1..t {
                let next = star_elem(&dg, &dpow[j - 1]);
                if !weight_ok(&next.vector) {
                    return Err(Reject::PowerWeight { power: j });
                }
                dpow.push(next);
            }
            if !star_elem(&dg, &dpow[t - 1]).same_as(&e) {
                return Err(Reject::Relation("d^t = e"));
            }
            let ab = star_elem(&ag, &bg);
            let checks: [(&'static str, bool); 5] = [
                ("a^2 = u", star_elem(&ag, &ag).same_as(&u)),
                ("b^2 = u", star_elem(&bg, &bg).same_as(&u)),
                ("aba = b", star_elem(&ab, &ag).same_as(&bg)),
                ("da = ad", star_elem(&dg, &ag).same_as(&star_elem(&ag, &dg))),
                ("db = bd", star_elem(&dg, &bg).same_as(&star_elem(&bg, &dg))),
            ];
            if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
                return Err(Reject::Relation(name));
            }
            let qs = [e.clone(), ag.clone(), bg.clone(), ab];
            let mut elements = Vec::with_capacity(8 * t);
            for dj in &dpow {
                for q in &qs {
                    let x = star_elem(dj, q);
                    let xu = star_elem(&x, &u);
                    elements.push(x);
                    elements.push(xu);
                }
            }
            (
                Generators {
                    a: Some(ag),
                    b: Some(bg),
                    d: Some(dg),
                },
                elements,
            )
        }
        (Family::TQU, _) | (_, Candidate::Quaternion { .. }) => {
            return Err(Reject::Malformed(format!("candidate kind does not match family {family}")))
        }
        (_, Candidate::Generator(a)) => {
            if !weight_ok(a) {
                return Err(Reject::Degenerate);
            }
            let ag = element(a.clone(), &perms.a, Label::new(1, 0, 0), law);
            let bg = match &perms.b {
                Some(pb) => {
                    let bv = derive_b_from_a(a, family, t).map_err(|e| Reject::Malformed(e.to_string()))?;
                    if !weight_ok(&bv) {
                        return Err(Reject::Companion);
                    }
                    Some(element(bv, pb, Label::new(0, 1, 0), law))
                }
                None => None,
            };
            let order = if family == Family::Cyclic { 4 * t } else { 2 * t };
            let mut apow = vec![e.clone()];
            for j in 1..order {
                let next = star_elem(&ag, &apow[j - 1]);
                if !weight_ok(&next.vector) {
                    return Err(Reject::PowerWeight { power: j });
                }
                apow.push(next);
            }
            let top = star_elem(&ag, &apow[order - 1]);
            let (want, name) = match family {
                Family::FourTU2 => (&u, "a^2t = u"),
                Family::Cyclic => (&e, "a^4t = e"),
                _ => (&e, "a^2t = e"),
            };
            if !top.same_as(want) {
                return Err(Reject::Relation(name));
            }
            if let Some(bg) = bg {
                let b2 = star_elem(&bg, &bg);
                let (want, name) = if family == Family::TwoT4U {
                    (&u, "b^2 = u")
                } else {
                    (&e, "b^2 = e")
                };
                if !b2.same_as(want) {
                    return Err(Reject::Relation(name));
                }
                if !star_elem(&ag, &bg).same_as(&star_elem(&bg, &ag)) {
                    return Err(Reject::Relation("ab = ba"));
                }
                let mut elements = Vec::with_capacity(8 * t);
                for x in &apow {
                    let xb = star_elem(x, &bg);
                    elements.push(star_elem(x, &u));
                    elements.push(star_elem(&xb, &u));
                    elements.push(xb);
                    elements.push(x.clone());
                }
                (
                    Generators {
                        a: Some(ag),
                        b: Some(bg),
                        d: None,
                    },
                    elements,
                )
            } else {
                let mut elements = Vec::with_capacity(8 * t);
                for x in &apow {
                    elements.push(x.clone());
                    elements.push(star_elem(x, &u));
                }
                (
                    Generators {
                        a: Some(ag),
                        ..Default::default()
                    },
                    elements,
                )
            }
        }
    };

    let code = PropelinearCode::from_elements(law, elements, generators).map_err(|_| Reject::Collision)?;
    if !is_full_propelinear(&code) {
        return Err(Reject::NotFullPropelinear);
    }
    if !is_hadamard_code(&code.vectors(), t) {
        return Err(Reject::NotHadamard);
    }
    Ok(code)
}

/// Convenience: `x^i` for a generator of an assembled code.
pub fn generator_power(g: &PropelinearElement, i: usize) -> PropelinearElement {
    power_elem(g, i)
}

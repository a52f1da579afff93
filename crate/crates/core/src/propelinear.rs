//! Propelinear structure: codewords paired with coordinate permutations,
//! the `*` operation, and group generation with exponent labels.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::families::Family;
use crate::gf2::BitVector;
use crate::perm::Permutation;

/// Exponents of an element in the normal form of its family's presentation.
///
/// | family      | element            | ranges                      |
/// |-------------|--------------------|-----------------------------|
/// | `4tu2`      | `a^j b^k u^l`      | `j < 2t`, `k < 2`, `l < 2`  |
/// | `2t22u`     | `a^j b^k u^l`      | `j < 2t`, `k < 2`, `l < 2`  |
/// | `2t4u`      | `a^j b^(k+2l)`     | `j < 2t`, `k < 2`, `l < 2`  |
/// | `tQu`       | `d^j q_k u^l`      | `j < t`, `k < 4`, `l < 2`   |
/// | `cyclic4tu` | `a^j u^l`          | `j < 4t`, `k = 0`, `l < 2`  |
///
/// For `tQu`, `q_0 = e`, `q_1 = a`, `q_2 = b`, `q_3 = ab`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Label {
    pub j: u32,
    pub k: u32,
    pub l: u32,
}

impl Label {
    pub const IDENTITY: Label = Label { j: 0, k: 0, l: 0 };
    pub const U: Label = Label { j: 0, k: 0, l: 1 };

    pub fn new(j: u32, k: u32, l: u32) -> Self {
        Self { j, k, l }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.j, self.k, self.l)
    }
}

/// Multiplication of labels for one family at one `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupLaw {
    pub family: Family,
    pub t: u32,
}

impl GroupLaw {
    pub fn new(family: Family, t: usize) -> Self {
        Self { family, t: t as u32 }
    }

    pub fn order(&self) -> usize {
        8 * self.t as usize
    }

    pub fn mul(&self, x: Label, y: Label) -> Label {
        let t = self.t;
        match self.family {
            Family::FourTU2 => {
                let big = |v: Label| v.j + 2 * t * v.l;
                let jj = (big(x) + big(y)) % (4 * t);
                Label::new(jj % (2 * t), (x.k + y.k) % 2, jj / (2 * t))
            }
            Family::TwoT22U => Label::new((x.j + y.j) % (2 * t), (x.k + y.k) % 2, (x.l + y.l) % 2),
            Family::TwoT4U => {
                let kk = (x.k + 2 * x.l + y.k + 2 * y.l) % 4;
                Label::new((x.j + y.j) % (2 * t), kk % 2, kk / 2)
            }
            Family::TQU => {
                let (x1, y1) = (x.k & 1, x.k >> 1);
                let (x2, y2) = (y.k & 1, y.k >> 1);
                // a^x1 b^y1 a^x2 b^y2 with ba = ab u, a^2 = b^2 = u
                let z = x.l + y.l + y1 * x2 + (x1 & x2) + (y1 & y2);
                Label::new((x.j + y.j) % t, (x1 ^ x2) | ((y1 ^ y2) << 1), z % 2)
            }
            Family::Cyclic => Label::new((x.j + y.j) % (4 * t), 0, (x.l + y.l) % 2),
        }
    }

    pub fn inv(&self, x: Label) -> Label {
        let t = self.t;
        match self.family {
            Family::FourTU2 => {
                let jj = (4 * t - (x.j + 2 * t * x.l) % (4 * t)) % (4 * t);
                Label::new(jj % (2 * t), x.k, jj / (2 * t))
            }
            Family::TwoT22U => Label::new((2 * t - x.j) % (2 * t), x.k, x.l),
            Family::TwoT4U => {
                let kk = (4 - (x.k + 2 * x.l)) % 4;
                Label::new((2 * t - x.j) % (2 * t), kk % 2, kk / 2)
            }
            Family::TQU => Label::new((t - x.j) % t, x.k, x.l ^ u32::from(x.k != 0)),
            Family::Cyclic => Label::new((4 * t - x.j) % (4 * t), 0, x.l),
        }
    }

    /// All `8t` labels in canonical order.
    pub fn labels(&self) -> Vec<Label> {
        let t = self.t;
        let (jn, kn) = match self.family {
            Family::TQU => (t, 4),
            Family::Cyclic => (4 * t, 1),
            _ => (2 * t, 2),
        };
        let mut out = Vec::with_capacity(self.order());
        for j in 0..jn {
            for k in 0..kn {
                for l in 0..2 {
                    out.push(Label::new(j, k, l));
                }
            }
        }
        out
    }
}

/// A codeword `x` with its permutation `pi_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropelinearElement {
    pub vector: BitVector,
    pub perm: Permutation,
    pub label: Label,
    pub law: GroupLaw,
}

impl PropelinearElement {
    pub fn new(vector: BitVector, perm: Permutation, label: Label, law: GroupLaw) -> Result<Self> {
        if vector.len() != perm.degree() {
            return Err(Error::DegreeMismatch {
                expected: vector.len(),
                found: perm.degree(),
            });
        }
        Ok(Self {
            vector,
            perm,
            label,
            law,
        })
    }

    pub fn identity(n: usize, law: GroupLaw) -> Self {
        Self {
            vector: BitVector::zeros(n),
            perm: Permutation::identity(n),
            label: Label::IDENTITY,
            law,
        }
    }

    pub fn all_ones(n: usize, law: GroupLaw) -> Self {
        Self {
            vector: BitVector::ones(n),
            perm: Permutation::identity(n),
            label: Label::U,
            law,
        }
    }

    pub fn len(&self) -> usize {
        self.vector.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vector.is_empty()
    }

    /// Same vector and permutation; labels are not compared.
    pub fn same_as(&self, other: &Self) -> bool {
        self.vector == other.vector && self.perm == other.perm
    }
}

/// `x * y = x + pi_x(y)` for an arbitrary vector `y`.
pub fn star(x: &PropelinearElement, y: &BitVector) -> Result<BitVector> {
    let moved = x.perm.apply(y).map_err(|_| Error::LengthMismatch {
        expected: x.len(),
        found: y.len(),
    })?;
    x.vector.add(&moved)
}

/// Group product: vector `x + pi_x(y)`, permutation `pi_x pi_y`.
pub fn star_elem(x: &PropelinearElement, y: &PropelinearElement) -> PropelinearElement {
    let mut vector = x.perm.apply_unchecked(&y.vector);
    vector.add_assign(&x.vector);
    PropelinearElement {
        vector,
        perm: x.perm.compose_unchecked(&y.perm),
        label: x.law.mul(x.label, y.label),
        law: x.law,
    }
}

/// `x^{-1} = pi_x^{-1}(x)`.
pub fn inverse(x: &PropelinearElement) -> PropelinearElement {
    let perm = x.perm.inverse();
    PropelinearElement {
        vector: perm.apply_unchecked(&x.vector),
        perm,
        label: x.law.inv(x.label),
        law: x.law,
    }
}

/// Vector of `x^i`, evaluated as `x + pi_x(x) + ... + pi_x^{i-1}(x)`.
pub fn element_power(x: &PropelinearElement, i: usize) -> BitVector {
    let mut acc = BitVector::zeros(x.len());
    let mut term = x.vector.clone();
    for _ in 0..i {
        acc.add_assign(&term);
        term = x.perm.apply_unchecked(&term);
    }
    acc
}

/// `x^i` as a full element, by repeated multiplication.
pub fn power_elem(x: &PropelinearElement, i: usize) -> PropelinearElement {
    let mut acc = PropelinearElement::identity(x.len(), x.law);
    for _ in 0..i {
        acc = star_elem(x, &acc);
    }
    acc
}

/// Named defining elements of a code.
#[derive(Clone, Debug, Default)]
pub struct Generators {
    pub a: Option<PropelinearElement>,
    pub b: Option<PropelinearElement>,
    pub d: Option<PropelinearElement>,
}

impl Generators {
    pub fn iter(&self) -> impl Iterator<Item = &PropelinearElement> {
        [&self.d, &self.a, &self.b].into_iter().flatten()
    }
}

/// A full propelinear group of codewords, indexed by vector and by label.
#[derive(Clone, Debug)]
pub struct PropelinearCode {
    law: GroupLaw,
    length: usize,
    elements: Vec<PropelinearElement>,
    generators: Generators,
    by_vector: HashMap<BitVector, usize>,
    by_label: HashMap<Label, usize>,
}

impl PropelinearCode {
    /// Indexes `elements`, which must have distinct vectors and labels.
    pub fn from_elements(
        law: GroupLaw,
        mut elements: Vec<PropelinearElement>,
        generators: Generators,
    ) -> Result<Self> {
        let length = elements.first().map_or(0, |e| e.len());
        elements.sort_by_key(|e| e.label);
        let mut by_vector = HashMap::with_capacity(elements.len());
        let mut by_label = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if e.len() != length {
                return Err(Error::LengthMismatch {
                    expected: length,
                    found: e.len(),
                });
            }
            if let Some(&prev) = by_vector.get(&e.vector) {
                let prev: usize = prev;
                return Err(Error::VectorCollision {
                    first: elements[prev].label.to_string(),
                    second: e.label.to_string(),
                    vector: e.vector.to_string(),
                });
            }
            if by_label.insert(e.label, i).is_some() {
                return Err(Error::InvalidInput(format!("label {} appears twice", e.label)));
            }
            by_vector.insert(e.vector.clone(), i);
        }
        Ok(Self {
            law,
            length,
            elements,
            generators,
            by_vector,
            by_label,
        })
    }

    pub fn law(&self) -> GroupLaw {
        self.law
    }

    pub fn family(&self) -> Family {
        self.law.family
    }

    pub fn t(&self) -> usize {
        self.law.t as usize
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[PropelinearElement] {
        &self.elements
    }

    pub fn generators(&self) -> &Generators {
        &self.generators
    }

    pub fn vectors(&self) -> Vec<BitVector> {
        self.elements.iter().map(|e| e.vector.clone()).collect()
    }

    /// Codewords in lexicographic order; equal codes give equal lists.
    pub fn sorted_vectors(&self) -> Vec<BitVector> {
        let mut v = self.vectors();
        v.sort();
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.by_vector.contains_key(v)
    }

    pub fn by_vector(&self, v: &BitVector) -> Option<&PropelinearElement> {
        self.by_vector.get(v).map(|&i| &self.elements[i])
    }

    /// Discrete-log lookup.
    pub fn by_label(&self, label: Label) -> Option<&PropelinearElement> {
        self.by_label.get(&label).map(|&i| &self.elements[i])
    }
}

/// Breadth-first closure of `generators` under `*`, capped at `expected_size`.
pub fn generate_group(generators: &[PropelinearElement], expected_size: usize) -> Result<PropelinearCode> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidInput("no generators".into()))?;
    let n = first.len();
    let law = first.law;
    for g in generators {
        if g.len() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: g.len(),
            });
        }
    }
    let mut seen: HashMap<BitVector, Label> = HashMap::new();
    let mut labels: HashSet<Label> = HashSet::new();
    let mut elements = Vec::new();
    let mut queue = VecDeque::new();
    let e = PropelinearElement::identity(n, law);
    seen.insert(e.vector.clone(), e.label);
    labels.insert(e.label);
    queue.push_back(e.clone());
    elements.push(e);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = star_elem(&x, g);
            match seen.get(&y.vector) {
                Some(&label) if label == y.label => continue,
                Some(&label) => {
                    return Err(Error::VectorCollision {
                        first: label.to_string(),
                        second: y.label.to_string(),
                        vector: y.vector.to_string(),
                    })
                }
                None => {}
            }
            if !labels.insert(y.label) {
                // the same normal form reached two distinct vectors: the
                // generators do not satisfy the presentation
                return Err(Error::SizeMismatch {
                    expected: expected_size,
                    found: elements.len() + 1,
                });
            }
            seen.insert(y.vector.clone(), y.label);
            elements.push(y.clone());
            if elements.len() > expected_size {
                return Err(Error::SizeMismatch {
                    expected: expected_size,
                    found: elements.len(),
                });
            }
            queue.push_back(y);
        }
    }
    if elements.len() != expected_size {
        return Err(Error::SizeMismatch {
            expected: expected_size,
            found: elements.len(),
        });
    }
    let mut named = Generators::default();
    for g in generators {
        let slot = match (law.family, g.label) {
            (Family::TQU, Label { j: 1, k: 0, l: 0 }) => &mut named.d,
            (Family::TQU, Label { j: 0, k: 1, l: 0 }) => &mut named.a,
            (Family::TQU, Label { j: 0, k: 2, l: 0 }) => &mut named.b,
            (_, Label { j: 1, k: 0, l: 0 }) => &mut named.a,
            (_, Label { j: 0, k: 1, l: 0 }) => &mut named.b,
            _ => continue,
        };
        *slot = Some(g.clone());
    }
    PropelinearCode::from_elements(law, elements, named)
}

/// Conditions (i) and (ii): `x + pi_x(y)` lies in the code with
/// permutation `pi_x pi_y`, for all pairs.
pub fn is_propelinear(c: &PropelinearCode) -> bool {
    c.elements.iter().all(|x| {
        c.elements.iter().all(|y| {
            let z = star_elem(x, y);
            c.by_vector(&z.vector).is_some_and(|w| w.perm == z.perm)
        })
    })
}

/// `pi_e = pi_u = I` and every other permutation is fixed-point-free.
pub fn is_full_propelinear(c: &PropelinearCode) -> bool {
    let n = c.length;
    let (e, u) = (BitVector::zeros(n), BitVector::ones(n));
    for x in &c.elements {
        if x.vector == e || x.vector == u {
            if !x.perm.is_identity() {
                return false;
            }
        } else if x.perm.has_fixed_point() {
            return false;
        }
    }
    c.contains(&e) && c.contains(&u)
}

/// Number of distinct permutations among the codewords.
pub fn associated_group_order(c: &PropelinearCode) -> usize {
    c.elements.iter().map(|x| &x.perm).collect::<HashSet<_>>().len()
}

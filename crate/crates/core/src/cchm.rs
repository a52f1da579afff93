//! Circulant complex Hadamard matrices over `{1, i, -1, -i}` and their
//! correspondence with `2t4u` codes.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::{assemble, Candidate, Family};
use crate::gf2::BitVector;
use crate::hadamard::is_hadamard_matrix;
use crate::propelinear::{Label, PropelinearCode};

/// First row of a circulant matrix, as exponents `c_j` of `i^{c_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuaternaryRow {
    exps: Vec<u8>,
}

impl QuaternaryRow {
    /// Exponents are reduced mod 4; the length must be even and positive.
    pub fn new(exps: Vec<u8>) -> Result<Self> {
        if exps.is_empty() || exps.len() % 2 == 1 {
            return Err(Error::InvalidInput(format!("row length {} is not even and positive", exps.len())));
        }
        Ok(Self {
            exps: exps.into_iter().map(|c| c % 4).collect(),
        })
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }
}

const SYMBOLS: [&str; 4] = ["1", "i", "-1", "-i"];

impl fmt::Display for QuaternaryRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.exps.iter().map(|&c| SYMBOLS[c as usize]).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for QuaternaryRow {
    type Err = Error;

    /// Symbols `1, i, -1, -i`, or exponent digits `0..3`. A row made only of
    /// `1`s is read as symbols; a row of digits needs at least one of 0, 2, 3.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let tokens: Vec<&str> = if s.contains(',') {
            s.split(',').map(str::trim).collect()
        } else if s.chars().all(|c| c.is_ascii_digit()) {
            s.split("").filter(|x| !x.is_empty()).collect()
        } else {
            s.split_whitespace().collect()
        };
        let digits = tokens.iter().all(|t| matches!(*t, "0" | "1" | "2" | "3"))
            && tokens.iter().any(|t| matches!(*t, "0" | "2" | "3"));
        let exps = tokens
            .iter()
            .map(|tok| {
                if digits {
                    return Ok(tok.parse::<u8>().expect("digit token"));
                }
                match tok.replace(' ', "").as_str() {
                    "1" | "+1" => Ok(0),
                    "i" | "+i" => Ok(1),
                    "-1" => Ok(2),
                    "-i" => Ok(3),
                    other => Err(Error::Parse(format!("bad row entry {other:?}"))),
                }
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(exps)
    }
}

/// `i^c` as a Gaussian integer.
fn unit(c: u8) -> (i64, i64) {
    match c % 4 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    }
}

/// `true` iff every nontrivial periodic autocorrelation of the row vanishes.
pub fn is_cchm(row: &QuaternaryRow) -> bool {
    let c = &row.exps;
    let m = c.len();
    (1..m).all(|s| {
        let (mut re, mut im) = (0i64, 0i64);
        for j in 0..m {
            let (x, y) = unit(c[j].wrapping_add(4 - c[(j + s) % m]));
            re += x;
            im += y;
        }
        re == 0 && im == 0
    })
}

/// The `2m x 2m` real matrix of blocks `C psi(i^c)`.
pub fn real_matrix(row: &QuaternaryRow) -> Vec<Vec<i8>> {
    // C psi(i)^c for c = 0..3, with C = [[1,1],[1,-1]], psi(i) = [[0,-1],[1,0]]
    const BLOCKS: [[[i8; 2]; 2]; 4] = [
        [[1, 1], [1, -1]],
        [[1, -1], [-1, -1]],
        [[-1, -1], [-1, 1]],
        [[-1, 1], [1, 1]],
    ];
    let m = row.len();
    let mut out = vec![vec![0i8; 2 * m]; 2 * m];
    for j in 0..m {
        for l in 0..m {
            let blk = &BLOCKS[row.exps[(l + m - j) % m] as usize];
            for (r, brow) in blk.iter().enumerate() {
                for (s, &x) in brow.iter().enumerate() {
                    out[2 * j + r][2 * l + s] = x;
                }
            }
        }
    }
    out
}

/// The binary Hadamard code of the doubled real matrix: rows of its
/// normalized form (`+1 -> 0`, `-1 -> 1`) followed by their complements.
pub fn cchm_to_code(row: &QuaternaryRow) -> Result<Vec<BitVector>> {
    if !is_cchm(row) {
        return Err(Error::NotCchm);
    }
    let mut h = real_matrix(row);
    if !is_hadamard_matrix(&h)? {
        return Err(Error::NotCchm);
    }
    let n = h.len();
    let first = h[0].clone();
    for r in h.iter_mut() {
        for (x, &s) in r.iter_mut().zip(&first) {
            *x *= s;
        }
    }
    for r in h.iter_mut() {
        let s = r[0];
        for x in r.iter_mut() {
            *x *= s;
        }
    }
    let rows: Vec<BitVector> = h
        .iter()
        .map(|r| BitVector::from_bits(&r.iter().map(|&x| x < 0).collect::<Vec<_>>()))
        .collect();
    let mut code = rows.clone();
    code.extend(rows.iter().map(BitVector::complement));
    debug_assert_eq!(code.len(), 2 * n);
    Ok(code)
}

/// Reads the row off the relative difference set `D = {x : x_1 = 0}`.
///
/// For each `j`, the exponents `k` with `a^j b^k` in `D` must be a pair
/// `{c, c + 1}` mod 4; the row entry is `c`.
pub fn code_to_cchm(code: &PropelinearCode) -> Result<QuaternaryRow> {
    if code.family() != Family::TwoT4U {
        return Err(Error::InvalidInput(format!("family {} is not 2t4u", code.family())));
    }
    let m = 2 * code.t();
    let mut exps = Vec::with_capacity(m);
    for j in 0..m {
        let mut hits = Vec::new();
        for kk in 0..4u32 {
            let label = Label::new(j as u32, kk % 2, kk / 2);
            let x = code.by_label(label).ok_or_else(|| Error::MalformedCosetHit {
                coset: j,
                detail: format!("label {label} missing"),
            })?;
            if !x.vector.get(1) {
                hits.push(kk as u8);
            }
        }
        let c = match hits.as_slice() {
            [0, 1] => 0,
            [1, 2] => 1,
            [2, 3] => 2,
            [0, 3] => 3,
            other => {
                return Err(Error::MalformedCosetHit {
                    coset: j,
                    detail: format!("exponents {other:?} are not a consecutive pair"),
                })
            }
        };
        exps.push(c);
    }
    QuaternaryRow::new(exps)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All rows reachable from `row` by shift, global unit, conjugation,
/// decimation, and modulation by `i^{zj}` with `z m = 0 mod 4`.
pub fn equivalence_class(row: &QuaternaryRow) -> HashSet<QuaternaryRow> {
    let c = &row.exps;
    let m = c.len();
    let mut out = HashSet::new();
    let mods: Vec<u8> = (0..4u8).filter(|z| (*z as usize * m) % 4 == 0).collect();
    for dec in (1..m.max(2)).filter(|&d| gcd(d, m) == 1) {
        for shift in 0..m {
            for conj in [false, true] {
                for k in 0..4u8 {
                    for &z in &mods {
                        let exps = (0..m)
                            .map(|j| {
                                let x = c[(dec * j + shift) % m];
                                let x = if conj { (4 - x) % 4 } else { x };
                                (x + k + ((z as usize * j) % 4) as u8) % 4
                            })
                            .collect();
                        out.insert(QuaternaryRow { exps });
                    }
                }
            }
        }
    }
    out
}

pub fn cchm_equivalent(r1: &QuaternaryRow, r2: &QuaternaryRow) -> bool {
    r1.len() == r2.len() && equivalence_class(r1).contains(r2)
}

/// Doubles a circulant Hadamard code: `a` of length `4t` whose powers
/// under the single `4t`-cycle give an Hadamard code becomes the `2t4u`
/// code of length `8t` generated by `(a, a)`, whose companion is `(e, u)`.
pub fn sylvester_double(a: &BitVector) -> Result<PropelinearCode> {
    let n = a.len();
    if n == 0 || n % 4 != 0 {
        return Err(Error::InvalidInput(format!("length {n} is not a positive multiple of 4")));
    }
    let t = n / 4;
    assemble(Family::Cyclic, t, &Candidate::Generator(a.clone()))
        .map_err(|r| Error::InvalidInput(format!("{a} does not give a circulant Hadamard code: {r}")))?;
    assemble(Family::TwoT4U, 2 * t, &Candidate::Generator(a.concat(a)))
        .map_err(|r| Error::InvalidInput(format!("doubled code rejected: {r}")))
}

//! Exhaustive search over generator candidates, deduplication and the
//! reproduction of the rank/kernel table.
//!
//! Candidates are enumerated in lexicographic order of their bitstrings.
//! The space is split into chunks by the leading `chunk_bits` coordinates;
//! chunks are processed in parallel and merged by chunk index, so output is
//! independent of the worker count.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::{self, Write as _};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{assemble, derive_a_from_d, derive_b_from_a_quaternion, Candidate, Family, Reject};
use crate::gf2::BitVector;
use crate::hadamard::{profile, CodeProfile};
use crate::propelinear::PropelinearCode;

/// Candidate count above which a run needs `deep`.
pub const DEEP_CANDIDATE_LIMIT: u128 = 1 << 30;
/// Code length from which a run needs `deep`.
pub const DEEP_LENGTH: usize = 32;
/// Longest code length the word-level enumerator handles.
pub const MAX_SEARCH_LENGTH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    First,
    All,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Mode::First),
            "all" => Ok(Mode::All),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Exact size of the filtered candidate stream.
pub fn count_candidates(family: Family, t: usize) -> u128 {
    let t64 = t as u64;
    match family {
        Family::FourTU2 | Family::TwoT22U | Family::TwoT4U => {
            let parity = u64::from(family == Family::FourTU2);
            (0..=2 * t64)
                .filter(|w| w % 2 == parity)
                .map(|w| binom(2 * t64, w) * binom(2 * t64, 2 * t64 - w))
                .sum()
        }
        Family::TQU => {
            if t % 2 == 0 {
                return 0;
            }
            // four residue classes of size t, each of even weight, total 2t
            let mut ways = vec![0u128; 2 * t + 1];
            ways[0] = 1;
            for _ in 0..4 {
                let mut next = vec![0u128; 2 * t + 1];
                for (have, &count) in ways.iter().enumerate() {
                    for w in (0..=t).step_by(2) {
                        if have + w <= 2 * t {
                            next[have + w] += count * binom(t64, w as u64);
                        }
                    }
                }
                ways = next;
            }
            ways[2 * t]
        }
        Family::Cyclic => binom(4 * t64, 2 * t64),
    }
}

/// Whether a full run of this cell needs the `deep` flag.
pub fn needs_deep(family: Family, t: usize) -> bool {
    count_candidates(family, t) > DEEP_CANDIDATE_LIMIT || 4 * t >= DEEP_LENGTH
}

/// Word masks and permutations of one family, acting on packed words
/// (bit `i - 1` holds coordinate `i`).
#[derive(Clone, Copy, Debug)]
struct Shape {
    family: Family,
    t: usize,
    n: u32,
    full: u64,
    half: u64,
}

impl Shape {
    fn new(family: Family, t: usize) -> Self {
        let n = 4 * t as u32;
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let half = (1u64 << (2 * t)) - 1;
        Self {
            family,
            t,
            n,
            full,
            half,
        }
    }

    fn h(&self) -> u32 {
        self.n / 2
    }

    /// Each half rotated by `j` toward higher coordinates (`pi_a^j`).
    fn rot_halves(&self, v: u64, j: u32) -> u64 {
        let h = self.h();
        let j = j % h;
        if j == 0 {
            return v;
        }
        let rot = |x: u64| ((x << j) | (x >> (h - j))) & self.half;
        rot(v & self.half) | (rot(v >> h) << h)
    }

    fn swap_halves(&self, v: u64) -> u64 {
        let h = self.h();
        (v >> h) | ((v & self.half) << h)
    }

    /// Rotation by `s` coordinates over the whole word.
    fn rot(&self, v: u64, s: u32) -> u64 {
        let s = s % self.n;
        if s == 0 {
            return v;
        }
        ((v << s) | (v >> (self.n - s))) & self.full
    }

    fn class_mask(&self, r: u32) -> u64 {
        (0..self.t as u32).fold(0, |m, i| m | (1u64 << (4 * i + r)))
    }

    /// The cheap stream filter.
    fn admits(&self, w: u64) -> bool {
        if w.count_ones() as usize != 2 * self.t {
            return false;
        }
        match self.family {
            Family::FourTU2 => (w & self.half).count_ones() % 2 == 1,
            Family::TwoT22U | Family::TwoT4U => (w & self.half).count_ones() % 2 == 0,
            Family::TQU => (0..4).all(|r| (w & self.class_mask(r)).count_ones() % 2 == 0),
            Family::Cyclic => true,
        }
    }
}

fn word(v: &BitVector) -> u64 {
    v.as_word().expect("search lengths fit one word")
}

/// Converts a most-significant-first index into the packed word.
fn lex_to_word(lex: u64, n: u32) -> u64 {
    lex.reverse_bits() >> (64 - n)
}

/// Candidate words of one chunk: those whose leading `bits` coordinates
/// spell `chunk`, in lexicographic order, after the stream filter.
fn chunk_words(shape: Shape, bits: u32, chunk: u64) -> impl Iterator<Item = u64> {
    let n = shape.n;
    let m = n - bits;
    let weight = 2 * shape.t as u32;
    let prefix_weight = chunk.count_ones();
    let need = weight.checked_sub(prefix_weight).filter(|&k| k <= m);
    let limit: u128 = 1u128 << m;
    let mut next: Option<u128> = need.map(|k| (1u128 << k) - 1);
    std::iter::from_fn(move || {
        let x = next?;
        next = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            let y = (((r ^ x) >> 2) / c) | r;
            (y < limit).then_some(y)
        };
        Some((u128::from(chunk) << m | x) as u64)
    })
    .map(move |lex| lex_to_word(lex, n))
    .filter(move |&w| shape.admits(w))
}

/// The full filtered stream in lexicographic order.
pub fn candidate_stream(family: Family, t: usize) -> Result<impl Iterator<Item = BitVector>> {
    family.check_t(t)?;
    let n = 4 * t;
    if n > MAX_SEARCH_LENGTH {
        return Err(Error::InvalidInput(format!("search supports lengths up to {MAX_SEARCH_LENGTH}")));
    }
    let shape = Shape::new(family, t);
    Ok(chunk_words(shape, 0, 0).map(move |w| BitVector::from_word(w, n)))
}

/// Leading-coordinate width used to split the space among `workers`.
pub fn chunk_bits(workers: usize, t: usize) -> u32 {
    let n = 4 * t as u32;
    let want = (workers.max(1) * 64).next_power_of_two().trailing_zeros().max(8);
    want.min(n - 1)
}

/// Companion `b` of a two-generator family on packed words.
fn fast_b(shape: &Shape, a: u64) -> u64 {
    let h = shape.h();
    let x = (a ^ (a >> h)) & shape.half;
    // y_i = xor of x at positions >= i
    let mut y = x;
    let mut s = 1;
    while s < 64 {
        y ^= y >> s;
        s <<= 1;
    }
    let lo = (y >> 1) & shape.half;
    let hi = if shape.family == Family::TwoT4U { lo ^ shape.half } else { lo };
    lo | (hi << h)
}

/// The rejection `assemble` would report, computed on packed words; `Ok`
/// means the candidate needs the full assembly.
fn fast_screen(shape: &Shape, cand: &Candidate) -> std::result::Result<(), Reject> {
    let t = shape.t;
    let two_t = 2 * t as u32;
    let full = shape.full;
    let n = shape.n;
    // elements other than e, u, the powers and their complements; a vector
    // equal to e or u collides before any weight is looked at
    let elem_check = |elems: &mut dyn Iterator<Item = u64>| -> std::result::Result<(), Reject> {
        let mut light = false;
        for w in elems {
            if w == 0 || w == full {
                return Err(Reject::Collision);
            }
            light |= w.count_ones() != two_t;
        }
        if light {
            Err(Reject::NotHadamard)
        } else {
            Ok(())
        }
    };
    match (shape.family, cand) {
        (Family::TQU, Candidate::Quaternion { d, a_free, b_seed }) => {
            let dw = word(d);
            if dw.count_ones() != two_t {
                return Err(Reject::Degenerate);
            }
            let av = derive_a_from_d(d, *a_free, t).map_err(|e| Reject::Malformed(e.to_string()))?;
            let bv = derive_b_from_a_quaternion(&av, d, *b_seed, t)
                .map_err(|e| Reject::Malformed(e.to_string()))?
                .ok_or(Reject::Companion)?;
            let (aw, bw) = (word(&av), word(&bv));
            if aw.count_ones() != two_t || bw.count_ones() != two_t {
                return Err(Reject::Companion);
            }
            let swap1 = |v: u64| ((v & 0x5555_5555_5555_5555) << 1) | ((v >> 1) & 0x5555_5555_5555_5555);
            let swap2 = |v: u64| ((v & 0x3333_3333_3333_3333) << 2) | ((v >> 2) & 0x3333_3333_3333_3333);
            let mut powers = Vec::with_capacity(t);
            powers.push(0u64);
            let mut p = 0u64;
            for j in 1..t {
                p = dw ^ shape.rot(p, 4);
                if p.count_ones() != two_t {
                    return Err(Reject::PowerWeight { power: j });
                }
                powers.push(p);
            }
            if dw ^ shape.rot(p, 4) != 0 {
                return Err(Reject::Relation("d^t = e"));
            }
            let ab = aw ^ swap1(bw);
            let checks: [(&'static str, bool); 5] = [
                ("a^2 = u", aw ^ swap1(aw) == full),
                ("b^2 = u", bw ^ swap2(bw) == full),
                ("aba = b", ab ^ swap1(swap2(aw)) == bw),
                ("da = ad", dw ^ shape.rot(aw, 4) == aw ^ swap1(dw)),
                ("db = bd", dw ^ shape.rot(bw, 4) == bw ^ swap2(dw)),
            ];
            if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
                return Err(Reject::Relation(name));
            }
            let mut elems = powers.iter().enumerate().flat_map(|(j, &pj)| {
                [0, aw, bw, ab]
                    .into_iter()
                    .enumerate()
                    .filter(move |&(k, _)| j + k > 0)
                    .map(move |(_, q)| pj ^ shape.rot(q, 4 * j as u32))
            });
            elem_check(&mut elems)
        }
        (Family::FourTU2 | Family::TwoT22U | Family::TwoT4U, Candidate::Generator(a)) => {
            let aw = word(a);
            if aw.count_ones() != two_t {
                return Err(Reject::Degenerate);
            }
            let bw = fast_b(shape, aw);
            if bw.count_ones() != two_t {
                return Err(Reject::Companion);
            }
            let h = shape.h();
            let mut powers = Vec::with_capacity(h as usize);
            powers.push(0u64);
            let mut p = 0u64;
            for j in 1..h {
                p = aw ^ shape.rot_halves(p, 1);
                if p.count_ones() != two_t {
                    return Err(Reject::PowerWeight { power: j as usize });
                }
                powers.push(p);
            }
            let top = aw ^ shape.rot_halves(p, 1);
            let (want, name) = if shape.family == Family::FourTU2 {
                (full, "a^2t = u")
            } else {
                (0, "a^2t = e")
            };
            if top != want {
                return Err(Reject::Relation(name));
            }
            let b2 = bw ^ shape.swap_halves(bw);
            let (want, name) = if shape.family == Family::TwoT4U {
                (full, "b^2 = u")
            } else {
                (0, "b^2 = e")
            };
            if b2 != want {
                return Err(Reject::Relation(name));
            }
            if aw ^ shape.rot_halves(bw, 1) != bw ^ shape.swap_halves(aw) {
                return Err(Reject::Relation("ab = ba"));
            }
            elem_check(&mut powers.iter().enumerate().map(|(j, &pj)| pj ^ shape.rot_halves(bw, j as u32)))
        }
        (Family::Cyclic, Candidate::Generator(a)) => {
            let aw = word(a);
            if aw.count_ones() != two_t {
                return Err(Reject::Degenerate);
            }
            let mut p = 0u64;
            for j in 1..n {
                p = aw ^ shape.rot(p, 1);
                if p.count_ones() != two_t {
                    return Err(Reject::PowerWeight { power: j as usize });
                }
            }
            if aw ^ shape.rot(p, 1) != 0 {
                return Err(Reject::Relation("a^4t = e"));
            }
            Ok(())
        }
        _ => Err(Reject::Malformed("candidate kind does not match family".into())),
    }
}

/// Reject keys in reporting order.
pub const REJECT_KEYS: [&str; 8] = [
    "malformed",
    "degenerate",
    "companion",
    "power_weight",
    "relation",
    "collision",
    "not_full_propelinear",
    "not_hadamard",
];

fn reject_slot(r: &Reject) -> usize {
    REJECT_KEYS.iter().position(|k| *k == r.key()).expect("every reject key is listed")
}

/// An accepted code with its profile.
#[derive(Clone, Debug)]
pub struct FoundCode {
    pub candidate: Candidate,
    pub profile: CodeProfile,
    /// Sorted codewords; the deduplication key.
    pub codewords: Vec<BitVector>,
}

impl FoundCode {
    fn new(candidate: Candidate, code: &PropelinearCode) -> Result<Self> {
        Ok(Self {
            candidate,
            profile: profile(code)?,
            codewords: code.sorted_vectors(),
        })
    }
}

/// Keeps the first representative of every distinct code set.
pub fn dedup(results: Vec<FoundCode>) -> Vec<FoundCode> {
    let mut seen = HashSet::new();
    results
        .into_iter()
        .filter(|r| seen.insert(r.codewords.clone()))
        .collect()
}

/// A slice of the candidate space: chunks `range` of width `chunk_bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchTask {
    pub family: Family,
    pub t: usize,
    pub chunk_bits: u32,
    pub range: Range<u64>,
    pub mode: Mode,
}

impl SearchTask {
    /// The whole space, split for `workers`.
    pub fn full(family: Family, t: usize, mode: Mode, workers: usize) -> Self {
        let bits = chunk_bits(workers, t);
        Self {
            family,
            t,
            chunk_bits: bits,
            range: 0..(1u64 << bits),
            mode,
        }
    }

    /// Splits the range into `parts` contiguous subtasks.
    pub fn split(&self, parts: usize) -> Vec<SearchTask> {
        let len = self.range.end - self.range.start;
        let parts = (parts.max(1) as u64).min(len.max(1));
        (0..parts)
            .map(|i| {
                let lo = self.range.start + len * i / parts;
                let hi = self.range.start + len * (i + 1) / parts;
                SearchTask {
                    range: lo..hi,
                    ..self.clone()
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            checkpoint: None,
        }
    }
}

/// Counts of a chunk or of a whole run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub examined: u64,
    pub accepted: u64,
    pub rejected: BTreeMap<String, u64>,
}

impl Counts {
    fn from_slots(examined: u64, accepted: u64, slots: &[u64; 8]) -> Self {
        let rejected = REJECT_KEYS
            .iter()
            .zip(slots)
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k.to_string(), c))
            .collect();
        Self {
            examined,
            accepted,
            rejected,
        }
    }

    fn absorb(&mut self, other: &Counts) {
        self.examined += other.examined;
        self.accepted += other.accepted;
        for (k, v) in &other.rejected {
            *self.rejected.entry(k.clone()).or_default() += v;
        }
    }
}

/// One checkpoint line: a finished chunk.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct ChunkRecord {
    chunk: u64,
    counts: Counts,
    hits: Vec<HitRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct HitRecord {
    v: BitVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a_free: Option<(bool, bool)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b_seed: Option<bool>,
}

impl HitRecord {
    fn of(c: &Candidate) -> Self {
        match c {
            Candidate::Generator(v) => Self {
                v: v.clone(),
                a_free: None,
                b_seed: None,
            },
            Candidate::Quaternion { d, a_free, b_seed } => Self {
                v: d.clone(),
                a_free: Some(*a_free),
                b_seed: Some(*b_seed),
            },
        }
    }

    fn candidate(&self) -> Candidate {
        match (self.a_free, self.b_seed) {
            (Some(a_free), Some(b_seed)) => Candidate::Quaternion {
                d: self.v.clone(),
                a_free,
                b_seed,
            },
            _ => Candidate::Generator(self.v.clone()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
struct CheckpointHeader {
    family: String,
    t: usize,
    chunk_bits: u32,
    mode: Mode,
}

struct ChunkOutcome {
    chunk: u64,
    counts: Counts,
    hits: Vec<Candidate>,
}

/// Result of a run. Serializes to the summary object; wall time is kept
/// out of the JSON so that identical runs print identical bytes.
#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub family: Family,
    pub t: usize,
    pub mode: Mode,
    pub candidates: u128,
    #[serde(flatten)]
    pub counts: Counts,
    pub distinct: usize,
    pub profiles: Vec<(usize, usize)>,
    #[serde(skip)]
    pub codes: Vec<FoundCode>,
    /// Accepted `2t4u` codes with `t > 8`, which would contradict the
    /// non-existence conjecture for that family.
    pub conjecture_counterexamples: usize,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SearchResult {
    pub fn profile_set(&self) -> BTreeSet<(usize, usize)> {
        self.profiles.iter().copied().collect()
    }
}

fn process_chunk(shape: Shape, bits: u32, chunk: u64, mode: Mode, best: &AtomicU64) -> ChunkOutcome {
    let n = shape.n as usize;
    let mut slots = [0u64; 8];
    let mut examined = 0u64;
    let mut hits = Vec::new();
    'words: for w in chunk_words(shape, bits, chunk) {
        if mode == Mode::First && best.load(Ordering::Relaxed) < chunk {
            break;
        }
        let v = BitVector::from_word(w, n);
        let cands = if shape.family == Family::TQU {
            Candidate::quaternion_choices(&v)
        } else {
            vec![Candidate::Generator(v)]
        };
        for cand in cands {
            examined += 1;
            let verdict = fast_screen(&shape, &cand).and_then(|()| assemble(shape.family, shape.t, &cand).map(|_| ()));
            match verdict {
                Ok(()) => {
                    hits.push(cand);
                    if mode == Mode::First {
                        best.fetch_min(chunk, Ordering::Relaxed);
                        break 'words;
                    }
                }
                Err(r) => slots[reject_slot(&r)] += 1,
            }
        }
    }
    ChunkOutcome {
        chunk,
        counts: Counts::from_slots(examined, hits.len() as u64, &slots),
        hits,
    }
}

fn load_checkpoint(path: &Path, header: &CheckpointHeader) -> Result<BTreeMap<u64, ChunkRecord>> {
    let mut done = BTreeMap::new();
    if !path.exists() {
        return Ok(done);
    }
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let Some(first) = lines.next().transpose()? else {
        return Ok(done);
    };
    let found: CheckpointHeader =
        serde_json::from_str(&first).map_err(|e| Error::Parse(format!("checkpoint header: {e}")))?;
    if &found != header {
        return Err(Error::InvalidInput(format!(
            "checkpoint {} belongs to a different run ({first})",
            path.display()
        )));
    }
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // a torn final line from an interrupted run is dropped
        let Ok(rec) = serde_json::from_str::<ChunkRecord>(&line) else {
            continue;
        };
        done.insert(rec.chunk, rec);
    }
    Ok(done)
}

/// Runs `task` on a pool of `opts.workers` threads.
///
/// With a checkpoint path, finished chunks are appended as JSON lines and
/// chunks already present in the file are not searched again.
pub fn run_search(task: &SearchTask, opts: &SearchOptions) -> Result<SearchResult> {
    let start = Instant::now();
    let (family, t) = (task.family, task.t);
    family.check_t(t)?;
    let n = 4 * t;
    if n > MAX_SEARCH_LENGTH {
        return Err(Error::InvalidInput(format!("search supports lengths up to {MAX_SEARCH_LENGTH}")));
    }
    if task.chunk_bits as usize >= n || task.range.end > 1u64 << task.chunk_bits {
        return Err(Error::InvalidInput("chunk range exceeds the candidate space".into()));
    }
    let shape = Shape::new(family, t);
    let header = CheckpointHeader {
        family: family.tag().to_string(),
        t,
        chunk_bits: task.chunk_bits,
        mode: task.mode,
    };
    let mut resumed = BTreeMap::new();
    let mut sink = None;
    if let Some(path) = &opts.checkpoint {
        resumed = load_checkpoint(path, &header)?;
        let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        if fresh {
            writeln!(f, "{}", serde_json::to_string(&header).expect("header serializes"))?;
        }
        sink = Some(Mutex::new(f));
    }

    let best = AtomicU64::new(u64::MAX);
    if task.mode == Mode::First {
        if let Some((&c, _)) = resumed.iter().find(|(_, r)| !r.hits.is_empty()) {
            best.store(c, Ordering::Relaxed);
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let todo: Vec<u64> = task.range.clone().filter(|c| !resumed.contains_key(c)).collect();
    let fresh: Vec<std::result::Result<ChunkOutcome, Error>> = pool.install(|| {
        todo.par_iter()
            .map(|&chunk| {
                let out = process_chunk(shape, task.chunk_bits, chunk, task.mode, &best);
                if let Some(sink) = &sink {
                    let skipped = task.mode == Mode::First && best.load(Ordering::Relaxed) < chunk;
                    if !skipped {
                        let rec = ChunkRecord {
                            chunk,
                            counts: out.counts.clone(),
                            hits: out.hits.iter().map(HitRecord::of).collect(),
                        };
                        let line = serde_json::to_string(&rec).expect("records serialize");
                        let mut f = sink.lock().expect("checkpoint lock");
                        writeln!(f, "{line}")?;
                        f.flush()?;
                    }
                }
                Ok(out)
            })
            .collect()
    });

    let mut outcomes: Vec<ChunkOutcome> = resumed
        .into_values()
        .filter(|r| task.range.contains(&r.chunk))
        .map(|r| ChunkOutcome {
            chunk: r.chunk,
            hits: r.hits.iter().map(HitRecord::candidate).collect(),
            counts: r.counts,
        })
        .collect();
    for o in fresh {
        outcomes.push(o?);
    }
    outcomes.sort_by_key(|o| o.chunk);
    if task.mode == Mode::First {
        let cut = best.load(Ordering::Relaxed);
        outcomes.retain(|o| o.chunk <= cut);
    }

    let mut counts = Counts::default();
    let mut found = Vec::new();
    for o in &outcomes {
        counts.absorb(&o.counts);
        for cand in &o.hits {
            let code = assemble(family, t, cand)
                .map_err(|r| Error::InvalidInput(format!("recorded hit no longer assembles: {r}")))?;
            found.push(FoundCode::new(cand.clone(), &code)?);
        }
    }
    let codes = dedup(found);
    let profiles: BTreeSet<(usize, usize)> = codes.iter().map(|c| c.profile.rk()).collect();
    let conjecture_counterexamples = if family == Family::TwoT4U && t > 8 { codes.len() } else { 0 };
    Ok(SearchResult {
        family,
        t,
        mode: task.mode,
        candidates: count_candidates(family, t),
        counts,
        distinct: codes.len(),
        profiles: profiles.into_iter().collect(),
        codes,
        conjecture_counterexamples,
        wall_time: start.elapsed(),
    })
}

/// Provenance of one table cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    /// Searched; codes exist.
    Found,
    /// Searched exhaustively; no codes.
    SearchedNone,
    /// Ruled out without search.
    Analytic,
    /// The family is not defined at this `t`.
    NotApplicable,
    /// Too large for the configured budget.
    SkippedBudget,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Found => "searched",
            CellStatus::SearchedNone => "searched",
            CellStatus::Analytic => "analytic",
            CellStatus::NotApplicable => "n/a",
            CellStatus::SkippedBudget => "skipped-budget",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub family: Family,
    pub t: usize,
    pub status: CellStatus,
    pub profiles: BTreeSet<(usize, usize)>,
}

impl Cell {
    /// Short rendering: the `(r,k)` pairs, `x` for none, `-` for undefined.
    pub fn entry(&self) -> String {
        match self.status {
            CellStatus::Found => self
                .profiles
                .iter()
                .map(|(r, k)| format!("({r},{k})"))
                .collect::<Vec<_>>()
                .join(" "),
            CellStatus::SearchedNone | CellStatus::Analytic => "x".into(),
            CellStatus::NotApplicable => "-".into(),
            CellStatus::SkippedBudget => "?".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Clone, Debug, Default)]
pub struct TableOptions {
    pub workers: usize,
    pub deep: bool,
}

fn is_square(t: usize) -> bool {
    let r = (t as f64).sqrt() as usize;
    (r.saturating_sub(1)..=r + 1).any(|x| x * x == t)
}

/// Cells settled without search: odd `t > 1` for the two-generator families,
/// non-square `t` for `2t22u`, even `t` for `tQu`.
pub fn analytic_status(family: Family, t: usize) -> Option<CellStatus> {
    match family {
        Family::TQU if t % 2 == 0 => Some(CellStatus::NotApplicable),
        Family::TQU | Family::Cyclic => None,
        _ if t > 1 && t % 2 == 1 => Some(CellStatus::Analytic),
        Family::TwoT22U if !is_square(t) => Some(CellStatus::Analytic),
        _ => None,
    }
}

/// Searches or short-circuits one cell.
pub fn table_cell(family: Family, t: usize, opts: &TableOptions) -> Result<Cell> {
    let status = analytic_status(family, t);
    if let Some(status) = status {
        return Ok(Cell {
            family,
            t,
            status,
            profiles: BTreeSet::new(),
        });
    }
    if (needs_deep(family, t) && !opts.deep) || 4 * t > MAX_SEARCH_LENGTH {
        return Ok(Cell {
            family,
            t,
            status: CellStatus::SkippedBudget,
            profiles: BTreeSet::new(),
        });
    }
    let task = SearchTask::full(family, t, Mode::All, opts.workers);
    let res = run_search(
        &task,
        &SearchOptions {
            workers: opts.workers,
            checkpoint: None,
        },
    )?;
    let profiles = res.profile_set();
    Ok(Cell {
        family,
        t,
        status: if profiles.is_empty() {
            CellStatus::SearchedNone
        } else {
            CellStatus::Found
        },
        profiles,
    })
}

/// Rows `t = 1..=t_max`, columns in [`Family::TABLE`] order.
pub fn reproduce_table(t_max: usize, opts: &TableOptions) -> Result<Table> {
    let mut rows = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        let row = Family::TABLE
            .iter()
            .map(|&f| table_cell(f, t, opts))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(Table { rows })
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,family,status,profiles\n");
        for cell in self.rows.iter().flatten() {
            let status = match cell.status {
                CellStatus::Found => "found",
                CellStatus::SearchedNone => "searched-none",
                other => other.as_str(),
            };
            let profiles = cell
                .profiles
                .iter()
                .map(|(r, k)| format!("{r}:{k}"))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(out, "{},{},{},{}", cell.t, cell.family, status, profiles).unwrap();
        }
        out
    }
}

impl fmt::Display for Table {
    /// Aligned text with a provenance tag per cell.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|c| format!("{} [{}]", c.entry(), c.status.as_str())).collect())
            .collect();
        let mut widths: Vec<usize> = Family::TABLE.iter().map(|f| f.tag().len()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        write!(f, "{:>3}", "t")?;
        for (fam, w) in Family::TABLE.iter().zip(&widths) {
            write!(f, "  {:<w$}", fam.tag(), w = w)?;
        }
        writeln!(f)?;
        for (row, cells) in self.rows.iter().zip(&cells) {
            write!(f, "{:>3}", row[0].t)?;
            for (c, w) in cells.iter().zip(&widths) {
                write!(f, "  {:<w$}", c, w = w)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

//! Code properties: rank, self-duality, exhaustive weight distribution,
//! minimum distance and the enumerator parameters of length-72 self-dual codes.

pub mod necklace;
pub mod walk;

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::construct::{self, GenMatrix, CODE_LENGTH};
use crate::error::{Error, Result};
use crate::gf2::{BitPoly, BitVec};

use necklace::{orbit_walk, OrbitResult};
use walk::{WalkBasis, WalkConfig, WalkResult};

/// Runs `f` on a dedicated pool of `threads` workers, or on the current rayon
/// pool when `threads` is 0.
pub fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

/// Rank over GF(2) by XOR row reduction.
pub fn rank_gf2(rows: &[BitVec]) -> usize {
    let bits: Vec<u128> = rows.iter().map(|r| r.bits()).collect();
    walk::echelon(&bits).len()
}

/// Every pair of rows (each row with itself included) is orthogonal and the
/// rows span exactly half the length.
pub fn is_self_dual(g: &GenMatrix) -> bool {
    let rows = g.rows();
    let orthogonal = rows
        .iter()
        .enumerate()
        .all(|(i, a)| rows[i..].iter().all(|b| !a.dot(b)));
    orthogonal && g.width().is_multiple_of(2) && rank_gf2(rows) == (g.width() / 2) as usize
}

/// Codeword counts `A_0..A_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightDist {
    counts: Vec<u64>,
}

impl WeightDist {
    /// Validates that `A_0 = 1` and that the total is a power of two.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Distribution("no counters".into()));
        }
        if counts[0] != 1 {
            return Err(Error::Distribution(format!(
                "A_0 = {}, expected 1",
                counts[0]
            )));
        }
        let total = counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::Distribution("total overflows 64 bits".into()))?;
        if !total.is_power_of_two() {
            return Err(Error::Distribution(format!(
                "total {total} is not a power of two"
            )));
        }
        Ok(WeightDist { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of codewords of weight `w`; zero outside `0..=n`.
    pub fn get(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    /// Code length `n`.
    pub fn length(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `log2` of the code size.
    pub fn dimension(&self) -> u32 {
        self.total().trailing_zeros()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.length();
        (0..=n).all(|i| self.counts[i] == self.counts[n - i])
    }

    pub fn odd_weights_vanish(&self) -> bool {
        self.counts.iter().skip(1).step_by(2).all(|&c| c == 0)
    }

    /// Smallest positive weight present, `None` for the zero code.
    pub fn min_nonzero_weight(&self) -> Option<u32> {
        (1..self.counts.len())
            .find(|&w| self.counts[w] > 0)
            .map(|w| w as u32)
    }

    /// JSON array of decimal strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("string array serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// SHA-256 of [`WeightDist::to_json`], lowercase hex.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_json().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for WeightDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nonzero: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(w, c)| format!("A{w}={c}"))
            .collect();
        write!(f, "WeightDist[{}]", nonzero.join(" "))
    }
}

impl Serialize for WeightDist {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.counts.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for WeightDist {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let strings = Vec::<String>::deserialize(deserializer)?;
        let counts = strings
            .iter()
            .map(|s| {
                if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(D::Error::custom(format!("counter {s:?} is not decimal")));
                }
                s.parse::<u64>().map_err(D::Error::custom)
            })
            .collect::<Result<Vec<_>, _>>()?;
        WeightDist::from_counts(counts).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Gray-code walk over every message.
    #[default]
    Full,
    /// One message per rotation class; two-circulant codes only.
    OrbitReduced,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    pub mode: Mode,
    /// Worker threads; 0 runs on the current rayon pool (all cores by default).
    pub threads: usize,
    /// Outer message bits fixed per shard.
    pub shard_bits: u32,
    /// Log shard completion and throughput.
    pub progress: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            mode: Mode::Full,
            threads: 0,
            shard_bits: 8,
            progress: false,
        }
    }
}

impl EnumOptions {
    pub fn with_mode(mode: Mode) -> Self {
        EnumOptions {
            mode,
            ..Default::default()
        }
    }
}

/// Result of an enumeration that may stop early.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Enumeration {
    Complete(WeightDist),
    /// A nonzero codeword of this weight was found below the requested bound.
    LightWord(u32),
}

/// Enumerates the code; with `stop_below = Some(t)` the walk ends as soon as
/// a nonzero codeword of weight below `t` is counted.
pub fn enumerate(
    g: &GenMatrix,
    opts: &EnumOptions,
    stop_below: Option<u32>,
) -> Result<Enumeration> {
    let rows: Vec<u128> = g.rows().iter().map(|r| r.bits()).collect();
    let width = g.width();
    match opts.mode {
        Mode::Full => {
            let basis = WalkBasis::new(&rows, width);
            let cfg = WalkConfig {
                threads: opts.threads,
                shard_bits: opts.shard_bits,
                stop_below,
                progress: opts.progress,
                portable: false,
            };
            match walk::walk(&basis, &cfg) {
                WalkResult::Counts(c) => Ok(Enumeration::Complete(WeightDist::from_counts(c)?)),
                WalkResult::Stopped(w) => Ok(Enumeration::LightWord(w)),
            }
        }
        Mode::OrbitReduced => {
            if !g.has_rotation_symmetry() || rows.len() > 64 {
                return Err(Error::OrbitUnsupported);
            }
            let rank = walk::echelon(&rows).len();
            let excess = (rows.len() - rank) as u32;
            match orbit_walk(&rows, width, stop_below, opts.threads) {
                OrbitResult::MessageCounts(c) => {
                    // each codeword is hit by 2^(k - rank) messages
                    let counts = c.into_iter().map(|x| x >> excess).collect();
                    Ok(Enumeration::Complete(WeightDist::from_counts(counts)?))
                }
                OrbitResult::Stopped(w) => Ok(Enumeration::LightWord(w)),
            }
        }
    }
}

pub fn weight_distribution(g: &GenMatrix, mode: Mode) -> Result<WeightDist> {
    weight_distribution_with(g, &EnumOptions::with_mode(mode))
}

pub fn weight_distribution_with(g: &GenMatrix, opts: &EnumOptions) -> Result<WeightDist> {
    match enumerate(g, opts, None)? {
        Enumeration::Complete(d) => Ok(d),
        Enumeration::LightWord(_) => unreachable!("no stop bound was set"),
    }
}

/// Lightest nonzero codeword among sums of at most `max_rows` generator rows,
/// if it is below `limit`. A cheap filter; it proves nothing about `d`.
pub fn light_combination(g: &GenMatrix, max_rows: usize, limit: u32) -> Option<u32> {
    let rows: Vec<u128> = g.rows().iter().map(|r| r.bits()).collect();
    fn search(
        rows: &[u128],
        from: usize,
        left: usize,
        acc: u128,
        limit: u32,
        best: &mut Option<u32>,
    ) {
        for i in from..rows.len() {
            let c = acc ^ rows[i];
            let w = c.count_ones();
            if w > 0 && w < limit && best.is_none_or(|b| w < b) {
                *best = Some(w);
            }
            if left > 1 {
                search(rows, i + 1, left - 1, c, limit, best);
            }
        }
    }
    let mut best = None;
    if max_rows > 0 {
        search(&rows, 0, max_rows, 0, limit, &mut best);
    }
    best
}

/// Minimum distance. With `early_exit_below = Some(t)` any value below `t`
/// may be returned as soon as such a codeword is seen; otherwise exact.
pub fn min_distance(g: &GenMatrix, early_exit_below: Option<u32>) -> Result<u32> {
    min_distance_with(g, early_exit_below, &EnumOptions::default())
}

pub fn min_distance_with(
    g: &GenMatrix,
    early_exit_below: Option<u32>,
    opts: &EnumOptions,
) -> Result<u32> {
    if let Some(t) = early_exit_below {
        if let Some(w) = light_combination(g, 4, t) {
            return Ok(w);
        }
    }
    match enumerate(g, opts, early_exit_below)? {
        Enumeration::LightWord(w) => Ok(w),
        Enumeration::Complete(d) => Ok(d.min_nonzero_weight().unwrap_or(0)),
    }
}

/// Divisibility class of a weight distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    SinglyEven,
    DoublyEven,
    NeitherEven,
}

pub fn classify_family(dist: &WeightDist) -> Parity {
    let c = dist.counts();
    let nonzero = |pred: fn(usize) -> bool| (0..c.len()).any(|i| pred(i) && c[i] > 0);
    if nonzero(|i| i % 2 == 1) {
        Parity::NeitherEven
    } else if nonzero(|i| i % 4 == 2) {
        Parity::SinglyEven
    } else {
        Parity::DoublyEven
    }
}

/// The two self-dual families and their constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    #[serde(rename = "singly")]
    SinglyEven,
    #[serde(rename = "doubly")]
    DoublyEven,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::SinglyEven => "singly",
            Family::DoublyEven => "doubly",
        }
    }

    /// Odd polynomial weight for singly even, even for doubly even.
    pub fn admits_weight(self, weight: u32) -> bool {
        match self {
            Family::SinglyEven => weight % 2 == 1,
            Family::DoublyEven => weight.is_multiple_of(2),
        }
    }

    pub fn build(self, p: &BitPoly, constraint_length: u32) -> Result<GenMatrix> {
        match self {
            Family::SinglyEven => construct::build_singly_even(p, constraint_length),
            Family::DoublyEven => construct::build_doubly_even_a3(p, constraint_length),
        }
    }

    fn parity(self) -> Parity {
        match self {
            Family::SinglyEven => Parity::SinglyEven,
            Family::DoublyEven => Parity::DoublyEven,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "singly" => Ok(Family::SinglyEven),
            "doubly" => Ok(Family::DoublyEven),
            _ => Err(Error::Distribution(format!("unknown family {s:?}"))),
        }
    }
}

/// Free parameters of the admissible weight enumerators at length 72.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnumeratorParams {
    SinglyEven {
        enumerator_type: u8,
        gamma: i64,
        beta: i64,
    },
    DoublyEven {
        alpha: i64,
    },
}

impl EnumeratorParams {
    pub fn family(&self) -> Family {
        match self {
            EnumeratorParams::SinglyEven { .. } => Family::SinglyEven,
            EnumeratorParams::DoublyEven { .. } => Family::DoublyEven,
        }
    }

    /// `(A_12, A_14, A_16, A_20)` predicted by the template.
    pub fn predicted(&self) -> [i64; 4] {
        match *self {
            EnumeratorParams::SinglyEven {
                enumerator_type,
                gamma,
                beta,
            } => {
                let (a14, a16) = if enumerator_type == 1 {
                    (8640, 124281)
                } else {
                    (7616, 134521)
                };
                [2 * beta, a14 - 64 * gamma, a16 - 24 * beta + 384 * gamma, 0]
            }
            EnumeratorParams::DoublyEven { alpha } => {
                [4398 + alpha, 0, 197073 - 12 * alpha, 18396972 + 66 * alpha]
            }
        }
    }
}

impl fmt::Display for EnumeratorParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumeratorParams::SinglyEven {
                enumerator_type,
                gamma,
                beta,
            } => write!(f, "W72,{enumerator_type} gamma={gamma} beta={beta}"),
            EnumeratorParams::DoublyEven { alpha } => write!(f, "alpha={alpha}"),
        }
    }
}

/// Reads gamma/beta or alpha off `A_12, A_14, A_16, A_20`, requiring every
/// coefficient tied to the parameters to agree.
pub fn extract_params(dist: &WeightDist, family: Family) -> Result<EnumeratorParams> {
    if dist.length() != CODE_LENGTH as usize {
        return Err(Error::WrongLength(dist.counts().len()));
    }
    if classify_family(dist) != family.parity() {
        return Err(Error::WrongFamily(match family {
            Family::SinglyEven => "singly even",
            Family::DoublyEven => "doubly even",
        }));
    }
    let a = |w: usize| dist.get(w) as i64;
    let no_template = || Error::NoTemplate {
        a12: dist.get(12),
        a14: dist.get(14),
        a16: dist.get(16),
        a20: dist.get(20),
    };
    match family {
        Family::SinglyEven => {
            if a(12) % 2 != 0 {
                return Err(no_template());
            }
            let beta = a(12) / 2;
            let fit = |a14_base: i64, a16_base: i64| {
                let diff = a14_base - a(14);
                (diff % 64 == 0)
                    .then_some(diff / 64)
                    .filter(|&gamma| a(16) == a16_base - 24 * beta + 384 * gamma)
            };
            match (fit(8640, 124281), fit(7616, 134521)) {
                (Some(gamma), other) => {
                    if other.is_some() {
                        log::warn!("both singly even templates fit; using W72,1");
                    }
                    Ok(EnumeratorParams::SinglyEven {
                        enumerator_type: 1,
                        gamma,
                        beta,
                    })
                }
                (None, Some(gamma)) => Ok(EnumeratorParams::SinglyEven {
                    enumerator_type: 2,
                    gamma,
                    beta,
                }),
                (None, None) => Err(no_template()),
            }
        }
        Family::DoublyEven => {
            let alpha = a(12) - 4398;
            if a(16) == 197073 - 12 * alpha && a(20) == 18396972 + 66 * alpha {
                Ok(EnumeratorParams::DoublyEven { alpha })
            } else {
                Err(no_template())
            }
        }
    }
}

/// One verified code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeRecord {
    pub family: Family,
    pub constraint_length: u32,
    pub poly: BitPoly,
    pub d: u32,
    pub params: EnumeratorParams,
    pub dist: WeightDist,
}

impl CodeRecord {
    pub fn hex(&self) -> String {
        self.poly.to_hex()
    }

    pub fn ones(&self) -> u32 {
        self.poly.weight()
    }

    /// Key used for table regression and deduplication: `(gamma, beta)` or `alpha`.
    pub fn param_key(&self) -> (i64, i64) {
        match self.params {
            EnumeratorParams::SinglyEven { gamma, beta, .. } => (gamma, beta),
            EnumeratorParams::DoublyEven { alpha } => (alpha, 0),
        }
    }
}

/// Builds the code of `(family, p, K)`, checks self-duality and runs the full
/// enumeration.
pub fn verify_polynomial(
    family: Family,
    p: &BitPoly,
    constraint_length: u32,
    opts: &EnumOptions,
) -> Result<CodeRecord> {
    let g = family.build(p, constraint_length)?;
    if !is_self_dual(&g) {
        return Err(Error::NotSelfDual);
    }
    let dist = weight_distribution_with(&g, opts)?;
    let params = extract_params(&dist, family)?;
    Ok(CodeRecord {
        family,
        constraint_length,
        poly: *p,
        d: dist.min_nonzero_weight().unwrap_or(0),
        params,
        dist,
    })
}

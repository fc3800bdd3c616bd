//! Exhaustive codeword enumeration in Gray-code order.
//!
//! The span of the basis is split as `outer (+) inner`: the inner part is a
//! table of all `2^INNER_BITS` combinations of the first basis vectors, and the
//! outer part is walked in Gray-code order so each step is one XOR. Every
//! step then scores a whole table block. When the all-ones word is in the
//! code it is split off the basis and each enumerated word `c` also accounts
//! for its complement, halving the work.
//!
//! Outer bits above `shard_bits` select independent shards; their histograms
//! are merged by addition, so the result does not depend on the shard count.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

const INNER_BITS: u32 = 8;
const MAX_WEIGHT: usize = 128;
const LANES: usize = 4;

/// A basis of the code in the form the walk consumes.
#[derive(Debug, Clone)]
pub(crate) struct WalkBasis {
    pub vectors: Vec<u128>,
    pub width: u32,
    /// When set, the all-ones word was removed from the basis and the walk
    /// counts each word together with its complement.
    pub complement: bool,
}

/// Gaussian elimination; returns the reduced basis and the rank.
pub(crate) fn echelon(rows: &[u128]) -> Vec<u128> {
    let mut basis: Vec<u128> = Vec::new();
    for &row in rows {
        let mut v = row;
        for &b in &basis {
            let pivot = b.trailing_zeros();
            if (v >> pivot) & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            // keep the basis fully reduced on its pivot columns
            let pivot = v.trailing_zeros();
            for b in basis.iter_mut() {
                if (*b >> pivot) & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis
}

impl WalkBasis {
    pub fn new(rows: &[u128], width: u32) -> Self {
        let basis = echelon(rows);
        let ones = crate::gf2::mask(width);
        // Express the all-ones word in the reduced basis: it is in the span iff
        // it equals the sum of the basis vectors whose pivots it covers.
        let mut used = Vec::new();
        let mut v = ones;
        for (i, &b) in basis.iter().enumerate() {
            if (v >> b.trailing_zeros()) & 1 == 1 {
                v ^= b;
                used.push(i);
            }
        }
        if v == 0 && !used.is_empty() {
            let drop = used[0];
            let vectors = basis
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, &b)| b)
                .collect();
            WalkBasis {
                vectors,
                width,
                complement: true,
            }
        } else {
            WalkBasis {
                vectors: basis,
                width,
                complement: false,
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct WalkConfig {
    pub threads: usize,
    pub shard_bits: u32,
    pub stop_below: Option<u32>,
    pub progress: bool,
    /// Skip the SIMD kernels.
    pub portable: bool,
}

pub(crate) enum WalkResult {
    /// Exact codeword counts indexed by weight, length `width + 1`.
    Counts(Vec<u64>),
    /// A nonzero codeword of this weight (below the threshold) was found.
    Stopped(u32),
}

#[inline(always)]
fn split(v: u128) -> (u64, u64) {
    (v as u64, (v >> 64) as u64)
}

struct Tables {
    inner_lo: Vec<u64>,
    inner_hi: Vec<u64>,
    outer: Vec<(u64, u64)>,
}

impl Tables {
    fn new(vectors: &[u128]) -> Self {
        let inner_bits = INNER_BITS.min(vectors.len() as u32);
        let size = 1usize << inner_bits;
        let mut inner_lo = vec![0u64; size];
        let mut inner_hi = vec![0u64; size];
        for idx in 1..size {
            let low = idx.trailing_zeros() as usize;
            let prev = idx & (idx - 1);
            let (lo, hi) = split(vectors[low]);
            inner_lo[idx] = inner_lo[prev] ^ lo;
            inner_hi[idx] = inner_hi[prev] ^ hi;
        }
        let outer = vectors[inner_bits as usize..]
            .iter()
            .map(|&v| split(v))
            .collect();
        Tables {
            inner_lo,
            inner_hi,
            outer,
        }
    }
}

type Hist = [[u64; MAX_WEIGHT + 1]; LANES];

/// Check performed during a walk: stop once a nonzero word lighter than
/// `limit` has been counted.
#[derive(Debug, Clone, Copy)]
struct Check {
    limit: u32,
    width: u32,
    complement: bool,
}

/// Lowest witnessed nonzero weight below `limit`. The zero word sits at
/// weight 0 and its complement (all-ones) is never enumerated, so neither is
/// ever reported.
fn low_witness(counts: &[u64], check: Check) -> Option<u32> {
    let Check {
        limit,
        width,
        complement,
    } = check;
    (1..limit.min(width + 1)).find(|&w| {
        // with complements, a word of weight width - w stands for one of weight w
        counts[w as usize] > 0 || (complement && counts[(width - w) as usize] > 0)
    })
}

fn fold_lanes(hist: &Hist) -> Vec<u64> {
    (0..=MAX_WEIGHT)
        .map(|w| hist.iter().map(|lane| lane[w]).sum())
        .collect()
}

#[inline(always)]
fn score_block(lo: &[u64], hi: &[u64], base: (u64, u64), weights: &mut [u8], hist: &mut Hist) {
    let n = lo.len();
    let (lo, hi, weights) = (&lo[..n], &hi[..n], &mut weights[..n]);
    for g in 0..n {
        weights[g] = ((lo[g] ^ base.0).count_ones() + (hi[g] ^ base.1).count_ones()) as u8;
    }
    let mut chunks = weights.chunks_exact(LANES);
    for c in &mut chunks {
        hist[0][c[0] as usize] += 1;
        hist[1][c[1] as usize] += 1;
        hist[2][c[2] as usize] += 1;
        hist[3][c[3] as usize] += 1;
    }
    for &w in chunks.remainder() {
        hist[0][w as usize] += 1;
    }
}

#[inline(always)]
fn walk_shard_portable(
    tables: &Tables,
    start: (u64, u64),
    walk_bits: u32,
    check: Option<Check>,
    stop: &AtomicBool,
) -> Vec<u64> {
    let mut hist: Box<Hist> = Box::new([[0u64; MAX_WEIGHT + 1]; LANES]);
    let mut weights = vec![0u8; tables.inner_lo.len()];
    let mut base = start;
    let steps: u64 = 1 << walk_bits;
    for t in 0..steps {
        if t > 0 {
            let (lo, hi) = tables.outer[t.trailing_zeros() as usize];
            base.0 ^= lo;
            base.1 ^= hi;
        }
        score_block(
            &tables.inner_lo,
            &tables.inner_hi,
            base,
            &mut weights,
            &mut hist,
        );
        if let Some(check) = check {
            if t & 0xF == 0xF || t + 1 == steps {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                if low_witness(&fold_lanes(&hist), check).is_some() {
                    stop.store(true, Ordering::Relaxed);
                    break;
                }
            }
        }
    }
    fold_lanes(&hist)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "popcnt")]
unsafe fn walk_shard_popcnt(
    tables: &Tables,
    start: (u64, u64),
    walk_bits: u32,
    check: Option<Check>,
    stop: &AtomicBool,
) -> Vec<u64> {
    walk_shard_portable(tables, start, walk_bits, check, stop)
}

// Even-weight codes: halved weights fit in 6 bits, so two words share one
// counter slot `w_a / 2 + 64 * (w_b / 2)`, halving the scattered increments.
#[cfg(target_arch = "x86_64")]
const PAIR_SLOTS: usize = 64 * 64;

#[cfg(target_arch = "x86_64")]
fn fold_pairs(pairs: &[u64]) -> Vec<u64> {
    let mut counts = vec![0u64; MAX_WEIGHT + 1];
    for lane in pairs.chunks_exact(PAIR_SLOTS) {
        for (slot, &c) in lane.iter().enumerate() {
            counts[2 * (slot & 63)] += c;
            counts[2 * (slot >> 6)] += c;
        }
    }
    counts
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f,avx512bw,avx512vl,avx512vpopcntdq,popcnt")]
unsafe fn walk_shard_avx512_pairs<const CHECK: bool>(
    tables: &Tables,
    start: (u64, u64),
    walk_bits: u32,
    check: Option<Check>,
    stop: &AtomicBool,
) -> Vec<u64> {
    use std::arch::x86_64::*;

    const HALF: usize = 1 << (INNER_BITS - 1);
    assert_eq!(tables.inner_lo.len(), 2 * HALF);
    let lo = tables.inner_lo.as_ptr();
    let hi = tables.inner_hi.as_ptr();
    let mut pairs = vec![0u64; 2 * PAIR_SLOTS];
    let mut slots = [0u16; HALF];
    let mut base = start;
    let steps: u64 = 1 << walk_bits;

    #[inline(always)]
    unsafe fn weights8(lo: *const u64, hi: *const u64, bl: __m512i, bh: __m512i) -> __m512i {
        let l = _mm512_xor_si512(_mm512_loadu_si512(lo as *const _), bl);
        let h = _mm512_xor_si512(_mm512_loadu_si512(hi as *const _), bh);
        _mm512_add_epi64(_mm512_popcnt_epi64(l), _mm512_popcnt_epi64(h))
    }

    for t in 0..steps {
        if t > 0 {
            let (l, h) = tables.outer[t.trailing_zeros() as usize];
            base.0 ^= l;
            base.1 ^= h;
        }
        let bl = _mm512_set1_epi64(base.0 as i64);
        let bh = _mm512_set1_epi64(base.1 as i64);
        let mut vmin = _mm512_set1_epi64(-1);
        let mut vmax = _mm512_setzero_si512();
        for c in 0..HALF / 8 {
            let g = c * 8;
            let wa = weights8(lo.add(g), hi.add(g), bl, bh);
            let wb = weights8(lo.add(g + HALF), hi.add(g + HALF), bl, bh);
            if CHECK {
                vmin = _mm512_min_epu64(vmin, _mm512_min_epu64(wa, wb));
                vmax = _mm512_max_epu64(vmax, _mm512_max_epu64(wa, wb));
            }
            let slot = _mm512_or_si512(
                _mm512_srli_epi64(wa, 1),
                _mm512_slli_epi64(_mm512_srli_epi64(wb, 1), 6),
            );
            _mm_storeu_si128(
                slots.as_mut_ptr().add(g) as *mut __m128i,
                _mm512_cvtepi64_epi16(slot),
            );
        }
        let (lane0, lane1) = pairs.split_at_mut(PAIR_SLOTS);
        for s in slots.chunks_exact(2) {
            lane0[s[0] as usize] += 1;
            lane1[s[1] as usize] += 1;
        }
        if CHECK {
            let check = check.expect("check configured");
            let lightest = _mm512_reduce_min_epu64(vmin) as u32;
            let heaviest = _mm512_reduce_max_epu64(vmax) as u32;
            let suspicious = lightest < check.limit
                || (check.complement && heaviest + check.limit > check.width);
            if suspicious || t & 0xFF == 0xFF {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                if suspicious && low_witness(&fold_pairs(&pairs), check).is_some() {
                    stop.store(true, Ordering::Relaxed);
                    break;
                }
            }
        }
    }
    fold_pairs(&pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kernel {
    #[cfg(target_arch = "x86_64")]
    Avx512Pairs,
    #[cfg(target_arch = "x86_64")]
    Popcnt,
    Portable,
}

fn select_kernel(tables: &Tables, even: bool, width: u32) -> Kernel {
    #[cfg(target_arch = "x86_64")]
    {
        if even
            && width < 2 * 64
            && tables.inner_lo.len() == 1 << INNER_BITS
            && is_x86_feature_detected!("avx512f")
            && is_x86_feature_detected!("avx512vpopcntdq")
            && is_x86_feature_detected!("avx512bw")
            && is_x86_feature_detected!("avx512vl")
        {
            return Kernel::Avx512Pairs;
        }
        if is_x86_feature_detected!("popcnt") {
            return Kernel::Popcnt;
        }
    }
    let _ = (tables, even, width);
    Kernel::Portable
}

fn walk_shard(
    kernel: Kernel,
    tables: &Tables,
    start: (u64, u64),
    walk_bits: u32,
    check: Option<Check>,
    stop: &AtomicBool,
) -> Vec<u64> {
    match kernel {
        // SAFETY: the kernels are only selected after runtime feature detection.
        #[cfg(target_arch = "x86_64")]
        Kernel::Avx512Pairs => unsafe {
            if check.is_some() {
                walk_shard_avx512_pairs::<true>(tables, start, walk_bits, check, stop)
            } else {
                walk_shard_avx512_pairs::<false>(tables, start, walk_bits, check, stop)
            }
        },
        #[cfg(target_arch = "x86_64")]
        Kernel::Popcnt => unsafe { walk_shard_popcnt(tables, start, walk_bits, check, stop) },
        Kernel::Portable => walk_shard_portable(tables, start, walk_bits, check, stop),
    }
}

fn shard_start(tables: &Tables, shard: u64, walk_bits: u32) -> (u64, u64) {
    let mut start = (0u64, 0u64);
    let mut bits = shard;
    while bits != 0 {
        let i = bits.trailing_zeros() + walk_bits;
        let (lo, hi) = tables.outer[i as usize];
        start.0 ^= lo;
        start.1 ^= hi;
        bits &= bits - 1;
    }
    start
}

pub(crate) fn walk(basis: &WalkBasis, cfg: &WalkConfig) -> WalkResult {
    assert!(basis.width as usize <= MAX_WEIGHT);
    let tables = Tables::new(&basis.vectors);
    let outer_bits = tables.outer.len() as u32;
    let shard_bits = cfg.shard_bits.min(outer_bits);
    let walk_bits = outer_bits - shard_bits;
    let shards: u64 = 1 << shard_bits;
    let check = cfg.stop_below.map(|limit| Check {
        limit,
        width: basis.width,
        complement: basis.complement,
    });
    let even = basis.vectors.iter().all(|v| v.count_ones() % 2 == 0);
    let kernel = if cfg.portable {
        Kernel::Portable
    } else {
        select_kernel(&tables, even, basis.width)
    };
    let stop = AtomicBool::new(false);
    let done = AtomicU64::new(0);
    let started = Instant::now();
    let total_words = (tables.inner_lo.len() as u64) << outer_bits;

    let run = |shard: u64| -> Vec<u64> {
        let start = shard_start(&tables, shard, walk_bits);
        let h = walk_shard(kernel, &tables, start, walk_bits, check, &stop);
        let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
        if cfg.progress && (finished * 16 / shards != (finished - 1) * 16 / shards) {
            let secs = started.elapsed().as_secs_f64();
            let words = (total_words as f64) * finished as f64 / shards as f64;
            log::info!(
                "shard {finished}/{shards}, {:.3e} words/s",
                words / secs.max(1e-9)
            );
        }
        h
    };
    let merge = |mut a: Vec<u64>, b: Vec<u64>| {
        for (x, y) in a.iter_mut().zip(&b) {
            *x += y;
        }
        a
    };
    let empty = || vec![0u64; MAX_WEIGHT + 1];

    let hist = if cfg.threads == 1 || shards == 1 {
        (0..shards).map(run).fold(empty(), merge)
    } else {
        let par = || (0..shards).into_par_iter().map(run).reduce(empty, merge);
        crate::analyze::in_pool(cfg.threads, par)
    };

    if let Some(check) = check {
        if let Some(w) = low_witness(&hist, check) {
            return WalkResult::Stopped(w);
        }
    }
    let width = basis.width as usize;
    let mut counts = vec![0u64; width + 1];
    for (w, &c) in hist.iter().enumerate().take(width + 1) {
        counts[w] += c;
        if basis.complement {
            counts[width - w] += c;
        }
    }
    WalkResult::Counts(counts)
}

//! Orbit-reduced enumeration for two-circulant codes.
//!
//! When row `i + 1` is row `i` under a fixed weight-preserving column
//! permutation (and row `k - 1` maps back to row 0), rotating the message
//! rotates the codeword. All messages in one rotation class therefore share a
//! codeword weight. The walk visits one representative per class, the
//! lexicographically least rotation, via the Fredricksen-Kessler-Maiorana
//! recursion, and weights it by its period.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

/// Depth at which the recursion is split into independent subtrees.
const SPLIT_DEPTH: usize = 12;

#[derive(Debug, Clone, Copy)]
struct Frame {
    // a[1..=t-1] is the prefix; only a[t - p] is needed going forward but the
    // subtree needs the whole prefix.
    prefix: u64,
    t: usize,
    p: usize,
    lo: u64,
    hi: u64,
}

struct Walker<'a> {
    k: usize,
    lo: &'a [u64],
    hi: &'a [u64],
    limit: Option<u32>,
    stop: &'a AtomicBool,
    // a[0] is a sentinel 0, a[1..=k] the current string
    a: [u8; 65],
    hist: Vec<u64>,
    frames: Option<Vec<Frame>>,
    split_at: usize,
}

impl Walker<'_> {
    #[inline(always)]
    fn tally(&mut self, lo: u64, hi: u64, mult: usize) -> bool {
        let w = lo.count_ones() + hi.count_ones();
        self.hist[w as usize] += mult as u64;
        if let Some(limit) = self.limit {
            if w > 0 && w < limit {
                self.stop.store(true, Ordering::Relaxed);
                return false;
            }
        }
        true
    }

    /// Returns false when the walk should stop.
    fn gen(&mut self, t: usize, p: usize, lo: u64, hi: u64) -> bool {
        let k = self.k;
        if let Some(frames) = self.frames.as_mut() {
            if t == self.split_at {
                let prefix = (1..t).fold(0u64, |acc, i| acc | (self.a[i] as u64) << i);
                frames.push(Frame {
                    prefix,
                    t,
                    p,
                    lo,
                    hi,
                });
                return true;
            }
        }
        if t == k {
            let (rl, rh) = (self.lo[k - 1], self.hi[k - 1]);
            if self.a[k - p] == 0 {
                if k.is_multiple_of(p) && !self.tally(lo, hi, p) {
                    return false;
                }
                return self.tally(lo ^ rl, hi ^ rh, k);
            }
            return !k.is_multiple_of(p) || self.tally(lo ^ rl, hi ^ rh, p);
        }
        if self.limit.is_some() && t & 3 == 0 && self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let (rl, rh) = (self.lo[t - 1], self.hi[t - 1]);
        if self.a[t - p] == 0 {
            self.a[t] = 0;
            if !self.gen(t + 1, p, lo, hi) {
                return false;
            }
            self.a[t] = 1;
            self.gen(t + 1, t, lo ^ rl, hi ^ rh)
        } else {
            self.a[t] = 1;
            self.gen(t + 1, p, lo ^ rl, hi ^ rh)
        }
    }
}

pub(crate) enum OrbitResult {
    /// Sum over all `2^k` messages of `[weight(codeword) = w]`.
    MessageCounts(Vec<u64>),
    Stopped(u32),
}

/// Enumerates one message per rotation class of `k`-bit messages, where row
/// `i` is given as `(lo[i], hi[i])`.
pub(crate) fn orbit_walk(
    rows: &[u128],
    width: u32,
    stop_below: Option<u32>,
    threads: usize,
) -> OrbitResult {
    let k = rows.len();
    assert!((1..=64).contains(&k) && width <= 128);
    let lo: Vec<u64> = rows.iter().map(|&r| r as u64).collect();
    let hi: Vec<u64> = rows.iter().map(|&r| (r >> 64) as u64).collect();
    let stop = AtomicBool::new(false);
    let walker = |split_at: usize| Walker {
        k,
        lo: &lo,
        hi: &hi,
        limit: stop_below,
        stop: &stop,
        a: [0; 65],
        hist: vec![0; width as usize + 1],
        frames: None,
        split_at,
    };

    let hist = if k <= SPLIT_DEPTH + 2 || threads == 1 {
        let mut w = walker(0);
        w.gen(1, 1, 0, 0);
        w.hist
    } else {
        let mut root = walker(SPLIT_DEPTH);
        root.frames = Some(Vec::new());
        root.gen(1, 1, 0, 0);
        let frames = root.frames.take().unwrap_or_default();
        let run = |f: &Frame| {
            let mut w = walker(0);
            for i in 1..f.t {
                w.a[i] = ((f.prefix >> i) & 1) as u8;
            }
            w.gen(f.t, f.p, f.lo, f.hi);
            w.hist
        };
        let merge = |mut a: Vec<u64>, b: Vec<u64>| {
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            a
        };
        let empty = || vec![0u64; width as usize + 1];
        crate::analyze::in_pool(threads, || frames.par_iter().map(run).reduce(empty, merge))
    };

    if let Some(limit) = stop_below {
        if let Some(w) = (1..limit.min(width + 1)).find(|&w| hist[w as usize] > 0) {
            return OrbitResult::Stopped(w);
        }
    }
    OrbitResult::MessageCounts(hist)
}

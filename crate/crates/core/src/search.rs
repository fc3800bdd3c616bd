//! Exhaustive search over generator polynomials.
//!
//! Every canonical polynomial (`p_0 = p_(K-1) = 1`, weight parity fixed by the
//! family) of each constraint length is screened by cheap filters, built,
//! and verified by full enumeration. Only one of `p` and its reversal is
//! tried, since the two codes differ by swapping halves.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::analyze::{
    self, enumerate, extract_params, light_combination, rank_gf2, CodeRecord, EnumOptions,
    Enumeration, Family, WeightDist,
};
use crate::construct::{
    build_doubly_even_a3_sized, build_singly_even_sized, GenMatrix, ReverseConvention, HALF_LENGTH,
};
use crate::error::{Error, Result};
use crate::gf2::BitPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dedup {
    /// One record per `(gamma, beta)` or `alpha`: the smallest `(K, ones, hex)`.
    #[default]
    ByParams,
    ByPolynomial,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub family: Family,
    pub k_min: u32,
    pub k_max: u32,
    pub dedup: Dedup,
    pub gcd_filter: bool,
    /// Reject as soon as a nonzero codeword lighter than this is seen.
    pub distance_filter: Option<u32>,
    /// Accepted codes have exactly this minimum distance.
    pub target_distance: u32,
    /// Circulant size; 36 for the length-72 codes, smaller for experiments.
    pub circulant_size: u32,
    /// Worker threads for candidates and enumeration together; 0 = all cores.
    pub threads: usize,
    pub enum_opts: EnumOptions,
    /// Log a progress line every this many candidates (0 = never).
    pub progress_every: usize,
}

impl SearchConfig {
    pub fn new(family: Family, k_min: u32, k_max: u32) -> Self {
        SearchConfig {
            family,
            k_min,
            k_max,
            dedup: Dedup::ByParams,
            gcd_filter: true,
            distance_filter: Some(12),
            target_distance: 12,
            circulant_size: HALF_LENGTH,
            threads: 0,
            enum_opts: EnumOptions::default(),
            progress_every: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_min < 2 || self.k_min > self.k_max || self.k_max > self.circulant_size {
            return Err(Error::BadConstraintLength {
                k: if self.k_min < 2 {
                    self.k_min
                } else {
                    self.k_max
                },
                max: self.circulant_size,
            });
        }
        if self.k_max > 64 {
            return Err(Error::BadConstraintLength {
                k: self.k_max,
                max: 64,
            });
        }
        Ok(())
    }
}

/// Canonical candidates in order of `(K, hex value)`.
pub struct Candidates {
    family: Family,
    k: u32,
    k_max: u32,
    middle: u64,
}

impl Iterator for Candidates {
    type Item = (BitPoly, u32);

    fn next(&mut self) -> Option<Self::Item> {
        while self.k <= self.k_max {
            let k = self.k;
            let span = 1u64 << (k - 2);
            while self.middle < span {
                let m = self.middle;
                self.middle += 1;
                let bits = 1u128 | (m as u128) << 1 | 1u128 << (k - 1);
                let p = BitPoly::from_bits(bits);
                if !self.family.admits_weight(p.weight()) {
                    continue;
                }
                let rev = p.reverse(k).expect("window holds the polynomial");
                if p.bits() <= rev.bits() {
                    return Some((p, k));
                }
            }
            self.k += 1;
            self.middle = 0;
        }
        None
    }
}

pub fn enumerate_candidates(cfg: &SearchConfig) -> Candidates {
    Candidates {
        family: cfg.family,
        k: cfg.k_min.max(2),
        k_max: cfg.k_max,
        middle: 0,
    }
}

/// Singly even: `p` and its reversal are both units modulo `x^k - 1`.
/// Doubly even: `gcd(p, reverse(p), x^k - 1)` is exactly `x + 1`.
pub fn gcd_prefilter_sized(p: &BitPoly, constraint_length: u32, family: Family, k: u32) -> bool {
    let modulus = BitPoly::cyclic_modulus(k).expect("supported cycle length");
    let Ok(rev) = p.reverse(constraint_length) else {
        return false;
    };
    let gcd = |a: BitPoly, b: BitPoly| a.gcd(b).expect("modulus is nonzero");
    match family {
        Family::SinglyEven => gcd(*p, modulus) == BitPoly::ONE && gcd(rev, modulus) == BitPoly::ONE,
        Family::DoublyEven => gcd(gcd(*p, rev), modulus) == BitPoly::X_PLUS_ONE,
    }
}

pub fn gcd_prefilter(p: &BitPoly, constraint_length: u32, family: Family) -> bool {
    gcd_prefilter_sized(p, constraint_length, family, HALF_LENGTH)
}

/// What happened to one candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    RejectedByGcd,
    /// The construction does not reach dimension `k`.
    RejectedByRank,
    /// Minimum distance differs from the target; the value is the lightest
    /// weight seen (an upper bound when a filter stopped early).
    RejectedByDistance(u32),
    Survivor(WeightDist),
}

#[derive(Debug, Clone)]
pub struct Screened {
    pub poly: BitPoly,
    pub constraint_length: u32,
    pub outcome: Outcome,
}

fn build(cfg: &SearchConfig, p: &BitPoly, constraint_length: u32) -> Result<GenMatrix> {
    let k = cfg.circulant_size;
    match cfg.family {
        Family::SinglyEven => {
            build_singly_even_sized(p, constraint_length, k, ReverseConvention::default())
        }
        Family::DoublyEven => {
            build_doubly_even_a3_sized(p, constraint_length, k, ReverseConvention::default())
        }
    }
}

fn screen_one(cfg: &SearchConfig, p: BitPoly, constraint_length: u32) -> Result<Outcome> {
    if cfg.gcd_filter && !gcd_prefilter_sized(&p, constraint_length, cfg.family, cfg.circulant_size)
    {
        return Ok(Outcome::RejectedByGcd);
    }
    let g = build(cfg, &p, constraint_length)?;
    let rows = g.rows();
    let orthogonal = rows
        .iter()
        .enumerate()
        .all(|(i, a)| rows[i..].iter().all(|b| !a.dot(b)));
    if !orthogonal {
        return Err(Error::Inconsistent(format!(
            "{} K={constraint_length} hex {} builds a non-orthogonal generator",
            cfg.family,
            p.to_hex()
        )));
    }
    if rank_gf2(rows) != cfg.circulant_size as usize {
        return Ok(Outcome::RejectedByRank);
    }
    if let Some(limit) = cfg.distance_filter {
        if let Some(w) = light_combination(&g, 4, limit) {
            return Ok(Outcome::RejectedByDistance(w));
        }
    }
    let mut opts = cfg.enum_opts;
    opts.threads = 0;
    match enumerate(&g, &opts, cfg.distance_filter)? {
        Enumeration::LightWord(w) => Ok(Outcome::RejectedByDistance(w)),
        Enumeration::Complete(dist) => {
            let d = dist.min_nonzero_weight().unwrap_or(0);
            if d == cfg.target_distance {
                Ok(Outcome::Survivor(dist))
            } else {
                Ok(Outcome::RejectedByDistance(d))
            }
        }
    }
}

/// Runs filters and enumeration over every candidate, at any circulant size.
pub fn screen(cfg: &SearchConfig) -> Result<Vec<Screened>> {
    cfg.validate()?;
    let candidates: Vec<(BitPoly, u32)> = enumerate_candidates(cfg).collect();
    let total = candidates.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let started = Instant::now();
    let work = || {
        candidates
            .par_iter()
            .map(|&(p, k)| {
                let outcome = screen_one(cfg, p, k)?;
                let n = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                if cfg.progress_every > 0 && (n.is_multiple_of(cfg.progress_every) || n == total) {
                    log::info!(
                        "{n}/{total} candidates screened in {:.1}s",
                        started.elapsed().as_secs_f64()
                    );
                }
                Ok(Screened {
                    poly: p,
                    constraint_length: k,
                    outcome,
                })
            })
            .collect::<Result<Vec<_>>>()
    };
    analyze::in_pool(cfg.threads, work)
}

#[derive(Debug, Clone, Default)]
pub struct SearchReport {
    /// Sorted by `(family, K, hex value)`.
    pub records: Vec<CodeRecord>,
    pub candidates_examined: u64,
    pub rejected_by_gcd: u64,
    pub rejected_by_rank: u64,
    pub rejected_by_distance: u64,
    /// Candidates that passed every check, before deduplication.
    pub verified: u64,
    pub wall_time: Duration,
}

impl SearchReport {
    pub fn rejections(&self) -> u64 {
        self.rejected_by_gcd + self.rejected_by_rank + self.rejected_by_distance
    }
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.circulant_size != HALF_LENGTH {
        return Err(Error::Inconsistent(
            "records carry length-72 enumerator parameters; use screen() at other sizes".into(),
        ));
    }
    let started = Instant::now();
    let screened = screen(cfg)?;
    let mut report = SearchReport {
        candidates_examined: screened.len() as u64,
        ..Default::default()
    };
    let mut records = Vec::new();
    for s in screened {
        match s.outcome {
            Outcome::RejectedByGcd => report.rejected_by_gcd += 1,
            Outcome::RejectedByRank => report.rejected_by_rank += 1,
            Outcome::RejectedByDistance(_) => report.rejected_by_distance += 1,
            Outcome::Survivor(dist) => {
                report.verified += 1;
                let params = extract_params(&dist, cfg.family).map_err(|e| {
                    Error::Inconsistent(format!(
                        "K={} hex {}: {e}",
                        s.constraint_length,
                        s.poly.to_hex()
                    ))
                })?;
                records.push(CodeRecord {
                    family: cfg.family,
                    constraint_length: s.constraint_length,
                    poly: s.poly,
                    d: dist.min_nonzero_weight().unwrap_or(0),
                    params,
                    dist,
                });
            }
        }
    }
    if cfg.dedup == Dedup::ByParams {
        records.sort_by_key(|r| (r.param_key(), r.constraint_length, r.ones(), r.poly.bits()));
        records.dedup_by_key(|r| r.param_key());
    }
    records.sort_by_key(|r| (r.family, r.constraint_length, r.poly.bits()));
    report.records = records;
    report.wall_time = started.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexes(cfg: &SearchConfig) -> Vec<String> {
        enumerate_candidates(cfg)
            .map(|(p, k)| p.to_tap_string(k))
            .collect()
    }

    // Independent count: every integer with both end bits set, parity
    // filtered, one per {p, reverse(p)} pair.
    fn brute_count(k: u32, family: Family) -> usize {
        let mut seen = std::collections::BTreeSet::new();
        for v in 0u64..1 << k {
            if v & 1 == 0 || (v >> (k - 1)) & 1 == 0 {
                continue;
            }
            if !family.admits_weight(v.count_ones()) {
                continue;
            }
            let rev = (0..k).fold(0u64, |acc, i| acc | ((v >> i) & 1) << (k - 1 - i));
            seen.insert(v.min(rev));
        }
        seen.len()
    }

    #[test]
    fn candidate_examples() {
        let cfg = SearchConfig::new(Family::SinglyEven, 3, 3);
        assert_eq!(hexes(&cfg), vec!["111"]);
        let cfg = SearchConfig::new(Family::DoublyEven, 4, 4);
        assert_eq!(hexes(&cfg), vec!["1001", "1111"]);
        let cfg = SearchConfig::new(Family::SinglyEven, 10, 10);
        let n = enumerate_candidates(&cfg).count();
        assert_eq!(n, brute_count(10, Family::SinglyEven));
        assert_eq!(n, 64);
        for k in 2..=14 {
            for family in [Family::SinglyEven, Family::DoublyEven] {
                let cfg = SearchConfig::new(family, k, k);
                assert_eq!(enumerate_candidates(&cfg).count(), brute_count(k, family));
            }
        }
    }

    #[test]
    fn candidates_are_canonical_and_ordered() {
        let cfg = SearchConfig::new(Family::DoublyEven, 2, 9);
        let all: Vec<_> = enumerate_candidates(&cfg).collect();
        for w in all.windows(2) {
            assert!((w[0].1, w[0].0.bits()) < (w[1].1, w[1].0.bits()));
        }
        for (p, k) in all {
            assert!(p.coeff(0) && p.degree() == Some(k - 1));
            assert!(p.bits() <= p.reverse(k).unwrap().bits());
        }
    }

    #[test]
    fn gcd_prefilter_examples() {
        let p = BitPoly::from_hex("34F", 10).unwrap();
        assert!(gcd_prefilter(&p, 10, Family::SinglyEven));
        let p = BitPoly::from_hex("12F", 9).unwrap();
        assert!(gcd_prefilter(&p, 9, Family::DoublyEven));
        let p = BitPoly::from_tap_string("111111").unwrap();
        let m = BitPoly::cyclic_modulus(36).unwrap();
        let direct = p.gcd(p.reverse(6).unwrap()).unwrap().gcd(m).unwrap();
        assert_eq!(direct, p);
        assert!(!gcd_prefilter(&p, 6, Family::DoublyEven));
    }

    #[test]
    fn even_weight_iff_x_plus_one_divides() {
        for bits in 1u128..1 << 12 {
            let p = BitPoly::from_bits(bits);
            let g = p.gcd(BitPoly::X_PLUS_ONE).unwrap();
            assert_eq!(g == BitPoly::X_PLUS_ONE, p.weight().is_multiple_of(2));
        }
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(Family::SinglyEven, 1, 4)
            .validate()
            .is_err());
        assert!(SearchConfig::new(Family::SinglyEven, 5, 4)
            .validate()
            .is_err());
        assert!(SearchConfig::new(Family::SinglyEven, 5, 37)
            .validate()
            .is_err());
        let mut cfg = SearchConfig::new(Family::SinglyEven, 3, 5);
        cfg.circulant_size = 12;
        assert!(run_search(&cfg).is_err());
    }

    #[test]
    fn small_constraint_lengths_yield_nothing() {
        let cfg = SearchConfig::new(Family::SinglyEven, 2, 5);
        let report = run_search(&cfg).unwrap();
        assert!(report.records.is_empty());
        assert_eq!(
            report.candidates_examined,
            report.rejections() + report.verified
        );
    }

    #[test]
    fn filters_are_sound_at_toy_size() {
        // [24, 12] self-dual codes: filters on versus off must keep the same
        // survivors. The doubly even construction tops out at d = 4 here.
        for (family, d) in [(Family::SinglyEven, 6), (Family::DoublyEven, 4)] {
            let mut cfg = SearchConfig::new(family, 2, 9);
            cfg.circulant_size = 12;
            cfg.target_distance = d;
            cfg.distance_filter = Some(d);
            let filtered = screen(&cfg).unwrap();
            cfg.gcd_filter = false;
            cfg.distance_filter = None;
            let unfiltered = screen(&cfg).unwrap();
            let survivors = |v: &[Screened]| {
                v.iter()
                    .filter_map(|s| match &s.outcome {
                        Outcome::Survivor(d) => Some((s.poly, d.clone())),
                        _ => None,
                    })
                    .collect::<Vec<_>>()
            };
            assert_eq!(survivors(&filtered), survivors(&unfiltered));
            assert!(!survivors(&filtered).is_empty(), "{family}");
        }
    }
}

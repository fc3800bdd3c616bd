use proptest::prelude::*;

use selfdual::analyze::{
    classify_family, is_self_dual, min_distance, weight_distribution, Mode, Parity, WeightDist,
};
use selfdual::construct::{
    build_doubly_even_a3_sized, build_singly_even_sized, interleave_tailbiting,
    pure_double_circulant, to_pure_double_circulant, GenMatrix, ReverseConvention,
};
use selfdual::error::Error;
use selfdual::gf2::{BitPoly, BitVec};
use selfdual::io::embedded_fixture;

fn reduced(bits: u128, k: u32) -> BitPoly {
    BitPoly::from_bits(bits & ((1u128 << k) - 1))
}

/// Distinct codewords counted by weight, from every message.
fn materialized(g: &GenMatrix) -> Vec<u64> {
    let k = g.num_rows();
    let words: std::collections::HashSet<u128> =
        (0u64..1 << k).map(|m| g.encode(m).bits()).collect();
    let mut counts = vec![0u64; g.width() as usize + 1];
    for w in words {
        counts[w.count_ones() as usize] += 1;
    }
    counts
}

/// Canonical toy polynomial (bit 0 and bit K-1 set) and an even circulant
/// size, so the all-ones half row of the doubly even construction is even.
fn toy_poly() -> impl Strategy<Value = (BitPoly, u32, u32)> {
    (2u32..=6).prop_map(|h| 2 * h).prop_flat_map(|k| {
        (2u32..=k).prop_flat_map(move |kk| {
            any::<u64>().prop_map(move |m| {
                let middle = if kk > 2 {
                    (m as u128) & ((1 << (kk - 2)) - 1)
                } else {
                    0
                };
                (BitPoly::from_bits(1 | middle << 1 | 1 << (kk - 1)), kk, k)
            })
        })
    })
}

fn toy_code(p: &BitPoly, kk: u32, k: u32) -> GenMatrix {
    let conv = ReverseConvention::default();
    if p.weight() % 2 == 1 {
        build_singly_even_sized(p, kk, k, conv).unwrap()
    } else {
        build_doubly_even_a3_sized(p, kk, k, conv).unwrap()
    }
}

proptest! {
    #[test]
    fn mul_is_a_commutative_ring(k in 1u32..=72, a: u128, b: u128, c: u128) {
        let (a, b, c) = (reduced(a, k), reduced(b, k), reduced(c, k));
        let ab = a.mul_mod(b, k).unwrap();
        prop_assert_eq!(ab, b.mul_mod(a, k).unwrap());
        prop_assert_eq!(ab.mul_mod(c, k).unwrap(), a.mul_mod(b.mul_mod(c, k).unwrap(), k).unwrap());
        let lhs = a.mul_mod(b + c, k).unwrap();
        prop_assert_eq!(lhs, ab + a.mul_mod(c, k).unwrap());
        prop_assert_eq!(a.mul_mod(BitPoly::ONE, k).unwrap(), a);
    }

    #[test]
    fn inverse_round_trips(k in 1u32..=72, a: u128) {
        let a = reduced(a, k);
        let gcd = a.gcd(BitPoly::cyclic_modulus(k).unwrap()).unwrap();
        match a.inverse_mod(k) {
            Ok(inv) => {
                prop_assert_eq!(gcd, BitPoly::ONE);
                prop_assert_eq!(a.mul_mod(inv, k).unwrap(), BitPoly::ONE);
            }
            Err(Error::NotInvertible { gcd: g, .. }) => {
                prop_assert_ne!(gcd, BitPoly::ONE);
                prop_assert_eq!(g, gcd);
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn gcd_divides_both(a in 1u128..1 << 80, b in 1u128..1 << 80) {
        let (a, b) = (BitPoly::from_bits(a), BitPoly::from_bits(b));
        let g = a.gcd(b).unwrap();
        prop_assert_eq!(a.div_rem(g).unwrap().1, BitPoly::ZERO);
        prop_assert_eq!(b.div_rem(g).unwrap().1, BitPoly::ZERO);
        let (q, r) = a.div_rem(b).unwrap();
        prop_assert!(r.is_zero() || r.degree() < b.degree());
        prop_assert_eq!(BitPoly::from_bits(clmul(q.bits(), b.bits())) + r, a);
    }

    #[test]
    fn even_weight_iff_divisible_by_x_plus_one(a in 1u128..1 << 100) {
        let a = BitPoly::from_bits(a);
        let (_, r) = a.div_rem(BitPoly::X_PLUS_ONE).unwrap();
        prop_assert_eq!(r.is_zero(), a.weight().is_multiple_of(2));
    }

    #[test]
    fn hex_and_reverse_round_trip(k in 1u32..=72, a: u128) {
        let p = BitPoly::from_bits(reduced(a, k).bits() | 1 << (k - 1));
        prop_assert_eq!(BitPoly::from_hex(&p.to_hex(), k).unwrap(), p);
        prop_assert_eq!(BitPoly::from_hex(&p.to_hex().to_lowercase(), k).unwrap(), p);
        let taps = p.to_tap_string(k);
        prop_assert_eq!(BitPoly::from_tap_string(&taps).unwrap(), p);
        let rev = p.reverse(k).unwrap();
        prop_assert_eq!(rev.to_tap_string(k), taps.chars().rev().collect::<String>());
        if p.coeff(0) {
            prop_assert_eq!(rev.reverse(k).unwrap(), p);
        }
    }

    #[test]
    fn bitvec_rotation_and_dot(len in 1u32..=128, a: u128, b: u128, by in 0u32..200) {
        let m = if len == 128 { u128::MAX } else { (1u128 << len) - 1 };
        let (a, b) = (BitVec::new(a & m, len).unwrap(), BitVec::new(b & m, len).unwrap());
        prop_assert_eq!(a.rotate_right(by).rotate_left(by), a);
        prop_assert_eq!(a.rotate_right(by).weight(), a.weight());
        prop_assert_eq!(a.rotate_right(by).dot(&b.rotate_right(by)), a.dot(&b));
        prop_assert_eq!(a.to_string().parse::<BitVec>().unwrap(), a);
    }
}

fn clmul(a: u128, b: u128) -> u128 {
    (0..128)
        .filter(|i| (b >> i) & 1 == 1)
        .fold(0, |acc, i| acc ^ (a << i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn toy_codes_are_self_dual_with_valid_distributions((p, kk, k) in toy_poly()) {
        let g = toy_code(&p, kk, k);
        let rows = g.rows();
        for a in rows {
            for b in rows {
                prop_assert!(!a.dot(b));
            }
        }
        let dist = weight_distribution(&g, Mode::Full).unwrap();
        prop_assert_eq!(dist.counts(), &materialized(&g)[..]);
        prop_assert!(dist.is_symmetric() || !is_self_dual(&g));
        prop_assert!(dist.odd_weights_vanish());
        let first = (1..dist.counts().len()).find(|&w| dist.get(w) > 0).map(|w| w as u32);
        prop_assert_eq!(min_distance(&g, None).unwrap(), first.unwrap_or(0));
        if is_self_dual(&g) && p.weight() % 2 == 0 && k % 4 == 0 {
            prop_assert_eq!(classify_family(&dist), Parity::DoublyEven);
        }
    }

    #[test]
    fn orbit_mode_matches_full((p, kk, k) in toy_poly()) {
        let g = toy_code(&p, kk, k);
        let full = weight_distribution(&g, Mode::Full).unwrap();
        if g.has_rotation_symmetry() {
            prop_assert_eq!(weight_distribution(&g, Mode::OrbitReduced).unwrap(), full);
        } else {
            prop_assert!(weight_distribution(&g, Mode::OrbitReduced).is_err());
        }
    }

    #[test]
    fn reversal_gives_equivalent_code((p, kk, k) in toy_poly()) {
        let rev = p.reverse(kk).unwrap();
        let a = weight_distribution(&toy_code(&p, kk, k), Mode::Full).unwrap();
        let b = weight_distribution(&toy_code(&rev, kk, k), Mode::Full).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn interleaving_preserves_distribution((p, kk, k) in toy_poly()) {
        let g = toy_code(&p, kk, k);
        let t = interleave_tailbiting(&g).unwrap();
        prop_assert_eq!(
            weight_distribution(&t, Mode::Full).unwrap(),
            weight_distribution(&g, Mode::Full).unwrap()
        );
    }

    #[test]
    fn inverse_convention_preserves_distribution((p, kk, k) in toy_poly()) {
        let build = |conv| {
            if p.weight() % 2 == 1 {
                build_singly_even_sized(&p, kk, k, conv).unwrap()
            } else {
                build_doubly_even_a3_sized(&p, kk, k, conv).unwrap()
            }
        };
        let a = weight_distribution(&build(ReverseConvention::ReversedForward), Mode::Full).unwrap();
        let b = weight_distribution(&build(ReverseConvention::InverseCirculant), Mode::Full).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn pure_double_circulant_spans_the_same_code((p, kk, k) in toy_poly()) {
        prop_assume!(p.weight() % 2 == 1);
        let g = build_singly_even_sized(&p, kk, k, ReverseConvention::default()).unwrap();
        match to_pure_double_circulant(&g) {
            Ok(f) => {
                let pdc = pure_double_circulant(&f, k).unwrap();
                prop_assert_eq!(
                    weight_distribution(&pdc, Mode::Full).unwrap(),
                    weight_distribution(&g, Mode::Full).unwrap()
                );
            }
            Err(Error::NotInvertible { gcd, .. }) => prop_assert_ne!(gcd, BitPoly::ONE),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }
}

#[test]
fn fixture_hex_round_trips() {
    for row in embedded_fixture() {
        assert_eq!(row.poly.to_hex(), row.hex, "line {}", row.line);
        assert_eq!(
            BitPoly::from_hex(&row.hex, row.constraint_length).unwrap(),
            row.poly
        );
        assert_eq!(row.poly.degree(), Some(row.constraint_length - 1));
    }
}

#[test]
fn weight_dist_json_round_trips() {
    let g = GenMatrix::duplicated_identity(6).unwrap();
    let d = weight_distribution(&g, Mode::Full).unwrap();
    let back = WeightDist::from_json(&d.to_json()).unwrap();
    assert_eq!(back, d);
    assert_eq!(back.digest(), d.digest());
}

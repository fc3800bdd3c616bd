//! Bit vectors and polynomials over GF(2).
//!
//! Coefficient `i` of a polynomial lives at bit `i` of a `u128`, so the hex
//! encoding used by the code tables (`p_0` is the least significant bit) is a
//! plain integer load, and circulant rows are word rotations.
//!
//! The modulus `x^k - 1` is the same polynomial as `x^k + 1` over GF(2); it is
//! built with [`BitPoly::cyclic_modulus`].

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported cyclic length `k` for `x^k - 1`, and the maximum number
/// of taps accepted from the hex format.
pub const MAX_CYCLE: u32 = 72;

/// A polynomial over GF(2) of degree at most 127.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitPoly(u128);

impl BitPoly {
    pub const ZERO: BitPoly = BitPoly(0);
    pub const ONE: BitPoly = BitPoly(1);
    /// `x + 1`, the factor shared by every even-weight polynomial.
    pub const X_PLUS_ONE: BitPoly = BitPoly(0b11);

    pub const fn from_bits(bits: u128) -> Self {
        BitPoly(bits)
    }

    /// Builds a polynomial from its coefficient list, `coeffs[i]` being the
    /// coefficient of `x^i`.
    pub fn from_coeffs(coeffs: &[u8]) -> Self {
        assert!(coeffs.len() <= 128, "coefficient list longer than 128");
        let bits = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c & 1 == 1)
            .fold(0u128, |acc, (i, _)| acc | 1 << i);
        BitPoly(bits)
    }

    /// Parses a tap string such as `"1111001011"`, leftmost character = `p_0`.
    pub fn from_tap_string(taps: &str) -> Result<Self> {
        if taps.is_empty() || taps.len() > 128 {
            return Err(Error::InvalidTaps(taps.to_string()));
        }
        let mut bits = 0u128;
        for (i, ch) in taps.chars().enumerate() {
            match ch {
                '1' => bits |= 1 << i,
                '0' => {}
                _ => return Err(Error::InvalidTaps(taps.to_string())),
            }
        }
        Ok(BitPoly(bits))
    }

    /// `x^k - 1`.
    pub fn cyclic_modulus(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroModulus);
        }
        if k > MAX_CYCLE {
            return Err(Error::ModulusTooLarge(k));
        }
        Ok(BitPoly(1 << k | 1))
    }

    pub fn monomial(exp: u32) -> Self {
        assert!(exp < 128);
        BitPoly(1 << exp)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Index of the highest set coefficient; `None` for the zero polynomial.
    pub fn degree(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(127 - self.0.leading_zeros())
        }
    }

    /// Number of nonzero coefficients.
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn coeff(self, i: u32) -> bool {
        i < 128 && (self.0 >> i) & 1 == 1
    }

    /// Tap string of length `len`, `p_0` first.
    pub fn to_tap_string(self, len: u32) -> String {
        (0..len)
            .map(|i| if self.coeff(i) { '1' } else { '0' })
            .collect()
    }

    /// Uppercase hex without prefix or leading zeros.
    pub fn to_hex(self) -> String {
        format!("{:X}", self.0)
    }

    /// Parses the table encoding: `hex` is `sum p_i 2^i` and `constraint_length`
    /// is the number of taps, so bit `K - 1` must be the top set bit.
    pub fn from_hex(hex: &str, constraint_length: u32) -> Result<Self> {
        let trimmed = hex.trim();
        if trimmed.is_empty()
            || trimmed.len() > 32
            || !trimmed.bytes().all(|b| b.is_ascii_hexdigit())
        {
            return Err(Error::InvalidHex(hex.to_string()));
        }
        if constraint_length == 0 || constraint_length > MAX_CYCLE {
            return Err(Error::ConstraintLength {
                hex: hex.to_string(),
                k: constraint_length,
            });
        }
        let value =
            u128::from_str_radix(trimmed, 16).map_err(|_| Error::InvalidHex(hex.to_string()))?;
        let p = BitPoly(value);
        match p.degree() {
            Some(d) if d + 1 == constraint_length => Ok(p),
            _ => Err(Error::ConstraintLength {
                hex: hex.to_string(),
                k: constraint_length,
            }),
        }
    }

    /// Product reduced modulo `x^k - 1`. Both inputs must have degree below `k`.
    pub fn mul_mod(self, other: BitPoly, k: u32) -> Result<BitPoly> {
        if k == 0 {
            return Err(Error::ZeroModulus);
        }
        if k > MAX_CYCLE {
            return Err(Error::ModulusTooLarge(k));
        }
        for p in [self, other] {
            if let Some(d) = p.degree() {
                if d >= k {
                    return Err(Error::DegreeTooLarge { degree: d, k });
                }
            }
        }
        let mut acc = 0u128;
        let mut b = other.0;
        while b != 0 {
            let i = b.trailing_zeros();
            acc ^= rotate_right(self.0, i, k);
            b &= b - 1;
        }
        Ok(BitPoly(acc))
    }

    /// Quotient and remainder of schoolbook long division.
    pub fn div_rem(self, divisor: BitPoly) -> Result<(BitPoly, BitPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.0;
        let mut quot = 0u128;
        while rem != 0 {
            let rd = 127 - rem.leading_zeros();
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot |= 1 << shift;
            rem ^= divisor.0 << shift;
        }
        Ok((BitPoly(quot), BitPoly(rem)))
    }

    /// Monic greatest common divisor (every nonzero GF(2) polynomial is monic).
    pub fn gcd(self, other: BitPoly) -> Result<BitPoly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let (mut a, mut b) = (self, other);
        while !b.is_zero() {
            let (_, r) = a.div_rem(b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Inverse modulo `x^k - 1` by the extended Euclidean algorithm.
    pub fn inverse_mod(self, k: u32) -> Result<BitPoly> {
        let modulus = BitPoly::cyclic_modulus(k)?;
        if let Some(d) = self.degree() {
            if d >= k {
                return Err(Error::DegreeTooLarge { degree: d, k });
            }
        }
        // Invariant: s_i * self == r_i (mod modulus).
        let (mut r0, mut r1) = (modulus, self);
        let (mut s0, mut s1) = (BitPoly::ZERO, BitPoly::ONE);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(r1)?;
            r0 = r1;
            r1 = r;
            let s = s0 + clmul_trunc(q, s1);
            s0 = s1;
            s1 = s;
        }
        if r0 != BitPoly::ONE {
            return Err(Error::NotInvertible { gcd: r0, k });
        }
        let (_, inv) = s0.div_rem(modulus)?;
        Ok(inv)
    }

    /// Reverses the coefficients inside a window of `window` taps.
    pub fn reverse(self, window: u32) -> Result<BitPoly> {
        if let Some(d) = self.degree() {
            if window < d + 1 {
                return Err(Error::WindowTooShort { degree: d, window });
            }
        }
        if window == 0 {
            return Ok(BitPoly::ZERO);
        }
        if window > 128 {
            return Err(Error::WindowTooShort {
                degree: 127,
                window,
            });
        }
        Ok(BitPoly(self.0.reverse_bits() >> (128 - window)))
    }
}

// Carry-less product truncated to 128 bits. Only used inside the extended
// Euclid loop where all intermediate degrees stay below 2 * MAX_CYCLE.
fn clmul_trunc(a: BitPoly, b: BitPoly) -> BitPoly {
    let mut acc = 0u128;
    let mut bits = b.0;
    while bits != 0 {
        let i = bits.trailing_zeros();
        acc ^= a.0 << i;
        bits &= bits - 1;
    }
    BitPoly(acc)
}

/// Cyclic rotation toward higher indices within a `len`-bit window.
pub(crate) fn rotate_right(bits: u128, by: u32, len: u32) -> u128 {
    debug_assert!((1..=128).contains(&len));
    let by = by % len;
    if by == 0 {
        return bits;
    }
    let mask = mask(len);
    ((bits << by) | (bits >> (len - by))) & mask
}

pub(crate) fn rotate_left(bits: u128, by: u32, len: u32) -> u128 {
    let by = by % len;
    rotate_right(bits, (len - by) % len, len)
}

pub(crate) fn mask(len: u32) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

impl fmt::Debug for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitPoly({})", self)
    }
}

impl fmt::Display for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("0");
        }
        let mut first = true;
        for i in (0..128).rev().filter(|&i| self.coeff(i)) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Addition over GF(2) is XOR.
impl std::ops::Add for BitPoly {
    type Output = BitPoly;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, other: BitPoly) -> BitPoly {
        BitPoly(self.0 ^ other.0)
    }
}

/// A fixed-length vector over GF(2), at most 128 positions. Position `i` is
/// bit `i`; the textual form lists position 0 first.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVec {
    bits: u128,
    len: u32,
}

impl BitVec {
    pub fn new(bits: u128, len: u32) -> Result<Self> {
        if len == 0 || len > 128 {
            return Err(Error::VectorLength(len));
        }
        if bits & !mask(len) != 0 {
            return Err(Error::VectorOverflow { len });
        }
        Ok(BitVec { bits, len })
    }

    pub fn zeros(len: u32) -> Self {
        BitVec::new(0, len).expect("valid length")
    }

    pub fn ones(len: u32) -> Self {
        BitVec::new(mask(len), len).expect("valid length")
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn get(&self, i: u32) -> bool {
        i < self.len && (self.bits >> i) & 1 == 1
    }

    pub fn set(&mut self, i: u32, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    /// Standard inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in inner product");
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        BitVec {
            bits: self.bits ^ other.bits,
            len: self.len,
        }
    }

    pub fn rotate_right(&self, by: u32) -> BitVec {
        BitVec {
            bits: rotate_right(self.bits, by, self.len),
            len: self.len,
        }
    }

    pub fn rotate_left(&self, by: u32) -> BitVec {
        BitVec {
            bits: rotate_left(self.bits, by, self.len),
            len: self.len,
        }
    }

    /// Concatenation `(self | right)`.
    pub fn concat(&self, right: &BitVec) -> Result<BitVec> {
        let len = self.len + right.len;
        if len > 128 {
            return Err(Error::VectorLength(len));
        }
        BitVec::new(self.bits | right.bits << self.len, len)
    }

    /// Positions `start..start + len`.
    pub fn slice(&self, start: u32, len: u32) -> Result<BitVec> {
        if start + len > self.len {
            return Err(Error::VectorLength(start + len));
        }
        BitVec::new((self.bits >> start) & mask(len), len)
    }

    pub fn from_poly(p: BitPoly, len: u32) -> Result<BitVec> {
        BitVec::new(p.bits(), len)
    }

    pub fn to_poly(&self) -> BitPoly {
        BitPoly::from_bits(self.bits)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.len() > 128 {
            return Err(Error::VectorLength(s.len() as u32));
        }
        let mut bits = 0u128;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '1' => bits |= 1 << i,
                '0' => {}
                _ => return Err(Error::InvalidTaps(s.to_string())),
            }
        }
        BitVec::new(bits, s.len() as u32)
    }
}

//! Generator matrices built from one polynomial.
//!
//! A row-`i` generator of the rate-1/2 quasi-cyclic code is the pair of
//! circulant rows `(rot^i p | rot^i q)` where `q` is `p` with its `K` taps
//! reversed. Odd-weight `p` gives a singly even self-dual code. Even-weight `p`
//! needs the row-0 replacement `(0...0 | 1...1)` to reach full rank and yields
//! a doubly even code.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitPoly, BitVec};

/// Circulant size used by the length-72 codes.
pub const HALF_LENGTH: u32 = 36;
pub const CODE_LENGTH: u32 = 72;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Row `i + 1` is row `i` shifted one position to the right.
    Forward,
    /// Row `i + 1` is row `i` shifted one position to the left.
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CirculantSpec {
    pub first_row: BitVec,
    pub direction: Direction,
}

impl CirculantSpec {
    pub fn forward(first_row: BitVec) -> Self {
        CirculantSpec {
            first_row,
            direction: Direction::Forward,
        }
    }

    pub fn inverse(first_row: BitVec) -> Self {
        CirculantSpec {
            first_row,
            direction: Direction::Inverse,
        }
    }

    pub fn size(&self) -> u32 {
        self.first_row.len()
    }
}

/// The `k x k` circulant, row 0 = `first_row`.
pub fn circulant(spec: &CirculantSpec) -> Vec<BitVec> {
    let k = spec.size();
    (0..k)
        .map(|i| match spec.direction {
            Direction::Forward => spec.first_row.rotate_right(i),
            Direction::Inverse => spec.first_row.rotate_left(i),
        })
        .collect()
}

/// How the right-hand circulant is derived from `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ReverseConvention {
    /// Forward circulant of the tap-reversed polynomial.
    #[default]
    ReversedForward,
    /// Shift-left circulant of `p` itself.
    InverseCirculant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    SinglyEvenA0,
    DoublyEvenA3,
    PureDoubleCirculant,
    Raw,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::SinglyEvenA0 => "singly-even-a0",
            Construction::DoublyEvenA3 => "doubly-even-a3",
            Construction::PureDoubleCirculant => "pure-double-circulant",
            Construction::Raw => "raw",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Layout {
    /// Columns `0..k` hold the left circulant, `k..2k` the right one.
    #[default]
    Block,
    /// Column `2j` is left column `j`, column `2j + 1` is right column `j`.
    Interleaved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub construction: Construction,
    /// The generator polynomial and its constraint length, when there is one.
    pub poly: Option<(BitPoly, u32)>,
    /// First rows of the left and right circulants as polynomials mod `x^k - 1`.
    pub left: Option<BitPoly>,
    pub right: Option<BitPoly>,
    pub convention: ReverseConvention,
    pub layout: Layout,
}

impl Provenance {
    pub fn raw() -> Self {
        Provenance {
            construction: Construction::Raw,
            poly: None,
            left: None,
            right: None,
            convention: ReverseConvention::default(),
            layout: Layout::Block,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenMatrix {
    rows: Vec<BitVec>,
    width: u32,
    provenance: Provenance,
}

impl GenMatrix {
    /// Wraps arbitrary rows; they must be nonempty and share one length.
    pub fn from_rows(rows: Vec<BitVec>) -> Result<Self> {
        let width = rows
            .first()
            .map(|r| r.len())
            .ok_or_else(|| Error::Matrix("no rows".into()))?;
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Matrix("rows have different lengths".into()));
        }
        Ok(GenMatrix {
            rows,
            width,
            provenance: Provenance::raw(),
        })
    }

    /// `[I | I]` of size `k`, the duplicated-halves code.
    pub fn duplicated_identity(k: u32) -> Result<Self> {
        let id = BitVec::new(1, k)?;
        let rows = (0..k)
            .map(|i| {
                let v = id.rotate_right(i);
                v.concat(&v)
            })
            .collect::<Result<Vec<_>>>()?;
        GenMatrix::from_rows(rows)
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Code length `n`.
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn construction(&self) -> Construction {
        self.provenance.construction
    }

    /// True when row `i` is the `i`-th simultaneous rotation of two full
    /// circulants, so rotating the message rotates the codeword halves.
    pub fn has_rotation_symmetry(&self) -> bool {
        matches!(
            self.provenance.construction,
            Construction::SinglyEvenA0 | Construction::PureDoubleCirculant
        )
    }

    /// Encodes a message; bit `i` of `message` selects row `i`.
    pub fn encode(&self, message: u64) -> BitVec {
        let mut acc = 0u128;
        for (i, row) in self.rows.iter().enumerate() {
            if (message >> i) & 1 == 1 {
                acc ^= row.bits();
            }
        }
        BitVec::new(acc, self.width).expect("row width")
    }
}

impl fmt::Display for GenMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

fn check_candidate(p: &BitPoly, constraint_length: u32, k: u32) -> Result<()> {
    if constraint_length == 0 || constraint_length > k {
        return Err(Error::BadConstraintLength {
            k: constraint_length,
            max: k,
        });
    }
    if p.degree() != Some(constraint_length - 1) || !p.coeff(0) {
        return Err(Error::NotCanonical);
    }
    Ok(())
}

fn circulant_pair(
    p: BitPoly,
    constraint_length: u32,
    k: u32,
    convention: ReverseConvention,
) -> Result<(Vec<BitVec>, BitPoly)> {
    let left = circulant(&CirculantSpec::forward(BitVec::from_poly(p, k)?));
    let (right, q) = match convention {
        ReverseConvention::ReversedForward => {
            let q = p.reverse(constraint_length)?;
            (
                circulant(&CirculantSpec::forward(BitVec::from_poly(q, k)?)),
                q,
            )
        }
        ReverseConvention::InverseCirculant => (
            circulant(&CirculantSpec::inverse(BitVec::from_poly(p, k)?)),
            p,
        ),
    };
    let rows = left
        .iter()
        .zip(&right)
        .map(|(l, r)| l.concat(r))
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, q))
}

/// Singly even construction at the code length 72.
pub fn build_singly_even(p: &BitPoly, constraint_length: u32) -> Result<GenMatrix> {
    build_singly_even_sized(
        p,
        constraint_length,
        HALF_LENGTH,
        ReverseConvention::default(),
    )
}

/// Singly even construction with circulant size `k` (toy sizes allowed).
pub fn build_singly_even_sized(
    p: &BitPoly,
    constraint_length: u32,
    k: u32,
    convention: ReverseConvention,
) -> Result<GenMatrix> {
    check_candidate(p, constraint_length, k)?;
    if p.weight().is_multiple_of(2) {
        return Err(Error::WrongParity {
            family: "singly even",
            expected: "odd",
            weight: p.weight(),
        });
    }
    let (rows, q) = circulant_pair(*p, constraint_length, k, convention)?;
    Ok(GenMatrix {
        rows,
        width: 2 * k,
        provenance: Provenance {
            construction: Construction::SinglyEvenA0,
            poly: Some((*p, constraint_length)),
            left: Some(*p),
            right: Some(q),
            convention,
            layout: Layout::Block,
        },
    })
}

/// Doubly even row-replacement construction at the code length 72.
pub fn build_doubly_even_a3(p: &BitPoly, constraint_length: u32) -> Result<GenMatrix> {
    build_doubly_even_a3_sized(
        p,
        constraint_length,
        HALF_LENGTH,
        ReverseConvention::default(),
    )
}

pub fn build_doubly_even_a3_sized(
    p: &BitPoly,
    constraint_length: u32,
    k: u32,
    convention: ReverseConvention,
) -> Result<GenMatrix> {
    check_candidate(p, constraint_length, k)?;
    if p.weight() % 2 == 1 {
        return Err(Error::WrongParity {
            family: "doubly even",
            expected: "even",
            weight: p.weight(),
        });
    }
    let (mut rows, q) = circulant_pair(*p, constraint_length, k, convention)?;
    rows[0] = BitVec::zeros(k).concat(&BitVec::ones(k))?;
    Ok(GenMatrix {
        rows,
        width: 2 * k,
        provenance: Provenance {
            construction: Construction::DoublyEvenA3,
            poly: Some((*p, constraint_length)),
            left: Some(*p),
            right: Some(q),
            convention,
            layout: Layout::Block,
        },
    })
}

/// `[I | F]` with `F` the forward circulant of `f`.
pub fn pure_double_circulant(f: &BitPoly, k: u32) -> Result<GenMatrix> {
    let right = circulant(&CirculantSpec::forward(BitVec::from_poly(*f, k)?));
    let rows = right
        .iter()
        .enumerate()
        .map(|(i, r)| BitVec::new(1u128 << i, k)?.concat(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(GenMatrix {
        rows,
        width: 2 * k,
        provenance: Provenance {
            construction: Construction::PureDoubleCirculant,
            poly: None,
            left: Some(BitPoly::ONE),
            right: Some(*f),
            convention: ReverseConvention::ReversedForward,
            layout: Layout::Block,
        },
    })
}

/// Finds `f` with `[I | circ(f)]` generating the same code as `g`, i.e.
/// `f = p^-1 q mod x^k - 1`. Fails when `p` is not a unit.
pub fn to_pure_double_circulant(g: &GenMatrix) -> Result<BitPoly> {
    let prov = g.provenance();
    if prov.layout != Layout::Block {
        return Err(Error::Provenance(
            "pure double circulant conversion of an interleaved matrix",
        ));
    }
    let (p, q) = match (prov.left, prov.right) {
        (Some(p), Some(q)) => (p, q),
        _ => return Err(Error::Provenance("pure double circulant conversion")),
    };
    if prov.convention != ReverseConvention::ReversedForward {
        return Err(Error::Provenance(
            "pure double circulant conversion of a shift-left circulant",
        ));
    }
    let k = g.width() / 2;
    let inv = p.inverse_mod(k)?;
    inv.mul_mod(q, k)
}

/// Column permutation mixing the two halves: left column `j` goes to `2j`,
/// right column `j` to `2j + 1`.
pub fn interleave_tailbiting(g: &GenMatrix) -> Result<GenMatrix> {
    if g.provenance.layout != Layout::Block || !g.width.is_multiple_of(2) {
        return Err(Error::Provenance(
            "interleaving (needs [P | Q] block layout)",
        ));
    }
    let k = g.width / 2;
    let rows = g
        .rows
        .iter()
        .map(|row| {
            let mut out = BitVec::zeros(g.width);
            for j in 0..k {
                out.set(2 * j, row.get(j));
                out.set(2 * j + 1, row.get(k + j));
            }
            out
        })
        .collect();
    let mut provenance = g.provenance.clone();
    provenance.layout = Layout::Interleaved;
    Ok(GenMatrix {
        rows,
        width: g.width,
        provenance,
    })
}

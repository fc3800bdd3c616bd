//! Plain-text formats: the fixture CSV of published codes, results JSONL,
//! and raw 0/1 generator matrices.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analyze::{CodeRecord, EnumeratorParams, Family};
use crate::construct::GenMatrix;
use crate::error::{Error, Result};
use crate::gf2::{BitPoly, BitVec};

/// Published singly and doubly even codes, checked in with the crate.
pub const EMBEDDED_FIXTURE: &str = include_str!("../fixtures/tables.csv");

const FIXTURE_HEADER: [&str; 6] = ["family", "param1", "param2", "k", "ones", "hex"];

/// One published code. `params` is `(gamma, beta)` or `(alpha, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureRow {
    /// 1-based line in the CSV, header included.
    pub line: usize,
    pub family: Family,
    pub params: (i64, i64),
    pub constraint_length: u32,
    pub ones: u32,
    pub hex: String,
    pub poly: BitPoly,
}

impl fmt::Display for FixtureRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::SinglyEven => write!(
                f,
                "singly gamma={} beta={} K={} hex {}",
                self.params.0, self.params.1, self.constraint_length, self.hex
            ),
            Family::DoublyEven => write!(
                f,
                "doubly alpha={} K={} hex {}",
                self.params.0, self.constraint_length, self.hex
            ),
        }
    }
}

fn parse_fixture_record(line: usize, rec: &csv::StringRecord) -> Result<FixtureRow> {
    let err = |msg: String| Error::Fixture { line, msg };
    if rec.len() != 6 {
        return Err(err(format!("expected 6 fields, found {}", rec.len())));
    }
    let field = |i: usize| rec[i].trim();
    let int = |i: usize| -> Result<i64> {
        field(i).parse().map_err(|_| {
            err(format!(
                "{} is not an integer: {:?}",
                FIXTURE_HEADER[i],
                field(i)
            ))
        })
    };
    let family: Family = field(0)
        .parse()
        .map_err(|_| err(format!("unknown family {:?}", field(0))))?;
    let p1 = int(1)?;
    let p2 = match (family, field(2).is_empty()) {
        (Family::DoublyEven, true) => 0,
        (Family::DoublyEven, false) => {
            return Err(err("doubly even rows leave param2 empty".into()))
        }
        (Family::SinglyEven, true) => {
            return Err(err("singly even rows need beta in param2".into()))
        }
        (Family::SinglyEven, false) => int(2)?,
    };
    let k = u32::try_from(int(3)?)
        .ok()
        .filter(|k| (1..=36).contains(k))
        .ok_or_else(|| err(format!("constraint length {} out of range", field(3))))?;
    let ones = u32::try_from(int(4)?).map_err(|_| err("negative ones count".into()))?;
    let hex = field(5).to_ascii_uppercase();
    let poly = BitPoly::from_hex(&hex, k).map_err(|e| err(e.to_string()))?;
    if poly.weight() != ones {
        return Err(err(format!(
            "hex {hex} has {} ones, row says {ones}",
            poly.weight()
        )));
    }
    if !poly.coeff(0) {
        return Err(err(format!("hex {hex} has p_0 = 0")));
    }
    if !family.admits_weight(ones) {
        return Err(err(format!(
            "{family} row has weight {ones} of the wrong parity"
        )));
    }
    Ok(FixtureRow {
        line,
        family,
        params: (p1, p2),
        constraint_length: k,
        ones,
        hex,
        poly,
    })
}

/// Parses and validates a fixture CSV; every row must pass the integrity checks.
pub fn parse_fixture(text: &str) -> Result<Vec<FixtureRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Fixture {
        line: 1,
        msg: e.to_string(),
    })?;
    if header.iter().map(str::trim).ne(FIXTURE_HEADER) {
        return Err(Error::Fixture {
            line: 1,
            msg: format!("header must be {}", FIXTURE_HEADER.join(",")),
        });
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Fixture {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        rows.push(parse_fixture_record(line, &rec)?);
    }
    Ok(rows)
}

pub fn embedded_fixture() -> Vec<FixtureRow> {
    parse_fixture(EMBEDDED_FIXTURE).expect("embedded fixture is valid")
}

/// A seeded subset of `n` rows (in fixture order). Rows whose hex appears in
/// `force` are always included and count toward `n`.
pub fn sample_rows(rows: &[FixtureRow], n: usize, seed: u64, force: &[&str]) -> Vec<FixtureRow> {
    let mut chosen: BTreeSet<usize> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| force.iter().any(|h| h.eq_ignore_ascii_case(&r.hex)))
        .map(|(i, _)| i)
        .collect();
    let rest: Vec<usize> = (0..rows.len()).filter(|i| !chosen.contains(i)).collect();
    let want = n.saturating_sub(chosen.len()).min(rest.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    chosen.extend(
        sample(&mut rng, rest.len(), want)
            .into_iter()
            .map(|i| rest[i]),
    );
    chosen.into_iter().map(|i| rows[i].clone()).collect()
}

/// One line of the results JSONL.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordLine {
    pub family: Family,
    pub k: u32,
    pub hex: String,
    pub ones: u32,
    pub d: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<i64>,
    /// `"W72_1"` or `"W72_2"`, singly even only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub enumerator_type: Option<String>,
    pub dist_sha: String,
}

impl RecordLine {
    pub fn param_key(&self) -> Option<(i64, i64)> {
        match self.family {
            Family::SinglyEven => Some((self.gamma?, self.beta?)),
            Family::DoublyEven => Some((self.alpha?, 0)),
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let poly = BitPoly::from_hex(&self.hex, self.k).map_err(|e| e.to_string())?;
        if self.hex != poly.to_hex() {
            return Err(format!("hex {:?} is not canonical uppercase", self.hex));
        }
        if poly.weight() != self.ones {
            return Err(format!(
                "hex {} has {} ones, not {}",
                self.hex,
                poly.weight(),
                self.ones
            ));
        }
        let singly = self.gamma.is_some() && self.beta.is_some() && self.alpha.is_none();
        let doubly = self.alpha.is_some()
            && self.gamma.is_none()
            && self.beta.is_none()
            && self.enumerator_type.is_none();
        let shape_ok = match self.family {
            Family::SinglyEven => singly,
            Family::DoublyEven => doubly,
        };
        if !shape_ok {
            return Err(format!(
                "parameter fields do not fit a {} record",
                self.family
            ));
        }
        Ok(())
    }
}

impl From<&CodeRecord> for RecordLine {
    fn from(r: &CodeRecord) -> Self {
        let (gamma, beta, alpha, enumerator_type) = match r.params {
            EnumeratorParams::SinglyEven {
                enumerator_type,
                gamma,
                beta,
            } => (
                Some(gamma),
                Some(beta),
                None,
                Some(format!("W72_{enumerator_type}")),
            ),
            EnumeratorParams::DoublyEven { alpha } => (None, None, Some(alpha), None),
        };
        RecordLine {
            family: r.family,
            k: r.constraint_length,
            hex: r.hex(),
            ones: r.ones(),
            d: r.d,
            gamma,
            beta,
            alpha,
            enumerator_type,
            dist_sha: r.dist.digest(),
        }
    }
}

pub fn write_records<W: Write>(mut out: W, records: &[CodeRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, &RecordLine::from(r))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a results JSONL; blank lines are skipped.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<RecordLine>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RecordLine = serde_json::from_str(&line).map_err(|e| Error::Record {
            line: i + 1,
            msg: e.to_string(),
        })?;
        rec.validate()
            .map_err(|msg| Error::Record { line: i + 1, msg })?;
        out.push(rec);
    }
    Ok(out)
}

/// Reads a generator matrix written as rows of `0`/`1` characters. Blank
/// lines, `#` comments and whitespace inside a row are ignored.
pub fn parse_raw_matrix(text: &str) -> Result<GenMatrix> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let bits: String = body.chars().filter(|c| !c.is_whitespace()).collect();
        if bits.is_empty() {
            continue;
        }
        let row: BitVec = bits
            .parse()
            .map_err(|e: Error| Error::Matrix(format!("line {}: {e}", i + 1)))?;
        rows.push(row);
    }
    GenMatrix::from_rows(rows)
}

pub fn render_matrix(g: &GenMatrix) -> String {
    g.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    Match,
    /// Computed `(param1, param2)` differs from the fixture.
    Mismatch {
        computed: (i64, i64),
        d: u32,
    },
    /// No result for this `(family, K, hex)`.
    Missing,
    /// Rebuilding or verifying failed.
    Failed(String),
}

#[derive(Debug, Clone, Default)]
pub struct TableReport {
    pub rows: Vec<(FixtureRow, RowStatus)>,
}

impl TableReport {
    fn count(&self, f: impl Fn(&RowStatus) -> bool) -> usize {
        self.rows.iter().filter(|(_, s)| f(s)).count()
    }

    pub fn matches(&self) -> usize {
        self.count(|s| *s == RowStatus::Match)
    }

    pub fn mismatches(&self) -> usize {
        self.count(|s| matches!(s, RowStatus::Mismatch { .. } | RowStatus::Failed(_)))
    }

    pub fn missing(&self) -> usize {
        self.count(|s| *s == RowStatus::Missing)
    }

    pub fn is_clean(&self) -> bool {
        self.matches() == self.rows.len()
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (row, status) in &self.rows {
            match status {
                RowStatus::Match => writeln!(f, "match     line {}: {row}", row.line)?,
                RowStatus::Mismatch { computed, d } => writeln!(
                    f,
                    "MISMATCH  line {}: {row}; computed ({}, {}) d={d}",
                    row.line, computed.0, computed.1
                )?,
                RowStatus::Missing => writeln!(f, "missing   line {}: {row}", row.line)?,
                RowStatus::Failed(e) => writeln!(f, "FAILED    line {}: {row}; {e}", row.line)?,
            }
        }
        write!(
            f,
            "{} rows: {} match, {} mismatch, {} missing",
            self.rows.len(),
            self.matches(),
            self.mismatches(),
            self.missing()
        )
    }
}

fn status_for(row: &FixtureRow, key: Option<(i64, i64)>, d: u32) -> RowStatus {
    match key {
        Some(k) if k == row.params && d == 12 => RowStatus::Match,
        Some(k) => RowStatus::Mismatch { computed: k, d },
        None => RowStatus::Failed("record lacks enumerator parameters".into()),
    }
}

/// Compares fixture rows with previously computed records, matched on
/// `(family, K, hex)`. A record for the reversed polynomial also matches:
/// searches keep one of each reversal pair, the tables do not always list
/// the same one.
pub fn compare_records(rows: &[FixtureRow], records: &[RecordLine]) -> TableReport {
    let rows = rows
        .iter()
        .map(|row| {
            let reversed = row
                .poly
                .reverse(row.constraint_length)
                .expect("fixture polynomial fits its constraint length")
                .to_hex();
            let same = |r: &&RecordLine| r.family == row.family && r.k == row.constraint_length;
            let found = records
                .iter()
                .filter(same)
                .find(|r| r.hex == row.hex)
                .or_else(|| records.iter().filter(same).find(|r| r.hex == reversed));
            let status = match found {
                Some(r) => status_for(row, r.param_key(), r.d),
                None => RowStatus::Missing,
            };
            (row.clone(), status)
        })
        .collect();
    TableReport { rows }
}

/// Rebuilds each row and compares freshly computed parameters; `verify` is
/// called once per row in order.
pub fn verify_rows(
    rows: &[FixtureRow],
    mut verify: impl FnMut(&FixtureRow) -> Result<CodeRecord>,
) -> TableReport {
    let rows = rows
        .iter()
        .map(|row| {
            let status = match verify(row) {
                Ok(rec) => status_for(row, Some(rec.param_key()), rec.d),
                Err(e) => RowStatus::Failed(e.to_string()),
            };
            (row.clone(), status)
        })
        .collect();
    TableReport { rows }
}

//! Exact big-integer partition counters.
//!
//! Every table here is a ground-truth oracle for the asymptotic side of the
//! crate: `p(N)`, `p(N, t)` (no part divisible by `t + 1`), partitions with
//! bounded part multiplicity, and `t`-core counts. All rows are computed by
//! coin-style dynamic programs over exact integers; a brute-force partition
//! enumerator is included so the DPs can be validated against direct listing.

use std::fmt;
use std::io::{self, Write};

use rug::Integer;

/// Arbitrary-precision nonnegative count.
pub type BigCount = Integer;

/// Default cap on `max_n`; beyond this the big-integer rows dominate memory.
pub const DEFAULT_CAPACITY: u64 = 100_000;

/// Brute-force enumeration guard for [`enumerate_partitions`].
pub const ENUMERATION_LIMIT: u64 = 40;

/// Which counting problem a [`CountTable`] row answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// `p(N)`: unrestricted partitions.
    Unrestricted,
    /// `p(N, t)`: partitions with no part divisible by `t + 1`.
    Regular { t: u64 },
    /// Partitions in which each part occurs at most `t` times.
    BoundedMultiplicity { t: u64 },
    /// `c_t(N)`: partitions with no hook of length `t`.
    TCore { t: u64 },
}

/// A table of counts indexed by `0..=max_n` for one [`TableKind`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    kind: TableKind,
    row: Vec<BigCount>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountError {
    /// `max_n` exceeds the configured capacity limit.
    Capacity { requested: u64, limit: u64 },
    /// Parameter outside the operation's domain.
    Domain(String),
    /// Brute-force enumeration requested beyond [`ENUMERATION_LIMIT`].
    EnumerationGuard { requested: u64 },
}

impl fmt::Display for CountError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountError::Capacity { requested, limit } => {
                write!(f, "max_n = {requested} exceeds capacity limit {limit}")
            }
            CountError::Domain(msg) => write!(f, "domain error: {msg}"),
            CountError::EnumerationGuard { requested } => write!(
                f,
                "enumeration of partitions of {requested} exceeds guard {ENUMERATION_LIMIT}"
            ),
        }
    }
}

impl std::error::Error for CountError {}

impl CountTable {
    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn max_n(&self) -> u64 {
        (self.row.len() - 1) as u64
    }

    pub fn get(&self, n: u64) -> &BigCount {
        &self.row[n as usize]
    }

    pub fn row(&self) -> &[BigCount] {
        &self.row
    }

    /// Writes the table as CSV: header `N,count`, one decimal integer per
    /// row, LF line endings.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(b"N,count\n")?;
        for (n, c) in self.row.iter().enumerate() {
            writeln!(out, "{n},{c}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

fn check_capacity(max_n: u64, limit: u64) -> Result<(), CountError> {
    if max_n > limit {
        Err(CountError::Capacity {
            requested: max_n,
            limit,
        })
    } else {
        Ok(())
    }
}

/// `row[n] += row[n - part]` for ascending `n`: multiplies the generating
/// function by `1 / (1 - q^part)`.
fn mul_geometric(row: &mut [Integer], part: usize) {
    for n in part..row.len() {
        let add = row[n - part].clone();
        row[n] += add;
    }
}

/// `row[n] -= row[n - m]` for descending `n`: multiplies by `(1 - q^m)`.
fn mul_one_minus(row: &mut [Integer], m: usize) {
    for n in (m..row.len()).rev() {
        let sub = row[n - m].clone();
        row[n] -= sub;
    }
}

/// `p(N)` for `0 <= N <= max_n`.
pub fn count_partitions(max_n: u64) -> Result<CountTable, CountError> {
    count_partitions_with_limit(max_n, DEFAULT_CAPACITY)
}

pub fn count_partitions_with_limit(max_n: u64, limit: u64) -> Result<CountTable, CountError> {
    check_capacity(max_n, limit)?;
    let len = max_n as usize + 1;
    let mut row = vec![Integer::new(); len];
    row[0] = Integer::from(1);
    for part in 1..len {
        mul_geometric(&mut row, part);
    }
    Ok(CountTable {
        kind: TableKind::Unrestricted,
        row,
    })
}

/// `p(N, t)` for `0 <= N <= max_n`: partitions with no part divisible by
/// `t + 1`.
pub fn count_regular(max_n: u64, t: u64) -> Result<CountTable, CountError> {
    count_regular_with_limit(max_n, t, DEFAULT_CAPACITY)
}

pub fn count_regular_with_limit(max_n: u64, t: u64, limit: u64) -> Result<CountTable, CountError> {
    if t < 1 {
        return Err(CountError::Domain("count_regular requires t >= 1".into()));
    }
    check_capacity(max_n, limit)?;
    let len = max_n as usize + 1;
    let modulus = (t + 1) as usize;
    let mut row = vec![Integer::new(); len];
    row[0] = Integer::from(1);
    for part in 1..len {
        if part % modulus != 0 {
            mul_geometric(&mut row, part);
        }
    }
    Ok(CountTable {
        kind: TableKind::Regular { t },
        row,
    })
}

/// Partitions of `N` in which each part occurs at most `t` times.
pub fn count_bounded_multiplicity(max_n: u64, t: u64) -> Result<CountTable, CountError> {
    count_bounded_multiplicity_with_limit(max_n, t, DEFAULT_CAPACITY)
}

pub fn count_bounded_multiplicity_with_limit(
    max_n: u64,
    t: u64,
    limit: u64,
) -> Result<CountTable, CountError> {
    if t < 1 {
        return Err(CountError::Domain(
            "count_bounded_multiplicity requires t >= 1".into(),
        ));
    }
    check_capacity(max_n, limit)?;
    let len = max_n as usize + 1;
    let mut row = vec![Integer::new(); len];
    row[0] = Integer::from(1);
    // Per part: (1 - q^{(t+1) part}) / (1 - q^part) = 1 + q^part + ... + q^{t part}.
    for part in 1..len {
        mul_geometric(&mut row, part);
        if let Some(cap) = part.checked_mul(t as usize + 1) {
            if cap < len {
                mul_one_minus(&mut row, cap);
            }
        }
    }
    Ok(CountTable {
        kind: TableKind::BoundedMultiplicity { t },
        row,
    })
}

/// `c_t(N)` for `0 <= N <= max_n`, by coefficient extraction from the
/// truncated product `prod (1 - q^{t n})^t / (1 - q^n)`. Factors with
/// exponent beyond `max_n` cannot affect the kept coefficients.
pub fn count_t_core(max_n: u64, t: u64) -> Result<CountTable, CountError> {
    count_t_core_with_limit(max_n, t, DEFAULT_CAPACITY)
}

pub fn count_t_core_with_limit(max_n: u64, t: u64, limit: u64) -> Result<CountTable, CountError> {
    if t < 2 {
        return Err(CountError::Domain("count_t_core requires t >= 2".into()));
    }
    check_capacity(max_n, limit)?;
    let len = max_n as usize + 1;
    let mut row = vec![Integer::new(); len];
    row[0] = Integer::from(1);
    for part in 1..len {
        mul_geometric(&mut row, part);
    }
    for n in 1..len {
        match n.checked_mul(t as usize) {
            Some(m) if m < len => {
                for _ in 0..t {
                    mul_one_minus(&mut row, m);
                }
            }
            _ => break,
        }
    }
    debug_assert!(row.iter().all(|c| *c >= 0), "t-core coefficients negative");
    Ok(CountTable {
        kind: TableKind::TCore { t },
        row,
    })
}

/// All partitions of `n` (nonincreasing part tuples) satisfying `filter`,
/// in ascending lexicographic order. Guarded by [`ENUMERATION_LIMIT`].
pub fn enumerate_partitions<F>(n: u64, mut filter: F) -> Result<Vec<Vec<u64>>, CountError>
where
    F: FnMut(&[u64]) -> bool,
{
    if n > ENUMERATION_LIMIT {
        return Err(CountError::EnumerationGuard { requested: n });
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    descend(n, n, &mut current, &mut |parts: &[u64]| {
        if filter(parts) {
            out.push(parts.to_vec());
        }
    });
    Ok(out)
}

/// Emits partitions of `remaining` with parts `<= cap`, largest part first,
/// ascending in the first part so the overall order is lexicographic.
fn descend(remaining: u64, cap: u64, current: &mut Vec<u64>, emit: &mut impl FnMut(&[u64])) {
    if remaining == 0 {
        emit(current);
        return;
    }
    for first in 1..=remaining.min(cap) {
        current.push(first);
        descend(remaining - first, first, current, emit);
        current.pop();
    }
}

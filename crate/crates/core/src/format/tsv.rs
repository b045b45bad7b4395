//! Tab-separated λ*-interval views: a `lo\thi\tvalue` header, then one row
//! per maximal run of equal values, rationals written `num/den`.

use std::fmt::Display;

use num_rational::BigRational;

use super::ParseError;
use crate::group::Prime;
use crate::mask::{Scalar, StepTable};
use crate::set::CylinderSet;
use crate::verdict::fmt_rational;

pub const HEADER: &str = "lo\thi\tvalue";

/// Rows in increasing order; adjacent rows with equal values are merged.
pub fn write_rows<V: Display + PartialEq>(
    rows: impl IntoIterator<Item = (BigRational, BigRational, V)>,
) -> String {
    let mut merged: Vec<(BigRational, BigRational, V)> = Vec::new();
    for (lo, hi, v) in rows {
        match merged.last_mut() {
            Some(last) if last.2 == v && last.1 == lo => last.1 = hi,
            _ => merged.push((lo, hi, v)),
        }
    }
    let mut out = format!("{HEADER}\n");
    for (lo, hi, v) in merged {
        out.push_str(&format!("{}\t{}\t{v}\n", fmt_rational(&lo), fmt_rational(&hi)));
    }
    out
}

/// The λ*-image of a set, each row with value `1`.
pub fn write_set_intervals(set: &CylinderSet) -> String {
    write_rows(set.intervals().into_iter().map(|(lo, hi)| (lo, hi, 1)))
}

/// The cells of a step table with their values.
pub fn write_table_intervals<S: Scalar>(table: &StepTable<S>) -> String {
    write_rows(table.rows())
}

/// Reads back the rows with value `1` of an interval view as a set.
pub fn parse_intervals(prime: Prime, text: &str) -> Result<CylinderSet, ParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        _ => return Err(ParseError::new(1, 1, format!("expected header `{}`", HEADER.escape_default()))),
    }
    let mut set = CylinderSet::empty(prime);
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(ParseError::new(i + 1, 1, "expected three tab-separated fields"));
        }
        let mut column = 1;
        let mut ends = Vec::new();
        for f in &fields[..2] {
            let r: BigRational = f
                .parse()
                .map_err(|_| ParseError::new(i + 1, column, format!("`{f}` is not a rational")))?;
            ends.push(r);
            column += f.chars().count() + 1;
        }
        if fields[2] != "1" {
            continue;
        }
        let piece = CylinderSet::from_interval(prime, &ends[0], &ends[1])
            .map_err(|e| ParseError::new(i + 1, 1, e.to_string()))?;
        if !set.is_disjoint(&piece) {
            return Err(ParseError::new(i + 1, 1, "row overlaps an earlier row"));
        }
        set = set.union(&piece);
    }
    Ok(set)
}

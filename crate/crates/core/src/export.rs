//! Text renderings of triangles.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::parse_rational;
use crate::polyring::{fmt_rational, BigRational};
use crate::triangles::{FamilyTag, Triangle};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Plain,
    Csv,
    Json,
    Oeis,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Format::Plain),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "oeis" => Ok(Format::Oeis),
            _ => Err(Error::InvalidArgument(format!(
                "unknown format `{s}` (expected plain, csv, json or oeis)"
            ))),
        }
    }
}

pub fn render(t: &Triangle, format: Format) -> String {
    match format {
        Format::Plain => render_plain(t),
        Format::Csv => render_csv(t),
        Format::Json => render_json(t),
        Format::Oeis => render_oeis(t),
    }
}

// Trailing zero columns dropped, but never the whole row.
fn trimmed(row: &[BigRational]) -> &[BigRational] {
    let keep = row
        .iter()
        .rposition(|x| !num_traits::Zero::is_zero(x))
        .map_or(1, |i| i + 1);
    &row[..keep]
}

fn join(row: &[BigRational]) -> String {
    row.iter().map(fmt_rational).collect::<Vec<_>>().join(",")
}

/// One row per line, comma separated, trailing zeros dropped.
pub fn render_plain(t: &Triangle) -> String {
    let mut out = String::new();
    for row in t.rows() {
        out.push_str(&join(trimmed(row)));
        out.push('\n');
    }
    out
}

/// Like [`render_plain`] but starting at row 1, as sequence databases list
/// these triangles; a triangle with only row 0 prints that row.
pub fn render_oeis(t: &Triangle) -> String {
    let skip = usize::from(t.n_max() > 0);
    let mut out = String::new();
    for row in &t.rows()[skip..] {
        out.push_str(&join(trimmed(row)));
        out.push('\n');
    }
    out
}

/// `n,k,value` for every stored cell.
pub fn render_csv(t: &Triangle) -> String {
    let mut out = String::from("n,k,value\n");
    for (n, row) in t.rows().iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            let _ = writeln!(out, "{n},{k},{}", fmt_rational(x));
        }
    }
    out
}

/// Serialized form of a triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangleDoc {
    pub family: FamilyTag,
    pub params: [String; 6],
    pub rows: Vec<Vec<String>>,
}

pub fn to_doc(t: &Triangle) -> TriangleDoc {
    TriangleDoc {
        family: t.family().clone(),
        params: t.params().into(),
        rows: t
            .rows()
            .iter()
            .map(|r| r.iter().map(fmt_rational).collect())
            .collect(),
    }
}

pub fn render_json(t: &Triangle) -> String {
    let mut s = serde_json::to_string_pretty(&to_doc(t)).expect("triangle serializes");
    s.push('\n');
    s
}

fn canonical_rational(s: &str) -> Result<BigRational> {
    let q = parse_rational(s)?;
    if fmt_rational(&q) != s {
        return Err(Error::InvalidArgument(format!(
            "`{s}` is not in lowest terms / canonical form"
        )));
    }
    Ok(q)
}

/// Inverse of [`render_json`]. Only canonical documents are accepted, so a
/// decoded triangle re-renders byte for byte.
pub fn parse_json(src: &str) -> Result<Triangle> {
    let doc: TriangleDoc =
        serde_json::from_str(src).map_err(|e| Error::InvalidArgument(format!("json: {e}")))?;
    if doc.rows.is_empty() {
        return Err(Error::InvalidArgument("triangle has no rows".into()));
    }
    // Re-serializing must reproduce the input value; this rejects
    // non-canonical numbers inside the family tag.
    let value: serde_json::Value =
        serde_json::from_str(src).map_err(|e| Error::InvalidArgument(format!("json: {e}")))?;
    let family_value = serde_json::to_value(&doc.family).expect("family serializes");
    if value.get("family") != Some(&family_value) {
        return Err(Error::InvalidArgument("family tag is not in canonical form".into()));
    }
    let params: [String; 6] = doc.family.params().into();
    if params != doc.params {
        return Err(Error::InvalidArgument(format!(
            "params {:?} do not match family {}",
            doc.params,
            doc.family.name()
        )));
    }
    let mut rows = Vec::with_capacity(doc.rows.len());
    for (n, row) in doc.rows.iter().enumerate() {
        if row.len() != n + 1 {
            return Err(Error::InvalidArgument(format!(
                "row {n} has {} entries, expected {}",
                row.len(),
                n + 1
            )));
        }
        rows.push(row.iter().map(|s| canonical_rational(s)).collect::<Result<Vec<_>>>()?);
    }
    Ok(Triangle::from_rows(doc.family, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangles::{recurrence_triangle, second_order_eulerian, whitney_eulerian};
    use crate::TriangleParams;

    #[test]
    fn oeis_and_plain() {
        let t = whitney_eulerian(1, 1, 4).unwrap();
        assert_eq!(render_oeis(&t), "1\n1,1\n1,4,1\n1,11,11,1\n");
        let t = recurrence_triangle(&TriangleParams::from_ints([0, 1, 0, 1, 0, 0]), 0);
        assert_eq!(render_plain(&t), "1\n");
        assert_eq!(render_oeis(&t), "1\n");
        let t = second_order_eulerian(2, 3).unwrap();
        assert_eq!(render_plain(&t).lines().last(), Some("1,8,6"));
        // a row of zeros keeps one entry
        let t = recurrence_triangle(&TriangleParams::from_ints([0, 0, 0, 0, 0, 0]), 2);
        assert_eq!(render_plain(&t), "1\n0\n0\n");
    }

    #[test]
    fn csv_cells() {
        let t = recurrence_triangle(&TriangleParams::new([
            crate::polyring::rational(1, 2),
            crate::polyring::int(0),
            crate::polyring::int(0),
            crate::polyring::int(1),
            crate::polyring::int(0),
            crate::polyring::int(0),
        ]), 1);
        assert_eq!(render_csv(&t), "n,k,value\n0,0,1\n1,0,1/2\n1,1,1\n");
    }

    #[test]
    fn json_round_trip() {
        for t in [
            whitney_eulerian(3, 2, 4).unwrap(),
            second_order_eulerian(2, 3).unwrap(),
            recurrence_triangle(&TriangleParams::from_ints([1, -2, 0, 3, 1, -1]), 3),
        ] {
            let s = render_json(&t);
            let back = parse_json(&s).unwrap();
            assert_eq!(back, t);
            assert_eq!(render_json(&back), s);
        }
    }

    #[test]
    fn json_rejects_noncanonical() {
        let t = whitney_eulerian(1, 1, 1).unwrap();
        let s = render_json(&t);
        assert!(parse_json(&s.replacen("\"1\"", "\"2/2\"", 1)).is_err());
        assert!(parse_json(&s.replacen("\"1\"", "\"+1\"", 1)).is_err());
        assert!(parse_json("{}").is_err());
        assert!(parse_json(&s.replace("\"m\": 1", "\"m\": 2")).is_err());
    }
}

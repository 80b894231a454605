//! Exact text and CSV renderings of types, search records and ratio tables.

use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;

use crate::curve::enumerate_exceptional_types;
use crate::group::GroupElement;
use crate::search::{RatioRow, SearchRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected csv or text)")),
        }
    }
}

/// `p/q`, or `p` when `q = 1`.
pub fn fraction(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `c(g-1)`, parenthesizing fractional coefficients.
pub fn genus_multiple(c: &BigRational) -> String {
    if c.denom().is_one() {
        format!("{}(g-1)", c.numer())
    } else {
        format!("({})(g-1)", fraction(c))
    }
}

pub fn elements(xs: &[GroupElement]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.index().to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub fn types_table(format: Format) -> String {
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("type,m_coefficient,order_coefficient\n");
    }
    for e in enumerate_exceptional_types() {
        let t = e.curve_type.tuple_string();
        match format {
            Format::Text => {
                let _ =
                    writeln!(out, "{t} {} {}", genus_multiple(&e.m_coefficient), genus_multiple(&e.order_coefficient));
            }
            Format::Csv => {
                let _ = writeln!(out, "\"{t}\",{},{}", fraction(&e.m_coefficient), fraction(&e.order_coefficient));
            }
        }
    }
    out
}

/// Provenance printed at the top of every search report.
#[derive(Debug, Clone, Default)]
pub struct ReportHeader {
    pub catalogs: Vec<String>,
    pub flags: Vec<String>,
}

impl ReportHeader {
    pub fn line(&self) -> String {
        let catalogs = if self.catalogs.is_empty() { "none".to_string() } else { self.catalogs.join(", ") };
        let flags = if self.flags.is_empty() { "none".to_string() } else { self.flags.join(" ") };
        format!("# catalog-limited: only groups from [{catalogs}] were searched; flags: {flags}")
    }
}

const RECORD_COLUMNS: &str = "group,order,type,genus,vector_classes,m,mu_bound,ratio,slope_all_threes,\
optimal_slope,optimal_r,truncated,best_vector,witness";

pub fn search_report(records: &[SearchRecord], header: &ReportHeader, format: Format) -> String {
    let mut out = header.line();
    out.push('\n');
    match format {
        Format::Csv => {
            out.push_str(RECORD_COLUMNS);
            out.push('\n');
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.write_record([
                    r.group.clone(),
                    r.group_order.to_string(),
                    r.curve_type.tuple_string(),
                    r.genus.to_string(),
                    r.vector_classes.to_string(),
                    r.m.to_string(),
                    r.mu_bound.to_string(),
                    fraction(&r.ratio),
                    fraction(&r.slope_all_threes),
                    fraction(&r.optimal_slope),
                    r.optimal_r.to_string(),
                    r.truncated.to_string(),
                    r.best_vector.to_string(),
                    elements(&r.witness),
                ])
                .expect("writing to memory");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 fields"));
        }
        Format::Text => {
            for r in records {
                let _ = write!(
                    out,
                    "record\n  group: {}\n  order: {}\n  type: {}\n  genus: {}\n  vector-classes: {}\n  m: {}\n  \
mu-bound: {}\n  ratio: {}\n  slope-all-threes: {}\n  optimal-slope: {} (r = {})\n  truncated: {}\n  \
best-vector: {}\n  witness: {}\n",
                    r.group,
                    r.group_order,
                    r.curve_type.tuple_string(),
                    r.genus,
                    r.vector_classes,
                    r.m,
                    r.mu_bound,
                    fraction(&r.ratio),
                    fraction(&r.slope_all_threes),
                    fraction(&r.optimal_slope),
                    r.optimal_r,
                    r.truncated,
                    r.best_vector,
                    elements(&r.witness),
                );
            }
        }
    }
    out
}

const RATIO_COLUMNS: &str = "type,max_ratio,witness_group,witness_genus,min_genus,max_genus,records,\
reference_ratio,reference_genus";

pub fn ratio_report(rows: &[RatioRow], header: &ReportHeader, format: Format) -> String {
    let mut out = header.line();
    out.push('\n');
    match format {
        Format::Csv => {
            out.push_str(RATIO_COLUMNS);
            out.push('\n');
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                let (ref_ratio, ref_genus) = match &r.reference {
                    Some((c, g)) => (fraction(c), g.to_string()),
                    None => (String::new(), String::new()),
                };
                w.write_record([
                    r.curve_type.tuple_string(),
                    fraction(&r.max_ratio),
                    r.witness_group.clone(),
                    r.witness_genus.to_string(),
                    r.min_genus.to_string(),
                    r.max_genus.to_string(),
                    r.records.to_string(),
                    ref_ratio,
                    ref_genus,
                ])
                .expect("writing to memory");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 fields"));
        }
        Format::Text => {
            for r in rows {
                let _ = write!(
                    out,
                    "{}: {} observed ({} at genus {}), genus {}..{}, {} record(s)",
                    r.curve_type.tuple_string(),
                    genus_multiple(&r.max_ratio),
                    r.witness_group,
                    r.witness_genus,
                    r.min_genus,
                    r.max_genus,
                    r.records,
                );
                match &r.reference {
                    Some((c, g)) => {
                        let _ = writeln!(out, "; known bound {} up to genus {g}", genus_multiple(c));
                    }
                    None => out.push('\n'),
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn fractions() {
        assert_eq!(fraction(&q(8, 3)), "8/3");
        assert_eq!(fraction(&q(6, 2)), "3");
        assert_eq!(fraction(&q(-4, 6)), "-2/3");
        assert_eq!(fraction(&q(0, 5)), "0");
        assert_eq!(genus_multiple(&q(12, 1)), "12(g-1)");
        assert_eq!(genus_multiple(&q(4, 3)), "(4/3)(g-1)");
    }

    #[test]
    fn types_text() {
        let t = types_table(Format::Text);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 8);
        assert_eq!(lines[0], "(2,2,2,3) 4(g-1) 12(g-1)");
        assert!(lines.contains(&"(2,3,9) 4(g-1) 36(g-1)"));
    }

    #[test]
    fn types_csv() {
        let t = types_table(Format::Csv);
        assert_eq!(t.lines().count(), 9);
        assert_eq!(t.lines().nth(2).unwrap(), "\"(2,3,7)\",12,84");
    }

    #[test]
    fn empty_reports_keep_header() {
        let h = ReportHeader { catalogs: vec!["builtin".into()], flags: vec!["max-genus=2".into()] };
        let text = search_report(&[], &h, Format::Text);
        assert_eq!(text, "# catalog-limited: only groups from [builtin] were searched; flags: max-genus=2\n");
        assert!(ratio_report(&[], &h, Format::Csv).starts_with("# catalog-limited"));
        assert!("xml".parse::<Format>().is_err());
    }
}

//! Exact per-row verdicts and their table, CSV and JSON renderings.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::rational::{approx, display_with_approx, Rational};

pub const SCHEMA: &str = "seminorm-lab/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Le,
    Lt,
    Ge,
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub label: String,
    pub lhs: Rational,
    pub relation: Relation,
    pub rhs: Rational,
    pub pass: bool,
}

impl Comparison {
    pub fn new(label: impl Into<String>, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        let pass = relation.holds(&lhs, &rhs);
        Self {
            label: label.into(),
            lhs,
            relation,
            rhs,
            pass,
        }
    }

    /// Same as [`Comparison::new`] but also requires `extra`.
    pub fn with_condition(
        label: impl Into<String>,
        lhs: Rational,
        relation: Relation,
        rhs: Rational,
        extra: bool,
    ) -> Self {
        let mut c = Self::new(label, lhs, relation, rhs);
        c.pass &= extra;
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowKey {
    Index(usize),
    Pair(usize, usize),
    /// A swept constant, with the witnessing index when one was found.
    Constant {
        value: Rational,
        at: Option<usize>,
    },
    Named(String),
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowKey::Index(n) => write!(f, "{n}"),
            RowKey::Pair(m, n) => write!(f, "({m},{n})"),
            RowKey::Constant { value, at: Some(n) } => write!(f, "{value}@n={n}"),
            RowKey::Constant { value, at: None } => write!(f, "{value}@none"),
            RowKey::Named(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub key: RowKey,
    pub comparisons: Vec<Comparison>,
}

impl ReportRow {
    pub fn new(key: RowKey, comparisons: Vec<Comparison>) -> Self {
        Self { key, comparisons }
    }

    pub fn pass(&self) -> bool {
        self.comparisons.iter().all(|c| c.pass)
    }
}

/// Rows of exact comparisons; `overall` and `first_failure` are derived
/// from the rows and cannot disagree with them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    title: String,
    notes: Vec<String>,
    rows: Vec<ReportRow>,
    overall: bool,
    first_failure: Option<RowKey>,
}

impl CertificateReport {
    pub fn new(title: impl Into<String>, rows: Vec<ReportRow>) -> Self {
        let first_failure = rows.iter().find(|r| !r.pass()).map(|r| r.key.clone());
        Self {
            title: title.into(),
            notes: Vec::new(),
            overall: first_failure.is_none(),
            rows,
            first_failure,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    pub fn overall(&self) -> bool {
        self.overall
    }

    pub fn first_failure(&self) -> Option<&RowKey> {
        self.first_failure.as_ref()
    }

    /// First index-keyed failure, when the failing row is keyed by an index.
    pub fn first_failing_index(&self) -> Option<usize> {
        match self.first_failure {
            Some(RowKey::Index(n)) => Some(n),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "key": r.key.to_string(),
                    "verdict": verdict(r.pass()),
                    "checks": r.comparisons.iter().map(comparison_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "title": self.title,
            "notes": self.notes,
            "overall": verdict(self.overall),
            "first_failure": self.first_failure.as_ref().map(|k| k.to_string()),
            "rows": rows,
        })
    }
}

fn comparison_json(c: &Comparison) -> Value {
    json!({
        "check": c.label,
        "lhs": c.lhs.to_string(),
        "relation": c.relation.symbol(),
        "rhs": c.rhs.to_string(),
        "lhs_approx": approx(&c.lhs),
        "rhs_approx": approx(&c.rhs),
        "verdict": verdict(c.pass),
    })
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// A titled group of reports: one run of a demo or check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportBundle {
    pub title: String,
    pub sections: Vec<CertificateReport>,
}

impl ReportBundle {
    pub fn new(title: impl Into<String>, sections: Vec<CertificateReport>) -> Self {
        Self {
            title: title.into(),
            sections,
        }
    }

    pub fn overall(&self) -> bool {
        self.sections.iter().all(CertificateReport::overall)
    }

    pub fn first_failure(&self) -> Option<(&str, &RowKey)> {
        self.sections
            .iter()
            .find_map(|s| s.first_failure().map(|k| (s.title(), k)))
    }

    pub fn summary_line(&self) -> String {
        match self.first_failure() {
            None => "overall: PASS".to_string(),
            Some((section, key)) => format!("overall: FAIL (first failure: {section}, {key})"),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "title": self.title,
            "overall": verdict(self.overall()),
            "sections": self.sections.iter().map(CertificateReport::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
                s.push('\n');
                s
            }
        }
    }

    fn render_table(&self) -> String {
        let mut out = format!("# {}\n", self.title);
        for section in &self.sections {
            out.push_str(&format!("\n## {}\n", section.title()));
            for note in section.notes() {
                out.push_str(&format!("note: {note}\n"));
            }
            let mut cells: Vec<[String; 6]> = vec![[
                "n".into(),
                "check".into(),
                "lhs".into(),
                "rel".into(),
                "rhs".into(),
                "verdict".into(),
            ]];
            for row in section.rows() {
                for c in &row.comparisons {
                    cells.push([
                        row.key.to_string(),
                        c.label.clone(),
                        display_with_approx(&c.lhs),
                        c.relation.symbol().into(),
                        display_with_approx(&c.rhs),
                        verdict(c.pass).into(),
                    ]);
                }
            }
            let mut widths = [0usize; 6];
            for line in &cells {
                for (w, cell) in widths.iter_mut().zip(line) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            for line in &cells {
                let mut text = String::new();
                for (k, (w, cell)) in widths.iter().zip(line).enumerate() {
                    if k + 1 == line.len() {
                        text.push_str(cell);
                    } else {
                        let pad = w - cell.chars().count();
                        text.push_str(cell);
                        text.push_str(&" ".repeat(pad + 2));
                    }
                }
                out.push_str(text.trim_end());
                out.push('\n');
            }
            out.push_str(&format!("section: {}\n", verdict(section.overall())));
        }
        out.push('\n');
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }

    fn render_csv(&self) -> String {
        let mut out =
            String::from("section,n,check,lhs,relation,rhs,lhs_approx,rhs_approx,verdict\n");
        for section in &self.sections {
            for row in section.rows() {
                for c in &row.comparisons {
                    let fields = [
                        section.title().to_string(),
                        row.key.to_string(),
                        c.label.clone(),
                        c.lhs.to_string(),
                        c.relation.symbol().to_string(),
                        c.rhs.to_string(),
                        approx(&c.lhs),
                        approx(&c.rhs),
                        verdict(c.pass).to_string(),
                    ];
                    let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
                    out.push_str(&line.join(","));
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown format `{other}` (expected table, csv or json)"
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn sample() -> ReportBundle {
        let rows = vec![
            ReportRow::new(
                RowKey::Index(1),
                vec![Comparison::new("N(x_n)", frac(1, 3), Relation::Le, int(1))],
            ),
            ReportRow::new(
                RowKey::Index(2),
                vec![Comparison::new("S(x_n)", int(0), Relation::Ge, int(1))],
            ),
            ReportRow::new(
                RowKey::Index(3),
                vec![Comparison::new("S(x_n)", int(0), Relation::Ge, int(1))],
            ),
        ];
        ReportBundle::new(
            "demo",
            vec![CertificateReport::new("claim, with comma", rows)],
        )
    }

    #[test]
    fn overall_tracks_rows() {
        let b = sample();
        let s = &b.sections[0];
        assert!(!s.overall());
        assert_eq!(s.first_failure(), Some(&RowKey::Index(2)));
        assert_eq!(s.first_failing_index(), Some(2));
        assert!(!b.overall());
        assert!(CertificateReport::new("empty", vec![]).overall());
    }

    #[test]
    fn renderings() {
        let b = sample();
        let csv = b.render(Format::Csv);
        assert!(csv.starts_with("section,n,check,lhs,relation,rhs,lhs_approx,rhs_approx,verdict\n"));
        assert!(csv.contains("\"claim, with comma\",1,N(x_n),1/3,<=,1,0.333333,1,PASS"));
        let json = b.to_json();
        assert_eq!(json["schema"], SCHEMA);
        assert_eq!(json["overall"], "FAIL");
        assert_eq!(json["sections"][0]["first_failure"], "2");
        let table = b.render(Format::Table);
        assert!(table.contains("1/3 (≈ 0.333333)"));
        assert!(table
            .trim_end()
            .ends_with("overall: FAIL (first failure: claim, with comma, 2)"));
    }

    #[test]
    fn row_keys() {
        assert_eq!(RowKey::Pair(3, 5).to_string(), "(3,5)");
        let k = RowKey::Constant {
            value: frac(1, 10),
            at: Some(11),
        };
        assert_eq!(k.to_string(), "1/10@n=11");
    }
}

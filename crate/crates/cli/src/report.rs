//! Report assembly: JSON values that echo site labels, plus the CSV
//! renderings of the tabular reports.
//!
//! JSON objects serialize with sorted keys, so identical runs produce
//! byte-identical reports.

use crate::input::LabelTable;
use latgas::criteria::CriterionReport;
use latgas::{C64, SiteSet};
use serde_json::{json, Value};

pub fn complex(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// A subset as an array of labels, in ascending site order.
pub fn site_list(labels: &LabelTable, set: SiteSet) -> Value {
    Value::from(labels.names(set))
}

pub fn criterion(labels: &LabelTable, report: &CriterionReport<f64>) -> Value {
    let per_site: Vec<Value> = report
        .per_site
        .iter()
        .map(|c| {
            json!({
                "site": labels.label(c.site),
                "lhs": c.lhs,
                "rhs": c.rhs,
                "satisfied": c.satisfied,
            })
        })
        .collect();
    json!({
        "criterion": report.criterion.as_str(),
        "overall": report.overall,
        "per_site": per_site,
    })
}

pub fn criterion_csv(labels: &LabelTable, report: &CriterionReport<f64>) -> String {
    let mut out = String::from("site,lhs,rhs,satisfied\n");
    for c in &report.per_site {
        out.push_str(&format!(
            "{},{},{},{}\n",
            csv_field(labels.label(c.site)),
            number(c.lhs),
            number(c.rhs),
            c.satisfied
        ));
    }
    out
}

/// The label of the first site whose check failed.
pub fn first_failing(labels: &LabelTable, report: &CriterionReport<f64>) -> Option<String> {
    report
        .per_site
        .iter()
        .find(|c| !c.satisfied)
        .map(|c| labels.label(c.site).to_string())
}

/// Numbers rendered exactly as in the JSON reports (shortest round-trip
/// form; non-finite values come out as `null`).
pub fn number(v: f64) -> String {
    Value::from(v).to_string()
}

/// Minimal CSV quoting: wrap fields containing a comma, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A subset as one CSV field: labels joined by spaces.
pub fn subset_field(labels: &LabelTable, set: SiteSet) -> String {
    csv_field(&labels.names(set).join(" "))
}

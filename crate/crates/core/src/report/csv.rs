//! Plot-ready two-column CSV export of report curves.
//!
//! Each criterion becomes one block: a `# criterion` line, a header, then rows.
//! Blocks are separated by a blank line. Reals are written in shortest
//! round-trip form, so parsing recovers the exact values.

use serde_json::Value;

use super::{Criterion, CriterionResult, Report};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub criterion: String,
    pub header: [String; 2],
    pub rows: Vec<(f64, f64)>,
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn pairs(v: &Value) -> Vec<(f64, f64)> {
    v.as_array()
        .map(|a| a.iter().map(|p| (num(&p[0]), num(&p[1]))).collect())
        .unwrap_or_default()
}

fn field_pairs(v: &Value, x: &str, y: &str) -> Vec<(f64, f64)> {
    v.as_array()
        .map(|a| a.iter().map(|p| (num(&p[x]), num(&p[y]))).collect())
        .unwrap_or_default()
}

fn curve(r: &CriterionResult) -> CsvTable {
    let v = &r.values;
    let (x, y, rows) = match r.criterion {
        Criterion::Coverage if v.get("rows").is_some() => ("N", "coverage", pairs(&v["rows"][0])),
        Criterion::Coverage => ("N", "coverage", pairs(&v["reports"][0]["samples"])),
        Criterion::Necessary => ("N", "coverage", field_pairs(&v["witnesses"], "n", "coverage")),
        Criterion::Separation => ("r", "ratio", field_pairs(&v["rows"], "r", "ratio")),
        Criterion::Gaps => (
            "n",
            "fraction_below",
            v.as_array()
                .map(|a| a.iter().map(|row| (num(&row["n"]), num(&row["fraction_below"][0]))).collect())
                .unwrap_or_default(),
        ),
        Criterion::Pairs => ("n", "pairs", field_pairs(v, "n", "count")),
        Criterion::Fa => {
            let z = v["z_grid"].as_array().cloned().unwrap_or_default();
            let f = v["values"].as_array().cloned().unwrap_or_default();
            ("z", "f_value", z.iter().zip(&f).map(|(a, b)| (num(a), num(b))).collect())
        }
        Criterion::Rigidity => ("n", "value", field_pairs(&v["samples"], "n", "value")),
        Criterion::Smallsep => ("n", "value", pairs(&v["samples"])),
        Criterion::Dichotomy => {
            let y = v["y_samples"].as_array().cloned().unwrap_or_default();
            let e = v["liminf_estimates"].as_array().cloned().unwrap_or_default();
            ("y", "estimate", y.iter().zip(&e).map(|(a, b)| (num(a), num(b))).collect())
        }
        Criterion::Limsup => ("k", "measure", pairs(v)),
    };
    CsvTable {
        criterion: r.criterion.to_string(),
        header: [x.to_string(), y.to_string()],
        rows,
    }
}

pub fn report_tables(report: &Report) -> Vec<CsvTable> {
    report.results.iter().map(curve).collect()
}

pub fn report_csv(report: &Report) -> String {
    let mut out = String::new();
    for (i, t) in report_tables(report).iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("# {}\n{},{}\n", t.criterion, t.header[0], t.header[1]));
        for (x, y) in &t.rows {
            out.push_str(&format!("{x},{y}\n"));
        }
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvTable>> {
    let mut tables: Vec<CsvTable> = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((i, line)) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        let criterion = line
            .strip_prefix("# ")
            .ok_or_else(|| Error::Input(format!("line {}: expected `# criterion`", i + 1)))?
            .to_string();
        let (hi, header) = lines
            .next()
            .ok_or_else(|| Error::Input(format!("line {}: missing header", i + 2)))?;
        let (x, y) = header
            .split_once(',')
            .ok_or_else(|| Error::Input(format!("line {}: malformed header", hi + 1)))?;
        let mut rows = Vec::new();
        while let Some(&(ri, row)) = lines.peek() {
            if row.trim().is_empty() || row.starts_with('#') {
                break;
            }
            lines.next();
            let parsed = row.split_once(',').and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)));
            rows.push(parsed.ok_or_else(|| Error::Input(format!("line {}: malformed row `{row}`", ri + 1)))?);
        }
        tables.push(CsvTable { criterion, header: [x.into(), y.into()], rows });
    }
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip_is_exact() {
        let text = "# fa\nz,f_value\n0.1,0.30000000000000004\n0.2,0.25\n\n# rigidity\nn,value\n144,0.4472135954999579\n";
        let t = parse_csv(text).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].rows[0].1, 0.1 + 0.2);
        assert_eq!(t[1].header, ["n".to_string(), "value".to_string()]);
        let mut again = String::new();
        for (i, table) in t.iter().enumerate() {
            if i > 0 {
                again.push('\n');
            }
            again.push_str(&format!("# {}\n{},{}\n", table.criterion, table.header[0], table.header[1]));
            for (x, y) in &table.rows {
                again.push_str(&format!("{x},{y}\n"));
            }
        }
        assert_eq!(again, text);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(parse_csv("# fa\nz,f_value\n0.1;0.2\n").is_err());
        assert!(parse_csv("z,f_value\n").is_err());
    }
}

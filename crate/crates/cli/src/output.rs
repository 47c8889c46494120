use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::Value;

use supconv_core::averageable::VerificationReport;
use supconv_core::cover::CoverSearch;
use supconv_core::{rational, ConstantReport, FunctionFile, InequalityReport, Rational, SubdivisionCell};

#[derive(Clone, Copy)]
pub enum Format {
    Json,
    Csv,
}

/// Rows for CSV output.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn opt(v: &Option<Rational>) -> String {
    v.as_ref().map(rational::format).unwrap_or_default()
}

impl Table {
    pub fn single(header: &[&str], row: Vec<String>) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: vec![row] }
    }

    pub fn function(file: &FunctionFile) -> Self {
        let mut header: Vec<String> = (0..=file.k).map(|i| format!("c{i}")).collect();
        header.extend(["num".into(), "den".into()]);
        let rows = file.values.iter().map(|r| r.iter().map(i64::to_string).collect()).collect();
        Table { header, rows }
    }

    pub fn constants(reports: &[ConstantReport]) -> Self {
        let header = ["k", "n", "c_thm1", "c_conj_sum", "c_conj_power", "asymptotic_lower"];
        let rows = reports
            .iter()
            .map(|r| {
                vec![
                    r.k.to_string(),
                    r.n.to_string(),
                    opt(&r.c_thm1),
                    rational::format(&r.c_conj_sum),
                    rational::format(&r.c_conj_power),
                    opt(&r.asymptotic_lower),
                ]
            })
            .collect();
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows }
    }

    pub fn cells(cells: &[SubdivisionCell]) -> Self {
        let header = ["m", "v", "value_on_cell", "relative_volume"];
        let rows = cells
            .iter()
            .map(|c| {
                let v: Vec<String> = c.v.entries().iter().map(u32::to_string).collect();
                vec![c.m.to_string(), v.join(" "), rational::format(&c.value_on_cell), rational::format(&c.relative_volume())]
            })
            .collect();
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows }
    }

    pub fn report(r: &InequalityReport) -> Self {
        let header = ["mode", "k", "n", "N", "lhs", "rhs_raw", "constant", "ratio", "threshold", "verdict"];
        let verdict = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let row = vec![
            r.mode.clone(),
            r.k.to_string(),
            r.n.to_string(),
            r.resolution.to_string(),
            rational::format(&r.lhs),
            rational::format(&r.rhs_raw),
            rational::format(&r.constant),
            opt(&r.ratio),
            rational::format(&r.threshold),
            verdict,
        ];
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: vec![row] }
    }

    pub fn checks(r: &VerificationReport) -> Self {
        let rows = r
            .checks
            .iter()
            .map(|c| vec![c.name.clone(), c.passed.to_string(), c.witness.as_ref().map(ToString::to_string).unwrap_or_default(), c.detail.clone()])
            .collect();
        Table { header: ["check", "passed", "witness", "detail"].iter().map(|s| s.to_string()).collect(), rows }
    }

    pub fn cover(s: &CoverSearch) -> Self {
        let header = ["level", "depth", "offset", "constant"];
        let rows = s
            .certificate
            .iter()
            .flat_map(|c| &c.family)
            .map(|t| {
                let u: Vec<String> = t.offset.iter().map(u64::to_string).collect();
                vec![t.level.to_string(), t.depth.to_string(), u.join(" "), rational::format(&t.constant)]
            })
            .collect();
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows }
    }
}

pub fn write(json: &Value, table: &Table, format: Format, out: Option<&Path>) -> Result<()> {
    let bytes = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(json)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            w.into_inner().context("flushing csv")?
        }
    };
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            Ok(stdout.flush()?)
        }
    }
}

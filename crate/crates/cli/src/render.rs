//! CSV and JSON rendering of coefficient tables. Coefficients are exact
//! `num/den` strings, integers without `/1`.

use clap::ValueEnum;
use cochar_core::partitions::Partition;
use cochar_core::series::{ExponentVector, Rational};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u32>,
    pub d: usize,
    pub cap: u32,
    pub version: String,
    pub catalog_checksum: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Row {
    Monomial { exponent: Vec<u32>, coeff: String },
    Multiplicity { lambda: String, m: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub meta: Meta,
    pub rows: Vec<Row>,
}

pub fn rational(r: &Rational) -> String {
    r.to_string()
}

/// Space-free comma list, e.g. `2,1`; empty for the empty partition.
pub fn partition(p: &Partition) -> String {
    p.parts().iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

pub fn monomial_row(e: &ExponentVector, c: &Rational) -> Row {
    Row::Monomial { exponent: e.as_slice().to_vec(), coeff: rational(c) }
}

pub fn multiplicity_row(p: &Partition, c: &Rational) -> Row {
    Row::Multiplicity { lambda: partition(p), m: rational(c) }
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("table serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut out = String::new();
                match self.rows.first() {
                    Some(Row::Multiplicity { .. }) => out.push_str("lambda,m\n"),
                    _ => out.push_str("exponent,coeff\n"),
                }
                for row in &self.rows {
                    let line = match row {
                        Row::Monomial { exponent, coeff } => {
                            let e: Vec<String> = exponent.iter().map(u32::to_string).collect();
                            format!("\"{}\",{coeff}\n", e.join(","))
                        }
                        Row::Multiplicity { lambda, m } => format!("\"{lambda}\",{m}\n"),
                    };
                    out.push_str(&line);
                }
                out
            }
        }
    }
}

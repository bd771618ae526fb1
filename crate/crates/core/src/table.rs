//! CSV and JSON tables of the special number families.

use std::io::Write;
use std::str::FromStr;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::{FamilyKind, ParameterPoint, SamplerConfig};
use crate::scalar::{approx_complex, PreciseComplex};
use crate::special::{special_table, SpecialFamily};
use crate::weights::ExactQ;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            other => Err(Error::InvalidParameter(format!("unknown table format {other:?}"))),
        }
    }
}

/// One table entry; `value` is set at trivial weights, `re`/`im` otherwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableEntry {
    pub family: String,
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
struct TableDoc<'a> {
    family: String,
    weights: &'a str,
    n_max: usize,
    seed: Option<u64>,
    entries: &'a [TableEntry],
}

fn exact_string(v: &BigRational) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        v.to_string()
    }
}

/// Entries `(n, k)` for `n = first_n..=n_max`, `k = 0..=n`. Non-trivial weights
/// are evaluated at the parameter point drawn from `seed`.
pub fn table_entries(family: SpecialFamily, n_max: usize, kind: FamilyKind, seed: u64) -> Result<Vec<TableEntry>> {
    let name = family.name();
    if kind == FamilyKind::Trivial {
        let t = special_table(family, n_max, &ExactQ::trivial())?;
        return Ok(t
            .rows
            .iter()
            .flat_map(|(n, row)| {
                row.iter().enumerate().map(|(k, v)| TableEntry {
                    family: name.clone(),
                    n: *n,
                    k,
                    value: Some(exact_string(v)),
                    re: None,
                    im: None,
                })
            })
            .collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = ParameterPoint::sample(&mut rng, &SamplerConfig::with_seed(seed));
    // evaluated in double-double and rounded once, since the sums cancel heavily
    let t = special_table(family, n_max, &point.family(kind)?.precise())?;
    Ok(t.rows
        .iter()
        .flat_map(|(n, row)| {
            row.iter().enumerate().map(|(k, v): (usize, &PreciseComplex)| {
                let v = approx_complex(*v);
                TableEntry { family: name.clone(), n: *n, k, value: None, re: Some(v.re), im: Some(v.im) }
            })
        })
        .collect())
}

pub fn emit_table<W: Write>(
    family: SpecialFamily,
    n_max: usize,
    kind: FamilyKind,
    seed: u64,
    format: TableFormat,
    out: W,
) -> Result<()> {
    let entries = table_entries(family, n_max, kind, seed)?;
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if kind == FamilyKind::Trivial {
                w.write_record(["family", "n", "k", "value"])?;
                for e in &entries {
                    w.write_record([e.family.clone(), e.n.to_string(), e.k.to_string(), e.value.clone().unwrap_or_default()])?;
                }
            } else {
                w.write_record(["family", "n", "k", "re", "im"])?;
                for e in &entries {
                    let (re, im) = (e.re.unwrap_or(f64::NAN), e.im.unwrap_or(f64::NAN));
                    w.write_record([e.family.clone(), e.n.to_string(), e.k.to_string(), format!("{re:e}"), format!("{im:e}")])?;
                }
            }
            w.flush()?;
        }
        TableFormat::Json => {
            let doc = TableDoc {
                family: family.name(),
                weights: kind.name(),
                n_max,
                seed: (kind != FamilyKind::Trivial).then_some(seed),
                entries: &entries,
            };
            serde_json::to_writer_pretty(out, &doc)?;
        }
    }
    Ok(())
}

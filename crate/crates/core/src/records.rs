//! Line-oriented result files.
//!
//! JSONL lines look like `{"n":3,"k":1,"lambda":[4,1,1],"coeff":"-3"}`; the
//! coefficient is a decimal string so values beyond 64 bits survive. CSV
//! files have the header `n,k,lambda,coeff` with the parts of `lambda`
//! separated by single spaces.

use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coefficients::SchurExpansion;
use crate::error::{Error, Result};
use crate::Coefficient;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub n: usize,
    pub k: usize,
    pub lambda: Vec<i64>,
    #[serde(serialize_with = "coeff_to_string", deserialize_with = "coeff_from_string")]
    pub coeff: Coefficient,
}

fn coeff_to_string<S: Serializer>(c: &Coefficient, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

fn coeff_from_string<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Coefficient, D::Error> {
    let s = String::deserialize(d)?;
    Coefficient::from_str(&s).map_err(serde::de::Error::custom)
}

impl ResultRecord {
    pub fn to_jsonl(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn from_jsonl(line: &str) -> Result<Self> {
        Ok(serde_json::from_str(line)?)
    }

    pub fn to_csv(&self) -> String {
        let parts: Vec<String> = self.lambda.iter().map(i64::to_string).collect();
        format!("{},{},{},{}", self.n, self.k, parts.join(" "), self.coeff)
    }

    pub fn from_csv(line: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed CSV record: {line:?}"));
        let fields: Vec<&str> = line.split(',').collect();
        let [n, k, lambda, coeff] = fields.as_slice() else { return Err(bad()) };
        let lambda = if lambda.is_empty() {
            Vec::new()
        } else {
            lambda.split(' ').map(|p| p.parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        Ok(Self {
            n: n.parse().map_err(|_| bad())?,
            k: k.parse().map_err(|_| bad())?,
            lambda,
            coeff: Coefficient::from_str(coeff).map_err(|_| bad())?,
        })
    }
}

pub const CSV_HEADER: &str = "n,k,lambda,coeff";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(Self::Jsonl),
            "csv" => Ok(Self::Csv),
            other => Err(Error::Parse(format!("unknown format {other:?} (expected jsonl or csv)"))),
        }
    }
}

pub fn expansion_records(e: &SchurExpansion) -> Vec<ResultRecord> {
    e.terms()
        .iter()
        .map(|(p, c)| ResultRecord { n: e.n, k: e.k, lambda: p.parts().to_vec(), coeff: c.clone() })
        .collect()
}

pub fn write_records<W: Write>(mut w: W, records: &[ResultRecord], format: Format) -> Result<()> {
    if format == Format::Csv {
        writeln!(w, "{CSV_HEADER}")?;
    }
    for r in records {
        match format {
            Format::Jsonl => writeln!(w, "{}", r.to_jsonl())?,
            Format::Csv => writeln!(w, "{}", r.to_csv())?,
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: BufRead>(r: R, format: Format) -> Result<Vec<ResultRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.is_empty() || (format == Format::Csv && i == 0 && line == CSV_HEADER) {
            continue;
        }
        out.push(match format {
            Format::Jsonl => ResultRecord::from_jsonl(&line)?,
            Format::Csv => ResultRecord::from_csv(&line)?,
        });
    }
    Ok(out)
}

use std::io::{BufRead, Write};

use super::sweep::ExperimentRecord;
use crate::error::{Error, Result};
use crate::rational::{format_rational, format_real, parse_rational};

pub const CSV_COLUMNS: [&str; 12] = [
    "p",
    "alpha_realized",
    "beta_realized",
    "gamma",
    "family",
    "seed",
    "sizeA",
    "sizeB",
    "S",
    "normalized",
    "bound",
    "ratio",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(Error::Config(format!("unknown format `{other}` (csv or jsonl)"))),
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn emit_records<W: Write>(records: &[ExperimentRecord], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_COLUMNS).map_err(csv_err)?;
            for r in records {
                w.write_record([
                    r.p.to_string(),
                    format_real(r.alpha_realized),
                    format_real(r.beta_realized),
                    format_real(r.gamma),
                    r.family.clone(),
                    r.seed.to_string(),
                    r.size_a.to_string(),
                    r.size_b.to_string(),
                    r.s.to_string(),
                    format_rational(&r.normalized),
                    format_real(r.bound),
                    format_real(r.ratio),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r).map_err(|e| Error::Io(e.to_string()))?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

fn field<T: std::str::FromStr>(row: &csv::StringRecord, i: usize) -> Result<T> {
    let raw = row.get(i).unwrap_or("");
    raw.parse()
        .map_err(|_| Error::Precondition(format!("column {}: cannot parse `{raw}`", CSV_COLUMNS[i])))
}

/// Reads records back from either format; JSONL lines that are not records
/// (e.g. failure lines) are skipped.
pub fn read_records<R: BufRead>(input: R, format: Format) -> Result<Vec<ExperimentRecord>> {
    let mut out = Vec::new();
    match format {
        Format::Csv => {
            let mut rdr = csv::Reader::from_reader(input);
            let header = rdr.headers().map_err(csv_err)?.clone();
            if header.iter().ne(CSV_COLUMNS.iter().copied()) {
                return Err(Error::Precondition("unexpected CSV header".into()));
            }
            for row in rdr.records() {
                let row = row.map_err(csv_err)?;
                out.push(ExperimentRecord {
                    p: field(&row, 0)?,
                    alpha_realized: field(&row, 1)?,
                    beta_realized: field(&row, 2)?,
                    gamma: field(&row, 3)?,
                    family: row.get(4).unwrap_or("").to_string(),
                    seed: field(&row, 5)?,
                    size_a: field(&row, 6)?,
                    size_b: field(&row, 7)?,
                    s: field(&row, 8)?,
                    normalized: parse_rational(row.get(9).unwrap_or(""))?,
                    bound: field(&row, 10)?,
                    ratio: field(&row, 11)?,
                });
            }
        }
        Format::Jsonl => {
            for line in input.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let value: serde_json::Value =
                    serde_json::from_str(&line).map_err(|e| Error::Precondition(e.to_string()))?;
                if value.get("error").is_some() {
                    continue;
                }
                out.push(serde_json::from_value(value).map_err(|e| Error::Precondition(e.to_string()))?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{self, frac};

    fn sample() -> ExperimentRecord {
        ExperimentRecord {
            p: 5,
            alpha_realized: rational::round_real(2f64.ln() / 5f64.ln()),
            beta_realized: rational::round_real(2f64.ln() / 5f64.ln()),
            gamma: rational::round_real(2f64.ln() / 5f64.ln()),
            family: "interval/ap:1,1".into(),
            seed: 3,
            size_a: 2,
            size_b: 2,
            s: 10,
            normalized: frac(5u32, 8u32),
            bound: 14.5,
            ratio: rational::round_real(0.625 / 14.5),
        }
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        emit_records(&[], Format::Csv, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "p,alpha_realized,beta_realized,gamma,family,seed,sizeA,sizeB,S,normalized,bound,ratio\n"
        );
    }

    #[test]
    fn one_record_one_line() {
        let mut buf = Vec::new();
        emit_records(&[sample()], Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[1],
            "5,0.430676558073,0.430676558073,0.430676558073,\"interval/ap:1,1\",3,2,2,10,5/8,14.5,0.0431034482759"
        );
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(rdr.records().next().unwrap().unwrap().len(), 12);
    }

    #[test]
    fn round_trips() {
        for format in [Format::Csv, Format::Jsonl] {
            let mut buf = Vec::new();
            emit_records(&[sample(), sample()], format, &mut buf).unwrap();
            let back = read_records(buf.as_slice(), format).unwrap();
            assert_eq!(back, vec![sample(), sample()]);
        }
    }
}

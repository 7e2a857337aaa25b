use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sweep::{Param, RunRecord};

pub const CSV_HEADER: &str = "experiment,param_name,param_value,replicate,seed,entropy_bits";

/// 17 significant digits; parses back to the identical `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_records_to<W: Write>(out: W, records: &[RunRecord]) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.write_record([
            r.experiment.clone(),
            r.param.name().to_string(),
            format_float(r.param_value),
            r.replicate.to_string(),
            r.seed.to_string(),
            format_float(r.entropy_bits),
        ])?;
    }
    w.flush()
}

pub fn write_records(path: &Path, records: &[RunRecord]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_records_to(std::io::BufWriter::new(file), records).map_err(|e| Error::io(path, e))
}

pub fn read_records_from<R: Read>(input: R, path: &Path) -> Result<Vec<RunRecord>> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(input);
    let mut records = Vec::new();
    let mut saw_header = false;
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if !saw_header {
            let header: Vec<&str> = row.iter().collect();
            if header.join(",") != CSV_HEADER {
                return Err(parse_err(line, format!("expected header `{CSV_HEADER}`")));
            }
            saw_header = true;
            continue;
        }
        let field = |i: usize, name: &str| -> Result<&str> {
            row.get(i)
                .ok_or_else(|| parse_err(line, format!("missing field {name}")))
        };
        fn num<T: std::str::FromStr>(raw: &str, name: &str) -> std::result::Result<T, String> {
            raw.parse().map_err(|_| format!("invalid {name}: `{raw}`"))
        }
        let param: Param = field(1, "param_name")?
            .parse()
            .map_err(|e: Error| parse_err(line, e.to_string()))?;
        records.push(RunRecord {
            experiment: field(0, "experiment")?.to_string(),
            param,
            param_value: num(field(2, "param_value")?, "param_value").map_err(|m| parse_err(line, m))?,
            replicate: num(field(3, "replicate")?, "replicate").map_err(|m| parse_err(line, m))?,
            seed: num(field(4, "seed")?, "seed").map_err(|m| parse_err(line, m))?,
            entropy_bits: num(field(5, "entropy_bits")?, "entropy_bits").map_err(|m| parse_err(line, m))?,
        });
    }
    if !saw_header {
        return Err(parse_err(1, "empty file".into()));
    }
    Ok(records)
}

pub fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_records_from(std::io::BufReader::new(file), path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<Vec<RunRecord>> {
        read_records_from(text.as_bytes(), Path::new("t.csv"))
    }

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(6.0), "6.0000000000000000e0");
    }

    #[test]
    fn bad_rows_report_line_numbers() {
        let good = format!("{CSV_HEADER}\nx,n,1e2,0,5,6.0\n");
        assert_eq!(parse(&good).unwrap().len(), 1);

        let err = parse(&format!("{CSV_HEADER}\nx,n,1e2,0,5,6.0\nx,n,oops,0,5,6.0\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse(&format!("{CSV_HEADER}\nx,q,1,0,5,6.0\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse(&format!("{CSV_HEADER}\nx,n,1,0\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. } | Error::Parse { line: 2, .. }), "{err}");
        let err = parse("a,b,c\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(parse("").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(
            rows in prop::collection::vec(
                (0usize..4, any::<f64>().prop_filter("finite", |v| v.is_finite()), 0usize..10, any::<u64>(), 0.0f64..8.0),
                0..20,
            )
        ) {
            let params = [Param::Alpha, Param::Beta, Param::S, Param::N];
            let records: Vec<RunRecord> = rows
                .into_iter()
                .map(|(p, v, r, seed, h)| RunRecord {
                    experiment: format!("exp{p}"),
                    param: params[p],
                    param_value: v,
                    replicate: r,
                    seed,
                    entropy_bits: h,
                })
                .collect();
            let mut buf = Vec::new();
            write_records_to(&mut buf, &records).unwrap();
            let back = read_records_from(buf.as_slice(), Path::new("mem")).unwrap();
            prop_assert_eq!(back, records);
        }
    }
}

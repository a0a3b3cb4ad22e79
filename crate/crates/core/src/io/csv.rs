//! Spectrum CSV: header `q,re_lambda,im_lambda`, one row per eigenvalue,
//! sorted by `q` ascending then real part descending, values in `{:.16e}`
//! (17 significant digits, exact round trip).

use crate::ed::SpectrumResult;
use crate::error::{Error, Result};
use crate::C64;
use std::io::Write;
use std::path::Path;

pub const SPECTRUM_HEADER: [&str; 3] = ["q", "re_lambda", "im_lambda"];

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn sorted_rows(spec: &SpectrumResult) -> Vec<(i32, C64)> {
    let mut rows: Vec<(i32, C64)> = spec.records.iter().map(|r| (r.q, r.lambda)).collect();
    rows.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(b.1.re.total_cmp(&a.1.re))
            .then(b.1.im.total_cmp(&a.1.im))
    });
    rows
}

pub fn write_spectrum<W: Write>(spec: &SpectrumResult, w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    let io = |e: csv::Error| Error::Io(e.to_string());
    out.write_record(SPECTRUM_HEADER).map_err(io)?;
    for (q, l) in sorted_rows(spec) {
        out.write_record([q.to_string(), fmt_f64(l.re), fmt_f64(l.im)]).map_err(io)?;
    }
    out.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn write_spectrum_csv(spec: &SpectrumResult, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    write_spectrum(spec, std::io::BufWriter::new(f)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_spectrum_csv(path: &Path) -> Result<Vec<(i32, C64)>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let header = rdr.headers().map_err(|e| Error::Io(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != SPECTRUM_HEADER {
        return Err(Error::Io(format!("{}: unexpected header {header:?}", path.display())));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
        let bad = |f: &str| Error::Io(format!("{}: bad field `{f}`", path.display()));
        let q: i32 = rec[0].parse().map_err(|_| bad(&rec[0]))?;
        let re: f64 = rec[1].parse().map_err(|_| bad(&rec[1]))?;
        let im: f64 = rec[2].parse().map_err(|_| bad(&rec[2]))?;
        rows.push((q, C64::new(re, im)));
    }
    Ok(rows)
}

/// Generic table writer with the same number formatting.
pub fn write_table<W: Write>(header: &[&str], rows: &[Vec<String>], w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    let io = |e: csv::Error| Error::Io(e.to_string());
    out.write_record(header).map_err(io)?;
    for r in rows {
        out.write_record(r).map_err(io)?;
    }
    out.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Seed roots from a CSV with columns `re,im`.
pub fn read_roots_csv(path: &Path) -> Result<Vec<C64>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
        if rec.len() != 2 {
            return Err(Error::Io(format!("{}: expected 2 columns, got {}", path.display(), rec.len())));
        }
        let re: f64 = rec[0].trim().parse().map_err(|_| Error::Io(format!("bad number `{}`", &rec[0])))?;
        let im: f64 = rec[1].trim().parse().map_err(|_| Error::Io(format!("bad number `{}`", &rec[1])))?;
        out.push(C64::new(re, im));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ed::{full_spectrum, Vectors};
    use crate::model::ModelParams;

    #[test]
    fn round_trip_is_bit_exact() {
        let m = ModelParams::new(1.0, 1.2, 0.2, 0.9, 6).unwrap();
        let spec = full_spectrum(&m, None, Vectors::None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_spectrum_csv(&spec, &path).unwrap();
        let back = read_spectrum_csv(&path).unwrap();
        assert_eq!(back, sorted_rows(&spec));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 50);
        assert!(text.starts_with("q,re_lambda,im_lambda\n") && !text.contains('\r'));
        for w in back.windows(2) {
            assert!(w[0].0 < w[1].0 || (w[0].0 == w[1].0 && w[0].1.re >= w[1].1.re));
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.5).parse::<f64>().unwrap(), -2.5);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(read_spectrum_csv(Path::new("/nonexistent/x.csv")), Err(Error::Io(_))));
    }
}

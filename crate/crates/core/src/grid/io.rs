//! Grid field CSV exchange format.
//!
//! Header `x,y,re,im,mask`, rows ordered by y then x. Floats are written with
//! 17 significant digits so a write/read cycle reproduces every f64 bit for
//! bit. Readers reconstruct the grid from the node coordinates and always
//! return a non-periodic spec.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::{ComplexGridField, GridSpec};
use crate::{Error, Result};

fn fmt(v: f64) -> String {
    // 1 + 16 mantissa digits = 17 significant digits, enough to round-trip.
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(field: &ComplexGridField, mut w: W) -> Result<()> {
    writeln!(w, "x,y,re,im,mask")?;
    let spec = field.spec;
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let z = spec.point(i, j);
            let v = field.get(i, j);
            let m = if field.is_valid(i, j) { 1 } else { 0 };
            writeln!(w, "{},{},{},{},{}", fmt(z.re), fmt(z.im), fmt(v.re), fmt(v.im), m)?;
        }
    }
    Ok(())
}

pub fn write_csv_path<P: AsRef<Path>>(field: &ComplexGridField, path: P) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_csv(field, std::io::BufWriter::new(f))
}

pub fn read_csv<R: Read>(r: R) -> Result<ComplexGridField> {
    let reader = BufReader::new(r);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty csv".into()))?
        .map_err(Error::Io)?;
    if header.trim() != "x,y,re,im,mask" {
        return Err(Error::Parse(format!("unexpected header `{header}`")));
    }
    let mut rows: Vec<(f64, f64, Complex64, bool)> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(Error::Io)?;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(Error::Parse(format!("row {}: expected 5 columns", lineno + 2)));
        }
        let p = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", lineno + 2)))
        };
        let mask = match cols[4].trim() {
            "1" => true,
            "0" => false,
            other => return Err(Error::Parse(format!("row {}: bad mask `{other}`", lineno + 2))),
        };
        rows.push((p(cols[0])?, p(cols[1])?, Complex64::new(p(cols[2])?, p(cols[3])?), mask));
    }
    if rows.is_empty() {
        return Err(Error::Parse("csv has no data rows".into()));
    }

    // Node coordinates written by this crate are bit-exact, so exact dedup works.
    let mut xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let (nx, ny) = (xs.len(), ys.len());
    if nx * ny != rows.len() {
        return Err(Error::Parse(format!(
            "rows ({}) do not form an {}×{} grid",
            rows.len(),
            nx,
            ny
        )));
    }
    let spec = GridSpec::new(xs[0], xs[nx - 1], ys[0], ys[ny - 1], nx, ny)?;
    let hx = spec.hx();
    let hy = spec.hy();
    let mut field = ComplexGridField::zeros(spec);
    for (x, y, v, m) in rows {
        let i = ((x - spec.x_min) / hx).round() as usize;
        let j = ((y - spec.y_min) / hy).round() as usize;
        if i >= nx || j >= ny || (spec.x(i) - x).abs() > 0.5 * hx || (spec.y(j) - y).abs() > 0.5 * hy {
            return Err(Error::Parse(format!("node ({x}, {y}) is not on a uniform grid")));
        }
        field.set(i, j, v, m);
    }
    Ok(field)
}

pub fn read_csv_path<P: AsRef<Path>>(path: P) -> Result<ComplexGridField> {
    let f = std::fs::File::open(path)?;
    read_csv(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn roundtrip_is_bit_identical() {
        let spec = GridSpec::square(-1.0, 1.0, 9).unwrap();
        let mut field = ComplexGridField::sample(spec, |z| (z * Complex64::new(0.3, 1.7)).exp() / 3.0);
        field.set(2, 3, Complex64::new(0.0, 0.0), false);
        let mut buf = Vec::new();
        write_csv(&field, &mut buf).unwrap();
        let back = read_csv(&buf[..]).unwrap();
        assert_eq!(back.spec.nx, 9);
        for j in 0..9 {
            for i in 0..9 {
                assert_eq!(back.get(i, j).re.to_bits(), field.get(i, j).re.to_bits());
                assert_eq!(back.get(i, j).im.to_bits(), field.get(i, j).im.to_bits());
                assert_eq!(back.is_valid(i, j), field.is_valid(i, j));
            }
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read_csv("nope\n".as_bytes()).is_err());
        assert!(read_csv("x,y,re,im,mask\n1,2,3\n".as_bytes()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn roundtrip_random_values(seed in 0u64..1000) {
            let spec = GridSpec::square(0.0, 1.0, 8).unwrap();
            let field = ComplexGridField::sample(spec, |z| {
                let t = z.re * 7919.0 + z.im * 104729.0 + seed as f64;
                Complex64::new((t.sin() * 1e10).tan(), t.cos() / 3.0)
            });
            let mut buf = Vec::new();
            write_csv(&field, &mut buf).unwrap();
            let back = read_csv(&buf[..]).unwrap();
            for k in 0..spec.len() {
                prop_assert_eq!(back.values()[k].re.to_bits(), field.values()[k].re.to_bits());
                prop_assert_eq!(back.values()[k].im.to_bits(), field.values()[k].im.to_bits());
            }
        }
    }
}

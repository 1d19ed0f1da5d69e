use std::fs;
use std::path::Path;

use super::{format_hex, parse_hex};
use crate::interval::{EndpointInterval, MidRadInterval};
use crate::matmul::{FpMatrix, IntervalMatrixMR};
use crate::{Error, Result};

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Io { path: Some(path.into()), source })
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: Some(path.into()), source })
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io { path: Some(path.into()), source })
}

/// Lines with content, `#` comments removed.
fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

/// Raw little-endian binary64 values.
pub fn decode_vector_binary(bytes: &[u8]) -> Result<Vec<f64>> {
    if bytes.len() % 8 != 0 {
        return Err(Error::Parse(format!("{} bytes is not a whole number of binary64 values", bytes.len())));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

pub fn encode_vector_binary(values: &[f64]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

/// One hexadecimal float per line.
pub fn parse_vector_text(text: &str) -> Result<Vec<f64>> {
    content_lines(text).map(parse_hex).collect()
}

pub fn format_vector_text(values: &[f64]) -> String {
    values.iter().map(|&v| format_hex(v) + "\n").collect()
}

/// Reads a vector: raw binary for a `.bin` extension, hexadecimal text
/// otherwise.
pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    if path.extension().is_some_and(|e| e == "bin") {
        decode_vector_binary(&read_bytes(path)?)
    } else {
        parse_vector_text(&read_text(path)?)
    }
}

/// Writes a vector in the format chosen by [`read_vector`].
pub fn write_vector(path: &Path, values: &[f64]) -> Result<()> {
    if path.extension().is_some_and(|e| e == "bin") {
        write_bytes(path, &encode_vector_binary(values))
    } else {
        write_bytes(path, format_vector_text(values).as_bytes())
    }
}

/// One interval literal per line, `[lo,hi]` or `<m;r>`; midpoint-radius
/// literals are converted outward.
pub fn parse_intervals_text(text: &str) -> Result<Vec<EndpointInterval>> {
    content_lines(text)
        .map(|l| {
            if l.starts_with('<') {
                Ok(l.parse::<MidRadInterval>()?.to_endpoints())
            } else {
                l.parse::<EndpointInterval>()
            }
        })
        .collect()
}

pub fn read_intervals(path: &Path) -> Result<Vec<EndpointInterval>> {
    parse_intervals_text(&read_text(path)?)
}

/// Header line `rows cols`, then row-major hexadecimal floats separated by
/// any whitespace.
pub fn parse_matrix(text: &str) -> Result<FpMatrix> {
    let mut tokens = content_lines(text).flat_map(str::split_whitespace);
    let mut dim = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {what} in matrix header")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad {what} in matrix header")))
    };
    let rows = dim("row count")?;
    let cols = dim("column count")?;
    let data = tokens.map(parse_hex).collect::<Result<Vec<_>>>()?;
    FpMatrix::new(rows, cols, data)
}

pub fn format_matrix(m: &FpMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&v| format_hex(v)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: &Path) -> Result<FpMatrix> {
    parse_matrix(&read_text(path)?)
}

pub fn write_matrix(path: &Path, m: &FpMatrix) -> Result<()> {
    write_bytes(path, format_matrix(m).as_bytes())
}

/// Interval matrix from a midpoint file and a radius file.
pub fn read_interval_matrix(mid: &Path, rad: &Path) -> Result<IntervalMatrixMR> {
    IntervalMatrixMR::new(read_matrix(mid)?, read_matrix(rad)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_formats_round_trip() {
        let v = vec![0.1, -0.0, f64::MIN_POSITIVE / 7.0, 1e300, -3.5];
        let bin = decode_vector_binary(&encode_vector_binary(&v)).unwrap();
        let txt = parse_vector_text(&format_vector_text(&v)).unwrap();
        for (a, b) in v.iter().zip(bin.iter().zip(&txt)) {
            assert_eq!(a.to_bits(), b.0.to_bits());
            assert_eq!(a.to_bits(), b.1.to_bits());
        }
        assert!(decode_vector_binary(&[0; 7]).is_err());
        assert_eq!(parse_vector_text("# header\n0x1p+0  # one\n\n0x2p+0\n").unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let v = vec![0.1, 2.0, -7.25];
        for name in ["v.bin", "v.txt"] {
            let p = dir.path().join(name);
            write_vector(&p, &v).unwrap();
            assert_eq!(read_vector(&p).unwrap(), v);
        }
        let m = FpMatrix::from_fn(2, 3, |i, j| (i as f64 + 0.1) * (j as f64 - 1.3)).unwrap();
        let p = dir.path().join("m.txt");
        write_matrix(&p, &m).unwrap();
        assert_eq!(read_matrix(&p).unwrap(), m);
        let r = dir.path().join("r.txt");
        write_matrix(&r, &m.abs()).unwrap();
        let im = read_interval_matrix(&p, &r).unwrap();
        assert_eq!(im.rad(), &m.abs());
        let missing = read_vector(&dir.path().join("nope.txt"));
        assert!(matches!(missing, Err(Error::Io { path: Some(_), .. })));
    }

    #[test]
    fn matrix_parse_errors() {
        assert!(parse_matrix("2 2\n0x1p+0 0x1p+0 0x1p+0").is_err());
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("a b").is_err());
        assert_eq!(parse_matrix("1 2\n0x1p+0\n0x1.8p+0").unwrap().as_slice(), &[1.0, 1.5]);
    }

    #[test]
    fn interval_lists() {
        let xs = parse_intervals_text("[-0x1p-53,0x1p-52]\n<0x1p+0;0x1p-1>\n").unwrap();
        assert_eq!(xs[0], EndpointInterval::new(-(2f64.powi(-53)), 2f64.powi(-52)).unwrap());
        assert_eq!(xs[1], EndpointInterval::new(0.5, 1.5).unwrap());
        assert!(parse_intervals_text("[0x1p+0]").is_err());
    }
}

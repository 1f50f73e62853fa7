//! Plain-text and binary point files.
//!
//! Text: one decimal per line, blank lines and `#` comments ignored.
//! Binary: a `u64` count followed by that many `f64` values, all little-endian.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::CirclePoint;

pub fn write_text(path: &Path, points: &[CirclePoint]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for p in points {
        // Display for f64 is the shortest string that parses back exactly
        writeln!(w, "{}", p.value())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_text(path: &Path) -> Result<Vec<CirclePoint>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let x: f64 = s.parse().map_err(|_| {
            Error::Input(format!("{}:{}: not a number: `{s}`", path.display(), lineno + 1))
        })?;
        out.push(CirclePoint::new(x));
    }
    Ok(out)
}

pub fn write_binary(path: &Path, points: &[CirclePoint]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&(points.len() as u64).to_le_bytes())?;
    for p in points {
        w.write_all(&p.value().to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_binary(path: &Path) -> Result<Vec<CirclePoint>> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 8 {
        return Err(Error::Input(format!("{}: missing length prefix", path.display())));
    }
    let (head, body) = bytes.split_at(8);
    let n = u64::from_le_bytes(head.try_into().expect("8-byte prefix")) as usize;
    if body.len() != n.saturating_mul(8) {
        return Err(Error::Input(format!(
            "{}: header says {n} values but body has {} bytes",
            path.display(),
            body.len()
        )));
    }
    Ok(body
        .chunks_exact(8)
        .map(|c| CirclePoint::new(f64::from_le_bytes(c.try_into().expect("8-byte chunk"))))
        .collect())
}

fn is_binary(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("bin"))
}

/// Reads by extension: `.bin` is binary, anything else is text.
pub fn read_points(path: &Path) -> Result<Vec<CirclePoint>> {
    if is_binary(path) {
        read_binary(path)
    } else {
        read_text(path)
    }
}

/// Writes by extension: `.bin` is binary, anything else is text.
pub fn write_points(path: &Path, points: &[CirclePoint]) -> Result<()> {
    if is_binary(path) {
        write_binary(path, points)
    } else {
        write_text(path, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{generate, SequenceSpec};

    #[test]
    fn text_and_binary_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let points = generate(&SequenceSpec::golden(), 500).unwrap();
        for name in ["pts.txt", "pts.bin"] {
            let path = dir.path().join(name);
            write_points(&path, &points).unwrap();
            assert_eq!(read_points(&path).unwrap(), points);
        }
    }

    #[test]
    fn truncated_binary_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.bin");
        let mut bytes = 3u64.to_le_bytes().to_vec();
        bytes.extend_from_slice(&0.5f64.to_le_bytes());
        std::fs::write(&path, bytes).unwrap();
        assert!(matches!(read_binary(&path), Err(Error::Input(_))));
    }

    #[test]
    fn text_reports_bad_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "0.1\n# note\n\nabc\n").unwrap();
        let err = read_text(&path).unwrap_err().to_string();
        assert!(err.contains(":4:"), "{err}");
    }
}

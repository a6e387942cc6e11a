//! Samples on the floating mesh and their CSV representation.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// A sample at a (generally) non-integer grid position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

impl Sample {
    pub fn new(x: f64, y: f64, value: f64) -> Self {
        Sample { x, y, value }
    }
}

/// Deduplicated, bounds-checked samples for a `width` x `height` target grid.
///
/// Positions satisfy `0 <= x < width` and `0 <= y < height`, values lie in
/// `[0, 1]`, and no two samples share a position.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshSamples {
    samples: Vec<Sample>,
    width: usize,
    height: usize,
}

impl MeshSamples {
    /// Validates and deduplicates `samples`, keeping the first occurrence
    /// of every position. Returns the mesh and the number of dropped duplicates.
    pub fn new(samples: Vec<Sample>, width: usize, height: usize) -> Result<(Self, usize)> {
        for (i, s) in samples.iter().enumerate() {
            validate_sample(s, width, height)
                .map_err(|msg| Error::Validation(format!("sample {i}: {msg}")))?;
        }
        let mut seen = HashSet::with_capacity(samples.len());
        let before = samples.len();
        let samples: Vec<Sample> = samples
            .into_iter()
            .filter(|s| seen.insert(position_key(s)))
            .collect();
        let dropped = before - samples.len();
        Ok((
            MeshSamples {
                samples,
                width,
                height,
            },
            dropped,
        ))
    }

    pub fn empty(width: usize, height: usize) -> Self {
        MeshSamples {
            samples: Vec::new(),
            width,
            height,
        }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Parses mesh CSV text (`x,y,value` header, one sample per row).
    /// Blank lines are ignored; line numbers in errors are 1-based.
    pub fn parse_csv(text: &str, width: usize, height: usize) -> Result<(Self, usize)> {
        let mut lines = text.split('\n').enumerate();
        let header = lines
            .next()
            .map(|(_, l)| l.trim_end_matches('\r').trim())
            .unwrap_or("");
        if header != "x,y,value" {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header 'x,y,value', found '{header}'"),
            });
        }
        let mut samples = Vec::new();
        for (idx, raw) in lines {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected 3 fields, found {}", fields.len()),
                });
            }
            let mut vals = [0.0f64; 3];
            for (slot, field) in vals.iter_mut().zip(&fields) {
                *slot = field.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("'{}' is not a number", field.trim()),
                })?;
            }
            let s = Sample::new(vals[0], vals[1], vals[2]);
            validate_sample(&s, width, height)
                .map_err(|msg| Error::Validation(format!("line {lineno}: {msg}")))?;
            samples.push(s);
        }
        MeshSamples::new(samples, width, height)
    }

    pub fn load(path: impl AsRef<Path>, width: usize, height: usize) -> Result<(Self, usize)> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        MeshSamples::parse_csv(&text, width, height)
    }

    /// Serializes with shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(16 + self.samples.len() * 24);
        out.push_str("x,y,value\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{},{}", s.x, s.y, s.value);
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    /// Smallest and largest sample value, or `None` for an empty mesh.
    pub fn value_range(&self) -> Option<(f64, f64)> {
        let mut it = self.samples.iter().map(|s| s.value);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }
}

fn position_key(s: &Sample) -> (u64, u64) {
    // + 0.0 folds -0.0 onto 0.0
    ((s.x + 0.0).to_bits(), (s.y + 0.0).to_bits())
}

fn validate_sample(s: &Sample, width: usize, height: usize) -> std::result::Result<(), String> {
    if !(s.x.is_finite() && s.y.is_finite() && s.value.is_finite()) {
        return Err("non-finite field".into());
    }
    if !(0.0..=1.0).contains(&s.value) {
        return Err(format!("value {} outside [0, 1]", s.value));
    }
    if s.x < 0.0 || s.x >= width as f64 || s.y < 0.0 || s.y >= height as f64 {
        return Err(format!(
            "position ({}, {}) outside {width}x{height} grid",
            s.x, s.y
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_keep_first() {
        let text = "x,y,value\n0.2,0.4,0.5\n0.2,0.4,0.9\n";
        let (mesh, dropped) = MeshSamples::parse_csv(text, 4, 4).unwrap();
        assert_eq!(dropped, 1);
        assert_eq!(mesh.samples(), &[Sample::new(0.2, 0.4, 0.5)]);
    }

    #[test]
    fn header_only_is_empty() {
        let (mesh, dropped) = MeshSamples::parse_csv("x,y,value\n", 4, 4).unwrap();
        assert!(mesh.is_empty());
        assert_eq!(dropped, 0);
        let (mesh, _) = MeshSamples::parse_csv("x,y,value", 4, 4).unwrap();
        assert!(mesh.is_empty());
    }

    #[test]
    fn parse_error_names_line() {
        let err = MeshSamples::parse_csv("x,y,value\n1.5,abc,0.3\n", 4, 4).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = MeshSamples::parse_csv("x,y,value\n0.1,0.1,0.1\n1.5,0.3\n", 4, 4).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn crlf_accepted() {
        let (mesh, _) = MeshSamples::parse_csv("x,y,value\r\n0.5,1.5,0.25\r\n", 4, 4).unwrap();
        assert_eq!(mesh.samples(), &[Sample::new(0.5, 1.5, 0.25)]);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            MeshSamples::parse_csv("x,y,value\n0.5,0.5,1.5\n", 4, 4),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            MeshSamples::parse_csv("x,y,value\n4.0,0.5,0.5\n", 4, 4),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            MeshSamples::parse_csv("x,y,value\n-0.1,0.5,0.5\n", 4, 4),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn csv_round_trip() {
        let (mesh, _) = MeshSamples::new(
            vec![Sample::new(0.2, 0.4, 0.1), Sample::new(1.0 / 3.0, 2.8, 0.7)],
            3,
            3,
        )
        .unwrap();
        let (back, _) = MeshSamples::parse_csv(&mesh.to_csv(), 3, 3).unwrap();
        assert_eq!(back, mesh);
    }
}

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Taylor,
    Mc,
    Matrix,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Taylor => "taylor",
            Method::Mc => "mc",
            Method::Matrix => "matrix",
        }
    }
}

/// `(Qbar, Pbar, dQbar, dPbar)` at one time with per-column error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub values: [f64; 4],
    /// Standard errors for `mc`, truncation or series estimates otherwise.
    pub errors: [f64; 4],
}

impl TrajectoryPoint {
    pub fn q(&self) -> f64 {
        self.values[0]
    }
    pub fn p(&self) -> f64 {
        self.values[1]
    }
    pub fn dq(&self) -> f64 {
        self.values[2]
    }
    pub fn dp(&self) -> f64 {
        self.values[3]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub method: Method,
    pub points: Vec<TrajectoryPoint>,
    pub diagnostics: Vec<String>,
}

pub const TRAJECTORY_HEADER: [&str; 10] =
    ["t", "Qbar", "Pbar", "dQbar", "dPbar", "method", "err_Q", "err_P", "err_dQ", "err_dP"];

/// Seventeen significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl TrajectoryRecord {
    pub fn new(method: Method) -> Self {
        TrajectoryRecord { method, points: Vec::new(), diagnostics: Vec::new() }
    }

    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    /// Largest absolute difference over all points and columns.
    pub fn max_difference(&self, other: &TrajectoryRecord) -> Result<f64> {
        if self.points.len() != other.points.len() {
            return Err(Error::DimensionMismatch { expected: self.points.len(), got: other.points.len() });
        }
        Ok(self
            .points
            .iter()
            .zip(&other.points)
            .flat_map(|(a, b)| (0..4).map(move |i| (a.values[i] - b.values[i]).abs()))
            .fold(0.0, f64::max))
    }

    /// Spreads must stay positive.
    pub fn validate(&self) -> Result<()> {
        for p in &self.points {
            if !(p.dq() > 0.0 && p.dp() > 0.0) || p.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidVariance { dof: 0, dq: p.dq(), dp: p.dp() });
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(TRAJECTORY_HEADER).map_err(io_err)?;
        for p in &self.points {
            let mut row = vec![fmt_f64(p.t)];
            row.extend(p.values.iter().map(|v| fmt_f64(*v)));
            row.push(self.method.name().to_string());
            row.extend(p.errors.iter().map(|v| fmt_f64(*v)));
            wr.write_record(&row).map_err(io_err)?;
        }
        wr.flush().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::InvalidArgument(e.to_string()))
    }
}

pub(crate) fn io_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

/// Writes `contents` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::InvalidArgument(format!("{}: {e}", dir.display())))?;
    tmp.write_all(contents).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    tmp.persist(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = TrajectoryRecord::new(Method::Mc);
        r.points.push(TrajectoryPoint { t: 0.5, values: [1.0, 2.0, 3.0, 4.0], errors: [0.0; 4] });
        let s = r.to_csv_string().unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), TRAJECTORY_HEADER.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "5.0000000000000000e-1");
        assert_eq!(row[5], "mc");
    }

    #[test]
    fn atomic_write_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"a,b\n").unwrap();
        write_atomic(&path, b"c,d\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "c,d\n");
    }
}

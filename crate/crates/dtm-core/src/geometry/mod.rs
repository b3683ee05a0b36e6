//! Point clouds, file I/O, and exact k-nearest-neighbor search over squared
//! Euclidean distance.

mod index;

pub use index::{NeighborIndex, Neighbor};

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// A finite ordered set of d-dimensional points.
///
/// Point order is stable: index `i` always refers to the same point, and all
/// derived quantities (signatures, neighbor lists) use the same indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    coords: Vec<f64>,
    dim: usize,
    /// Optional label carried through to signatures and density estimates.
    pub id: Option<String>,
}

impl PointCloud {
    /// Build a cloud from row vectors. All rows must share one dimension,
    /// coordinates must be finite, and at least one point is required.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for row in &points {
            if row.len() != dim {
                return Err(Error::Dimension { expected: dim, got: row.len() });
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(Error::Domain { message: "non-finite coordinate".into() });
            }
            coords.extend_from_slice(row);
        }
        Ok(PointCloud { coords, dim, id: None })
    }

    /// Build a one-dimensional cloud.
    pub fn from_1d(values: Vec<f64>) -> Result<Self> {
        Self::new(values.into_iter().map(|v| vec![v]).collect())
    }

    /// Cloud from a flat coordinate buffer of length `n * dim`.
    pub fn from_flat(coords: Vec<f64>, dim: usize) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyInput);
        }
        if dim == 0 || coords.len() % dim != 0 {
            return Err(Error::Dimension { expected: dim.max(1), got: coords.len() });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain { message: "non-finite coordinate".into() });
        }
        Ok(PointCloud { coords, dim, id: None })
    }

    /// Attach an identifier (builder style).
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// Flat coordinate buffer, row-major.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Squared Euclidean distance. Never takes a square root: the DTM pipeline
/// is stated entirely in squared distances.
#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// On-disk point-cloud formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudFormat {
    /// Comma-separated floats, one point per line, optional header line.
    Csv,
    /// Whitespace-separated floats, one point per line.
    Xyz,
}

impl std::str::FromStr for CloudFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(CloudFormat::Csv),
            "xyz" => Ok(CloudFormat::Xyz),
            other => Err(Error::InvalidConfig { message: format!("unknown cloud format '{other}'") }),
        }
    }
}

/// Load a point cloud from `path`.
///
/// Rows must have a constant number of numeric columns (2 or 3 coordinates);
/// a trailing non-numeric label column is ignored, as is a single header
/// line. Row order becomes point order.
pub fn load_cloud(path: impl AsRef<Path>, format: CloudFormat) -> Result<PointCloud> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let id = path
        .as_ref()
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned());
    let cloud = parse_cloud(&text, format)?;
    Ok(match id {
        Some(id) => cloud.with_id(id),
        None => cloud,
    })
}

/// Parse cloud text. See [`load_cloud`].
pub fn parse_cloud(text: &str, format: CloudFormat) -> Result<PointCloud> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = match format {
            CloudFormat::Csv => line.split(',').map(str::trim).collect(),
            CloudFormat::Xyz => line.split_whitespace().collect(),
        };
        let mut values = Vec::with_capacity(fields.len());
        let mut bad_field = None;
        for f in &fields {
            match f.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    bad_field = Some(*f);
                    break;
                }
            }
        }
        if let Some(bad) = bad_field {
            // a fully non-numeric first row is a header; a trailing
            // non-numeric field is a label column
            let parsed = values.len();
            let is_label_col = parsed + 1 == fields.len() && parsed >= 2;
            if rows.is_empty() && width.is_none() && parsed == 0 {
                continue; // header
            }
            if !is_label_col {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("non-numeric coordinate '{bad}'"),
                });
            }
        }
        let w = values.len();
        match width {
            None => {
                if !(2..=3).contains(&w) {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: format!("expected 2 or 3 coordinates, found {w}"),
                    });
                }
                width = Some(w);
            }
            Some(expect) if expect != w => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("ragged row: expected {expect} columns, found {w}"),
                });
            }
            _ => {}
        }
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    PointCloud::new(rows)
}

/// Write a cloud to `path` in the given format.
pub fn write_cloud(cloud: &PointCloud, path: impl AsRef<Path>, format: CloudFormat) -> Result<()> {
    let mut out = String::new();
    let sep = match format {
        CloudFormat::Csv => ",",
        CloudFormat::Xyz => " ",
    };
    for p in cloud.iter_points() {
        for (j, c) in p.iter().enumerate() {
            if j > 0 {
                out.push_str(sep);
            }
            let _ = write!(out, "{c}");
        }
        out.push('\n');
    }
    crate::write_atomic(path.as_ref(), out.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic_csv() {
        let c = parse_cloud("0,0\n1,0\n0,1", CloudFormat::Csv).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.point(2), &[0.0, 1.0]);
    }

    #[test]
    fn header_is_skipped() {
        let c = parse_cloud("x,y\n1.5,2.5\n3,4\n", CloudFormat::Csv).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.point(0), &[1.5, 2.5]);
    }

    #[test]
    fn empty_file_is_empty_input() {
        assert!(matches!(parse_cloud("", CloudFormat::Csv), Err(Error::EmptyInput)));
        assert!(matches!(parse_cloud("x,y\n", CloudFormat::Csv), Err(Error::EmptyInput)));
    }

    #[test]
    fn ragged_rows_fail() {
        let err = parse_cloud("0,0\n1,0,3\n", CloudFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn non_numeric_coordinate_reports_row() {
        let err = parse_cloud("0,0\n1,oops\n", CloudFormat::Csv).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("oops"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn trailing_label_column_ignored() {
        let c = parse_cloud("0,0,a\n1,0,b\n", CloudFormat::Csv).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn xyz_whitespace() {
        let c = parse_cloud("0 0 0\n1 2 3\n", CloudFormat::Xyz).unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.point(1), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn crlf_accepted() {
        let c = parse_cloud("0,0\r\n1,1\r\n", CloudFormat::Csv).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn roundtrip_write_read() {
        let dir = std::env::temp_dir().join("dtm_core_geom_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.csv");
        let c = PointCloud::new(vec![vec![0.25, -1.0], vec![3.5, 2.0]]).unwrap();
        write_cloud(&c, &path, CloudFormat::Csv).unwrap();
        let back = load_cloud(&path, CloudFormat::Csv).unwrap();
        assert_eq!(back.coords(), c.coords());
    }
}

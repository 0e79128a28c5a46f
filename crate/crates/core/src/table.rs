//! Tabulated densities loaded from two-column CSV.

use std::io::Read;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Raw integrals further than this from 1 trigger a warning on load.
pub const RENORMALIZE_WARN: f64 = 1e-3;

/// Piecewise-linear density on `x = cosθ`, zero outside the sampled range.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity {
    xs: Vec<f64>,
    gs: Vec<f64>,
    raw_integral: f64,
    source: Option<PathBuf>,
}

impl TabulatedDensity {
    /// Builds a density from samples, renormalizing to unit integral.
    pub fn from_samples(xs: Vec<f64>, gs: Vec<f64>) -> Result<Self> {
        if xs.len() != gs.len() {
            return Err(Error::Table("column lengths differ".into()));
        }
        if xs.len() < 2 {
            return Err(Error::Table("need at least two samples".into()));
        }
        for (i, (&x, &g)) in xs.iter().zip(&gs).enumerate() {
            if !x.is_finite() || !(-1.0..=1.0).contains(&x) {
                return Err(Error::Table(format!("row {i}: cosθ = {x} outside [-1, 1]")));
            }
            if !g.is_finite() || g < 0.0 {
                return Err(Error::Table(format!("row {i}: density {g} is negative or non-finite")));
            }
        }
        if let Some(i) = xs.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Table(format!("row {}: first column not strictly increasing", i + 1)));
        }
        let raw: f64 = xs
            .windows(2)
            .zip(gs.windows(2))
            .map(|(x, g)| 0.5 * (x[1] - x[0]) * (g[0] + g[1]))
            .sum();
        if !(raw.is_finite() && raw > 0.0) {
            return Err(Error::Table(format!("density integrates to {raw}")));
        }
        if (raw - 1.0).abs() > RENORMALIZE_WARN {
            log::warn!("tabulated density integrates to {raw}; renormalizing");
        }
        let gs = gs.into_iter().map(|g| g / raw).collect();
        Ok(TabulatedDensity { xs, gs, raw_integral: raw, source: None })
    }

    /// Parses CSV text with columns `(cosθ, density)`; a non-numeric first
    /// row is taken as a header.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .flexible(true)
            .from_reader(reader);
        let mut xs = Vec::new();
        let mut gs = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Table(e.to_string()))?;
            if rec.len() != 2 {
                return Err(Error::Table(format!("row {i}: expected 2 columns, found {}", rec.len())));
            }
            let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
            match parsed {
                (Ok(x), Ok(g)) => {
                    xs.push(x);
                    gs.push(g);
                }
                _ if i == 0 => continue,
                _ => return Err(Error::Table(format!("row {i}: non-numeric field"))),
            }
        }
        Self::from_samples(xs, gs)
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        Self::from_reader(data)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut t = Self::from_reader(std::io::BufReader::new(file))?;
        t.source = Some(path.to_path_buf());
        Ok(t)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    /// Normalized density values at [`xs`](Self::xs).
    pub fn values(&self) -> &[f64] {
        &self.gs
    }

    /// Integral of the samples before renormalization.
    pub fn raw_integral(&self) -> f64 {
        self.raw_integral
    }

    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (first, last) = (self.xs[0], self.xs[self.xs.len() - 1]);
        if x < first || x > last {
            return 0.0;
        }
        let j = self.xs.partition_point(|&v| v <= x);
        if j == self.xs.len() {
            return self.gs[j - 1];
        }
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let t = (x - x0) / (x1 - x0);
        self.gs[j - 1] * (1.0 - t) + self.gs[j] * t
    }
}

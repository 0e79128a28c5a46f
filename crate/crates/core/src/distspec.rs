//! Textual distribution and sweep specifications.
//!
//! A distribution is written `name` or `name:key=value[,key=value...]`,
//! for example `vmf:kappa=1.5` or `brosseau:P=0.8,mu=0.5`. Every family also
//! accepts `axis_theta` and `axis_phi`. A tabulated density is `table:path`.
//!
//! A sweep is `key=start:stop:n`; several keys joined by `+` receive the same
//! value (`P+mu=0:0.95:20`).

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::dist::{AxisDistribution, DistKind};
use crate::error::{Error, Result};
use crate::table::TabulatedDensity;

/// Distribution families addressable from text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Uniform,
    Vmf,
    Brosseau,
    Hg,
    Delta,
    DeltaPair,
    Belt,
}

const AXIS_KEYS: [&str; 2] = ["axis_theta", "axis_phi"];

impl Family {
    pub const ALL: [Family; 7] =
        [Family::Uniform, Family::Vmf, Family::Brosseau, Family::Hg, Family::Delta, Family::DeltaPair, Family::Belt];

    pub fn name(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Vmf => "vmf",
            Family::Brosseau => "brosseau",
            Family::Hg => "hg",
            Family::Delta => "delta",
            Family::DeltaPair => "deltapair",
            Family::Belt => "belt",
        }
    }

    /// Required keys, in canonical print order.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Family::Uniform => &[],
            Family::Vmf => &["kappa"],
            Family::Brosseau => &["P", "mu"],
            Family::Hg => &["h"],
            Family::Delta | Family::DeltaPair => &["theta"],
            Family::Belt => &["theta1", "theta2"],
        }
    }

    fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// A parsed distribution specification.
#[derive(Debug, Clone, PartialEq)]
pub enum DistSpec {
    Family {
        family: Family,
        /// Values for `family.keys()` in order.
        values: Vec<f64>,
        axis_theta: f64,
        axis_phi: f64,
    },
    Table(PathBuf),
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn parse_number(s: &str, pos: usize) -> Result<f64> {
    let t = s.trim();
    let v: f64 = t.parse().map_err(|_| perr(pos, format!("`{t}` is not a number")))?;
    if !v.is_finite() {
        return Err(perr(pos, format!("`{t}` is not finite")));
    }
    Ok(v)
}

impl DistSpec {
    pub fn parse(s: &str) -> Result<DistSpec> {
        let (name, rest, rest_pos) = match s.find(':') {
            Some(i) => (&s[..i], Some(&s[i + 1..]), i + 1),
            None => (s, None, s.len()),
        };
        let name_t = name.trim();
        if name_t == "table" {
            let path = rest.map(str::trim).unwrap_or("");
            if path.is_empty() {
                return Err(perr(rest_pos, "`table` needs a file path"));
            }
            return Ok(DistSpec::Table(PathBuf::from(path)));
        }
        let family = Family::from_name(name_t).ok_or_else(|| {
            perr(0, format!("unknown distribution `{name_t}`"))
        })?;
        let keys = family.keys();
        let mut values: Vec<Option<f64>> = vec![None; keys.len()];
        let mut axis = [None, None];
        if let Some(rest) = rest {
            let mut pos = rest_pos;
            for item in rest.split(',') {
                let item_pos = pos;
                pos += item.len() + 1;
                if item.trim().is_empty() {
                    return Err(perr(item_pos, "empty parameter"));
                }
                let eq = item.find('=').ok_or_else(|| perr(item_pos, format!("expected key=value, got `{}`", item.trim())))?;
                let key = item[..eq].trim();
                let value = parse_number(&item[eq + 1..], item_pos + eq + 1)?;
                let slot = if let Some(k) = keys.iter().position(|k| *k == key) {
                    &mut values[k]
                } else if let Some(k) = AXIS_KEYS.iter().position(|k| *k == key) {
                    &mut axis[k]
                } else {
                    return Err(perr(item_pos, format!("unknown key `{key}` for `{}`", family.name())));
                };
                if slot.replace(value).is_some() {
                    return Err(perr(item_pos, format!("duplicate key `{key}`")));
                }
            }
        }
        let values = values
            .into_iter()
            .zip(keys)
            .map(|(v, k)| v.ok_or_else(|| perr(s.len(), format!("missing key `{k}` for `{}`", family.name()))))
            .collect::<Result<Vec<f64>>>()?;
        Ok(DistSpec::Family {
            family,
            values,
            axis_theta: axis[0].unwrap_or(0.0),
            axis_phi: axis[1].unwrap_or(0.0),
        })
    }

    pub fn family(&self) -> Option<Family> {
        match self {
            DistSpec::Family { family, .. } => Some(*family),
            DistSpec::Table(_) => None,
        }
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        match self {
            DistSpec::Family { family, values, axis_theta, axis_phi } => match key {
                "axis_theta" => Some(*axis_theta),
                "axis_phi" => Some(*axis_phi),
                _ => family.keys().iter().position(|k| *k == key).map(|i| values[i]),
            },
            DistSpec::Table(_) => None,
        }
    }

    /// Copy with `key` set to `value`.
    pub fn with(&self, key: &str, value: f64) -> Result<DistSpec> {
        let mut out = self.clone();
        match &mut out {
            DistSpec::Family { family, values, axis_theta, axis_phi } => match key {
                "axis_theta" => *axis_theta = value,
                "axis_phi" => *axis_phi = value,
                _ => {
                    let i = family.keys().iter().position(|k| *k == key).ok_or_else(|| {
                        Error::InvalidParameter(format!("`{}` has no parameter `{key}`", family.name()))
                    })?;
                    values[i] = value;
                }
            },
            DistSpec::Table(_) => {
                return Err(Error::InvalidParameter("a tabulated density has no parameters".into()))
            }
        }
        Ok(out)
    }

    /// Builds the distribution, reading the file for `table:`.
    pub fn to_distribution(&self) -> Result<AxisDistribution> {
        match self {
            DistSpec::Table(p) => Ok(AxisDistribution::tabulated(TabulatedDensity::load(p)?)),
            DistSpec::Family { family, values, axis_theta, axis_phi } => {
                let v = values;
                let kind = match family {
                    Family::Uniform => DistKind::Uniform,
                    Family::Vmf => DistKind::VonMisesFisher { kappa: v[0] },
                    Family::Brosseau => DistKind::Brosseau { p: v[0], mu: v[1] },
                    Family::Hg => DistKind::HenyeyGreenstein { h: v[0] },
                    Family::Delta => DistKind::Delta { theta: v[0] },
                    Family::DeltaPair => DistKind::DeltaPair { theta: v[0] },
                    Family::Belt => DistKind::Belt { theta1: v[0], theta2: v[1] },
                };
                AxisDistribution::new(kind)?.with_axis(*axis_theta, *axis_phi)
            }
        }
    }
}

impl FromStr for DistSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DistSpec::parse(s)
    }
}

impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::Table(p) => write!(f, "table:{}", p.display()),
            DistSpec::Family { family, values, axis_theta, axis_phi } => {
                f.write_str(family.name())?;
                let mut items: Vec<String> =
                    family.keys().iter().zip(values).map(|(k, v)| format!("{k}={v:?}")).collect();
                if *axis_theta != 0.0 {
                    items.push(format!("axis_theta={axis_theta:?}"));
                }
                if *axis_phi != 0.0 {
                    items.push(format!("axis_phi={axis_phi:?}"));
                }
                if !items.is_empty() {
                    write!(f, ":{}", items.join(","))?;
                }
                Ok(())
            }
        }
    }
}

/// One swept parameter (or several tied together) over an evenly spaced grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub keys: Vec<String>,
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

impl SweepSpec {
    pub fn parse(s: &str) -> Result<SweepSpec> {
        let eq = s.find('=').ok_or_else(|| perr(0, "expected <param>=<start>:<stop>:<n>"))?;
        let mut keys = Vec::new();
        let mut pos = 0;
        for k in s[..eq].split('+') {
            let kt = k.trim();
            if kt.is_empty() || !kt.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(perr(pos, format!("bad parameter name `{kt}`")));
            }
            if keys.iter().any(|x: &String| x == kt) {
                return Err(perr(pos, format!("duplicate parameter `{kt}`")));
            }
            keys.push(kt.to_string());
            pos += k.len() + 1;
        }
        let fields: Vec<&str> = s[eq + 1..].split(':').collect();
        if fields.len() != 3 {
            return Err(perr(eq + 1, format!("expected start:stop:n, found {} field(s)", fields.len())));
        }
        let start_pos = eq + 1;
        let stop_pos = start_pos + fields[0].len() + 1;
        let n_pos = stop_pos + fields[1].len() + 1;
        let start = parse_number(fields[0], start_pos)?;
        let stop = parse_number(fields[1], stop_pos)?;
        let n: usize = fields[2]
            .trim()
            .parse()
            .map_err(|_| perr(n_pos, format!("`{}` is not a step count", fields[2].trim())))?;
        if n < 2 {
            return Err(perr(n_pos, "step count must be at least 2"));
        }
        if start == stop {
            return Err(perr(stop_pos, "start and stop must differ"));
        }
        Ok(SweepSpec { keys, start, stop, n })
    }

    /// The `n` grid values, endpoints exact.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i + 1 == self.n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }

    /// Column label for the swept value.
    pub fn label(&self) -> String {
        self.keys.join("+")
    }

    /// `base` with every swept key set to `value`.
    pub fn apply(&self, base: &DistSpec, value: f64) -> Result<DistSpec> {
        self.keys.iter().try_fold(base.clone(), |d, k| d.with(k, value))
    }
}

impl FromStr for SweepSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SweepSpec::parse(s)
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={:?}:{:?}:{}", self.label(), self.start, self.stop, self.n)
    }
}

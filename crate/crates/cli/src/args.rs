//! Flag value types shared by several commands.

use std::str::FromStr;

use gsp_core::bench::{Bandwidth, QVariant};

/// `all` or a comma list such as `identity,voronoi`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantList(pub Vec<QVariant>);

impl FromStr for VariantList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Self(QVariant::ALL.to_vec()));
        }
        let mut out = Vec::new();
        for part in s.split(',') {
            let v = parse_variant(part)?;
            if !out.contains(&v) {
                out.push(v);
            }
        }
        Ok(Self(out))
    }
}

impl VariantList {
    pub fn to_flag(&self) -> String {
        self.0.iter().map(|v| v.name()).collect::<Vec<_>>().join(",")
    }
}

pub fn parse_variant(s: &str) -> Result<QVariant, String> {
    QVariant::parse(s).ok_or_else(|| format!("unknown inner product {s:?} (identity, degree, voronoi)"))
}

/// Sample fractions: `start:stop:step` (inclusive) or a comma list, each in (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct FracGrid(pub Vec<f64>);

impl FromStr for FracGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad fraction {t:?}"));
        let fracs: Vec<f64> = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let [a, b, step] = parts[..] else {
                return Err(format!("range {s:?} must be start:stop:step"));
            };
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || b < a {
                return Err(format!("range {s:?} needs stop >= start and step > 0"));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|i| a + i as f64 * step).collect()
        } else {
            s.split(',').map(num).collect::<Result<_, _>>()?
        };
        if let Some(f) = fracs.iter().find(|f| !(**f > 0.0 && **f < 1.0)) {
            return Err(format!("fraction {f} outside (0, 1)"));
        }
        Ok(Self(fracs))
    }
}

impl FracGrid {
    pub fn to_flag(&self) -> String {
        self.0.iter().map(|f| crate::files::flag_float(*f)).collect::<Vec<_>>().join(",")
    }
}

/// `cutoff`, `size`, or a fixed number of modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthArg(pub Bandwidth);

impl FromStr for BandwidthArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "cutoff" => Ok(Self(Bandwidth::Cutoff)),
            "size" => Ok(Self(Bandwidth::SampleSize)),
            other => match other.parse::<usize>() {
                Ok(r) if r > 0 => Ok(Self(Bandwidth::Fixed(r))),
                _ => Err(format!("bandwidth {other:?} must be cutoff, size or a positive integer")),
            },
        }
    }
}

impl BandwidthArg {
    pub fn to_flag(self) -> String {
        match self.0 {
            Bandwidth::Cutoff => "cutoff".into(),
            Bandwidth::SampleSize => "size".into(),
            Bandwidth::Fixed(r) => r.to_string(),
        }
    }
}

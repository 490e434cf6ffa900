use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// A list of parameter values, written either as `v1,v2,…` or as
/// `lo:hi:n` (n evenly spaced points, both ends included).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub values: Vec<f64>,
    text: String,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

fn parse_value(s: &str) -> Result<f64, String> {
    let s = s.trim();
    // Simple fractions such as 1/36 are convenient for u values.
    if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
        let den: f64 = den.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
        if den == 0.0 {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(num / den);
    }
    let v: f64 = s.parse().map_err(|_| format!("bad number `{s}`"))?;
    if !v.is_finite() {
        return Err(format!("value must be finite, got `{s}`"));
    }
    Ok(v)
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty grid".into());
        }
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.as_slice() {
            [lo, hi, n] => {
                let (lo, hi) = (parse_value(lo)?, parse_value(hi)?);
                let n: usize = n.trim().parse().map_err(|_| format!("bad point count `{n}`"))?;
                if n == 0 {
                    return Err("grid needs at least one point".into());
                }
                linspace(lo, hi, n)
            }
            [_] => s.split(',').map(parse_value).collect::<Result<_, _>>()?,
            _ => return Err(format!("expected `v1,v2,…` or `lo:hi:n`, got `{s}`")),
        };
        Ok(Self {
            values,
            text: s.to_string(),
        })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_ranges() {
        let g: Grid = "0,0.5, 1/36".parse().unwrap();
        assert_eq!(g.values, vec![0.0, 0.5, 1.0 / 36.0]);
        let r: Grid = "0:1:5".parse().unwrap();
        assert_eq!(r.values, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(r.to_string(), "0:1:5");
        assert_eq!("2:3:1".parse::<Grid>().unwrap().values, vec![2.0]);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "a", "0:1", "0:1:0", "1/0", "0:1:x", "nan"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn endpoints_are_exact() {
        let g: Grid = "0:1/3:7".parse().unwrap();
        assert_eq!(*g.values.last().unwrap(), 1.0 / 3.0);
    }
}

//! `key = value` defaults file. Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

const KNOWN: &[&str] = &[
    "jobs",
    "r_b",
    "k",
    "prune",
    "merge_radius",
    "thresholds",
    "seed",
    "n",
    "l",
    "l_d",
    "t_b",
    "copies",
    "max_attempts",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", n + 1))?;
            let key = key.trim().replace('-', "_");
            if !KNOWN.contains(&key.as_str()) {
                bail!("line {}: unknown key `{key}`", n + 1);
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Parsed value of `key`, if present.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow!("config key `{key}`: {e}"))
            })
            .transpose()
    }

    pub fn get_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.values
            .get(key)
            .map(|v| parse_list(v).with_context(|| format!("config key `{key}`")))
            .transpose()
    }

    pub fn get_range<T: FromStr + Copy>(&self, key: &str) -> Result<Option<(T, T)>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| parse_range(v).with_context(|| format!("config key `{key}`")))
            .transpose()
    }
}

/// Comma-separated numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| anyhow!("`{x}`: {e}")))
        .collect()
}

/// `min,max`, or a single value for a degenerate range.
pub fn parse_range<T: FromStr + Copy>(s: &str) -> Result<(T, T)>
where
    T::Err: std::fmt::Display,
{
    let parse = |x: &str| x.trim().parse::<T>().map_err(|e| anyhow!("`{x}`: {e}"));
    match s.split_once(',') {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let v = parse(s)?;
            Ok((v, v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = Config::parse(
            "# defaults\nr_b = 3.5\nk=7 # window\n\nl-d = 0,10\nthresholds=0.1, 0.5,1\n",
        )
        .unwrap();
        assert_eq!(c.get::<f64>("r_b").unwrap(), Some(3.5));
        assert_eq!(c.get::<usize>("k").unwrap(), Some(7));
        assert_eq!(c.get_range::<f64>("l_d").unwrap(), Some((0.0, 10.0)));
        assert_eq!(c.get_list("thresholds").unwrap(), Some(vec![0.1, 0.5, 1.0]));
        assert_eq!(c.get::<u64>("seed").unwrap(), None);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Config::parse("nonsense").is_err());
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("k = many")
            .unwrap()
            .get::<usize>("k")
            .is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range::<usize>("50,100").unwrap(), (50, 100));
        assert_eq!(parse_range::<usize>("0").unwrap(), (0, 0));
        assert!(parse_range::<usize>("a,b").is_err());
    }
}

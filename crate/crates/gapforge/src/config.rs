//! Flat `key = value` config files and flag/file/default resolution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::config(format!("line {}: expected key = value", i + 1)));
        };
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::config(format!("line {}: empty key", i + 1)));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::config(format!("line {}: duplicate key {key}", i + 1)));
        }
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text)
}

/// Resolves knobs with precedence flags > config file > defaults and keeps
/// an echo of every resolved value.
#[derive(Debug, Default)]
pub struct Knobs {
    file: BTreeMap<String, String>,
    used: BTreeSet<String>,
    echo: Map<String, Value>,
}

impl Knobs {
    pub fn new(file: BTreeMap<String, String>) -> Self {
        Self {
            file,
            ..Self::default()
        }
    }

    fn from_file<T: FromStr>(&mut self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: Display,
    {
        self.used.insert(key.to_string());
        match self.file.get(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|e| CliError::config(format!("{key} = {s}: {e}"))),
        }
    }

    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> CliResult<T>
    where
        T: FromStr + Clone + Into<Value>,
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => v,
            None => self.from_file(key)?.unwrap_or(default),
        };
        self.used.insert(key.to_string());
        self.echo.insert(key.to_string(), v.clone().into());
        Ok(v)
    }

    pub fn optional<T>(&mut self, key: &str, flag: Option<T>) -> CliResult<Option<T>>
    where
        T: FromStr + Clone + Into<Value>,
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => Some(v),
            None => self.from_file(key)?,
        };
        self.echo.insert(key.to_string(), v.clone().map_or(Value::Null, Into::into));
        Ok(v)
    }

    /// Records a derived value in the echo without consulting the file.
    pub fn note(&mut self, key: &str, v: impl Into<Value>) {
        self.echo.insert(key.to_string(), v.into());
    }

    /// Fails on file keys no resolver asked for.
    pub fn finish(self) -> CliResult<Map<String, Value>> {
        let unknown: Vec<&String> = self.file.keys().filter(|k| !self.used.contains(*k)).collect();
        if !unknown.is_empty() {
            return Err(CliError::config(format!("unknown config keys: {unknown:?}")));
        }
        Ok(self.echo)
    }
}

/// `lo:hi` into a half-open pair.
pub fn parse_range(s: &str) -> CliResult<(u64, u64)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| CliError::config(format!("range {s}: expected lo:hi")))?;
    let lo = a.trim().parse().map_err(|e| CliError::config(format!("range {s}: {e}")))?;
    let hi = b.trim().parse().map_err(|e| CliError::config(format!("range {s}: {e}")))?;
    if hi <= lo {
        return Err(CliError::config(format!("range {s} is empty")));
    }
    Ok((lo, hi))
}

pub fn parse_list<T: FromStr>(s: &str) -> CliResult<Vec<T>>
where
    T::Err: Display,
{
    s.split(',')
        .map(|x| x.trim().parse().map_err(|e| CliError::config(format!("list {s}: {e}"))))
        .collect()
}

pub fn require(cond: bool, msg: impl FnOnce() -> String) -> CliResult<()> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Config(msg()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file = parse_config("# comment\nx = 5\n\nk=3\n").unwrap();
        let mut kn = Knobs::new(file);
        assert_eq!(kn.get("x", Some(7u64), 1).unwrap(), 7);
        assert_eq!(kn.get("k", None, 2u64).unwrap(), 3);
        assert_eq!(kn.get("seed", None, 9u64).unwrap(), 9);
        let echo = kn.finish().unwrap();
        assert_eq!(echo["x"], 7);
        assert_eq!(echo["k"], 3);
    }

    #[test]
    fn bad_files() {
        assert!(parse_config("x 5").is_err());
        assert!(parse_config("x=1\nx=2").is_err());
        let mut kn = Knobs::new(parse_config("x = 5\nbogus = 1").unwrap());
        kn.get("x", None, 0u64).unwrap();
        assert!(kn.finish().is_err());
        let mut kn = Knobs::new(parse_config("x = abc").unwrap());
        assert!(kn.get("x", None, 0u64).is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1:10").unwrap(), (1, 10));
        assert!(parse_range("10:1").is_err());
        assert_eq!(parse_list::<u64>("0, 2,6").unwrap(), [0, 2, 6]);
    }
}

//! `key = value` configuration files. Keys mirror the long flags; `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

const KEYS: &[&str] = &[
    "format",
    "gaps",
    "rank",
    "N",
    "M",
    "W",
    "mode",
    "schedule",
    "max-relations",
    "probe-bound",
    "channel",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", n + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key {k:?}",
                    n + 1
                )));
            }
            let v = v.trim_matches('"');
            values.insert(k.to_string(), v.to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// `flag` if given, else the parsed config value.
    pub fn merge<T: std::str::FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config value for {key} is invalid: {v:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_merges() {
        let c = ConfigFile::parse("# run\nrank = 2\nN=4\ngaps = \"1,3\"\n").unwrap();
        assert_eq!(c.get("gaps"), Some("1,3"));
        assert_eq!(c.merge::<usize>(None, "rank").unwrap(), Some(2));
        assert_eq!(c.merge::<usize>(Some(5), "rank").unwrap(), Some(5));
        assert_eq!(c.merge::<u32>(None, "M").unwrap(), None);
        assert!(ConfigFile::parse("colour = red").is_err());
        assert!(ConfigFile::parse("rank 2").is_err());
    }
}

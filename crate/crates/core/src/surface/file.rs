use std::fmt;
use std::str::FromStr;

use super::{CompatiblePair, SurfacePresentation};
use crate::error::{Error, Result};
use crate::word::Word;

/// Text format:
///
/// ```text
/// # comment
/// genus: 2
/// relator: a1^-2 b1^4 a1^2 a2^-2 b2^-3 a2^2
/// magnus1: prefix 1
/// magnus2: suffix 2
/// ```
///
/// The two `magnus` lines are optional but must appear together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub presentation: SurfacePresentation,
    pub pair: Option<CompatiblePair>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_magnus(line: usize, value: &str, keyword: &str) -> Result<u32> {
    let mut parts = value.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(n), None) if k == keyword => {
            n.parse().map_err(|_| parse_err(line, format!("bad handle index {n:?}")))
        }
        _ => Err(parse_err(line, format!("expected `{keyword} <n>`"))),
    }
}

impl FromStr for PresentationFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut genus: Option<(usize, u32)> = None;
        let mut relator: Option<(usize, Word)> = None;
        let mut prefix: Option<u32> = None;
        let mut suffix: Option<u32> = None;
        let mut last_line = 0;
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let (key, value) =
                text.split_once(':').ok_or_else(|| parse_err(line, "expected `key: value`"))?;
            let value = value.trim();
            match key.trim() {
                "genus" => {
                    let g = value.parse().map_err(|_| parse_err(line, format!("bad genus {value:?}")))?;
                    genus = Some((line, g));
                }
                "relator" => {
                    let w: Word = value.parse().map_err(|e: Error| parse_err(line, e.to_string()))?;
                    relator = Some((line, w));
                }
                "magnus1" => prefix = Some(parse_magnus(line, value, "prefix")?),
                "magnus2" => suffix = Some(parse_magnus(line, value, "suffix")?),
                other => return Err(parse_err(line, format!("unknown key {other:?}"))),
            }
        }
        let (gline, genus) = genus.ok_or_else(|| parse_err(last_line, "missing `genus`"))?;
        let (rline, relator) = relator.ok_or_else(|| parse_err(last_line, "missing `relator`"))?;
        let presentation = SurfacePresentation::new(genus, relator).map_err(|e| match e {
            Error::GenusTooSmall(_) => parse_err(gline, e.to_string()),
            other => parse_err(rline, other.to_string()),
        })?;
        let pair = match (prefix, suffix) {
            (Some(j), Some(i)) => Some(CompatiblePair::new(genus, j, i)?),
            (None, None) => None,
            _ => return Err(parse_err(last_line, "`magnus1` and `magnus2` must be given together")),
        };
        Ok(PresentationFile { presentation, pair })
    }
}

impl fmt::Display for PresentationFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "genus: {}", self.presentation.genus())?;
        writeln!(f, "relator: {}", self.presentation.relator())?;
        if let Some(p) = &self.pair {
            writeln!(f, "magnus1: {}", p.m1())?;
            writeln!(f, "magnus2: {}", p.m2())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "# example\ngenus: 2\nrelator: b1 a2 b1 a2^-1 b2  # trailing\nmagnus1: prefix 1\nmagnus2: suffix 2\n";
        let f: PresentationFile = text.parse().unwrap();
        assert_eq!(f.presentation.genus(), 2);
        assert_eq!(f.pair, Some(CompatiblePair { prefix: 1, suffix: 2 }));
        let again: PresentationFile = f.to_string().parse().unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn errors_carry_lines() {
        let e = "genus: 2\nrelator: a1 x2\n".parse::<PresentationFile>().unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = "genus: 2\nrelator: a1\nmagnus1: prefix 1\n".parse::<PresentationFile>().unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let e = "genus 2\n".parse::<PresentationFile>().unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = "genus: 1\nrelator: a1\n".parse::<PresentationFile>().unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }
}

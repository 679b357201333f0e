use std::fmt;

use serde::{Deserialize, Serialize};

use super::pattern::TernaryPattern;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub pattern: TernaryPattern,
    pub target: usize,
}

impl Rule {
    pub fn new(pattern: TernaryPattern, target: usize) -> Self {
        Rule { pattern, target }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.pattern, self.target)
    }
}

/// Priority-ordered rules; the first matching rule decides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleTable {
    width: u32,
    rules: Vec<Rule>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    width: u32,
    rules: Vec<RuleRepr>,
}

#[derive(Serialize, Deserialize)]
struct RuleRepr {
    pattern: String,
    target: usize,
}

impl RuleTable {
    pub fn new(width: u32, rules: Vec<Rule>) -> Result<Self> {
        for r in &rules {
            if r.pattern.width() != width {
                return Err(Error::WidthMismatch { expected: width, found: r.pattern.width() });
            }
            if r.target == 0 {
                return Err(Error::Parse(format!("rule {r} targets 0; targets start at 1")));
            }
        }
        Ok(RuleTable { width, rules })
    }

    /// Builds a table from `(pattern, target)` text pairs.
    pub fn from_pairs(width: u32, pairs: &[(&str, usize)]) -> Result<Self> {
        let rules = pairs
            .iter()
            .map(|(p, t)| Ok(Rule::new(p.parse()?, *t)))
            .collect::<Result<Vec<_>>>()?;
        RuleTable::new(width, rules)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Largest target mentioned.
    pub fn k(&self) -> usize {
        self.rules.iter().map(|r| r.target).max().unwrap_or(0)
    }

    pub fn is_prefix_table(&self) -> bool {
        self.rules.iter().all(|r| r.pattern.is_prefix())
    }

    /// Prefix lengths top to bottom, `None` for any non-prefix rule.
    pub fn prefix_lengths(&self) -> Option<Vec<u32>> {
        self.rules.iter().map(|r| r.pattern.prefix_len()).collect()
    }

    /// Target of the first rule matching `addr`, 0 if none.
    pub fn lookup(&self, addr: u128) -> usize {
        self.rules.iter().find(|r| r.pattern.matches(addr)).map_or(0, |r| r.target)
    }

    /// One `"<pattern> <target>"` line per rule.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the line format. The width comes from the patterns unless
    /// given; `#` starts a comment.
    pub fn parse_text(text: &str, width: Option<u32>) -> Result<Self> {
        let mut rules = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: expected \"<pattern> <target>\", got {raw:?}", lineno + 1));
            let mut fields = line.split_whitespace();
            let (Some(pattern), Some(target), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(bad());
            };
            let pattern: TernaryPattern = pattern.parse()?;
            let target: usize = target.parse().map_err(|_| bad())?;
            rules.push(Rule::new(pattern, target));
        }
        let width = match (width, rules.first()) {
            (Some(w), _) => w,
            (None, Some(r)) => r.pattern.width(),
            (None, None) => return Err(Error::Parse("empty rule table; pass the width explicitly".into())),
        };
        RuleTable::new(width, rules)
    }

    pub fn to_json(&self) -> String {
        let repr = TableRepr {
            width: self.width,
            rules: self.rules.iter().map(|r| RuleRepr { pattern: r.pattern.to_string(), target: r.target }).collect(),
        };
        serde_json::to_string(&repr).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: TableRepr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let rules = repr
            .rules
            .into_iter()
            .map(|r| Ok(Rule::new(r.pattern.parse()?, r.target)))
            .collect::<Result<Vec<_>>>()?;
        RuleTable::new(repr.width, rules)
    }
}

impl fmt::Display for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let t = RuleTable::from_pairs(3, &[("011", 1), ("01*", 2), ("0**", 3), ("***", 1)]).unwrap();
        assert_eq!(t.to_text(), "011 1\n01* 2\n0** 3\n*** 1\n");
        let back = RuleTable::parse_text("# example\n011 1\n01* 2  # comment\n\n0** 3\n*** 1\n", None).unwrap();
        assert_eq!(back, t);
        assert_eq!(t.k(), 3);
        assert_eq!(t.prefix_lengths(), Some(vec![3, 2, 1, 0]));
        assert_eq!(t.lookup(0b011), 1);
        assert_eq!(t.lookup(0b010), 2);
    }

    #[test]
    fn json_round_trip() {
        let t = RuleTable::from_pairs(2, &[("0*", 1), ("*0", 2), ("*1", 3)]).unwrap();
        let text = t.to_json();
        assert_eq!(text, r#"{"width":2,"rules":[{"pattern":"0*","target":1},{"pattern":"*0","target":2},{"pattern":"*1","target":3}]}"#);
        assert_eq!(RuleTable::from_json(&text).unwrap(), t);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(RuleTable::parse_text("01 1\n011 2", None), Err(Error::WidthMismatch { .. })));
        assert!(RuleTable::parse_text("01 0", None).is_err());
        assert!(RuleTable::parse_text("01", None).is_err());
        assert!(RuleTable::parse_text("01 1 2", None).is_err());
    }
}

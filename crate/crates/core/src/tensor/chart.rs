use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::symbolic::{parse_expression, RationalFunction, MAX_VARS};

/// A coordinate system: named coordinates plus the subset declared positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    names: Vec<String>,
    positive: Vec<usize>,
}

impl Chart {
    pub fn new(names: Vec<String>, positive: Vec<usize>) -> Result<Self> {
        let n = names.len();
        if n < 3 {
            return Err(Error::InvalidChart(format!("dimension must be at least 3, got {n}")));
        }
        if n > MAX_VARS {
            return Err(Error::InvalidChart(format!(
                "at most {MAX_VARS} coordinates supported, got {n}"
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidChart(format!("invalid coordinate name '{name}'")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidChart(format!("duplicate coordinate '{name}'")));
            }
        }
        if let Some(&bad) = positive.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidChart(format!("positivity index {bad} out of range")));
        }
        let mut positive = positive;
        positive.sort_unstable();
        positive.dedup();
        Ok(Chart { names, positive })
    }

    /// Chart `x1, ..., xn` with no positivity assumptions.
    pub fn standard(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("x{i}")).collect(), Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn positive(&self) -> &[usize] {
        &self.positive
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parse(&self, text: &str) -> Result<RationalFunction> {
        parse_expression(text, &self.names)
    }

    pub fn format(&self, f: &RationalFunction) -> String {
        f.format_with(&self.names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_duplicate() {
        assert!(Chart::standard(2).is_err());
        assert!(Chart::new(vec!["a".into(), "b".into(), "a".into()], vec![]).is_err());
        assert!(Chart::new(vec!["a".into(), "b".into(), "1c".into()], vec![]).is_err());
        assert!(Chart::new(vec!["a".into(), "b".into(), "c".into()], vec![3]).is_err());
        assert_eq!(Chart::standard(4).unwrap().dim(), 4);
    }
}

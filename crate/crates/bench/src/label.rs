use std::fmt;
use std::str::FromStr;

use crate::error::{usage, BenchError};

/// Requested degree plus the number of roots added for stability, written
/// `d` or `d+k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DegreeLabel {
    pub degree: usize,
    pub added: usize,
}

impl DegreeLabel {
    pub fn new(degree: usize, added: usize) -> Self {
        Self { degree, added }
    }
}

impl fmt::Display for DegreeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.added == 0 {
            write!(f, "{}", self.degree)
        } else {
            write!(f, "{}+{}", self.degree, self.added)
        }
    }
}

impl FromStr for DegreeLabel {
    type Err = BenchError;

    /// Accepts `150`, `150+2` and `150 + 2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad degree label `{s}`")))
        };
        match s.split_once('+') {
            Some((d, k)) => Ok(Self::new(num(d)?, num(k)?)),
            None => Ok(Self::new(num(s)?, 0)),
        }
    }
}

use std::fmt;

use crate::error::{Error, Result};

/// A partition: non-increasing non-negative parts, stored without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("{parts:?} is not a partition (parts must be non-increasing)")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Parts padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Vec<usize> {
        assert!(self.len() <= n, "partition {self} has more than {n} parts");
        let mut v = self.parts.clone();
        v.resize(n, 0);
        v
    }

    /// The highest weight of the vector representation, `(1, 0, ..., 0)`.
    pub fn is_vector(&self) -> bool {
        self.parts == [1]
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

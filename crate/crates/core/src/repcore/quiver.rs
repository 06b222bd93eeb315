use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A linear quiver `n -> n-1 -> ... -> 1` bound by monomial relations.
///
/// A relation `[a, b]` says the path from vertex `b` down to vertex `a` is
/// zero. Relations are kept sorted and pairwise non-nested.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuiverPresentation {
    n: usize,
    relations: Vec<(usize, usize)>,
}

impl QuiverPresentation {
    pub fn new(n: usize, relations: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPresentation(
                "need at least one vertex".into(),
            ));
        }
        if n > 64 {
            return Err(Error::InvalidPresentation(format!(
                "{n} vertices is beyond desk scale"
            )));
        }
        let mut rels: Vec<(usize, usize)> = Vec::new();
        for (a, b) in relations {
            if a < 1 || b > n || a >= b {
                return Err(Error::InvalidPresentation(format!(
                    "relation [{a},{b}] must satisfy 1 <= a < b <= {n}"
                )));
            }
            if b - a < 2 {
                return Err(Error::InvalidPresentation(format!(
                    "relation [{a},{b}] is a single arrow; relations need path length at least 2"
                )));
            }
            rels.push((a, b));
        }
        rels.sort();
        rels.dedup();
        // a relation containing another one is implied by it
        let normalized: Vec<(usize, usize)> = rels
            .iter()
            .copied()
            .filter(|&(a, b)| {
                !rels
                    .iter()
                    .any(|&(c, d)| (c, d) != (a, b) && a <= c && d <= b)
            })
            .collect();
        Ok(QuiverPresentation {
            n,
            relations: normalized,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[(usize, usize)] {
        &self.relations
    }

    /// Whether the path from `hi` down to `lo` (1-based, `lo <= hi`) is nonzero.
    pub fn path_nonzero(&self, lo: usize, hi: usize) -> bool {
        !self.relations.iter().any(|&(a, b)| lo <= a && b <= hi)
    }
}

impl fmt::Display for QuiverPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "linear quiver on {} vertices", self.n)?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self
                .relations
                .iter()
                .map(|(a, b)| format!("{a}-{b}"))
                .collect();
            write!(f, ", zero relations {}", rels.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_nested_relations() {
        let p = QuiverPresentation::new(6, [(1, 5), (2, 6), (1, 6), (2, 6)]).unwrap();
        assert_eq!(p.relations(), &[(1, 5), (2, 6)]);
    }

    #[test]
    fn rejects_bad_relations() {
        assert!(QuiverPresentation::new(3, [(1, 2)]).is_err());
        assert!(QuiverPresentation::new(3, [(0, 2)]).is_err());
        assert!(QuiverPresentation::new(3, [(1, 4)]).is_err());
        assert!(QuiverPresentation::new(3, [(3, 1)]).is_err());
        assert!(QuiverPresentation::new(0, []).is_err());
    }

    #[test]
    fn path_support() {
        let p = QuiverPresentation::new(6, [(1, 5), (2, 6)]).unwrap();
        assert!(p.path_nonzero(1, 4));
        assert!(!p.path_nonzero(1, 5));
        assert!(p.path_nonzero(3, 6));
    }
}

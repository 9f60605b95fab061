//! Algebra labels ("A1".."E8") and the Cartan matrix catalog.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Simple-algebra family letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A simple Lie algebra label, e.g. `A2`, `G2`, `E8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraLabel {
    pub family: Family,
    pub rank: usize,
}

impl AlgebraLabel {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(AlgebraLabel { family, rank })
        } else {
            Err(Error::UnknownAlgebra(format!("{family}{rank}")))
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.family, Family::A | Family::B | Family::C | Family::D)
    }

    /// Dimension of the defining matrix representation for classical families.
    pub fn defining_dim(&self) -> Option<usize> {
        let n = self.rank;
        match self.family {
            Family::A => Some(n + 1),
            Family::B => Some(2 * n + 1),
            Family::C | Family::D => Some(2 * n),
            _ => None,
        }
    }
}

impl fmt::Display for AlgebraLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for AlgebraLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::UnknownAlgebra(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnknownAlgebra(s.to_string()))?;
        AlgebraLabel::new(fam, rank)
    }
}

/// Catalog Cartan matrix for a label, with the convention
/// `entry(i, j) = alpha_j(H_{alpha_i})`, i.e. row i lists the values of all
/// simple roots on the i-th simple coroot.
pub fn catalog_entries(label: AlgebraLabel) -> Vec<Vec<i64>> {
    let n = label.rank;
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    // Chain bonds; family-specific corrections below.
    let chain = |m: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        m[i][j] = -1;
        m[j][i] = -1;
    };
    match label.family {
        Family::A => {
            for i in 0..n.saturating_sub(1) {
                chain(&mut m, i, i + 1);
            }
        }
        Family::B => {
            // Last simple root short: entry(n-1, n-2) = -2.
            for i in 0..n - 1 {
                chain(&mut m, i, i + 1);
            }
            m[n - 1][n - 2] = -2;
        }
        Family::C => {
            // Last simple root long: entry(n-2, n-1) = -2.
            for i in 0..n - 1 {
                chain(&mut m, i, i + 1);
            }
            m[n - 2][n - 1] = -2;
        }
        Family::D => {
            for i in 0..n - 2 {
                chain(&mut m, i, i + 1);
            }
            chain(&mut m, n - 3, n - 1);
        }
        Family::E => {
            // Bourbaki numbering: chain 1-3-4-5-..-n, node 2 attached to 4.
            chain(&mut m, 0, 2);
            for i in 2..n - 1 {
                chain(&mut m, i, i + 1);
            }
            chain(&mut m, 1, 3);
        }
        Family::F => {
            // 1-2 single, 2-3 double (root 3,4 short), 3-4 single.
            chain(&mut m, 0, 1);
            chain(&mut m, 1, 2);
            chain(&mut m, 2, 3);
            m[2][1] = -2;
        }
        Family::G => {
            // Root 1 short, root 2 long: entry(0,1) = -3.
            chain(&mut m, 0, 1);
            m[0][1] = -3;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_case_insensitively() {
        for s in ["A1", "a2", "g2", "F4", "e8", "b3", "C2", "d4"] {
            s.parse::<AlgebraLabel>().unwrap();
        }
    }

    #[test]
    fn rejects_bad_labels() {
        for s in ["Z9", "A0", "E5", "E9", "G3", "F2", "D2", "B1", "", "A", "1A"] {
            assert!(s.parse::<AlgebraLabel>().is_err(), "{s} should fail");
        }
    }

    #[test]
    fn catalog_shapes() {
        let g2 = catalog_entries("G2".parse().unwrap());
        assert_eq!(g2, vec![vec![2, -3], vec![-1, 2]]);
        let b2 = catalog_entries("B2".parse().unwrap());
        assert_eq!(b2, vec![vec![2, -1], vec![-2, 2]]);
        let c2 = catalog_entries("C2".parse().unwrap());
        assert_eq!(c2, vec![vec![2, -2], vec![-1, 2]]);
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::Int;

/// Isomorphism type `Z^r + Z/d1 + ... + Z/dk + Q^q + (Q/Z)^t` with `d1 | d2 | ... | dk`
/// and every `di >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbGroupClass {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    pub divisible_rank: usize,
    pub divisible_torsion_rank: usize,
}

impl AbGroupClass {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn integers(rank: usize) -> Self {
        Self { free_rank: rank, ..Self::default() }
    }

    pub fn cyclic(order: u64) -> Self {
        let torsion = if order == 1 { vec![] } else { vec![Int::from(order)] };
        Self { torsion, ..Self::default() }
    }

    pub fn rationals(rank: usize) -> Self {
        Self { divisible_rank: rank, ..Self::default() }
    }

    pub fn rational_circles(rank: usize) -> Self {
        Self { divisible_torsion_rank: rank, ..Self::default() }
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::trivial()
    }
}

impl fmt::Display for AbGroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if self.divisible_rank > 0 {
            parts.push(format!("Q^{}", self.divisible_rank));
        }
        if self.divisible_torsion_rank > 0 {
            parts.push(format!("Q/Z^{}", self.divisible_torsion_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(AbGroupClass::trivial().to_string(), "0");
        let g = AbGroupClass {
            free_rank: 1,
            torsion: vec![Int::from(2)],
            divisible_rank: 0,
            divisible_torsion_rank: 1,
        };
        assert_eq!(g.to_string(), "Z^1 + Z/2 + Q/Z^1");
        assert_eq!(AbGroupClass::cyclic(1).to_string(), "0");
        assert_eq!(AbGroupClass::rationals(2).to_string(), "Q^2");
    }
}

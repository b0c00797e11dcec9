use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::int_matrix::IntMatrix;
use super::smith::invariant_factors;
use crate::error::{QkError, Result};
use crate::exec::Exec;

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` in
/// invariant-factor form: `d_i ≥ 2` and `d_i | d_{i+1}`.
///
/// Two values are isomorphic exactly when they compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FGAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FGAbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> Self {
        if order == 0 {
            Self::free(1)
        } else {
            Self::from_cyclic_orders(0, &[BigInt::from(order)])
        }
    }

    /// Validates an already-canonical invariant factor list.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for (i, d) in torsion.iter().enumerate() {
            if d < &BigInt::from(2) {
                return Err(QkError::Parse(format!("invariant factor {d} is below 2")));
            }
            if i > 0 && !d.is_multiple_of(&torsion[i - 1]) {
                return Err(QkError::Parse(format!(
                    "invariant factors {} and {d} break the divisibility chain",
                    torsion[i - 1]
                )));
            }
        }
        Ok(FGAbelianGroup { free_rank, torsion })
    }

    /// Canonical form of `Z^free ⊕ ⊕ Z/n_i` for arbitrary cyclic orders
    /// (`n_i = 0` contributes a free summand, `n_i = ±1` nothing).
    pub fn from_cyclic_orders(free: usize, orders: &[BigInt]) -> Self {
        let mut extra_free = 0;
        let mut finite = Vec::new();
        for n in orders {
            if n.is_zero() {
                extra_free += 1;
            } else if !n.abs().is_one() {
                finite.push(n.abs());
            }
        }
        if finite.is_empty() {
            return Self::free(free + extra_free);
        }
        let k = finite.len();
        let diag = IntMatrix::diagonal(k, k, &finite);
        let inv = invariant_factors(&diag, Exec::Sequential);
        FGAbelianGroup {
            free_rank: free + extra_free,
            torsion: inv.nontrivial,
        }
    }

    /// Cokernel of an integer matrix viewed as a map `Z^cols → Z^rows`.
    pub fn cokernel(m: &IntMatrix, exec: Exec) -> Self {
        let inv = invariant_factors(m, exec);
        FGAbelianGroup {
            free_rank: m.rows() - inv.rank,
            torsion: inv.nontrivial,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group when it is finite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn direct_sum(&self, other: &FGAbelianGroup) -> Self {
        let orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        // Group equal factors as Z/d^k.
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == d).count();
            if run == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{run}"));
            }
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for FGAbelianGroup {
    type Err = QkError;

    /// Parses the display form, e.g. `0`, `Z^2 + Z/2 + (Z/6)^2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let bad = || QkError::Parse(format!("cannot parse abelian group {s:?}"));
        let mut free = 0usize;
        let mut orders = Vec::new();
        for part in s.split('+').map(str::trim) {
            let (base, power) = match part.strip_prefix('(') {
                Some(rest) => {
                    let (inner, exp) = rest.split_once(")^").ok_or_else(bad)?;
                    (inner, exp.parse::<usize>().map_err(|_| bad())?)
                }
                None => match part.split_once('^') {
                    Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad())?),
                    None => (part, 1),
                },
            };
            if base == "Z" {
                free += power;
            } else {
                let d = base
                    .strip_prefix("Z/")
                    .and_then(|d| d.parse::<BigInt>().ok())
                    .ok_or_else(bad)?;
                if d < BigInt::from(2) {
                    return Err(bad());
                }
                orders.extend(std::iter::repeat_n(d, power));
            }
        }
        Ok(Self::from_cyclic_orders(free, &orders))
    }
}

impl Serialize for FGAbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FGAbelianGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn canonicalizes_cyclic_orders() {
        let g = FGAbelianGroup::from_cyclic_orders(1, &b(&[2, 3, 4, 1]));
        assert_eq!(g.torsion(), b(&[2, 12]).as_slice());
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
    }

    #[test]
    fn direct_sum_merges_primes() {
        let a = FGAbelianGroup::cyclic(2);
        let c = FGAbelianGroup::cyclic(3);
        assert_eq!(a.direct_sum(&c), FGAbelianGroup::cyclic(6));
        assert_eq!(a.direct_sum(&a).to_string(), "(Z/2)^2");
    }

    #[test]
    fn display_parse_round_trip() {
        for s in ["0", "Z", "Z^3", "Z/2", "(Z/2)^2 + Z/4", "Z^2 + Z/2 + Z/6"] {
            let g: FGAbelianGroup = s.parse().unwrap();
            assert_eq!(g.to_string().parse::<FGAbelianGroup>().unwrap(), g);
        }
        assert!("Z/1".parse::<FGAbelianGroup>().is_err());
        assert!("Q".parse::<FGAbelianGroup>().is_err());
    }

    #[test]
    fn rejects_broken_chain() {
        assert!(FGAbelianGroup::new(0, b(&[2, 3])).is_err());
        assert!(FGAbelianGroup::new(0, b(&[1])).is_err());
        assert!(FGAbelianGroup::new(0, b(&[2, 4])).is_ok());
    }
}

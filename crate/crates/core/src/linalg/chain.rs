use super::abelian::FGAbelianGroup;
use super::int_matrix::IntMatrix;
use super::smith::{invariant_factors, InvariantFactors};
use crate::error::{QkError, Result};
use crate::exec::Exec;

/// Finite chain complex of free abelian groups `C_N → … → C_1 → C_0`.
///
/// `boundary(n)` maps `C_n` (columns) to `C_{n-1}` (rows) for `1 ≤ n ≤ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexZ {
    ranks: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplexZ {
    /// Builds the complex, checking matrix shapes and `∂∘∂ = 0`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(QkError::Dimension("a chain complex needs degree 0".into()));
        }
        if boundaries.len() + 1 != ranks.len() {
            return Err(QkError::Dimension(format!(
                "{} ranks need {} boundaries, got {}",
                ranks.len(),
                ranks.len() - 1,
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            let n = i + 1;
            if b.rows() != ranks[n - 1] || b.cols() != ranks[n] {
                return Err(QkError::Dimension(format!(
                    "boundary_{n} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    ranks[n - 1],
                    ranks[n]
                )));
            }
        }
        for n in 1..boundaries.len() {
            if !boundaries[n - 1].mul(&boundaries[n])?.is_zero() {
                return Err(QkError::NotAComplex(format!(
                    "boundary_{} ∘ boundary_{} != 0",
                    n,
                    n + 1
                )));
            }
        }
        Ok(ChainComplexZ { ranks, boundaries })
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks[n]
    }

    /// `∂_n`, for `1 ≤ n ≤ N`.
    pub fn boundary(&self, n: usize) -> &IntMatrix {
        &self.boundaries[n - 1]
    }

    pub fn boundaries(&self) -> &[IntMatrix] {
        &self.boundaries
    }

    /// Conjugates each degree by a unimodular change of basis
    /// (`∂'_n = P_{n-1} ∂_n P_n^{-1}`). Supplying `(P_n, P_n^{-1})` pairs.
    pub fn change_basis(&self, bases: &[(IntMatrix, IntMatrix)]) -> Result<Self> {
        if bases.len() != self.ranks.len() {
            return Err(QkError::Dimension("one basis change per degree".into()));
        }
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(i, b)| bases[i].0.mul(b)?.mul(&bases[i + 1].1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.ranks.clone(), boundaries)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(n, &r)| if n % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// All homology groups `H_0 … H_N`; each boundary is reduced once.
    pub fn homology_all(&self, exec: Exec) -> Vec<FGAbelianGroup> {
        let invariants: Vec<InvariantFactors> =
            exec.map(&self.boundaries, |b| invariant_factors(b, exec));
        (0..self.ranks.len())
            .map(|n| {
                let outgoing = if n == 0 {
                    None
                } else {
                    Some(&invariants[n - 1])
                };
                homology_from_invariants(self.ranks[n], outgoing, invariants.get(n))
            })
            .collect()
    }
}

/// `H_n` of a complex of free modules from the rank of `C_n`, the
/// invariants of the outgoing map and those of the incoming map.
pub fn homology_from_invariants(
    rank: usize,
    outgoing: Option<&InvariantFactors>,
    incoming: Option<&InvariantFactors>,
) -> FGAbelianGroup {
    let out_rank = outgoing.map_or(0, |i| i.rank);
    let in_rank = incoming.map_or(0, |i| i.rank);
    let torsion = incoming.map(|i| i.nontrivial.clone()).unwrap_or_default();
    FGAbelianGroup::from_cyclic_orders(rank - out_rank - in_rank, &torsion)
}

/// `H_n = ker ∂_n / im ∂_{n+1}` in canonical form.
pub fn chain_homology(c: &ChainComplexZ, n: usize) -> Result<FGAbelianGroup> {
    if n > c.top_degree() {
        return Err(QkError::DegreeOutOfRange {
            degree: n,
            valid: format!("0..={}", c.top_degree()),
        });
    }
    let exec = Exec::default();
    let outgoing = (n > 0).then(|| invariant_factors(c.boundary(n), exec));
    let incoming = (n < c.top_degree()).then(|| invariant_factors(c.boundary(n + 1), exec));
    Ok(homology_from_invariants(
        c.rank(n),
        outgoing.as_ref(),
        incoming.as_ref(),
    ))
}

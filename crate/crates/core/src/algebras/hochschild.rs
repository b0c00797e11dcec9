use num_rational::BigRational;
use num_traits::Zero;

use super::algebra::FinDimAlgebra;
use super::bimodule::Bimodule;
use super::space::Vector;
use crate::error::{QkError, Result};
use crate::exec::Exec;
use crate::linalg::{Field, FieldMatrix, Limits};

/// Options for the Hochschild complex `C_n = M ⊗ A^{⊗n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct HochschildOptions {
    /// Use `Ā = A/k·1` for the tensor factors.
    pub normalized: bool,
    pub limits: Limits,
    pub exec: Exec,
}

impl HochschildOptions {
    pub fn normalized() -> Self {
        HochschildOptions {
            normalized: true,
            ..Self::default()
        }
    }

    pub fn with_limits(self, limits: Limits) -> Self {
        HochschildOptions { limits, ..self }
    }

    pub fn with_exec(self, exec: Exec) -> Self {
        HochschildOptions { exec, ..self }
    }
}

/// Basis of the tensor factor: `A` itself, or `Ā` with the coordinate
/// `pivot` (where the unit is nonzero) dropped.
struct Factor {
    field: Field,
    lift: Vec<usize>,
    dropped: Option<(usize, Vector)>,
}

impl Factor {
    fn new(a: &FinDimAlgebra, normalized: bool) -> Self {
        let d = a.dim();
        let pivot = if normalized {
            a.unit().iter().position(|x| !x.is_zero())
        } else {
            None
        };
        match pivot {
            Some(j) => Factor {
                field: a.field(),
                lift: (0..d).filter(|&i| i != j).collect(),
                dropped: Some((j, a.unit().clone())),
            },
            None => Factor {
                field: a.field(),
                lift: (0..d).collect(),
                dropped: None,
            },
        }
    }

    fn size(&self) -> usize {
        self.lift.len()
    }

    /// Coordinates of the class of `x` in the factor basis.
    fn project(&self, x: &[BigRational]) -> Vector {
        match &self.dropped {
            None => x.to_vec(),
            Some((j, u)) => {
                let f = self.field;
                let s = f.div(&x[*j], &u[*j]).expect("unit coordinate is nonzero");
                self.lift
                    .iter()
                    .map(|&i| f.sub(&x[i], &f.mul(&s, &u[i])))
                    .collect()
            }
        }
    }
}

fn chain_dim(m: usize, b: usize, n: usize) -> u128 {
    (m as u128).saturating_mul((b as u128).saturating_pow(n as u32))
}

/// `b_n: M ⊗ F^{⊗n} → M ⊗ F^{⊗(n−1)}`,
/// `b(m⊗a_1⊗…⊗a_n) = m a_1⊗a_2… + Σ (−1)^i m⊗…⊗a_i a_{i+1}⊗… + (−1)^n a_n m⊗a_1…`.
/// Basis `m_j ⊗ a_{t_1} ⊗ … ⊗ a_{t_n}` sits at `j·b^n + Σ t_k b^{n−k}`.
pub fn hochschild_boundary(
    a: &FinDimAlgebra,
    m: &Bimodule,
    n: usize,
    opts: &HochschildOptions,
) -> Result<FieldMatrix> {
    if m.algebra() != a {
        return Err(QkError::InvalidModule("bimodule over a different algebra".into()));
    }
    if n == 0 {
        return Err(QkError::DegreeOutOfRange {
            degree: 0,
            valid: "n >= 1".into(),
        });
    }
    let factor = Factor::new(a, opts.normalized);
    let f = a.field();
    let b = factor.size();
    let rows = chain_dim(m.dim(), b, n - 1);
    let cols = chain_dim(m.dim(), b, n);
    opts.limits.check_entries("Hochschild boundary", rows, cols)?;
    let (rows, cols) = (rows as usize, cols as usize);
    let block = b.pow((n - 1) as u32);
    let decode = |mut t: usize, len: usize| -> Vec<usize> {
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = t % b;
            t /= b;
        }
        out
    };
    let encode = |ts: &[usize]| ts.iter().fold(0, |acc, &t| acc * b + t);
    let sign = |i: usize| if i % 2 == 0 { f.one() } else { f.neg(&f.one()) };
    let indices: Vec<usize> = (0..cols).collect();
    let columns: Vec<Vec<(usize, BigRational)>> = opts.exec.map(&indices, |&col| {
        let j = col / (block * b);
        let ts = decode(col % (block * b), n);
        let lifted: Vec<usize> = ts.iter().map(|&t| factor.lift[t]).collect();
        let mut out: Vec<(usize, BigRational)> = Vec::new();
        // m·a_1 ⊗ a_2 … a_n
        let rest = encode(&ts[1..]);
        for (k, c) in m.right(lifted[0]).column(j).into_iter().enumerate() {
            if !c.is_zero() {
                out.push((k * block + rest, c));
            }
        }
        for i in 1..n {
            let prod = factor.project(a.structure(lifted[i - 1], lifted[i]));
            let s = sign(i);
            for (t, c) in prod.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut merged = Vec::with_capacity(n - 1);
                merged.extend_from_slice(&ts[..i - 1]);
                merged.push(t);
                merged.extend_from_slice(&ts[i + 1..]);
                out.push((j * block + encode(&merged), f.mul(&s, &c)));
            }
        }
        // (−1)^n a_n·m ⊗ a_1 … a_{n−1}
        let s = sign(n);
        let head = encode(&ts[..n - 1]);
        for (k, c) in m.left(lifted[n - 1]).column(j).into_iter().enumerate() {
            if !c.is_zero() {
                out.push((k * block + head, f.mul(&s, &c)));
            }
        }
        out
    });
    let mut mat = FieldMatrix::zeros(f, rows, cols);
    for (c, entries) in columns.into_iter().enumerate() {
        for (r, v) in entries {
            mat.add_to(r, c, &v);
        }
    }
    Ok(mat)
}

/// `dim HH_n(A; M)` for `n = 0..=max_degree`.
pub fn hochschild_homology(a: &FinDimAlgebra, m: &Bimodule, max_degree: usize) -> Result<Vec<usize>> {
    hochschild_homology_with(a, m, max_degree, &HochschildOptions::default())
}

pub fn hochschild_homology_with(
    a: &FinDimAlgebra,
    m: &Bimodule,
    max_degree: usize,
    opts: &HochschildOptions,
) -> Result<Vec<usize>> {
    opts.limits.check_degree(max_degree)?;
    let b = Factor::new(a, opts.normalized).size();
    for n in 1..=max_degree + 1 {
        opts.limits.check_entries(
            "Hochschild boundary",
            chain_dim(m.dim(), b, n - 1),
            chain_dim(m.dim(), b, n),
        )?;
    }
    let mut ranks = vec![0usize; max_degree + 2];
    for (n, rank) in ranks.iter_mut().enumerate().skip(1) {
        *rank = hochschild_boundary(a, m, n, opts)?.rank_with(opts.exec);
    }
    Ok((0..=max_degree)
        .map(|n| chain_dim(m.dim(), b, n) as usize - ranks[n] - ranks[n + 1])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::mult_kernel_bimodule;

    const Q: Field = Field::Rationals;

    fn hh(a: &FinDimAlgebra, n: usize) -> Vec<usize> {
        hochschild_homology(a, &Bimodule::regular(a), n).unwrap()
    }

    #[test]
    fn ground_field() {
        assert_eq!(hh(&FinDimAlgebra::ground(Q), 3), vec![1, 0, 0, 0]);
    }

    #[test]
    fn dual_numbers_over_q() {
        assert_eq!(hh(&FinDimAlgebra::dual_numbers(Q), 3), vec![2, 1, 1, 1]);
    }

    #[test]
    fn dual_numbers_in_char_two() {
        // the periodic resolution has zero differentials when 2 = 0
        let f2 = Field::prime(2).unwrap();
        assert_eq!(hh(&FinDimAlgebra::dual_numbers(f2), 3), vec![2, 2, 2, 2]);
    }

    #[test]
    fn separable_algebras() {
        assert_eq!(hh(&FinDimAlgebra::matrix_algebra(Q, 2), 3), vec![1, 0, 0, 0]);
        assert_eq!(hh(&FinDimAlgebra::diagonal(Q, 2), 2), vec![2, 0, 0]);
    }

    #[test]
    fn truncated_polynomial_periodic_oracle() {
        // k[x]/(x^3): HH_0 = 3, HH_odd = A/(3x^2) = 2, HH_even>0 = ann(3x^2) = 2
        assert_eq!(hh(&FinDimAlgebra::truncated_polynomial(Q, 3), 3), vec![3, 2, 2, 2]);
    }

    #[test]
    fn normalized_agrees() {
        for a in [
            FinDimAlgebra::dual_numbers(Q),
            FinDimAlgebra::upper_triangular(Q, 2),
            FinDimAlgebra::truncated_polynomial(Field::prime(3).unwrap(), 3),
        ] {
            let m = Bimodule::regular(&a);
            let u = hochschild_homology(&a, &m, 2).unwrap();
            let n = hochschild_homology_with(&a, &m, 2, &HochschildOptions::normalized()).unwrap();
            assert_eq!(u, n);
            let i = mult_kernel_bimodule(&a);
            let u = hochschild_homology(&a, &i, 1).unwrap();
            let n = hochschild_homology_with(&a, &i, 1, &HochschildOptions::normalized()).unwrap();
            assert_eq!(u, n);
        }
    }

    #[test]
    fn boundaries_compose_to_zero() {
        let a = FinDimAlgebra::upper_triangular(Q, 2);
        let m = Bimodule::regular(&a);
        let opts = HochschildOptions::default();
        let b1 = hochschild_boundary(&a, &m, 1, &opts).unwrap();
        let b2 = hochschild_boundary(&a, &m, 2, &opts).unwrap();
        assert!(b1.mul(&b2).unwrap().is_zero());
    }

    #[test]
    fn entry_cap() {
        let a = FinDimAlgebra::matrix_algebra(Q, 2);
        let opts = HochschildOptions::default().with_limits(Limits::with_entry_cap(10));
        let err = hochschild_homology_with(&a, &Bimodule::regular(&a), 2, &opts).unwrap_err();
        assert!(err.is_size_cap());
    }
}

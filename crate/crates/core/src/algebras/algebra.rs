use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::space::{add_scaled, is_zero_vector, sub_vectors, unit_vector, Subspace, Vector};
use crate::error::{QkError, Result};
use crate::linalg::{Field, FieldMatrix};

/// Associative unital algebra over `Q` or `F_p` by structure constants:
/// `e_i e_j = Σ_k mul[i][j][k] e_k`. Dimension 0 is the zero ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinDimAlgebra {
    field: Field,
    dim: usize,
    mul: Vec<Vec<Vector>>,
    unit: Vector,
}

/// A scalar in JSON: an integer or a string such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarSpec {
    Int(i64),
    Text(String),
}

impl ScalarSpec {
    pub fn to_field(&self, field: Field) -> Result<BigRational> {
        let q = match self {
            ScalarSpec::Int(x) => BigRational::from_integer(BigInt::from(*x)),
            ScalarSpec::Text(s) => parse_rational(s)?,
        };
        field.convert(&q)
    }

    pub fn from_field(x: &BigRational) -> Self {
        if x.is_integer() {
            if let Ok(v) = x.to_integer().try_into() {
                return ScalarSpec::Int(v);
            }
        }
        ScalarSpec::Text(x.to_string())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || QkError::Parse(format!("`{s}` is not a rational number"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// JSON form: `{ "field": "Q" | {"Fp": p}, "dim": d, "mul": c[i][j][k], "unit": [...] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub field: Field,
    pub dim: usize,
    pub mul: Vec<Vec<Vec<ScalarSpec>>>,
    pub unit: Vec<ScalarSpec>,
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<FinDimAlgebra> {
        let f = match self.field {
            Field::Prime(p) => Field::prime(p)?,
            q => q,
        };
        let conv = |xs: &[ScalarSpec]| xs.iter().map(|x| x.to_field(f)).collect::<Result<Vector>>();
        let mul = self
            .mul
            .iter()
            .map(|row| row.iter().map(|c| conv(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FinDimAlgebra::new(f, self.dim, mul, conv(&self.unit)?)
    }
}

impl FinDimAlgebra {
    /// Checks shapes, associativity on basis triples and the unit law.
    pub fn new(field: Field, dim: usize, mul: Vec<Vec<Vector>>, unit: Vector) -> Result<Self> {
        let shape_ok = mul.len() == dim
            && mul.iter().all(|r| r.len() == dim && r.iter().all(|c| c.len() == dim))
            && unit.len() == dim;
        if !shape_ok {
            return Err(QkError::InvalidAlgebra(format!(
                "structure constants must be {dim}x{dim}x{dim} and the unit of length {dim}"
            )));
        }
        let conv = |x: &BigRational| field.convert(x);
        let mul = mul
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| c.iter().map(conv).collect::<Result<Vector>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let unit = unit.iter().map(conv).collect::<Result<Vector>>()?;
        let a = FinDimAlgebra {
            field,
            dim,
            mul,
            unit,
        };
        for i in 0..dim {
            for j in 0..dim {
                let ij = a.mul[i][j].clone();
                for k in 0..dim {
                    let lhs = a.mul_vec(&ij, &a.basis(k));
                    let rhs = a.mul_vec(&a.basis(i), &a.mul[j][k]);
                    if lhs != rhs {
                        return Err(QkError::InvalidAlgebra(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
            let e = a.basis(i);
            if a.mul_vec(&a.unit, &e) != e || a.mul_vec(&e, &a.unit) != e {
                return Err(QkError::InvalidAlgebra(format!(
                    "unit law fails on basis element {i}"
                )));
            }
        }
        Ok(a)
    }

    /// Builds from a bilinear product on basis indices.
    pub fn from_fn(
        field: Field,
        dim: usize,
        unit: Vector,
        f: impl Fn(usize, usize) -> Vector,
    ) -> Result<Self> {
        let mul = (0..dim).map(|i| (0..dim).map(|j| f(i, j)).collect()).collect();
        Self::new(field, dim, mul, unit)
    }

    pub fn spec(&self) -> AlgebraSpec {
        let conv = |v: &Vector| v.iter().map(ScalarSpec::from_field).collect();
        AlgebraSpec {
            field: self.field,
            dim: self.dim,
            mul: self.mul.iter().map(|r| r.iter().map(conv).collect()).collect(),
            unit: conv(&self.unit),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn structure(&self, i: usize, j: usize) -> &Vector {
        &self.mul[i][j]
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vector(self.field, self.dim, i)
    }

    pub fn zero_vector(&self) -> Vector {
        vec![self.field.zero(); self.dim]
    }

    pub fn mul_vec(&self, x: &[BigRational], y: &[BigRational]) -> Vector {
        let f = self.field;
        let mut out = self.zero_vector();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                add_scaled(f, &mut out, &f.mul(xi, yj), &self.mul[i][j]);
            }
        }
        out
    }

    pub fn pow(&self, x: &[BigRational], n: usize) -> Vector {
        let mut out = self.unit.clone();
        for _ in 0..n {
            out = self.mul_vec(&out, x);
        }
        out
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_mult(&self, x: &[BigRational]) -> FieldMatrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul_vec(x, &self.basis(j))).collect();
        FieldMatrix::from_columns(self.field, self.dim, &cols)
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_mult(&self, x: &[BigRational]) -> FieldMatrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul_vec(&self.basis(j), x)).collect();
        FieldMatrix::from_columns(self.field, self.dim, &cols)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.mul[i][j] == self.mul[j][i]))
    }

    pub fn is_zero_ring(&self) -> bool {
        self.dim == 0
    }

    /// Smallest two-sided ideal containing `gens`.
    pub fn ideal_generated(&self, gens: &[Vector]) -> Subspace {
        let mut ideal = Subspace::new(self.field, self.dim);
        let mut queue: Vec<Vector> = gens.to_vec();
        while let Some(v) = queue.pop() {
            if !ideal.insert(&v) {
                continue;
            }
            for k in 0..self.dim {
                let e = self.basis(k);
                queue.push(self.mul_vec(&e, &v));
                queue.push(self.mul_vec(&v, &e));
            }
        }
        ideal
    }

    /// `A/I` for a two-sided ideal `I`, with the quotient map.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(FinDimAlgebra, FieldMatrix)> {
        for v in ideal.basis() {
            for k in 0..self.dim {
                let e = self.basis(k);
                if !ideal.contains(&self.mul_vec(&e, v)) || !ideal.contains(&self.mul_vec(v, &e)) {
                    return Err(QkError::InvalidAlgebra("not a two-sided ideal".into()));
                }
            }
        }
        let comp = ideal.complement();
        let q = ideal.quotient_matrix();
        let unit = ideal.quotient_coords(&self.unit);
        let algebra = FinDimAlgebra::from_fn(self.field, comp.len(), unit, |a, b| {
            ideal.quotient_coords(&self.mul[comp[a]][comp[b]])
        })?;
        Ok((algebra, q))
    }

    /// `Com(A) = A / ⟨ab − ba⟩` with the quotient map.
    pub fn commutator_quotient(&self) -> (FinDimAlgebra, FieldMatrix) {
        let gens: Vec<Vector> = (0..self.dim)
            .flat_map(|i| (0..self.dim).map(move |j| (i, j)))
            .map(|(i, j)| sub_vectors(self.field, &self.mul[i][j], &self.mul[j][i]))
            .collect();
        let ideal = self.ideal_generated(&gens);
        let (c, q) = self.quotient(&ideal).expect("generated ideal is two-sided");
        debug_assert!(c.is_commutative());
        (c, q)
    }

    pub fn is_nilpotent(&self, x: &[BigRational], bound: usize) -> bool {
        let mut p = x.to_vec();
        for _ in 0..bound {
            if is_zero_vector(&p) {
                return true;
            }
            p = self.mul_vec(&p, x);
        }
        is_zero_vector(&p)
    }

    /// Nilradical of a commutative algebra. In characteristic 0 this is the
    /// radical of the trace form `tr(L_x L_y)`; in characteristic `p` the
    /// kernel of the linear map `x ↦ x^{p^k}` with `p^k ≥ dim`.
    pub fn nilradical(&self) -> Result<Subspace> {
        if !self.is_commutative() {
            return Err(QkError::InvalidAlgebra(
                "nilradical is only computed for commutative algebras".into(),
            ));
        }
        let f = self.field;
        let kernel = match f {
            Field::Rationals => {
                let mults: Vec<FieldMatrix> =
                    (0..self.dim).map(|i| self.left_mult(&self.basis(i))).collect();
                let mut gram = FieldMatrix::zeros(f, self.dim, self.dim);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        let prod = mults[i].mul(&mults[j]).expect("square");
                        let mut tr = f.zero();
                        for k in 0..self.dim {
                            tr = f.add(&tr, prod.get(k, k));
                        }
                        gram.set(i, j, tr);
                    }
                }
                gram.kernel_basis()
            }
            Field::Prime(p) => {
                let mut e = 1usize;
                while e < self.dim.max(1) {
                    e *= p as usize;
                }
                let cols: Vec<Vector> = (0..self.dim).map(|i| self.pow(&self.basis(i), e)).collect();
                FieldMatrix::from_columns(f, self.dim, &cols).kernel_basis()
            }
        };
        let vectors: Vec<Vector> = (0..kernel.cols()).map(|c| kernel.column(c)).collect();
        let nil = Subspace::spanned_by(f, self.dim, &vectors);
        for v in nil.basis() {
            assert!(
                self.is_nilpotent(v, 2 * self.dim.max(1)),
                "nilradical basis vector is not nilpotent"
            );
        }
        Ok(nil)
    }

    pub fn is_reduced(&self) -> Result<bool> {
        Ok(self.nilradical()?.dim() == 0)
    }

    // ---- builtins ----

    /// The ground field as a 1-dimensional algebra.
    pub fn ground(field: Field) -> Self {
        Self::from_fn(field, 1, vec![field.one()], |_, _| vec![field.one()]).expect("k")
    }

    /// `k^n` with orthogonal idempotents.
    pub fn diagonal(field: Field, n: usize) -> Self {
        Self::from_fn(field, n, vec![field.one(); n], |i, j| {
            if i == j {
                unit_vector(field, n, i)
            } else {
                vec![field.zero(); n]
            }
        })
        .expect("k^n")
    }

    /// `k[x]/(x^n)` on the basis `1, x, …, x^{n−1}`.
    pub fn truncated_polynomial(field: Field, n: usize) -> Self {
        Self::from_fn(field, n, unit_vector(field, n, 0), |i, j| {
            if i + j < n {
                unit_vector(field, n, i + j)
            } else {
                vec![field.zero(); n]
            }
        })
        .expect("k[x]/(x^n)")
    }

    pub fn dual_numbers(field: Field) -> Self {
        Self::truncated_polynomial(field, 2)
    }

    /// `M_n(k)` on matrix units `E_{ab}` with index `a·n + b`.
    pub fn matrix_algebra(field: Field, n: usize) -> Self {
        let d = n * n;
        let unit = (0..d)
            .map(|i| if i / n == i % n { field.one() } else { field.zero() })
            .collect();
        Self::from_fn(field, d, unit, |i, j| {
            let (a, b, c, e) = (i / n, i % n, j / n, j % n);
            if b == c {
                unit_vector(field, d, a * n + e)
            } else {
                vec![field.zero(); d]
            }
        })
        .expect("M_n(k)")
    }

    /// Upper-triangular `n×n` matrices on `E_{ab}` (`a ≤ b`) in row-major order.
    pub fn upper_triangular(field: Field, n: usize) -> Self {
        let units: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        let d = units.len();
        let index = |a: usize, b: usize| units.iter().position(|&u| u == (a, b)).unwrap();
        let unit = units
            .iter()
            .map(|&(a, b)| if a == b { field.one() } else { field.zero() })
            .collect();
        Self::from_fn(field, d, unit, |i, j| {
            let ((a, b), (c, e)) = (units[i], units[j]);
            if b == c {
                unit_vector(field, d, index(a, e))
            } else {
                vec![field.zero(); d]
            }
        })
        .expect("upper triangular")
    }

    /// Free associative algebra on `gens` letters modulo words of length
    /// `> degree`; basis = words ordered by length then lexicographically.
    pub fn truncated_tensor(field: Field, gens: usize, degree: usize) -> Self {
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..degree {
            layer = layer
                .iter()
                .flat_map(|w: &Vec<usize>| {
                    (0..gens).map(move |g| {
                        let mut w2 = w.clone();
                        w2.push(g);
                        w2
                    })
                })
                .collect();
            words.extend(layer.iter().cloned());
        }
        let d = words.len();
        Self::from_fn(field, d, unit_vector(field, d, 0), |i, j| {
            let mut w = words[i].clone();
            w.extend_from_slice(&words[j]);
            match words.iter().position(|x| *x == w) {
                Some(k) => unit_vector(field, d, k),
                None => vec![field.zero(); d],
            }
        })
        .expect("truncated tensor algebra")
    }

    /// Commutative polynomials in `gens` variables modulo monomials of degree
    /// `> degree`; basis = exponent vectors ordered by degree then reverse
    /// lexicographically on exponents.
    pub fn truncated_symmetric(field: Field, gens: usize, degree: usize) -> Self {
        let monomials = monomials_up_to(gens, degree);
        let d = monomials.len();
        debug_assert_eq!(
            BigInt::from(d),
            binomial(BigInt::from(gens + degree), BigInt::from(degree))
        );
        Self::from_fn(field, d, unit_vector(field, d, 0), |i, j| {
            let m: Vec<usize> = monomials[i].iter().zip(&monomials[j]).map(|(a, b)| a + b).collect();
            match monomials.iter().position(|x| *x == m) {
                Some(k) => unit_vector(field, d, k),
                None => vec![field.zero(); d],
            }
        })
        .expect("truncated polynomial algebra")
    }

    /// Linear map between algebras given on basis vectors; checks that it is
    /// a unital algebra homomorphism.
    pub fn is_algebra_hom(&self, target: &FinDimAlgebra, map: &FieldMatrix) -> bool {
        if map.rows() != target.dim || map.cols() != self.dim {
            return false;
        }
        if map.mul_vec(&self.unit) != target.unit {
            return false;
        }
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let lhs = map.mul_vec(&self.mul[i][j]);
                let rhs = target.mul_vec(&map.column(i), &map.column(j));
                lhs == rhs
            })
        })
    }
}

/// Exponent vectors of total degree `≤ degree`, by degree.
pub fn monomials_up_to(gens: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for total in 0..=degree {
        let mut layer = Vec::new();
        compositions(gens, total, &mut vec![], &mut layer);
        layer.reverse();
        out.extend(layer);
    }
    out
}

fn compositions(parts: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(parts - 1, total - first, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn builtins_are_valid() {
        assert_eq!(FinDimAlgebra::ground(Q).dim(), 1);
        assert_eq!(FinDimAlgebra::diagonal(Q, 2).dim(), 2);
        assert_eq!(FinDimAlgebra::matrix_algebra(Q, 2).dim(), 4);
        assert_eq!(FinDimAlgebra::upper_triangular(Q, 2).dim(), 3);
        assert_eq!(FinDimAlgebra::truncated_tensor(Q, 2, 2).dim(), 7);
        assert_eq!(FinDimAlgebra::truncated_symmetric(Q, 2, 2).dim(), 6);
        assert!(!FinDimAlgebra::matrix_algebra(Q, 2).is_commutative());
    }

    #[test]
    fn rejects_nonassociative_constants() {
        // e_1 is declared the unit but e_1 e_0 = 0
        let f = Q;
        let mul = vec![
            vec![vec![f.one(), f.zero()], vec![f.zero(), f.one()]],
            vec![vec![f.zero(), f.one()], vec![f.one(), f.one()]],
        ];
        assert!(FinDimAlgebra::new(f, 2, mul, vec![f.zero(), f.one()]).is_err());
    }

    #[test]
    fn commutator_quotients() {
        let (c, _) = FinDimAlgebra::dual_numbers(Q).commutator_quotient();
        assert_eq!(c.dim(), 2);
        let (c, _) = FinDimAlgebra::matrix_algebra(Q, 2).commutator_quotient();
        assert!(c.is_zero_ring());
        let (c, q) = FinDimAlgebra::upper_triangular(Q, 2).commutator_quotient();
        assert_eq!(c.dim(), 2);
        assert!(c.is_commutative());
        assert!(FinDimAlgebra::upper_triangular(Q, 2).is_algebra_hom(&c, &q));
    }

    #[test]
    fn tensor_to_symmetric() {
        for n in 1..=3 {
            let (c, _) = FinDimAlgebra::truncated_tensor(Q, n, 2).commutator_quotient();
            assert_eq!(c.dim(), (n + 2) * (n + 1) / 2);
        }
    }

    #[test]
    fn nilradicals() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(FinDimAlgebra::dual_numbers(f2).nilradical().unwrap().dim(), 1);
        assert_eq!(FinDimAlgebra::truncated_polynomial(Q, 3).nilradical().unwrap().dim(), 2);
        assert!(FinDimAlgebra::diagonal(Q, 3).is_reduced().unwrap());
        assert!(FinDimAlgebra::diagonal(f2, 2).is_reduced().unwrap());
        assert!(FinDimAlgebra::matrix_algebra(Q, 2).nilradical().is_err());
    }

    #[test]
    fn spec_round_trip() {
        let a = FinDimAlgebra::upper_triangular(Q, 2);
        let json = serde_json::to_string(&a.spec()).unwrap();
        let back: AlgebraSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), a);
        let f3 = FinDimAlgebra::dual_numbers(Field::prime(3).unwrap());
        let json = serde_json::to_string(&f3.spec()).unwrap();
        assert!(json.contains("{\"Fp\":3}"));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/4").unwrap(), BigRational::new((-3).into(), 4.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}

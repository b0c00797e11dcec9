use num_rational::BigRational;
use num_traits::Zero;

use super::algebra::FinDimAlgebra;
use super::space::{sub_vectors, unit_vector, Subspace, Vector};
use crate::error::{QkError, Result};
use crate::linalg::{Field, FieldMatrix};

/// An `A`-bimodule by action matrices on column vectors:
/// `left[i]` is `m ↦ e_i·m`, `right[i]` is `m ↦ m·e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    algebra: FinDimAlgebra,
    dim: usize,
    left: Vec<FieldMatrix>,
    right: Vec<FieldMatrix>,
}

fn combination(field: Field, dim: usize, mats: &[FieldMatrix], coeffs: &[BigRational]) -> FieldMatrix {
    let mut out = FieldMatrix::zeros(field, dim, dim);
    for (m, c) in mats.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for r in 0..dim {
            for col in 0..dim {
                let v = m.get(r, col);
                if !v.is_zero() {
                    out.add_to(r, col, &field.mul(c, v));
                }
            }
        }
    }
    out
}

impl Bimodule {
    /// Checks unitality, associativity of both actions and their
    /// compatibility `(a·m)·b = a·(m·b)` on basis triples.
    pub fn new(
        algebra: FinDimAlgebra,
        dim: usize,
        left: Vec<FieldMatrix>,
        right: Vec<FieldMatrix>,
    ) -> Result<Self> {
        let d = algebra.dim();
        let f = algebra.field();
        let shapes = left.len() == d
            && right.len() == d
            && left.iter().chain(&right).all(|m| m.rows() == dim && m.cols() == dim && m.field() == f);
        if !shapes {
            return Err(QkError::InvalidModule(format!(
                "need {d} left and {d} right action matrices of size {dim}x{dim}"
            )));
        }
        let b = Bimodule {
            algebra,
            dim,
            left,
            right,
        };
        let id = FieldMatrix::identity(f, dim);
        if b.left_action(b.algebra.unit()) != id || b.right_action(b.algebra.unit()) != id {
            return Err(QkError::InvalidModule("the unit does not act as the identity".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let prod = b.algebra.structure(i, j).clone();
                if b.left[i].mul(&b.left[j])? != b.left_action(&prod) {
                    return Err(QkError::InvalidModule(format!(
                        "left action not associative on ({i}, {j})"
                    )));
                }
                if b.right[j].mul(&b.right[i])? != b.right_action(&prod) {
                    return Err(QkError::InvalidModule(format!(
                        "right action not associative on ({i}, {j})"
                    )));
                }
                if b.left[i].mul(&b.right[j])? != b.right[j].mul(&b.left[i])? {
                    return Err(QkError::InvalidModule(format!(
                        "(e_{i}·m)·e_{j} != e_{i}·(m·e_{j})"
                    )));
                }
            }
        }
        Ok(b)
    }

    /// `A` over itself.
    pub fn regular(a: &FinDimAlgebra) -> Self {
        let left = (0..a.dim()).map(|i| a.left_mult(&a.basis(i))).collect();
        let right = (0..a.dim()).map(|i| a.right_mult(&a.basis(i))).collect();
        Bimodule {
            algebra: a.clone(),
            dim: a.dim(),
            left,
            right,
        }
    }

    pub fn zero(a: &FinDimAlgebra) -> Self {
        let z = FieldMatrix::zeros(a.field(), 0, 0);
        Bimodule {
            algebra: a.clone(),
            dim: 0,
            left: vec![z.clone(); a.dim()],
            right: vec![z; a.dim()],
        }
    }

    pub fn algebra(&self) -> &FinDimAlgebra {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self, i: usize) -> &FieldMatrix {
        &self.left[i]
    }

    pub fn right(&self, i: usize) -> &FieldMatrix {
        &self.right[i]
    }

    pub fn left_action(&self, x: &[BigRational]) -> FieldMatrix {
        combination(self.field(), self.dim, &self.left, x)
    }

    pub fn right_action(&self, x: &[BigRational]) -> FieldMatrix {
        combination(self.field(), self.dim, &self.right, x)
    }

    pub fn has_equal_actions(&self) -> bool {
        self.left == self.right
    }

    /// Smallest sub-bimodule containing `gens`.
    pub fn generated(&self, gens: &[Vector]) -> Subspace {
        let mut sub = Subspace::new(self.field(), self.dim);
        let mut queue = gens.to_vec();
        while let Some(v) = queue.pop() {
            if !sub.insert(&v) {
                continue;
            }
            for i in 0..self.algebra.dim() {
                queue.push(self.left[i].mul_vec(&v));
                queue.push(self.right[i].mul_vec(&v));
            }
        }
        sub
    }

    fn is_sub(&self, sub: &Subspace) -> bool {
        sub.basis().iter().all(|v| {
            (0..self.algebra.dim())
                .all(|i| sub.contains(&self.left[i].mul_vec(v)) && sub.contains(&self.right[i].mul_vec(v)))
        })
    }

    /// The sub-bimodule with the given basis (columns of `basis`).
    pub fn restrict(&self, basis: &FieldMatrix) -> Result<Bimodule> {
        let restrict = |m: &FieldMatrix| -> Result<FieldMatrix> {
            let image = m.mul(basis)?;
            basis
                .solve_matrix(&image)
                .ok_or_else(|| QkError::InvalidModule("subspace is not a sub-bimodule".into()))
        };
        let left = self.left.iter().map(restrict).collect::<Result<Vec<_>>>()?;
        let right = self.right.iter().map(restrict).collect::<Result<Vec<_>>>()?;
        Bimodule::new(self.algebra.clone(), basis.cols(), left, right)
    }

    /// `M/S` with the quotient map.
    pub fn quotient(&self, sub: &Subspace) -> Result<(Bimodule, FieldMatrix)> {
        if !self.is_sub(sub) {
            return Err(QkError::InvalidModule("subspace is not a sub-bimodule".into()));
        }
        let q = sub.quotient_matrix();
        let comp = sub.complement();
        let f = self.field();
        let induced = |m: &FieldMatrix| -> FieldMatrix {
            let cols: Vec<Vector> = comp.iter().map(|&c| sub.quotient_coords(&m.column(c))).collect();
            FieldMatrix::from_columns(f, comp.len(), &cols)
        };
        let left = self.left.iter().map(induced).collect();
        let right = self.right.iter().map(induced).collect();
        Ok((Bimodule::new(self.algebra.clone(), comp.len(), left, right)?, q))
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &Bimodule) -> Result<Bimodule> {
        if self.algebra != other.algebra {
            return Err(QkError::InvalidModule("bimodules over different algebras".into()));
        }
        let f = self.field();
        let n = self.dim + other.dim;
        let block = |a: &FieldMatrix, b: &FieldMatrix| {
            let mut out = FieldMatrix::zeros(f, n, n);
            for r in 0..self.dim {
                for c in 0..self.dim {
                    out.set(r, c, a.get(r, c).clone());
                }
            }
            for r in 0..other.dim {
                for c in 0..other.dim {
                    out.set(self.dim + r, self.dim + c, b.get(r, c).clone());
                }
            }
            out
        };
        let left = self.left.iter().zip(&other.left).map(|(a, b)| block(a, b)).collect();
        let right = self.right.iter().zip(&other.right).map(|(a, b)| block(a, b)).collect();
        Bimodule::new(self.algebra.clone(), n, left, right)
    }
}

/// A left module over a commutative algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RModule {
    algebra: FinDimAlgebra,
    dim: usize,
    action: Vec<FieldMatrix>,
}

impl RModule {
    pub fn new(algebra: FinDimAlgebra, dim: usize, action: Vec<FieldMatrix>) -> Result<Self> {
        if !algebra.is_commutative() {
            return Err(QkError::InvalidModule("modules are taken over commutative algebras".into()));
        }
        let f = algebra.field();
        if action.len() != algebra.dim() || action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(QkError::InvalidModule(format!(
                "need {} action matrices of size {dim}x{dim}",
                algebra.dim()
            )));
        }
        let m = RModule {
            algebra,
            dim,
            action,
        };
        if m.act(m.algebra.unit()) != FieldMatrix::identity(f, dim) {
            return Err(QkError::InvalidModule("the unit does not act as the identity".into()));
        }
        for i in 0..m.algebra.dim() {
            for j in 0..m.algebra.dim() {
                if m.action[i].mul(&m.action[j])? != m.act(m.algebra.structure(i, j)) {
                    return Err(QkError::InvalidModule(format!("action not associative on ({i}, {j})")));
                }
            }
        }
        Ok(m)
    }

    pub fn regular(a: &FinDimAlgebra) -> Result<Self> {
        let action = (0..a.dim()).map(|i| a.left_mult(&a.basis(i))).collect();
        Self::new(a.clone(), a.dim(), action)
    }

    pub fn zero(a: &FinDimAlgebra) -> Self {
        RModule {
            algebra: a.clone(),
            dim: 0,
            action: vec![FieldMatrix::zeros(a.field(), 0, 0); a.dim()],
        }
    }

    /// `k^dim` where `e_i` acts by the scalar `chi(e_i)` (a character `A → k`).
    pub fn from_character(a: &FinDimAlgebra, dim: usize, chi: &[BigRational]) -> Result<Self> {
        let f = a.field();
        let action = chi
            .iter()
            .map(|c| {
                let mut m = FieldMatrix::zeros(f, dim, dim);
                for i in 0..dim {
                    m.set(i, i, c.clone());
                }
                m
            })
            .collect();
        Self::new(a.clone(), dim, action)
    }

    pub fn algebra(&self) -> &FinDimAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &FieldMatrix {
        &self.action[i]
    }

    pub fn act(&self, x: &[BigRational]) -> FieldMatrix {
        combination(self.algebra.field(), self.dim, &self.action, x)
    }

    /// The "same action" bimodule over `A`, where `A` acts through an
    /// algebra map `q: A → self.algebra` on both sides.
    pub fn same_action(&self, a: &FinDimAlgebra, q: &FieldMatrix) -> Result<Bimodule> {
        if !a.is_algebra_hom(&self.algebra, q) {
            return Err(QkError::InvalidModule("q is not an algebra map".into()));
        }
        let acts: Vec<FieldMatrix> = (0..a.dim()).map(|i| self.act(&q.column(i))).collect();
        Bimodule::new(a.clone(), self.dim, acts.clone(), acts)
    }
}

/// `I_A = ker(μ: A⊗A → A)` with the outer actions `a·(x⊗y)·b = ax⊗yb`.
/// `A⊗A` uses the basis `e_i⊗e_j` at index `i·d + j`.
pub fn mult_kernel_bimodule(a: &FinDimAlgebra) -> Bimodule {
    let tensor = enveloping_bimodule(a);
    let f = a.field();
    let d = a.dim();
    let cols: Vec<Vector> = (0..d * d).map(|t| a.structure(t / d, t % d).clone()).collect();
    let mu = FieldMatrix::from_columns(f, d, &cols);
    let kernel = mu.kernel_basis();
    tensor.restrict(&kernel).expect("ker μ is a sub-bimodule")
}

/// `A⊗A` with the outer bimodule structure.
pub fn enveloping_bimodule(a: &FinDimAlgebra) -> Bimodule {
    let f = a.field();
    let d = a.dim();
    let n = d * d;
    let build = |x: usize, on_left: bool| -> FieldMatrix {
        let mut m = FieldMatrix::zeros(f, n, n);
        for i in 0..d {
            for j in 0..d {
                let src = i * d + j;
                if on_left {
                    for (k, c) in a.structure(x, i).iter().enumerate() {
                        if !c.is_zero() {
                            m.add_to(k * d + j, src, c);
                        }
                    }
                } else {
                    for (k, c) in a.structure(j, x).iter().enumerate() {
                        if !c.is_zero() {
                            m.add_to(i * d + k, src, c);
                        }
                    }
                }
            }
        }
        m
    };
    let left = (0..d).map(|x| build(x, true)).collect();
    let right = (0..d).map(|x| build(x, false)).collect();
    Bimodule::new(a.clone(), n, left, right).expect("A⊗A is a bimodule")
}

/// `CQ(M) = M / ⟨a·m − m·a⟩` (sub-bimodule generated).
#[derive(Clone, Debug)]
pub struct CentralQuotient {
    pub dim: usize,
    /// `dim × dim(M)` matrix of the quotient map.
    pub quotient_map: FieldMatrix,
    pub bimodule: Bimodule,
    /// `CQ(M)` as a module over `Com(A)`.
    pub module: RModule,
}

pub fn central_quotient(m: &Bimodule) -> CentralQuotient {
    let a = m.algebra();
    let f = a.field();
    let gens: Vec<Vector> = (0..a.dim())
        .flat_map(|i| (0..m.dim()).map(move |j| (i, j)))
        .map(|(i, j)| {
            let e = unit_vector(f, m.dim(), j);
            sub_vectors(f, &m.left(i).mul_vec(&e), &m.right(i).mul_vec(&e))
        })
        .collect();
    let sub = m.generated(&gens);
    let (bimodule, quotient_map) = m.quotient(&sub).expect("generated sub-bimodule");
    debug_assert!(bimodule.has_equal_actions());
    let (com, q) = a.commutator_quotient();
    let module = com_module(&bimodule, &com, &q);
    CentralQuotient {
        dim: bimodule.dim(),
        quotient_map,
        bimodule,
        module,
    }
}

/// A bimodule with equal actions as a module over `Com(A)`: the basis
/// element `t` of `Com(A)` acts as any preimage does.
fn com_module(b: &Bimodule, com: &FinDimAlgebra, q: &FieldMatrix) -> RModule {
    let f = com.field();
    let action = (0..com.dim())
        .map(|t| {
            let target = unit_vector(f, com.dim(), t);
            let pre = q.solve(&target).expect("quotient map is onto");
            b.left_action(&pre)
        })
        .collect();
    RModule::new(com.clone(), b.dim(), action).expect("actions factor through Com(A)")
}

/// `HH_0`-style quotient `M / span{a·m − m·a}` (no closure); its dimension
/// is at least that of the central quotient.
pub fn commutator_span_quotient_dim(m: &Bimodule) -> usize {
    let a = m.algebra();
    let f = a.field();
    let gens: Vec<Vector> = (0..a.dim())
        .flat_map(|i| (0..m.dim()).map(move |j| (i, j)))
        .map(|(i, j)| {
            let e = unit_vector(f, m.dim(), j);
            sub_vectors(f, &m.left(i).mul_vec(&e), &m.right(i).mul_vec(&e))
        })
        .collect();
    m.dim() - Subspace::spanned_by(f, m.dim(), &gens).dim()
}

/// Basis of `{X : X·S_i = T_i·X}` for paired action matrices, as matrices
/// `target_dim × source_dim`.
pub fn intertwiners(
    field: Field,
    source_dim: usize,
    target_dim: usize,
    pairs: &[(&FieldMatrix, &FieldMatrix)],
) -> Vec<FieldMatrix> {
    let unknowns = source_dim * target_dim;
    let idx = |r: usize, c: usize| r * source_dim + c;
    let mut rows: Vec<Vector> = Vec::new();
    for (s, t) in pairs {
        for r in 0..target_dim {
            for c in 0..source_dim {
                let mut eq = vec![field.zero(); unknowns];
                for k in 0..source_dim {
                    let v = s.get(k, c);
                    if !v.is_zero() {
                        eq[idx(r, k)] = field.add(&eq[idx(r, k)], v);
                    }
                }
                for k in 0..target_dim {
                    let v = t.get(r, k);
                    if !v.is_zero() {
                        eq[idx(k, c)] = field.sub(&eq[idx(k, c)], v);
                    }
                }
                rows.push(eq);
            }
        }
    }
    let system = FieldMatrix::from_rows_vec(field, unknowns, &rows);
    let kernel = system.kernel_basis();
    (0..kernel.cols())
        .map(|j| {
            let v = kernel.column(j);
            let mut x = FieldMatrix::zeros(field, target_dim, source_dim);
            for r in 0..target_dim {
                for c in 0..source_dim {
                    x.set(r, c, v[idx(r, c)].clone());
                }
            }
            x
        })
        .collect()
}

/// Basis of `Hom_{A-A}(M, N)`.
pub fn bimodule_homs(m: &Bimodule, n: &Bimodule) -> Result<Vec<FieldMatrix>> {
    if m.algebra() != n.algebra() {
        return Err(QkError::InvalidModule("bimodules over different algebras".into()));
    }
    let pairs: Vec<(&FieldMatrix, &FieldMatrix)> = (0..m.algebra().dim())
        .flat_map(|i| [(m.left(i), n.left(i)), (m.right(i), n.right(i))])
        .collect();
    Ok(intertwiners(m.field(), m.dim(), n.dim(), &pairs))
}

/// Basis of `Hom_R(M, N)`.
pub fn module_homs(m: &RModule, n: &RModule) -> Result<Vec<FieldMatrix>> {
    if m.algebra() != n.algebra() {
        return Err(QkError::InvalidModule("modules over different algebras".into()));
    }
    let pairs: Vec<(&FieldMatrix, &FieldMatrix)> =
        (0..m.algebra().dim()).map(|i| (m.action(i), n.action(i))).collect();
    Ok(intertwiners(m.algebra().field(), m.dim(), n.dim(), &pairs))
}

/// Checks that `x: M → N` is a bimodule map.
pub fn is_bimodule_map(m: &Bimodule, n: &Bimodule, x: &FieldMatrix) -> bool {
    x.rows() == n.dim()
        && x.cols() == m.dim()
        && (0..m.algebra().dim()).all(|i| {
            x.mul(m.left(i)).ok() == n.left(i).mul(x).ok()
                && x.mul(m.right(i)).ok() == n.right(i).mul(x).ok()
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn regular_bimodules_are_valid() {
        for a in [
            FinDimAlgebra::matrix_algebra(Q, 2),
            FinDimAlgebra::upper_triangular(Q, 2),
            FinDimAlgebra::dual_numbers(Field::prime(2).unwrap()),
        ] {
            let r = Bimodule::regular(&a);
            assert!(Bimodule::new(a.clone(), r.dim(), r.left.clone(), r.right.clone()).is_ok());
        }
    }

    #[test]
    fn mult_kernel_dimensions() {
        assert_eq!(mult_kernel_bimodule(&FinDimAlgebra::ground(Q)).dim(), 0);
        assert_eq!(mult_kernel_bimodule(&FinDimAlgebra::dual_numbers(Q)).dim(), 2);
        assert_eq!(mult_kernel_bimodule(&FinDimAlgebra::diagonal(Q, 2)).dim(), 2);
        assert_eq!(mult_kernel_bimodule(&FinDimAlgebra::matrix_algebra(Q, 2)).dim(), 12);
    }

    #[test]
    fn central_quotient_examples() {
        let comm = FinDimAlgebra::truncated_polynomial(Q, 3);
        assert_eq!(central_quotient(&Bimodule::regular(&comm)).dim, 3);
        let m2 = FinDimAlgebra::matrix_algebra(Q, 2);
        assert_eq!(central_quotient(&Bimodule::regular(&m2)).dim, 0);
        let t2 = FinDimAlgebra::upper_triangular(Q, 2);
        let cq = central_quotient(&Bimodule::regular(&t2));
        assert_eq!(cq.dim, 2);
        assert_eq!(cq.quotient_map.rows(), 2);
        assert_eq!(cq.quotient_map.cols(), 3);
    }

    #[test]
    fn commutator_span_vs_central_quotient() {
        let m2 = FinDimAlgebra::matrix_algebra(Q, 2);
        // trace survives in M/[A,M] but not in the central quotient
        assert_eq!(commutator_span_quotient_dim(&Bimodule::regular(&m2)), 1);
        let t2 = FinDimAlgebra::upper_triangular(Q, 2);
        assert_eq!(commutator_span_quotient_dim(&Bimodule::regular(&t2)), 2);
    }

    #[test]
    fn hom_spaces() {
        let a = FinDimAlgebra::dual_numbers(Q);
        let r = Bimodule::regular(&a);
        // End of A as a bimodule over commutative A is A itself
        assert_eq!(bimodule_homs(&r, &r).unwrap().len(), 2);
        let m = RModule::regular(&a).unwrap();
        assert_eq!(module_homs(&m, &m).unwrap().len(), 2);
    }

    #[test]
    fn rejects_incompatible_actions() {
        let a = FinDimAlgebra::dual_numbers(Q);
        let r = Bimodule::regular(&a);
        let mut right = r.right.clone();
        // ε acting invertibly contradicts ε² = 0
        right[1] = FieldMatrix::identity(Q, 2);
        assert!(Bimodule::new(a, 2, r.left.clone(), right).is_err());
    }
}

use std::collections::HashMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::algebra::FinDimAlgebra;
use super::bimodule::RModule;
use super::poly::{parse_poly, Exponent, Poly};
use super::space::{unit_vector, Subspace, Vector};
use crate::error::{QkError, Result};
use crate::linalg::{Field, FieldMatrix};

/// JSON form: `{ "field": ..., "vars": ["x", ...], "relations": ["x^3", ...] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommRingSpec {
    pub field: Field,
    pub vars: Vec<String>,
    pub relations: Vec<String>,
}

impl CommRingSpec {
    pub fn build(&self) -> Result<CommRingPres> {
        let field = match self.field {
            Field::Prime(p) => Field::prime(p)?,
            q => q,
        };
        let relations = self
            .relations
            .iter()
            .map(|r| parse_poly(field, &self.vars, r))
            .collect::<Result<Vec<_>>>()?;
        CommRingPres::new(field, self.vars.clone(), relations)
    }
}

/// How the relation ideal is normalized without Gröbner bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealShape {
    /// One variable; the ideal is generated by the monic gcd (zero if none).
    Univariate(Poly),
    /// Minimal monomial generators.
    Monomial(Vec<Exponent>),
}

/// `k[x_1..x_m]/(f_1..f_r)` with monomial or univariate relation ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommRingPres {
    field: Field,
    vars: Vec<String>,
    relations: Vec<Poly>,
    shape: IdealShape,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl CommRingPres {
    /// Applies the guard: one variable, or only monomial relations.
    pub fn new(field: Field, vars: Vec<String>, relations: Vec<Poly>) -> Result<Self> {
        let m = vars.len();
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || vars[..i].contains(v) {
                return Err(QkError::Parse(format!("vars: `{v}` is empty or repeated")));
            }
        }
        if relations.iter().any(|r| r.nvars() != m || r.field() != field) {
            return Err(QkError::Parse("relations: variable count or field mismatch".into()));
        }
        let nonzero: Vec<&Poly> = relations.iter().filter(|r| !r.is_zero()).collect();
        let shape = if m == 1 {
            let g = nonzero
                .iter()
                .fold(Poly::zero(field, 1), |acc, r| acc.gcd(r));
            IdealShape::Univariate(g)
        } else if nonzero.iter().all(|r| r.is_monomial()) {
            let mut gens: Vec<Exponent> = nonzero
                .iter()
                .map(|r| r.terms().next().expect("monomial").0.clone())
                .collect();
            gens.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
            let mut minimal: Vec<Exponent> = Vec::new();
            for e in gens {
                if !minimal.iter().any(|g| divides(g, &e)) {
                    minimal.push(e);
                }
            }
            IdealShape::Monomial(minimal)
        } else {
            return Err(QkError::UnsupportedPresentation(
                "relations must be univariate or monomials (no Gröbner engine)".into(),
            ));
        };
        Ok(CommRingPres {
            field,
            vars,
            relations,
            shape,
        })
    }

    pub fn parse(field: Field, vars: &[&str], relations: &[&str]) -> Result<Self> {
        CommRingSpec {
            field,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            relations: relations.iter().map(|s| s.to_string()).collect(),
        }
        .build()
    }

    pub fn spec(&self) -> CommRingSpec {
        CommRingSpec {
            field: self.field,
            vars: self.vars.clone(),
            relations: self.relations.iter().map(|r| r.display_with(&self.vars)).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn shape(&self) -> &IdealShape {
        &self.shape
    }

    pub fn show(&self, p: &Poly) -> String {
        p.display_with(&self.vars)
    }

    /// Normal form modulo the relation ideal.
    pub fn reduce(&self, p: &Poly) -> Poly {
        match &self.shape {
            IdealShape::Univariate(g) if g.is_zero() => p.clone(),
            IdealShape::Univariate(g) => p.div_rem(g).1,
            IdealShape::Monomial(gens) => {
                let mut out = Poly::zero(self.field, self.vars.len());
                for (e, c) in p.terms() {
                    if !gens.iter().any(|g| divides(g, e)) {
                        out = out.add(&Poly::monomial(self.field, c.clone(), e.clone()));
                    }
                }
                out
            }
        }
    }

    /// Standard monomials, when the quotient is finite-dimensional.
    pub fn standard_monomials(&self) -> Option<Vec<Exponent>> {
        let m = self.vars.len();
        match &self.shape {
            IdealShape::Univariate(g) => {
                let d = g.degree()?;
                Some((0..d).map(|k| vec![k]).collect())
            }
            IdealShape::Monomial(gens) => {
                let mut bounds = Vec::with_capacity(m);
                for i in 0..m {
                    let pure = gens
                        .iter()
                        .filter(|g| g.iter().enumerate().all(|(j, &x)| j == i || x == 0))
                        .map(|g| g[i])
                        .min()?;
                    bounds.push(pure);
                }
                let mut out = Vec::new();
                let mut e = vec![0u32; m];
                loop {
                    if !gens.iter().any(|g| divides(g, &e)) {
                        out.push(e.clone());
                    }
                    let mut k = 0;
                    loop {
                        if k == m {
                            return Some(out);
                        }
                        e[k] += 1;
                        if e[k] < bounds[k] {
                            break;
                        }
                        e[k] = 0;
                        k += 1;
                    }
                }
            }
        }
    }

    pub fn is_finite_dimensional(&self) -> bool {
        self.standard_monomials().is_some()
    }

    fn basis_index(&self) -> Result<(Vec<Exponent>, HashMap<Exponent, usize>)> {
        let basis = self.standard_monomials().ok_or_else(|| {
            QkError::UnsupportedPresentation("the quotient is not finite-dimensional".into())
        })?;
        let index = basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok((basis, index))
    }

    /// Coordinates of a reduced polynomial in the standard-monomial basis.
    fn coords(&self, p: &Poly, index: &HashMap<Exponent, usize>) -> Vector {
        let mut v = vec![self.field.zero(); index.len()];
        for (e, c) in self.reduce(p).terms() {
            v[index[e]] = c.clone();
        }
        v
    }

    /// The finite-dimensional algebra on the standard monomials.
    pub fn to_algebra(&self) -> Result<FinDimAlgebra> {
        let (basis, index) = self.basis_index()?;
        let f = self.field;
        let mono = |e: &Exponent| Poly::monomial(f, f.one(), e.clone());
        let unit = self.coords(&Poly::one(f, self.vars.len()), &index);
        FinDimAlgebra::from_fn(f, basis.len(), unit, |a, b| {
            self.coords(&mono(&basis[a]).mul(&mono(&basis[b])), &index)
        })
    }
}

/// `Ω_{A/k} = coker(Jacobian)`: generators `dx_i`, relations `Σ_i ∂f_j/∂x_i dx_i`.
#[derive(Clone, Debug)]
pub struct KaehlerDifferentials {
    pub generators: Vec<String>,
    /// `relations[j][i]` is `∂f_j/∂x_i` reduced modulo the relation ideal.
    pub relations: Vec<Vec<Poly>>,
    /// `dim_k Ω` when `A` is finite-dimensional.
    pub k_dim: Option<usize>,
    /// `Some(m)` when every relation vanishes, so `Ω ≅ A^m`.
    pub free_rank: Option<usize>,
    finite: Option<FiniteKaehler>,
}

/// `Ω` as a quotient of `A^m` (coordinate `i·d + b` for `x^b dx_i`).
#[derive(Clone, Debug)]
struct FiniteKaehler {
    algebra: FinDimAlgebra,
    basis: Vec<Exponent>,
    relations: Subspace,
}

impl KaehlerDifferentials {
    /// The class of an element of `A^m` in `Ω`, in quotient coordinates.
    pub fn class_of(&self, v: &[BigRational]) -> Option<Vector> {
        self.finite.as_ref().map(|k| k.relations.quotient_coords(v))
    }

    /// Matrix of `d: A → A^m` (before passing to `Ω`).
    pub fn universal_derivation(&self) -> Option<FieldMatrix> {
        let k = self.finite.as_ref()?;
        let f = k.algebra.field();
        let d = k.basis.len();
        let m = self.generators.len();
        let index: HashMap<&Exponent, usize> = k.basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let cols: Vec<Vector> = k
            .basis
            .iter()
            .map(|e| {
                let mut v = vec![f.zero(); d * m];
                for i in 0..m {
                    if e[i] == 0 {
                        continue;
                    }
                    let mut lower = e.clone();
                    lower[i] -= 1;
                    // lower divides a standard monomial, so it is standard
                    v[i * d + index[&lower]] = f.from_i64(e[i] as i64);
                }
                v
            })
            .collect();
        Some(FieldMatrix::from_columns(f, d * m, &cols))
    }

    /// `A^m` as an `A`-module via the diagonal action.
    pub fn free_module_action(&self, x: &[BigRational]) -> Option<FieldMatrix> {
        let k = self.finite.as_ref()?;
        let m = self.generators.len();
        let l = k.algebra.left_mult(x);
        let blocks: Vec<FieldMatrix> = vec![l; m];
        Some(block_diagonal(k.algebra.field(), &blocks))
    }

    /// `Ω` as an `A`-module.
    pub fn module(&self) -> Option<RModule> {
        let k = self.finite.as_ref()?;
        let comp = k.relations.complement();
        let f = k.algebra.field();
        let action = (0..k.algebra.dim())
            .map(|t| {
                let act = self.free_module_action(&k.algebra.basis(t)).expect("finite");
                let cols: Vec<Vector> = comp
                    .iter()
                    .map(|&c| k.relations.quotient_coords(&act.column(c)))
                    .collect();
                FieldMatrix::from_columns(f, comp.len(), &cols)
            })
            .collect();
        Some(RModule::new(k.algebra.clone(), comp.len(), action).expect("Ω is an A-module"))
    }

    /// For one variable, `Ω ≅ k[x]/(h)` with `h` monic; returns `h`.
    pub fn cyclic_annihilator(&self, r: &CommRingPres) -> Option<Poly> {
        match r.shape() {
            IdealShape::Univariate(g) => Some(
                self.relations
                    .iter()
                    .fold(g.clone(), |acc, row| acc.gcd(&row[0])),
            ),
            IdealShape::Monomial(_) => None,
        }
    }
}

fn block_diagonal(field: Field, blocks: &[FieldMatrix]) -> FieldMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = FieldMatrix::zeros(field, n, n);
    let mut off = 0;
    for b in blocks {
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                out.set(off + r, off + c, b.get(r, c).clone());
            }
        }
        off += b.rows();
    }
    out
}

pub fn kaehler_differentials(r: &CommRingPres) -> Result<KaehlerDifferentials> {
    let m = r.vars().len();
    let relations: Vec<Vec<Poly>> = r
        .relations()
        .iter()
        .map(|f| (0..m).map(|i| r.reduce(&f.derivative(i))).collect())
        .collect();
    let free = relations.iter().all(|row| row.iter().all(Poly::is_zero));
    let finite = if r.is_finite_dimensional() {
        let (basis, index) = r.basis_index()?;
        let algebra = r.to_algebra()?;
        let d = basis.len();
        let f = r.field();
        let mut sub = Subspace::new(f, d * m);
        for row in &relations {
            for e in &basis {
                let mono = Poly::monomial(f, f.one(), e.clone());
                let mut v = vec![f.zero(); d * m];
                for (i, p) in row.iter().enumerate() {
                    for (b, c) in r.coords(&mono.mul(p), &index).into_iter().enumerate() {
                        v[i * d + b] = c;
                    }
                }
                sub.insert(&v);
            }
        }
        Some(FiniteKaehler {
            algebra,
            basis,
            relations: sub,
        })
    } else {
        None
    };
    Ok(KaehlerDifferentials {
        generators: r.vars().iter().map(|v| format!("d{v}")).collect(),
        relations,
        k_dim: finite.as_ref().map(|k| k.basis.len() * m - k.relations.dim()),
        free_rank: free.then_some(m),
        finite,
    })
}

/// Two-term complex `A·e --(·f′)--> A·dx` for `A = k[x]/(f)`.
#[derive(Clone, Debug)]
pub struct HypersurfaceCotangent {
    pub algebra: FinDimAlgebra,
    /// Multiplication by `f′` on `A`.
    pub differential: FieldMatrix,
    pub d0_dim: usize,
    pub d1_dim: usize,
    /// `D_0 ≅ k[x]/(gcd(f, f′))`.
    pub d0_annihilator: Poly,
    /// Basis of `D_1 = ann_A(f′)`, as columns.
    pub d1_basis: FieldMatrix,
}

pub fn hypersurface_cotangent(r: &CommRingPres) -> Result<HypersurfaceCotangent> {
    let nonzero: Vec<&Poly> = r.relations().iter().filter(|p| !p.is_zero()).collect();
    let [f] = nonzero.as_slice() else {
        return Err(QkError::UnsupportedPresentation(
            "hypersurface needs exactly one nonzero relation".into(),
        ));
    };
    if r.vars().len() != 1 || f.degree().unwrap_or(0) == 0 {
        return Err(QkError::UnsupportedPresentation(
            "hypersurface needs one variable and deg f ≥ 1".into(),
        ));
    }
    let algebra = r.to_algebra()?;
    let (_, index) = r.basis_index()?;
    let fp = f.derivative(0);
    let differential = algebra.left_mult(&r.coords(&fp, &index));
    let rank = differential.rank();
    let d = algebra.dim();
    Ok(HypersurfaceCotangent {
        d0_annihilator: f.gcd(&fp),
        d1_basis: differential.kernel_basis(),
        differential,
        d0_dim: d - rank,
        d1_dim: d - rank,
        algebra,
    })
}

/// `R ⊕ M` with `(r, m)(r′, m′) = (rr′, rm′ + r′m)`, and its nilradical.
#[derive(Clone, Debug)]
pub struct SquareZeroExtension {
    pub algebra: FinDimAlgebra,
    pub base_dim: usize,
    pub module_dim: usize,
    pub nilradical_dim: usize,
    /// Every basis vector of `M` is nilpotent (exponent bound `2·dim`).
    pub module_nilpotent: bool,
    /// `Nil(R ⊕ M) = M`, checked when `R` is reduced.
    pub nilradical_is_module: Option<bool>,
    pub reduced: bool,
}

pub fn square_zero_extension(m: &RModule) -> Result<SquareZeroExtension> {
    let r = m.algebra();
    let f = r.field();
    let (d, k) = (r.dim(), m.dim());
    let n = d + k;
    let mut unit = r.unit().clone();
    unit.resize(n, f.zero());
    let algebra = FinDimAlgebra::from_fn(f, n, unit, |a, b| {
        let mut v = vec![f.zero(); n];
        match (a < d, b < d) {
            (true, true) => v[..d].clone_from_slice(r.structure(a, b)),
            (true, false) => v[d..].clone_from_slice(&m.action(a).column(b - d)),
            (false, true) => v[d..].clone_from_slice(&m.action(b).column(a - d)),
            (false, false) => {}
        }
        v
    })?;
    let module_nilpotent = (d..n).all(|i| algebra.is_nilpotent(&unit_vector(f, n, i), 2 * n));
    let nil = algebra.nilradical()?;
    let module_span = Subspace::spanned_by(f, n, &(d..n).map(|i| unit_vector(f, n, i)).collect::<Vec<_>>());
    let base_reduced = r.is_reduced()?;
    let equal = nil.dim() == module_span.dim() && nil.basis().iter().all(|v| module_span.contains(v));
    Ok(SquareZeroExtension {
        base_dim: d,
        module_dim: k,
        nilradical_dim: nil.dim(),
        module_nilpotent,
        nilradical_is_module: base_reduced.then_some(equal),
        reduced: nil.dim() == 0,
        algebra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn guard() {
        assert!(CommRingPres::parse(Q, &["x", "y"], &["x*y", "x^2"]).is_ok());
        let err = CommRingPres::parse(Q, &["x", "y"], &["x + y"]).unwrap_err();
        assert!(matches!(err, QkError::UnsupportedPresentation(_)));
        assert!(CommRingPres::parse(Q, &["x"], &["x^2 - 1", "x^3 - x"]).is_ok());
    }

    #[test]
    fn algebras_from_presentations() {
        let a = CommRingPres::parse(Q, &["x"], &["x^3"]).unwrap().to_algebra().unwrap();
        assert_eq!(a, FinDimAlgebra::truncated_polynomial(Q, 3));
        let b = CommRingPres::parse(Q, &["x", "y"], &["x^2", "y^2", "x*y"]).unwrap();
        assert_eq!(b.to_algebra().unwrap().dim(), 3);
        let c = CommRingPres::parse(Q, &["x", "y"], &["x*y"]).unwrap();
        assert!(c.to_algebra().is_err());
        let zero = CommRingPres::parse(Q, &["x"], &["x^2", "x + 1"]).unwrap();
        assert!(zero.to_algebra().unwrap().is_zero_ring());
    }

    #[test]
    fn kaehler_examples() {
        let poly = CommRingPres::parse(Q, &["x", "y"], &[]).unwrap();
        let k = kaehler_differentials(&poly).unwrap();
        assert_eq!(k.free_rank, Some(2));
        assert_eq!(k.k_dim, None);
        let q3 = CommRingPres::parse(Q, &["x"], &["x^3"]).unwrap();
        let k = kaehler_differentials(&q3).unwrap();
        assert_eq!(k.k_dim, Some(2));
        assert_eq!(q3.show(&k.relations[0][0]), "3*x^2");
        let f3 = CommRingPres::parse(Field::prime(3).unwrap(), &["x"], &["x^3"]).unwrap();
        let k = kaehler_differentials(&f3).unwrap();
        assert_eq!((k.k_dim, k.free_rank), (Some(3), Some(1)));
    }

    #[test]
    fn hypersurface_examples() {
        let h = hypersurface_cotangent(&CommRingPres::parse(Q, &["x"], &["x"]).unwrap()).unwrap();
        assert_eq!((h.d0_dim, h.d1_dim), (0, 0));
        let r = CommRingPres::parse(Q, &["x"], &["x^3"]).unwrap();
        let h = hypersurface_cotangent(&r).unwrap();
        assert_eq!((h.d0_dim, h.d1_dim), (2, 2));
        let k = kaehler_differentials(&r).unwrap();
        assert_eq!(k.cyclic_annihilator(&r), Some(h.d0_annihilator.clone()));
        let f2 = CommRingPres::parse(Field::prime(2).unwrap(), &["x"], &["x^2"]).unwrap();
        let h = hypersurface_cotangent(&f2).unwrap();
        assert_eq!((h.d0_dim, h.d1_dim), (2, 2));
    }

    #[test]
    fn kaehler_module_dimension() {
        let r = CommRingPres::parse(Q, &["x", "y"], &["x^2", "y^3", "x*y"]).unwrap();
        let k = kaehler_differentials(&r).unwrap();
        assert_eq!(k.module().unwrap().dim(), k.k_dim.unwrap());
    }

    #[test]
    fn square_zero_examples() {
        let f2 = Field::prime(2).unwrap();
        let base = FinDimAlgebra::ground(f2);
        let m = RModule::regular(&base).unwrap();
        let e = square_zero_extension(&m).unwrap();
        assert_eq!(e.algebra, FinDimAlgebra::dual_numbers(f2));
        assert!(!e.reduced);
        assert_eq!(e.nilradical_is_module, Some(true));

        let qq = FinDimAlgebra::diagonal(Q, 2);
        let first = RModule::from_character(&qq, 1, &[Q.one(), Q.zero()]).unwrap();
        let e = square_zero_extension(&first).unwrap();
        assert_eq!((e.nilradical_dim, e.nilradical_is_module), (1, Some(true)));

        let e = square_zero_extension(&RModule::zero(&qq)).unwrap();
        assert!(e.reduced);
    }
}

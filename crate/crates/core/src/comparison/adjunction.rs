use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use super::report::{numbers, ComparisonReport};
use crate::algebras::{bimodule_homs, central_quotient, module_homs, Bimodule, RModule};
use crate::error::{QkError, Result};
use crate::groups::{coinvariants, EquivariantMap, FinGroup, ZGRep};
use crate::linalg::{smith_normal_form, FGAbelianGroup, Field, FieldMatrix, IntMatrix};

/// Hom-set enumerations beyond this many candidates are refused.
pub const MAX_ENUMERATION: u64 = 1 << 20;

/// A finite abelian group `⊕ Z/d_i` with elements as residue vectors.
struct FiniteAbelian {
    orders: Vec<u64>,
}

impl FiniteAbelian {
    fn new(a: &FGAbelianGroup) -> Result<Self> {
        if a.free_rank() > 0 {
            return Err(QkError::InfiniteHomSet(format!("coefficients {a} are infinite")));
        }
        let orders = a
            .torsion()
            .iter()
            .map(|d| d.to_u64().ok_or_else(|| QkError::EnumerationTooLarge(format!("{a}"))))
            .collect::<Result<_>>()?;
        Ok(FiniteAbelian { orders })
    }

    fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    fn zero(&self) -> Vec<u64> {
        vec![0; self.orders.len()]
    }

    fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![self.zero()];
        for (i, &d) in self.orders.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..d).map(move |k| {
                        let mut e2 = e.clone();
                        e2[i] = k;
                        e2
                    })
                })
                .collect();
        }
        out
    }

    /// `Σ c_k x_k` with integer coefficients.
    fn combine<'a>(&self, terms: impl IntoIterator<Item = (&'a BigInt, &'a Vec<u64>)>) -> Vec<u64> {
        let mut acc = self.zero();
        for (c, x) in terms {
            for (i, &d) in self.orders.iter().enumerate() {
                let dd = BigInt::from(d);
                let t = (c.mod_floor(&dd) * BigInt::from(x[i])).mod_floor(&dd);
                acc[i] = (acc[i] + t.to_u64().expect("residue")) % d;
            }
        }
        acc
    }

    fn killed_by(&self, d: &BigInt, x: &[u64]) -> bool {
        self.combine([(d, &x.to_vec())]) == self.zero()
    }
}

fn check_enumeration(base: u64, exp: usize) -> Result<()> {
    let n = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    if n > MAX_ENUMERATION as u128 {
        return Err(QkError::EnumerationTooLarge(format!(
            "{base}^{exp} candidate maps exceed {MAX_ENUMERATION}"
        )));
    }
    Ok(())
}

/// All tuples in `sets[0] × sets[1] × …`.
fn product(sets: &[Vec<Vec<u64>>]) -> Vec<Vec<Vec<u64>>> {
    let mut out: Vec<Vec<Vec<u64>>> = vec![vec![]];
    for s in sets {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                s.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Coinvariants data: `u R v = d` for the relation matrix `R` of `M_G`.
struct CoinvariantCoords {
    u: IntMatrix,
    u_inv: IntMatrix,
    /// Order of `y_i` in `M_G` (`0` for free generators).
    orders: Vec<BigInt>,
}

fn coinvariant_coords(m: &ZGRep) -> CoinvariantCoords {
    let rel = m.coinvariant_relations();
    let s = smith_normal_form(&rel);
    let mut orders = s.diagonal();
    orders.resize(m.rank(), BigInt::zero());
    CoinvariantCoords {
        u: s.u,
        u_inv: s.u_inv,
        orders,
    }
}

/// `Hom_G(M, Triv A)` by brute force over `A^rank`.
fn equivariant_homs(m: &ZGRep, a: &FiniteAbelian) -> Result<Vec<Vec<Vec<u64>>>> {
    check_enumeration(a.size(), m.rank())?;
    let all = product(&vec![a.elements(); m.rank()]);
    let r = m.rank();
    Ok(all
        .into_iter()
        .filter(|phi| {
            m.actions().iter().all(|act| {
                (0..r).all(|j| {
                    let coeffs: Vec<BigInt> =
                        (0..r).map(|k| act.get(k, j) - BigInt::from(u8::from(k == j))).collect();
                    a.combine(coeffs.iter().zip(phi.iter())) == a.zero()
                })
            })
        })
        .collect())
}

/// `Hom(M_G, A)` as images of the Smith generators `y_i`.
fn coinvariant_homs(c: &CoinvariantCoords, a: &FiniteAbelian) -> Result<Vec<Vec<Vec<u64>>>> {
    check_enumeration(a.size(), c.orders.len())?;
    let sets: Vec<Vec<Vec<u64>>> = c
        .orders
        .iter()
        .map(|d| a.elements().into_iter().filter(|x| a.killed_by(d, x)).collect())
        .collect();
    Ok(product(&sets))
}

/// `ψ ↦ ψ ∘ quotient`: `φ(e_j) = Σ_i u[i][j] ψ(y_i)`.
fn transpose_to_right(c: &CoinvariantCoords, a: &FiniteAbelian, psi: &[Vec<u64>]) -> Vec<Vec<u64>> {
    (0..c.u.cols())
        .map(|j| {
            let col = c.u.column(j);
            a.combine(col.iter().zip(psi))
        })
        .collect()
}

/// `φ ↦ ψ`, `ψ(y_i) = φ(u⁻¹ e_i)`.
fn transpose_to_left(c: &CoinvariantCoords, a: &FiniteAbelian, phi: &[Vec<u64>]) -> Vec<Vec<u64>> {
    (0..c.u_inv.cols())
        .map(|i| {
            let col = c.u_inv.column(i);
            a.combine(col.iter().zip(phi))
        })
        .collect()
}

/// `coinvariants ⊣ trivial`: `Hom(M_G, A) ≅ Hom_G(M, Triv A)` for finite `A`,
/// with naturality along each `h: M′ → M`.
pub fn verify_module_adjunction_group(
    m: &ZGRep,
    n: &FGAbelianGroup,
    morphisms: &[EquivariantMap],
) -> Result<ComparisonReport> {
    let a = FiniteAbelian::new(n)?;
    let c = coinvariant_coords(m);
    let left_homs = coinvariant_homs(&c, &a)?;
    let right_homs = equivariant_homs(m, &a)?;
    let mut transposes_land = true;
    let mut round_trip = true;
    for psi in &left_homs {
        let phi = transpose_to_right(&c, &a, psi);
        transposes_land &= right_homs.contains(&phi);
        round_trip &= transpose_to_left(&c, &a, &phi) == *psi;
    }
    for phi in &right_homs {
        let psi = transpose_to_left(&c, &a, phi);
        transposes_land &= left_homs.contains(&psi);
        round_trip &= transpose_to_right(&c, &a, &psi) == *phi;
    }
    let mut natural = true;
    for h in morphisms {
        if h.target.actions() != m.actions() {
            return Err(QkError::Dimension("sampled morphism does not end at m".into()));
        }
        let c2 = coinvariant_coords(&h.source);
        // h_G on Smith generators: y′_i ↦ u · H · u′⁻¹ e_i
        let induced = c.u.mul(&h.matrix)?.mul(&c2.u_inv)?;
        for psi in &left_homs {
            let phi = transpose_to_right(&c, &a, psi);
            let route_a: Vec<Vec<u64>> = (0..h.source.rank())
                .map(|j| a.combine(h.matrix.column(j).iter().zip(&phi)))
                .collect();
            let psi_h: Vec<Vec<u64>> = (0..induced.cols())
                .map(|i| a.combine(induced.column(i).iter().zip(psi)))
                .collect();
            natural &= transpose_to_right(&c2, &a, &psi_h) == route_a;
        }
    }
    Ok(ComparisonReport::new(
        "module-adjunction",
        json!({
            "instance": "coinvariants-trivial",
            "group_order": m.group().order(),
            "m_rank": m.rank(),
            "n": n,
            "sampled_morphisms": morphisms.len(),
        }),
        numbers(vec![left_homs.len()]),
        numbers(vec![right_homs.len()]),
        0,
    )
    .with_check("transposes_land", transposes_land)
    .with_check("round_trip", round_trip)
    .with_check("natural", natural)
    .with_details(json!({ "coinvariants": coinvariants(m) })))
}

fn hom_set_size(field: Field, dim: usize) -> Result<u64> {
    match field {
        _ if dim == 0 => Ok(1),
        Field::Rationals => Err(QkError::InfiniteHomSet(format!("a {dim}-dimensional hom space over Q"))),
        Field::Prime(p) => (p as u64)
            .checked_pow(dim as u32)
            .ok_or_else(|| QkError::EnumerationTooLarge(format!("{p}^{dim} maps"))),
    }
}

/// Right inverse of a surjective matrix.
fn section(q: &FieldMatrix) -> FieldMatrix {
    let f = q.field();
    let cols: Vec<Vec<_>> = (0..q.rows())
        .map(|i| {
            let mut e = vec![f.zero(); q.rows()];
            e[i] = f.one();
            q.solve(&e).expect("quotient map is onto")
        })
        .collect();
    FieldMatrix::from_columns(f, q.cols(), &cols)
}

/// `CQ ⊣ same-action`: `Hom_{Com(A)}(CQ(M), N) ≅ Hom_{A-A}(M, N)` with
/// naturality along each sampled bimodule map `h: M′ → M`.
pub fn verify_module_adjunction_bimodule(
    m: &Bimodule,
    n: &RModule,
    morphisms: &[(Bimodule, FieldMatrix)],
) -> Result<ComparisonReport> {
    let a = m.algebra();
    let (com, q_alg) = a.commutator_quotient();
    if *n.algebra() != com {
        return Err(QkError::InvalidModule("n must be a module over Com(A)".into()));
    }
    let cq = central_quotient(m);
    let same = n.same_action(a, &q_alg)?;
    let left_basis = module_homs(&cq.module, n)?;
    let right_basis = bimodule_homs(m, &same)?;
    let f = a.field();
    let left_count = hom_set_size(f, left_basis.len())?;
    let right_count = hom_set_size(f, right_basis.len())?;
    let q = &cq.quotient_map;
    let s = section(q);
    let is_bimap = |x: &FieldMatrix| crate::algebras::is_bimodule_map(m, &same, x);
    let is_modmap = |x: &FieldMatrix| {
        (0..com.dim()).all(|i| x.mul(cq.module.action(i)).ok() == n.action(i).mul(x).ok())
    };
    let mut transposes_land = true;
    let mut round_trip = true;
    for psi in &left_basis {
        let phi = psi.mul(q)?;
        transposes_land &= is_bimap(&phi);
        round_trip &= phi.mul(&s)? == *psi;
    }
    for phi in &right_basis {
        let psi = phi.mul(&s)?;
        transposes_land &= is_modmap(&psi);
        round_trip &= psi.mul(q)? == *phi;
    }
    let mut natural = true;
    for (source, h) in morphisms {
        if !crate::algebras::is_bimodule_map(source, m, h) {
            return Err(QkError::NotEquivariant("sampled morphism is not a bimodule map into m".into()));
        }
        let cq2 = central_quotient(source);
        let induced = q.mul(h)?.mul(&section(&cq2.quotient_map))?;
        for psi in &left_basis {
            let route_a = psi.mul(q)?.mul(h)?;
            let route_b = psi.mul(&induced)?.mul(&cq2.quotient_map)?;
            natural &= route_a == route_b;
        }
    }
    Ok(ComparisonReport::new(
        "module-adjunction",
        json!({
            "instance": "central-quotient-same-action",
            "field": f,
            "algebra_dim": a.dim(),
            "m_dim": m.dim(),
            "n_dim": n.dim(),
            "sampled_morphisms": morphisms.len(),
        }),
        numbers(vec![left_count as usize]),
        numbers(vec![right_count as usize]),
        0,
    )
    .with_check("transposes_land", transposes_land)
    .with_check("round_trip", round_trip)
    .with_check("natural", natural)
    .with_details(json!({ "central_quotient_dim": cq.dim })))
}

/// Endomorphisms and maps from small lattices used as naturality samples.
pub fn sample_equivariant_maps(m: &ZGRep) -> Result<Vec<EquivariantMap>> {
    let g: Arc<FinGroup> = m.group().clone();
    let r = m.rank();
    let mut out = vec![
        EquivariantMap::new(m.clone(), m.clone(), IntMatrix::identity(r))?,
        EquivariantMap::new(m.clone(), m.clone(), IntMatrix::identity(r).scale(&BigInt::from(2)))?,
    ];
    for src in [ZGRep::trivial(g.clone(), 1), ZGRep::regular(g), m.clone()] {
        let mut x = IntMatrix::zeros(r, src.rank());
        for i in 0..r.min(src.rank()) {
            x.set(i, i, BigInt::from(1));
        }
        if r > 0 && src.rank() > 0 {
            x.set(0, src.rank() - 1, BigInt::from(-1));
        }
        out.push(EquivariantMap::averaged(src, m.clone(), &x)?);
    }
    Ok(out)
}

/// Bimodule maps into `m` from `m` and from `I_A`, at most three of each.
pub fn sample_bimodule_maps(m: &Bimodule) -> Result<Vec<(Bimodule, FieldMatrix)>> {
    let mut out = Vec::new();
    for src in [m.clone(), crate::algebras::mult_kernel_bimodule(m.algebra())] {
        for h in bimodule_homs(&src, m)?.into_iter().take(3) {
            out.push((src.clone(), h));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::FinDimAlgebra;
    use crate::groups::augmentation_ideal;

    fn c2() -> Arc<FinGroup> {
        Arc::new(FinGroup::cyclic(2).unwrap())
    }

    #[test]
    fn trivial_lattice_into_z4() {
        let m = ZGRep::trivial(c2(), 1);
        let r = verify_module_adjunction_group(&m, &FGAbelianGroup::cyclic(4), &sample_equivariant_maps(&m).unwrap())
            .unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.left, numbers(vec![4]));
    }

    #[test]
    fn augmentation_ideal_into_z4() {
        let m = augmentation_ideal(c2());
        let r = verify_module_adjunction_group(&m, &FGAbelianGroup::cyclic(4), &sample_equivariant_maps(&m).unwrap())
            .unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.right, numbers(vec![2]));
    }

    #[test]
    fn infinite_coefficients_rejected() {
        let m = ZGRep::trivial(c2(), 1);
        let err = verify_module_adjunction_group(&m, &FGAbelianGroup::free(1), &[]).unwrap_err();
        assert!(matches!(err, QkError::InfiniteHomSet(_)));
    }

    #[test]
    fn matrix_algebra_instance() {
        let a = FinDimAlgebra::matrix_algebra(Field::Rationals, 2);
        let m = Bimodule::regular(&a);
        let (com, _) = a.commutator_quotient();
        let n = RModule::zero(&com);
        let r = verify_module_adjunction_bimodule(&m, &n, &sample_bimodule_maps(&m).unwrap()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.left, numbers(vec![1]));
    }

    #[test]
    fn dual_numbers_over_f2() {
        let a = FinDimAlgebra::dual_numbers(Field::Prime(2));
        let m = Bimodule::regular(&a);
        let (com, _) = a.commutator_quotient();
        let n = RModule::regular(&com).unwrap();
        let r = verify_module_adjunction_bimodule(&m, &n, &sample_bimodule_maps(&m).unwrap()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.left, numbers(vec![4]));
    }

    #[test]
    fn infinite_bimodule_homs_rejected() {
        let a = FinDimAlgebra::dual_numbers(Field::Rationals);
        let m = Bimodule::regular(&a);
        let n = RModule::regular(&a).unwrap();
        let err = verify_module_adjunction_bimodule(&m, &n, &[]).unwrap_err();
        assert!(matches!(err, QkError::InfiniteHomSet(_)));
    }
}

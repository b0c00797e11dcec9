use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::json;

use super::report::{numbers, ComparisonReport};
use crate::algebras::{is_bimodule_map, Bimodule};
use crate::error::{QkError, Result};
use crate::exec::Exec;
use crate::groups::{EquivariantMap, ZGRep};
use crate::linalg::{invariant_factors, smith_normal_form, FGAbelianGroup, FieldMatrix, IntMatrix, SmithForm};

/// `f = mono ∘ epi` through the image lattice.
#[derive(Clone, Debug)]
pub struct LatticeFactorization {
    pub image: ZGRep,
    pub epi: EquivariantMap,
    pub mono: EquivariantMap,
    /// `N / im f`.
    pub mono_cokernel: FGAbelianGroup,
}

/// Image factorization of a map of `ZG`-lattices, from the Smith form
/// `u f v = d`: `mono = u⁻¹[:, :r]·diag(d)`, `epi = v⁻¹[:r, :]`.
pub fn factor_epi_mono(f: &EquivariantMap) -> Result<LatticeFactorization> {
    let s = smith_normal_form(&f.matrix);
    let r = s.rank;
    let rows: Vec<usize> = (0..r).collect();
    let mut epi = s.v_inv.select_rows(&rows);
    let mut mono = s.u_inv.select_columns(&rows);
    // right inverse of epi
    let mut section = s.v.select_columns(&rows);
    for (i, d) in s.diagonal().iter().enumerate() {
        // make the first nonzero entry of each mono column positive
        let negate = (0..mono.rows())
            .map(|k| mono.get(k, i))
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative());
        let sign = BigInt::from(if negate { -1 } else { 1 });
        for k in 0..mono.rows() {
            let x = mono.get(k, i) * d * &sign;
            mono.set(k, i, x);
        }
        for k in 0..epi.cols() {
            let x = epi.get(i, k) * &sign;
            epi.set(i, k, x);
        }
        for k in 0..section.rows() {
            let x = section.get(k, i) * &sign;
            section.set(k, i, x);
        }
    }
    let g = f.source.group().clone();
    let actions = g
        .elements()
        .map(|h| epi.mul(f.source.action(h))?.mul(&section))
        .collect::<Result<Vec<_>>>()?;
    let image = ZGRep::new(g, r, actions)?;
    let mono_cokernel = FGAbelianGroup::cokernel(&f.matrix, Exec::Sequential);
    Ok(LatticeFactorization {
        epi: EquivariantMap::new(f.source.clone(), image.clone(), epi)?,
        mono: EquivariantMap::new(image.clone(), f.target.clone(), mono)?,
        image,
        mono_cokernel,
    })
}

/// Integer solution of `m x = b` from a Smith form of `m`.
fn solve_integer(s: &SmithForm, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); s.v.rows()];
    for (i, c) in ub.iter().enumerate() {
        if i < s.rank {
            let d = s.d.get(i, i);
            if !c.is_multiple_of(d) {
                return None;
            }
            y[i] = c / d;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

fn is_onto_lattice(m: &IntMatrix) -> bool {
    FGAbelianGroup::cokernel(m, Exec::Sequential).is_zero()
}

/// Checks `mono ∘ epi = f`, epi onto, mono injective, and that the image
/// lattice coincides with the set-theoretic image of `f`.
pub fn verify_factorization(f: &EquivariantMap) -> Result<ComparisonReport> {
    let fac = factor_epi_mono(f)?;
    let composes = fac.mono.matrix.mul(&fac.epi.matrix)? == f.matrix;
    let epi_onto = is_onto_lattice(&fac.epi.matrix);
    let r = fac.image.rank();
    let mono_injective = invariant_factors(&fac.mono.matrix, Exec::Sequential).rank == r;
    let s = smith_normal_form(&f.matrix);
    let image_agrees = (0..r).all(|c| solve_integer(&s, &fac.mono.matrix.column(c)).is_some());
    let f_onto = is_onto_lattice(&f.matrix);
    let mono_iso = fac.mono.matrix.rows() == r && fac.mono.matrix.is_unimodular();
    Ok(ComparisonReport::new(
        "factor-epi-mono",
        json!({
            "group_order": f.source.group().order(),
            "source_rank": f.source.rank(),
            "target_rank": f.target.rank(),
        }),
        numbers(vec![s.rank]),
        numbers(vec![r]),
        0,
    )
    .with_check("composes", composes)
    .with_check("epi_surjective", epi_onto)
    .with_check("mono_injective", mono_injective)
    .with_check("underlying_image_agrees", image_agrees)
    .with_check("surjectivity_reflected", f_onto == mono_iso)
    .with_details(json!({ "mono_cokernel": fac.mono_cokernel })))
}

/// `f = mono ∘ epi` through the image sub-bimodule.
#[derive(Clone, Debug)]
pub struct BimoduleFactorization {
    pub image: Bimodule,
    pub epi: FieldMatrix,
    pub mono: FieldMatrix,
}

pub fn factor_epi_mono_bimodule(m: &Bimodule, n: &Bimodule, f: &FieldMatrix) -> Result<BimoduleFactorization> {
    if !is_bimodule_map(m, n, f) {
        return Err(QkError::NotEquivariant("not a bimodule map".into()));
    }
    let pivots = f.rref().pivots;
    let mono = f.select_columns(&pivots);
    let epi = mono.solve_matrix(f).expect("columns of f lie in their span");
    let image = n.restrict(&mono)?;
    Ok(BimoduleFactorization { image, epi, mono })
}

pub fn verify_bimodule_factorization(m: &Bimodule, n: &Bimodule, f: &FieldMatrix) -> Result<ComparisonReport> {
    let fac = factor_epi_mono_bimodule(m, n, f)?;
    let r = fac.image.dim();
    let composes = fac.mono.mul(&fac.epi)? == *f;
    Ok(ComparisonReport::new(
        "factor-epi-mono",
        json!({ "source_dim": m.dim(), "target_dim": n.dim() }),
        numbers(vec![f.rank()]),
        numbers(vec![r]),
        0,
    )
    .with_check("composes", composes)
    .with_check("epi_surjective", fac.epi.rank() == r)
    .with_check("mono_injective", fac.mono.rank() == r)
    .with_check("epi_is_bimodule_map", is_bimodule_map(m, &fac.image, &fac.epi))
    .with_check("mono_is_bimodule_map", is_bimodule_map(&fac.image, n, &fac.mono))
    .with_check("surjectivity_reflected", (f.rank() == n.dim()) == (r == n.dim())))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebras::FinDimAlgebra;
    use crate::groups::FinGroup;
    use crate::linalg::Field;

    #[test]
    fn augmentation_map() {
        let g = Arc::new(FinGroup::cyclic(2).unwrap());
        let reg = ZGRep::regular(g.clone());
        let triv = ZGRep::trivial(g, 1);
        let f = EquivariantMap::new(reg, triv, IntMatrix::from_rows(&[[1, 1]])).unwrap();
        let fac = factor_epi_mono(&f).unwrap();
        assert_eq!(fac.image.rank(), 1);
        assert_eq!(fac.mono.matrix, IntMatrix::identity(1));
        assert!(verify_factorization(&f).unwrap().passed());
    }

    #[test]
    fn multiplication_by_two() {
        let g = Arc::new(FinGroup::symmetric(3).unwrap());
        let triv = ZGRep::trivial(g, 1);
        let f = EquivariantMap::new(triv.clone(), triv, IntMatrix::from_rows(&[[2]])).unwrap();
        let fac = factor_epi_mono(&f).unwrap();
        assert_eq!(fac.mono_cokernel, FGAbelianGroup::cyclic(2));
        assert_eq!(fac.epi.matrix, IntMatrix::identity(1));
        assert!(verify_factorization(&f).unwrap().passed());
    }

    #[test]
    fn identity_factors_trivially() {
        let g = Arc::new(FinGroup::cyclic(3).unwrap());
        let reg = ZGRep::regular(g);
        let f = EquivariantMap::new(reg.clone(), reg, IntMatrix::identity(3)).unwrap();
        let r = verify_factorization(&f).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn bimodule_factorization() {
        let a = FinDimAlgebra::dual_numbers(Field::Rationals);
        let m = Bimodule::regular(&a);
        // multiplication by ε
        let f = a.left_mult(&a.basis(1));
        let r = verify_bimodule_factorization(&m, &m, &f).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.right, numbers(vec![1]));
        let bad = FieldMatrix::from_ints(Field::Rationals, &[[0, 1], [0, 0]]);
        // ε ↦ 1 is not a bimodule map
        let err = verify_bimodule_factorization(&m, &m, &bad).unwrap_err();
        assert!(matches!(err, QkError::NotEquivariant(_)));
    }
}

use serde_json::json;

use super::report::{flags, numbers, ComparisonReport};
use crate::algebras::{
    hochschild_boundary, hochschild_homology_with, hypersurface_cotangent, kaehler_differentials,
    mult_kernel_bimodule, square_zero_extension, Bimodule, CommRingPres, FinDimAlgebra,
    HochschildOptions, RModule,
};
use crate::error::{QkError, Result};
use crate::linalg::FieldMatrix;

/// `dim HH_{i+1}(A; A)` against `dim HH_i(A; I_A)` for `i = 1..=max_degree`.
pub fn verify_hochschild_shift(
    a: &FinDimAlgebra,
    max_degree: usize,
    opts: &HochschildOptions,
) -> Result<ComparisonReport> {
    let regular = hochschild_homology_with(a, &Bimodule::regular(a), max_degree + 1, opts)?;
    let ia = mult_kernel_bimodule(a);
    let shifted = hochschild_homology_with(a, &ia, max_degree, opts)?;
    Ok(ComparisonReport::new(
        "hochschild-shift",
        json!({
            "field": a.field(),
            "dim": a.dim(),
            "max_degree": max_degree,
            "normalized": opts.normalized,
        }),
        numbers(regular[2..].to_vec()),
        numbers(shifted[1..].to_vec()),
        1,
    )
    .with_check("dim_I_A", ia.dim() == a.dim() * a.dim() - a.dim()))
}

/// The map `HH_1(A) → Ω_{A/k}`, `a⊗b ↦ a·db`, for `A` given by a
/// presentation. `left = [dim HH_1]`, `right = [dim Ω]`; rank, injectivity
/// and surjectivity are recorded as checks.
pub fn comparison_map_degree0(r: &CommRingPres, opts: &HochschildOptions) -> Result<ComparisonReport> {
    let a = r.to_algebra()?;
    let kaehler = kaehler_differentials(r)?;
    let d = a.dim();
    let f = a.field();
    let m = r.vars().len();
    let opts = HochschildOptions {
        normalized: false,
        ..*opts
    };
    let reg = Bimodule::regular(&a);
    // C_1 = A ⊗ A with e_j ⊗ e_t at j·d + t
    let b1 = hochschild_boundary(&a, &reg, 1, &opts)?;
    let b2 = hochschild_boundary(&a, &reg, 2, &opts)?;
    let deriv = kaehler.universal_derivation().expect("finite-dimensional");
    let cols: Vec<Vec<_>> = (0..d * d)
        .map(|c| {
            let (j, t) = (c / d, c % d);
            let act = kaehler.free_module_action(&a.basis(j)).expect("finite-dimensional");
            let v = act.mul_vec(&deriv.column(t));
            kaehler.class_of(&v).expect("finite-dimensional")
        })
        .collect();
    let omega_dim = kaehler.k_dim.expect("finite-dimensional");
    let phi = FieldMatrix::from_columns(f, omega_dim, &cols);
    let well_defined = phi.mul(&b2)?.is_zero();
    let cycles = b1.kernel_basis();
    let rank = phi.mul(&cycles)?.rank_with(opts.exec);
    let hh1 = cycles.cols() - b2.rank_with(opts.exec);
    let mut details = json!({
        "rank": rank,
        "injective": rank == hh1,
        "surjective": rank == omega_dim,
        "generators": kaehler.generators,
    });
    if m == 1 && r.relations().iter().filter(|p| !p.is_zero()).count() == 1 {
        // degree 1 side by side: HH_2 and D_1 of the hypersurface complex
        let h = hypersurface_cotangent(r)?;
        let hh = hochschild_homology_with(&a, &reg, 2, &opts)?;
        details["degree1"] = json!({ "hh2": hh[2], "d1": h.d1_dim });
    }
    Ok(ComparisonReport::new(
        "comparison-map-degree0",
        json!({ "ring": r.spec() }),
        numbers(vec![hh1]),
        numbers(vec![omega_dim]),
        1,
    )
    .with_check("well_defined", well_defined)
    .with_check("injective", rank == hh1)
    .with_check("surjective", rank == omega_dim)
    .with_details(details))
}

/// Prop NonExact: `R ⊕ M` is reduced iff `M = 0` (for reduced `R`), and the
/// nilradical is exactly `M`.
pub fn verify_square_zero_nilradical(m: &RModule) -> Result<ComparisonReport> {
    let base_reduced = m.algebra().is_reduced()?;
    if !base_reduced {
        return Err(QkError::InvalidAlgebra("the base ring must be reduced".into()));
    }
    let e = square_zero_extension(m)?;
    Ok(ComparisonReport::new(
        "square-zero-nilradical",
        json!({ "field": m.algebra().field(), "base_dim": e.base_dim, "module_dim": e.module_dim }),
        flags(vec![e.reduced]),
        flags(vec![e.module_dim == 0]),
        0,
    )
    .with_check("module_nilpotent", e.module_nilpotent)
    .with_check("nilradical_is_module", e.nilradical_is_module == Some(true))
    .with_details(json!({ "nilradical_dim": e.nilradical_dim })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;

    const Q: Field = Field::Rationals;

    #[test]
    fn shift_examples() {
        let opts = HochschildOptions::default();
        for a in [
            FinDimAlgebra::ground(Q),
            FinDimAlgebra::dual_numbers(Q),
            FinDimAlgebra::truncated_polynomial(Q, 3),
            FinDimAlgebra::upper_triangular(Q, 2),
        ] {
            let r = verify_hochschild_shift(&a, 2, &opts).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let r = verify_hochschild_shift(&FinDimAlgebra::ground(Q), 2, &opts).unwrap();
        assert_eq!(r.left, numbers(vec![0, 0]));
    }

    #[test]
    fn degree0_map_examples() {
        let opts = HochschildOptions::default();
        let k = CommRingPres::parse(Q, &["x"], &["x"]).unwrap();
        let r = comparison_map_degree0(&k, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(r.left, numbers(vec![0]));
        let dual = CommRingPres::parse(Q, &["x"], &["x^2"]).unwrap();
        let r = comparison_map_degree0(&dual, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(r.left, numbers(vec![1]));
        let dual2 = CommRingPres::parse(Field::Prime(2), &["x"], &["x^2"]).unwrap();
        let r = comparison_map_degree0(&dual2, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(r.right, numbers(vec![2]));
        let mono = CommRingPres::parse(Q, &["x", "y"], &["x^2", "y^2", "x*y"]).unwrap();
        assert!(comparison_map_degree0(&mono, &opts).unwrap().passed());
    }

    #[test]
    fn square_zero_reports() {
        let f2 = Field::Prime(2);
        let base = FinDimAlgebra::ground(f2);
        let r = verify_square_zero_nilradical(&RModule::regular(&base).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(r.left, flags(vec![false]));
        let r = verify_square_zero_nilradical(&RModule::zero(&base)).unwrap();
        assert!(r.passed());
        assert_eq!(r.left, flags(vec![true]));
    }
}

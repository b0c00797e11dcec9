mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use qk_core::algebras::{
    central_quotient, hochschild_homology_with, mult_kernel_bimodule, Bimodule, FinDimAlgebra, HochschildOptions,
};
use qk_core::builtins::builtin_group;
use qk_core::comparison::{factor_epi_mono, numbers, ComparisonReport, Verdict};
use qk_core::groups::{augmentation_ideal, group_homology_with, BarOptions, ZGRep};
use qk_core::linalg::{invariant_factors, smith_normal_form, FGAbelianGroup, Field, IntMatrix};
use qk_core::simplicial::{alternating_sum_complex, moore_complex, simplicial_pi};
use qk_core::Exec;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (0usize..=6, 0usize..=6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c)
            .prop_map(move |v| IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

fn abelian_group() -> impl Strategy<Value = FGAbelianGroup> {
    (0usize..=3, proptest::collection::vec(2i64..=12, 0..=3)).prop_map(|(free, orders)| {
        FGAbelianGroup::from_cyclic_orders(free, &orders.into_iter().map(BigInt::from).collect::<Vec<_>>())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_reconstructs(m in matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(m.cols()));
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|d| d.is_positive()));
        prop_assert!(diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        prop_assert_eq!(invariant_factors(&m, Exec::Sequential).rank, diag.len());
    }

    #[test]
    fn smith_form_is_deterministic(m in matrix()) {
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        prop_assert_eq!(a.u, b.u);
        prop_assert_eq!(a.v, b.v);
    }

    #[test]
    fn canonical_form_is_iso_invariant(a in abelian_group(), b in abelian_group()) {
        prop_assert_eq!(a.direct_sum(&b), b.direct_sum(&a));
        let shown = a.to_string();
        prop_assert_eq!(shown.parse::<FGAbelianGroup>().unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<FGAbelianGroup>(&json).unwrap(), a);
    }

    #[test]
    fn homology_survives_basis_change(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let c = common::random_chain_complex(&mut rng, &[2, 3, 2, 1]);
        let bases: Vec<_> = c.ranks().iter().map(|&n| common::random_unimodular(&mut rng, n)).collect();
        let c2 = c.change_basis(&bases).unwrap();
        let h = c.homology_all(Exec::Sequential);
        prop_assert_eq!(&h, &c2.homology_all(Exec::Parallel));
        let free: i64 = h.iter().enumerate().map(|(n, g)| if n % 2 == 0 { 1 } else { -1 } * g.free_rank() as i64).sum();
        prop_assert_eq!(c.euler_characteristic(), free);
    }

    #[test]
    fn moore_matches_alternating_sum(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let s = common::random_simplicial(&mut rng, 3, 4);
        let top = s.top_level();
        let moore = moore_complex(&s).homology_all(Exec::Sequential);
        let alt = alternating_sum_complex(&s).homology_all(Exec::Sequential);
        prop_assert_eq!(&moore[..top], &alt[..top]);
        for n in 0..top {
            prop_assert_eq!(simplicial_pi(&s, n).unwrap(), moore[n].clone());
        }
    }

    #[test]
    fn factorization_composes(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let f = common::random_equivariant_map(&mut rng);
        let fac = factor_epi_mono(&f).unwrap();
        prop_assert_eq!(fac.mono.matrix.mul(&fac.epi.matrix).unwrap(), f.matrix.clone());
        prop_assert!(FGAbelianGroup::cokernel(&fac.epi.matrix, Exec::Sequential).is_zero());
    }

    #[test]
    fn verdict_is_fieldwise_equality(a in proptest::collection::vec(0usize..4, 0..4), b in proptest::collection::vec(0usize..4, 0..4)) {
        let r = ComparisonReport::new("t", serde_json::json!({}), numbers(a.clone()), numbers(b.clone()), 0);
        prop_assert_eq!(r.verdict == Verdict::Equal, a == b);
        prop_assert_eq!(r.witness.is_none(), a == b);
    }

    #[test]
    fn truncated_polynomial_hochschild(p in prop::sample::select(vec![0u32, 2, 3, 5]), n in 1usize..=3) {
        let f = if p == 0 { Field::Rationals } else { Field::Prime(p) };
        let a = FinDimAlgebra::truncated_polynomial(f, n);
        let reg = Bimodule::regular(&a);
        let plain = hochschild_homology_with(&a, &reg, 2, &HochschildOptions::default()).unwrap();
        let norm = hochschild_homology_with(&a, &reg, 2, &HochschildOptions::normalized()).unwrap();
        prop_assert_eq!(&plain, &norm);
        // commutative: HH_0 = A = central quotient
        prop_assert_eq!(plain[0], n);
        prop_assert_eq!(central_quotient(&reg).dim, n);
        // HH_1 = Omega = A/(n x^{n-1}) dx
        let expected = if n == 1 { 0 } else if p != 0 && n % p as usize == 0 { n } else { n - 1 };
        prop_assert_eq!(plain[1], expected);
        prop_assert_eq!(mult_kernel_bimodule(&a).dim(), n * n - n);
    }
}

#[test]
fn normalized_and_unnormalized_bar_complexes_agree() {
    for name in ["C2", "C3", "C2xC2", "S3"] {
        let g = Arc::new(builtin_group(name).unwrap());
        for m in [ZGRep::trivial(g.clone(), 1), augmentation_ideal(g.clone()), ZGRep::regular(g.clone())] {
            let a = group_homology_with(&g, &m, 2, &BarOptions::default()).unwrap();
            let b = group_homology_with(&g, &m, 2, &BarOptions::unnormalized()).unwrap();
            assert_eq!(a, b, "{name}");
        }
    }
}

#[test]
fn regular_module_is_acyclic() {
    let g = Arc::new(builtin_group("S3").unwrap());
    let h = group_homology_with(&g, &ZGRep::regular(g.clone()), 3, &BarOptions::default()).unwrap();
    assert_eq!(h[0], FGAbelianGroup::free(1));
    assert!(h[1..].iter().all(FGAbelianGroup::is_zero));
}

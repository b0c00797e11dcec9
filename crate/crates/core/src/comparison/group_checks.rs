use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use super::report::{flags, groups, ComparisonReport};
use crate::error::Result;
use crate::groups::{
    augmentation_ideal, classify, closed_form_integral_homology, com_split_extension,
    group_homology_with, BarOptions, FinGroup, SplitExtensionGrp, ZGRep,
};
use crate::linalg::FGAbelianGroup;

/// `H_i(G; I_G)` against `H_{i+1}(G; Z)` for `i = 0..=max_degree`, plus the
/// closed-form table when `G` is cyclic, dihedral or `Q_8`.
pub fn verify_coinvariants_shift(
    g: &Arc<FinGroup>,
    max_degree: usize,
    opts: &BarOptions,
) -> Result<ComparisonReport> {
    opts.limits.check_group_order(g.order())?;
    opts.limits.check_degree(max_degree + 1)?;
    let left = group_homology_with(g, &augmentation_ideal(g.clone()), max_degree, opts)?;
    let trivial = ZGRep::trivial(g.clone(), 1);
    let right: Vec<FGAbelianGroup> = group_homology_with(g, &trivial, max_degree + 1, opts)?
        .into_iter()
        .skip(1)
        .collect();
    let mut report = ComparisonReport::new(
        "coinvariants-shift",
        json!({ "group_order": g.order(), "max_degree": max_degree }),
        groups(left),
        groups(right.clone()),
        0,
    );
    if let Some(family) = classify(g) {
        let table: Vec<FGAbelianGroup> = (1..=max_degree + 1)
            .map(|n| closed_form_integral_homology(g, n).expect("family detected"))
            .collect();
        report = report
            .with_check("closed_form_agrees", table == right)
            .with_details(json!({ "closed_form": family, "closed_form_values": table }));
    }
    Ok(report)
}

/// `Com(G ⋉ M)` against `Com(G) ⊕ M_G`.
pub fn verify_commutativization(e: &SplitExtensionGrp) -> ComparisonReport {
    let (total, predicted) = com_split_extension(e);
    ComparisonReport::new(
        "commutativization",
        json!({ "base_order": e.base().order(), "fiber_order": e.fiber().order() }),
        groups(vec![total]),
        groups(vec![predicted]),
        0,
    )
}

/// Cyclic summands `Z^r ⊕ M` as orders (`0` for `Z`).
fn summand_orders(free_rank: usize, m: &FGAbelianGroup) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); free_rank + m.free_rank()];
    out.extend(m.torsion().iter().cloned());
    out
}

/// A nonzero element of finite order in a direct sum of cyclic groups,
/// searched generator by generator by repeated addition.
fn torsion_witness(orders: &[BigInt]) -> Option<(Vec<u64>, u64)> {
    for (i, d) in orders.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let d = d.to_u64()?;
        let mut coord = 1u64 % d;
        let mut k = 1u64;
        while coord != 0 {
            coord = (coord + 1) % d;
            k += 1;
        }
        let mut element = vec![0u64; orders.len()];
        element[i] = 1;
        return Some((element, k));
    }
    None
}

/// `Z^r ⊕ M` is torsion-free (so a Beck module in torsion-free abelian
/// groups) iff `M` has no invariant factors.
pub fn verify_torsionfree_beck(free_rank: usize, m: &FGAbelianGroup) -> ComparisonReport {
    let orders = summand_orders(free_rank, m);
    let witness = torsion_witness(&orders);
    let total_torsion_free = witness.is_none();
    let m_torsion_free = m.torsion().is_empty();
    let mut details = json!({
        "total": FGAbelianGroup::free(free_rank).direct_sum(m),
        "accepted_as_beck_module": total_torsion_free,
    });
    if let Some((element, order)) = witness {
        details["torsion_witness"] = json!({ "element": element, "order": order });
    }
    ComparisonReport::new(
        "torsionfree-beck",
        json!({ "free_rank": free_rank, "m": m }),
        flags(vec![total_torsion_free]),
        flags(vec![m_torsion_free]),
        0,
    )
    .with_details(details)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::split_extension_fixtures;

    fn arc(g: FinGroup) -> Arc<FinGroup> {
        Arc::new(g)
    }

    #[test]
    fn shift_examples() {
        let opts = BarOptions::default();
        let r = verify_coinvariants_shift(&arc(FinGroup::trivial()), 2, &opts).unwrap();
        assert!(r.passed());
        assert!(r.left.iter().all(|v| *v == FGAbelianGroup::zero().into()));
        let r = verify_coinvariants_shift(&arc(FinGroup::cyclic(2).unwrap()), 2, &opts).unwrap();
        assert!(r.passed());
        let c2 = FGAbelianGroup::cyclic(2);
        assert_eq!(r.left, groups(vec![c2.clone(), FGAbelianGroup::zero(), c2]));
        let r = verify_coinvariants_shift(&arc(FinGroup::symmetric(3).unwrap()), 2, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(r.left[2], FGAbelianGroup::cyclic(6).into());
        assert!(r.checks.contains_key("closed_form_agrees"));
    }

    #[test]
    fn commutativization_fixtures() {
        for (name, e) in split_extension_fixtures() {
            assert!(verify_commutativization(&e).passed(), "{name}");
        }
    }

    #[test]
    fn torsionfree_examples() {
        let z = FGAbelianGroup::free(1);
        let r = verify_torsionfree_beck(2, &z);
        assert!(r.passed());
        assert_eq!(r.left, flags(vec![true]));
        let r = verify_torsionfree_beck(1, &FGAbelianGroup::cyclic(2));
        assert_eq!(r.left, flags(vec![false]));
        let m: FGAbelianGroup = "Z + Z/3".parse().unwrap();
        let r = verify_torsionfree_beck(0, &m);
        assert!(r.passed());
        let d = r.details.unwrap();
        assert_eq!(d["torsion_witness"]["order"], 3);
        assert_eq!(d["accepted_as_beck_module"], false);
    }
}

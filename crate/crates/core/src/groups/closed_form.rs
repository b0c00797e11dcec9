use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::group::FinGroup;
use crate::linalg::FGAbelianGroup;

/// Families whose integral homology is known in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ClosedFormFamily {
    /// `C_m`.
    Cyclic { m: usize },
    /// Dihedral of order `2m` (`m = 2` is the Klein four group).
    Dihedral { m: usize },
    /// `Q_8`.
    Quaternion,
}

/// Detects the family from the multiplication table alone.
pub fn classify(g: &FinGroup) -> Option<ClosedFormFamily> {
    let n = g.order();
    let orders: Vec<usize> = g.elements().map(|a| g.element_order(a)).collect();
    if orders.contains(&n) {
        return Some(ClosedFormFamily::Cyclic { m: n });
    }
    if n % 2 == 0 && n >= 4 {
        let m = n / 2;
        for x in g.elements().filter(|&a| orders[a] == m) {
            let sub = g.subgroup_generated([x]);
            if g.elements().all(|y| sub.contains(&y) || orders[y] == 2) {
                return Some(ClosedFormFamily::Dihedral { m });
            }
        }
    }
    if n == 8 && orders.iter().filter(|&&o| o == 2).count() == 1 {
        return Some(ClosedFormFamily::Quaternion);
    }
    None
}

fn elementary(count: usize, p: u64) -> Vec<BigInt> {
    vec![BigInt::from(p); count]
}

/// `H_n(G; Z)` for a recognized family.
pub fn closed_form_homology(family: ClosedFormFamily, n: usize) -> FGAbelianGroup {
    if n == 0 {
        return FGAbelianGroup::free(1);
    }
    let orders: Vec<BigInt> = match family {
        ClosedFormFamily::Cyclic { m } => {
            if n % 2 == 1 {
                vec![BigInt::from(m)]
            } else {
                vec![]
            }
        }
        ClosedFormFamily::Dihedral { m } if m % 2 == 1 => match n % 4 {
            1 => vec![BigInt::from(2)],
            3 => vec![BigInt::from(2 * m)],
            _ => vec![],
        },
        ClosedFormFamily::Dihedral { m } => match n % 4 {
            1 => elementary((n + 3) / 2, 2),
            3 => {
                let mut v = elementary((n + 1) / 2, 2);
                v.push(BigInt::from(m));
                v
            }
            _ => elementary(n / 2, 2),
        },
        ClosedFormFamily::Quaternion => match n % 4 {
            1 => elementary(2, 2),
            3 => vec![BigInt::from(8)],
            _ => vec![],
        },
    };
    FGAbelianGroup::from_cyclic_orders(0, &orders)
}

/// Convenience: classify and evaluate, `None` outside the table.
pub fn closed_form_integral_homology(g: &FinGroup, n: usize) -> Option<FGAbelianGroup> {
    classify(g).map(|f| closed_form_homology(f, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert_eq!(
            classify(&FinGroup::trivial()),
            Some(ClosedFormFamily::Cyclic { m: 1 })
        );
        assert_eq!(
            classify(&FinGroup::symmetric(3).unwrap()),
            Some(ClosedFormFamily::Dihedral { m: 3 })
        );
        assert_eq!(
            classify(&FinGroup::dihedral(4).unwrap()),
            Some(ClosedFormFamily::Dihedral { m: 4 })
        );
        let v4 = FinGroup::cyclic(2).unwrap().product(&FinGroup::cyclic(2).unwrap());
        assert_eq!(classify(&v4), Some(ClosedFormFamily::Dihedral { m: 2 }));
        assert_eq!(classify(&FinGroup::quaternion()), Some(ClosedFormFamily::Quaternion));
        let c2c4 = FinGroup::cyclic(2).unwrap().product(&FinGroup::cyclic(4).unwrap());
        assert_eq!(classify(&c2c4), None);
        assert_eq!(classify(&FinGroup::symmetric(4).unwrap()), None);
    }

    #[test]
    fn known_values() {
        let d4 = ClosedFormFamily::Dihedral { m: 4 };
        assert_eq!(closed_form_homology(d4, 3).to_string(), "(Z/2)^2 + Z/4");
        let v4 = ClosedFormFamily::Dihedral { m: 2 };
        assert_eq!(closed_form_homology(v4, 3).to_string(), "(Z/2)^3");
        assert_eq!(closed_form_homology(v4, 2).to_string(), "Z/2");
        let s3 = ClosedFormFamily::Dihedral { m: 3 };
        assert_eq!(closed_form_homology(s3, 3).to_string(), "Z/6");
        assert_eq!(
            closed_form_homology(ClosedFormFamily::Quaternion, 3).to_string(),
            "Z/8"
        );
    }
}

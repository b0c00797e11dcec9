//! Named objects so the battery runs without fixture files.

use crate::algebras::{CommRingPres, FinDimAlgebra};
use crate::error::{QkError, Result};
use crate::groups::{FinGroup, GroupSpec};
use crate::linalg::Field;

pub const BUILTIN_GROUPS: &[&str] = &["trivial", "C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8"];

pub const BUILTIN_ALGEBRAS: &[&str] = &[
    "Q",
    "QxQ",
    "dual-numbers-Q",
    "dual-numbers-F2",
    "Q[x]/(x^3)",
    "M2(Q)",
    "upper-triangular-2",
];

pub fn builtin_group_spec(name: &str) -> Result<GroupSpec> {
    let c = |n| GroupSpec::Cyclic { n };
    Ok(match name {
        "trivial" | "C1" => c(1),
        "C2" => c(2),
        "C3" => c(3),
        "C4" => c(4),
        "C2xC2" => GroupSpec::Product {
            factors: vec![c(2), c(2)],
        },
        "S3" => GroupSpec::Symmetric { n: 3 },
        "D4" => GroupSpec::Dihedral { n: 4 },
        "Q8" => GroupSpec::Quaternion,
        _ => return Err(unknown("group", name, BUILTIN_GROUPS)),
    })
}

pub fn builtin_group(name: &str) -> Result<FinGroup> {
    crate::groups::make_group(&builtin_group_spec(name)?)
}

fn unknown(kind: &str, name: &str, known: &[&str]) -> QkError {
    QkError::Parse(format!("unknown builtin {kind} `{name}` (known: {})", known.join(", ")))
}

/// Presentation of a commutative builtin algebra, if it has one.
pub fn builtin_presentation(name: &str) -> Result<Option<CommRingPres>> {
    let q = Field::Rationals;
    let f2 = Field::Prime(2);
    let pres = |field, rel: &str| CommRingPres::parse(field, &["x"], &[rel]).map(Some);
    match name {
        "Q" => pres(q, "x"),
        "QxQ" => pres(q, "x^2 - x"),
        "dual-numbers-Q" => pres(q, "x^2"),
        "dual-numbers-F2" => pres(f2, "x^2"),
        "Q[x]/(x^3)" => pres(q, "x^3"),
        "M2(Q)" | "upper-triangular-2" => Ok(None),
        _ => Err(unknown("algebra", name, BUILTIN_ALGEBRAS)),
    }
}

pub fn builtin_algebra(name: &str) -> Result<FinDimAlgebra> {
    let q = Field::Rationals;
    match name {
        "M2(Q)" => Ok(FinDimAlgebra::matrix_algebra(q, 2)),
        "upper-triangular-2" => Ok(FinDimAlgebra::upper_triangular(q, 2)),
        _ => builtin_presentation(name)?
            .expect("commutative builtins are presented")
            .to_algebra(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        for g in BUILTIN_GROUPS {
            builtin_group(g).unwrap();
        }
        for a in BUILTIN_ALGEBRAS {
            builtin_algebra(a).unwrap();
        }
        assert!(builtin_group("C5").is_err());
        assert_eq!(builtin_group("Q8").unwrap().order(), 8);
        assert_eq!(
            builtin_algebra("dual-numbers-Q").unwrap(),
            FinDimAlgebra::dual_numbers(Field::Rationals)
        );
        assert_eq!(builtin_algebra("QxQ").unwrap().dim(), 2);
    }
}

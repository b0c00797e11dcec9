use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::{ComparisonReport, ReportValue};
use crate::algebras::FinDimAlgebra;
use crate::error::Result;
use crate::exec::Exec;
use crate::groups::{FinGroup, GroupHom};
use crate::linalg::{FGAbelianGroup, Field, FieldMatrix, IntMatrix};

/// The adjunctions `Com ⊣ inclusion` checked by the §2.1 criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuillenInstance {
    GpAb,
    AlgCom,
}

/// `Com(F_n)` through the class-1 truncation: generators `x_1..x_n`, one
/// relation per commutator `[x_i, x_j]`, each of exponent sum zero.
pub fn abelianized_free_group(n: usize) -> FGAbelianGroup {
    let pairs = n * n.saturating_sub(1) / 2;
    let relations = IntMatrix::zeros(n, pairs);
    FGAbelianGroup::cokernel(&relations, Exec::Sequential)
}

/// `|Hom(A, Z/m)|` from invariant factors.
fn hom_count_into_cyclic(a: &FGAbelianGroup, m: u64) -> BigInt {
    let m = BigInt::from(m);
    let mut count = num_traits::pow(m.clone(), a.free_rank());
    for d in a.torsion() {
        count *= d.gcd(&m);
    }
    count
}

/// `|Hom(F_n, H)| = |H|^n`: every assignment of the generators extends.
fn hom_count_free(n: usize, h: &FinGroup) -> BigInt {
    num_traits::pow(BigInt::from(h.order()), n)
}

pub fn default_group_surjections() -> Vec<(String, GroupHom)> {
    let arc = |g: FinGroup| Arc::new(g);
    let c = |n| arc(FinGroup::cyclic(n).expect("cyclic"));
    let s3 = arc(FinGroup::symmetric(3).expect("S3"));
    let sign: Vec<usize> = s3.elements().map(|g| usize::from(s3.element_order(g) == 2)).collect();
    let v4 = arc(FinGroup::cyclic(2).unwrap().product(&FinGroup::cyclic(2).unwrap()));
    let mk = |name: &str, s: Arc<FinGroup>, t: Arc<FinGroup>, images: Vec<usize>| {
        (name.to_string(), GroupHom::new(s, t, images).expect("sample is a homomorphism"))
    };
    vec![
        mk("S3 -> C2 (sign)", s3.clone(), c(2), sign),
        mk("C4 -> C2", c(4), c(2), vec![0, 1, 0, 1]),
        mk("C6 -> C3", c(6), c(3), (0..6).map(|k| k % 3).collect()),
        mk("C2xC2 -> C2 (first)", v4.clone(), c(2), vec![0, 0, 1, 1]),
        mk("C2xC2 -> C2 (sum)", v4, c(2), vec![0, 1, 1, 0]),
    ]
}

fn verify_gp_ab(max_rank: usize) -> ComparisonReport {
    let samples = default_group_surjections();
    let mut left: Vec<ReportValue> = Vec::new();
    let mut right: Vec<ReportValue> = Vec::new();
    let mut used = Vec::new();
    for (_, f) in &samples {
        left.push(true.into());
        // R is the inclusion on abelian samples; otherwise test Com(f)
        let abelian = f.source().is_abelian() && f.target().is_abelian();
        let preserved = if abelian {
            f.is_surjective()
        } else {
            f.abelianization_is_surjective()
        };
        used.push(if abelian { "inclusion" } else { "Com" });
        right.push(preserved.into());
    }
    let tests: Vec<(String, FinGroup)> = vec![
        ("C2".into(), FinGroup::cyclic(2).unwrap()),
        ("C3".into(), FinGroup::cyclic(3).unwrap()),
        ("C4".into(), FinGroup::cyclic(4).unwrap()),
    ];
    let mut counts_agree = true;
    for n in 1..=max_rank {
        let com = abelianized_free_group(n);
        for (_, h) in &tests {
            let m = h.order() as u64;
            counts_agree &= hom_count_into_cyclic(&com, m) == hom_count_free(n, h);
        }
        left.push(FGAbelianGroup::free(n).into());
        right.push(com.into());
    }
    ComparisonReport::new(
        "quillen-pair-criterion",
        json!({
            "instance": QuillenInstance::GpAb,
            "surjections": samples.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            "max_rank": max_rank,
        }),
        left,
        right,
        0,
    )
    .with_check("finite_quotient_counts_agree", counts_agree)
    .with_details(json!({ "right_adjoint_route": used }))
}

/// Surjective algebra maps between commutative algebras, as matrices.
pub fn default_algebra_surjections(field: Field) -> Vec<(String, FinDimAlgebra, FinDimAlgebra, FieldMatrix)> {
    let k = FinDimAlgebra::ground(field);
    let m = |rows: &[&[i64]]| FieldMatrix::from_ints(field, rows);
    vec![
        (
            "k[x]/(x^3) -> k[x]/(x^2)".into(),
            FinDimAlgebra::truncated_polynomial(field, 3),
            FinDimAlgebra::truncated_polynomial(field, 2),
            m(&[&[1, 0, 0], &[0, 1, 0]]),
        ),
        (
            "k x k -> k (first)".into(),
            FinDimAlgebra::diagonal(field, 2),
            k.clone(),
            m(&[&[1, 0]]),
        ),
        (
            "k[e]/(e^2) -> k".into(),
            FinDimAlgebra::dual_numbers(field),
            k,
            m(&[&[1, 0]]),
        ),
    ]
}

/// Basis index of each word of the truncated tensor algebra, in the
/// order used by [`FinDimAlgebra::truncated_tensor`].
fn tensor_words(gens: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..degree {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..gens).map(move |g| {
                    let mut w2 = w.clone();
                    w2.push(g);
                    w2
                })
            })
            .collect();
        words.extend(layer.iter().cloned());
    }
    words
}

/// `S_{≤deg}(n) → Com(T_{≤deg}(n))`, `x^α ↦ [sorted word]`; returns whether
/// it is an algebra isomorphism.
fn symmetric_to_com_tensor_is_iso(field: Field, n: usize, degree: usize) -> (usize, bool) {
    let t = FinDimAlgebra::truncated_tensor(field, n, degree);
    let (com, q) = t.commutator_quotient();
    let s = FinDimAlgebra::truncated_symmetric(field, n, degree);
    let words = tensor_words(n, degree);
    let monomials = crate::algebras::monomials_up_to(n, degree);
    let cols: Vec<Vec<_>> = monomials
        .iter()
        .map(|alpha| {
            let word: Vec<usize> = alpha
                .iter()
                .enumerate()
                .flat_map(|(g, &k)| std::iter::repeat_n(g, k))
                .collect();
            let idx = words.iter().position(|w| *w == word).expect("word of bounded length");
            q.column(idx)
        })
        .collect();
    let map = FieldMatrix::from_columns(field, com.dim(), &cols);
    let iso = s.is_algebra_hom(&com, &map) && map.rank() == com.dim() && com.dim() == s.dim();
    (com.dim(), iso)
}

fn verify_alg_com(max_rank: usize) -> ComparisonReport {
    let field = Field::Rationals;
    let samples = default_algebra_surjections(field);
    let mut left: Vec<ReportValue> = Vec::new();
    let mut right: Vec<ReportValue> = Vec::new();
    let mut homs = true;
    for (_, a, b, f) in &samples {
        homs &= a.is_algebra_hom(b, f);
        left.push(true.into());
        // the inclusion Com → Alg leaves the underlying map unchanged
        right.push((f.rank() == b.dim()).into());
    }
    let mut isos = true;
    for n in 1..=max_rank {
        let (dim, iso) = symmetric_to_com_tensor_is_iso(field, n, 2);
        isos &= iso;
        let expected = ((n + 2) * (n + 1) / 2).to_u64().expect("small");
        left.push(expected.into());
        right.push(dim.into());
    }
    ComparisonReport::new(
        "quillen-pair-criterion",
        json!({
            "instance": QuillenInstance::AlgCom,
            "surjections": samples.iter().map(|s| s.0.clone()).collect::<Vec<_>>(),
            "max_rank": max_rank,
            "truncation_degree": 2,
        }),
        left,
        right,
        0,
    )
    .with_check("samples_are_algebra_maps", homs)
    .with_check("com_of_tensor_is_symmetric", isos)
}

/// (a) the right adjoint preserves sampled surjections; (b) `Com` sends
/// free objects of rank `1..=max_rank` to free commutative ones.
pub fn verify_quillen_pair_criterion(instance: QuillenInstance, max_rank: usize) -> Result<ComparisonReport> {
    Ok(match instance {
        QuillenInstance::GpAb => verify_gp_ab(max_rank),
        QuillenInstance::AlgCom => verify_alg_com(max_rank),
    })
}

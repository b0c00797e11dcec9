use num_bigint::BigInt;
use num_traits::Zero;

use super::group::FinGroup;
use super::rep::ZGRep;
use crate::error::{QkError, Result};
use crate::exec::Exec;
use crate::linalg::{
    homology_from_invariants, invariant_factors, ChainComplexZ, FGAbelianGroup, IntMatrix, Limits,
};

/// Options for the inhomogeneous bar complex `C_n = M ⊗ Z[G^n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BarOptions {
    /// Drop tuples containing the identity (the normalized complex).
    pub normalized: bool,
    pub limits: Limits,
    pub exec: Exec,
}

impl Default for BarOptions {
    fn default() -> Self {
        BarOptions {
            normalized: true,
            limits: Limits::default(),
            exec: Exec::default(),
        }
    }
}

impl BarOptions {
    pub fn unnormalized() -> Self {
        BarOptions {
            normalized: false,
            ..Self::default()
        }
    }

    pub fn with_limits(self, limits: Limits) -> Self {
        BarOptions { limits, ..self }
    }

    pub fn with_exec(self, exec: Exec) -> Self {
        BarOptions { exec, ..self }
    }
}

/// Enumerates `G^n` (or `(G∖e)^n`) with the first coordinate most significant.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Tuples {
    base: usize,
    offset: usize,
}

impl Tuples {
    pub(crate) fn new(order: usize, normalized: bool) -> Self {
        if normalized {
            Tuples {
                base: order - 1,
                offset: 1,
            }
        } else {
            Tuples {
                base: order,
                offset: 0,
            }
        }
    }

    pub(crate) fn count(&self, n: usize) -> usize {
        self.base.pow(n as u32)
    }

    pub(crate) fn decode(&self, mut t: usize, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for slot in out.iter_mut().rev() {
            *slot = t % self.base + self.offset;
            t /= self.base;
        }
        out
    }

    /// `None` when some entry is the identity in the normalized encoding.
    pub(crate) fn encode(&self, tuple: &[usize]) -> Option<usize> {
        let mut t = 0;
        for &g in tuple {
            if g < self.offset {
                return None;
            }
            t = t * self.base + (g - self.offset);
        }
        Some(t)
    }
}

fn check_group(g: &FinGroup, m: &ZGRep) -> Result<()> {
    if **m.group() != *g {
        return Err(QkError::InvalidRepresentation(
            "coefficient module is a representation of a different group".into(),
        ));
    }
    Ok(())
}

fn dense(rows: usize, cols: usize, entries: Vec<Vec<(usize, BigInt)>>, by_column: bool) -> IntMatrix {
    let mut out = IntMatrix::zeros(rows, cols);
    for (major, list) in entries.into_iter().enumerate() {
        for (minor, v) in list {
            let (r, c) = if by_column { (minor, major) } else { (major, minor) };
            *out.get_mut(r, c) += v;
        }
    }
    out
}

/// The `i`-th face `d_i: C_n → C_{n-1}` of the bar construction, with
/// `d_0(m ⊗ [g_1|…|g_n]) = g_1⁻¹m ⊗ [g_2|…|g_n]`, middle faces multiplying
/// `g_i g_{i+1}` and `d_n` dropping `g_n`.
pub(crate) fn bar_face(m: &ZGRep, n: usize, i: usize, tuples: Tuples, exec: Exec) -> IntMatrix {
    let g = m.group();
    let r = m.rank();
    let cols: Vec<usize> = (0..tuples.count(n)).collect();
    let entries: Vec<Vec<Vec<(usize, BigInt)>>> = exec.map(&cols, |&t| {
        let tuple = tuples.decode(t, n);
        (0..r)
            .map(|j| face_terms(m, g, &tuple, j, i, tuples, BigInt::from(1)))
            .collect()
    });
    dense(
        r * tuples.count(n - 1),
        r * tuples.count(n),
        entries.into_iter().flatten().collect(),
        true,
    )
}

fn face_terms(
    m: &ZGRep,
    g: &FinGroup,
    tuple: &[usize],
    j: usize,
    i: usize,
    tuples: Tuples,
    sign: BigInt,
) -> Vec<(usize, BigInt)> {
    let r = m.rank();
    let n = tuple.len();
    let mut out = Vec::new();
    if i == 0 {
        let a = m.action(g.inv(tuple[0]));
        let target = tuples.encode(&tuple[1..]).expect("suffix of a valid tuple");
        for k in 0..r {
            let v = a.get(k, j);
            if !v.is_zero() {
                out.push((target * r + k, &sign * v));
            }
        }
    } else if i < n {
        let mut merged = Vec::with_capacity(n - 1);
        merged.extend_from_slice(&tuple[..i - 1]);
        merged.push(g.mul(tuple[i - 1], tuple[i]));
        merged.extend_from_slice(&tuple[i + 1..]);
        if let Some(target) = tuples.encode(&merged) {
            out.push((target * r + j, sign));
        }
    } else {
        let target = tuples.encode(&tuple[..n - 1]).expect("prefix of a valid tuple");
        out.push((target * r + j, sign));
    }
    out
}

/// The degeneracy `s_i: C_n → C_{n+1}` inserting `e` before position `i`
/// (unnormalized complex only).
pub(crate) fn bar_degeneracy(m: &ZGRep, n: usize, i: usize, exec: Exec) -> IntMatrix {
    let g = m.group();
    let r = m.rank();
    let tuples = Tuples::new(g.order(), false);
    let cols: Vec<usize> = (0..tuples.count(n)).collect();
    let entries: Vec<Vec<Vec<(usize, BigInt)>>> = exec.map(&cols, |&t| {
        let mut tuple = tuples.decode(t, n);
        tuple.insert(i, 0);
        let target = tuples.encode(&tuple).expect("unnormalized");
        (0..r).map(|j| vec![(target * r + j, BigInt::from(1))]).collect()
    });
    dense(
        r * tuples.count(n + 1),
        r * tuples.count(n),
        entries.into_iter().flatten().collect(),
        true,
    )
}

/// `∂_n = Σ (−1)^i d_i` of the (normalized or unnormalized) bar complex.
fn bar_boundary(m: &ZGRep, n: usize, tuples: Tuples, exec: Exec) -> IntMatrix {
    let g = m.group();
    let r = m.rank();
    let cols: Vec<usize> = (0..tuples.count(n)).collect();
    let entries: Vec<Vec<Vec<(usize, BigInt)>>> = exec.map(&cols, |&t| {
        let tuple = tuples.decode(t, n);
        (0..r)
            .map(|j| {
                (0..=n)
                    .flat_map(|i| {
                        let sign = BigInt::from(if i % 2 == 0 { 1 } else { -1 });
                        face_terms(m, g, &tuple, j, i, tuples, sign)
                    })
                    .collect()
            })
            .collect()
    });
    dense(
        r * tuples.count(n - 1),
        r * tuples.count(n),
        entries.into_iter().flatten().collect(),
        true,
    )
}

fn check_sizes(g: &FinGroup, m: &ZGRep, top: usize, opts: &BarOptions, what: &str) -> Result<Tuples> {
    opts.limits.check_group_order(g.order())?;
    let tuples = Tuples::new(g.order(), opts.normalized);
    let r = m.rank() as u128;
    let base = tuples.base as u128;
    for n in 1..=top {
        let rows = r * base.saturating_pow(n as u32 - 1);
        let cols = r * base.saturating_pow(n as u32);
        opts.limits
            .check_entries(&format!("{what} map in degree {n}"), rows, cols)?;
    }
    Ok(tuples)
}

/// The bar complex truncated at degree `top`.
pub fn bar_complex(g: &FinGroup, m: &ZGRep, top: usize, opts: &BarOptions) -> Result<ChainComplexZ> {
    check_group(g, m)?;
    let tuples = check_sizes(g, m, top, opts, "bar boundary")?;
    let ranks = (0..=top).map(|n| m.rank() * tuples.count(n)).collect();
    let degrees: Vec<usize> = (1..=top).collect();
    let boundaries = opts
        .exec
        .map(&degrees, |&n| bar_boundary(m, n, tuples, opts.exec));
    ChainComplexZ::new(ranks, boundaries)
}

/// `H_n(G; M)` for `n = 0..=max_degree`.
pub fn group_homology(g: &FinGroup, m: &ZGRep, max_degree: usize) -> Result<Vec<FGAbelianGroup>> {
    group_homology_with(g, m, max_degree, &BarOptions::default())
}

pub fn group_homology_with(
    g: &FinGroup,
    m: &ZGRep,
    max_degree: usize,
    opts: &BarOptions,
) -> Result<Vec<FGAbelianGroup>> {
    opts.limits.check_degree(max_degree)?;
    let c = bar_complex(g, m, max_degree + 1, opts)?;
    let mut h = c.homology_all(opts.exec);
    h.truncate(max_degree + 1);
    Ok(h)
}

/// `δ_n: C^n → C^{n+1}` on inhomogeneous cochains `f: G^n → M`:
/// `(δf)(g_1,…,g_{n+1}) = g_1 f(g_2,…) + Σ (−1)^i f(…, g_i g_{i+1}, …) + (−1)^{n+1} f(g_1,…,g_n)`.
fn coboundary(m: &ZGRep, n: usize, tuples: Tuples, exec: Exec) -> IntMatrix {
    let g = m.group();
    let r = m.rank();
    let rows: Vec<usize> = (0..tuples.count(n + 1)).collect();
    let entries: Vec<Vec<Vec<(usize, BigInt)>>> = exec.map(&rows, |&t| {
        let tuple = tuples.decode(t, n + 1);
        let a = m.action(tuple[0]);
        let head = tuples.encode(&tuple[1..]).expect("suffix of a valid tuple");
        let tail = tuples.encode(&tuple[..n]).expect("prefix of a valid tuple");
        (0..r)
            .map(|k| {
                let mut row = Vec::new();
                for j in 0..r {
                    let v = a.get(k, j);
                    if !v.is_zero() {
                        row.push((head * r + j, v.clone()));
                    }
                }
                for i in 1..=n {
                    let mut merged = Vec::with_capacity(n);
                    merged.extend_from_slice(&tuple[..i - 1]);
                    merged.push(g.mul(tuple[i - 1], tuple[i]));
                    merged.extend_from_slice(&tuple[i + 1..]);
                    if let Some(s) = tuples.encode(&merged) {
                        row.push((s * r + k, BigInt::from(if i % 2 == 0 { 1 } else { -1 })));
                    }
                }
                let last = if (n + 1) % 2 == 0 { 1 } else { -1 };
                row.push((tail * r + k, BigInt::from(last)));
                row
            })
            .collect()
    });
    dense(
        r * tuples.count(n + 1),
        r * tuples.count(n),
        entries.into_iter().flatten().collect(),
        false,
    )
}

/// `H^n(G; M)` for `n = 0..=max_degree` from the dual bar complex.
pub fn group_cohomology(g: &FinGroup, m: &ZGRep, max_degree: usize) -> Result<Vec<FGAbelianGroup>> {
    group_cohomology_with(g, m, max_degree, &BarOptions::default())
}

pub fn group_cohomology_with(
    g: &FinGroup,
    m: &ZGRep,
    max_degree: usize,
    opts: &BarOptions,
) -> Result<Vec<FGAbelianGroup>> {
    check_group(g, m)?;
    opts.limits.check_degree(max_degree)?;
    let tuples = check_sizes(g, m, max_degree + 1, opts, "bar coboundary")?;
    let degrees: Vec<usize> = (0..=max_degree).collect();
    let deltas = opts
        .exec
        .map(&degrees, |&n| coboundary(m, n, tuples, opts.exec));
    let inv = opts.exec.map(&deltas, |d| invariant_factors(d, opts.exec));
    Ok((0..=max_degree)
        .map(|n| {
            let incoming = if n == 0 { None } else { Some(&inv[n - 1]) };
            homology_from_invariants(m.rank() * tuples.count(n), Some(&inv[n]), incoming)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groups::rep::{augmentation_ideal, coinvariants, invariants};

    fn z(n: u64) -> FGAbelianGroup {
        FGAbelianGroup::cyclic(n)
    }

    fn zero() -> FGAbelianGroup {
        FGAbelianGroup::zero()
    }

    fn trivial_z(g: &FinGroup) -> ZGRep {
        ZGRep::trivial(Arc::new(g.clone()), 1)
    }

    /// Oracle: `H_n(C_m; M)` from the periodic resolution
    /// `M ←(t−1)− M ←N− M ←(t−1)− …`, with `t` the generator `1`.
    fn cyclic_oracle(m: &ZGRep, top: usize) -> Vec<FGAbelianGroup> {
        let g = m.group();
        let id = IntMatrix::identity(m.rank());
        let t_minus_one = m.action(1).sub(&id).unwrap();
        let mut norm = IntMatrix::zeros(m.rank(), m.rank());
        for h in g.elements() {
            norm = norm.add(m.action(h)).unwrap();
        }
        let boundaries: Vec<IntMatrix> = (1..=top + 1)
            .map(|n| if n % 2 == 1 { t_minus_one.clone() } else { norm.clone() })
            .collect();
        let c = ChainComplexZ::new(vec![m.rank(); top + 2], boundaries).unwrap();
        let mut h = c.homology_all(Exec::Sequential);
        h.truncate(top + 1);
        h
    }

    #[test]
    fn c2_trivial_coefficients() {
        let c2 = FinGroup::cyclic(2).unwrap();
        let h = group_homology(&c2, &trivial_z(&c2), 3).unwrap();
        assert_eq!(h, vec![FGAbelianGroup::free(1), z(2), zero(), z(2)]);
        let h = group_cohomology(&c2, &trivial_z(&c2), 3).unwrap();
        assert_eq!(h, vec![FGAbelianGroup::free(1), zero(), z(2), zero()]);
    }

    #[test]
    fn matches_periodic_resolution_for_cyclic_groups() {
        for n in 2..=5 {
            let g = FinGroup::cyclic(n).unwrap();
            let ga = Arc::new(g.clone());
            for m in [
                ZGRep::trivial(ga.clone(), 1),
                augmentation_ideal(ga.clone()),
                ZGRep::regular(ga.clone()),
            ] {
                let top = if n <= 3 { 3 } else { 2 };
                assert_eq!(group_homology(&g, &m, top).unwrap(), cyclic_oracle(&m, top), "C{n}");
            }
        }
    }

    #[test]
    fn normalized_and_unnormalized_agree() {
        for g in [
            FinGroup::cyclic(3).unwrap(),
            FinGroup::symmetric(3).unwrap(),
            FinGroup::cyclic(2).unwrap().product(&FinGroup::cyclic(2).unwrap()),
        ] {
            let ga = Arc::new(g.clone());
            for m in [ZGRep::trivial(ga.clone(), 1), augmentation_ideal(ga.clone())] {
                let a = group_homology_with(&g, &m, 2, &BarOptions::default()).unwrap();
                let b = group_homology_with(&g, &m, 2, &BarOptions::unnormalized()).unwrap();
                assert_eq!(a, b);
                let a = group_cohomology_with(&g, &m, 2, &BarOptions::default()).unwrap();
                let b = group_cohomology_with(&g, &m, 2, &BarOptions::unnormalized()).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn degree_zero_is_coinvariants_and_invariants() {
        let s3 = FinGroup::symmetric(3).unwrap();
        let ga = Arc::new(s3.clone());
        for m in [augmentation_ideal(ga.clone()), ZGRep::regular(ga.clone())] {
            assert_eq!(group_homology(&s3, &m, 0).unwrap()[0], coinvariants(&m));
            assert_eq!(group_cohomology(&s3, &m, 0).unwrap()[0], invariants(&m));
        }
    }

    #[test]
    fn s3_first_homology_is_abelianization() {
        let s3 = FinGroup::symmetric(3).unwrap();
        let h = group_homology(&s3, &trivial_z(&s3), 3).unwrap();
        assert_eq!(h[1], crate::groups::abelianize_group(&s3));
        assert_eq!(h[2], zero());
        assert_eq!(h[3], z(6));
    }

    #[test]
    fn first_cohomology_with_trivial_z_vanishes() {
        for g in [FinGroup::cyclic(4).unwrap(), FinGroup::quaternion()] {
            assert!(group_cohomology(&g, &trivial_z(&g), 1).unwrap()[1].is_zero());
        }
    }

    #[test]
    fn entry_cap_is_enforced() {
        let g = FinGroup::quaternion();
        let opts = BarOptions::default().with_limits(Limits::with_entry_cap(10));
        let err = group_homology_with(&g, &trivial_z(&g), 2, &opts).unwrap_err();
        assert!(err.is_size_cap());
    }

    #[test]
    fn wrong_group_is_rejected() {
        let g = FinGroup::cyclic(2).unwrap();
        let h = FinGroup::cyclic(3).unwrap();
        assert!(group_homology(&g, &trivial_z(&h), 1).is_err());
    }

    #[test]
    fn bar_homology_matches_closed_forms() {
        let groups = [
            FinGroup::cyclic(4).unwrap(),
            FinGroup::cyclic(2).unwrap().product(&FinGroup::cyclic(2).unwrap()),
            FinGroup::symmetric(3).unwrap(),
            FinGroup::dihedral(4).unwrap(),
            FinGroup::quaternion(),
        ];
        for g in groups {
            let h = group_homology(&g, &trivial_z(&g), 3).unwrap();
            for (n, hn) in h.iter().enumerate() {
                let oracle = crate::groups::closed_form_integral_homology(&g, n).unwrap();
                assert_eq!(*hn, oracle, "order {} degree {n}", g.order());
            }
        }
    }
}

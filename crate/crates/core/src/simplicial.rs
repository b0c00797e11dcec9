//! Simplicial modules over the integers, truncated at a top level `N`.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{QkError, Result};
use crate::exec::Exec;
use crate::groups::{bar_degeneracy, bar_face, FinGroup, Tuples, ZGRep};
use crate::linalg::{
    chain_homology, smith_normal_form, ChainComplexZ, FGAbelianGroup, IntMatrix, Limits,
};

/// `faces[n][i] = d_i: level n → level n−1` (with `faces[0]` empty) and
/// `degeneracies[n][i] = s_i: level n → level n+1` for `n < N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialZModule {
    levels: Vec<usize>,
    faces: Vec<Vec<IntMatrix>>,
    degeneracies: Vec<Vec<IntMatrix>>,
}

fn compose(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    a.mul(b).expect("shapes checked at construction")
}

impl SimplicialZModule {
    /// Checks shapes and every simplicial identity up to the top level.
    pub fn new(
        levels: Vec<usize>,
        faces: Vec<Vec<IntMatrix>>,
        degeneracies: Vec<Vec<IntMatrix>>,
    ) -> Result<Self> {
        let top = levels
            .len()
            .checked_sub(1)
            .ok_or_else(|| QkError::Dimension("a simplicial module needs level 0".into()))?;
        if faces.len() != top + 1 || degeneracies.len() != top {
            return Err(QkError::Dimension(format!(
                "top level {top} needs {} face lists and {top} degeneracy lists",
                top + 1
            )));
        }
        for n in 0..=top {
            let expected = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != expected {
                return Err(QkError::Dimension(format!(
                    "level {n} needs {expected} face maps, got {}",
                    faces[n].len()
                )));
            }
            for (i, d) in faces[n].iter().enumerate() {
                if d.rows() != levels[n - 1] || d.cols() != levels[n] {
                    return Err(QkError::Dimension(format!(
                        "d_{i} on level {n} is {}x{}, expected {}x{}",
                        d.rows(),
                        d.cols(),
                        levels[n - 1],
                        levels[n]
                    )));
                }
            }
        }
        for n in 0..top {
            if degeneracies[n].len() != n + 1 {
                return Err(QkError::Dimension(format!(
                    "level {n} needs {} degeneracies, got {}",
                    n + 1,
                    degeneracies[n].len()
                )));
            }
            for (i, s) in degeneracies[n].iter().enumerate() {
                if s.rows() != levels[n + 1] || s.cols() != levels[n] {
                    return Err(QkError::Dimension(format!(
                        "s_{i} on level {n} is {}x{}, expected {}x{}",
                        s.rows(),
                        s.cols(),
                        levels[n + 1],
                        levels[n]
                    )));
                }
            }
        }
        let s = SimplicialZModule {
            levels,
            faces,
            degeneracies,
        };
        s.check_identities()?;
        Ok(s)
    }

    fn check_identities(&self) -> Result<()> {
        let top = self.top_level();
        let fail = |msg: String| Err(QkError::SimplicialIdentity(msg));
        let d = |n: usize, i: usize| &self.faces[n][i];
        let s = |n: usize, i: usize| &self.degeneracies[n][i];
        // d_i d_j = d_{j−1} d_i for i < j, on level n ≥ 2
        for n in 2..=top {
            for j in 0..=n {
                for i in 0..j {
                    if compose(d(n - 1, i), d(n, j)) != compose(d(n - 1, j - 1), d(n, i)) {
                        return fail(format!("d_{i} d_{j} != d_{} d_{i} on level {n}", j - 1));
                    }
                }
            }
        }
        // d_i s_j on level n (s_j: n → n+1, d_i: n+1 → n)
        for n in 0..top {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = compose(d(n + 1, i), s(n, j));
                    let ok = if i < j {
                        lhs == compose(s(n - 1, j - 1), d(n, i))
                    } else if i == j || i == j + 1 {
                        lhs == IntMatrix::identity(self.levels[n])
                    } else {
                        lhs == compose(s(n - 1, j), d(n, i - 1))
                    };
                    if !ok {
                        return fail(format!("d_{i} s_{j} identity fails on level {n}"));
                    }
                }
            }
        }
        // s_i s_j = s_{j+1} s_i for i ≤ j, on level n with n + 2 ≤ top
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    if compose(s(n + 1, i), s(n, j)) != compose(s(n + 1, j + 1), s(n, i)) {
                        return fail(format!("s_{i} s_{j} != s_{} s_{i} on level {n}", j + 1));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn face(&self, n: usize, i: usize) -> &IntMatrix {
        &self.faces[n][i]
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> &IntMatrix {
        &self.degeneracies[n][i]
    }

    /// The constant simplicial module on `Z^rank`: every face and
    /// degeneracy is the identity.
    pub fn constant(rank: usize, top: usize) -> Self {
        let id = IntMatrix::identity(rank);
        SimplicialZModule {
            levels: vec![rank; top + 1],
            faces: (0..=top)
                .map(|n| vec![id.clone(); if n == 0 { 0 } else { n + 1 }])
                .collect(),
            degeneracies: (0..top).map(|n| vec![id.clone(); n + 1]).collect(),
        }
    }

    pub fn direct_sum(&self, other: &SimplicialZModule) -> Result<Self> {
        if self.top_level() != other.top_level() {
            return Err(QkError::Dimension("direct sum needs equal truncation levels".into()));
        }
        let sum = |a: &[Vec<IntMatrix>], b: &[Vec<IntMatrix>]| -> Vec<Vec<IntMatrix>> {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.direct_sum(q)).collect())
                .collect()
        };
        Ok(SimplicialZModule {
            levels: self.levels.iter().zip(&other.levels).map(|(a, b)| a + b).collect(),
            faces: sum(&self.faces, &other.faces),
            degeneracies: sum(&self.degeneracies, &other.degeneracies),
        })
    }

    /// Keeps levels `0..=top`.
    pub fn truncate(&self, top: usize) -> Result<Self> {
        if top > self.top_level() {
            return Err(QkError::DegreeOutOfRange {
                degree: top,
                valid: format!("0..={}", self.top_level()),
            });
        }
        Ok(SimplicialZModule {
            levels: self.levels[..=top].to_vec(),
            faces: self.faces[..=top].to_vec(),
            degeneracies: self.degeneracies[..top].to_vec(),
        })
    }

    /// Conjugates level `n` by the unimodular `(P_n, P_n⁻¹)`.
    pub fn change_basis(&self, bases: &[(IntMatrix, IntMatrix)]) -> Result<Self> {
        if bases.len() != self.levels.len() {
            return Err(QkError::Dimension("one basis change per level".into()));
        }
        let faces = self
            .faces
            .iter()
            .enumerate()
            .map(|(n, ds)| {
                ds.iter()
                    .map(|d| bases[n - 1].0.mul(d)?.mul(&bases[n].1))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let degeneracies = self
            .degeneracies
            .iter()
            .enumerate()
            .map(|(n, ss)| {
                ss.iter()
                    .map(|s| bases[n + 1].0.mul(s)?.mul(&bases[n].1))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.levels.clone(), faces, degeneracies)
    }
}

/// Normalized (Moore) complex: `N_n = ∩_{i≥1} ker d_i` with boundary `d_0`,
/// written in an integer basis of each intersection.
pub fn moore_complex(s: &SimplicialZModule) -> ChainComplexZ {
    let top = s.top_level();
    // (basis as columns, coordinate map: rows giving coordinates in that basis)
    let bases: Vec<(IntMatrix, IntMatrix)> = (0..=top)
        .map(|n| {
            if n == 0 {
                let id = IntMatrix::identity(s.levels[0]);
                return (id.clone(), id);
            }
            let stacked = IntMatrix::vstack(&s.faces[n][1..], s.levels[n]).expect("same level");
            let snf = smith_normal_form(&stacked);
            let keep: Vec<usize> = (snf.rank..s.levels[n]).collect();
            (snf.v.select_columns(&keep), snf.v_inv.select_rows(&keep))
        })
        .collect();
    let boundaries = (1..=top)
        .map(|n| {
            let image = compose(&s.faces[n][0], &bases[n].0);
            compose(&bases[n - 1].1, &image)
        })
        .collect();
    ChainComplexZ::new(bases.iter().map(|b| b.0.cols()).collect(), boundaries)
        .expect("the Moore complex of a simplicial module is a complex")
}

/// Unnormalized complex with `∂_n = Σ (−1)^i d_i`.
pub fn alternating_sum_complex(s: &SimplicialZModule) -> ChainComplexZ {
    let boundaries = (1..=s.top_level())
        .map(|n| {
            let mut acc = IntMatrix::zeros(s.levels[n - 1], s.levels[n]);
            for (i, d) in s.faces[n].iter().enumerate() {
                acc = if i % 2 == 0 { acc.add(d) } else { acc.sub(d) }.expect("same shape");
            }
            acc
        })
        .collect();
    ChainComplexZ::new(s.levels.clone(), boundaries)
        .expect("the alternating face sum of a simplicial module squares to zero")
}

/// `π_n(s) = H_n` of the Moore complex, for `n ≤ N − 1`.
pub fn simplicial_pi(s: &SimplicialZModule, n: usize) -> Result<FGAbelianGroup> {
    let top = s.top_level();
    if n + 1 > top {
        return Err(QkError::DegreeOutOfRange {
            degree: n,
            valid: format!("0..={} (the top level {top} is not trustworthy)", top as i64 - 1),
        });
    }
    chain_homology(&moore_complex(s), n)
}

/// The bar construction `[n] ↦ M ⊗ Z[G^n]` as a simplicial module.
pub fn bar_simplicial(g: &FinGroup, m: &ZGRep, top: usize, limits: &Limits) -> Result<SimplicialZModule> {
    if **m.group() != *g {
        return Err(QkError::InvalidRepresentation(
            "coefficient module is a representation of a different group".into(),
        ));
    }
    limits.check_group_order(g.order())?;
    let tuples = Tuples::new(g.order(), false);
    let r = m.rank() as u128;
    for n in 1..=top {
        let size = r * (g.order() as u128).saturating_pow(n as u32);
        limits.check_entries(&format!("bar face in degree {n}"), size / g.order() as u128, size)?;
    }
    let exec = Exec::default();
    let levels = (0..=top).map(|n| m.rank() * tuples.count(n)).collect();
    let faces = (0..=top)
        .map(|n| {
            if n == 0 {
                Vec::new()
            } else {
                (0..=n).map(|i| bar_face(m, n, i, tuples, exec)).collect()
            }
        })
        .collect();
    let degeneracies = (0..top)
        .map(|n| (0..=n).map(|i| bar_degeneracy(m, n, i, exec)).collect())
        .collect();
    SimplicialZModule::new(levels, faces, degeneracies)
}

/// Surjections `[n] ↠ [k]` as nondecreasing sequences starting at 0 with
/// unit steps, ordered by `k` then lexicographically.
fn surjections(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..1usize << n)
        .map(|mask| {
            let mut seq = vec![0];
            for bit in (0..n).rev() {
                let step = (mask >> bit) & 1;
                seq.push(seq.last().unwrap() + step);
            }
            seq
        })
        .collect();
    out.sort_by_key(|s| (*s.last().unwrap(), s.clone()));
    out
}

/// Dold–Kan `Γ(C)_n = ⊕_{σ: [n] ↠ [k]} C_k`, truncated at the top degree
/// of `c`. The Moore complex of the result is isomorphic to `c`.
pub fn dold_kan_gamma(c: &ChainComplexZ) -> Result<SimplicialZModule> {
    let top = c.top_degree();
    let summands: Vec<Vec<Vec<usize>>> = (0..=top)
        .map(|n| {
            surjections(n)
                .into_iter()
                .filter(|s| *s.last().unwrap() <= top)
                .collect()
        })
        .collect();
    let offsets: Vec<Vec<usize>> = summands
        .iter()
        .map(|list| {
            let mut acc = 0;
            list.iter()
                .map(|s| {
                    let o = acc;
                    acc += c.rank(*s.last().unwrap());
                    o
                })
                .collect()
        })
        .collect();
    let levels: Vec<usize> = summands
        .iter()
        .map(|list| list.iter().map(|s| c.rank(*s.last().unwrap())).sum())
        .collect();
    let position = |n: usize, seq: &[usize]| -> usize {
        let idx = summands[n]
            .iter()
            .position(|s| s == seq)
            .expect("surjection is enumerated");
        offsets[n][idx]
    };
    // (θ^*) on level n for a map θ: [m] → [n] given as its value sequence
    let operator = |n: usize, m: usize, theta: &[usize]| -> IntMatrix {
        let mut out = IntMatrix::zeros(levels[m], levels[n]);
        for (idx, sigma) in summands[n].iter().enumerate() {
            let k = *sigma.last().unwrap();
            let comp: Vec<usize> = theta.iter().map(|&t| sigma[t]).collect();
            let mut image: Vec<usize> = comp.clone();
            image.dedup();
            let src = offsets[n][idx];
            if image.len() == k + 1 {
                let dst = position(m, &comp);
                for a in 0..c.rank(k) {
                    out.set(dst + a, src + a, BigInt::one());
                }
            } else if image.len() == k && image[0] == 1 {
                let eps: Vec<usize> = comp.iter().map(|&x| x - 1).collect();
                let dst = position(m, &eps);
                let del = c.boundary(k);
                for row in 0..c.rank(k - 1) {
                    for col in 0..c.rank(k) {
                        out.set(dst + row, src + col, del.get(row, col).clone());
                    }
                }
            }
        }
        out
    };
    let faces = (0..=top)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n)
                .map(|i| {
                    let delta: Vec<usize> = (0..=n).filter(|&x| x != i).collect();
                    operator(n, n - 1, &delta)
                })
                .collect()
        })
        .collect();
    let degeneracies = (0..top)
        .map(|n| {
            (0..=n)
                .map(|i| {
                    let sigma: Vec<usize> = (0..=n + 1).map(|x| if x <= i { x } else { x - 1 }).collect();
                    operator(n, n + 1, &sigma)
                })
                .collect()
        })
        .collect();
    SimplicialZModule::new(levels, faces, degeneracies)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groups::{augmentation_ideal, FinGroup};

    #[test]
    fn constant_module() {
        let s = SimplicialZModule::constant(2, 4);
        assert_eq!(simplicial_pi(&s, 0).unwrap(), FGAbelianGroup::free(2));
        for n in 1..=3 {
            assert!(simplicial_pi(&s, n).unwrap().is_zero());
        }
        assert!(simplicial_pi(&s, 4).is_err());
        let alt = alternating_sum_complex(&s);
        assert!(alt.boundary(1).is_zero());
        assert_eq!(*alt.boundary(2), IntMatrix::identity(2));
        assert!(alt.boundary(3).is_zero());
    }

    #[test]
    fn rank_one_two_levels() {
        let id = IntMatrix::identity(1);
        let s = SimplicialZModule::new(vec![1, 1], vec![vec![], vec![id.clone(), id.clone()]], vec![vec![id]])
            .unwrap();
        let h = alternating_sum_complex(&s).homology_all(Exec::Sequential);
        assert_eq!(h[0], FGAbelianGroup::free(1));
    }

    #[test]
    fn rejects_broken_identities() {
        let id = IntMatrix::identity(1);
        let two = IntMatrix::from_rows(&[[2]]);
        let err = SimplicialZModule::new(vec![1, 1], vec![vec![], vec![id.clone(), two]], vec![vec![id]])
            .unwrap_err();
        assert!(matches!(err, QkError::SimplicialIdentity(_)));
    }

    #[test]
    fn bar_construction_of_c2_and_c3() {
        let c2 = FinGroup::cyclic(2).unwrap();
        let z = ZGRep::trivial(Arc::new(c2.clone()), 1);
        let s = bar_simplicial(&c2, &z, 4, &Limits::default()).unwrap();
        assert_eq!(simplicial_pi(&s, 1).unwrap(), FGAbelianGroup::cyclic(2));
        assert!(simplicial_pi(&s, 2).unwrap().is_zero());
        assert_eq!(simplicial_pi(&s, 3).unwrap(), FGAbelianGroup::cyclic(2));

        let c3 = FinGroup::cyclic(3).unwrap();
        let z = ZGRep::trivial(Arc::new(c3.clone()), 1);
        let s = bar_simplicial(&c3, &z, 3, &Limits::default()).unwrap();
        assert_eq!(simplicial_pi(&s, 1).unwrap(), FGAbelianGroup::cyclic(3));
    }

    #[test]
    fn moore_equals_alternating_on_bar_constructions() {
        let s3 = FinGroup::symmetric(3).unwrap();
        let i = augmentation_ideal(Arc::new(s3.clone()));
        let s = bar_simplicial(&s3, &i, 3, &Limits::default()).unwrap();
        let a = moore_complex(&s).homology_all(Exec::Sequential);
        let b = alternating_sum_complex(&s).homology_all(Exec::Sequential);
        assert_eq!(a[..3], b[..3]);
    }

    #[test]
    fn degenerate_everywhere_is_concentrated_in_degree_zero() {
        let s = SimplicialZModule::constant(3, 3);
        let m = moore_complex(&s);
        assert_eq!(m.ranks(), &[3, 0, 0, 0]);
    }

    #[test]
    fn direct_sum_adds_homotopy() {
        let c2 = FinGroup::cyclic(2).unwrap();
        let z = ZGRep::trivial(Arc::new(c2.clone()), 1);
        let bar = bar_simplicial(&c2, &z, 3, &Limits::default()).unwrap();
        let sum = bar.direct_sum(&SimplicialZModule::constant(1, 3)).unwrap();
        for n in 0..=2 {
            let expected = simplicial_pi(&bar, n)
                .unwrap()
                .direct_sum(&simplicial_pi(&SimplicialZModule::constant(1, 3), n).unwrap());
            assert_eq!(simplicial_pi(&sum, n).unwrap(), expected);
        }
    }

    #[test]
    fn truncation_is_stable() {
        let c3 = FinGroup::cyclic(3).unwrap();
        let z = ZGRep::trivial(Arc::new(c3.clone()), 1);
        let bar = bar_simplicial(&c3, &z, 4, &Limits::default()).unwrap();
        let small = bar.truncate(2).unwrap();
        assert_eq!(simplicial_pi(&bar, 1).unwrap(), simplicial_pi(&small, 1).unwrap());
    }

    #[test]
    fn gamma_recovers_the_complex() {
        let c = ChainComplexZ::new(
            vec![1, 2, 1],
            vec![IntMatrix::from_rows(&[[2, 0]]), IntMatrix::from_rows(&[[0], [3]])],
        )
        .unwrap();
        let g = dold_kan_gamma(&c).unwrap();
        assert_eq!(g.levels(), &[1, 3, 6]);
        let expected = c.homology_all(Exec::Sequential);
        let moore = moore_complex(&g).homology_all(Exec::Sequential);
        assert_eq!(moore, expected);
        // the unnormalized top degree also sees degenerate cycles
        let alt = alternating_sum_complex(&g).homology_all(Exec::Sequential);
        assert_eq!(alt[..2], expected[..2]);
    }
}

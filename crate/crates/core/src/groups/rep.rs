use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::group::{FinGroup, GroupHom};
use crate::error::{QkError, Result};
use crate::exec::Exec;
use crate::linalg::{smith_normal_form, FGAbelianGroup, IntMatrix};

/// An integral representation: `Z^rank` with a left `G`-action by integer
/// matrices acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZGRep {
    group: Arc<FinGroup>,
    rank: usize,
    action: Vec<IntMatrix>,
}

impl ZGRep {
    /// Checks unit and multiplicativity. Invertibility over `Z` follows from
    /// `action(g) action(g⁻¹) = action(e) = I`.
    pub fn new(group: Arc<FinGroup>, rank: usize, action: Vec<IntMatrix>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(QkError::InvalidRepresentation(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        if let Some(g) = action.iter().position(|a| a.rows() != rank || a.cols() != rank) {
            return Err(QkError::InvalidRepresentation(format!(
                "action of element {g} is not {rank}x{rank}"
            )));
        }
        if action[0] != IntMatrix::identity(rank) {
            return Err(QkError::InvalidRepresentation(
                "identity element does not act trivially".into(),
            ));
        }
        for g in group.elements() {
            for h in group.elements() {
                if action[g].mul(&action[h])? != action[group.mul(g, h)] {
                    return Err(QkError::InvalidRepresentation(format!(
                        "action({g}) action({h}) != action({g}*{h})"
                    )));
                }
            }
        }
        Ok(ZGRep {
            group,
            rank,
            action,
        })
    }

    pub fn trivial(group: Arc<FinGroup>, rank: usize) -> Self {
        let action = vec![IntMatrix::identity(rank); group.order()];
        ZGRep {
            group,
            rank,
            action,
        }
    }

    /// `ZG` with basis the group elements; `h · e_x = e_{hx}`.
    pub fn regular(group: Arc<FinGroup>) -> Self {
        let n = group.order();
        let action = group
            .elements()
            .map(|h| {
                let mut m = IntMatrix::zeros(n, n);
                for x in group.elements() {
                    m.set(group.mul(h, x), x, BigInt::one());
                }
                m
            })
            .collect();
        ZGRep {
            group,
            rank: n,
            action,
        }
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    pub fn direct_sum(&self, other: &ZGRep) -> Result<ZGRep> {
        if self.group != other.group {
            return Err(QkError::InvalidRepresentation(
                "direct sum of representations of different groups".into(),
            ));
        }
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Ok(ZGRep {
            group: self.group.clone(),
            rank: self.rank + other.rank,
            action,
        })
    }

    /// Conjugate by a unimodular change of basis `p` (with inverse `p_inv`).
    pub fn change_basis(&self, p: &IntMatrix, p_inv: &IntMatrix) -> Result<ZGRep> {
        let action = self
            .action
            .iter()
            .map(|a| p.mul(a)?.mul(p_inv))
            .collect::<Result<Vec<_>>>()?;
        ZGRep::new(self.group.clone(), self.rank, action)
    }

    pub fn is_trivial_action(&self) -> bool {
        self.action.iter().all(|a| *a == IntMatrix::identity(self.rank))
    }

    pub fn character(&self) -> Vec<BigInt> {
        self.action
            .iter()
            .map(|a| (0..self.rank).map(|i| a.get(i, i).clone()).sum())
            .collect()
    }

    /// The matrix `[a(g_1) - I | a(g_2) - I | …]` over nonidentity `g`,
    /// whose image is `⟨m − g·m⟩`.
    pub fn coinvariant_relations(&self) -> IntMatrix {
        let id = IntMatrix::identity(self.rank);
        let parts: Vec<IntMatrix> = self.action[1..]
            .iter()
            .map(|a| a.sub(&id).expect("square"))
            .collect();
        IntMatrix::hstack(&parts, self.rank).expect("equal rows")
    }

    /// Lattice of invariants `M^G`, as the columns of the returned matrix.
    pub fn invariants_basis(&self) -> IntMatrix {
        let id = IntMatrix::identity(self.rank);
        let parts: Vec<IntMatrix> = self.action[1..]
            .iter()
            .map(|a| a.sub(&id).expect("square"))
            .collect();
        if parts.is_empty() {
            return id;
        }
        let stacked = IntMatrix::vstack(&parts, self.rank).expect("equal cols");
        smith_normal_form(&stacked).kernel_basis()
    }
}

/// `Z^{n-1}` with basis `{g − e : g ≠ e}` inside `ZG`:
/// `h·(g − e) = (hg − e) − (h − e)`.
pub fn augmentation_ideal(group: Arc<FinGroup>) -> ZGRep {
    let n = group.order();
    let r = n - 1;
    // basis index of g − e is g − 1
    let action = group
        .elements()
        .map(|h| {
            let mut m = IntMatrix::zeros(r, r);
            for g in 1..n {
                let hg = group.mul(h, g);
                if hg != 0 {
                    *m.get_mut(hg - 1, g - 1) += 1;
                }
                if h != 0 {
                    *m.get_mut(h - 1, g - 1) -= 1;
                }
            }
            m
        })
        .collect();
    ZGRep {
        group,
        rank: r,
        action,
    }
}

/// `M_G = M / ⟨m − g·m⟩`.
pub fn coinvariants(m: &ZGRep) -> FGAbelianGroup {
    if m.group.order() == 1 {
        return FGAbelianGroup::free(m.rank);
    }
    FGAbelianGroup::cokernel(&m.coinvariant_relations(), Exec::Sequential)
}

/// `M^G`, always free.
pub fn invariants(m: &ZGRep) -> FGAbelianGroup {
    FGAbelianGroup::free(m.invariants_basis().cols())
}

/// Restriction along `f: G → H`: same lattice, `g` acts as `f(g)`.
pub fn pullback_module(f: &GroupHom, n: &ZGRep) -> Result<ZGRep> {
    if **f.target() != *n.group {
        return Err(QkError::NotHomomorphism(
            "the representation lives over a different group than the target of f".into(),
        ));
    }
    let action = f
        .source()
        .elements()
        .map(|g| n.action[f.apply(g)].clone())
        .collect();
    Ok(ZGRep {
        group: f.source().clone(),
        rank: n.rank,
        action,
    })
}

/// `ZH ⊗_{ZG} M`. The underlying abelian group is always reported; the
/// `H`-lattice is present when that group is torsion-free.
#[derive(Clone, Debug)]
pub struct InducedModule {
    pub underlying: FGAbelianGroup,
    pub lattice: Option<ZGRep>,
}

pub fn pushforward_module(f: &GroupHom, m: &ZGRep) -> Result<InducedModule> {
    if **f.source() != *m.group {
        return Err(QkError::NotHomomorphism(
            "the representation lives over a different group than the source of f".into(),
        ));
    }
    let h_group = f.target().clone();
    let (nh, r) = (h_group.order(), m.rank);
    let g_group = m.group.clone();
    let gen = |h: usize, j: usize| h * r + j;
    // relation h f(g) ⊗ m_j − h ⊗ g m_j
    let mut rel = IntMatrix::zeros(nh * r, nh * g_group.order() * r);
    let mut col = 0;
    for h in h_group.elements() {
        for g in g_group.elements() {
            let hfg = h_group.mul(h, f.apply(g));
            for j in 0..r {
                *rel.get_mut(gen(hfg, j), col) += 1;
                for k in 0..r {
                    let a = m.action[g].get(k, j);
                    if !a.is_zero() {
                        *rel.get_mut(gen(h, k), col) -= a;
                    }
                }
                col += 1;
            }
        }
    }
    let snf = smith_normal_form(&rel);
    let orders: Vec<BigInt> = snf.diagonal();
    let free = nh * r - snf.rank;
    let underlying = FGAbelianGroup::from_cyclic_orders(free, &orders);
    if !underlying.is_torsion_free() {
        return Ok(InducedModule {
            underlying,
            lattice: None,
        });
    }
    let keep: Vec<usize> = (snf.rank..nh * r).collect();
    let quotient = snf.u.select_rows(&keep);
    let section = snf.u_inv.select_columns(&keep);
    let action = h_group
        .elements()
        .map(|h2| {
            let mut perm = IntMatrix::zeros(nh * r, nh * r);
            for h in h_group.elements() {
                for j in 0..r {
                    perm.set(gen(h_group.mul(h2, h), j), gen(h, j), BigInt::one());
                }
            }
            quotient.mul(&perm)?.mul(&section)
        })
        .collect::<Result<Vec<_>>>()?;
    let lattice = ZGRep::new(h_group, free, action)?;
    Ok(InducedModule {
        underlying,
        lattice: Some(lattice),
    })
}

/// A `ZG`-linear map between lattices, `matrix: Z^{source} → Z^{target}`.
#[derive(Clone, Debug)]
pub struct EquivariantMap {
    pub source: ZGRep,
    pub target: ZGRep,
    pub matrix: IntMatrix,
}

impl EquivariantMap {
    pub fn new(source: ZGRep, target: ZGRep, matrix: IntMatrix) -> Result<Self> {
        if source.group != target.group {
            return Err(QkError::NotEquivariant("representations of different groups".into()));
        }
        if matrix.rows() != target.rank || matrix.cols() != source.rank {
            return Err(QkError::Dimension(format!(
                "map is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank,
                source.rank
            )));
        }
        for g in source.group.elements() {
            if matrix.mul(&source.action[g])? != target.action[g].mul(&matrix)? {
                return Err(QkError::NotEquivariant(format!(
                    "f(g·m) != g·f(m) for element {g}"
                )));
            }
        }
        Ok(EquivariantMap {
            source,
            target,
            matrix,
        })
    }

    /// `Σ_g g·X·g⁻¹`, which is always equivariant.
    pub fn averaged(source: ZGRep, target: ZGRep, x: &IntMatrix) -> Result<Self> {
        let g = source.group.clone();
        let mut acc = IntMatrix::zeros(target.rank, source.rank);
        for h in g.elements() {
            let term = target.action[h].mul(x)?.mul(&source.action[g.inv(h)])?;
            acc = acc.add(&term)?;
        }
        Self::new(source, target, acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::group::FinGroup;

    fn arc(g: FinGroup) -> Arc<FinGroup> {
        Arc::new(g)
    }

    #[test]
    fn augmentation_of_trivial_group_is_zero() {
        assert_eq!(augmentation_ideal(arc(FinGroup::trivial())).rank(), 0);
    }

    #[test]
    fn augmentation_of_c2_is_sign() {
        let i = augmentation_ideal(arc(FinGroup::cyclic(2).unwrap()));
        assert_eq!(i.rank(), 1);
        assert_eq!(*i.action(1), IntMatrix::from_rows(&[[-1]]));
    }

    #[test]
    fn augmentation_of_c3_by_direct_expansion() {
        // g(g−e) = (g²−e) − (g−e);  g(g²−e) = e − g = −(g−e)
        let i = augmentation_ideal(arc(FinGroup::cyclic(3).unwrap()));
        assert_eq!(*i.action(1), IntMatrix::from_rows(&[[-1, -1], [1, 0]]));
        // the transpose-inverse matrix [[0,-1],[1,-1]] is similar: same order and trace
        let alt = IntMatrix::from_rows(&[[0, -1], [1, -1]]);
        let cube = alt.mul(&alt).unwrap().mul(&alt).unwrap();
        assert_eq!(cube, IntMatrix::identity(2));
        assert_eq!(i.character()[1], BigInt::from(-1));
    }

    #[test]
    fn augmentation_is_a_valid_representation() {
        for g in [FinGroup::symmetric(3).unwrap(), FinGroup::quaternion()] {
            let i = augmentation_ideal(arc(g));
            assert!(ZGRep::new(i.group().clone(), i.rank(), i.actions().to_vec()).is_ok());
        }
    }

    #[test]
    fn coinvariant_examples() {
        let c2 = arc(FinGroup::cyclic(2).unwrap());
        assert_eq!(coinvariants(&ZGRep::trivial(c2.clone(), 3)), FGAbelianGroup::free(3));
        assert_eq!(coinvariants(&ZGRep::regular(c2.clone())), FGAbelianGroup::free(1));
        assert_eq!(coinvariants(&augmentation_ideal(c2)), FGAbelianGroup::cyclic(2));
    }

    #[test]
    fn invariants_of_regular_rep() {
        let s3 = arc(FinGroup::symmetric(3).unwrap());
        assert_eq!(invariants(&ZGRep::regular(s3.clone())), FGAbelianGroup::free(1));
        assert!(invariants(&augmentation_ideal(s3)).is_zero());
    }

    #[test]
    fn rejects_non_representations() {
        let c2 = arc(FinGroup::cyclic(2).unwrap());
        let bad = vec![IntMatrix::identity(1), IntMatrix::from_rows(&[[2]])];
        assert!(ZGRep::new(c2, 1, bad).is_err());
    }

    #[test]
    fn pullback_examples() {
        let c2 = arc(FinGroup::cyclic(2).unwrap());
        let c4 = arc(FinGroup::cyclic(4).unwrap());
        let id = GroupHom::identity(c4.clone());
        let i4 = augmentation_ideal(c4.clone());
        assert_eq!(pullback_module(&id, &i4).unwrap(), i4);

        let incl = GroupHom::new(c2.clone(), c4.clone(), vec![0, 2]).unwrap();
        let restricted = pullback_module(&incl, &i4).unwrap();
        assert_eq!(restricted.rank(), 3);
        assert_eq!(restricted.action(1), i4.action(2));

        let triv = GroupHom::to_trivial(c2.clone());
        let n = ZGRep::trivial(triv.target().clone(), 2);
        assert!(pullback_module(&triv, &n).unwrap().is_trivial_action());
    }

    #[test]
    fn pullback_is_functorial() {
        let c2 = arc(FinGroup::cyclic(2).unwrap());
        let c4 = arc(FinGroup::cyclic(4).unwrap());
        let c8 = arc(FinGroup::cyclic(8).unwrap());
        let f = GroupHom::new(c2.clone(), c4.clone(), vec![0, 2]).unwrap();
        let g = GroupHom::new(c4, c8.clone(), vec![0, 2, 4, 6]).unwrap();
        let n = augmentation_ideal(c8);
        let composite = pullback_module(&g.after(&f).unwrap(), &n).unwrap();
        let stepwise = pullback_module(&f, &pullback_module(&g, &n).unwrap()).unwrap();
        assert_eq!(composite, stepwise);
    }

    #[test]
    fn pushforward_to_trivial_is_coinvariants() {
        let c2 = arc(FinGroup::cyclic(2).unwrap());
        let i = augmentation_ideal(c2.clone());
        let out = pushforward_module(&GroupHom::to_trivial(c2), &i).unwrap();
        assert_eq!(out.underlying, FGAbelianGroup::cyclic(2));
        assert!(out.lattice.is_none());
    }

    #[test]
    fn pushforward_along_inclusion_induces() {
        let c2 = arc(FinGroup::cyclic(2).unwrap());
        let c4 = arc(FinGroup::cyclic(4).unwrap());
        let incl = GroupHom::new(c2.clone(), c4.clone(), vec![0, 2]).unwrap();
        let out = pushforward_module(&incl, &ZGRep::regular(c2)).unwrap();
        let lattice = out.lattice.unwrap();
        assert_eq!(lattice.rank(), 4);
        // induced from the regular rep is the regular rep: character |G| at e, 0 elsewhere
        assert_eq!(lattice.character(), ZGRep::regular(c4).character());
    }

    #[test]
    fn pushforward_along_identity() {
        let s3 = arc(FinGroup::symmetric(3).unwrap());
        let i = augmentation_ideal(s3.clone());
        let out = pushforward_module(&GroupHom::identity(s3), &i).unwrap();
        let lattice = out.lattice.unwrap();
        assert_eq!(lattice.rank(), i.rank());
        assert_eq!(lattice.character(), i.character());
        assert_eq!(coinvariants(&lattice), coinvariants(&i));
    }

    #[test]
    fn averaged_maps_are_equivariant() {
        let c3 = arc(FinGroup::cyclic(3).unwrap());
        let reg = ZGRep::regular(c3.clone());
        let triv = ZGRep::trivial(c3, 1);
        let x = IntMatrix::from_rows(&[[1, 0, 2]]);
        let f = EquivariantMap::averaged(reg, triv, &x).unwrap();
        assert_eq!(f.matrix, IntMatrix::from_rows(&[[3, 3, 3]]));
    }
}

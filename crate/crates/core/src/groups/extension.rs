use std::sync::Arc;

use super::group::{abelianize_group, FinGroup, GroupHom};
use crate::error::{QkError, Result};
use crate::exec::Exec;
use crate::linalg::{FGAbelianGroup, IntMatrix};

/// `G ⋉ M` for a finite abelian `M` with a `G`-action by automorphisms.
///
/// Element `(g, m)` has index `g * |M| + m` and
/// `(g, m)(g', m') = (gg', m + g·m')`.
#[derive(Clone, Debug)]
pub struct SplitExtensionGrp {
    base: Arc<FinGroup>,
    fiber: Arc<FinGroup>,
    action: Vec<Vec<usize>>,
    total: Arc<FinGroup>,
}

impl SplitExtensionGrp {
    /// `action[g][m] = g·m`. Checks that `M` is abelian, each `action[g]` is
    /// an automorphism, and `g ↦ action[g]` is a homomorphism.
    pub fn new(base: Arc<FinGroup>, fiber: Arc<FinGroup>, action: Vec<Vec<usize>>) -> Result<Self> {
        if !fiber.is_abelian() {
            return Err(QkError::GroupAxiom("the fiber of a split extension must be abelian".into()));
        }
        if action.len() != base.order() || action.iter().any(|a| a.len() != fiber.order()) {
            return Err(QkError::Dimension("action must list g·m for every g and m".into()));
        }
        for g in base.elements() {
            GroupHom::new(fiber.clone(), fiber.clone(), action[g].clone())
                .and_then(|h| {
                    if h.is_injective() {
                        Ok(())
                    } else {
                        Err(QkError::NotHomomorphism("not injective".into()))
                    }
                })
                .map_err(|e| {
                    QkError::NotHomomorphism(format!("element {g} does not act by an automorphism: {e}"))
                })?;
            for h in base.elements() {
                for m in fiber.elements() {
                    if action[base.mul(g, h)][m] != action[g][action[h][m]] {
                        return Err(QkError::NotHomomorphism(format!(
                            "({g}*{h})·{m} != {g}·({h}·{m})"
                        )));
                    }
                }
            }
        }
        let nm = fiber.order();
        let total = FinGroup::from_fn(base.order() * nm, |x, y| {
            let (g, m) = (x / nm, x % nm);
            let (g2, m2) = (y / nm, y % nm);
            base.mul(g, g2) * nm + fiber.mul(m, action[g][m2])
        })?;
        let e = SplitExtensionGrp {
            base,
            fiber,
            action,
            total: Arc::new(total),
        };
        e.verify_law()?;
        e.projection()?.after(&e.section()?).and_then(|c| {
            if c == GroupHom::identity(e.base.clone()) {
                Ok(())
            } else {
                Err(QkError::NotHomomorphism("projection ∘ section != id".into()))
            }
        })?;
        Ok(e)
    }

    pub fn from_fn(
        base: Arc<FinGroup>,
        fiber: Arc<FinGroup>,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let action = base
            .elements()
            .map(|g| fiber.elements().map(|m| f(g, m)).collect())
            .collect();
        Self::new(base, fiber, action)
    }

    /// Trivial action.
    pub fn direct_product(base: Arc<FinGroup>, fiber: Arc<FinGroup>) -> Result<Self> {
        Self::from_fn(base, fiber, |_, m| m)
    }

    /// `C_k ⋉ C_n` with the generator acting by `m ↦ u·m mod n`.
    pub fn cyclic_by_unit(k: usize, n: usize, u: usize) -> Result<Self> {
        let base = Arc::new(FinGroup::cyclic(k)?);
        let fiber = Arc::new(FinGroup::cyclic(n)?);
        let n_ = n.max(1);
        Self::from_fn(base, fiber, |g, m| {
            let mut x = m;
            for _ in 0..g {
                x = (x * u) % n_;
            }
            x
        })
    }

    pub fn base(&self) -> &Arc<FinGroup> {
        &self.base
    }

    pub fn fiber(&self) -> &Arc<FinGroup> {
        &self.fiber
    }

    pub fn total(&self) -> &Arc<FinGroup> {
        &self.total
    }

    pub fn act(&self, g: usize, m: usize) -> usize {
        self.action[g][m]
    }

    pub fn pair(&self, g: usize, m: usize) -> usize {
        g * self.fiber.order() + m
    }

    /// Checks `(g,m)(g',m') = (gg', m + g·m')` on every pair of elements.
    pub fn verify_law(&self) -> Result<()> {
        for g in self.base.elements() {
            for m in self.fiber.elements() {
                for g2 in self.base.elements() {
                    for m2 in self.fiber.elements() {
                        let lhs = self.total.mul(self.pair(g, m), self.pair(g2, m2));
                        let rhs = self.pair(
                            self.base.mul(g, g2),
                            self.fiber.mul(m, self.act(g, m2)),
                        );
                        if lhs != rhs {
                            return Err(QkError::GroupAxiom(format!(
                                "semidirect law fails on ({g},{m})({g2},{m2})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn projection(&self) -> Result<GroupHom> {
        let nm = self.fiber.order();
        let images = self.total.elements().map(|x| x / nm).collect();
        GroupHom::new(self.total.clone(), self.base.clone(), images)
    }

    pub fn section(&self) -> Result<GroupHom> {
        let images = self.base.elements().map(|g| self.pair(g, 0)).collect();
        GroupHom::new(self.base.clone(), self.total.clone(), images)
    }

    /// `M_G = M / ⟨m − g·m⟩`, from the presentation with generators the
    /// elements of `M`, relations `e_a + e_b − e_{a+b}` and `e_{g·a} − e_a`.
    pub fn fiber_coinvariants(&self) -> FGAbelianGroup {
        let (nm, ng) = (self.fiber.order(), self.base.order());
        let mut rel = IntMatrix::zeros(nm, nm * nm + ng * nm);
        for a in 0..nm {
            for b in 0..nm {
                let col = a * nm + b;
                *rel.get_mut(a, col) += 1;
                *rel.get_mut(b, col) += 1;
                *rel.get_mut(self.fiber.mul(a, b), col) -= 1;
            }
        }
        for g in 0..ng {
            for a in 0..nm {
                let col = nm * nm + g * nm + a;
                *rel.get_mut(self.act(g, a), col) += 1;
                *rel.get_mut(a, col) -= 1;
            }
        }
        FGAbelianGroup::cokernel(&rel, Exec::Sequential)
    }
}

/// `(Com(G ⋉ M), Com(G) ⊕ M_G)`; the two must coincide.
pub fn com_split_extension(e: &SplitExtensionGrp) -> (FGAbelianGroup, FGAbelianGroup) {
    let total_ab = abelianize_group(e.total());
    let predicted = abelianize_group(e.base()).direct_sum(&e.fiber_coinvariants());
    (total_ab, predicted)
}

/// Named split-extension fixtures.
pub fn split_extension_fixtures() -> Vec<(&'static str, SplitExtensionGrp)> {
    let c = |n| Arc::new(FinGroup::cyclic(n).expect("cyclic"));
    let v4 = Arc::new(FinGroup::cyclic(2).unwrap().product(&FinGroup::cyclic(2).unwrap()));
    let c3c3 = Arc::new(FinGroup::cyclic(3).unwrap().product(&FinGroup::cyclic(3).unwrap()));
    let s3 = Arc::new(FinGroup::symmetric(3).unwrap());
    let sign = |g: usize| -> bool {
        // odd permutations of S_3 are exactly the elements of order 2
        s3.element_order(g) == 2
    };
    let neg = |fiber: &FinGroup, m: usize| fiber.inv(m);
    let mk = |r: Result<SplitExtensionGrp>| r.expect("fixture is valid");
    vec![
        ("S3 = C2 x| C3", mk(SplitExtensionGrp::cyclic_by_unit(2, 3, 2))),
        ("D4 = C2 x| C4", mk(SplitExtensionGrp::cyclic_by_unit(2, 4, 3))),
        ("D5 = C2 x| C5", mk(SplitExtensionGrp::cyclic_by_unit(2, 5, 4))),
        ("Dic3 = C4 x| C3", mk(SplitExtensionGrp::cyclic_by_unit(4, 3, 2))),
        ("SD16 = C2 x| C8 (x -> 3x)", mk(SplitExtensionGrp::cyclic_by_unit(2, 8, 3))),
        ("M16 = C2 x| C8 (x -> 5x)", mk(SplitExtensionGrp::cyclic_by_unit(2, 8, 5))),
        ("F20 = C4 x| C5 (x -> 2x)", mk(SplitExtensionGrp::cyclic_by_unit(4, 5, 2))),
        ("C3 x| C7 (x -> 2x)", mk(SplitExtensionGrp::cyclic_by_unit(3, 7, 2))),
        (
            "A4 = C3 x| (C2 x C2)",
            // the generator cycles the three involutions 1 -> 2 -> 3 -> 1
            mk(SplitExtensionGrp::from_fn(c(3), v4.clone(), |g, m| {
                let mut x = m;
                for _ in 0..g {
                    x = [0, 2, 3, 1][x];
                }
                x
            })),
        ),
        (
            "D4 = C2 x| (C2 x C2) (swap)",
            mk(SplitExtensionGrp::from_fn(c(2), v4.clone(), |g, m| {
                if g == 1 {
                    [0, 2, 1, 3][m]
                } else {
                    m
                }
            })),
        ),
        (
            "C2 x| (C3 x C3) (inversion)",
            mk(SplitExtensionGrp::from_fn(c(2), c3c3.clone(), |g, m| {
                if g == 1 {
                    neg(&c3c3, m)
                } else {
                    m
                }
            })),
        ),
        (
            "S3 x| C3 (sign action)",
            mk(SplitExtensionGrp::from_fn(s3.clone(), c(3), |g, m| {
                if sign(g) {
                    (3 - m) % 3
                } else {
                    m
                }
            })),
        ),
        ("C3 x C4 (direct)", mk(SplitExtensionGrp::direct_product(c(3), c(4)))),
        ("S3 x C2 (direct)", mk(SplitExtensionGrp::direct_product(s3.clone(), c(2)))),
        ("C1 x| C6", mk(SplitExtensionGrp::direct_product(c(1), c(6)))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> FGAbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn s3_as_semidirect_product() {
        let e = SplitExtensionGrp::cyclic_by_unit(2, 3, 2).unwrap();
        assert!(!e.total().is_abelian());
        assert!(e.fiber_coinvariants().is_zero());
        let (total, predicted) = com_split_extension(&e);
        assert_eq!(total, parse("Z/2"));
        assert_eq!(total, predicted);
    }

    #[test]
    fn d4_as_semidirect_product() {
        let e = SplitExtensionGrp::cyclic_by_unit(2, 4, 3).unwrap();
        assert_eq!(e.fiber_coinvariants(), parse("Z/2"));
        let (total, predicted) = com_split_extension(&e);
        assert_eq!(total, parse("(Z/2)^2"));
        assert_eq!(total, predicted);
    }

    #[test]
    fn direct_products() {
        let e = SplitExtensionGrp::direct_product(
            Arc::new(FinGroup::symmetric(3).unwrap()),
            Arc::new(FinGroup::cyclic(4).unwrap()),
        )
        .unwrap();
        let (total, predicted) = com_split_extension(&e);
        assert_eq!(total, parse("Z/2 + Z/4"));
        assert_eq!(total, predicted);
    }

    #[test]
    fn every_fixture_satisfies_the_proposition() {
        let fixtures = split_extension_fixtures();
        assert!(fixtures.len() >= 10);
        for (name, e) in fixtures {
            let (total, predicted) = com_split_extension(&e);
            assert_eq!(total, predicted, "{name}");
        }
    }

    #[test]
    fn rejects_non_automorphisms() {
        let c2 = Arc::new(FinGroup::cyclic(2).unwrap());
        let c4 = Arc::new(FinGroup::cyclic(4).unwrap());
        // m -> 2m is not injective
        assert!(SplitExtensionGrp::from_fn(c2, c4.clone(), |g, m| if g == 1 {
            (2 * m) % 4
        } else {
            m
        })
        .is_err());
        // every nonidentity element inverting is not a homomorphism from C_4
        let c3 = Arc::new(FinGroup::cyclic(3).unwrap());
        assert!(SplitExtensionGrp::from_fn(c4, c3, |g, m| if g == 0 { m } else { (3 - m) % 3 })
            .is_err());
    }
}

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{QkError, Result};
use crate::exec::Exec;
use crate::linalg::{FGAbelianGroup, IntMatrix};

/// A finite group given by its multiplication table. Element `0` is the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

/// Constructor description for [`make_group`]; also the JSON group schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { n: usize },
    Product { factors: Vec<GroupSpec> },
    Symmetric { n: usize },
    /// Dihedral group of order `2n`.
    Dihedral { n: usize },
    Quaternion,
    Table { table: Vec<Vec<usize>> },
}

pub const MAX_SYMMETRIC_DEGREE: usize = 4;

pub fn make_group(spec: &GroupSpec) -> Result<FinGroup> {
    match spec {
        GroupSpec::Cyclic { n } => FinGroup::cyclic(*n),
        GroupSpec::Product { factors } => {
            let mut acc = FinGroup::trivial();
            for f in factors {
                acc = acc.product(&make_group(f)?);
            }
            Ok(acc)
        }
        GroupSpec::Symmetric { n } => FinGroup::symmetric(*n),
        GroupSpec::Dihedral { n } => FinGroup::dihedral(*n),
        GroupSpec::Quaternion => Ok(FinGroup::quaternion()),
        GroupSpec::Table { table } => {
            let n = table.len();
            if table.iter().any(|r| r.len() != n) {
                return Err(QkError::GroupAxiom("table is not square".into()));
            }
            FinGroup::from_table(n, table.iter().flatten().copied().collect())
        }
    }
}

impl FinGroup {
    /// Validates identity (element 0), associativity and inverses.
    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(QkError::GroupAxiom("a group has at least one element".into()));
        }
        if table.len() != order * order {
            return Err(QkError::GroupAxiom(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(pos) = table.iter().position(|&x| x >= order) {
            return Err(QkError::GroupAxiom(format!(
                "entry ({}, {}) = {} is not an element",
                pos / order,
                pos % order,
                table[pos]
            )));
        }
        let mul = |a: usize, b: usize| table[a * order + b];
        for a in 0..order {
            if mul(0, a) != a || mul(a, 0) != a {
                return Err(QkError::GroupAxiom(format!(
                    "element 0 is not an identity: 0*{a} = {}, {a}*0 = {}",
                    mul(0, a),
                    mul(a, 0)
                )));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(QkError::GroupAxiom(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(order);
        for a in 0..order {
            match (0..order).find(|&b| mul(a, b) == 0 && mul(b, a) == 0) {
                Some(b) => inverses.push(b),
                None => {
                    return Err(QkError::GroupAxiom(format!("element {a} has no inverse")));
                }
            }
        }
        Ok(FinGroup {
            order,
            table,
            inverses,
        })
    }

    pub fn from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b));
            }
        }
        Self::from_table(order, table)
    }

    pub fn trivial() -> Self {
        FinGroup {
            order: 1,
            table: vec![0],
            inverses: vec![0],
        }
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QkError::GroupAxiom("cyclic group of order 0".into()));
        }
        Self::from_fn(n, |a, b| (a + b) % n)
    }

    /// `S_n` on permutations of `0..n` in lexicographic order, composed as
    /// functions: `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_SYMMETRIC_DEGREE {
            return Err(QkError::Guard(format!(
                "symmetric groups are supported for 1 <= n <= {MAX_SYMMETRIC_DEGREE}"
            )));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation");
        Self::from_fn(perms.len(), |a, b| {
            let composed: Vec<usize> = (0..n).map(|i| perms[a][perms[b][i]]).collect();
            index(&composed)
        })
    }

    /// Dihedral group of order `2n`: element `i + n*j` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QkError::GroupAxiom("dihedral group needs n >= 1".into()));
        }
        Self::from_fn(2 * n, |a, b| {
            let (i, s) = (a % n, a / n);
            let (k, t) = (b % n, b / n);
            let rot = if s == 0 { (i + k) % n } else { (i + n - k) % n };
            rot + n * ((s + t) % 2)
        })
    }

    /// Quaternion group: element `u + 4*neg` is `±u` for `u ∈ {1, i, j, k}`.
    pub fn quaternion() -> Self {
        // unit products: (sign is negative, unit)
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        Self::from_fn(8, |a, b| {
            let (neg, u) = UNIT[a % 4][b % 4];
            let sign = (a / 4 + b / 4 + usize::from(neg)) % 2;
            u + 4 * sign
        })
        .expect("quaternion table is a group")
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &FinGroup) -> FinGroup {
        let m = other.order;
        Self::from_fn(self.order * m, |x, y| {
            self.mul(x / m, y / m) * m + other.mul(x % m, y % m)
        })
        .expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|a| self.element_order(a))
            .fold(1, num_integer::lcm)
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn subgroup_generated(&self, gens: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut seen = BTreeSet::from([0]);
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let comms: BTreeSet<usize> = self
            .elements()
            .flat_map(|a| self.elements().map(move |b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        self.subgroup_generated(comms)
    }

    /// Quotient by a normal subgroup, with the projection map.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FinGroup, Vec<usize>)> {
        let in_normal = |x: usize| normal.binary_search(&x).is_ok();
        for g in self.elements() {
            for &n in normal {
                if !in_normal(self.mul(self.mul(g, n), self.inv(g))) {
                    return Err(QkError::GroupAxiom(format!(
                        "subgroup is not normal: conjugating {n} by {g} leaves it"
                    )));
                }
            }
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in self.elements() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(g);
            for &n in normal {
                coset_of[self.mul(g, n)] = id;
            }
        }
        let q = FinGroup::from_fn(reps.len(), |a, b| coset_of[self.mul(reps[a], reps[b])])?;
        Ok((q, coset_of))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Canonical form of an abelian group given by its multiplication table:
/// the cokernel of the relations `e_a + e_b - e_{ab}`.
///
/// For a nonabelian table this is the abelianization.
pub fn table_presentation_group(g: &FinGroup) -> FGAbelianGroup {
    let n = g.order();
    let mut rel = IntMatrix::zeros(n, n * n);
    for a in 0..n {
        for b in 0..n {
            let col = a * n + b;
            *rel.get_mut(a, col) += 1;
            *rel.get_mut(b, col) += 1;
            *rel.get_mut(g.mul(a, b), col) -= 1;
        }
    }
    FGAbelianGroup::cokernel(&rel, Exec::Sequential)
}

/// `G/[G,G]`, computed by enumerating the commutator subgroup.
pub fn abelianize_group(g: &FinGroup) -> FGAbelianGroup {
    let comm = g.commutator_subgroup();
    let (q, _) = g.quotient(&comm).expect("commutator subgroup is normal");
    table_presentation_group(&q)
}

/// A homomorphism between finite groups, verified at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<FinGroup>,
    target: Arc<FinGroup>,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: Arc<FinGroup>, target: Arc<FinGroup>, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() {
            return Err(QkError::NotHomomorphism(format!(
                "{} images for a group of order {}",
                images.len(),
                source.order()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&x| x >= target.order()) {
            return Err(QkError::NotHomomorphism(format!(
                "image {bad} is not an element of the target"
            )));
        }
        for a in source.elements() {
            for b in source.elements() {
                let lhs = images[source.mul(a, b)];
                let rhs = target.mul(images[a], images[b]);
                if lhs != rhs {
                    return Err(QkError::NotHomomorphism(format!(
                        "f({a}*{b}) = {lhs} but f({a})*f({b}) = {rhs}"
                    )));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(g: Arc<FinGroup>) -> Self {
        let images = g.elements().collect();
        GroupHom {
            source: g.clone(),
            target: g,
            images,
        }
    }

    /// The map to the trivial group.
    pub fn to_trivial(g: Arc<FinGroup>) -> Self {
        GroupHom {
            images: vec![0; g.order()],
            source: g,
            target: Arc::new(FinGroup::trivial()),
        }
    }

    pub fn source(&self) -> &Arc<FinGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinGroup> {
        &self.target
    }

    pub fn apply(&self, g: usize) -> usize {
        self.images[g]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_surjective(&self) -> bool {
        let hit: BTreeSet<usize> = self.images.iter().copied().collect();
        hit.len() == self.target.order()
    }

    pub fn is_injective(&self) -> bool {
        let hit: BTreeSet<usize> = self.images.iter().copied().collect();
        hit.len() == self.source.order()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GroupHom) -> Result<GroupHom> {
        if first.target != self.source {
            return Err(QkError::NotHomomorphism("composable maps need matching groups".into()));
        }
        Ok(GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            images: first.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    /// Whether the induced map `G^ab → H^ab` is onto: the image of `G`
    /// together with `[H,H]` must generate `H`.
    pub fn abelianization_is_surjective(&self) -> bool {
        let comm = self.target.commutator_subgroup();
        let gens = self.images.iter().copied().chain(comm);
        self.target.subgroup_generated(gens).len() == self.target.order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_one_is_trivial() {
        let g = make_group(&GroupSpec::Cyclic { n: 1 }).unwrap();
        assert_eq!(g, FinGroup::trivial());
    }

    #[test]
    fn symmetric_three() {
        let g = make_group(&GroupSpec::Symmetric { n: 3 }).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(abelianize_group(&g), FGAbelianGroup::cyclic(2));
    }

    #[test]
    fn klein_four_has_exponent_two() {
        let spec = GroupSpec::Product {
            factors: vec![GroupSpec::Cyclic { n: 2 }, GroupSpec::Cyclic { n: 2 }],
        };
        let g = make_group(&spec).unwrap();
        assert_eq!((g.order(), g.exponent()), (4, 2));
        assert_eq!(abelianize_group(&g).to_string(), "(Z/2)^2");
    }

    #[test]
    fn quaternion_abelianization() {
        let q = FinGroup::quaternion();
        assert_eq!(q.commutator_subgroup(), vec![0, 4]);
        assert_eq!(abelianize_group(&q).to_string(), "(Z/2)^2");
        assert_eq!(q.element_order(1), 4);
    }

    #[test]
    fn abelian_groups_abelianize_to_themselves() {
        let g = FinGroup::cyclic(4).unwrap().product(&FinGroup::cyclic(6).unwrap());
        assert_eq!(abelianize_group(&g).to_string(), "Z/2 + Z/12");
    }

    #[test]
    fn dihedral_order_eight() {
        let d = FinGroup::dihedral(4).unwrap();
        assert_eq!(d.order(), 8);
        assert!(!d.is_abelian());
        assert_eq!(abelianize_group(&d).to_string(), "(Z/2)^2");
        assert_eq!(table_presentation_group(&d), abelianize_group(&d));
    }

    #[test]
    fn corrupted_table_names_a_triple() {
        // Latin square with identity 0 that is not associative.
        let table = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = make_group(&GroupSpec::Table { table }).unwrap_err();
        assert!(err.to_string().contains("associativity fails on"), "{err}");
    }

    #[test]
    fn homomorphism_check() {
        let c4 = Arc::new(FinGroup::cyclic(4).unwrap());
        let c2 = Arc::new(FinGroup::cyclic(2).unwrap());
        assert!(GroupHom::new(c4.clone(), c2.clone(), vec![0, 1, 0, 1]).is_ok());
        assert!(GroupHom::new(c4, c2, vec![0, 1, 1, 0]).is_err());
    }
}

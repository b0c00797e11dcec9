//! The default verification battery: every check of the acceptance list over
//! builtin objects and fixed fixture sets.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use super::adjunction::{
    sample_bimodule_maps, sample_equivariant_maps, verify_module_adjunction_bimodule,
    verify_module_adjunction_group,
};
use super::algebra_checks::{comparison_map_degree0, verify_hochschild_shift, verify_square_zero_nilradical};
use super::factor::{verify_bimodule_factorization, verify_factorization};
use super::group_checks::{verify_coinvariants_shift, verify_commutativization, verify_torsionfree_beck};
use super::quillen::{verify_quillen_pair_criterion, QuillenInstance};
use super::report::ComparisonReport;
use crate::algebras::{Bimodule, CommRingPres, FinDimAlgebra, HochschildOptions, RModule};
use crate::builtins::{builtin_algebra, builtin_group, builtin_presentation, BUILTIN_ALGEBRAS, BUILTIN_GROUPS};
use crate::error::Result;
use crate::exec::Exec;
use crate::groups::{augmentation_ideal, split_extension_fixtures, BarOptions, EquivariantMap, FinGroup, ZGRep};
use crate::linalg::{FGAbelianGroup, Field, IntMatrix, Limits};

/// Degree bound used by the battery for both shift checks.
pub const BATTERY_MAX_DEGREE: usize = 2;

#[derive(Clone, Debug)]
pub struct BatteryConfig {
    pub max_degree: usize,
    pub limits: Limits,
    pub exec: Exec,
    /// Groups checked in addition to the builtin list.
    pub extra_groups: Vec<(String, FinGroup)>,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            max_degree: BATTERY_MAX_DEGREE,
            limits: Limits::default(),
            exec: Exec::default(),
            extra_groups: Vec::new(),
        }
    }
}

impl BatteryConfig {
    fn bar(&self) -> BarOptions {
        BarOptions::default().with_limits(self.limits).with_exec(self.exec)
    }

    fn hochschild(&self) -> HochschildOptions {
        HochschildOptions::default().with_limits(self.limits).with_exec(self.exec)
    }
}

type Check = Box<dyn Fn(&BatteryConfig) -> Result<ComparisonReport> + Send + Sync>;

pub struct BatteryItem {
    /// Acceptance criterion the item belongs to.
    pub criterion: u8,
    pub label: String,
    check: Check,
}

impl BatteryItem {
    fn new(
        criterion: u8,
        label: impl Into<String>,
        check: impl Fn(&BatteryConfig) -> Result<ComparisonReport> + Send + Sync + 'static,
    ) -> Self {
        BatteryItem {
            criterion,
            label: label.into(),
            check: Box::new(check),
        }
    }

    pub fn run(&self, cfg: &BatteryConfig) -> Result<ComparisonReport> {
        (self.check)(cfg).map(|r| r.with_inputs(json!({ "label": self.label })))
    }
}

#[derive(Debug)]
pub struct BatteryOutcome {
    pub criterion: u8,
    pub label: String,
    pub result: Result<ComparisonReport>,
}

impl BatteryOutcome {
    pub fn passed(&self) -> bool {
        self.result.as_ref().is_ok_and(|r| r.passed())
    }
}

fn q() -> Field {
    Field::Rationals
}

fn ints(xs: &[i64]) -> Vec<BigRational> {
    xs.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

/// `(label, R, M)` with `R` reduced, for the square-zero check.
pub fn square_zero_fixtures() -> Result<Vec<(String, RModule)>> {
    let f2 = Field::Prime(2);
    let f3 = Field::Prime(3);
    let f5 = Field::Prime(5);
    let k = FinDimAlgebra::ground;
    let d = FinDimAlgebra::diagonal;
    Ok(vec![
        ("Q, M = 0".into(), RModule::zero(&k(q()))),
        ("Q, M = Q".into(), RModule::regular(&k(q()))?),
        ("Q, M = Q^3".into(), RModule::from_character(&k(q()), 3, &ints(&[1]))?),
        ("F2, M = 0".into(), RModule::zero(&k(f2))),
        ("F2, M = F2".into(), RModule::regular(&k(f2))?),
        ("F5, M = F5^2".into(), RModule::from_character(&k(f5), 2, &ints(&[1]))?),
        ("QxQ, M = 0".into(), RModule::zero(&d(q(), 2))),
        ("QxQ, M = Q via first factor".into(), RModule::from_character(&d(q(), 2), 1, &ints(&[1, 0]))?),
        ("QxQ, M = QxQ".into(), RModule::regular(&d(q(), 2))?),
        ("F3xF3, M = F3 via second factor".into(), RModule::from_character(&d(f3, 2), 1, &ints(&[0, 1]))?),
        ("F2xF2, M = F2xF2".into(), RModule::regular(&d(f2, 2))?),
        ("QxQxQ, M = Q^2 via third factor".into(), RModule::from_character(&d(q(), 3), 2, &ints(&[0, 0, 1]))?),
    ])
}

/// `(label, r, M)` for the torsion-free Beck-module check.
pub fn torsionfree_fixtures() -> Vec<(String, usize, FGAbelianGroup)> {
    let g = |free, tors: &[i64]| {
        FGAbelianGroup::from_cyclic_orders(free, &tors.iter().map(|&t| BigInt::from(t)).collect::<Vec<_>>())
    };
    [
        (0, g(1, &[])),
        (1, g(0, &[2])),
        (2, g(1, &[3])),
        (1, g(0, &[])),
        (3, g(2, &[])),
        (0, g(0, &[6])),
        (2, g(0, &[2, 4])),
        (1, g(3, &[5])),
        (0, g(0, &[])),
        (4, g(0, &[9])),
        (2, g(2, &[])),
        (1, g(1, &[2, 2])),
    ]
    .into_iter()
    .map(|(r, m)| (format!("Z^{r} + ({m})"), r, m))
    .collect()
}

/// Presented commutative algebras for the degree-0 comparison map.
pub fn commutative_fixtures() -> Result<Vec<(String, CommRingPres)>> {
    let mut out = Vec::new();
    for name in BUILTIN_ALGEBRAS {
        if let Some(p) = builtin_presentation(name)? {
            out.push((name.to_string(), p));
        }
    }
    out.push(("Q[x,y]/(x^2, xy, y^2)".into(), CommRingPres::parse(q(), &["x", "y"], &["x^2", "x*y", "y^2"])?));
    out.push(("F3[x]/(x^3)".into(), CommRingPres::parse(Field::Prime(3), &["x"], &["x^3"])?));
    Ok(out)
}

fn arc(g: FinGroup) -> Arc<FinGroup> {
    Arc::new(g)
}

/// `(label, m, A)` for the coinvariants ⊣ trivial adjunction.
pub fn group_adjunction_fixtures() -> Result<Vec<(String, ZGRep, FGAbelianGroup)>> {
    let c2 = arc(FinGroup::cyclic(2)?);
    let c3 = arc(FinGroup::cyclic(3)?);
    let s3 = arc(FinGroup::symmetric(3)?);
    let v4 = arc(builtin_group("C2xC2")?);
    let z = |n: u64| FGAbelianGroup::cyclic(n);
    Ok(vec![
        ("C2, trivial Z, Z/4".into(), ZGRep::trivial(c2.clone(), 1), z(4)),
        ("C2, I_G, Z/4".into(), augmentation_ideal(c2.clone()), z(4)),
        ("C2, ZC2 + Z, Z/6".into(), ZGRep::regular(c2.clone()).direct_sum(&ZGRep::trivial(c2, 1))?, z(6)),
        ("C3, ZC3, Z/3".into(), ZGRep::regular(c3.clone()), z(3)),
        ("C3, I_G, Z/9".into(), augmentation_ideal(c3), z(9)),
        ("S3, I_G, Z/2".into(), augmentation_ideal(s3), z(2)),
        ("C2xC2, I_G, Z/2 + Z/2".into(), augmentation_ideal(v4), z(2).direct_sum(&z(2))),
    ])
}

/// `(label, M, N)` for the central-quotient ⊣ same-action adjunction.
pub fn bimodule_adjunction_fixtures() -> Result<Vec<(String, Bimodule, RModule)>> {
    let f2 = Field::Prime(2);
    let f3 = Field::Prime(3);
    let com = |a: &FinDimAlgebra| a.commutator_quotient().0;
    let m2q = FinDimAlgebra::matrix_algebra(q(), 2);
    let m2f2 = FinDimAlgebra::matrix_algebra(f2, 2);
    let dual = FinDimAlgebra::dual_numbers(f2);
    let ut = FinDimAlgebra::upper_triangular(f2, 2);
    let cubic = FinDimAlgebra::truncated_polynomial(f3, 3);
    Ok(vec![
        ("M2(Q), N = 0".into(), Bimodule::regular(&m2q), RModule::zero(&com(&m2q))),
        ("M2(F2), N = 0".into(), Bimodule::regular(&m2f2), RModule::zero(&com(&m2f2))),
        ("F2[e]/(e^2), N = Com(A)".into(), Bimodule::regular(&dual), RModule::regular(&com(&dual))?),
        (
            "F2[e]/(e^2), N = F2 via augmentation".into(),
            Bimodule::regular(&dual),
            RModule::from_character(&com(&dual), 1, &ints(&[1, 0]))?,
        ),
        ("UT2(F2), N = Com(A)".into(), Bimodule::regular(&ut), RModule::regular(&com(&ut))?),
        ("UT2(F2), N = 0".into(), Bimodule::regular(&ut), RModule::zero(&com(&ut))),
        (
            "F3[x]/(x^3), N = F3 via augmentation".into(),
            Bimodule::regular(&cubic),
            RModule::from_character(&com(&cubic), 1, &ints(&[1, 0, 0]))?,
        ),
    ])
}

/// Small fixed factorization inputs.
pub fn factorization_fixtures() -> Result<Vec<(String, EquivariantMap)>> {
    let c2 = arc(FinGroup::cyclic(2)?);
    let s3 = arc(FinGroup::symmetric(3)?);
    let reg = ZGRep::regular(c2.clone());
    let triv = ZGRep::trivial(c2, 1);
    let t3 = ZGRep::trivial(s3.clone(), 1);
    let reg3 = ZGRep::regular(s3.clone());
    let ones = IntMatrix::from_rows(&[[1, 1, 1, 1, 1, 1]]);
    Ok(vec![
        ("identity on ZC2".into(), EquivariantMap::new(reg.clone(), reg.clone(), IntMatrix::identity(2))?),
        ("augmentation ZC2 -> Z".into(), EquivariantMap::new(reg, triv, IntMatrix::from_rows(&[[1, 1]]))?),
        ("2 on trivial Z over S3".into(), EquivariantMap::new(t3.clone(), t3.clone(), IntMatrix::from_rows(&[[2]]))?),
        ("norm Z -> ZS3 -> Z".into(), EquivariantMap::new(reg3, t3, ones)?),
        ("I_S3 -> ZS3 averaged".into(), EquivariantMap::averaged(augmentation_ideal(s3.clone()), ZGRep::regular(s3), &{
            let mut x = IntMatrix::zeros(6, 5);
            x.set(0, 0, BigInt::from(1));
            x
        })?),
    ])
}

fn group_shift_items(items: &mut Vec<BatteryItem>, groups: Vec<(String, Arc<FinGroup>)>) {
    for (name, g) in groups {
        items.push(BatteryItem::new(1, format!("coinvariants-shift {name}"), move |cfg| {
            verify_coinvariants_shift(&g, cfg.max_degree.min(BATTERY_MAX_DEGREE), &cfg.bar())
        }));
    }
}

/// All battery items in declaration order.
pub fn default_battery(cfg: &BatteryConfig) -> Result<Vec<BatteryItem>> {
    let mut items = Vec::new();
    let mut groups = Vec::new();
    for name in BUILTIN_GROUPS.iter().filter(|n| **n != "trivial") {
        groups.push((name.to_string(), arc(builtin_group(name)?)));
    }
    groups.extend(cfg.extra_groups.iter().map(|(n, g)| (n.clone(), arc(g.clone()))));
    group_shift_items(&mut items, groups);

    for (name, e) in split_extension_fixtures() {
        items.push(BatteryItem::new(2, format!("commutativization {name}"), move |_| {
            Ok(verify_commutativization(&e))
        }));
    }

    for name in BUILTIN_ALGEBRAS {
        let a = builtin_algebra(name)?;
        items.push(BatteryItem::new(3, format!("hochschild-shift {name}"), move |cfg| {
            let degree = cfg.max_degree.min(BATTERY_MAX_DEGREE).max(1);
            let plain = verify_hochschild_shift(&a, degree, &cfg.hochschild())?;
            let normalized = verify_hochschild_shift(&a, degree, &HochschildOptions { normalized: true, ..cfg.hochschild() })?;
            let agrees = plain.left == normalized.left && plain.right == normalized.right;
            Ok(plain.with_check("normalized_agrees", agrees))
        }));
    }

    for (name, r) in commutative_fixtures()? {
        items.push(BatteryItem::new(4, format!("comparison-map-degree0 {name}"), move |cfg| {
            comparison_map_degree0(&r, &cfg.hochschild())
        }));
    }

    for (name, m) in square_zero_fixtures()? {
        items.push(BatteryItem::new(5, format!("square-zero-nilradical {name}"), move |_| {
            verify_square_zero_nilradical(&m)
        }));
    }
    for (name, r, m) in torsionfree_fixtures() {
        items.push(BatteryItem::new(5, format!("torsionfree-beck {name}"), move |_| {
            Ok(verify_torsionfree_beck(r, &m))
        }));
    }

    items.push(BatteryItem::new(6, "quillen-pair-criterion gp-ab", |_| {
        verify_quillen_pair_criterion(QuillenInstance::GpAb, 4)
    }));
    items.push(BatteryItem::new(6, "quillen-pair-criterion alg-com", |_| {
        verify_quillen_pair_criterion(QuillenInstance::AlgCom, 2)
    }));

    for (name, f) in factorization_fixtures()? {
        items.push(BatteryItem::new(7, format!("factor-epi-mono {name}"), move |_| verify_factorization(&f)));
    }
    let dual = FinDimAlgebra::dual_numbers(q());
    let reg = Bimodule::regular(&dual);
    let eps = dual.left_mult(&dual.basis(1));
    items.push(BatteryItem::new(7, "factor-epi-mono Q[e]/(e^2), multiplication by e", move |_| {
        verify_bimodule_factorization(&reg, &reg, &eps)
    }));

    for (name, m, n) in group_adjunction_fixtures()? {
        items.push(BatteryItem::new(8, format!("module-adjunction {name}"), move |_| {
            verify_module_adjunction_group(&m, &n, &sample_equivariant_maps(&m)?)
        }));
    }
    for (name, m, n) in bimodule_adjunction_fixtures()? {
        items.push(BatteryItem::new(8, format!("module-adjunction {name}"), move |_| {
            verify_module_adjunction_bimodule(&m, &n, &sample_bimodule_maps(&m)?)
        }));
    }
    Ok(items)
}

/// Runs `items` (concurrently under `Exec::Parallel`); outcomes keep the
/// declaration order.
pub fn run_items(items: &[BatteryItem], cfg: &BatteryConfig) -> Vec<BatteryOutcome> {
    cfg.exec.map(items, |item| BatteryOutcome {
        criterion: item.criterion,
        label: item.label.clone(),
        result: item.run(cfg),
    })
}

pub fn run_battery(cfg: &BatteryConfig) -> Result<Vec<BatteryOutcome>> {
    Ok(run_items(&default_battery(cfg)?, cfg))
}

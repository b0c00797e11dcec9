#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use qk_core::groups::{augmentation_ideal, EquivariantMap, FinGroup, ZGRep};
use qk_core::linalg::{smith_normal_form, ChainComplexZ, IntMatrix};
use qk_core::simplicial::{dold_kan_gamma, SimplicialZModule};
use qk_core::builtins::builtin_group;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::from_vec(rows, cols, data).unwrap()
}

/// A product of random elementary operations, with its inverse.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    let mut p_inv = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            let neg = IntMatrix::from_rows(&[[-1]]);
            return (neg.clone(), neg);
        }
        return (p, p_inv);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let k: i64 = rng.gen_range(-2..=2);
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(k));
        let mut e_inv = IntMatrix::identity(n);
        e_inv.set(i, j, BigInt::from(-k));
        p = e.mul(&p).unwrap();
        p_inv = p_inv.mul(&e_inv).unwrap();
    }
    (p, p_inv)
}

/// A random complex with `boundary_{k+1}` drawn from the integer kernel of
/// `boundary_k`.
pub fn random_chain_complex(rng: &mut impl Rng, ranks: &[usize]) -> ChainComplexZ {
    let mut boundaries = Vec::new();
    for k in 1..ranks.len() {
        let d = if k == 1 {
            random_matrix(rng, ranks[0], ranks[1], 3)
        } else {
            let prev: &IntMatrix = boundaries.last().unwrap();
            let kernel = smith_normal_form(prev).kernel_basis();
            let coeffs = random_matrix(rng, kernel.cols(), ranks[k], 2);
            kernel.mul(&coeffs).unwrap()
        };
        boundaries.push(d);
    }
    ChainComplexZ::new(ranks.to_vec(), boundaries).unwrap()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Level ranks of `Γ(C)` for chain ranks `r`.
pub fn gamma_levels(r: &[usize]) -> Vec<usize> {
    (0..r.len())
        .map(|n| (0..=n).map(|k| binomial(n, k) * r[k]).sum())
        .collect()
}

/// A valid simplicial module with at most `max_top + 1` levels of rank at
/// most `max_rank`: `Γ` of a random complex in a random basis, sometimes
/// plus a constant summand. Candidates exceeding the bounds are redrawn.
pub fn random_simplicial(rng: &mut impl Rng, max_top: usize, max_rank: usize) -> SimplicialZModule {
    loop {
        let top = rng.gen_range(1..=max_top);
        let ranks: Vec<usize> = (0..=top).map(|k| rng.gen_range(0..=2usize.saturating_sub(k / 2))).collect();
        let constant = rng.gen_range(0..=1);
        if gamma_levels(&ranks).iter().any(|&l| l + constant > max_rank) {
            continue;
        }
        let c = random_chain_complex(rng, &ranks);
        let mut s = dold_kan_gamma(&c).unwrap();
        if constant > 0 {
            s = s.direct_sum(&SimplicialZModule::constant(constant, top)).unwrap();
        }
        let bases: Vec<(IntMatrix, IntMatrix)> =
            s.levels().to_vec().iter().map(|&n| random_unimodular(rng, n)).collect();
        return s.change_basis(&bases).unwrap();
    }
}

pub fn small_groups() -> Vec<Arc<FinGroup>> {
    ["C2", "C3", "C4", "C2xC2", "S3"]
        .iter()
        .map(|n| Arc::new(builtin_group(n).unwrap()))
        .collect()
}

fn random_lattice(rng: &mut impl Rng, g: &Arc<FinGroup>) -> ZGRep {
    match rng.gen_range(0..4) {
        0 => ZGRep::trivial(g.clone(), rng.gen_range(1..=2)),
        1 => ZGRep::regular(g.clone()),
        2 => augmentation_ideal(g.clone()),
        _ => augmentation_ideal(g.clone()).direct_sum(&ZGRep::trivial(g.clone(), 1)).unwrap(),
    }
}

/// A random equivariant map by averaging a random integer matrix.
pub fn random_equivariant_map(rng: &mut impl Rng) -> EquivariantMap {
    let groups = small_groups();
    let g = &groups[rng.gen_range(0..groups.len())];
    let s = random_lattice(rng, g);
    let t = random_lattice(rng, g);
    let x = random_matrix(rng, t.rank(), s.rank(), 2);
    EquivariantMap::averaged(s, t, &x).unwrap()
}

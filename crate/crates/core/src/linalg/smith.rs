//! Smith normal form over the integers.
//!
//! Two entry points share one pivoting rule (smallest nonzero absolute
//! value, first in row-major order):
//!
//! * [`smith_normal_form`] tracks the unimodular transforms `u`, `v` and
//!   their inverses, with `u * m * v = d`.
//! * [`invariant_factors`] only needs the diagonal. It first clears every
//!   `±1` pivot (which leaves the remaining invariant factors unchanged),
//!   then runs the full reduction on what is left. Work is done in `i64`
//!   with checked arithmetic and restarted in `BigInt` on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::int_matrix::IntMatrix;
use crate::exec::Exec;

/// Full Smith decomposition `u * m * v = d` with inverses of both transforms.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Nonzero diagonal entries of `d`, in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Integer basis of the kernel, as the columns of the returned matrix
    /// (the trailing columns of `v`).
    pub fn kernel_basis(&self) -> IntMatrix {
        let cols: Vec<usize> = (self.rank..self.v.cols()).collect();
        self.v.select_columns(&cols)
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|r| m.row(r).to_vec()).collect();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Row op "row_i += k * row_t" on a. u gets the same op; u_inv gets the
    // inverse op applied on the right (col_t -= k * col_i).
    let row_add = |a: &mut Vec<Vec<BigInt>>,
                   u: &mut IntMatrix,
                   u_inv: &mut IntMatrix,
                   i: usize,
                   t: usize,
                   k: &BigInt| {
        let (src, dst) = if i < t {
            let (lo, hi) = a.split_at_mut(t);
            (&hi[0], &mut lo[i])
        } else {
            let (lo, hi) = a.split_at_mut(i);
            (&lo[t], &mut hi[0])
        };
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d += k * s;
            }
        }
        for c in 0..u.cols() {
            let s = u.get(t, c).clone();
            if !s.is_zero() {
                *u.get_mut(i, c) += k * s;
            }
        }
        for r in 0..u_inv.rows() {
            let s = u_inv.get(r, i).clone();
            if !s.is_zero() {
                *u_inv.get_mut(r, t) -= k * s;
            }
        }
    };
    // Column op "col_j += k * col_t" on a; v same; v_inv gets row_t -= k * row_j.
    let col_add = |a: &mut Vec<Vec<BigInt>>,
                   v: &mut IntMatrix,
                   v_inv: &mut IntMatrix,
                   j: usize,
                   t: usize,
                   k: &BigInt| {
        for row in a.iter_mut() {
            if !row[t].is_zero() {
                let s = row[t].clone();
                row[j] += k * s;
            }
        }
        for r in 0..v.rows() {
            let s = v.get(r, t).clone();
            if !s.is_zero() {
                *v.get_mut(r, j) += k * s;
            }
        }
        for c in 0..v_inv.cols() {
            let s = v_inv.get(j, c).clone();
            if !s.is_zero() {
                *v_inv.get_mut(t, c) -= k * s;
            }
        }
    };

    let mut rank = 0;
    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = smallest_pivot(&a, t) else {
                break;
            };
            if pr != t {
                a.swap(pr, t);
                swap_rows(&mut u, pr, t);
                swap_cols(&mut u_inv, pr, t);
            }
            if pc != t {
                for row in a.iter_mut() {
                    row.swap(pc, t);
                }
                swap_cols(&mut v, pc, t);
                swap_rows(&mut v_inv, pc, t);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    row_add(&mut a, &mut u, &mut u_inv, i, t, &(-q));
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    col_add(&mut a, &mut v, &mut v_inv, j, t, &(-q));
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let p = a[t][t].clone();
            let offending =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
            match offending {
                Some(i) => row_add(&mut a, &mut u, &mut u_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_zero() {
            break;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            negate_row(&mut u, t);
            negate_col(&mut u_inv, t);
        }
        rank += 1;
    }

    let mut d = IntMatrix::zeros(rows, cols);
    for (r, row) in a.into_iter().enumerate() {
        for (c, x) in row.into_iter().enumerate() {
            if !x.is_zero() {
                d.set(r, c, x);
            }
        }
    }
    SmithForm {
        u,
        d,
        v,
        u_inv,
        v_inv,
        rank,
    }
}

fn smallest_pivot(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (r, row) in a.iter().enumerate().skip(t) {
        for (c, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let done = ax.is_one();
                best = Some((r, c, ax));
                if done {
                    return best.map(|(r, c, _)| (r, c));
                }
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    for c in 0..m.cols() {
        let x = m.get(a, c).clone();
        let y = m.get(b, c).clone();
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for r in 0..m.rows() {
        let x = m.get(r, a).clone();
        let y = m.get(r, b).clone();
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols() {
        let x = -m.get(r, c);
        m.set(r, c, x);
    }
}

fn negate_col(m: &mut IntMatrix, c: usize) {
    for r in 0..m.rows() {
        let x = -m.get(r, c);
        m.set(r, c, x);
    }
}

/// Rank and invariant factors of an integer matrix, without transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFactors {
    pub rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub nontrivial: Vec<BigInt>,
}

pub fn invariant_factors(m: &IntMatrix, exec: Exec) -> InvariantFactors {
    let small: Option<Vec<Vec<i64>>> = (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| x.to_i64()).collect())
        .collect();
    if let Some(rows) = small {
        if let Some(out) = eliminate(rows, exec) {
            return out;
        }
    }
    let rows = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    eliminate(rows, exec).expect("bigint elimination cannot overflow")
}

mod reduce {
    use std::sync::atomic::{AtomicBool, Ordering};

    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};

    use super::InvariantFactors;
    use crate::exec::Exec;

    /// Scalar ring for the diagonal-only elimination. Every fallible operation
    /// returns `None` on overflow.
    pub(super) trait Scalar: Clone + Send + Sync {
        fn vanishes(&self) -> bool;
        fn is_pm_one(&self) -> bool;
        fn abs_lt(&self, other: &Self) -> bool;
        fn quot(&self, d: &Self) -> Option<Self>;
        fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
        fn plus(&self, b: &Self) -> Option<Self>;
        fn divides(&self, other: &Self) -> bool;
        fn to_big(&self) -> BigInt;
    }

    impl Scalar for i64 {
        fn vanishes(&self) -> bool {
            *self == 0
        }
        fn is_pm_one(&self) -> bool {
            *self == 1 || *self == -1
        }
        fn abs_lt(&self, other: &Self) -> bool {
            self.unsigned_abs() < other.unsigned_abs()
        }
        fn quot(&self, d: &Self) -> Option<Self> {
            self.checked_div(*d)
        }
        fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
            self.checked_sub(q.checked_mul(*b)?)
        }
        fn plus(&self, b: &Self) -> Option<Self> {
            self.checked_add(*b)
        }
        fn divides(&self, other: &Self) -> bool {
            other.checked_rem(*self).is_none_or(|r| r == 0)
        }
        fn to_big(&self) -> BigInt {
            BigInt::from(*self)
        }
    }

    impl Scalar for BigInt {
        fn vanishes(&self) -> bool {
            Zero::is_zero(self)
        }
        fn is_pm_one(&self) -> bool {
            self.abs().is_one()
        }
        fn abs_lt(&self, other: &Self) -> bool {
            self.abs() < other.abs()
        }
        fn quot(&self, d: &Self) -> Option<Self> {
            Some(self / d)
        }
        fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
            Some(self - q * b)
        }
        fn plus(&self, b: &Self) -> Option<Self> {
            Some(self + b)
        }
        fn divides(&self, other: &Self) -> bool {
            other.is_multiple_of(self)
        }
        fn to_big(&self) -> BigInt {
            self.clone()
        }
    }

    pub(super) fn eliminate<S: Scalar>(
        mut rows: Vec<Vec<S>>,
        exec: Exec,
    ) -> Option<InvariantFactors> {
        rows.retain(|r| r.iter().any(|x| !x.vanishes()));
        let mut units = 0usize;

        // Unit pivots: clear the pivot column with row operations, then drop the
        // pivot row and column. The pivot row's other entries could be cleared by
        // column operations that touch no other row, so dropping it is exact.
        loop {
            let mut progress = false;
            let mut idx = 0;
            while idx < rows.len() {
                let Some(j) = rows[idx].iter().position(Scalar::is_pm_one) else {
                    idx += 1;
                    continue;
                };
                let pivot = rows.swap_remove(idx);
                let support: Vec<(usize, S)> = pivot
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.vanishes())
                    .map(|(c, x)| (c, x.clone()))
                    .collect();
                let sign = pivot[j].clone();
                let overflow = AtomicBool::new(false);
                exec.for_each_mut_weighted(&mut rows, support.len(), |row| {
                    if row[j].vanishes() {
                        return;
                    }
                    // row[j] / (±1)
                    let Some(q) = row[j].quot(&sign) else {
                        overflow.store(true, Ordering::Relaxed);
                        return;
                    };
                    for (c, x) in &support {
                        match row[*c].sub_mul(&q, x) {
                            Some(v) => row[*c] = v,
                            None => {
                                overflow.store(true, Ordering::Relaxed);
                                return;
                            }
                        }
                    }
                });
                if overflow.load(Ordering::Relaxed) {
                    return None;
                }
                rows.retain(|r| r.iter().any(|x| !x.vanishes()));
                units += 1;
                progress = true;
            }
            if !progress {
                break;
            }
        }

        // Compact the remainder onto its nonzero columns.
        let width = rows.first().map(Vec::len).unwrap_or(0);
        let live: Vec<usize> = (0..width)
            .filter(|&c| rows.iter().any(|r| !r[c].vanishes()))
            .collect();
        let mut a: Vec<Vec<S>> = rows
            .into_iter()
            .map(|r| live.iter().map(|&c| r[c].clone()).collect())
            .collect();
        let diag = diagonal_reduce(&mut a)?;

        let mut nontrivial = Vec::new();
        let mut rank = units;
        for d in diag {
            rank += 1;
            let d = d.to_big().abs();
            if !d.is_one() {
                nontrivial.push(d);
            }
        }
        Some(InvariantFactors { rank, nontrivial })
    }

    fn diagonal_reduce<S: Scalar>(a: &mut [Vec<S>]) -> Option<Vec<S>> {
        let rows = a.len();
        let cols = a.first().map(Vec::len).unwrap_or(0);
        let mut diag = Vec::new();
        for t in 0..rows.min(cols) {
            loop {
                let mut best: Option<(usize, usize)> = None;
                'scan: for (r, row) in a.iter().enumerate().skip(t) {
                    for (c, x) in row.iter().enumerate().skip(t) {
                        if x.vanishes() {
                            continue;
                        }
                        if best.is_none_or(|(br, bc)| x.abs_lt(&a[br][bc])) {
                            best = Some((r, c));
                            if x.is_pm_one() {
                                break 'scan;
                            }
                        }
                    }
                }
                let Some((pr, pc)) = best else {
                    return Some(diag);
                };
                a.swap(pr, t);
                if pc != t {
                    for row in a.iter_mut() {
                        row.swap(pc, t);
                    }
                }
                let mut clean = true;
                for i in t + 1..rows {
                    if a[i][t].vanishes() {
                        continue;
                    }
                    let q = a[i][t].quot(&a[t][t])?;
                    let (lo, hi) = a.split_at_mut(i);
                    let pivot_row = &lo[t];
                    for (x, p) in hi[0].iter_mut().zip(pivot_row.iter()).skip(t) {
                        if !p.vanishes() {
                            *x = x.sub_mul(&q, p)?;
                        }
                    }
                    clean &= a[i][t].vanishes();
                }
                for j in t + 1..cols {
                    if a[t][j].vanishes() {
                        continue;
                    }
                    let q = a[t][j].quot(&a[t][t])?;
                    for row in a.iter_mut().skip(t) {
                        if !row[t].vanishes() {
                            let p = row[t].clone();
                            row[j] = row[j].sub_mul(&q, &p)?;
                        }
                    }
                    clean &= a[t][j].vanishes();
                }
                if !clean {
                    continue;
                }
                let offending =
                    (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[t][t].divides(&a[i][j])));
                match offending {
                    Some(i) => {
                        let (lo, hi) = a.split_at_mut(i);
                        for (x, y) in lo[t].iter_mut().zip(hi[0].iter()).skip(t) {
                            *x = x.plus(y)?;
                        }
                    }
                    None => break,
                }
            }
            diag.push(a[t][t].clone());
        }
        Some(diag)
    }
}

use reduce::eliminate;

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_decomposition(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(m.cols()));
        s
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        let s = check_decomposition(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.diagonal(), big(&[1, 6]));
    }

    #[test]
    fn zero_matrix_has_identity_transforms() {
        let s = check_decomposition(&IntMatrix::zeros(2, 2));
        assert_eq!(s.d, IntMatrix::zeros(2, 2));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn two_four_six_eight() {
        let s = check_decomposition(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(s.diagonal(), big(&[2, 4]));
    }

    #[test]
    fn deterministic_output() {
        let m = IntMatrix::from_rows(&[[3, 5, 7], [-2, 4, 9], [6, 6, 0]]);
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        assert_eq!((a.u, a.d, a.v), (b.u, b.d, b.v));
    }

    #[test]
    fn fast_path_agrees_on_small_cases() {
        let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        let s = smith_normal_form(&m);
        let f = invariant_factors(&m, Exec::Sequential);
        assert_eq!(s.diagonal(), big(&[2, 6, 12]));
        assert_eq!(f.rank, 3);
        assert_eq!(f.nontrivial, big(&[2, 6, 12]));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let huge = i64::MAX / 2;
        let m = IntMatrix::from_rows(&[[huge, 3], [5, huge]]);
        let f = invariant_factors(&m, Exec::Sequential);
        let s = smith_normal_form(&m);
        assert_eq!(f.rank, 2);
        let mut expected: Vec<BigInt> = s.diagonal();
        expected.retain(|d| !d.is_one());
        assert_eq!(f.nontrivial, expected);
    }

    #[test]
    fn kernel_basis_is_annihilated() {
        let m = IntMatrix::from_rows(&[[1, 2, 3], [2, 4, 6]]);
        let s = smith_normal_form(&m);
        let k = s.kernel_basis();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).unwrap().is_zero());
    }
}

//! Exact linear algebra over `Q` and prime fields `F_p` (`p ≤ 97`).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::int_matrix::IntMatrix;
use super::smith::invariant_factors;
use crate::error::{QkError, Result};
use crate::exec::Exec;

pub const MAX_PRIME: u32 = 97;

/// Ground field. Elements are carried as [`BigRational`]; over `F_p` they
/// are always integers in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Fp")]
    Prime(u32),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl Field {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(QkError::Field(format!(
                "F_{p}: characteristic must be a prime at most {MAX_PRIME}"
            )));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    pub fn one(&self) -> BigRational {
        BigRational::one()
    }

    pub fn from_i64(&self, x: i64) -> BigRational {
        self.reduce_int(BigInt::from(x))
    }

    fn reduce_int(&self, x: BigInt) -> BigRational {
        match self {
            Field::Rationals => BigRational::from_integer(x),
            Field::Prime(p) => BigRational::from_integer(x.mod_floor(&BigInt::from(*p))),
        }
    }

    /// Brings an arbitrary rational into this field; fails when the
    /// denominator vanishes modulo `p`.
    pub fn convert(&self, x: &BigRational) -> Result<BigRational> {
        match self {
            Field::Rationals => Ok(x.clone()),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(QkError::Field(format!("{x} has no image in F_{p}")));
                }
                let inv = den.modpow(&(&p - 2), &p);
                Ok(BigRational::from_integer((x.numer() * inv).mod_floor(&p)))
            }
        }
    }

    fn wrap(&self, x: BigRational) -> BigRational {
        match self {
            Field::Rationals => x,
            Field::Prime(_) => self.reduce_int(x.to_integer()),
        }
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.wrap(a + b)
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.wrap(a - b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.wrap(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.wrap(-a)
    }

    pub fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Rationals => Some(a.recip()),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                Some(BigRational::from_integer(
                    a.to_integer().modpow(&(&p - 2), &p),
                ))
            }
        }
    }

    pub fn div(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `a^n` for `n ≥ 0`.
    pub fn pow(&self, a: &BigRational, n: u64) -> BigRational {
        let mut out = self.one();
        for _ in 0..n {
            out = self.mul(&out, a);
        }
        out
    }
}

/// Dense matrix over a [`Field`], row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub pivots: Vec<usize>,
}

impl FieldMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_ints<R: AsRef<[i64]>>(field: Field, rows: &[R]) -> Self {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.as_ref().len(), cols, "ragged rows");
            for (c, &x) in row.as_ref().iter().enumerate() {
                m.set(r, c, field.from_i64(x));
            }
        }
        m
    }

    /// Columns given as vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<BigRational>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn from_rows_vec(field: Field, cols: usize, rows: &[Vec<BigRational>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols);
            data.extend(row.iter().cloned());
        }
        FieldMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    /// Adds `v` to entry `(r, c)`.
    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: &BigRational) {
        let idx = r * self.cols + c;
        self.data[idx] = self.field.add(&self.data[idx], v);
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != rhs.rows {
            return Err(QkError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let mut out = FieldMatrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = BigRational::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(QkError::Dimension("shape mismatch in subtraction".into()));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        Ok(FieldMatrix {
            data,
            ..self.clone()
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> FieldMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        FieldMatrix {
            field: self.field,
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn vstack(parts: &[FieldMatrix], field: Field, cols: usize) -> FieldMatrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            rows += p.rows;
            data.extend_from_slice(&p.data);
        }
        FieldMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn hstack(parts: &[FieldMatrix], field: Field, rows: usize) -> FieldMatrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = FieldMatrix::zeros(field, rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            for r in 0..rows {
                for c in 0..p.cols {
                    out.set(r, off + c, p.get(r, c).clone());
                }
            }
            off += p.cols;
        }
        out
    }

    /// Exact Gauss–Jordan elimination.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("nonzero pivot");
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            let pivot_row: Vec<BigRational> = m.row(row).to_vec();
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                    if !pv.is_zero() {
                        let v = f.sub(m.get(r, c), &f.mul(&factor, pv));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    /// Rank. Over `Q` the rows are scaled to integers and reduced with the
    /// integer elimination engine; over `F_p` elimination runs on machine words.
    pub fn rank(&self) -> usize {
        self.rank_with(Exec::default())
    }

    pub fn rank_with(&self, exec: Exec) -> usize {
        match self.field {
            Field::Rationals => invariant_factors(&self.scaled_to_integers(), exec).rank,
            Field::Prime(p) => rank_mod_p(self, p as u64),
        }
    }

    /// Each row multiplied by the lcm of its denominators.
    fn scaled_to_integers(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            let l = self
                .row(r)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            for c in 0..self.cols {
                let x = self.get(r, c);
                if !x.is_zero() {
                    out.set(r, c, x.numer() * (&l / x.denom()));
                }
            }
        }
        out
    }

    /// Basis of the right kernel, as columns.
    pub fn kernel_basis(&self) -> FieldMatrix {
        let rref = self.rref();
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| !rref.pivots.contains(c))
            .collect();
        let mut k = FieldMatrix::zeros(self.field, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, BigRational::one());
            for (i, &pc) in rref.pivots.iter().enumerate() {
                let v = self.field.neg(rref.matrix.get(i, fc));
                k.set(pc, j, v);
            }
        }
        k
    }

    /// Solves `self * x = b` for one column `b`, if solvable.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let aug = FieldMatrix::hstack(
            &[
                self.clone(),
                FieldMatrix::from_columns(self.field, self.rows, &[b.to_vec()]),
            ],
            self.field,
            self.rows,
        );
        let rref = aug.rref();
        if rref.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (i, &pc) in rref.pivots.iter().enumerate() {
            x[pc] = rref.matrix.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// Solves `self * X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &FieldMatrix) -> Option<FieldMatrix> {
        let cols: Option<Vec<Vec<BigRational>>> =
            (0..rhs.cols).map(|c| self.solve(&rhs.column(c))).collect();
        cols.map(|cols| FieldMatrix::from_columns(self.field, self.cols, &cols))
    }

    /// Basis of the row space (nonzero rows of the RREF).
    pub fn row_space(&self) -> FieldMatrix {
        let rref = self.rref();
        let idx: Vec<usize> = (0..rref.pivots.len()).collect();
        rref.matrix.select_rows(&idx)
    }
}

fn rank_mod_p(m: &FieldMatrix, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = (0..m.rows)
        .map(|r| {
            m.row(r)
                .iter()
                .map(|x| x.to_integer().to_u64().expect("reduced F_p entry"))
                .collect()
        })
        .collect();
    let inv = |x: u64| -> u64 {
        let mut out = 1u64;
        let (mut base, mut e) = (x % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                out = out * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        out
    };
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(pr) = (rank..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let iv = inv(a[rank][col]);
        for x in a[rank].iter_mut().skip(col) {
            *x = *x * iv % p;
        }
        let (lo, hi) = a.split_at_mut(rank + 1);
        let prow = &lo[rank];
        for row in hi.iter_mut() {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for (x, y) in row.iter_mut().zip(prow.iter()).skip(col) {
                if *y != 0 {
                    *x = (*x + p - factor * y % p) % p;
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldMatrix<{}> {}x{} [",
            self.field, self.rows, self.cols
        )?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Kernel basis (as columns) and cokernel dimension `rows − rank`.
pub fn field_kernel_cokernel(m: &FieldMatrix) -> (FieldMatrix, usize) {
    let k = m.kernel_basis();
    let rank = m.cols() - k.cols();
    (k, m.rows() - rank)
}

/// Checks that every entry of a rational already lies in the field's
/// canonical range (used when ingesting matrices).
pub fn is_canonical(field: Field, x: &BigRational) -> bool {
    match field {
        Field::Rationals => true,
        Field::Prime(p) => x.is_integer() && !x.is_negative() && x.to_integer() < BigInt::from(p),
    }
}

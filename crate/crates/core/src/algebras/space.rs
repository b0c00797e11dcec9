use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::{Field, FieldMatrix};

pub type Vector = Vec<BigRational>;

/// Subspace of `k^n` kept as a fully reduced row echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<'a>(field: Field, ambient: usize, vectors: impl IntoIterator<Item = &'a Vector>) -> Self {
        let mut s = Self::new(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not used as pivots; their unit vectors span a complement.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// `v` minus its projection along the echelon basis; zero iff `v` lies
    /// in the subspace.
    pub fn reduce(&self, v: &[BigRational]) -> Vector {
        let f = self.field;
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (x, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = f.sub(x, &f.mul(&factor, r));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[BigRational]) -> bool {
        let f = self.field;
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(&r[p]).expect("nonzero");
        for x in r.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    /// Coordinates of the class of `v` in the quotient, in the basis given
    /// by [`Subspace::complement`].
    pub fn quotient_coords(&self, v: &[BigRational]) -> Vector {
        let r = self.reduce(v);
        self.complement().into_iter().map(|c| r[c].clone()).collect()
    }

    /// Matrix of the quotient map `k^n → k^n / self`.
    pub fn quotient_matrix(&self) -> FieldMatrix {
        let comp = self.complement();
        let columns: Vec<Vector> = (0..self.ambient)
            .map(|c| self.quotient_coords(&unit_vector(self.field, self.ambient, c)))
            .collect();
        FieldMatrix::from_columns(self.field, comp.len(), &columns)
    }

    /// Columns are the basis vectors.
    pub fn basis_matrix(&self) -> FieldMatrix {
        FieldMatrix::from_columns(self.field, self.ambient, &self.rows)
    }
}

pub fn unit_vector(field: Field, n: usize, i: usize) -> Vector {
    let mut v = vec![field.zero(); n];
    v[i] = BigRational::one();
    v
}

pub fn is_zero_vector(v: &[BigRational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_scaled(field: Field, acc: &mut [BigRational], k: &BigRational, v: &[BigRational]) {
    if k.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = field.add(a, &field.mul(k, x));
        }
    }
}

pub fn sub_vectors(field: Field, a: &[BigRational], b: &[BigRational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| field.sub(x, y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_quotient() {
        let f = Field::Rationals;
        let v = |xs: &[i64]| xs.iter().map(|&x| f.from_i64(x)).collect::<Vector>();
        let mut s = Subspace::new(f, 3);
        assert!(s.insert(&v(&[1, 1, 0])));
        assert!(!s.insert(&v(&[2, 2, 0])));
        assert!(s.insert(&v(&[0, 1, 1])));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&v(&[1, 2, 1])));
        assert_eq!(s.complement(), vec![2]);
        // e_0 ≡ e_2 modulo the span
        assert_eq!(s.quotient_coords(&v(&[1, 0, 0])), v(&[1]));
    }
}

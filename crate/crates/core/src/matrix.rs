//! Dense exact matrices and the row-reduction kernels built on them.

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<E> {
    pub rank: usize,
    pub reduced: Matrix<E>,
    pub pivots: Vec<usize>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn filled(rows: usize, cols: usize, e: E) -> Self {
        Self {
            rows,
            cols,
            data: vec![e; rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<E>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, e: E) {
        self.data[r * self.cols + c] = e;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let rows: Vec<Vec<E>> = idx.iter().map(|&r| self.row(r).to_vec()).collect();
        Self::from_rows(self.cols, &rows)
    }
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, f.zero())
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|e| f.is_zero(e))
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn apply<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|r| dot(f, self.row(r), v))
            .collect()
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, s: &E) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, s)).collect(),
        }
    }

    pub fn rref<F: Field<Elem = E>>(&self, f: &F) -> Rref<E> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            rank: pivots.len(),
            reduced: m,
            pivots,
        }
    }

    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        self.rref(f).rank
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn kernel_basis<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let Rref {
            reduced, pivots, ..
        } = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(reduced.get(r, free));
            }
            out.push(v);
        }
        out
    }

    pub fn solve<F: Field<Elem = E>>(&self, f: &F, b: &[E]) -> Option<Vec<E>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Self::zeros(f, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let Rref {
            reduced, pivots, ..
        } = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = reduced.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn invert<F: Field<Elem = E>>(&self, f: &F) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(f, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, f.one());
        }
        let red = aug.rref(f);
        if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut out = Self::zeros(f, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, red.reduced.get(r, n + c).clone());
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if f.is_zero(x) || f.is_zero(y) {
            continue;
        }
        acc = f.add(&acc, &f.mul(x, y));
    }
    acc
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|e| f.is_zero(e))
}

/// `a + s * b`, in place.
pub fn axpy<F: Field>(f: &F, a: &mut [F::Elem], s: &F::Elem, b: &[F::Elem]) {
    if f.is_zero(s) {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !f.is_zero(y) {
            *x = f.add(x, &f.mul(s, y));
        }
    }
}

pub fn scale_vec<F: Field>(f: &F, v: &[F::Elem], s: &F::Elem) -> Vec<F::Elem> {
    v.iter().map(|x| f.mul(x, s)).collect()
}

pub fn rank_of<F: Field>(f: &F, cols: usize, rows: &[Vec<F::Elem>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(cols, rows).rank(f)
}

/// A subspace of `F^n` held in reduced row-echelon form, so that equal
/// subspaces have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Echelon<E> {
    pub ambient: usize,
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
}

impl<E: Clone + PartialEq> Echelon<E> {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn span<F: Field<Elem = E>>(f: &F, ambient: usize, vecs: &[Vec<E>]) -> Self {
        let mut e = Self::zero(ambient);
        for v in vecs {
            e.insert(f, v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the rows; the result is zero iff `v` lies in the span.
    pub fn reduce<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&w[p]) {
                let s = f.neg(&w[p]);
                axpy(f, &mut w, &s, row);
            }
        }
        w
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        is_zero_vec(f, &self.reduce(f, v))
    }

    pub fn contains_space<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        other.rows.iter().all(|r| self.contains(f, r))
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert<F: Field<Elem = E>>(&mut self, f: &F, v: &[E]) -> bool {
        let w = self.reduce(f, v);
        let Some(p) = w.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&w[p]).expect("nonzero");
        let w = scale_vec(f, &w, &inv);
        for row in self.rows.iter_mut() {
            if !f.is_zero(&row[p]) {
                let s = f.neg(&row[p]);
                axpy(f, row, &s, &w);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, w);
        self.pivots.insert(at, p);
        true
    }

    /// Coordinates of a member `v` in terms of the rows.
    pub fn coords<F: Field<Elem = E>>(&self, _f: &F, v: &[E]) -> Vec<E> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn sum<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut e = self.clone();
        for r in &other.rows {
            e.insert(f, r);
        }
        e
    }

    pub fn intersect<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        // Kernel of [A; -B]^T gives the common vectors.
        let n = self.ambient;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Self::zero(n);
        }
        let mut m = Matrix::zeros(f, n, a + b);
        for (j, r) in self.rows.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, r[i].clone());
            }
        }
        for (j, r) in other.rows.iter().enumerate() {
            for i in 0..n {
                m.set(i, a + j, f.neg(&r[i]));
            }
        }
        let mut out = Self::zero(n);
        for k in m.kernel_basis(f) {
            let mut v = vec![f.zero(); n];
            for (j, r) in self.rows.iter().enumerate() {
                axpy(f, &mut v, &k[j], r);
            }
            out.insert(f, &v);
        }
        out
    }

    /// Non-pivot coordinates, giving a basis of the quotient `F^n / self`.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        let f = Rationals;
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect();
        Matrix::from_rows(cols, &rows)
    }

    #[test]
    fn rref_identity_and_zero() {
        let f = Rationals;
        let id = Matrix::identity(&f, 2);
        let r = id.rref(&f);
        assert_eq!((r.rank, r.pivots.clone()), (2, vec![0, 1]));
        assert_eq!(r.reduced, id);
        let z = Matrix::zeros(&f, 3, 3);
        let r = z.rref(&f);
        assert_eq!((r.rank, r.pivots.len()), (0, 0));
        assert_eq!(r.reduced, z);
    }

    #[test]
    fn rref_over_f2() {
        let f = PrimeField::new(2).unwrap();
        let m = Matrix::from_rows(2, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(m.rank(&f), 1);
    }

    #[test]
    fn kernel_examples() {
        let f = Rationals;
        assert!(Matrix::identity(&f, 3).kernel_basis(&f).is_empty());
        assert_eq!(Matrix::zeros(&f, 2, 3).kernel_basis(&f).len(), 3);
        let k = qm(&[&[1, 2]]).kernel_basis(&f);
        assert_eq!(k.len(), 1);
        // proportional to (-2, 1)
        assert_eq!(f.mul(&k[0][0], &f.one()), f.mul(&k[0][1], &f.from_i64(-2)));
    }

    #[test]
    fn solve_examples() {
        let f = Rationals;
        let b = vec![f.from_i64(4), f.from_i64(-1)];
        assert_eq!(Matrix::identity(&f, 2).solve(&f, &b), Some(b.clone()));
        let m = qm(&[&[1, 1]]);
        let x = m.solve(&f, &[f.from_i64(3)]).unwrap();
        assert_eq!(m.apply(&f, &x), vec![f.from_i64(3)]);
        assert_eq!(qm(&[&[0]]).solve(&f, &[f.one()]), None);
    }

    #[test]
    fn invert_examples() {
        let f = Rationals;
        assert_eq!(
            Matrix::identity(&f, 3).invert(&f).unwrap(),
            Matrix::identity(&f, 3)
        );
        let q = 7;
        assert_eq!(qm(&[&[1, q], &[0, 1]]).invert(&f).unwrap(), qm(&[&[1, -q], &[0, 1]]));
        assert_eq!(qm(&[&[0]]).invert(&f), Err(Error::Singular));
    }

    #[test]
    fn echelon_intersection() {
        let f = Rationals;
        let v = |xs: &[i64]| xs.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
        let a = Echelon::span(&f, 3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Echelon::span(&f, 3, &[v(&[1, 1, 1]), v(&[0, 1, 0])]);
        let c = a.intersect(&f, &b);
        assert_eq!(c, Echelon::span(&f, 3, &[v(&[0, 2, 0])]));
        assert_eq!(a.sum(&f, &b).dim(), 3);
    }

    fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), prop::collection::vec(-3i64..4, r * c))
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent((r, c, xs) in small_matrix()) {
            let f = Rationals;
            let m = Matrix::from_vec(r, c, xs.iter().map(|&x| f.from_i64(x)).collect()).unwrap();
            let once = m.rref(&f);
            let twice = once.reduced.rref(&f);
            prop_assert_eq!(&once.reduced, &twice.reduced);
            prop_assert_eq!(once.rank + m.kernel_basis(&f).len(), c);
            for k in m.kernel_basis(&f) {
                prop_assert!(is_zero_vec(&f, &m.apply(&f, &k)));
            }
        }

        #[test]
        fn solve_is_exact((r, c, xs) in small_matrix(), ys in prop::collection::vec(-3i64..4, 5)) {
            let f = PrimeField::new(5).unwrap();
            let m = Matrix::from_vec(r, c, xs.iter().map(|&x| f.from_i64(x)).collect()).unwrap();
            let b: Vec<u32> = ys[..r].iter().map(|&y| f.from_i64(y)).collect();
            if let Some(x) = m.solve(&f, &b) {
                prop_assert_eq!(m.apply(&f, &x), b);
            }
        }

        #[test]
        fn inverse_round_trip(xs in prop::collection::vec(-4i64..5, 9)) {
            let f = Rationals;
            let m = Matrix::from_vec(3, 3, xs.iter().map(|&x| f.from_i64(x)).collect()).unwrap();
            match m.invert(&f) {
                Ok(inv) => prop_assert_eq!(m.mul(&f, &inv), Matrix::identity(&f, 3)),
                Err(_) => prop_assert!(m.rank(&f) < 3),
            }
        }
    }
}

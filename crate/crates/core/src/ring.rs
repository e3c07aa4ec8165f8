//! The minimal ring interface shared by polynomial and localized elements,
//! so determinant sums and matrix products are written once.

use crate::presentation::{Element, Presentation};
use crate::scalars::Laurent;

pub trait Ring {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &Laurent) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `q^e` in the coefficient ring of this algebra.
    fn q_pow(&self, e: i32) -> Laurent;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.scale(b, &Laurent::from_int(-1)))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }
}

impl Ring for Presentation {
    type Elem = Element;

    fn zero(&self) -> Element {
        Element::zero()
    }
    fn one(&self) -> Element {
        Element::one()
    }
    fn add(&self, a: &Element, b: &Element) -> Element {
        a.add(b)
    }
    fn mul(&self, a: &Element, b: &Element) -> Element {
        Presentation::mul(self, a, b)
    }
    fn scale(&self, a: &Element, c: &Laurent) -> Element {
        a.scale(c)
    }
    fn is_zero(&self, a: &Element) -> bool {
        a.is_zero()
    }
    fn q_pow(&self, e: i32) -> Laurent {
        Presentation::q_pow(self, e)
    }
}

/// A dense square or rectangular matrix over a [`Ring`].
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: E) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!(a.cols, b.rows, "matrix shape mismatch");
    Matrix::from_fn(a.rows, b.cols, |i, j| {
        let mut acc = ring.zero();
        for k in 0..a.cols {
            let t = ring.mul(a.get(i, k), b.get(k, j));
            acc = ring.add(&acc, &t);
        }
        acc
    })
}

pub fn mat_add<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    Matrix::from_fn(a.rows, a.cols, |i, j| ring.add(a.get(i, j), b.get(i, j)))
}

pub fn mat_sub<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    Matrix::from_fn(a.rows, a.cols, |i, j| ring.sub(a.get(i, j), b.get(i, j)))
}

pub fn mat_neg<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    a.map(|e| ring.scale(e, &Laurent::from_int(-1)))
}

/// First entry where `a` and `b` differ.
pub fn mat_diff<R: Ring>(
    ring: &R,
    a: &Matrix<R::Elem>,
    b: &Matrix<R::Elem>,
) -> Option<(usize, usize)> {
    for i in 0..a.rows {
        for j in 0..a.cols {
            if !ring.equal(a.get(i, j), b.get(i, j)) {
                return Some((i, j));
            }
        }
    }
    None
}

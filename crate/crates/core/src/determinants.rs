//! Quantum determinants of the diagonal blocks, their minors and the
//! identities they satisfy inside the polynomial algebra.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::{Element, Letter, Presentation};
use crate::ring::{Matrix, Ring};
use crate::scalars::Laurent;

/// Which diagonal block a view or determinant lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Block {
    B11,
    B22,
}

/// Sign convention of the permutation weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DetConvention {
    /// `(-q)^{-l(σ)}`, used for the even block `X11`.
    QInverse,
    /// `(-q)^{l(σ)}`, used for `X22`.
    Q,
}

impl Block {
    pub fn convention(self) -> DetConvention {
        match self {
            Block::B11 => DetConvention::QInverse,
            Block::B22 => DetConvention::Q,
        }
    }
}

impl DetConvention {
    fn sign(self) -> i32 {
        match self {
            DetConvention::QInverse => -1,
            DetConvention::Q => 1,
        }
    }

    /// `(-q)^{±k}` in the coefficient ring of `ring`.
    pub fn weight<R: Ring>(self, ring: &R, k: i32) -> Laurent {
        let e = self.sign() * k;
        let s = if e.rem_euclid(2) == 0 { 1 } else { -1 };
        ring.q_pow(e).scale(&crate::scalars::int(s))
    }
}

/// A permutation of `0..k` with its inversion count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    pub images: Vec<usize>,
    pub length: usize,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Self {
        let mut length = 0;
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if images[i] > images[j] {
                    length += 1;
                }
            }
        }
        Self { images, length }
    }

    /// All permutations of `0..k` in lexicographic order.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        let mut used = vec![false; k];
        fn rec(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == k {
                out.push(Permutation::new(cur.clone()));
                return;
            }
            for i in 0..k {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(k, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(k, &mut cur, &mut used, &mut out);
        out
    }
}

/// A square selection of rows and columns from one diagonal block.
/// Indices are absolute (1-based) matrix indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrixView {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub block: Block,
}

impl QMatrixView {
    pub fn new(p: &Presentation, rows: Vec<usize>, cols: Vec<usize>, block: Block) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::InvalidView(format!(
                "{} rows but {} columns",
                rows.len(),
                cols.len()
            )));
        }
        let (lo, hi) = match block {
            Block::B11 => (1, p.m()),
            Block::B22 => (p.m() + 1, p.size()),
        };
        for &i in rows.iter().chain(&cols) {
            if i < lo || i > hi {
                return Err(Error::InvalidView(format!(
                    "index {i} outside block {block:?}"
                )));
            }
        }
        let distinct = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if !distinct(&rows) || !distinct(&cols) {
            return Err(Error::InvalidView(
                "indices must be strictly increasing".into(),
            ));
        }
        Ok(Self { rows, cols, block })
    }

    /// The whole block.
    pub fn full(p: &Presentation, block: Block) -> Self {
        let idx: Vec<usize> = match block {
            Block::B11 => (1..=p.m()).collect(),
            Block::B22 => (p.m() + 1..=p.size()).collect(),
        };
        Self {
            rows: idx.clone(),
            cols: idx,
            block,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The view with row position `r` and column position `s` removed.
    pub fn minor(&self, r: usize, s: usize) -> Self {
        let mut rows = self.rows.clone();
        let mut cols = self.cols.clone();
        rows.remove(r);
        cols.remove(s);
        Self {
            rows,
            cols,
            block: self.block,
        }
    }

    pub fn matrix(&self, p: &Presentation) -> Matrix<Element> {
        Matrix::from_fn(self.dim(), self.dim(), |i, j| {
            p.gen_element(p.a(self.rows[i], self.cols[j]))
        })
    }
}

/// `Σ_σ w(σ) m_{1σ(1)} ⋯ m_{kσ(k)}` over any ring, products in row order.
pub fn qdet_matrix<R: Ring>(ring: &R, m: &Matrix<R::Elem>, conv: DetConvention) -> R::Elem {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let mut acc = ring.zero();
    for perm in Permutation::all(m.rows) {
        let mut term = ring.one();
        for (i, &j) in perm.images.iter().enumerate() {
            term = ring.mul(&term, m.get(i, j));
            if ring.is_zero(&term) {
                break;
            }
        }
        let w = conv.weight(ring, perm.length as i32);
        acc = ring.add(&acc, &ring.scale(&term, &w));
    }
    acc
}

/// The quantum determinant of a view. The empty view has determinant 1.
pub fn qdet(p: &Presentation, view: &QMatrixView) -> Element {
    qdet_matrix(p, &view.matrix(p), view.block.convention())
}

/// `D_m`, the quantum determinant of `X11`.
pub fn dm(p: &Presentation) -> Element {
    qdet(p, &QMatrixView::full(p, Block::B11))
}

/// `D_n`, the quantum determinant of `X22`.
pub fn dn(p: &Presentation) -> Element {
    qdet(p, &QMatrixView::full(p, Block::B22))
}

pub fn block_det(p: &Presentation, block: Block) -> Element {
    qdet(p, &QMatrixView::full(p, block))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaplaceReport {
    /// Expansion along row position `row` with the entries on the right.
    pub expansion_ok: bool,
    /// The alien expansion (minors from row 0 paired with the last row) vanishes.
    pub alien_ok: bool,
    pub witness: Option<String>,
}

impl LaplaceReport {
    pub fn pass(&self) -> bool {
        self.expansion_ok && self.alien_ok
    }
}

/// Checks `D = Σ_s (-q)^{±(s-r)} D(r̂, ŝ) x_{r s}` for row position `r`,
/// together with the vanishing of the alien cofactor sum.
pub fn laplace_check(p: &Presentation, view: &QMatrixView, row: usize) -> Result<LaplaceReport> {
    let k = view.dim();
    if k == 0 || row >= k {
        return Err(Error::InvalidView(format!(
            "row position {row} out of range for a {k}x{k} view"
        )));
    }
    let conv = view.block.convention();
    let d = qdet(p, view);
    let expansion = |r: usize, entry_row: usize| {
        let mut acc = Element::zero();
        for s in 0..k {
            let minor = qdet(p, &view.minor(r, s));
            let x = p.gen_element(p.a(view.rows[entry_row], view.cols[s]));
            let w = conv.weight(p, r as i32 - s as i32);
            acc.add_scaled(&p.mul(&minor, &x), &w);
        }
        acc
    };
    let diff = expansion(row, row).sub(&d);
    let expansion_ok = diff.is_zero();
    let alien = if k > 1 {
        expansion(0, k - 1)
    } else {
        Element::zero()
    };
    let alien_ok = alien.is_zero();
    let witness = if !expansion_ok {
        Some(format!("expansion - D = {}", p.format_element(&diff)))
    } else if !alien_ok {
        Some(format!("alien sum = {}", p.format_element(&alien)))
    } else {
        None
    };
    Ok(LaplaceReport {
        expansion_ok,
        alien_ok,
        witness,
    })
}

/// How a determinant interacts with a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Commutation {
    Central,
    /// `D g = q^e g D`.
    QScalar(i32),
    /// Neither; carries `D g - g D`.
    Polynomial(Element),
}

/// If `a = c * b` for a scalar monomial `c = q^e`, returns `e`.
fn monomial_ratio(p: &Presentation, a: &Element, b: &Element) -> Option<i32> {
    let (w, cb) = b.terms().next()?;
    let ca = a.coeff(w);
    for e in -64..=64 {
        if (cb * &p.q_pow(e)) == ca && a.sub(&b.scale(&p.q_pow(e))).is_zero() {
            return Some(e);
        }
    }
    None
}

pub fn det_commutation_check(p: &Presentation, block: Block, g: Letter) -> Commutation {
    let d = block_det(p, block);
    let x = p.gen_element(g);
    let dg = p.mul(&d, &x);
    let gd = p.mul(&x, &d);
    if dg == gd {
        return Commutation::Central;
    }
    match monomial_ratio(p, &dg, &gd) {
        Some(e) => Commutation::QScalar(e),
        None => Commutation::Polynomial(dg.sub(&gd)),
    }
}

/// For a word with one factor from each row of the block (or one from
/// each column), verifies `D w = q^{-t} w D` and returns `t`, the number
/// of odd factors.
pub fn det_scaling_check(p: &Presentation, block: Block, word: &[Letter]) -> Result<i32> {
    let idx: Vec<usize> = QMatrixView::full(p, block).rows;
    let rows: Vec<usize> = word.iter().map(|l| p.generator(*l).row).collect();
    let cols: Vec<usize> = word.iter().map(|l| p.generator(*l).col).collect();
    if rows != idx && cols != idx {
        return Err(Error::MalformedWord(format!(
            "expected one factor per row or per column of block {block:?}"
        )));
    }
    let t = p.odd_count(word) as i32;
    let d = block_det(p, block);
    let w = p.normal_form(word, &Laurent::one());
    let lhs = p.mul(&d, &w);
    let rhs = p.mul(&w, &d).scale(&p.q_pow(-t));
    if lhs.sub(&rhs).is_zero() {
        Ok(t)
    } else {
        Err(Error::PostCondition(format!(
            "D w - q^-{t} w D = {}",
            p.format_element(&lhs.sub(&rhs))
        )))
    }
}

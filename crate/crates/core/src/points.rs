//! Points of `GL(m|n)` over a Grassmann algebra at `q = 1`: supermatrices,
//! their Berezinian, and the group law induced by the comultiplication.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::determinants::{qdet_matrix, DetConvention};
use crate::error::{Error, Result};
use crate::hopf::{AxiomResult, Hopf, Tensor};
use crate::localization::{LocElement, LocKey};
use crate::presentation::{Element, Presentation, QMode};
use crate::ring::{identity, mat_diff, mat_mul, mat_sub, Matrix, Ring};
use crate::scalars::{int, rat, Laurent, Rational};

/// Sign of `θ_a θ_b` rewritten as `θ_{a ∪ b}` with indices increasing;
/// zero if the subsets meet.
fn merge_sign(a: u32, b: u32) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// An element of the exterior algebra on `θ_1..θ_N`, keyed by subset bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Grassmann {
    terms: BTreeMap<u32, Rational>,
}

impl Grassmann {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(mask: u32, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(mask, &c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Coefficient of the empty subset.
    pub fn body(&self) -> Rational {
        self.terms.get(&0).cloned().unwrap_or_else(Rational::zero)
    }

    /// `self - body`.
    pub fn soul(&self) -> Grassmann {
        let mut out = self.clone();
        out.terms.remove(&0);
        out
    }

    /// `Some(0)` or `Some(1)` for homogeneous elements; zero counts as even.
    pub fn parity(&self) -> Option<u8> {
        let mut parities = self.terms.keys().map(|m| (m.count_ones() % 2) as u8);
        let first = parities.next().unwrap_or(0);
        parities.all(|p| p == first).then_some(first)
    }

    pub fn add_term(&mut self, mask: u32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, other: &Grassmann) -> Grassmann {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &Grassmann) -> Grassmann {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Grassmann {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Grassmann) -> Grassmann {
        let mut out = Self::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                match merge_sign(a, b) {
                    0 => {}
                    s => out.add_term(a | b, &(x * y * int(s as i64))),
                }
            }
        }
        out
    }
}

impl fmt::Display for Grassmann {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mask, c) in self.terms() {
            let thetas: Vec<String> = (0..32)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| format!("t{}", i + 1))
                .collect();
            let word = thetas.join("*");
            let piece = match (word.is_empty(), c == &Rational::one(), c == &int(-1)) {
                (true, _, _) => c.to_string(),
                (false, true, _) => word,
                (false, _, true) => format!("-{word}"),
                _ => format!("{c}*{word}"),
            };
            if !first && !piece.starts_with('-') {
                write!(f, " + {piece}")?;
            } else if !first {
                write!(f, " - {}", &piece[1..])?;
            } else {
                write!(f, "{piece}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// The Grassmann algebra `Λ(θ_1..θ_N)` as a coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrassmannAlgebra {
    n: usize,
}

impl GrassmannAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if n > 24 {
            return Err(Error::Config(format!("{n} odd units is too many")));
        }
        Ok(Self { n })
    }

    pub fn num_units(&self) -> usize {
        self.n
    }

    /// `θ_i`, 1-based.
    pub fn theta(&self, i: usize) -> Result<Grassmann> {
        if i == 0 || i > self.n {
            return Err(Error::UnknownGenerator(format!("t{i}")));
        }
        Ok(Grassmann::monomial(1 << (i - 1), Rational::one()))
    }

    /// All subset masks of the given parity, excluding the empty one.
    pub fn souls(&self, parity: u8) -> Vec<u32> {
        (1..1u32 << self.n)
            .filter(|m| (m.count_ones() % 2) as u8 == parity)
            .collect()
    }

    fn contains(&self, a: &Grassmann) -> bool {
        a.terms().all(|(m, _)| m >> self.n == 0)
    }

    /// Inverse of an even element via the Neumann series in its soul.
    pub fn even_inverse(&self, a: &Grassmann) -> Result<Grassmann> {
        if a.parity() != Some(0) {
            return Err(Error::NotInvertible(format!("{a} is not even")));
        }
        let body = a.body();
        if body.is_zero() {
            return Err(Error::NotInvertible(format!("{a} has zero body")));
        }
        let inv_body = body.recip();
        let step = a.soul().scale(&-inv_body.clone());
        let mut pow = Grassmann::one();
        let mut acc = Grassmann::zero();
        for _ in 0..=self.n / 2 + 1 {
            acc = acc.add(&pow);
            pow = pow.mul(&step);
            if pow.is_zero() {
                break;
            }
        }
        Ok(acc.scale(&inv_body))
    }
}

impl Ring for GrassmannAlgebra {
    type Elem = Grassmann;

    fn zero(&self) -> Grassmann {
        Grassmann::zero()
    }
    fn one(&self) -> Grassmann {
        Grassmann::one()
    }
    fn add(&self, a: &Grassmann, b: &Grassmann) -> Grassmann {
        a.add(b)
    }
    fn mul(&self, a: &Grassmann, b: &Grassmann) -> Grassmann {
        a.mul(b)
    }
    /// Coefficients are read at `q = 1`.
    fn scale(&self, a: &Grassmann, c: &Laurent) -> Grassmann {
        a.scale(&c.eval(&Rational::one()).expect("q = 1 is a unit"))
    }
    fn is_zero(&self, a: &Grassmann) -> bool {
        a.is_zero()
    }
    fn q_pow(&self, _e: i32) -> Laurent {
        Laurent::one()
    }
}

/// Ordinary determinant of a matrix with pairwise commuting entries.
pub fn even_det(alg: &GrassmannAlgebra, m: &Matrix<Grassmann>) -> Grassmann {
    qdet_matrix(alg, m, DetConvention::Q)
}

/// Inverse of a matrix with even entries, by the adjugate.
pub fn even_matrix_inverse(alg: &GrassmannAlgebra, m: &Matrix<Grassmann>) -> Result<Matrix<Grassmann>> {
    let k = m.rows;
    let det_inv = alg.even_inverse(&even_det(alg, m))?;
    let mut out = Matrix::from_fn(k, k, |_, _| Grassmann::zero());
    for i in 0..k {
        for j in 0..k {
            let minor = Matrix::from_fn(k - 1, k - 1, |r, s| {
                let r = if r < j { r } else { r + 1 };
                let s = if s < i { s } else { s + 1 };
                m.get(r, s).clone()
            });
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let cof = even_det(alg, &minor).scale(&int(sign));
            out.set(i, j, cof.mul(&det_inv));
        }
    }
    Ok(out)
}

/// An `(m+n)×(m+n)` matrix over a Grassmann algebra, rows and columns
/// `1..=m` even and the rest odd.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperMatrix {
    pub m: usize,
    pub n: usize,
    pub entries: Matrix<Grassmann>,
}

impl SuperMatrix {
    pub fn new(m: usize, n: usize, entries: Matrix<Grassmann>) -> Result<Self> {
        if entries.rows != m + n || entries.cols != m + n {
            return Err(Error::InvalidSize { m, n });
        }
        Ok(Self { m, n, entries })
    }

    pub fn identity(m: usize, n: usize) -> Self {
        let alg = GrassmannAlgebra { n: 0 };
        Self {
            m,
            n,
            entries: identity(&alg, m + n),
        }
    }

    pub fn size(&self) -> usize {
        self.m + self.n
    }

    /// Entry at 1-based `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> &Grassmann {
        self.entries.get(i - 1, j - 1)
    }

    /// Parity an entry must have: even on the diagonal blocks.
    pub fn slot_parity(&self, i: usize, j: usize) -> u8 {
        ((i > self.m) != (j > self.m)) as u8
    }

    /// First entry whose parity is wrong, 1-based.
    pub fn parity_violation(&self) -> Option<(usize, usize)> {
        for i in 1..=self.size() {
            for j in 1..=self.size() {
                let e = self.entry(i, j);
                if !e.is_zero() && e.parity() != Some(self.slot_parity(i, j)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// The diagonal block `G11` (`first`) or `G22`.
    pub fn diagonal_block(&self, first: bool) -> Matrix<Grassmann> {
        let (off, k) = if first { (0, self.m) } else { (self.m, self.n) };
        Matrix::from_fn(k, k, |i, j| self.entries.get(off + i, off + j).clone())
    }

    fn sub_block(&self, r0: usize, rk: usize, c0: usize, ck: usize) -> Matrix<Grassmann> {
        Matrix::from_fn(rk, ck, |i, j| self.entries.get(r0 + i, c0 + j).clone())
    }

    /// Numeric matrix of bodies.
    pub fn body(&self) -> Matrix<Rational> {
        self.entries.map(|e| e.body())
    }

    /// Bodies of the two diagonal blocks: the point of `GL(m) × GL(n)`
    /// obtained by killing every odd unit.
    pub fn reduced(&self) -> (Matrix<Rational>, Matrix<Rational>) {
        let b = self.body();
        let g11 = Matrix::from_fn(self.m, self.m, |i, j| b.get(i, j).clone());
        let g22 = Matrix::from_fn(self.n, self.n, |i, j| b.get(self.m + i, self.m + j).clone());
        (g11, g22)
    }

    pub fn is_invertible(&self, alg: &GrassmannAlgebra) -> bool {
        [true, false]
            .iter()
            .all(|&f| !even_det(alg, &self.diagonal_block(f)).body().is_zero())
    }
}

pub fn supermatrix_mul(alg: &GrassmannAlgebra, a: &SuperMatrix, b: &SuperMatrix) -> Result<SuperMatrix> {
    if (a.m, a.n) != (b.m, b.n) {
        return Err(Error::InvalidSize { m: b.m, n: b.n });
    }
    SuperMatrix::new(a.m, a.n, mat_mul(alg, &a.entries, &b.entries))
}

/// `Ber = det(G22)^-1 det(G11 - Γ12 G22^-1 Γ21)`.
pub fn berezinian_point(alg: &GrassmannAlgebra, x: &SuperMatrix) -> Result<Grassmann> {
    let (m, n) = (x.m, x.n);
    let g22 = x.diagonal_block(false);
    let g22_inv = even_matrix_inverse(alg, &g22)?;
    let schur = mat_sub(
        alg,
        &x.diagonal_block(true),
        &mat_mul(
            alg,
            &mat_mul(alg, &x.sub_block(0, m, m, n), &g22_inv),
            &x.sub_block(m, n, 0, m),
        ),
    );
    let top = even_det(alg, &schur);
    if top.body().is_zero() {
        return Err(Error::NotInvertible("G11 block has singular body".into()));
    }
    Ok(alg.even_inverse(&even_det(alg, &g22))?.mul(&top))
}

/// The superalgebra morphism `k[GL(m|n)] → Λ` sending `a_ij` to the entries
/// of a point and the inverse determinants to the inverses of the
/// diagonal-block determinants.
pub struct Evaluation<'a> {
    alg: GrassmannAlgebra,
    point: &'a SuperMatrix,
    size: usize,
    dm_inv: Grassmann,
    dn_inv: Grassmann,
}

impl<'a> Evaluation<'a> {
    pub fn new(alg: &GrassmannAlgebra, p: &Presentation, point: &'a SuperMatrix) -> Result<Self> {
        if *p.qmode() != QMode::Classical {
            return Err(Error::Config("points are evaluated at q = 1 only".into()));
        }
        if (p.m(), p.n()) != (point.m, point.n) {
            return Err(Error::InvalidSize { m: point.m, n: point.n });
        }
        let dm_inv = alg.even_inverse(&even_det(alg, &point.diagonal_block(true)))?;
        let dn_inv = alg.even_inverse(&even_det(alg, &point.diagonal_block(false)))?;
        Ok(Self {
            alg: *alg,
            point,
            size: p.size(),
            dm_inv,
            dn_inv,
        })
    }

    pub fn word(&self, w: &[u8]) -> Grassmann {
        w.iter().fold(Grassmann::one(), |acc, &l| {
            let (i, j) = (l as usize / self.size, l as usize % self.size);
            acc.mul(self.point.entries.get(i, j))
        })
    }

    pub fn key(&self, k: &LocKey) -> Grassmann {
        let mut out = self.word(&k.word);
        for _ in 0..k.dm {
            out = out.mul(&self.dm_inv);
        }
        for _ in 0..k.dn {
            out = out.mul(&self.dn_inv);
        }
        out
    }

    pub fn element(&self, e: &Element) -> Grassmann {
        let mut acc = Grassmann::zero();
        for (w, c) in e.terms() {
            acc = acc.add(&self.alg.scale(&self.word(w), c));
        }
        acc
    }

    pub fn loc(&self, x: &LocElement) -> Grassmann {
        let mut acc = Grassmann::zero();
        for (k, c) in x.terms() {
            acc = acc.add(&self.alg.scale(&self.key(k), c));
        }
        acc
    }

    pub fn matrix(&self, x: &Matrix<LocElement>) -> Matrix<Grassmann> {
        x.map(|e| self.loc(e))
    }
}

/// `(x_1 ⊗ ⋯ ⊗ x_k)(t)` multiplied out in `Λ`. The evaluations are even
/// maps, so no Koszul sign appears.
pub fn eval_tensor(t: &Tensor, legs: &[&Evaluation]) -> Grassmann {
    assert_eq!(t.legs(), legs.len(), "one evaluation per leg");
    let mut acc = Grassmann::zero();
    for (keys, c) in t.terms() {
        let value = keys
            .iter()
            .zip(legs)
            .fold(Grassmann::one(), |v, (k, e)| v.mul(&e.key(k)));
        acc = acc.add(&legs[0].alg.scale(&value, c));
    }
    acc
}

/// Whether `a_ij ↦ x_ij` extends to a superalgebra morphism: entries of
/// the right parity, invertible diagonal blocks, and every defining
/// relation sent to zero.
pub fn matrix_to_hom_check(p: &Presentation, alg: &GrassmannAlgebra, x: &SuperMatrix) -> bool {
    if x.parity_violation().is_some() || x.entries.entries.iter().any(|e| !alg.contains(e)) {
        return false;
    }
    let Ok(ev) = Evaluation::new(alg, p, x) else {
        return false;
    };
    p.rewrite_rules().iter().all(|r| {
        let lhs = r
            .lhs
            .iter()
            .fold(Grassmann::one(), |acc, g| acc.mul(x.entry(g.row, g.col)));
        lhs.sub(&ev.element(&r.rhs)).is_zero()
    })
}

/// Compares `m ∘ (x_1 ⊗ x_2) ∘ Δ` with evaluation at `x_1 x_2` on every
/// generator and on both inverse determinants.
pub fn hom_product_check(
    h: &Hopf,
    alg: &GrassmannAlgebra,
    x1: &SuperMatrix,
    x2: &SuperMatrix,
) -> Result<AxiomResult> {
    let p = h.loc().presentation();
    let prod = supermatrix_mul(alg, x1, x2)?;
    let (e1, e2, e12) = (
        Evaluation::new(alg, p, x1)?,
        Evaluation::new(alg, p, x2)?,
        Evaluation::new(alg, p, &prod)?,
    );
    let mut keys: Vec<LocKey> = (0..p.num_generators() as u8)
        .map(|l| LocKey::new(vec![l], 0, 0))
        .collect();
    keys.push(LocKey::new(vec![], 1, 0));
    keys.push(LocKey::new(vec![], 0, 1));
    for k in &keys {
        let via_delta = eval_tensor(&h.delta_key(k), &[&e1, &e2]);
        let direct = e12.key(k);
        if via_delta != direct {
            let name = h.loc().format(&LocElement::term(k.clone(), Laurent::one()));
            return Ok(AxiomResult::new(
                "hom-product",
                false,
                Some(format!("{name}: via delta {via_delta}, at product {direct}")),
            ));
        }
    }
    Ok(AxiomResult::new("hom-product", true, None))
}

const BODY_DIAGONAL: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)];

/// Seeded generator of parity-correct invertible points. Diagonal-block
/// bodies are `L U` with `L` unipotent and `U` upper triangular with
/// nonzero diagonal; soul coefficients are drawn from `{-1, 0, 1}`.
pub struct PointSampler {
    alg: GrassmannAlgebra,
    m: usize,
    n: usize,
    rng: ChaCha8Rng,
}

impl PointSampler {
    pub fn new(alg: GrassmannAlgebra, m: usize, n: usize, seed: u64) -> Self {
        Self {
            alg,
            m,
            n,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn small(&mut self) -> Rational {
        int(self.rng.gen_range(-1..=1))
    }

    fn body_block(&mut self, k: usize) -> Matrix<Rational> {
        let lower = Matrix::from_fn(k, k, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => int(self.rng.gen_range(-1..=1)),
            std::cmp::Ordering::Equal => int(1),
            std::cmp::Ordering::Less => int(0),
        });
        let upper = Matrix::from_fn(k, k, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => int(self.rng.gen_range(-1..=1)),
            std::cmp::Ordering::Equal => {
                let (a, b) = *BODY_DIAGONAL.choose(&mut self.rng).unwrap();
                rat(a, b)
            }
            std::cmp::Ordering::Greater => int(0),
        });
        Matrix::from_fn(k, k, |i, j| {
            (0..k).fold(int(0), |acc, t| acc + lower.get(i, t) * upper.get(t, j))
        })
    }

    fn soul(&mut self, parity: u8) -> Grassmann {
        let mut out = Grassmann::zero();
        for mask in self.alg.souls(parity) {
            let c = self.small();
            out.add_term(mask, &c);
        }
        out
    }

    pub fn sample(&mut self) -> SuperMatrix {
        let (m, n) = (self.m, self.n);
        let g11 = self.body_block(m);
        let g22 = self.body_block(n);
        let size = m + n;
        let mut entries = Matrix::from_fn(size, size, |_, _| Grassmann::zero());
        for i in 0..size {
            for j in 0..size {
                let odd = (i >= m) != (j >= m);
                let e = if odd {
                    self.soul(1)
                } else {
                    let body = if i < m { g11.get(i, j) } else { g22.get(i - m, j - m) };
                    self.soul(0).add(&Grassmann::constant(body.clone()))
                };
                entries.set(i, j, e);
            }
        }
        SuperMatrix { m, n, entries }
    }

    /// A point of Berezinian one: `diag(Ber^-1, 1, …, 1) · x`.
    pub fn sample_special(&mut self) -> Result<SuperMatrix> {
        let x = self.sample();
        let ber = berezinian_point(&self.alg, &x)?;
        let mut d = SuperMatrix::identity(self.m, self.n);
        d.entries.set(0, 0, self.alg.even_inverse(&ber)?);
        supermatrix_mul(&self.alg, &d, &x)
    }
}

/// How many random trials of one property passed.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PropertyRate {
    pub property: String,
    pub trials: usize,
    pub passed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl PropertyRate {
    fn new(property: &str) -> Self {
        Self {
            property: property.into(),
            trials: 0,
            passed: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.trials += 1;
        if ok {
            self.passed += 1;
        } else if self.witness.is_none() {
            self.witness = Some(format!("trial {}: {}", self.trials, witness()));
        }
    }

    pub fn pass(&self) -> bool {
        self.trials > 0 && self.passed == self.trials
    }
}

fn same(alg: &GrassmannAlgebra, a: &SuperMatrix, b: &SuperMatrix) -> bool {
    mat_diff(alg, &a.entries, &b.entries).is_none()
}

/// Random-point checks of the group law at `q = 1` over `Λ(θ_1..θ_N)`:
/// `pairs` random pairs and `pairs / 2` random triples.
pub fn points_suite(m: usize, n: usize, units: usize, pairs: usize, seed: u64) -> Result<Vec<PropertyRate>> {
    let alg = GrassmannAlgebra::new(units)?;
    let p = std::sync::Arc::new(Presentation::new(m, n, QMode::Classical)?);
    let loc = std::sync::Arc::new(crate::localization::Localization::new(p.clone())?);
    let h = Hopf::new(loc.clone());
    let antipode = h.antipode_matrix()?;
    let ber_element = loc.berezinian()?;
    let mut sampler = PointSampler::new(alg, m, n, seed);
    let unit = SuperMatrix::identity(m, n);

    let mut hom = PropertyRate::new("point-is-homomorphism");
    let mut product = PropertyRate::new("hom-product");
    let mut ber_mul = PropertyRate::new("berezinian-multiplicative");
    let mut ber_elem = PropertyRate::new("berezinian-element");
    let mut special = PropertyRate::new("special-closed");
    let mut assoc = PropertyRate::new("group-associativity");
    let mut ident = PropertyRate::new("group-identity");
    let mut inverse = PropertyRate::new("group-inverse");
    let mut ber_inv = PropertyRate::new("berezinian-inverse");
    let mut reduced = PropertyRate::new("reduced-point");

    for _ in 0..pairs {
        let (x, y) = (sampler.sample(), sampler.sample());
        let xy = supermatrix_mul(&alg, &x, &y)?;
        hom.record(matrix_to_hom_check(&p, &alg, &x), || "relation not preserved".into());
        let r = hom_product_check(&h, &alg, &x, &y)?;
        product.record(r.pass, || r.witness.clone().unwrap_or_default());
        let (bx, by, bxy) = (
            berezinian_point(&alg, &x)?,
            berezinian_point(&alg, &y)?,
            berezinian_point(&alg, &xy)?,
        );
        ber_mul.record(bxy == bx.mul(&by), || format!("Ber(xy) = {bxy}"));
        let ev = Evaluation::new(&alg, &p, &x)?;
        let via_element = ev.loc(&ber_element);
        ber_elem.record(via_element == bx, || format!("{via_element} vs {bx}"));

        let (sx, sy) = (sampler.sample_special()?, sampler.sample_special()?);
        let b = berezinian_point(&alg, &supermatrix_mul(&alg, &sx, &sy)?)?;
        special.record(b == Grassmann::one(), || format!("Ber = {b}"));

        // the antipode evaluated at x is the matrix inverse of x
        let inv = SuperMatrix::new(m, n, ev.matrix(&antipode))?;
        let left = supermatrix_mul(&alg, &inv, &x)?;
        let right = supermatrix_mul(&alg, &x, &inv)?;
        inverse.record(same(&alg, &left, &unit) && same(&alg, &right, &unit), || {
            "S(x) x != 1".into()
        });
        let binv = berezinian_point(&alg, &inv)?;
        ber_inv.record(binv.mul(&bx) == Grassmann::one(), || format!("Ber(x^-1) = {binv}"));

        let unit_ok = same(&alg, &supermatrix_mul(&alg, &x, &unit)?, &x)
            && same(&alg, &supermatrix_mul(&alg, &unit, &x)?, &x)
            && hom_product_check(&h, &alg, &x, &unit)?.pass;
        ident.record(unit_ok, || "identity law".into());

        let (r11, r22) = xy.reduced();
        let (a11, a22) = x.reduced();
        let (c11, c22) = y.reduced();
        let q = GrassmannAlgebra { n: 0 };
        let lift = |r: &Matrix<Rational>| r.map(|v| Grassmann::constant(v.clone()));
        let off_diagonal_vanish = (0..m + n).all(|i| {
            (0..m + n).all(|j| x.slot_parity(i + 1, j + 1) == 0 || xy.body().get(i, j).is_zero())
        });
        let ok = off_diagonal_vanish
            && mat_diff(&q, &lift(&r11), &mat_mul(&q, &lift(&a11), &lift(&c11))).is_none()
            && mat_diff(&q, &lift(&r22), &mat_mul(&q, &lift(&a22), &lift(&c22))).is_none();
        reduced.record(ok, || "reduced product".into());
    }
    for _ in 0..(pairs / 2).max(1) {
        let (x, y, z) = (sampler.sample(), sampler.sample(), sampler.sample());
        let lhs = supermatrix_mul(&alg, &supermatrix_mul(&alg, &x, &y)?, &z)?;
        let rhs = supermatrix_mul(&alg, &x, &supermatrix_mul(&alg, &y, &z)?)?;
        assoc.record(same(&alg, &lhs, &rhs), || "(xy)z != x(yz)".into());
    }
    Ok(vec![
        hom, product, ber_mul, ber_elem, special, assoc, ident, inverse, ber_inv, reduced,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize) -> GrassmannAlgebra {
        GrassmannAlgebra::new(n).unwrap()
    }

    #[test]
    fn exterior_products() {
        let a = alg(2);
        let (t1, t2) = (a.theta(1).unwrap(), a.theta(2).unwrap());
        assert!(t1.mul(&t1).is_zero());
        assert_eq!(t1.mul(&t2), t2.mul(&t1).scale(&int(-1)));
        let t12 = t1.mul(&t2);
        let one = Grassmann::one();
        assert_eq!(one.add(&t12).mul(&one.sub(&t12)), one);
    }

    #[test]
    fn even_inverses() {
        let a = alg(2);
        let t12 = a.theta(1).unwrap().mul(&a.theta(2).unwrap());
        assert_eq!(a.even_inverse(&Grassmann::constant(int(2))).unwrap(), Grassmann::constant(rat(1, 2)));
        let x = Grassmann::one().add(&t12);
        assert_eq!(a.even_inverse(&x).unwrap(), Grassmann::one().sub(&t12));
        assert!(a.even_inverse(&t12).is_err());
        assert!(a.even_inverse(&a.theta(1).unwrap()).is_err());
    }

    #[test]
    fn berezinian_of_a_one_one_point() {
        let a = alg(2);
        let (t1, t2) = (a.theta(1).unwrap(), a.theta(2).unwrap());
        let (g11, g22) = (Grassmann::constant(int(3)), Grassmann::constant(int(2)));
        let entries = Matrix {
            rows: 2,
            cols: 2,
            entries: vec![g11.clone(), t1.clone(), t2.clone(), g22.clone()],
        };
        let x = SuperMatrix::new(1, 1, entries).unwrap();
        // d^-1 (a - beta d^-1 gamma)
        let d_inv = Grassmann::constant(rat(1, 2));
        let expected = d_inv.mul(&g11.sub(&t1.mul(&d_inv).mul(&t2)));
        assert_eq!(berezinian_point(&a, &x).unwrap(), expected);
        assert_eq!(berezinian_point(&a, &SuperMatrix::identity(1, 1)).unwrap(), Grassmann::one());
    }

    #[test]
    fn parity_violation_is_not_a_point() {
        let a = alg(2);
        let p = Presentation::new(1, 1, QMode::Classical).unwrap();
        assert!(matrix_to_hom_check(&p, &a, &SuperMatrix::identity(1, 1)));
        let mut bad = SuperMatrix::identity(1, 1);
        bad.entries.set(0, 0, Grassmann::one().add(&a.theta(1).unwrap()));
        assert_eq!(bad.parity_violation(), Some((1, 1)));
        assert!(!matrix_to_hom_check(&p, &a, &bad));
    }

    #[test]
    fn sampled_points_are_valid() {
        let a = alg(4);
        let p = Presentation::new(2, 1, QMode::Classical).unwrap();
        let mut s = PointSampler::new(a, 2, 1, 7);
        for _ in 0..5 {
            let x = s.sample();
            assert!(x.parity_violation().is_none());
            assert!(x.is_invertible(&a));
            assert!(matrix_to_hom_check(&p, &a, &x));
            let y = s.sample();
            let xy = supermatrix_mul(&a, &x, &y).unwrap();
            assert!(xy.parity_violation().is_none());
        }
    }
}

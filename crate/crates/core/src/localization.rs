//! The algebra with the two block determinants inverted.
//!
//! Elements are sums of terms `w · Dm^-a · Dn^-b` with `w` a normal word.
//! This sum form is not unique; [`Localization::canonical`] clears
//! denominators to a single tail and [`Localization::is_zero`] decides
//! equality from that.
//!
//! Moving `D^-1` to the right past a generator uses
//! `D^-1 g = λ⁻¹ (g D^-1 - D^-1 c_g D^-1)` with `c_g = D g - λ g D`,
//! where `λ = q^-1` for odd `g` and `1` otherwise. The correction `c_g`
//! has strictly more odd letters than `g`, so the recursion terminates
//! once the odd degree passes `2mn`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::budget::Budget;
use crate::determinants::{block_det, qdet_matrix, Block, DetConvention};
use crate::error::{Error, Result};
use crate::presentation::{Element, Letter, Presentation, Word};
use crate::ring::{identity, mat_diff, mat_mul, mat_sub, Matrix, Ring};
use crate::scalars::Laurent;

/// A single term's shape: `word · Dm^-dm · Dn^-dn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocKey {
    pub word: Word,
    pub dm: u32,
    pub dn: u32,
}

impl LocKey {
    pub fn new(word: Word, dm: u32, dn: u32) -> Self {
        Self { word, dm, dn }
    }

    pub fn unit() -> Self {
        Self::new(Vec::new(), 0, 0)
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocElement {
    terms: BTreeMap<LocKey, Laurent>,
}

impl LocElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(LocKey::unit(), Laurent::one())
    }

    pub fn term(k: LocKey, c: Laurent) -> Self {
        let mut out = Self::zero();
        out.add_term(k, &c);
        out
    }

    pub fn from_element(e: &Element) -> Self {
        let mut out = Self::zero();
        for (w, c) in e.terms() {
            out.add_term(LocKey::new(w.clone(), 0, 0), c);
        }
        out
    }

    /// `e · Dm^-dm · Dn^-dn`.
    pub fn with_tail(e: &Element, dm: u32, dn: u32) -> Self {
        let mut out = Self::zero();
        for (w, c) in e.terms() {
            out.add_term(LocKey::new(w.clone(), dm, dn), c);
        }
        out
    }

    /// `Dm^-1`.
    pub fn dm_inv() -> Self {
        Self::term(LocKey::new(Vec::new(), 1, 0), Laurent::one())
    }

    /// `Dn^-1`.
    pub fn dn_inv() -> Self {
        Self::term(LocKey::new(Vec::new(), 0, 1), Laurent::one())
    }

    pub fn is_trivially_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LocKey, &Laurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: &LocKey) -> Laurent {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, k: LocKey, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LocElement, c: &Laurent) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn add(&self, other: &LocElement) -> LocElement {
        let mut out = self.clone();
        out.add_scaled(other, &Laurent::one());
        out
    }

    pub fn sub(&self, other: &LocElement) -> LocElement {
        let mut out = self.clone();
        out.add_scaled(other, &Laurent::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Laurent) -> LocElement {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// The polynomial part if every term has an empty tail.
    pub fn as_element(&self) -> Option<Element> {
        let mut out = Element::zero();
        for (k, c) in &self.terms {
            if k.dm != 0 || k.dn != 0 {
                return None;
            }
            out.add_term(k.word.clone(), c);
        }
        Some(out)
    }
}

impl fmt::Debug for LocElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// `Σ_f P_f · D^-f` for a single determinant.
type Tailed = BTreeMap<u32, Element>;

fn tailed_add(acc: &mut Tailed, f: u32, e: &Element, c: &Laurent) {
    let slot = acc.entry(f).or_default();
    slot.add_scaled(e, c);
    if slot.is_zero() {
        acc.remove(&f);
    }
}

fn det_index(b: Block) -> usize {
    match b {
        Block::B11 => 0,
        Block::B22 => 1,
    }
}

#[derive(Default)]
struct Caches {
    push: [RwLock<HashMap<Word, Arc<Tailed>>>; 2],
    powers: [RwLock<HashMap<u32, Arc<Element>>>; 2],
    exchange: RwLock<HashMap<(u32, u32, usize), Arc<LocElement>>>,
    key_mul: RwLock<HashMap<(LocKey, LocKey), Arc<LocElement>>>,
}

/// The localized algebra over a fixed presentation with `m, n ≥ 1`.
pub struct Localization {
    p: Arc<Presentation>,
    dets: [Element; 2],
    /// Per determinant and letter: `λ⁻¹` and `c_g`.
    corrections: [Vec<(Laurent, Element)>; 2],
    /// `W = Dm^-1 (Dn^-1 Dm Dn - Dm)`.
    w: LocElement,
    caches: Caches,
    budget: Arc<Budget>,
}

impl fmt::Debug for Localization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Localization")
            .field("presentation", &self.p)
            .finish()
    }
}

impl Localization {
    pub fn new(p: Arc<Presentation>) -> Result<Self> {
        Self::with_budget(p, Arc::new(Budget::unlimited()))
    }

    /// Every product and every memo entry, including those of the
    /// presentation, is charged against `budget`.
    pub fn with_budget(p: Arc<Presentation>, budget: Arc<Budget>) -> Result<Self> {
        if p.m() == 0 || p.n() == 0 {
            return Err(Error::InvalidSize { m: p.m(), n: p.n() });
        }
        p.attach_budget(budget.clone());
        let dets = [block_det(&p, Block::B11), block_det(&p, Block::B22)];
        let mut corrections: [Vec<(Laurent, Element)>; 2] = [Vec::new(), Vec::new()];
        for (which, d) in dets.iter().enumerate() {
            for l in 0..p.num_generators() {
                let l = l as Letter;
                let g = p.gen_element(l);
                let odd = p.is_odd(l);
                let lambda = if odd { p.q_pow(-1) } else { Laurent::one() };
                let c = p.mul(d, &g).sub(&p.mul(&g, d).scale(&lambda));
                let floor = usize::from(odd) + 2;
                if p.min_odd_degree(&c).is_some_and(|k| k < floor) {
                    return Err(Error::PostCondition(format!(
                        "commutator of a determinant with {} has low odd degree",
                        p.letter_name(l)
                    )));
                }
                let lambda_inv = if odd { p.q_pow(1) } else { Laurent::one() };
                corrections[which].push((lambda_inv, c));
            }
        }
        let mut loc = Self {
            p,
            dets,
            corrections,
            w: LocElement::zero(),
            caches: Caches::default(),
            budget,
        };
        loc.w = loc.build_w()?;
        Ok(loc)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.p
    }

    pub fn presentation_arc(&self) -> &Arc<Presentation> {
        &self.p
    }

    pub fn det(&self, b: Block) -> &Element {
        &self.dets[det_index(b)]
    }

    pub fn det_inv(&self, b: Block) -> LocElement {
        match b {
            Block::B11 => LocElement::dm_inv(),
            Block::B22 => LocElement::dn_inv(),
        }
    }

    pub fn gen(&self, l: Letter) -> LocElement {
        LocElement::term(LocKey::new(vec![l], 0, 0), Laurent::one())
    }

    /// Entry `a_ij` as a localized element.
    pub fn a(&self, i: usize, j: usize) -> LocElement {
        self.gen(self.p.a(i, j))
    }

    fn det_power(&self, which: usize, k: u32) -> Arc<Element> {
        if let Some(e) = self.caches.powers[which].read().unwrap().get(&k) {
            return e.clone();
        }
        let e = if k == 0 {
            Element::one()
        } else {
            self.p.mul(&self.det_power(which, k - 1), &self.dets[which])
        };
        self.budget.charge(e.len());
        self.budget.retain(e.len());
        let e = Arc::new(e);
        self.caches.powers[which]
            .write()
            .unwrap()
            .insert(k, e.clone());
        e
    }

    /// `D^-1 · w` as `Σ P_f D^-f`.
    fn push1(&self, which: usize, w: &[Letter]) -> Arc<Tailed> {
        if let Some(r) = self.caches.push[which].read().unwrap().get(w) {
            return r.clone();
        }
        let mut out = Tailed::new();
        if w.is_empty() {
            out.insert(1, Element::one());
        } else {
            let g = w[0];
            let rest = self.push1(which, &w[1..]);
            let (lambda_inv, c) = &self.corrections[which][g as usize];
            let ge = self.p.gen_element(g);
            for (f, pf) in rest.iter() {
                tailed_add(&mut out, *f, &self.p.mul(&ge, pf), lambda_inv);
            }
            if !c.is_zero() {
                let neg = -lambda_inv.clone();
                for (f, pf) in rest.iter() {
                    let t = self.p.mul(c, pf);
                    for (u, uc) in t.terms() {
                        let inner = self.push1(which, u);
                        for (h, qh) in inner.iter() {
                            tailed_add(&mut out, h + f, qh, &(&neg * uc));
                        }
                    }
                }
            }
        }
        self.budget.retain(out.values().map(Element::len).sum());
        let out = Arc::new(out);
        self.caches.push[which]
            .write()
            .unwrap()
            .insert(w.to_vec(), out.clone());
        out
    }

    /// `D^-e · x` as `Σ P_f D^-f`.
    fn push(&self, which: usize, e: u32, x: &Element) -> Tailed {
        let mut cur = Tailed::new();
        cur.insert(0, x.clone());
        for _ in 0..e {
            let mut next = Tailed::new();
            for (f, pf) in &cur {
                for (u, uc) in pf.terms() {
                    for (h, qh) in self.push1(which, u).iter() {
                        tailed_add(&mut next, h + f, qh, uc);
                    }
                }
            }
            cur = next;
        }
        cur
    }

    fn push_word(&self, which: usize, e: u32, w: &[Letter]) -> Tailed {
        if e == 0 {
            let mut t = Tailed::new();
            t.insert(0, Element::term(w.to_vec(), Laurent::one()));
            return t;
        }
        if e == 1 {
            return (*self.push1(which, w)).clone();
        }
        self.push(which, e, &Element::term(w.to_vec(), Laurent::one()))
    }

    /// Canonical form of `D^-1 · e` with the inverse moved to the right.
    pub fn push_inverse_right(&self, b: Block, e: &Element) -> LocElement {
        let which = det_index(b);
        let mut out = LocElement::zero();
        for (f, pf) in self.push(which, 1, e) {
            let (dm, dn) = if which == 0 { (f, 0) } else { (0, f) };
            for (w, c) in pf.terms() {
                out.add_term(LocKey::new(w.clone(), dm, dn), c);
            }
        }
        out
    }

    fn build_w(&self) -> Result<LocElement> {
        // Z = Dn^-1 Dm Dn - Dm, with Dn-only tails
        let mut z = LocElement::zero();
        for (e, re) in self.push(1, 1, &self.dets[0]) {
            let tail = e.checked_sub(1).expect("push adds at least one inverse");
            for (w, c) in re.terms() {
                z.add_term(LocKey::new(w.clone(), 0, tail), c);
            }
        }
        for (w, c) in self.dets[0].terms() {
            z.add_term(LocKey::new(w.clone(), 0, 0), &-c.clone());
        }
        let mut w_out = LocElement::zero();
        for (k, c) in z.terms() {
            if self.p.odd_count(&k.word) < 2 {
                return Err(Error::PostCondition(
                    "determinant commutator has an even part".into(),
                ));
            }
            for (f, sf) in self.push_word(0, 1, &k.word) {
                for (u, uc) in sf.terms() {
                    w_out.add_term(LocKey::new(u.clone(), f, k.dn), &(uc * c));
                }
            }
        }
        Ok(w_out)
    }

    fn max_odd(&self) -> usize {
        self.p.num_odd()
    }

    /// `Dn^-1 Dm^-1` rewritten with Dm-inverses first, discarding words
    /// whose odd degree exceeds `2mn - floor`.
    fn exchange_one(&self, floor: usize) -> LocElement {
        let base = LocElement::term(LocKey::new(Vec::new(), 1, 1), Laurent::one());
        let k_max = (self.max_odd() - floor.min(self.max_odd())) / 2;
        let mut acc = base.clone();
        let mut out = base;
        for k in 1..=k_max {
            acc = self.mul_floor(&self.w, &acc, floor);
            if acc.is_trivially_zero() {
                break;
            }
            let s = if k % 2 == 0 { 1 } else { -1 };
            out.add_scaled(&acc, &Laurent::from_int(s));
        }
        out
    }

    /// `Dn^-e · Dm^-x` in canonical tail order, truncated above `2mn - floor`.
    fn exchange(&self, e: u32, x: u32, floor: usize) -> Arc<LocElement> {
        let key = (e, x, floor);
        if let Some(r) = self.caches.exchange.read().unwrap().get(&key) {
            return r.clone();
        }
        let out = if e == 1 && x == 1 {
            self.exchange_one(floor)
        } else if e == 1 {
            let first = self.exchange(1, 1, floor);
            let rest = LocElement::term(LocKey::new(Vec::new(), x - 1, 0), Laurent::one());
            self.mul_floor(&first, &rest, floor)
        } else {
            let head = LocElement::term(LocKey::new(Vec::new(), 0, e - 1), Laurent::one());
            let tail = self.exchange(1, x, floor);
            self.mul_floor(&head, &tail, floor)
        };
        self.budget.charge(out.len());
        self.budget.retain(out.len());
        let out = Arc::new(out);
        self.caches.exchange.write().unwrap().insert(key, out.clone());
        out
    }

    /// Product of two terms, dropping words of odd degree above `2mn - floor`.
    fn mul_keys(&self, k1: &LocKey, k2: &LocKey, floor: usize) -> LocElement {
        let cap = self.max_odd().saturating_sub(floor);
        let mut out = LocElement::zero();
        let dn_pushed = self.push_word(1, k1.dn, &k2.word);
        for (e, re) in &dn_pushed {
            for (r, rc) in re.terms() {
                for (f, sf) in self.push_word(0, k1.dm, r) {
                    let pre = self.p.mul(&Element::term(k1.word.clone(), Laurent::one()), &sf);
                    if *e == 0 || k2.dm == 0 {
                        for (w, c) in pre.terms() {
                            if self.p.odd_count(w) <= cap {
                                out.add_term(LocKey::new(w.clone(), f + k2.dm, e + k2.dn), &(c * rc));
                            }
                        }
                        continue;
                    }
                    for (pw, pc) in pre.terms() {
                        let deg = self.p.odd_count(pw);
                        if deg > cap {
                            continue;
                        }
                        let coef = pc * rc;
                        let x = self.exchange(*e, k2.dm, floor + deg);
                        for (xk, xc) in x.terms() {
                            let c2 = &coef * xc;
                            for (i, ui) in self.push_word(0, f, &xk.word) {
                                let fin = self.p.mul(&Element::term(pw.clone(), Laurent::one()), &ui);
                                self.budget.charge(fin.len());
                                for (w, c) in fin.terms() {
                                    if self.p.odd_count(w) <= cap {
                                        out.add_term(
                                            LocKey::new(w.clone(), i + xk.dm, xk.dn + k2.dn),
                                            &(c * &c2),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn mul_floor(&self, a: &LocElement, b: &LocElement, floor: usize) -> LocElement {
        let mut out = LocElement::zero();
        for (k1, c1) in a.terms() {
            for (k2, c2) in b.terms() {
                let prod = if floor == 0 {
                    self.mul_keys_cached(k1, k2)
                } else {
                    Arc::new(self.mul_keys(k1, k2, floor))
                };
                out.add_scaled(&prod, &(c1 * c2));
            }
        }
        out
    }

    /// Product of two terms, memoized.
    pub fn mul_keys_cached(&self, k1: &LocKey, k2: &LocKey) -> Arc<LocElement> {
        let key = (k1.clone(), k2.clone());
        if let Some(r) = self.caches.key_mul.read().unwrap().get(&key) {
            return r.clone();
        }
        let r = Arc::new(self.mul_keys(k1, k2, 0));
        self.budget.retain(r.len());
        self.caches.key_mul.write().unwrap().insert(key, r.clone());
        r
    }

    pub fn mul(&self, a: &LocElement, b: &LocElement) -> LocElement {
        let out = self.mul_floor(a, b, 0);
        self.budget.charge(out.len());
        out
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// Drops every memo table, including the presentation's, and returns
    /// the memoized terms to the budget.
    pub fn clear_caches(&self) {
        for c in &self.caches.push {
            c.write().unwrap().clear();
        }
        for c in &self.caches.powers {
            c.write().unwrap().clear();
        }
        self.caches.exchange.write().unwrap().clear();
        self.caches.key_mul.write().unwrap().clear();
        self.p.clear_memo();
        self.budget.release();
    }

    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a LocElement>) -> LocElement {
        let mut acc = LocElement::one();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// `c · k · Dn^b_max` rewritten as `Σ P_f · Dm^-f`; requires `k.dn <= b_max`.
    pub fn clear_dn(&self, k: &LocKey, c: &Laurent, b_max: u32) -> Vec<(Element, u32)> {
        let dn_pow = self.det_power(1, b_max - k.dn);
        self.push(0, k.dm, &dn_pow)
            .into_iter()
            .map(|(f, sf)| {
                let e = self.p.mul(&Element::term(k.word.clone(), c.clone()), &sf);
                (e, f)
            })
            .collect()
    }

    /// `e · Dm^(f_max - f)`.
    pub fn clear_dm(&self, e: &Element, f: u32, f_max: u32) -> Element {
        self.p.mul(e, &self.det_power(0, f_max - f))
    }

    /// Single-tail form `(P, F, B)` with `x = P · Dm^-F · Dn^-B`.
    pub fn canonical(&self, x: &LocElement) -> (Element, u32, u32) {
        let b_max = x.terms().map(|(k, _)| k.dn).max().unwrap_or(0);
        let parts: Vec<(Element, u32)> = x
            .terms()
            .flat_map(|(k, c)| self.clear_dn(k, c, b_max))
            .collect();
        let f_max = parts.iter().map(|(_, f)| *f).max().unwrap_or(0);
        let mut num = Element::zero();
        for (e, f) in parts {
            num.add_scaled(&self.clear_dm(&e, f, f_max), &Laurent::one());
            self.budget.charge(num.len());
        }
        (num, f_max, b_max)
    }

    pub fn is_zero(&self, x: &LocElement) -> bool {
        x.is_trivially_zero() || self.canonical(x).0.is_zero()
    }

    pub fn equal(&self, a: &LocElement, b: &LocElement) -> bool {
        self.is_zero(&a.sub(b))
    }

    /// Rewrites `x` as one numerator over a single tail, cancelling
    /// determinant factors that divide the numerator on the right.
    pub fn normalize(&self, x: &LocElement) -> LocElement {
        let (num, f, b) = self.canonical(x);
        let (mut num, mut f, mut b) = self.cancel_tails(num, f, b);
        // a determinant hidden behind the other inverse: x Dn^b' Dm^f' is
        // a polynomial exactly when x = P Dm^-f' Dn^-b'
        loop {
            let shorter = if b > 0 {
                self.numerator(x, f, b - 1).map(|p| (p, f, b - 1))
            } else {
                None
            };
            let shorter = shorter.or_else(|| {
                if f > 0 {
                    self.numerator(x, f - 1, b).map(|p| (p, f - 1, b))
                } else {
                    None
                }
            });
            match shorter {
                Some(t) => (num, f, b) = t,
                None => break,
            }
        }
        LocElement::with_tail(&num, f, b)
    }

    fn cancel_tails(&self, mut num: Element, mut f: u32, mut b: u32) -> (Element, u32, u32) {
        while f > 0 {
            match self.right_divide(&num, &self.dets[0]) {
                Some(q) => (num, f) = (q, f - 1),
                None => break,
            }
        }
        while f == 0 && b > 0 {
            match self.right_divide(&num, &self.dets[1]) {
                Some(q) => (num, b) = (q, b - 1),
                None => break,
            }
        }
        (num, f, b)
    }

    /// `x Dn^b Dm^f` when it is a polynomial.
    fn numerator(&self, x: &LocElement, f: u32, b: u32) -> Option<Element> {
        let mut y = x.clone();
        for _ in 0..b {
            y = self.mul(&y, &LocElement::from_element(&self.dets[1]));
        }
        for _ in 0..f {
            y = self.mul(&y, &LocElement::from_element(&self.dets[0]));
        }
        let (num, f, b) = self.canonical(&y);
        let (num, f, b) = self.cancel_tails(num, f, b);
        (f == 0 && b == 0).then_some(num)
    }

    /// `Q` with `Q d = e`, found by repeatedly cancelling the smallest word
    /// of the remainder against the smallest word of `d` (the rewriting
    /// corrections only ever produce larger words). `None` when that
    /// greedy search does not end in an exact quotient.
    fn right_divide(&self, e: &Element, d: &Element) -> Option<Element> {
        let lead: Vec<Letter> = d.terms().next()?.0.clone();
        let mut rest = e.clone();
        let mut quot = Element::zero();
        for _ in 0..4 * e.len() + 8 {
            let Some((w, c)) = rest.terms().next() else {
                return Some(quot);
            };
            let mut u = w.clone();
            for l in &lead {
                let at = u.iter().position(|x| x == l)?;
                u.remove(at);
            }
            let ud = self.p.mul(&Element::term(u.clone(), Laurent::one()), d);
            let ratio = divide_by_monomial(c, &ud.coeff(w))?;
            rest = rest.sub(&ud.scale(&ratio));
            self.budget.charge(rest.len());
            quot.add_term(u, &ratio);
        }
        None
    }

    /// Smallest odd degree among the words of `x`.
    pub fn min_odd_degree(&self, x: &LocElement) -> Option<usize> {
        x.terms().map(|(k, _)| self.p.odd_count(&k.word)).min()
    }

    pub fn format(&self, x: &LocElement) -> String {
        if x.is_trivially_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in x.terms() {
            let mut factors: Vec<String> = k.word.iter().map(|l| self.p.letter_name(*l)).collect();
            for (pow, name) in [(k.dm, "Dm"), (k.dn, "Dn")] {
                if pow > 0 {
                    factors.push(format!("{name}^-{pow}"));
                }
            }
            parts.push(crate::presentation::format_term(&factors.join("*"), c));
        }
        parts.join(" + ")
    }

    /// `Σ_{i ≥ 0} N^i`, the inverse of `I - N` for nilpotent `N`.
    pub fn neumann_inverse(&self, n: &Matrix<LocElement>) -> Result<Matrix<LocElement>> {
        let dim = n.rows;
        let limit = self.p.m() * self.p.n() + 1;
        let mut out = identity(self, dim);
        let mut pow = identity(self, dim);
        let mut vanished = false;
        for _ in 0..=limit {
            pow = mat_mul(self, &pow, n);
            if pow.entries.iter().all(|e| self.is_zero(e)) {
                vanished = true;
                break;
            }
            out = crate::ring::mat_add(self, &out, &pow);
        }
        if !vanished {
            return Err(Error::NotInvertible(format!(
                "series did not terminate within {} powers",
                limit + 1
            )));
        }
        let one_minus = mat_sub(self, &identity(self, dim), n);
        let id = identity(self, dim);
        if mat_diff(self, &mat_mul(self, &one_minus, &out), &id).is_some()
            || mat_diff(self, &mat_mul(self, &out, &one_minus), &id).is_some()
        {
            return Err(Error::PostCondition("Neumann series is not an inverse".into()));
        }
        Ok(out)
    }

    /// Matrix of generators on the given absolute index ranges.
    pub fn generator_matrix(
        &self,
        rows: std::ops::RangeInclusive<usize>,
        cols: std::ops::RangeInclusive<usize>,
    ) -> Matrix<LocElement> {
        let r: Vec<usize> = rows.collect();
        let c: Vec<usize> = cols.collect();
        Matrix::from_fn(r.len(), c.len(), |i, j| self.a(r[i], c[j]))
    }

    pub fn block_range(&self, b: Block) -> std::ops::RangeInclusive<usize> {
        match b {
            Block::B11 => 1..=self.p.m(),
            Block::B22 => self.p.m() + 1..=self.p.size(),
        }
    }

    /// The inverse of a diagonal block as a q-cofactor matrix, checked on
    /// both sides.
    pub fn block_antipode_matrix(&self, b: Block) -> Result<Matrix<LocElement>> {
        let view = crate::determinants::QMatrixView::full(&self.p, b);
        let k = view.dim();
        let conv = b.convention();
        let (dm, dn) = match b {
            Block::B11 => (1, 0),
            Block::B22 => (0, 1),
        };
        let s = Matrix::from_fn(k, k, |i, j| {
            let minor = crate::determinants::qdet(&self.p, &view.minor(j, i));
            let w = conv.weight(&*self.p, i as i32 - j as i32);
            LocElement::with_tail(&minor.scale(&w), dm, dn)
        });
        let x = self.generator_matrix(self.block_range(b), self.block_range(b));
        let id = identity(self, k);
        if let Some((i, j)) = mat_diff(self, &mat_mul(self, &s, &x), &id) {
            return Err(Error::PostCondition(format!("S·X differs from I at ({i},{j})")));
        }
        if let Some((i, j)) = mat_diff(self, &mat_mul(self, &x, &s), &id) {
            return Err(Error::PostCondition(format!("X·S differs from I at ({i},{j})")));
        }
        Ok(s)
    }

    /// The four blocks `X11, Ξ12, Ξ21, X22`.
    pub fn blocks(&self) -> [Matrix<LocElement>; 4] {
        let r1 = self.block_range(Block::B11);
        let r2 = self.block_range(Block::B22);
        [
            self.generator_matrix(r1.clone(), r1.clone()),
            self.generator_matrix(r1.clone(), r2.clone()),
            self.generator_matrix(r2.clone(), r1),
            self.generator_matrix(r2.clone(), r2),
        ]
    }

    /// `X11 - Ξ12 S22 Ξ21`.
    pub fn schur_11(&self) -> Result<Matrix<LocElement>> {
        let [x11, x12, x21, _] = self.blocks();
        let s22 = self.block_antipode_matrix(Block::B22)?;
        let t = mat_mul(self, &mat_mul(self, &x12, &s22), &x21);
        Ok(mat_sub(self, &x11, &t))
    }

    /// `X22 - Ξ21 S11 Ξ12`.
    pub fn schur_22(&self) -> Result<Matrix<LocElement>> {
        let [x11, x12, x21, x22] = self.blocks();
        let _ = x11;
        let s11 = self.block_antipode_matrix(Block::B11)?;
        let t = mat_mul(self, &mat_mul(self, &x21, &s11), &x12);
        Ok(mat_sub(self, &x22, &t))
    }

    /// `det(S22(X22)) · det(X11 - Ξ12 S22(X22) Ξ21)`.
    pub fn berezinian(&self) -> Result<LocElement> {
        let s22 = self.block_antipode_matrix(Block::B22)?;
        let b = self.schur_11()?;
        if let Some(v) = check_quantum_matrix(self, &b, DetConvention::QInverse) {
            return Err(Error::PostCondition(format!(
                "X11 - Ξ12 S22 Ξ21 is not a quantum matrix: {v}"
            )));
        }
        // the inverse of a q-matrix is a q^-1-matrix, so S22(X22) takes the
        // block-11 weights
        let d22 = qdet_matrix(self, &s22, DetConvention::QInverse);
        if !self.equal(&d22, &LocElement::dn_inv()) {
            return Err(Error::PostCondition("det(S22(X22)) is not Dn^-1".into()));
        }
        Ok(self.mul(&LocElement::dn_inv(), &qdet_matrix(self, &b, DetConvention::QInverse)))
    }

    /// `Ber⁻¹ = det(X11 - Ξ12 S22 Ξ21)⁻¹ · Dn`, the first factor inverted as
    /// `Σ_k (-Dm^-1 N)^k Dm^-1` where `N` is its nilpotent part.
    pub fn berezinian_inverse(&self) -> Result<LocElement> {
        let b = self.schur_11()?;
        let db = qdet_matrix(self, &b, DetConvention::QInverse);
        let nil = db.sub(&LocElement::from_element(&self.dets[0]));
        let step = self.mul(&LocElement::dm_inv(), &nil).scale(&Laurent::from_int(-1));
        let mut pow = LocElement::one();
        let mut inv = LocElement::zero();
        for _ in 0..=self.max_odd() + 1 {
            inv = inv.add(&pow);
            pow = self.mul(&pow, &step);
            if self.is_zero(&pow) {
                break;
            }
        }
        if !self.is_zero(&pow) {
            return Err(Error::NotInvertible("Berezinian series did not terminate".into()));
        }
        let inv = self.mul(&inv, &LocElement::dm_inv());
        Ok(self.mul(&inv, &LocElement::from_element(&self.dets[1])))
    }

    /// `Ber · Ber⁻¹ = 1 = Ber⁻¹ · Ber`.
    pub fn berezinian_inverse_check(&self) -> Result<bool> {
        let ber = self.berezinian()?;
        let inv = self.berezinian_inverse()?;
        let one = LocElement::one();
        Ok(self.equal(&self.mul(&ber, &inv), &one) && self.equal(&self.mul(&inv, &ber), &one))
    }
}

/// `a / b` when `b` is a single nonzero monomial.
fn divide_by_monomial(a: &Laurent, b: &Laurent) -> Option<Laurent> {
    let mut terms = b.terms();
    let (e, c) = terms.next()?;
    if terms.next().is_some() {
        return None;
    }
    Some(a.shift(-e).scale(&c.recip()))
}

impl Ring for Localization {
    type Elem = LocElement;

    fn zero(&self) -> LocElement {
        LocElement::zero()
    }
    fn one(&self) -> LocElement {
        LocElement::one()
    }
    fn add(&self, a: &LocElement, b: &LocElement) -> LocElement {
        a.add(b)
    }
    fn mul(&self, a: &LocElement, b: &LocElement) -> LocElement {
        Localization::mul(self, a, b)
    }
    fn scale(&self, a: &LocElement, c: &Laurent) -> LocElement {
        a.scale(c)
    }
    fn is_zero(&self, a: &LocElement) -> bool {
        Localization::is_zero(self, a)
    }
    fn q_pow(&self, e: i32) -> Laurent {
        self.p.q_pow(e)
    }
}

/// Checks the one-block Manin relations among the entries of `m`,
/// returning a description of the first violated pair.
pub fn check_quantum_matrix<R: Ring>(
    ring: &R,
    m: &Matrix<R::Elem>,
    conv: DetConvention,
) -> Option<String> {
    // block-11 relations: same row/column q^-1, cross pairs commute or
    // differ by (q^-1 - q) x_il x_kj; the other convention swaps q and q^-1
    let s = match conv {
        DetConvention::QInverse => -1,
        DetConvention::Q => 1,
    };
    let k = m.rows;
    let x = |i: usize, j: usize| m.get(i, j);
    let rel = |a: &R::Elem, b: &R::Elem, c: Laurent, d: &R::Elem, e: &R::Elem, extra: Option<(Laurent, &R::Elem, &R::Elem)>| {
        let lhs = ring.mul(a, b);
        let mut rhs = ring.scale(&ring.mul(d, e), &c);
        if let Some((c2, f, g)) = extra {
            rhs = ring.add(&rhs, &ring.scale(&ring.mul(f, g), &c2));
        }
        ring.equal(&lhs, &rhs)
    };
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                // same row, j < l: x_ij x_il = q^s x_il x_ij
                if j < l && !rel(x(i, j), x(i, l), ring.q_pow(s), x(i, l), x(i, j), None) {
                    return Some(format!("row pair ({i},{j}),({i},{l})"));
                }
                // same column, i < l: x_ij x_lj = q^s x_lj x_ij
                if i < l && !rel(x(i, j), x(l, j), ring.q_pow(s), x(l, j), x(i, j), None) {
                    return Some(format!("column pair ({i},{j}),({l},{j})"));
                }
            }
        }
    }
    for i in 0..k {
        for kk in i + 1..k {
            for j in 0..k {
                for l in 0..k {
                    if l > j {
                        // x_il x_kj = x_kj x_il
                        if !rel(x(i, l), x(kk, j), Laurent::one(), x(kk, j), x(i, l), None) {
                            return Some(format!("cross pair ({i},{l}),({kk},{j})"));
                        }
                    } else if l < j {
                        // x_il x_kj - x_kj x_il = (q^s - q^-s) x_ij x_kl
                        let c = &ring.q_pow(s) - &ring.q_pow(-s);
                        if !rel(x(i, l), x(kk, j), Laurent::one(), x(kk, j), x(i, l), Some((c, x(i, j), x(kk, l)))) {
                            return Some(format!("cross pair ({i},{l}),({kk},{j})"));
                        }
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::QMode;

    fn loc(m: usize, n: usize) -> Localization {
        Localization::new(Arc::new(Presentation::new(m, n, QMode::Symbolic).unwrap())).unwrap()
    }

    fn word(l: &Localization, w: &[(usize, usize)], dm: u32, dn: u32, c: Laurent) -> LocElement {
        let p = l.presentation();
        LocElement::term(LocKey::new(w.iter().map(|(i, j)| p.a(*i, *j)).collect(), dm, dn), c)
    }

    #[test]
    fn inverse_moves_past_odd_generator() {
        let l = loc(1, 1);
        let lhs = l.mul(&LocElement::dm_inv(), &l.a(1, 2));
        let rhs = word(&l, &[(1, 2)], 1, 0, Laurent::q_pow(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_moves_past_opposite_block() {
        let l = loc(1, 1);
        let lhs = l.mul(&LocElement::dm_inv(), &l.a(2, 2));
        let c: Laurent = "q^3 - q".parse().unwrap();
        let rhs = word(&l, &[(2, 2)], 1, 0, Laurent::one())
            .sub(&word(&l, &[(1, 2), (2, 1)], 2, 0, c));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn determinants_cancel_their_inverses() {
        for (m, n) in [(1, 1), (2, 1), (1, 2)] {
            let l = loc(m, n);
            for b in [Block::B11, Block::B22] {
                let d = LocElement::from_element(l.det(b));
                let inv = l.det_inv(b);
                assert!(l.equal(&l.mul(&d, &inv), &LocElement::one()));
                assert!(l.equal(&l.mul(&inv, &d), &LocElement::one()));
            }
            // Dn^-1 Dm^-1 Dm Dn exercises the tail exchange
            let dm = LocElement::from_element(l.det(Block::B11));
            let dn = LocElement::from_element(l.det(Block::B22));
            let prod = l.product([&LocElement::dn_inv(), &LocElement::dm_inv(), &dm, &dn]);
            assert!(l.equal(&prod, &LocElement::one()), "({m},{n})");
        }
    }

    #[test]
    fn odd_fractions_multiply() {
        let l = loc(1, 1);
        let a = word(&l, &[(1, 2)], 1, 0, Laurent::one());
        let b = word(&l, &[(2, 1)], 1, 0, Laurent::one());
        assert_eq!(l.mul(&a, &b), word(&l, &[(1, 2), (2, 1)], 2, 0, Laurent::q_pow(1)));
        assert!(!l.is_zero(&a));
    }

    #[test]
    fn exchange_is_associative() {
        let l = loc(1, 1);
        let x = l.product([&LocElement::dn_inv(), &l.a(1, 1), &LocElement::dm_inv()]);
        let y = l.mul(&l.mul(&LocElement::dn_inv(), &l.a(1, 1)), &LocElement::dm_inv());
        assert!(l.equal(&x, &y));
        assert!(l.equal(&x, &LocElement::dn_inv()));
    }

    #[test]
    fn block_inverses_exist() {
        for (m, n) in [(1, 1), (2, 1), (1, 2)] {
            let l = loc(m, n);
            l.block_antipode_matrix(Block::B11).unwrap();
            l.block_antipode_matrix(Block::B22).unwrap();
        }
    }

    #[test]
    fn berezinian_of_gl11() {
        let l = loc(1, 1);
        let ber = l.berezinian().unwrap();
        // x22^-1 (x11 - xi12 x22^-1 xi21)
        let inner = l.a(1, 1).sub(&l.product([&l.a(1, 2), &LocElement::dn_inv(), &l.a(2, 1)]));
        let expected = l.mul(&LocElement::dn_inv(), &inner);
        assert!(l.equal(&ber, &expected));
        assert!(l.berezinian_inverse_check().unwrap());
    }
}

//! Generators, oriented rewrite rules and PBW normal forms for the Manin
//! matrix superalgebra `k_q[M(m|n)]` and its supercommutative limit.
//!
//! Generators `a_ij` are numbered row-major, and that numbering is the total
//! order on letters. A word is normal when its letters are nondecreasing and
//! no odd letter repeats. Every rule rewrites a descending pair `u v`
//! (`u > v`) into `v u` plus lexicographically smaller pairs, so reduction
//! terminates under the degree-lexicographic order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::scalars::{Laurent, Rational};

pub type Letter = u8;
pub type Word = Vec<Letter>;

/// A matrix-entry generator `a_ij` (1-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId {
    pub row: usize,
    pub col: usize,
}

impl GeneratorId {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// How the deformation parameter is treated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QMode {
    Symbolic,
    Specialized(Rational),
    /// `q = 1`: the supercommutative algebra `k[M(m|n)]`.
    Classical,
}

impl QMode {
    /// `q^e` as a coefficient in this mode.
    pub fn q_pow(&self, e: i32) -> Laurent {
        match self {
            QMode::Symbolic => Laurent::q_pow(e),
            QMode::Specialized(r) => Laurent::constant(crate::scalars::pow_rat(r, e)),
            QMode::Classical => Laurent::one(),
        }
    }
}

impl fmt::Display for QMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QMode::Symbolic => write!(f, "symbolic"),
            QMode::Specialized(r) => write!(f, "{r}"),
            QMode::Classical => write!(f, "1"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// A finite linear combination of normal words.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Element {
    terms: BTreeMap<Word, Laurent>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(Vec::new(), Laurent::one())
    }

    pub fn scalar(c: Laurent) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn term(w: Word, c: Laurent) -> Self {
        let mut e = Self::zero();
        e.add_term(w, &c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Laurent)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, Laurent)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, w: &[Letter]) -> Laurent {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (w, v) in &other.terms {
            if unit {
                self.add_term(w.clone(), v);
            } else {
                self.add_term(w.clone(), &(v * c));
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, &Laurent::one());
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, &Laurent::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Laurent) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Element {
        self.scale(&Laurent::from_int(-1))
    }

    /// Coefficient-wise substitution `q := q0`.
    pub fn specialize(&self, q0: &Rational) -> Result<Element> {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &Laurent::constant(c.eval(q0)?));
        }
        Ok(out)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w:?}: {c}")?;
        }
        write!(f, "}}")
    }
}

/// `u v -> swap * v u + sum c * (a b)` for a descending pair `u > v`.
#[derive(Clone, Debug)]
struct Rule {
    swap: Laurent,
    corrections: Vec<(Laurent, Letter, Letter)>,
}

/// An oriented rule in display form.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub lhs: Vec<GeneratorId>,
    pub rhs: Element,
}

#[derive(Default)]
struct Memo {
    right: RwLock<HashMap<(Word, Letter), Arc<Element>>>,
    left: RwLock<HashMap<(Letter, Word), Arc<Element>>>,
}

/// The generator table and rewriting system for given `(m, n)` and q-mode.
pub struct Presentation {
    m: usize,
    n: usize,
    qmode: QMode,
    odd: Vec<bool>,
    rules: Vec<Option<Rule>>,
    memo: Memo,
    budget: OnceLock<Arc<Budget>>,
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presentation")
            .field("m", &self.m)
            .field("n", &self.n)
            .field("qmode", &self.qmode)
            .finish()
    }
}

impl Presentation {
    /// Builds the rule set. `m = 0` or `n = 0` give the one-block algebras.
    pub fn new(m: usize, n: usize, qmode: QMode) -> Result<Self> {
        if m + n < 1 || m + n > 15 {
            return Err(Error::InvalidSize { m, n });
        }
        if let QMode::Specialized(r) = &qmode {
            if r.is_zero() {
                return Err(Error::ZeroParameter);
            }
        }
        let size = m + n;
        let count = size * size;
        let mut odd = vec![false; count];
        for r in 1..=size {
            for c in 1..=size {
                odd[(r - 1) * size + (c - 1)] = (r > m) != (c > m);
            }
        }
        let mut p = Self {
            m,
            n,
            qmode,
            odd,
            rules: vec![None; count * count],
            memo: Memo::default(),
            budget: OnceLock::new(),
        };
        for u in 0..count {
            for v in 0..u {
                let rule = p.make_rule(u as Letter, v as Letter);
                p.rules[u * count + v] = Some(rule);
            }
        }
        Ok(p)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.m + self.n
    }

    pub fn qmode(&self) -> &QMode {
        &self.qmode
    }

    pub fn num_generators(&self) -> usize {
        self.odd.len()
    }

    /// Number of odd generators, `2mn`.
    pub fn num_odd(&self) -> usize {
        2 * self.m * self.n
    }

    /// `p(i)`: 0 for `i <= m`, 1 otherwise.
    pub fn index_parity(&self, i: usize) -> u8 {
        u8::from(i > self.m)
    }

    pub fn letter(&self, g: GeneratorId) -> Result<Letter> {
        let s = self.size();
        if g.row < 1 || g.row > s || g.col < 1 || g.col > s {
            return Err(Error::UnknownGenerator(format!("a[{},{}]", g.row, g.col)));
        }
        Ok(((g.row - 1) * s + (g.col - 1)) as Letter)
    }

    /// Letter for `a_ij`; panics on out-of-range indices.
    pub fn a(&self, i: usize, j: usize) -> Letter {
        self.letter(GeneratorId::new(i, j))
            .expect("generator index out of range")
    }

    pub fn generator(&self, l: Letter) -> GeneratorId {
        let s = self.size();
        GeneratorId::new(l as usize / s + 1, l as usize % s + 1)
    }

    pub fn is_odd(&self, l: Letter) -> bool {
        self.odd[l as usize]
    }

    pub fn word_parity(&self, w: &[Letter]) -> u8 {
        (w.iter().filter(|l| self.is_odd(**l)).count() % 2) as u8
    }

    pub fn odd_count(&self, w: &[Letter]) -> usize {
        w.iter().filter(|l| self.is_odd(**l)).count()
    }

    /// Smallest number of odd letters among the words of `e`.
    pub fn min_odd_degree(&self, e: &Element) -> Option<usize> {
        e.terms().map(|(w, _)| self.odd_count(w)).min()
    }

    /// The value of `q` in this mode.
    pub fn q(&self) -> Laurent {
        self.q_pow(1)
    }

    /// `q^e` in this mode.
    pub fn q_pow(&self, e: i32) -> Laurent {
        self.qmode.q_pow(e)
    }

    /// Converts a symbolic scalar into this mode's coefficient ring.
    pub fn coerce(&self, c: &Laurent) -> Laurent {
        match &self.qmode {
            QMode::Symbolic => c.clone(),
            QMode::Specialized(r) => Laurent::constant(c.eval(r).expect("nonzero q")),
            QMode::Classical => Laurent::constant(c.eval(&Rational::one()).expect("q = 1")),
        }
    }

    /// The same `(m, n)` with `q` specialized; `q0 = 1` gives the classical mode.
    pub fn specialized(&self, q0: &Rational) -> Result<Presentation> {
        if q0.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let mode = if q0.is_one() {
            QMode::Classical
        } else {
            QMode::Specialized(q0.clone())
        };
        Presentation::new(self.m, self.n, mode)
    }

    fn sign(&self, u: Letter, v: Letter) -> i64 {
        if self.is_odd(u) && self.is_odd(v) {
            -1
        } else {
            1
        }
    }

    fn make_rule(&self, u: Letter, v: Letter) -> Rule {
        let gu = self.generator(u);
        let gv = self.generator(v);
        let (a, b) = (gu.row, gu.col);
        let (c, d) = (gv.row, gv.col);
        let sigma = Laurent::from_int(self.sign(u, v));
        let pa = self.index_parity(a);
        let pb = self.index_parity(b);
        let pd = self.index_parity(d);
        // exponent sign for q^{(-1)^{p+1}}: p = 0 -> q^-1, p = 1 -> q
        let qe = |p: u8| if p == 0 { -1 } else { 1 };
        if a == c {
            // same row, d < b: a_{a d} a_{a b} = s q^{e} a_{a b} a_{a d}
            Rule {
                swap: &sigma * &self.q_pow(-qe(pa)),
                corrections: vec![],
            }
        } else if b == d {
            // same column, c < a
            Rule {
                swap: &sigma * &self.q_pow(-qe(pb)),
                corrections: vec![],
            }
        } else if d > b {
            Rule {
                swap: sigma,
                corrections: vec![],
            }
        } else {
            // c < a, d < b: v u - s u v = eps (q^-1 - q) a_{c b} a_{a d}
            let eps_exp = pd * pa + pd * pb + pa * pb;
            let eps = if eps_exp.is_multiple_of(2) { 1 } else { -1 };
            let scal = &self.q_pow(-1) - &self.q();
            let corr = (&(&sigma * &Laurent::from_int(-eps)) * &scal, self.a(c, b), self.a(a, d));
            let corrections = if corr.0.is_zero() { vec![] } else { vec![corr] };
            Rule {
                swap: sigma,
                corrections,
            }
        }
    }

    fn rule(&self, u: Letter, v: Letter) -> &Rule {
        self.rules[u as usize * self.num_generators() + v as usize]
            .as_ref()
            .expect("rule for descending pair")
    }

    /// All oriented rules: one per unordered pair of distinct generators plus
    /// `xi^2 -> 0` for each odd generator.
    pub fn rewrite_rules(&self) -> Vec<RewriteRule> {
        let count = self.num_generators() as Letter;
        let mut out = Vec::new();
        for u in 0..count {
            for v in 0..u {
                let r = self.rule(u, v);
                let mut rhs = Element::term(vec![v, u], r.swap.clone());
                for (c, x, y) in &r.corrections {
                    rhs.add_term(vec![*x, *y], c);
                }
                out.push(RewriteRule {
                    lhs: vec![self.generator(u), self.generator(v)],
                    rhs,
                });
            }
            if self.is_odd(u) {
                out.push(RewriteRule {
                    lhs: vec![self.generator(u), self.generator(u)],
                    rhs: Element::zero(),
                });
            }
        }
        out
    }

    /// Checks that every word of `e` is a normal word over these generators.
    pub fn check(&self, e: &Element) -> Result<()> {
        let count = self.num_generators();
        for (w, _) in e.terms() {
            if w.iter().any(|l| *l as usize >= count) {
                return Err(Error::PresentationMismatch);
            }
            if !self.is_normal(w) {
                return Err(Error::MalformedWord(format!("{w:?} is not normal")));
            }
        }
        Ok(())
    }

    pub fn is_normal(&self, w: &[Letter]) -> bool {
        w.windows(2)
            .all(|p| p[0] < p[1] || (p[0] == p[1] && !self.is_odd(p[0])))
    }

    pub fn gen_element(&self, l: Letter) -> Element {
        Element::term(vec![l], Laurent::one())
    }

    /// Normal form of `w * g` for a normal word `w`.
    pub fn mul_letter_right(&self, w: &[Letter], g: Letter) -> Arc<Element> {
        let key = (w.to_vec(), g);
        if let Some(hit) = self.memo.right.read().unwrap().get(&key) {
            return hit.clone();
        }
        let result = Arc::new(self.mul_letter_right_uncached(w, g));
        self.retain(result.len());
        self.memo.right.write().unwrap().insert(key, result.clone());
        result
    }

    fn mul_letter_right_uncached(&self, w: &[Letter], g: Letter) -> Element {
        let Some((&last, prefix)) = w.split_last() else {
            return Element::term(vec![g], Laurent::one());
        };
        if last < g || (last == g && !self.is_odd(g)) {
            let mut out = w.to_vec();
            out.push(g);
            return Element::term(out, Laurent::one());
        }
        if last == g {
            return Element::zero();
        }
        let rule = self.rule(last, g).clone();
        let mut out = Element::zero();
        let head = self.mul_letter_right(prefix, g);
        for (hw, hc) in head.terms() {
            let t = self.mul_letter_right(hw, last);
            out.add_scaled(&t, &(hc * &rule.swap));
        }
        for (c, x, y) in &rule.corrections {
            let head = self.mul_letter_right(prefix, *x);
            for (hw, hc) in head.terms() {
                let t = self.mul_letter_right(hw, *y);
                out.add_scaled(&t, &(hc * c));
            }
        }
        out
    }

    /// Normal form of `g * w` for a normal word `w`.
    pub fn mul_letter_left(&self, g: Letter, w: &[Letter]) -> Arc<Element> {
        let key = (g, w.to_vec());
        if let Some(hit) = self.memo.left.read().unwrap().get(&key) {
            return hit.clone();
        }
        let result = Arc::new(self.mul_letter_left_uncached(g, w));
        self.retain(result.len());
        self.memo.left.write().unwrap().insert(key, result.clone());
        result
    }

    fn mul_letter_left_uncached(&self, g: Letter, w: &[Letter]) -> Element {
        let Some((&first, rest)) = w.split_first() else {
            return Element::term(vec![g], Laurent::one());
        };
        if g < first || (g == first && !self.is_odd(g)) {
            let mut out = Vec::with_capacity(w.len() + 1);
            out.push(g);
            out.extend_from_slice(w);
            return Element::term(out, Laurent::one());
        }
        if g == first {
            return Element::zero();
        }
        let rule = self.rule(g, first).clone();
        let mut out = Element::zero();
        // g first rest = swap * first (g rest) + sum c * x (y rest)
        let tail = self.mul_letter_left(g, rest);
        for (tw, tc) in tail.terms() {
            let t = self.mul_letter_left(first, tw);
            out.add_scaled(&t, &(tc * &rule.swap));
        }
        for (c, x, y) in &rule.corrections {
            let tail = self.mul_letter_left(*y, rest);
            for (tw, tc) in tail.terms() {
                let t = self.mul_letter_left(*x, tw);
                out.add_scaled(&t, &(tc * c));
            }
        }
        out
    }

    /// Normal form of a free word, folding letters in from the left.
    pub fn normal_form(&self, w: &[Letter], c: &Laurent) -> Element {
        let mut acc = Element::scalar(c.clone());
        for &g in w {
            let mut next = Element::zero();
            for (aw, ac) in acc.terms() {
                next.add_scaled(&self.mul_letter_right(aw, g), ac);
            }
            acc = next;
        }
        acc
    }

    /// Normal form of a free word, folding letters in from the right.
    pub fn normal_form_rtl(&self, w: &[Letter], c: &Laurent) -> Element {
        let mut acc = Element::scalar(c.clone());
        for &g in w.iter().rev() {
            let mut next = Element::zero();
            for (aw, ac) in acc.terms() {
                next.add_scaled(&self.mul_letter_left(g, aw), ac);
            }
            acc = next;
        }
        acc
    }

    /// Product of two normal words.
    pub fn mul_words(&self, u: &[Letter], v: &[Letter]) -> Element {
        if v.is_empty() {
            return Element::term(u.to_vec(), Laurent::one());
        }
        if u.is_empty() {
            return Element::term(v.to_vec(), Laurent::one());
        }
        // skip the rewriting when the concatenation is already normal
        let (ul, vf) = (*u.last().unwrap(), v[0]);
        if ul < vf || (ul == vf && !self.is_odd(ul)) {
            let mut w = u.to_vec();
            w.extend_from_slice(v);
            return Element::term(w, Laurent::one());
        }
        let mut acc = Element::term(u.to_vec(), Laurent::one());
        for &g in v {
            let mut next = Element::zero();
            for (aw, ac) in acc.terms() {
                next.add_scaled(&self.mul_letter_right(aw, g), ac);
            }
            acc = next;
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (bw, bc) in b.terms() {
            for (aw, ac) in a.terms() {
                let prod = self.mul_words(aw, bw);
                out.add_scaled(&prod, &(ac * bc));
            }
        }
        out
    }

    /// Product of a list of elements, left to right.
    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a Element>) -> Element {
        let mut acc = Element::one();
        for f in factors {
            acc = self.mul(&acc, f);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn parity_of(&self, e: &Element) -> Parity {
        let mut seen = [false; 2];
        for (w, _) in e.terms() {
            seen[self.word_parity(w) as usize] = true;
        }
        match seen {
            [true, true] => Parity::Mixed,
            [false, true] => Parity::Odd,
            _ => Parity::Even,
        }
    }

    /// Human-readable name of a letter, e.g. `x11` or `xi12`.
    pub fn letter_name(&self, l: Letter) -> String {
        let g = self.generator(l);
        let base = if self.is_odd(l) { "xi" } else { "x" };
        if self.size() < 10 {
            format!("{base}{}{}", g.row, g.col)
        } else {
            format!("{base}[{},{}]", g.row, g.col)
        }
    }

    pub fn format_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = e
            .terms()
            .map(|(w, c)| {
                let word: Vec<String> = w.iter().map(|l| self.letter_name(*l)).collect();
                format_term(&word.join("*"), c)
            })
            .collect();
        parts.join(" + ")
    }

    pub fn memo_size(&self) -> usize {
        self.memo.right.read().unwrap().len() + self.memo.left.read().unwrap().len()
    }

    /// Charges memoized products against `budget` from now on. Only the
    /// first attached budget is used.
    pub fn attach_budget(&self, budget: Arc<Budget>) {
        let _ = self.budget.set(budget);
    }

    pub fn clear_memo(&self) {
        self.memo.right.write().unwrap().clear();
        self.memo.left.write().unwrap().clear();
    }

    fn retain(&self, terms: usize) {
        if let Some(b) = self.budget.get() {
            b.retain(terms);
        }
    }
}

/// `c*word` with the coefficient parenthesized unless it is `1` or `-1`.
pub fn format_term(word: &str, c: &Laurent) -> String {
    let coeff = c.to_string();
    match (word.is_empty(), coeff.as_str()) {
        (true, _) => coeff,
        (false, "1") => word.to_string(),
        (false, "-1") => format!("-{word}"),
        _ => format!("({coeff})*{word}"),
    }
}

//! Quantum superspaces and the linear coaction of the quantum matrix
//! superalgebra on them.
//!
//! The primal space has generators `z_1..z_{m+n}` with `z_i` even for
//! `i <= m`. The dual space reverses parities: its first `m` generators
//! (`η`) are odd and the last `n` (`y`) are even. Both coactions are
//! `z_i ↦ Σ_j a_ij ⊗ z_j`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hopf::AxiomResult;
use crate::presentation::{Element, Presentation, QMode, Word};
use crate::scalars::Laurent;

/// Generators and commutation rules of a quantum superspace.
#[derive(Clone, Debug)]
pub struct QSpace {
    m: usize,
    n: usize,
    dual: bool,
    qmode: QMode,
    odd: Vec<bool>,
}

pub fn build_qspace(m: usize, n: usize, dual: bool, qmode: QMode) -> Result<QSpace> {
    let odd = (1..=m + n).map(|i| (i > m) != dual).collect();
    QSpace::with_parities(m, n, odd, dual, qmode)
}

impl QSpace {
    /// A space with explicit parities; `q_relations` selects `κ = ±q`
    /// instead of `±q^-1`.
    pub fn with_parities(
        m: usize,
        n: usize,
        odd: Vec<bool>,
        q_relations: bool,
        qmode: QMode,
    ) -> Result<QSpace> {
        if m + n < 1 || m + n > 15 || odd.len() != m + n {
            return Err(Error::InvalidSize { m, n });
        }
        Ok(QSpace {
            m,
            n,
            dual: q_relations,
            qmode,
            odd,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dual(&self) -> bool {
        self.dual
    }

    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    /// 0-based generator index.
    pub fn is_odd(&self, i: u8) -> bool {
        self.odd[i as usize]
    }

    pub fn word_parity(&self, w: &[u8]) -> u8 {
        (w.iter().filter(|i| self.is_odd(**i)).count() % 2) as u8
    }

    /// `κ` with `z_i z_j = κ z_j z_i` for `i < j`.
    pub fn kappa(&self, i: u8, j: u8) -> Laurent {
        debug_assert!(i < j);
        let e = if self.dual { 1 } else { -1 };
        let c = self.qmode.q_pow(e);
        if self.is_odd(i) && self.is_odd(j) {
            -c
        } else {
            c
        }
    }

    pub fn name(&self, i: u8) -> String {
        let base = match (self.dual, self.is_odd(i)) {
            (false, false) => "x",
            (false, true) => "xi",
            (true, false) => "y",
            (true, true) => "eta",
        };
        format!("{base}{}", i + 1)
    }

    /// Ordered-monomial normal form of `c · w`.
    pub fn normal_form(&self, w: &[u8], c: &Laurent) -> Option<(Vec<u8>, Laurent)> {
        let mut w = w.to_vec();
        let mut c = c.clone();
        // insertion sort, collecting κ factors
        for i in 1..w.len() {
            let mut j = i;
            while j > 0 && w[j - 1] > w[j] {
                let (a, b) = (w[j], w[j - 1]);
                // z_b z_a = κ_ab^-1 z_a z_b with a < b
                c = &c * &inverse_unit(&self.kappa(a, b));
                w.swap(j - 1, j);
                j -= 1;
            }
        }
        for pair in w.windows(2) {
            if pair[0] == pair[1] && self.is_odd(pair[0]) {
                return None;
            }
        }
        if c.is_zero() {
            None
        } else {
            Some((w, c))
        }
    }

    /// The defining relations, as lists of `(word, coefficient)`.
    pub fn relations(&self) -> Vec<Vec<(Vec<u8>, Laurent)>> {
        let d = self.dim() as u8;
        let mut out = Vec::new();
        for i in 0..d {
            if self.is_odd(i) {
                out.push(vec![(vec![i, i], Laurent::one())]);
            }
            for j in i + 1..d {
                out.push(vec![
                    (vec![i, j], Laurent::one()),
                    (vec![j, i], -self.kappa(i, j)),
                ]);
            }
        }
        out
    }
}

/// `κ^-1` for `κ = ±q^e` or a nonzero rational constant.
fn inverse_unit(k: &Laurent) -> Laurent {
    let mut terms = k.terms();
    let (e, c) = terms.next().expect("nonzero unit");
    assert!(terms.next().is_none(), "commutation factor must be a monomial");
    Laurent::monomial(c.recip(), -e)
}

/// Leg types of a mixed tensor power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegKind {
    Algebra,
    Space,
}

/// Elements of `A ⊗ … ⊗ A ⊗ V` with Koszul-signed multiplication.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Mixed {
    pub terms: BTreeMap<Vec<Word>, Laurent>,
}

impl Mixed {
    pub fn add_term(&mut self, k: Vec<Word>, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_scaled(&mut self, o: &Mixed, c: &Laurent) {
        for (k, v) in &o.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Multiplication context for mixed tensors.
pub struct Coaction<'a> {
    pub alg: &'a Presentation,
    pub space: &'a QSpace,
}

impl<'a> Coaction<'a> {
    pub fn new(alg: &'a Presentation, space: &'a QSpace) -> Result<Self> {
        if alg.m() != space.m() || alg.n() != space.n() || alg.qmode() != &space.qmode {
            return Err(Error::PresentationMismatch);
        }
        Ok(Self { alg, space })
    }

    fn parity(&self, kind: LegKind, w: &[u8]) -> u8 {
        match kind {
            LegKind::Algebra => self.alg.word_parity(w),
            LegKind::Space => self.space.word_parity(w),
        }
    }

    pub fn mul(&self, kinds: &[LegKind], a: &Mixed, b: &Mixed) -> Mixed {
        let mut out = Mixed::default();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let mut sign = 0u8;
                for j in 0..kinds.len() {
                    if self.parity(kinds[j], &kb[j]) == 1 {
                        for i in j + 1..kinds.len() {
                            sign ^= self.parity(kinds[i], &ka[i]);
                        }
                    }
                }
                let mut coef = ca * cb;
                if sign == 1 {
                    coef = -coef;
                }
                let mut partial: Vec<(Vec<Word>, Laurent)> = vec![(Vec::new(), coef)];
                for (i, kind) in kinds.iter().enumerate() {
                    let leg: Vec<(Word, Laurent)> = match kind {
                        LegKind::Algebra => self
                            .alg
                            .mul_words(&ka[i], &kb[i])
                            .into_terms()
                            .collect(),
                        LegKind::Space => {
                            let w: Vec<u8> = ka[i].iter().chain(&kb[i]).copied().collect();
                            self.space.normal_form(&w, &Laurent::one()).into_iter().collect()
                        }
                    };
                    let mut next = Vec::new();
                    for (ws, c) in &partial {
                        for (w, wc) in &leg {
                            let mut ws = ws.clone();
                            ws.push(w.clone());
                            next.push((ws, c * wc));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    out.add_term(k, &c);
                }
            }
        }
        out
    }

    /// `ρ(z_i) = Σ_j a_ij ⊗ z_j` (0-based `i`).
    pub fn coaction_image(&self, i: u8) -> Mixed {
        let mut out = Mixed::default();
        for j in 0..self.space.dim() {
            let a = self.alg.a(i as usize + 1, j + 1);
            out.add_term(vec![vec![a], vec![j as u8]], &Laurent::one());
        }
        out
    }

    /// `ρ` on a space monomial.
    pub fn coaction_word(&self, w: &[u8]) -> Mixed {
        let kinds = [LegKind::Algebra, LegKind::Space];
        let mut acc = Mixed::default();
        acc.add_term(vec![vec![], vec![]], &Laurent::one());
        for &i in w {
            acc = self.mul(&kinds, &acc, &self.coaction_image(i));
        }
        acc
    }

    fn delta_word(&self, w: &[u8]) -> Mixed {
        let kinds = [LegKind::Algebra, LegKind::Algebra];
        let mut acc = Mixed::default();
        acc.add_term(vec![vec![], vec![]], &Laurent::one());
        for &l in w {
            let g = self.alg.generator(l);
            let mut d = Mixed::default();
            for k in 1..=self.alg.size() {
                d.add_term(
                    vec![vec![self.alg.a(g.row, k)], vec![self.alg.a(k, g.col)]],
                    &Laurent::one(),
                );
            }
            acc = self.mul(&kinds, &acc, &d);
        }
        acc
    }

    /// Images of the space relations; all must vanish.
    pub fn relation_residuals(&self) -> Vec<(String, Mixed)> {
        let mut out = Vec::new();
        for rel in self.space.relations() {
            let mut img = Mixed::default();
            let mut name = Vec::new();
            for (w, c) in &rel {
                img.add_scaled(&self.coaction_word(w), c);
                let s: Vec<String> = w.iter().map(|i| self.space.name(*i)).collect();
                name.push(format!("({c})*{}", s.join("*")));
            }
            out.push((name.join(" + "), img));
        }
        out
    }

    /// `(Δ ⊗ id)ρ(v) - (id ⊗ ρ)ρ(v)` for the monomial `v`.
    pub fn coassociativity_residual(&self, v: &[u8]) -> Mixed {
        let rho = self.coaction_word(v);
        let mut lhs = Mixed::default();
        let mut rhs = Mixed::default();
        for (k, c) in &rho.terms {
            for (dk, dc) in &self.delta_word(&k[0]).terms {
                lhs.add_term(vec![dk[0].clone(), dk[1].clone(), k[1].clone()], &(c * dc));
            }
            for (rk, rc) in &self.coaction_word(&k[1]).terms {
                rhs.add_term(vec![k[0].clone(), rk[0].clone(), rk[1].clone()], &(c * rc));
            }
        }
        let mut diff = lhs;
        diff.add_scaled(&rhs, &Laurent::from_int(-1));
        diff
    }

    /// `(ε ⊗ id)ρ(v) - v`.
    pub fn counit_residual(&self, v: &[u8]) -> Mixed {
        let mut out = Mixed::default();
        for (k, c) in &self.coaction_word(v).terms {
            let ok = k[0].iter().all(|l| {
                let g = self.alg.generator(*l);
                g.row == g.col
            });
            if ok {
                out.add_term(vec![k[1].clone()], c);
            }
        }
        if let Some((w, c)) = self.space.normal_form(v, &Laurent::one()) {
            out.add_term(vec![w], &-c);
        }
        out
    }

    pub fn format_mixed(&self, kinds: &[LegKind], x: &Mixed) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = x
            .terms
            .iter()
            .map(|(k, c)| {
                let legs: Vec<String> = k
                    .iter()
                    .zip(kinds)
                    .map(|(w, kind)| match kind {
                        LegKind::Algebra => {
                            self.alg.format_element(&Element::term(w.clone(), Laurent::one()))
                        }
                        LegKind::Space => {
                            let s: Vec<String> = w.iter().map(|i| self.space.name(*i)).collect();
                            if s.is_empty() { "1".into() } else { s.join("*") }
                        }
                    })
                    .collect();
                crate::presentation::format_term(&legs.join(" ⊗ "), c)
            })
            .collect();
        parts.join(" + ")
    }
}

/// Relation preservation, coassociativity on all monomials of degree
/// at most two, and the counit law.
pub fn check_comodule(alg: &Presentation, space: &QSpace) -> Result<Vec<AxiomResult>> {
    let co = Coaction::new(alg, space)?;
    let mut report = Vec::new();
    let kinds2 = [LegKind::Algebra, LegKind::Space];
    let kinds3 = [LegKind::Algebra, LegKind::Algebra, LegKind::Space];
    let bad = co
        .relation_residuals()
        .into_iter()
        .find(|(_, r)| !r.is_zero())
        .map(|(name, r)| format!("{name} ↦ {}", co.format_mixed(&kinds2, &r)));
    report.push(AxiomResult::new("coaction-relations", bad.is_none(), bad));
    let d = space.dim() as u8;
    let mut monomials: Vec<Vec<u8>> = (0..d).map(|i| vec![i]).collect();
    for i in 0..d {
        for j in 0..d {
            monomials.push(vec![i, j]);
        }
    }
    let bad = monomials.iter().find_map(|v| {
        let r = co.coassociativity_residual(v);
        (!r.is_zero()).then(|| format!("{v:?}: {}", co.format_mixed(&kinds3, &r)))
    });
    report.push(AxiomResult::new("coaction-coassociativity", bad.is_none(), bad));
    let bad = monomials.iter().find_map(|v| {
        let r = co.counit_residual(v);
        (!r.is_zero()).then(|| format!("{v:?}: {}", co.format_mixed(&[LegKind::Space], &r)))
    });
    report.push(AxiomResult::new("coaction-counit", bad.is_none(), bad));
    Ok(report)
}

/// Space relations in printable form, `κ` included.
pub fn describe_relations(space: &QSpace) -> Vec<String> {
    space
        .relations()
        .iter()
        .map(|rel| {
            let parts: Vec<String> = rel
                .iter()
                .map(|(w, c)| {
                    let s: Vec<String> = w.iter().map(|i| space.name(*i)).collect();
                    crate::presentation::format_term(&s.join("*"), c)
                })
                .collect();
            parts.join(" + ")
        })
        .collect()
}

//! Comultiplication, counit and antipode of the (quantum) general linear
//! supergroup, the graded tensor powers they land in, and checks of the
//! Hopf identities.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::determinants::{qdet_matrix, Block, DetConvention, Permutation};
use crate::error::Result;
use crate::localization::{LocElement, LocKey, Localization};
use crate::presentation::{Element, Letter, QMode, Word};
use crate::ring::{mat_add, mat_mul, mat_neg, mat_sub, Matrix};
use crate::scalars::Laurent;

/// A sum of `k`-fold tensors of localized terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    legs: usize,
    terms: BTreeMap<Vec<LocKey>, Laurent>,
}

impl Tensor {
    pub fn zero(legs: usize) -> Self {
        Self {
            legs,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(legs: usize) -> Self {
        Self::term(vec![LocKey::unit(); legs], Laurent::one())
    }

    pub fn term(keys: Vec<LocKey>, c: Laurent) -> Self {
        let mut t = Self::zero(keys.len());
        t.add_term(keys, &c);
        t
    }

    /// `x_1 ⊗ … ⊗ x_k`, expanded multilinearly.
    pub fn from_legs(legs: &[LocElement]) -> Self {
        let mut out = Self::one(legs.len());
        for (i, leg) in legs.iter().enumerate() {
            let mut next = Self::zero(legs.len());
            for (keys, c) in &out.terms {
                for (k, kc) in leg.terms() {
                    let mut keys = keys.clone();
                    keys[i] = k.clone();
                    next.add_term(keys, &(c * kc));
                }
            }
            out = next;
        }
        out
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<LocKey>, &Laurent)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, keys: Vec<LocKey>, c: &Laurent) {
        debug_assert_eq!(keys.len(), self.legs);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&keys) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&keys);
                }
            }
            None => {
                self.terms.insert(keys, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Tensor, c: &Laurent) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        out.add_scaled(other, &Laurent::one());
        out
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        out.add_scaled(other, &Laurent::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Laurent) -> Tensor {
        let mut out = Self::zero(self.legs);
        out.add_scaled(self, c);
        out
    }

    /// The single leg of a one-fold tensor.
    pub fn into_element(self) -> LocElement {
        assert_eq!(self.legs, 1);
        let mut out = LocElement::zero();
        for (mut k, c) in self.terms {
            out.add_term(k.pop().unwrap(), &c);
        }
        out
    }
}

/// Which display to use for `Δ(D^-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DeltaFormula {
    /// Alternating powers of `Δ(d) - d⊗d`.
    Classical,
    /// Powers of `R_0^-1 (q^-2 R_1 + … + q^-2m R_m)`.
    Quantum,
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl AxiomResult {
    pub fn new(axiom: impl Into<String>, pass: bool, witness: Option<String>) -> Self {
        Self {
            axiom: axiom.into(),
            pass,
            witness,
        }
    }
}

struct AntipodeData {
    gens: Vec<LocElement>,
    /// Images of `Dm^-1` and `Dn^-1`.
    inverses: [LocElement; 2],
}

/// Hopf structure maps over a localization.
pub struct Hopf {
    loc: Arc<Localization>,
    koszul: bool,
    formula: DeltaFormula,
    delta_memo: RwLock<HashMap<LocKey, Arc<Tensor>>>,
    delta_inv: OnceLock<[Tensor; 2]>,
    antipode: OnceLock<AntipodeData>,
    antipode_memo: RwLock<HashMap<LocKey, Arc<LocElement>>>,
}

fn block_index(b: Block) -> usize {
    match b {
        Block::B11 => 0,
        Block::B22 => 1,
    }
}

impl Hopf {
    /// The classical display is used at `q = 1`, the quantum one otherwise.
    pub fn new(loc: Arc<Localization>) -> Self {
        let formula = if *loc.presentation().qmode() == QMode::Classical {
            DeltaFormula::Classical
        } else {
            DeltaFormula::Quantum
        };
        Self::with_options(loc, formula, true)
    }

    /// `koszul = false` drops the graded sign from tensor products; only
    /// useful to show that the maps are then not well defined.
    pub fn with_options(loc: Arc<Localization>, formula: DeltaFormula, koszul: bool) -> Self {
        Self {
            loc,
            koszul,
            formula,
            delta_memo: RwLock::new(HashMap::new()),
            delta_inv: OnceLock::new(),
            antipode: OnceLock::new(),
            antipode_memo: RwLock::new(HashMap::new()),
        }
    }

    /// Drops the memoized images and the localization's caches.
    pub fn clear_caches(&self) {
        self.delta_memo.write().unwrap().clear();
        self.antipode_memo.write().unwrap().clear();
        self.loc.clear_caches();
    }

    pub fn loc(&self) -> &Localization {
        &self.loc
    }

    pub fn loc_arc(&self) -> Arc<Localization> {
        self.loc.clone()
    }

    pub fn formula(&self) -> DeltaFormula {
        self.formula
    }

    fn parity(&self, k: &LocKey) -> u8 {
        self.loc.presentation().word_parity(&k.word)
    }

    pub fn tensor_mul(&self, a: &Tensor, b: &Tensor) -> Tensor {
        assert_eq!(a.legs, b.legs, "tensor powers differ");
        let legs = a.legs;
        let mut out = Tensor::zero(legs);
        for (ka, ca) in &a.terms {
            let pa: Vec<u8> = ka.iter().map(|k| self.parity(k)).collect();
            for (kb, cb) in &b.terms {
                let mut sign = 0u8;
                if self.koszul {
                    for j in 0..legs {
                        if self.parity(&kb[j]) == 1 {
                            sign ^= pa[j + 1..].iter().fold(0, |s, p| s ^ p);
                        }
                    }
                }
                let mut coef = ca * cb;
                if sign == 1 {
                    coef = -coef;
                }
                let prods: Vec<Arc<LocElement>> = (0..legs)
                    .map(|i| self.loc.mul_keys_cached(&ka[i], &kb[i]))
                    .collect();
                if prods.iter().any(|p| p.is_trivially_zero()) {
                    continue;
                }
                let mut partial: Vec<(Vec<LocKey>, Laurent)> = vec![(Vec::with_capacity(legs), coef)];
                for p in &prods {
                    let mut next = Vec::with_capacity(partial.len() * p.len());
                    for (keys, c) in &partial {
                        for (k, kc) in p.terms() {
                            let mut keys = keys.clone();
                            keys.push(k.clone());
                            next.push((keys, c * kc));
                        }
                    }
                    partial = next;
                }
                for (keys, c) in partial {
                    out.add_term(keys, &c);
                }
            }
        }
        self.loc.budget().charge(out.len());
        out
    }

    pub fn tensor_pow(&self, a: &Tensor, k: usize) -> Tensor {
        let mut acc = Tensor::one(a.legs);
        for _ in 0..k {
            acc = self.tensor_mul(&acc, a);
        }
        acc
    }

    /// Decides `t = 0` by clearing denominators leg by leg.
    pub fn tensor_is_zero(&self, t: &Tensor) -> bool {
        self.tensor_witness(t).is_none()
    }

    /// A nonzero cleared term of `t`, if any.
    pub fn tensor_witness(&self, t: &Tensor) -> Option<String> {
        if t.is_empty() {
            return None;
        }
        let legs = t.legs;
        let b_max: Vec<u32> = (0..legs)
            .map(|i| t.terms.keys().map(|k| k[i].dn).max().unwrap_or(0))
            .collect();
        let one = Laurent::one();
        let parts: Vec<(Vec<Vec<(Element, u32)>>, &Laurent)> = t
            .terms
            .iter()
            .map(|(keys, c)| {
                let legs: Vec<Vec<(Element, u32)>> = keys
                    .iter()
                    .enumerate()
                    .map(|(i, k)| self.loc.clear_dn(k, &one, b_max[i]))
                    .collect();
                (legs, c)
            })
            .collect();
        let f_max: Vec<u32> = (0..legs)
            .map(|i| {
                parts
                    .iter()
                    .flat_map(|(l, _)| l[i].iter().map(|(_, f)| *f))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut acc: BTreeMap<Vec<Word>, Laurent> = BTreeMap::new();
        for (leg_parts, c) in parts {
            let cleared: Vec<Element> = leg_parts
                .iter()
                .enumerate()
                .map(|(i, ps)| {
                    let mut e = Element::zero();
                    for (p, f) in ps {
                        e.add_scaled(&self.loc.clear_dm(p, *f, f_max[i]), &one);
                    }
                    e
                })
                .collect();
            let mut partial: Vec<(Vec<Word>, Laurent)> = vec![(Vec::new(), c.clone())];
            for e in &cleared {
                let mut next = Vec::new();
                for (ws, pc) in &partial {
                    for (w, wc) in e.terms() {
                        let mut ws = ws.clone();
                        ws.push(w.clone());
                        next.push((ws, pc * wc));
                    }
                }
                partial = next;
            }
            for (ws, pc) in partial {
                let slot = acc.entry(ws.clone()).or_default();
                *slot += &pc;
                if slot.is_zero() {
                    acc.remove(&ws);
                }
            }
        }
        let p = self.loc.presentation();
        acc.iter().next().map(|(ws, c)| {
            let legs: Vec<String> = ws
                .iter()
                .map(|w| p.format_element(&Element::term(w.clone(), Laurent::one())))
                .collect();
            format!("({c}) {} [after clearing {} terms]", legs.join(" ⊗ "), acc.len())
        })
    }

    pub fn tensor_eq(&self, a: &Tensor, b: &Tensor) -> bool {
        self.tensor_is_zero(&a.sub(b))
    }

    pub fn format_tensor(&self, t: &Tensor) -> String {
        if t.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = t
            .terms()
            .map(|(keys, c)| {
                let legs: Vec<String> = keys
                    .iter()
                    .map(|k| {
                        let s = self.loc.format(&LocElement::term(k.clone(), Laurent::one()));
                        if s.is_empty() { "1".into() } else { s }
                    })
                    .collect();
                crate::presentation::format_term(&legs.join(" ⊗ "), c)
            })
            .collect();
        parts.join(" + ")
    }

    // ---- comultiplication ----

    /// `Δ(a_ij) = Σ_k a_ik ⊗ a_kj`.
    pub fn delta_generator(&self, l: Letter) -> Tensor {
        let p = self.loc.presentation();
        let g = p.generator(l);
        let mut out = Tensor::zero(2);
        for k in 1..=p.size() {
            out.add_term(
                vec![
                    LocKey::new(vec![p.a(g.row, k)], 0, 0),
                    LocKey::new(vec![p.a(k, g.col)], 0, 0),
                ],
                &Laurent::one(),
            );
        }
        out
    }

    /// The explicit pieces `R_0..R_m` (or `S_0..S_n`) of `Δ(D)`, sorted by
    /// how many middle indices leave the block.
    pub fn delta_split_det(&self, b: Block) -> Vec<Tensor> {
        let p = self.loc.presentation();
        let rows: Vec<usize> = self.loc.block_range(b).collect();
        let r = rows.len();
        let conv = b.convention();
        let mut pieces = vec![Tensor::zero(2); r + 1];
        let size = p.size();
        let mut ks = vec![1usize; r];
        loop {
            let outside = ks.iter().filter(|k| !rows.contains(k)).count();
            for perm in Permutation::all(r) {
                let left: Word = (0..r).map(|j| p.a(rows[j], ks[j])).collect();
                let right: Word = (0..r).map(|j| p.a(ks[j], rows[perm.images[j]])).collect();
                // (a1⊗b1)…(ar⊗br) = ± a1…ar ⊗ b1…br
                let mut sign = 0;
                for j in 0..r {
                    for l in j + 1..r {
                        if p.is_odd(right[j]) && p.is_odd(left[l]) {
                            sign ^= 1;
                        }
                    }
                }
                let mut w = conv.weight(p, perm.length as i32);
                if sign == 1 && self.koszul {
                    w = -w;
                }
                let lnf = LocElement::from_element(&p.normal_form(&left, &Laurent::one()));
                let rnf = LocElement::from_element(&p.normal_form(&right, &Laurent::one()));
                pieces[outside].add_scaled(&Tensor::from_legs(&[lnf, rnf]), &w);
            }
            // next index tuple
            let mut i = 0;
            while i < r {
                ks[i] += 1;
                if ks[i] <= size {
                    break;
                }
                ks[i] = 1;
                i += 1;
            }
            if i == r {
                break;
            }
        }
        pieces
    }

    /// `Δ(D)` as the multiplicative extension over the determinant sum.
    pub fn delta_det(&self, b: Block) -> Tensor {
        self.delta(&LocElement::from_element(self.loc.det(b)))
    }

    fn weighted_tail(&self, pieces: &[Tensor]) -> Tensor {
        let p = self.loc.presentation();
        let mut out = Tensor::zero(2);
        for (i, r) in pieces.iter().enumerate().skip(1) {
            let w = match self.formula {
                DeltaFormula::Quantum => p.q_pow(-2 * i as i32),
                DeltaFormula::Classical => Laurent::one(),
            };
            out.add_scaled(r, &w);
        }
        out
    }

    /// `Δ(D^-1)` from the finite alternating series, upper limit `2mn+2`.
    pub fn delta_inverse_det(&self, b: Block) -> Tensor {
        let p = self.loc.presentation();
        let pieces = self.delta_split_det(b);
        let inv = self.loc.det_inv(b);
        let r0_inv = Tensor::from_legs(&[inv.clone(), inv]);
        let limit = p.num_odd() + 2;
        let mut out = Tensor::zero(2);
        match self.formula {
            DeltaFormula::Quantum => {
                let bracket = self.tensor_mul(&r0_inv, &self.weighted_tail(&pieces));
                let mut pow = r0_inv.clone();
                for i in 1..=limit {
                    let s = if i % 2 == 1 { 1 } else { -1 };
                    out.add_scaled(&pow, &Laurent::from_int(s));
                    pow = self.tensor_mul(&pow, &bracket);
                    if pow.is_empty() {
                        break;
                    }
                }
            }
            DeltaFormula::Classical => {
                let tail = self.weighted_tail(&pieces);
                let mut inv_pow = r0_inv.clone();
                let mut tail_pow = Tensor::one(2);
                for i in 1..=limit {
                    let s = if i % 2 == 1 { 1 } else { -1 };
                    out.add_scaled(&self.tensor_mul(&inv_pow, &tail_pow), &Laurent::from_int(s));
                    inv_pow = self.tensor_mul(&inv_pow, &r0_inv);
                    tail_pow = self.tensor_mul(&tail_pow, &tail);
                    if tail_pow.is_empty() {
                        break;
                    }
                }
            }
        }
        out
    }

    fn delta_inverses(&self) -> &[Tensor; 2] {
        self.delta_inv.get_or_init(|| {
            [
                self.delta_inverse_det(Block::B11),
                self.delta_inverse_det(Block::B22),
            ]
        })
    }

    pub fn delta_key(&self, k: &LocKey) -> Arc<Tensor> {
        if let Some(t) = self.delta_memo.read().unwrap().get(k) {
            return t.clone();
        }
        let t = if k.dn > 0 {
            let prev = self.delta_key(&LocKey::new(k.word.clone(), k.dm, k.dn - 1));
            self.tensor_mul(&prev, &self.delta_inverses()[1])
        } else if k.dm > 0 {
            let prev = self.delta_key(&LocKey::new(k.word.clone(), k.dm - 1, 0));
            self.tensor_mul(&prev, &self.delta_inverses()[0])
        } else if let Some((last, init)) = k.word.split_last() {
            let prev = self.delta_key(&LocKey::new(init.to_vec(), 0, 0));
            self.tensor_mul(&prev, &self.delta_generator(*last))
        } else {
            Tensor::one(2)
        };
        self.loc.budget().retain(t.len());
        let t = Arc::new(t);
        self.delta_memo.write().unwrap().insert(k.clone(), t.clone());
        t
    }

    pub fn delta(&self, x: &LocElement) -> Tensor {
        let mut out = Tensor::zero(2);
        for (k, c) in x.terms() {
            out.add_scaled(&self.delta_key(k), c);
        }
        out
    }

    /// Applies `Δ` to one leg, producing a tensor with one more leg.
    pub fn delta_on_leg(&self, t: &Tensor, leg: usize) -> Tensor {
        let mut out = Tensor::zero(t.legs + 1);
        for (keys, c) in &t.terms {
            let d = self.delta_key(&keys[leg]);
            for (dk, dc) in d.terms() {
                let mut nk = keys[..leg].to_vec();
                nk.extend(dk.iter().cloned());
                nk.extend(keys[leg + 1..].iter().cloned());
                out.add_term(nk, &(c * dc));
            }
        }
        out
    }

    // ---- counit ----

    pub fn counit_key(&self, k: &LocKey) -> Laurent {
        let p = self.loc.presentation();
        for l in &k.word {
            let g = p.generator(*l);
            if g.row != g.col {
                return Laurent::zero();
            }
        }
        Laurent::one()
    }

    pub fn counit(&self, x: &LocElement) -> Laurent {
        let mut out = Laurent::zero();
        for (k, c) in x.terms() {
            out += &(c * &self.counit_key(k));
        }
        out
    }

    /// Applies `ε` to one leg.
    pub fn counit_on_leg(&self, t: &Tensor, leg: usize) -> Tensor {
        let mut out = Tensor::zero(t.legs - 1);
        for (keys, c) in &t.terms {
            let e = self.counit_key(&keys[leg]);
            if e.is_zero() {
                continue;
            }
            let mut nk = keys.clone();
            nk.remove(leg);
            out.add_term(nk, &(c * &e));
        }
        out
    }

    // ---- antipode ----

    fn antipode_data(&self) -> Result<&AntipodeData> {
        if let Some(d) = self.antipode.get() {
            return Ok(d);
        }
        let data = self.build_antipode()?;
        Ok(self.antipode.get_or_init(|| data))
    }

    fn build_antipode(&self) -> Result<AntipodeData> {
        let loc = &*self.loc;
        let p = loc.presentation();
        let [_, x12, x21, x22] = loc.blocks();
        let s11 = loc.block_antipode_matrix(Block::B11)?;
        let s22 = loc.block_antipode_matrix(Block::B22)?;
        // C = X22 - Ξ21 S11 Ξ12 = (I - N S22) X22
        let n = mat_mul(loc, &mat_mul(loc, &x21, &s11), &x12);
        let c_inv = mat_mul(loc, &s22, &loc.neumann_inverse(&mat_mul(loc, &n, &s22))?);
        let s11_x12 = mat_mul(loc, &s11, &x12);
        let x21_s11 = mat_mul(loc, &x21, &s11);
        let top_left = mat_add(loc, &s11, &mat_mul(loc, &mat_mul(loc, &s11_x12, &c_inv), &x21_s11));
        let top_right = mat_neg(loc, &mat_mul(loc, &s11_x12, &c_inv));
        let bottom_left = mat_neg(loc, &mat_mul(loc, &c_inv, &x21_s11));
        let m = p.m();
        let size = p.size();
        let mut gens = vec![LocElement::zero(); p.num_generators()];
        for i in 1..=size {
            for j in 1..=size {
                let e = match (i <= m, j <= m) {
                    (true, true) => top_left.get(i - 1, j - 1),
                    (true, false) => top_right.get(i - 1, j - m - 1),
                    (false, true) => bottom_left.get(i - m - 1, j - 1),
                    (false, false) => c_inv.get(i - m - 1, j - m - 1),
                };
                gens[p.a(i, j) as usize] = e.clone();
            }
        }
        // S(Dm^-1) = S(Dm)^-1 = det(X11 - Ξ12 S22 Ξ21) and likewise for Dn
        let b = loc.schur_11()?;
        let c = mat_sub(loc, &x22, &n);
        let inverses = [
            qdet_matrix(loc, &b, DetConvention::QInverse),
            qdet_matrix(loc, &c, DetConvention::Q),
        ];
        Ok(AntipodeData { gens, inverses })
    }

    /// `S` on a generator.
    pub fn antipode_generator(&self, l: Letter) -> Result<LocElement> {
        Ok(self.antipode_data()?.gens[l as usize].clone())
    }

    /// `S(D^-1)`.
    pub fn antipode_inverse_det(&self, b: Block) -> Result<LocElement> {
        Ok(self.antipode_data()?.inverses[block_index(b)].clone())
    }

    /// The full antipode matrix `S(X)`.
    pub fn antipode_matrix(&self) -> Result<Matrix<LocElement>> {
        let p = self.loc.presentation();
        let data = self.antipode_data()?;
        Ok(Matrix::from_fn(p.size(), p.size(), |i, j| {
            data.gens[p.a(i + 1, j + 1) as usize].clone()
        }))
    }

    /// `S(w · Dm^-a · Dn^-b)`; `S` reverses products with the graded sign.
    pub fn antipode_key(&self, k: &LocKey) -> Result<Arc<LocElement>> {
        if let Some(s) = self.antipode_memo.read().unwrap().get(k) {
            return Ok(s.clone());
        }
        let data = self.antipode_data()?;
        let p = self.loc.presentation();
        let mut factors: Vec<&LocElement> = Vec::new();
        for _ in 0..k.dn {
            factors.push(&data.inverses[1]);
        }
        for _ in 0..k.dm {
            factors.push(&data.inverses[0]);
        }
        for l in k.word.iter().rev() {
            factors.push(&data.gens[*l as usize]);
        }
        let odd = p.odd_count(&k.word);
        let mut s = self.loc.product(factors);
        if (odd * odd.saturating_sub(1) / 2) % 2 == 1 {
            s = s.scale(&Laurent::from_int(-1));
        }
        self.loc.budget().retain(s.len());
        let s = Arc::new(s);
        self.antipode_memo.write().unwrap().insert(k.clone(), s.clone());
        Ok(s)
    }

    pub fn antipode(&self, x: &LocElement) -> Result<LocElement> {
        let mut out = LocElement::zero();
        for (k, c) in x.terms() {
            out.add_scaled(&*self.antipode_key(k)?, c);
        }
        Ok(out)
    }

    /// `m ∘ (S ⊗ id)` (`left = true`) or `m ∘ (id ⊗ S)` on a two-fold tensor.
    pub fn antipode_contract(&self, t: &Tensor, left: bool) -> Result<LocElement> {
        let mut out = LocElement::zero();
        for (keys, c) in t.terms() {
            let (a, b) = if left {
                (
                    (*self.antipode_key(&keys[0])?).clone(),
                    LocElement::term(keys[1].clone(), Laurent::one()),
                )
            } else {
                (
                    LocElement::term(keys[0].clone(), Laurent::one()),
                    (*self.antipode_key(&keys[1])?).clone(),
                )
            };
            out.add_scaled(&self.loc.mul(&a, &b), c);
        }
        Ok(out)
    }

    // ---- checks ----

    fn targets(&self) -> Vec<(String, LocElement)> {
        let p = self.loc.presentation();
        let mut out: Vec<(String, LocElement)> = (0..p.num_generators())
            .map(|l| (p.letter_name(l as Letter), self.loc.gen(l as Letter)))
            .collect();
        out.push(("Dm^-1".into(), LocElement::dm_inv()));
        out.push(("Dn^-1".into(), LocElement::dn_inv()));
        out
    }

    /// `Δ(D)Δ(D^-1) = 1⊗1 = Δ(D^-1)Δ(D)`.
    pub fn check_delta_det_inverse(&self, b: Block) -> AxiomResult {
        let d = self.delta_det(b);
        let split: Tensor = self
            .delta_split_det(b)
            .iter()
            .fold(Tensor::zero(2), |acc, r| acc.add(r));
        if let Some(w) = self.tensor_witness(&d.sub(&split)) {
            return AxiomResult::new(format!("delta-det-split-{b:?}"), false, Some(w));
        }
        let inv = &self.delta_inverses()[block_index(b)];
        let one = Tensor::one(2);
        let w = self
            .tensor_witness(&self.tensor_mul(&d, inv).sub(&one))
            .or_else(|| self.tensor_witness(&self.tensor_mul(inv, &d).sub(&one)));
        AxiomResult::new(format!("delta-det-inverse-{b:?}"), w.is_none(), w)
    }

    pub fn check_coassociativity(&self) -> AxiomResult {
        for (name, x) in self.targets() {
            let d = self.delta(&x);
            let lhs = self.delta_on_leg(&d, 0);
            let rhs = self.delta_on_leg(&d, 1);
            if let Some(w) = self.tensor_witness(&lhs.sub(&rhs)) {
                return AxiomResult::new("coassociativity", false, Some(format!("{name}: {w}")));
            }
        }
        AxiomResult::new("coassociativity", true, None)
    }

    pub fn check_counit(&self) -> AxiomResult {
        for (name, x) in self.targets() {
            let d = self.delta(&x);
            for leg in 0..2 {
                let back = self.counit_on_leg(&d, leg).into_element();
                if !self.loc.equal(&back, &x) {
                    let w = format!("{name}: leg {leg} gives {}", self.loc.format(&back));
                    return AxiomResult::new("counit", false, Some(w));
                }
            }
        }
        AxiomResult::new("counit", true, None)
    }

    /// `Δ` and `ε` vanish on every defining relation.
    pub fn check_well_defined(&self) -> AxiomResult {
        let p = self.loc.presentation();
        for rule in p.rewrite_rules() {
            let lhs: Word = rule
                .lhs
                .iter()
                .map(|g| p.letter(*g).expect("rule letters are valid"))
                .collect();
            let lhs_el = LocElement::term(LocKey::new(lhs.clone(), 0, 0), Laurent::one());
            let rhs_el = LocElement::from_element(&rule.rhs);
            let mut d = (*self.delta_key(&LocKey::new(lhs.clone(), 0, 0))).clone();
            d.add_scaled(&self.delta(&rhs_el), &Laurent::from_int(-1));
            let name = || {
                let w: Vec<String> = lhs.iter().map(|l| p.letter_name(*l)).collect();
                w.join("*")
            };
            if let Some(w) = self.tensor_witness(&d) {
                return AxiomResult::new("well-defined", false, Some(format!("Δ on {}: {w}", name())));
            }
            let e = &self.counit(&lhs_el) - &self.counit(&rhs_el);
            if !e.is_zero() {
                return AxiomResult::new("well-defined", false, Some(format!("ε on {}: {e}", name())));
            }
        }
        AxiomResult::new("well-defined", true, None)
    }

    /// `m(S ⊗ id)Δ = ε = m(id ⊗ S)Δ` on generators and inverse symbols.
    pub fn check_antipode(&self) -> AxiomResult {
        for (name, x) in self.targets() {
            let d = self.delta(&x);
            let eps = LocElement::one().scale(&self.counit(&x));
            for left in [true, false] {
                match self.antipode_contract(&d, left) {
                    Ok(v) if self.loc.equal(&v, &eps) => {}
                    Ok(v) => {
                        let side = if left { "S⊗id" } else { "id⊗S" };
                        let w = format!("{name} ({side}): {}", self.loc.format(&v.sub(&eps)));
                        return AxiomResult::new("antipode", false, Some(w));
                    }
                    Err(e) => return AxiomResult::new("antipode", false, Some(e.to_string())),
                }
            }
        }
        AxiomResult::new("antipode", true, None)
    }

    pub fn check_hopf_axioms(&self) -> Vec<AxiomResult> {
        vec![
            self.check_delta_det_inverse(Block::B11),
            self.check_delta_det_inverse(Block::B22),
            self.check_coassociativity(),
            self.check_counit(),
            self.check_well_defined(),
            self.check_antipode(),
        ]
    }

    /// `Δ(Ber) = Ber ⊗ Ber`, `Δ(Ber - 1) = (Ber - 1) ⊗ Ber + 1 ⊗ (Ber - 1)`, `ε(Ber) = 1`.
    pub fn check_berezinian_grouplike(&self) -> Result<AxiomResult> {
        let ber = self.loc.berezinian()?;
        let d = self.delta(&ber);
        let bb = Tensor::from_legs(&[ber.clone(), ber.clone()]);
        if let Some(w) = self.tensor_witness(&d.sub(&bb)) {
            return Ok(AxiomResult::new("berezinian-grouplike", false, Some(w)));
        }
        let one = LocElement::one();
        let bm1 = ber.sub(&one);
        let rhs = Tensor::from_legs(&[bm1.clone(), ber.clone()]).add(&Tensor::from_legs(&[one, bm1]));
        let lhs = d.sub(&Tensor::one(2));
        if let Some(w) = self.tensor_witness(&lhs.sub(&rhs)) {
            return Ok(AxiomResult::new("berezinian-grouplike", false, Some(w)));
        }
        let e = self.counit(&ber);
        Ok(AxiomResult::new(
            "berezinian-grouplike",
            e.is_one(),
            (!e.is_one()).then(|| format!("ε(Ber) = {e}")),
        ))
    }

    /// Whether `Ber` commutes with every generator.
    pub fn check_berezinian_central(&self) -> Result<AxiomResult> {
        let ber = self.loc.berezinian()?;
        let p = self.loc.presentation();
        for l in 0..p.num_generators() {
            let g = self.loc.gen(l as Letter);
            let c = self.loc.mul(&ber, &g).sub(&self.loc.mul(&g, &ber));
            if !self.loc.is_zero(&c) {
                let w = format!("[Ber, {}] = {}", p.letter_name(l as Letter), self.loc.format(&c));
                return Ok(AxiomResult::new("berezinian-central", false, Some(w)));
            }
        }
        Ok(AxiomResult::new("berezinian-central", true, None))
    }

    /// `R_0 R_i = q^-2i R_i R_0` and `R_0^-1 R_i = q^2i R_i R_0^-1` for every `i`
    /// (with classical weights at `q = 1`).
    pub fn check_split_scaling(&self, b: Block) -> AxiomResult {
        let p = self.loc.presentation();
        let pieces = self.delta_split_det(b);
        let inv = self.loc.det_inv(b);
        let r0_inv = Tensor::from_legs(&[inv.clone(), inv]);
        let name = format!("split-scaling-{b:?}");
        for (i, r) in pieces.iter().enumerate().skip(1) {
            let e = 2 * i as i32;
            let a = self.tensor_mul(&pieces[0], r);
            let c = self.tensor_mul(r, &pieces[0]).scale(&p.q_pow(-e));
            if let Some(w) = self.tensor_witness(&a.sub(&c)) {
                return AxiomResult::new(name, false, Some(format!("R_0 R_{i}: {w}")));
            }
            let a = self.tensor_mul(&r0_inv, r);
            let c = self.tensor_mul(r, &r0_inv).scale(&p.q_pow(e));
            if let Some(w) = self.tensor_witness(&a.sub(&c)) {
                return AxiomResult::new(name, false, Some(format!("R_0^-1 R_{i}: {w}")));
            }
        }
        AxiomResult::new(name, true, None)
    }

    /// `R_0 T = T' R_0` and `T R_0^-1 = R_0^-1 T'` with `T = Σ R_i` and
    /// `T' = Σ q^-2i R_i` over `i ≥ 1`.
    pub fn check_split_exchange(&self, b: Block) -> AxiomResult {
        let p = self.loc.presentation();
        let pieces = self.delta_split_det(b);
        let inv = self.loc.det_inv(b);
        let r0_inv = Tensor::from_legs(&[inv.clone(), inv]);
        let mut t = Tensor::zero(2);
        let mut tw = Tensor::zero(2);
        for (i, r) in pieces.iter().enumerate().skip(1) {
            t.add_scaled(r, &Laurent::one());
            tw.add_scaled(r, &p.q_pow(-2 * i as i32));
        }
        let name = format!("split-exchange-{b:?}");
        let lhs = self.tensor_mul(&pieces[0], &t);
        let rhs = self.tensor_mul(&tw, &pieces[0]);
        if let Some(w) = self.tensor_witness(&lhs.sub(&rhs)) {
            return AxiomResult::new(name, false, Some(format!("with R_0: {w}")));
        }
        let lhs = self.tensor_mul(&t, &r0_inv);
        let rhs = self.tensor_mul(&r0_inv, &tw);
        let w = self.tensor_witness(&lhs.sub(&rhs));
        AxiomResult::new(name, w.is_none(), w.map(|w| format!("with R_0^-1: {w}")))
    }

    /// `(R_1 + … + R_m)^(2mn+1) = 0`.
    pub fn check_split_nilpotent(&self, b: Block) -> AxiomResult {
        let p = self.loc.presentation();
        let pieces = self.delta_split_det(b);
        let t = pieces.iter().skip(1).fold(Tensor::zero(2), |acc, r| acc.add(r));
        let pow = self.tensor_pow(&t, p.num_odd() + 1);
        let w = self.tensor_witness(&pow);
        AxiomResult::new(format!("split-nilpotent-{b:?}"), w.is_none(), w)
    }
}

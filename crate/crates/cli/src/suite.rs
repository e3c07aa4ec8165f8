use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use superhopf::budget::{guarded, Budget};
use superhopf::determinants::{
    det_commutation_check, det_scaling_check, laplace_check, Block, Commutation, QMatrixView,
};
use superhopf::hopf::{AxiomResult, Hopf};
use superhopf::localization::{LocElement, Localization};
use superhopf::points::points_suite;
use superhopf::presentation::{Element, Letter, Presentation, QMode};
use superhopf::qspaces::{build_qspace, check_comodule};
use superhopf::scalars::{parse_rational, Laurent, Rational};
use superhopf::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classical,
    Quantum,
}

/// The `--q` flag: a rational value or `symbolic`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QValue {
    Symbolic,
    Value(Rational),
}

impl FromStr for QValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "symbolic" {
            Ok(QValue::Symbolic)
        } else {
            Ok(QValue::Value(parse_rational(s)?))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    Presentation,
    Determinants,
    Localization,
    Hopf,
    Qspaces,
    Points,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 6] = [
        SuiteKind::Presentation,
        SuiteKind::Determinants,
        SuiteKind::Localization,
        SuiteKind::Hopf,
        SuiteKind::Qspaces,
        SuiteKind::Points,
    ];

    fn name(self) -> &'static str {
        match self {
            SuiteKind::Presentation => "presentation",
            SuiteKind::Determinants => "determinants",
            SuiteKind::Localization => "localization",
            SuiteKind::Hopf => "hopf",
            SuiteKind::Qspaces => "qspaces",
            SuiteKind::Points => "points",
        }
    }
}

pub const DEFAULT_MAX_TERMS: usize = 500_000;
pub const DEFAULT_MAX_STEPS: u64 = 200_000_000;

#[derive(Clone, Debug)]
pub struct VerificationConfig {
    pub m: usize,
    pub n: usize,
    pub mode: Mode,
    pub q: QValue,
    pub suites: Vec<SuiteKind>,
    pub max_terms: usize,
    pub max_steps: u64,
    pub seed: u64,
    /// Permits symbolic Hopf checks at total size 4 and above.
    pub allow_large: bool,
    /// Random words per size for the rewriting properties.
    pub samples: usize,
    /// Odd units of the Grassmann algebra used by the points suite.
    pub grassmann: usize,
    /// Random pairs for the points suite.
    pub trials: usize,
}

impl VerificationConfig {
    pub fn new(m: usize, n: usize, mode: Mode, q: QValue) -> Self {
        Self {
            m,
            n,
            mode,
            q,
            suites: SuiteKind::ALL.to_vec(),
            max_terms: DEFAULT_MAX_TERMS,
            max_steps: DEFAULT_MAX_STEPS,
            seed: 0,
            allow_large: false,
            samples: 1000,
            grassmann: 4,
            trials: 100,
        }
    }

    pub fn qmode(&self) -> Result<QMode> {
        match (&self.mode, &self.q) {
            (Mode::Classical, QValue::Symbolic) => Ok(QMode::Classical),
            (Mode::Classical, QValue::Value(r)) if r == &Rational::from_integer(1.into()) => {
                Ok(QMode::Classical)
            }
            (Mode::Classical, QValue::Value(r)) => Err(Error::Config(format!(
                "classical mode fixes q = 1, got q = {r}"
            ))),
            (Mode::Quantum, QValue::Symbolic) => Ok(QMode::Symbolic),
            (Mode::Quantum, QValue::Value(r)) if r == &Rational::from_integer(0.into()) => {
                Err(Error::ZeroParameter)
            }
            (Mode::Quantum, QValue::Value(r)) => Ok(QMode::Specialized(r.clone())),
        }
    }

    pub fn q_label(&self) -> String {
        match self.qmode() {
            Ok(q) => q.to_string(),
            Err(_) => "invalid".into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let qmode = self.qmode()?;
        if self.m + self.n == 0 {
            return Err(Error::InvalidSize { m: self.m, n: self.n });
        }
        if self.max_terms == 0 || self.max_steps == 0 {
            return Err(Error::Config("budgets must be positive".into()));
        }
        if self.samples == 0 || self.trials == 0 {
            return Err(Error::Config("sample counts must be positive".into()));
        }
        let needs_blocks = self.suites.iter().any(|s| {
            matches!(
                s,
                SuiteKind::Localization | SuiteKind::Hopf | SuiteKind::Points
            )
        });
        if needs_blocks && (self.m == 0 || self.n == 0) {
            return Err(Error::Config(
                "localization, hopf and points need m >= 1 and n >= 1".into(),
            ));
        }
        if self.suites.contains(&SuiteKind::Hopf)
            && qmode == QMode::Symbolic
            && self.m + self.n >= 4
            && !self.allow_large
        {
            return Err(Error::Config(format!(
                "symbolic hopf checks at ({}, {}) need --allow-large",
                self.m, self.n
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    BudgetExhausted,
    Error,
}

/// One line of the report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: &'static str,
    pub axiom: String,
    pub size: String,
    pub mode: Mode,
    pub q: String,
    pub pass: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// `[passed, trials]` for randomized properties.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<[usize; 2]>,
    pub time_ms: f64,
    pub peak_terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub m: usize,
    pub n: usize,
    pub mode: Mode,
    pub q: String,
    pub seed: u64,
    pub status: Status,
    pub results: Vec<CheckReport>,
}

impl SuiteReport {
    /// 0 all pass, 1 a check failed or errored, 3 only budget exhaustion.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::BudgetExhausted => 3,
            Status::Fail | Status::Error => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The JSON with timing fields zeroed, for reproducibility comparisons.
    pub fn to_json_untimed(&self) -> String {
        let mut r = self.clone();
        for c in &mut r.results {
            c.time_ms = 0.0;
        }
        r.to_json()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.results {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::BudgetExhausted => "BUDGET",
                Status::Error => "ERROR",
            };
            out += &format!(
                "{status:6} {:13} {:32} {:>9.1} ms  peak {:>7} terms\n",
                c.suite, c.axiom, c.time_ms, c.peak_terms
            );
            if let Some(w) = &c.witness {
                out += &format!("       witness: {w}\n");
            }
        }
        let passed = self.results.iter().filter(|c| c.pass).count();
        out += &format!(
            "({}, {}) {} q = {}: {passed}/{} checks pass\n",
            self.m,
            self.n,
            match self.mode {
                Mode::Classical => "classical",
                Mode::Quantum => "quantum",
            },
            self.q,
            self.results.len()
        );
        out
    }
}

type Outcome = Result<(bool, Option<String>)>;

struct Runner<'a> {
    cfg: &'a VerificationConfig,
    budget: Arc<Budget>,
    results: Vec<CheckReport>,
    p: Arc<Presentation>,
    hopf: Option<Arc<Hopf>>,
}

impl Runner<'_> {
    fn line(&self, suite: SuiteKind, axiom: String, outcome: Outcome, time_ms: f64) -> CheckReport {
        let (status, witness) = match outcome {
            Ok((true, w)) => (Status::Pass, w),
            Ok((false, w)) => (Status::Fail, w),
            Err(e @ Error::Budget(_)) => (Status::BudgetExhausted, Some(e.to_string())),
            Err(e) => (Status::Error, Some(e.to_string())),
        };
        let mode = if suite == SuiteKind::Points { Mode::Classical } else { self.cfg.mode };
        CheckReport {
            suite: suite.name(),
            axiom,
            size: format!("{}|{}", self.cfg.m, self.cfg.n),
            mode,
            q: if suite == SuiteKind::Points { "1".into() } else { self.cfg.q_label() },
            pass: status == Status::Pass,
            status,
            witness,
            rate: None,
            time_ms,
            peak_terms: self.budget.high_water(),
        }
    }

    fn start(&self) -> Instant {
        self.budget.reset_high_water();
        self.budget.reset_steps();
        Instant::now()
    }

    /// After an exhausted check the memo tables may be arbitrarily large;
    /// drop them so later checks start from a clean budget.
    fn recover<T>(&self, outcome: &Result<T>) {
        if matches!(outcome, Err(Error::Budget(_))) {
            match &self.hopf {
                Some(h) => h.clear_caches(),
                None => {
                    self.p.clear_memo();
                    self.budget.release();
                }
            }
        }
    }

    fn check(&mut self, suite: SuiteKind, axiom: &str, f: impl FnOnce() -> Outcome) {
        let start = self.start();
        let outcome = guarded(f).and_then(|r| r);
        self.recover(&outcome);
        let time_ms = start.elapsed().as_secs_f64() * 1000.0;
        let line = self.line(suite, axiom.to_string(), outcome, time_ms);
        self.results.push(line);
    }

    /// Runs a batch of checks computed together; the batch time is split
    /// evenly between its lines.
    fn batch(&mut self, suite: SuiteKind, label: &str, f: impl FnOnce() -> Result<Vec<AxiomResult>>) {
        let start = self.start();
        let outcome = guarded(f).and_then(|r| r);
        self.recover(&outcome);
        let time_ms = start.elapsed().as_secs_f64() * 1000.0;
        match outcome {
            Ok(list) => {
                let share = time_ms / list.len().max(1) as f64;
                for a in list {
                    let line = self.line(suite, a.axiom, Ok((a.pass, a.witness)), share);
                    self.results.push(line);
                }
            }
            Err(e) => {
                let line = self.line(suite, label.to_string(), Err(e), time_ms);
                self.results.push(line);
            }
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, letters: usize, max_len: usize) -> Vec<Letter> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| rng.gen_range(0..letters) as Letter).collect()
}

fn presentation_suite(r: &mut Runner, p: &Presentation, rng: &mut ChaCha8Rng) {
    let s = SuiteKind::Presentation;
    let g = p.num_generators();
    let samples = r.cfg.samples;
    r.check(s, "rule-count", || {
        let want = g * (g - 1) / 2 + p.num_odd();
        let got = p.rewrite_rules().len();
        Ok((got == want, (got != want).then(|| format!("{got} rules, expected {want}"))))
    });
    r.check(s, "overlap-confluence", || {
        for a in 0..g as Letter {
            for b in 0..g as Letter {
                for c in 0..g as Letter {
                    let w = [a, b, c];
                    if p.normal_form(&w, &Laurent::one()) != p.normal_form_rtl(&w, &Laurent::one()) {
                        return Ok((false, Some(format!("{w:?}"))));
                    }
                }
            }
        }
        Ok((true, None))
    });
    let words: Vec<Vec<Letter>> = (0..samples).map(|_| random_word(rng, g, 8)).collect();
    r.check(s, "strategy-independence", || {
        for w in &words {
            if p.normal_form(w, &Laurent::one()) != p.normal_form_rtl(w, &Laurent::one()) {
                return Ok((false, Some(format!("{w:?}"))));
            }
        }
        Ok((true, None))
    });
    let triples: Vec<[Vec<Letter>; 3]> = (0..samples)
        .map(|_| [random_word(rng, g, 3), random_word(rng, g, 3), random_word(rng, g, 3)])
        .collect();
    r.check(s, "associativity", || {
        for [a, b, c] in &triples {
            let nf = |w: &Vec<Letter>| p.normal_form(w, &Laurent::one());
            let (a, b, c) = (nf(a), nf(b), nf(c));
            if p.mul(&p.mul(&a, &b), &c) != p.mul(&a, &p.mul(&b, &c)) {
                let w = [&a, &b, &c].map(|e| p.format_element(e)).join(" | ");
                return Ok((false, Some(w)));
            }
        }
        Ok((true, None))
    });
    let odd: Vec<Letter> = (0..g as Letter).filter(|l| p.is_odd(*l)).collect();
    if !odd.is_empty() {
        let k = 2 * p.m() * p.n() + 1;
        let factors: Vec<Vec<Element>> = (0..20)
            .map(|_| {
                (0..k)
                    .map(|_| {
                        let o = odd[rng.gen_range(0..odd.len())];
                        let e = rng.gen_range(0..g) as Letter;
                        p.normal_form(&[o, e], &Laurent::one())
                    })
                    .collect()
            })
            .collect();
        r.check(s, "odd-degree-vanishing", || {
            for f in &factors {
                let prod = p.product(f);
                if !prod.is_zero() {
                    return Ok((false, Some(p.format_element(&prod))));
                }
            }
            Ok((true, None))
        });
    }
    if *p.qmode() == QMode::Classical {
        let pairs: Vec<(Vec<Letter>, Vec<Letter>)> = (0..samples)
            .map(|_| (random_word(rng, g, 4), random_word(rng, g, 4)))
            .collect();
        r.check(s, "supercommutative-limit", || {
            for (a, b) in &pairs {
                let sign = if p.word_parity(a) * p.word_parity(b) == 1 { -1 } else { 1 };
                let mut w = a.clone();
                w.extend_from_slice(b);
                let mut v = b.clone();
                v.extend_from_slice(a);
                let lhs = p.normal_form(&w, &Laurent::one());
                let rhs = p.normal_form(&v, &Laurent::from_int(sign));
                if lhs != rhs {
                    return Ok((false, Some(format!("{a:?} {b:?}"))));
                }
            }
            Ok((true, None))
        });
    }
}

fn blocks(p: &Presentation) -> Vec<Block> {
    let mut out = Vec::new();
    if p.m() > 0 {
        out.push(Block::B11);
    }
    if p.n() > 0 {
        out.push(Block::B22);
    }
    out
}

/// Words `a_{r_1 k_1} ⋯ a_{r_t k_t}` over the block rows (or the column
/// variant), all choices of the free indices.
pub fn scaling_words(p: &Presentation, b: Block) -> Vec<Vec<Letter>> {
    let idx = QMatrixView::full(p, b).rows;
    let mut out = Vec::new();
    let mut free = vec![1usize; idx.len()];
    loop {
        let rows: Vec<Letter> = idx.iter().zip(&free).map(|(&i, &k)| p.a(i, k)).collect();
        let cols: Vec<Letter> = idx.iter().zip(&free).map(|(&j, &k)| p.a(k, j)).collect();
        out.push(rows);
        out.push(cols);
        let mut pos = 0;
        loop {
            if pos == free.len() {
                out.sort();
                out.dedup();
                return out;
            }
            free[pos] += 1;
            if free[pos] <= p.size() {
                break;
            }
            free[pos] = 1;
            pos += 1;
        }
    }
}

fn determinants_suite(r: &mut Runner, p: &Presentation) {
    let s = SuiteKind::Determinants;
    for b in blocks(p) {
        r.check(s, &format!("laplace-{b:?}"), || {
            let view = QMatrixView::full(p, b);
            for row in 0..view.dim() {
                let rep = laplace_check(p, &view, row)?;
                if !rep.pass() {
                    return Ok((false, rep.witness));
                }
            }
            Ok((true, None))
        });
        r.check(s, &format!("det-commutation-{b:?}"), || {
            let own = match b {
                Block::B11 => 1..=p.m(),
                Block::B22 => p.m() + 1..=p.size(),
            };
            for l in 0..p.num_generators() as Letter {
                let g = p.generator(l);
                let c = det_commutation_check(p, b, l);
                let ok = if p.is_odd(l) {
                    c == Commutation::QScalar(-1)
                } else if own.contains(&g.row) {
                    c == Commutation::Central
                } else {
                    continue;
                };
                if !ok {
                    return Ok((false, Some(format!("{}: {c:?}", p.letter_name(l)))));
                }
            }
            Ok((true, None))
        });
        r.check(s, &format!("det-scaling-{b:?}"), || {
            for w in scaling_words(p, b) {
                let t = det_scaling_check(p, b, &w)?;
                if t != p.odd_count(&w) as i32 {
                    return Ok((false, Some(format!("{w:?}: t = {t}"))));
                }
            }
            Ok((true, None))
        });
    }
}

fn localization_suite(r: &mut Runner, loc: &Localization) {
    let s = SuiteKind::Localization;
    let p = loc.presentation();
    for b in [Block::B11, Block::B22] {
        r.check(s, &format!("det-inverse-{b:?}"), || {
            let d = LocElement::from_element(loc.det(b));
            let inv = loc.det_inv(b);
            let one = LocElement::one();
            let ok = loc.equal(&loc.mul(&d, &inv), &one) && loc.equal(&loc.mul(&inv, &d), &one);
            Ok((ok, None))
        });
        r.check(s, &format!("inverse-commutation-{b:?}"), || {
            let inv = loc.det_inv(b);
            for l in (0..p.num_generators() as Letter).filter(|l| p.is_odd(*l)) {
                let g = loc.gen(l);
                let lhs = loc.mul(&inv, &g);
                let rhs = loc.mul(&g, &inv).scale(&p.q_pow(1));
                if !loc.equal(&lhs, &rhs) {
                    return Ok((false, Some(p.letter_name(l))));
                }
            }
            Ok((true, None))
        });
        r.check(s, &format!("block-antipode-{b:?}"), || {
            loc.block_antipode_matrix(b).map(|_| (true, None))
        });
    }
    r.check(s, "berezinian", || loc.berezinian().map(|_| (true, None)));
    r.check(s, "berezinian-inverse", || loc.berezinian_inverse_check().map(|ok| (ok, None)));
}

/// Cheapest checks first, so that an exhausted budget costs as little as
/// possible.
fn hopf_suite(r: &mut Runner, h: &Hopf) {
    let s = SuiteKind::Hopf;
    for b in [Block::B11, Block::B22] {
        r.batch(s, &format!("delta-det-inverse-{b:?}"), || Ok(vec![h.check_delta_det_inverse(b)]));
        r.batch(s, &format!("split-{b:?}"), || {
            Ok(vec![
                h.check_split_scaling(b),
                h.check_split_exchange(b),
                h.check_split_nilpotent(b),
            ])
        });
    }
    r.batch(s, "well-defined", || Ok(vec![h.check_well_defined()]));
    r.batch(s, "counit", || Ok(vec![h.check_counit()]));
    r.batch(s, "coassociativity", || Ok(vec![h.check_coassociativity()]));
    r.batch(s, "antipode", || Ok(vec![h.check_antipode()]));
    r.batch(s, "berezinian-grouplike", || Ok(vec![h.check_berezinian_grouplike()?]));
    r.batch(s, "berezinian-central", || Ok(vec![h.check_berezinian_central()?]));
}

fn qspaces_suite(r: &mut Runner, p: &Presentation) {
    let s = SuiteKind::Qspaces;
    for dual in [false, true] {
        let prefix = if dual { "dual" } else { "primal" };
        r.batch(s, &format!("{prefix}-comodule"), || {
            let space = build_qspace(p.m(), p.n(), dual, p.qmode().clone())?;
            let mut list = check_comodule(p, &space)?;
            for a in &mut list {
                a.axiom = format!("{prefix}-{}", a.axiom);
            }
            Ok(list)
        });
    }
}

fn points_suite_lines(r: &mut Runner) {
    let s = SuiteKind::Points;
    let cfg = r.cfg;
    let start = r.start();
    let outcome = points_suite(cfg.m, cfg.n, cfg.grassmann, cfg.trials, cfg.seed);
    let time_ms = start.elapsed().as_secs_f64() * 1000.0;
    match outcome {
        Ok(rates) => {
            let share = time_ms / rates.len().max(1) as f64;
            for rate in rates {
                let mut line = r.line(s, rate.property.clone(), Ok((rate.pass(), rate.witness.clone())), share);
                line.rate = Some([rate.passed, rate.trials]);
                r.results.push(line);
            }
        }
        Err(e) => {
            let line = r.line(s, "points".into(), Err(e), time_ms);
            r.results.push(line);
        }
    }
}

/// Runs the selected suites in a fixed order. Deterministic given the
/// configuration, apart from the timing fields.
pub fn run_suite(cfg: &VerificationConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let qmode = cfg.qmode()?;
    let budget = Arc::new(Budget::new(Some(cfg.max_terms), Some(cfg.max_steps)));
    let p = Arc::new(Presentation::new(cfg.m, cfg.n, qmode)?);
    let mut r = Runner {
        cfg,
        budget: budget.clone(),
        results: Vec::new(),
        p: p.clone(),
        hopf: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let needs_loc = suites
        .iter()
        .any(|s| matches!(s, SuiteKind::Localization | SuiteKind::Hopf));
    let mut loc = None;
    if needs_loc {
        let suite = suites
            .iter()
            .copied()
            .find(|s| matches!(s, SuiteKind::Localization | SuiteKind::Hopf))
            .expect("checked above");
        match guarded(|| Localization::with_budget(p.clone(), budget.clone())).and_then(|l| l) {
            Ok(l) => {
                let l = Arc::new(l);
                r.hopf = Some(Arc::new(Hopf::new(l.clone())));
                loc = Some(l);
            }
            Err(e) => {
                let line = r.line(suite, "localization-setup".into(), Err(e), 0.0);
                r.results.push(line);
            }
        }
    }
    for s in suites {
        match s {
            SuiteKind::Presentation => presentation_suite(&mut r, &p, &mut rng),
            SuiteKind::Determinants => determinants_suite(&mut r, &p),
            SuiteKind::Localization => {
                if let Some(l) = &loc {
                    localization_suite(&mut r, l);
                }
            }
            SuiteKind::Hopf => {
                if let Some(h) = r.hopf.clone() {
                    hopf_suite(&mut r, &h);
                }
            }
            SuiteKind::Qspaces => qspaces_suite(&mut r, &p),
            SuiteKind::Points => points_suite_lines(&mut r),
        }
    }
    let status = if r.results.iter().all(|c| c.pass) {
        Status::Pass
    } else if r
        .results
        .iter()
        .any(|c| matches!(c.status, Status::Fail | Status::Error))
    {
        Status::Fail
    } else {
        Status::BudgetExhausted
    };
    Ok(SuiteReport {
        m: cfg.m,
        n: cfg.n,
        mode: cfg.mode,
        q: cfg.q_label(),
        seed: cfg.seed,
        status,
        results: r.results,
    })
}

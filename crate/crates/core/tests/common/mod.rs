#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use superhopf::hopf::Hopf;
use superhopf::localization::Localization;
use superhopf::presentation::{Element, Letter, Presentation, QMode};
use superhopf::scalars::{int, Laurent};

pub fn l(s: &str) -> Laurent {
    s.parse().unwrap()
}

pub fn pres(m: usize, n: usize, mode: QMode) -> Arc<Presentation> {
    Arc::new(Presentation::new(m, n, mode).unwrap())
}

pub fn loc(m: usize, n: usize, mode: QMode) -> Arc<Localization> {
    Arc::new(Localization::new(pres(m, n, mode)).unwrap())
}

pub fn hopf(m: usize, n: usize, mode: QMode) -> Hopf {
    Hopf::new(loc(m, n, mode))
}

pub fn specialized(q: i64) -> QMode {
    QMode::Specialized(int(q))
}

/// Reduces a free word by rewriting the leftmost reducible pair of the
/// first reducible word, over and over, using only the published rule
/// table. Slow but independent of the engine's memoized strategies.
pub fn naive_normal_form(p: &Presentation, w: &[Letter], c: &Laurent) -> Element {
    let rules: HashMap<(Letter, Letter), Element> = p
        .rewrite_rules()
        .into_iter()
        .map(|r| {
            let u = p.letter(r.lhs[0]).unwrap();
            let v = p.letter(r.lhs[1]).unwrap();
            ((u, v), r.rhs)
        })
        .collect();
    let mut work: BTreeMap<Vec<Letter>, Laurent> = BTreeMap::new();
    work.insert(w.to_vec(), c.clone());
    let mut done = Element::zero();
    while let Some((word, coeff)) = work.pop_first() {
        if coeff.is_zero() {
            continue;
        }
        let hit = (0..word.len().saturating_sub(1)).find(|&i| rules.contains_key(&(word[i], word[i + 1])));
        match hit {
            None => done.add_term(word, &coeff),
            Some(i) => {
                for (rw, rc) in rules[&(word[i], word[i + 1])].terms() {
                    let mut next = word[..i].to_vec();
                    next.extend_from_slice(rw);
                    next.extend_from_slice(&word[i + 2..]);
                    let e = work.entry(next).or_insert_with(Laurent::zero);
                    *e = &*e + &(&coeff * rc);
                }
            }
        }
    }
    done
}

mod common;

use std::sync::Arc;

use common::{naive_normal_form, pres};
use proptest::prelude::*;
use superhopf::localization::{LocElement, LocKey, Localization};
use superhopf::points::{Evaluation, Grassmann, GrassmannAlgebra, PointSampler};
use superhopf::presentation::{Element, Presentation, QMode};
use superhopf::scalars::{int, Laurent};

const SIZES: [(usize, usize); 4] = [(1, 1), (2, 1), (1, 2), (2, 2)];

fn laurent() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((-3i32..=3, -4i64..=4), 0..4).prop_map(|ts| {
        ts.into_iter()
            .fold(Laurent::zero(), |acc, (e, c)| acc + Laurent::monomial(int(c), e))
    })
}

fn sized_word(max_len: usize) -> impl Strategy<Value = ((usize, usize), Vec<u8>)> {
    prop::sample::select(SIZES.to_vec()).prop_flat_map(move |(m, n)| {
        let g = ((m + n) * (m + n)) as u8;
        (Just((m, n)), prop::collection::vec(0..g, 0..=max_len))
    })
}

fn presentations(mode: QMode) -> Vec<Arc<Presentation>> {
    SIZES.iter().map(|&(m, n)| pres(m, n, mode.clone())).collect()
}

fn index(size: (usize, usize)) -> usize {
    SIZES.iter().position(|s| *s == size).unwrap()
}

fn element(p: &Presentation, words: &[Vec<u8>], coeffs: &[Laurent]) -> Element {
    let mut e = Element::zero();
    for (w, c) in words.iter().zip(coeffs) {
        e = e.add(&p.normal_form(w, c));
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Laurent::one(), a.clone());
    }

    #[test]
    fn laurent_evaluation_is_a_homomorphism(a in laurent(), b in laurent(), q0 in 1i64..5) {
        let q0 = int(q0);
        prop_assert_eq!((&a * &b).eval(&q0).unwrap(), a.eval(&q0).unwrap() * b.eval(&q0).unwrap());
        prop_assert_eq!((&a + &b).eval(&q0).unwrap(), a.eval(&q0).unwrap() + b.eval(&q0).unwrap());
    }

    #[test]
    fn reduction_strategies_agree((size, w) in sized_word(6)) {
        let p = &presentations(QMode::Symbolic)[index(size)];
        let one = Laurent::one();
        let ltr = p.normal_form(&w, &one);
        prop_assert_eq!(&ltr, &p.normal_form_rtl(&w, &one));
        prop_assert_eq!(&ltr, &naive_normal_form(p, &w, &one));
        for (word, _) in ltr.terms() {
            prop_assert!(p.is_normal(word));
        }
    }

    #[test]
    fn multiplication_is_associative(
        (size, u) in sized_word(3),
        v in prop::collection::vec(0u8..16, 0..=3),
        x in prop::collection::vec(0u8..16, 0..=3),
        c in laurent(),
    ) {
        let p = &presentations(QMode::Symbolic)[index(size)];
        let g = p.num_generators() as u8;
        let v: Vec<u8> = v.into_iter().map(|l| l % g).collect();
        let x: Vec<u8> = x.into_iter().map(|l| l % g).collect();
        let a = element(p, &[u.clone(), v.clone()], &[Laurent::one(), c.clone()]);
        let b = element(p, &[v, x.clone()], &[c, Laurent::one()]);
        let d = element(p, &[x, u], &[Laurent::one(), Laurent::one()]);
        prop_assert_eq!(p.mul(&p.mul(&a, &b), &d), p.mul(&a, &p.mul(&b, &d)));
        prop_assert_eq!(p.mul(&a, &Element::one()), a);
    }

    #[test]
    fn classical_limit_matches_specialization((size, w) in sized_word(6)) {
        let i = index(size);
        let sym = presentations(QMode::Symbolic)[i].normal_form(&w, &Laurent::one());
        let classical = presentations(QMode::Classical)[i].normal_form(&w, &Laurent::one());
        prop_assert_eq!(sym.specialize(&int(1)).unwrap(), classical);
    }

    #[test]
    fn odd_degree_is_bounded((size, w) in sized_word(8)) {
        let p = &presentations(QMode::Symbolic)[index(size)];
        let nf = p.normal_form(&w, &Laurent::one());
        if p.odd_count(&w) > p.num_odd() {
            prop_assert!(nf.is_zero());
        }
        for (word, _) in nf.terms() {
            prop_assert_eq!(p.word_parity(word), p.word_parity(&w));
        }
    }

    #[test]
    fn evaluation_is_multiplicative((size, u) in sized_word(4), v in prop::collection::vec(0u8..16, 0..=4), seed in 0u64..1000) {
        let (m, n) = size;
        let p = &presentations(QMode::Classical)[index(size)];
        let g = p.num_generators() as u8;
        let v: Vec<u8> = v.into_iter().map(|l| l % g).collect();
        let alg = GrassmannAlgebra::new(4).unwrap();
        let x = PointSampler::new(alg, m, n, seed).sample();
        let e = Evaluation::new(&alg, p, &x).unwrap();
        let uv: Vec<u8> = u.iter().chain(&v).copied().collect();
        let lhs = e.element(&p.normal_form(&uv, &Laurent::one()));
        prop_assert_eq!(lhs, e.word(&u).mul(&e.word(&v)));
    }

    #[test]
    fn grassmann_ring_axioms(a in grassmann(), b in grassmann(), c in grassmann()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&Grassmann::one()), a.clone());
    }
}

fn grassmann() -> impl Strategy<Value = Grassmann> {
    prop::collection::vec((0u32..16, -3i64..=3), 0..5).prop_map(|ts| {
        ts.into_iter().fold(Grassmann::zero(), |acc, (mask, c)| {
            acc.add(&Grassmann::monomial(mask, int(c)))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn localized_multiplication_is_associative(
        ws in prop::collection::vec((prop::collection::vec(0u8..4, 0..=2), 0u32..=1, 0u32..=1), 3),
    ) {
        let lc = Localization::new(pres(1, 1, QMode::Symbolic)).unwrap();
        let p = lc.presentation();
        let xs: Vec<LocElement> = ws
            .iter()
            .map(|(w, dm, dn)| {
                let e = p.normal_form(w, &Laurent::one());
                let t = LocElement::term(LocKey::new(vec![], *dm, *dn), Laurent::one());
                lc.mul(&LocElement::from_element(&e), &t)
            })
            .collect();
        let left = lc.mul(&lc.mul(&xs[0], &xs[1]), &xs[2]);
        let right = lc.mul(&xs[0], &lc.mul(&xs[1], &xs[2]));
        prop_assert!(lc.equal(&left, &right));
    }
}

mod common;

use common::{l, naive_normal_form, pres, specialized};
use superhopf::presentation::{Element, Parity, QMode};
use superhopf::scalars::{int, Laurent};

#[test]
fn gl11_rules_reproduce_the_relation_list() {
    let p = pres(1, 1, QMode::Symbolic);
    assert_eq!(p.rewrite_rules().len(), 6 + 2);
    let (x11, xi12, xi21, x22) = (p.a(1, 1), p.a(1, 2), p.a(2, 1), p.a(2, 2));
    let one = Laurent::one();
    let nf = |w: &[_]| p.normal_form(w, &one);
    let t = |w: Vec<_>, c: &str| Element::term(w, l(c));
    // x11 xi12 = q^-1 xi12 x11, x11 xi21 = q^-1 xi21 x11
    assert_eq!(nf(&[xi12, x11]), t(vec![x11, xi12], "q"));
    assert_eq!(nf(&[xi21, x11]), t(vec![x11, xi21], "q"));
    // xi12 x22 = q x22 xi12, xi21 x22 = q x22 xi21
    assert_eq!(nf(&[x22, xi12]), t(vec![xi12, x22], "q^-1"));
    assert_eq!(nf(&[x22, xi21]), t(vec![xi21, x22], "q^-1"));
    // xi12 xi21 = -xi21 xi12, odd squares vanish
    assert_eq!(nf(&[xi21, xi12]), t(vec![xi12, xi21], "-1"));
    assert!(nf(&[xi12, xi12]).is_zero());
    assert!(nf(&[xi21, xi21]).is_zero());
    // x11 x22 - x22 x11 = (q - q^-1) xi12 xi21
    let comm = nf(&[x11, x22]).sub(&nf(&[x22, x11]));
    assert_eq!(comm, t(vec![xi12, xi21], "q - q^-1"));
}

#[test]
fn classical_gl11_is_supercommutative() {
    let p = pres(1, 1, QMode::Classical);
    let (x11, xi12, xi21, x22) = (p.a(1, 1), p.a(1, 2), p.a(2, 1), p.a(2, 2));
    let one = Laurent::one();
    assert_eq!(p.normal_form(&[x22, x11], &one), p.normal_form(&[x11, x22], &one));
    assert_eq!(
        p.normal_form(&[xi21, xi12], &one),
        p.normal_form(&[xi12, xi21], &one).neg()
    );
    for g in [x11, x22] {
        for h in [xi12, xi21] {
            assert_eq!(p.normal_form(&[g, h], &one), p.normal_form(&[h, g], &one));
        }
    }
}

#[test]
fn block_11_rules_are_manin_relations() {
    // at (2,1): x11 x12 = q^-1 x12 x11, x12 x21 = x21 x12,
    // x11 x22 - x22 x11 = (q^-1 - q) x12 x21
    let p = pres(2, 1, QMode::Symbolic);
    let one = Laurent::one();
    let x = |i, j| p.a(i, j);
    let nf = |w: &[_]| p.normal_form(w, &one);
    assert_eq!(nf(&[x(1, 1), x(1, 2)]), nf(&[x(1, 2), x(1, 1)]).scale(&l("q^-1")));
    assert_eq!(nf(&[x(1, 1), x(2, 1)]), nf(&[x(2, 1), x(1, 1)]).scale(&l("q^-1")));
    assert_eq!(nf(&[x(1, 2), x(2, 1)]), nf(&[x(2, 1), x(1, 2)]));
    let comm = nf(&[x(1, 1), x(2, 2)]).sub(&nf(&[x(2, 2), x(1, 1)]));
    assert_eq!(comm, nf(&[x(1, 2), x(2, 1)]).scale(&l("q^-1 - q")));
}

#[test]
fn multiplication_examples() {
    let p = pres(1, 1, QMode::Symbolic);
    let (x11, xi12, xi21) = (p.a(1, 1), p.a(1, 2), p.a(2, 1));
    let a = p.gen_element(x11).add(&p.gen_element(xi12));
    assert_eq!(p.mul(&a, &Element::one()), a);
    assert_eq!(
        p.mul(&p.gen_element(xi12), &p.gen_element(xi21)),
        Element::term(vec![xi12, xi21], Laurent::one())
    );
    let b = p.gen_element(x11).sub(&p.gen_element(xi12));
    let got = p.mul(&a, &b);
    // x11^2 + (1 - q^-1) xi12 x11, written in the engine's word order
    let mut want = Element::term(vec![x11, x11], Laurent::one());
    want.add_term(vec![x11, xi12], &l("q - 1"));
    assert_eq!(got, want);
    let mut oracle = naive_normal_form(&p, &[x11, x11], &Laurent::one());
    oracle = oracle.sub(&naive_normal_form(&p, &[x11, xi12], &Laurent::one()));
    oracle = oracle.add(&naive_normal_form(&p, &[xi12, x11], &Laurent::one()));
    oracle = oracle.sub(&naive_normal_form(&p, &[xi12, xi12], &Laurent::one()));
    assert_eq!(got, oracle);
}

#[test]
fn specialization_examples() {
    let p = pres(1, 1, QMode::Symbolic);
    let (x11, xi12, xi21, x22) = (p.a(1, 1), p.a(1, 2), p.a(2, 1), p.a(2, 2));
    let e = Element::term(vec![x11, xi12], l("q^-1"));
    assert_eq!(e.specialize(&int(1)).unwrap(), Element::term(vec![x11, xi12], Laurent::one()));

    let nf = p.normal_form(&[x22, x11], &Laurent::one());
    let p2 = pres(1, 1, specialized(2));
    let nf2 = p2.normal_form(&[x22, x11], &Laurent::one());
    assert_eq!(nf.specialize(&int(2)).unwrap(), nf2);
    let mut want = Element::term(vec![x11, x22], Laurent::one());
    want.add_term(vec![xi12, xi21], &l("-3/2"));
    assert_eq!(nf2, want);
}

#[test]
fn parity_examples() {
    let p = pres(1, 1, QMode::Symbolic);
    let (x11, xi12) = (p.a(1, 1), p.a(1, 2));
    assert_eq!(p.parity_of(&p.gen_element(x11)), Parity::Even);
    assert_eq!(
        p.parity_of(&Element::term(vec![x11, xi12], Laurent::one())),
        Parity::Odd
    );
    assert_eq!(
        p.parity_of(&p.gen_element(x11).add(&p.gen_element(xi12))),
        Parity::Mixed
    );
}

#[test]
fn rule_counts() {
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let p = pres(m, n, QMode::Symbolic);
        let g = (m + n) * (m + n);
        assert_eq!(p.rewrite_rules().len(), g * (g - 1) / 2 + 2 * m * n);
    }
}

#[test]
fn engine_matches_brute_force_rewriting() {
    let p = pres(2, 1, QMode::Symbolic);
    let g = p.num_generators();
    // every word of length 3
    for a in 0..g {
        for b in 0..g {
            for c in 0..g {
                let w = [a as _, b as _, c as _];
                let want = naive_normal_form(&p, &w, &Laurent::one());
                assert_eq!(p.normal_form(&w, &Laurent::one()), want, "word {w:?}");
                assert_eq!(p.normal_form_rtl(&w, &Laurent::one()), want, "word {w:?}");
            }
        }
    }
}

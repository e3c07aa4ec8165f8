mod common;

use common::{l, pres, specialized};
use superhopf::determinants::{
    block_det, det_commutation_check, det_scaling_check, laplace_check, Block, Commutation,
    QMatrixView,
};
use superhopf::presentation::{Element, Presentation, QMode};
use superhopf::scalars::Laurent;

fn nf(p: &Presentation, w: &[(usize, usize)], c: &str) -> Element {
    let w: Vec<_> = w.iter().map(|&(i, j)| p.a(i, j)).collect();
    p.normal_form(&w, &l(c))
}

#[test]
fn small_quantum_determinants() {
    let p = pres(1, 1, QMode::Symbolic);
    assert_eq!(block_det(&p, Block::B11), p.gen_element(p.a(1, 1)));
    assert_eq!(block_det(&p, Block::B22), p.gen_element(p.a(2, 2)));

    let p = pres(2, 1, QMode::Symbolic);
    let want = nf(&p, &[(1, 1), (2, 2)], "1").add(&nf(&p, &[(1, 2), (2, 1)], "-q^-1"));
    assert_eq!(block_det(&p, Block::B11), want);

    let p = pres(1, 2, QMode::Symbolic);
    let want = nf(&p, &[(2, 2), (3, 3)], "1").add(&nf(&p, &[(2, 3), (3, 2)], "-q"));
    assert_eq!(block_det(&p, Block::B22), want);
}

#[test]
fn laplace_expansions() {
    for (m, n, mode) in [
        (1, 1, QMode::Symbolic),
        (2, 1, QMode::Symbolic),
        (1, 2, QMode::Symbolic),
        (2, 2, specialized(3)),
    ] {
        let p = pres(m, n, mode);
        for block in [Block::B11, Block::B22] {
            let view = QMatrixView::full(&p, block);
            for row in 0..view.dim() {
                let r = laplace_check(&p, &view, row).unwrap();
                assert!(r.pass(), "({m},{n}) {block:?} row {row}: {:?}", r.witness);
            }
        }
    }
}

#[test]
fn laplace_rejects_bad_rows() {
    let p = pres(1, 1, QMode::Symbolic);
    let view = QMatrixView::full(&p, Block::B11);
    assert!(laplace_check(&p, &view, 1).is_err());
}

#[test]
fn commutation_examples() {
    let p = pres(1, 1, QMode::Symbolic);
    assert_eq!(det_commutation_check(&p, Block::B11, p.a(1, 2)), Commutation::QScalar(-1));
    assert_eq!(det_commutation_check(&p, Block::B11, p.a(2, 1)), Commutation::QScalar(-1));
    assert_eq!(det_commutation_check(&p, Block::B11, p.a(1, 1)), Commutation::Central);
    let want = Element::term(vec![p.a(1, 2), p.a(2, 1)], l("q - q^-1"));
    assert_eq!(
        det_commutation_check(&p, Block::B11, p.a(2, 2)),
        Commutation::Polynomial(want)
    );

    let p = pres(2, 1, QMode::Symbolic);
    assert_eq!(det_commutation_check(&p, Block::B11, p.a(1, 2)), Commutation::Central);
}

#[test]
fn determinants_scale_odd_generators() {
    for (m, n) in [(1, 1), (2, 1), (1, 2)] {
        let p = pres(m, n, QMode::Symbolic);
        for l in 0..p.num_generators() as u8 {
            if !p.is_odd(l) {
                continue;
            }
            for block in [Block::B11, Block::B22] {
                assert_eq!(det_commutation_check(&p, block, l), Commutation::QScalar(-1));
            }
        }
    }
}

#[test]
fn scaling_examples() {
    let p = pres(1, 1, QMode::Symbolic);
    assert_eq!(det_scaling_check(&p, Block::B11, &[p.a(1, 1)]).unwrap(), 0);
    assert_eq!(det_scaling_check(&p, Block::B11, &[p.a(1, 2)]).unwrap(), 1);
    let p = pres(2, 1, QMode::Symbolic);
    assert_eq!(
        det_scaling_check(&p, Block::B11, &[p.a(1, 1), p.a(2, 3)]).unwrap(),
        1
    );
    // neither one factor per row nor one per column
    assert!(det_scaling_check(&p, Block::B11, &[p.a(1, 1), p.a(1, 1)]).is_err());
}

#[test]
fn scaling_exhaustive_small_sizes() {
    for (m, n) in [(1, 1), (2, 1), (1, 2)] {
        let p = pres(m, n, QMode::Symbolic);
        let size = m + n;
        for block in [Block::B11, Block::B22] {
            let idx: Vec<usize> = match block {
                Block::B11 => (1..=m).collect(),
                Block::B22 => (m + 1..=size).collect(),
            };
            let k = idx.len();
            let mut count = 0;
            for code in 0..size.pow(k as u32) {
                let free: Vec<usize> = (0..k).map(|i| code / size.pow(i as u32) % size + 1).collect();
                for by_row in [true, false] {
                    let w: Vec<_> = idx
                        .iter()
                        .zip(&free)
                        .map(|(&a, &b)| if by_row { p.a(a, b) } else { p.a(b, a) })
                        .collect();
                    let t = det_scaling_check(&p, block, &w).unwrap();
                    assert_eq!(t as usize, p.odd_count(&w));
                    count += 1;
                }
            }
            assert_eq!(count, 2 * size.pow(k as u32));
        }
    }
}

#[test]
fn symbolic_and_specialized_determinants_agree() {
    let p = pres(2, 1, QMode::Symbolic);
    let p2 = pres(2, 1, specialized(2));
    let d = block_det(&p, Block::B11);
    assert_eq!(d.specialize(&superhopf::scalars::int(2)).unwrap(), block_det(&p2, Block::B11));
    assert!(!d.is_zero());
    let _ = Laurent::one();
}

//! Algebraic invariants over randomly generated exact inputs.

use std::sync::Arc;

use cybe_core::equivalence::{apply_equivalence, transformed_lambda, Equivalence};
use cybe_core::subalgebra::{homogeneous_from_a, ComplementSubalgebra};
use cybe_core::ybe::{cyb, gcyb};
use cybe_core::{q, qf, solve_flow, Coeff, LieAlgebra, MatSeries, Matrix, RMatrixSeries, Series, Tensor2, Vector, Q};
use num_traits::Zero;
use proptest::prelude::*;

fn small_q() -> impl Strategy<Value = Q> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| qf(n, d))
}

fn laurent(lo: i64, len: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(small_q(), len).prop_map(move |c| Series::scalar(lo, lo + len as i64, c))
}

/// `z + a_2 z^2 + ...` known to `prec`.
fn coordinate(prec: i64) -> impl Strategy<Value = Series> {
    prop::collection::vec(small_q(), 2).prop_map(move |c| {
        let mut coeffs = vec![q(1)];
        coeffs.extend(c);
        Series::scalar(1, prec, coeffs)
    })
}

fn sl2() -> Arc<LieAlgebra> {
    Arc::new(LieAlgebra::sl(2).unwrap())
}

fn sl3() -> Arc<LieAlgebra> {
    Arc::new(LieAlgebra::sl(3).unwrap())
}

fn element(d: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3i64..=3, d).prop_map(|v| Vector::from_ints(&v))
}

/// Lagrange: `[z^n] w^{-1} = [z^{n-1}] (z / w)^n / n`.
fn lagrange_inverse(w: &Series) -> Series {
    let prec = w.prec();
    let quotient = w.shift(-1).inv().unwrap();
    let coeffs = (1..prec).map(|n| quotient.pow_nonneg(n as u32).at(n - 1) / q(n)).collect();
    Series::scalar(1, prec, coeffs)
}

/// A gauge and coordinate image of Yang's solution with `λ = 1`.
fn twisted_yang(lie: &Arc<LieAlgebra>, x: &Vector, p: &[Q], w: &Series, caps: usize) -> RMatrixSeries {
    let prec = (2 * caps + 2) as i64;
    let w = w.truncate(prec);
    let phi = lie.exp_ad_poly(x, p, prec).unwrap();
    let e = Equivalence::new(lie, w.derive(), w, phi).unwrap();
    apply_equivalence(&RMatrixSeries::yang(lie.clone(), caps, caps), &e).unwrap()
}

#[test]
fn lagrange_oracle_frozen_value() {
    let w = Series::polynomial(&[q(0), q(1), q(1)], 6);
    let expected = Series::polynomial(&[q(0), q(1), q(-1), q(2), q(-5), q(14)], 6);
    assert_eq!(w.comp_inverse().unwrap().first_difference(&expected), None);
    assert_eq!(lagrange_inverse(&w).first_difference(&expected), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn comp_inverse_matches_lagrange(w in coordinate(9)) {
        let v = w.comp_inverse().unwrap();
        prop_assert_eq!(v.first_difference(&lagrange_inverse(&w)), None);
        prop_assert_eq!(w.compose(&v).unwrap().first_difference(&Series::z(9)), None);
        prop_assert_eq!(v.compose(&w).unwrap().first_difference(&Series::z(9)), None);
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in laurent(-2, 6), b in laurent(0, 5), c in laurent(-1, 7)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn derivatives_have_no_residue(f in laurent(-4, 9)) {
        prop_assert!(f.derive().residue().unwrap().is_zero());
    }

    #[test]
    fn flow_solves_its_equation(tail in laurent(1, 5), l0 in 1i64..4) {
        let lambda = Series::one(6).scale(&q(l0)).add(&tail.truncate(6));
        let u = solve_flow(&lambda).unwrap();
        prop_assert!(u.at(0).is_zero());
        prop_assert_eq!(u.derive().first_difference(&lambda.compose(&u).unwrap()), None);
    }

    #[test]
    fn killing_form_is_invariant(a in element(8), b in element(8), c in element(8)) {
        let lie = sl3();
        let lhs = lie.killing_form(&lie.bracket(&a, &b), &c);
        let rhs = lie.killing_form(&a, &lie.bracket(&b, &c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn casimir_does_not_depend_on_the_basis(upper in prop::collection::vec(-2i64..=2, 3), diag in prop::collection::vec(1i64..=3, 3)) {
        let lie = sl2();
        let mut p = Matrix::identity(3);
        for i in 0..3 {
            p.set(i, i, q(diag[i]));
        }
        p.set(0, 1, q(upper[0]));
        p.set(0, 2, q(upper[1]));
        p.set(1, 2, q(upper[2]));
        let other = lie.change_basis(&p).unwrap();
        let back = p.inverse().unwrap().transpose();
        prop_assert_eq!(lie.casimir().apply(&back, &back), other.casimir());
    }

    #[test]
    fn automorphisms_fix_the_casimir(x in element(3), c in small_q()) {
        let lie = sl2();
        let phi = lie.exp_ad_poly(&x, &[q(0), c], 6).unwrap();
        let gamma = lie.casimir();
        for n in 0..6 {
            let mut t = Tensor2::zeros(3);
            for a in 0..=n {
                t.add_assign(&gamma.apply(phi.at(a), phi.at(n - a)));
            }
            let expected = if n == 0 { gamma.clone() } else { Tensor2::zeros(3) };
            prop_assert_eq!(t, expected);
        }
    }

    #[test]
    fn bar_is_an_involution(mu in laurent(1, 3), t in prop::collection::vec(small_q(), 9)) {
        let lie = sl2();
        let lambda = Series::one(12).add(&mu.truncate(12));
        let mut t0 = Tensor2::zeros(3);
        for (i, c) in t.into_iter().enumerate() {
            *t0.get_mut(i / 3, i % 3) = c;
        }
        let r = RMatrixSeries::yang(lie, 6, 6).rescale(&lambda).unwrap().add_constant(&t0);
        prop_assert!(r.bar().bar().agrees_with(&r.truncate(r.bar().bar().nx(), r.bar().bar().ny())));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn generalized_and_classical_agree_on_skew_inputs(x in element(3), c in small_q(), c2 in small_q()) {
        let lie = sl2();
        let r = twisted_yang(&lie, &x, &[q(0), c, c2], &Series::z(14), 6);
        prop_assert!(r.is_skew().skew);
        let (g, k) = (gcyb(&r, 3, 2).unwrap(), cyb(&r, 3, 2).unwrap());
        prop_assert_eq!(g.first_nonzero(), None);
        prop_assert_eq!(k.first_nonzero(), None);
        prop_assert_eq!(g, k);
    }

    #[test]
    fn constant_rescaling_keeps_skewness(x in element(3), c in small_q(), s in 2i64..5) {
        let lie = sl2();
        let r = twisted_yang(&lie, &x, &[q(0), c], &Series::z(14), 6);
        let e = Equivalence::rescaling(3, Series::one(12).scale(&q(s))).unwrap();
        let scaled = apply_equivalence(&r, &e).unwrap();
        prop_assert!(scaled.is_skew().skew);
        prop_assert!(!scaled.is_normalized());
    }

    #[test]
    fn lambda_transforms_along_composites(mu in laurent(1, 2), w1 in coordinate(12), w2 in coordinate(12)) {
        let lie = sl2();
        let r = RMatrixSeries::yang(lie.clone(), 5, 5);
        let e1 = Equivalence::new(&lie, Series::one(12).add(&mu.truncate(12)), w1, MatSeries::constant(Matrix::identity(3), 12)).unwrap();
        let e2 = Equivalence::coordinate(3, w2).unwrap();
        let once = apply_equivalence(&r, &e1.then(&e2).unwrap()).unwrap();
        let stepwise = transformed_lambda(&transformed_lambda(r.lambda(), &e1).unwrap(), &e2).unwrap();
        prop_assert_eq!(once.lambda().first_difference(&stepwise), None);
    }

    #[test]
    fn subalgebra_transports_along_equivalences(x in element(3), c in small_q(), w in coordinate(14)) {
        let lie = sl2();
        let caps = 6;
        let prec = (2 * caps + 2) as i64;
        let phi = lie.exp_ad_poly(&x, &[q(0), c.clone()], prec).unwrap();
        let w = w.truncate(prec);
        let image = twisted_yang(&lie, &x, &[q(0), c], &w, caps);
        let target = ComplementSubalgebra::extract(&image).unwrap();
        let source = ComplementSubalgebra::yang(lie.clone(), 3, 8);
        for v in source.transported_basis(&phi, &w).unwrap() {
            let v = v.truncate(target.tail_prec() as i64);
            prop_assert!(target.membership(&v).unwrap().member);
        }
    }

    #[test]
    fn coordinate_changes_break_skewness(w in coordinate(14)) {
        let lie = sl2();
        let r = twisted_yang(&lie, &Vector::zeros(3), &[], &w, 6);
        prop_assert!(r.is_normalized());
        prop_assert_eq!(r.is_skew().skew, w.at(2).is_zero() && w.at(3).is_zero());
        prop_assert!(gcyb(&r, 3, 2).unwrap().first_nonzero().is_none());
    }

    #[test]
    fn homogeneous_subalgebras_are_stable_under_inverse_z(c in prop::collection::vec(small_q(), 3)) {
        let lie = Arc::new(LieAlgebra::so(3).unwrap());
        let c = [c[0].clone(), c[1].clone(), c[2].clone()];
        let a = cybe_core::fixtures::skrypnyk_a(&c, 12);
        let (w, _) = homogeneous_from_a(lie, &a, 5).unwrap();
        for k in 0..4 {
            for i in 0..3 {
                let v = w.element(k, i).shift(-1);
                prop_assert!(w.membership(&v).unwrap().member);
            }
        }
    }
}

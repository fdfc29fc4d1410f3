//! Acceptance suite: one line per criterion, exact checks only. Run with
//! `cargo test -p cybe-core --test acceptance`.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use cybe_core::curve::{
    classify_lattice, classify_rmatrix, multipliers, skew_lattice, subalgebra_index, wp_lattice, ClassifyOptions, CubicKind,
    LatticeIndex, MultiplierLattice,
};
use cybe_core::equivalence::{apply_equivalence, difference_normalize, from_difference, normalize, Equivalence};
use cybe_core::expansion::TensorSeries;
use cybe_core::fixtures::{gauge_twisted_yang, skrypnyk, trigonometric};
use cybe_core::subalgebra::{cobracket_check, orthogonality_check, ComplementSubalgebra};
use cybe_core::ybe::{gcyb, is_rmatrix};
use cybe_core::{q, qf, LieAlgebra, RMatrixSeries, Series, Tensor2, Vector, Q};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Truncation windows shared by every criterion.
#[derive(Clone, Copy, Debug)]
struct Windows {
    kx: usize,
    nx: usize,
    ny: usize,
    classify: usize,
    classify_caps: (usize, usize),
}

impl Windows {
    fn base() -> Self {
        Windows { kx: 6, nx: 8, ny: 8, classify: 14, classify_caps: (13, 5) }
    }

    fn widened(self, by: usize) -> Self {
        Windows {
            kx: self.kx + by,
            nx: self.nx + by,
            ny: self.ny + by,
            classify: self.classify + by,
            classify_caps: (self.classify_caps.0 + by, self.classify_caps.1 + by),
        }
    }

    fn order(&self) -> usize {
        self.nx.min(self.ny) / 2
    }

    fn options(&self) -> ClassifyOptions {
        ClassifyOptions { window: self.classify, ..ClassifyOptions::default() }
    }
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn sl2() -> Arc<LieAlgebra> {
    Arc::new(LieAlgebra::sl(2).unwrap())
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    qf(rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

fn random_element(rng: &mut ChaCha8Rng) -> Vector {
    let mut v: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
    if v.iter().all(|&c| c == 0) {
        v[0] = 1;
    }
    Vector::from_ints(&v)
}

/// `w = z + c_2 z^2 + c_3 z^3` with `c_2 ≠ 0`.
fn random_coordinate(rng: &mut ChaCha8Rng, prec: i64) -> Series {
    let mut c2 = random_q(rng);
    if c2.is_zero() {
        c2 = q(1);
    }
    Series::polynomial(&[q(0), q(1), c2, random_q(rng)], prec)
}

/// `(w', w, exp(p ad x))` applied to Yang's solution; `λ` stays 1.
fn equivalent_yang(lie: &Arc<LieAlgebra>, x: &Vector, p: &[Q], w: &Series, w_: &Windows) -> RMatrixSeries {
    let prec = (w_.nx + w_.ny + 2) as i64;
    let w = w.truncate(prec);
    let phi = lie.exp_ad_poly(x, p, prec).unwrap();
    let e = Equivalence::new(lie, w.derive(), w, phi).unwrap();
    apply_equivalence(&RMatrixSeries::yang(lie.clone(), w_.nx, w_.ny), &e).unwrap()
}

fn skew_fixture(rng: &mut ChaCha8Rng, lie: &Arc<LieAlgebra>, w: &Windows) -> RMatrixSeries {
    let x = random_element(rng);
    let p = [q(0), random_q(rng), random_q(rng)];
    equivalent_yang(lie, &x, &p, &Series::z((w.nx + w.ny + 2) as i64), w)
}

fn gcyb_holds(r: &RMatrixSeries, w: &Windows) -> bool {
    gcyb(r, r.max_ybe_order().min(w.order()), w.kx).unwrap().first_nonzero().is_none()
}

fn criterion_1(w: &Windows) -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    for lie in [LieAlgebra::sl(2).unwrap(), LieAlgebra::sl(3).unwrap()] {
        let r = RMatrixSeries::yang(Arc::new(lie), w.nx, w.ny);
        ok &= gcyb(&r, w.order(), w.kx).unwrap().first_nonzero().is_none();
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(ok && secs < 60.0, format!("sl2, sl3 on [-{}, {})^2 x [0, {}), {secs:.1}s", w.kx, w.order(), w.order()))
}

fn criterion_2(w: &Windows) -> Verdict {
    let mut ok = true;
    for lie in [LieAlgebra::sl(2).unwrap(), LieAlgebra::sl(3).unwrap()] {
        let r = RMatrixSeries::rescaled_yang(Arc::new(lie), &[q(1), q(1)], w.nx, w.ny).unwrap();
        ok &= gcyb_holds(&r, w) && !r.is_skew().skew;
    }
    verdict(ok, format!("order {}", w.order()))
}

fn criterion_3(w: &Windows) -> Verdict {
    let lie = sl2();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let prec = (w.nx + w.ny + 2) as i64;
    let mut failures = 0;
    for i in 0..20 {
        let x = random_element(&mut rng);
        let p = [q(0), random_q(&mut rng), random_q(&mut rng)];
        let coord = if i % 2 == 0 { Series::z(prec) } else { random_coordinate(&mut rng, prec) };
        let r = equivalent_yang(&lie, &x, &p, &coord, w);
        let sub = ComplementSubalgebra::extract(&r).unwrap();
        let closed = sub.closure_check(w.order()).unwrap().closed;
        let back = sub.reconstruct();
        let again = ComplementSubalgebra::extract(&back).unwrap();
        if !(closed && back.agrees_with(&r) && again.first_difference(&sub).is_none()) {
            failures += 1;
        }
    }
    verdict(failures == 0, format!("20 tail maps, caps ({}, {}), {failures} failures", w.nx, w.ny))
}

fn criterion_4(w: &Windows) -> Verdict {
    let lie = sl2();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let prec = (w.nx + w.ny + 2) as i64;
    let mut fixtures: Vec<(bool, RMatrixSeries)> = (0..10).map(|_| (true, skew_fixture(&mut rng, &lie, w))).collect();
    for _ in 0..4 {
        let coord = random_coordinate(&mut rng, prec);
        fixtures.push((false, equivalent_yang(&lie, &random_element(&mut rng), &[], &coord, w)));
    }
    for _ in 0..3 {
        let mut a = random_q(&mut rng);
        if a.is_zero() {
            a = q(1);
        }
        let r = RMatrixSeries::rescaled_yang(lie.clone(), &[q(1), a, random_q(&mut rng)], w.nx, w.ny).unwrap();
        fixtures.push((false, normalize(&r).unwrap().0));
    }
    for c in [[q(1), q(2), q(3)], [q(0), q(1), q(-1)], [qf(1, 2), q(0), q(2)]] {
        fixtures.push((false, skrypnyk(&c, w.nx, w.ny).unwrap().r));
    }
    let mut agree = 0;
    for (expected, r) in &fixtures {
        let skew = r.is_skew().skew;
        let self_orthogonal = orthogonality_check(r).unwrap().self_orthogonal;
        if skew == self_orthogonal && skew == *expected {
            agree += 1;
        }
    }
    verdict(agree == fixtures.len(), format!("{agree}/{} fixtures agree", fixtures.len()))
}

fn criterion_5(w: &Windows) -> Verdict {
    let sk = skrypnyk(&[q(1), q(2), q(3)], w.nx, w.ny).unwrap();
    let same = sk.subalgebra.reconstruct().agrees_with(&sk.r);
    let ok = same && gcyb_holds(&sk.r, w) && sk.a != sk.abar && !sk.r.is_skew().skew;
    verdict(ok, format!("so(3), caps ({}, {}), order {}", w.nx, w.ny, sk.r.max_ybe_order()))
}

fn criterion_6(w: &Windows) -> Verdict {
    let r = RMatrixSeries::rescaled_yang(sl2(), &[q(1), q(1)], w.nx, w.ny).unwrap();
    let (n, e) = normalize(&r).unwrap();
    let u = e.w();
    let through = w.nx as i64;
    let matches = u.prec() > through && u.truncate(through + 1).first_difference(&Series::expm1(through + 1)).is_none();
    let lambda = r.lambda();
    let residual = u.derive().sub(&lambda.compose(u).unwrap());
    let ok = n.is_normalized() && matches && residual.is_zero();
    verdict(ok, format!("u = e^z - 1 through z^{through}, residual known to z^{}", residual.prec() - 1))
}

fn criterion_7(w: &Windows) -> Verdict {
    let lie = sl2();
    let r = gauge_twisted_yang(&lie, &lie.basis_vector(0), &[q(0), q(1)], w.nx, w.ny).unwrap();
    let form = difference_normalize(&r).unwrap();
    let gamma_over_z = TensorSeries::new(3, -1, form.s.prec(), vec![lie.casimir()]);
    let rt = &form.r_tilde;
    let direct = from_difference(lie.clone(), &form.s, rt.nx(), rt.ny()).unwrap();
    let ok = form.s == gamma_over_z && form.matches && direct.agrees_with(rt) && form.derivative_closure.member;
    verdict(ok, format!("s = γ/z to z^{}, r̃ caps ({}, {})", form.s.prec() - 1, rt.nx(), rt.ny()))
}

fn criterion_8(w: &Windows) -> Verdict {
    let lie = sl2();
    let yang = RMatrixSeries::yang(lie.clone(), w.nx, w.ny);
    let twisted = gauge_twisted_yang(&lie, &lie.basis_vector(2), &[q(0), q(1), qf(1, 2)], w.nx, w.ny).unwrap();
    let mut ok = true;
    for r in [&yang, &twisted] {
        ok &= cobracket_check(r, 2).map(|rep| rep.passes()).unwrap_or(false);
    }
    verdict(ok, "yang and a gauge twist, depth 2")
}

fn criterion_9(w: &Windows) -> Verdict {
    let (cx, cy) = w.classify_caps;
    let c = classify_rmatrix(&RMatrixSeries::yang(sl2(), cx, cy), w.options()).unwrap();
    let ok = c.class.kind == CubicKind::Cuspidal && c.class.a == Some(q(0)) && c.class.b == Some(q(0));
    let certified = c.class.certified.map_or("none".to_string(), |n| format!("[-6, {n})"));
    verdict(ok, format!("{}, relation certified on {certified}", c.class.kind.name()))
}

fn criterion_10(w: &Windows) -> Verdict {
    let prec = w.classify as i64 + 10;
    let mut ok = true;
    for (g2, g3, a, b, disc) in [(q(4), q(0), q(-1), q(0), q(-4)), (q(0), q(4), q(0), q(-1), q(27))] {
        let (o, _, _) = wp_lattice(&g2, &g3, prec, 8).unwrap();
        let c = classify_lattice(&o, w.classify);
        ok &= c.kind == CubicKind::Elliptic && c.a == Some(a) && c.b == Some(b) && c.discriminant == Some(disc);
    }
    verdict(ok, format!("window {}", w.classify))
}

/// Constants `α e⊗f + β f⊗e + ζ h⊗h` for which `γ/(e^z - 1) + t` solves the classical equation
/// on two window sizes.
fn trigonometric_constants(lie: &Arc<LieAlgebra>, w: &Windows) -> Vec<Tensor2> {
    let grid: Vec<Q> = [(0, 1), (1, 16), (-1, 16), (1, 8), (-1, 8), (1, 4), (-1, 4)].iter().map(|&(n, d)| qf(n, d)).collect();
    let small = w.nx - 4;
    let solves = |t: &Tensor2, caps: usize| is_rmatrix(&trigonometric(lie, t, caps, caps).unwrap(), caps / 2, 1).unwrap().holds;
    let mut out = Vec::new();
    for alpha in &grid {
        for beta in &grid {
            for zeta in &grid {
                let mut t = Tensor2::zeros(3);
                *t.get_mut(0, 2) = alpha.clone();
                *t.get_mut(2, 0) = beta.clone();
                *t.get_mut(1, 1) = zeta.clone();
                if solves(&t, 2) && solves(&t, small) && solves(&t, small + 2) {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn criterion_11(w: &Windows) -> Verdict {
    let lie = sl2();
    let found = trigonometric_constants(&lie, w);
    let (cx, cy) = w.classify_caps;
    let mut ok = !found.is_empty();
    for t in &found {
        let c = classify_rmatrix(&trigonometric(&lie, t, cx, cy).unwrap(), w.options()).unwrap();
        let (a, b) = (c.class.a.clone().unwrap_or_default(), c.class.b.clone().unwrap_or_default());
        let cubic = q(4) * &a * &a * &a;
        ok &= c.class.kind == CubicKind::Nodal && cubic == -(q(27) * &b * &b) && !cubic.is_zero();
    }
    verdict(ok, format!("{} constants found, search caps {} and {}", found.len(), w.nx - 4, w.nx - 2))
}

fn criterion_12(w: &Windows) -> Verdict {
    let lie = sl2();
    let (cx, cy) = w.classify_caps;
    let trig_t = trigonometric_constants(&lie, w);
    let mut fixtures = vec![
        RMatrixSeries::yang(lie.clone(), w.nx, w.ny),
        gauge_twisted_yang(&lie, &lie.basis_vector(0), &[q(0), q(1)], w.nx, w.ny).unwrap(),
        skrypnyk(&[q(1), q(2), q(3)], w.nx, w.ny).unwrap().r,
        normalize(&RMatrixSeries::rescaled_yang(lie.clone(), &[q(1), q(1)], w.nx, w.ny).unwrap()).unwrap().0,
    ];
    fixtures.extend(trig_t.iter().map(|t| trigonometric(&lie, t, cx, cy).unwrap()));
    let zero = LatticeIndex { h0: 0, h1: 0, stale: false };
    let all_zero = fixtures.iter().all(|r| subalgebra_index(&ComplementSubalgebra::extract(r).unwrap()) == zero);
    let gens = [Series::monomial(q(1), -2, w.classify as i64), Series::monomial(q(1), -3, w.classify as i64)];
    let cusp = MultiplierLattice::from_generators(&gens, 8).unwrap().index();
    let ok = all_zero && cusp == LatticeIndex { h0: 1, h1: 1, stale: false };
    verdict(ok, format!("{} fixtures at (0, 0), Q[z^-2, z^-3] at ({}, {})", fixtures.len(), cusp.h0, cusp.h1))
}

fn criterion_13(w: &Windows) -> Verdict {
    let lie = sl2();
    let (cx, cy) = w.classify_caps;
    let yang_w = ComplementSubalgebra::extract(&RMatrixSeries::yang(lie.clone(), cx, cy)).unwrap();
    let yang_mult = multipliers(&yang_w, 3).unwrap();
    let has_inverse_z = yang_mult
        .element_of_order(1)
        .map_or(false, |u| u.first_difference(&Series::monomial(q(1), -1, u.prec())).is_none());
    let mut lattices = vec![yang_mult.clone(), skew_lattice(yang_mult.element_of_order(1).unwrap(), 6).unwrap()];
    for t in trigonometric_constants(&lie, w) {
        let sub = ComplementSubalgebra::extract(&trigonometric(&lie, &t, cx, cy).unwrap()).unwrap();
        let m = multipliers(&sub, 3).unwrap();
        if let Some(u) = m.element_of_order(1) {
            lattices.push(skew_lattice(u, 6).unwrap());
        }
        lattices.push(m);
    }
    let sk = skrypnyk(&[q(1), q(2), q(3)], cx, cy).unwrap();
    lattices.push(multipliers(&sk.subalgebra, 3).unwrap());
    let (wp, _, _) = wp_lattice(&q(4), &q(0), w.classify as i64 + 10, 8).unwrap();
    lattices.push(wp.self_multipliers(4).unwrap());
    lattices.push(wp);
    let closed = lattices.iter().filter(|o| o.closure().closed).count();
    verdict(has_inverse_z && closed == lattices.len(), format!("z^-1 found, {closed}/{} lattices closed", lattices.len()))
}

type Criterion = fn(&Windows) -> Verdict;

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
        criterion_12,
        criterion_13,
    ];
    let base = Windows::base();
    let wide = base.widened(2);
    let mut all = true;
    let mut stable = true;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = c(&base);
        let v2 = c(&wide);
        eprintln!("criterion {} took {:.1}s", i + 1, start.elapsed().as_secs_f64());
        stable &= v.pass == v2.pass;
        all &= v.pass;
        println!("criterion {:>2}: {}  {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        println!("              widened: {}  {}", if v2.pass { "PASS" } else { "FAIL" }, v2.detail);
    }
    println!(
        "criterion 14: {}  verdicts unchanged from (Kx, Nx, Ny) = ({}, {}, {}), classifier {} to ({}, {}, {}), classifier {}",
        if stable { "PASS" } else { "FAIL" },
        base.kx,
        base.nx,
        base.ny,
        base.classify,
        wide.kx,
        wide.nx,
        wide.ny,
        wide.classify
    );
    if all && stable {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

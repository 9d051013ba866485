use std::f64::consts::PI;

use hyperdet_core::chambers;
use hyperdet_core::error::Error;
use hyperdet_core::exact;
use hyperdet_core::forms;
use hyperdet_core::geometry::{Arrangement, LinearForm};
use hyperdet_core::quadrature::*;
use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn points(zs: &[i64], w: &[Complex64]) -> Arrangement {
    Arrangement::new(1, zs.iter().map(|&z| LinearForm::from_ints(&[1], -z)).collect(), w.to_vec()).unwrap()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec { tol: 1e-11, ..QuadratureSpec::default() }
}

// Adaptive Gauss–Kronrod (7,15) on [a,b].
const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = f(m) * WK[7];
    let mut g = f(m) * WG[3];
    for i in 0..7 {
        let s = f(m - h * XK[i]) + f(m + h * XK[i]);
        k += s * WK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

fn adaptive(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, depth: u32) -> Complex64 {
    let (v, e) = gk(f, a, b);
    if e <= tol * v.norm() || depth == 0 {
        return v;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, tol, depth - 1) + adaptive(f, m, b, tol, depth - 1)
}

/// `∫_lo^hi g`, with power substitutions `t = end ± L v^k` removing the
/// endpoint singularities; `hi = None` means `+∞`.
fn oracle(g: &dyn Fn(f64) -> Complex64, lo: f64, hi: Option<f64>, k: f64) -> Complex64 {
    let piece = |a: f64, b: f64| {
        let half = 0.5 * (b - a);
        let left = |v: f64| g(a + half * v.powf(k)) * (half * k * v.powf(k - 1.0));
        let right = |v: f64| g(b - half * v.powf(k)) * (half * k * v.powf(k - 1.0));
        adaptive(&left, 0.0, 1.0, 1e-14, 14) + adaptive(&right, 0.0, 1.0, 1e-14, 14)
    };
    match hi {
        Some(b) => piece(lo, b),
        None => {
            let mut total = piece(lo, lo + 1.0);
            let mut x = lo + 1.0;
            for _ in 0..200 {
                let v = adaptive(g, x, x + 1.0, 1e-14, 10);
                total += v;
                x += 1.0;
                if v.norm() < 1e-18 * total.norm() {
                    break;
                }
            }
            total
        }
    }
}

fn oracle_matrix(a: &Arrangement, f0: Option<&LinearForm>, pm: &PeriodMatrix) -> Vec<Vec<Complex64>> {
    pm.forms
        .iter()
        .map(|phi| {
            pm.chambers
                .iter()
                .zip(&pm.branches)
                .zip(&pm.orientations)
                .map(|((ch, br), &o)| {
                    let ends: Vec<f64> = ch.vertices.iter().map(|v| exact::to_f64(&v[0])).collect();
                    let lo = ends.iter().cloned().fold(f64::INFINITY, f64::min);
                    let hi = if ch.rays.is_empty() { Some(ends.iter().cloned().fold(f64::NEG_INFINITY, f64::max)) } else { None };
                    let g = |t: f64| forms::evaluate_integrand(a, br, phi, &[t], f0).unwrap_or(Complex64::zero());
                    oracle(&g, lo, hi, 6.0) * f64::from(o)
                })
                .collect()
        })
        .collect()
}

fn max_dev(x: &[Vec<Complex64>], y: &[Vec<Complex64>]) -> f64 {
    x.iter().flatten().zip(y.iter().flatten()).map(|(p, q)| relative_deviation(*p, *q)).fold(0.0, f64::max)
}

#[test]
fn plain_segment() {
    let a = points(&[0, 1], &[c(1.0, 0.0), c(1.0, 0.0)]);
    let ch = chambers::bounded_chambers(&a);
    let v = integrate_chamber(&a, &ch[0], 0, &[vec![1]], None, &spec()).unwrap();
    assert!((v[0].value - c(0.5, 0.0)).norm() < 1e-13);
}

#[test]
fn exponential_tail() {
    let a = points(&[1], &[c(1.0, 0.0)]);
    let f0 = LinearForm::from_ints(&[1], 0);
    let ch = chambers::chambers_with_f0(&a, &f0).unwrap();
    let grow = ch.iter().position(|c| !c.rays.is_empty() && c.signs[0] > 0).unwrap();
    let exp = Exponential::unit(&f0);
    for policy in [GrowingPolicy::Compactify, GrowingPolicy::Truncate] {
        let s = QuadratureSpec { growing: policy, ..spec() };
        let v = integrate_chamber(&a, &ch[grow], grow, &[vec![0]], Some(&exp), &s).unwrap();
        assert!((v[0].value - c((-1.0f64).exp(), 0.0)).norm() < 1e-10, "{policy:?}: {:?}", v[0]);
    }
}

#[test]
fn three_point_entries_match_oracle() {
    let a = points(&[0, 1, 3], &[c(0.6, 0.0), c(0.8, 0.0), c(1.1, 0.0)]);
    let pm = period_matrix(&a, None, &Options::default(), &spec(), &Sequential).unwrap();
    assert_eq!(pm.entries.len(), 2);
    assert!(max_dev(&pm.entries, &oracle_matrix(&a, None, &pm)) < 1e-8);
}

#[test]
fn two_point_exponential_entries_match_oracle() {
    let a = points(&[0, 1], &[c(0.6, 0.0), c(0.8, 0.3)]);
    let f0 = LinearForm::from_ints(&[2], 0);
    let pm = period_matrix(&a, Some(&f0), &Options::default(), &spec(), &Sequential).unwrap();
    assert_eq!(pm.entries.len(), 2);
    assert!(max_dev(&pm.entries, &oracle_matrix(&a, Some(&f0), &pm)) < 1e-8);
}

#[test]
fn compactify_and_truncate_agree() {
    let a = points(&[0, 1], &[c(0.6, 0.0), c(0.8, 0.0)]);
    let f0 = LinearForm::from_ints(&[1], 0);
    let s1 = spec();
    let s2 = QuadratureSpec { growing: GrowingPolicy::Truncate, tol: 1e-10, ..spec() };
    let p1 = period_matrix(&a, Some(&f0), &Options::default(), &s1, &Sequential).unwrap();
    let p2 = period_matrix(&a, Some(&f0), &Options::default(), &s2, &Sequential).unwrap();
    assert!(max_dev(&p1.entries, &p2.entries) < 1e-8);
}

fn example_one(w: [Complex64; 3]) -> VerificationReport {
    let a = points(&[0, 1, 3], &w);
    verify(&a, None, &Options::default(), BetaReading::Relative, 1e-6, &spec(), &Sequential).unwrap()
}

#[test]
fn example_one_identity() {
    let r = example_one([c(0.6, 0.0), c(0.8, 0.0), c(1.1, 0.0)]);
    assert!(r.pass, "deviation {}", r.deviation);
    // Γ(α₁+1)Γ(α₂+1)Γ(α₃+1)/Γ(α₁+α₂+α₃+1) · Π_{i≠j} f_i^{α_i}(z_j)
    let g = |x: f64| hyperdet_core::special::gamma(c(x, 0.0)).unwrap();
    let beta = g(1.6) * g(1.8) * g(2.1) / g(3.5);
    assert!(relative_deviation(r.beta, beta) < 1e-12);
}

#[test]
fn example_two_identity() {
    let a = points(&[0, 1], &[c(0.6, 0.0), c(0.8, 0.0)]);
    let f0 = LinearForm::from_ints(&[1], 0);
    let r = verify(&a, Some(&f0), &Options::default(), BetaReading::Relative, 1e-6, &spec(), &Sequential).unwrap();
    assert!(r.pass, "deviation {}", r.deviation);
}

#[test]
fn flipped_orientation_breaks_identity() {
    let a = points(&[0, 1, 3], &[c(0.6, 0.0), c(0.8, 0.0), c(1.1, 0.0)]);
    let opts = Options { flipped: vec![0], ..Options::default() };
    let r = verify(&a, None, &opts, BetaReading::Relative, 1e-6, &spec(), &Sequential).unwrap();
    assert!(r.deviation >= 0.5);
    assert!(!r.pass);
}

#[test]
fn schwarz_reflection() {
    let w = [c(0.6, 0.2), c(0.8, -0.4)];
    let a = points(&[0, 1], &w);
    let ab = points(&[0, 1], &[w[0].conj(), w[1].conj()]);
    let ch = chambers::bounded_chambers(&a);
    let v = integrate_chamber(&a, &ch[0], 0, &[vec![1]], None, &spec()).unwrap();
    let vb = integrate_chamber(&ab, &ch[0], 0, &[vec![1]], None, &spec()).unwrap();
    assert!((v[0].value - vb[0].value.conj()).norm() < 1e-12);
}

#[test]
fn determinant_of_known_matrix() {
    let m = vec![vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(0.0, 1.0), c(3.0, 0.0)]];
    let e = vec![vec![0.0; 2]; 2];
    let d = determinant(&m, &e);
    assert!((d.value - c(7.0, -1.0)).norm() < 1e-14);
    assert!(d.condition >= 1.0);
}

#[test]
fn convergence_decreases() {
    let a = points(&[0, 1], &[c(0.6, 0.0), c(0.8, 0.0)]);
    let f0 = LinearForm::from_ints(&[1], 0);
    let devs = convergence_check(&a, &f0, &[10, 40, 160], &spec(), &Sequential).unwrap();
    assert!(devs.windows(2).all(|w| w[1].1 < w[0].1), "{devs:?}");
}

#[test]
fn bad_spec_is_rejected() {
    let a = points(&[0, 1], &[c(0.6, 0.0), c(0.8, 0.0)]);
    let s = QuadratureSpec { tol: 2.0, ..spec() };
    assert!(matches!(period_matrix(&a, None, &Options::default(), &s, &Sequential), Err(Error::InvalidInput(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn permutation_invariance(k in 0usize..2) {
        let a = points(&[0, 1, 3], &[c(0.6, 0.0), c(0.8, 0.1), c(1.1, 0.0)]);
        let pm = period_matrix(&a, None, &Options::default(), &spec(), &Sequential).unwrap();
        let perm = if k == 0 { [0usize, 1] } else { [1, 0] };
        let shuffled: Vec<Vec<Complex64>> = perm.iter().map(|&r| perm.iter().map(|&s| pm.entries[r][s]).collect()).collect();
        let d1 = determinant(&pm.entries, &pm.errors).value;
        let d2 = determinant(&shuffled, &pm.errors).value;
        prop_assert!(relative_deviation(d1, d2) < 1e-13);
    }

    #[test]
    fn branch_covariance(j in 0usize..2, i in 0usize..3, k in -1i32..2) {
        let a = points(&[0, 1, 3], &[c(0.6, 0.0), c(0.8, 0.1), c(1.1, 0.0)]);
        let base = verify(&a, None, &Options::default(), BetaReading::Relative, 1e-6, &spec(), &Sequential).unwrap();
        let opts = Options { branch_shifts: vec![(j, i, k)], ..Options::default() };
        let shifted = verify(&a, None, &opts, BetaReading::Relative, 1e-6, &spec(), &Sequential).unwrap();
        prop_assert!((base.deviation - shifted.deviation).abs() < 1e-8);
        prop_assert!(shifted.pass);
    }

    #[test]
    fn random_three_points(w1 in 0.3f64..1.5, w2 in 0.3f64..1.5, w3 in 0.3f64..1.5, im in -0.5f64..0.5) {
        let r = example_one([c(w1, im), c(w2, 0.0), c(w3, -im)]);
        prop_assert!(r.pass, "deviation {}", r.deviation);
        let _ = PI;
    }
}

fn four_lines(w: &[Complex64]) -> Arrangement {
    let forms = vec![
        LinearForm::from_ints(&[1, 0], 0),
        LinearForm::from_ints(&[0, 1], 0),
        LinearForm::from_ints(&[1, 1], -3),
        LinearForm::from_ints(&[1, -2], -1),
    ];
    Arrangement::new(2, forms, w.to_vec()).unwrap()
}

#[test]
fn planar_identity() {
    let a = four_lines(&[c(0.7, 0.1), c(0.5, 0.0), c(1.2, -0.2), c(0.9, 0.0)]);
    let r = verify(&a, None, &Options::default(), BetaReading::Relative, 1e-5, &spec(), &Sequential).unwrap();
    assert_eq!(r.matrix.entries.len(), 3);
    assert!(r.pass, "deviation {}", r.deviation);
}

#[test]
fn planar_exponential_identity() {
    let a = four_lines(&[c(0.7, 0.1), c(0.5, 0.0), c(1.2, -0.2), c(0.9, 0.0)]);
    let f0 = LinearForm::from_ints(&[2, 1], 0);
    let r = verify(&a, Some(&f0), &Options::default(), BetaReading::Relative, 1e-5, &spec(), &Sequential).unwrap();
    assert!(r.pass, "deviation {} lhs {} rhs {}", r.deviation, r.lhs, r.rhs);
    let lit = verify(&a, Some(&f0), &Options::default(), BetaReading::Literal, 1e-5, &spec(), &Sequential).unwrap();
    assert!(!lit.pass);
}

//! Logarithmic forms `ω_α(F)`, the flag forms `Ξ(B)`, the sets `Φ(A)`,
//! `Φ(A;f₀)` and pointwise evaluation of `e^{−f₀} U_α φ`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::chambers::Chamber;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{self, Arrangement, Edge, LinearForm};
use crate::nbc::{self, Basis};

/// `Σ_{i∈I(F)} α_i df_i/f_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogOneForm {
    pub terms: Vec<(usize, Complex64)>,
}

/// `coeff · df_{j₁}/f_{j₁} ∧ … ∧ df_{j_n}/f_{j_n}` with `j₁ < … < j_n`;
/// `det` is the determinant of the homogeneous parts, so the term equals
/// `coeff · det / Π f_j` times `d^n x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub indices: Vec<usize>,
    pub det: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NForm {
    pub terms: Vec<Term>,
}

pub fn edge_one_form(a: &Arrangement, f: &Edge) -> Result<LogOneForm> {
    geometry::edge(a, &f.indices)?;
    Ok(LogOneForm { terms: f.indices.iter().map(|&i| (i, a.weights()[i])).collect() })
}

fn permutation_sign(v: &[usize]) -> i8 {
    let mut s = 1;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                s = -s;
            }
        }
    }
    s
}

/// Expands `ω₁ ∧ … ∧ ω_n` into increasing simple-fraction terms, dropping
/// repeated and linearly dependent index tuples.
pub fn wedge(a: &Arrangement, factors: &[LogOneForm]) -> NForm {
    let mut raw: Vec<(Vec<usize>, Complex64)> = vec![(Vec::new(), Complex64::new(1.0, 0.0))];
    for f in factors {
        let mut next = Vec::new();
        for (tuple, c) in &raw {
            for &(i, w) in &f.terms {
                if !tuple.contains(&i) {
                    let mut t = tuple.clone();
                    t.push(i);
                    next.push((t, c * w));
                }
            }
        }
        raw = next;
    }
    let mut terms: Vec<Term> = Vec::new();
    for (tuple, c) in raw {
        let sign = permutation_sign(&tuple);
        let mut sorted = tuple;
        sorted.sort_unstable();
        let rows: Vec<Vec<Rational>> = sorted.iter().map(|&i| a.form(i).coeffs.clone()).collect();
        let det = exact::det(&rows);
        if det.is_zero() {
            continue;
        }
        let c = c * f64::from(sign);
        match terms.iter_mut().find(|t| t.indices == sorted) {
            Some(t) => t.coeff += c,
            None => terms.push(Term { coeff: c, indices: sorted, det }),
        }
    }
    terms.sort_by(|x, y| x.indices.cmp(&y.indices));
    NForm { terms }
}

/// `Ξ(B,A) = ω_α(F₀) ∧ … ∧ ω_α(F_{n−1})`.
pub fn basis_n_form(a: &Arrangement, b: &Basis) -> NForm {
    let factors: Vec<LogOneForm> = nbc::flag(a, b)
        .iter()
        .map(|f| LogOneForm { terms: f.indices.iter().map(|&i| (i, a.weights()[i])).collect() })
        .collect();
    wedge(a, &factors)
}

/// `Φ(A)` or `Φ(A;f₀)` in βnbc order, paired with their bases.
pub fn phi_set(a: &Arrangement, f0: Option<&LinearForm>) -> Result<Vec<(Basis, NForm)>> {
    let bases = match f0 {
        None => nbc::bnbc_bases(a),
        Some(f) => nbc::bnbc_with_f0(a, f)?,
    };
    Ok(bases.into_iter().map(|b| {
        let form = basis_n_form(a, &b);
        (b, form)
    }).collect())
}

impl NForm {
    /// Coefficient against `d^n x` at `x` (no `f_j` may vanish on a term).
    pub fn coefficient(&self, values: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                let d = exact::to_f64(&t.det);
                t.coeff * t.indices.iter().fold(d, |acc, &j| acc / values[j])
            })
            .sum()
    }

    /// Same with exact rational inputs for symbolic checks.
    pub fn coefficient_exact(&self, values: &[Rational], weights: impl Fn(&Term) -> Rational) -> Rational {
        self.terms
            .iter()
            .map(|t| t.indices.iter().fold(weights(t) * &t.det, |acc, &j| acc / &values[j]))
            .fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Arguments `θ_{i,Δ}` of `f_i^{α_i}` on a chamber: `0` or `π` by sign plus
/// `2π·shift_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchAssignment {
    pub theta: Vec<f64>,
}

pub fn branch(c: &Chamber) -> BranchAssignment {
    BranchAssignment { theta: c.signs.iter().map(|&s| if s < 0 { PI } else { 0.0 }).collect() }
}

pub fn branch_shifted(c: &Chamber, shifts: &[i32]) -> BranchAssignment {
    let mut b = branch(c);
    for (t, &k) in b.theta.iter_mut().zip(shifts) {
        *t += 2.0 * PI * f64::from(k);
    }
    b
}

impl BranchAssignment {
    /// `e^{i Σ α_i θ_i}`.
    pub fn phase(&self, weights: &[Complex64]) -> Complex64 {
        let s: Complex64 = weights.iter().zip(&self.theta).map(|(w, t)| w * t).sum();
        (Complex64::i() * s).exp()
    }

    /// Branch value of `f_i^{α_i}` at a point where `|f_i| = modulus`.
    pub fn power(&self, i: usize, alpha: Complex64, modulus: f64) -> Complex64 {
        (alpha * Complex64::new(modulus.ln(), self.theta[i])).exp()
    }
}

/// `U_α(x)` on the branch.
pub fn master_function(a: &Arrangement, b: &BranchAssignment, x: &[f64]) -> Result<Complex64> {
    let mut log = Complex64::zero();
    for (i, (f, w)) in a.forms().iter().zip(a.weights()).enumerate() {
        let v = f.eval_f64(x);
        if v == 0.0 {
            return Err(Error::PointOnHyperplane { index: i });
        }
        log += w * Complex64::new(v.abs().ln(), b.theta[i]);
    }
    Ok(log.exp())
}

/// `[e^{−f₀(x)}] U_α(x) φ(x)` against `d^n x`.
pub fn evaluate_integrand(
    a: &Arrangement,
    b: &BranchAssignment,
    phi: &NForm,
    x: &[f64],
    f0: Option<&LinearForm>,
) -> Result<Complex64> {
    let values: Vec<f64> = a.forms().iter().map(|f| f.eval_f64(x)).collect();
    let u = master_function(a, b, x)?;
    let e = f0.map_or(1.0, |f| (-f.eval_f64(x)).exp());
    Ok(u * e * phi.coefficient(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chambers;
    use crate::exact::{q, q_frac};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn points(zs: &[i64], w: &[f64]) -> Arrangement {
        Arrangement::new(
            1,
            zs.iter().map(|&z| LinearForm::from_ints(&[1], -z)).collect(),
            w.iter().map(|&x| c(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn one_forms() {
        let a = Arrangement::new(
            2,
            vec![LinearForm::from_ints(&[1, 0], 0), LinearForm::from_ints(&[0, 1], 0), LinearForm::from_ints(&[1, 1], 0)],
            vec![c(0.1), c(0.2), c(0.3)],
        )
        .unwrap();
        let centre = geometry::edge(&a, &[0, 1, 2]).unwrap();
        let w = edge_one_form(&a, &centre).unwrap();
        assert_eq!(w.terms, vec![(0, c(0.1)), (1, c(0.2)), (2, c(0.3))]);
        let line = geometry::edge(&a, &[1]).unwrap();
        assert_eq!(edge_one_form(&a, &line).unwrap().terms, vec![(1, c(0.2))]);
    }

    #[test]
    fn generic_forms_are_monomials() {
        let a = points(&[0, 1, 3], &[0.6, 0.8, 1.1]);
        let phis = phi_set(&a, None).unwrap();
        assert_eq!(phis.len(), 2);
        assert_eq!(phis[0].1.terms, vec![Term { coeff: c(0.8), indices: vec![1], det: q(1) }]);
        assert_eq!(phis[1].1.terms[0].indices, vec![2]);
        let two = points(&[0, 1], &[0.6, 0.8]);
        let f0 = LinearForm::from_ints(&[1], 0);
        let with = phi_set(&two, Some(&f0)).unwrap();
        assert_eq!(with.len(), 2);
        assert_eq!(with[0].1.terms[0].indices, vec![0]);
        assert_eq!(with[1].1.terms[0].indices, vec![1]);
    }

    #[test]
    fn flag_through_a_triple_point() {
        // x, y, x+y−0 concurrent at the origin, plus x − 2y + 3.
        let forms = vec![
            LinearForm::from_ints(&[1, 0], 0),
            LinearForm::from_ints(&[0, 1], 0),
            LinearForm::from_ints(&[1, 1], 0),
            LinearForm::from_ints(&[1, -2], 3),
        ];
        let a = Arrangement::new(2, forms, vec![c(0.3), c(0.5), c(0.7), c(0.9)]).unwrap();
        let b = Basis { indices: vec![0, 1], vertex: vec![q(0), q(0)] };
        let form = basis_n_form(&a, &b);
        // ω(origin) ∧ ω(H₂) = (α₁dlog f₁ + α₂dlog f₂ + α₃dlog f₃) ∧ α₂dlog f₂
        assert_eq!(form.terms.len(), 2);
        assert_eq!(form.terms[0].indices, vec![0, 1]);
        assert_eq!(form.terms[1].indices, vec![1, 2]);
        // Independent check at rational points: expand the wedge as a 2×2 determinant.
        let al = [q_frac(3, 10), q_frac(5, 10), q_frac(7, 10)];
        for (x, y) in [(1, 2), (-3, 5), (7, -1), (2, 9)] {
            let p = [q(x), q(y)];
            let v: Vec<Rational> = a.forms().iter().map(|f| f.eval(&p)).collect();
            // ω₀ = Σ α_i ∇f_i / f_i over the triple point, ω₁ = α₂ ∇f₂ / f₂.
            let mut g0 = [q(0), q(0)];
            for i in 0..3 {
                for k in 0..2 {
                    g0[k] += &al[i] * &a.form(i).coeffs[k] / &v[i];
                }
            }
            let g1 = [q(0), &al[1] / &v[1]];
            let expected = &g0[0] * &g1[1] - &g0[1] * &g1[0];
            let got = form.coefficient_exact(&v, |t| {
                let s = if t.coeff.re < 0.0 { q(-1) } else { q(1) };
                t.indices.iter().fold(s, |acc, &i| acc * &al[i])
            });
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn integrand_on_unit_segment() {
        let a = points(&[0, 1], &[1.0, 1.0]);
        let ch = chambers::bounded_chambers(&a);
        let b = branch(&ch[0]);
        let phi = &phi_set(&a, None).unwrap()[0].1;
        let v = evaluate_integrand(&a, &b, phi, &[0.5], None).unwrap();
        assert_relative_eq!(v.re, 0.5, epsilon = 1e-15);
        assert!(v.im.abs() < 1e-15);
        assert!(matches!(evaluate_integrand(&a, &b, phi, &[1.0], None), Err(Error::PointOnHyperplane { index: 1 })));
        let shifted = branch_shifted(&ch[0], &[0, 1]);
        let w = Complex64::new(0.4, 0.3);
        let a2 = a.with_weights(vec![c(0.7), w]).unwrap();
        let phi2 = &phi_set(&a2, None).unwrap()[0].1;
        let r = evaluate_integrand(&a2, &shifted, phi2, &[0.25], None).unwrap()
            / evaluate_integrand(&a2, &b, phi2, &[0.25], None).unwrap();
        let e = (Complex64::i() * 2.0 * PI * w).exp();
        assert_relative_eq!(r.re, e.re, epsilon = 1e-12);
        assert_relative_eq!(r.im, e.im, epsilon = 1e-12);
    }

    #[test]
    fn wedge_antisymmetry() {
        let forms = vec![LinearForm::from_ints(&[1, 0], 0), LinearForm::from_ints(&[0, 1], 0), LinearForm::from_ints(&[1, 1], -1)];
        let a = Arrangement::new(2, forms, vec![c(0.3), c(0.5), c(0.7)]).unwrap();
        let w0 = LogOneForm { terms: vec![(0, c(0.3)), (2, c(0.7))] };
        let w1 = LogOneForm { terms: vec![(1, c(0.5))] };
        let x = wedge(&a, &[w0.clone(), w1.clone()]);
        let y = wedge(&a, &[w1, w0]);
        for (s, t) in x.terms.iter().zip(&y.terms) {
            assert_eq!(s.coeff, -t.coeff);
        }
    }

    proptest! {
        #[test]
        fn modulus_of_master_function(x in 0.05f64..0.95, re in 0.1f64..1.5, im in -1.0f64..1.0) {
            let a = points(&[0, 1], &[0.5, 0.5]).with_weights(vec![c(0.8), Complex64::new(re, im)]).unwrap();
            let ch = chambers::bounded_chambers(&a);
            let u = master_function(&a, &branch(&ch[0]), &[x]).unwrap();
            let expected = x.powf(0.8) * (1.0 - x).powf(re) * (-im * PI).exp();
            prop_assert!((u.norm() - expected).abs() <= 1e-12 * expected);
        }
    }
}

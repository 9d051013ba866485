//! Integration of `Π L_i^{β_i} · e^{smooth}` over a polytope on which every
//! `L_i ≥ 0`. The polytope is split into flag simplices (vertex, edge, …,
//! polytope centroids); on each simplex a Duffy collapse turns the zero sets of
//! the `L_i` into coordinate faces `u_k = 0` of the unit cube, where the
//! integrand is `Π u_k^{E_k}` times a smooth function.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use super::rules;
use super::{Estimate, QuadratureSpec, Rule};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::LinearForm;
use crate::polyhedron::{self, Polyhedron};

/// A simplex `P₀ … P_n` whose vertices are centroids of a complete flag of
/// faces, together with the values of each form at the `P_k`.
#[derive(Clone, Debug)]
pub struct FlagSimplex {
    pub points: Vec<Vec<f64>>,
    /// `|det(P_k − P₀)|`, the Jacobian of barycentric coordinates.
    pub jacobian: f64,
    /// Number of leading `P_k` on which form `i` vanishes.
    pub zeros: Vec<usize>,
    pub values: Vec<Vec<f64>>,
}

pub fn flag_simplices(p: &Polyhedron, forms: &[LinearForm]) -> Vec<FlagSimplex> {
    polyhedron::complete_flags(p)
        .into_iter()
        .map(|flag| {
            let pts: Vec<Vec<Rational>> = flag.iter().map(|f| f.centroid()).collect();
            let rows: Vec<Vec<Rational>> = pts[1..].iter().map(|x| exact::sub(x, &pts[0])).collect();
            let jacobian = exact::to_f64(&exact::det(&rows)).abs();
            let mut zeros = Vec::with_capacity(forms.len());
            let mut values = Vec::with_capacity(forms.len());
            for f in forms {
                let v: Vec<Rational> = pts.iter().map(|x| f.eval(x)).collect();
                let z = v.iter().take_while(|x| x.is_zero()).count();
                debug_assert!(v[z..].iter().all(|x| exact::sign(x) > 0));
                zeros.push(z);
                values.push(v.iter().map(exact::to_f64).collect());
            }
            FlagSimplex { points: pts.iter().map(|x| x.iter().map(exact::to_f64).collect()).collect(), jacobian, zeros, values }
        })
        .collect()
}

/// `Π L_i^{β_i}` for each term, times `exp(smooth(x, ln L))`.
pub struct PolytopeIntegrand<'a> {
    pub forms: Vec<LinearForm>,
    /// `exponents[term][i]`.
    pub exponents: Vec<Vec<Complex64>>,
    pub smooth: &'a dyn Fn(&[f64], &[f64]) -> Complex64,
}

/// Shared per-node quantities of the Duffy map on one simplex.
struct Node {
    x: Vec<f64>,
    ln_l: Vec<f64>,
    ln_b: Vec<f64>,
}

fn duffy_node(s: &FlagSimplex, ln_u: &[f64], ln_1mu: &[f64]) -> Node {
    let n = ln_u.len();
    let mut ln_s = vec![0.0; n + 1];
    for k in 1..=n {
        ln_s[k] = ln_s[k - 1] + ln_u[k - 1];
    }
    // ln λ_k relative to nothing: λ_k = S_k (1 − u_{k+1}), λ_n = S_n
    let tail = |k: usize| if k < n { ln_1mu[k] } else { 0.0 };
    let dim = s.points[0].len();
    let mut x = vec![0.0; dim];
    for k in 0..=n {
        let lam = (ln_s[k] + tail(k)).exp();
        for (xi, pi) in x.iter_mut().zip(&s.points[k]) {
            *xi += lam * pi;
        }
    }
    let mut ln_l = Vec::with_capacity(s.zeros.len());
    let mut ln_b = Vec::with_capacity(s.zeros.len());
    for (z, vals) in s.zeros.iter().zip(&s.values) {
        let b: f64 = (*z..=n).map(|k| (ln_s[k] - ln_s[*z] + tail(k)).exp() * vals[k]).sum();
        let lb = b.ln();
        ln_b.push(lb);
        ln_l.push(ln_s[*z] + lb);
    }
    Node { x, ln_l, ln_b }
}

/// `E_k = (n − k) + Σ_{i : z_i ≥ k} β_i` for `k = 1..n`.
fn cube_exponents(s: &FlagSimplex, betas: &[Complex64], n: usize) -> Vec<Complex64> {
    (1..=n)
        .map(|k| {
            let mut e = Complex64::new((n - k) as f64, 0.0);
            for (z, b) in s.zeros.iter().zip(betas) {
                if *z >= k {
                    e += b;
                }
            }
            e
        })
        .collect()
}

fn check_integrable(exps: &[Vec<Complex64>]) -> Result<()> {
    for e in exps.iter().flatten() {
        if e.re <= -1.0 {
            return Err(Error::NonIntegrable { index: usize::MAX });
        }
    }
    Ok(())
}

fn odometer(idx: &mut [usize], len: usize) -> bool {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if *d < len {
            return true;
        }
        *d = 0;
    }
    false
}

/// Nested tanh-sinh over all flag simplices, refined until successive levels
/// agree to the tolerance for every term.
fn tanh_sinh(
    simplices: &[FlagSimplex],
    integrand: &PolytopeIntegrand,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate>> {
    let terms = integrand.exponents.len();
    let exps: Vec<Vec<Vec<Complex64>>> =
        simplices.iter().map(|s| integrand.exponents.iter().map(|b| cube_exponents(s, b, n)).collect()).collect();
    for e in &exps {
        check_integrable(e)?;
    }
    let finest = spec.max_depth.max(2);
    let mut raw = vec![Complex64::zero(); terms];
    let mut prev: Option<Vec<Complex64>> = None;
    let mut level = 1u32;
    loop {
        let nodes = rules::tanh_sinh(level, level);
        let h = 0.5f64.powi(level as i32);
        let mut idx = vec![0usize; n];
        let mut ln_u = vec![0.0; n];
        let mut ln_1mu = vec![0.0; n];
        loop {
            let fresh = level == 1 || idx.iter().any(|&k| nodes[k].index % 2 != 0);
            if fresh {
                let mut ln_w = 0.0;
                for (m, &k) in idx.iter().enumerate() {
                    ln_u[m] = nodes[k].ln_u;
                    ln_1mu[m] = nodes[k].ln_1mu;
                    ln_w += nodes[k].ln_jac;
                }
                for (s, e) in simplices.iter().zip(&exps) {
                    let node = duffy_node(s, &ln_u, &ln_1mu);
                    let smooth = (integrand.smooth)(&node.x, &node.ln_l) + (ln_w + s.jacobian.ln());
                    if !smooth.re.is_finite() {
                        continue;
                    }
                    for t in 0..terms {
                        let mut lv = smooth;
                        for (m, em) in e[t].iter().enumerate() {
                            lv += em * ln_u[m];
                        }
                        for (b, lb) in integrand.exponents[t].iter().zip(&node.ln_b) {
                            lv += b * lb;
                        }
                        raw[t] += lv.exp();
                    }
                }
            }
            if !odometer(&mut idx, nodes.len()) {
                break;
            }
        }
        let hn = h.powi(n as i32);
        let cur: Vec<Complex64> = raw.iter().map(|r| r * hn).collect();
        if let Some(p) = &prev {
            let errs: Vec<f64> = cur.iter().zip(p).map(|(c, p)| (c - p).norm()).collect();
            let ok = cur.iter().zip(&errs).all(|(c, e)| *e <= spec.tol * c.norm().max(spec.abs_floor));
            if ok {
                return Ok(cur.into_iter().zip(errs).map(|(value, error)| Estimate { value, error }).collect());
            }
            if level >= finest {
                let (k, e) = errs.iter().enumerate().fold((0, 0.0), |acc, (k, &e)| if e > acc.1 { (k, e) } else { acc });
                return Err(Error::MaxDepthExceeded { estimate: cur[k].norm(), error: e, context: "tanh-sinh".into() });
            }
        }
        prev = Some(cur);
        level += 1;
    }
}

/// Tensor Gauss–Jacobi per term with weights `u_k^{E_k}` (real exponents only),
/// doubling the node count until two rules agree.
fn gauss_jacobi(
    simplices: &[FlagSimplex],
    integrand: &PolytopeIntegrand,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate>> {
    let terms = integrand.exponents.len();
    let rule_sum = |nodes: usize| -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::zero(); terms];
        for s in simplices {
            for t in 0..terms {
                let e = cube_exponents(s, &integrand.exponents[t], n);
                check_integrable(core::slice::from_ref(&e))?;
                let rules1: Vec<(Vec<f64>, Vec<f64>)> = e.iter().map(|x| rules::gauss_jacobi(nodes, x.re)).collect();
                let mut idx = vec![0usize; n];
                let mut ln_u = vec![0.0; n];
                let mut ln_1mu = vec![0.0; n];
                loop {
                    let mut w = s.jacobian;
                    for (m, &k) in idx.iter().enumerate() {
                        let u = rules1[m].0[k];
                        ln_u[m] = u.ln();
                        ln_1mu[m] = (1.0 - u).ln();
                        w *= rules1[m].1[k];
                    }
                    let node = duffy_node(s, &ln_u, &ln_1mu);
                    let mut lv = (integrand.smooth)(&node.x, &node.ln_l);
                    if lv.re.is_finite() {
                        for (b, lb) in integrand.exponents[t].iter().zip(&node.ln_b) {
                            lv += b * lb;
                        }
                        out[t] += lv.exp() * w;
                    }
                    if !odometer(&mut idx, nodes) {
                        break;
                    }
                }
            }
        }
        Ok(out)
    };
    let mut nodes = spec.nodes.max(2);
    let mut prev = rule_sum(nodes)?;
    for _ in 0..spec.max_depth.max(1) {
        nodes *= 2;
        let cur = rule_sum(nodes)?;
        let errs: Vec<f64> = cur.iter().zip(&prev).map(|(c, p)| (c - p).norm()).collect();
        if cur.iter().zip(&errs).all(|(c, e)| *e <= spec.tol * c.norm().max(spec.abs_floor)) {
            return Ok(cur.into_iter().zip(errs).map(|(value, error)| Estimate { value, error }).collect());
        }
        prev = cur;
    }
    let (k, e) = prev.iter().enumerate().fold((0, 0.0), |acc, (k, v)| if v.norm() > acc.1 { (k, v.norm()) } else { acc });
    Err(Error::MaxDepthExceeded { estimate: e, error: f64::NAN, context: alloc::format!("Gauss–Jacobi term {k}") })
}

/// Integrates every term of the integrand over the polytope.
pub fn integrate_polytope(p: &Polyhedron, integrand: &PolytopeIntegrand, spec: &QuadratureSpec) -> Result<Vec<Estimate>> {
    let n = p.dim;
    let simplices = flag_simplices(p, &integrand.forms);
    let real = integrand.exponents.iter().flatten().all(|b| b.im == 0.0);
    match spec.rule {
        Rule::GaussJacobi if !real => Err(Error::InvalidInput("Gauss–Jacobi needs real exponents".into())),
        Rule::GaussJacobi => gauss_jacobi(&simplices, integrand, n, spec),
        Rule::Auto if real => gauss_jacobi(&simplices, integrand, n, spec),
        _ => tanh_sinh(&simplices, integrand, n, spec),
    }
}

//! Right-hand sides: edge weights, the beta functions `B(A;α)`, `B(A;α;H₀)`,
//! external supports, support faces and the critical-value products.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{Signed, Zero};

use crate::chambers::{self, Chamber, ChamberKind};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::forms::BranchAssignment;
use crate::geometry::{self, Arrangement, LinearForm, ProjectiveArrangement, ProjectiveEdge};
use crate::special;

/// `α(F)`: sum of the weights of the hyperplanes of `Ā` through `F`.
pub fn edge_weight(pa: &ProjectiveArrangement, e: &ProjectiveEdge) -> Complex64 {
    let inf = pa.infinity_index();
    e.indices
        .iter()
        .map(|&i| if i == inf { pa.infinity_weight() } else { pa.base.weights()[i] })
        .sum()
}

/// One factor `Γ(argument)^{±vol}` of a beta function.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaFactor {
    /// Hyperplanes of `Ā` through the edge (the infinity index is `p`).
    pub indices: Vec<usize>,
    pub at_infinity: bool,
    pub argument: Complex64,
    /// `vol(F)` for numerator factors, `−vol(F)` for denominator factors.
    pub exponent: i64,
}

fn context(f: &GammaFactor) -> String {
    format!("edge {:?} (exponent {})", f.indices, f.exponent)
}

/// `Π Γ(argument)^exponent`, computed in logarithms.
pub fn evaluate_factors(factors: &[GammaFactor]) -> Result<Complex64> {
    Ok(log_factors(factors)?.exp())
}

pub fn log_factors(factors: &[GammaFactor]) -> Result<Complex64> {
    let mut log = Complex64::zero();
    for f in factors.iter().filter(|f| f.exponent != 0) {
        if special::is_pole(f.argument) {
            return Err(Error::GammaPole { argument: (f.argument.re, f.argument.im), context: context(f) });
        }
        log += special::ln_gamma(f.argument) * f.exponent as f64;
    }
    Ok(log)
}

/// Factors of `B(A;α)`: `Γ(α(F)+1)^{vol F}` over `L₊` over `Γ(−α(F)+1)^{vol F}` over `L₋`.
pub fn beta_factors(a: &Arrangement) -> Vec<GammaFactor> {
    let pa = geometry::projectivize(a);
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for e in &pa.affine_edges {
        let vol = chambers::projective_invariants(&pa, e).vol as i64;
        out.push(GammaFactor { indices: e.indices.clone(), at_infinity: false, argument: edge_weight(&pa, e) + one, exponent: vol });
    }
    for e in &pa.edges_at_infinity {
        let vol = chambers::projective_invariants(&pa, e).vol as i64;
        out.push(GammaFactor { indices: e.indices.clone(), at_infinity: true, argument: one - edge_weight(&pa, e), exponent: -vol });
    }
    out
}

pub fn beta_function(a: &Arrangement) -> Result<Complex64> {
    evaluate_factors(&beta_factors(a))
}

/// Factors of `B(A;α;H₀)` with volumes measured in `A_t = A ∪ {f₀ = t}` for
/// large `t`: `Γ(α(F)+1)^{vol F}` over edges of `A`, over `Γ(−α(F)+1)^{vol F}`
/// over edges of `Ā_t` at infinity inside `H̄_t`, where `α(F)` sums the weights
/// of `A` and `α_∞ = −Σα`. Indices refer to `Ā`, with `p` for `H_∞`.
pub fn beta_factors_relative(a: &Arrangement, f0: &LinearForm) -> Result<Vec<GammaFactor>> {
    let t = chambers::default_threshold(a, f0);
    let trunc = chambers::truncate(a, f0, &t, Complex64::new(1.0, 0.0))?;
    let pa = geometry::projectivize(&trunc.arrangement);
    let inf_t = pa.infinity_index();
    let p = a.len();
    let one = Complex64::new(1.0, 0.0);
    let weight = |indices: &[usize]| -> (Vec<usize>, Complex64) {
        let mut w = Complex64::zero();
        let mut mapped = Vec::new();
        for &i in indices {
            if i == inf_t {
                w += a.infinity_weight();
                mapped.push(p);
            } else if i > 0 {
                w += a.weights()[i - 1];
                mapped.push(i - 1);
            }
        }
        (mapped, w)
    };
    let mut out = Vec::new();
    for e in pa.affine_edges.iter().filter(|e| !e.indices.contains(&0)) {
        let vol = chambers::projective_invariants(&pa, e).vol as i64;
        let (indices, w) = weight(&e.indices);
        out.push(GammaFactor { indices, at_infinity: false, argument: w + one, exponent: vol });
    }
    for e in pa.edges_at_infinity.iter().filter(|e| e.indices.contains(&0)) {
        let vol = chambers::projective_invariants(&pa, e).vol as i64;
        let (indices, w) = weight(&e.indices);
        out.push(GammaFactor { indices, at_infinity: true, argument: one - w, exponent: -vol });
    }
    Ok(out)
}

pub fn beta_function_relative(a: &Arrangement, f0: &LinearForm) -> Result<Complex64> {
    evaluate_factors(&beta_factors_relative(a, f0)?)
}

/// Literal reading: volumes of `Ā` itself, denominators over edges at infinity
/// contained in `H̄₀`.
pub fn beta_factors_literal(a: &Arrangement, f0: &LinearForm) -> Result<Vec<GammaFactor>> {
    if f0.is_constant() {
        return Err(Error::ConstantF0);
    }
    let pa = geometry::projectivize(a);
    Ok(beta_factors(a)
        .into_iter()
        .filter(|f| !f.at_infinity || {
            let e = chambers::projective_edge(&pa, &f.indices).expect("edge of Ā");
            chambers::inside_h0(f0, &e)
        })
        .collect())
}

pub fn beta_function_literal(a: &Arrangement, f0: &LinearForm) -> Result<Complex64> {
    evaluate_factors(&beta_factors_literal(a, f0)?)
}

/// The face of `closure(Δ)` spanned by the vertices attaining an extremum,
/// with the extremal value.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportFace {
    pub vertices: Vec<Vec<Rational>>,
    pub dim: usize,
    pub value: Rational,
}

fn face_of(vertices: Vec<Vec<Rational>>, value: Rational) -> SupportFace {
    let refs: Vec<&[Rational]> = vertices.iter().map(|v| v.as_slice()).collect();
    let dim = exact::affine_dim(&refs).max(0) as usize;
    SupportFace { vertices, dim, value }
}

fn argmax(values: impl Iterator<Item = (Vec<Rational>, Rational)>) -> SupportFace {
    let all: Vec<(Vec<Rational>, Rational)> = values.collect();
    let best = all.iter().map(|(_, v)| v.clone()).max().expect("nonempty");
    let vs = all.into_iter().filter(|(_, v)| *v == best).map(|(x, _)| x).collect();
    face_of(vs, best)
}

/// Where `|f_i|` attains its maximum on `closure(Δ)`.
pub fn external_support(a: &Arrangement, c: &Chamber, chamber: usize, i: usize) -> Result<SupportFace> {
    let f = c.oriented_form(a, i);
    if c.rays.iter().any(|r| !f.eval_dir(r).is_zero()) {
        return Err(Error::Unbounded { chamber, index: i });
    }
    Ok(argmax(c.vertices.iter().map(|v| (v.clone(), f.eval(v)))))
}

/// Where `f₀` attains its minimum on `closure(Δ)`; `value` is the minimum.
pub fn support_face_f0(c: &Chamber, chamber: usize, f0: &LinearForm) -> Result<SupportFace> {
    if !c.rays.is_empty() && !chambers::is_growing(&c.rays, f0) {
        return Err(Error::UnboundedBelow { chamber });
    }
    let neg = f0.negated();
    let mut face = argmax(c.vertices.iter().map(|v| (v.clone(), neg.eval(v))));
    face.value = -face.value;
    Ok(face)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalPath {
    /// `|f_i|` bounded on `Δ`: maximum over the chamber.
    Bounded,
    /// `|f_i|` unbounded: maximum of `|h_i| = |f_i⁰/f₀⁰|` over `tr(Δ)`.
    Trace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalValueRecord {
    pub chamber: usize,
    pub index: usize,
    pub path: CriticalPath,
    /// Support vertices; for the trace path these are directions with `f₀⁰ = 1`.
    pub support: SupportFace,
    /// `ln` of the branch value `|m|^{α_i} e^{iα_iθ}`.
    pub log_value: Complex64,
}

impl CriticalValueRecord {
    pub fn value(&self) -> Complex64 {
        self.log_value.exp()
    }
}

pub fn critical_value(
    a: &Arrangement,
    c: &Chamber,
    chamber: usize,
    i: usize,
    branch: &BranchAssignment,
    f0: Option<&LinearForm>,
) -> Result<CriticalValueRecord> {
    let alpha = a.weights()[i];
    let (path, support) = match external_support(a, c, chamber, i) {
        Ok(s) => (CriticalPath::Bounded, s),
        Err(Error::Unbounded { .. }) if f0.is_some_and(|f| c.kind == ChamberKind::Growing || chambers::is_growing(&c.rays, f)) => {
            let f0 = f0.expect("checked");
            let fi = a.form(i);
            let dirs = c.rays.iter().map(|r| {
                let d = exact::scale(r, &(Rational::from_integer(1.into()) / f0.eval_dir(r)));
                let h = fi.eval_dir(&d).abs();
                (d, h)
            });
            (CriticalPath::Trace, argmax(dirs))
        }
        Err(e) => return Err(e),
    };
    let m = exact::to_f64(&support.value);
    let log_value = alpha * Complex64::new(m.ln(), branch.theta[i]);
    Ok(CriticalValueRecord { chamber, index: i, path, support, log_value })
}

/// `c(A;α)` or `c(A;α;f₀)` with its records and support faces of `f₀`.
#[derive(Clone, Debug)]
pub struct CriticalProduct {
    pub records: Vec<CriticalValueRecord>,
    pub f0_supports: Vec<SupportFace>,
    pub log_value: Complex64,
}

impl CriticalProduct {
    pub fn value(&self) -> Complex64 {
        self.log_value.exp()
    }
}

pub fn critical_product(
    a: &Arrangement,
    chambers: &[Chamber],
    branches: &[BranchAssignment],
    f0: Option<&LinearForm>,
) -> Result<CriticalProduct> {
    let mut records = Vec::new();
    let mut f0_supports = Vec::new();
    let mut log = Complex64::zero();
    for (j, (c, b)) in chambers.iter().zip(branches).enumerate() {
        if let Some(f) = f0 {
            let s = support_face_f0(c, j, f)?;
            log -= exact::to_f64(&s.value);
            f0_supports.push(s);
        }
        for i in 0..a.len() {
            let r = critical_value(a, c, j, i, b, f0)?;
            log += r.log_value;
            records.push(r);
        }
    }
    Ok(CriticalProduct { records, f0_supports, log_value: log })
}

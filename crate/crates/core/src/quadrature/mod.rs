//! Period matrices `PM(A;α)`, `PM(A;α;f₀)`, their determinants and the
//! verification of `det PM = c·B`.

pub mod cubature;
pub mod rules;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::chambers::{self, Chamber, ChamberKind};
use crate::closed_form;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::forms::{self, BranchAssignment, NForm};
use crate::geometry::{Arrangement, LinearForm};
use crate::nbc;
use crate::polyhedron::Polyhedron;
use cubature::PolytopeIntegrand;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Gauss–Jacobi when every exponent is real, tanh-sinh otherwise.
    Auto,
    TanhSinh,
    GaussJacobi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowingPolicy {
    /// Map the growing chamber onto a polytope by `x = x₀ + y/w`.
    Compactify,
    /// Integrate over `Δ ∩ {f₀ ≤ T}`, doubling `T − min f₀` until stable.
    Truncate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance per integral.
    pub tol: f64,
    pub max_depth: u32,
    /// Initial Gauss–Jacobi node count per dimension.
    pub nodes: usize,
    pub rule: Rule,
    pub growing: GrowingPolicy,
    /// Magnitude below which errors are judged absolutely.
    pub abs_floor: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { tol: 1e-10, max_depth: 6, nodes: 12, rule: Rule::Auto, growing: GrowingPolicy::Compactify, abs_floor: 1e-280 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) || self.nodes < 2 {
            return Err(Error::InvalidInput("tolerance must lie in (0,1) and nodes ≥ 2".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

/// The factor `e^{−c f₀}` with `Re c > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Exponential {
    pub f0: LinearForm,
    pub scale: Complex64,
}

impl Exponential {
    pub fn unit(f0: &LinearForm) -> Self {
        Self { f0: f0.clone(), scale: Complex64::new(1.0, 0.0) }
    }
}

/// `∫_Δ e^{−c f₀} Π |f_i|^{α_i − [i∈T]} dx` for each pole set `T` (each of size `n`).
pub fn integrate_chamber(
    a: &Arrangement,
    c: &Chamber,
    chamber: usize,
    poles: &[Vec<usize>],
    exp: Option<&Exponential>,
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate>> {
    let exponents: Vec<Vec<Complex64>> = poles
        .iter()
        .map(|t| {
            a.weights().iter().enumerate().map(|(i, &w)| if t.contains(&i) { w - 1.0 } else { w }).collect()
        })
        .collect();
    let oriented: Vec<LinearForm> = (0..a.len()).map(|i| c.oriented_form(a, i)).collect();
    if !c.rays.is_empty() && !exp.is_some_and(|e| chambers::is_growing(&c.rays, &e.f0)) {
        return Err(Error::NotGrowing { chamber });
    }
    integrate_region(&oriented, exponents, exp, spec)
}

/// `∫ e^{−c f₀} Π L_i^{β_i} dx` over the pointed polyhedron `{L_i ≥ 0}`, one
/// value per exponent vector. Unbounded regions need `f₀ → +∞` along every
/// ray and the same `Σ β_i` in every exponent vector.
pub fn integrate_region(
    forms: &[LinearForm],
    exponents: Vec<Vec<Complex64>>,
    exp: Option<&Exponential>,
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate>> {
    let n = forms.first().map_or(0, LinearForm::dim);
    let p = Polyhedron::new(n, forms.to_vec());
    let rays = p.rays();
    if rays.is_empty() {
        let smooth = |x: &[f64], _: &[f64]| exp.map_or(Complex64::zero(), |e| -e.scale * e.f0.eval_f64(x));
        let integrand = PolytopeIntegrand { forms: forms.to_vec(), exponents, smooth: &smooth };
        return cubature::integrate_polytope(&p, &integrand, spec);
    }
    let e = match exp {
        Some(e) if chambers::is_growing(&rays, &e.f0) => e,
        _ => return Err(Error::InvalidInput("unbounded region without a growing exponential".into())),
    };
    if e.scale.re <= 0.0 {
        return Err(Error::InvalidInput("exponential scale needs a positive real part".into()));
    }
    let vertices = p.vertices();
    match spec.growing {
        GrowingPolicy::Compactify => integrate_compactified(n, &vertices, forms, exponents, e, spec),
        GrowingPolicy::Truncate => integrate_truncated(n, &vertices, forms, exponents, e, spec),
    }
}

/// `x = x₀ + y/w`, `w = 1 − κ f₀⁰(y)`: `dx = w^{−n−1} dy`, `L_i = N_i/w` with
/// `N_i = L_i(x₀) w + L_i⁰(y)`, and `f₀ = f₀(x₀) + (1/w − 1)/κ`.
fn integrate_compactified(
    n: usize,
    vertices: &[Vec<Rational>],
    oriented: &[LinearForm],
    mut exponents: Vec<Vec<Complex64>>,
    e: &Exponential,
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate>> {
    let total: Complex64 = exponents[0].iter().sum();
    if exponents.iter().any(|ex| (ex.iter().sum::<Complex64>() - total).norm() > 1e-12) {
        return Err(Error::InvalidInput("exponent sums differ between terms".into()));
    }
    let x0 = vertices.iter().min_by(|p, q| e.f0.eval(p).cmp(&e.f0.eval(q))).expect("pointed region").clone();
    let m = exact::to_f64(&e.f0.eval(&x0));
    let kappa = exact::q_from_f64(e.scale.re).expect("finite");
    let kf = exact::to_f64(&kappa);
    let f0_dir = exact::scale(&e.f0.coeffs, &kappa);
    let mut forms: Vec<LinearForm> = oriented
        .iter()
        .map(|f| {
            let v = f.eval(&x0);
            LinearForm::new(exact::sub(&f.coeffs, &exact::scale(&f0_dir, &v)), v)
        })
        .collect();
    forms.push(LinearForm::new(f0_dir.iter().map(|x| -x).collect(), Rational::from_integer(1.into())));
    for ex in &mut exponents {
        ex.push(Complex64::zero());
    }
    let w_power = total + (n + 1) as f64;
    let w_index = forms.len() - 1;
    let smooth = move |_: &[f64], ln_l: &[f64]| {
        let lw = ln_l[w_index];
        if !lw.is_finite() {
            return Complex64::new(f64::NEG_INFINITY, 0.0);
        }
        let g = ((-lw).exp() - 1.0) / kf;
        -e.scale * (m + g) - w_power * lw
    };
    let p = Polyhedron::new(n, forms.clone());
    let integrand = PolytopeIntegrand { forms, exponents, smooth: &smooth };
    cubature::integrate_polytope(&p, &integrand, spec)
}

fn integrate_truncated(
    n: usize,
    vertices: &[Vec<Rational>],
    oriented: &[LinearForm],
    mut exponents: Vec<Vec<Complex64>>,
    e: &Exponential,
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate>> {
    let lo = vertices.iter().map(|v| e.f0.eval(v)).min().expect("pointed region");
    let hi = vertices.iter().map(|v| e.f0.eval(v)).max().expect("pointed region");
    for ex in &mut exponents {
        ex.push(Complex64::zero());
    }
    let smooth = |x: &[f64], _: &[f64]| -e.scale * e.f0.eval_f64(x);
    let mut span = hi - &lo + Rational::from_integer(10.into());
    let mut prev: Option<Vec<Estimate>> = None;
    for _ in 0..=spec.max_depth + 4 {
        let t = &lo + &span;
        let mut forms = oriented.to_vec();
        forms.push(LinearForm::new(e.f0.coeffs.iter().map(|x| -x).collect(), t - &e.f0.constant));
        let p = Polyhedron::new(n, forms.clone());
        let integrand = PolytopeIntegrand { forms, exponents: exponents.clone(), smooth: &smooth };
        let cur = cubature::integrate_polytope(&p, &integrand, spec)?;
        if let Some(pv) = &prev {
            let stable = cur.iter().zip(pv).all(|(x, y)| (x.value - y.value).norm() <= spec.tol * x.value.norm().max(spec.abs_floor));
            if stable {
                return Ok(cur
                    .iter()
                    .zip(pv)
                    .map(|(x, y)| Estimate { value: x.value, error: x.error + (x.value - y.value).norm() })
                    .collect());
            }
        }
        prev = Some(cur);
        span *= Rational::from_integer(2.into());
    }
    let last = prev.expect("at least one level");
    Err(Error::MaxDepthExceeded { estimate: last[0].value.norm(), error: f64::NAN, context: "truncation".into() })
}

/// Runs independent jobs; the CLI supplies a parallel implementation.
pub trait Executor {
    fn map<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T>;
}

pub struct Sequential;

impl Executor for Sequential {
    fn map<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T> {
        (0..n).map(f).collect()
    }
}

/// `PM(A;α)` or `PM(A;α;f₀)`: rows are forms, columns chambers, both in βnbc order.
#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    pub bases: Vec<Vec<usize>>,
    pub chambers: Vec<Chamber>,
    pub orientations: Vec<i8>,
    pub branches: Vec<BranchAssignment>,
    pub forms: Vec<NForm>,
    pub entries: Vec<Vec<Complex64>>,
    pub errors: Vec<Vec<f64>>,
}

/// Choices made before integration; defaults are the βnbc bijection, the
/// intrinsic orientations and the `θ ∈ {0, π}` branches.
#[derive(Clone, Debug, Default)]
pub struct Options {
    /// `(chamber, hyperplane, k)`: add `2πk` to that argument.
    pub branch_shifts: Vec<(usize, usize, i32)>,
    /// Chambers whose orientation is reversed (a negative control).
    pub flipped: Vec<usize>,
}

/// Column `j` of the period matrix from its chamber integrals.
fn column(
    a: &Arrangement,
    forms: &[NForm],
    c: &Chamber,
    j: usize,
    orientation: i8,
    branch: &BranchAssignment,
    exp: Option<&Exponential>,
    spec: &QuadratureSpec,
) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let mut poles: Vec<Vec<usize>> = forms.iter().flat_map(|f| f.terms.iter().map(|t| t.indices.clone())).collect();
    poles.sort();
    poles.dedup();
    let ints = integrate_chamber(a, c, j, &poles, exp, spec)?;
    let phase = branch.phase(a.weights()) * f64::from(orientation);
    let mut vals = Vec::with_capacity(forms.len());
    let mut errs = Vec::with_capacity(forms.len());
    for f in forms {
        let mut v = Complex64::zero();
        let mut e = 0.0;
        for t in &f.terms {
            let k = poles.iter().position(|p| *p == t.indices).expect("collected");
            let sign: i8 = t.indices.iter().map(|&i| c.signs[i]).product();
            let w = t.coeff * exact::to_f64(&t.det) * f64::from(sign);
            v += w * ints[k].value;
            e += w.norm() * ints[k].error;
        }
        vals.push(phase * v);
        errs.push(phase.norm() * e);
    }
    Ok((vals, errs))
}

pub fn period_matrix<E: Executor>(
    a: &Arrangement,
    f0: Option<&LinearForm>,
    options: &Options,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<PeriodMatrix> {
    spec.validate()?;
    let lab = nbc::chamber_bijection(a, f0)?;
    let forms: Vec<NForm> = lab.bases.iter().map(|b| forms::basis_n_form(a, b)).collect();
    let mut orientations = lab.orientations.clone();
    for &j in &options.flipped {
        orientations[j] = -orientations[j];
    }
    let branches: Vec<BranchAssignment> = lab
        .chambers
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let mut shifts = vec![0; a.len()];
            for &(jj, i, k) in &options.branch_shifts {
                if jj == j {
                    shifts[i] += k;
                }
            }
            forms::branch_shifted(c, &shifts)
        })
        .collect();
    let exp = f0.map(Exponential::unit);
    let cols = exec.map(lab.chambers.len(), |j| {
        column(a, &forms, &lab.chambers[j], j, orientations[j], &branches[j], exp.as_ref(), spec)
    });
    let size = forms.len();
    let mut entries = vec![vec![Complex64::zero(); size]; size];
    let mut errors = vec![vec![0.0; size]; size];
    for (j, col) in cols.into_iter().enumerate() {
        let (v, e) = col?;
        for k in 0..size {
            entries[k][j] = v[k];
            errors[k][j] = e[k];
        }
    }
    Ok(PeriodMatrix {
        bases: lab.bases.iter().map(|b| b.indices.clone()).collect(),
        chambers: lab.chambers,
        orientations,
        branches,
        forms,
        entries,
        errors,
    })
}

/// Determinant by LU with partial pivoting, the 1-norm condition number and a
/// first-order bound `Σ |cof_{kj}| err_{kj}` on the determinant error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Determinant {
    pub value: Complex64,
    pub condition: f64,
    pub error: f64,
}

pub fn determinant(entries: &[Vec<Complex64>], errors: &[Vec<f64>]) -> Determinant {
    let n = entries.len();
    if n == 0 {
        return Determinant { value: Complex64::new(1.0, 0.0), condition: 1.0, error: 0.0 };
    }
    let m = DMatrix::from_fn(n, n, |r, c| entries[r][c]);
    let lu = m.clone().lu();
    let value = lu.determinant();
    let norm1 = |x: &DMatrix<Complex64>| (0..n).map(|c| (0..n).map(|r| x[(r, c)].norm()).sum::<f64>()).fold(0.0, f64::max);
    match lu.try_inverse() {
        Some(inv) => {
            let condition = norm1(&m) * norm1(&inv);
            let mut error = 0.0;
            for r in 0..n {
                for c in 0..n {
                    error += (value * inv[(c, r)]).norm() * errors[r][c];
                }
            }
            Determinant { value, condition, error }
        }
        None => Determinant { value, condition: f64::INFINITY, error: f64::INFINITY },
    }
}

/// Which reading of `B(A;α;H₀)` the right-hand side uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaReading {
    /// Volumes measured in `A_t` (the default).
    Relative,
    /// Volumes of `Ā`, denominators over `L₋` edges inside `H̄₀`.
    Literal,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub critical: Complex64,
    pub beta: Complex64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub determinant: Determinant,
    pub max_entry_error: f64,
    pub matrix: PeriodMatrix,
}

pub fn relative_deviation(x: Complex64, y: Complex64) -> f64 {
    let scale = x.norm().max(y.norm());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).norm() / scale
    }
}

/// Theorem check `det PM = c·B`, with or without `f₀`.
pub fn verify<E: Executor>(
    a: &Arrangement,
    f0: Option<&LinearForm>,
    options: &Options,
    reading: BetaReading,
    tolerance: f64,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<VerificationReport> {
    let pm = period_matrix(a, f0, options, spec, exec)?;
    let det = determinant(&pm.entries, &pm.errors);
    let cp = closed_form::critical_product(a, &pm.chambers, &pm.branches, f0)?;
    let lb = match (f0, reading) {
        (None, _) => closed_form::log_factors(&closed_form::beta_factors(a))?,
        (Some(f), BetaReading::Relative) => closed_form::log_factors(&closed_form::beta_factors_relative(a, f)?)?,
        (Some(f), BetaReading::Literal) => closed_form::log_factors(&closed_form::beta_factors_literal(a, f)?)?,
    };
    let rhs = (cp.log_value + lb).exp();
    let deviation = relative_deviation(det.value, rhs);
    let max_entry_error = pm.errors.iter().flatten().fold(0.0, |m: f64, &e| m.max(e));
    Ok(VerificationReport {
        lhs: det.value,
        rhs,
        critical: cp.value(),
        beta: lb.exp(),
        deviation,
        tolerance,
        pass: deviation <= tolerance,
        determinant: det,
        max_entry_error,
        matrix: pm,
    })
}

/// `‖PM(A_t;α,t) − PM(A;α;f₀)‖_max` for each `t`, with weight `t` on
/// `H_t = {1 − f₀/t = 0}` and its positive branch.
pub fn convergence_check<E: Executor>(
    a: &Arrangement,
    f0: &LinearForm,
    ts: &[u32],
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<Vec<(u32, f64)>> {
    let reference = period_matrix(a, Some(f0), &Options::default(), spec, exec)?;
    let mut out = Vec::new();
    for &t in ts {
        let tr = chambers::truncate(a, f0, &Rational::from_integer(t.into()), Complex64::new(f64::from(t), 0.0))?;
        let pm = period_matrix(&tr.arrangement, None, &Options::default(), spec, exec)?;
        let shifted: Vec<Vec<usize>> = pm.bases.iter().map(|b| b.iter().map(|i| i - 1).collect()).collect();
        if shifted != reference.bases {
            return Err(Error::BijectionFailure { reason: String::from("βnbc(A_t) differs from βnbc(A;f0)") });
        }
        let mut dev: f64 = 0.0;
        for (r1, r2) in pm.entries.iter().zip(&reference.entries) {
            for (x, y) in r1.iter().zip(r2) {
                dev = dev.max((x - y).norm());
            }
        }
        out.push((t, dev));
    }
    Ok(out)
}

/// Whether a chamber is integrated as growing.
pub fn is_growing_chamber(c: &Chamber) -> bool {
    c.kind == ChamberKind::Growing || !c.rays.is_empty()
}

//! Selberg-type integrals: the master function `Φ(t,z)`, the forms `ω_m` and
//! `ω̃_m`, the ordered domains `U_l`, `Ũ_l` and boxes `V_l`, and both sides of
//! the determinant and critical-value identities.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::Range;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::chambers;
use crate::closed_form::{self, CriticalPath};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::forms;
use crate::geometry::{Arrangement, LinearForm};
use crate::quadrature::{self, Determinant, Estimate, Executor, Exponential, QuadratureSpec};
use crate::special;

/// `l = (l₁,…,l_p)` with `l_s ≥ 0` and `Σ l_s = n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    pub parts: Vec<usize>,
}

impl Composition {
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `l^s = l₁ + ⋯ + l_s`.
    pub fn prefix(&self, s: usize) -> usize {
        self.parts[..s].iter().sum()
    }

    /// 0-based variable indices of block `s` (1-based), i.e. `Γ_{l,s} − 1`.
    pub fn block(&self, s: usize) -> Range<usize> {
        self.prefix(s - 1)..self.prefix(s)
    }

    /// `(l, 0) ∈ 𝒵ₙᵖ`.
    pub fn padded(&self, p: usize) -> Self {
        let mut parts = self.parts.clone();
        parts.resize(p, 0);
        Self { parts }
    }
}

/// `𝒵ₙᵖ` in lexicographic order.
pub fn compositions(n: usize, p: usize) -> Vec<Composition> {
    fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if slots == 1 {
            cur.push(left);
            out.push(Composition { parts: cur.clone() });
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(left - k, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p > 0 {
        rec(n, p, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelbergParams {
    pub n: usize,
    pub z: Vec<Rational>,
    pub alpha: Vec<Complex64>,
    pub gamma: Complex64,
    pub a: Complex64,
}

impl SelbergParams {
    pub fn p(&self) -> usize {
        self.z.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.z.is_empty() {
            return Err(Error::Empty);
        }
        if self.alpha.len() != self.z.len() {
            return Err(Error::DimensionMismatch { expected: self.z.len(), found: self.alpha.len() });
        }
        if self.z.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("points must be strictly increasing".into()));
        }
        if let Some(i) = self.alpha.iter().position(|a| a.re <= 0.0) {
            return Err(Error::NonIntegrable { index: i });
        }
        if self.gamma.re <= 0.0 {
            return Err(Error::InvalidInput("γ needs a positive real part".into()));
        }
        Ok(())
    }

    fn check_exp(&self) -> Result<()> {
        if self.a.re <= 0.0 {
            return Err(Error::InvalidInput("a needs a positive real part".into()));
        }
        Ok(())
    }

    fn zf(&self, s: usize) -> f64 {
        exact::to_f64(&self.z[s])
    }
}

/// Which difference carries the exponent `2γ` for `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagonalOrder {
    /// `(t_j − t_i)^{2γ}`, as in `Φ`.
    Ascending,
    /// `(t_i − t_j)^{2γ}`, as in the box integrals.
    Descending,
}

/// `ln x^e` on the branch `−π/2 < arg x < 3π/2`.
fn ln_power(x: f64, e: Complex64) -> Complex64 {
    let arg = if x < 0.0 { PI } else { 0.0 };
    e * Complex64::new(x.abs().ln(), arg)
}

pub fn master_function(t: &[f64], params: &SelbergParams, order: DiagonalOrder) -> Result<Complex64> {
    let mut log = Complex64::zero();
    for &ti in t {
        for (s, &al) in params.alpha.iter().enumerate() {
            let d = ti - params.zf(s);
            if d == 0.0 {
                return Err(Error::OnSingularLocus);
            }
            log += ln_power(d, al);
        }
    }
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            let d = match order {
                DiagonalOrder::Ascending => t[j] - t[i],
                DiagonalOrder::Descending => t[i] - t[j],
            };
            if d == 0.0 {
                return Err(Error::OnSingularLocus);
            }
            log += ln_power(d, params.gamma * 2.0);
        }
    }
    Ok(log.exp())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Coefficient of `d^n t` in `ω_m`, summed over `S_n` as defined.
pub fn omega_m(t: &[f64], m: &Composition, params: &SelbergParams) -> Result<Complex64> {
    let n = t.len();
    if m.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.n() });
    }
    let pre: f64 = m.parts.iter().map(|&k| 1.0 / factorial(k)).product();
    let mut sum = 0.0;
    for sigma in permutations(n) {
        let mut term = pre;
        for s in 1..=m.parts.len() {
            for j in m.block(s) {
                let d = t[sigma[j]] - params.zf(s - 1);
                if d == 0.0 {
                    return Err(Error::OnSingularLocus);
                }
                term /= d;
            }
        }
        sum += term;
    }
    Ok(Complex64::new(sum, 0.0))
}

/// `Π_s m_s! α_s(α_s+γ)⋯(α_s+(m_s−1)γ)`, the ratio `ω̃_m / ω_m`.
pub fn tilde_factor(m: &Composition, params: &SelbergParams) -> Complex64 {
    let mut f = Complex64::one();
    for (s, &k) in m.parts.iter().enumerate() {
        f *= factorial(k);
        for r in 0..k {
            f *= params.alpha[s] + params.gamma * r as f64;
        }
    }
    f
}

pub fn omega_tilde_m(t: &[f64], m: &Composition, params: &SelbergParams) -> Result<Complex64> {
    Ok(tilde_factor(m, params) * omega_m(t, m, params)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainKind {
    /// Blocks ordered inside `[z_s, z_{s+1}]`.
    U,
    /// Blocks ordered inside `[z_{s−1}, z_s]`, `z₀ = −∞`.
    UTilde,
    /// Unordered blocks in `[z_{s−1}, z_s]`: a product of intervals.
    V,
}

/// A domain as a union of ordered pieces. Each piece is a chamber of the
/// arrangement `{t_i = z_s} ∪ {t_i = t_j}`, identified by an interior point.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    pub kind: DomainKind,
    /// Per variable: `(lower, upper)`, `None` for `−∞`.
    pub intervals: Vec<(Option<Rational>, Rational)>,
    pub pieces: Vec<Vec<Rational>>,
}

fn block_intervals(l: &Composition, params: &SelbergParams, kind: DomainKind) -> Result<Vec<(Option<Rational>, Rational)>> {
    let p = params.p();
    let ok = match kind {
        DomainKind::U => l.parts.len() + 1 == p,
        _ => l.parts.len() == p,
    };
    if !ok || l.n() != params.n {
        return Err(Error::DimensionMismatch { expected: params.n, found: l.n() });
    }
    let mut iv = Vec::with_capacity(params.n);
    for s in 1..=l.parts.len() {
        let bounds = match kind {
            DomainKind::U => (Some(params.z[s - 1].clone()), params.z[s].clone()),
            _ => (if s == 1 { None } else { Some(params.z[s - 2].clone()) }, params.z[s - 1].clone()),
        };
        for _ in l.block(s) {
            iv.push(bounds.clone());
        }
    }
    Ok(iv)
}

/// `k` increasing interior points of the interval.
fn spread(lo: &Option<Rational>, hi: &Rational, k: usize) -> Vec<Rational> {
    let q = |x: usize| Rational::from_integer((x as i64).into());
    (1..=k)
        .map(|r| match lo {
            Some(lo) => lo + (hi - lo) * q(r) / q(k + 1),
            None => hi - q(k + 1 - r),
        })
        .collect()
}

pub fn domain(l: &Composition, params: &SelbergParams, kind: DomainKind) -> Result<Domain> {
    let intervals = block_intervals(l, params, kind)?;
    let mut base = vec![Rational::zero(); params.n];
    for s in 1..=l.parts.len() {
        let b = l.block(s);
        if b.is_empty() {
            continue;
        }
        let (lo, hi) = &intervals[b.start];
        for (k, v) in b.clone().zip(spread(lo, hi, b.len())) {
            base[k] = v;
        }
    }
    let mut pieces = vec![base.clone()];
    if kind == DomainKind::V {
        for s in 1..=l.parts.len() {
            let b = l.block(s);
            let mut next = Vec::new();
            for piece in &pieces {
                for perm in permutations(b.len()) {
                    let mut x = piece.clone();
                    for (r, &k) in perm.iter().enumerate() {
                        x[b.start + k] = piece[b.start + r].clone();
                    }
                    next.push(x);
                }
            }
            pieces = next;
        }
    }
    Ok(Domain { kind, intervals, pieces })
}

/// The factors of `Φ` as linear forms: `t_i − z_s` (index `i·p + s`), then
/// the diagonal differences for `i < j` in the given order.
fn factors(params: &SelbergParams, order: DiagonalOrder) -> Vec<(LinearForm, Complex64)> {
    let (n, p) = (params.n, params.p());
    let unit = |i: usize| {
        let mut c = vec![Rational::zero(); n];
        c[i] = Rational::one();
        c
    };
    let mut out = Vec::new();
    for i in 0..n {
        for s in 0..p {
            out.push((LinearForm::new(unit(i), -params.z[s].clone()), params.alpha[s]));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = exact::sub(&unit(j), &unit(i));
            let d = match order {
                DiagonalOrder::Ascending => d,
                DiagonalOrder::Descending => d.iter().map(|x| -x).collect(),
            };
            out.push((LinearForm::new(d, Rational::zero()), params.gamma * 2.0));
        }
    }
    out
}

/// Distinct maps `variable → s` with `m_s` variables sent to `s`; `ω_m` is the
/// sum over them of `Π_i 1/(t_i − z_{s(i)})`.
fn assignments(m: &Composition) -> Vec<Vec<usize>> {
    let n = m.n();
    let mut out = Vec::new();
    fn rec(i: usize, n: usize, left: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for s in 0..left.len() {
            if left[s] > 0 {
                left[s] -= 1;
                cur.push(s);
                rec(i + 1, n, left, cur, out);
                cur.pop();
                left[s] += 1;
            }
        }
    }
    rec(0, n, &mut m.parts.clone(), &mut Vec::new(), &mut out);
    out
}

/// `∫_piece [e^{aΣt}] Φ ω_m` for each `m` over the chamber containing `sample`.
pub fn piece_integrals(
    params: &SelbergParams,
    sample: &[Rational],
    ms: &[Composition],
    order: DiagonalOrder,
    with_exp: bool,
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate>> {
    let n = params.n;
    let p = params.p();
    let fs = factors(params, order);
    let signs: Vec<i8> = fs.iter().map(|(f, _)| exact::sign(&f.eval(sample))).collect();
    if signs.contains(&0) {
        return Err(Error::OnSingularLocus);
    }
    let oriented: Vec<LinearForm> =
        fs.iter().zip(&signs).map(|((f, _), &s)| if s > 0 { f.clone() } else { f.negated() }).collect();
    let phase: Complex64 = fs
        .iter()
        .zip(&signs)
        .filter(|(_, &s)| s < 0)
        .map(|((_, w), _)| (Complex64::i() * PI * w).exp())
        .product();
    let mut keys: Vec<Vec<usize>> = ms.iter().flat_map(assignments).collect();
    keys.sort();
    keys.dedup();
    let exponents: Vec<Vec<Complex64>> = keys
        .iter()
        .map(|asg| {
            let mut e: Vec<Complex64> = fs.iter().map(|(_, w)| *w).collect();
            for (i, &s) in asg.iter().enumerate() {
                e[i * p + s] -= 1.0;
            }
            e
        })
        .collect();
    let exp = Exponential { f0: LinearForm::new(vec![-Rational::one(); n], Rational::zero()), scale: params.a };
    let ints = quadrature::integrate_region(&oriented, exponents, if with_exp { Some(&exp) } else { None }, spec)?;
    Ok(ms
        .iter()
        .map(|m| {
            let mut v = Complex64::zero();
            let mut e = 0.0;
            for asg in assignments(m) {
                let k = keys.binary_search(&asg).expect("collected");
                let sign: i8 = asg.iter().enumerate().map(|(i, &s)| signs[i * p + s]).product();
                v += ints[k].value * f64::from(sign);
                e += ints[k].error;
            }
            Estimate { value: phase * v, error: phase.norm() * e }
        })
        .collect())
}

/// `Σ_pieces ∫ [e^{aΣt}] Φ ω_m` over a domain.
pub fn domain_integrals(
    params: &SelbergParams,
    d: &Domain,
    ms: &[Composition],
    order: DiagonalOrder,
    with_exp: bool,
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate>> {
    let mut total = vec![Estimate { value: Complex64::zero(), error: 0.0 }; ms.len()];
    for piece in &d.pieces {
        for (t, e) in total.iter_mut().zip(piece_integrals(params, piece, ms, order, with_exp, spec)?) {
            t.value += e.value;
            t.error += e.error;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct SelbergReport {
    pub rows: Vec<Composition>,
    pub columns: Vec<Composition>,
    pub entries: Vec<Vec<Complex64>>,
    pub errors: Vec<Vec<f64>>,
    pub determinant: Determinant,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub deviation: f64,
}

fn lg(z: Complex64, what: &str) -> Result<Complex64> {
    if special::is_pole(z) {
        return Err(Error::GammaPole { argument: (z.re, z.im), context: format!("Γ({what})") });
    }
    Ok(special::ln_gamma(z))
}

fn binom(n: usize, k: usize) -> f64 {
    exact::binomial(n as i64, k as i64) as f64
}

fn binom_i(n: i64, k: i64) -> f64 {
    exact::binomial(n, k) as f64
}

/// `Σ_{a<b} ((α_a+α_b)·e₁ + 2γ·e₂) ln(z_b − z_a)`.
fn ln_discriminant(params: &SelbergParams, e1: f64, e2: f64) -> Complex64 {
    let p = params.p();
    let mut log = Complex64::zero();
    for a in 0..p {
        for b in a + 1..p {
            let d = (params.zf(b) - params.zf(a)).ln();
            log += ((params.alpha[a] + params.alpha[b]) * e1 + params.gamma * 2.0 * e2) * d;
        }
    }
    log
}

/// Phase and discriminant part of the no-exponential formula, which the
/// critical values reproduce.
pub fn ln_critical_closed_no_exp(params: &SelbergParams) -> Complex64 {
    let (n, p) = (params.n, params.p());
    let c1 = binom(p + n - 2, p - 1);
    let phase: Complex64 = params.alpha.iter().enumerate().map(|(s, a)| a * s as f64).sum();
    Complex64::i() * PI * c1 * phase + ln_discriminant(params, c1, binom(p + n - 2, p))
}

/// `ln` of the right-hand side for `det[∫_{U_l} Φ ω_m]` (or `ω̃_m`).
pub fn ln_rhs_no_exp(params: &SelbergParams, symmetric: bool) -> Result<Complex64> {
    params.validate()?;
    let (n, p) = (params.n, params.p());
    if p < 2 {
        return Err(Error::InvalidInput("the formula needs p ≥ 2".into()));
    }
    let g = params.gamma;
    let total: Complex64 = params.alpha.iter().sum();
    let one = Complex64::one();
    let shift = if symmetric { one } else { Complex64::zero() };
    let mut log = Complex64::zero();
    for s in 0..n {
        let e = binom_i((p + n) as i64 - s as i64 - 3, p as i64 - 2);
        if e == 0.0 {
            continue;
        }
        let sf = s as f64;
        let mut block = (lg(g * (sf + 1.0) + shift, "(s+1)γ")? - lg(g + shift, "γ")?) * (p - 1) as f64;
        if symmetric {
            for (j, a) in params.alpha.iter().enumerate() {
                block += lg(a + g * sf + 1.0, &format!("α_{}+sγ+1", j + 1))?;
            }
        } else {
            block += lg(params.alpha[p - 1] + g * sf + 1.0, "1+α_p+sγ")?;
            for (j, a) in params.alpha[..p - 1].iter().enumerate() {
                block += lg(a + g * sf, &format!("α_{}+sγ", j + 1))?;
            }
        }
        block -= lg(total + g * (2.0 * n as f64 - 2.0 - sf) + 1.0, "1+Σα+(2n−2−s)γ")?;
        log += block * e;
    }
    Ok(log + ln_critical_closed_no_exp(params))
}

/// How to read the last line of the exponential formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpReading {
    /// `exp(a π C Σ z_s)` as printed rather than `exp(a C Σ z_s)`.
    pub pi_factor: bool,
    /// `a^{−C Σ s α_s − …}` as printed rather than `a^{−C Σ α_s − …}`.
    pub weighted_power: bool,
}

impl ExpReading {
    pub const PRINTED: Self = Self { pi_factor: true, weighted_power: true };
    /// The reading that matches both the integrals and the critical values.
    pub const CORRECTED: Self = Self { pi_factor: false, weighted_power: false };
}

/// `ln` of the phase, `e^{aΣz}` and `a`-power part of the exponential formula.
pub fn ln_critical_closed_exp(params: &SelbergParams, reading: ExpReading) -> Complex64 {
    let (n, p) = (params.n, params.p());
    let c = binom(p + n - 1, p);
    let weighted: Complex64 = params.alpha.iter().enumerate().map(|(s, a)| a * (s + 1) as f64).sum();
    let plain: Complex64 = params.alpha.iter().sum();
    let zsum: f64 = (0..p).map(|s| params.zf(s)).sum();
    let pi = if reading.pi_factor { PI } else { 1.0 };
    let power = if reading.weighted_power { weighted } else { plain };
    let a_power = power * c + params.gamma * (2.0 * p as f64 * binom(p + n - 1, p + 1));
    Complex64::i() * PI * c * weighted + params.a * pi * c * zsum - a_power * params.a.ln()
}

fn ln_discriminant_exp(params: &SelbergParams) -> Complex64 {
    let (n, p) = (params.n, params.p());
    ln_discriminant(params, binom(p + n - 1, p), binom(p + n - 1, p + 1))
}

/// `ln` of the right-hand side for `det[∫_{Ũ_l} e^{aΣt} Φ ω_m]`.
pub fn ln_rhs_exp(params: &SelbergParams, reading: ExpReading) -> Result<Complex64> {
    params.validate()?;
    params.check_exp()?;
    let (n, p) = (params.n, params.p());
    let g = params.gamma;
    let sign = (n as f64 * binom(p + n - 1, p - 1)) % 2.0;
    let mut log = Complex64::new(0.0, PI * sign);
    for s in 0..n {
        let e = binom(p + n - s - 2, p - 1);
        let sf = s as f64;
        let mut block = (lg(g * (sf + 1.0), "(s+1)γ")? - lg(g, "γ")?) * p as f64;
        for (j, a) in params.alpha.iter().enumerate() {
            block += lg(a + g * sf, &format!("α_{}+sγ", j + 1))?;
        }
        log += block * e;
    }
    log += ln_discriminant_exp(params);
    Ok(log + ln_critical_closed_exp(params, reading))
}

fn report(
    rows: Vec<Composition>,
    columns: Vec<Composition>,
    results: Vec<Result<Vec<Estimate>>>,
    rhs: Complex64,
) -> Result<SelbergReport> {
    let mut entries = Vec::with_capacity(rows.len());
    let mut errors = Vec::with_capacity(rows.len());
    for r in results {
        let r = r?;
        entries.push(r.iter().map(|e| e.value).collect::<Vec<_>>());
        errors.push(r.iter().map(|e| e.error).collect::<Vec<_>>());
    }
    let determinant = quadrature::determinant(&entries, &errors);
    let lhs = determinant.value;
    Ok(SelbergReport { rows, columns, entries, errors, determinant, lhs, rhs, deviation: quadrature::relative_deviation(lhs, rhs) })
}

/// `det[∫_{U_l} Φ ω_m]_{l,m ∈ 𝒵ₙ^{p−1}}` against its closed form; with
/// `symmetric` the columns use `ω̃_m`.
pub fn determinant_no_exp<E: Executor>(
    params: &SelbergParams,
    symmetric: bool,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<SelbergReport> {
    params.validate()?;
    spec.validate()?;
    let p = params.p();
    let rhs = ln_rhs_no_exp(params, symmetric)?.exp();
    let ls = compositions(params.n, p - 1);
    let ms: Vec<Composition> = ls.iter().map(|m| m.padded(p)).collect();
    let scale: Vec<Complex64> =
        ms.iter().map(|m| if symmetric { tilde_factor(m, params) } else { Complex64::one() }).collect();
    let results = exec.map(ls.len(), |k| {
        let d = domain(&ls[k], params, DomainKind::U)?;
        let row = domain_integrals(params, &d, &ms, DiagonalOrder::Ascending, false, spec)?;
        Ok(row
            .into_iter()
            .zip(&scale)
            .map(|(e, s)| Estimate { value: e.value * s, error: e.error * s.norm() })
            .collect())
    });
    report(ls, ms, results, rhs)
}

/// `det[∫_{Ũ_l} e^{aΣt} Φ ω_m]_{l,m ∈ 𝒵ₙᵖ}` against its closed form.
pub fn determinant_exp<E: Executor>(
    params: &SelbergParams,
    reading: ExpReading,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<SelbergReport> {
    params.validate()?;
    params.check_exp()?;
    spec.validate()?;
    let rhs = ln_rhs_exp(params, reading)?.exp();
    let ls = compositions(params.n, params.p());
    let results = exec.map(ls.len(), |k| {
        let d = domain(&ls[k], params, DomainKind::UTilde)?;
        domain_integrals(params, &d, &ls, DiagonalOrder::Ascending, true, spec)
    });
    report(ls.clone(), ls, results, rhs)
}

/// The Selberg arrangement `{t_i = z_s} ∪ {t_j = t_i}` with weights `α_s`, `2γ`.
pub fn selberg_arrangement(params: &SelbergParams) -> Result<Arrangement> {
    let (forms, weights): (Vec<_>, Vec<_>) = factors(params, DiagonalOrder::Ascending).into_iter().unzip();
    Arrangement::new(params.n, forms, weights)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalComparison {
    pub closed: Complex64,
    pub critical: Complex64,
    pub deviation: f64,
}

/// Product of critical values of the factors of `Φ` over the domains (and of
/// `e^{aΣt}` with the `a`-scaled traces when `with_exp`).
fn critical_side(params: &SelbergParams, kind: DomainKind, with_exp: bool) -> Result<Complex64> {
    let arr = selberg_arrangement(params)?;
    let ls = match kind {
        DomainKind::U => compositions(params.n, params.p() - 1),
        _ => compositions(params.n, params.p()),
    };
    let all = chambers::enumerate_chambers(&arr);
    let mut f0_coeffs = vec![Rational::zero(); params.n];
    f0_coeffs[0] = -Rational::one();
    let f0 = LinearForm::new(f0_coeffs, Rational::zero());
    let sum = LinearForm::new(vec![-Rational::one(); params.n], Rational::zero());
    let ln_a = params.a.ln();
    let mut log = Complex64::zero();
    for (j, l) in ls.iter().enumerate() {
        let d = domain(l, params, kind)?;
        let signs: Vec<i8> = arr.forms().iter().map(|f| exact::sign(&f.eval(&d.pieces[0]))).collect();
        let c = all
            .iter()
            .find(|c| c.signs == signs)
            .ok_or_else(|| Error::InvalidInput("domain is not a chamber".into()))?;
        let branch = forms::branch(c);
        if with_exp {
            let s = closed_form::support_face_f0(c, j, &sum)?;
            log -= params.a * exact::to_f64(&s.value);
        }
        for i in 0..arr.len() {
            let r = closed_form::critical_value(&arr, c, j, i, &branch, with_exp.then_some(&f0))?;
            log += r.log_value;
            if r.path == CriticalPath::Trace {
                log -= arr.weights()[i] * ln_a;
            }
        }
    }
    Ok(log.exp())
}

fn compare(closed: Complex64, critical: Complex64) -> CriticalComparison {
    CriticalComparison { closed, critical, deviation: quadrature::relative_deviation(closed, critical) }
}

/// Phase and discriminant factor of the no-exponential formula against the
/// product of critical values over the `U_l`.
pub fn critical_products_no_exp(params: &SelbergParams) -> Result<CriticalComparison> {
    params.validate()?;
    if params.p() < 2 {
        return Err(Error::InvalidInput("needs p ≥ 2".into()));
    }
    Ok(compare(ln_critical_closed_no_exp(params).exp(), critical_side(params, DomainKind::U, false)?))
}

/// Last line of the exponential formula, times the discriminant factor the
/// bounded domains contribute, against the product of critical values over
/// the `Ũ_l` with respect to `−a t₁`.
pub fn critical_products_exp(params: &SelbergParams, reading: ExpReading) -> Result<CriticalComparison> {
    params.validate()?;
    params.check_exp()?;
    let closed = ln_critical_closed_exp(params, reading) + ln_discriminant_exp(params);
    Ok(compare(closed.exp(), critical_side(params, DomainKind::UTilde, true)?))
}

/// `e^{n(n−1)iπγ} Π_j Π_{s≤l_j} sin(−sπγ)/sin(−πγ) · Π_j e^{−iπγ l_j(l_j−1)/2}`.
pub fn rectangular_factor(l: &Composition, params: &SelbergParams) -> Complex64 {
    let g = params.gamma;
    let i = Complex64::i();
    let n = params.n as f64;
    let mut f = (i * PI * g * (n * (n - 1.0))).exp();
    for &lj in &l.parts {
        for s in 1..=lj {
            f *= (-(g * PI * s as f64)).sin() / (-(g * PI)).sin();
        }
        f *= (-i * PI * g * (lj * lj.saturating_sub(1)) as f64 / 2.0).exp();
    }
    f
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RectangularCheck {
    pub box_integral: Estimate,
    pub factor: Complex64,
    pub triangular: Estimate,
    pub deviation: f64,
}

/// `∫_{V_l} e^{aΣt} Π(t_i−z_s)^{α_s} Π_{i<j}(t_i−t_j)^{2γ} ω_m` against
/// `factor · ∫_{Ũ_l} e^{aΣt} Φ ω_m`.
pub fn rectangular_to_triangular(
    l: &Composition,
    m: &Composition,
    params: &SelbergParams,
    spec: &QuadratureSpec,
) -> Result<RectangularCheck> {
    params.validate()?;
    params.check_exp()?;
    let v = domain(l, params, DomainKind::V)?;
    let u = domain(l, params, DomainKind::UTilde)?;
    let ms = [m.clone()];
    let box_integral = domain_integrals(params, &v, &ms, DiagonalOrder::Descending, true, spec)?[0];
    let triangular = domain_integrals(params, &u, &ms, DiagonalOrder::Ascending, true, spec)?[0];
    let factor = rectangular_factor(l, params);
    let deviation = quadrature::relative_deviation(box_integral.value, factor * triangular.value);
    Ok(RectangularCheck { box_integral, factor, triangular, deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn assignment_expansion_matches_definition(t1 in 0.1f64..0.9, t2 in 1.1f64..2.9, t3 in 3.1f64..4.0, k in 0usize..10) {
            let p = params(3, &[q(0), q(1), q(3)], &[0.5, 0.5, 0.5], 0.5, 1.0);
            let t = [t1, t2, t3];
            let m = &compositions(3, 3)[k];
            let direct = omega_m(&t, m, &p).unwrap();
            let expanded: f64 = assignments(m)
                .iter()
                .map(|asg| asg.iter().enumerate().map(|(i, &s)| 1.0 / (t[i] - p.zf(s))).product::<f64>())
                .sum();
            prop_assert!((direct.re - expanded).abs() <= 1e-12 * expanded.abs().max(1.0));
        }
    }

    fn params(n: usize, z: &[Rational], alpha: &[f64], gamma: f64, a: f64) -> SelbergParams {
        SelbergParams {
            n,
            z: z.to_vec(),
            alpha: alpha.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            gamma: Complex64::new(gamma, 0.0),
            a: Complex64::new(a, 0.0),
        }
    }
}

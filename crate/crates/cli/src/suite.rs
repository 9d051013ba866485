//! Seeded random instances: essential arrangements, generic `f0`, weights with
//! real parts in `[0.3, 1.5]`. Every instance is checked combinatorially and
//! numerically; the report only depends on the configuration and the seed.

use std::path::{Path, PathBuf};

use hyperdet_core::chambers::{self, ChamberKind};
use hyperdet_core::exact::{self, Rational};
use hyperdet_core::geometry::{self, Arrangement, LinearForm};
use hyperdet_core::nbc;
use hyperdet_core::quadrature::{self, BetaReading, Executor, Options};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commands::Settings;
use crate::schema::ArrangementDoc;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub count: usize,
    pub dim: usize,
    pub max_p: usize,
    /// Verify `det PM(A;α;f₀)` rather than `det PM(A;α)`.
    pub with_f0: bool,
    /// Re-verify each instance with one argument moved to another sheet.
    pub branch_check: bool,
    /// Largest `|Im α|`.
    pub max_imag: f64,
}

impl SuiteConfig {
    pub fn new(seed: u64, count: usize, dim: usize, max_p: usize, with_f0: bool) -> Self {
        Self { seed, count, dim, max_p, with_f0, branch_check: with_f0, max_imag: 0.25 }
    }
}

/// A generated instance and the raw draws used for its branch shift.
#[derive(Clone, Debug)]
pub struct Generated {
    pub arrangement: Arrangement,
    pub f0: LinearForm,
    shift: (u32, u32, bool),
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Combinatorics {
    pub hyperplanes: usize,
    pub generic: bool,
    pub beta: usize,
    pub bnbc: usize,
    /// `C(p−1, n)`, reported for generic instances only.
    pub beta_generic: Option<u64>,
    pub gamma: usize,
    pub bnbc_f0: usize,
    pub bijection: bool,
    pub bijection_f0: bool,
    pub growing: usize,
    pub volume: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Covariance {
    pub chamber: usize,
    pub hyperplane: usize,
    pub k: i32,
    pub deviation: f64,
    pub change: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct InstanceReport {
    pub index: usize,
    pub input: ArrangementDoc,
    pub combinatorics: Combinatorics,
    pub deviation: Option<f64>,
    pub covariance: Option<Covariance>,
    pub error: Option<String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub dim: usize,
    pub count: usize,
    pub max_p: usize,
    pub with_f0: bool,
    pub tolerance: f64,
    pub passed: usize,
    pub pass_rate: f64,
    pub worst_deviation: f64,
    pub growing_count_exact: bool,
    pub combinatorics_exact: bool,
    pub instances: Vec<InstanceReport>,
    pub pass: bool,
}

fn rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let den = rng.random_range(1..=3i64);
    exact::q_frac(rng.random_range(-bound * den..=bound * den), den)
}

fn nonzero_coeffs(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Rational> {
    loop {
        let c: Vec<i64> = (0..dim).map(|_| rng.random_range(-3..=3i64)).collect();
        if c.iter().any(|&x| x != 0) {
            return c.into_iter().map(exact::q).collect();
        }
    }
}

/// `f₀⁰` must not vanish on the direction of any line of the lattice.
fn generic_f0(a: &Arrangement, f0: &LinearForm) -> bool {
    geometry::intersection_lattice(a)
        .iter()
        .filter(|e| e.dim() == 1)
        .all(|e| !f0.eval_dir(&e.flat.directions[0]).is_zero())
}

fn draw(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Generated {
    let n = cfg.dim;
    loop {
        let lo = if cfg.with_f0 { n } else { n + 1 };
        let p = rng.random_range(lo..=cfg.max_p.max(lo));
        let forms: Vec<LinearForm> = (0..p)
            .map(|_| if n == 1 { LinearForm::new(vec![exact::q(1)], rational(rng, 6)) } else { LinearForm::new(nonzero_coeffs(rng, n), rational(rng, 4)) })
            .collect();
        let weights: Vec<Complex64> = (0..p)
            .map(|_| Complex64::new(rng.random_range(0.3..=1.5), rng.random_range(-cfg.max_imag..=cfg.max_imag)))
            .collect();
        let f0 = LinearForm::new(nonzero_coeffs(rng, n), exact::q(rng.random_range(-2..=2i64)));
        let shift = (rng.random::<u32>(), rng.random::<u32>(), rng.random::<bool>());
        let Ok(a) = Arrangement::new(n, forms, weights) else { continue };
        if !generic_f0(&a, &f0) {
            continue;
        }
        let count = if cfg.with_f0 {
            chambers::chambers_with_f0(&a, &f0).map(|c| c.len()).unwrap_or(0)
        } else {
            chambers::bounded_chambers(&a).len()
        };
        if count == 0 {
            continue;
        }
        return Generated { arrangement: a, f0, shift };
    }
}

/// The instances for a configuration, in order; same seed, same list.
pub fn generate(cfg: &SuiteConfig) -> Vec<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.count).map(|_| draw(&mut rng, cfg)).collect()
}

fn injective(l: &nbc::Labelling) -> bool {
    let mut s: Vec<&Vec<i8>> = l.chambers.iter().map(|c| &c.signs).collect();
    s.sort();
    s.dedup();
    s.len() == l.chambers.len()
}

/// Exact counts: β, |βnbc(A)|, γ, |βnbc(A;f₀)|, both bijections and the
/// growing-domain count against `Σ vol(F)`.
pub fn combinatorics(a: &Arrangement, f0: &LinearForm) -> Result<Combinatorics, String> {
    let e = |x: hyperdet_core::Error| x.to_string();
    let classified = chambers::classify_with_f0(a, f0).map_err(e)?;
    let beta = classified.iter().filter(|c| c.kind == ChamberKind::Bounded).count();
    let gamma = classified.iter().filter(|c| c.kind != ChamberKind::Unbounded).count();
    let bnbc = nbc::bnbc_bases(a).len();
    let bnbc_f0 = nbc::bnbc_with_f0(a, f0).map_err(e)?.len();
    let bijection = nbc::chamber_bijection(a, None).map(|l| l.bases.len() == beta && injective(&l)).unwrap_or(false);
    let bijection_f0 = nbc::chamber_bijection(a, Some(f0)).map(|l| l.bases.len() == gamma && injective(&l)).unwrap_or(false);
    let (growing, volume) = chambers::verify_growing_count(a, f0).map_err(e)?;
    let generic = a.is_generic();
    let beta_generic = generic.then(|| exact::binomial(a.len() as i64 - 1, a.dim() as i64));
    let pass = bnbc == beta
        && bnbc_f0 == gamma
        && bijection
        && bijection_f0
        && growing == volume
        && beta_generic.is_none_or(|b| b == beta as u64);
    Ok(Combinatorics {
        hyperplanes: a.len(),
        generic,
        beta,
        bnbc,
        beta_generic,
        gamma,
        bnbc_f0,
        bijection,
        bijection_f0,
        growing,
        volume,
        pass,
    })
}

fn evaluate<E: Executor>(index: usize, g: &Generated, cfg: &SuiteConfig, settings: &Settings, exec: &E) -> InstanceReport {
    let a = &g.arrangement;
    let input = ArrangementDoc::from_instance(a, Some(&g.f0));
    let comb = match combinatorics(a, &g.f0) {
        Ok(c) => c,
        Err(error) => {
            let empty = Combinatorics {
                hyperplanes: a.len(),
                generic: a.is_generic(),
                beta: 0,
                bnbc: 0,
                beta_generic: None,
                gamma: 0,
                bnbc_f0: 0,
                bijection: false,
                bijection_f0: false,
                growing: 0,
                volume: 0,
                pass: false,
            };
            return InstanceReport { index, input, combinatorics: empty, deviation: None, covariance: None, error: Some(error), pass: false, fixture: None };
        }
    };
    let f0 = cfg.with_f0.then_some(&g.f0);
    let base = quadrature::verify(a, f0, &Options::default(), BetaReading::Relative, settings.tol, &settings.spec, exec);
    let base = match base {
        Ok(r) => r,
        Err(err) => {
            return InstanceReport { index, input, combinatorics: comb, deviation: None, covariance: None, error: Some(err.to_string()), pass: false, fixture: None };
        }
    };
    let mut error = None;
    let covariance = if cfg.branch_check {
        let chamber = g.shift.0 as usize % base.matrix.chambers.len();
        let hyperplane = g.shift.1 as usize % a.len();
        let k = if g.shift.2 { 1 } else { -1 };
        let opts = Options { branch_shifts: vec![(chamber, hyperplane, k)], ..Options::default() };
        match quadrature::verify(a, f0, &opts, BetaReading::Relative, settings.tol, &settings.spec, exec) {
            Ok(r) => {
                let change = (r.deviation - base.deviation).abs();
                Some(Covariance { chamber, hyperplane, k, deviation: r.deviation, change, pass: r.pass && change <= settings.tol })
            }
            Err(err) => {
                error = Some(err.to_string());
                None
            }
        }
    } else {
        None
    };
    let pass = comb.pass && base.pass && error.is_none() && covariance.as_ref().is_none_or(|c| c.pass);
    InstanceReport { index, input, combinatorics: comb, deviation: Some(base.deviation), covariance, error, pass, fixture: None }
}

pub fn run<E: Executor + Sync>(cfg: &SuiteConfig, settings: &Settings, exec: &E) -> SuiteReport {
    let instances = generate(cfg);
    let reports = exec.map(instances.len(), |k| evaluate(k, &instances[k], cfg, settings, exec));
    let passed = reports.iter().filter(|r| r.pass).count();
    let worst_deviation = reports.iter().filter_map(|r| r.deviation).fold(0.0, f64::max);
    SuiteReport {
        seed: cfg.seed,
        dim: cfg.dim,
        count: cfg.count,
        max_p: cfg.max_p,
        with_f0: cfg.with_f0,
        tolerance: settings.tol,
        passed,
        pass_rate: if reports.is_empty() { 1.0 } else { passed as f64 / reports.len() as f64 },
        worst_deviation,
        growing_count_exact: reports.iter().all(|r| r.combinatorics.growing == r.combinatorics.volume && r.error.is_none()),
        combinatorics_exact: reports.iter().all(|r| r.combinatorics.pass),
        pass: passed == reports.len(),
        instances: reports,
    }
}

/// Writes each failing instance as a fixture that `verify` reads directly.
pub fn dump_failures(report: &mut SuiteReport, dir: &Path) -> std::io::Result<()> {
    let mut made = false;
    for r in report.instances.iter_mut().filter(|r| !r.pass) {
        if !made {
            std::fs::create_dir_all(dir)?;
            made = true;
        }
        let path: PathBuf = dir.join(format!("seed{}_n{}_{}.json", report.seed, report.dim, r.index));
        let text = serde_json::to_string_pretty(&r.input).expect("serializable");
        std::fs::write(&path, text + "\n")?;
        r.fixture = Some(path.display().to_string());
    }
    Ok(())
}

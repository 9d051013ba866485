//! One function per subcommand. Each returns a JSON report and whether every
//! check it ran passed.

use std::fmt;

use hyperdet_core::chambers::{self, ChamberKind};
use hyperdet_core::closed_form::{self, CriticalPath};
use hyperdet_core::geometry::{self, LinearForm};
use hyperdet_core::quadrature::{self, BetaReading, Executor, Options, QuadratureSpec};
use hyperdet_core::selberg::{self, ExpReading, SelbergParams, SelbergReport};
use hyperdet_core::{forms, nbc, Error};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::report::{self, complex, matrix, point, real};
use crate::schema::{ArrangementDoc, InputError, Instance};

/// Settings shared by the numerical subcommands.
#[derive(Clone, Debug)]
pub struct Settings {
    /// Tolerance on the relative deviation of each check.
    pub tol: f64,
    pub spec: QuadratureSpec,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub pass: bool,
}

#[derive(Debug)]
pub enum CliError {
    Input(InputError),
    Compute { context: String, error: Error },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(e) => write!(f, "{e}"),
            CliError::Compute { context, error } => write!(f, "{context}: {error}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e)
    }
}

impl CliError {
    /// 2 for bad input, 1 for failures during the computation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute { error, .. } => match error {
                Error::InvalidInput(_)
                | Error::Empty
                | Error::DimensionMismatch { .. }
                | Error::ZeroForm { .. }
                | Error::DuplicateHyperplane { .. }
                | Error::NotEssential
                | Error::ConstantF0
                | Error::NonIntegrable { .. } => 2,
                _ => 1,
            },
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, context) = match self {
            CliError::Input(e) => (e.kind().to_string(), String::new()),
            CliError::Compute { context, error } => (error_kind(error).to_string(), context.clone()),
        };
        json!({"error": {"kind": kind, "context": context, "message": self.to_string()}})
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ZeroForm { .. } => "ZeroForm",
        Error::DuplicateHyperplane { .. } => "DuplicateHyperplane",
        Error::NotEssential => "NotEssential",
        Error::DimensionMismatch { .. } => "DimensionMismatch",
        Error::Empty => "Empty",
        Error::EdgeNotInLattice { .. } => "EdgeNotInLattice",
        Error::ConstantF0 => "ConstantF0",
        Error::NotGrowing { .. } => "NotGrowing",
        Error::TThreshold => "TThreshold",
        Error::BijectionFailure { .. } => "BijectionFailure",
        Error::DegenerateFlag { .. } => "DegenerateFlag",
        Error::PointOnHyperplane { .. } => "PointOnHyperplane",
        Error::Unbounded { .. } => "Unbounded",
        Error::UnboundedBelow { .. } => "UnboundedBelow",
        Error::GammaPole { .. } => "GammaPole",
        Error::NonIntegrable { .. } => "NonIntegrable",
        Error::MaxDepthExceeded { .. } => "MaxDepthExceeded",
        Error::OnSingularLocus => "OnSingularLocus",
        Error::InvalidInput(_) => "InvalidInput",
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn ctx(context: &str) -> impl FnOnce(Error) -> CliError + '_ {
    move |error| CliError::Compute { context: context.to_string(), error }
}

/// The `f0` of the document when `with_f0` is set.
pub fn pick_f0(inst: &Instance, with_f0: bool) -> CliResult<Option<&LinearForm>> {
    match (with_f0, &inst.f0) {
        (false, _) => Ok(None),
        (true, Some(f)) => Ok(Some(f)),
        (true, None) => Err(InputError::Schema("--with-f0 needs an \"f0\" member".into()).into()),
    }
}

fn bases_json(bases: &[nbc::Basis]) -> Value {
    Value::Array(bases.iter().map(|b| json!(b.indices)).collect())
}

fn labelling_json(l: &nbc::Labelling) -> Value {
    Value::Array(
        l.bases
            .iter()
            .zip(&l.chambers)
            .zip(&l.orientations)
            .map(|((b, c), o)| json!({"basis": b.indices, "chamber": c.signs, "orientation": o}))
            .collect(),
    )
}

fn injective(l: &nbc::Labelling) -> bool {
    let mut signs: Vec<&Vec<i8>> = l.chambers.iter().map(|c| &c.signs).collect();
    signs.sort();
    signs.dedup();
    let mut bases: Vec<&Vec<usize>> = l.bases.iter().map(|b| &b.indices).collect();
    bases.sort();
    bases.dedup();
    signs.len() == l.chambers.len() && bases.len() == l.bases.len()
}

fn check(name: &str, pass: bool, detail: Value) -> Value {
    json!({"name": name, "pass": pass, "detail": detail})
}

/// Chambers, lattice, discrete invariants, βnbc and the bijections.
pub fn analyze(inst: &Instance, with_f0: bool) -> CliResult<Outcome> {
    let a = &inst.arrangement;
    let f0 = pick_f0(inst, with_f0)?;
    let mut chambers = match f0 {
        Some(f) => chambers::classify_with_f0(a, f).map_err(ctx("classifying chambers"))?,
        None => chambers::enumerate_chambers(a),
    };
    chambers.sort_by(|x, y| x.signs.cmp(&y.signs));
    let bounded = chambers.iter().filter(|c| c.kind == ChamberKind::Bounded).count();
    let mut edges = Vec::new();
    for e in geometry::intersection_lattice(a) {
        let inv = chambers::discrete_invariants(a, &e).map_err(ctx(&format!("invariants of edge {:?}", e.indices)))?;
        edges.push(json!({
            "indices": e.indices, "dim": e.dim(), "point": point(&e.flat.point),
            "l": inv.l, "s": inv.s, "vol": inv.vol,
        }));
    }
    let bases = nbc::bnbc_bases(a);
    let lab = nbc::chamber_bijection(a, None).map_err(ctx("βnbc(A) bijection"))?;
    let mut checks = vec![
        check("|βnbc(A)| = β(A)", bases.len() == bounded, json!({"bases": bases.len(), "bounded": bounded})),
        check("bijection βnbc(A) → Ch(A) is injective", injective(&lab), Value::Null),
    ];
    if a.is_generic() {
        let expected = hyperdet_core::exact::binomial(a.len() as i64 - 1, a.dim() as i64);
        checks.push(check("β(A) = C(p−1, n)", bounded as u64 == expected, json!({"expected": expected})));
    }
    let mut doc = json!({
        "command": "analyze",
        "input": ArrangementDoc::from_instance(a, inst.f0.as_ref()),
        "dimension": a.dim(),
        "hyperplanes": a.len(),
        "generic": a.is_generic(),
        "chamber_count": chambers.len(),
        "beta": bounded,
        "chambers": chambers.iter().map(report::chamber).collect::<Vec<_>>(),
        "edges": edges,
        "bnbc": bases_json(&bases),
        "bijection": labelling_json(&lab),
    });
    if let Some(f) = f0 {
        let bases_f0 = nbc::bnbc_with_f0(a, f).map_err(ctx("βnbc(A;f0)"))?;
        let gamma = chambers.iter().filter(|c| c.kind != ChamberKind::Unbounded).count();
        let lab_f0 = nbc::chamber_bijection(a, Some(f)).map_err(ctx("βnbc(A;f0) bijection"))?;
        let (growing, volume) = chambers::verify_growing_count(a, f).map_err(ctx("growing-domain count"))?;
        let traces = chambers::growing_by_trace(a, f).map_err(ctx("traces at infinity"))?;
        checks.push(check("|βnbc(A;f0)| = γ(A)", bases_f0.len() == gamma, json!({"bases": bases_f0.len(), "gamma": gamma})));
        checks.push(check("bijection βnbc(A;f0) → Ch(A;f0) is injective", injective(&lab_f0), Value::Null));
        checks.push(check(
            "growing domains = Σ vol(F)",
            growing == volume,
            json!({"growing": growing, "volume": volume}),
        ));
        let by_trace = traces.iter().all(|t| t.growing == t.width);
        checks.push(check("growing domains per bounded trace face = s(F)", by_trace, Value::Null));
        doc["f0"] = json!({
            "gamma": gamma,
            "growing": growing,
            "volume_sum": volume,
            "bnbc": bases_json(&bases_f0),
            "bijection": labelling_json(&lab_f0),
            "traces": traces.iter().map(|t| json!({
                "signs": t.signs, "dim": t.dim, "edge": t.edge, "growing": t.growing, "width": t.width,
            })).collect::<Vec<_>>(),
        });
    }
    let pass = checks.iter().all(|c| c["pass"] == json!(true));
    doc["checks"] = Value::Array(checks);
    doc["pass"] = json!(pass);
    Ok(Outcome { report: doc, pass })
}

fn factors_json(fs: &[closed_form::GammaFactor]) -> Value {
    Value::Array(
        fs.iter()
            .map(|f| {
                json!({
                    "edge": f.indices, "at_infinity": f.at_infinity,
                    "argument": complex(f.argument), "exponent": f.exponent,
                })
            })
            .collect(),
    )
}

fn reading_name(r: BetaReading) -> &'static str {
    match r {
        BetaReading::Relative => "relative",
        BetaReading::Literal => "literal",
    }
}

/// The gamma factors of `B(A;α)` or `B(A;α;H₀)`.
pub fn beta(inst: &Instance, with_f0: bool, reading: BetaReading) -> CliResult<Outcome> {
    let a = &inst.arrangement;
    let factors = match pick_f0(inst, with_f0)? {
        None => closed_form::beta_factors(a),
        Some(f) => match reading {
            BetaReading::Relative => closed_form::beta_factors_relative(a, f),
            BetaReading::Literal => closed_form::beta_factors_literal(a, f),
        }
        .map_err(ctx("beta factors"))?,
    };
    let log = closed_form::log_factors(&factors).map_err(ctx("evaluating B"))?;
    let report = json!({
        "command": "beta",
        "reading": if with_f0 { reading_name(reading) } else { "plain" },
        "factors": factors_json(&factors),
        "log_value": complex(log),
        "value": complex(log.exp()),
        "pass": true,
    });
    Ok(Outcome { report, pass: true })
}

/// Critical values `c(A;α)` or `c(A;α;f₀)` on the default branches.
pub fn critical(inst: &Instance, with_f0: bool) -> CliResult<Outcome> {
    let a = &inst.arrangement;
    let f0 = pick_f0(inst, with_f0)?;
    let lab = nbc::chamber_bijection(a, f0).map_err(ctx("basis/chamber bijection"))?;
    let branches: Vec<_> = lab.chambers.iter().map(forms::branch).collect();
    let cp = closed_form::critical_product(a, &lab.chambers, &branches, f0).map_err(ctx("critical values"))?;
    let records: Vec<Value> = cp
        .records
        .iter()
        .map(|r| {
            json!({
                "chamber": r.chamber,
                "hyperplane": r.index,
                "path": match r.path { CriticalPath::Bounded => "bounded", CriticalPath::Trace => "trace" },
                "support": report::points(&r.support.vertices),
                "support_dim": r.support.dim,
                "modulus": report::rational(&r.support.value),
                "log_value": complex(r.log_value),
                "value": complex(r.value()),
            })
        })
        .collect();
    let supports: Vec<Value> = cp
        .f0_supports
        .iter()
        .map(|s| json!({"support": report::points(&s.vertices), "dim": s.dim, "min_f0": report::rational(&s.value)}))
        .collect();
    let report = json!({
        "command": "critical",
        "chambers": lab.chambers.iter().map(report::chamber).collect::<Vec<_>>(),
        "records": records,
        "f0_supports": supports,
        "log_value": complex(cp.log_value),
        "value": complex(cp.value()),
        "pass": true,
    });
    Ok(Outcome { report, pass: true })
}

fn pm_json(pm: &quadrature::PeriodMatrix) -> Value {
    json!({
        "bases": pm.bases,
        "chambers": pm.chambers.iter().map(|c| json!(c.signs)).collect::<Vec<_>>(),
        "orientations": pm.orientations,
        "entries": matrix(&pm.entries),
        "errors": pm.errors.iter().map(|r| r.iter().map(|&e| real(e)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn period_matrix<E: Executor>(
    inst: &Instance,
    with_f0: bool,
    options: &Options,
    settings: &Settings,
    exec: &E,
) -> CliResult<Outcome> {
    let a = &inst.arrangement;
    let f0 = pick_f0(inst, with_f0)?;
    let pm = quadrature::period_matrix(a, f0, options, &settings.spec, exec).map_err(ctx("period matrix"))?;
    let det = quadrature::determinant(&pm.entries, &pm.errors);
    let mut report = pm_json(&pm);
    report["command"] = json!("period-matrix");
    report["determinant"] = json!({"value": complex(det.value), "condition": real(det.condition), "error": real(det.error)});
    report["pass"] = json!(true);
    Ok(Outcome { report, pass: true })
}

/// `det PM = c·B` for one instance, with the period matrix in the report.
pub fn verify<E: Executor>(
    inst: &Instance,
    with_f0: bool,
    options: &Options,
    reading: BetaReading,
    convergence: bool,
    settings: &Settings,
    exec: &E,
) -> CliResult<Outcome> {
    let a = &inst.arrangement;
    let f0 = pick_f0(inst, with_f0)?;
    let r = quadrature::verify(a, f0, options, reading, settings.tol, &settings.spec, exec).map_err(ctx("verify"))?;
    let mut report = json!({
        "command": "verify",
        "theorem": if f0.is_some() { "det PM(A;α;f0) = c(A;α;f0)·B(A;α;H0)" } else { "det PM(A;α) = c(A;α)·B(A;α)" },
        "reading": reading_name(reading),
        "lhs": complex(r.lhs),
        "rhs": complex(r.rhs),
        "critical": complex(r.critical),
        "beta": complex(r.beta),
        "deviation": real(r.deviation),
        "tolerance": r.tolerance,
        "pass": r.pass,
        "determinant": {"condition": real(r.determinant.condition), "error": real(r.determinant.error)},
        "max_entry_error": real(r.max_entry_error),
        "matrix": pm_json(&r.matrix),
    });
    if convergence {
        if let Some(f) = f0 {
            let devs = quadrature::convergence_check(a, f, &[10, 40, 160], &settings.spec, exec)
                .map_err(ctx("convergence check"))?;
            let monotone = devs.windows(2).all(|w| w[1].1 < w[0].1);
            report["convergence"] = json!({
                "t": devs.iter().map(|d| d.0).collect::<Vec<_>>(),
                "max_abs_deviation": devs.iter().map(|d| real(d.1)).collect::<Vec<_>>(),
                "monotone": monotone,
            });
        }
    }
    Ok(Outcome { report, pass: r.pass })
}

/// Which Selberg statement `selberg-verify` checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelbergVariant {
    NoExp,
    NoExpSymmetric,
    Exp,
    CriticalNoExp,
    CriticalExp,
    Rectangular,
}

fn selberg_report_json(r: &SelbergReport) -> Value {
    json!({
        "rows": r.rows.iter().map(|c| json!(c.parts)).collect::<Vec<_>>(),
        "columns": r.columns.iter().map(|c| json!(c.parts)).collect::<Vec<_>>(),
        "entries": matrix(&r.entries),
        "lhs": complex(r.lhs),
        "rhs": complex(r.rhs),
        "deviation": real(r.deviation),
        "determinant": {"condition": real(r.determinant.condition), "error": real(r.determinant.error)},
    })
}

fn exp_reading_name(r: ExpReading) -> &'static str {
    match (r.pi_factor, r.weighted_power) {
        (false, false) => "corrected",
        (true, true) => "printed",
        (true, false) => "printed-pi",
        (false, true) => "printed-power",
    }
}

pub fn selberg_verify<E: Executor>(
    params: &SelbergParams,
    variant: SelbergVariant,
    reading: ExpReading,
    settings: &Settings,
    exec: &E,
) -> CliResult<Outcome> {
    let tol = settings.tol;
    let spec = &settings.spec;
    let mut report = match variant {
        SelbergVariant::NoExp | SelbergVariant::NoExpSymmetric => {
            let sym = variant == SelbergVariant::NoExpSymmetric;
            let r = selberg::determinant_no_exp(params, sym, spec, exec).map_err(ctx("Selberg determinant"))?;
            let mut v = selberg_report_json(&r);
            v["pass"] = json!(r.deviation <= tol);
            v
        }
        SelbergVariant::Exp => {
            let r = selberg::determinant_exp(params, reading, spec, exec).map_err(ctx("Selberg determinant"))?;
            let mut v = selberg_report_json(&r);
            v["pass"] = json!(r.deviation <= tol);
            v["reading"] = json!(exp_reading_name(reading));
            let other = if reading == ExpReading::CORRECTED { ExpReading::PRINTED } else { ExpReading::CORRECTED };
            let rhs = selberg::ln_rhs_exp(params, other).map_err(ctx("closed form"))?.exp();
            v["alternative"] = json!({
                "reading": exp_reading_name(other),
                "rhs": complex(rhs),
                "deviation": real(quadrature::relative_deviation(r.lhs, rhs)),
            });
            v
        }
        SelbergVariant::CriticalNoExp | SelbergVariant::CriticalExp => {
            let c = if variant == SelbergVariant::CriticalNoExp {
                selberg::critical_products_no_exp(params)
            } else {
                selberg::critical_products_exp(params, reading)
            }
            .map_err(ctx("critical products"))?;
            let mut v = json!({
                "closed": complex(c.closed),
                "critical": complex(c.critical),
                "deviation": real(c.deviation),
                "pass": c.deviation <= tol,
            });
            if variant == SelbergVariant::CriticalExp {
                v["reading"] = json!(exp_reading_name(reading));
            }
            v
        }
        SelbergVariant::Rectangular => {
            let ls = selberg::compositions(params.n, params.p());
            let pairs: Vec<(usize, usize)> = (0..ls.len()).flat_map(|i| (0..ls.len()).map(move |j| (i, j))).collect();
            let results = exec.map(pairs.len(), |k| selberg::rectangular_to_triangular(&ls[pairs[k].0], &ls[pairs[k].1], params, spec));
            let mut rows = Vec::new();
            let mut worst: f64 = 0.0;
            for (&(i, j), r) in pairs.iter().zip(results) {
                let r = r.map_err(ctx(&format!("box integral l={:?} m={:?}", ls[i].parts, ls[j].parts)))?;
                worst = worst.max(r.deviation);
                rows.push(json!({
                    "l": ls[i].parts, "m": ls[j].parts,
                    "box": complex(r.box_integral.value),
                    "factor": complex(r.factor),
                    "triangular": complex(r.triangular.value),
                    "deviation": real(r.deviation),
                }));
            }
            json!({"pairs": rows, "deviation": real(worst), "pass": worst <= tol})
        }
    };
    let pass = report["pass"] == json!(true);
    report["command"] = json!("selberg-verify");
    report["tolerance"] = json!(tol);
    report["parameters"] = json!({
        "n": params.n,
        "z": params.z.iter().map(report::rational).collect::<Vec<_>>(),
        "alpha": params.alpha.iter().map(|&x| complex(x)).collect::<Vec<_>>(),
        "gamma": complex(params.gamma),
        "a": complex(params.a),
    });
    Ok(Outcome { report, pass })
}

/// Complex numbers written `x`, `x+yi`, `x-yi` or `yi`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot read {s:?} as a complex number");
    if let Some(body) = t.strip_suffix('i') {
        let split = body.char_indices().skip(1).filter(|&(k, c)| (c == '+' || c == '-') && !body[..k].ends_with(['e', 'E'])).last();
        let (re, im) = match split {
            Some((k, _)) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => x.parse::<f64>().map_err(|_| bad())?,
        };
        Ok(Complex64::new(re.parse::<f64>().map_err(|_| bad())?, im))
    } else {
        Ok(Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_numbers() {
        assert_eq!(parse_complex("0.6").unwrap(), Complex64::new(0.6, 0.0));
        assert_eq!(parse_complex("0.6+0.2i").unwrap(), Complex64::new(0.6, 0.2));
        assert_eq!(parse_complex("1e-1-2e-1i").unwrap(), Complex64::new(0.1, -0.2));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("2.5i").unwrap(), Complex64::new(0.0, 2.5));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Input(InputError::Parse(String::new())).exit_code(), 2);
        let e = |error| CliError::Compute { context: String::new(), error };
        assert_eq!(e(Error::NotEssential).exit_code(), 2);
        assert_eq!(e(Error::GammaPole { argument: (0.0, 0.0), context: String::new() }).exit_code(), 1);
        let m = e(Error::MaxDepthExceeded { estimate: 0.0, error: 1.0, context: String::new() });
        assert_eq!(m.exit_code(), 1);
        assert_eq!(m.to_json()["error"]["kind"], "MaxDepthExceeded");
    }
}

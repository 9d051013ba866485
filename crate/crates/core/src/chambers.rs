//! Chambers of an arrangement, their classification relative to `f0`, traces at
//! infinity and the discrete length/width/volume of edges.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{
    self, AffineArrangement, Arrangement, Edge, Flat, LinearForm, ProjectiveArrangement,
    ProjectiveEdge, TraceArrangement,
};
use crate::polyhedron::{self, Polyhedron};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChamberKind {
    Bounded,
    Growing,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chamber {
    pub signs: Vec<i8>,
    pub point: Vec<Rational>,
    pub vertices: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Rational>>,
    pub kind: ChamberKind,
}

impl Chamber {
    pub fn is_bounded(&self) -> bool {
        self.kind == ChamberKind::Bounded
    }

    /// Closure as `{σ_i f_i ≥ 0}`.
    pub fn polyhedron(&self, a: &Arrangement) -> Polyhedron {
        Polyhedron::new(a.dim(), polyhedron::oriented(a.forms(), &self.signs))
    }

    /// `σ_i f_i`, positive on the chamber.
    pub fn oriented_form(&self, a: &Arrangement, i: usize) -> LinearForm {
        if self.signs[i] > 0 {
            a.form(i).clone()
        } else {
            a.form(i).negated()
        }
    }
}

/// All chambers, ordered lexicographically by sign vector.
pub fn enumerate_chambers(a: &Arrangement) -> Vec<Chamber> {
    polyhedron::sign_cells(a.forms(), a.dim())
        .into_iter()
        .map(|(signs, point)| {
            let p = Polyhedron::new(a.dim(), polyhedron::oriented(a.forms(), &signs));
            let vertices = p.vertices();
            let rays = p.rays();
            let kind = if rays.is_empty() { ChamberKind::Bounded } else { ChamberKind::Unbounded };
            Chamber { signs, point, vertices, rays, kind }
        })
        .collect()
}

/// `Ch(A)`.
pub fn bounded_chambers(a: &Arrangement) -> Vec<Chamber> {
    enumerate_chambers(a).into_iter().filter(Chamber::is_bounded).collect()
}

/// Whether a chamber with these extreme rays is growing: `f₀⁰ > 0` on every ray.
pub fn is_growing(rays: &[Vec<Rational>], f0: &LinearForm) -> bool {
    !rays.is_empty() && rays.iter().all(|r| f0.eval_dir(r).is_positive())
}

/// Chambers tagged bounded, growing or other-unbounded.
pub fn classify_with_f0(a: &Arrangement, f0: &LinearForm) -> Result<Vec<Chamber>> {
    if f0.is_constant() {
        return Err(Error::ConstantF0);
    }
    Ok(enumerate_chambers(a)
        .into_iter()
        .map(|mut c| {
            if c.kind == ChamberKind::Unbounded && is_growing(&c.rays, f0) {
                c.kind = ChamberKind::Growing;
            }
            c
        })
        .collect())
}

/// `Ch(A;f₀)`: bounded and growing chambers.
pub fn chambers_with_f0(a: &Arrangement, f0: &LinearForm) -> Result<Vec<Chamber>> {
    Ok(classify_with_f0(a, f0)?.into_iter().filter(|c| c.kind != ChamberKind::Unbounded).collect())
}

/// `tr(Δ)`: the recession cone cut by `f₀⁰ = 1`, in the chart of the trace
/// arrangement, together with the sign vector of its relative interior with
/// respect to the (merged) trace hyperplanes.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceFace {
    pub vertices: Vec<Vec<Rational>>,
    pub signs: Vec<i8>,
    pub dim: usize,
}

pub fn trace_of_chamber(a: &Arrangement, c: &Chamber, index: usize, f0: &LinearForm) -> Result<TraceFace> {
    if !is_growing(&c.rays, f0) {
        return Err(Error::NotGrowing { chamber: index });
    }
    let tr = geometry::trace_at_infinity(a, f0)?;
    Ok(trace_face(&tr, &c.rays, f0))
}

fn trace_face(tr: &TraceArrangement, rays: &[Vec<Rational>], f0: &LinearForm) -> TraceFace {
    let mut vertices: Vec<Vec<Rational>> = rays
        .iter()
        .map(|r| {
            let d = exact::scale(r, &(Rational::one() / f0.eval_dir(r)));
            tr.coordinates(&d).expect("normalized ray lies on the chart")
        })
        .collect();
    vertices.sort();
    vertices.dedup();
    let refs: Vec<&[Rational]> = vertices.iter().map(|v| v.as_slice()).collect();
    let dim = exact::affine_dim(&refs) as usize;
    let centroid = polyhedron::Face { vertices: vertices.clone(), dim }.centroid();
    let signs = tr.arrangement.forms.iter().map(|h| exact::sign(&h.eval(&centroid))).collect();
    TraceFace { vertices, signs, dim }
}

/// Discrete length, width and volume of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscreteInvariants {
    pub l: usize,
    pub s: usize,
    pub vol: usize,
}

impl DiscreteInvariants {
    fn new(l: usize, s: usize) -> Self {
        Self { l, s, vol: l * s }
    }
}

/// Invariants of an affine edge: `l` counts bounded chambers of the section on
/// `F`, `s` is the discrete length of the projective normal arrangement.
pub fn discrete_invariants(a: &Arrangement, f: &Edge) -> Result<DiscreteInvariants> {
    let normal = geometry::projective_normal_arrangement(a, f)?;
    let l = geometry::section(&a.as_affine(), &f.flat).bounded_chamber_count();
    let l = if f.dim() == 0 { 1 } else { l };
    Ok(DiscreteInvariants::new(l, normal.discrete_length()))
}

/// Invariants of an edge of the projectivization (used for edges at infinity).
pub fn projective_invariants(pa: &ProjectiveArrangement, f: &ProjectiveEdge) -> DiscreteInvariants {
    DiscreteInvariants::new(pa.length(f), pa.width(f))
}

/// Edge of `Ā` with the given full index set (the infinity index is `p`).
pub fn projective_edge(pa: &ProjectiveArrangement, indices: &[usize]) -> Result<ProjectiveEdge> {
    pa.edges()
        .find(|e| e.indices == indices)
        .cloned()
        .ok_or_else(|| Error::EdgeNotInLattice { indices: indices.to_vec() })
}

/// Whether a projective edge lies in `H̄₀`.
pub fn inside_h0(f0: &LinearForm, e: &ProjectiveEdge) -> bool {
    let h = geometry::homogenize(f0);
    e.basis.iter().all(|b| exact::dot(&h, b).is_zero())
}

/// Invariants of an edge at infinity not contained in `H̄₀`, with the length
/// taken relative to `H̄₀ ∩ F`: it counts the bounded faces of the trace
/// arrangement generating `F`.
pub fn relative_invariants(pa: &ProjectiveArrangement, f: &ProjectiveEdge, f0: &LinearForm) -> DiscreteInvariants {
    let width = pa.width(f);
    if f.basis.len() <= 1 {
        return DiscreteInvariants::new(1, width);
    }
    let h = geometry::homogenize(f0);
    let h_on_f: Vec<Rational> = f.basis.iter().map(|b| exact::dot(&h, b)).collect();
    let section = pa.central.section(&f.basis);
    let with_h0 = geometry::CentralArrangement::merging(
        f.basis.len(),
        core::iter::once((h_on_f, usize::MAX))
            .chain(section.forms.iter().cloned().zip(section.origins.iter().map(|o| o[0]))),
    );
    DiscreteInvariants::new(with_h0.discrete_length_at(0), width)
}

/// Number of growing chambers and `Σ vol(F)` over edges at infinity not in `H̄₀`.
pub fn verify_growing_count(a: &Arrangement, f0: &LinearForm) -> Result<(usize, usize)> {
    let growing = classify_with_f0(a, f0)?.iter().filter(|c| c.kind == ChamberKind::Growing).count();
    let pa = geometry::projectivize(a);
    let volume = pa
        .edges_at_infinity
        .iter()
        .filter(|e| !inside_h0(f0, e))
        .map(|e| relative_invariants(&pa, e, f0).vol)
        .sum();
    Ok((growing, volume))
}

/// One bounded face of the trace arrangement with the number of growing
/// chambers whose trace it is and its discrete width.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceFaceCount {
    pub signs: Vec<i8>,
    pub dim: usize,
    pub edge: Vec<usize>,
    pub growing: usize,
    pub width: usize,
}

/// Bounded faces of an affine arrangement, as (sign vector, relative-interior
/// point, dimension). Faces of every dimension are listed.
pub fn bounded_faces(arr: &AffineArrangement) -> Vec<(Vec<i8>, Vec<Rational>, usize)> {
    let mut out = Vec::new();
    let mut flats: Vec<Flat> = vec![Flat::whole(arr.dim)];
    flats.extend(geometry::affine_lattice(arr).into_iter().map(|e| e.flat));
    for flat in flats {
        let off: Vec<usize> = (0..arr.len()).filter(|&k| !arr.forms[k].vanishes_on(&flat)).collect();
        let restricted: Vec<LinearForm> = off.iter().map(|&k| arr.forms[k].restrict(&flat)).collect();
        for (cell, y) in polyhedron::sign_cells(&restricted, flat.dim()) {
            let oriented = polyhedron::oriented(&restricted, &cell);
            if !Polyhedron::new(flat.dim(), oriented).is_bounded() {
                continue;
            }
            let mut signs = vec![0i8; arr.len()];
            for (&k, &s) in off.iter().zip(&cell) {
                signs[k] = s;
            }
            out.push((signs, flat.at(&y), flat.dim()));
        }
    }
    out
}

/// Groups growing chambers by their trace and pairs each bounded face at
/// infinity with the discrete width of the smallest edge containing it.
pub fn growing_by_trace(a: &Arrangement, f0: &LinearForm) -> Result<Vec<TraceFaceCount>> {
    let tr = geometry::trace_at_infinity(a, f0)?;
    let pa = geometry::projectivize(a);
    let traces: Vec<TraceFace> = classify_with_f0(a, f0)?
        .iter()
        .filter(|c| c.kind == ChamberKind::Growing)
        .map(|c| trace_face(&tr, &c.rays, f0))
        .collect();
    let mut out = Vec::new();
    for (signs, y, dim) in bounded_faces(&tr.arrangement) {
        let d = tr.chart.at(&y);
        let mut indices: Vec<usize> = (0..a.len()).filter(|&i| a.form(i).eval_dir(&d).is_zero()).collect();
        indices.push(pa.infinity_index());
        let e = projective_edge(&pa, &indices)?;
        let growing = traces.iter().filter(|t| t.signs == signs).count();
        out.push(TraceFaceCount { signs, dim, edge: indices, growing, width: pa.width(&e) });
    }
    Ok(out)
}

/// `A_t = A ∪ {H_t}` with `H_t` first in the order, given by `1 − f₀/t`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub arrangement: Arrangement,
    pub t: Rational,
    /// `(bounded chamber of A_t, chamber of A)` pairs, by sign vector.
    pub pairs: Vec<(Vec<i8>, Vec<i8>)>,
}

pub fn truncate(a: &Arrangement, f0: &LinearForm, t: &Rational, weight: Complex64) -> Result<Truncation> {
    if f0.is_constant() {
        return Err(Error::ConstantF0);
    }
    let max = geometry::vertices(a)
        .iter()
        .map(|v| f0.eval(&v.flat.point))
        .max()
        .expect("essential arrangement has a vertex");
    if t <= &max || t.is_zero() {
        return Err(Error::TThreshold);
    }
    let inv = Rational::one() / t;
    let ht = LinearForm::new(exact::scale(&f0.coeffs, &-inv.clone()), Rational::one() - &f0.constant * &inv);
    let mut forms = vec![ht];
    forms.extend(a.forms().iter().cloned());
    let mut weights = vec![weight];
    weights.extend_from_slice(a.weights());
    let at = Arrangement::new(a.dim(), forms, weights)?;
    let pairs = bounded_chambers(&at).into_iter().map(|c| (c.signs.clone(), c.signs[1..].to_vec())).collect();
    Ok(Truncation { arrangement: at, t: t.clone(), pairs })
}

/// Truncation level used by default: one above the largest vertex value and
/// at least 1, so that `H_t` is well defined.
pub fn default_threshold(a: &Arrangement, f0: &LinearForm) -> Rational {
    let max = geometry::vertices(a).iter().map(|v| f0.eval(&v.flat.point)).max().expect("vertex");
    max.max(Rational::zero()) + Rational::one()
}

/// Number of chambers of `p` generic hyperplanes in dimension `n`.
pub fn chamber_count_generic(p: usize, n: usize) -> u64 {
    (0..=n).map(|k| exact::binomial(p as i64, k as i64)).sum()
}

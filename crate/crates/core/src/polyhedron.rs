//! Exact polyhedra cut out by affine inequalities.
//!
//! Strict feasibility is decided by Fourier–Motzkin elimination with
//! back-substitution, which also produces a rational interior point. Vertices
//! and extreme rays come from brute force over constraint subsets; at the
//! sizes handled here (a handful of hyperplanes in dimension ≤ 4) this is
//! both simple and fast.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::exact::{self, Rational};
use crate::geometry::{Flat, LinearForm};

fn normalize_positive(f: &LinearForm) -> LinearForm {
    match f.coeffs.iter().chain(core::iter::once(&f.constant)).find(|c| !c.is_zero()) {
        Some(lead) => f.scaled(&(Rational::one() / lead.abs())),
        None => f.clone(),
    }
}

/// A point `x` with `g(x) > 0` for every form, or `None`.
pub fn strictly_feasible(forms: &[LinearForm], dim: usize) -> Option<Vec<Rational>> {
    let mut cons: Vec<LinearForm> = Vec::new();
    for f in forms {
        let g = normalize_positive(f);
        if !cons.contains(&g) {
            cons.push(g);
        }
    }
    if dim == 0 {
        return cons.iter().all(|g| g.constant.is_positive()).then(Vec::new);
    }
    let last = dim - 1;
    let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for g in cons {
        let a = g.coeffs[last].clone();
        let mut h = LinearForm::new(g.coeffs[..last].to_vec(), g.constant.clone());
        if a.is_zero() {
            rest.push(h);
        } else {
            // x_last > -(h)/a  (a > 0)   or   x_last < h/(-a)  (a < 0)
            h = h.scaled(&(Rational::one() / a.abs()));
            if a.is_positive() {
                lower.push(h.negated());
            } else {
                upper.push(h);
            }
        }
    }
    let mut reduced = rest.clone();
    for l in &lower {
        for u in &upper {
            reduced.push(LinearForm::new(exact::sub(&u.coeffs, &l.coeffs), &u.constant - &l.constant));
        }
    }
    let mut x = strictly_feasible(&reduced, last)?;
    let lo = lower.iter().map(|l| l.eval(&x)).max();
    let hi = upper.iter().map(|u| u.eval(&x)).min();
    let v = match (lo, hi) {
        (Some(l), Some(h)) => (l + h) / exact::q(2),
        (Some(l), None) => l + Rational::one(),
        (None, Some(h)) => h - Rational::one(),
        (None, None) => Rational::zero(),
    };
    x.push(v);
    Some(x)
}

/// Strict feasibility inside a flat: a point of `flat` where all forms are positive.
pub fn strictly_feasible_on(forms: &[LinearForm], flat: &Flat) -> Option<Vec<Rational>> {
    let restricted: Vec<LinearForm> = forms.iter().map(|f| f.restrict(flat)).collect();
    strictly_feasible(&restricted, flat.dim()).map(|y| flat.at(&y))
}

/// Sign cells of the complement of the hyperplanes `forms = 0`, each with an
/// interior point, sorted lexicographically by sign vector (−1 before +1).
pub fn sign_cells(forms: &[LinearForm], dim: usize) -> Vec<(Vec<i8>, Vec<Rational>)> {
    let mut cells: Vec<Vec<i8>> = vec![Vec::new()];
    for k in 0..forms.len() {
        let mut next = Vec::new();
        for s in cells {
            for sign in [-1i8, 1] {
                let mut t = s.clone();
                t.push(sign);
                let cons: Vec<LinearForm> = forms[..=k]
                    .iter()
                    .zip(&t)
                    .map(|(f, &g)| if g > 0 { f.clone() } else { f.negated() })
                    .collect();
                if strictly_feasible(&cons, dim).is_some() {
                    next.push(t);
                }
            }
        }
        cells = next;
    }
    let mut out: Vec<(Vec<i8>, Vec<Rational>)> = cells
        .into_iter()
        .map(|s| {
            let cons = oriented(forms, &s);
            let x = strictly_feasible(&cons, dim).expect("cell is feasible");
            (s, x)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// `σ_i f_i` for a sign vector.
pub fn oriented(forms: &[LinearForm], signs: &[i8]) -> Vec<LinearForm> {
    forms
        .iter()
        .zip(signs)
        .map(|(f, &s)| if s > 0 { f.clone() } else { f.negated() })
        .collect()
}

/// Number of bounded cells. A 0-dimensional space is one bounded cell.
pub fn bounded_cell_count(forms: &[LinearForm], dim: usize) -> usize {
    if dim == 0 {
        return 1;
    }
    sign_cells(forms, dim)
        .into_iter()
        .filter(|(s, _)| Polyhedron::new(dim, oriented(forms, s)).is_bounded())
        .count()
}

/// `{x : g(x) ≥ 0 for every constraint}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyhedron {
    pub dim: usize,
    pub constraints: Vec<LinearForm>,
}

impl Polyhedron {
    pub fn new(dim: usize, constraints: Vec<LinearForm>) -> Self {
        Self { dim, constraints }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|g| !g.eval(x).is_negative())
    }

    pub fn contains_direction(&self, d: &[Rational]) -> bool {
        self.constraints.iter().all(|g| !g.eval_dir(d).is_negative())
    }

    /// No lineality space.
    pub fn is_pointed(&self) -> bool {
        let rows: Vec<Vec<Rational>> = self.constraints.iter().map(|g| g.coeffs.clone()).collect();
        exact::rank(&rows, self.dim) == self.dim
    }

    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        let mut out: Vec<Vec<Rational>> = Vec::new();
        if self.dim == 0 {
            if self.contains(&[]) {
                out.push(Vec::new());
            }
            return out;
        }
        for subset in exact::subsets(self.constraints.len(), self.dim) {
            let a: Vec<Vec<Rational>> = subset.iter().map(|&k| self.constraints[k].coeffs.clone()).collect();
            let b: Vec<Rational> = subset.iter().map(|&k| -self.constraints[k].constant.clone()).collect();
            let Some((x, ker)) = exact::solve_affine(&a, &b, self.dim) else {
                continue;
            };
            if ker.is_empty() && self.contains(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
        out.sort();
        out
    }

    /// Extreme rays of the recession cone (pointed case), normalized so that the
    /// first nonzero entry has absolute value one.
    pub fn rays(&self) -> Vec<Vec<Rational>> {
        let mut out: Vec<Vec<Rational>> = Vec::new();
        if self.dim == 0 {
            return out;
        }
        if self.dim == 1 {
            for r in [vec![Rational::one()], vec![-Rational::one()]] {
                if self.contains_direction(&r) {
                    out.push(r);
                }
            }
            return out;
        }
        for subset in exact::subsets(self.constraints.len(), self.dim - 1) {
            let rows: Vec<Vec<Rational>> = subset.iter().map(|&k| self.constraints[k].coeffs.clone()).collect();
            let ker = exact::kernel(&rows, self.dim);
            if ker.len() != 1 {
                continue;
            }
            for r in [ker[0].clone(), exact::scale(&ker[0], &-Rational::one())] {
                let r = exact::normalize_abs_first(&r);
                if self.contains_direction(&r) && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        out.sort();
        out
    }

    /// Pointed with no extreme rays.
    pub fn is_bounded(&self) -> bool {
        self.dim == 0 || (self.is_pointed() && self.rays().is_empty())
    }

    /// Indices of constraints vanishing at every point of a vertex set.
    pub fn tight(&self, vertices: &[Vec<Rational>]) -> Vec<usize> {
        (0..self.constraints.len())
            .filter(|&k| vertices.iter().all(|v| self.constraints[k].eval(v).is_zero()))
            .collect()
    }
}

/// A face of a polytope, stored as its vertex set.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub vertices: Vec<Vec<Rational>>,
    pub dim: usize,
}

impl Face {
    pub fn centroid(&self) -> Vec<Rational> {
        let n = exact::q(self.vertices.len() as i64);
        let mut c = vec![Rational::zero(); self.vertices[0].len()];
        for v in &self.vertices {
            c = exact::add(&c, v);
        }
        exact::scale(&c, &(Rational::one() / n))
    }
}

fn face_dim(vs: &[Vec<Rational>]) -> isize {
    let refs: Vec<&[Rational]> = vs.iter().map(|v| v.as_slice()).collect();
    exact::affine_dim(&refs)
}

/// Maximal proper faces of `face` inside the polytope `p`.
pub fn facets_of(p: &Polyhedron, face: &Face) -> Vec<Face> {
    let mut out: Vec<Face> = Vec::new();
    if face.dim == 0 {
        return out;
    }
    for g in &p.constraints {
        let vs: Vec<Vec<Rational>> = face.vertices.iter().filter(|v| g.eval(v).is_zero()).cloned().collect();
        if vs.is_empty() || vs.len() == face.vertices.len() {
            continue;
        }
        if face_dim(&vs) == face.dim as isize - 1 && !out.iter().any(|f| f.vertices == vs) {
            out.push(Face { vertices: vs, dim: face.dim - 1 });
        }
    }
    out
}

/// All complete flags `F_0 ⊂ F_1 ⊂ … ⊂ F_d = P` of a full-dimensional polytope,
/// listed from the vertex upward.
pub fn complete_flags(p: &Polyhedron) -> Vec<Vec<Face>> {
    let top = Face { vertices: p.vertices(), dim: p.dim };
    let mut out = Vec::new();
    let mut chain = vec![top];
    fn rec(p: &Polyhedron, chain: &mut Vec<Face>, out: &mut Vec<Vec<Face>>) {
        let last = chain.last().expect("nonempty chain").clone();
        if last.dim == 0 {
            let mut c = chain.clone();
            c.reverse();
            out.push(c);
            return;
        }
        for f in facets_of(p, &last) {
            chain.push(f);
            rec(p, chain, out);
            chain.pop();
        }
    }
    rec(p, &mut chain, &mut out);
    out
}

/// Exact convex-hull membership via Carathéodory: `x` is a convex combination
/// of at most `d + 1` affinely independent vertices.
pub fn in_convex_hull(x: &[Rational], vs: &[Vec<Rational>]) -> bool {
    let dim = x.len();
    for k in 1..=(dim + 1).min(vs.len()) {
        for subset in exact::subsets(vs.len(), k) {
            let mut a: Vec<Vec<Rational>> = (0..dim).map(|r| subset.iter().map(|&i| vs[i][r].clone()).collect()).collect();
            a.push(vec![Rational::one(); k]);
            let mut b = x.to_vec();
            b.push(Rational::one());
            if let Some((lam, ker)) = exact::solve_affine(&a, &b, k) {
                if ker.is_empty() && lam.iter().all(|l| !l.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use proptest::prelude::*;

    fn lf(c: &[i64], k: i64) -> LinearForm {
        LinearForm::from_ints(c, k)
    }

    #[test]
    fn feasibility() {
        let tri = [lf(&[1, 0], 0), lf(&[0, 1], 0), lf(&[-1, -1], 2)];
        let x = strictly_feasible(&tri, 2).unwrap();
        assert!(tri.iter().all(|g| g.eval(&x) > Rational::zero()));
        let empty = [lf(&[1], 0), lf(&[-1], 0)];
        assert!(strictly_feasible(&empty, 1).is_none());
        let thin = [lf(&[1, 0], 0), lf(&[-1, 0], 0), lf(&[0, 1], 0)];
        assert!(strictly_feasible(&thin, 2).is_none());
    }

    #[test]
    fn cells_and_vertices() {
        let lines = [lf(&[1, 0], 0), lf(&[0, 1], 0), lf(&[1, 1], -2)];
        let cells = sign_cells(&lines, 2);
        assert_eq!(cells.len(), 7);
        assert_eq!(bounded_cell_count(&lines, 2), 1);
        let tri = Polyhedron::new(2, oriented(&lines, &[1, 1, -1]));
        assert_eq!(tri.vertices(), vec![vec![q(0), q(0)], vec![q(0), q(2)], vec![q(2), q(0)]]);
        assert!(tri.is_bounded());
        let quad = Polyhedron::new(2, oriented(&lines, &[1, 1, 1]));
        assert_eq!(quad.rays().len(), 2);
        assert_eq!(complete_flags(&tri).len(), 6);
    }

    #[test]
    fn hull_membership() {
        let vs = vec![vec![q(0), q(0)], vec![q(2), q(0)], vec![q(0), q(2)]];
        assert!(in_convex_hull(&[q(1), q(1)], &vs));
        assert!(!in_convex_hull(&[q(2), q(1)], &vs));
    }

    proptest! {
        #[test]
        fn generic_lines_cell_count(cs in proptest::collection::vec((-5i64..=5, -5i64..=5, -6i64..=6), 1..5)) {
            let forms: Vec<LinearForm> = cs.iter().map(|&(a, b, c)| lf(&[a, b], c)).collect();
            prop_assume!(forms.iter().all(|f| !f.is_constant()));
            let generic = (0..forms.len()).all(|i| (0..i).all(|j| {
                exact::rank(&[forms[i].coeffs.clone(), forms[j].coeffs.clone()], 2) == 2
            })) && exact::subsets(forms.len(), 3).iter().all(|s| {
                let fs: Vec<&LinearForm> = s.iter().map(|&i| &forms[i]).collect();
                Flat::intersection(&fs, 2).is_none()
            });
            prop_assume!(generic);
            let p = forms.len() as i64;
            let expected = 1 + p + exact::binomial(p, 2) as i64;
            let cells = sign_cells(&forms, 2);
            prop_assert_eq!(cells.len() as i64, expected);
            for (s, x) in &cells {
                for (f, &g) in forms.iter().zip(s) {
                    prop_assert_eq!(exact::sign(&f.eval(x)), g);
                }
            }
            prop_assert_eq!(bounded_cell_count(&forms, 2) as u64, exact::binomial(p - 1, 2));
        }
    }
}

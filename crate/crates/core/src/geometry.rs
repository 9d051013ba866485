//! Affine linear forms, weighted arrangements and the lattice of their edges.
//!
//! Everything here is exact. A form is `f(x) = f⁰·x + c` with rational
//! coefficients; an arrangement keeps its hyperplanes in input order, which is
//! also the linear order used by the broken-circuit machinery.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>, constant: Rational) -> Self {
        Self { coeffs, constant }
    }

    /// `Σ c_k x_k + c0` from small integers.
    pub fn from_ints(coeffs: &[i64], constant: i64) -> Self {
        Self::new(coeffs.iter().map(|&c| exact::q(c)).collect(), exact::q(constant))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_constant(&self) -> bool {
        exact::is_zero_vec(&self.coeffs)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        exact::dot(&self.coeffs, x) + &self.constant
    }

    /// Value of the homogeneous part on a direction vector.
    pub fn eval_dir(&self, d: &[Rational]) -> Rational {
        exact::dot(&self.coeffs, d)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .zip(x)
            .fold(exact::to_f64(&self.constant), |acc, (c, v)| acc + exact::to_f64(c) * v)
    }

    /// Coefficients followed by the constant.
    pub fn as_vector(&self) -> Vec<Rational> {
        let mut v = self.coeffs.clone();
        v.push(self.constant.clone());
        v
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        Self::new(exact::scale(&self.coeffs, s), &self.constant * s)
    }

    pub fn negated(&self) -> Self {
        self.scaled(&-Rational::one())
    }

    /// The same hyperplane (nonzero multiple, either sign).
    pub fn same_hyperplane(&self, other: &Self) -> bool {
        exact::proportional(&self.as_vector(), &other.as_vector())
    }

    /// Pull-back along `y ↦ flat.point + Σ y_k flat.directions[k]`.
    pub fn restrict(&self, flat: &Flat) -> Self {
        Self::new(
            flat.directions.iter().map(|d| self.eval_dir(d)).collect(),
            self.eval(&flat.point),
        )
    }

    /// True when the form vanishes identically on the flat.
    pub fn vanishes_on(&self, flat: &Flat) -> bool {
        self.eval(&flat.point).is_zero() && flat.directions.iter().all(|d| self.eval_dir(d).is_zero())
    }
}

/// An affine subspace `point + span(directions)` with independent directions.
#[derive(Clone, Debug, PartialEq)]
pub struct Flat {
    pub point: Vec<Rational>,
    pub directions: Vec<Vec<Rational>>,
}

impl Flat {
    pub fn whole(dim: usize) -> Self {
        let directions = (0..dim)
            .map(|i| {
                let mut e = vec![Rational::zero(); dim];
                e[i] = Rational::one();
                e
            })
            .collect();
        Self { point: vec![Rational::zero(); dim], directions }
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Common zero set of the forms, or `None` when it is empty.
    pub fn intersection(forms: &[&LinearForm], dim: usize) -> Option<Self> {
        let a: Vec<Vec<Rational>> = forms.iter().map(|f| f.coeffs.clone()).collect();
        let b: Vec<Rational> = forms.iter().map(|f| -f.constant.clone()).collect();
        let (point, directions) = exact::solve_affine(&a, &b, dim)?;
        Some(Self { point, directions })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        exact::coordinates_in(&self.point, &self.directions, x).is_some()
    }

    pub fn at(&self, y: &[Rational]) -> Vec<Rational> {
        let mut x = self.point.clone();
        for (d, c) in self.directions.iter().zip(y) {
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += c * di;
            }
        }
        x
    }
}

/// An unweighted affine arrangement that may be non-essential; used for sections,
/// traces and affine charts. `origins[k]` lists the input indices merged into
/// hyperplane `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineArrangement {
    pub dim: usize,
    pub forms: Vec<LinearForm>,
    pub origins: Vec<Vec<usize>>,
}

impl AffineArrangement {
    /// Drops forms that are constant and merges forms defining the same hyperplane.
    pub fn merging(dim: usize, forms: impl IntoIterator<Item = (LinearForm, usize)>) -> Self {
        let mut out = Self { dim, forms: Vec::new(), origins: Vec::new() };
        for (f, origin) in forms {
            if f.is_constant() {
                continue;
            }
            match out.forms.iter().position(|g| g.same_hyperplane(&f)) {
                Some(k) => out.origins[k].push(origin),
                None => {
                    out.forms.push(f);
                    out.origins.push(vec![origin]);
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// The homogeneous parts span the dual space.
    pub fn is_essential(&self) -> bool {
        let rows: Vec<Vec<Rational>> = self.forms.iter().map(|f| f.coeffs.clone()).collect();
        exact::rank(&rows, self.dim) == self.dim
    }

    pub fn bounded_chamber_count(&self) -> usize {
        crate::polyhedron::bounded_cell_count(&self.forms, self.dim)
    }
}

/// A weighted essential arrangement with hyperplanes ordered as given.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement {
    dim: usize,
    forms: Vec<LinearForm>,
    weights: Vec<Complex64>,
}

impl Arrangement {
    pub fn new(dim: usize, forms: Vec<LinearForm>, weights: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || forms.is_empty() {
            return Err(Error::Empty);
        }
        if forms.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: forms.len(), found: weights.len() });
        }
        for (i, f) in forms.iter().enumerate() {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: f.dim() });
            }
            if f.is_constant() {
                return Err(Error::ZeroForm { index: i });
            }
        }
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                if forms[i].same_hyperplane(&forms[j]) {
                    return Err(Error::DuplicateHyperplane { first: i, second: j });
                }
            }
        }
        let rows: Vec<Vec<Rational>> = forms.iter().map(|f| f.coeffs.clone()).collect();
        if exact::rank(&rows, dim) < dim {
            return Err(Error::NotEssential);
        }
        Ok(Self { dim, forms, weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &LinearForm {
        &self.forms[i]
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn with_weights(&self, weights: Vec<Complex64>) -> Result<Self> {
        Self::new(self.dim, self.forms.clone(), weights)
    }

    /// Weight of the hyperplane at infinity, `−Σ α_i`.
    pub fn infinity_weight(&self) -> Complex64 {
        -self.weights.iter().sum::<Complex64>()
    }

    /// General position: any `k ≤ n` hyperplanes meet in codimension `k` and
    /// no `n + 1` of them share a point.
    pub fn is_generic(&self) -> bool {
        let n = self.dim;
        (1..=n + 1).all(|k| {
            exact::subsets(self.len(), k).iter().all(|s| {
                if k <= n {
                    let rows: Vec<Vec<Rational>> = s.iter().map(|&i| self.forms[i].coeffs.clone()).collect();
                    exact::rank(&rows, n) == k
                } else {
                    let rows: Vec<Vec<Rational>> = s.iter().map(|&i| self.forms[i].as_vector()).collect();
                    exact::rank(&rows, n + 1) == k
                }
            })
        })
    }

    /// `I(x)`: indices of hyperplanes through a point.
    pub fn through(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.forms[i].eval(x).is_zero()).collect()
    }

    pub fn as_affine(&self) -> AffineArrangement {
        AffineArrangement {
            dim: self.dim,
            forms: self.forms.clone(),
            origins: (0..self.len()).map(|i| vec![i]).collect(),
        }
    }

    pub fn flat_of(&self, indices: &[usize]) -> Option<Flat> {
        let fs: Vec<&LinearForm> = indices.iter().map(|&i| &self.forms[i]).collect();
        Flat::intersection(&fs, self.dim)
    }
}

/// An element of `L(A)`: an affine flat together with the full set of
/// hyperplanes containing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub indices: Vec<usize>,
    pub flat: Flat,
}

impl Edge {
    pub fn dim(&self) -> usize {
        self.flat.dim()
    }

    pub fn codim(&self) -> usize {
        self.flat.ambient_dim() - self.flat.dim()
    }

    pub fn is_vertex(&self) -> bool {
        self.flat.dim() == 0
    }
}

fn lattice_of(forms: &[LinearForm], dim: usize) -> Vec<Edge> {
    let mut edges: Vec<Edge> = Vec::new();
    let p = forms.len();
    for k in 1..=dim.min(p) {
        for subset in exact::subsets(p, k) {
            let fs: Vec<&LinearForm> = subset.iter().map(|&i| &forms[i]).collect();
            let Some(flat) = Flat::intersection(&fs, dim) else {
                continue;
            };
            if flat.dim() != dim - k {
                continue;
            }
            let indices: Vec<usize> = (0..p).filter(|&i| forms[i].vanishes_on(&flat)).collect();
            if !edges.iter().any(|e| e.indices == indices) {
                edges.push(Edge { indices, flat });
            }
        }
    }
    edges.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.indices.cmp(&b.indices)));
    edges
}

/// All edges `L(A)` (proper intersections, hyperplanes and vertices included),
/// ordered by decreasing dimension and then by index set.
pub fn intersection_lattice(a: &Arrangement) -> Vec<Edge> {
    lattice_of(&a.forms, a.dim)
}

pub fn affine_lattice(a: &AffineArrangement) -> Vec<Edge> {
    lattice_of(&a.forms, a.dim)
}

/// The vertices of the arrangement.
pub fn vertices(a: &Arrangement) -> Vec<Edge> {
    intersection_lattice(a).into_iter().filter(Edge::is_vertex).collect()
}

/// Looks up the edge whose full index set is `indices`.
pub fn edge(a: &Arrangement, indices: &[usize]) -> Result<Edge> {
    let flat = a
        .flat_of(indices)
        .ok_or_else(|| Error::EdgeNotInLattice { indices: indices.to_vec() })?;
    let full = a.through_flat(&flat);
    if full != indices {
        return Err(Error::EdgeNotInLattice { indices: indices.to_vec() });
    }
    Ok(Edge { indices: full, flat })
}

impl Arrangement {
    pub fn through_flat(&self, flat: &Flat) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.forms[i].vanishes_on(flat)).collect()
    }

    fn check_edge(&self, e: &Edge) -> Result<()> {
        if e.indices.is_empty() || self.through_flat(&e.flat) != e.indices {
            return Err(Error::EdgeNotInLattice { indices: e.indices.clone() });
        }
        Ok(())
    }
}

/// `A^F`: the hyperplanes through `F`, with original order (origins carry the indices).
pub fn localization(a: &Arrangement, f: &Edge) -> Result<AffineArrangement> {
    a.check_edge(f)?;
    Ok(AffineArrangement {
        dim: a.dim,
        forms: f.indices.iter().map(|&i| a.forms[i].clone()).collect(),
        origins: f.indices.iter().map(|&i| vec![i]).collect(),
    })
}

/// `A_U`: traces `H_i ∩ U` for `U ⊄ H_i`, in the coordinates of `U`'s direction
/// basis. Hyperplanes parallel to `U` leave no trace; coincident traces are merged.
pub fn section(a: &AffineArrangement, u: &Flat) -> AffineArrangement {
    AffineArrangement::merging(
        u.dim(),
        a.forms
            .iter()
            .zip(&a.origins)
            .filter(|(f, _)| !f.vanishes_on(u))
            .flat_map(|(f, o)| o.iter().map(move |&i| (f.restrict(u), i))),
    )
}

/// A central arrangement of linear forms on `Q^m`, viewed as a projective
/// arrangement in `P^{m-1}`. Proportional forms are merged.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralArrangement {
    pub dim: usize,
    pub forms: Vec<Vec<Rational>>,
    pub origins: Vec<Vec<usize>>,
}

impl CentralArrangement {
    pub fn merging(dim: usize, forms: impl IntoIterator<Item = (Vec<Rational>, usize)>) -> Self {
        let mut out = Self { dim, forms: Vec::new(), origins: Vec::new() };
        for (f, origin) in forms {
            if exact::is_zero_vec(&f) {
                continue;
            }
            match out.forms.iter().position(|g| exact::proportional(g, &f)) {
                Some(k) => out.origins[k].push(origin),
                None => {
                    out.forms.push(f);
                    out.origins.push(vec![origin]);
                }
            }
        }
        out
    }

    /// Projective dimension `m − 1`.
    pub fn projective_dim(&self) -> isize {
        self.dim as isize - 1
    }

    /// Affine chart with hyperplane `k` sent to infinity: the other forms divided
    /// by form `k`, on the affine hyperplane `{form_k = 1}`.
    pub fn chart(&self, k: usize) -> AffineArrangement {
        let g = &self.forms[k];
        let (point, directions) = exact::solve_affine(core::slice::from_ref(g), &[Rational::one()], self.dim)
            .expect("nonzero form");
        let flat = Flat { point, directions };
        AffineArrangement::merging(
            flat.dim(),
            self.forms
                .iter()
                .zip(&self.origins)
                .enumerate()
                .filter(|(j, _)| *j != k)
                .flat_map(|(_, (f, o))| {
                    let lf = LinearForm::new(f.clone(), Rational::zero()).restrict(&flat);
                    o.iter().map(move |&i| (lf.clone(), i))
                }),
        )
    }

    /// Number of domains bounded relative to hyperplane `k` (the bounded chambers
    /// of the chart at `k`). The empty arrangement and arrangements in `P^0` have
    /// length one.
    pub fn discrete_length_at(&self, k: usize) -> usize {
        if self.dim <= 1 || self.forms.is_empty() {
            return 1;
        }
        self.chart(k).bounded_chamber_count()
    }

    /// Discrete length using the first hyperplane as the chart at infinity.
    pub fn discrete_length(&self) -> usize {
        self.discrete_length_at(0)
    }

    /// Restriction of the arrangement to the linear subspace spanned by `basis`
    /// (forms vanishing on it are dropped).
    pub fn section(&self, basis: &[Vec<Rational>]) -> Self {
        Self::merging(
            basis.len(),
            self.forms.iter().zip(&self.origins).flat_map(|(f, o)| {
                let r: Vec<Rational> = basis.iter().map(|b| exact::dot(f, b)).collect();
                o.iter().map(move |&i| (r.clone(), i))
            }),
        )
    }

    /// The arrangement induced by the forms vanishing on `span(basis)` on a
    /// complementary (orthogonal) subspace: the projective normal arrangement.
    pub fn normal(&self, basis: &[Vec<Rational>]) -> Self {
        let complement = exact::orthogonal_complement(basis, self.dim);
        let through: Vec<(Vec<Rational>, usize)> = self
            .forms
            .iter()
            .zip(&self.origins)
            .filter(|(f, _)| basis.iter().all(|b| exact::dot(f, b).is_zero()))
            .flat_map(|(f, o)| {
                let r: Vec<Rational> = complement.iter().map(|b| exact::dot(f, b)).collect();
                o.iter().map(move |&i| (r.clone(), i)).collect::<Vec<_>>()
            })
            .collect();
        Self::merging(complement.len(), through)
    }
}

/// `PA^F` for an affine edge: hyperplanes through `F` restricted to the normal
/// subspace at a point of `F`, centred there, as a projective arrangement.
pub fn projective_normal_arrangement(a: &Arrangement, f: &Edge) -> Result<CentralArrangement> {
    a.check_edge(f)?;
    let complement = exact::orthogonal_complement(&f.flat.directions, a.dim);
    Ok(CentralArrangement::merging(
        complement.len(),
        f.indices.iter().map(|&i| {
            let r: Vec<Rational> = complement.iter().map(|b| a.forms[i].eval_dir(b)).collect();
            (r, i)
        }),
    ))
}

/// Index used for the hyperplane at infinity in projective index sets.
pub fn infinity_index(a: &Arrangement) -> usize {
    a.len()
}

/// An edge of the projectivization: a linear subspace of `Q^{n+1}` (homogeneous
/// coordinates `(x, x_0)`, `H_∞ = {x_0 = 0}`) and the hyperplanes containing it.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveEdge {
    pub indices: Vec<usize>,
    pub basis: Vec<Vec<Rational>>,
    pub at_infinity: bool,
}

impl ProjectiveEdge {
    /// Projective dimension.
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }
}

/// `Ā`: the arrangement plus the hyperplane at infinity, with edges split into
/// `L₊` (affine) and `L₋` (at infinity).
#[derive(Clone, Debug)]
pub struct ProjectiveArrangement {
    pub base: Arrangement,
    pub central: CentralArrangement,
    pub affine_edges: Vec<ProjectiveEdge>,
    pub edges_at_infinity: Vec<ProjectiveEdge>,
}

impl ProjectiveArrangement {
    pub fn infinity_weight(&self) -> Complex64 {
        self.base.infinity_weight()
    }

    pub fn infinity_index(&self) -> usize {
        self.base.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &ProjectiveEdge> {
        self.affine_edges.iter().chain(&self.edges_at_infinity)
    }

    /// Discrete length of a projective edge: the discrete length of `Ā_F`.
    pub fn length(&self, e: &ProjectiveEdge) -> usize {
        if e.basis.len() <= 1 {
            return 1;
        }
        self.central.section(&e.basis).discrete_length()
    }

    /// Discrete width of a projective edge: the discrete length of `PĀ^F`.
    pub fn width(&self, e: &ProjectiveEdge) -> usize {
        self.central.normal(&e.basis).discrete_length()
    }
}

pub fn homogenize(f: &LinearForm) -> Vec<Rational> {
    f.as_vector()
}

/// Builds `Ā` and classifies its edges.
pub fn projectivize(a: &Arrangement) -> ProjectiveArrangement {
    let n = a.dim;
    let inf = a.len();
    let mut inf_form = vec![Rational::zero(); n + 1];
    inf_form[n] = Rational::one();
    let mut forms: Vec<Vec<Rational>> = a.forms.iter().map(homogenize).collect();
    forms.push(inf_form);
    let central = CentralArrangement {
        dim: n + 1,
        forms: forms.clone(),
        origins: (0..=inf).map(|i| vec![i]).collect(),
    };
    let total = forms.len();
    let mut edges: Vec<ProjectiveEdge> = Vec::new();
    for k in 1..=n.min(total) {
        for subset in exact::subsets(total, k) {
            let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| forms[i].clone()).collect();
            let basis = exact::kernel(&rows, n + 1);
            if basis.len() != n + 1 - k {
                continue;
            }
            let indices: Vec<usize> = (0..total)
                .filter(|&i| basis.iter().all(|b| exact::dot(&forms[i], b).is_zero()))
                .collect();
            if edges.iter().any(|e| e.indices == indices) {
                continue;
            }
            let at_infinity = indices.contains(&inf);
            edges.push(ProjectiveEdge { indices, basis, at_infinity });
        }
    }
    edges.sort_by(|a, b| b.basis.len().cmp(&a.basis.len()).then_with(|| a.indices.cmp(&b.indices)));
    let (edges_at_infinity, affine_edges) = edges.into_iter().partition(|e| e.at_infinity);
    ProjectiveArrangement { base: a.clone(), central, affine_edges, edges_at_infinity }
}

/// `tr(A)_{H₀}`: the affine arrangement cut on `W = H_∞ − H̄₀` by the functions
/// `h_i = f_i⁰/f₀⁰`, realized on the chart `{d : f₀⁰(d) = 1}` of the direction
/// space. Constant `h_i` are filtered out and coincident ones merged.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceArrangement {
    pub chart: Flat,
    pub arrangement: AffineArrangement,
}

impl TraceArrangement {
    /// Chart coordinates of a direction `d` with `f₀⁰(d) = 1`.
    pub fn coordinates(&self, d: &[Rational]) -> Option<Vec<Rational>> {
        exact::coordinates_in(&self.chart.point, &self.chart.directions, d)
    }

    /// `h_i` for an original index `i` as a form on chart coordinates.
    pub fn h(&self, a: &Arrangement, i: usize) -> LinearForm {
        LinearForm::new(a.forms[i].coeffs.clone(), Rational::zero()).restrict(&self.chart)
    }
}

pub fn trace_at_infinity(a: &Arrangement, f0: &LinearForm) -> Result<TraceArrangement> {
    if f0.is_constant() {
        return Err(Error::ConstantF0);
    }
    let (point, directions) =
        exact::solve_affine(core::slice::from_ref(&f0.coeffs), &[Rational::one()], a.dim).expect("nonconstant");
    let chart = Flat { point, directions };
    let arrangement = AffineArrangement::merging(
        chart.dim(),
        a.forms.iter().enumerate().map(|(i, f)| {
            (LinearForm::new(f.coeffs.clone(), Rational::zero()).restrict(&chart), i)
        }),
    );
    Ok(TraceArrangement { chart, arrangement })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn w(n: usize) -> Vec<Complex64> {
        vec![Complex64::new(0.5, 0.0); n]
    }

    fn points(zs: &[i64]) -> Arrangement {
        let forms = zs.iter().map(|&z| LinearForm::from_ints(&[1], -z)).collect();
        Arrangement::new(1, forms, w(zs.len())).unwrap()
    }

    fn lines(spec: &[(i64, i64, i64)]) -> Arrangement {
        let forms = spec.iter().map(|&(a, b, c)| LinearForm::from_ints(&[a, b], c)).collect();
        Arrangement::new(2, forms, w(spec.len())).unwrap()
    }

    pub(crate) fn generic3() -> Arrangement {
        lines(&[(1, 0, 0), (0, 1, 0), (1, 1, -2)])
    }

    fn concurrent3() -> Arrangement {
        lines(&[(1, 0, 0), (0, 1, 0), (1, 1, 0)])
    }

    #[test]
    fn build_errors() {
        let e = Arrangement::new(2, vec![LinearForm::from_ints(&[1, 0], 0)], w(1));
        assert_eq!(e, Err(Error::NotEssential));
        let e = Arrangement::new(
            1,
            vec![LinearForm::from_ints(&[1], 0), LinearForm::from_ints(&[2], 0)],
            w(2),
        );
        assert_eq!(e, Err(Error::DuplicateHyperplane { first: 0, second: 1 }));
        let e = Arrangement::new(1, vec![LinearForm::from_ints(&[0], 3)], w(1));
        assert_eq!(e, Err(Error::ZeroForm { index: 0 }));
        assert!(Arrangement::new(1, vec![LinearForm::from_ints(&[1], 0)], w(2)).is_err());
    }

    #[test]
    fn general_position() {
        assert!(generic3().is_generic());
        assert!(!concurrent3().is_generic());
        assert!(!lines(&[(1, 0, 0), (0, 1, 0), (1, 0, -1)]).is_generic());
        assert!(points(&[0, 1, 3]).is_generic());
    }

    #[test]
    fn lattices() {
        assert_eq!(intersection_lattice(&points(&[0, 1, 3])).len(), 3);
        let g = intersection_lattice(&generic3());
        assert_eq!(g.len(), 6);
        assert_eq!(g.iter().filter(|e| e.is_vertex()).count(), 3);
        let c = intersection_lattice(&concurrent3());
        assert_eq!(c.len(), 4);
        assert_eq!(c.last().unwrap().indices, vec![0, 1, 2]);
    }

    #[test]
    fn localizations() {
        let c = concurrent3();
        let center = edge(&c, &[0, 1, 2]).unwrap();
        assert_eq!(localization(&c, &center).unwrap().len(), 3);
        let g = generic3();
        let v = edge(&g, &[0, 1]).unwrap();
        assert_eq!(localization(&g, &v).unwrap().origins, vec![vec![0], vec![1]]);
        let h = edge(&g, &[2]).unwrap();
        assert_eq!(localization(&g, &h).unwrap().len(), 1);
        assert!(edge(&g, &[0, 2, 1]).is_err());
    }

    #[test]
    fn sections() {
        let g = generic3();
        let h0 = edge(&g, &[0]).unwrap();
        let s = section(&g.as_affine(), &h0.flat);
        assert_eq!((s.dim, s.len()), (1, 2));
        // x + 0y = 5/2 misses every vertex: the parallel line x = 0 leaves no trace.
        let u = Flat::intersection(&[&LinearForm::new(vec![q(1), q(0)], exact::q_frac(-5, 2))], 2)
            .unwrap();
        let s = section(&g.as_affine(), &u);
        assert_eq!(s.len(), 2);
        let pt = Flat { point: vec![exact::q_frac(1, 3), exact::q_frac(1, 3)], directions: vec![] };
        assert!(section(&g.as_affine(), &pt).is_empty());
    }

    #[test]
    fn projective_normals() {
        let g = lines(&[(1, 0, 0), (0, 1, 0)]);
        let v = edge(&g, &[0, 1]).unwrap();
        let pa = projective_normal_arrangement(&g, &v).unwrap();
        assert_eq!(pa.forms.len(), 2);
        assert_eq!(pa.chart(0).len(), 1);
        let h = edge(&g, &[0]).unwrap();
        let pa = projective_normal_arrangement(&g, &h).unwrap();
        assert_eq!(pa.projective_dim(), 0);
        assert_eq!(pa.discrete_length(), 1);
        let c = concurrent3();
        let center = edge(&c, &[0, 1, 2]).unwrap();
        let pa = projective_normal_arrangement(&c, &center).unwrap();
        assert_eq!(pa.chart(0).len(), 2);
        assert_eq!(pa.chart(1).len(), 2);
        assert_eq!(pa.discrete_length_at(0), 1);
        assert_eq!(pa.discrete_length_at(2), 1);
    }

    #[test]
    fn projectivizations() {
        let p = projectivize(&points(&[0, 1, 3]));
        assert_eq!(p.edges_at_infinity.len(), 1);
        assert_eq!(p.affine_edges.len(), 3);
        let g = projectivize(&lines(&[(1, 0, 0), (0, 1, 0)]));
        // H_∞ and the two points at infinity.
        assert_eq!(g.edges_at_infinity.len(), 3);
        assert_eq!(g.affine_edges.len(), 3);
        let par = projectivize(&lines(&[(1, 0, 0), (1, 0, -1), (0, 1, 0)]));
        assert!(par.edges_at_infinity.iter().any(|e| e.indices == vec![0, 1, 3]));
    }

    #[test]
    fn traces() {
        let t = trace_at_infinity(&points(&[0, 1]), &LinearForm::from_ints(&[1], 0)).unwrap();
        assert_eq!(t.chart.dim(), 0);
        assert!(t.arrangement.is_empty());
        let t = trace_at_infinity(&generic3(), &LinearForm::from_ints(&[2, 1], 7)).unwrap();
        assert_eq!((t.arrangement.dim, t.arrangement.len()), (1, 3));
        // f0 parallel to x: h_0 = x/x is constant and dropped.
        let t = trace_at_infinity(&generic3(), &LinearForm::from_ints(&[3, 0], 1)).unwrap();
        assert_eq!(t.arrangement.len(), 2);
        assert!(t.arrangement.origins.iter().all(|o| !o.contains(&0)));
        assert_eq!(
            trace_at_infinity(&generic3(), &LinearForm::from_ints(&[0, 0], 1)),
            Err(Error::ConstantF0)
        );
    }
}

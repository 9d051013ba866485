//! Circuits, broken circuits, (β)nbc bases, their flags, the bijection with
//! chambers and the intrinsic orientation of each chamber.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::chambers::{self, Chamber};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{self, Arrangement, Edge, LinearForm};
use crate::polyhedron;

/// An ordered basis `i₁ < … < i_n` and its vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    pub indices: Vec<usize>,
    pub vertex: Vec<Rational>,
}

fn rank_of(forms: &[LinearForm], subset: &[usize], dim: usize) -> usize {
    let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| forms[i].coeffs.clone()).collect();
    exact::rank(&rows, dim)
}

fn meets(forms: &[LinearForm], subset: &[usize], dim: usize) -> bool {
    let fs: Vec<&LinearForm> = subset.iter().map(|&i| &forms[i]).collect();
    geometry::Flat::intersection(&fs, dim).is_some()
}

/// Nonempty intersection of codimension `|J|`.
pub fn is_independent(forms: &[LinearForm], subset: &[usize], dim: usize) -> bool {
    rank_of(forms, subset, dim) == subset.len()
}

/// Nonempty intersection of codimension `< |J|`.
pub fn is_dependent(forms: &[LinearForm], subset: &[usize], dim: usize) -> bool {
    meets(forms, subset, dim) && rank_of(forms, subset, dim) < subset.len()
}

fn circuits_of(forms: &[LinearForm], dim: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 2..=(dim + 1).min(forms.len()) {
        for s in exact::subsets(forms.len(), k) {
            if !is_dependent(forms, &s, dim) {
                continue;
            }
            let minimal = (0..k).all(|drop| {
                let t: Vec<usize> = s.iter().enumerate().filter(|&(m, _)| m != drop).map(|(_, &i)| i).collect();
                is_independent(forms, &t, dim)
            });
            if minimal {
                out.push(s);
            }
        }
    }
    out
}

/// Minimal dependent index tuples.
pub fn circuits(a: &Arrangement) -> Vec<Vec<usize>> {
    circuits_of(a.forms(), a.dim())
}

/// Circuits with their minimal element removed.
pub fn broken_circuits(a: &Arrangement) -> Vec<Vec<usize>> {
    broken_of(a.forms(), a.dim())
}

fn broken_of(forms: &[LinearForm], dim: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = circuits_of(forms, dim).into_iter().map(|c| c[1..].to_vec()).collect();
    out.sort();
    out.dedup();
    out
}

fn contains_all(set: &[usize], sub: &[usize]) -> bool {
    sub.iter().all(|x| set.contains(x))
}

fn basis_of(forms: &[LinearForm], s: Vec<usize>, dim: usize) -> Basis {
    let fs: Vec<&LinearForm> = s.iter().map(|&i| &forms[i]).collect();
    let vertex = geometry::Flat::intersection(&fs, dim).expect("basis meets").point;
    Basis { indices: s, vertex }
}

fn nbc_of(forms: &[LinearForm], dim: usize) -> Vec<Basis> {
    let broken = broken_of(forms, dim);
    exact::subsets(forms.len(), dim)
        .into_iter()
        .filter(|s| is_independent(forms, s, dim) && !broken.iter().any(|b| contains_all(s, b)))
        .map(|s| basis_of(forms, s, dim))
        .collect()
}

fn satisfies_exchange(forms: &[LinearForm], b: &[usize], dim: usize) -> bool {
    b.iter().enumerate().all(|(pos, &h)| {
        (0..h).any(|h2| {
            let mut t = b.to_vec();
            t[pos] = h2;
            !b.contains(&h2) && is_independent(forms, &t, dim)
        })
    })
}

fn bnbc_of(forms: &[LinearForm], dim: usize) -> Vec<Basis> {
    nbc_of(forms, dim).into_iter().filter(|b| satisfies_exchange(forms, &b.indices, dim)).collect()
}

/// Ordered nbc bases in lexicographic order.
pub fn nbc_bases(a: &Arrangement) -> Vec<Basis> {
    nbc_of(a.forms(), a.dim())
}

/// βnbc bases in lexicographic order.
pub fn bnbc_bases(a: &Arrangement) -> Vec<Basis> {
    bnbc_of(a.forms(), a.dim())
}

/// `βnbc(A;f₀)`, computed on `A_t` with `H_t` smallest and mapped back to the
/// indices of `A`.
pub fn bnbc_with_f0(a: &Arrangement, f0: &LinearForm) -> Result<Vec<Basis>> {
    let t = chambers::default_threshold(a, f0);
    bnbc_with_f0_at(a, f0, &t)
}

/// Same as [`bnbc_with_f0`] for an explicit truncation level.
pub fn bnbc_with_f0_at(a: &Arrangement, f0: &LinearForm, t: &Rational) -> Result<Vec<Basis>> {
    let trunc = chambers::truncate(a, f0, t, num_complex::Complex64::new(1.0, 0.0))?;
    let at = &trunc.arrangement;
    let mut out = Vec::new();
    for b in bnbc_of(at.forms(), at.dim()) {
        if b.indices.contains(&0) {
            return Err(Error::BijectionFailure { reason: format!("H_t in βnbc basis {:?}", b.indices) });
        }
        out.push(Basis { indices: b.indices.iter().map(|i| i - 1).collect(), vertex: b.vertex });
    }
    Ok(out)
}

/// The flag `F₀ ⊂ … ⊂ F_{n−1}` with `F_j = ∩_{k>j} H_{i_k}` (`F_n = V` omitted).
pub fn flag(a: &Arrangement, b: &Basis) -> Vec<Edge> {
    let n = a.dim();
    (0..n)
        .map(|j| {
            let flat = a.flat_of(&b.indices[j..]).expect("basis subsets meet");
            Edge { indices: a.through_flat(&flat), flat }
        })
        .collect()
}

/// A relative-interior point of `F ∩ closure(Δ)` when this set has dimension `dim F`.
fn interior_on(a: &Arrangement, c: &Chamber, f: &Edge) -> Option<Vec<Rational>> {
    let cons: Vec<LinearForm> = (0..a.len())
        .filter(|i| !f.indices.contains(i))
        .map(|i| c.oriented_form(a, i))
        .collect();
    polyhedron::strictly_feasible_on(&cons, &f.flat)
}

/// `dim(F_j ∩ closure(Δ)) = j` for every step of the flag.
pub fn is_adjacent(a: &Arrangement, flag: &[Edge], c: &Chamber) -> bool {
    flag.iter().all(|f| interior_on(a, c, f).is_some())
}

/// Sign of the intrinsic frame of `Δ` relative to the standard frame. The frame
/// is Gram–Schmidt of `w_j = p_j − F₀` with `p_j` interior to `F_j ∩ closure(Δ)`,
/// which is unit upper-triangular in the `w` basis, so its determinant has the
/// sign of `det(w)`.
pub fn intrinsic_orientation(a: &Arrangement, b: &Basis, c: &Chamber) -> Result<i8> {
    let fl = flag(a, b);
    let mut rows = Vec::with_capacity(a.dim());
    for j in 1..=a.dim() {
        let p = if j == a.dim() {
            c.point.clone()
        } else {
            interior_on(a, c, &fl[j]).ok_or_else(|| Error::DegenerateFlag { basis: b.indices.clone() })?
        };
        rows.push(exact::sub(&p, &b.vertex));
    }
    match exact::sign(&exact::det(&rows)) {
        0 => Err(Error::DegenerateFlag { basis: b.indices.clone() }),
        s => Ok(s),
    }
}

/// βnbc bases paired with chambers and orientations, in βnbc order.
#[derive(Clone, Debug)]
pub struct Labelling {
    pub bases: Vec<Basis>,
    pub chambers: Vec<Chamber>,
    pub orientations: Vec<i8>,
}

fn matchings(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn rec(k: usize, adj: &[Vec<bool>], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if out.len() > 1 {
            return;
        }
        if k == adj.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..adj[k].len() {
            if adj[k][j] && !used[j] {
                used[j] = true;
                cur.push(j);
                rec(k + 1, adj, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    let m = adj.first().map_or(0, Vec::len);
    rec(0, adj, &mut vec![false; m], &mut Vec::new(), &mut out);
    out
}

/// The unique bijection with flag adjacency. Without `f0` it pairs `βnbc(A)`
/// with bounded chambers, with `f0` it pairs `βnbc(A;f₀)` with `Ch(A;f₀)`.
pub fn chamber_bijection(a: &Arrangement, f0: Option<&LinearForm>) -> Result<Labelling> {
    let (bases, pool) = match f0 {
        None => (bnbc_bases(a), chambers::bounded_chambers(a)),
        Some(f) => (bnbc_with_f0(a, f)?, chambers::chambers_with_f0(a, f)?),
    };
    if bases.len() != pool.len() {
        return Err(Error::BijectionFailure {
            reason: format!("{} bases but {} chambers", bases.len(), pool.len()),
        });
    }
    let adj: Vec<Vec<bool>> = bases
        .iter()
        .map(|b| {
            let fl = flag(a, b);
            pool.iter().map(|c| is_adjacent(a, &fl, c)).collect()
        })
        .collect();
    let ms = matchings(&adj);
    let m = match ms.len() {
        0 => return Err(Error::BijectionFailure { reason: "no adjacency matching".into() }),
        1 => ms.into_iter().next().expect("one matching"),
        _ => return Err(Error::BijectionFailure { reason: "adjacency matching is not unique".into() }),
    };
    let chambers: Vec<Chamber> = m.iter().map(|&j| pool[j].clone()).collect();
    let orientations =
        bases.iter().zip(&chambers).map(|(b, c)| intrinsic_orientation(a, b, c)).collect::<Result<Vec<_>>>()?;
    Ok(Labelling { bases, chambers, orientations })
}

/// Bases of `βnbc(A)` whose chamber under the `f0` bijection differs from the
/// plain one, as `(basis, plain chamber signs, f0 chamber signs)`.
pub fn restriction_mismatches(a: &Arrangement, f0: &LinearForm) -> Result<Vec<(Vec<usize>, Vec<i8>, Vec<i8>)>> {
    let plain = chamber_bijection(a, None)?;
    let full = chamber_bijection(a, Some(f0))?;
    let mut out = Vec::new();
    for (b, c) in plain.bases.iter().zip(&plain.chambers) {
        let k = full.bases.iter().position(|x| x.indices == b.indices).ok_or_else(|| Error::BijectionFailure {
            reason: format!("βnbc(A) basis {:?} missing from βnbc(A;f0)", b.indices),
        })?;
        if full.chambers[k].signs != c.signs {
            out.push((b.indices.clone(), c.signs.clone(), full.chambers[k].signs.clone()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn w(n: usize) -> Vec<Complex64> {
        vec![Complex64::new(0.5, 0.0); n]
    }

    fn points(zs: &[i64]) -> Arrangement {
        Arrangement::new(1, zs.iter().map(|&z| LinearForm::from_ints(&[1], -z)).collect(), w(zs.len())).unwrap()
    }

    fn lines(spec: &[(i64, i64, i64)]) -> Arrangement {
        let forms = spec.iter().map(|&(a, b, c)| LinearForm::from_ints(&[a, b], c)).collect();
        Arrangement::new(2, forms, w(spec.len())).unwrap()
    }

    fn idx(bs: &[Basis]) -> Vec<Vec<usize>> {
        bs.iter().map(|b| b.indices.clone()).collect()
    }

    #[test]
    fn circuit_examples() {
        assert!(circuits(&points(&[0, 1, 3])).is_empty());
        assert_eq!(circuits(&lines(&[(1, 0, 0), (0, 1, 0), (1, 1, 0)])), vec![vec![0, 1, 2]]);
        assert!(circuits(&lines(&[(1, 0, 0), (0, 1, 0), (1, 1, -2)])).is_empty());
    }

    #[test]
    fn nbc_examples() {
        assert_eq!(nbc_bases(&points(&[0, 1, 3])).len(), 3);
        let conc = lines(&[(1, 0, 0), (0, 1, 0), (1, 1, 0)]);
        assert_eq!(broken_circuits(&conc), vec![vec![1, 2]]);
        assert_eq!(idx(&nbc_bases(&conc)), vec![vec![0, 1], vec![0, 2]]);
        assert_eq!(nbc_bases(&lines(&[(1, 0, 0), (0, 1, 0), (1, 1, -2)])).len(), 3);
    }

    #[test]
    fn bnbc_examples() {
        assert_eq!(idx(&bnbc_bases(&points(&[0, 1, 3, 4]))), vec![vec![1], vec![2], vec![3]]);
        assert!(bnbc_bases(&lines(&[(1, 0, 0), (0, 1, 0), (1, 1, 0)])).is_empty());
        let four = lines(&[(1, 0, 0), (0, 1, 0), (1, 1, -2), (1, -2, 5)]);
        assert_eq!(idx(&bnbc_bases(&four)), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        let two = points(&[0, 1]);
        let f0 = LinearForm::from_ints(&[1], 0);
        assert_eq!(idx(&bnbc_with_f0(&two, &f0).unwrap()), vec![vec![0], vec![1]]);
    }

    #[test]
    fn bijection_on_a_line() {
        let a = points(&[0, 1, 3]);
        let lab = chamber_bijection(&a, None).unwrap();
        // (H_j) ↦ [z_{j−1}, z_j]
        assert_eq!(lab.chambers[0].vertices, vec![vec![q(0)], vec![q(1)]]);
        assert_eq!(lab.chambers[1].vertices, vec![vec![q(1)], vec![q(3)]]);
        assert_eq!(lab.orientations, vec![-1, -1]);
        let two = points(&[0, 1]);
        let f0 = LinearForm::from_ints(&[1], 0);
        let lab = chamber_bijection(&two, Some(&f0)).unwrap();
        assert_eq!(lab.chambers[0].vertices, vec![vec![q(0)], vec![q(1)]]);
        assert_eq!(lab.chambers[1].vertices, vec![vec![q(1)]]);
        assert_eq!(lab.orientations, vec![1, 1]);
        // The plain labelling sends (H_2) to [z_1, z_2]; with f0 it goes to [z_2, ∞).
        assert_eq!(restriction_mismatches(&two, &f0).unwrap().len(), 1);
    }

    #[test]
    fn orientation_flips_with_the_frame() {
        let a = lines(&[(1, 0, 0), (0, 1, 0), (1, 1, -2)]);
        let mirrored = lines(&[(-1, 0, 0), (0, 1, 0), (-1, 1, -2)]);
        let o = chamber_bijection(&a, None).unwrap().orientations;
        let m = chamber_bijection(&mirrored, None).unwrap().orientations;
        assert_eq!(o.len(), 1);
        assert_eq!(o[0], -m[0]);
    }

    #[test]
    fn t_independence() {
        let a = lines(&[(1, 0, 0), (0, 1, 0), (1, 1, -2), (1, -2, 5)]);
        let f0 = LinearForm::from_ints(&[3, 1], 1);
        let t1 = chambers::default_threshold(&a, &f0);
        let b1 = idx(&bnbc_with_f0_at(&a, &f0, &t1).unwrap());
        let b2 = idx(&bnbc_with_f0_at(&a, &f0, &(t1 * q(7))).unwrap());
        assert_eq!(b1, b2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn counts_and_bijections(
            spec in proptest::collection::vec((-4i64..=4, -4i64..=4, -5i64..=5), 2..6),
            f in (-5i64..=5, -5i64..=5, -3i64..=3),
        ) {
            let forms: Vec<LinearForm> = spec.iter().map(|&(a, b, c)| LinearForm::from_ints(&[a, b], c)).collect();
            let Ok(a) = Arrangement::new(2, forms, w(spec.len())) else { return Ok(()); };
            let f0 = LinearForm::from_ints(&[f.0, f.1], f.2);
            prop_assume!(!f0.is_constant());
            let plain = bnbc_bases(&a);
            prop_assert_eq!(plain.len(), chambers::bounded_chambers(&a).len());
            let with = bnbc_with_f0(&a, &f0).unwrap();
            prop_assert_eq!(with.len(), chambers::chambers_with_f0(&a, &f0).unwrap().len());
            for b in &plain {
                prop_assert!(with.iter().any(|x| x.indices == b.indices));
            }
            let lab = chamber_bijection(&a, Some(&f0)).unwrap();
            let mut signs: Vec<Vec<i8>> = lab.chambers.iter().map(|c| c.signs.clone()).collect();
            signs.sort();
            signs.dedup();
            prop_assert_eq!(signs.len(), with.len());
            chamber_bijection(&a, None).unwrap();
        }
    }
}

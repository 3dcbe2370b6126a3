use std::collections::BTreeSet;

use itertools::Itertools;
use num::{Signed, Zero};

use super::Caps;
use crate::error::{Error, Result};
use crate::matrix::{dot, kernel_basis, leading_sign, rank, unit, vec_neg, vec_scale, Mat, QVec};
use crate::rational::{int, Rational};

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of (row subset, sign pattern) pairs the symmetric enumeration visits
/// for `m` functionals in dimension `d`.
pub fn vertex_search_size(m: usize, d: usize) -> u64 {
    binomial(m as u64, d as u64).saturating_mul(1u64 << (d.saturating_sub(1)).min(63))
}

/// Vertices of `{c : |gᵢ·c| ≤ 1 for every row gᵢ of g}`.
///
/// Every `d`-subset of rows with full rank is solved against every sign
/// pattern (up to a global sign); feasible solutions are the vertices. The
/// polytope must be bounded, i.e. `rank(g) = d`.
pub fn symmetric_polytope_vertices(g: &Mat, caps: &Caps) -> Result<Vec<QVec>> {
    let d = g.cols();
    // zero rows never bind; rows equal up to sign give the same constraint pair
    let rows: Vec<QVec> = {
        let mut seen = BTreeSet::new();
        (0..g.rows())
            .map(|i| g.row(i).to_vec())
            .filter(|r| leading_sign(r) != 0)
            .map(|r| if leading_sign(&r) < 0 { vec_neg(&r) } else { r })
            .filter(|r| seen.insert(r.clone()))
            .collect()
    };
    let gm = Mat::from_rows(rows.clone())?;
    if rows.len() < d || rank(&gm) != d {
        return Err(Error::input("functionals do not bound the ball (rank deficient)"));
    }
    let work = vertex_search_size(rows.len(), d);
    if work > caps.max_subsets {
        return Err(Error::Resource(format!(
            "vertex enumeration over {} functional pairs in dimension {d} needs {work} solves (cap {})",
            rows.len(),
            caps.max_subsets
        )));
    }

    let feasible = |c: &QVec| rows.iter().all(|r| dot(r, c).abs() <= int(1));
    let mut found: BTreeSet<QVec> = BTreeSet::new();
    for subset in (0..rows.len()).combinations(d) {
        let sub = Mat::from_rows(subset.iter().map(|&i| rows[i].clone()).collect())?;
        let Ok(inv) = sub.inverse() else { continue };
        for mask in 0..(1u64 << (d - 1)) {
            // first sign fixed to +1; the opposite pattern gives −c
            let sigma: QVec = (0..d)
                .map(|k| if k > 0 && mask >> (k - 1) & 1 == 1 { int(-1) } else { int(1) })
                .collect();
            let c = inv.mul_vec(&sigma)?;
            if feasible(&c) {
                found.insert(vec_neg(&c));
                found.insert(c);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Vertices of `B_{ℓ₁ⁿ} ∩ span(basis)`: the normalised circuits of the
/// annihilator `A` (minimal-support nonzero vectors of `ker A = span(basis)`),
/// each paired with its negative. Circuits have support at most
/// `rank(A) + 1`, so only those supports are visited.
pub(super) fn l1_section_vertices(basis: &Mat, caps: &Caps) -> Result<Vec<QVec>> {
    let n = basis.rows();
    if n > caps.l1_linf_dim {
        return Err(Error::Resource(format!(
            "subspace of l1:{n} exceeds the dimension cap {}",
            caps.l1_linf_dim
        )));
    }
    let annihilator = kernel_basis(&basis.transpose());
    if annihilator.is_empty() {
        let mut pts = Vec::with_capacity(2 * n);
        for j in 0..n {
            pts.push(unit(n, j));
            pts.push(vec_neg(&unit(n, j)));
        }
        return Ok(pts);
    }
    let a = Mat::from_rows(annihilator)?;
    let codim = a.rows();
    let max_support = (codim + 1).min(n);
    let work: u64 = (1..=max_support).map(|k| binomial(n as u64, k as u64)).sum();
    if work > caps.max_subsets {
        return Err(Error::Resource(format!(
            "circuit enumeration in dimension {n} with codimension {codim} visits {work} supports (cap {})",
            caps.max_subsets
        )));
    }
    let all_rows: Vec<usize> = (0..codim).collect();
    let mut pts = Vec::new();
    for size in 1..=max_support {
        for support in (0..n).combinations(size) {
            let sub = a.select(&all_rows, &support);
            let ker = kernel_basis(&sub);
            if ker.len() != 1 || ker[0].iter().any(Zero::is_zero) {
                continue;
            }
            let mut x = vec![Rational::zero(); n];
            for (k, &i) in support.iter().enumerate() {
                x[i] = ker[0][k].clone();
            }
            let l1 = x.iter().fold(Rational::zero(), |acc, v| acc + v.abs());
            let x = vec_scale(&x, &(int(1) / l1));
            pts.push(vec_neg(&x));
            pts.push(x);
        }
    }
    Ok(pts)
}

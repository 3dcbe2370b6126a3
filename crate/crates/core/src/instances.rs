//! The three counterexample operators on sum-zero hyperplanes of ℓ₁ⁿ
//! (n = 4, 5, 6), written in the basis `u_k = e₁ − e_k`, `k = 2..n`.
//! Columns are the coordinates of the images of the basis vectors.

use crate::error::Result;
use crate::extend::ExtensionProblem;
use crate::matrix::Mat;
use crate::rational::{half, rat, Rational};
use crate::spaces::{PolyhedralSpace, Subspace};

/// A shipped counterexample: the operator and the lower bound it forces on
/// every extension.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub name: &'static str,
    pub dim: usize,
    pub op: Mat,
    pub bound: Rational,
    /// One-line statement of what the instance shows.
    pub claim: &'static str,
}

impl Counterexample {
    pub fn problem(&self) -> Result<ExtensionProblem> {
        let space = PolyhedralSpace::l1(self.dim);
        let y = Subspace::sum_zero(space.clone())?;
        ExtensionProblem::new(space, y, self.op.clone())
    }
}

pub fn mt4() -> Mat {
    Mat::from_i64(&[&[1, 1, 1], &[1, -1, -1], &[-1, 1, -1]]).scale(&half())
}

pub fn mt5() -> Mat {
    Mat::from_i64(&[
        &[1, 1, -1, -1],
        &[1, 0, 1, 1],
        &[-1, -1, 0, -1],
        &[-1, -1, -1, 0],
    ])
    .scale(&half())
}

pub fn mt6() -> Mat {
    Mat::from_i64(&[
        &[1, 1, 1, 1, 0],
        &[0, 0, 1, -1, 1],
        &[1, 0, 0, 1, 1],
        &[-1, -1, 0, 0, -1],
        &[-1, 1, -1, 0, 0],
    ])
    .scale(&half())
}

pub fn counterexamples() -> Vec<Counterexample> {
    vec![
        Counterexample { name: "r4", dim: 4, op: mt4(), bound: rat(5, 4), claim: "every extension on the sum-zero hyperplane of l1:4 has norm >= 5/4" },
        Counterexample { name: "r5", dim: 5, op: mt5(), bound: rat(4, 3), claim: "every extension on the sum-zero hyperplane of l1:5 has norm >= 4/3" },
        Counterexample { name: "r6", dim: 6, op: mt6(), bound: rat(3, 2), claim: "every extension on the sum-zero hyperplane of l1:6 has norm >= 3/2" },
    ]
}

/// Looks up `mt4` / `mt5` / `mt6` by name.
pub fn by_name(name: &str) -> Option<Counterexample> {
    let key = name.trim().to_ascii_lowercase();
    counterexamples().into_iter().find(|c| {
        key == c.name || key == format!("mt{}", c.dim)
    })
}

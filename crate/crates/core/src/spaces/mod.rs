//! Polyhedral normed spaces, subspaces with their induced norms, unit-ball
//! extreme points, dual norms and operator norms.
//!
//! Every norm here has a polytope unit ball, so operator norms are exact
//! maxima over finitely many ball vertices.

mod enumerate;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::matrix::{dot, kernel_basis, rank, solve_linear, unit, vec_neg, Mat, QVec};
use crate::rational::{int, one, Rational};

pub use enumerate::{symmetric_polytope_vertices, vertex_search_size};

/// Enumeration limits. Exceeding one is a clean [`Error::Resource`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest dimension for `L1` / `LINF` full-space vertex sets.
    pub l1_linf_dim: usize,
    /// Largest dimension for general `MaxAbsFunctionals` spaces.
    pub general_dim: usize,
    /// Largest number of candidate subsets a vertex enumeration may visit.
    pub max_subsets: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { l1_linf_dim: 12, general_dim: 8, max_subsets: 4_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NormRep {
    L1,
    Linf,
    /// `‖x‖ = maxᵢ |uᵢ·x|` over the rows `uᵢ` of the matrix.
    MaxAbs(Mat),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyhedralSpace {
    dim: usize,
    norm: NormRep,
}

impl PolyhedralSpace {
    pub fn l1(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        PolyhedralSpace { dim, norm: NormRep::L1 }
    }

    pub fn linf(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        PolyhedralSpace { dim, norm: NormRep::Linf }
    }

    /// Norm given by the rows of `u`; requires `rank(u) = u.cols()` so that the
    /// result is definite.
    pub fn max_abs(u: Mat) -> Result<Self> {
        let dim = u.cols();
        if dim == 0 {
            return Err(Error::input("max_abs norm needs at least one coordinate"));
        }
        if rank(&u) != dim {
            return Err(Error::input(format!(
                "max_abs functionals have rank {} < dimension {dim}; not a norm",
                rank(&u)
            )));
        }
        Ok(PolyhedralSpace { dim, norm: NormRep::MaxAbs(u) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm_rep(&self) -> &NormRep {
        &self.norm
    }

    pub fn is_l1(&self) -> bool {
        matches!(self.norm, NormRep::L1)
    }

    pub fn is_linf(&self) -> bool {
        matches!(self.norm, NormRep::Linf)
    }

    /// Short label such as `l1:4`, `linf:3`, `max_abs:2x5`.
    pub fn label(&self) -> String {
        match &self.norm {
            NormRep::L1 => format!("l1:{}", self.dim),
            NormRep::Linf => format!("linf:{}", self.dim),
            NormRep::MaxAbs(u) => format!("max_abs:{}x{}", self.dim, u.rows()),
        }
    }

    fn check_dim(&self, what: &str, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::dims(what, self.dim, len));
        }
        Ok(())
    }

    pub fn norm(&self, x: &[Rational]) -> Result<Rational> {
        self.check_dim("norm argument", x.len())?;
        Ok(self.norm_unchecked(x))
    }

    pub(crate) fn norm_unchecked(&self, x: &[Rational]) -> Rational {
        match &self.norm {
            NormRep::L1 => x.iter().fold(Rational::zero(), |acc, v| acc + v.abs()),
            NormRep::Linf => x.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero),
            NormRep::MaxAbs(u) => (0..u.rows())
                .map(|i| dot(u.row(i), x).abs())
                .max()
                .unwrap_or_else(Rational::zero),
        }
    }

    /// `sup { f·x : ‖x‖ ≤ 1 }`.
    pub fn dual_norm(&self, f: &[Rational]) -> Result<Rational> {
        self.check_dim("dual_norm argument", f.len())?;
        match &self.norm {
            NormRep::L1 => Ok(f.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero)),
            NormRep::Linf => Ok(f.iter().fold(Rational::zero(), |acc, v| acc + v.abs())),
            NormRep::MaxAbs(u) => {
                // min Σ|λᵢ| s.t. Σ λᵢ uᵢ = f, with λ = λ⁺ − λ⁻.
                let m = u.rows();
                let mut lp = LinearProgram::new(2 * m);
                lp.objective = vec![one(); 2 * m];
                for j in 0..2 * m {
                    lp.set_lower(j, Rational::zero());
                }
                for k in 0..self.dim {
                    let mut row = vec![Rational::zero(); 2 * m];
                    for i in 0..m {
                        row[i] = u[(i, k)].clone();
                        row[m + i] = -&u[(i, k)];
                    }
                    lp.add(row, Relation::Eq, f[k].clone());
                }
                let sol = solve_lp(&lp)?;
                if sol.status != LpStatus::Optimal {
                    return Err(Error::internal(format!(
                        "dual-norm program reported {:?} despite full-rank functionals",
                        sol.status
                    )));
                }
                Ok(sol.objective_value)
            }
        }
    }

    pub fn ball_vertices(&self) -> Result<VertexSet> {
        self.ball_vertices_with(&Caps::default())
    }

    /// Extreme points of the closed unit ball, sorted lexicographically.
    pub fn ball_vertices_with(&self, caps: &Caps) -> Result<VertexSet> {
        let n = self.dim;
        match &self.norm {
            NormRep::L1 | NormRep::Linf if n > caps.l1_linf_dim => Err(Error::Resource(format!(
                "ball vertices of {} exceed the dimension cap {}",
                self.label(),
                caps.l1_linf_dim
            ))),
            NormRep::L1 => {
                let mut pts = Vec::with_capacity(2 * n);
                for j in 0..n {
                    let e = unit(n, j);
                    pts.push(vec_neg(&e));
                    pts.push(e);
                }
                Ok(VertexSet::new(pts))
            }
            NormRep::Linf => {
                let pts = (0..1u64 << n)
                    .map(|mask| {
                        (0..n).map(|j| if mask >> j & 1 == 1 { int(-1) } else { int(1) }).collect()
                    })
                    .collect();
                Ok(VertexSet::new(pts))
            }
            NormRep::MaxAbs(u) => {
                if n > caps.general_dim {
                    return Err(Error::Resource(format!(
                        "ball vertices of {} exceed the dimension cap {}",
                        self.label(),
                        caps.general_dim
                    )));
                }
                Ok(VertexSet::new(symmetric_polytope_vertices(u, caps)?))
            }
        }
    }

    /// Functionals `g` with `‖x‖ = max_g g·x`: the vertices of the dual ball.
    /// Exponential for `L1`; used only where the dimension is small.
    pub fn dual_ball_vertices(&self) -> Vec<QVec> {
        match &self.norm {
            NormRep::L1 => PolyhedralSpace::linf(self.dim).ball_vertices_with(&Caps {
                l1_linf_dim: usize::MAX,
                ..Caps::default()
            })
            .expect("uncapped")
            .points,
            NormRep::Linf => PolyhedralSpace::l1(self.dim).ball_vertices().expect("L1 vertices").points,
            NormRep::MaxAbs(u) => {
                let mut out = Vec::with_capacity(2 * u.rows());
                for i in 0..u.rows() {
                    out.push(u.row(i).to_vec());
                    out.push(vec_neg(u.row(i)));
                }
                out
            }
        }
    }
}

/// Extreme points of a unit ball (or of a subspace section of one), in
/// ambient coordinates and sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    pub points: Vec<QVec>,
}

impl VertexSet {
    pub(crate) fn new(mut points: Vec<QVec>) -> Self {
        points.sort();
        points.dedup();
        VertexSet { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.points.binary_search_by(|p| p.as_slice().cmp(v)).is_ok()
    }

    /// One representative of each `±v` pair (the one whose first nonzero
    /// entry is positive). Enough for maxima of even functions such as norms.
    pub fn half(&self) -> impl Iterator<Item = &QVec> {
        self.points.iter().filter(|p| crate::matrix::leading_sign(p) > 0)
    }
}

/// A subspace `span(basis)` of a polyhedral space with the induced norm.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: PolyhedralSpace,
    basis: Mat,
}

impl Subspace {
    pub fn new(ambient: PolyhedralSpace, basis: Mat) -> Result<Self> {
        if basis.rows() != ambient.dim() {
            return Err(Error::dims("subspace basis rows", ambient.dim(), basis.rows()));
        }
        if basis.cols() == 0 {
            return Err(Error::input("subspace basis must have at least one column"));
        }
        if rank(&basis) != basis.cols() {
            return Err(Error::input("subspace basis is not of full column rank"));
        }
        Ok(Subspace { ambient, basis })
    }

    /// `{x : Σ xᵢ = 0}` with basis `u_k = e₁ − e_k`, `k = 2..n`. With this
    /// basis, `½(u_i − u_j)` (and `u₁ = 0`) are the points `½(e_j − e_i)`.
    pub fn sum_zero(ambient: PolyhedralSpace) -> Result<Self> {
        let n = ambient.dim();
        if n < 2 {
            return Err(Error::input("sum-zero subspace needs dimension at least 2"));
        }
        let cols = (1..n)
            .map(|k| {
                let mut u = unit(n, 0);
                u[k] = int(-1);
                u
            })
            .collect();
        Subspace::new(ambient, Mat::from_cols(cols)?)
    }

    /// `ker f`, with the leading-one kernel basis.
    pub fn kernel_of(ambient: PolyhedralSpace, f: &[Rational]) -> Result<Self> {
        ambient.check_dim("hyperplane functional", f.len())?;
        let a = Mat::from_rows(vec![f.to_vec()])?;
        let k = kernel_basis(&a);
        if k.is_empty() {
            return Err(Error::input("functional has trivial kernel"));
        }
        Subspace::new(ambient, Mat::from_cols(k)?)
    }

    /// The whole space, basis `I`.
    pub fn full(ambient: PolyhedralSpace) -> Self {
        let n = ambient.dim();
        Subspace { ambient, basis: Mat::identity(n) }
    }

    pub fn ambient(&self) -> &PolyhedralSpace {
        &self.ambient
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of an ambient vector in the subspace basis.
    pub fn coords(&self, x: &[Rational]) -> Result<QVec> {
        solve_linear(&self.basis, x)?
            .ok_or_else(|| Error::input("vector does not lie in the subspace"))
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        matches!(solve_linear(&self.basis, x), Ok(Some(_)))
    }

    /// Ambient images of the basis vectors under `t`, where `t` is either
    /// `d×d` in basis coordinates (maps into the subspace; requires a codomain
    /// equal to the ambient dimension) or `codim×d` with columns already given
    /// in codomain coordinates. Square `d×d` input is read in basis
    /// coordinates.
    pub fn images(&self, t: &Mat, codomain_dim: usize) -> Result<Mat> {
        let d = self.dim();
        if t.cols() != d {
            return Err(Error::dims("operator columns", d, t.cols()));
        }
        if t.rows() == d && codomain_dim == self.ambient.dim() {
            self.basis.mul(t)
        } else if t.rows() == codomain_dim {
            Ok(t.clone())
        } else {
            Err(Error::input(format!(
                "operator has {} rows; expected {d} (basis coordinates) or {codomain_dim} (images)",
                t.rows()
            )))
        }
    }

    pub fn ball_vertices(&self) -> Result<VertexSet> {
        self.ball_vertices_with(&Caps::default())
    }

    /// Extreme points of `B_X ∩ span(basis)` in ambient coordinates.
    pub fn ball_vertices_with(&self, caps: &Caps) -> Result<VertexSet> {
        let n = self.ambient.dim();
        let pts = match self.ambient.norm_rep() {
            NormRep::L1 => enumerate::l1_section_vertices(&self.basis, caps)?,
            NormRep::Linf => {
                if n > caps.l1_linf_dim {
                    return Err(Error::Resource(format!(
                        "subspace of {} exceeds the dimension cap {}",
                        self.ambient.label(),
                        caps.l1_linf_dim
                    )));
                }
                self.section_from_functionals(&Mat::identity(n), caps)?
            }
            NormRep::MaxAbs(u) => {
                if n > caps.general_dim {
                    return Err(Error::Resource(format!(
                        "subspace of {} exceeds the dimension cap {}",
                        self.ambient.label(),
                        caps.general_dim
                    )));
                }
                self.section_from_functionals(u, caps)?
            }
        };
        Ok(VertexSet::new(pts))
    }

    fn section_from_functionals(&self, u: &Mat, caps: &Caps) -> Result<Vec<QVec>> {
        // induced ball in basis coordinates: |(U B)ᵢ · c| ≤ 1
        let g = u.mul(&self.basis)?;
        let coords = symmetric_polytope_vertices(&g, caps)?;
        coords.iter().map(|c| self.basis.mul_vec(c)).collect()
    }
}

/// `max { ‖S v‖_codomain : v ∈ ext B_domain }`.
pub fn operator_norm(domain: &PolyhedralSpace, codomain: &PolyhedralSpace, s: &Mat) -> Result<Rational> {
    operator_norm_with(domain, codomain, s, &Caps::default())
}

pub fn operator_norm_with(
    domain: &PolyhedralSpace,
    codomain: &PolyhedralSpace,
    s: &Mat,
    caps: &Caps,
) -> Result<Rational> {
    if s.rows() != codomain.dim() || s.cols() != domain.dim() {
        return Err(Error::input(format!(
            "operator is {}x{}, expected {}x{}",
            s.rows(),
            s.cols(),
            codomain.dim(),
            domain.dim()
        )));
    }
    if s.is_zero() {
        return Ok(Rational::zero());
    }
    let verts = domain.ball_vertices_with(caps)?;
    let mut best = Rational::zero();
    for v in verts.half() {
        let nv = codomain.norm_unchecked(&s.mul_vec(v)?);
        if nv > best {
            best = nv;
        }
    }
    Ok(best)
}

/// Norm of `T` on the subspace; see [`Subspace::images`] for the accepted
/// shapes of `t`.
pub fn subspace_operator_norm(y: &Subspace, t: &Mat, codomain: &PolyhedralSpace) -> Result<Rational> {
    subspace_operator_norm_with(y, t, codomain, &Caps::default())
}

pub fn subspace_operator_norm_with(
    y: &Subspace,
    t: &Mat,
    codomain: &PolyhedralSpace,
    caps: &Caps,
) -> Result<Rational> {
    let images = y.images(t, codomain.dim())?;
    if images.is_zero() {
        return Ok(Rational::zero());
    }
    let verts = y.ball_vertices_with(caps)?;
    let mut best = Rational::zero();
    for v in verts.half() {
        let c = y.coords(v)?;
        let nv = codomain.norm_unchecked(&images.mul_vec(&c)?);
        if nv > best {
            best = nv;
        }
    }
    Ok(best)
}

/// Induced dual norm of a functional given on basis coordinates:
/// `max { |f·c| : B c ∈ ext B_Y }`.
pub fn subspace_dual_norm(y: &Subspace, f: &[Rational]) -> Result<Rational> {
    if f.len() != y.dim() {
        return Err(Error::dims("subspace functional", y.dim(), f.len()));
    }
    let verts = y.ball_vertices()?;
    let mut best = Rational::zero();
    for v in verts.half() {
        let val = dot(f, &y.coords(v)?).abs();
        if val > best {
            best = val;
        }
    }
    Ok(best)
}

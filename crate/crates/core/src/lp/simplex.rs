use num::rational::Ratio;
use num::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

use super::{check_solution, LinearProgram, LpSolution, LpStatus, RayVec, Relation};
use crate::error::{Error, Result};
use crate::matrix::QVec;
use crate::rational::Rational;

/// Tableau arithmetic. Every operation may fail on overflow; the big-rational
/// instance never does.
trait Scalar: Clone + Ord + Sized {
    fn s_zero() -> Self;
    fn s_one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn from_rational(x: &Rational) -> Option<Self>;
    fn to_rational(&self) -> Rational;
}

impl Scalar for Rational {
    fn s_zero() -> Self {
        Zero::zero()
    }
    fn s_one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn from_rational(x: &Rational) -> Option<Self> {
        Some(x.clone())
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

macro_rules! small_scalar {
    ($t:ty) => {
        impl Scalar for Ratio<$t> {
            fn s_zero() -> Self {
                Zero::zero()
            }
            fn s_one() -> Self {
                One::one()
            }
            fn is_zero(&self) -> bool {
                Zero::is_zero(self)
            }
            fn is_positive(&self) -> bool {
                Signed::is_positive(self)
            }
            fn is_negative(&self) -> bool {
                Signed::is_negative(self)
            }
            fn add(&self, o: &Self) -> Option<Self> {
                self.checked_add(o)
            }
            fn sub(&self, o: &Self) -> Option<Self> {
                self.checked_sub(o)
            }
            fn mul(&self, o: &Self) -> Option<Self> {
                self.checked_mul(o)
            }
            fn div(&self, o: &Self) -> Option<Self> {
                self.checked_div(o)
            }
            fn from_rational(x: &Rational) -> Option<Self> {
                let n: $t = x.numer().try_into().ok()?;
                let d: $t = x.denom().try_into().ok()?;
                Some(Ratio::new_raw(n, d))
            }
            fn to_rational(&self) -> Rational {
                Rational::new((*self.numer()).into(), (*self.denom()).into())
            }
        }
    };
}

small_scalar!(i64);
small_scalar!(i128);

/// How a user variable is expressed through nonnegative tableau columns.
#[derive(Clone, Debug)]
enum VarMap {
    /// `x = l + s`
    Shift { lower: Rational, col: usize },
    /// `x = u − s`
    Reflect { upper: Rational, col: usize },
    /// `x = s⁺ − s⁻`
    Split { pos: usize, neg: usize },
}

impl VarMap {
    fn value(&self, cols: &[Rational]) -> Rational {
        match self {
            VarMap::Shift { lower, col } => lower + &cols[*col],
            VarMap::Reflect { upper, col } => upper - &cols[*col],
            VarMap::Split { pos, neg } => &cols[*pos] - &cols[*neg],
        }
    }

    fn direction(&self, cols: &[Rational]) -> Rational {
        match self {
            VarMap::Shift { col, .. } => cols[*col].clone(),
            VarMap::Reflect { col, .. } => -&cols[*col],
            VarMap::Split { pos, neg } => &cols[*pos] - &cols[*neg],
        }
    }
}

/// The program over nonnegative columns with slack and artificial columns
/// in place, before any pivoting.
struct StandardForm {
    maps: Vec<VarMap>,
    /// `m` rows of `width + 1` entries; the last entry is the right-hand side.
    rows: Vec<QVec>,
    width: usize,
    /// Column that starts as the unit vector of each row (slack or artificial).
    unit_col: Vec<usize>,
    is_artificial: Vec<bool>,
    artificial_count: usize,
    /// Rows multiplied by −1 to make the right-hand side nonnegative.
    flip: Vec<bool>,
    user_rows: usize,
    /// Phase-two costs over the columns and the constant they drop.
    costs: QVec,
    offset: Rational,
}

impl StandardForm {
    fn build(p: &LinearProgram) -> Self {
        let n = p.num_vars();

        // Map user variables to nonnegative columns.
        let mut maps = Vec::with_capacity(n);
        let mut ncols = 0;
        let mut upper_rows: Vec<(usize, Rational)> = Vec::new();
        for j in 0..n {
            match (&p.lower[j], &p.upper[j]) {
                (Some(l), u) => {
                    maps.push(VarMap::Shift { lower: l.clone(), col: ncols });
                    if let Some(u) = u {
                        upper_rows.push((ncols, u - l));
                    }
                    ncols += 1;
                }
                (None, Some(u)) => {
                    maps.push(VarMap::Reflect { upper: u.clone(), col: ncols });
                    ncols += 1;
                }
                (None, None) => {
                    maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
                    ncols += 2;
                }
            }
        }
        let structural = ncols;

        // Rows in column space: (coeffs over structural columns, relation, rhs).
        let mut std_rows: Vec<(QVec, Relation, Rational)> = Vec::new();
        for c in &p.constraints {
            let mut row = vec![Zero::zero(); structural];
            let mut rhs = c.rhs.clone();
            for (j, a) in c.coeffs.iter().enumerate() {
                if Zero::is_zero(a) {
                    continue;
                }
                match &maps[j] {
                    VarMap::Shift { lower, col } => {
                        row[*col] += a;
                        rhs -= a * lower;
                    }
                    VarMap::Reflect { upper, col } => {
                        row[*col] -= a;
                        rhs -= a * upper;
                    }
                    VarMap::Split { pos, neg } => {
                        row[*pos] += a;
                        row[*neg] -= a;
                    }
                }
            }
            std_rows.push((row, c.relation, rhs));
        }
        for (col, cap) in &upper_rows {
            let mut row = vec![Zero::zero(); structural];
            row[*col] = One::one();
            std_rows.push((row, Relation::Le, cap.clone()));
        }

        // Slack columns, sign normalisation, and unit columns.
        let m = std_rows.len();
        let slack_count = std_rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let mut slack_of = vec![None; m];
        let mut next = structural;
        for (i, r) in std_rows.iter().enumerate() {
            if r.1 != Relation::Eq {
                slack_of[i] = Some(next);
                next += 1;
            }
        }
        let mut flip = vec![false; m];
        let mut needs_artificial = vec![false; m];
        for (i, (_, rel, rhs)) in std_rows.iter().enumerate() {
            flip[i] = Signed::is_negative(rhs);
            let slack_sign_positive = match rel {
                Relation::Le => !flip[i],
                Relation::Ge => flip[i],
                Relation::Eq => false,
            };
            needs_artificial[i] = !slack_sign_positive;
        }
        let artificial_count = needs_artificial.iter().filter(|&&a| a).count();
        let width = structural + slack_count + artificial_count;

        let mut rows = Vec::with_capacity(m);
        let mut unit_col = Vec::with_capacity(m);
        let mut is_artificial = vec![false; width];
        let mut next_art = structural + slack_count;
        for (i, (coeffs, rel, rhs)) in std_rows.into_iter().enumerate() {
            let mut row = vec![Zero::zero(); width + 1];
            for (j, a) in coeffs.into_iter().enumerate() {
                row[j] = a;
            }
            if let Some(s) = slack_of[i] {
                row[s] = if rel == Relation::Le { One::one() } else { -Rational::from_integer(1.into()) };
            }
            row[width] = rhs;
            if flip[i] {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            let u = if needs_artificial[i] {
                let a = next_art;
                next_art += 1;
                row[a] = One::one();
                is_artificial[a] = true;
                a
            } else {
                slack_of[i].expect("row without artificial has a slack")
            };
            rows.push(row);
            unit_col.push(u);
        }

        let mut costs = vec![Zero::zero(); width];
        let mut offset = Zero::zero();
        for (j, map) in maps.iter().enumerate() {
            let c = &p.objective[j];
            match map {
                VarMap::Shift { lower, col } => {
                    costs[*col] += c;
                    offset += c * lower;
                }
                VarMap::Reflect { upper, col } => {
                    costs[*col] -= c;
                    offset += c * upper;
                }
                VarMap::Split { pos, neg } => {
                    costs[*pos] += c;
                    costs[*neg] -= c;
                }
            }
        }

        StandardForm {
            maps,
            rows,
            width,
            unit_col,
            is_artificial,
            artificial_count,
            flip,
            user_rows: p.constraints.len(),
            costs,
            offset,
        }
    }

    /// Duals for the user rows, undoing the sign normalisation.
    fn signed(&self, ys: QVec) -> QVec {
        ys.into_iter()
            .take(self.user_rows)
            .enumerate()
            .map(|(i, y)| if self.flip[i] { -y } else { y })
            .collect()
    }
}

/// Arithmetic overflow in the small-number tableau.
struct Overflow;

type Step<T> = std::result::Result<T, Overflow>;

fn ck<T>(x: Option<T>) -> Step<T> {
    x.ok_or(Overflow)
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    width: usize,
    basis: Vec<usize>,
    unit_col: Vec<usize>,
    /// Reduced costs (`width` entries) and current objective value.
    reduced: Vec<F>,
    value: F,
}

impl<F: Scalar> Tableau<F> {
    fn new(sf: &StandardForm) -> Step<Self> {
        let rows = sf
            .rows
            .iter()
            .map(|r| r.iter().map(|x| ck(F::from_rational(x))).collect::<Step<Vec<_>>>())
            .collect::<Step<Vec<_>>>()?;
        Ok(Tableau {
            rows,
            width: sf.width,
            basis: sf.unit_col.clone(),
            unit_col: sf.unit_col.clone(),
            reduced: Vec::new(),
            value: F::s_zero(),
        })
    }

    fn load_costs(&mut self, costs: &[F]) -> Step<()> {
        let mut reduced = costs.to_vec();
        let mut value = F::s_zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, rj) in reduced.iter_mut().enumerate() {
                let a = &self.rows[i][j];
                if !a.is_zero() {
                    *rj = ck(rj.sub(&ck(cb.mul(a))?))?;
                }
            }
            value = ck(value.add(&ck(cb.mul(&self.rows[i][self.width]))?))?;
        }
        self.reduced = reduced;
        self.value = value;
        Ok(())
    }

    fn pivot(&mut self, r: usize, q: usize) -> Step<()> {
        let p = self.rows[r][q].clone();
        if p != F::s_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = ck(x.div(&p))?;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let support: Vec<usize> = (0..=self.width).filter(|&j| !pivot_row[j].is_zero()).collect();
        let result = (|| {
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i == r || row.is_empty() || row[q].is_zero() {
                    continue;
                }
                let f = row[q].clone();
                for &j in &support {
                    row[j] = ck(row[j].sub(&ck(f.mul(&pivot_row[j]))?))?;
                }
            }
            let f = self.reduced[q].clone();
            if !f.is_zero() {
                for &j in &support {
                    if j < self.width {
                        self.reduced[j] = ck(self.reduced[j].sub(&ck(f.mul(&pivot_row[j]))?))?;
                    }
                }
                // objective value moves with the right-hand side column
                self.value = ck(self.value.add(&ck(f.mul(&pivot_row[self.width]))?))?;
            }
            Ok(())
        })();
        self.rows[r] = pivot_row;
        self.basis[r] = q;
        result
    }

    /// Runs Bland's rule until optimal. Returns the entering column of an
    /// unbounded direction if one is found.
    fn optimise(&mut self, allowed: impl Fn(usize) -> bool) -> Step<Option<usize>> {
        loop {
            let Some(q) = (0..self.width).find(|&j| allowed(j) && self.reduced[j].is_negative()) else {
                return Ok(None);
            };
            let mut best: Option<(usize, F)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[q].is_positive() {
                    continue;
                }
                let ratio = ck(row[self.width].div(&row[q]))?;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, q)?,
                None => return Ok(Some(q)),
            }
        }
    }

    fn column_values(&self) -> QVec {
        let mut x = vec![Zero::zero(); self.width];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rows[i][self.width].to_rational();
        }
        x
    }

    /// Row duals for the costs currently loaded: `y_i = c_unit − reduced_unit`.
    fn row_duals(&self, costs: &[F]) -> Step<QVec> {
        self.unit_col
            .iter()
            .map(|&j| ck(costs[j].sub(&self.reduced[j])).map(|y| y.to_rational()))
            .collect()
    }
}

fn run<F: Scalar>(p: &LinearProgram, sf: &StandardForm) -> Step<LpSolution> {
    let mut t = Tableau::<F>::new(sf)?;
    let m = sf.rows.len();
    let width = sf.width;
    let art = &sf.is_artificial;

    // Phase 1.
    if sf.artificial_count > 0 {
        let costs: Vec<F> = (0..width).map(|j| if art[j] { F::s_one() } else { F::s_zero() }).collect();
        t.load_costs(&costs)?;
        let unbounded = t.optimise(|_| true)?;
        debug_assert!(unbounded.is_none(), "phase one is bounded below by zero");
        if t.value.is_positive() {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                primal: Vec::new(),
                dual: sf.signed(t.row_duals(&costs)?),
                objective_value: Zero::zero(),
                ray: None,
            });
        }
        // Drive zero-level artificials out of the basis where possible; rows
        // where that is impossible are redundant and stay inert.
        for i in 0..m {
            if art[t.basis[i]] {
                if let Some(q) = (0..width).find(|&j| !art[j] && !t.rows[i][j].is_zero()) {
                    t.pivot(i, q)?;
                }
            }
        }
    }

    // Phase 2.
    let costs: Vec<F> = sf.costs.iter().map(|c| ck(F::from_rational(c))).collect::<Step<_>>()?;
    t.load_costs(&costs)?;
    let unbounded = t.optimise(|j| !art[j])?;
    let cols = t.column_values();
    let primal: QVec = sf.maps.iter().map(|m| m.value(&cols)).collect();

    Ok(match unbounded {
        Some(q) => {
            let mut dir = vec![Zero::zero(); width];
            dir[q] = One::one();
            for (i, &b) in t.basis.iter().enumerate() {
                dir[b] = -t.rows[i][q].to_rational();
            }
            let ray: QVec = sf.maps.iter().map(|m| m.direction(&dir)).collect();
            LpSolution {
                status: LpStatus::Unbounded,
                objective_value: crate::matrix::dot(&p.objective, &primal),
                primal,
                dual: Vec::new(),
                ray: Some(RayVec(ray)),
            }
        }
        None => LpSolution {
            status: LpStatus::Optimal,
            objective_value: t.value.to_rational() + &sf.offset,
            primal,
            dual: sf.signed(t.row_duals(&costs)?),
            ray: None,
        },
    })
}

/// Solves `p` exactly. Every returned solution has passed [`check_solution`];
/// a failure there is reported as an internal error rather than returned.
///
/// The tableau runs on 64-bit fractions, then 128-bit, then arbitrary
/// precision, restarting whenever an operation overflows. All three follow the
/// same pivot sequence, so the answer does not depend on which one finished.
pub fn solve_lp(p: &LinearProgram) -> Result<LpSolution> {
    p.validate()?;
    let sf = StandardForm::build(p);
    let sol = run::<Ratio<i64>>(p, &sf)
        .or_else(|_| {
            log::trace!("simplex overflowed 64-bit fractions; retrying with 128 bits");
            run::<Ratio<i128>>(p, &sf)
        })
        .or_else(|_| {
            log::trace!("simplex overflowed 128-bit fractions; retrying with big rationals");
            run::<Rational>(p, &sf)
        })
        .unwrap_or_else(|_| unreachable!("big rationals do not overflow"));
    verified(p, sol)
}

fn verified(p: &LinearProgram, sol: LpSolution) -> Result<LpSolution> {
    if check_solution(p, &sol) {
        Ok(sol)
    } else {
        Err(Error::internal(format!("simplex produced an unverifiable {:?} answer", sol.status)))
    }
}

#[cfg(test)]
pub(super) fn solve_big(p: &LinearProgram) -> Result<LpSolution> {
    p.validate()?;
    let sf = StandardForm::build(p);
    match run::<Rational>(p, &sf) {
        Ok(sol) => verified(p, sol),
        Err(Overflow) => unreachable!(),
    }
}

//! Exact rational simplex.
//!
//! Dense dictionary tableau over `BigRational` with Bland's rule on every
//! pivot. Problems are normalised to `max c·x, A x ≤ b, x ≥ 0`; a phase with
//! one auxiliary variable finds a feasible basis when some `b_i < 0`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

pub const DEFAULT_PIVOT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    labels: Vec<String>,
    free: Vec<bool>,
    rows: Vec<Row>,
    objective: Vec<(usize, Rational)>,
    sense: Sense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    BudgetExhausted,
}

impl LpStatus {
    pub fn name(self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::BudgetExhausted => "budget_exhausted",
        }
    }
}

/// Solver output. `primal` and `dual` are filled only when optimal.
///
/// Dual sign convention (max): `y ≥ 0` on `≤` rows, `y ≤ 0` on `≥` rows, free
/// on `=` rows, `Aᵀy ≥ c` on nonnegative variables and `= c` on free ones,
/// `b·y` = optimum. For min problems every inequality flips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub optimum: Option<Rational>,
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
    pub pivots: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    pub pivot_budget: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { pivot_budget: DEFAULT_PIVOT_BUDGET }
    }
}

impl Default for LinearProgram {
    fn default() -> Self {
        Self::new(Sense::Max)
    }
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        Self { labels: Vec::new(), free: Vec::new(), rows: Vec::new(), objective: Vec::new(), sense }
    }

    pub fn add_var(&mut self, label: impl Into<String>) -> usize {
        self.labels.push(label.into());
        self.free.push(false);
        self.labels.len() - 1
    }

    pub fn add_free_var(&mut self, label: impl Into<String>) -> usize {
        let v = self.add_var(label);
        self.free[v] = true;
        v
    }

    pub fn set_free(&mut self, var: usize, free: bool) {
        self.free[var] = free;
    }

    /// Adds a row; repeated variables are merged and zero terms dropped.
    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> usize {
        assert!(coeffs.iter().all(|(v, _)| *v < self.labels.len()), "row references an undeclared variable");
        self.rows.push(Row { coeffs: merge(coeffs), relation, rhs });
        self.rows.len() - 1
    }

    pub fn set_objective(&mut self, coeffs: Vec<(usize, Rational)>, sense: Sense) {
        assert!(coeffs.iter().all(|(v, _)| *v < self.labels.len()), "objective references an undeclared variable");
        self.objective = merge(coeffs);
        self.sense = sense;
    }

    pub fn num_vars(&self) -> usize {
        self.labels.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn is_free(&self, var: usize) -> bool {
        self.free[var]
    }

    pub fn objective(&self) -> &[(usize, Rational)] {
        &self.objective
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    /// CPLEX-LP text. Variables are written `x<i>`; labels go in comments.
    /// Each row and the objective are scaled to integer coefficients.
    pub fn to_cplex_lp(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "\\ x{i} = {l}");
        }
        let (obj, scale) = integral(&self.objective, &rational::zero());
        if !scale.is_one() {
            let _ = writeln!(out, "\\ objective scaled by {scale}");
        }
        out.push_str(match self.sense {
            Sense::Max => "Maximize\n",
            Sense::Min => "Minimize\n",
        });
        let _ = writeln!(out, " obj: {}", linear_text(&obj.0));
        out.push_str("Subject To\n");
        for (i, r) in self.rows.iter().enumerate() {
            let rel = match r.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            let ((coeffs, rhs), _) = integral(&r.coeffs, &r.rhs);
            let _ = writeln!(out, " r{i}: {} {rel} {rhs}", linear_text(&coeffs));
        }
        if self.free.iter().any(|&f| f) {
            out.push_str("Bounds\n");
            for (i, _) in self.free.iter().enumerate().filter(|(_, &f)| f) {
                let _ = writeln!(out, " x{i} free");
            }
        }
        out.push_str("End\n");
        out
    }
}

/// Multiplies a row by the lcm of its denominators.
fn integral(coeffs: &[(usize, Rational)], rhs: &Rational) -> ((Vec<(usize, BigInt)>, BigInt), BigInt) {
    let scale = coeffs.iter().map(|(_, c)| c.denom().clone()).fold(rhs.denom().clone(), |a, d| a.lcm(&d));
    let r = Rational::from_integer(scale.clone());
    let ints = coeffs.iter().map(|(v, c)| (*v, (c * &r).to_integer())).collect();
    ((ints, (rhs * &r).to_integer()), scale)
}

fn linear_text(coeffs: &[(usize, BigInt)]) -> String {
    if coeffs.is_empty() {
        return "0 x0".into();
    }
    let mut s = String::new();
    for (k, (v, c)) in coeffs.iter().enumerate() {
        let sign = if c.is_negative() { "-" } else if k > 0 { "+" } else { "" };
        let _ = write!(s, "{}{sign} {} x{v}", if k > 0 { " " } else { "" }, c.abs());
    }
    s
}

fn merge(mut coeffs: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    coeffs.sort_by_key(|(v, _)| *v);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(coeffs.len());
    for (v, c) in coeffs {
        match out.last_mut() {
            Some((w, d)) if *w == v => *d += c,
            _ => out.push((v, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

fn dot(coeffs: &[(usize, Rational)], x: &[Rational]) -> Rational {
    coeffs.iter().fold(rational::zero(), |acc, (v, c)| acc + c * &x[*v])
}

/// Internal column: original variable with a sign (free variables split).
#[derive(Clone, Copy)]
struct Column {
    var: usize,
    negated: bool,
}

/// Internal `≤` row derived from an original row, with a sign.
#[derive(Clone, Copy)]
struct Expanded {
    row: usize,
    negated: bool,
}

/// Dictionary `x_B = b − A x_N`, `z = z0 + c·x_N`. Variable ids: structural
/// columns `0..n`, slacks `n..n+m`, auxiliary `n+m`.
struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    c: Vec<Rational>,
    z0: Rational,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    pivots: u64,
    budget: u64,
}

enum Phase {
    Optimal,
    Unbounded,
    Budget,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.a[r][j].clone();
        let inv = p.recip();
        let width = self.nonbasic.len();
        // new pivot row
        let mut prow = std::mem::take(&mut self.a[r]);
        for (k, v) in prow.iter_mut().enumerate() {
            if k != j && !v.is_zero() {
                *v *= &inv;
            }
        }
        prow[j] = inv.clone();
        self.b[r] = &self.b[r] * &inv;
        let support: Vec<usize> = (0..width).filter(|&k| k != j && !prow[k].is_zero()).collect();
        for i in 0..self.a.len() {
            if i == r {
                continue;
            }
            let f = self.a[i][j].clone();
            if f.is_zero() {
                continue;
            }
            let row = &mut self.a[i];
            for &k in &support {
                let t = &f * &prow[k];
                row[k] -= t;
            }
            row[j] = -(&f * &inv);
            let t = &f * &self.b[r];
            self.b[i] -= t;
        }
        let f = self.c[j].clone();
        if !f.is_zero() {
            for &k in &support {
                let t = &f * &prow[k];
                self.c[k] -= t;
            }
            self.c[j] = -(&f * &inv);
            self.z0 += &f * &self.b[r];
        }
        self.a[r] = prow;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[j]);
        self.pivots += 1;
    }

    /// Bland's rule: smallest-id improving column, then smallest-id basic
    /// variable among minimum-ratio rows.
    fn run(&mut self) -> Phase {
        loop {
            let entering = (0..self.nonbasic.len())
                .filter(|&j| self.c[j].is_positive())
                .min_by_key(|&j| self.nonbasic[j]);
            let Some(j) = entering else { return Phase::Optimal };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basic[i] < self.basic[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return Phase::Unbounded };
            if self.pivots >= self.budget {
                return Phase::Budget;
            }
            self.pivot(r, j);
        }
    }
}

pub fn solve(lp: &LinearProgram) -> LpSolution {
    solve_with(lp, SolverOptions::default())
}

pub fn solve_with(lp: &LinearProgram, opts: SolverOptions) -> LpSolution {
    let mut columns = Vec::new();
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(lp.num_vars());
    for v in 0..lp.num_vars() {
        let pos = columns.len();
        columns.push(Column { var: v, negated: false });
        if lp.free[v] {
            columns.push(Column { var: v, negated: true });
            col_of.push((pos, Some(pos + 1)));
        } else {
            col_of.push((pos, None));
        }
    }
    let mut expanded = Vec::new();
    for (i, r) in lp.rows.iter().enumerate() {
        match r.relation {
            Relation::Le => expanded.push(Expanded { row: i, negated: false }),
            Relation::Ge => expanded.push(Expanded { row: i, negated: true }),
            Relation::Eq => {
                expanded.push(Expanded { row: i, negated: false });
                expanded.push(Expanded { row: i, negated: true });
            }
        }
    }
    let n = columns.len();
    let m = expanded.len();
    let coef = |c: &Rational, col: &Column, neg_row: bool| -> Rational {
        let mut x = c.clone();
        if col.negated ^ neg_row {
            x = -x;
        }
        x
    };
    let mut a = vec![vec![rational::zero(); n]; m];
    let mut b = Vec::with_capacity(m);
    for (i, ex) in expanded.iter().enumerate() {
        let row = &lp.rows[ex.row];
        for (v, c) in &row.coeffs {
            let (p, q) = col_of[*v];
            a[i][p] = coef(c, &columns[p], ex.negated);
            if let Some(q) = q {
                a[i][q] = coef(c, &columns[q], ex.negated);
            }
        }
        b.push(if ex.negated { -row.rhs.clone() } else { row.rhs.clone() });
    }
    let mut c = vec![rational::zero(); n];
    let flip = lp.sense == Sense::Min;
    for (v, x) in &lp.objective {
        let (p, q) = col_of[*v];
        c[p] = coef(x, &columns[p], flip);
        if let Some(q) = q {
            c[q] = coef(x, &columns[q], flip);
        }
    }

    let mut t = Tableau {
        a,
        b,
        c: vec![rational::zero(); n],
        z0: rational::zero(),
        basic: (n..n + m).collect(),
        nonbasic: (0..n).collect(),
        pivots: 0,
        budget: opts.pivot_budget,
    };
    let fail = |status, pivots| LpSolution { status, optimum: None, primal: Vec::new(), dual: Vec::new(), pivots };

    // phase one: auxiliary variable x_aux, maximise −x_aux
    let most_negative = (0..m).filter(|&i| t.b[i].is_negative()).min_by(|&i, &k| t.b[i].cmp(&t.b[k]));
    if let Some(r) = most_negative {
        let aux = n + m;
        for row in t.a.iter_mut() {
            row.push(-rational::one());
        }
        t.nonbasic.push(aux);
        t.c = vec![rational::zero(); n + 1];
        t.c[n] = -rational::one();
        t.pivot(r, n);
        match t.run() {
            Phase::Budget => return fail(LpStatus::BudgetExhausted, t.pivots),
            Phase::Unbounded => unreachable!("phase one is bounded by zero"),
            Phase::Optimal => {}
        }
        if t.z0.is_negative() {
            return fail(LpStatus::Infeasible, t.pivots);
        }
        if let Some(r) = t.basic.iter().position(|&v| v == aux) {
            // degenerate: b_r = 0, pivot on any nonzero entry
            let j = (0..t.nonbasic.len()).find(|&j| !t.a[r][j].is_zero()).expect("auxiliary row is nonzero");
            t.pivot(r, j);
        }
        let col = t.nonbasic.iter().position(|&v| v == aux).expect("auxiliary is nonbasic");
        for row in t.a.iter_mut() {
            row.remove(col);
        }
        t.nonbasic.remove(col);
    }

    // express the real objective over the current nonbasic variables
    t.c = vec![rational::zero(); t.nonbasic.len()];
    t.z0 = rational::zero();
    for (j, &v) in t.nonbasic.iter().enumerate() {
        if v < n {
            t.c[j] += &c[v];
        }
    }
    for (i, &v) in t.basic.iter().enumerate() {
        if v < n && !c[v].is_zero() {
            t.z0 += &c[v] * &t.b[i];
            for j in 0..t.nonbasic.len() {
                if !t.a[i][j].is_zero() {
                    let d = &c[v] * &t.a[i][j];
                    t.c[j] -= d;
                }
            }
        }
    }
    match t.run() {
        Phase::Budget => return fail(LpStatus::BudgetExhausted, t.pivots),
        Phase::Unbounded => return fail(LpStatus::Unbounded, t.pivots),
        Phase::Optimal => {}
    }

    let mut xs = vec![rational::zero(); n];
    for (i, &v) in t.basic.iter().enumerate() {
        if v < n {
            xs[v] = t.b[i].clone();
        }
    }
    let mut primal = vec![rational::zero(); lp.num_vars()];
    for (k, col) in columns.iter().enumerate() {
        if col.negated {
            primal[col.var] -= &xs[k];
        } else {
            primal[col.var] += &xs[k];
        }
    }
    let mut ys = vec![rational::zero(); m];
    for (j, &v) in t.nonbasic.iter().enumerate() {
        if v >= n {
            ys[v - n] = -t.c[j].clone();
        }
    }
    let mut dual = vec![rational::zero(); lp.num_rows()];
    for (i, ex) in expanded.iter().enumerate() {
        if ex.negated {
            dual[ex.row] -= &ys[i];
        } else {
            dual[ex.row] += &ys[i];
        }
    }
    let mut optimum = t.z0.clone();
    if flip {
        optimum = -optimum;
        for y in dual.iter_mut() {
            *y = -y.clone();
        }
    }
    LpSolution { status: LpStatus::Optimal, optimum: Some(optimum), primal, dual, pivots: t.pivots }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateError {
    NotOptimal,
    Shape,
    PrimalBound { var: usize },
    PrimalRow { row: usize },
    DualSign { row: usize },
    DualConstraint { var: usize },
    ObjectiveMismatch,
    DualityGap,
}

/// Exact check of primal feasibility, dual feasibility and zero duality gap.
pub fn check_certificate(lp: &LinearProgram, sol: &LpSolution) -> Result<(), CertificateError> {
    if sol.status != LpStatus::Optimal {
        return Err(CertificateError::NotOptimal);
    }
    let opt = sol.optimum.as_ref().ok_or(CertificateError::NotOptimal)?;
    if sol.primal.len() != lp.num_vars() || sol.dual.len() != lp.num_rows() {
        return Err(CertificateError::Shape);
    }
    let x = &sol.primal;
    for v in 0..lp.num_vars() {
        if !lp.free[v] && x[v].is_negative() {
            return Err(CertificateError::PrimalBound { var: v });
        }
    }
    for (i, r) in lp.rows.iter().enumerate() {
        let lhs = dot(&r.coeffs, x);
        let ok = match r.relation {
            Relation::Le => lhs <= r.rhs,
            Relation::Eq => lhs == r.rhs,
            Relation::Ge => lhs >= r.rhs,
        };
        if !ok {
            return Err(CertificateError::PrimalRow { row: i });
        }
    }
    if lp.objective_value(x) != *opt {
        return Err(CertificateError::ObjectiveMismatch);
    }
    // normalise to the max convention
    let s: Rational = if lp.sense == Sense::Max { rational::one() } else { -rational::one() };
    let y: Vec<Rational> = sol.dual.iter().map(|v| v * &s).collect();
    for (i, r) in lp.rows.iter().enumerate() {
        let ok = match r.relation {
            Relation::Le => !y[i].is_negative(),
            Relation::Ge => !y[i].is_positive(),
            Relation::Eq => true,
        };
        if !ok {
            return Err(CertificateError::DualSign { row: i });
        }
    }
    let mut aty = vec![rational::zero(); lp.num_vars()];
    for (i, r) in lp.rows.iter().enumerate() {
        if y[i].is_zero() {
            continue;
        }
        for (v, c) in &r.coeffs {
            aty[*v] += c * &y[i];
        }
    }
    let mut cs = vec![rational::zero(); lp.num_vars()];
    for (v, c) in &lp.objective {
        cs[*v] = c * &s;
    }
    for v in 0..lp.num_vars() {
        let ok = if lp.free[v] { aty[v] == cs[v] } else { aty[v] >= cs[v] };
        if !ok {
            return Err(CertificateError::DualConstraint { var: v });
        }
    }
    let by = lp.rows.iter().zip(&y).fold(rational::zero(), |acc, (r, yi)| acc + &r.rhs * yi);
    if by != opt * &s {
        return Err(CertificateError::DualityGap);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn single_upper_bound() {
        let mut lp = LinearProgram::new(Sense::Max);
        let x = lp.add_var("x");
        lp.add_row(vec![(x, q(1))], Relation::Le, frac(3, 2));
        lp.set_objective(vec![(x, q(1))], Sense::Max);
        let sol = solve(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.optimum, Some(frac(3, 2)));
        assert_eq!(check_certificate(&lp, &sol), Ok(()));
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::new(Sense::Max);
        let x = lp.add_var("x");
        lp.add_row(vec![(x, q(1))], Relation::Le, q(1));
        lp.add_row(vec![(x, q(1))], Relation::Ge, q(2));
        lp.set_objective(vec![(x, q(1))], Sense::Max);
        assert_eq!(solve(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn free_unconstrained_is_unbounded() {
        let mut lp = LinearProgram::new(Sense::Max);
        let x = lp.add_free_var("x");
        lp.set_objective(vec![(x, q(1))], Sense::Max);
        assert_eq!(solve(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn minimisation_with_equalities_and_free_vars() {
        // min x + y s.t. x − y = 1, y ≥ −2, y free
        let mut lp = LinearProgram::new(Sense::Min);
        let x = lp.add_var("x");
        let y = lp.add_free_var("y");
        lp.add_row(vec![(x, q(1)), (y, q(-1))], Relation::Eq, q(1));
        lp.add_row(vec![(y, q(1))], Relation::Ge, q(-2));
        lp.set_objective(vec![(x, q(1)), (y, q(1))], Sense::Min);
        let sol = solve(&lp);
        assert_eq!(sol.optimum, Some(q(-1)));
        assert_eq!(sol.primal, vec![q(0), q(-1)]);
        assert_eq!(check_certificate(&lp, &sol), Ok(()));
    }

    #[test]
    fn perturbed_primal_fails_certificate() {
        let mut lp = LinearProgram::new(Sense::Max);
        let x = lp.add_var("x");
        let y = lp.add_var("y");
        lp.add_row(vec![(x, q(1)), (y, q(1))], Relation::Le, q(4));
        lp.add_row(vec![(x, q(1)), (y, q(3))], Relation::Le, q(6));
        lp.set_objective(vec![(x, q(1)), (y, q(2))], Sense::Max);
        let sol = solve(&lp);
        assert_eq!(sol.optimum, Some(q(5)));
        assert_eq!(check_certificate(&lp, &sol), Ok(()));
        let mut bad = sol.clone();
        bad.primal[0] += frac(1, 1_000_000);
        assert!(check_certificate(&lp, &bad).is_err());
        let mut bad = sol.clone();
        // both rows bind with positive duals
        assert!(sol.dual.iter().all(|y| y.is_positive()));
        bad.dual[0] = q(0);
        assert!(check_certificate(&lp, &bad).is_err());
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance
        let mut lp = LinearProgram::new(Sense::Max);
        let v: Vec<usize> = (0..4).map(|i| lp.add_var(format!("x{i}"))).collect();
        lp.add_row(
            vec![(v[0], frac(1, 4)), (v[1], q(-60)), (v[2], frac(-1, 25)), (v[3], q(9))],
            Relation::Le,
            q(0),
        );
        lp.add_row(
            vec![(v[0], frac(1, 2)), (v[1], q(-90)), (v[2], frac(-1, 50)), (v[3], q(3))],
            Relation::Le,
            q(0),
        );
        lp.add_row(vec![(v[2], q(1))], Relation::Le, q(1));
        lp.set_objective(
            vec![(v[0], frac(3, 4)), (v[1], q(-150)), (v[2], frac(1, 50)), (v[3], q(-6))],
            Sense::Max,
        );
        let sol = solve(&lp);
        assert_eq!(sol.optimum, Some(frac(1, 20)));
        assert_eq!(check_certificate(&lp, &sol), Ok(()));
    }

    #[test]
    fn budget_is_reported_distinctly() {
        let mut lp = LinearProgram::new(Sense::Max);
        let x = lp.add_var("x");
        let y = lp.add_var("y");
        lp.add_row(vec![(x, q(1)), (y, q(1))], Relation::Le, q(4));
        lp.set_objective(vec![(x, q(1)), (y, q(2))], Sense::Max);
        let sol = solve_with(&lp, SolverOptions { pivot_budget: 0 });
        assert_eq!(sol.status, LpStatus::BudgetExhausted);
    }

    #[test]
    fn cplex_dump_lists_every_row() {
        let mut lp = LinearProgram::new(Sense::Min);
        let x = lp.add_free_var("h(a)");
        lp.add_row(vec![(x, frac(-1, 2))], Relation::Ge, q(1));
        lp.set_objective(vec![(x, q(1))], Sense::Min);
        let text = lp.to_cplex_lp();
        assert!(text.contains("Minimize"));
        assert!(text.contains("r0: - 1 x0 >= 2"));
        assert!(text.contains("x0 free"));
    }
}

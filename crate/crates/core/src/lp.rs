//! Dense two-phase primal simplex.
//!
//! Minimizes `c^T x` subject to rows `r_i^T x (<=|>=|=) rhs_i` and per-variable
//! lower bounds (default 0) or free variables. Entering columns follow
//! Dantzig's rule; after a zero-length (degenerate) pivot the solver switches
//! to Bland's smallest-index rule until it makes progress again, which rules
//! out cycling.
//!
//! Dual multipliers are reported as `∂ objective / ∂ rhs_i`: nonnegative for
//! `>=` rows, nonpositive for `<=` rows, free for equalities.

use thiserror::Error;

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 1_000_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub row: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(row: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self { row, relation, rhs }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Bound {
    Lower(f64),
    Free,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

impl LinearProgram {
    /// `min c^T x` with `x >= 0` and no constraints yet.
    pub fn minimize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            bounds: vec![Bound::Lower(0.0); n],
        }
    }

    pub fn with_bound(mut self, var: usize, bound: Bound) -> Self {
        self.bounds[var] = bound;
        self
    }

    pub fn subject_to(mut self, row: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        self.constraints.push(Constraint::new(row, relation, rhs));
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub duals: Vec<f64>,
    pub pivots: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("simplex iteration limit reached after {pivots} pivots (phase {phase})")]
    IterationLimit { pivots: usize, phase: u8 },
}

/// Column layout of the working tableau.
struct Tableau {
    rows: usize,
    cols: usize,
    /// `(rows + 1) x (cols + 1)` row-major; last row holds reduced costs,
    /// last column holds the basic solution.
    data: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    #[inline]
    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.data[pr * w + pc];
        for k in 0..w {
            self.data[pr * w + k] /= p;
        }
        let (before, rest) = self.data.split_at_mut(pr * w);
        let (prow, after) = rest.split_at_mut(w);
        let eliminate = |row: &mut [f64]| {
            let f = row[pc];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[pc] = 0.0;
            }
        };
        before.chunks_mut(w).for_each(eliminate);
        after.chunks_mut(w).for_each(eliminate);
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Runs simplex pivots over columns `< allowed` until optimal.
    /// Returns `Ok(false)` when an improving column has no blocking row.
    fn optimize(&mut self, allowed: usize, phase: u8) -> Result<bool, LpError> {
        let obj = self.rows;
        let mut bland = false;
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Err(LpError::IterationLimit {
                    pivots: self.pivots,
                    phase,
                });
            }
            let entering = if bland {
                (0..allowed).find(|&j| self.at(obj, j) < -COST_TOL)
            } else {
                (0..allowed)
                    .filter(|&j| self.at(obj, j) < -COST_TOL)
                    .min_by(|&a, &b| self.at(obj, a).total_cmp(&self.at(obj, b)))
            };
            let Some(pc) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            let tie = (ratio - lratio).abs() <= 1e-12 * (1.0 + lratio.abs());
                            if ratio < lratio && !tie || tie && self.basis[r] < self.basis[lr] {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((pr, step)) = leave else {
                return Ok(false);
            };
            bland = step <= 1e-12;
            self.pivot(pr, pc);
        }
    }
}

/// Solves the linear program. Infeasibility and unboundedness are reported
/// through [`LpSolution::status`]; only malformed input and the pivot limit
/// are errors.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let n = lp.num_vars();
    if lp.bounds.len() != n {
        return Err(LpError::Malformed(format!(
            "{} bounds for {} variables",
            lp.bounds.len(),
            n
        )));
    }
    if n == 0 {
        return Err(LpError::Malformed("no variables".into()));
    }
    for (i, c) in lp.constraints.iter().enumerate() {
        if c.row.len() != n {
            return Err(LpError::Malformed(format!(
                "row {i} has length {}, expected {n}",
                c.row.len()
            )));
        }
        if !c.rhs.is_finite() || c.row.iter().any(|x| !x.is_finite()) {
            return Err(LpError::Malformed(format!("row {i} is not finite")));
        }
    }
    if lp.objective.iter().any(|x| !x.is_finite()) {
        return Err(LpError::Malformed("objective is not finite".into()));
    }

    // Structural columns: shifted lower-bounded vars, free vars split in two.
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut ncols = 0;
    for b in &lp.bounds {
        match b {
            Bound::Lower(l) if l.is_finite() => {
                col_of.push((ncols, None));
                ncols += 1;
            }
            Bound::Lower(_) => return Err(LpError::Malformed("infinite lower bound".into())),
            Bound::Free => {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
    }
    let n_struct = ncols;
    let m = lp.constraints.len();

    // Normalized rows with nonnegative rhs.
    let mut sign = vec![1.0; m];
    let mut rel = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, c) in lp.constraints.iter().enumerate() {
        let shift: f64 = c
            .row
            .iter()
            .zip(&lp.bounds)
            .map(|(a, b)| match b {
                Bound::Lower(l) => a * l,
                Bound::Free => 0.0,
            })
            .sum();
        let mut r = c.rhs - shift;
        let mut relation = c.relation;
        if r < 0.0 {
            sign[i] = -1.0;
            r = -r;
            relation = match relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        rel.push(relation);
        rhs.push(r);
    }
    let n_slack = rel.iter().filter(|r| **r != Relation::Eq).count();
    let n_art = rel.iter().filter(|r| **r != Relation::Le).count();
    let total = n_struct + n_slack + n_art;
    let w = total + 1;
    let mut data = vec![0.0; (m + 1) * w];
    let mut basis = vec![0; m];
    let mut init_col = vec![0; m];
    let mut slack_col = n_struct;
    let mut art_col = n_struct + n_slack;
    for i in 0..m {
        let row = &lp.constraints[i].row;
        for (j, &(p, neg)) in col_of.iter().enumerate() {
            data[i * w + p] = sign[i] * row[j];
            if let Some(q) = neg {
                data[i * w + q] = -sign[i] * row[j];
            }
        }
        data[i * w + total] = rhs[i];
        match rel[i] {
            Relation::Le => {
                data[i * w + slack_col] = 1.0;
                basis[i] = slack_col;
                init_col[i] = slack_col;
                slack_col += 1;
            }
            Relation::Ge => {
                data[i * w + slack_col] = -1.0;
                slack_col += 1;
                data[i * w + art_col] = 1.0;
                basis[i] = art_col;
                init_col[i] = art_col;
                art_col += 1;
            }
            Relation::Eq => {
                data[i * w + art_col] = 1.0;
                basis[i] = art_col;
                init_col[i] = art_col;
                art_col += 1;
            }
        }
    }
    let art_start = n_struct + n_slack;
    let mut t = Tableau {
        rows: m,
        cols: total,
        data,
        basis,
        pivots: 0,
    };

    // Phase 1: minimize the sum of artificials.
    if n_art > 0 {
        for i in 0..m {
            if t.basis[i] >= art_start {
                for k in 0..w {
                    let v = t.data[i * w + k];
                    t.data[m * w + k] -= v;
                }
            }
        }
        for k in art_start..total {
            t.data[m * w + k] = 0.0;
        }
        t.optimize(art_start, 1)?;
        let infeasibility: f64 = (0..m)
            .filter(|&i| t.basis[i] >= art_start)
            .map(|i| t.rhs(i))
            .sum();
        let scale = 1.0 + rhs.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if infeasibility > 1e-9 * scale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: vec![0.0; n],
                objective_value: f64::NAN,
                duals: vec![0.0; m],
                pivots: t.pivots,
            });
        }
        // Drive remaining zero-level artificials out of the basis.
        for i in 0..m {
            if t.basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| t.at(i, j).abs() > PIVOT_TOL) {
                    t.pivot(i, j);
                }
            }
        }
    }

    // Phase 2 cost row: c - c_B B^-1 A over the current tableau.
    let mut cost = vec![0.0; total];
    for (j, &(p, neg)) in col_of.iter().enumerate() {
        cost[p] = lp.objective[j];
        if let Some(q) = neg {
            cost[q] = -lp.objective[j];
        }
    }
    for k in 0..w {
        t.data[m * w + k] = if k < total { cost[k] } else { 0.0 };
    }
    for i in 0..m {
        let cb = cost[t.basis[i]];
        if cb != 0.0 {
            for k in 0..w {
                let v = t.data[i * w + k];
                t.data[m * w + k] -= cb * v;
            }
        }
    }
    let bounded = t.optimize(art_start, 2)?;

    let mut xs = vec![0.0; total];
    for i in 0..m {
        xs[t.basis[i]] = t.rhs(i);
    }
    let x: Vec<f64> = col_of
        .iter()
        .zip(&lp.bounds)
        .map(|(&(p, neg), b)| match (b, neg) {
            (Bound::Lower(l), _) => l + xs[p],
            (Bound::Free, Some(q)) => xs[p] - xs[q],
            (Bound::Free, None) => unreachable!(),
        })
        .collect();
    if !bounded {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x,
            objective_value: f64::NEG_INFINITY,
            duals: vec![0.0; m],
            pivots: t.pivots,
        });
    }
    // y = c_B B^-1; column init_col[i] of the tableau is B^-1 e_i.
    let duals: Vec<f64> = (0..m)
        .map(|i| {
            let y: f64 = (0..m)
                .map(|r| cost[t.basis[r]] * t.at(r, init_col[i]))
                .sum();
            sign[i] * y
        })
        .collect();
    let objective_value = lp.objective.iter().zip(&x).map(|(c, x)| c * x).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective_value,
        duals,
        pivots: t.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn single_variable_lower_bound_row() {
        let lp = LinearProgram::minimize(vec![1.0]).subject_to(vec![1.0], Relation::Ge, 1.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(s.x[0], 1.0) && close(s.objective_value, 1.0) && close(s.duals[0], 1.0));
    }

    #[test]
    fn two_variable_cover() {
        let lp =
            LinearProgram::minimize(vec![1.0, 1.0]).subject_to(vec![1.0, 1.0], Relation::Ge, 1.0);
        let s = solve_lp(&lp).unwrap();
        assert!(close(s.objective_value, 1.0));
        assert!(close(s.duals[0], 1.0));
    }

    #[test]
    fn unbounded_and_infeasible() {
        let lp = LinearProgram::minimize(vec![-1.0]).subject_to(vec![1.0], Relation::Ge, 0.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
        let lp = LinearProgram::minimize(vec![0.0]).subject_to(vec![1.0], Relation::Le, -1.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn le_rows_have_nonpositive_duals() {
        // min -x1 - x2 s.t. x1 <= 2, x2 <= 3
        let lp = LinearProgram::minimize(vec![-1.0, -1.0])
            .subject_to(vec![1.0, 0.0], Relation::Le, 2.0)
            .subject_to(vec![0.0, 1.0], Relation::Le, 3.0);
        let s = solve_lp(&lp).unwrap();
        assert!(close(s.objective_value, -5.0));
        assert!(close(s.duals[0], -1.0) && close(s.duals[1], -1.0));
    }

    #[test]
    fn equality_and_free_variables() {
        // min x1 + 2 x2 s.t. x1 - x2 = 1, x1 free, x2 >= -3
        let lp = LinearProgram::minimize(vec![1.0, 2.0])
            .with_bound(0, Bound::Free)
            .with_bound(1, Bound::Lower(-3.0))
            .subject_to(vec![1.0, -1.0], Relation::Eq, 1.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(s.x[0], -2.0) && close(s.x[1], -3.0));
        assert!(close(s.objective_value, -8.0));
        assert!(close(s.duals[0], 1.0));
    }

    #[test]
    fn redundant_equalities() {
        let lp = LinearProgram::minimize(vec![1.0, 1.0])
            .subject_to(vec![1.0, 1.0], Relation::Eq, 2.0)
            .subject_to(vec![2.0, 2.0], Relation::Eq, 4.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(s.objective_value, 2.0));
        let by_duals = 2.0 * s.duals[0] + 4.0 * s.duals[1];
        assert!(close(by_duals, 2.0));
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Beale (1955): cycles under the textbook Dantzig rule.
        let lp = LinearProgram::minimize(vec![-0.75, 20.0, -0.5, 6.0])
            .subject_to(vec![0.25, -8.0, -1.0, 9.0], Relation::Le, 0.0)
            .subject_to(vec![0.5, -12.0, -0.5, 3.0], Relation::Le, 0.0)
            .subject_to(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(s.objective_value, -1.25));
        assert!(close(s.duals[0], 0.0) && close(s.duals[1], -1.5) && close(s.duals[2], -1.25));
        assert!(s.pivots < 50);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        let lp = LinearProgram::minimize(vec![1.0, 1.0]).subject_to(vec![1.0], Relation::Ge, 1.0);
        assert!(matches!(solve_lp(&lp), Err(LpError::Malformed(_))));
    }
}

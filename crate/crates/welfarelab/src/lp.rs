//! A small, self-contained dense linear-programming solver.
//!
//! The aggregation module needs three tiny LPs per query (mixture-weight
//! fitting, Pareto separation, and maximality certification), each with at
//! most a few dozen variables. A dense two-phase primal simplex with Bland's
//! anti-cycling rule is exactly the right tool: deterministic, dependency
//! free, exact enough at this scale, and able to hand back the dual prices
//! that serve as violation certificates.
//!
//! The builder accepts the natural formulation — free or nonnegative
//! variables, `<= / = / >=` rows — and performs the standard-form reduction
//! internally (free-variable splitting, slack/surplus columns, artificial
//! phase-1 basis). Duals are recovered at the end by solving `Bᵀπ = c_B`
//! against the *original* standard-form columns, which avoids accumulating
//! tableau roundoff in the certificates.
//!
//! ```
//! use welfarelab::lp::{LpBuilder, Rel};
//!
//! // min  x + y   s.t.  x + 2y >= 4,  3x + y >= 6,  x,y >= 0
//! let mut lp = LpBuilder::new(2);
//! lp.set_objective(&[1.0, 1.0]);
//! lp.add_row(&[1.0, 2.0], Rel::Ge, 4.0);
//! lp.add_row(&[3.0, 1.0], Rel::Ge, 6.0);
//! let sol = lp.solve().unwrap();
//! assert!((sol.value - 2.8).abs() < 1e-9); // x = 1.6, y = 1.2
//! ```

use crate::{Error, Result};

/// Row sense in the natural (pre-standard-form) formulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    /// `coeffs · x <= rhs`
    Le,
    /// `coeffs · x >= rhs`
    Ge,
    /// `coeffs · x == rhs`
    Eq,
}

/// A solved program: optimal value, primal point, and row duals.
#[derive(Debug, Clone)]
pub struct LpSolution {
    /// Optimal objective value (the minimum).
    pub value: f64,
    /// Optimal values of the original variables, in declaration order.
    pub x: Vec<f64>,
    /// One dual price per added row, in row order, with the usual sign
    /// convention for a minimization: `<= 0` for `Le` rows, `>= 0` for `Ge`
    /// rows, free for `Eq` rows. Redundant rows dropped during phase 1
    /// report a zero dual.
    pub duals: Vec<f64>,
}

/// Incrementally describes `min c·x` subject to linear rows.
#[derive(Debug, Clone)]
pub struct LpBuilder {
    n_vars: usize,
    free: Vec<bool>,
    objective: Vec<f64>,
    rows: Vec<(Vec<f64>, Rel, f64)>,
}

/// Entering-column and feasibility threshold for the simplex pivots.
const PIVOT_TOL: f64 = 1e-9;
/// A phase-1 optimum above this is reported as infeasible.
const FEAS_TOL: f64 = 1e-8;

impl LpBuilder {
    /// A program over `n_vars` nonnegative variables and an all-zero
    /// objective; adjust with [`set_free`](Self::set_free) and
    /// [`set_objective`](Self::set_objective).
    pub fn new(n_vars: usize) -> Self {
        LpBuilder {
            n_vars,
            free: vec![false; n_vars],
            objective: vec![0.0; n_vars],
            rows: Vec::new(),
        }
    }

    /// Marks variable `j` as free (unrestricted in sign).
    pub fn set_free(&mut self, j: usize) {
        self.free[j] = true;
    }

    /// Sets the minimization objective `c`.
    ///
    /// # Panics
    /// When `c` has the wrong length (builder misuse, not data error).
    pub fn set_objective(&mut self, c: &[f64]) {
        assert_eq!(c.len(), self.n_vars, "objective length");
        self.objective = c.to_vec();
    }

    /// Adds the row `coeffs · x REL rhs`.
    ///
    /// # Panics
    /// When `coeffs` has the wrong length (builder misuse, not data error).
    pub fn add_row(&mut self, coeffs: &[f64], rel: Rel, rhs: f64) {
        assert_eq!(coeffs.len(), self.n_vars, "row length");
        self.rows.push((coeffs.to_vec(), rel, rhs));
    }

    /// Solves the program.
    ///
    /// Errors with [`Error::LpFailure`] on infeasible or unbounded programs
    /// and on iteration-limit overruns; the callers in this crate construct
    /// feasible bounded programs, so failures indicate internal bugs or
    /// non-finite input data.
    pub fn solve(&self) -> Result<LpSolution> {
        StandardForm::build(self)?.solve(self)
    }
}

/// The standard-form expansion `min c·z  s.t.  A z = b, z >= 0, b >= 0`.
struct StandardForm {
    /// Row-major constraint matrix including slack columns, before pivoting.
    a0: Vec<Vec<f64>>,
    b0: Vec<f64>,
    /// Objective over structural + slack columns (artificials excluded).
    cost: Vec<f64>,
    /// Column range of each original variable: (column, optional negative part).
    var_cols: Vec<(usize, Option<usize>)>,
    /// Per original row: +1/-1 scaling applied to make `b >= 0`.
    row_sign: Vec<f64>,
    n_cols: usize,
}

impl StandardForm {
    fn build(p: &LpBuilder) -> Result<StandardForm> {
        for (coeffs, _, rhs) in &p.rows {
            if coeffs.iter().any(|v| !v.is_finite()) || !rhs.is_finite() {
                return Err(Error::LpFailure("non-finite coefficient".into()));
            }
        }
        let m = p.rows.len();
        // Assign columns: positive part (and negative part for free vars).
        let mut var_cols = Vec::with_capacity(p.n_vars);
        let mut n_cols = 0usize;
        for j in 0..p.n_vars {
            if p.free[j] {
                var_cols.push((n_cols, Some(n_cols + 1)));
                n_cols += 2;
            } else {
                var_cols.push((n_cols, None));
                n_cols += 1;
            }
        }
        let n_structural = n_cols;
        // One slack/surplus column per inequality row.
        let n_slack = p.rows.iter().filter(|(_, rel, _)| *rel != Rel::Eq).count();
        n_cols += n_slack;

        let mut a0 = vec![vec![0.0; n_cols]; m];
        let mut b0 = vec![0.0; m];
        let mut row_sign = vec![1.0; m];
        let mut slack_col = n_structural;
        for (i, (coeffs, rel, rhs)) in p.rows.iter().enumerate() {
            // Normalize to b >= 0 first; this flips the inequality sense.
            let (sign, rel) = if *rhs < 0.0 {
                (
                    -1.0,
                    match rel {
                        Rel::Le => Rel::Ge,
                        Rel::Ge => Rel::Le,
                        Rel::Eq => Rel::Eq,
                    },
                )
            } else {
                (1.0, *rel)
            };
            row_sign[i] = sign;
            b0[i] = sign * rhs;
            for j in 0..p.n_vars {
                let (pos, neg) = var_cols[j];
                a0[i][pos] = sign * coeffs[j];
                if let Some(neg) = neg {
                    a0[i][neg] = -sign * coeffs[j];
                }
            }
            match rel {
                Rel::Le => {
                    a0[i][slack_col] = 1.0;
                    slack_col += 1;
                }
                Rel::Ge => {
                    a0[i][slack_col] = -1.0;
                    slack_col += 1;
                }
                Rel::Eq => {}
            }
        }

        let mut cost = vec![0.0; n_cols];
        for (&(pos, neg), &obj) in var_cols.iter().zip(&p.objective) {
            cost[pos] = obj;
            if let Some(neg) = neg {
                cost[neg] = -obj;
            }
        }

        Ok(StandardForm {
            a0,
            b0,
            cost,
            var_cols,
            row_sign,
            n_cols,
        })
    }

    fn solve(self, p: &LpBuilder) -> Result<LpSolution> {
        let m = self.a0.len();
        if m == 0 {
            // Unconstrained: optimum is 0 at the origin unless some cost is
            // unboundedly improvable.
            if self.cost.iter().any(|&c| c < -PIVOT_TOL) {
                return Err(Error::LpFailure("unbounded (no constraints)".into()));
            }
            return Ok(LpSolution {
                value: 0.0,
                x: vec![0.0; p.n_vars],
                duals: vec![],
            });
        }

        // Tableau with one artificial column per row appended at the end.
        let n_total = self.n_cols + m;
        let mut tab: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut row = self.a0[i].clone();
                row.resize(n_total, 0.0);
                row[self.n_cols + i] = 1.0;
                row
            })
            .collect();
        let mut b = self.b0.clone();
        let mut basis: Vec<usize> = (0..m).map(|i| self.n_cols + i).collect();

        // Phase 1: minimize the sum of artificials.
        let mut phase1_cost = vec![0.0; n_total];
        for c in phase1_cost.iter_mut().skip(self.n_cols) {
            *c = 1.0;
        }
        let p1 = simplex(&mut tab, &mut b, &mut basis, &phase1_cost, n_total)?;
        if p1 > FEAS_TOL {
            return Err(Error::LpFailure(format!(
                "infeasible (phase-1 residual {p1:.3e})"
            )));
        }

        // Drive any residual artificials out of the basis; rows that cannot
        // pivot are redundant and dropped.
        let mut kept_rows: Vec<usize> = (0..m).collect();
        let mut i = 0;
        while i < basis.len() {
            if basis[i] >= self.n_cols {
                let enter = (0..self.n_cols).find(|&j| tab[i][j].abs() > PIVOT_TOL);
                match enter {
                    Some(j) => pivot(&mut tab, &mut b, &mut basis, i, j),
                    None => {
                        tab.remove(i);
                        b.remove(i);
                        basis.remove(i);
                        kept_rows.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }

        // Phase 2: artificial columns are amputated outright.
        for row in &mut tab {
            row.truncate(self.n_cols);
        }
        let mut phase2_cost = self.cost.clone();
        phase2_cost.truncate(self.n_cols);
        let value = simplex(&mut tab, &mut b, &mut basis, &phase2_cost, self.n_cols)?;

        // Primal point in original variable space.
        let mut z = vec![0.0; self.n_cols];
        for (i, &bi) in basis.iter().enumerate() {
            z[bi] = b[i];
        }
        let x: Vec<f64> = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| z[pos] - neg.map_or(0.0, |n| z[n]))
            .collect();

        // Duals from Bᵀπ = c_B over the original (unpivoted) columns.
        let kept = basis.len();
        let mut bt = vec![vec![0.0; kept]; kept];
        let mut cb = vec![0.0; kept];
        for (col, (&bj, cbv)) in basis.iter().zip(cb.iter_mut()).enumerate() {
            *cbv = phase2_cost[bj];
            for (row, &orig_row) in kept_rows.iter().enumerate() {
                // Bᵀ[col][row]: constraint column bj, original row orig_row.
                bt[col][row] = self.a0[orig_row][bj];
            }
        }
        let pi = solve_dense(&mut bt, &mut cb)?;
        let mut duals = vec![0.0; m];
        for (row, &orig_row) in kept_rows.iter().enumerate() {
            duals[orig_row] = self.row_sign[orig_row] * pi[row];
        }

        Ok(LpSolution { value, x, duals })
    }
}

/// Runs Bland-rule primal simplex to optimality on a canonical tableau.
///
/// `tab`/`b` must be in canonical form with respect to `basis` on entry
/// (identity over the basic columns); returns the optimal objective value.
fn simplex(
    tab: &mut [Vec<f64>],
    b: &mut [f64],
    basis: &mut [usize],
    cost: &[f64],
    n_cols: usize,
) -> Result<f64> {
    let m = tab.len();
    for _ in 0..10_000 {
        // Reduced costs r_j = c_j - c_B · (tableau column j).
        let mut entering = None;
        for j in 0..n_cols {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost[j];
            for i in 0..m {
                r -= cost[basis[i]] * tab[i][j];
            }
            if r < -PIVOT_TOL {
                entering = Some(j); // Bland: smallest eligible index
                break;
            }
        }
        let Some(j) = entering else {
            let value = (0..m).map(|i| cost[basis[i]] * b[i]).sum();
            return Ok(value);
        };

        // Ratio test; ties resolved by smallest basis index (Bland).
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if tab[i][j] > PIVOT_TOL {
                let ratio = b[i] / tab[i][j];
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - 1e-12 || (ratio < lr + 1e-12 && basis[i] < basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leave else {
            return Err(Error::LpFailure("unbounded".into()));
        };
        pivot(tab, b, basis, i, j);
    }
    Err(Error::LpFailure("iteration limit".into()))
}

/// Pivots the tableau on `(row, col)`, updating `b` and the basis.
fn pivot(tab: &mut [Vec<f64>], b: &mut [f64], basis: &mut [usize], row: usize, col: usize) {
    let m = tab.len();
    let piv = tab[row][col];
    for v in tab[row].iter_mut() {
        *v /= piv;
    }
    b[row] /= piv;
    for i in 0..m {
        if i == row {
            continue;
        }
        let factor = tab[i][col];
        if factor == 0.0 {
            continue;
        }
        // Split borrow: copy the pivot row once per elimination.
        let pivot_row = tab[row].clone();
        for (v, pv) in tab[i].iter_mut().zip(&pivot_row) {
            *v -= factor * pv;
        }
        b[i] -= factor * b[row];
        if b[i] < 0.0 && b[i] > -1e-11 {
            b[i] = 0.0; // clamp pivoting noise; keeps ratio tests sane
        }
    }
    basis[row] = col;
}

/// Gaussian elimination with partial pivoting; consumes its inputs.
fn solve_dense(a: &mut [Vec<f64>], rhs: &mut [f64]) -> Result<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("nonempty");
        if a[piv][col].abs() < 1e-12 {
            return Err(Error::LpFailure("singular basis in dual solve".into()));
        }
        a.swap(col, piv);
        rhs.swap(col, piv);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            let pivot_row = a[col].clone();
            for (v, pv) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                *v -= f * pv;
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for col in (row + 1)..n {
            acc -= a[row][col] * x[col];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_diet_problem() {
        // min x + y s.t. x + 2y >= 4, 3x + y >= 6 → (1.6, 1.2), value 2.8.
        let mut lp = LpBuilder::new(2);
        lp.set_objective(&[1.0, 1.0]);
        lp.add_row(&[1.0, 2.0], Rel::Ge, 4.0);
        lp.add_row(&[3.0, 1.0], Rel::Ge, 6.0);
        let s = lp.solve().unwrap();
        assert!((s.value - 2.8).abs() < 1e-9);
        assert!((s.x[0] - 1.6).abs() < 1e-9);
        assert!((s.x[1] - 1.2).abs() < 1e-9);
        // Ge duals in a min problem are nonnegative and price the rows:
        // value = π·b.
        assert!(s.duals.iter().all(|&d| d >= -1e-10));
        let priced = s.duals[0] * 4.0 + s.duals[1] * 6.0;
        assert!((priced - s.value).abs() < 1e-9);
    }

    #[test]
    fn equality_rows_and_free_variables() {
        // min |t| reformulated: t free, min u + v with t = u - v is what the
        // builder's free-splitting does internally. Check x + t = 3, x <= 1.
        // min t → t = 2 at x = 1.
        let mut lp = LpBuilder::new(2);
        lp.set_free(1);
        lp.set_objective(&[0.0, 1.0]);
        lp.add_row(&[1.0, 1.0], Rel::Eq, 3.0);
        lp.add_row(&[1.0, 0.0], Rel::Le, 1.0);
        let s = lp.solve().unwrap();
        assert!((s.value - 2.0).abs() < 1e-9);
        assert!((s.x[0] - 1.0).abs() < 1e-9);
        assert!((s.x[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn negative_rhs_rows_are_normalized() {
        // min x s.t. -x <= -5  (i.e. x >= 5)
        let mut lp = LpBuilder::new(1);
        lp.set_objective(&[1.0]);
        lp.add_row(&[-1.0], Rel::Le, -5.0);
        let s = lp.solve().unwrap();
        assert!((s.value - 5.0).abs() < 1e-9);
        // The <= row's dual must respect the original orientation: it prices
        // a relaxation of -x <= -5, so it is <= 0.
        assert!(s.duals[0] <= 1e-10);
    }

    #[test]
    fn infeasible_and_unbounded_are_reported() {
        let mut lp = LpBuilder::new(1);
        lp.add_row(&[1.0], Rel::Le, 1.0);
        lp.add_row(&[1.0], Rel::Ge, 2.0);
        assert!(matches!(lp.solve(), Err(Error::LpFailure(_))));

        let mut lp = LpBuilder::new(1);
        lp.set_objective(&[-1.0]);
        lp.add_row(&[1.0], Rel::Ge, 0.0);
        assert!(matches!(lp.solve(), Err(Error::LpFailure(_))));
    }

    #[test]
    fn redundant_rows_get_zero_duals() {
        // Second row duplicates the first.
        let mut lp = LpBuilder::new(2);
        lp.set_objective(&[1.0, 2.0]);
        lp.add_row(&[1.0, 1.0], Rel::Eq, 1.0);
        lp.add_row(&[1.0, 1.0], Rel::Eq, 1.0);
        let s = lp.solve().unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
        assert!((s.x[0] - 1.0).abs() < 1e-9);
        // One of the duplicate rows is dropped; its dual is zero and the
        // kept one carries the full price.
        let total = s.duals[0] + s.duals[1];
        assert!((total - 1.0).abs() < 1e-8, "duals {:?}", s.duals);
    }

    #[test]
    fn matching_pennies_value_via_lp() {
        // Row player maximizes the game value of [[1,-1],[-1,1]]:
        // max v s.t. p1 - p2 >= v, -p1 + p2 >= v, p1 + p2 = 1, p >= 0.
        // As a min problem: min -v. Optimal mixed strategy (1/2, 1/2), v = 0.
        let mut lp = LpBuilder::new(3); // p1, p2, v
        lp.set_free(2);
        lp.set_objective(&[0.0, 0.0, -1.0]);
        lp.add_row(&[1.0, -1.0, -1.0], Rel::Ge, 0.0);
        lp.add_row(&[-1.0, 1.0, -1.0], Rel::Ge, 0.0);
        lp.add_row(&[1.0, 1.0, 0.0], Rel::Eq, 1.0);
        let s = lp.solve().unwrap();
        assert!(s.value.abs() < 1e-9);
        assert!((s.x[0] - 0.5).abs() < 1e-9);
        assert!((s.x[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn degenerate_ties_terminate_with_bland_rule() {
        // Highly degenerate: many rows active at the optimum.
        let mut lp = LpBuilder::new(2);
        lp.set_objective(&[-1.0, -1.0]);
        for k in 0..6 {
            let t = k as f64 / 5.0;
            lp.add_row(&[1.0 - 0.1 * t, 1.0 + 0.1 * t], Rel::Le, 1.0);
        }
        let s = lp.solve().unwrap();
        assert!(s.value <= -0.9, "value {}", s.value);
    }
}

//! Dense two-phase simplex with Bland's rule:
//! minimize `cᵀx` subject to linear rows and `x ≥ 0`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self, tol: f64) -> Result<LpOutcome> {
        let n = self.objective.len();
        if self.constraints.iter().any(|c| c.coeffs.len() != n) {
            return Err(Error::InvalidInput("constraint width differs from the objective".into()));
        }
        Ok(Tableau::build(self).run(n, &self.objective, tol))
    }
}

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    artificial: Vec<bool>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.objective.len();
        let m = lp.constraints.len();
        let slacks = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        // artificials only where the row has no usable slack
        let needs_art: Vec<bool> = lp
            .constraints
            .iter()
            .map(|c| {
                let flip = c.rhs < 0.0;
                match c.relation {
                    Relation::Eq => true,
                    Relation::Le => flip,
                    Relation::Ge => !flip,
                }
            })
            .collect();
        let arts = needs_art.iter().filter(|&&v| v).count();
        let cols = n + slacks + arts;
        let mut a = vec![vec![0.0; cols + 1]; m];
        let mut basis = vec![0; m];
        let mut artificial = vec![false; cols];
        let (mut s, mut r) = (n, n + slacks);
        for (i, c) in lp.constraints.iter().enumerate() {
            let sign = if c.rhs < 0.0 { -1.0 } else { 1.0 };
            for (j, &v) in c.coeffs.iter().enumerate() {
                a[i][j] = sign * v;
            }
            a[i][cols] = sign * c.rhs;
            if c.relation != Relation::Eq {
                let slack = if c.relation == Relation::Le { 1.0 } else { -1.0 };
                a[i][s] = sign * slack;
                if !needs_art[i] {
                    basis[i] = s;
                }
                s += 1;
            }
            if needs_art[i] {
                a[i][r] = 1.0;
                artificial[r] = true;
                basis[i] = r;
                r += 1;
            }
        }
        Self {
            a,
            basis,
            cols,
            artificial,
        }
    }

    fn run(mut self, n: usize, objective: &[f64], tol: f64) -> LpOutcome {
        let phase1: Vec<f64> = (0..self.cols).map(|j| if self.artificial[j] { 1.0 } else { 0.0 }).collect();
        if self.artificial.iter().any(|&v| v) {
            if !self.optimize(&phase1, &vec![true; self.cols], tol) {
                return LpOutcome::Unbounded;
            }
            if self.value(&phase1) > tol.max(1e-9) * (1.0 + self.rhs_scale()) {
                return LpOutcome::Infeasible;
            }
            self.drive_out_artificials(tol);
        }
        let mut cost = vec![0.0; self.cols];
        cost[..n].copy_from_slice(objective);
        let allowed: Vec<bool> = self.artificial.iter().map(|&v| !v).collect();
        if !self.optimize(&cost, &allowed, tol) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![0.0; n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.a[i][self.cols].max(0.0);
            }
        }
        let objective_value = x.iter().zip(objective).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal(LpSolution {
            x,
            objective: objective_value,
        })
    }

    fn rhs_scale(&self) -> f64 {
        self.a.iter().map(|r| r[self.cols].abs()).fold(0.0, f64::max)
    }

    fn value(&self, cost: &[f64]) -> f64 {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &b)| cost[b] * self.a[i][self.cols])
            .sum()
    }

    /// Returns `false` when the objective is unbounded below.
    fn optimize(&mut self, cost: &[f64], allowed: &[bool], tol: f64) -> bool {
        let m = self.a.len();
        loop {
            // reduced costs; Bland: first improving column
            let mut enter = None;
            for j in 0..self.cols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j];
                for i in 0..m {
                    d -= cost[self.basis[i]] * self.a[i][j];
                }
                if d < -tol {
                    enter = Some(j);
                    break;
                }
            }
            let Some(j) = enter else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let v = self.a[i][j];
                if v > tol {
                    let ratio = self.a[i][self.cols] / v;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - tol || (ratio <= lr + tol && self.basis[i] < self.basis[li]) {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((i, _)) = leave else { return false };
            self.pivot(i, j);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col];
        for v in self.a[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.a[row].clone();
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (v, &pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Pivots zero-level artificials out of the basis where possible.
    fn drive_out_artificials(&mut self, tol: f64) {
        for i in 0..self.a.len() {
            if !self.artificial[self.basis[i]] {
                continue;
            }
            if let Some(j) = (0..self.cols).find(|&j| !self.artificial[j] && self.a[i][j].abs() > tol) {
                self.pivot(i, j);
            }
        }
    }
}

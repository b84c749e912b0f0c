//! Dense two-phase primal simplex over exact rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// Minimize `objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    /// A basic optimal solution.
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs; the last entry is minus the objective value.
    cost: Vec<Rational>,
    /// Columns that may never enter.
    banned: Vec<bool>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if !f.is_zero() {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.basis[r] = c;
    }

    fn set_cost(&mut self, costs: &[Rational]) {
        let w = self.width();
        self.cost = vec![Rational::zero(); w + 1];
        self.cost[..costs.len()].clone_from_slice(costs);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = self.cost[b].clone();
            if !cb.is_zero() {
                for (x, y) in self.cost.iter_mut().zip(&self.rows[i]) {
                    *x -= &cb * y;
                }
            }
        }
    }

    /// Runs to optimality; `false` if unbounded.
    fn optimize(&mut self) -> bool {
        let w = self.width();
        loop {
            let entering = (0..w).find(|&j| !self.banned[j] && self.cost[j].is_negative());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[w] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

pub fn solve(lp: &LinearProgram) -> LpStatus {
    let n = lp.objective.len();
    let m = lp.constraints.len();
    // normalise to nonnegative right-hand sides
    let rows: Vec<(Vec<Rational>, Sense, Rational)> = lp
        .constraints
        .iter()
        .map(|c| {
            assert_eq!(c.coeffs.len(), n, "constraint width");
            if c.rhs.is_negative() {
                let flip = match c.sense {
                    Sense::Ge => Sense::Le,
                    Sense::Le => Sense::Ge,
                    Sense::Eq => Sense::Eq,
                };
                (c.coeffs.iter().map(|x| -x).collect(), flip, -&c.rhs)
            } else {
                (c.coeffs.clone(), c.sense, c.rhs.clone())
            }
        })
        .collect();
    let slacks = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let arts = rows.iter().filter(|r| r.1 != Sense::Le).count();
    let width = n + slacks + arts;
    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        cost: vec![Rational::zero(); width + 1],
        banned: vec![false; width],
    };
    let (mut s, mut a) = (n, n + slacks);
    for (coeffs, sense, rhs) in rows {
        let mut row = vec![Rational::zero(); width + 1];
        row[..n].clone_from_slice(&coeffs);
        row[width] = rhs;
        match sense {
            Sense::Le => {
                row[s] = Rational::from_integer(1.into());
                t.basis.push(s);
                s += 1;
            }
            Sense::Ge => {
                row[s] = Rational::from_integer((-1).into());
                row[a] = Rational::from_integer(1.into());
                t.basis.push(a);
                s += 1;
                a += 1;
            }
            Sense::Eq => {
                row[a] = Rational::from_integer(1.into());
                t.basis.push(a);
                a += 1;
            }
        }
        t.rows.push(row);
    }
    let is_art = |j: usize| j >= n + slacks && j < width;
    if arts > 0 {
        let mut phase1 = vec![Rational::zero(); width];
        for x in phase1.iter_mut().skip(n + slacks) {
            *x = Rational::from_integer(1.into());
        }
        t.set_cost(&phase1);
        t.optimize();
        if !t.cost[width].is_zero() {
            return LpStatus::Infeasible;
        }
        // drive zero-level artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if is_art(t.basis[i]) {
                match (0..n + slacks).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for j in n + slacks..width {
            t.banned[j] = true;
        }
    }
    t.set_cost(&lp.objective);
    if !t.optimize() {
        return LpStatus::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rows[i][width].clone();
        }
    }
    let value = x
        .iter()
        .zip(&lp.objective)
        .fold(Rational::zero(), |acc, (xi, ci)| acc + xi * ci);
    LpStatus::Optimal { x, value }
}

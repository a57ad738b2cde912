//! Exact rational linear programming.
//!
//! Two-phase dense tableau simplex with Bland's smallest-index rule, so it
//! terminates on degenerate problems. Every returned point is re-checked by
//! substitution into the original constraints and bounds.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective · x` subject to linear constraints and per-variable
/// bounds. Variables are free unless bounds are set.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            lower: vec![None; num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) -> &mut Self {
        self.objective = objective;
        self
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn set_nonnegative(&mut self, var: usize) -> &mut Self {
        self.lower[var] = Some(Rational::zero());
        self
    }

    fn check_dimensions(&self) -> Result<()> {
        let n = self.num_vars;
        if self.objective.len() != n {
            return Err(Error::Dimension(format!(
                "objective has {} coefficients, expected {n}",
                self.objective.len()
            )));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::Dimension(format!(
                    "constraint {k} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Dimension("bounds length".into()));
        }
        Ok(())
    }

    /// True iff `point` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars {
            return false;
        }
        let bounds_ok = point.iter().enumerate().all(|(j, v)| {
            self.lower[j].as_ref().is_none_or(|l| v >= l) && self.upper[j].as_ref().is_none_or(|u| v <= u)
        });
        bounds_ok
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coeffs, point);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    pub fn value_at(&self, point: &[Rational]) -> Rational {
        dot(&self.objective, point)
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        self.check_dimensions()?;
        let std = StandardForm::build(self);
        let outcome = std.solve()?;
        if let LpOutcome::Optimal { value, point } = &outcome {
            if !self.is_feasible(point) {
                return Err(Error::Internal("simplex returned an infeasible point".into()));
            }
            if self.value_at(point) != *value {
                return Err(Error::Internal("simplex objective mismatch".into()));
            }
        }
        Ok(outcome)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Original variable `x_j = offset + Σ coef · y_k` over non-negative `y`.
struct VarMap {
    offset: Rational,
    terms: Vec<(usize, Rational)>,
}

struct StandardForm {
    maps: Vec<VarMap>,
    num_y: usize,
    /// Rows `a · y (rel) b` over the non-negative y variables.
    rows: Vec<(Vec<Rational>, Relation, Rational)>,
    cost: Vec<Rational>,
    objective_offset: Rational,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut maps = Vec::with_capacity(lp.num_vars);
        let mut num_y = 0;
        let mut extra_rows = Vec::new();
        for j in 0..lp.num_vars {
            match (&lp.lower[j], &lp.upper[j]) {
                (Some(l), u) => {
                    let k = num_y;
                    num_y += 1;
                    maps.push(VarMap {
                        offset: l.clone(),
                        terms: vec![(k, Rational::one())],
                    });
                    if let Some(u) = u {
                        extra_rows.push((k, u - l));
                    }
                }
                (None, Some(u)) => {
                    let k = num_y;
                    num_y += 1;
                    maps.push(VarMap {
                        offset: u.clone(),
                        terms: vec![(k, -Rational::one())],
                    });
                }
                (None, None) => {
                    let k = num_y;
                    num_y += 2;
                    maps.push(VarMap {
                        offset: Rational::zero(),
                        terms: vec![(k, Rational::one()), (k + 1, -Rational::one())],
                    });
                }
            }
        }
        let substitute = |coeffs: &[Rational]| -> (Vec<Rational>, Rational) {
            let mut row = vec![Rational::zero(); num_y];
            let mut constant = Rational::zero();
            for (j, a) in coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                constant += a * &maps[j].offset;
                for (k, c) in &maps[j].terms {
                    row[*k] += a * c;
                }
            }
            (row, constant)
        };
        let mut rows = Vec::new();
        for c in &lp.constraints {
            let (row, constant) = substitute(&c.coeffs);
            rows.push((row, c.relation, &c.rhs - constant));
        }
        for (k, width) in extra_rows {
            let mut row = vec![Rational::zero(); num_y];
            row[k] = Rational::one();
            rows.push((row, Relation::Le, width));
        }
        let (cost, objective_offset) = substitute(&lp.objective);
        StandardForm {
            maps,
            num_y,
            rows,
            cost,
            objective_offset,
        }
    }

    fn solve(&self) -> Result<LpOutcome> {
        let m = self.rows.len();
        // Column layout: y variables, then one slack/surplus per inequality
        // row, then artificials.
        let num_slack = self.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut basis: Vec<Option<usize>> = vec![None; m];
        let mut slack_col = self.num_y;
        let mut needs_artificial = Vec::new();
        let width_wo_art = self.num_y + num_slack;
        for (r, (row, rel, rhs)) in self.rows.iter().enumerate() {
            let mut t = row.clone();
            t.resize(width_wo_art, Rational::zero());
            let mut b = rhs.clone();
            let mut slack = None;
            match rel {
                Relation::Le => {
                    t[slack_col] = Rational::one();
                    slack = Some(slack_col);
                    slack_col += 1;
                }
                Relation::Ge => {
                    t[slack_col] = -Rational::one();
                    slack = Some(slack_col);
                    slack_col += 1;
                }
                Relation::Eq => {}
            }
            if b.is_negative() {
                for v in t.iter_mut() {
                    *v = -v.clone();
                }
                b = -b;
            }
            match slack {
                Some(col) if t[col].is_one() => basis[r] = Some(col),
                _ => needs_artificial.push(r),
            }
            t.push(b);
            tableau.push(t);
        }
        let num_art = needs_artificial.len();
        let width = width_wo_art + num_art;
        for t in tableau.iter_mut() {
            let b = t.pop().expect("rhs present");
            t.resize(width, Rational::zero());
            t.push(b);
        }
        for (a, &r) in needs_artificial.iter().enumerate() {
            let col = width_wo_art + a;
            tableau[r][col] = Rational::one();
            basis[r] = Some(col);
        }
        let mut basis: Vec<usize> = basis
            .into_iter()
            .map(|b| b.expect("every row has a basic column"))
            .collect();

        let mut tab = Tableau {
            rows: tableau,
            basis: std::mem::take(&mut basis),
            width,
        };

        if num_art > 0 {
            let mut phase1 = vec![Rational::zero(); width];
            for c in phase1.iter_mut().skip(width_wo_art) {
                *c = -Rational::one();
            }
            match tab.run(&phase1, width)? {
                Status::Optimal => {}
                Status::Unbounded => return Err(Error::Internal("phase one unbounded".into())),
            }
            if tab.objective_value(&phase1).is_negative() {
                return Ok(LpOutcome::Infeasible);
            }
            tab.drive_out_artificials(width_wo_art);
        }

        let mut cost = self.cost.clone();
        cost.resize(width, Rational::zero());
        match tab.run(&cost, width_wo_art)? {
            Status::Unbounded => Ok(LpOutcome::Unbounded),
            Status::Optimal => {
                let mut y = vec![Rational::zero(); width];
                for (r, &b) in tab.basis.iter().enumerate() {
                    y[b] = tab.rows[r][tab.width].clone();
                }
                let point: Vec<Rational> = self
                    .maps
                    .iter()
                    .map(|m| m.terms.iter().fold(m.offset.clone(), |acc, (k, c)| acc + c * &y[*k]))
                    .collect();
                let value = dot(&self.cost, &y[..self.num_y]) + &self.objective_offset;
                Ok(LpOutcome::Optimal { value, point })
            }
        }
    }
}

enum Status {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Number of variable columns; the rhs sits at index `width`.
    width: usize,
}

impl Tableau {
    fn objective_value(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().enumerate().fold(Rational::zero(), |acc, (r, &b)| {
            acc + &cost[b] * &self.rows[r][self.width]
        })
    }

    fn reduced_cost(&self, cost: &[Rational], col: usize) -> Rational {
        let mut d = cost[col].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.rows[r][col].is_zero() {
                d -= &cost[b] * &self.rows[r][col];
            }
        }
        d
    }

    /// Maximizes `cost · y` using only columns below `allowed`.
    fn run(&mut self, cost: &[Rational], allowed: usize) -> Result<Status> {
        loop {
            let entering = (0..allowed)
                .filter(|c| !self.basis.contains(c))
                .find(|&c| self.reduced_cost(cost, c).is_positive());
            let Some(col) = entering else {
                return Ok(Status::Optimal);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][self.width] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                None => return Ok(Status::Unbounded),
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// After a feasible phase one, pivots zero-valued artificials out of the
    /// basis and drops rows that are linear combinations of the others.
    fn drive_out_artificials(&mut self, first_artificial: usize) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= first_artificial {
                let col = (0..first_artificial).find(|&c| !self.rows[r][c].is_zero());
                match col {
                    Some(c) => {
                        self.pivot(r, c);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn one_variable_box() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(vec![int(1)])
            .add_constraint(vec![int(1)], Relation::Le, int(1))
            .add_constraint(vec![int(1)], Relation::Ge, int(0));
        assert_eq!(
            lp.solve().unwrap(),
            LpOutcome::Optimal {
                value: int(1),
                point: vec![int(1)]
            }
        );
    }

    #[test]
    fn contradictory_bounds() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(vec![int(1)])
            .add_constraint(vec![int(1)], Relation::Le, int(-1))
            .add_constraint(vec![int(1)], Relation::Ge, int(0));
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn two_variable_face() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(vec![int(1), int(1)])
            .add_constraint(vec![int(1), int(1)], Relation::Le, ratio(3, 2))
            .set_nonnegative(0)
            .set_nonnegative(1);
        match lp.solve().unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, ratio(3, 2));
                assert_eq!(&point[0] + &point[1], ratio(3, 2));
                assert!(point.iter().all(|v| !v.is_negative()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_and_bounds_only() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(vec![int(1), int(0)]).set_nonnegative(0);
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);

        let mut lp = LinearProgram::new(2);
        lp.set_objective(vec![int(2), int(-1)])
            .set_bounds(0, Some(int(-1)), Some(ratio(5, 2)))
            .set_bounds(1, None, Some(int(4)));
        // No constraints at all: answered from the bounds.
        assert_eq!(
            lp.solve().unwrap(),
            LpOutcome::Unbounded,
            "y unbounded below makes -y unbounded"
        );
        lp.set_bounds(1, Some(int(-3)), Some(int(4)));
        assert_eq!(
            lp.solve().unwrap(),
            LpOutcome::Optimal {
                value: int(8),
                point: vec![ratio(5, 2), int(-3)]
            }
        );
    }

    #[test]
    fn equality_with_redundant_rows() {
        let mut lp = LinearProgram::new(3);
        lp.set_objective(vec![int(1), int(2), int(3)]);
        for j in 0..3 {
            lp.set_nonnegative(j);
        }
        lp.add_constraint(vec![int(1), int(1), int(1)], Relation::Eq, int(1))
            .add_constraint(vec![int(2), int(2), int(2)], Relation::Eq, int(2))
            .add_constraint(vec![int(0), int(0), int(1)], Relation::Le, ratio(1, 3));
        match lp.solve().unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, ratio(7, 3));
                assert_eq!(point, vec![int(0), ratio(2, 3), ratio(1, 3)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        let mut lp = LinearProgram::new(2);
        lp.add_constraint(vec![int(1)], Relation::Le, int(1));
        assert!(matches!(lp.solve(), Err(Error::Dimension(_))));
    }
}

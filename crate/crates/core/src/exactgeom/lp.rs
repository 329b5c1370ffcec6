//! Exact two-phase simplex over rationals.
//!
//! The tableau is dense and pivoting follows Bland's rule, which rules out
//! cycling. Problems here are desk-sized (tens of rows), so clarity wins over
//! speed.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::dot;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarBound {
    Free,
    NonNegative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `direction objective · x` subject to `constraints`, with per-variable
/// sign bounds (free unless stated otherwise).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub direction: Direction,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        optimum: Rational,
        witness: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimum(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { optimum, .. } => Some(optimum),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(direction: Direction, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            direction,
            objective,
            constraints: Vec::new(),
            bounds: vec![VarBound::Free; n],
        }
    }

    pub fn minimize(objective: Vec<Rational>) -> Self {
        Self::new(Direction::Minimize, objective)
    }

    pub fn maximize(objective: Vec<Rational>) -> Self {
        Self::new(Direction::Maximize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn nonnegative(mut self) -> Self {
        self.bounds
            .iter_mut()
            .for_each(|b| *b = VarBound::NonNegative);
        self
    }

    pub fn set_bound(&mut self, var: usize, bound: VarBound) {
        self.bounds[var] = bound;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn with_constraint(
        mut self,
        coeffs: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> Self {
        self.add_constraint(coeffs, relation, rhs);
        self
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    /// Exact feasibility test of a candidate point.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && self
                .bounds
                .iter()
                .zip(x)
                .all(|(b, v)| *b == VarBound::Free || !v.is_negative())
            && self
                .constraints
                .iter()
                .all(|c| c.relation.holds(&dot(&c.coeffs, x), &c.rhs))
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::Shape(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::Shape(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    /// The Lagrangian dual, built mechanically. Dual variables of sign
    /// `≤ 0` are substituted by their negation so every dual variable is
    /// either free or nonnegative. The dual optimum equals the primal one.
    pub fn dual(&self) -> LinearProgram {
        let m = self.constraints.len();
        let n = self.num_vars();
        // Sign of each dual variable: +1 nonnegative, -1 nonpositive, 0 free.
        let sign: Vec<i8> = self
            .constraints
            .iter()
            .map(|c| match (self.direction, c.relation) {
                (_, Relation::Eq) => 0,
                (Direction::Maximize, Relation::Le) | (Direction::Minimize, Relation::Ge) => 1,
                _ => -1,
            })
            .collect();
        let flip = |i: usize, v: &Rational| if sign[i] < 0 { -v.clone() } else { v.clone() };
        let objective: Vec<Rational> = (0..m).map(|i| flip(i, &self.constraints[i].rhs)).collect();
        let dual_dir = match self.direction {
            Direction::Maximize => Direction::Minimize,
            Direction::Minimize => Direction::Maximize,
        };
        let mut dual = LinearProgram::new(dual_dir, objective);
        for (i, s) in sign.iter().enumerate() {
            if *s != 0 {
                dual.set_bound(i, VarBound::NonNegative);
            }
        }
        for j in 0..n {
            let coeffs = (0..m)
                .map(|i| flip(i, &self.constraints[i].coeffs[j]))
                .collect();
            let relation = match (self.bounds[j], self.direction) {
                (VarBound::Free, _) => Relation::Eq,
                (VarBound::NonNegative, Direction::Maximize) => Relation::Ge,
                (VarBound::NonNegative, Direction::Minimize) => Relation::Le,
            };
            dual.add_constraint(coeffs, relation, self.objective[j].clone());
        }
        dual
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    reduced: Vec<Rational>,
    value: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        let nonzero: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for &j in &nonzero {
                let delta = &f * &prow[j];
                self.rows[i][j] -= delta;
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.reduced[c].is_zero() {
            let f = self.reduced[c].clone();
            for &j in &nonzero {
                let delta = &f * &prow[j];
                self.reduced[j] -= delta;
            }
            self.value -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Sets the cost vector (minimization) and recomputes reduced costs.
    fn set_costs(&mut self, costs: &[Rational]) {
        let mut reduced = costs.to_vec();
        let mut value = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    reduced[j] -= cb * v;
                }
            }
            value += cb * &self.rhs[i];
        }
        self.reduced = reduced;
        // `value` tracks minus the objective so that pivots update it uniformly.
        self.value = -value;
    }

    fn objective(&self) -> Rational {
        -self.value.clone()
    }

    /// Runs Bland-rule simplex; `Err(())` means unbounded.
    fn run(&mut self, allowed: &[bool]) -> std::result::Result<(), ()> {
        loop {
            let entering =
                (0..self.reduced.len()).find(|&j| allowed[j] && self.reduced[j].is_negative());
            let Some(c) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Err(()),
            }
        }
    }
}

/// Solves `lp` exactly. Infeasibility and unboundedness are outcomes, not
/// errors; only malformed programs are rejected.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.check_shape()?;
    let n = lp.num_vars();

    // Structural columns: one per nonnegative variable, two per free one.
    let mut pos_col = Vec::with_capacity(n);
    let mut neg_col = Vec::with_capacity(n);
    let mut ncols = 0;
    for b in &lp.bounds {
        pos_col.push(ncols);
        ncols += 1;
        if *b == VarBound::Free {
            neg_col.push(Some(ncols));
            ncols += 1;
        } else {
            neg_col.push(None);
        }
    }
    let structural = ncols;

    struct Row {
        coeffs: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    }
    let rows: Vec<Row> = lp
        .constraints
        .iter()
        .map(|c| {
            let mut coeffs = vec![Rational::zero(); structural];
            for j in 0..n {
                coeffs[pos_col[j]] = c.coeffs[j].clone();
                if let Some(nc) = neg_col[j] {
                    coeffs[nc] = -c.coeffs[j].clone();
                }
            }
            if c.rhs.is_negative() {
                Row {
                    coeffs: coeffs.into_iter().map(|v| -v).collect(),
                    relation: c.relation.flipped(),
                    rhs: -c.rhs.clone(),
                }
            } else {
                Row {
                    coeffs,
                    relation: c.relation,
                    rhs: c.rhs.clone(),
                }
            }
        })
        .collect();

    let m = rows.len();
    let slack_count = rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let artificial_count = rows.iter().filter(|r| r.relation != Relation::Le).count();
    let total = structural + slack_count + artificial_count;
    let mut is_artificial = vec![false; total];

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        reduced: Vec::new(),
        value: Rational::zero(),
    };
    let mut next_slack = structural;
    let mut next_art = structural + slack_count;
    for row in rows {
        let mut full = row.coeffs;
        full.resize(total, Rational::zero());
        let basic = match row.relation {
            Relation::Le => {
                full[next_slack] = Rational::from_integer(1.into());
                next_slack += 1;
                next_slack - 1
            }
            Relation::Ge => {
                full[next_slack] = Rational::from_integer((-1).into());
                next_slack += 1;
                full[next_art] = Rational::from_integer(1.into());
                is_artificial[next_art] = true;
                next_art += 1;
                next_art - 1
            }
            Relation::Eq => {
                full[next_art] = Rational::from_integer(1.into());
                is_artificial[next_art] = true;
                next_art += 1;
                next_art - 1
            }
        };
        tab.rows.push(full);
        tab.rhs.push(row.rhs);
        tab.basis.push(basic);
    }

    if artificial_count > 0 {
        let costs: Vec<Rational> = is_artificial
            .iter()
            .map(|&a| Rational::from_integer(i32::from(a).into()))
            .collect();
        tab.set_costs(&costs);
        let allowed = vec![true; total];
        tab.run(&allowed)
            .expect("phase one objective is bounded below by zero");
        if tab.objective().is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining zero-level artificials out of the basis; rows
        // where that is impossible are redundant and dropped.
        let mut i = 0;
        while i < tab.rows.len() {
            if is_artificial[tab.basis[i]] {
                let col = (0..total).find(|&j| !is_artificial[j] && !tab.rows[i][j].is_zero());
                match col {
                    Some(j) => {
                        tab.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.rhs.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut costs = vec![Rational::zero(); total];
    for j in 0..n {
        let c = match lp.direction {
            Direction::Minimize => lp.objective[j].clone(),
            Direction::Maximize => -lp.objective[j].clone(),
        };
        if let Some(nc) = neg_col[j] {
            costs[nc] = -c.clone();
        }
        costs[pos_col[j]] = c;
    }
    tab.set_costs(&costs);
    let allowed: Vec<bool> = is_artificial.iter().map(|a| !a).collect();
    if tab.run(&allowed).is_err() {
        return Ok(LpOutcome::Unbounded);
    }

    let mut colval = vec![Rational::zero(); total];
    for (i, &b) in tab.basis.iter().enumerate() {
        colval[b] = tab.rhs[i].clone();
    }
    let witness: Vec<Rational> = (0..n)
        .map(|j| {
            let p = colval[pos_col[j]].clone();
            match neg_col[j] {
                Some(nc) => p - &colval[nc],
                None => p,
            }
        })
        .collect();
    let optimum = lp.objective_value(&witness);
    debug_assert!(lp.is_feasible(&witness));
    Ok(LpOutcome::Optimal { optimum, witness })
}

//! Exact linear programming over rationals.
//!
//! A small dense two-phase simplex with Bland's anti-cycling pivot rule.
//! Problem sizes here are tiny (around ten variables, at most a few hundred
//! constraints), so exactness wins over sparse cleverness: every tableau
//! entry is an arbitrary-precision rational and every reported optimum is
//! re-verified against the original program before being returned.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Constraint sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// A single linear constraint `coeffs · x <relation> rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// Optional per-variable bounds; a missing lower bound makes the variable
/// free (it is split internally).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarBounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl VarBounds {
    pub fn free() -> Self {
        VarBounds::default()
    }

    pub fn at_least(lower: Rational) -> Self {
        VarBounds {
            lower: Some(lower),
            upper: None,
        }
    }

    pub fn between(lower: Rational, upper: Rational) -> Self {
        VarBounds {
            lower: Some(lower),
            upper: Some(upper),
        }
    }
}

/// A maximization problem over rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBounds>,
}

impl LinearProgram {
    /// Program with the given objective, no constraints and free variables.
    pub fn new(objective: Vec<Rational>) -> Self {
        let bounds = vec![VarBounds::free(); objective.len()];
        LinearProgram {
            objective,
            constraints: Vec::new(),
            bounds,
        }
    }
}

/// Solver verdict. An `Optimal` point satisfies every constraint and bound
/// exactly, and `value` equals `objective · point` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// Maximizes the program exactly.
pub fn solve_max(lp: &LinearProgram) -> Result<LpOutcome> {
    validate(lp)?;

    // Variable representation over nonnegative tableau columns:
    // bounded below:  x_j = lower + y[pos]
    // free:           x_j = y[pos] - y[neg]
    struct VarRep {
        pos: usize,
        neg: Option<usize>,
        offset: Rational,
    }

    let mut reps = Vec::with_capacity(lp.objective.len());
    let mut structural = 0usize;
    for bounds in &lp.bounds {
        match &bounds.lower {
            Some(lower) => {
                reps.push(VarRep {
                    pos: structural,
                    neg: None,
                    offset: lower.clone(),
                });
                structural += 1;
            }
            None => {
                reps.push(VarRep {
                    pos: structural,
                    neg: Some(structural + 1),
                    offset: Rational::zero(),
                });
                structural += 2;
            }
        }
    }

    // Rows: the original constraints plus one row per upper bound.
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for constraint in &lp.constraints {
        rows.push((
            constraint.coeffs.clone(),
            constraint.relation,
            constraint.rhs.clone(),
        ));
    }
    for (j, bounds) in lp.bounds.iter().enumerate() {
        if let Some(upper) = &bounds.upper {
            let mut coeffs = vec![Rational::zero(); lp.objective.len()];
            coeffs[j] = Rational::from_integer(1.into());
            rows.push((coeffs, Relation::Le, upper.clone()));
        }
    }

    // Substitute into y space and normalize right-hand sides to >= 0.
    let mut y_rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(rows.len());
    for (coeffs, relation, rhs) in rows {
        let mut y_coeffs = vec![Rational::zero(); structural];
        let mut y_rhs = rhs;
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            y_coeffs[reps[j].pos] += c;
            if let Some(neg) = reps[j].neg {
                y_coeffs[neg] -= c;
            }
            y_rhs -= c * &reps[j].offset;
        }
        let relation = if y_rhs < Rational::zero() {
            for c in &mut y_coeffs {
                *c = -std::mem::take(c);
            }
            y_rhs = -y_rhs;
            match relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            }
        } else {
            relation
        };
        y_rows.push((y_coeffs, relation, y_rhs));
    }

    // Objective over y columns.
    let mut y_obj = vec![Rational::zero(); structural];
    for (j, c) in lp.objective.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        y_obj[reps[j].pos] += c;
        if let Some(neg) = reps[j].neg {
            y_obj[neg] -= c;
        }
    }

    let outcome = match Tableau::solve(structural, &y_rows, &y_obj) {
        TableauOutcome::Infeasible => LpOutcome::Infeasible,
        TableauOutcome::Unbounded => LpOutcome::Unbounded,
        TableauOutcome::Optimal(y) => {
            let point: Vec<Rational> = reps
                .iter()
                .map(|rep| {
                    let mut x = rep.offset.clone() + &y[rep.pos];
                    if let Some(neg) = rep.neg {
                        x -= &y[neg];
                    }
                    x
                })
                .collect();
            let value: Rational = lp
                .objective
                .iter()
                .zip(&point)
                .map(|(c, x)| c * x)
                .sum();
            verify_certificate(lp, &point);
            LpOutcome::Optimal { value, point }
        }
    };
    Ok(outcome)
}

fn validate(lp: &LinearProgram) -> Result<()> {
    let width = lp.objective.len();
    if width == 0 {
        return Err(Error::Domain("linear program has no variables".into()));
    }
    if lp.bounds.len() != width {
        return Err(Error::Domain(format!(
            "expected {} variable bounds, found {}",
            width,
            lp.bounds.len()
        )));
    }
    for (r, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != width {
            return Err(Error::Domain(format!(
                "constraint {} has {} coefficients, expected {}",
                r + 1,
                c.coeffs.len(),
                width
            )));
        }
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        if let (Some(lower), Some(upper)) = (&b.lower, &b.upper) {
            if lower > upper {
                return Err(Error::Domain(format!(
                    "variable {} has inconsistent bounds {} > {}",
                    j + 1,
                    lower,
                    upper
                )));
            }
        }
    }
    Ok(())
}

/// Aborts if the point violates any constraint or bound of the original
/// program; a failure here is a solver bug, never a caller error.
fn verify_certificate(lp: &LinearProgram, point: &[Rational]) {
    for (r, c) in lp.constraints.iter().enumerate() {
        let lhs: Rational = c.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs,
            Relation::Ge => lhs >= c.rhs,
            Relation::Eq => lhs == c.rhs,
        };
        assert!(
            ok,
            "simplex certificate check failed on constraint {}: {} vs {}",
            r + 1,
            lhs,
            c.rhs
        );
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        if let Some(lower) = &b.lower {
            assert!(
                &point[j] >= lower,
                "simplex certificate check failed on lower bound of variable {}",
                j + 1
            );
        }
        if let Some(upper) = &b.upper {
            assert!(
                &point[j] <= upper,
                "simplex certificate check failed on upper bound of variable {}",
                j + 1
            );
        }
    }
}

enum TableauOutcome {
    Optimal(Vec<Rational>),
    Infeasible,
    Unbounded,
}

enum StepOutcome {
    Optimal,
    Unbounded,
}

/// Dense simplex tableau over `maximize c·y, A y {<=,>=,=} b, y >= 0, b >= 0`.
struct Tableau {
    matrix: Vec<Vec<Rational>>, // rows x columns
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    artificial_start: usize, // columns >= this are artificial
    columns: usize,
}

impl Tableau {
    fn solve(
        structural: usize,
        rows: &[(Vec<Rational>, Relation, Rational)],
        objective: &[Rational],
    ) -> TableauOutcome {
        let n_rows = rows.len();
        let n_slack = rows
            .iter()
            .filter(|(_, rel, _)| !matches!(rel, Relation::Eq))
            .count();
        let n_artificial = rows
            .iter()
            .filter(|(_, rel, _)| !matches!(rel, Relation::Le))
            .count();
        let columns = structural + n_slack + n_artificial;

        let mut matrix = vec![vec![Rational::zero(); columns]; n_rows];
        let mut rhs = Vec::with_capacity(n_rows);
        let mut basis = vec![usize::MAX; n_rows];
        let mut next_slack = structural;
        let artificial_start = structural + n_slack;
        let mut next_artificial = artificial_start;

        for (r, (coeffs, relation, b)) in rows.iter().enumerate() {
            matrix[r][..structural].clone_from_slice(coeffs);
            rhs.push(b.clone());
            match relation {
                Relation::Le => {
                    matrix[r][next_slack] = Rational::from_integer(1.into());
                    basis[r] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    matrix[r][next_slack] = Rational::from_integer((-1).into());
                    next_slack += 1;
                    matrix[r][next_artificial] = Rational::from_integer(1.into());
                    basis[r] = next_artificial;
                    next_artificial += 1;
                }
                Relation::Eq => {
                    matrix[r][next_artificial] = Rational::from_integer(1.into());
                    basis[r] = next_artificial;
                    next_artificial += 1;
                }
            }
        }

        let mut tableau = Tableau {
            matrix,
            rhs,
            basis,
            artificial_start,
            columns,
        };

        if n_artificial > 0 {
            // Phase 1: maximize minus the sum of artificials.
            let mut phase1 = vec![Rational::zero(); columns];
            for c in phase1.iter_mut().skip(artificial_start) {
                *c = Rational::from_integer((-1).into());
            }
            match tableau.run(&phase1, columns) {
                StepOutcome::Optimal => {}
                StepOutcome::Unbounded => unreachable!("phase 1 objective is bounded by zero"),
            }
            let infeasibility: Rational = tableau
                .basis
                .iter()
                .zip(&tableau.rhs)
                .filter(|(col, _)| **col >= artificial_start)
                .map(|(_, b)| b.clone())
                .sum();
            if !infeasibility.is_zero() {
                return TableauOutcome::Infeasible;
            }
            tableau.evict_artificials();
        }

        // Phase 2 over the original objective; artificial columns are gone.
        let mut phase2 = vec![Rational::zero(); tableau.columns];
        phase2[..structural].clone_from_slice(&objective[..structural]);
        match tableau.run(&phase2, tableau.artificial_start) {
            StepOutcome::Optimal => {}
            StepOutcome::Unbounded => return TableauOutcome::Unbounded,
        }

        let mut y = vec![Rational::zero(); structural];
        for (r, col) in tableau.basis.iter().enumerate() {
            if *col < structural {
                y[*col] = tableau.rhs[r].clone();
            }
        }
        TableauOutcome::Optimal(y)
    }

    /// Simplex iterations under Bland's rule: entering column is the lowest
    /// index with positive reduced cost, leaving row breaks ratio ties by
    /// lowest basic variable index. Only columns below `column_limit` may
    /// enter.
    fn run(&mut self, cost: &[Rational], column_limit: usize) -> StepOutcome {
        loop {
            // Reduced costs d_j = c_j - c_B . column_j, scanning in index
            // order and stopping at the first positive one.
            let priced: Vec<(usize, Rational)> = self
                .basis
                .iter()
                .enumerate()
                .filter(|(_, col)| !cost[**col].is_zero())
                .map(|(r, col)| (r, cost[*col].clone()))
                .collect();
            let mut entering = None;
            for (j, cost_j) in cost[..column_limit].iter().enumerate() {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost_j.clone();
                for (r, c) in &priced {
                    if !self.matrix[*r][j].is_zero() {
                        d -= c * &self.matrix[*r][j];
                    }
                }
                if d > Rational::zero() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return StepOutcome::Optimal;
            };

            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.matrix.len() {
                if self.matrix[r][j] > Rational::zero() {
                    let ratio = &self.rhs[r] / &self.matrix[r][j];
                    let better = match &leaving {
                        None => true,
                        Some((best_row, best_ratio)) => {
                            ratio < *best_ratio
                                || (ratio == *best_ratio
                                    && self.basis[r] < self.basis[*best_row])
                        }
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leaving else {
                return StepOutcome::Unbounded;
            };
            self.pivot(r, j);
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let pivot = self.matrix[r][j].clone();
        for c in 0..self.columns {
            if !self.matrix[r][c].is_zero() {
                self.matrix[r][c] = &self.matrix[r][c] / &pivot;
            }
        }
        self.rhs[r] = &self.rhs[r] / &pivot;
        for row in 0..self.matrix.len() {
            if row == r || self.matrix[row][j].is_zero() {
                continue;
            }
            let factor = std::mem::replace(&mut self.matrix[row][j], Rational::zero());
            for c in 0..self.columns {
                if c != j && !self.matrix[r][c].is_zero() {
                    let delta = &factor * &self.matrix[r][c];
                    self.matrix[row][c] -= delta;
                }
            }
            let delta = &factor * &self.rhs[r];
            self.rhs[row] -= delta;
        }
        self.basis[r] = j;
    }

    /// After a feasible phase 1, pivots every remaining basic artificial out
    /// of the basis (or drops its row when it is redundant) and physically
    /// removes the artificial columns.
    fn evict_artificials(&mut self) {
        let mut r = 0;
        while r < self.matrix.len() {
            if self.basis[r] >= self.artificial_start {
                debug_assert!(self.rhs[r].is_zero());
                match (0..self.artificial_start).find(|&c| !self.matrix[r][c].is_zero()) {
                    Some(c) => self.pivot(r, c),
                    None => {
                        self.matrix.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in &mut self.matrix {
            row.truncate(self.artificial_start);
        }
        self.columns = self.artificial_start;
    }
}

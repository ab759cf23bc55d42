//! Exact two-phase primal simplex over rationals.
//!
//! Pivot selection is deterministic: the most negative reduced cost enters,
//! with Bland's smallest-index rule as the anti-cycling fallback on
//! degenerate stretches, so every run terminates and identical programs
//! always produce identical answers.
//! Infeasible programs come back with a Farkas certificate expressed in
//! terms of the caller's constraints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    NonNeg,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `terms >= rhs`
    Ge,
    /// `terms <= rhs`
    Le,
    /// `terms == rhs`
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub terms: Vec<(usize, Scalar)>,
    pub relation: Relation,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    vars: Vec<VarKind>,
    constraints: Vec<Constraint>,
    objective: Vec<(usize, Scalar)>,
    sense: Option<Sense>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub values: Vec<Scalar>,
    pub objective: Scalar,
}

/// Multipliers `y`, one per constraint, proving infeasibility: `y_i >= 0`
/// on `Ge` rows, `y_i <= 0` on `Le` rows, `sum_i y_i a_ij <= 0` for every
/// non-negative variable (`== 0` for free ones), and `y . rhs > 0`.
#[derive(Clone, Debug)]
pub struct Farkas {
    pub multipliers: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal(Solution),
    Infeasible(Farkas),
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible(_))
    }

    pub fn solution(&self) -> Option<&Solution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, kind: VarKind) -> usize {
        self.vars.push(kind);
        self.vars.len() - 1
    }

    pub fn add_vars(&mut self, kind: VarKind, count: usize) -> Vec<usize> {
        (0..count).map(|_| self.add_var(kind)).collect()
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, Scalar)>, relation: Relation, rhs: Scalar) -> usize {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.constraints.push(Constraint { terms, relation, rhs });
        self.constraints.len() - 1
    }

    pub fn set_objective(&mut self, sense: Sense, terms: Vec<(usize, Scalar)>) {
        self.sense = Some(sense);
        self.objective = terms;
    }

    /// Checks a Farkas certificate against this program exactly.
    pub fn verify_farkas(&self, cert: &Farkas) -> bool {
        if cert.multipliers.len() != self.constraints.len() {
            return false;
        }
        let mut column = vec![Scalar::zero(); self.vars.len()];
        let mut value = Scalar::zero();
        for (y, c) in cert.multipliers.iter().zip(&self.constraints) {
            let sign_ok = match c.relation {
                Relation::Ge => !y.is_negative(),
                Relation::Le => !y.is_positive(),
                Relation::Eq => true,
            };
            if !sign_ok {
                return false;
            }
            for (v, a) in &c.terms {
                column[*v] += y * a;
            }
            value += y * &c.rhs;
        }
        let columns_ok = column.iter().zip(&self.vars).all(|(s, kind)| match kind {
            VarKind::NonNeg => !s.is_positive(),
            VarKind::Free => s.is_zero(),
        });
        columns_ok && value.is_positive()
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

/// Fraction-free tableau: every entry is an integer numerator over the
/// common denominator `den`, the determinant of the current basis (kept
/// positive). Pivots divide exactly, so no gcd normalisation is needed.
const DEGENERATE_LIMIT: usize = 16;

struct Tableau {
    rows: Vec<Vec<BigInt>>,
    rhs: Vec<BigInt>,
    den: BigInt,
    basis: Vec<usize>,
    /// Factor (with sign) applied to each caller row to make it integral
    /// with a non-negative right-hand side.
    row_scale: Vec<BigInt>,
    /// Number of structural (non-artificial) columns.
    structural: usize,
    /// Caller variable -> (positive column, optional negative column).
    var_cols: Vec<(usize, Option<usize>)>,
}

/// Cost row in the same representation as the tableau rows.
struct CostRow {
    cost: Vec<BigInt>,
    /// Minus the objective value, over `den`.
    value: BigInt,
}

fn lcm_denominators<'a>(xs: impl Iterator<Item = &'a Scalar>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn to_int(x: &Scalar, scale: &BigInt) -> BigInt {
    (x.numer() * scale) / x.denom()
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut var_cols = Vec::with_capacity(lp.vars.len());
        let mut ncols = 0;
        for kind in &lp.vars {
            match kind {
                VarKind::NonNeg => {
                    var_cols.push((ncols, None));
                    ncols += 1;
                }
                VarKind::Free => {
                    var_cols.push((ncols, Some(ncols + 1)));
                    ncols += 2;
                }
            }
        }
        let slack_base = ncols;
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let structural = ncols + slack_count;
        let m = lp.constraints.len();
        let width = structural + m;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut row_scale = Vec::with_capacity(m);
        let mut next_slack = slack_base;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut scale = lcm_denominators(c.terms.iter().map(|(_, a)| a).chain(std::iter::once(&c.rhs)));
            if c.rhs.is_negative() {
                scale = -scale;
            }
            let mut row = vec![BigInt::zero(); width];
            for (v, a) in &c.terms {
                let a = to_int(a, &scale);
                let (pos, neg) = var_cols[*v];
                if let Some(neg) = neg {
                    row[neg] -= &a;
                }
                row[pos] += a;
            }
            match c.relation {
                Relation::Ge => {
                    row[next_slack] = -scale.clone();
                    next_slack += 1;
                }
                Relation::Le => {
                    row[next_slack] = scale.clone();
                    next_slack += 1;
                }
                Relation::Eq => {}
            }
            row[structural + i] = BigInt::one();
            rows.push(row);
            rhs.push(to_int(&c.rhs, &scale));
            row_scale.push(scale);
        }
        Tableau {
            rows,
            rhs,
            den: BigInt::one(),
            basis: (structural..structural + m).collect(),
            row_scale,
            structural,
            var_cols,
        }
    }

    fn width(&self) -> usize {
        self.structural + self.rows.len()
    }

    fn pivot(&mut self, r: usize, c: usize, cost: &mut CostRow) {
        if self.rows[r][c].is_negative() {
            for x in self.rows[r].iter_mut() {
                *x = -&*x;
            }
            self.rhs[r] = -&self.rhs[r];
        }
        let p = self.rows[r][c].clone();
        let den = std::mem::replace(&mut self.den, p.clone());
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r].clone();
        let update = |row: &mut [BigInt], rhs: &mut BigInt| {
            let f = row[c].clone();
            if f.is_zero() {
                for x in row.iter_mut() {
                    if !x.is_zero() {
                        *x = (&*x * &p) / &den;
                    }
                }
                *rhs = (&*rhs * &p) / &den;
                return;
            }
            for (x, a) in row.iter_mut().zip(&pivot_row) {
                if a.is_zero() {
                    if !x.is_zero() {
                        *x = (&*x * &p) / &den;
                    }
                } else {
                    *x = (&*x * &p - &f * a) / &den;
                }
            }
            *rhs = (&*rhs * &p - &f * &pivot_rhs) / &den;
        };
        for i in 0..self.rows.len() {
            if i != r {
                let mut row = std::mem::take(&mut self.rows[i]);
                update(&mut row, &mut self.rhs[i]);
                self.rows[i] = row;
            }
        }
        update(&mut cost.cost, &mut cost.value);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Simplex iterations on the (minimisation) cost row, allowing entry
    /// only for columns below `enter_limit`. Entering columns follow the
    /// most negative reduced cost (lowest index on ties); after a run of
    /// degenerate pivots the smallest-index rule takes over until the
    /// objective moves again. Returns false on unboundedness.
    fn iterate(&mut self, cost: &mut CostRow, enter_limit: usize) -> bool {
        let mut degenerate_run = 0;
        loop {
            let enter = if degenerate_run >= DEGENERATE_LIMIT {
                (0..enter_limit).find(|&j| cost.cost[j].is_negative())
            } else {
                (0..enter_limit)
                    .filter(|&j| cost.cost[j].is_negative())
                    .min_by(|&a, &b| cost.cost[a].cmp(&cost.cost[b]).then(a.cmp(&b)))
            };
            let Some(enter) = enter else {
                return true;
            };
            let mut best: Option<usize> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(k) => {
                        // rhs_i / a_i  vs  rhs_k / a_k
                        let lhs = &self.rhs[i] * &self.rows[k][enter];
                        let rhs = &self.rhs[k] * a;
                        lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[k])
                    }
                };
                if better {
                    best = Some(i);
                }
            }
            let Some(leave) = best else {
                return false;
            };
            if self.rhs[leave].is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(leave, enter, cost);
        }
    }

    fn ratio(&self, x: &BigInt) -> Scalar {
        Scalar::new(x.clone(), self.den.clone())
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let m = self.rows.len();
        let width = self.width();

        // Phase 1: minimise the sum of artificials.
        let mut phase1 = CostRow {
            cost: vec![BigInt::zero(); width],
            value: BigInt::zero(),
        };
        for i in 0..m {
            for j in 0..self.structural {
                if !self.rows[i][j].is_zero() {
                    phase1.cost[j] -= &self.rows[i][j];
                }
            }
            phase1.value -= &self.rhs[i];
        }
        self.iterate(&mut phase1, width);
        if phase1.value.is_negative() {
            // Optimal phase-1 value is positive; duals y_i = 1 - r_art_i.
            let multipliers = (0..m)
                .map(|i| {
                    let y = Scalar::new(&self.den - &phase1.cost[self.structural + i], self.den.clone());
                    y * Scalar::from_integer(self.row_scale[i].clone())
                })
                .collect();
            return LpOutcome::Infeasible(Farkas { multipliers });
        }

        // Drive remaining artificials out of the basis where possible.
        for i in 0..m {
            if self.basis[i] >= self.structural {
                if let Some(j) = (0..self.structural).find(|&j| !self.rows[i][j].is_zero()) {
                    let mut dummy = CostRow {
                        cost: vec![BigInt::zero(); width],
                        value: BigInt::zero(),
                    };
                    self.pivot(i, j, &mut dummy);
                }
            }
        }

        // Phase 2 on an integral copy of the objective.
        let mut objective = vec![Scalar::zero(); self.structural];
        let sign = match lp.sense {
            Some(Sense::Maximize) => -Scalar::one(),
            _ => Scalar::one(),
        };
        for (v, a) in &lp.objective {
            let (pos, neg) = self.var_cols[*v];
            objective[pos] += &sign * a;
            if let Some(neg) = neg {
                objective[neg] -= &sign * a;
            }
        }
        let scale = lcm_denominators(objective.iter());
        let obj: Vec<BigInt> = objective.iter().map(|a| to_int(a, &scale)).collect();
        let mut phase2 = CostRow {
            cost: (0..width)
                .map(|j| if j < self.structural { &obj[j] * &self.den } else { BigInt::zero() })
                .collect(),
            value: BigInt::zero(),
        };
        for i in 0..m {
            let b = self.basis[i];
            if b < self.structural && !obj[b].is_zero() {
                for j in 0..width {
                    if !self.rows[i][j].is_zero() {
                        phase2.cost[j] -= &obj[b] * &self.rows[i][j];
                    }
                }
                phase2.value -= &obj[b] * &self.rhs[i];
            }
        }
        if !self.iterate(&mut phase2, self.structural) {
            return LpOutcome::Unbounded;
        }

        let mut column_values = vec![Scalar::zero(); self.structural];
        for i in 0..m {
            if self.basis[i] < self.structural {
                column_values[self.basis[i]] = self.ratio(&self.rhs[i]);
            }
        }
        let values: Vec<Scalar> = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &column_values[pos] - &column_values[neg],
                None => column_values[pos].clone(),
            })
            .collect();
        let objective = lp
            .objective
            .iter()
            .fold(Scalar::zero(), |acc, (v, a)| acc + a * &values[*v]);
        LpOutcome::Optimal(Solution { values, objective })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{int, ratio};

    #[test]
    fn small_maximisation() {
        // max x + y  s.t.  x + 2y <= 4, 3x + y <= 6, x, y >= 0  -> (8/5, 6/5)
        let mut lp = LinearProgram::new();
        let x = lp.add_var(VarKind::NonNeg);
        let y = lp.add_var(VarKind::NonNeg);
        lp.add_constraint(vec![(x, int(1)), (y, int(2))], Relation::Le, int(4));
        lp.add_constraint(vec![(x, int(3)), (y, int(1))], Relation::Le, int(6));
        lp.set_objective(Sense::Maximize, vec![(x, int(1)), (y, int(1))]);
        let sol = lp.solve();
        let sol = sol.solution().unwrap();
        assert_eq!(sol.values, vec![ratio(8, 5), ratio(6, 5)]);
        assert_eq!(sol.objective, ratio(14, 5));
    }

    #[test]
    fn infeasible_with_certificate() {
        // x >= 0 (free var), -x >= 1
        let mut lp = LinearProgram::new();
        let x = lp.add_var(VarKind::Free);
        lp.add_constraint(vec![(x, int(1))], Relation::Ge, int(0));
        lp.add_constraint(vec![(x, int(-1))], Relation::Ge, int(1));
        match lp.solve() {
            LpOutcome::Infeasible(cert) => assert!(lp.verify_farkas(&cert)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(VarKind::Free);
        lp.add_constraint(vec![(x, int(1))], Relation::Ge, int(0));
        lp.set_objective(Sense::Maximize, vec![(x, int(1))]);
        assert!(matches!(lp.solve(), LpOutcome::Unbounded));
    }

    #[test]
    fn redundant_equalities() {
        // x + y = 1 twice, x - y = 0.
        let mut lp = LinearProgram::new();
        let x = lp.add_var(VarKind::NonNeg);
        let y = lp.add_var(VarKind::NonNeg);
        lp.add_constraint(vec![(x, int(1)), (y, int(1))], Relation::Eq, int(1));
        lp.add_constraint(vec![(x, int(2)), (y, int(2))], Relation::Eq, int(2));
        lp.add_constraint(vec![(x, int(1)), (y, int(-1))], Relation::Eq, int(0));
        lp.set_objective(Sense::Minimize, vec![(x, int(1))]);
        let out = lp.solve();
        assert_eq!(out.solution().unwrap().values, vec![ratio(1, 2), ratio(1, 2)]);
    }
}

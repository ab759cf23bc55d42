//! Convex regions given as an intersection of vertex hulls, closed
//! halfspaces and affine equations. One LP decides emptiness; an infeasible
//! LP yields a strictly separating hyperplane through its Farkas multipliers.

use num_traits::{One, Zero};

use super::hpoly::Halfspace;
use super::hull::SeparationWitness;
use super::lp::{LinearProgram, LpOutcome, Relation, VarKind};
use super::point::Point;
use super::scalar::{self, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct Region {
    dim: usize,
    blocks: Vec<Vec<Point>>,
    halfspaces: Vec<Halfspace>,
    equations: Vec<(Point, Scalar)>,
}

struct Built {
    lp: LinearProgram,
    x: Vec<usize>,
    /// Constraint rows `x_k - sum lambda g_k = 0` of the first block.
    first_block_rows: Vec<usize>,
    first_block_sum_row: Option<usize>,
}

impl Region {
    pub fn new(dim: usize) -> Self {
        Region {
            dim,
            ..Default::default()
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `Conv(points)`; an empty list makes the region empty.
    pub fn with_hull(mut self, points: &[Point]) -> Result<Self> {
        for p in points {
            p.check_dim(self.dim)?;
        }
        self.blocks.push(points.to_vec());
        Ok(self)
    }

    pub fn with_halfspaces<'a>(mut self, hs: impl IntoIterator<Item = &'a Halfspace>) -> Result<Self> {
        for h in hs {
            h.normal.check_dim(self.dim)?;
            self.halfspaces.push(h.clone());
        }
        Ok(self)
    }

    pub fn with_equation(mut self, normal: Point, offset: Scalar) -> Result<Self> {
        normal.check_dim(self.dim)?;
        self.equations.push((normal, offset));
        Ok(self)
    }

    pub fn has_empty_block(&self) -> bool {
        self.blocks.iter().any(Vec::is_empty)
    }

    fn build(&self, leading: Option<&[Point]>) -> Built {
        let mut lp = LinearProgram::new();
        let x = lp.add_vars(VarKind::Free, self.dim);
        let mut first_block_rows = Vec::new();
        let mut first_block_sum_row = None;
        let blocks = leading.into_iter().chain(self.blocks.iter().map(Vec::as_slice));
        for (b, block) in blocks.enumerate() {
            let lambda = lp.add_vars(VarKind::NonNeg, block.len());
            for k in 0..self.dim {
                let mut terms = vec![(x[k], Scalar::one())];
                for (g, &l) in block.iter().zip(&lambda) {
                    terms.push((l, -g[k].clone()));
                }
                let row = lp.add_constraint(terms, Relation::Eq, Scalar::zero());
                if b == 0 && leading.is_some() {
                    first_block_rows.push(row);
                }
            }
            let sum = lambda.iter().map(|&l| (l, Scalar::one())).collect();
            let row = lp.add_constraint(sum, Relation::Eq, Scalar::one());
            if b == 0 && leading.is_some() {
                first_block_sum_row = Some(row);
            }
        }
        for h in &self.halfspaces {
            let terms = x.iter().zip(h.normal.coords()).map(|(&v, a)| (v, a.clone())).collect();
            lp.add_constraint(terms, Relation::Ge, h.offset.clone());
        }
        for (n, c) in &self.equations {
            let terms = x.iter().zip(n.coords()).map(|(&v, a)| (v, a.clone())).collect();
            lp.add_constraint(terms, Relation::Eq, c.clone());
        }
        Built {
            lp,
            x,
            first_block_rows,
            first_block_sum_row,
        }
    }

    /// A point of the region, or `None` when it is empty.
    pub fn find_point(&self) -> Option<Point> {
        if self.has_empty_block() {
            return None;
        }
        let built = self.build(None);
        match built.lp.solve() {
            LpOutcome::Optimal(sol) => Some(Point::new(built.x.iter().map(|&v| sol.values[v].clone()).collect())),
            LpOutcome::Unbounded => unreachable!("feasibility program has no objective"),
            LpOutcome::Infeasible(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.find_point().is_none()
    }

    /// Maximises `direction . x` over the region. `Ok(None)` means empty;
    /// `Err` is returned for an unbounded objective.
    pub fn maximize(&self, direction: &Point) -> Option<Result<(Scalar, Point), ()>> {
        if self.has_empty_block() {
            return None;
        }
        let mut built = self.build(None);
        let terms = built
            .x
            .iter()
            .zip(direction.coords())
            .map(|(&v, a)| (v, a.clone()))
            .collect();
        built.lp.set_objective(super::lp::Sense::Maximize, terms);
        match built.lp.solve() {
            LpOutcome::Optimal(sol) => {
                let p = Point::new(built.x.iter().map(|&v| sol.values[v].clone()).collect());
                Some(Ok((sol.objective, p)))
            }
            LpOutcome::Unbounded => Some(Err(())),
            LpOutcome::Infeasible(_) => None,
        }
    }

    /// Either a common point of `Conv(compact)` and the region, or a
    /// hyperplane with `Conv(compact)` strictly on its positive side and the
    /// region strictly on its negative side.
    pub fn separate_from_hull(&self, compact: &[Point]) -> Result<Result<Point, SeparationWitness>> {
        if compact.is_empty() {
            return Err(Error::EmptyInput("compact set to separate"));
        }
        for p in compact {
            p.check_dim(self.dim)?;
        }
        let built = self.build(Some(compact));
        match built.lp.solve() {
            LpOutcome::Optimal(sol) => Ok(Ok(Point::new(built.x.iter().map(|&v| sol.values[v].clone()).collect()))),
            LpOutcome::Unbounded => unreachable!("feasibility program has no objective"),
            LpOutcome::Infeasible(cert) => {
                if !built.lp.verify_farkas(&cert) {
                    return Err(Error::SeparationFailed("Farkas certificate failed verification".into()));
                }
                let y = &cert.multipliers;
                let normal = Point::new(built.first_block_rows.iter().map(|&r| y[r].clone()).collect());
                let alpha = y[built.first_block_sum_row.expect("leading block present")].clone();
                let total = built
                    .lp
                    .constraints()
                    .iter()
                    .zip(y)
                    .fold(Scalar::zero(), |acc, (c, yi)| acc + yi * &c.rhs);
                let region_upper = &alpha - &total;
                let compact_lower = compact
                    .iter()
                    .map(|g| normal.dot(g))
                    .min()
                    .expect("nonempty");
                debug_assert!(compact_lower >= alpha);
                let half = scalar::ratio(1, 2);
                let offset = (&compact_lower + &region_upper) * &half;
                let margin = (&compact_lower - &region_upper) * &half;
                Ok(Err(SeparationWitness { normal, offset, margin }))
            }
        }
    }
}

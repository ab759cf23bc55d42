//! Halfspaces and H-polyhedra.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lp::{LinearProgram, LpOutcome, Relation, Sense as LpSense, VarKind};
use super::point::Point;
use super::region::Region;
use super::scalar::{self, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = ">=")]
    Closed,
    #[serde(rename = ">")]
    Open,
}

/// `{x : normal . x >= offset}` or its open counterpart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Point,
    #[serde(with = "scalar::serde_scalar")]
    pub offset: Scalar,
    pub sense: Sense,
}

impl Halfspace {
    pub fn new(normal: Point, offset: Scalar) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::InvalidParameter("halfspace normal is the zero vector".into()));
        }
        Ok(Halfspace {
            normal,
            offset,
            sense: Sense::Closed,
        })
    }

    pub fn open(normal: Point, offset: Scalar) -> Result<Self> {
        let mut h = Self::new(normal, offset)?;
        h.sense = Sense::Open;
        Ok(h)
    }

    pub fn from_ints(normal: &[i64], offset: i64) -> Result<Self> {
        Self::new(Point::from_ints(normal), scalar::int(offset))
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `normal . x - offset`.
    pub fn slack(&self, x: &Point) -> Scalar {
        self.normal.dot(x) - &self.offset
    }

    pub fn contains(&self, x: &Point) -> bool {
        let s = self.slack(x);
        match self.sense {
            Sense::Closed => !s.is_negative(),
            Sense::Open => s.is_positive(),
        }
    }

    pub fn on_boundary(&self, x: &Point) -> bool {
        self.slack(x).is_zero()
    }

    /// The closed complementary halfspace `normal . x <= offset`.
    pub fn flipped(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.scale(&-Scalar::one()),
            offset: -self.offset.clone(),
            sense: Sense::Closed,
        }
    }

    pub fn closed(&self) -> Halfspace {
        Halfspace {
            sense: Sense::Closed,
            ..self.clone()
        }
    }

    /// Scaled so the first nonzero coordinate of the normal has absolute
    /// value one; equal halfspaces get equal representations.
    pub fn normalized(&self) -> Halfspace {
        let lead = self
            .normal
            .coords()
            .iter()
            .find(|c| !c.is_zero())
            .map(scalar::abs)
            .expect("nonzero normal");
        let inv = lead.recip();
        Halfspace {
            normal: self.normal.scale(&inv),
            offset: &self.offset * &inv,
            sense: self.sense,
        }
    }
}

/// Intersection of closed halfspaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPolyhedron {
    dim: usize,
    constraints: Vec<Halfspace>,
    #[serde(default)]
    irredundant: bool,
}

impl HPolyhedron {
    pub fn new(dim: usize, constraints: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        for h in &constraints {
            h.normal.check_dim(dim)?;
            if h.sense != Sense::Closed {
                return Err(Error::InvalidParameter("H-polyhedra take closed halfspaces only".into()));
            }
            if h.normal.is_zero() {
                return Err(Error::InvalidParameter("halfspace normal is the zero vector".into()));
            }
        }
        Ok(HPolyhedron {
            dim,
            constraints,
            irredundant: false,
        })
    }

    /// The whole space.
    pub fn full(dim: usize) -> Self {
        HPolyhedron {
            dim,
            constraints: Vec::new(),
            irredundant: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Halfspace] {
        &self.constraints
    }

    pub fn is_irredundant(&self) -> bool {
        self.irredundant
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.constraints.iter().all(|h| h.contains(x))
    }

    pub fn with_constraint(&self, h: Halfspace) -> Result<Self> {
        let mut c = self.constraints.clone();
        c.push(h);
        HPolyhedron::new(self.dim, c)
    }

    pub fn region(&self) -> Region {
        Region::new(self.dim)
            .with_halfspaces(&self.constraints)
            .expect("dimensions validated on construction")
    }

    /// Number of facet-defining constraints.
    pub fn facet_count(&self) -> Result<usize> {
        if self.irredundant {
            Ok(self.constraints.len())
        } else {
            Ok(facet_irredundant(self)?.constraints.len())
        }
    }

    pub fn find_point(&self) -> Option<Point> {
        self.region().find_point()
    }

    /// A point strictly inside every constraint, if the interior is nonempty.
    pub fn interior_point(&self) -> Option<Point> {
        strictly_feasible(self.dim, self.constraints.iter())
    }

    pub fn has_interior(&self) -> bool {
        self.interior_point().is_some()
    }

    /// The convex polygon with the given vertices in cyclic order (either
    /// orientation).
    pub fn from_convex_polygon(vertices: &[Point]) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidParameter("polygon needs at least three vertices".into()));
        }
        for p in vertices {
            p.check_dim(2)?;
        }
        let n = vertices.len();
        let twice_area = (0..n).fold(Scalar::zero(), |acc, i| {
            acc + super::point::cross2(&vertices[i], &vertices[(i + 1) % n])
        });
        if twice_area.is_zero() {
            return Err(Error::InvalidParameter("degenerate polygon".into()));
        }
        let sign = if twice_area.is_positive() { Scalar::one() } else { -Scalar::one() };
        let mut cons = Vec::new();
        for i in 0..n {
            let p = &vertices[i];
            let q = &vertices[(i + 1) % n];
            let e = (q - p).scale(&sign);
            let normal = Point::new(vec![-e[1].clone(), e[0].clone()]);
            let offset = normal.dot(p);
            cons.push(Halfspace::new(normal, offset)?);
        }
        HPolyhedron::new(2, cons)
    }
}

pub fn hpoly_empty(h: &HPolyhedron) -> bool {
    h.region().is_empty()
}

/// A point satisfying every constraint strictly, found by maximising a
/// common slack `t <= 1`.
pub fn strictly_feasible<'a>(dim: usize, constraints: impl IntoIterator<Item = &'a Halfspace>) -> Option<Point> {
    let mut lp = LinearProgram::new();
    let x = lp.add_vars(VarKind::Free, dim);
    let t = lp.add_var(VarKind::Free);
    for h in constraints {
        let mut terms: Vec<_> = x.iter().zip(h.normal.coords()).map(|(&v, a)| (v, a.clone())).collect();
        terms.push((t, -Scalar::one()));
        lp.add_constraint(terms, Relation::Ge, h.offset.clone());
    }
    lp.add_constraint(vec![(t, Scalar::one())], Relation::Le, Scalar::one());
    lp.set_objective(LpSense::Maximize, vec![(t, Scalar::one())]);
    match lp.solve() {
        LpOutcome::Optimal(sol) if sol.objective.is_positive() => {
            Some(Point::new(x.iter().map(|&v| sol.values[v].clone()).collect()))
        }
        _ => None,
    }
}

/// True when the open interiors of the two polyhedra have a common point.
pub fn interiors_meet(p: &HPolyhedron, q: &HPolyhedron) -> bool {
    strictly_feasible(p.dim, p.constraints.iter().chain(&q.constraints)).is_some()
}

/// Whether constraint `k` can be violated while all of `others` hold
/// strictly enough to leave a full-dimensional gap: maximise `t` subject to
/// the others and `h_k(x) + t <= offset_k`.
fn is_essential(dim: usize, k: &Halfspace, others: &[&Halfspace]) -> bool {
    let mut lp = LinearProgram::new();
    let x = lp.add_vars(VarKind::Free, dim);
    let t = lp.add_var(VarKind::Free);
    for h in others {
        let terms = x.iter().zip(h.normal.coords()).map(|(&v, a)| (v, a.clone())).collect();
        lp.add_constraint(terms, Relation::Ge, h.offset.clone());
    }
    let mut terms: Vec<_> = x.iter().zip(k.normal.coords()).map(|(&v, a)| (v, a.clone())).collect();
    terms.push((t, Scalar::one()));
    lp.add_constraint(terms, Relation::Le, k.offset.clone());
    lp.add_constraint(vec![(t, Scalar::one())], Relation::Le, Scalar::one());
    lp.set_objective(LpSense::Maximize, vec![(t, Scalar::one())]);
    match lp.solve() {
        LpOutcome::Optimal(sol) => sol.objective.is_positive(),
        _ => false,
    }
}

/// Drops redundant constraints one at a time; the survivors are exactly
/// the facet-defining ones.
pub fn facet_irredundant(h: &HPolyhedron) -> Result<HPolyhedron> {
    if h.irredundant {
        return Ok(h.clone());
    }
    if hpoly_empty(h) {
        return Err(Error::EmptyPolyhedron("cannot reduce an empty polyhedron".into()));
    }
    let mut kept: Vec<Halfspace> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for c in &h.constraints {
        if seen.insert(c.normalized()) {
            kept.push(c.clone());
        }
    }
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<&Halfspace> = kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c).collect();
        if is_essential(h.dim, &kept[i], &others) {
            i += 1;
        } else {
            kept.remove(i);
        }
    }
    Ok(HPolyhedron {
        dim: h.dim,
        constraints: kept,
        irredundant: true,
    })
}

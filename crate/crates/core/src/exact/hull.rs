//! V-polytopes and the hull predicates.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lp::{LinearProgram, LpOutcome, Relation, Sense, VarKind};
use super::point::Point;
use super::region::Region;
use super::scalar::{self, Scalar};
use crate::error::{Error, Result};

/// `Conv(generators)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPolytope {
    generators: Vec<Point>,
}

impl VPolytope {
    pub fn new(generators: Vec<Point>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyInput("polytope generators"))?;
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        for g in &generators {
            g.check_dim(dim)?;
        }
        Ok(VPolytope { generators })
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    pub fn has_duplicates(&self) -> bool {
        let set: BTreeSet<&Point> = self.generators.iter().collect();
        set.len() != self.generators.len()
    }

    /// Generators with repeats removed, first occurrence kept.
    pub fn distinct(&self) -> Vec<Point> {
        let mut seen = BTreeSet::new();
        self.generators.iter().filter(|g| seen.insert(*g)).cloned().collect()
    }
}

/// A hyperplane `normal . x = offset` with one set in
/// `normal . x >= offset + margin` (the positive side) and the other in
/// `normal . x <= offset - margin`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub normal: Point,
    #[serde(with = "scalar::serde_scalar")]
    pub offset: Scalar,
    #[serde(with = "scalar::serde_scalar")]
    pub margin: Scalar,
}

impl SeparationWitness {
    pub fn value(&self, x: &Point) -> Scalar {
        self.normal.dot(x) - &self.offset
    }

    pub fn strictly_positive(&self, x: &Point) -> bool {
        self.value(x).is_positive()
    }

    pub fn strictly_negative(&self, x: &Point) -> bool {
        self.value(x).is_negative()
    }

    /// Exact check that `neg` and `pos` lie strictly on their sides.
    pub fn separates(&self, neg: &[Point], pos: &[Point]) -> bool {
        self.margin.is_positive()
            && neg.iter().all(|x| self.value(x) <= -self.margin.clone())
            && pos.iter().all(|x| self.value(x) >= self.margin)
    }

    pub fn reversed(&self) -> SeparationWitness {
        SeparationWitness {
            normal: self.normal.scale(&-Scalar::one()),
            offset: -self.offset.clone(),
            margin: self.margin.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HullRelation {
    Intersect(Point),
    /// The first polytope is on the negative side.
    Disjoint(SeparationWitness),
}

impl HullRelation {
    pub fn intersects(&self) -> bool {
        matches!(self, HullRelation::Intersect(_))
    }

    pub fn point(&self) -> Option<&Point> {
        match self {
            HullRelation::Intersect(p) => Some(p),
            HullRelation::Disjoint(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&SeparationWitness> {
        match self {
            HullRelation::Disjoint(w) => Some(w),
            HullRelation::Intersect(_) => None,
        }
    }
}

fn add_combination(lp: &mut LinearProgram, gens: &[Point]) -> Vec<usize> {
    let lambda = lp.add_vars(VarKind::NonNeg, gens.len());
    lp.add_constraint(lambda.iter().map(|&l| (l, Scalar::one())).collect(), Relation::Eq, Scalar::one());
    lambda
}

fn combine(gens: &[Point], lambda: &[usize], values: &[Scalar]) -> Point {
    let dim = gens[0].dim();
    let mut out = vec![Scalar::zero(); dim];
    for (g, &l) in gens.iter().zip(lambda) {
        let w = &values[l];
        if !w.is_zero() {
            for (o, c) in out.iter_mut().zip(g.coords()) {
                *o += w * c;
            }
        }
    }
    Point::new(out)
}

pub fn hull_membership(q: &Point, v: &VPolytope) -> Result<bool> {
    q.check_dim(v.dim())?;
    let gens = v.distinct();
    if gens.iter().any(|g| g == q) {
        return Ok(true);
    }
    let mut lp = LinearProgram::new();
    let lambda = add_combination(&mut lp, &gens);
    for k in 0..q.dim() {
        let terms = gens.iter().zip(&lambda).map(|(g, &l)| (l, g[k].clone())).collect();
        lp.add_constraint(terms, Relation::Eq, q[k].clone());
    }
    Ok(lp.solve().is_feasible())
}

fn meeting_program(ga: &[Point], gb: &[Point]) -> (LinearProgram, Vec<usize>) {
    let mut lp = LinearProgram::new();
    let la = add_combination(&mut lp, ga);
    let lb = add_combination(&mut lp, gb);
    for k in 0..ga[0].dim() {
        let mut terms: Vec<_> = ga.iter().zip(&la).map(|(g, &l)| (l, g[k].clone())).collect();
        terms.extend(gb.iter().zip(&lb).map(|(g, &l)| (l, -g[k].clone())));
        lp.add_constraint(terms, Relation::Eq, Scalar::zero());
    }
    (lp, la)
}

/// Disjointness alone, decided by one feasibility program whose Farkas
/// certificate is re-checked exactly.
pub fn hulls_disjoint(a: &[Point], b: &[Point]) -> Result<bool> {
    let (Some(pa), Some(_)) = (a.first(), b.first()) else {
        return Ok(true);
    };
    for p in a.iter().chain(b) {
        p.check_dim(pa.dim())?;
    }
    let (lp, _) = meeting_program(a, b);
    match lp.solve() {
        LpOutcome::Infeasible(cert) => {
            if lp.verify_farkas(&cert) {
                Ok(true)
            } else {
                Err(Error::SeparationFailed("Farkas certificate failed verification".into()))
            }
        }
        _ => Ok(false),
    }
}

/// Common point of the two hulls, or the max-gap separating hyperplane
/// (normal bounded by one in the sup norm, then of least l1 norm) with `a`
/// on the negative side.
pub fn hulls_intersect(a: &VPolytope, b: &VPolytope) -> Result<HullRelation> {
    let dim = a.dim();
    if b.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: b.dim(),
        });
    }
    let ga = a.distinct();
    let gb = b.distinct();
    let (lp, la) = meeting_program(&ga, &gb);
    if let LpOutcome::Optimal(sol) = lp.solve() {
        return Ok(HullRelation::Intersect(combine(&ga, &la, &sol.values)));
    }
    Ok(HullRelation::Disjoint(max_gap_separator(&ga, &gb)?))
}

fn max_gap_separator(neg: &[Point], pos: &[Point]) -> Result<SeparationWitness> {
    let dim = neg[0].dim();
    let mut lp = LinearProgram::new();
    let n = lp.add_vars(VarKind::Free, dim);
    let ca = lp.add_var(VarKind::Free);
    let cb = lp.add_var(VarKind::Free);
    for &v in &n {
        lp.add_constraint(vec![(v, Scalar::one())], Relation::Le, Scalar::one());
        lp.add_constraint(vec![(v, Scalar::one())], Relation::Ge, -Scalar::one());
    }
    for g in neg {
        let mut terms: Vec<_> = n.iter().zip(g.coords()).map(|(&v, c)| (v, c.clone())).collect();
        terms.push((ca, -Scalar::one()));
        lp.add_constraint(terms, Relation::Le, Scalar::zero());
    }
    for g in pos {
        let mut terms: Vec<_> = n.iter().zip(g.coords()).map(|(&v, c)| (v, c.clone())).collect();
        terms.push((cb, -Scalar::one()));
        lp.add_constraint(terms, Relation::Ge, Scalar::zero());
    }
    lp.set_objective(Sense::Maximize, vec![(cb, Scalar::one()), (ca, -Scalar::one())]);
    let gap = match lp.solve() {
        LpOutcome::Optimal(sol) => sol.objective,
        _ => return Err(Error::SeparationFailed("max-gap program did not reach an optimum".into())),
    };
    // among maximal-gap normals take one of least l1 norm
    lp.add_constraint(vec![(cb, Scalar::one()), (ca, -Scalar::one())], Relation::Ge, gap);
    let u = lp.add_vars(VarKind::NonNeg, dim);
    for (&nv, &uv) in n.iter().zip(&u) {
        lp.add_constraint(vec![(uv, Scalar::one()), (nv, -Scalar::one())], Relation::Ge, Scalar::zero());
        lp.add_constraint(vec![(uv, Scalar::one()), (nv, Scalar::one())], Relation::Ge, Scalar::zero());
    }
    lp.set_objective(Sense::Minimize, u.iter().map(|&v| (v, Scalar::one())).collect());
    let sol = match lp.solve() {
        LpOutcome::Optimal(sol) => sol,
        _ => return Err(Error::SeparationFailed("max-gap program did not reach an optimum".into())),
    };
    let normal = Point::new(n.iter().map(|&v| sol.values[v].clone()).collect());
    let hi_neg = neg.iter().map(|g| normal.dot(g)).max().expect("nonempty");
    let lo_pos = pos.iter().map(|g| normal.dot(g)).min().expect("nonempty");
    if lo_pos <= hi_neg {
        return Err(Error::SeparationFailed("hulls are disjoint but no positive gap was found".into()));
    }
    let half = scalar::ratio(1, 2);
    Ok(SeparationWitness {
        offset: (&hi_neg + &lo_pos) * &half,
        margin: (&lo_pos - &hi_neg) * &half,
        normal,
    })
}

/// Common point of all hulls, if any.
pub fn multi_hulls_intersect(vs: &[VPolytope]) -> Result<Option<Point>> {
    let first = vs.first().ok_or(Error::EmptyInput("polytope list"))?;
    let mut region = Region::new(first.dim());
    for v in vs {
        if v.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: v.dim(),
            });
        }
        region = region.with_hull(&v.distinct())?;
    }
    Ok(region.find_point())
}

/// `Ok(None)` when the points are in convex position, otherwise the first
/// point lying in the hull of the others.
pub fn convex_position(points: &[Point]) -> Result<Option<Point>> {
    let first = points.first().ok_or(Error::EmptyInput("point list"))?;
    for p in points {
        p.check_dim(first.dim())?;
    }
    if points.len() == 1 {
        return Ok(None);
    }
    for (i, p) in points.iter().enumerate() {
        let rest: Vec<Point> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if hull_membership(p, &VPolytope::new(rest)?)? {
            return Ok(Some(p.clone()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vp(pts: &[&[i64]]) -> VPolytope {
        VPolytope::new(pts.iter().map(|p| Point::from_ints(p)).collect()).unwrap()
    }

    fn r(n: i64, d: i64) -> Scalar {
        scalar::ratio(n, d)
    }

    #[test]
    fn membership_examples() {
        let seg = vp(&[&[-1, 0], &[1, 0]]);
        assert!(hull_membership(&Point::from_ints(&[0, 0]), &seg).unwrap());
        assert!(!hull_membership(&Point::from_ints(&[2, 0]), &seg).unwrap());
        let tri = vp(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(hull_membership(&Point::new(vec![r(1, 3), r(1, 3)]), &tri).unwrap());
        assert!(matches!(
            hull_membership(&Point::from_ints(&[0]), &tri),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn two_points_separated() {
        let rel = hulls_intersect(&vp(&[&[0, 0]]), &vp(&[&[1, 0]])).unwrap();
        let w = rel.witness().unwrap();
        assert_eq!(w.normal, Point::from_ints(&[1, 0]));
        assert_eq!(w.offset, r(1, 2));
        assert_eq!(w.margin, r(1, 2));
    }

    #[test]
    fn point_on_segment() {
        let rel = hulls_intersect(&vp(&[&[0, 0], &[2, 0]]), &vp(&[&[1, 0]])).unwrap();
        assert_eq!(rel.point(), Some(&Point::from_ints(&[1, 0])));
    }

    #[test]
    fn triangles_separated_diagonally() {
        let a = vp(&[&[0, 0], &[1, 0], &[0, 1]]);
        let b = vp(&[&[1, 1], &[2, 1], &[1, 2]]);
        let w = hulls_intersect(&a, &b).unwrap().witness().unwrap().clone();
        assert_eq!(w.normal, Point::from_ints(&[1, 1]));
        assert_eq!(w.offset, r(3, 2));
        assert!(w.separates(a.generators(), b.generators()));
    }

    #[test]
    fn multi_intersections() {
        let ivs = [vp(&[&[-1], &[0]]), vp(&[&[0], &[2]]), vp(&[&[-3], &[0]])];
        assert_eq!(multi_hulls_intersect(&ivs).unwrap(), Some(Point::from_ints(&[0])));
        let par = [vp(&[&[0, 0], &[1, 0]]), vp(&[&[0, 1], &[1, 1]])];
        assert_eq!(multi_hulls_intersect(&par).unwrap(), None);
    }

    #[test]
    fn convex_position_examples() {
        let sq: Vec<Point> = [[0, 0], [1, 0], [1, 1], [0, 1]].iter().map(|p| Point::from_ints(p)).collect();
        assert_eq!(convex_position(&sq).unwrap(), None);
        let mut with_center = sq.clone();
        with_center.push(Point::new(vec![r(1, 2), r(1, 2)]));
        assert_eq!(convex_position(&with_center).unwrap(), Some(Point::new(vec![r(1, 2), r(1, 2)])));
    }

    #[test]
    fn duplicates_flagged_and_removed() {
        let v = vp(&[&[0, 0], &[1, 0], &[0, 0]]);
        assert!(v.has_duplicates());
        assert_eq!(v.distinct().len(), 2);
    }
}

//! Planar separating systems: interior-disjoint polyhedra around disjoint
//! convex sets, their boundary incidences, a local improvement search and
//! the auxiliary plane graph used to bound the facet count.

pub mod geometry;
pub mod graph;
pub mod improve;
pub mod incidence;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::hpoly::{facet_irredundant, interiors_meet, strictly_feasible};
use crate::exact::{hulls_disjoint, hulls_intersect, Halfspace, HPolyhedron, HullRelation, Point, VPolytope};
use crate::random;

pub use graph::{build_auxiliary_graph, AuxiliaryGraph, GraphEdge};
pub use improve::{improve_separating_system, Improvement, MoveKind, MoveRecord, DEFAULT_MAX_ROUNDS};
pub use incidence::{extract_incidences, is_supported, unsupported_facets, IncidenceKind, IncidenceRecord, Score};

/// Pairwise disjoint convex polygons given by their vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointFamily {
    sets: Vec<VPolytope>,
}

impl DisjointFamily {
    pub fn new(sets: Vec<VPolytope>) -> Result<Self> {
        for s in &sets {
            if s.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: s.dim(),
                });
            }
        }
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if !hulls_disjoint(sets[i].generators(), sets[j].generators())? {
                    return Err(Error::Overlap(i, j));
                }
            }
        }
        Ok(DisjointFamily { sets })
    }

    pub fn from_points(sets: Vec<Vec<Point>>) -> Result<Self> {
        Self::new(sets.into_iter().map(VPolytope::new).collect::<Result<_>>()?)
    }

    pub fn sets(&self) -> &[VPolytope] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `a` random clusters of a few points each, on a coarse grid of
    /// centres, resampled until pairwise disjoint.
    pub fn random(a: usize, seed: u64) -> Result<Self> {
        let mut rng = random::rng(seed);
        let side = (a as f64).sqrt().ceil() as i64 + 1;
        for _ in 0..1000 {
            let mut sets = Vec::with_capacity(a);
            for _ in 0..a {
                let centre = Point::from_ints(&[rng.gen_range(0..side) * 10, rng.gen_range(0..side) * 10]);
                let jitter = random::point_in(&mut rng, 2, 3, 1);
                let count = rng.gen_range(1..=5);
                sets.push(random::cluster(&mut rng, &(&centre + &jitter), count, 6, 4));
            }
            if let Ok(f) = Self::from_points(sets) {
                return Ok(f);
            }
        }
        Err(Error::CapExceeded("no disjoint random family after 1000 draws".into()))
    }
}

/// One polyhedron per set, kept facet-irredundant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatingSystem {
    pub polyhedra: Vec<HPolyhedron>,
    pub fac: usize,
}

impl SeparatingSystem {
    pub fn new(polyhedra: Vec<HPolyhedron>) -> Result<Self> {
        let polyhedra = polyhedra.iter().map(facet_irredundant).collect::<Result<Vec<_>>>()?;
        let fac = polyhedra.iter().map(|p| p.constraints().len()).sum();
        Ok(SeparatingSystem { polyhedra, fac })
    }

    pub fn len(&self) -> usize {
        self.polyhedra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polyhedra.is_empty()
    }

    pub fn with_replaced(&self, i: usize, p: HPolyhedron) -> Result<Self> {
        let p = facet_irredundant(&p)?;
        let mut polyhedra = self.polyhedra.clone();
        let fac = self.fac - polyhedra[i].constraints().len() + p.constraints().len();
        polyhedra[i] = p;
        Ok(SeparatingSystem { polyhedra, fac })
    }

    /// Containment of every generator and pairwise interior-disjointness,
    /// both decided exactly.
    pub fn validate(&self, family: &DisjointFamily) -> Result<()> {
        if self.len() != family.len() {
            return Err(Error::InvalidSystem(format!("{} polyhedra for {} sets", self.len(), family.len())));
        }
        for i in 0..self.len() {
            self.validate_one(family, i)?;
        }
        Ok(())
    }

    /// Validity checks that involve polyhedron `i`.
    pub fn validate_one(&self, family: &DisjointFamily, i: usize) -> Result<()> {
        let p = &self.polyhedra[i];
        if let Some(g) = family.sets()[i].generators().iter().find(|g| !p.contains(g)) {
            return Err(Error::InvalidSystem(format!("set {i} point {g:?} outside its polyhedron")));
        }
        if strictly_feasible(2, p.constraints()).is_none() {
            return Err(Error::InvalidSystem(format!("polyhedron {i} has empty interior")));
        }
        for (j, q) in self.polyhedra.iter().enumerate() {
            if j != i && interiors_meet(p, q) {
                return Err(Error::InvalidSystem(format!("interiors of {i} and {j} meet")));
            }
        }
        Ok(())
    }
}

/// Each polyhedron is the intersection of the max-gap separating lines
/// between its set and every other set, oriented toward its own set.
pub fn naive_separating_system(family: &DisjointFamily) -> Result<SeparatingSystem> {
    let a = family.len();
    if a < 2 {
        return Err(Error::InvalidParameter("a separating system needs at least two sets".into()));
    }
    let mut cons: Vec<Vec<Halfspace>> = vec![Vec::new(); a];
    for i in 0..a {
        for j in i + 1..a {
            match hulls_intersect(&family.sets()[i], &family.sets()[j])? {
                HullRelation::Intersect(_) => return Err(Error::Overlap(i, j)),
                HullRelation::Disjoint(w) => {
                    let toward_j = Halfspace::new(w.normal.clone(), w.offset.clone())?;
                    cons[i].push(toward_j.flipped());
                    cons[j].push(toward_j);
                }
            }
        }
    }
    let polys = cons.into_iter().map(|c| HPolyhedron::new(2, c)).collect::<Result<Vec<_>>>()?;
    SeparatingSystem::new(polys)
}

/// Facet count report against the bound `6a - 12`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacReport {
    pub a: usize,
    pub fac: usize,
    pub incidences: usize,
    pub type1: usize,
    pub type2: usize,
    pub supported: bool,
    pub fac_le_twice_incidences: bool,
    pub bound: usize,
    pub fac_le_bound: bool,
}

pub fn check_fac_bound(system: &SeparatingSystem) -> Result<FacReport> {
    let a = system.len();
    if a < 3 {
        return Err(Error::InvalidParameter(format!("the bound 6a - 12 needs a >= 3, got {a}")));
    }
    let inc = extract_incidences(system);
    let type1 = inc.iter().filter(|r| r.kind == IncidenceKind::Type1).count();
    let bound = 6 * a - 12;
    Ok(FacReport {
        a,
        fac: system.fac,
        incidences: inc.len(),
        type1,
        type2: inc.len() - type1,
        supported: is_supported(system),
        fac_le_twice_incidences: system.fac <= 2 * inc.len(),
        bound,
        fac_le_bound: system.fac <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::from_ints(&[x, y])).collect()
    }

    pub(crate) fn strips() -> DisjointFamily {
        DisjointFamily::from_points(vec![
            pts(&[(-10, 0), (10, 0), (-10, 1), (10, 1)]),
            pts(&[(-10, 3), (10, 3), (-10, 4), (10, 4)]),
            pts(&[(-10, 6), (10, 6), (-10, 7), (10, 7)]),
        ])
        .unwrap()
    }

    #[test]
    fn two_triangles_share_one_line() {
        let f = DisjointFamily::from_points(vec![pts(&[(0, 0), (1, 0), (0, 1)]), pts(&[(5, 0), (6, 0), (5, 1)])]).unwrap();
        let s = naive_separating_system(&f).unwrap();
        assert_eq!(s.fac, 2);
        s.validate(&f).unwrap();
    }

    #[test]
    fn three_strips_have_four_facets() {
        let f = strips();
        let s = naive_separating_system(&f).unwrap();
        s.validate(&f).unwrap();
        assert_eq!(s.fac, 4);
        assert_eq!(s.polyhedra.iter().map(|p| p.constraints().len()).collect::<Vec<_>>(), vec![1, 2, 1]);
    }

    #[test]
    fn overlap_reports_pair() {
        let err = DisjointFamily::from_points(vec![
            pts(&[(0, 0), (1, 0)]),
            pts(&[(9, 9)]),
            pts(&[(0, -1), (1, 1)]),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::Overlap(0, 2)));
    }

    #[test]
    fn generic_triangles_within_pair_count() {
        for seed in 0..5 {
            let f = DisjointFamily::random(3, seed).unwrap();
            let s = naive_separating_system(&f).unwrap();
            s.validate(&f).unwrap();
            assert!(s.fac <= 6);
        }
    }

    #[test]
    fn fac_bound_needs_three_sets() {
        let f = DisjointFamily::from_points(vec![pts(&[(0, 0)]), pts(&[(5, 0)])]).unwrap();
        let s = naive_separating_system(&f).unwrap();
        assert!(check_fac_bound(&s).is_err());
        let r = check_fac_bound(&naive_separating_system(&strips()).unwrap()).unwrap();
        assert_eq!(r.bound, 6);
        assert!(r.fac_le_bound);
    }

    fn poly(v: &[(i64, i64)]) -> HPolyhedron {
        HPolyhedron::from_convex_polygon(&pts(v)).unwrap()
    }

    fn system(polys: &[&[(i64, i64)]]) -> SeparatingSystem {
        SeparatingSystem::new(polys.iter().map(|v| poly(v)).collect()).unwrap()
    }

    const RING: [&[(i64, i64)]; 5] = [
        &[(-40, 60), (0, 0), (60, 60)],
        &[(-64, -40), (-64, -36), (-40, 0), (40, 0), (40, -40)],
        &[(-64, 60), (-40, 60), (-20, 30), (-64, -36)],
        &[(74, 60), (60, 60), (30, 30), (74, -36)],
        &[(40, -40), (40, 15), (74, -36), (74, -40)],
    ];

    #[test]
    fn shared_edge_is_type1() {
        let s = system(&[&[(0, 0), (1, 0), (1, 1), (0, 1)], &[(1, 0), (2, 0), (2, 1), (1, 1)]]);
        let inc = extract_incidences(&s);
        assert_eq!(inc.len(), 1);
        assert_eq!(inc[0].kind, IncidenceKind::Type1);
        assert!(matches!(inc[0].geometry, geometry::Shape::Segment { .. }));
        assert_eq!(inc[0].carrier_facets.len(), 2);
    }

    #[test]
    fn vertex_on_open_facet_is_type2() {
        let s = system(&[&[(0, 0), (1, 0), (1, 2), (0, 2)], &[(1, 1), (3, 0), (3, 2)]]);
        let inc = extract_incidences(&s);
        assert_eq!(inc.len(), 1);
        assert_eq!(inc[0].kind, IncidenceKind::Type2);
        assert_eq!(inc[0].anchor_point(), Point::from_ints(&[1, 1]));
        assert_eq!(inc[0].carrier_facets.len(), 1);
        assert_eq!(inc[0].carrier_facets[0].0, 0);
    }

    #[test]
    fn common_vertex_is_not_an_incidence() {
        let s = system(&[&[(0, 0), (1, 0), (1, 1), (0, 1)], &[(1, 1), (2, 1), (2, 2), (1, 2)]]);
        assert!(extract_incidences(&s).is_empty());
    }

    #[test]
    fn ring_of_five_has_six_incidences() {
        let s = system(&RING);
        let inc = extract_incidences(&s);
        let pairs: Vec<_> = inc.iter().map(|r| (r.pair, r.kind)).collect();
        use IncidenceKind::*;
        assert_eq!(
            pairs,
            vec![((0, 1), Type2), ((0, 2), Type1), ((0, 3), Type1), ((1, 2), Type1), ((1, 4), Type1), ((3, 4), Type1)]
        );
        let g = build_auxiliary_graph(&s, &inc).unwrap();
        assert_eq!(g.edges.len(), 6);
        assert!(g.edges.len() <= 3 * 5 - 6);
    }

    #[test]
    fn two_sets_give_a_path() {
        let s = system(&[&[(0, 0), (1, 0), (1, 1), (0, 1)], &[(1, 0), (2, 0), (2, 1), (1, 1)]]);
        let g = build_auxiliary_graph(&s, &extract_incidences(&s)).unwrap();
        assert_eq!((g.vertex_count(), g.edges.len()), (2, 1));
    }

    #[test]
    fn crossing_drawing_is_reported() {
        let g = AuxiliaryGraph {
            anchors: pts(&[(0, 0), (2, 2), (0, 2), (2, 0)]),
            edges: vec![
                GraphEdge { i: 0, j: 1, kind: IncidenceKind::Type1, via: Point::from_ints(&[1, 1]) },
                GraphEdge { i: 2, j: 3, kind: IncidenceKind::Type1, via: Point::from_ints(&[1, 1]) },
            ],
        };
        assert!(matches!(g.check_plane(), Err(Error::DrawingCrossing((0, 1), (2, 3)))));
    }

    #[test]
    fn supported_system_is_a_fixpoint() {
        let f = strips();
        let s = naive_separating_system(&f).unwrap();
        assert!(is_supported(&s));
        let out = improve_separating_system(&s, &f, DEFAULT_MAX_ROUNDS).unwrap();
        assert!(out.supported);
        assert!(out.moves.is_empty());
        assert_eq!(out.system, s);
        assert!(out.system.fac <= 6);
    }

    #[test]
    fn free_wedges_are_absorbed() {
        let f = DisjointFamily::from_points(vec![pts(&[(0, 0), (1, 1)]), pts(&[(3, 0), (4, 1)])]).unwrap();
        let boxes = system(&[&[(0, 0), (1, 0), (1, 1), (0, 1)], &[(3, 0), (4, 0), (4, 1), (3, 1)]]);
        boxes.validate(&f).unwrap();
        let out = improve_separating_system(&boxes, &f, DEFAULT_MAX_ROUNDS).unwrap();
        assert!(out.system.fac < boxes.fac);
        assert!(out.moves.iter().any(|m| m.kind == MoveKind::DropFacet));
        assert!(out.score >= out.initial);
        out.system.validate(&f).unwrap();
    }

    #[test]
    fn random_six_sets_draw_planar() {
        let f = DisjointFamily::random(6, 11).unwrap();
        let s = naive_separating_system(&f).unwrap();
        let out = improve_separating_system(&s, &f, DEFAULT_MAX_ROUNDS).unwrap();
        out.system.validate(&f).unwrap();
        let inc = extract_incidences(&out.system);
        let g = build_auxiliary_graph(&out.system, &inc).unwrap();
        assert!(g.edges.len() <= 12);
        if out.supported {
            assert!(out.system.fac <= 2 * inc.len());
        }
    }
}

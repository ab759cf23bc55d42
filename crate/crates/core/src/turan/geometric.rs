//! Geometric engines: intersection hypergraphs of families of convex sets,
//! the empty-tuple lemma for separated pairs, and polyhedral thickening.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boxes::Hypergraph;
use crate::error::{Error, Result};
use crate::exact::hpoly::facet_irredundant;
use crate::exact::{
    hulls_disjoint, hulls_intersect, multi_hulls_intersect, HPolyhedron, Halfspace, HullRelation, Point, Region,
    Scalar, VPolytope,
};
use crate::random;

fn check_family(family: usize, members: &[VPolytope]) -> Result<()> {
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            if !hulls_disjoint(members[a].generators(), members[b].generators())? {
                return Err(Error::FamilyOverlap { family, a, b });
            }
        }
    }
    Ok(())
}

/// All index tuples of the product `sizes[0] x sizes[1] x ...`, in
/// lexicographic order.
pub fn product(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out.into_iter().flat_map(|t| (0..n).map(move |j| [t.clone(), vec![j]].concat())).collect();
    }
    out
}

/// The partite hypergraph whose parts are the families and whose edges are
/// the transversals with a common point.
pub fn intersection_hypergraph(families: &[Vec<VPolytope>]) -> Result<Hypergraph> {
    for (i, f) in families.iter().enumerate() {
        check_family(i, f)?;
    }
    let mut parts = Vec::new();
    let mut next = 0;
    for f in families {
        parts.push((next..next + f.len()).collect::<Vec<_>>());
        next += f.len();
    }
    let sizes: Vec<usize> = families.iter().map(Vec::len).collect();
    let tuples = product(&sizes);
    let hits: Vec<bool> = tuples
        .par_iter()
        .map(|t| {
            let sets: Vec<VPolytope> = t.iter().enumerate().map(|(i, &j)| families[i][j].clone()).collect();
            multi_hulls_intersect(&sets).map(|p| p.is_some())
        })
        .collect::<Result<_>>()?;
    let edges: Vec<Vec<usize>> = tuples
        .iter()
        .zip(hits)
        .filter(|(_, h)| *h)
        .map(|(t, _)| t.iter().enumerate().map(|(i, &j)| parts[i][j]).collect())
        .collect();
    Hypergraph::partite(parts, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptyTupleMethod {
    /// Scan all `2^(d+1)` choices.
    BruteForce,
    /// Cut by a separating hyperplane of the last pair and recurse inside it.
    Inductive,
}

/// A choice of one member (0 or 1) from each of `d + 1` disjoint pairs of
/// polytopes in `R^d` with empty common intersection.
pub fn find_empty_tuple(pairs: &[(VPolytope, VPolytope)], method: EmptyTupleMethod) -> Result<Vec<usize>> {
    let d = pairs.first().ok_or(Error::EmptyInput("pairs"))?.0.dim();
    if pairs.len() != d + 1 {
        return Err(Error::InvalidParameter(format!("need {} pairs in dimension {d}, got {}", d + 1, pairs.len())));
    }
    for (i, (a, b)) in pairs.iter().enumerate() {
        if a.dim() != d || b.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: a.dim().max(b.dim()),
            });
        }
        if !hulls_disjoint(a.generators(), b.generators())? {
            return Err(Error::FamilyOverlap { family: i, a: 0, b: 1 });
        }
    }
    match method {
        EmptyTupleMethod::BruteForce => {
            for mask in 0..1usize << pairs.len() {
                let t: Vec<usize> = (0..pairs.len()).map(|i| mask >> i & 1).collect();
                if multi_hulls_intersect(&choose(pairs, &t))?.is_none() {
                    return Ok(t);
                }
            }
            Err(Error::SeparationFailed("every tuple intersects".into()))
        }
        EmptyTupleMethod::Inductive => {
            let cuts = pairs
                .iter()
                .map(|(a, b)| match hulls_intersect(a, b)? {
                    HullRelation::Disjoint(w) => Ok((w.normal, w.offset)),
                    HullRelation::Intersect(_) => Err(Error::SeparationFailed("pair meets".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            inductive(pairs, &cuts, pairs.len() - 1, &mut Vec::new())
        }
    }
}

fn choose(pairs: &[(VPolytope, VPolytope)], t: &[usize]) -> Vec<VPolytope> {
    t.iter().zip(pairs).map(|(&j, (a, b))| if j == 0 { a.clone() } else { b.clone() }).collect()
}

fn slice(sets: &[&VPolytope], eqs: &[(Point, Scalar)]) -> Result<Option<Point>> {
    let mut r = Region::new(sets[0].dim());
    for s in sets {
        r = r.with_hull(s.generators())?;
    }
    for (n, c) in eqs {
        r = r.with_equation(n.clone(), c.clone())?;
    }
    Ok(r.find_point())
}

/// Pairs `0..=level` inside the affine subspace `eqs`, of dimension `level`
/// when every slice of pair `level` is nonempty.
fn inductive(
    pairs: &[(VPolytope, VPolytope)],
    cuts: &[(Point, Scalar)],
    level: usize,
    eqs: &mut Vec<(Point, Scalar)>,
) -> Result<Vec<usize>> {
    let (a, b) = &pairs[level];
    for (j, side) in [a, b].into_iter().enumerate() {
        if slice(&[side], eqs)?.is_none() {
            let mut t = vec![0; level];
            t.push(j);
            return Ok(t);
        }
    }
    if level == 0 {
        return Err(Error::SeparationFailed("both members of a pair meet a point subspace".into()));
    }
    eqs.push(cuts[level].clone());
    let mut t = inductive(pairs, cuts, level - 1, eqs)?;
    eqs.pop();
    let chosen = choose(pairs, &t);
    let refs: Vec<&VPolytope> = chosen.iter().collect();
    // the common part of the earlier choices misses the cut, so it lies on
    // one side; take the member on the other side
    let j = match slice(&refs, eqs)? {
        None => 0,
        Some(x) => {
            let (n, c) = &cuts[level];
            usize::from(&n.dot(&x) < c)
        }
    };
    t.push(j);
    Ok(t)
}

/// `d + 1` pairs in `R^d`, each a random point cloud split by a random
/// hyperplane, so the members of different pairs overlap heavily.
pub fn random_separated_pairs(d: usize, seed: u64) -> Vec<(VPolytope, VPolytope)> {
    let mut rng = random::rng(seed);
    let mut out = Vec::with_capacity(d + 1);
    while out.len() < d + 1 {
        let normal = Point::new((0..d).map(|_| crate::exact::scalar::int(rng.gen_range(-3..=3))).collect());
        if normal.is_zero() {
            continue;
        }
        let offset = random::scalar_in(&mut rng, 3, 2);
        let (mut neg, mut pos) = (Vec::new(), Vec::new());
        for p in random::points_in(&mut rng, 4 + 2 * d, d, 10, 2) {
            let v = normal.dot(&p) - &offset;
            match v.cmp(&Scalar::from_integer(0.into())) {
                std::cmp::Ordering::Less => neg.push(p),
                std::cmp::Ordering::Greater => pos.push(p),
                std::cmp::Ordering::Equal => {}
            }
        }
        if let (Ok(a), Ok(b)) = (VPolytope::new(neg), VPolytope::new(pos)) {
            out.push((a, b));
        }
    }
    out
}

/// `count` families of `s` pairwise disjoint small clusters in `R^d`.
pub fn random_families(count: usize, s: usize, d: usize, seed: u64) -> Result<Vec<Vec<VPolytope>>> {
    let mut rng = random::rng(seed);
    let mut out = Vec::with_capacity(count);
    for f in 0..count {
        let mut found = None;
        for _ in 0..1000 {
            let members: Vec<VPolytope> = (0..s)
                .map(|_| {
                    let centre = random::point_in(&mut rng, d, 8, 1);
                    let n = rng.gen_range(2..=d + 2);
                    VPolytope::new(random::cluster(&mut rng, &centre, n, 3, 2)).expect("nonempty")
                })
                .collect();
            if check_family(f, &members).is_ok() {
                found = Some(members);
                break;
            }
        }
        out.push(found.ok_or_else(|| Error::CapExceeded("no disjoint family after 1000 draws".into()))?);
    }
    Ok(out)
}

/// Like [`random_families`], redrawn until no transversal has a common
/// point, so the unions are disjoint.
pub fn random_disjoint_unions(r: usize, s: usize, d: usize, seed: u64) -> Result<Vec<Vec<VPolytope>>> {
    for attempt in 0..200u64 {
        let families = random_families(r, s, d, seed.wrapping_mul(1000).wrapping_add(attempt))?;
        if intersection_hypergraph(&families)?.edge_count() == 0 {
            return Ok(families);
        }
    }
    Err(Error::CapExceeded("no instance with disjoint unions after 200 draws".into()))
}

/// One thickening step's bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepAudit {
    pub family: usize,
    pub member: usize,
    /// Separations from the other members of the same family.
    pub within: usize,
    /// Intersecting transversals of the other families, each separated once.
    pub cross: usize,
    pub facets: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thickening {
    pub polyhedra: Vec<Vec<HPolyhedron>>,
    pub steps: Vec<StepAudit>,
    pub total_facets: usize,
    /// Largest number of intersecting transversals met in one step.
    pub q_observed: usize,
    /// `r s ((s - 1) + q_observed)`.
    pub audit_bound: usize,
    /// `r s (q_observed + s)`.
    pub budget: usize,
}

impl Thickening {
    pub fn within_budget(&self) -> bool {
        self.total_facets <= self.audit_bound && self.audit_bound <= self.budget
    }
}

enum Current {
    V(VPolytope),
    H(HPolyhedron),
}

fn region_of(dim: usize, sets: &[&Current]) -> Result<Region> {
    let mut r = Region::new(dim);
    for c in sets {
        r = match c {
            Current::V(v) => r.with_hull(v.generators())?,
            Current::H(h) => r.with_halfspaces(h.constraints())?,
        };
    }
    Ok(r)
}

fn separator(compact: &VPolytope, region: &Region) -> Result<Halfspace> {
    match region.separate_from_hull(compact.generators())? {
        Err(w) => Halfspace::new(w.normal, w.offset),
        Ok(_) => Err(Error::SeparationFailed("set meets the region it must avoid".into())),
    }
}

/// Replaces every `C_{i,k}` in turn by a polyhedron containing it, cut
/// out by one halfspace per other member of its family and one per
/// intersecting transversal of the other families' current sets.
pub fn polyhedral_thickening(families: &[Vec<VPolytope>]) -> Result<Thickening> {
    let r = families.len();
    let s = families.first().map_or(0, Vec::len);
    if r < 2 || s == 0 || families.iter().any(|f| f.len() != s) {
        return Err(Error::InvalidParameter("need r >= 2 families of equal positive size".into()));
    }
    let dim = families[0][0].dim();
    for (i, f) in families.iter().enumerate() {
        if f.iter().any(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: f.iter().map(VPolytope::dim).find(|&d| d != dim).unwrap_or(dim),
            });
        }
        check_family(i, f)?;
    }
    for t in product(&vec![s; r]) {
        let sets: Vec<VPolytope> = t.iter().enumerate().map(|(i, &k)| families[i][k].clone()).collect();
        if multi_hulls_intersect(&sets)?.is_some() {
            return Err(Error::InvalidParameter(format!("the unions intersect: transversal {t:?} has a common point")));
        }
    }
    let mut cur: Vec<Vec<Current>> = families.iter().map(|f| f.iter().cloned().map(Current::V).collect()).collect();
    let mut steps = Vec::new();
    for i in 0..r {
        for k in 0..s {
            let c = &families[i][k];
            let mut hs = Vec::new();
            for j in (0..s).filter(|&j| j != k) {
                hs.push(separator(c, &region_of(dim, &[&cur[i][j]])?)?);
            }
            let within = hs.len();
            let others: Vec<usize> = (0..r).filter(|&l| l != i).collect();
            let mut cross = 0;
            for t in product(&vec![s; r - 1]) {
                let sets: Vec<&Current> = others.iter().zip(&t).map(|(&l, &kk)| &cur[l][kk]).collect();
                let region = region_of(dim, &sets)?;
                if region.is_empty() {
                    continue;
                }
                cross += 1;
                hs.push(separator(c, &region)?);
            }
            let poly = if hs.is_empty() {
                HPolyhedron::full(dim)
            } else {
                facet_irredundant(&HPolyhedron::new(dim, hs)?)?
            };
            steps.push(StepAudit {
                family: i,
                member: k,
                within,
                cross,
                facets: poly.constraints().len(),
            });
            cur[i][k] = Current::H(poly);
        }
    }
    let polyhedra: Vec<Vec<HPolyhedron>> = cur
        .into_iter()
        .map(|f| {
            f.into_iter()
                .map(|c| match c {
                    Current::H(h) => h,
                    Current::V(_) => unreachable!("every member replaced"),
                })
                .collect()
        })
        .collect();
    verify_thickening(families, &polyhedra)?;
    let total_facets = steps.iter().map(|st| st.facets).sum();
    let q_observed = steps.iter().map(|st| st.cross).max().unwrap_or(0);
    Ok(Thickening {
        polyhedra,
        steps,
        total_facets,
        q_observed,
        audit_bound: r * s * (s - 1 + q_observed),
        budget: r * s * (q_observed + s),
    })
}

/// Containment, disjointness within each family and emptiness of every
/// transversal, all decided exactly.
pub fn verify_thickening(families: &[Vec<VPolytope>], polys: &[Vec<HPolyhedron>]) -> Result<()> {
    let dim = families[0][0].dim();
    let fail = |m: String| Err(Error::SeparationFailed(m));
    for (i, (f, p)) in families.iter().zip(polys).enumerate() {
        for (k, (c, q)) in f.iter().zip(p).enumerate() {
            if !c.generators().iter().all(|g| q.contains(g)) {
                return fail(format!("K[{i}][{k}] does not contain its set"));
            }
        }
        for a in 0..p.len() {
            for b in a + 1..p.len() {
                let r = Region::new(dim).with_halfspaces(p[a].constraints())?.with_halfspaces(p[b].constraints())?;
                if !r.is_empty() {
                    return fail(format!("K[{i}][{a}] and K[{i}][{b}] meet"));
                }
            }
        }
    }
    let s = polys[0].len();
    for t in product(&vec![s; polys.len()]) {
        let mut r = Region::new(dim);
        for (i, &k) in t.iter().enumerate() {
            r = r.with_halfspaces(polys[i][k].constraints())?;
        }
        if !r.is_empty() {
            return fail(format!("transversal {t:?} of the thickened sets meets"));
        }
    }
    Ok(())
}

//! Greedy local improvement using the two facet moves of the supported-
//! facet argument: translate an unsupported facet outward until it touches
//! a neighbour, or delete it when its exterior wedge is free. A move is
//! kept only if the system stays valid and the score strictly improves.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::geometry::facet_piece;
use super::incidence::{unsupported_facets, Score};
use super::{DisjointFamily, SeparatingSystem};
use crate::error::Result;
use crate::exact::hpoly::strictly_feasible;
use crate::exact::point::cross2;
use crate::exact::{scalar, Halfspace, HPolyhedron, Point, Region, Scalar};

pub const DEFAULT_MAX_ROUNDS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    /// Absorb the exterior wedge, deleting the facet.
    DropFacet,
    /// Push the facet line outward to the first contact.
    Translate,
    /// Grow a thin trapezoid bounded by the neighbours' facets at the
    /// facet's endpoints.
    Wedge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub round: usize,
    pub polyhedron: usize,
    pub facet: usize,
    pub kind: MoveKind,
    pub before: Score,
    pub after: Score,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Improvement {
    pub system: SeparatingSystem,
    pub initial: Score,
    pub score: Score,
    pub rounds: usize,
    pub moves: Vec<MoveRecord>,
    pub supported: bool,
}

pub fn improve_separating_system(
    system: &SeparatingSystem,
    family: &DisjointFamily,
    max_rounds: usize,
) -> Result<Improvement> {
    system.validate(family)?;
    let initial = Score::of(system);
    let mut cur = system.clone();
    let mut score = initial;
    let mut moves = Vec::new();
    let mut rounds = 0;
    let mut supported = false;
    while rounds < max_rounds {
        let open = unsupported_facets(&cur);
        if open.is_empty() {
            supported = true;
            break;
        }
        rounds += 1;
        let Some((next, rec)) = first_improving_move(&cur, family, &open, score, rounds) else {
            break;
        };
        debug_assert!(next.validate(family).is_ok());
        score = rec.after;
        moves.push(rec);
        cur = next;
    }
    if !supported {
        supported = unsupported_facets(&cur).is_empty();
    }
    Ok(Improvement {
        system: cur,
        initial,
        score,
        rounds,
        moves,
        supported,
    })
}

fn first_improving_move(
    cur: &SeparatingSystem,
    family: &DisjointFamily,
    open: &[(usize, usize)],
    score: Score,
    round: usize,
) -> Option<(SeparatingSystem, MoveRecord)> {
    for &(i, k) in open {
        for (kind, poly) in candidates(cur, i, k) {
            let Ok(next) = cur.with_replaced(i, poly) else {
                continue;
            };
            if next.validate_one(family, i).is_err() {
                continue;
            }
            let after = Score::of(&next);
            if after > score {
                let rec = MoveRecord {
                    round,
                    polyhedron: i,
                    facet: k,
                    kind,
                    before: score,
                    after,
                };
                return Some((next, rec));
            }
        }
    }
    None
}

fn candidates(s: &SeparatingSystem, i: usize, k: usize) -> Vec<(MoveKind, HPolyhedron)> {
    let p = &s.polyhedra[i];
    let h = &p.constraints()[k];
    let others: Vec<Halfspace> = p.constraints().iter().enumerate().filter(|&(j, _)| j != k).map(|(_, c)| c.clone()).collect();
    let mut out = Vec::new();
    if !others.is_empty() {
        if let Ok(q) = HPolyhedron::new(2, others.clone()) {
            out.push((MoveKind::DropFacet, q));
        }
    }
    if let Some(gap) = first_contact_gap(s, i, &others, h) {
        if gap.is_positive() {
            let mut cons = others.clone();
            cons.push(Halfspace::new(h.normal.clone(), &h.offset - &gap).expect("nonzero normal"));
            out.push((MoveKind::Translate, HPolyhedron::new(2, cons).expect("valid constraints")));
        }
    }
    if let Some(q) = wedge_move(s, i, k, &others, h) {
        out.push((MoveKind::Wedge, q));
    }
    out
}

/// Smallest `offset - max normal . x` over the other polyhedra whose
/// interior meets the open region `others ∩ {normal . x < offset}`; a
/// polyhedron touching only its boundary rays is not in the wedge. `None`
/// when no polyhedron meets the region at all.
fn first_contact_gap(s: &SeparatingSystem, i: usize, others: &[Halfspace], h: &Halfspace) -> Option<Scalar> {
    let outside = h.flipped();
    let mut best: Option<Scalar> = None;
    for (j, q) in s.polyhedra.iter().enumerate() {
        if j == i || strictly_feasible(2, others.iter().chain([&outside]).chain(q.constraints())).is_none() {
            continue;
        }
        let region = Region::new(2)
            .with_halfspaces(others)
            .and_then(|r| r.with_halfspaces([&outside]))
            .and_then(|r| r.with_halfspaces(q.constraints()))
            .expect("planar constraints");
        if let Some(Ok((m, _))) = region.maximize(&h.normal) {
            let gap = &h.offset - m;
            if best.as_ref().is_none_or(|b| &gap < b) {
                best = Some(gap);
            }
        }
    }
    best
}

/// The facet of another polyhedron leaving vertex `p` into the open
/// exterior wedge closest in angle to the facet direction `u`, as the
/// closed halfplane bounded by its line and containing `p + u`.
fn wedge_side(s: &SeparatingSystem, i: usize, others: &[Halfspace], h: &Halfspace, p: &Point, u: &Point) -> Option<Halfspace> {
    let active: Vec<&Halfspace> = others.iter().filter(|g| g.on_boundary(p)).collect();
    let enters = |v: &Point| h.normal.dot(v).is_negative() && active.iter().all(|g| g.normal.dot(v).is_positive());
    let mut best: Option<Point> = None;
    for (j, q) in s.polyhedra.iter().enumerate() {
        if j == i || !q.contains(p) {
            continue;
        }
        for g in 0..q.constraints().len() {
            if !q.constraints()[g].on_boundary(p) {
                continue;
            }
            let f = facet_piece(q, g);
            if !f.contains(p) {
                continue;
            }
            let tp = f.param_of(p);
            let mut dirs = Vec::new();
            if f.hi.as_ref().is_none_or(|hi| hi > &tp) {
                dirs.push(f.dir.clone());
            }
            if f.lo.as_ref().is_none_or(|lo| lo < &tp) {
                dirs.push(f.dir.scale(&-scalar::one()));
            }
            for v in dirs.into_iter().filter(|v| enters(v)) {
                // smaller angle to u means larger cotangent u.v / |u x v|
                let better = best.as_ref().is_none_or(|b| {
                    u.dot(&v) * cross2(u, b).abs() > u.dot(b) * cross2(u, &v).abs()
                });
                if better {
                    best = Some(v);
                }
            }
        }
    }
    let v = best?;
    let mut m = Point::new(vec![-v[1].clone(), v[0].clone()]);
    if m.dot(u).is_negative() {
        m = m.scale(&-scalar::one());
    }
    let offset = m.dot(p);
    Some(Halfspace::new(m, offset).expect("nonzero normal"))
}

fn wedge_move(s: &SeparatingSystem, i: usize, k: usize, others: &[Halfspace], h: &Halfspace) -> Option<HPolyhedron> {
    let e = facet_piece(&s.polyhedra[i], k);
    let mut sides = Vec::new();
    if let Some(lo) = &e.lo {
        sides.extend(wedge_side(s, i, others, h, &e.at(lo), &e.dir));
    }
    if let Some(hi) = &e.hi {
        sides.extend(wedge_side(s, i, others, h, &e.at(hi), &e.dir.scale(&-scalar::one())));
    }
    if sides.is_empty() {
        return None;
    }
    let mut bounded: Vec<Halfspace> = others.to_vec();
    bounded.extend(sides.iter().cloned());
    let outside = h.flipped();
    let mut eps: Option<Scalar> = None;
    for (j, q) in s.polyhedra.iter().enumerate() {
        if j == i || strictly_feasible(2, bounded.iter().chain([&outside]).chain(q.constraints())).is_none() {
            continue;
        }
        let region = Region::new(2)
            .with_halfspaces(&bounded)
            .and_then(|r| r.with_halfspaces([&outside]))
            .and_then(|r| r.with_halfspaces(q.constraints()))
            .expect("planar constraints");
        let Some(Ok((m, _))) = region.maximize(&h.normal) else {
            continue;
        };
        let gap = &h.offset - m;
        if !gap.is_positive() {
            return None;
        }
        if eps.as_ref().is_none_or(|g| &gap < g) {
            eps = Some(gap);
        }
    }
    let eps = eps.map_or_else(scalar::one, |g| g * scalar::ratio(1, 2));
    debug_assert!(!eps.is_zero());
    bounded.push(Halfspace::new(h.normal.clone(), &h.offset - &eps).expect("nonzero normal"));
    HPolyhedron::new(2, bounded).ok()
}

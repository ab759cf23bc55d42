//! Boundary incidences between the polyhedra of a separating system.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::{facet_piece, is_vertex, Piece, Shape};
use super::SeparatingSystem;
use crate::exact::{scalar, Halfspace, HPolyhedron, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IncidenceKind {
    Type1,
    Type2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceRecord {
    pub pair: (usize, usize),
    pub kind: IncidenceKind,
    pub geometry: Shape,
    /// `(polyhedron, facet)` pairs whose open facet meets the incidence.
    pub carrier_facets: Vec<(usize, usize)>,
    #[serde(skip)]
    pub piece: Option<Piece>,
}

impl IncidenceRecord {
    /// The drawing point: the incidence itself when it is a point, else a
    /// canonical point of its relative interior.
    pub fn anchor_point(&self) -> Point {
        match &self.geometry {
            Shape::Point { at } => at.clone(),
            _ => self.piece.as_ref().expect("set on extraction").interior_point(),
        }
    }
}

/// `P_i ∩ P_j` for interior-disjoint planar polyhedra, as a piece of one
/// facet line of `P_i`.
fn contact(p: &HPolyhedron, q: &HPolyhedron) -> Option<Piece> {
    let mut point = None;
    for k in 0..p.constraints().len() {
        let piece = facet_piece(p, k).clip_poly(q);
        if piece.is_nondegenerate() {
            return Some(piece);
        }
        if piece.is_point() && point.is_none() {
            point = Some(piece);
        }
    }
    point
}

fn open_facets_meeting(p: &HPolyhedron, who: usize, piece: &Piece) -> Vec<(usize, usize)> {
    let bounds = piece_bounds(piece);
    let far = &piece.base + &piece.dir;
    (0..p.constraints().len())
        .filter(|&k| {
            let f = facet_piece(p, k);
            if piece.is_point() {
                f.relint_contains(&piece.at(piece.lo.as_ref().expect("bounded")))
            } else {
                f.on_line(&piece.base) && f.on_line(&far) && f.meets_relint(&f.clip_all(&bounds))
            }
        })
        .map(|k| (who, k))
        .collect()
}

/// Halfspaces cutting a carrier line down to `piece`.
fn piece_bounds(piece: &Piece) -> Vec<Halfspace> {
    let mut out = Vec::new();
    if let Some(lo) = &piece.lo {
        out.push(Halfspace::new(piece.dir.clone(), piece.dir.dot(&piece.at(lo))).expect("nonzero"));
    }
    if let Some(hi) = &piece.hi {
        let neg = piece.dir.scale(&-scalar::one());
        out.push(Halfspace::new(neg.clone(), neg.dot(&piece.at(hi))).expect("nonzero"));
    }
    out
}

pub fn incidence_between(s: &SeparatingSystem, i: usize, j: usize) -> Option<IncidenceRecord> {
    let (p, q) = (&s.polyhedra[i], &s.polyhedra[j]);
    let piece = contact(p, q)?;
    let kind = if piece.is_point() {
        let x = piece.at(piece.lo.as_ref().expect("bounded"));
        if is_vertex(p, &x) && is_vertex(q, &x) {
            return None;
        }
        IncidenceKind::Type2
    } else {
        IncidenceKind::Type1
    };
    let mut carrier_facets = open_facets_meeting(p, i, &piece);
    carrier_facets.extend(open_facets_meeting(q, j, &piece));
    Some(IncidenceRecord {
        pair: (i, j),
        kind,
        geometry: piece.shape().expect("nonempty"),
        carrier_facets,
        piece: Some(piece),
    })
}

/// All incidences, ordered by pair.
pub fn extract_incidences(s: &SeparatingSystem) -> Vec<IncidenceRecord> {
    let a = s.len();
    let pairs: Vec<(usize, usize)> = (0..a).flat_map(|i| (i + 1..a).map(move |j| (i, j))).collect();
    pairs.par_iter().filter_map(|&(i, j)| incidence_between(s, i, j)).collect()
}

/// `(polyhedron, facet)` pairs whose open facet meets no other polyhedron.
pub fn unsupported_facets(s: &SeparatingSystem) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, p) in s.polyhedra.iter().enumerate() {
        for k in 0..p.constraints().len() {
            let f = facet_piece(p, k);
            let hit = s
                .polyhedra
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && f.meets_relint(&f.clip_poly(q)));
            if !hit {
                out.push((i, k));
            }
        }
    }
    out
}

pub fn is_supported(s: &SeparatingSystem) -> bool {
    unsupported_facets(s).is_empty()
}

/// The improvement objective: more incidences, then more Type 1
/// incidences, then fewer facets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Score {
    pub incidences: usize,
    pub type1: usize,
    pub fac: usize,
}

impl Score {
    pub fn of(s: &SeparatingSystem) -> Score {
        let inc = extract_incidences(s);
        Score {
            incidences: inc.len(),
            type1: inc.iter().filter(|r| r.kind == IncidenceKind::Type1).count(),
            fac: s.fac,
        }
    }

    fn key(&self) -> (usize, usize, std::cmp::Reverse<usize>) {
        (self.incidences, self.type1, std::cmp::Reverse(self.fac))
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

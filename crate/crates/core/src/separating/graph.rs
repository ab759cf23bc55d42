//! The auxiliary graph on the polyhedra of a separating system, drawn with
//! two straight pieces per edge: anchor, incidence point, anchor.

use serde::{Deserialize, Serialize};

use super::geometry::{overlap_from_shared, point_on_segment, segments_meet};
use super::incidence::{IncidenceKind, IncidenceRecord};
use super::SeparatingSystem;
use crate::error::{Error, Result};
use crate::exact::hpoly::strictly_feasible;
use crate::exact::Point;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub i: usize,
    pub j: usize,
    pub kind: IncidenceKind,
    /// Where the drawing of the edge crosses from `P_i` into `P_j`.
    pub via: Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxiliaryGraph {
    pub anchors: Vec<Point>,
    pub edges: Vec<GraphEdge>,
}

impl AuxiliaryGraph {
    pub fn vertex_count(&self) -> usize {
        self.anchors.len()
    }

    /// The drawing as straight segments, two per edge.
    pub fn segments(&self) -> Vec<(usize, usize, Point, Point)> {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(e, g)| {
                [
                    (e, g.i, self.anchors[g.i].clone(), g.via.clone()),
                    (e, g.j, self.anchors[g.j].clone(), g.via.clone()),
                ]
            })
            .collect()
    }

    /// Every pair of drawn pieces meets only where the drawing allows: at a
    /// common anchor, or at the bend point of their own edge.
    pub fn check_plane(&self) -> Result<()> {
        let segs = self.segments();
        let pair = |e: usize| (self.edges[e].i, self.edges[e].j);
        for (s, (e1, v1, a1, b1)) in segs.iter().enumerate() {
            for (v, x) in self.anchors.iter().enumerate() {
                if v != *v1 && point_on_segment(x, a1, b1) {
                    return Err(Error::InvalidSystem(format!("edge {:?} runs through anchor {v}", pair(*e1))));
                }
            }
            for (e2, v2, a2, b2) in &segs[s + 1..] {
                let bad = if e1 == e2 {
                    overlap_from_shared(b1, a1, a2)
                } else if v1 == v2 {
                    overlap_from_shared(a1, b1, b2)
                } else {
                    segments_meet(a1, b1, a2, b2)
                };
                if bad {
                    return Err(Error::DrawingCrossing(pair(*e1), pair(*e2)));
                }
            }
        }
        Ok(())
    }
}

pub fn build_auxiliary_graph(s: &SeparatingSystem, incidences: &[IncidenceRecord]) -> Result<AuxiliaryGraph> {
    let anchors = s
        .polyhedra
        .iter()
        .enumerate()
        .map(|(i, p)| {
            strictly_feasible(2, p.constraints())
                .ok_or_else(|| Error::InvalidSystem(format!("polyhedron {i} has empty interior")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut edges: Vec<GraphEdge> = Vec::with_capacity(incidences.len());
    for r in incidences {
        let (i, j) = r.pair;
        if i == j || edges.iter().any(|g| (g.i, g.j) == (i, j) || (g.j, g.i) == (i, j)) {
            return Err(Error::InvalidSystem(format!("pair ({i}, {j}) listed twice or looped")));
        }
        edges.push(GraphEdge {
            i,
            j,
            kind: r.kind,
            via: r.anchor_point(),
        });
    }
    let g = AuxiliaryGraph { anchors, edges };
    g.check_plane()?;
    let a = g.vertex_count();
    if a >= 3 && g.edges.len() > 3 * a - 6 {
        return Err(Error::InvalidSystem(format!("{} edges exceed 3a - 6 = {}", g.edges.len(), 3 * a - 6)));
    }
    Ok(g)
}

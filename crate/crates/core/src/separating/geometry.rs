//! Exact planar pieces of lines: points, segments, rays and full lines.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{point::cross2, scalar, Halfspace, HPolyhedron, Point, Scalar};

/// `{base + t * dir : lo <= t <= hi}` with missing bounds meaning infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub base: Point,
    pub dir: Point,
    pub lo: Option<Scalar>,
    pub hi: Option<Scalar>,
    empty: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Shape {
    Point { at: Point },
    Segment { from: Point, to: Point },
    Ray { origin: Point, direction: Point },
    Line { through: Point, direction: Point },
}

impl Piece {
    /// The line `normal . x = offset`.
    pub fn line(h: &Halfspace) -> Piece {
        let n = &h.normal;
        let base = n.scale(&(&h.offset / n.norm_squared()));
        let dir = Point::new(vec![-n[1].clone(), n[0].clone()]);
        Piece {
            base,
            dir,
            lo: None,
            hi: None,
            empty: false,
        }
    }

    pub fn at(&self, t: &Scalar) -> Point {
        &self.base + &self.dir.scale(t)
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_point(&self) -> bool {
        !self.empty && matches!((&self.lo, &self.hi), (Some(a), Some(b)) if a == b)
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.empty && !self.is_point()
    }

    /// Intersection with a closed halfspace.
    pub fn clip(&self, h: &Halfspace) -> Piece {
        let mut out = self.clone();
        if out.empty {
            return out;
        }
        let slope = h.normal.dot(&self.dir);
        let at0 = h.normal.dot(&self.base) - &h.offset;
        if slope.is_zero() {
            if at0.is_negative() {
                out.empty = true;
            }
            return out;
        }
        let t = -at0 / &slope;
        if slope.is_positive() {
            if out.lo.as_ref().is_none_or(|lo| &t > lo) {
                out.lo = Some(t);
            }
        } else if out.hi.as_ref().is_none_or(|hi| &t < hi) {
            out.hi = Some(t);
        }
        if let (Some(lo), Some(hi)) = (&out.lo, &out.hi) {
            if lo > hi {
                out.empty = true;
            }
        }
        out
    }

    pub fn clip_all<'a>(&self, hs: impl IntoIterator<Item = &'a Halfspace>) -> Piece {
        hs.into_iter().fold(self.clone(), |p, h| p.clip(h))
    }

    pub fn clip_poly(&self, p: &HPolyhedron) -> Piece {
        self.clip_all(p.constraints())
    }

    /// Parameter of a point known to lie on the carrier line.
    pub fn param_of(&self, x: &Point) -> Scalar {
        (x - &self.base).dot(&self.dir) / self.dir.norm_squared()
    }

    pub fn on_line(&self, x: &Point) -> bool {
        cross2(&(x - &self.base), &self.dir).is_zero()
    }

    pub fn contains(&self, x: &Point) -> bool {
        if self.empty || !self.on_line(x) {
            return false;
        }
        let t = self.param_of(x);
        self.lo.as_ref().is_none_or(|lo| &t >= lo) && self.hi.as_ref().is_none_or(|hi| &t <= hi)
    }

    /// Relative interior membership.
    pub fn relint_contains(&self, x: &Point) -> bool {
        if !self.is_nondegenerate() || !self.on_line(x) {
            return false;
        }
        let t = self.param_of(x);
        self.lo.as_ref().is_none_or(|lo| &t > lo) && self.hi.as_ref().is_none_or(|hi| &t < hi)
    }

    /// Whether `other` (a sub-piece on the same line) reaches the relative
    /// interior of `self`.
    pub fn meets_relint(&self, other: &Piece) -> bool {
        if other.empty || !self.is_nondegenerate() {
            return false;
        }
        if other.is_point() {
            return self.relint_contains(&other.at(other.lo.as_ref().expect("bounded")));
        }
        true
    }

    pub fn endpoints(&self) -> Vec<Point> {
        self.lo.iter().chain(self.hi.iter()).map(|t| self.at(t)).collect()
    }

    /// A canonical point of the relative interior: the midpoint of a
    /// segment, one unit past the origin of a ray, the base point of a line.
    pub fn interior_point(&self) -> Point {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => self.at(&((a + b) / scalar::int(2))),
            (Some(a), None) => self.at(&(a + scalar::one())),
            (None, Some(b)) => self.at(&(b - scalar::one())),
            (None, None) => self.base.clone(),
        }
    }

    pub fn shape(&self) -> Option<Shape> {
        if self.empty {
            return None;
        }
        Some(match (&self.lo, &self.hi) {
            (Some(a), Some(b)) if a == b => Shape::Point { at: self.at(a) },
            (Some(a), Some(b)) => Shape::Segment {
                from: self.at(a),
                to: self.at(b),
            },
            (Some(a), None) => Shape::Ray {
                origin: self.at(a),
                direction: self.dir.clone(),
            },
            (None, Some(b)) => Shape::Ray {
                origin: self.at(b),
                direction: self.dir.scale(&-scalar::one()),
            },
            (None, None) => Shape::Line {
                through: self.base.clone(),
                direction: self.dir.clone(),
            },
        })
    }
}

/// Facet `k` of `p` as a piece of its line.
pub fn facet_piece(p: &HPolyhedron, k: usize) -> Piece {
    let cons = p.constraints();
    Piece::line(&cons[k]).clip_all(cons.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, h)| h))
}

/// Number of constraint lines through `x`; two or more means a vertex.
pub fn lines_through(p: &HPolyhedron, x: &Point) -> usize {
    p.constraints().iter().filter(|h| h.on_boundary(x)).count()
}

pub fn is_vertex(p: &HPolyhedron, x: &Point) -> bool {
    p.contains(x) && lines_through(p, x) >= 2
}

fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    cross2(&(b - a), &(p - a)).is_zero() && (p - a).dot(&(p - b)) <= Scalar::zero()
}

/// Whether closed segments `ab` and `cd` share any point.
pub fn segments_meet(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = cross2(&(b - a), &(c - a));
    let o2 = cross2(&(b - a), &(d - a));
    let o3 = cross2(&(d - c), &(a - c));
    let o4 = cross2(&(d - c), &(b - c));
    let sgn = |x: &Scalar| if x.is_positive() { 1 } else if x.is_negative() { -1 } else { 0 };
    if sgn(&o1) * sgn(&o2) < 0 && sgn(&o3) * sgn(&o4) < 0 {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// Whether two segments sharing the endpoint `x` (`x-b`, `x-d`) overlap
/// beyond it.
pub fn overlap_from_shared(x: &Point, b: &Point, d: &Point) -> bool {
    let u = b - x;
    let v = d - x;
    cross2(&u, &v).is_zero() && u.dot(&v).is_positive()
}

pub fn point_on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    on_segment(p, a, b)
}

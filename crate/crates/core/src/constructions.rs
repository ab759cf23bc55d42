//! Witness point sets: the scalloped planar grid, its refined variant with
//! two points per column group, and the torus-product lift.
//!
//! Indices are zero-based throughout: row `i` lives on circle `i`, and
//! `z[i][j]` is the `j`-th point of that arc in clockwise order.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{convex_position, scalar, Point, Scalar, VPolytope};
use crate::trig::{self, Angle, Interval};

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const MAX_PRECISION_BITS: u32 = 1024;

/// Interval evidence behind the choice of `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsTranscript {
    /// Bits used for the `sin^2(pi/s)` enclosure.
    pub enclosure_bits: u32,
    pub sin_sq_exact: bool,
    #[serde(with = "scalar::serde_scalar")]
    pub sin_sq_lo: Scalar,
    #[serde(with = "scalar::serde_scalar")]
    pub sin_sq_hi: Scalar,
    /// `ceil(3 / sin^2(pi/s))`.
    pub threshold_ceiling: String,
    /// Enclosure of `2(M-1) sin(pi/s) cos((s+2)pi/(2s)) + 6`.
    #[serde(with = "scalar::serde_scalar")]
    pub condition_lo: Scalar,
    #[serde(with = "scalar::serde_scalar")]
    pub condition_hi: Scalar,
    pub condition_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScallopParams {
    pub s: usize,
    #[serde(rename = "M", with = "scalar::serde_scalar")]
    pub m: Scalar,
    #[serde(rename = "R", with = "scalar::serde_scalar")]
    pub radius: Scalar,
    #[serde(with = "scalar::serde_scalar")]
    pub delta: Scalar,
    pub precision_bits: u32,
    pub points_per_arc: usize,
    pub transcript: ParamsTranscript,
}

impl ScallopParams {
    /// Same parameters with `2s` points per arc.
    pub fn refined(mut self) -> Self {
        self.points_per_arc = 2 * self.s;
        self
    }

    pub fn with_points_per_arc(mut self, n: usize) -> Result<Self> {
        if n != self.s && n != 2 * self.s {
            return Err(Error::InvalidParameter(format!(
                "points per arc must be s or 2s, got {n} for s = {}",
                self.s
            )));
        }
        self.points_per_arc = n;
        Ok(self)
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }
}

fn q(n: i64, d: i64) -> Scalar {
    scalar::ratio(n, d)
}

/// `M = ceil(3 / sin^2(pi/s)) + 2`, `R = M - 1`, `delta = 1/M^2`.
pub fn choose_params(s: usize, precision_bits: u32) -> Result<ScallopParams> {
    if s < 2 {
        return Err(Error::InvalidParameter(format!("s must be at least 2, got {s}")));
    }
    if precision_bits == 0 {
        return Err(Error::InvalidParameter("precision_bits must be positive".into()));
    }
    let angle = Angle::pi_times(q(1, s as i64));
    let exact = trig::rational_sin_squared_pi_over(s as u32);
    let mut bits = precision_bits.max(32);
    let (sin_sq, ceiling) = loop {
        let sin_sq = match &exact {
            Some(v) => Interval::point(v.clone()),
            None => trig::sin(&angle, bits).square(),
        };
        let ratio = sin_sq.recip().expect("sin(pi/s) is nonzero").scale(&scalar::int(3));
        if let Some(c) = ratio.ceil() {
            break (sin_sq, c);
        }
        if bits >= 1 << 16 {
            return Err(Error::PrecisionTooLow("could not settle the ceiling of 3/sin^2(pi/s)".into()));
        }
        bits *= 2;
    };
    let m = Scalar::from_integer(&ceiling + BigInt::from(2));
    let radius = &m - Scalar::one();
    let delta = (&m * &m).recip();
    let sin = trig::sin(&angle, bits);
    let cos = trig::cos(&Angle::pi_times(q(s as i64 + 2, 2 * s as i64)), bits);
    let condition = sin
        .mul(&cos)
        .scale(&(&radius * scalar::int(2)))
        .add(&Interval::point(scalar::int(6)));
    let transcript = ParamsTranscript {
        enclosure_bits: bits,
        sin_sq_exact: exact.is_some(),
        sin_sq_lo: sin_sq.lo,
        sin_sq_hi: sin_sq.hi,
        threshold_ceiling: ceiling.to_string(),
        condition_holds: condition.is_negative(),
        condition_lo: condition.lo,
        condition_hi: condition.hi,
    };
    if !transcript.condition_holds {
        return Err(Error::PrecisionTooLow(format!(
            "could not certify the choice of M = {} for s = {s}",
            scalar::to_string(&m)
        )));
    }
    Ok(ScallopParams {
        s,
        m,
        radius,
        delta,
        precision_bits,
        points_per_arc: s,
        transcript,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointGrid {
    pub s: usize,
    pub rows: usize,
    pub cols: usize,
    #[serde(with = "scalar::serde_scalar")]
    pub radius: Scalar,
    pub centers: Vec<Point>,
    pub points: Vec<Vec<Point>>,
    pub params: ScallopParams,
}

impl PointGrid {
    pub fn point(&self, i: usize, j: usize) -> &Point {
        &self.points[i][j]
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of points in each column group: 1 for the plain grid, 2 for
    /// the refined one.
    pub fn group_width(&self) -> usize {
        (self.params.points_per_arc / self.s).max(1)
    }

    pub fn group_count(&self) -> usize {
        self.cols / self.group_width()
    }

    pub fn group_of(&self, j: usize) -> usize {
        j / self.group_width()
    }

    /// Column indices in column group `g`.
    pub fn group_columns(&self, g: usize) -> std::ops::Range<usize> {
        let w = self.group_width();
        g * w..(g + 1) * w
    }

    /// All `(i, j)` in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |i| (0..self.cols).map(move |j| (i, j)))
    }

    pub fn flat_index(&self, i: usize, j: usize) -> usize {
        i * self.cols + j
    }

    /// First pair of coinciding points, if any.
    pub fn duplicate_pair(&self) -> Option<((usize, usize), (usize, usize))> {
        let mut seen: BTreeMap<&Point, (usize, usize)> = BTreeMap::new();
        for (i, j) in self.indices() {
            if let Some(&prev) = seen.get(&self.points[i][j]) {
                return Some((prev, (i, j)));
            }
            seen.insert(&self.points[i][j], (i, j));
        }
        None
    }

    pub fn check_distinct(&self) -> Result<()> {
        match self.duplicate_pair() {
            Some((a, b)) => Err(Error::DuplicatePoints(a, b)),
            None => Ok(()),
        }
    }

    /// Every point lies exactly on its row circle.
    pub fn on_circle(&self) -> bool {
        let r2 = &self.radius * &self.radius;
        self.indices().all(|(i, j)| (&self.points[i][j] - &self.centers[i]).norm_squared() == r2)
    }

    /// Keeps only the listed rows and column groups.
    pub fn subgrid(&self, rows: &[usize], groups: &[usize]) -> PointGrid {
        let cols: Vec<usize> = groups.iter().flat_map(|&g| self.group_columns(g)).collect();
        PointGrid {
            s: self.s,
            rows: rows.len(),
            cols: cols.len(),
            radius: self.radius.clone(),
            centers: rows.iter().map(|&i| self.centers[i].clone()).collect(),
            points: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.points[i][j].clone()).collect())
                .collect(),
            params: self.params.clone(),
        }
    }

    /// Rows and column groups of a grid that need not be square; the
    /// column groups are `points_per_arc / s` wide.
    pub fn from_points(s: usize, centers: Vec<Point>, points: Vec<Vec<Point>>, params: ScallopParams) -> Result<Self> {
        let rows = points.len();
        let cols = points.first().map_or(0, Vec::len);
        if points.iter().any(|r| r.len() != cols) || centers.len() != rows {
            return Err(Error::InvalidParameter("ragged grid".into()));
        }
        Ok(PointGrid {
            s,
            rows,
            cols,
            radius: params.radius.clone(),
            centers,
            points,
            params,
        })
    }
}

/// Clockwise angular offsets across the width-`delta` window.
fn window_offsets(delta: &Scalar, cols: usize) -> Vec<Scalar> {
    let half = delta / scalar::int(2);
    (0..cols)
        .map(|j| -&half + delta * q(j as i64, cols as i64 - 1))
        .collect()
}

/// `c` reduced into `(-1, 1]` modulo 2.
fn reduce_pi_multiple(c: Scalar) -> Scalar {
    let two = scalar::int(2);
    let shifted = (&c + Scalar::one()) / &two;
    let k = shifted.ceil() - Scalar::one();
    c - k * two
}

pub fn generate_scalloped(params: &ScallopParams) -> Result<PointGrid> {
    let s = params.s;
    let cols = params.points_per_arc;
    if cols != s && cols != 2 * s {
        return Err(Error::InvalidParameter("points per arc must be s or 2s".into()));
    }
    let bits = params.precision_bits;
    let mut centers = Vec::with_capacity(s);
    let mut points = Vec::with_capacity(s);
    let offsets = window_offsets(&params.delta, cols);
    for k in 0..s {
        let phi = Angle::pi_times(q(2 * k as i64 + 1, s as i64));
        let (sn, cs) = trig::sin_cos(&phi, bits);
        let center = Point::new(vec![cs.scale(&params.m).dyadic(bits), sn.scale(&params.m).dyadic(bits)]);
        let inward = reduce_pi_multiple(q(2 * k as i64 + 1 + s as i64, s as i64));
        let row: Vec<Point> = offsets
            .iter()
            .map(|t| {
                let (x, y) = trig::unit_circle_point(&Angle::new(inward.clone(), -t.clone()), bits);
                &center + &Point::new(vec![x, y]).scale(&params.radius)
            })
            .collect();
        centers.push(center);
        points.push(row);
    }
    let grid = PointGrid {
        s,
        rows: s,
        cols,
        radius: params.radius.clone(),
        centers,
        points,
        params: params.clone(),
    };
    if let Some((a, b)) = grid.duplicate_pair() {
        return Err(Error::PrecisionTooLow(format!(
            "points {a:?} and {b:?} coincide at {bits} bits; retry with more precision"
        )));
    }
    if !grid.on_circle() {
        return Err(Error::PrecisionTooLow("on-circle parametrization degenerated".into()));
    }
    for (i, row) in grid.points.iter().enumerate() {
        if convex_position(row)?.is_some() {
            return Err(Error::PrecisionTooLow(format!("row {i} is not in convex position")));
        }
    }
    Ok(grid)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub index: Vec<usize>,
    pub point: Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusWitness {
    pub s: usize,
    pub r: usize,
    pub dim: usize,
    pub base: PointGrid,
    pub torus_vertices: Vec<Point>,
    pub points: BTreeMap<Vec<usize>, Point>,
}

#[derive(Serialize, Deserialize)]
struct TorusWire {
    s: usize,
    r: usize,
    dim: usize,
    base: PointGrid,
    torus_vertices: Vec<Point>,
    points: Vec<TorusPoint>,
}

impl Serialize for TorusWitness {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        TorusWire {
            s: self.s,
            r: self.r,
            dim: self.dim,
            base: self.base.clone(),
            torus_vertices: self.torus_vertices.clone(),
            points: self
                .points
                .iter()
                .map(|(index, point)| TorusPoint {
                    index: index.clone(),
                    point: point.clone(),
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TorusWitness {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let w = TorusWire::deserialize(de)?;
        Ok(TorusWitness {
            s: w.s,
            r: w.r,
            dim: w.dim,
            base: w.base,
            torus_vertices: w.torus_vertices,
            points: w.points.into_iter().map(|p| (p.index, p.point)).collect(),
        })
    }
}

/// All tuples in `[s]^r`, lexicographically.
pub fn index_tuples(s: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..s).map(move |k| {
                    let mut t = t.clone();
                    t.push(k);
                    t
                })
            })
            .collect();
    }
    out
}

/// Rational points exactly on the unit circle near `e^{2 pi i k/s}`.
pub fn regular_polygon(s: usize, bits: u32) -> Vec<Point> {
    (0..s)
        .map(|k| {
            let a = Angle::pi_times(reduce_pi_multiple(q(2 * k as i64, s as i64)));
            let (x, y) = trig::unit_circle_point(&a, bits);
            Point::new(vec![x, y])
        })
        .collect()
}

pub fn generate_torus(s: usize, r: usize, precision_bits: u32) -> Result<TorusWitness> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    let base = generate_scalloped(&choose_params(s, precision_bits)?)?;
    let torus_vertices = if r > 2 { regular_polygon(s, precision_bits) } else { Vec::new() };
    if !torus_vertices.is_empty() {
        let distinct: BTreeSet<&Point> = torus_vertices.iter().collect();
        if distinct.len() != s {
            return Err(Error::PrecisionTooLow("torus vertices coincide".into()));
        }
        if convex_position(&torus_vertices)?.is_some() {
            return Err(Error::PrecisionTooLow("torus vertices not in convex position".into()));
        }
    }
    let points = index_tuples(s, r)
        .into_iter()
        .map(|t| {
            let mut p = base.points[t[0]][t[1]].clone();
            for &k in &t[2..] {
                p = p.concat(&torus_vertices[k]);
            }
            (t, p)
        })
        .collect();
    Ok(TorusWitness {
        s,
        r,
        dim: 2 * r - 2,
        base,
        torus_vertices,
        points,
    })
}

pub type Containers = Vec<Option<VPolytope>>;

fn hull_of(points: Vec<Point>) -> Option<VPolytope> {
    if points.is_empty() {
        None
    } else {
        Some(VPolytope::new(points).expect("nonempty, equal dimension"))
    }
}

/// Row containers from `part1` and column(-group) containers from `part2`.
pub fn build_planar_containers(
    grid: &PointGrid,
    part1: &BTreeSet<(usize, usize)>,
    part2: &BTreeSet<(usize, usize)>,
) -> Result<(Containers, Containers)> {
    for idx in part1.iter().chain(part2) {
        if idx.0 >= grid.rows || idx.1 >= grid.cols {
            return Err(Error::NotAPartition(format!("index {idx:?} outside the grid")));
        }
    }
    if let Some(idx) = part1.intersection(part2).next() {
        return Err(Error::NotAPartition(format!("index {idx:?} in both parts")));
    }
    if part1.len() + part2.len() != grid.len() {
        return Err(Error::NotAPartition("parts do not cover the grid".into()));
    }
    let rows = (0..grid.rows)
        .map(|i| {
            hull_of(
                (0..grid.cols)
                    .filter(|&j| part1.contains(&(i, j)))
                    .map(|j| grid.points[i][j].clone())
                    .collect(),
            )
        })
        .collect();
    let groups = (0..grid.group_count())
        .map(|g| {
            hull_of(
                (0..grid.rows)
                    .flat_map(|i| grid.group_columns(g).map(move |j| (i, j)))
                    .filter(|idx| part2.contains(idx))
                    .map(|(i, j)| grid.points[i][j].clone())
                    .collect(),
            )
        })
        .collect();
    Ok((rows, groups))
}

/// Layer hulls `C[j][k] = Conv{p in part j : i_j = k}`.
pub fn build_highdim_containers(w: &TorusWitness, partition: &BTreeMap<Vec<usize>, usize>) -> Result<Vec<Containers>> {
    let mut layers: Vec<Vec<Vec<Point>>> = vec![vec![Vec::new(); w.s]; w.r];
    for (t, p) in &w.points {
        let j = *partition
            .get(t)
            .ok_or_else(|| Error::NotAPartition(format!("tuple {t:?} not assigned")))?;
        if j >= w.r {
            return Err(Error::NotAPartition(format!("part {j} out of range for r = {}", w.r)));
        }
        layers[j][t[j]].push(p.clone());
    }
    Ok(layers
        .into_iter()
        .map(|row| row.into_iter().map(hull_of).collect())
        .collect())
}

/// Integer part of a rational, for display.
pub fn floor_int(x: &Scalar) -> BigInt {
    x.numer().div_floor(x.denom())
}

//! Certificates that generated grids are lower-bound witnesses, and the
//! brute-force partition oracles used to cross-check them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::constructions::{index_tuples, PointGrid, TorusWitness};
use crate::error::{Error, Result};
use crate::exact::{convex_position, hulls_disjoint, scalar, Point, Region, VPolytope};
use crate::hashing::json_digest;

pub const DEFAULT_BIPARTITION_CAP: usize = 20;
pub const DEFAULT_RPARTITION_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub indices: Vec<Vec<usize>>,
    pub points: Vec<Point>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub claim_id: String,
    pub status: Status,
    pub checked_count: u64,
    pub counterexample: Option<Counterexample>,
    pub params_echo: serde_json::Value,
    pub transcript_hash: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sub_reports: Vec<CertificateReport>,
}

impl CertificateReport {
    fn new(
        claim_id: &str,
        checked_count: u64,
        counterexample: Option<Counterexample>,
        params_echo: serde_json::Value,
        transcript_hash: String,
    ) -> Self {
        CertificateReport {
            claim_id: claim_id.to_string(),
            status: if counterexample.is_some() { Status::Fail } else { Status::Pass },
            checked_count,
            counterexample,
            params_echo,
            transcript_hash,
            sub_reports: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn grid_echo(grid: &PointGrid) -> serde_json::Value {
    json!({
        "s": grid.s,
        "rows": grid.rows,
        "cols": grid.cols,
        "M": scalar::to_string(&grid.params.m),
        "precision_bits": grid.params.precision_bits,
    })
}

/// Sign test `(z[k][a] - y_k) . (z[k][a] - z[l][b]) < 0` over all cross-circle
/// pairs.
pub fn check_claim_negative(grid: &PointGrid) -> CertificateReport {
    let mut checks = Vec::new();
    for k in 0..grid.rows {
        for a in 0..grid.cols {
            for l in (0..grid.rows).filter(|&l| l != k) {
                for b in 0..grid.cols {
                    checks.push((k, a, l, b));
                }
            }
        }
    }
    let first_bad = checks.par_iter().find_first(|&&(k, a, l, b)| {
        let v = &grid.points[k][a];
        let value = (v - &grid.centers[k]).dot(&(v - &grid.points[l][b]));
        !value.is_negative()
    });
    let counterexample = first_bad.map(|&(k, a, l, b)| Counterexample {
        indices: vec![vec![k, a], vec![l, b]],
        points: vec![grid.points[k][a].clone(), grid.points[l][b].clone()],
        detail: "dot product not strictly negative".into(),
    });
    CertificateReport::new(
        "claim-negative",
        checks.len() as u64,
        counterexample,
        grid_echo(grid),
        json_digest(grid),
    )
}

/// Index sets of the maximal-case checks for row `i` and column group `g`:
/// for each split of the shared cells `X`, the row hull without the cells
/// given to the column side against the column hull without the rest.
fn maximal_case_sets(grid: &PointGrid, i: usize, g: usize) -> Vec<(Vec<(usize, usize)>, Vec<(usize, usize)>)> {
    let shared: Vec<(usize, usize)> = grid.group_columns(g).map(|j| (i, j)).collect();
    let row: Vec<(usize, usize)> = (0..grid.cols).map(|j| (i, j)).collect();
    let col: Vec<(usize, usize)> = (0..grid.rows)
        .flat_map(|k| grid.group_columns(g).map(move |j| (k, j)))
        .collect();
    (0..1usize << shared.len())
        .map(|mask| {
            let to_col: BTreeSet<(usize, usize)> = shared
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &c)| c)
                .collect();
            let row_part = row.iter().copied().filter(|c| !to_col.contains(c)).collect();
            let col_part = col
                .iter()
                .copied()
                .filter(|c| !shared.contains(c) || to_col.contains(c))
                .collect();
            (row_part, col_part)
        })
        .collect()
}

fn gather(grid: &PointGrid, idx: &[(usize, usize)]) -> Vec<Point> {
    idx.iter().map(|&(i, j)| grid.points[i][j].clone()).collect()
}

/// The maximal-case criterion: every row hull is strictly disjoint from
/// every column-group hull, for each way of splitting their shared cells.
pub fn certify_planar_witness(grid: &PointGrid) -> Result<CertificateReport> {
    grid.check_distinct()?;
    let mut checks = Vec::new();
    for i in 0..grid.rows {
        for g in 0..grid.group_count() {
            for (r, c) in maximal_case_sets(grid, i, g) {
                checks.push((i, g, r, c));
            }
        }
    }
    let verdicts: Vec<Result<bool>> = checks
        .par_iter()
        .map(|(_, _, r, c)| hulls_disjoint(&gather(grid, r), &gather(grid, c)))
        .collect();
    let mut counterexample = None;
    for ((i, g, r, c), v) in checks.iter().zip(verdicts) {
        if !v? {
            counterexample = Some(Counterexample {
                indices: vec![vec![*i], vec![*g]],
                points: gather(grid, r).into_iter().chain(gather(grid, c)).collect(),
                detail: format!("row hull {r:?} meets column hull {c:?}"),
            });
            break;
        }
    }
    Ok(CertificateReport::new(
        "maximal-case",
        checks.len() as u64,
        counterexample,
        grid_echo(grid),
        json_digest(grid),
    ))
}

/// The first row/column-group pair whose containers meet under the given
/// bipartition, if any.
pub fn bipartition_conflict(
    grid: &PointGrid,
    part1: &BTreeSet<(usize, usize)>,
    part2: &BTreeSet<(usize, usize)>,
) -> Result<Option<(usize, usize)>> {
    let (rows, groups) = crate::constructions::build_planar_containers(grid, part1, part2)?;
    for (i, c) in rows.iter().enumerate() {
        for (g, d) in groups.iter().enumerate() {
            if let (Some(c), Some(d)) = (c, d) {
                if !hulls_disjoint(c.generators(), d.generators())? {
                    return Ok(Some((i, g)));
                }
            }
        }
    }
    Ok(None)
}

/// Memo key: row, cells of the row on side one, group, cells of the group
/// on side two (bit masks in row-major order).
type PairKey = (usize, u64, usize, u64);

/// Every bipartition of the grid, each LP solved once per distinct pair of
/// containers. Bit `k` of a partition mask puts flat cell `k` on side two.
pub fn exhaustive_bipartitions(grid: &PointGrid, cap: usize) -> Result<CertificateReport> {
    let n = grid.len();
    if n > cap || n > 40 {
        return Err(Error::CapExceeded(format!(
            "{n} points exceed the bipartition cap {cap}; use certify_planar_witness"
        )));
    }
    grid.check_distinct()?;
    let groups = grid.group_count();
    let group_cells: Vec<Vec<(usize, usize)>> = (0..groups)
        .map(|g| (0..grid.rows).flat_map(|k| grid.group_columns(g).map(move |j| (k, j))).collect())
        .collect();
    let key_of = |mask: u64, i: usize, g: usize| -> PairKey {
        let row_mask = (0..grid.cols)
            .filter(|&j| mask >> grid.flat_index(i, j) & 1 == 0)
            .fold(0u64, |m, j| m | 1 << j);
        let col_mask = group_cells[g]
            .iter()
            .enumerate()
            .filter(|&(_, &(k, j))| mask >> grid.flat_index(k, j) & 1 == 1)
            .fold(0u64, |m, (b, _)| m | 1 << b);
        (i, row_mask, g, col_mask)
    };
    let total: u64 = 1 << n;
    let mut keys = BTreeSet::new();
    for mask in 0..total {
        for i in 0..grid.rows {
            for g in 0..groups {
                let key = key_of(mask, i, g);
                if key.1 != 0 && key.3 != 0 {
                    keys.insert(key);
                }
            }
        }
    }
    let keys: Vec<PairKey> = keys.into_iter().collect();
    let verdicts: Vec<Result<bool>> = keys
        .par_iter()
        .map(|&(i, rm, g, cm)| {
            let row: Vec<Point> = (0..grid.cols)
                .filter(|j| rm >> j & 1 == 1)
                .map(|j| grid.points[i][j].clone())
                .collect();
            let col: Vec<Point> = group_cells[g]
                .iter()
                .enumerate()
                .filter(|(b, _)| cm >> b & 1 == 1)
                .map(|(_, &(k, j))| grid.points[k][j].clone())
                .collect();
            hulls_disjoint(&row, &col)
        })
        .collect();
    let mut memo = HashMap::with_capacity(keys.len());
    for (k, v) in keys.iter().zip(verdicts) {
        memo.insert(*k, v?);
    }
    let mut counterexample = None;
    'outer: for mask in 0..total {
        for i in 0..grid.rows {
            for g in 0..groups {
                let key = key_of(mask, i, g);
                if key.1 != 0 && key.3 != 0 && !memo[&key] {
                    let side_two: Vec<usize> = (0..n).filter(|&b| mask >> b & 1 == 1).collect();
                    counterexample = Some(Counterexample {
                        indices: vec![side_two, vec![i], vec![g]],
                        points: Vec::new(),
                        detail: format!("partition mask {mask:#x}: row {i} meets column group {g}"),
                    });
                    break 'outer;
                }
            }
        }
    }
    let mut echo = grid_echo(grid);
    echo["distinct_lps"] = json!(keys.len());
    Ok(CertificateReport::new(
        "exhaustive-bipartition",
        total,
        counterexample,
        echo,
        json_digest(grid),
    ))
}

fn torus_echo(w: &TorusWitness) -> serde_json::Value {
    json!({
        "s": w.s,
        "r": w.r,
        "dim": w.dim,
        "M": scalar::to_string(&w.base.params.m),
        "precision_bits": w.base.params.precision_bits,
    })
}

/// Extremality of every point of `U^{r-2}` plus the planar certificate of
/// the base grid.
pub fn certify_torus_witness(w: &TorusWitness) -> Result<CertificateReport> {
    let product: Vec<(Vec<usize>, Point)> = if w.r >= 3 {
        index_tuples(w.s, w.r - 2)
            .into_iter()
            .map(|t| {
                let mut p = w.torus_vertices[t[0]].clone();
                for &k in &t[1..] {
                    p = p.concat(&w.torus_vertices[k]);
                }
                (t, p)
            })
            .collect()
    } else {
        Vec::new()
    };
    let extreme = if product.is_empty() {
        CertificateReport::new("torus-extreme", 0, None, torus_echo(w), json_digest(w))
    } else {
        let pts: Vec<Point> = product.iter().map(|(_, p)| p.clone()).collect();
        let violator = convex_position(&pts)?;
        let counterexample = violator.map(|v| {
            let t = product.iter().find(|(_, p)| *p == v).expect("violator comes from the list");
            Counterexample {
                indices: vec![t.0.clone()],
                points: vec![v],
                detail: "torus product point lies in the hull of the others".into(),
            }
        });
        CertificateReport::new(
            "torus-extreme",
            product.len() as u64,
            counterexample,
            torus_echo(w),
            json_digest(w),
        )
    };
    let planar = certify_planar_witness(&w.base)?;
    let mut report = CertificateReport::new(
        "torus-witness",
        extreme.checked_count + planar.checked_count,
        extreme
            .counterexample
            .clone()
            .or_else(|| planar.counterexample.clone()),
        torus_echo(w),
        json_digest(w),
    );
    report.sub_reports = vec![extreme, planar];
    Ok(report)
}

/// Every `r`-partition of the `s^r` points and every index tuple: the
/// present layer hulls must have empty common intersection.
pub fn exhaustive_rpartitions(w: &TorusWitness, cap: u64) -> Result<CertificateReport> {
    let n = w.points.len();
    let partitions = (w.r as u64)
        .checked_pow(n as u32)
        .filter(|&p| p <= cap)
        .ok_or_else(|| {
            Error::CapExceeded(format!(
                "{}^{n} partitions exceed the cap {cap}; use certify_torus_witness",
                w.r
            ))
        })?;
    let tuples: Vec<Vec<usize>> = w.points.keys().cloned().collect();
    let pts: Vec<&Point> = w.points.values().collect();
    let ks = index_tuples(w.s, w.r);
    // members[j][k]: positions of the points with coordinate j equal to k
    let members: Vec<Vec<Vec<usize>>> = (0..w.r)
        .map(|j| (0..w.s).map(|k| (0..n).filter(|&p| tuples[p][j] == k).collect()).collect())
        .collect();
    let digits = |mut code: u64| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let d = (code % w.r as u64) as usize;
                code /= w.r as u64;
                d
            })
            .collect()
    };
    // key: tuple index, then for each part j the mask of layer (j, k_j)
    let key_of = |parts: &[usize], t: usize| -> Option<(usize, Vec<u64>)> {
        let mut masks = Vec::with_capacity(w.r);
        for (j, &k) in ks[t].iter().enumerate() {
            let m = members[j][k]
                .iter()
                .enumerate()
                .filter(|&(_, &p)| parts[p] == j)
                .fold(0u64, |m, (b, _)| m | 1 << b);
            if m == 0 {
                return None;
            }
            masks.push(m);
        }
        Some((t, masks))
    };
    let mut keys = BTreeSet::new();
    for code in 0..partitions {
        let parts = digits(code);
        for t in 0..ks.len() {
            if let Some(key) = key_of(&parts, t) {
                keys.insert(key);
            }
        }
    }
    let keys: Vec<(usize, Vec<u64>)> = keys.into_iter().collect();
    let verdicts: Vec<Result<bool>> = keys
        .par_iter()
        .map(|(t, masks)| {
            let mut region = Region::new(w.dim);
            for (j, (&k, &m)) in ks[*t].iter().zip(masks).enumerate() {
                let hull: Vec<Point> = members[j][k]
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| m >> b & 1 == 1)
                    .map(|(_, &p)| pts[p].clone())
                    .collect();
                region = region.with_hull(&hull)?;
            }
            Ok(region.is_empty())
        })
        .collect();
    let mut memo = BTreeMap::new();
    for (k, v) in keys.iter().zip(verdicts) {
        memo.insert(k.clone(), v?);
    }
    let mut counterexample = None;
    'outer: for code in 0..partitions {
        let parts = digits(code);
        for t in 0..ks.len() {
            if let Some(key) = key_of(&parts, t) {
                if !memo[&key] {
                    counterexample = Some(Counterexample {
                        indices: vec![parts.clone(), ks[t].clone()],
                        points: Vec::new(),
                        detail: format!("layers {:?} share a point", ks[t]),
                    });
                    break 'outer;
                }
            }
        }
    }
    let mut echo = torus_echo(w);
    echo["tuples_per_partition"] = json!(ks.len());
    echo["distinct_lps"] = json!(keys.len());
    Ok(CertificateReport::new(
        "exhaustive-rpartition",
        partitions * ks.len() as u64,
        counterexample,
        echo,
        json_digest(w),
    ))
}

/// Hull containers of one bipartition, for callers that test sampled
/// partitions.
pub fn containers_for_mask(grid: &PointGrid, mask: u64) -> Result<(Vec<Option<VPolytope>>, Vec<Option<VPolytope>>)> {
    let (p1, p2): (BTreeSet<_>, BTreeSet<_>) = grid
        .indices()
        .partition(|&(i, j)| mask >> grid.flat_index(i, j) & 1 == 0);
    crate::constructions::build_planar_containers(grid, &p1, &p2)
}

//! r-shattering and VC-dimension oracles on explicit hypergraphs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::boxes::Hypergraph;
use crate::error::{Error, Result};
use crate::exact::{hulls_disjoint, Point};

pub const MAX_SHATTER_SET: usize = 12;
pub const MAX_VC_VERTICES: usize = 16;

fn traces(h: &Hypergraph, set: &[usize]) -> BTreeSet<u32> {
    h.edges
        .iter()
        .map(|e| set.iter().enumerate().filter(|(_, v)| e.contains(v)).fold(0u32, |m, (b, _)| m | 1 << b))
        .collect()
}

/// Every labelled `r`-partition of `set` (empty parts allowed) has edges
/// `e_i` covering part `i` whose common intersection misses `set`.
pub fn r_shattered(h: &Hypergraph, set: &[usize], r: usize) -> Result<bool> {
    if set.len() > MAX_SHATTER_SET {
        return Err(Error::CapExceeded(format!("shatter test limited to {MAX_SHATTER_SET} points")));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    let n = set.len();
    let all: Vec<u32> = traces(h, set).into_iter().collect();
    let mut label = vec![0usize; n];
    loop {
        let parts: Vec<u32> = (0..r)
            .map(|i| (0..n).filter(|&b| label[b] == i).fold(0u32, |m, b| m | 1 << b))
            .collect();
        if !coverable(&all, &parts) {
            return Ok(false);
        }
        let mut j = 0;
        loop {
            if j == n {
                return Ok(true);
            }
            label[j] += 1;
            if label[j] < r {
                break;
            }
            label[j] = 0;
            j += 1;
        }
    }
}

/// Picks for each part an inclusion-minimal trace containing it, searching
/// for a choice with empty intersection.
fn coverable(traces: &[u32], parts: &[u32]) -> bool {
    let mut options: Vec<Vec<u32>> = Vec::with_capacity(parts.len());
    for &p in parts {
        let mut cand: Vec<u32> = traces.iter().copied().filter(|t| t & p == p).collect();
        cand.sort_by_key(|t| t.count_ones());
        let mut minimal: Vec<u32> = Vec::new();
        for t in cand {
            if !minimal.iter().any(|&m| m & t == m) {
                minimal.push(t);
            }
        }
        if minimal.is_empty() {
            return false;
        }
        options.push(minimal);
    }
    fn rec(options: &[Vec<u32>], acc: u32) -> bool {
        match options.split_first() {
            None => acc == 0,
            Some((first, rest)) => first.iter().any(|&t| rec(rest, acc & t)),
        }
    }
    rec(&options, u32::MAX)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcResult {
    pub dimension: usize,
    pub witness: Vec<usize>,
}

/// Largest vertex set whose every subset is the trace of some edge.
pub fn vc_dimension(h: &Hypergraph) -> Result<VcResult> {
    if h.vertex_count > MAX_VC_VERTICES {
        return Err(Error::CapExceeded(format!("VC search limited to {MAX_VC_VERTICES} vertices")));
    }
    let shattered = |s: &[usize]| traces(h, s).len() == 1usize << s.len();
    let mut level: Vec<Vec<usize>> = if shattered(&[]) { vec![vec![]] } else { vec![] };
    if level.is_empty() {
        return Ok(VcResult {
            dimension: 0,
            witness: vec![],
        });
    }
    loop {
        let mut next = Vec::new();
        for s in &level {
            let start = s.last().map_or(0, |&v| v + 1);
            for v in start..h.vertex_count {
                let mut t = s.clone();
                t.push(v);
                if shattered(&t) {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            let witness = level.swap_remove(0);
            return Ok(VcResult {
                dimension: witness.len(),
                witness,
            });
        }
        level = next;
    }
}

/// Vertices are the points; edges are the subsets cut out by closed
/// halfplanes, found as the strictly line-separable dichotomies.
pub fn halfplane_hypergraph(points: &[Point]) -> Result<Hypergraph> {
    let n = points.len();
    if n > MAX_VC_VERTICES {
        return Err(Error::CapExceeded(format!("halfplane ranges limited to {MAX_VC_VERTICES} points")));
    }
    let mut edges = Vec::new();
    for mask in 0u32..1 << n {
        let (inside, outside): (Vec<_>, Vec<_>) = (0..n).partition(|&i| mask >> i & 1 == 1);
        let a: Vec<Point> = inside.iter().map(|&i| points[i].clone()).collect();
        let b: Vec<Point> = outside.iter().map(|&i| points[i].clone()).collect();
        if hulls_disjoint(&a, &b)? {
            edges.push(inside);
        }
    }
    Hypergraph::new(n, edges)
}

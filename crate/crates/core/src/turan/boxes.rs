//! Hypergraphs, box-type Turán numbers and `K_{2,...,2}`-freeness of
//! partite projections.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::hypercube::{contains_hypercube, k_subsets, Hypercube, TupleSet};
use crate::error::{Error, Result};

pub const DEFAULT_POOL_CAP: usize = 30;

/// Vertices are `0..vertex_count`. In partite mode every edge lists exactly
/// one vertex of each part, in part order; otherwise edges are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub vertex_count: usize,
    pub parts: Option<Vec<Vec<usize>>>,
    pub edges: BTreeSet<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if e.iter().any(|&v| v >= vertex_count) {
                return Err(Error::InvalidParameter(format!("edge {e:?} leaves the vertex set")));
            }
            set.insert(e);
        }
        Ok(Hypergraph {
            vertex_count,
            parts: None,
            edges: set,
        })
    }

    pub fn partite(parts: Vec<Vec<usize>>, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let vertex_count = parts.iter().map(Vec::len).sum();
        let mut seen = vec![false; vertex_count];
        for v in parts.iter().flatten() {
            if *v >= vertex_count || std::mem::replace(&mut seen[*v], true) {
                return Err(Error::InvalidParameter("parts must partition 0..n".into()));
            }
        }
        let set: BTreeSet<Vec<usize>> = edges.into_iter().collect();
        for e in &set {
            if e.len() != parts.len() || e.iter().zip(&parts).any(|(v, p)| !p.contains(v)) {
                return Err(Error::InvalidParameter(format!("edge {e:?} is not a transversal of the parts")));
            }
        }
        Ok(Hypergraph {
            vertex_count,
            parts: Some(parts),
            edges: set,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

fn completes_box(edges: &BTreeSet<Vec<usize>>, e: &[usize], n: usize) -> bool {
    let d = e.len();
    let mut others = vec![0usize; d];
    fn rec(j: usize, e: &[usize], others: &mut Vec<usize>, n: usize, edges: &BTreeSet<Vec<usize>>) -> bool {
        let d = e.len();
        if j == d {
            return (1..1usize << d).all(|mask| {
                let mut t: Vec<usize> = (0..d).map(|i| if mask >> i & 1 == 1 { others[i] } else { e[i] }).collect();
                t.sort_unstable();
                edges.contains(&t)
            });
        }
        for v in 0..n {
            if e.contains(&v) || others[..j].contains(&v) {
                continue;
            }
            others[j] = v;
            if rec(j + 1, e, others, n, edges) {
                return true;
            }
        }
        false
    }
    rec(0, e, &mut others, n, edges)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxTuran {
    pub n: usize,
    pub d: usize,
    pub value: usize,
    pub witness: Hypergraph,
    pub nodes: u64,
}

/// Exact `ex_d(n, K^(d)_{2,...,2})` by branch and bound over the
/// `C(n, d)` candidate edges.
pub fn box_turan(n: usize, d: usize, pool_cap: usize) -> Result<BoxTuran> {
    if d == 0 || d > n {
        return Err(Error::InvalidParameter(format!("need 1 <= d <= n, got d={d}, n={n}")));
    }
    let pool = k_subsets(n, d);
    if pool.len() > pool_cap {
        return Err(Error::CapExceeded(format!("{} candidate edges exceed the pool cap {pool_cap}", pool.len())));
    }
    struct St {
        pool: Vec<Vec<usize>>,
        n: usize,
        cur: BTreeSet<Vec<usize>>,
        best: BTreeSet<Vec<usize>>,
        nodes: u64,
    }
    fn dfs(st: &mut St, i: usize) {
        st.nodes += 1;
        if st.cur.len() > st.best.len() {
            st.best = st.cur.clone();
        }
        if i == st.pool.len() || st.cur.len() + st.pool.len() - i <= st.best.len() {
            return;
        }
        let e = st.pool[i].clone();
        st.cur.insert(e.clone());
        if !completes_box(&st.cur, &e, st.n) {
            dfs(st, i + 1);
        }
        st.cur.remove(&e);
        dfs(st, i + 1);
    }
    let mut st = St {
        pool,
        n,
        cur: BTreeSet::new(),
        best: BTreeSet::new(),
        nodes: 0,
    };
    dfs(&mut st, 0);
    Ok(BoxTuran {
        n,
        d,
        value: st.best.len(),
        witness: Hypergraph::new(n, st.best)?,
        nodes: st.nodes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxViolation {
    /// The projected parts.
    pub parts: Vec<usize>,
    /// Two vertices per projected part spanning a complete box.
    pub pairs: Vec<(usize, usize)>,
}

/// Looks for a complete `k`-partite box with parts of size two in the
/// projection onto every `k` parts; `None` means box-free.
pub fn check_box_freeness(g: &Hypergraph, k: usize) -> Result<Option<BoxViolation>> {
    let parts = g
        .parts
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("box-freeness needs a partite hypergraph".into()))?;
    if k == 0 || k > parts.len() {
        return Err(Error::InvalidParameter(format!("block size {k} outside 1..={}", parts.len())));
    }
    let s = parts.iter().map(Vec::len).max().unwrap_or(0);
    let local = |p: usize, v: usize| parts[p].iter().position(|&u| u == v).expect("validated transversal");
    for t in k_subsets(parts.len(), k) {
        let members = g.edges.iter().map(|e| t.iter().map(|&p| local(p, e[p])).collect::<Vec<_>>());
        let projected = TupleSet::new(k, s, members)?;
        if let Some(cube) = contains_hypercube(&projected, k)? {
            let cube: Hypercube = cube;
            let pairs = t.iter().zip(cube).map(|(&p, (a, b))| (parts[p][a], parts[p][b])).collect();
            return Ok(Some(BoxViolation { parts: t, pairs }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_turan_numbers() {
        assert_eq!(box_turan(4, 2, DEFAULT_POOL_CAP).unwrap().value, 4);
        assert_eq!(box_turan(3, 2, DEFAULT_POOL_CAP).unwrap().value, 3);
        assert_eq!(box_turan(4, 3, DEFAULT_POOL_CAP).unwrap().value, 4);
        assert_eq!(box_turan(5, 2, DEFAULT_POOL_CAP).unwrap().value, 6);
        assert!(box_turan(9, 2, DEFAULT_POOL_CAP).is_err());
    }

    #[test]
    fn complete_square_is_found() {
        let parts = vec![vec![0, 1], vec![2, 3]];
        let full = Hypergraph::partite(parts.clone(), [vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]).unwrap();
        let v = check_box_freeness(&full, 2).unwrap().unwrap();
        assert_eq!(v.pairs, vec![(0, 1), (2, 3)]);
        let empty = Hypergraph::partite(parts, []).unwrap();
        assert!(check_box_freeness(&empty, 2).unwrap().is_none());
    }
}

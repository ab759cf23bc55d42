//! Hypercube-free tuple sets and the extremal function `F(k, m, s)`.
//!
//! Tuples have 0-based values in `0..s`. A `k`-dimensional hypercube is a
//! choice of two distinct values per coordinate together with all `2^k`
//! tuples they combine into.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{scalar, Scalar};

pub const MAX_POSITIONS: usize = 64;
pub const DEFAULT_NODE_CAP: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleSet {
    pub m: usize,
    pub s: usize,
    pub members: BTreeSet<Vec<usize>>,
}

impl TupleSet {
    pub fn new(m: usize, s: usize, members: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let members: BTreeSet<Vec<usize>> = members.into_iter().collect();
        for t in &members {
            if t.len() != m || t.iter().any(|&v| v >= s) {
                return Err(Error::InvalidParameter(format!("tuple {t:?} is not in [{s}]^{m}")));
            }
        }
        Ok(TupleSet { m, s, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The image under the coordinate projection onto `coords`.
    pub fn project(&self, coords: &[usize]) -> TupleSet {
        TupleSet {
            m: coords.len(),
            s: self.s,
            members: self.members.iter().map(|t| coords.iter().map(|&c| t[c]).collect()).collect(),
        }
    }
}

/// Value pairs `(a_j, b_j)`, `a_j < b_j`, one per coordinate.
pub type Hypercube = Vec<(usize, usize)>;

/// A hypercube inside `t`, which must have exactly `k` coordinates.
pub fn contains_hypercube(t: &TupleSet, k: usize) -> Result<Option<Hypercube>> {
    if k != t.m {
        return Err(Error::InvalidParameter(format!(
            "hypercube dimension {k} differs from tuple length {}; project first",
            t.m
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..t.s).flat_map(|a| (a + 1..t.s).map(move |b| (a, b))).collect();
    if pairs.is_empty() {
        return Ok(None);
    }
    let mut choice = vec![0usize; k];
    loop {
        let cube: Hypercube = choice.iter().map(|&c| pairs[c]).collect();
        let full = (0..1usize << k).all(|mask| {
            let corner: Vec<usize> = cube
                .iter()
                .enumerate()
                .map(|(j, &(a, b))| if mask >> j & 1 == 1 { b } else { a })
                .collect();
            t.members.contains(&corner)
        });
        if full {
            return Ok(Some(cube));
        }
        let mut j = 0;
        loop {
            if j == k {
                return Ok(None);
            }
            choice[j] += 1;
            if choice[j] < pairs.len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
    }
}

pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn digits(mut p: usize, m: usize, s: usize) -> Vec<usize> {
    let mut d = vec![0; m];
    for c in (0..m).rev() {
        d[c] = p % s;
        p /= s;
    }
    d
}

/// Incremental search state: tuple counts of every `k`-projection.
struct Search {
    k: usize,
    s: usize,
    n: usize,
    tuples: Vec<Vec<usize>>,
    projections: Vec<Vec<usize>>,
    /// `proj_index[p][t]`: position of tuple `p` in projection `t`.
    proj_index: Vec<Vec<usize>>,
    counts: Vec<Vec<u32>>,
    chosen: Vec<bool>,
    size: usize,
    best: usize,
    best_set: Vec<bool>,
    nodes: u64,
    cap: u64,
}

impl Search {
    fn encode(&self, vals: impl Iterator<Item = usize>) -> usize {
        vals.fold(0, |acc, v| acc * self.s + v)
    }

    /// Whether adding tuple `p` creates a hypercube in some projection.
    fn creates_cube(&self, p: usize) -> bool {
        let k = self.k;
        for (t, coords) in self.projections.iter().enumerate() {
            let at = self.proj_index[p][t];
            if self.counts[t][at] > 0 {
                continue;
            }
            let base: Vec<usize> = coords.iter().map(|&c| self.tuples[p][c]).collect();
            // alternative value per coordinate, odometer over (s-1)^k
            let mut alt = vec![0usize; k];
            'odo: loop {
                let other: Vec<usize> = (0..k).map(|j| if alt[j] >= base[j] { alt[j] + 1 } else { alt[j] }).collect();
                let complete = (1..1usize << k).all(|mask| {
                    let corner = (0..k).map(|j| if mask >> j & 1 == 1 { other[j] } else { base[j] });
                    self.counts[t][self.encode(corner)] > 0
                });
                if complete {
                    return true;
                }
                let mut j = 0;
                loop {
                    if j == k {
                        break 'odo;
                    }
                    alt[j] += 1;
                    if alt[j] + 1 < self.s {
                        break;
                    }
                    alt[j] = 0;
                    j += 1;
                }
            }
        }
        false
    }

    fn set(&mut self, p: usize, on: bool) {
        self.chosen[p] = on;
        for t in 0..self.projections.len() {
            let at = self.proj_index[p][t];
            if on {
                self.counts[t][at] += 1;
            } else {
                self.counts[t][at] -= 1;
            }
        }
        if on {
            self.size += 1;
        } else {
            self.size -= 1;
        }
    }

    fn dfs(&mut self, p: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::CapExceeded(format!(
                "hypercube-free search exceeded {} nodes; use the bound checks instead",
                self.cap
            )));
        }
        if self.size > self.best {
            self.best = self.size;
            self.best_set = self.chosen.clone();
        }
        if p == self.n || self.size + (self.n - p) <= self.best {
            return Ok(());
        }
        if !self.creates_cube(p) {
            self.set(p, true);
            self.dfs(p + 1)?;
            self.set(p, false);
        }
        // relabelling values per coordinate moves any member to the zero
        // tuple, so some maximum set contains position 0
        if p > 0 {
            self.dfs(p + 1)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FResult {
    pub k: usize,
    pub m: usize,
    pub s: usize,
    pub value: usize,
    pub witness: TupleSet,
    pub nodes: u64,
}

/// Exact `F(k, m, s)`: the largest subset of `[s]^m` all of whose
/// `k`-coordinate projections are hypercube-free. For `k > m` there are no
/// projections and the whole cube qualifies.
pub fn max_hypercube_free(k: usize, m: usize, s: usize, node_cap: u64) -> Result<FResult> {
    if k == 0 || m == 0 || s == 0 {
        return Err(Error::InvalidParameter("k, m and s must be positive".into()));
    }
    let n = s.checked_pow(m as u32).filter(|&n| n <= MAX_POSITIONS).ok_or_else(|| {
        Error::CapExceeded(format!("[{s}]^{m} has more than {MAX_POSITIONS} positions"))
    })?;
    let tuples: Vec<Vec<usize>> = (0..n).map(|p| digits(p, m, s)).collect();
    if k > m {
        return Ok(FResult {
            k,
            m,
            s,
            value: n,
            witness: TupleSet::new(m, s, tuples)?,
            nodes: 0,
        });
    }
    let projections = k_subsets(m, k);
    let proj_index = tuples
        .iter()
        .map(|t| projections.iter().map(|c| c.iter().fold(0, |acc, &j| acc * s + t[j])).collect())
        .collect();
    let mut search = Search {
        k,
        s,
        n,
        tuples,
        counts: vec![vec![0; s.pow(k as u32)]; projections.len()],
        projections,
        proj_index,
        chosen: vec![false; n],
        size: 0,
        best: 0,
        best_set: vec![false; n],
        nodes: 0,
        cap: node_cap,
    };
    search.dfs(0)?;
    let members: Vec<Vec<usize>> = (0..n).filter(|&p| search.best_set[p]).map(|p| search.tuples[p].clone()).collect();
    let witness = TupleSet::new(m, s, members)?;
    debug_assert!(is_hypercube_free(&witness, k));
    Ok(FResult {
        k,
        m,
        s,
        value: search.best,
        witness,
        nodes: search.nodes,
    })
}

/// Every `k`-coordinate projection is hypercube-free.
pub fn is_hypercube_free(t: &TupleSet, k: usize) -> bool {
    k > t.m
        || k_subsets(t.m, k)
            .iter()
            .all(|c| contains_hypercube(&t.project(c), k).expect("matching length").is_none())
}

/// Computed values of `F`, keyed by `(k, m, s)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FTable {
    pub entries: BTreeMap<String, usize>,
}

impl FTable {
    fn key(k: usize, m: usize, s: usize) -> String {
        format!("{k},{m},{s}")
    }

    pub fn insert(&mut self, k: usize, m: usize, s: usize, value: usize) {
        self.entries.insert(Self::key(k, m, s), value);
    }

    /// Stored value; `k > m` is answered directly as `s^m`.
    pub fn get(&self, k: usize, m: usize, s: usize) -> Result<usize> {
        if k > m {
            return Ok(s.pow(m as u32));
        }
        self.entries.get(&Self::key(k, m, s)).copied().ok_or(Error::MissingEntry(k, m, s))
    }

    /// Fills every entry the recursion check at `(k, m, s)` needs.
    pub fn compute_for_recursion(k: usize, m: usize, s: usize, node_cap: u64) -> Result<FTable> {
        let mut t = FTable::default();
        for (kk, mm) in [(k, m), (k, m - 1), (k - 1, m - 1)] {
            if kk >= 1 && kk <= mm {
                t.insert(kk, mm, s, max_hypercube_free(kk, mm, s, node_cap)?.value);
            }
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionCheck {
    pub k: usize,
    pub m: usize,
    pub s: usize,
    /// `F(k,m,s)^2 / F(k,m-1,s) - F(k,m,s) - s(s-1) F(k-1,m-1,s)`.
    #[serde(with = "scalar::serde_scalar")]
    pub lhs: Scalar,
    pub holds: bool,
}

/// The double-counting inequality, evaluated exactly on table values.
pub fn verify_recursion_bound(table: &FTable, k: usize, m: usize, s: usize) -> Result<RecursionCheck> {
    if k < 2 || m < 2 {
        return Err(Error::InvalidParameter("the recursion needs k >= 2 and m >= 2".into()));
    }
    let f = scalar::int(table.get(k, m, s)? as i64);
    let below = scalar::int(table.get(k, m - 1, s)? as i64);
    let lower = scalar::int(table.get(k - 1, m - 1, s)? as i64);
    let ss = scalar::int((s * (s - 1)) as i64);
    let lhs = &f * &f / below - &f - ss * lower;
    let holds = lhs <= scalar::zero();
    Ok(RecursionCheck { k, m, s, lhs, holds })
}

/// `F <= s^(2k - 2^-(m+1))`, i.e. `F^(2^(m+1)) <= s^(2k 2^(m+1) - 1)`, in
/// integers; `k` plays the role of `d + 1` and `m` of `r - 1`.
pub fn power_bound_holds(k: usize, m: usize, s: usize, value: usize) -> bool {
    let e = 1u32 << (m + 1);
    BigUint::from(value).pow(e) <= BigUint::from(s).pow(2 * k as u32 * e - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(m: usize, s: usize, v: &[&[usize]]) -> TupleSet {
        TupleSet::new(m, s, v.iter().map(|t| t.to_vec())).unwrap()
    }

    #[test]
    fn square_detection() {
        let full = set(2, 2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert_eq!(contains_hypercube(&full, 2).unwrap(), Some(vec![(0, 1), (0, 1)]));
        let corner = set(2, 2, &[&[0, 0], &[0, 1], &[1, 0]]);
        assert_eq!(contains_hypercube(&corner, 2).unwrap(), None);
        let all: Vec<Vec<usize>> = (0..8).map(|p| digits(p, 3, 2)).filter(|t| t != &vec![1, 0, 1]).collect();
        assert_eq!(contains_hypercube(&TupleSet::new(3, 2, all).unwrap(), 3).unwrap(), None);
        assert!(contains_hypercube(&corner, 3).is_err());
    }

    #[test]
    fn small_values() {
        for m in 1..=3 {
            for s in 2..=4 {
                assert_eq!(max_hypercube_free(1, m, s, DEFAULT_NODE_CAP).unwrap().value, 1);
            }
        }
        assert_eq!(max_hypercube_free(2, 2, 2, DEFAULT_NODE_CAP).unwrap().value, 3);
        let r = max_hypercube_free(2, 2, 3, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(r.value, 6);
        assert!(is_hypercube_free(&r.witness, 2));
    }

    #[test]
    fn recursion_instances() {
        for s in [2, 3] {
            let t = FTable::compute_for_recursion(2, 3, s, DEFAULT_NODE_CAP).unwrap();
            assert!(verify_recursion_bound(&t, 2, 3, s).unwrap().holds);
        }
        let mut fake = FTable::compute_for_recursion(2, 3, 2, DEFAULT_NODE_CAP).unwrap();
        fake.insert(2, 3, 2, 8);
        assert!(!verify_recursion_bound(&fake, 2, 3, 2).unwrap().holds);
        assert!(matches!(verify_recursion_bound(&FTable::default(), 2, 3, 2), Err(Error::MissingEntry(2, 3, 2))));
    }

    #[test]
    fn power_bound() {
        assert!(power_bound_holds(2, 2, 3, 6));
        // 3^(4 - 1/8) is about 70.6
        assert!(power_bound_holds(2, 2, 3, 70));
        assert!(!power_bound_holds(2, 2, 3, 71));
    }
}

//! Exhaustive ground truth on small graphs: the best cut `q′_G`, the best
//! partition `q_G`, and indivisibility.
//!
//! Cuts are enumerated in Gray-code order with O(n) incremental updates;
//! partitions by restricted-growth strings in lexicographic order. Both keep
//! the first maximum they meet up to a rounding band, so the reported argmax
//! is deterministic.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition, VertexSet};
use crate::modularity::{modularity_q, partition_modularity};
use crate::spectral::algebraic_modularity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCaps {
    /// Largest `n` for cut enumeration (`2ⁿ⁻¹` sets).
    pub cut: usize,
    /// Largest `n` for partition enumeration (Bell number of sets).
    pub partition: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            cut: 24,
            partition: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestCut {
    /// `q′_G = 2Q(S)/vol G` at the argmax.
    pub q_prime: f64,
    /// `Q(S)` at the argmax.
    pub modularity: f64,
    /// Argmax; always contains vertex 0.
    pub set: VertexSet,
    pub evaluated: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestPartition {
    pub q_star: f64,
    pub partition: Partition,
    pub evaluated: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub cut: BestCut,
    /// `None` when `n` exceeds the partition cap.
    pub partition: Option<BestPartition>,
}

fn tie_band(g: &Graph) -> f64 {
    1e-12 * g.volume().max(1.0)
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::OracleCap { n, cap })
    } else {
        Ok(())
    }
}

pub fn best_cut(g: &Graph) -> Result<BestCut> {
    best_cut_with(g, OracleCaps::default())
}

pub fn best_cut_with(g: &Graph, caps: OracleCaps) -> Result<BestCut> {
    let start = Instant::now();
    let n = g.n();
    check_cap(n, caps.cut.min(63))?;
    if n < 2 {
        return Err(Error::NoCut);
    }
    g.require_volume()?;
    let a = g.adjacency();
    let d = g.degree();
    let vol = g.volume();
    let band = tie_band(g);

    // State for S, starting from S = {0}.
    let mut mask: u64 = 1;
    let mut size = 1usize;
    let mut vol_s = d[0];
    let mut internal = a[(0, 0)];
    let mut link: Vec<f64> = (0..n).map(|i| a[(i, 0)]).collect();

    let members_of = |mask: u64| -> Vec<usize> { (0..n).filter(|&i| mask >> i & 1 == 1).collect() };

    let mut best_q = internal - vol_s * vol_s / vol;
    let mut best_mask = mask;
    let mut evaluated = 1u64;
    for k in 1u64..(1u64 << (n - 1)) {
        let v = k.trailing_zeros() as usize + 1;
        let bit = 1u64 << v;
        let loop_w = a[(v, v)];
        if mask & bit == 0 {
            internal += 2.0 * link[v] + loop_w;
            vol_s += d[v];
            size += 1;
            for (i, l) in link.iter_mut().enumerate() {
                *l += a[(i, v)];
            }
        } else {
            internal -= 2.0 * (link[v] - loop_w) + loop_w;
            vol_s -= d[v];
            size -= 1;
            for (i, l) in link.iter_mut().enumerate() {
                *l -= a[(i, v)];
            }
        }
        mask ^= bit;
        if size == n {
            continue;
        }
        evaluated += 1;
        let q = internal - vol_s * vol_s / vol;
        if q > best_q + band
            || (q >= best_q - band && members_of(mask) < members_of(best_mask))
        {
            best_q = q.max(best_q);
            best_mask = mask;
        }
    }

    let set = VertexSet::new(g, members_of(best_mask))?;
    let modularity = modularity_q(g, &set);
    debug_assert!((modularity - best_q).abs() <= 1e-9 * vol.max(1.0));
    Ok(BestCut {
        q_prime: 2.0 * modularity / vol,
        modularity,
        set,
        evaluated,
        elapsed: start.elapsed(),
    })
}

pub fn best_partition(g: &Graph) -> Result<BestPartition> {
    best_partition_with(g, OracleCaps::default())
}

struct PartitionSearch<'g> {
    g: &'g Graph,
    vol: f64,
    band: f64,
    assignment: Vec<usize>,
    block_vol: Vec<f64>,
    block_internal: Vec<f64>,
    best_q: f64,
    best: Vec<usize>,
    evaluated: u64,
}

impl PartitionSearch<'_> {
    fn value(&self, blocks: usize) -> f64 {
        (0..blocks)
            .map(|b| self.block_internal[b] - self.block_vol[b] * self.block_vol[b] / self.vol)
            .sum()
    }

    // Assigns vertex `v` given that `blocks` blocks are open.
    fn descend(&mut self, v: usize, blocks: usize) {
        let n = self.g.n();
        if v == n {
            self.evaluated += 1;
            let q = self.value(blocks);
            if q > self.best_q + self.band {
                self.best_q = q;
                self.best.clone_from(&self.assignment);
            }
            return;
        }
        let a = self.g.adjacency();
        let d = self.g.degree()[v];
        for b in 0..=blocks.min(n - 1) {
            let link: f64 = (0..v).filter(|&j| self.assignment[j] == b).map(|j| a[(v, j)]).sum();
            let added = 2.0 * link + a[(v, v)];
            self.assignment[v] = b;
            self.block_internal[b] += added;
            self.block_vol[b] += d;
            self.descend(v + 1, blocks.max(b + 1));
            self.block_internal[b] -= added;
            self.block_vol[b] -= d;
        }
    }
}

pub fn best_partition_with(g: &Graph, caps: OracleCaps) -> Result<BestPartition> {
    let start = Instant::now();
    let n = g.n();
    check_cap(n, caps.partition)?;
    g.require_volume()?;
    let mut search = PartitionSearch {
        g,
        vol: g.volume(),
        band: tie_band(g),
        assignment: vec![0; n],
        block_vol: vec![0.0; n],
        block_internal: vec![0.0; n],
        best_q: f64::NEG_INFINITY,
        best: vec![0; n],
        evaluated: 0,
    };
    // Vertex 0 always opens block 0.
    search.block_vol[0] = g.degree()[0];
    search.block_internal[0] = g.weight(0, 0);
    search.descend(1, 1);

    let partition = Partition::from_assignment(g, &search.best)?;
    let q_star = partition_modularity(g, &partition);
    debug_assert!((q_star - search.best_q / g.volume()).abs() <= 1e-9);
    Ok(BestPartition {
        q_star,
        partition,
        evaluated: search.evaluated,
        elapsed: start.elapsed(),
    })
}

/// Runs the cut oracle, and the partition oracle when `n` is within its cap.
pub fn run(g: &Graph, caps: OracleCaps) -> Result<OracleResult> {
    let cut = best_cut_with(g, caps)?;
    let partition = if g.n() <= caps.partition {
        Some(best_partition_with(g, caps)?)
    } else {
        None
    };
    Ok(OracleResult { cut, partition })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Indivisibility {
    pub indivisible: bool,
    /// A community (`Q(S) > 0`) when one exists.
    pub witness: Option<VertexSet>,
    pub max_modularity: f64,
    /// `m(G) ≤ 0` up to rounding; `None` when `m(G)` is undefined
    /// (disconnected or a single vertex).
    pub algebraically_indivisible: Option<bool>,
}

impl Indivisibility {
    /// Algebraic indivisibility must imply indivisibility.
    pub fn consistent(&self) -> bool {
        self.algebraically_indivisible != Some(true) || self.indivisible
    }
}

pub fn indivisibility(g: &Graph) -> Result<Indivisibility> {
    indivisibility_with(g, OracleCaps::default())
}

pub fn indivisibility_with(g: &Graph, caps: OracleCaps) -> Result<Indivisibility> {
    check_cap(g.n(), caps.cut)?;
    if g.n() < 2 {
        return Ok(Indivisibility {
            indivisible: true,
            witness: None,
            max_modularity: 0.0,
            algebraically_indivisible: None,
        });
    }
    let cut = best_cut_with(g, caps)?;
    let indivisible = cut.modularity <= 1e-10 * g.volume();
    let algebraically_indivisible = if g.is_connected() {
        let m = algebraic_modularity(g)?;
        Some(m.value <= 1e-8 * (1.0 + g.max_degree()))
    } else {
        None
    };
    Ok(Indivisibility {
        indivisible,
        witness: (!indivisible).then(|| cut.set.clone()),
        max_modularity: cut.modularity,
        algebraically_indivisible,
    })
}

/// True iff `Q(S) ≤ 0` for every nonempty proper `S`.
pub fn certify_indivisible(g: &Graph) -> Result<bool> {
    Ok(indivisibility(g)?.indivisible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn triangle_bridge() -> Graph {
        parse_graph("1 2\n2 3\n3 1\n3 4\n4 5\n5 6\n6 4").unwrap()
    }

    fn clique(n: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn triangle_bridge_cut() {
        let c = best_cut(&triangle_bridge()).unwrap();
        assert!((c.q_prime - 5.0 / 14.0).abs() < 1e-12);
        assert_eq!(c.set.members(), &[0, 1, 2]);
        assert_eq!(c.evaluated, 31);
    }

    #[test]
    fn k4_cut_is_a_singleton() {
        let c = best_cut(&clique(4)).unwrap();
        assert!((c.q_prime + 0.125).abs() < 1e-12);
        assert_eq!(c.set.members(), &[0]);
    }

    #[test]
    fn p3_cut() {
        let c = best_cut(&parse_graph("1 2\n2 3").unwrap()).unwrap();
        assert!((c.q_prime + 0.125).abs() < 1e-12);
        assert!((c.modularity + 0.25).abs() < 1e-12);
    }

    #[test]
    fn c4_tie_break_is_lexicographic() {
        let g = parse_graph("1 2\n2 3\n3 4\n4 1").unwrap();
        let c = best_cut(&g).unwrap();
        assert_eq!(c.set.members(), &[0, 1]);
        assert!((c.modularity - 0.0).abs() < 1e-12);
    }

    #[test]
    fn partitions() {
        let p = best_partition(&triangle_bridge()).unwrap();
        assert!((p.q_star - 5.0 / 14.0).abs() < 1e-12);
        assert_eq!(p.evaluated, 203);
        let blocks: Vec<_> = p.partition.blocks().iter().map(|b| b.members().to_vec()).collect();
        assert_eq!(blocks, vec![vec![0, 1, 2], vec![3, 4, 5]]);

        let k4 = best_partition(&clique(4)).unwrap();
        assert_eq!(k4.q_star, 0.0);
        assert_eq!(k4.partition.len(), 1);

        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let s = best_partition(&star).unwrap();
        assert!(s.q_star.abs() < 1e-12);
        assert_eq!(s.partition.len(), 1);
    }

    #[test]
    fn caps() {
        let g = clique(13);
        assert_eq!(
            best_partition(&g).unwrap_err(),
            Error::OracleCap { n: 13, cap: 12 }
        );
        let small = OracleCaps { cut: 3, partition: 3 };
        assert_eq!(
            best_cut_with(&clique(4), small).unwrap_err(),
            Error::OracleCap { n: 4, cap: 3 }
        );
        assert!(run(&g, OracleCaps::default()).unwrap().partition.is_none());
    }

    #[test]
    fn indivisible_families() {
        for n in 2..=8 {
            let r = indivisibility(&clique(n)).unwrap();
            assert!(r.indivisible && r.consistent());
        }
        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        assert!(certify_indivisible(&star).unwrap());
        let r = indivisibility(&triangle_bridge()).unwrap();
        assert!(!r.indivisible);
        assert_eq!(r.witness.unwrap().members(), &[0, 1, 2]);
        assert_eq!(r.algebraically_indivisible, Some(false));
    }

    #[test]
    fn loops_are_counted_once() {
        let g = parse_graph("1 1 3\n1 2\n2 3\n3 3 3").unwrap();
        let c = best_cut(&g).unwrap();
        let brute = (1u32..(1 << 3) - 1)
            .map(|m| {
                let s = VertexSet::new(&g, (0..3).filter(|i| m >> i & 1 == 1)).unwrap();
                modularity_q(&g, &s)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((c.modularity - brute).abs() < 1e-12);
    }
}

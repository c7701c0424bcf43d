//! The graph abstraction shared by the processes, plus explicit adjacency
//! graphs for small test instances (cycles, wheels, random regular graphs).

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::{Error, Result};

/// A finite simple graph on vertices `0..num_vertices()`.
pub trait Graph: Sync {
    fn num_vertices(&self) -> usize;

    fn degree(&self, v: usize) -> usize;

    fn for_each_neighbour(&self, v: usize, f: impl FnMut(usize));

    /// `Some(d)` when every vertex has degree `d`.
    fn regular_degree(&self) -> Option<usize>;

    /// Number of active neighbours of every vertex.
    fn active_neighbour_counts(&self, active: &FixedBitSet) -> Vec<u32> {
        count_by_iteration(self, active)
    }

    fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree(v));
        self.for_each_neighbour(v, |u| out.push(u));
        out
    }
}

pub(crate) fn count_by_iteration<G: Graph + ?Sized>(g: &G, active: &FixedBitSet) -> Vec<u32> {
    let mut counts = vec![0u32; g.num_vertices()];
    for v in active.ones() {
        g.for_each_neighbour(v, |u| counts[u] += 1);
    }
    counts
}

/// Adjacency-list graph. Symmetric, loop-free, no parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGraph {
    adj: Vec<Vec<u32>>,
}

impl ExplicitGraph {
    pub fn from_edges(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); num_vertices];
        for &(u, v) in edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("parallel edge at {v}")));
            }
        }
        Ok(ExplicitGraph { adj })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(
                "cycle needs at least 3 vertices".into(),
            ));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    /// Cycle `0..n` plus a hub vertex `n` joined to all of it.
    pub fn wheel(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(
                "wheel needs a rim of at least 3".into(),
            ));
        }
        let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        edges.extend((0..n).map(|i| (i, n)));
        Self::from_edges(n + 1, &edges)
    }

    /// Uniform simple `d`-regular graph by the pairing model with rejection.
    pub fn random_regular<R: Rng>(n: usize, d: usize, rng: &mut R) -> Result<Self> {
        if d >= n || !(n * d).is_multiple_of(2) {
            return Err(Error::InvalidGraph(format!(
                "no simple {d}-regular graph on {n} vertices"
            )));
        }
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        for _ in 0..10_000 {
            points.shuffle(rng);
            let edges: Vec<_> = points.chunks(2).map(|p| (p[0], p[1])).collect();
            if let Ok(g) = Self::from_edges(n, &edges) {
                return Ok(g);
            }
        }
        Err(Error::InvalidGraph(format!(
            "pairing model did not produce a simple {d}-regular graph on {n} vertices"
        )))
    }
}

impl Graph for ExplicitGraph {
    fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    fn for_each_neighbour(&self, v: usize, mut f: impl FnMut(usize)) {
        for &u in &self.adj[v] {
            f(u as usize);
        }
    }

    fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_edges() {
        assert!(ExplicitGraph::from_edges(3, &[(0, 0)]).is_err());
        assert!(ExplicitGraph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(ExplicitGraph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn wheel_is_not_regular() {
        let w = ExplicitGraph::wheel(6).unwrap();
        assert_eq!(w.num_vertices(), 7);
        assert_eq!(w.degree(6), 6);
        assert_eq!(w.degree(0), 3);
        assert_eq!(w.regular_degree(), None);
        assert_eq!(ExplicitGraph::cycle(5).unwrap().regular_degree(), Some(2));
    }

    #[test]
    fn random_regular_is_regular() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = ExplicitGraph::random_regular(40, 5, &mut rng).unwrap();
        assert_eq!(g.regular_degree(), Some(5));
        for v in 0..40 {
            for u in g.neighbours(v) {
                assert!(g.neighbours(u).contains(&v));
            }
        }
        assert!(ExplicitGraph::random_regular(5, 3, &mut rng).is_err());
    }
}

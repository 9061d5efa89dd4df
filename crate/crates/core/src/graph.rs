//! Immutable simple undirected graphs, breadth-first distances and the
//! plain edge-list text format.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use std::collections::VecDeque;
use std::fmt;

/// Undirected simple graph on vertices `0..n`.
///
/// Neighbor lists are sorted and mirrored by per-vertex bit-vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    neighbor_bits: Vec<VertexSet>,
    edge_count: usize,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            neighbor_bits: vec![VertexSet::new(n); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge_checked(u, v)?;
        }
        g.finish();
        Ok(g)
    }

    fn add_edge_checked(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.order();
        if u >= n || v >= n {
            return Err(Error::usage(format!(
                "edge ({u}, {v}) out of range for order {n}"
            )));
        }
        if u == v {
            return Err(Error::usage(format!("self-loop at vertex {u}")));
        }
        if self.neighbor_bits[u].contains(v) {
            return Err(Error::usage(format!("duplicate edge ({u}, {v})")));
        }
        self.neighbor_bits[u].insert(v);
        self.neighbor_bits[v].insert(u);
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
        self.edge_count += 1;
        Ok(())
    }

    fn finish(&mut self) {
        for list in &mut self.adjacency {
            list.sort_unstable();
        }
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn size(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn neighbor_set(&self, v: usize) -> &VertexSet {
        &self.neighbor_bits[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.neighbor_bits[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// The vertex set `0..n` as a bit-vector.
    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.order())
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        Graph::from_edges(self.order(), self.edges().map(|(u, v)| (perm[u], perm[v])))
            .expect("a permutation preserves simplicity")
    }

    /// Multi-source breadth-first distances: entry `v` is the minimum hop
    /// count from `v` to any source.
    pub fn bfs_distances(&self, sources: &[usize]) -> Result<DistanceVector> {
        if sources.is_empty() {
            return Err(Error::usage("breadth-first search needs a nonempty source set"));
        }
        if let Some(&bad) = sources.iter().find(|&&s| s >= self.order()) {
            return Err(Error::usage(format!("source vertex {bad} out of range")));
        }
        Ok(self.bfs_from(sources.iter().copied()))
    }

    /// As [`Graph::bfs_distances`] with the sources given as a bit-vector.
    pub fn bfs_from_set(&self, sources: &VertexSet) -> Result<DistanceVector> {
        if sources.is_empty() {
            return Err(Error::usage("breadth-first search needs a nonempty source set"));
        }
        Ok(self.bfs_from(sources.iter().filter(|&v| v < self.order())))
    }

    fn bfs_from(&self, sources: impl Iterator<Item = usize>) -> DistanceVector {
        let mut dist = vec![UNREACHABLE; self.order()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &w in &self.adjacency[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        DistanceVector { dist }
    }

    /// True iff one sweep from vertex 0 reaches every vertex. The empty graph
    /// is not considered connected.
    pub fn is_connected(&self) -> bool {
        let n = self.order();
        if n == 0 {
            return false;
        }
        let mut seen = VertexSet::new(n);
        seen.insert(0);
        let mut frontier = seen.clone();
        loop {
            let mut next = VertexSet::new(n);
            for v in frontier.iter() {
                next.union_with(&self.neighbor_bits[v]);
            }
            next.difference_with(&seen);
            if next.is_empty() {
                break;
            }
            seen.union_with(&next);
            frontier = next;
        }
        seen.len() == n
    }

    /// Floyd–Warshall distance matrix; used as an oracle for the
    /// breadth-first routines.
    pub fn all_pairs_distances(&self) -> Vec<DistanceVector> {
        let n = self.order();
        let mut d = vec![vec![UNREACHABLE; n]; n];
        for (v, row) in d.iter_mut().enumerate() {
            row[v] = 0;
            for &w in &self.adjacency[v] {
                row[w] = 1;
            }
        }
        #[allow(clippy::needless_range_loop)]
        for k in 0..n {
            for i in 0..n {
                let dik = d[i][k];
                if dik == UNREACHABLE {
                    continue;
                }
                for j in 0..n {
                    let dkj = d[k][j];
                    if dkj != UNREACHABLE && dik + dkj < d[i][j] {
                        d[i][j] = dik + dkj;
                    }
                }
            }
        }
        d.into_iter().map(|dist| DistanceVector { dist }).collect()
    }

    /// Parses the `n m` header followed by `m` lines of `u v`.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::line(1, "missing \"n m\" header"))?;
        let (n, m) = parse_pair(hline, header)?;
        let mut g = Graph::empty(n);
        let mut seen = 0;
        for (lineno, line) in lines {
            if seen == m {
                return Err(Error::line(lineno, "more edge lines than announced"));
            }
            let (u, v) = parse_pair(lineno, line)?;
            g.add_edge_checked(u, v).map_err(|e| match e {
                Error::Usage(msg) => Error::line(lineno, msg),
                other => other,
            })?;
            seen += 1;
        }
        if seen != m {
            return Err(Error::line(
                hline,
                format!("header announces {m} edges, found {seen}"),
            ));
        }
        g.finish();
        Ok(g)
    }

    /// Inverse of [`Graph::parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.order(), self.size());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_pair(lineno: usize, line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::line(lineno, "expected two integers"))?
            .parse()
            .map_err(|_| Error::line(lineno, format!("not a vertex index: {line:?}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::line(lineno, "trailing tokens"));
    }
    Ok((a, b))
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.order(), self.edges().collect::<Vec<_>>())
    }
}

const UNREACHABLE: u32 = u32::MAX;

/// Hop counts from a source set; `None` marks unreachable vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct DistanceVector {
    dist: Vec<u32>,
}

impl DistanceVector {
    pub fn get(&self, v: usize) -> Option<u32> {
        match self.dist[v] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn to_vec(&self) -> Vec<Option<u32>> {
        (0..self.len()).map(|v| self.get(v)).collect()
    }
}

impl fmt::Debug for DistanceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_vec()).finish()
    }
}

/// Small named graphs used throughout tests and examples.
pub mod named {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    pub fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
        Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn d(v: &[u32]) -> Vec<Option<u32>> {
        v.iter().map(|&x| Some(x)).collect()
    }

    #[test]
    fn edge_list_examples() {
        let p4 = Graph::parse_edge_list("4 3\n0 1\n1 2\n2 3\n").unwrap();
        assert_eq!(p4, path(4));
        let k1 = Graph::parse_edge_list("1 0").unwrap();
        assert_eq!((k1.order(), k1.size()), (1, 0));
        let star3 = Graph::parse_edge_list("4 3\n0 1\n0 2\n0 3").unwrap();
        assert_eq!(star3, star(3));
        assert_eq!(star3.neighbors(0), &[1, 2, 3]);
    }

    #[test]
    fn edge_list_errors() {
        for bad in [
            "4 3\n0 1\n1 2\n",
            "4 1\n0 4\n",
            "4 1\n2 2\n",
            "4 2\n0 1\n1 0\n",
            "4 1\n0 x\n",
            "",
            "3 1\n0 1 2\n",
        ] {
            assert!(
                matches!(Graph::parse_edge_list(bad), Err(Error::Line { .. })),
                "{bad:?} accepted"
            );
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let g = petersen();
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn bfs_examples() {
        let p4 = path(4);
        assert_eq!(p4.bfs_distances(&[0]).unwrap().to_vec(), d(&[0, 1, 2, 3]));
        assert_eq!(p4.bfs_distances(&[0, 3]).unwrap().to_vec(), d(&[0, 1, 1, 0]));
        assert_eq!(star(3).bfs_distances(&[1]).unwrap().to_vec(), d(&[1, 0, 2, 2]));
        assert!(p4.bfs_distances(&[]).is_err());
        assert!(p4.bfs_distances(&[4]).is_err());
    }

    #[test]
    fn unreachable_marker() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.bfs_distances(&[0]).unwrap().to_vec(), vec![Some(0), Some(1), None, None]);
    }

    #[test]
    fn connectivity() {
        assert!(path(4).is_connected());
        assert!(!Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap().is_connected());
        assert!(Graph::empty(1).is_connected());
        assert!(!Graph::empty(0).is_connected());
    }

    #[test]
    fn all_pairs_examples() {
        let apd = path(4).all_pairs_distances();
        assert_eq!(apd[0].to_vec(), d(&[0, 1, 2, 3]));
        let c5 = cycle(5).all_pairs_distances();
        for (u, row) in c5.iter().enumerate() {
            for v in 0..5 {
                let x = row.get(v).unwrap();
                if u == v {
                    assert_eq!(x, 0);
                } else {
                    assert!(x == 1 || x == 2);
                }
            }
        }
    }

    #[test]
    fn named_graphs() {
        assert_eq!(petersen().size(), 15);
        assert!((0..10).all(|v| petersen().degree(v) == 3));
        assert_eq!(complete(5).size(), 10);
    }
}

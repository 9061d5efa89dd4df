//! Simple paths, the longest-path length and exhaustive enumeration of all
//! longest paths.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use itertools::Itertools;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeSet;

/// Default bound on the number of longest paths kept per graph.
pub const DEFAULT_PATH_CAP: usize = 100_000;

/// Largest order accepted by the permutation oracle.
pub const ORACLE_MAX_ORDER: usize = 10;

/// A simple path stored in canonical orientation (first vertex not larger
/// than the last).
#[derive(Clone, Debug)]
pub struct Path {
    vertices: Vec<usize>,
    members: VertexSet,
}

impl Path {
    /// Validates `sequence` against `graph` and canonicalizes it.
    pub fn new(graph: &Graph, sequence: &[usize]) -> Result<Path> {
        if !is_path(graph, sequence)? {
            return Err(Error::usage(format!("{sequence:?} is not a path of the graph")));
        }
        Ok(Path::from_canonical(graph.order(), canonical_form(sequence)))
    }

    pub(crate) fn from_canonical(order: usize, vertices: Vec<usize>) -> Path {
        let members = VertexSet::from_iter_in(order, vertices.iter().copied());
        Path { vertices, members }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> &VertexSet {
        &self.members
    }

    /// Length in edges.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("paths are nonempty")
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(v)
    }

    /// Position of `v` along the canonical sequence.
    pub fn position(&self, v: usize) -> Option<usize> {
        if !self.contains(v) {
            return None;
        }
        self.vertices.iter().position(|&w| w == v)
    }

    /// Edges as `(min, max)` pairs in path order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices
            .windows(2)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

impl PartialEq for Path {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for Path {}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices.cmp(&other.vertices)
    }
}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices.serialize(serializer)
    }
}

/// Reverses `sequence` when its first vertex exceeds its last.
pub fn canonical_form(sequence: &[usize]) -> Vec<usize> {
    match (sequence.first(), sequence.last()) {
        (Some(a), Some(b)) if a > b => sequence.iter().rev().copied().collect(),
        _ => sequence.to_vec(),
    }
}

/// True iff the vertices are distinct and consecutive ones are adjacent.
pub fn is_path(graph: &Graph, sequence: &[usize]) -> Result<bool> {
    if sequence.is_empty() {
        return Err(Error::usage("a path needs at least one vertex"));
    }
    if let Some(&bad) = sequence.iter().find(|&&v| v >= graph.order()) {
        return Err(Error::usage(format!("vertex {bad} out of range")));
    }
    let mut seen = VertexSet::new(graph.order());
    for &v in sequence {
        if seen.contains(v) {
            return Ok(false);
        }
        seen.insert(v);
    }
    Ok(sequence.windows(2).all(|w| graph.has_edge(w[0], w[1])))
}

/// ℓ(G) together with (a prefix of) the longest paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LongestPathSet {
    pub length: usize,
    pub paths: Vec<Path>,
    pub truncated: bool,
}

impl LongestPathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

pub fn longest_path_length(graph: &Graph) -> Result<usize> {
    Ok(enumerate_longest_paths(graph, Some(1))?.length)
}

/// All longest paths in canonical form and lexicographic order.
///
/// Depth-first search from every start vertex; a branch is cut once the
/// vertices still reachable from its head cannot lift it to the best length
/// seen (or, after the cap overflowed, cannot beat it). Only the orientation
/// ending at a larger vertex is recorded, which deduplicates for free and
/// keeps the output in lexicographic order.
pub fn enumerate_longest_paths(graph: &Graph, cap: Option<usize>) -> Result<LongestPathSet> {
    if !graph.is_connected() {
        return Err(Error::usage("longest paths are defined here for connected graphs only"));
    }
    if cap == Some(0) {
        return Err(Error::usage("path cap must be at least 1"));
    }
    let n = graph.order();
    if n == 1 {
        return Ok(LongestPathSet {
            length: 0,
            paths: vec![Path::from_canonical(1, vec![0])],
            truncated: false,
        });
    }
    let mut search = Search {
        graph,
        cap: cap.unwrap_or(usize::MAX),
        best: 0,
        found: Vec::new(),
        overflow: false,
        stack: Vec::with_capacity(n),
        visited: VertexSet::new(n),
    };
    for start in 0..n {
        search.stack.push(start);
        search.visited.insert(start);
        search.descend();
        search.visited.remove(start);
        search.stack.pop();
    }
    let paths = search
        .found
        .into_iter()
        .map(|seq| Path::from_canonical(n, seq))
        .collect();
    Ok(LongestPathSet {
        length: search.best,
        paths,
        truncated: search.overflow,
    })
}

struct Search<'g> {
    graph: &'g Graph,
    cap: usize,
    best: usize,
    found: Vec<Vec<usize>>,
    overflow: bool,
    stack: Vec<usize>,
    visited: VertexSet,
}

impl Search<'_> {
    fn descend(&mut self) {
        let len = self.stack.len() - 1;
        let head = *self.stack.last().unwrap();
        if len > self.best {
            self.best = len;
            self.found.clear();
            self.overflow = false;
        }
        if len == self.best && self.stack[0] < head {
            if self.found.len() < self.cap {
                self.found.push(self.stack.clone());
            } else {
                self.overflow = true;
            }
        }
        let reach = self.reachable_count(head);
        let bound = len + reach;
        if bound < self.best || (bound == self.best && self.overflow) || reach == 0 {
            return;
        }
        for i in 0..self.graph.degree(head) {
            let w = self.graph.neighbors(head)[i];
            if self.visited.contains(w) {
                continue;
            }
            self.visited.insert(w);
            self.stack.push(w);
            self.descend();
            self.stack.pop();
            self.visited.remove(w);
        }
    }

    /// Unvisited vertices reachable from `head` through unvisited vertices.
    fn reachable_count(&self, head: usize) -> usize {
        let mut frontier = self.graph.neighbor_set(head).clone();
        frontier.difference_with(&self.visited);
        let mut seen = frontier.clone();
        while !frontier.is_empty() {
            let mut next = VertexSet::new(self.graph.order());
            for v in frontier.iter() {
                next.union_with(self.graph.neighbor_set(v));
            }
            next.difference_with(&self.visited);
            next.difference_with(&seen);
            seen.union_with(&next);
            frontier = next;
        }
        seen.len()
    }
}

/// Brute-force oracle: tests every ordered selection of distinct vertices,
/// longest first.
pub fn enumerate_longest_paths_oracle(graph: &Graph) -> Result<LongestPathSet> {
    let n = graph.order();
    if n > ORACLE_MAX_ORDER {
        return Err(Error::usage(format!(
            "permutation oracle limited to {ORACLE_MAX_ORDER} vertices, got {n}"
        )));
    }
    if !graph.is_connected() {
        return Err(Error::usage("longest paths are defined here for connected graphs only"));
    }
    for size in (1..=n).rev() {
        let found: BTreeSet<Vec<usize>> = (0..n)
            .permutations(size)
            .filter(|seq| seq.windows(2).all(|w| graph.has_edge(w[0], w[1])))
            .map(|seq| canonical_form(&seq))
            .collect();
        if !found.is_empty() {
            return Ok(LongestPathSet {
                length: size - 1,
                paths: found.into_iter().map(|s| Path::from_canonical(n, s)).collect(),
                truncated: false,
            });
        }
    }
    unreachable!("a nonempty connected graph has a one-vertex path")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn seqs(set: &LongestPathSet) -> Vec<Vec<usize>> {
        set.paths.iter().map(|p| p.vertices().to_vec()).collect()
    }

    #[test]
    fn is_path_examples() {
        assert!(is_path(&path(4), &[0, 1, 2, 3]).unwrap());
        assert!(!is_path(&path(4), &[0, 2]).unwrap());
        assert!(!is_path(&star(3), &[1, 0, 1]).unwrap());
        assert!(is_path(&path(4), &[0, 9]).is_err());
        assert!(is_path(&path(4), &[]).is_err());
    }

    #[test]
    fn canonical_orientation() {
        assert_eq!(canonical_form(&[3, 2, 1]), vec![1, 2, 3]);
        assert_eq!(canonical_form(&[5]), vec![5]);
        let p = Path::new(&path(4), &[3, 2, 1, 0]).unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2, 3]);
        assert_eq!(p.length(), 3);
        assert_eq!(p.position(2), Some(2));
        assert!(Path::new(&path(4), &[0, 2]).is_err());
    }

    #[test]
    fn lengths() {
        assert_eq!(longest_path_length(&cycle(5)).unwrap(), 4);
        assert_eq!(longest_path_length(&star(3)).unwrap(), 2);
        assert_eq!(longest_path_length(&Graph::empty(1)).unwrap(), 0);
        assert_eq!(longest_path_length(&petersen()).unwrap(), 9);
        assert!(longest_path_length(&Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap()).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let s = enumerate_longest_paths(&star(3), None).unwrap();
        assert_eq!(seqs(&s), vec![vec![1, 0, 2], vec![1, 0, 3], vec![2, 0, 3]]);
        assert!(!s.truncated);
        let p = enumerate_longest_paths(&path(4), None).unwrap();
        assert_eq!(seqs(&p), vec![vec![0, 1, 2, 3]]);
        let c = enumerate_longest_paths(&cycle(5), None).unwrap();
        assert_eq!(c.len(), 5);
        let g = cycle(5);
        let all_edges: BTreeSet<_> = g.edges().collect();
        for path in &c.paths {
            assert_eq!(path.vertex_count(), 5);
            let used: BTreeSet<_> = path.edges().collect();
            assert_eq!(all_edges.difference(&used).count(), 1);
        }
        assert_eq!(enumerate_longest_paths(&complete(4), None).unwrap().len(), 12);
        assert_eq!(enumerate_longest_paths(&petersen(), None).unwrap().len(), 120);
    }

    #[test]
    fn cap_keeps_lexicographic_prefix() {
        let full = enumerate_longest_paths(&complete(5), None).unwrap();
        assert_eq!(full.len(), 60);
        let capped = enumerate_longest_paths(&complete(5), Some(7)).unwrap();
        assert!(capped.truncated);
        assert_eq!(capped.length, 4);
        assert_eq!(capped.paths, full.paths[..7].to_vec());
        let exact = enumerate_longest_paths(&complete(5), Some(60)).unwrap();
        assert!(!exact.truncated);
        assert!(enumerate_longest_paths(&complete(5), Some(0)).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(seqs(&enumerate_longest_paths_oracle(&path(4)).unwrap()), vec![vec![0, 1, 2, 3]]);
        assert_eq!(enumerate_longest_paths_oracle(&complete(4)).unwrap().len(), 12);
        assert_eq!(
            enumerate_longest_paths_oracle(&petersen()).unwrap(),
            enumerate_longest_paths(&petersen(), None).unwrap()
        );
        assert!(enumerate_longest_paths_oracle(&path(11)).is_err());
    }

    #[test]
    fn canonical_idempotent() {
        for seq in [vec![4, 1, 2], vec![1, 2, 4], vec![7]] {
            let once = canonical_form(&seq);
            assert_eq!(canonical_form(&once), once);
        }
    }
}

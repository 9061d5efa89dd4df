//! Systems of paths and the quantities defined on them: the path-distance
//! value, common vertices, multiplicity classes, good subpaths and the
//! counts t and t'.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::encode_graph6;
use crate::longest::{enumerate_longest_paths, LongestPathSet, Path};
use crate::report::InstanceId;
use serde::Serialize;
use std::borrow::Cow;

/// Members are tracked in 64-bit masks.
pub const MAX_MEMBERS: usize = 64;

/// A graph together with k distinct paths.
///
/// When `longest_certified` is set every member has been checked to have
/// ℓ(G) edges; relaxed systems skip that check and are flagged as such.
#[derive(Clone, Debug)]
pub struct PathSystem<'g> {
    graph: &'g Graph,
    members: Vec<Cow<'g, Path>>,
    member_masks: Vec<u64>,
    longest_length: Option<usize>,
    labels: Vec<usize>,
}

impl<'g> PathSystem<'g> {
    /// Builds a system from vertex sequences. With `require_longest`, ℓ(G)
    /// is computed by enumeration and every member must attain it.
    pub fn new(graph: &'g Graph, sequences: &[Vec<usize>], require_longest: bool) -> Result<Self> {
        let paths = sequences
            .iter()
            .map(|s| Path::new(graph, s).map(Cow::<Path>::Owned))
            .collect::<Result<Vec<_>>>()?;
        let longest = if require_longest {
            let ell = enumerate_longest_paths(graph, Some(1))?.length;
            if let Some((index, p)) = paths.iter().enumerate().find(|(_, p)| p.length() != ell) {
                return Err(Error::NotLongest {
                    index,
                    length: p.length(),
                    longest: ell,
                });
            }
            Some(ell)
        } else {
            None
        };
        Self::assemble(graph, paths, longest)
    }

    /// Borrows members of an already enumerated longest-path set; these are
    /// longest by construction.
    pub fn from_longest(graph: &'g Graph, set: &'g LongestPathSet, indices: &[usize]) -> Result<Self> {
        let paths = indices
            .iter()
            .map(|&i| {
                set.paths
                    .get(i)
                    .map(Cow::Borrowed)
                    .ok_or_else(|| Error::usage(format!("no longest path with index {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut system = Self::assemble(graph, paths, Some(set.length))?;
        system.labels = indices.to_vec();
        Ok(system)
    }

    /// Certifies owned paths against a known ℓ(G).
    pub fn with_longest_length(graph: &'g Graph, paths: Vec<Path>, ell: usize) -> Result<Self> {
        if let Some((index, p)) = paths.iter().enumerate().find(|(_, p)| p.length() != ell) {
            return Err(Error::NotLongest {
                index,
                length: p.length(),
                longest: ell,
            });
        }
        Self::assemble(graph, paths.into_iter().map(Cow::Owned).collect(), Some(ell))
    }

    fn assemble(graph: &'g Graph, members: Vec<Cow<'g, Path>>, longest_length: Option<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::usage("a path system needs at least one path"));
        }
        if members.len() > MAX_MEMBERS {
            return Err(Error::usage(format!("at most {MAX_MEMBERS} paths per system")));
        }
        for (i, p) in members.iter().enumerate() {
            if p.vertices().iter().any(|&v| v >= graph.order()) {
                return Err(Error::usage(format!("member {i} leaves the graph")));
            }
            if members[..i].iter().any(|q| q.vertices() == p.vertices()) {
                return Err(Error::usage(format!("member {i} repeats an earlier member")));
            }
        }
        let mut member_masks = vec![0u64; graph.order()];
        for (i, p) in members.iter().enumerate() {
            for &v in p.vertices() {
                member_masks[v] |= 1 << i;
            }
        }
        let labels = (0..members.len()).collect();
        Ok(PathSystem {
            graph,
            members,
            member_masks,
            longest_length,
            labels,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn member(&self, i: usize) -> &Path {
        &self.members[i]
    }

    pub fn members(&self) -> impl Iterator<Item = &Path> {
        self.members.iter().map(|c| c.as_ref())
    }

    /// Member labels: indices into 𝓛(G) for systems drawn from an
    /// enumeration, positions otherwise.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn instance_id(&self) -> InstanceId {
        InstanceId {
            graph6: encode_graph6(self.graph),
            members: self.labels.clone(),
        }
    }

    pub fn longest_certified(&self) -> bool {
        self.longest_length.is_some()
    }

    /// ℓ(G), known only for certified systems.
    pub fn longest_length(&self) -> Option<usize> {
        self.longest_length
    }

    /// Number of members containing `v`.
    pub fn multiplicity(&self, v: usize) -> usize {
        self.member_masks[v].count_ones() as usize
    }

    /// Bit `i` set iff member `i` contains `v`.
    pub fn member_mask(&self, v: usize) -> u64 {
        self.member_masks[v]
    }

    fn all_members_mask(&self) -> u64 {
        if self.k() == 64 {
            u64::MAX
        } else {
            (1u64 << self.k()) - 1
        }
    }

    /// Vertices lying on every member.
    pub fn common_vertices(&self) -> VertexSet {
        let mut common = self.members[0].vertex_set().clone();
        for p in &self.members[1..] {
            common.intersect_with(p.vertex_set());
        }
        common
    }

    /// min over v of Σ_P d(v, V(P)), with every minimizing vertex.
    ///
    /// A common vertex certifies the value 0 directly; otherwise one
    /// multi-source sweep per member.
    pub fn path_distance_value(&self) -> Result<PathDistance> {
        let common = self.common_vertices();
        if !common.is_empty() {
            return Ok(PathDistance {
                value: 0,
                minimizers: common.to_vec(),
            });
        }
        let n = self.graph.order();
        let mut sums = vec![0u64; n];
        for p in self.members() {
            let dist = self.graph.bfs_from_set(p.vertex_set())?;
            for (v, sum) in sums.iter_mut().enumerate() {
                let d = dist
                    .get(v)
                    .ok_or_else(|| Error::usage("path-distance value needs a connected graph"))?;
                *sum += u64::from(d);
            }
        }
        let value = *sums.iter().min().expect("graphs in a path system are nonempty");
        let minimizers = (0..n).filter(|&v| sums[v] == value).collect();
        Ok(PathDistance { value, minimizers })
    }

    pub fn multiplicity_profile(&self) -> MultiplicityProfile {
        let k = self.k();
        let mut n_counts = vec![0usize; k + 1];
        for v in 0..self.graph.order() {
            n_counts[self.multiplicity(v)] += 1;
        }
        let classes = self
            .members()
            .map(|p| {
                let mut by_class = vec![Vec::new(); k + 1];
                for &v in p.vertices() {
                    by_class[self.multiplicity(v)].push(v);
                }
                by_class
            })
            .collect();
        MultiplicityProfile { k, classes, n_counts }
    }

    fn check_good_path_preconditions(&self, host: usize) -> Result<()> {
        if self.k() < 3 {
            return Err(Error::usage(format!(
                "good paths need at least 3 members, system has {}",
                self.k()
            )));
        }
        if host >= self.k() {
            return Err(Error::usage(format!("host index {host} out of range")));
        }
        Ok(())
    }

    /// All subpaths of member `host` that are good for at least one ordered
    /// pair of other members, ordered by (start, end) position.
    pub fn enumerate_good_paths(&self, host: usize) -> Result<Vec<GoodPath>> {
        self.check_good_path_preconditions(host)?;
        let host_bit = 1u64 << host;
        let others = self.all_members_mask() & !host_bit;
        let masks: Vec<u64> = self.members[host]
            .vertices()
            .iter()
            .map(|&v| self.member_masks[v] & !host_bit)
            .collect();
        let len = masks.len();
        let mut good = Vec::new();
        for start in 0..len {
            let mut seen = masks[start];
            let mut interior = 0u64;
            for end in start..len {
                if end > start {
                    seen |= masks[end];
                    if end > start + 1 {
                        interior |= masks[end - 1];
                    }
                }
                if seen & others != others {
                    continue;
                }
                let mut pairs = Vec::new();
                for i in bits(masks[start]) {
                    for j in bits(masks[end]) {
                        if i != j && interior & ((1 << i) | (1 << j)) == 0 {
                            pairs.push((i, j));
                        }
                    }
                }
                if !pairs.is_empty() {
                    good.push(GoodPath {
                        host,
                        start,
                        end,
                        pairs,
                    });
                }
            }
        }
        Ok(good)
    }

    /// t: the number of distinct good subpaths of `host`.
    pub fn t_count(&self, host: usize) -> Result<usize> {
        Ok(self.enumerate_good_paths(host)?.len())
    }

    /// t': the largest number of good subpaths of `host` sharing no edge.
    pub fn t_prime(&self, host: usize) -> Result<usize> {
        Ok(max_edge_disjoint(&self.enumerate_good_paths(host)?))
    }

    pub fn to_record(&self) -> PathSystemRecord {
        PathSystemRecord {
            graph6: encode_graph6(self.graph),
            paths: self.members().map(|p| p.vertices().to_vec()).collect(),
            k: self.k(),
            longest_certified: self.longest_certified(),
        }
    }
}

/// Greedy interval scheduling on edge intervals, by right end. Zero-edge
/// subpaths own no edge and are always selectable.
pub fn max_edge_disjoint(good: &[GoodPath]) -> usize {
    let points = good.iter().filter(|q| q.start == q.end).count();
    let mut spans: Vec<(usize, usize)> = good
        .iter()
        .filter(|q| q.start < q.end)
        .map(|q| (q.end, q.start))
        .collect();
    spans.sort_unstable();
    let mut chosen = 0;
    let mut frontier = 0;
    for (end, start) in spans {
        if chosen == 0 || start >= frontier {
            chosen += 1;
            frontier = end;
        }
    }
    points + chosen
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let b = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(b)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathDistance {
    pub value: u64,
    pub minimizers: Vec<usize>,
}

/// A good subpath `host[start..=end]` with its witnessing ordered pairs
/// `(i, j)`: start on member i, end on member j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodPath {
    pub host: usize,
    pub start: usize,
    pub end: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl GoodPath {
    /// |V(Q)|.
    pub fn vertex_count(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn edge_count(&self) -> usize {
        self.end - self.start
    }

    pub fn vertices<'a>(&self, system: &'a PathSystem<'_>) -> &'a [usize] {
        &system.member(self.host).vertices()[self.start..=self.end]
    }
}

/// X^i classes per host and the global counts n_i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityProfile {
    pub k: usize,
    /// `classes[host][i]` lists the vertices of member `host` lying on
    /// exactly `i` members, in path order. Index 0 is always empty.
    pub classes: Vec<Vec<Vec<usize>>>,
    /// `n_counts[i]` = number of vertices on exactly `i` members; entry 0
    /// counts vertices on no member.
    pub n_counts: Vec<usize>,
}

impl MultiplicityProfile {
    pub fn n(&self, i: usize) -> usize {
        self.n_counts.get(i).copied().unwrap_or(0)
    }

    /// |X^1 ∪ ... ∪ X^upto| on `host`.
    pub fn low_class_size(&self, host: usize, upto: usize) -> usize {
        self.classes[host]
            .iter()
            .take(upto + 1)
            .map(Vec::len)
            .sum()
    }

    /// Σ_{i≥1} i·n_i.
    pub fn weighted_count(&self) -> usize {
        self.n_counts.iter().enumerate().map(|(i, c)| i * c).sum()
    }
}

/// JSON form of a path system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathSystemRecord {
    pub graph6: String,
    pub paths: Vec<Vec<usize>>,
    pub k: usize,
    pub longest_certified: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn star_system(g: &Graph) -> PathSystem<'_> {
        PathSystem::new(g, &[vec![1, 0, 2], vec![1, 0, 3], vec![2, 0, 3]], true).unwrap()
    }

    fn spread_p7(g: &Graph) -> PathSystem<'_> {
        PathSystem::new(g, &[vec![0, 1], vec![2, 3], vec![5, 6]], false).unwrap()
    }

    #[test]
    fn construction() {
        let g = star(3);
        let s = star_system(&g);
        assert_eq!(s.k(), 3);
        assert!(s.longest_certified());
        assert_eq!(s.longest_length(), Some(2));

        let p7 = path(7);
        let r = spread_p7(&p7);
        assert!(!r.longest_certified());

        let err = PathSystem::new(&g, &[vec![1, 0]], true).unwrap_err();
        assert_eq!(err, Error::NotLongest { index: 0, length: 1, longest: 2 });
        assert!(PathSystem::new(&g, &[vec![1, 2]], false).is_err());
        assert!(PathSystem::new(&g, &[vec![1, 0, 2], vec![2, 0, 1]], false).is_err());
        assert!(PathSystem::new(&g, &[], false).is_err());
    }

    #[test]
    fn distance_values() {
        let g = star(3);
        assert_eq!(
            star_system(&g).path_distance_value().unwrap(),
            PathDistance { value: 0, minimizers: vec![0] }
        );
        let p7 = path(7);
        assert_eq!(
            spread_p7(&p7).path_distance_value().unwrap(),
            PathDistance { value: 4, minimizers: vec![2, 3] }
        );
        let c5 = cycle(5);
        let set = enumerate_longest_paths(&c5, None).unwrap();
        for i in 0..5 {
            for j in i + 1..5 {
                let s = PathSystem::from_longest(&c5, &set, &[i, j]).unwrap();
                assert_eq!(s.path_distance_value().unwrap().value, 0);
            }
        }
    }

    #[test]
    fn common_vertex_examples() {
        let g = star(3);
        assert_eq!(star_system(&g).common_vertices().to_vec(), vec![0]);
        let c5 = cycle(5);
        let set = enumerate_longest_paths(&c5, None).unwrap();
        let s = PathSystem::from_longest(&c5, &set, &[0, 2, 4]).unwrap();
        assert_eq!(s.common_vertices().to_vec(), vec![0, 1, 2, 3, 4]);
        let p7 = path(7);
        assert!(spread_p7(&p7).common_vertices().is_empty());
    }

    #[test]
    fn multiplicity_examples() {
        let g = star(3);
        let prof = star_system(&g).multiplicity_profile();
        assert_eq!((prof.n(1), prof.n(2), prof.n(3)), (0, 3, 1));
        assert_eq!(prof.weighted_count(), 9);
        assert_eq!(prof.classes[0][2], vec![1, 2]);
        assert_eq!(prof.classes[0][3], vec![0]);

        let p4 = path(4);
        let single = PathSystem::new(&p4, &[vec![0, 1, 2, 3]], false).unwrap();
        let prof = single.multiplicity_profile();
        assert_eq!(prof.n_counts, vec![0, 4]);

        let p7 = path(7);
        let prof = spread_p7(&p7).multiplicity_profile();
        assert_eq!((prof.n(0), prof.n(1), prof.n(2), prof.n(3)), (1, 6, 0, 0));
    }

    #[test]
    fn good_paths_on_star() {
        let g = star(3);
        let s = star_system(&g);
        let good = s.enumerate_good_paths(0).unwrap();
        let spans: Vec<_> = good.iter().map(|q| q.vertices(&s).to_vec()).collect();
        assert_eq!(spans, vec![vec![1, 0], vec![0], vec![0, 2]]);
        assert_eq!(good[1].pairs, vec![(1, 2), (2, 1)]);
        assert_eq!(good[0].pairs, vec![(1, 2)]);
        assert_eq!(s.t_count(0).unwrap(), 3);
        assert_eq!(s.t_prime(0).unwrap(), 3);
    }

    #[test]
    fn single_good_path_on_five_vertex_host() {
        let g = path(5);
        let s = PathSystem::new(&g, &[vec![0, 1, 2, 3, 4], vec![1], vec![3], vec![2]], false).unwrap();
        let good = s.enumerate_good_paths(0).unwrap();
        assert_eq!(good.len(), 1);
        assert_eq!(good[0].vertices(&s), &[1, 2, 3]);
        assert_eq!(good[0].pairs, vec![(1, 2)]);
        assert_eq!(s.t_count(0).unwrap(), 1);
        assert_eq!(s.t_prime(0).unwrap(), 1);
    }

    #[test]
    fn no_good_paths_when_a_member_misses_the_host() {
        let g = path(5);
        let s = PathSystem::new(&g, &[vec![0, 1, 2], vec![1], vec![2], vec![4]], false).unwrap();
        assert!(s.enumerate_good_paths(0).unwrap().is_empty());
        assert_eq!(s.t_count(0).unwrap(), 0);
        assert_eq!(s.t_prime(0).unwrap(), 0);
    }

    #[test]
    fn two_disjoint_single_edge_good_paths() {
        // Host 0-1-2-3-4 with A = 0-5-4 and B = 1-6-3: only [0,1] and [3,4].
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (5, 4), (1, 6), (6, 3)]).unwrap();
        let s = PathSystem::new(&g, &[vec![0, 1, 2, 3, 4], vec![0, 5, 4], vec![1, 6, 3]], false).unwrap();
        let spans: Vec<_> = s.enumerate_good_paths(0).unwrap().iter().map(|q| (q.start, q.end)).collect();
        assert_eq!(spans, vec![(0, 1), (3, 4)]);
        assert_eq!(s.t_prime(0).unwrap(), 2);
    }

    #[test]
    fn good_paths_need_three_members() {
        let g = star(3);
        let s = PathSystem::new(&g, &[vec![1, 0, 2], vec![1, 0, 3]], true).unwrap();
        assert!(s.enumerate_good_paths(0).is_err());
        assert!(star_system(&g).enumerate_good_paths(3).is_err());
    }

    #[test]
    fn record_serializes() {
        let g = star(3);
        let json = serde_json::to_string(&star_system(&g).to_record()).unwrap();
        assert_eq!(
            json,
            r#"{"graph6":"Cs","paths":[[1,0,2],[1,0,3],[2,0,3]],"k":3,"longest_certified":true}"#
        );
    }
}

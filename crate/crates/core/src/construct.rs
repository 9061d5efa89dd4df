//! Blow-up of a path system: a pendant edge at every end-vertex, then every
//! edge subdivided t times. Members are prolonged through the pendants and
//! rewritten through the subdivision vertices.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::{encode_graph6, SHORT_ORDER_MAX};
use crate::longest::longest_path_length;
use crate::path_system::PathSystem;
use crate::REPORT_SCHEMA;
use serde::Serialize;
use std::collections::BTreeMap;

/// Largest constructed order for which longest-path preservation is
/// verified by exhaustive search.
pub const DEFAULT_VERIFY_ORDER: usize = 32;

/// A graph with member paths that are not tied to a borrowed system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extended {
    pub graph: Graph,
    pub paths: Vec<Vec<usize>>,
}

/// Adds one pendant vertex per distinct member end-vertex (numbered after
/// the existing vertices, in increasing order of the vertex they hang off)
/// and prolongs every member through the pendants at both ends.
pub fn attach_pendants(system: &PathSystem<'_>) -> Result<Extended> {
    let graph = system.graph();
    let n = graph.order();
    let mut pendant_of = BTreeMap::new();
    for (i, p) in system.members().enumerate() {
        if p.length() == 0 {
            return Err(Error::usage(format!(
                "member {i} has a single vertex and cannot be prolonged at both ends"
            )));
        }
        pendant_of.insert(p.first(), 0);
        pendant_of.insert(p.last(), 0);
    }
    for (offset, slot) in pendant_of.values_mut().enumerate() {
        *slot = n + offset;
    }
    let edges = graph
        .edges()
        .chain(pendant_of.iter().map(|(&v, &pend)| (v, pend)));
    let extended = Graph::from_edges(n + pendant_of.len(), edges)?;
    let paths = system
        .members()
        .map(|p| {
            let mut seq = Vec::with_capacity(p.vertex_count() + 2);
            seq.push(pendant_of[&p.first()]);
            seq.extend_from_slice(p.vertices());
            seq.push(pendant_of[&p.last()]);
            seq
        })
        .collect();
    Ok(Extended {
        graph: extended,
        paths,
    })
}

/// Replaces every edge by a path through `t` new vertices. Edge `e` (in
/// lexicographic edge order) receives vertices `n + e·t .. n + (e+1)·t`,
/// listed from its smaller endpoint to its larger one.
pub fn subdivide(graph: &Graph, t: usize, paths: &[Vec<usize>]) -> Result<Extended> {
    let n = graph.order();
    let edges: Vec<(usize, usize)> = graph.edges().collect();
    let index: BTreeMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let inner = |e: usize| (0..t).map(move |s| n + e * t + s);
    let mut new_edges = Vec::with_capacity(edges.len() * (t + 1));
    for (e, &(a, b)) in edges.iter().enumerate() {
        let chain: Vec<usize> = std::iter::once(a).chain(inner(e)).chain(std::iter::once(b)).collect();
        new_edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
    }
    let subdivided = Graph::from_edges(n + t * edges.len(), new_edges)?;
    let mut rewritten = Vec::with_capacity(paths.len());
    for seq in paths {
        let mut out = vec![seq[0]];
        for w in seq.windows(2) {
            let (a, b) = (w[0], w[1]);
            let key = (a.min(b), a.max(b));
            let e = *index
                .get(&key)
                .ok_or_else(|| Error::usage(format!("({a}, {b}) is not an edge")))?;
            if a < b {
                out.extend(inner(e));
            } else {
                out.extend(inner(e).collect::<Vec<_>>().into_iter().rev());
            }
            out.push(b);
        }
        rewritten.push(out);
    }
    Ok(Extended {
        graph: subdivided,
        paths: rewritten,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionResult {
    pub schema: &'static str,
    pub base_graph6: String,
    pub base_members: Vec<Vec<usize>>,
    pub t: usize,
    pub base_order: usize,
    pub base_size: usize,
    pub k: usize,
    pub pendants: usize,
    /// Exact |V(G_t)| = (n + p) + t(m + p).
    pub order: usize,
    pub size: usize,
    /// n + t(m + 2k).
    pub stated_bound: usize,
    /// (n + 2k) + t(m + 2k), which always dominates the exact order.
    pub extended_bound: usize,
    pub member_length: usize,
    pub members: Vec<Vec<usize>>,
    /// Set when G_t was small enough to compute ℓ(G_t).
    pub longest_preserved: Option<bool>,
    pub longest_length: Option<usize>,
    pub f: u64,
    /// Set when the base members share no vertex: f(G_t, 𝒫_t) ≥ t.
    pub f_lower_witnessed: Option<bool>,
    /// graph6 of G_t when its order fits the one-byte header.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph6: Option<String>,
    pub edges: Vec<(usize, usize)>,
}

/// Pendants, then `t`-fold subdivision, with the bookkeeping and the
/// checks that are feasible at this size.
pub fn build_gt(system: &PathSystem<'_>, t: usize, verify_order: usize) -> Result<ConstructionResult> {
    let Some(ell) = system.longest_length() else {
        return Err(Error::usage("the construction starts from certified longest paths"));
    };
    let base = system.graph();
    let (n, m, k) = (base.order(), base.size(), system.k());
    let ext = attach_pendants(system)?;
    let pendants = ext.graph.order() - n;
    let gt = subdivide(&ext.graph, t, &ext.paths)?;
    debug_assert_eq!(gt.graph.order(), (n + pendants) + t * (m + pendants));

    let member_length = (ell + 2) * (t + 1);
    for (i, p) in gt.paths.iter().enumerate() {
        if p.len() != member_length + 1 || !crate::longest::is_path(&gt.graph, p)? {
            return Err(Error::usage(format!("prolonged member {i} is malformed")));
        }
    }
    let longest_length = if gt.graph.order() <= verify_order {
        Some(longest_path_length(&gt.graph)?)
    } else {
        None
    };
    let longest_preserved = longest_length.map(|l| l == member_length);
    let relaxed = PathSystem::new(&gt.graph, &gt.paths, false)?;
    let f = relaxed.path_distance_value()?.value;
    let f_lower_witnessed = system
        .common_vertices()
        .is_empty()
        .then_some(f >= t as u64);

    Ok(ConstructionResult {
        schema: REPORT_SCHEMA,
        base_graph6: encode_graph6(base),
        base_members: system.members().map(|p| p.vertices().to_vec()).collect(),
        t,
        base_order: n,
        base_size: m,
        k,
        pendants,
        order: gt.graph.order(),
        size: gt.graph.size(),
        stated_bound: n + t * (m + 2 * k),
        extended_bound: (n + 2 * k) + t * (m + 2 * k),
        member_length,
        members: relaxed.members().map(|p| p.vertices().to_vec()).collect(),
        longest_preserved,
        longest_length,
        f,
        f_lower_witnessed,
        graph6: (gt.graph.order() <= SHORT_ORDER_MAX).then(|| encode_graph6(&gt.graph)),
        edges: gt.graph.edges().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::longest::enumerate_longest_paths;

    fn star_system(g: &Graph) -> PathSystem<'_> {
        PathSystem::new(g, &[vec![1, 0, 2], vec![1, 0, 3], vec![2, 0, 3]], true).unwrap()
    }

    #[test]
    fn pendants_on_star() {
        let g = star(3);
        let ext = attach_pendants(&star_system(&g)).unwrap();
        assert_eq!((ext.graph.order(), ext.graph.size()), (7, 6));
        assert_eq!(ext.paths[0], vec![4, 1, 0, 2, 5]);
        let set = enumerate_longest_paths(&ext.graph, None).unwrap();
        assert_eq!(set.length, 4);
        for p in &ext.paths {
            assert!(set.paths.iter().any(|q| q.vertices() == p.as_slice()));
        }
    }

    #[test]
    fn pendants_on_path() {
        let g = path(4);
        let s = PathSystem::new(&g, &[vec![0, 1, 2, 3]], true).unwrap();
        let ext = attach_pendants(&s).unwrap();
        assert_eq!((ext.graph.order(), ext.graph.size()), (6, 5));
        assert_eq!(ext.paths[0], vec![4, 0, 1, 2, 3, 5]);
    }

    #[test]
    fn shared_end_vertex_gets_one_pendant() {
        let g = star(3);
        let s = PathSystem::new(&g, &[vec![1, 0, 2], vec![1, 0, 3]], true).unwrap();
        let ext = attach_pendants(&s).unwrap();
        assert_eq!(ext.graph.order(), 4 + 3);
        assert_eq!(ext.paths, vec![vec![4, 1, 0, 2, 5], vec![4, 1, 0, 3, 6]]);
    }

    #[test]
    fn single_vertex_member_rejected() {
        let g = Graph::empty(1);
        let s = PathSystem::new(&g, &[vec![0]], true).unwrap();
        assert!(attach_pendants(&s).is_err());
    }

    #[test]
    fn subdivision_examples() {
        let p4 = path(4);
        let sub = subdivide(&p4, 1, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(sub.graph.order(), 7);
        assert_eq!(sub.paths[0], vec![0, 4, 1, 5, 2, 6, 3]);
        assert!(crate::longest::is_path(&sub.graph, &sub.paths[0]).unwrap());
        let reversed = subdivide(&p4, 2, &[vec![3, 2]]).unwrap();
        assert_eq!(reversed.paths[0], vec![3, 9, 8, 2]);

        let g = star(3);
        let ext = attach_pendants(&star_system(&g)).unwrap();
        assert_eq!(subdivide(&ext.graph, 2, &ext.paths).unwrap().graph.order(), 19);

        let same = subdivide(&ext.graph, 0, &ext.paths).unwrap();
        assert_eq!(same, ext);
    }

    #[test]
    fn build_on_star() {
        let g = star(3);
        let s = star_system(&g);
        for t in 0..=3 {
            let res = build_gt(&s, t, DEFAULT_VERIFY_ORDER).unwrap();
            assert_eq!(res.order, 7 + 6 * t);
            assert_eq!(res.member_length, 4 * (t + 1));
            assert_eq!(res.f, 0);
            assert_eq!(res.longest_preserved, Some(true));
            assert_eq!(res.f_lower_witnessed, None);
            assert!(res.order <= res.extended_bound);
        }
    }

    #[test]
    fn build_on_path() {
        let g = path(4);
        let s = PathSystem::new(&g, &[vec![0, 1, 2, 3]], true).unwrap();
        let res = build_gt(&s, 2, DEFAULT_VERIFY_ORDER).unwrap();
        assert_eq!(res.order, 16);
        assert_eq!(res.longest_preserved, Some(true));
        assert_eq!(res.f, 0);
        let gt = crate::graph6::parse_graph6(res.graph6.as_ref().unwrap()).unwrap();
        let set = enumerate_longest_paths(&gt, None).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.paths[0].vertices(), res.members[0].as_slice());
    }

    #[test]
    fn relaxed_base_rejected() {
        let g = path(4);
        let s = PathSystem::new(&g, &[vec![0, 1]], false).unwrap();
        assert!(build_gt(&s, 1, DEFAULT_VERIFY_ORDER).is_err());
    }
}

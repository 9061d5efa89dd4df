//! Canonical labeling by individualization-refinement, and the built-in
//! generator of connected graphs up to isomorphism.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::encode_graph6;
use std::collections::BTreeMap;

/// Largest order accepted by [`generate_connected_graphs`].
pub const GENERATOR_MAX_ORDER: usize = 9;

/// Known numbers of connected unlabeled graphs on 1..=9 vertices.
pub const CONNECTED_COUNTS: [usize; 9] = [1, 1, 2, 6, 21, 112, 853, 11117, 261080];

/// Adjacency bits in graph6 order, packed most significant first so that
/// comparing the words compares the bit strings.
pub type Code = Vec<u64>;

pub fn adjacency_code(g: &Graph, perm: &[usize]) -> Code {
    let n = g.order();
    let mut inverse = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        inverse[p] = v;
    }
    let bits = n * n.saturating_sub(1) / 2;
    let mut code = vec![0u64; bits.div_ceil(64).max(1)];
    let mut idx = 0;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(inverse[i], inverse[j]) {
                code[idx / 64] |= 1u64 << (63 - idx % 64);
            }
            idx += 1;
        }
    }
    code
}

/// Permutation `perm` (vertex v ↦ perm[v]) producing the canonical form.
pub fn canonical_labeling(g: &Graph) -> Vec<usize> {
    let n = g.order();
    if n == 0 {
        return Vec::new();
    }
    let mut best: Option<(Code, Vec<usize>)> = None;
    search(g, vec![(0..n).collect()], &mut best);
    best.expect("at least one leaf").1
}

pub fn canonical_form(g: &Graph) -> Graph {
    g.permuted(&canonical_labeling(g))
}

/// graph6 of the canonical form; equal for isomorphic graphs.
pub fn canonical_graph6(g: &Graph) -> String {
    encode_graph6(&canonical_form(g))
}

fn search(g: &Graph, cells: Vec<Vec<usize>>, best: &mut Option<(Code, Vec<usize>)>) {
    let cells = refine(g, cells);
    let target = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i);
    let Some(target) = target else {
        let mut perm = vec![0; g.order()];
        for (label, cell) in cells.iter().enumerate() {
            perm[cell[0]] = label;
        }
        let code = adjacency_code(g, &perm);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, perm));
        }
        return;
    };
    // Swapping two twins is an automorphism that fixes the partition, so
    // their branches yield the same codes.
    let cell = &cells[target];
    let all_twins = cell.iter().skip(1).all(|&w| twins(g, cell[0], w));
    let branches = if all_twins { &cell[..1] } else { &cell[..] };
    for &v in branches {
        let mut next = Vec::with_capacity(cells.len() + 1);
        next.extend(cells[..target].iter().cloned());
        next.push(vec![v]);
        next.push(cells[target].iter().copied().filter(|&w| w != v).collect());
        next.extend(cells[target + 1..].iter().cloned());
        search(g, next, best);
    }
}

fn twins(g: &Graph, a: usize, b: usize) -> bool {
    let strip = |x: usize, other: usize| g.neighbors(x).iter().copied().filter(move |&y| y != other);
    strip(a, b).eq(strip(b, a))
}

/// Splits cells by the number of neighbors each vertex has in every cell
/// until the partition is equitable. Sub-cells are ordered by signature, so
/// the result does not depend on vertex labels.
fn refine(g: &Graph, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = g.order();
    loop {
        let mut cell_of = vec![0; n];
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            for &v in cell {
                let mut sig = vec![0; cells.len()];
                for &w in g.neighbors(v) {
                    sig[cell_of[w]] += 1;
                }
                groups.entry(sig).or_default().push(v);
            }
            next.extend(groups.into_values());
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

/// Every connected graph on `n` vertices exactly once, in canonical form,
/// sorted by canonical code.
///
/// Grows level by level: every connected graph has a vertex whose removal
/// leaves it connected, so adding a vertex with every nonempty neighborhood
/// to every graph of the previous level reaches all isomorphism classes.
pub fn generate_connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if !(1..=GENERATOR_MAX_ORDER).contains(&n) {
        return Err(Error::usage(format!(
            "built-in generator covers orders 1..={GENERATOR_MAX_ORDER}, got {n}"
        )));
    }
    let mut level = vec![Graph::empty(1)];
    for order in 2..=n {
        let mut seen: BTreeMap<Code, Graph> = BTreeMap::new();
        for g in &level {
            let base: Vec<(usize, usize)> = g.edges().collect();
            let new = order - 1;
            for mask in 1u32..(1 << new) {
                let edges = base
                    .iter()
                    .copied()
                    .chain((0..new).filter(|&v| mask & (1 << v) != 0).map(|v| (v, new)));
                let candidate = Graph::from_edges(order, edges).expect("fresh vertex keeps simplicity");
                let perm = canonical_labeling(&candidate);
                let code = adjacency_code(&candidate, &perm);
                seen.entry(code).or_insert_with(|| candidate.permuted(&perm));
            }
        }
        level = seen.into_values().collect();
    }
    Ok(level)
}

/// All connected graphs on 1..=max_n vertices, by order then code.
pub fn generate_up_to(max_n: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(generate_connected_graphs(n)?);
    }
    Ok(out)
}

//! Replays the path surgery behind the distance theorems on a concrete
//! system: a good path Q from P1 to P2 on a host, the walk R along P1 back
//! to P2, and the three rerouted paths S1, S2, S3 whose lengths cannot
//! exceed ℓ(G).

use crate::error::Result;
use crate::longest::is_path;
use crate::path_system::PathSystem;
use crate::rational::Rational;
use crate::report::{CheckId, CheckReport};
use serde::Serialize;
use serde_json::json;

/// Which way R was walked along P1 from u.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    TowardLast,
    TowardFirst,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub name: &'static str,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

impl Inequality {
    fn at_least(name: &'static str, lhs: Rational, rhs: Rational) -> Self {
        let holds = lhs >= rhs;
        Inequality { name, lhs, rhs, holds }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurgeryTrace {
    pub host: usize,
    /// Positions of Q on the host.
    pub q_span: (usize, usize),
    /// Q read from u to v.
    pub q: Vec<usize>,
    pub u: usize,
    pub v: usize,
    /// Member indices playing P1 and P2.
    pub p1: usize,
    pub p2: usize,
    pub r: Vec<usize>,
    pub r_direction: Direction,
    pub x: usize,
    /// P2 oriented from u2 so that v comes no later than x.
    pub p2_oriented: Vec<usize>,
    pub u2: usize,
    pub v2: usize,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub s3: Vec<usize>,
    pub s_valid: [bool; 3],
    /// Segment and total-length inequalities; empty in relaxed mode.
    pub inequalities: Vec<Inequality>,
}

pub struct SurgeryOutcome {
    pub trace: Option<SurgeryTrace>,
    pub report: CheckReport,
}

/// Runs the construction. Certified systems get the full length checks;
/// relaxed systems only the structural ones (S1–S3 are paths of G).
pub fn surgery_trace(system: &PathSystem<'_>) -> Result<SurgeryOutcome> {
    let k = system.k();
    let instance = system.instance_id();
    let report = CheckReport::new(CheckId::Surgery, instance, ">=");
    let dist = system.path_distance_value()?;
    if k < 3 || dist.value == 0 {
        let reason = if k < 3 { "fewer than 3 members" } else { "members share a vertex" };
        return Ok(SurgeryOutcome {
            trace: None,
            report: report.detail(json!({ "f": dist.value, "reason": reason })).vacuous(),
        });
    }
    let f = dist.value;
    let profile = system.multiplicity_profile();
    let host = (0..k)
        .min_by_key(|&h| (profile.low_class_size(h, k - 2), h))
        .expect("k >= 3");

    let Some(mut trace) = first_applicable(system, host)? else {
        return Ok(SurgeryOutcome {
            trace: None,
            report: report
                .detail(json!({ "f": f, "host": host, "reason": "construction inapplicable" }))
                .vacuous(),
        });
    };

    let structural = trace.s_valid.iter().all(|&ok| ok);
    let Some(ell) = system.longest_length() else {
        let detail = json!({ "f": f, "mode": "relaxed" });
        return Ok(SurgeryOutcome {
            report: report.detail(detail).verdict(structural, || json!(trace.clone())),
            trace: Some(trace),
        });
    };

    trace.inequalities = length_inequalities(&trace, ell, f, k);
    let total = trace
        .inequalities
        .iter()
        .rev()
        .find(|i| i.name.starts_with("total"))
        .cloned()
        .expect("total inequality present");
    let holds = structural && trace.inequalities.iter().all(|i| i.holds);
    let report = report
        .sides(total.lhs, total.rhs)
        .detail(json!({ "f": f, "mode": "certified" }))
        .verdict(holds, || json!(trace.clone()));
    Ok(SurgeryOutcome {
        trace: Some(trace),
        report,
    })
}

fn length_inequalities(t: &SurgeryTrace, ell: usize, f: u64, k: usize) -> Vec<Inequality> {
    let int = |v: usize| Rational::from_usize(v);
    let iv = t.p2_oriented.iter().position(|&w| w == t.v).unwrap();
    let ix = t.p2_oriented.iter().position(|&w| w == t.x).unwrap();
    let (a, b, c) = (iv, ix - iv, t.p2_oriented.len() - 1 - ix);
    let q = t.q.len();
    let rl = t.r.len();
    let f = Rational::integer(f as i64);
    let step = Rational::integer(2) * f.clone() / int(k - 1);
    let one = Rational::integer(1);
    let mut out = vec![
        Inequality::at_least("s1_not_longer", int(ell), int(t.s1.len() - 1)),
        Inequality::at_least("s2_not_longer", int(ell), int(t.s2.len() - 1)),
        Inequality::at_least("s3_not_longer", int(ell), int(t.s3.len() - 1)),
        Inequality::at_least("u2_to_v_vs_qr", int(a), int(q - 1 + rl) - Rational::integer(2)),
        Inequality::at_least("v_to_x_vs_qr", int(b), int(q - 1 + rl - 1)),
        Inequality::at_least("x_to_v2_vs_qr", int(c), int(q - 1 + rl) - Rational::integer(2)),
        Inequality::at_least("u2_to_v", int(a), step.clone()),
        Inequality::at_least("v_to_x", int(b), step.clone() + one.clone()),
        Inequality::at_least("x_to_v2", int(c), step.clone()),
        Inequality::at_least(
            "total_general",
            int(ell),
            Rational::integer(3) * step + one.clone(),
        ),
    ];
    if k == 4 {
        out.push(Inequality::at_least("u2_to_v_k4", int(a), f.clone()));
        out.push(Inequality::at_least("v_to_x_k4", int(b), f.clone() + one.clone()));
        out.push(Inequality::at_least("x_to_v2_k4", int(c), f.clone()));
        out.push(Inequality::at_least("total_k4", int(ell), Rational::integer(3) * f + one));
    }
    out
}

/// Tries good paths on `host` in (start, end, pair) order, each read in both
/// directions, and returns the first for which R and x are well defined.
fn first_applicable(system: &PathSystem<'_>, host: usize) -> Result<Option<SurgeryTrace>> {
    let hseq = system.member(host).vertices();
    for good in system.enumerate_good_paths(host)? {
        if good.start == good.end {
            continue;
        }
        let forward: Vec<usize> = hseq[good.start..=good.end].to_vec();
        for &(i, j) in &good.pairs {
            let backward: Vec<usize> = forward.iter().rev().copied().collect();
            for (p1, p2, q) in [(i, j, forward.clone()), (j, i, backward)] {
                if let Some(trace) = build(system, host, (good.start, good.end), p1, p2, q)? {
                    return Ok(Some(trace));
                }
            }
        }
    }
    Ok(None)
}

fn build(
    system: &PathSystem<'_>,
    host: usize,
    q_span: (usize, usize),
    p1: usize,
    p2: usize,
    q: Vec<usize>,
) -> Result<Option<SurgeryTrace>> {
    let (u, v) = (q[0], *q.last().unwrap());
    let path1 = system.member(p1);
    let path2 = system.member(p2);
    if !path1.contains(u) || !path2.contains(v) || path2.contains(u) {
        return Ok(None);
    }
    let Some((r, r_direction)) = walk_to(path1.vertices(), u, |w| path2.contains(w)) else {
        return Ok(None);
    };
    let x = *r.last().unwrap();
    if x == v {
        return Ok(None);
    }
    let mut oriented = path2.vertices().to_vec();
    let pos = |seq: &[usize], w: usize| seq.iter().position(|&z| z == w).unwrap();
    if pos(&oriented, v) > pos(&oriented, x) {
        oriented.reverse();
    }
    let iv = pos(&oriented, v);
    let ix = pos(&oriented, x);
    let q_from_v: Vec<usize> = q.iter().rev().copied().collect();

    let mut s1: Vec<usize> = oriented[iv..].iter().rev().copied().collect();
    s1.extend(&q_from_v[1..]);
    s1.extend(&r[1..r.len() - 1]);

    let mut s2: Vec<usize> = oriented[..=iv].to_vec();
    s2.extend(&q_from_v[1..]);
    s2.extend(&r[1..]);
    s2.extend(&oriented[ix + 1..]);

    let mut s3: Vec<usize> = oriented[..=ix].to_vec();
    s3.extend(r.iter().rev().skip(1));
    s3.extend(&q[1..q.len() - 1]);

    let g = system.graph();
    let s_valid = [is_path(g, &s1)?, is_path(g, &s2)?, is_path(g, &s3)?];
    Ok(Some(SurgeryTrace {
        host,
        q_span,
        u,
        v,
        p1,
        p2,
        x,
        r,
        r_direction,
        u2: oriented[0],
        v2: *oriented.last().unwrap(),
        p2_oriented: oriented,
        q,
        s1,
        s2,
        s3,
        s_valid,
        inequalities: Vec::new(),
    }))
}

/// Shortest walk along `seq` from `start` to a vertex satisfying `hit`,
/// excluding `start` itself; ties go toward the last vertex.
fn walk_to(seq: &[usize], start: usize, hit: impl Fn(usize) -> bool) -> Option<(Vec<usize>, Direction)> {
    let at = seq.iter().position(|&w| w == start)?;
    let ahead = (at + 1..seq.len()).find(|&i| hit(seq[i]));
    let behind = (0..at).rev().find(|&i| hit(seq[i]));
    let take_ahead = match (ahead, behind) {
        (Some(a), Some(b)) => a - at <= at - b,
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (None, None) => return None,
    };
    Some(if take_ahead {
        (seq[at..=ahead.unwrap()].to_vec(), Direction::TowardLast)
    } else {
        (seq[behind.unwrap()..=at].iter().rev().copied().collect(), Direction::TowardFirst)
    })
}

//! Bound formulas in exact arithmetic and instance-level checkers for the
//! counting lemmas and the distance theorems.

use crate::error::{Error, Result};
use crate::path_system::{max_edge_disjoint, GoodPath, MultiplicityProfile, PathSystem};
use crate::rational::Rational;
use crate::report::{CheckId, CheckReport, InstanceId};
use serde::Serialize;
use serde_json::json;
use std::cell::OnceCell;

/// Best known upper bound on d_3 (cited constant).
pub fn three_path_ratio() -> Rational {
    Rational::new(1, 17)
}

/// Upper bound on d_4.
pub fn four_path_ratio() -> Rational {
    Rational::new(3, 16)
}

/// Lower bound on d_k for k ≥ 7, from a 17-vertex graph with 7 longest
/// paths sharing no vertex.
pub fn seven_path_lower_ratio() -> Rational {
    Rational::new(1, 17)
}

fn require_k(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::usage(format!("bounds are stated for k >= 3, got k = {k}")));
    }
    Ok(())
}

fn r(v: usize) -> Rational {
    Rational::from_usize(v)
}

/// (k·ℓ + k + Σ_{j=1}^{k-2} (k-1-j)·n_j) / (k-1), the lower bound on the
/// order when the members share no vertex. `counts[j-1]` is n_j; missing
/// trailing counts are zero.
pub fn lemma1_rhs(k: usize, ell: usize, counts: &[usize]) -> Result<Rational> {
    require_k(k)?;
    if counts.len() > k - 2 {
        return Err(Error::usage(format!(
            "expected at most {} multiplicity counts, got {}",
            k - 2,
            counts.len()
        )));
    }
    let weighted: usize = counts
        .iter()
        .enumerate()
        .map(|(idx, &c)| (k - 2 - idx) * c)
        .sum();
    Ok(r(k * ell + k + weighted) / r(k - 1))
}

/// Coefficient (k³ − 4k² + 5k − 2) shared by the ratio and the order bound.
fn general_numerator(k: i64) -> i64 {
    k * k * k - 4 * k * k + 5 * k - 2
}

fn general_denominator(k: i64) -> i64 {
    6 * k * k - 8 * k
}

/// ((k³−4k²+5k−2)·n − 2k³ + 8k² − 6k) / (6k² − 8k).
pub fn general_bound(k: usize, n: usize) -> Result<Rational> {
    require_k(k)?;
    let kk = k as i64;
    let constant = -2 * kk * kk * kk + 8 * kk * kk - 6 * kk;
    let num = Rational::integer(general_numerator(kk)) * r(n) + Rational::integer(constant);
    Ok(num / Rational::integer(general_denominator(kk)))
}

/// (3n − 4) / 16.
pub fn four_path_bound(n: usize) -> Rational {
    (Rational::integer(3) * r(n) - Rational::integer(4)) / Rational::integer(16)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremBound {
    /// The tightest available bound on f.
    pub bound: Rational,
    /// The general-k formula.
    pub general: Rational,
    /// The sharper k = 4 formula, when k = 4.
    pub four_path: Option<Rational>,
}

/// Upper bound on f(G, 𝒫) for |𝒫| = k and |V(G)| = n.
pub fn theorem_bound(k: usize, n: usize) -> Result<TheoremBound> {
    if n == 0 {
        return Err(Error::usage("order must be at least 1"));
    }
    let general = general_bound(k, n)?;
    let four_path = (k == 4).then(|| four_path_bound(n));
    let bound = match &four_path {
        Some(fp) => fp.clone().min(general.clone()),
        None => general.clone(),
    };
    Ok(TheoremBound {
        bound,
        general,
        four_path,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioRow {
    pub k: usize,
    /// Best known upper bound on d_k.
    pub upper: Rational,
    /// (k³−4k²+5k−2)/(6k²−8k).
    pub general: Rational,
    /// Best known lower bound on d_k.
    pub lower: Rational,
}

pub fn ratio_table(k_max: usize) -> Result<Vec<RatioRow>> {
    require_k(k_max)?;
    Ok((3..=k_max)
        .map(|k| {
            let kk = k as i64;
            let general = Rational::new(general_numerator(kk), general_denominator(kk));
            let upper = match k {
                3 => three_path_ratio(),
                4 => four_path_ratio(),
                _ => general.clone(),
            };
            let lower = if k >= 7 {
                seven_path_lower_ratio()
            } else {
                Rational::zero()
            };
            RatioRow { k, upper, general, lower }
        })
        .collect())
}

/// Per-instance quantities shared by all checkers; good paths are computed
/// on first use.
pub struct SystemFacts<'s, 'g> {
    pub system: &'s PathSystem<'g>,
    pub instance: InstanceId,
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub f: u64,
    pub minimizers: Vec<usize>,
    pub profile: MultiplicityProfile,
    good: OnceCell<Vec<Vec<GoodPath>>>,
}

impl<'s, 'g> SystemFacts<'s, 'g> {
    /// Requires a certified system with k ≥ 3.
    pub fn compute(system: &'s PathSystem<'g>) -> Result<Self> {
        let ell = system.longest_length().ok_or_else(|| {
            Error::usage("bound checks apply to certified systems of longest paths only")
        })?;
        require_k(system.k())?;
        let dist = system.path_distance_value()?;
        Ok(SystemFacts {
            system,
            instance: system.instance_id(),
            n: system.graph().order(),
            k: system.k(),
            ell,
            f: dist.value,
            minimizers: dist.minimizers,
            profile: system.multiplicity_profile(),
            good: OnceCell::new(),
        })
    }

    pub fn good_paths(&self) -> &[Vec<GoodPath>] {
        self.good.get_or_init(|| {
            (0..self.k)
                .map(|h| {
                    self.system
                        .enumerate_good_paths(h)
                        .expect("k >= 3 checked at construction")
                })
                .collect()
        })
    }

    pub fn t_primes(&self) -> Vec<usize> {
        self.good_paths().iter().map(|g| max_edge_disjoint(g)).collect()
    }

    fn f_rat(&self) -> Rational {
        Rational::integer(self.f as i64)
    }

    /// |X^1 ∪ … ∪ X^{k-2}| on `host`.
    pub fn low_classes(&self, host: usize) -> usize {
        self.profile.low_class_size(host, self.k - 2)
    }
}

pub fn check_lemma1(system: &PathSystem<'_>) -> Result<CheckReport> {
    Ok(lemma1(&SystemFacts::compute(system)?))
}

pub fn lemma1(facts: &SystemFacts<'_, '_>) -> CheckReport {
    let counts: Vec<usize> = (1..=facts.k - 2).map(|i| facts.profile.n(i)).collect();
    let rhs = lemma1_rhs(facts.k, facts.ell, &counts).expect("k >= 3");
    let lhs = r(facts.n);
    let report = CheckReport::new(CheckId::Lemma1, facts.instance.clone(), ">=")
        .sides(lhs.clone(), rhs.clone())
        .detail(json!({ "f": facts.f, "n_counts": facts.profile.n_counts }));
    if facts.f == 0 {
        return report.vacuous();
    }
    report.verdict(lhs >= rhs, || {
        json!({ "f": facts.f, "ell": facts.ell, "n_counts": facts.profile.n_counts })
    })
}

pub fn check_lemma2(system: &PathSystem<'_>) -> Result<CheckReport> {
    Ok(lemma2(&SystemFacts::compute(system)?))
}

/// "Some host has t' = 1 ⇒ f = 0". Vacuous when no host has t' = 1. A
/// certified host with t' = 0 contradicts t' ≥ 1 and is reported as a
/// failure as well.
pub fn lemma2(facts: &SystemFacts<'_, '_>) -> CheckReport {
    let t_primes = facts.t_primes();
    let report = CheckReport::new(CheckId::Lemma2, facts.instance.clone(), "<=")
        .sides(facts.f_rat(), Rational::zero())
        .detail(json!({ "t_prime": t_primes }));
    if let Some(host) = t_primes.iter().position(|&t| t == 0) {
        return report.fail(json!({ "host": host, "t_prime": 0, "reason": "host has no good path" }));
    }
    match t_primes.iter().position(|&t| t == 1) {
        None => report.vacuous(),
        Some(host) => report.verdict(facts.f == 0, || {
            json!({ "host": host, "t_prime": 1, "f": facts.f, "minimizers": facts.minimizers })
        }),
    }
}

/// Returns the reports for parts (i) and (ii).
pub fn check_lemma3(system: &PathSystem<'_>) -> Result<Vec<CheckReport>> {
    let facts = SystemFacts::compute(system)?;
    Ok(vec![lemma3_i(&facts), lemma3_ii(&facts)])
}

/// f ≤ (|V(Q)| − 1)(k − 1)/2 for every good Q on every host.
pub fn lemma3_i(facts: &SystemFacts<'_, '_>) -> CheckReport {
    let scale = Rational::new(facts.k as i64 - 1, 2);
    good_path_bound(facts, CheckId::Lemma3i, |q| r(q.vertex_count() - 1) * scale.clone())
}

/// |X^1 ∪ … ∪ X^{k-2}(P)| ≥ t'(P)·(2f/(k−1) − 1) for every host P.
pub fn lemma3_ii(facts: &SystemFacts<'_, '_>) -> CheckReport {
    let factor = Rational::integer(2) * facts.f_rat() / r(facts.k - 1) - Rational::integer(1);
    host_class_bound(facts, CheckId::Lemma3ii, facts.k - 2, factor)
}

pub fn check_corollary1(system: &PathSystem<'_>) -> Result<Vec<CheckReport>> {
    if system.k() != 4 {
        return Err(Error::usage(format!(
            "the four-path corollary needs exactly 4 members, got {}",
            system.k()
        )));
    }
    let facts = SystemFacts::compute(system)?;
    Ok(vec![cor1_i(&facts), cor1_ii(&facts)])
}

/// f ≤ |V(Q)| − 1 (k = 4).
pub fn cor1_i(facts: &SystemFacts<'_, '_>) -> CheckReport {
    good_path_bound(facts, CheckId::Cor1i, |q| r(q.vertex_count() - 1))
}

/// |X^1 ∪ X^2(P)| ≥ t'(P)·(f − 1) (k = 4).
pub fn cor1_ii(facts: &SystemFacts<'_, '_>) -> CheckReport {
    let factor = facts.f_rat() - Rational::integer(1);
    host_class_bound(facts, CheckId::Cor1ii, 2, factor)
}

fn good_path_bound(
    facts: &SystemFacts<'_, '_>,
    id: CheckId,
    bound: impl Fn(&GoodPath) -> Rational,
) -> CheckReport {
    let f = facts.f_rat();
    // The binding instance is a shortest good path (bound grows with |V(Q)|).
    let tightest = facts
        .good_paths()
        .iter()
        .flatten()
        .min_by_key(|q| (q.vertex_count(), q.host, q.start));
    let report = CheckReport::new(id, facts.instance.clone(), "<=");
    let Some(q) = tightest else {
        return report.detail(json!({ "good_paths": 0 })).vacuous();
    };
    let rhs = bound(q);
    let count: usize = facts.good_paths().iter().map(Vec::len).sum();
    report
        .sides(f.clone(), rhs.clone())
        .detail(json!({ "good_paths": count }))
        .verdict(f <= rhs, || {
            json!({ "host": q.host, "start": q.start, "end": q.end, "vertex_count": q.vertex_count(), "f": facts.f })
        })
}

fn host_class_bound(facts: &SystemFacts<'_, '_>, id: CheckId, upto: usize, factor: Rational) -> CheckReport {
    let t_primes = facts.t_primes();
    let rows: Vec<(usize, Rational, Rational)> = (0..facts.k)
        .map(|h| {
            let lhs = r(facts.profile.low_class_size(h, upto));
            let rhs = r(t_primes[h]) * factor.clone();
            (h, lhs, rhs)
        })
        .collect();
    let (host, lhs, rhs) = rows
        .iter()
        .min_by(|a, b| (&a.1 - &a.2).cmp(&(&b.1 - &b.2)).then(a.0.cmp(&b.0)))
        .cloned()
        .expect("k >= 3 hosts");
    CheckReport::new(id, facts.instance.clone(), ">=")
        .sides(lhs.clone(), rhs.clone())
        .detail(json!({ "t_prime": t_primes, "host": host }))
        .verdict(lhs >= rhs, || {
            json!({ "host": host, "t_prime": t_primes[host], "f": facts.f, "classes": facts.profile.classes[host] })
        })
}

pub fn check_theorem(system: &PathSystem<'_>) -> Result<CheckReport> {
    Ok(theorem(&SystemFacts::compute(system)?))
}

/// f ≤ theorem_bound(k, n). Reported as `thm2` for k = 4 and `thm3`
/// otherwise.
pub fn theorem(facts: &SystemFacts<'_, '_>) -> CheckReport {
    let tb = theorem_bound(facts.k, facts.n).expect("k >= 3, n >= 1");
    let id = if facts.k == 4 { CheckId::Thm2 } else { CheckId::Thm3 };
    let f = facts.f_rat();
    let ratio = f.clone() / r(facts.n);
    let mut detail = json!({ "general": tb.general, "ratio": ratio });
    if let Some(fp) = &tb.four_path {
        detail["four_path"] = json!(fp);
    }
    if facts.k == 3 {
        detail["known_ratio_bound"] = json!(three_path_ratio());
    }
    CheckReport::new(id, facts.instance.clone(), "<=")
        .sides(f.clone(), tb.bound.clone())
        .detail(detail)
        .verdict(f <= tb.bound, || json!({ "f": facts.f, "n": facts.n, "minimizers": facts.minimizers }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::longest::enumerate_longest_paths;
    use crate::report::Status;

    #[test]
    fn lemma1_rhs_examples() {
        assert_eq!(lemma1_rhs(3, 4, &[2]).unwrap(), Rational::new(17, 2));
        assert_eq!(lemma1_rhs(3, 0, &[0]).unwrap(), Rational::new(3, 2));
        assert_eq!(lemma1_rhs(4, 3, &[0, 0]).unwrap(), Rational::new(16, 3));
        assert_eq!(lemma1_rhs(5, 2, &[1, 1, 1]).unwrap(), Rational::new(10 + 5 + 3 + 2 + 1, 4));
        assert!(lemma1_rhs(2, 3, &[]).is_err());
        assert!(lemma1_rhs(3, 3, &[1, 1]).is_err());
    }

    #[test]
    fn theorem_bound_examples() {
        assert_eq!(theorem_bound(3, 30).unwrap().bound, Rational::integer(4));
        let tb = theorem_bound(4, 16).unwrap();
        assert_eq!(tb.bound, Rational::new(11, 4));
        assert_eq!(tb.general, Rational::new(33, 8));
        assert_eq!(tb.four_path, Some(Rational::new(11, 4)));
        assert!(theorem_bound(2, 10).is_err());
    }

    #[test]
    fn ratio_table_examples() {
        let t = ratio_table(8).unwrap();
        assert_eq!(t[0].upper, Rational::new(1, 17));
        assert_eq!(t[0].general, Rational::new(2, 15));
        assert_eq!(t[1].upper, Rational::new(3, 16));
        assert_eq!(t[2].upper, Rational::new(24, 55));
        assert_eq!(t[4].lower, Rational::new(1, 17));
        assert_eq!(t[3].lower, Rational::zero());
        assert!(ratio_table(2).is_err());
    }

    #[test]
    fn star_checks() {
        let g = star(3);
        let set = enumerate_longest_paths(&g, None).unwrap();
        let s = PathSystem::from_longest(&g, &set, &[0, 1, 2]).unwrap();
        assert_eq!(check_lemma1(&s).unwrap().status, Status::Vacuous);
        assert_eq!(check_lemma2(&s).unwrap().status, Status::Vacuous);
        let l3 = check_lemma3(&s).unwrap();
        assert_eq!(l3[0].status, Status::Pass);
        assert_eq!((l3[0].lhs.clone().unwrap(), l3[0].rhs.clone().unwrap()), (Rational::zero(), Rational::zero()));
        assert_eq!(l3[1].status, Status::Pass);
        assert_eq!((l3[1].lhs.clone().unwrap(), l3[1].rhs.clone().unwrap()), (Rational::zero(), Rational::integer(-3)));
        let th = check_theorem(&s).unwrap();
        assert_eq!(th.check, CheckId::Thm3);
        assert_eq!(th.status, Status::Pass);
        assert_eq!(th.rhs, Some(Rational::new(8, 15)));
    }

    #[test]
    fn cycle_checks() {
        let g = cycle(5);
        let set = enumerate_longest_paths(&g, None).unwrap();
        let s = PathSystem::from_longest(&g, &set, &[0, 1, 2]).unwrap();
        assert_eq!(check_lemma1(&s).unwrap().status, Status::Vacuous);
        assert_ne!(check_lemma2(&s).unwrap().status, Status::Fail);
        let s4 = PathSystem::from_longest(&g, &set, &[0, 1, 2, 3]).unwrap();
        let th = check_theorem(&s4).unwrap();
        assert_eq!(th.check, CheckId::Thm2);
        assert_eq!(th.rhs, Some(Rational::new(11, 16)));
        assert_eq!(th.status, Status::Pass);
        for rep in check_corollary1(&s4).unwrap() {
            assert_eq!(rep.status, Status::Pass);
        }
    }

    #[test]
    fn relaxed_and_wrong_k_rejected() {
        let g = path(7);
        let s = PathSystem::new(&g, &[vec![0, 1], vec![2, 3], vec![5, 6]], false).unwrap();
        assert!(check_lemma1(&s).is_err());
        assert!(check_theorem(&s).is_err());
        let g = star(3);
        let set = enumerate_longest_paths(&g, None).unwrap();
        let s = PathSystem::from_longest(&g, &set, &[0, 1, 2]).unwrap();
        assert!(check_corollary1(&s).is_err());
        let s2 = PathSystem::from_longest(&g, &set, &[0, 1]).unwrap();
        assert!(check_lemma3(&s2).is_err());
    }
}

//! Computational checks behind the non-Cayley verdicts.
//!
//! [`verify_involutions`] sweeps involutions of `Sym([n])` (all of them, or a
//! seeded sample) and confirms that each one fixes the vertex, disjoint
//! vertex pair, or line-graph vertex built for it.
//!
//! [`search_regular_subgroup`] is the brute-force converse for tiny
//! instances: it enumerates every subgroup of `Sym([n])` whose order is the
//! vertex count and tests whether any acts regularly on the `k`-subsets.
//! Subgroups are grown by adjoining one element at a time and only those of
//! order dividing the target are kept. Every subgroup of the target order is
//! reached this way, since each intermediate group in a chain
//! `⟨g_1⟩ ≤ ⟨g_1, g_2⟩ ≤ ⋯` has order dividing its final order.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::kneser::{induced_map, vertex_count, vertices, KneserParams, DEFAULT_MATERIALIZE_LIMIT};
use crate::linegraph::{lift, EdgePair};
use crate::numth::BigNat;
use crate::perm::{
    self, all_permutations, compose, enumerate_involutions_bounded, involution_shape,
    random_involution, Permutation, DEFAULT_MAX_ENUMERATION_DEGREE,
};
use crate::witness::{disjoint_fixed_pair, fixed_vertex};

/// Which object each involution must fix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// A vertex from [`fixed_vertex`]. Needs `n` odd or `n`, `k` even.
    FixedVertex,
    /// Two disjoint fixed vertices from [`disjoint_fixed_pair`]. Needs `k` even.
    DisjointPair,
    /// The line-graph vertex `{v, w}` built from the disjoint pair, fixed by
    /// the lifted action. Needs `k` even.
    FixedLineVertex,
}

impl Check {
    fn admits(self, params: KneserParams) -> Result<()> {
        let (n, k) = (params.n(), params.k());
        match self {
            Check::FixedVertex if n % 2 == 0 && k % 2 == 1 => Err(domain!(
                "K({n},{k}): fixed vertices are only guaranteed for n odd or n, k both even"
            )),
            Check::DisjointPair | Check::FixedLineVertex if k % 2 == 1 => Err(domain!(
                "K({n},{k}): disjoint fixed pairs need k even"
            )),
            _ => Ok(()),
        }
    }

    fn run(self, theta: &Permutation, params: KneserParams) -> std::result::Result<(), String> {
        let shape = involution_shape(theta).map_err(|e| e.to_string())?;
        match self {
            Check::FixedVertex => {
                let v = fixed_vertex(&shape, params).map_err(|e| e.to_string())?;
                let image = induced_map(theta, &v).map_err(|e| e.to_string())?;
                if image != v {
                    return Err(format!("moves {v} to {image}"));
                }
            }
            Check::DisjointPair => {
                let (v, w) = disjoint_fixed_pair(&shape, params).map_err(|e| e.to_string())?;
                for x in [v, w] {
                    let image = induced_map(theta, &x).map_err(|e| e.to_string())?;
                    if image != x {
                        return Err(format!("moves {x} to {image}"));
                    }
                }
                if v.bits() & w.bits() != 0 {
                    return Err(format!("{v} and {w} intersect"));
                }
            }
            Check::FixedLineVertex => {
                let (v, w) = disjoint_fixed_pair(&shape, params).map_err(|e| e.to_string())?;
                let e = EdgePair::new(v, w).map_err(|e| e.to_string())?;
                let image = lift(theta, &e).map_err(|e| e.to_string())?;
                if image != e {
                    return Err(format!("lift moves {e} to {image}"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, count: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub theta: Permutation,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub params: KneserParams,
    pub check: Check,
    pub mode: Mode,
    pub involutions_checked: u64,
    pub failures: Vec<Failure>,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
            && match self.mode {
                Mode::Exhaustive => {
                    BigNat::from(self.involutions_checked) == perm::involution_count(self.params.n())
                }
                Mode::Sampled { count, .. } => self.involutions_checked == count,
            }
    }
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

/// Checks that every involution fixes a vertex, with the default exhaustive
/// bound `n ≤ 12`.
pub fn verify_involutions_fix(params: KneserParams, mode: Mode) -> Result<VerificationReport> {
    verify_involutions(params, Check::FixedVertex, mode, DEFAULT_MAX_ENUMERATION_DEGREE)
}

pub fn verify_involutions(
    params: KneserParams,
    check: Check,
    mode: Mode,
    max_exhaustive_degree: usize,
) -> Result<VerificationReport> {
    let n = params.n();
    let stream = match mode {
        Mode::Exhaustive => Some(enumerate_involutions_bounded(n, max_exhaustive_degree)?),
        Mode::Sampled { .. } => None,
    };
    check.admits(params)?;
    let start = Instant::now();
    let (checked, failures) = match (mode, stream) {
        (Mode::Exhaustive, Some(stream)) => {
            let total = stream.total();
            let failures: Vec<Failure> = (0..total)
                .into_par_iter()
                .filter_map(|rank| {
                    let theta = stream.nth_involution(rank).expect("rank below total");
                    check
                        .run(&theta, params)
                        .err()
                        .map(|reason| Failure { theta, reason })
                })
                .collect();
            (total, failures)
        }
        (Mode::Sampled { seed, count }, _) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sample = (0..count)
                .map(|_| random_involution(n, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            let failures: Vec<Failure> = sample
                .into_par_iter()
                .filter_map(|theta| {
                    check
                        .run(&theta, params)
                        .err()
                        .map(|reason| Failure { theta, reason })
                })
                .collect();
            (count, failures)
        }
        (Mode::Exhaustive, None) => unreachable!("exhaustive mode always has a stream"),
    };
    Ok(VerificationReport {
        params,
        check,
        mode,
        involutions_checked: checked,
        failures,
        elapsed: start.elapsed(),
    })
}

/// Limits for [`search_regular_subgroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Largest `n` for which `Sym([n])` is searched.
    pub max_degree: usize,
    /// Largest point set acted on.
    pub max_points: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_degree: 6,
            max_points: DEFAULT_MATERIALIZE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum SearchOutcome {
    NoRegularSubgroup,
    Found { generators: Vec<Permutation> },
    Skipped { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupSearchResult {
    pub params: Option<KneserParams>,
    pub degree: usize,
    #[serde(serialize_with = "as_decimal")]
    pub target_order: BigNat,
    pub outcome: SearchOutcome,
    /// Distinct subgroups of order dividing the target that were generated.
    pub subgroups_examined: u64,
    /// Even-order subgroups confirmed to contain an involution.
    pub cauchy_checks: u64,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_decimal<S: Serializer>(x: &BigNat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Searches `Sym([n])` for a subgroup acting regularly on the vertices of `K(n,k)`.
pub fn search_regular_subgroup(
    params: KneserParams,
    budget: SearchBudget,
) -> Result<SubgroupSearchResult> {
    let order = vertex_count(params);
    if params.n() > budget.max_degree {
        return Ok(skipped(
            params,
            order,
            format!(
                "Sym([{}]) exceeds the search budget of degree {}",
                params.n(),
                budget.max_degree
            ),
        ));
    }
    if order > BigNat::from(budget.max_points) {
        let reason = format!("{order} vertices exceed the budget of {}", budget.max_points);
        return Ok(skipped(params, order, reason));
    }
    let points: Vec<u64> = vertices(params).map(|v| v.bits()).collect();
    let mut result = search_regular_subgroup_on(params.n(), &points, budget)?;
    result.params = Some(params);
    Ok(result)
}

fn skipped(params: KneserParams, order: BigNat, reason: String) -> SubgroupSearchResult {
    SubgroupSearchResult {
        params: Some(params),
        degree: params.n(),
        target_order: order,
        outcome: SearchOutcome::Skipped { reason },
        subgroups_examined: 0,
        cauchy_checks: 0,
        elapsed: Duration::ZERO,
    }
}

/// Permutation images packed four bits per point, usable as a hash key for `n ≤ 16`.
fn pack(p: &Permutation) -> u64 {
    p.images()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &x)| acc | ((x as u64 - 1) << (4 * i)))
}

/// A subgroup as a bitset over the indexed elements of `Sym([n])`.
type ElementSet = Vec<u64>;

struct SymmetricGroup {
    elements: Vec<Permutation>,
    index: HashMap<u64, usize>,
    identity: usize,
}

impl SymmetricGroup {
    fn new(n: usize) -> Self {
        let elements: Vec<Permutation> = all_permutations(n).collect();
        let index = elements.iter().enumerate().map(|(i, p)| (pack(p), i)).collect();
        Self {
            elements,
            index,
            identity: 0,
        }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let c = compose(&self.elements[a], &self.elements[b]).expect("same degree");
        self.index[&pack(&c)]
    }

    fn empty_set(&self) -> ElementSet {
        vec![0; self.elements.len().div_ceil(64)]
    }

    /// Closure of `gens`, or `None` once it grows past `cap` elements.
    fn closure(&self, gens: &[usize], cap: usize) -> Option<(ElementSet, Vec<usize>)> {
        let mut set = self.empty_set();
        let mut members = vec![self.identity];
        set_bit(&mut set, self.identity);
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !has_bit(&set, y) {
                    set_bit(&mut set, y);
                    members.push(y);
                    if members.len() > cap {
                        return None;
                    }
                }
            }
        }
        Some((set, members))
    }
}

fn has_bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

fn act(p: &Permutation, bits: u64) -> u64 {
    let mut out = 0u64;
    let mut rest = bits;
    while rest != 0 {
        let x = rest.trailing_zeros() as usize + 1;
        rest &= rest - 1;
        out |= 1 << (p.apply(x) - 1);
    }
    out
}

/// Transitive on `points` and only the identity fixes a point.
fn acts_regularly(group: &[&Permutation], points: &[u64]) -> bool {
    if group.len() != points.len() {
        return false;
    }
    let point_set: HashSet<u64> = points.iter().copied().collect();
    let orbit: HashSet<u64> = group.iter().map(|g| act(g, points[0])).collect();
    if orbit.len() != points.len() || !orbit.is_subset(&point_set) {
        return false;
    }
    group
        .iter()
        .filter(|g| !g.is_identity())
        .all(|g| points.iter().all(|&x| act(g, x) != x))
}

/// Searches `Sym([degree])` for a subgroup acting regularly on `points`, each
/// a subset of `[degree]` given as a bitmask and closed under the action.
pub fn search_regular_subgroup_on(
    degree: usize,
    points: &[u64],
    budget: SearchBudget,
) -> Result<SubgroupSearchResult> {
    let start = Instant::now();
    let target = points.len() as u64;
    let mut result = SubgroupSearchResult {
        params: None,
        degree,
        target_order: BigNat::from(target),
        outcome: SearchOutcome::NoRegularSubgroup,
        subgroups_examined: 0,
        cauchy_checks: 0,
        elapsed: Duration::ZERO,
    };
    if degree > budget.max_degree.min(16) || target > budget.max_points {
        result.outcome = SearchOutcome::Skipped {
            reason: format!("degree {degree} with {target} points exceeds the search budget"),
        };
        return Ok(result);
    }
    let group_order = (1..=degree as u64).product::<u64>();
    // Lagrange: no subgroup of order `target` unless it divides n!.
    if target == 0 || target > group_order || group_order % target != 0 {
        result.elapsed = start.elapsed();
        return Ok(result);
    }

    let sym = SymmetricGroup::new(degree);
    let candidates: Vec<usize> = (0..sym.elements.len())
        .filter(|&i| target.is_multiple_of(sym.elements[i].order()))
        .collect();
    let target = target as usize;

    let mut seen: HashSet<ElementSet> = HashSet::new();
    let (trivial, _) = sym.closure(&[], 1).expect("trivial group");
    seen.insert(trivial.clone());
    let mut frontier: Vec<(ElementSet, Vec<usize>)> = vec![(trivial, Vec::new())];
    result.subgroups_examined = 1;

    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (set, gens) in &frontier {
            for &g in &candidates {
                if has_bit(set, g) {
                    continue;
                }
                let mut joined = gens.clone();
                joined.push(g);
                let Some((bigger, members)) = sym.closure(&joined, target) else {
                    continue;
                };
                if !target.is_multiple_of(members.len()) || !seen.insert(bigger.clone()) {
                    continue;
                }
                result.subgroups_examined += 1;
                if members.len() % 2 == 0 {
                    if !members.iter().any(|&x| sym.elements[x].order() == 2) {
                        return Err(Error::InvariantViolation(format!(
                            "subgroup of even order {} has no involution",
                            members.len()
                        )));
                    }
                    result.cauchy_checks += 1;
                }
                if members.len() == target {
                    let group: Vec<&Permutation> =
                        members.iter().map(|&x| &sym.elements[x]).collect();
                    if acts_regularly(&group, points) {
                        result.outcome = SearchOutcome::Found {
                            generators: joined.iter().map(|&x| sym.elements[x].clone()).collect(),
                        };
                        verify_found(&result, points)?;
                        result.elapsed = start.elapsed();
                        return Ok(result);
                    }
                } else {
                    next.push((bigger, joined));
                }
            }
        }
        frontier = next;
    }
    result.elapsed = start.elapsed();
    Ok(result)
}

/// Regenerates a reported subgroup from its generators and re-tests it.
fn verify_found(result: &SubgroupSearchResult, points: &[u64]) -> Result<()> {
    let SearchOutcome::Found { generators } = &result.outcome else {
        return Ok(());
    };
    let identity = Permutation::identity(result.degree);
    let mut members = vec![identity.clone()];
    let mut seen: HashSet<Permutation> = HashSet::from([identity]);
    let mut i = 0;
    while i < members.len() {
        for g in generators {
            let y = compose(&members[i], g)?;
            if seen.insert(y.clone()) {
                members.push(y);
            }
        }
        i += 1;
    }
    let target = result.target_order.to_usize().unwrap_or(usize::MAX);
    let group: Vec<&Permutation> = members.iter().collect();
    if members.len() != target || !acts_regularly(&group, points) {
        return Err(Error::InvariantViolation(
            "reported regular subgroup failed re-verification".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kneser::validate;

    #[test]
    fn exhaustive_counts() {
        for (n, k, expected) in [(5, 2, 25), (7, 3, 231), (8, 2, 763)] {
            let report = verify_involutions_fix(validate(n, k).unwrap(), Mode::Exhaustive).unwrap();
            assert_eq!(report.involutions_checked, expected);
            assert!(report.failures.is_empty());
            assert!(report.verified());
        }
    }

    #[test]
    fn hypothesis_checked_before_search() {
        let err = verify_involutions_fix(validate(8, 3).unwrap(), Mode::Exhaustive).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        let p = validate(9, 3).unwrap();
        assert!(verify_involutions(p, Check::DisjointPair, Mode::Exhaustive, 12).is_err());
        // the size bound is reported even when the parity hypothesis also fails
        for (n, k) in [(20, 3), (21, 3)] {
            assert!(matches!(
                verify_involutions_fix(validate(n, k).unwrap(), Mode::Exhaustive),
                Err(Error::Resource(_))
            ));
        }
        let sampled = Mode::Sampled { seed: 0, count: 10 };
        assert!(matches!(
            verify_involutions_fix(validate(20, 3).unwrap(), sampled),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sampled_mode_is_reproducible() {
        let p = validate(21, 4).unwrap();
        let mode = Mode::Sampled { seed: 11, count: 300 };
        let a = verify_involutions(p, Check::FixedLineVertex, mode, 12).unwrap();
        assert!(a.verified());
        assert_eq!(a.involutions_checked, 300);
        let big = validate(63, 20).unwrap();
        let r = verify_involutions_fix(big, Mode::Sampled { seed: 1, count: 200 }).unwrap();
        assert!(r.verified());
    }

    #[test]
    fn petersen_has_no_regular_subgroup() {
        let r = search_regular_subgroup(validate(5, 2).unwrap(), SearchBudget::default()).unwrap();
        assert_eq!(r.outcome, SearchOutcome::NoRegularSubgroup);
        assert_eq!(r.target_order, BigNat::from(10u32));
        // trivial, 25 of order 2, 6 of order 5, 6 dihedral of order 10
        assert_eq!(r.subgroups_examined, 38);
        assert!(r.cauchy_checks > 0);
    }

    #[test]
    fn over_budget_is_skipped() {
        let r = search_regular_subgroup(validate(7, 2).unwrap(), SearchBudget::default()).unwrap();
        assert!(matches!(r.outcome, SearchOutcome::Skipped { .. }));
    }

    #[test]
    fn target_above_group_order() {
        let points: Vec<u64> = (0..8).collect();
        let r = search_regular_subgroup_on(3, &points, SearchBudget::default()).unwrap();
        assert_eq!(r.outcome, SearchOutcome::NoRegularSubgroup);
        assert_eq!(r.subgroups_examined, 0);
    }

    #[test]
    fn finds_regular_subgroups_when_they_exist() {
        // Sym([4]) on the points of [4] (singletons) has the regular Klein four-group.
        let singletons: Vec<u64> = (0..4).map(|i| 1u64 << i).collect();
        let r = search_regular_subgroup_on(4, &singletons, SearchBudget::default()).unwrap();
        assert!(matches!(r.outcome, SearchOutcome::Found { .. }));
        verify_found(&r, &singletons).unwrap();
        // Sym([5]) on singletons: the cyclic group of order 5.
        let singletons: Vec<u64> = (0..5).map(|i| 1u64 << i).collect();
        let r = search_regular_subgroup_on(5, &singletons, SearchBudget::default()).unwrap();
        let SearchOutcome::Found { generators } = r.outcome else {
            panic!("expected a regular subgroup");
        };
        assert_eq!(generators.len(), 1);
        assert_eq!(generators[0].order(), 5);
    }
}

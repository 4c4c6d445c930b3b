//! The line graph of `K(n,k)`. Its vertices are edges `{v, w}` of the Kneser
//! graph, adjacent when they share an endpoint.
//!
//! `θ ∈ Sym([n])` lifts to the line graph as `{v, w} ↦ {θ(v), θ(w)}`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::classification::{Classification, Family, Parity, TheoremTag, Verdict};
use crate::error::{domain, Error, Result};
use crate::kneser::{induced_map, vertex_count, vertices, KSubset, KneserParams};
use crate::numth::{binom_exact, binom_mod, is_multiple_of_4, BigNat};
use crate::perm::Permutation;

/// An unordered pair of disjoint `k`-subsets, smaller bitmask first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgePair {
    u: KSubset,
    v: KSubset,
}

impl EdgePair {
    pub fn new(a: KSubset, b: KSubset) -> Result<Self> {
        if a.params() != b.params() {
            return Err(domain!("endpoints belong to different graphs"));
        }
        if a.bits() & b.bits() != 0 {
            return Err(domain!("{a} and {b} are not adjacent"));
        }
        let (u, v) = if a.bits() <= b.bits() { (a, b) } else { (b, a) };
        Ok(Self { u, v })
    }

    pub fn endpoints(&self) -> (KSubset, KSubset) {
        (self.u, self.v)
    }

    pub fn params(&self) -> KneserParams {
        self.u.params()
    }

    pub fn contains(&self, x: &KSubset) -> bool {
        self.u == *x || self.v == *x
    }
}

impl fmt::Display for EdgePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

impl fmt::Debug for EdgePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for EdgePair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `(k+1)·C(2k+1,k)/2`, the number of edges of `O_{k+1}`.
pub fn line_order_odd(k: u64) -> BigNat {
    binom_exact(2 * k + 1, k) * (k + 1) / 2u32
}

/// `C(n,k)·C(n−k,k)/2`, the number of edges of `K(n,k)`.
pub fn line_order(params: KneserParams) -> BigNat {
    let (n, k) = (params.n() as u64, params.k() as u64);
    vertex_count(params) * binom_exact(n - k, k) / 2u32
}

pub fn line_adjacent(e1: &EdgePair, e2: &EdgePair) -> Result<bool> {
    if e1.params() != e2.params() {
        return Err(domain!("edges belong to different graphs"));
    }
    if e1 == e2 {
        return Err(domain!("{e1} compared with itself; the line graph has no loops"));
    }
    // distinct edges share at most one endpoint
    Ok(e1.contains(&e2.u) || e1.contains(&e2.v))
}

pub fn lift(theta: &Permutation, e: &EdgePair) -> Result<EdgePair> {
    let a = induced_map(theta, &e.u)?;
    let b = induced_map(theta, &e.v)?;
    EdgePair::new(a, b).map_err(|err| {
        Error::InvariantViolation(format!("{theta} does not preserve adjacency: {err}"))
    })
}

/// All edges of `K(n,k)`, produced lazily with `u` ranging in colex order.
pub fn edge_pairs(params: KneserParams) -> impl Iterator<Item = EdgePair> {
    vertices(params).flat_map(move |u| {
        vertices(params)
            .filter(move |v| v.bits() > u.bits() && v.bits() & u.bits() == 0)
            .map(move |v| EdgePair { u, v })
    })
}

pub fn materialize_edge_pairs(params: KneserParams, limit: u64) -> Result<Vec<EdgePair>> {
    let count = line_order(params);
    if count > BigNat::from(limit) {
        return Err(Error::Resource(format!(
            "line graph of K({},{}) has {count} vertices, above the materialization limit {limit}",
            params.n(),
            params.k()
        )));
    }
    Ok(edge_pairs(params).collect())
}

/// A permutation whose lift sends `e1` to `e2`.
///
/// Writing `e1 = {u, v}`, `e2 = {u', v'}`, it sends the sorted elements of `u`,
/// then `v`, then the rest of `[n]` onto those of `u'`, `v'` and the rest.
pub fn edge_transitivity_witness(e1: &EdgePair, e2: &EdgePair) -> Result<Permutation> {
    if e1.params() != e2.params() {
        return Err(domain!("edges belong to different graphs"));
    }
    let n = e1.params().n();
    let rest = |e: &EdgePair| {
        let used = e.u.bits() | e.v.bits();
        (1..=n).filter(move |&x| used >> (x - 1) & 1 == 0)
    };
    let sources = e1.u.elements().into_iter().chain(e1.v.elements()).chain(rest(e1));
    let targets = e2.u.elements().into_iter().chain(e2.v.elements()).chain(rest(e2));
    let mut images = vec![0; n];
    for (x, y) in sources.zip(targets) {
        images[x - 1] = y;
    }
    let theta = Permutation::from_images(images)?;
    if lift(&theta, e1)? != *e2 {
        return Err(Error::InvariantViolation(format!(
            "{theta} does not carry {e1} to {e2}"
        )));
    }
    Ok(theta)
}

/// Classifies the line graph of `O_{k+1}`.
///
/// `NonCayley` for even `k > 4` with `4 | C(2k+1,k)` (equivalently `k` not a
/// power of two): the line graph then has even order `(k+1)/2 · C(2k+1,k)`,
/// and every involution fixes a disjoint pair of `k`-subsets, i.e. an edge.
pub fn classify_line_odd(k: usize) -> Result<Classification> {
    if k < 2 {
        return Err(domain!("line graph classification needs k >= 2, got {k}"));
    }
    let k64 = k as u64;
    let order = line_order_odd(k64);
    let parity = Parity::of_residue(residue_of(&order, 2));
    let base_mod4 = binom_mod(2 * k64 + 1, k64, 4);
    let mut evidence = vec![format!("C({},{k}) mod 4 = {base_mod4}", 2 * k + 1)];
    let eligible = k.is_multiple_of(2) && k > 4;
    let (verdict, tag) = if eligible {
        let via_reduction = is_multiple_of_4(k64)?;
        if via_reduction != (base_mod4 == 0) {
            return Err(Error::InvariantViolation(format!(
                "mod-4 reduction for k = {k} disagrees with the exact residue {base_mod4}"
            )));
        }
        let word = if via_reduction { "even" } else { "odd" };
        evidence.push(format!(
            "C({},{}) is {word}, so t = C(2k+1,k)/(2(2k+1)) is {word}",
            2 * k - 1,
            k - 1
        ));
        if via_reduction {
            evidence.push("line graph order is even; k even gives a disjoint fixed pair".into());
            (Verdict::NonCayley, TheoremTag::LineOfOddMod4)
        } else {
            evidence.push(format!("k = {k} is a power of two"));
            (Verdict::Unresolved, TheoremTag::None)
        }
    } else {
        evidence.push(format!("k = {k} is not an even integer above 4"));
        (Verdict::Unresolved, TheoremTag::None)
    };
    Ok(Classification {
        family: Family::LineOfOdd { k: k64 },
        order,
        parity,
        verdict,
        theorem_tag: tag,
        evidence,
    })
}

fn residue_of(x: &BigNat, m: u32) -> u64 {
    use num_traits::ToPrimitive;
    (x % m).to_u64().unwrap_or(0)
}

//! Vertices of the Kneser graph `K(n,k)`: `k`-subsets of `[n]`, adjacent when
//! disjoint. Subsets are bitmasks (bit `i − 1` for point `i`), so `n ≤ 64`.
//!
//! `Sym([n])` acts on vertices by `f_θ({x_1, …, x_k}) = {θ(x_1), …, θ(x_k)}`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::numth::{binom_exact, BigNat};
use crate::perm::Permutation;

/// Largest supported ground set.
pub const MAX_GROUND_SET: usize = 64;

/// Default cap on the number of vertices (or line-graph vertices) that may be
/// collected into memory at once.
pub const DEFAULT_MATERIALIZE_LIMIT: u64 = 1_000_000;

/// Parameters `(n, k)` with `n > 4` and `1 < k < n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KneserParams {
    n: usize,
    k: usize,
}

impl KneserParams {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `n = 2k + 1`.
    pub fn is_odd_graph(&self) -> bool {
        self.n == 2 * self.k + 1
    }

    /// Parameters of the odd graph `O_{k+1} = K(2k+1, k)`.
    pub fn odd(k: usize) -> Result<Self> {
        validate(2 * k + 1, k)
    }
}

impl fmt::Display for KneserParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={},k={}", self.n, self.k)
    }
}

pub fn validate(n: usize, k: usize) -> Result<KneserParams> {
    let mut failed = Vec::new();
    if n <= 4 {
        failed.push(format!("n > 4 (n = {n})"));
    }
    if k <= 1 {
        failed.push(format!("k > 1 (k = {k})"));
    }
    if 2 * k >= n {
        failed.push(format!("k < n/2 (n = {n}, k = {k})"));
    }
    if n > MAX_GROUND_SET {
        failed.push(format!("n <= {MAX_GROUND_SET} (n = {n})"));
    }
    if failed.is_empty() {
        Ok(KneserParams { n, k })
    } else {
        Err(domain!("K({n},{k}) violates {}", failed.join(" and ")))
    }
}

pub fn vertex_count(params: KneserParams) -> BigNat {
    binom_exact(params.n as u64, params.k as u64)
}

/// `C(n−k, k)`; `k + 1` for odd graphs.
pub fn degree(params: KneserParams) -> BigNat {
    binom_exact((params.n - params.k) as u64, params.k as u64)
}

/// A `k`-subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSubset {
    bits: u64,
    params: KneserParams,
}

impl KSubset {
    pub fn from_bits(params: KneserParams, bits: u64) -> Result<Self> {
        if bits.count_ones() as usize != params.k {
            return Err(domain!(
                "subset has {} elements, expected {}",
                bits.count_ones(),
                params.k
            ));
        }
        if params.n < 64 && bits >> params.n != 0 {
            return Err(domain!("subset has an element above {}", params.n));
        }
        Ok(Self { bits, params })
    }

    pub fn from_elements(params: KneserParams, elements: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &x in elements {
            if x == 0 || x > params.n {
                return Err(domain!("element {x} is outside [1, {}]", params.n));
            }
            let bit = 1u64 << (x - 1);
            if bits & bit != 0 {
                return Err(domain!("element {x} appears twice"));
            }
            bits |= bit;
        }
        Self::from_bits(params, bits)
    }

    /// Parses the text form `"{1,3,5}"`.
    pub fn parse(text: &str, params: KneserParams) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("subset {text:?} must be enclosed in braces")))?;
        let elements = inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                usize::from_str(s).map_err(|_| Error::Parse(format!("bad subset element {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_elements(params, &elements)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn params(&self) -> KneserParams {
        self.params
    }

    pub fn contains(&self, point: usize) -> bool {
        point >= 1 && point <= self.params.n && self.bits >> (point - 1) & 1 == 1
    }

    /// Ascending elements.
    pub fn elements(&self) -> Vec<usize> {
        bit_points(self.bits).collect()
    }

    /// Ascending elements of `[n]` outside the subset.
    pub fn complement(&self) -> Vec<usize> {
        bit_points(!self.bits & ground_mask(self.params.n)).collect()
    }

    /// Colexicographic rank in `0..C(n,k)`.
    pub fn rank(&self) -> u64 {
        bit_points(self.bits)
            .enumerate()
            .map(|(i, x)| small_binom(x as u64 - 1, i as u64 + 1))
            .sum()
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in bit_points(self.bits).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for KSubset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn bit_points(mut bits: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (bits != 0).then(|| {
            let low = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            low + 1
        })
    })
}

fn ground_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `C(m, r)` for `m ≤ 64`; fits a `u64`.
fn small_binom(m: u64, r: u64) -> u64 {
    if r > m {
        return 0;
    }
    let r = r.min(m - r);
    (1..=r).fold(1u128, |acc, i| acc * (m - r + i) as u128 / i as u128) as u64
}

fn check_same(u: &KSubset, v: &KSubset) -> Result<()> {
    if u.params != v.params {
        return Err(domain!(
            "subsets belong to different graphs ({} vs {})",
            u.params,
            v.params
        ));
    }
    Ok(())
}

pub fn adjacent(u: &KSubset, v: &KSubset) -> Result<bool> {
    check_same(u, v)?;
    Ok(u.bits & v.bits == 0)
}

/// `f_θ(v) = {θ(x) : x ∈ v}`.
pub fn induced_map(theta: &Permutation, v: &KSubset) -> Result<KSubset> {
    if theta.degree() != v.params.n {
        return Err(domain!(
            "permutation of degree {} cannot act on subsets of [{}]",
            theta.degree(),
            v.params.n
        ));
    }
    let bits = bit_points(v.bits).fold(0u64, |acc, x| acc | 1u64 << (theta.apply(x) - 1));
    Ok(KSubset {
        bits,
        params: v.params,
    })
}

/// A permutation carrying `u` onto `v`: sorted elements of `u` go to sorted
/// elements of `v`, and the sorted complement of `u` to the sorted complement of `v`.
pub fn transitivity_witness(u: &KSubset, v: &KSubset) -> Result<Permutation> {
    check_same(u, v)?;
    let mut images = vec![0; u.params.n];
    let sources = u.elements().into_iter().chain(u.complement());
    let targets = v.elements().into_iter().chain(v.complement());
    for (x, y) in sources.zip(targets) {
        images[x - 1] = y;
    }
    Permutation::from_images(images)
}

/// All vertices in colex order (Gosper's hack), produced lazily.
pub fn vertices(params: KneserParams) -> impl Iterator<Item = KSubset> {
    let limit = 1u128 << params.n;
    let mut next = Some((1u128 << params.k) - 1);
    std::iter::from_fn(move || {
        let x = next?;
        let low = x & x.wrapping_neg();
        let ripple = x + low;
        let succ = (((ripple ^ x) >> 2) / low) | ripple;
        next = (succ < limit).then_some(succ);
        Some(KSubset {
            bits: x as u64,
            params,
        })
    })
}

/// All vertices in colex order, refusing to allocate more than `limit` of them.
pub fn materialize_vertices(params: KneserParams, limit: u64) -> Result<Vec<KSubset>> {
    let count = vertex_count(params);
    if count > BigNat::from(limit) {
        return Err(Error::Resource(format!(
            "K({},{}) has {count} vertices, above the materialization limit {limit}",
            params.n, params.k
        )));
    }
    Ok(vertices(params).collect())
}

/// The neighbours of `v`, produced lazily.
pub fn neighbors(v: &KSubset) -> impl Iterator<Item = KSubset> + '_ {
    vertices(v.params).filter(move |u| u.bits & v.bits == 0)
}

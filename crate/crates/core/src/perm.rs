//! Permutations of `[n] = {1, …, n}`.
//!
//! Points are 1-based throughout. Composition applies the right factor first:
//! `compose(p, q)(i) = p(q(i))`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Default largest degree for which involutions are enumerated exhaustively.
pub const DEFAULT_MAX_ENUMERATION_DEGREE: usize = 12;

/// Largest degree whose involution count fits the `u64` index space.
pub const MAX_INDEXABLE_DEGREE: usize = 30;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    /// `images[i - 1] = θ(i)`.
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (1..=degree).collect(),
        }
    }

    /// Builds `θ` from `θ(1), …, θ(n)`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n {
                return Err(domain!("image {x} is outside [1, {n}]"));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(domain!("image {x} appears twice"));
            }
        }
        Ok(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `θ(point)` for a 1-based point.
    ///
    /// Panics if `point` is not in `[1, n]`.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x - 1] = i + 1;
        }
        Self { images }
    }

    /// The transposition `(x y)` on `[degree]`.
    pub fn transposition(degree: usize, x: usize, y: usize) -> Result<Self> {
        if x == y || x == 0 || y == 0 || x > degree || y > degree {
            return Err(domain!("({x} {y}) is not a transposition of [{degree}]"));
        }
        let mut p = Self::identity(degree);
        p.images.swap(x - 1, y - 1);
        Ok(p)
    }

    pub fn cycles(&self) -> CycleDecomposition {
        cycle_decomposition(self)
    }

    pub fn order(&self) -> u64 {
        order(self)
    }
}

impl fmt::Display for Permutation {
    /// Disjoint cycle notation with fixed points omitted; identity is empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in cycle_decomposition(self).cycles.iter().filter(|c| c.len() > 1) {
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]({})", self.degree(), self)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses disjoint cycle notation such as `"(1 2)(3 4)"` into a permutation
/// of `[n]`. Points not mentioned are fixed; the empty string is the identity.
pub fn parse_cycles(text: &str, n: usize) -> Result<Permutation> {
    if n == 0 {
        return Err(domain!("degree must be positive"));
    }
    let mut images: Vec<usize> = (1..=n).collect();
    let mut used = vec![false; n + 1];
    let mut chars = text.chars().peekable();
    loop {
        while chars.next_if(|c| c.is_whitespace()).is_some() {}
        match chars.next() {
            None => break,
            Some('(') => {}
            Some(c) => return Err(Error::Parse(format!("expected '(' but found {c:?}"))),
        }
        let mut cycle = Vec::new();
        loop {
            while chars.next_if(|c| c.is_whitespace() || *c == ',').is_some() {}
            match chars.peek() {
                Some(')') => {
                    chars.next();
                    break;
                }
                Some(c) if c.is_ascii_digit() => {
                    let mut digits = String::new();
                    while let Some(d) = chars.next_if(|c| c.is_ascii_digit()) {
                        digits.push(d);
                    }
                    let point: usize = digits
                        .parse()
                        .map_err(|_| Error::Parse(format!("point {digits} is too large")))?;
                    if point == 0 || point > n {
                        return Err(Error::Parse(format!("point {point} is outside [1, {n}]")));
                    }
                    if std::mem::replace(&mut used[point], true) {
                        return Err(Error::Parse(format!("point {point} appears twice")));
                    }
                    cycle.push(point);
                }
                Some(c) => return Err(Error::Parse(format!("unexpected character {c:?}"))),
                None => return Err(Error::Parse("unterminated cycle".into())),
            }
        }
        if cycle.is_empty() {
            return Err(Error::Parse("empty cycle \"()\"".into()));
        }
        for (i, &x) in cycle.iter().enumerate() {
            images[x - 1] = cycle[(i + 1) % cycle.len()];
        }
    }
    Ok(Permutation { images })
}

/// The map `i ↦ p(q(i))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.degree() != q.degree() {
        return Err(domain!(
            "cannot compose permutations of degree {} and {}",
            p.degree(),
            q.degree()
        ));
    }
    Ok(Permutation {
        images: q.images.iter().map(|&x| p.apply(x)).collect(),
    })
}

/// Disjoint cycles partitioning `[n]`, fixed points included as 1-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    pub degree: usize,
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycles.iter().map(Vec::len)
    }

    /// Multiplies the cycles back together.
    pub fn to_permutation(&self) -> Result<Permutation> {
        let mut images = vec![0; self.degree];
        for cycle in &self.cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x > self.degree || images[x - 1] != 0 {
                    return Err(domain!("cycles do not partition [{}]", self.degree));
                }
                images[x - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }
}

/// Canonical form: each cycle starts at its smallest point, cycles are sorted
/// by starting point.
pub fn cycle_decomposition(p: &Permutation) -> CycleDecomposition {
    let n = p.degree();
    let mut seen = vec![false; n + 1];
    let mut cycles = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p.apply(start);
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p.apply(x);
        }
        cycles.push(cycle);
    }
    CycleDecomposition { degree: n, cycles }
}

/// Least common multiple of the cycle lengths.
pub fn order(p: &Permutation) -> u64 {
    cycle_decomposition(p)
        .lengths()
        .fold(1u64, |acc, len| num_integer::lcm(acc, len as u64))
}

/// An order-2 permutation written as `τ_1 ⋯ τ_a (i_1) ⋯ (i_b)`.
///
/// Transpositions are listed as `(x, y)` with `x < y`, sorted by `x`; fixed
/// points ascend. `2a + b = n` and `a ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct InvolutionShape {
    degree: usize,
    transpositions: Vec<(usize, usize)>,
    fixed_points: Vec<usize>,
}

impl InvolutionShape {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn transpositions(&self) -> &[(usize, usize)] {
        &self.transpositions
    }

    pub fn fixed_points(&self) -> &[usize] {
        &self.fixed_points
    }

    /// Number of transpositions.
    pub fn a(&self) -> usize {
        self.transpositions.len()
    }

    /// Number of fixed points.
    pub fn b(&self) -> usize {
        self.fixed_points.len()
    }

    pub fn to_permutation(&self) -> Permutation {
        let mut p = Permutation::identity(self.degree);
        for &(x, y) in &self.transpositions {
            p.images.swap(x - 1, y - 1);
        }
        p
    }
}

pub fn involution_shape(p: &Permutation) -> Result<InvolutionShape> {
    let ord = order(p);
    if ord != 2 {
        let shown = if ord == 1 { "the identity".to_string() } else { p.to_string() };
        return Err(domain!("{shown} has order {ord}, not 2"));
    }
    let mut transpositions = Vec::new();
    let mut fixed_points = Vec::new();
    for cycle in cycle_decomposition(p).cycles {
        match cycle[..] {
            [x] => fixed_points.push(x),
            [x, y] => transpositions.push((x, y)),
            _ => unreachable!("order-2 permutation has a cycle of length {}", cycle.len()),
        }
    }
    Ok(InvolutionShape {
        degree: p.degree(),
        transpositions,
        fixed_points,
    })
}

/// `Σ_{a≥1} n! / (a! · 2^a · (n−2a)!)`, the number of involutions of `Sym([n])`.
pub fn involution_count(n: usize) -> BigUint {
    let mut total = BigUint::from(0u32);
    for a in 1..=n / 2 {
        let choose_points = crate::numth::binom_exact(n as u64, 2 * a as u64);
        // perfect matchings on 2a points: (2a − 1)!!
        let matchings = (1..2 * a)
            .step_by(2)
            .fold(BigUint::one(), |acc, x| acc * x);
        total += choose_points * matchings;
    }
    total
}

/// Partial matchings of `[m]` (involutions plus the identity): `T(m) = T(m−1) + (m−1)·T(m−2)`.
fn matching_counts(m: usize) -> Vec<u64> {
    let mut t = vec![1u64; m.max(1) + 1];
    for i in 2..=m {
        t[i] = t[i - 1] + (i as u64 - 1) * t[i - 2];
    }
    t
}

/// Lazily unranks involutions of `Sym([n])` from a contiguous index range.
///
/// Index `i` in `0..T(n)` names a partial matching: at each step the smallest
/// unassigned point is either fixed (the first `T(m−1)` indices) or paired with
/// the `j`-th larger unassigned point. Index 0 is the identity and is never
/// yielded, so every involution appears exactly once in `1..T(n)`. Disjoint
/// index ranges can be handed to independent workers.
#[derive(Debug, Clone)]
pub struct Involutions {
    degree: usize,
    counts: Vec<u64>,
    next: u64,
    end: u64,
}

impl Involutions {
    /// Total number of involutions of the degree (the full index range length).
    pub fn total(&self) -> u64 {
        self.counts[self.degree] - 1
    }

    /// Restricts to involutions with ranks in `start..end` (ranks start at 0).
    pub fn with_range(mut self, start: u64, end: u64) -> Self {
        let total = self.total();
        self.next = 1 + start.min(total);
        self.end = 1 + end.min(total);
        if self.end < self.next {
            self.end = self.next;
        }
        self
    }

    /// The involution of rank `rank` in `0..total()`.
    pub fn nth_involution(&self, rank: u64) -> Option<Permutation> {
        (rank < self.total()).then(|| self.unrank(rank + 1))
    }

    fn unrank(&self, mut index: u64) -> Permutation {
        let n = self.degree;
        let mut images: Vec<usize> = (1..=n).collect();
        let mut free: Vec<usize> = (1..=n).collect();
        while !free.is_empty() {
            let m = free.len();
            let first = free.remove(0);
            let stay = self.counts[m - 1];
            if index < stay {
                continue;
            }
            index -= stay;
            let block = self.counts[m - 2];
            let partner = free.remove((index / block) as usize);
            index %= block;
            images[first - 1] = partner;
            images[partner - 1] = first;
        }
        Permutation { images }
    }
}

impl Iterator for Involutions {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.next >= self.end {
            return None;
        }
        let p = self.unrank(self.next);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Involutions {}

/// Every order-2 element of `Sym([n])`, each exactly once, for
/// `n ≤` [`DEFAULT_MAX_ENUMERATION_DEGREE`].
pub fn enumerate_involutions(n: usize) -> Result<Involutions> {
    enumerate_involutions_bounded(n, DEFAULT_MAX_ENUMERATION_DEGREE)
}

pub fn enumerate_involutions_bounded(n: usize, max_degree: usize) -> Result<Involutions> {
    if n > max_degree.min(MAX_INDEXABLE_DEGREE) {
        return Err(Error::Resource(format!(
            "involution enumeration of degree {n} exceeds the bound {}",
            max_degree.min(MAX_INDEXABLE_DEGREE)
        )));
    }
    let counts = matching_counts(n);
    let end = counts[n];
    Ok(Involutions {
        degree: n,
        counts,
        next: 1,
        end,
    })
}

/// A random involution of `Sym([n])`, `n ≥ 2`.
///
/// The number of transpositions is drawn uniformly from `1..=n/2` and the
/// points are then placed uniformly, so every shape is sampled equally often
/// regardless of how many involutions share it.
pub fn random_involution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Permutation> {
    if n < 2 {
        return Err(domain!("Sym([{n}]) has no involutions"));
    }
    let a = rng.gen_range(1..=n / 2);
    let mut points: Vec<usize> = (1..=n).collect();
    points.shuffle(rng);
    let mut images: Vec<usize> = (1..=n).collect();
    for pair in points[..2 * a].chunks_exact(2) {
        images[pair[0] - 1] = pair[1];
        images[pair[1] - 1] = pair[0];
    }
    Ok(Permutation { images })
}

/// All `n!` permutations of `[n]` in lexicographic order of their image lists.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut current: Option<Vec<usize>> = Some((1..=n).collect());
    std::iter::from_fn(move || {
        let images = current.take()?;
        let mut next = images.clone();
        if let Some(i) = (1..n).rev().find(|&i| next[i - 1] < next[i]) {
            let j = (i..n).rev().find(|&j| next[j] > next[i - 1]).unwrap();
            next.swap(i - 1, j);
            next[i..].reverse();
            current = Some(next);
        }
        Some(Permutation { images })
    })
}

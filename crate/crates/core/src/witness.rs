//! Fixed vertices of involutions and the non-Cayley classification of
//! Kneser and odd graphs.
//!
//! A group acting regularly on the vertices of `K(n,k)` has order `C(n,k)`.
//! When that order is even the group contains an involution `θ`, and a
//! regular action forbids `θ` from fixing any vertex. The constructors below
//! produce, for every involution, a `k`-subset that `θ` maps onto itself, so
//! no such group exists. Each constructor re-checks its output against
//! [`induced_map`] before returning it.
//!
//! Transpositions and fixed points are consumed in the canonical order of
//! [`InvolutionShape`], which makes every witness deterministic.

use crate::classification::{Classification, Family, Parity, TheoremTag, Verdict};
use crate::error::{domain, Error, Result};
use crate::kneser::{induced_map, validate, vertex_count, KSubset, KneserParams};
use crate::numth::{binom_exact, binom_mod, lucas_residue, odd_graph_order_parity};
use crate::perm::InvolutionShape;

/// Collects the first `pairs` transpositions and then `fixed` fixed points,
/// skipping `skip_pairs` transpositions and `skip_fixed` fixed points.
fn take_points(
    shape: &InvolutionShape,
    skip_pairs: usize,
    pairs: usize,
    skip_fixed: usize,
    fixed: usize,
) -> Vec<usize> {
    let mut out = Vec::with_capacity(2 * pairs + fixed);
    for &(x, y) in &shape.transpositions()[skip_pairs..skip_pairs + pairs] {
        out.push(x);
        out.push(y);
    }
    out.extend_from_slice(&shape.fixed_points()[skip_fixed..skip_fixed + fixed]);
    out
}

fn check_shape(shape: &InvolutionShape, params: KneserParams) -> Result<()> {
    if shape.degree() != params.n() {
        return Err(domain!(
            "involution of degree {} does not act on K({},{})",
            shape.degree(),
            params.n(),
            params.k()
        ));
    }
    Ok(())
}

fn verified_fixed(shape: &InvolutionShape, params: KneserParams, points: &[usize]) -> Result<KSubset> {
    let v = KSubset::from_elements(params, points)
        .map_err(|e| Error::InvariantViolation(format!("witness is not a vertex: {e}")))?;
    let theta = shape.to_permutation();
    if induced_map(&theta, &v)? != v {
        return Err(Error::InvariantViolation(format!(
            "{theta} moves the constructed vertex {v}"
        )));
    }
    Ok(v)
}

/// A vertex `v` of `K(n,k)` with `θ(v) = v`, for `n` odd or `n`, `k` both even.
///
/// Writing `θ = τ_1 ⋯ τ_a (i_1) ⋯ (i_b)` with `2a + b = n`:
///
/// - `n` odd, `2a ≤ k`: all pairs plus the first `k − 2a` fixed points
///   (enough exist since `b = n − 2a > k − 2a`).
/// - `n` odd, `2a > k`, `k = 2c`: the first `c` pairs.
/// - `n` odd, `2a > k`, `k = 2c + 1`: the first `c` pairs and `i_1`; `b` is
///   odd, hence at least 1.
/// - `n` even, `k = 2e`, `a < e`: all pairs plus `k − 2a` fixed points.
/// - `n` even, `k = 2e`, `a ≥ e`: the first `e` pairs.
///
/// With `n` even and `k` odd a fixed-point-free involution has no fixed
/// `k`-subset at all, so that case is a domain error.
pub fn fixed_vertex(shape: &InvolutionShape, params: KneserParams) -> Result<KSubset> {
    check_shape(shape, params)?;
    let (n, k, a) = (params.n(), params.k(), shape.a());
    let points = if n % 2 == 1 {
        if 2 * a <= k {
            take_points(shape, 0, a, 0, k - 2 * a)
        } else if k % 2 == 0 {
            take_points(shape, 0, k / 2, 0, 0)
        } else {
            take_points(shape, 0, k / 2, 0, 1)
        }
    } else if k % 2 == 0 {
        let e = k / 2;
        if a < e {
            take_points(shape, 0, a, 0, k - 2 * a)
        } else {
            take_points(shape, 0, e, 0, 0)
        }
    } else {
        return Err(domain!(
            "K({n},{k}) has n even and k odd; an involution need not fix a vertex"
        ));
    };
    verified_fixed(shape, params, &points)
}

/// Two disjoint vertices `v`, `w`, each fixed by `θ`, for even `k`.
///
/// - `2a ≤ k`: `v` is all pairs plus the first `k − 2a` fixed points, `w` the
///   next `k` fixed points. This needs `b ≥ 2k − 2a`, i.e. `n ≥ 2k`.
/// - `2a > k`, `k = 2l`: `v` is the first `l` pairs; `w` takes
///   `min(a − l, l)` of the remaining pairs and fills the rest (an even
///   count, at most `2k − 2a`) with fixed points, again fine since `n > 2k`.
pub fn disjoint_fixed_pair(
    shape: &InvolutionShape,
    params: KneserParams,
) -> Result<(KSubset, KSubset)> {
    check_shape(shape, params)?;
    let (k, a) = (params.k(), shape.a());
    if k % 2 != 0 {
        return Err(domain!("a disjoint fixed pair needs even k, got k = {k}"));
    }
    let (v_points, w_points) = if 2 * a <= k {
        let t = k - 2 * a;
        (take_points(shape, 0, a, 0, t), take_points(shape, a, 0, t, k))
    } else {
        let l = k / 2;
        let more = (a - l).min(l);
        (
            take_points(shape, 0, l, 0, 0),
            take_points(shape, l, more, 0, k - 2 * more),
        )
    };
    let v = verified_fixed(shape, params, &v_points)?;
    let w = verified_fixed(shape, params, &w_points)?;
    if v.bits() & w.bits() != 0 {
        return Err(Error::InvariantViolation(format!(
            "fixed vertices {v} and {w} intersect"
        )));
    }
    Ok((v, w))
}

/// Classifies `K(n,k)`.
///
/// `NonCayley` when `C(n,k)` is even and either `n` is odd or `n`, `k` are
/// both even; `Unresolved` otherwise. The parity comes from Lucas' theorem
/// and is cross-checked against the exact binomial.
pub fn classify_kneser(n: usize, k: usize) -> Result<Classification> {
    let params = validate(n, k)?;
    if k < 2 {
        return Err(domain!("classification needs k >= 2"));
    }
    let order = vertex_count(params);
    let residue = lucas_residue(n as u64, k as u64, 2)?;
    let exact = binom_mod(n as u64, k as u64, 2);
    if residue != exact {
        return Err(Error::InvariantViolation(format!(
            "Lucas residue {residue} disagrees with C({n},{k}) mod 2 = {exact}"
        )));
    }
    let parity = Parity::of_residue(residue);
    let mut evidence = vec![format!("C({n},{k}) mod 2 = {residue} (Lucas, exact agrees)")];
    let tag = match (parity, n % 2, k % 2) {
        (Parity::Even, 1, _) => {
            evidence.push(format!("n = {n} is odd"));
            TheoremTag::KneserOddN
        }
        (Parity::Even, 0, 0) => {
            evidence.push(format!("n = {n} and k = {k} are even"));
            TheoremTag::KneserEvenNK
        }
        (Parity::Even, _, _) => {
            evidence.push(format!("n = {n} is even but k = {k} is odd"));
            TheoremTag::None
        }
        (Parity::Odd, _, _) => {
            evidence.push("odd order: a regular group need not contain an involution".into());
            TheoremTag::None
        }
    };
    let verdict = if tag == TheoremTag::None {
        Verdict::Unresolved
    } else {
        Verdict::NonCayley
    };
    Ok(Classification {
        family: Family::Kneser {
            n: n as u64,
            k: k as u64,
        },
        order,
        parity,
        verdict,
        theorem_tag: tag,
        evidence,
    })
}

/// Classifies the odd graph `O_{k+1} = K(2k+1, k)` by the parity of its order.
pub fn classify_odd(k: usize) -> Result<Classification> {
    let cert = odd_graph_order_parity(k as u64)?;
    let n = 2 * k as u64 + 1;
    let order = binom_exact(n, k as u64);
    let exact = Parity::of_residue(binom_mod(n, k as u64, 2));
    if exact != cert.verdict {
        return Err(Error::InvariantViolation(format!(
            "digit certificate says {} but C({n},{k}) is {exact}",
            cert.verdict
        )));
    }
    let digits: String = cert
        .expansion_k
        .digits()
        .iter()
        .rev()
        .map(|d| char::from(b'0' + *d as u8))
        .collect();
    let mut evidence = vec![format!("k = {k} = {digits} in binary")];
    let (verdict, tag) = match cert.j {
        Some(j) => {
            evidence.push(format!(
                "largest zero digit at index {j}, so the Lucas factor C(0,1) at index {} vanishes",
                j + 1
            ));
            evidence.push("even order: even-odd graph".into());
            (Verdict::NonCayley, TheoremTag::EvenOddGraph)
        }
        None => {
            evidence.push(format!("k + 1 = {} is a power of two: odd order", k + 1));
            (Verdict::Unresolved, TheoremTag::None)
        }
    };
    evidence.push("every k > 1 not of the form 2^t - 1 gives an even-odd graph".into());
    Ok(Classification {
        family: Family::Odd { k: k as u64 },
        order,
        parity: cert.verdict,
        verdict,
        theorem_tag: tag,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{involution_shape, parse_cycles};

    fn shape(text: &str, n: usize) -> InvolutionShape {
        involution_shape(&parse_cycles(text, n).unwrap()).unwrap()
    }

    fn params(n: usize, k: usize) -> KneserParams {
        validate(n, k).unwrap()
    }

    fn elems(v: &KSubset) -> Vec<usize> {
        v.elements()
    }

    #[test]
    fn fixed_vertex_examples() {
        let v = fixed_vertex(&shape("(1 2)(3 4)", 5), params(5, 2)).unwrap();
        assert_eq!(elems(&v), [1, 2]);
        let v = fixed_vertex(&shape("(1 2)", 7), params(7, 3)).unwrap();
        assert_eq!(elems(&v), [1, 2, 3]);
        let v = fixed_vertex(&shape("(1 2)(3 4)(5 6)", 8), params(8, 2)).unwrap();
        assert_eq!(elems(&v), [1, 2]);
    }

    #[test]
    fn fixed_vertex_odd_k_uses_a_fixed_point() {
        // 2a = 6 > k = 3: one pair plus the first fixed point
        let v = fixed_vertex(&shape("(1 2)(3 4)(5 6)", 7), params(7, 3)).unwrap();
        assert_eq!(elems(&v), [1, 2, 7]);
        // n even, a < e: all pairs then fixed points
        let v = fixed_vertex(&shape("(2 7)", 10), params(10, 4)).unwrap();
        assert_eq!(elems(&v), [1, 2, 3, 7]);
    }

    #[test]
    fn fixed_vertex_rejects_even_n_odd_k() {
        let err = fixed_vertex(&shape("(1 2)", 8), params(8, 3)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(fixed_vertex(&shape("(1 2)", 7), params(8, 2)).is_err());
    }

    #[test]
    fn disjoint_pair_examples() {
        let (v, w) = disjoint_fixed_pair(&shape("(1 2)", 8), params(8, 2)).unwrap();
        assert_eq!((elems(&v), elems(&w)), (vec![1, 2], vec![3, 4]));
        let (v, w) = disjoint_fixed_pair(&shape("(1 2)(3 4)(5 6)", 9), params(9, 2)).unwrap();
        assert_eq!((elems(&v), elems(&w)), (vec![1, 2], vec![3, 4]));
        let (v, w) = disjoint_fixed_pair(&shape("(1 2)(3 4)", 9), params(9, 4)).unwrap();
        assert_eq!((elems(&v), elems(&w)), (vec![1, 2, 3, 4], vec![5, 6, 7, 8]));
        // l = 2, only one pair left over: w mixes a pair with fixed points
        let (v, w) = disjoint_fixed_pair(&shape("(1 2)(3 4)(5 6)", 9), params(9, 4)).unwrap();
        assert_eq!((elems(&v), elems(&w)), (vec![1, 2, 3, 4], vec![5, 6, 7, 8]));
        assert!(disjoint_fixed_pair(&shape("(1 2)", 7), params(7, 3)).is_err());
    }

    #[test]
    fn classify_kneser_examples() {
        let c = classify_kneser(5, 2).unwrap();
        assert_eq!((c.verdict, c.theorem_tag), (Verdict::NonCayley, TheoremTag::KneserOddN));
        let c = classify_kneser(8, 2).unwrap();
        assert_eq!(c.order.to_string(), "28");
        assert_eq!((c.verdict, c.theorem_tag), (Verdict::NonCayley, TheoremTag::KneserEvenNK));
        let c = classify_kneser(7, 3).unwrap();
        assert_eq!((c.verdict, c.parity), (Verdict::Unresolved, Parity::Odd));
        // C(8,3) = 56 is even but n even with k odd is outside the hypothesis
        let c = classify_kneser(8, 3).unwrap();
        assert_eq!((c.verdict, c.parity), (Verdict::Unresolved, Parity::Even));
        assert!(classify_kneser(6, 3).is_err());
    }

    #[test]
    fn classify_odd_examples() {
        let c = classify_odd(2).unwrap();
        assert_eq!((c.verdict, c.order.to_string()), (Verdict::NonCayley, "10".into()));
        assert_eq!(classify_odd(7).unwrap().verdict, Verdict::Unresolved);
        let c = classify_odd(6).unwrap();
        assert_eq!((c.verdict, c.order.to_string()), (Verdict::NonCayley, "1716".into()));
        assert_eq!(classify_odd(1).unwrap().verdict, Verdict::Unresolved);
        assert!(classify_odd(0).is_err());
    }

    #[test]
    fn witnesses_are_deterministic() {
        let s = shape("(3 9)(1 5)", 11);
        let p = params(11, 4);
        assert_eq!(fixed_vertex(&s, p).unwrap(), fixed_vertex(&s, p).unwrap());
        assert_eq!(
            disjoint_fixed_pair(&s, p).unwrap(),
            disjoint_fixed_pair(&s, p).unwrap()
        );
    }
}

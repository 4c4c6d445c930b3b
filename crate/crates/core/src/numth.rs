//! Binomial coefficients: exact values, residues modulo a prime via Lucas'
//! theorem, and the parity and mod-4 criteria for the odd-graph order
//! `C(2k+1, k)`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::classification::Parity;
use crate::error::{domain, Result};

/// Arbitrary-precision non-negative integer.
pub type BigNat = BigUint;

/// Base-`p` expansion of a non-negative integer, least significant digit first.
///
/// Zero expands to the single digit `[0]`; otherwise the last digit is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DigitExpansion {
    base: u64,
    digits: Vec<u64>,
}

impl DigitExpansion {
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Digit at position `i`, with implicit zeros above the top digit.
    pub fn digit(&self, i: usize) -> u64 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Builds an expansion from raw digits, trimming leading (high) zeros.
    pub fn from_digits(base: u64, digits: Vec<u64>) -> Result<Self> {
        check_prime(base)?;
        if let Some(d) = digits.iter().find(|&&d| d >= base) {
            return Err(domain!("digit {d} is not below base {base}"));
        }
        let mut digits = digits;
        while digits.len() > 1 && digits.last() == Some(&0) {
            digits.pop();
        }
        if digits.is_empty() {
            digits.push(0);
        }
        Ok(Self { base, digits })
    }

    /// `Σ d_i · base^i`. `None` if the value overflows `u64`.
    pub fn value(&self) -> Option<u64> {
        self.digits.iter().rev().try_fold(0u64, |acc, &d| {
            acc.checked_mul(self.base)?.checked_add(d)
        })
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(domain!("{p} is not prime"))
    }
}

pub fn digits_base_p(m: u64, p: u64) -> Result<DigitExpansion> {
    check_prime(p)?;
    let mut digits = Vec::new();
    let mut rest = m;
    loop {
        digits.push(rest % p);
        rest /= p;
        if rest == 0 {
            break;
        }
    }
    Ok(DigitExpansion { base: p, digits })
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// `C(a, b) mod p` for single digits `a, b < p`.
fn digit_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let (mut num, mut den) = (1u128, 1u128);
    let pp = p as u128;
    for i in 0..b {
        num = num * ((a - i) as u128) % pp;
        den = den * ((i + 1) as u128) % pp;
    }
    // den is a product of integers in [1, p), hence invertible mod p.
    let inv = pow_mod(den as u64, p - 2, p) as u128;
    (num * inv % pp) as u64
}

/// `C(m, n) mod p` as the product of digitwise binomials of the base-`p`
/// expansions of `m` and `n`. The shorter expansion is padded with zeros;
/// a digit pair with `n_i > m_i` contributes zero.
pub fn lucas_residue(m: u64, n: u64, p: u64) -> Result<u64> {
    let top = digits_base_p(m, p)?;
    let bottom = digits_base_p(n, p)?;
    let width = top.len().max(bottom.len());
    let mut acc = 1 % p;
    for i in 0..width {
        acc = acc * digit_binom_mod(top.digit(i), bottom.digit(i), p) % p;
        if acc == 0 {
            break;
        }
    }
    Ok(acc)
}

/// Exact `C(m, n)`, zero when `n > m`.
///
/// Multiplicative formula `Π (m−n+i)/i`; every partial product is itself a
/// binomial coefficient, so each division is exact.
pub fn binom_exact(m: u64, n: u64) -> BigNat {
    if n > m {
        return BigNat::zero();
    }
    let n = n.min(m - n);
    let mut acc = BigNat::one();
    for i in 1..=n {
        acc *= m - n + i;
        acc /= i;
    }
    acc
}

/// `C(m, n) mod modulus` through the exact value.
pub fn binom_mod(m: u64, n: u64, modulus: u64) -> u64 {
    (binom_exact(m, n) % modulus)
        .to_u64()
        .expect("residue is below a u64 modulus")
}

/// Why `C(2k+1, k)` has the parity it has.
///
/// With `a_i` the binary digits of `k`, the binary digits of `2k+1` are
/// `b_0 = 1` and `b_{i+1} = a_i`. If some digit of `k` is zero, let `j` be the
/// largest such index; then `a_{j+1} = 1` and `b_{j+1} = a_j = 0`, so the Lucas
/// factor `C(b_{j+1}, a_{j+1}) = C(0, 1)` vanishes. If every digit is one the
/// two expansions dominate digitwise and the coefficient is odd.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityCertificate {
    pub k: u64,
    pub expansion_k: DigitExpansion,
    /// Largest index of a zero binary digit of `k`, present iff `verdict` is even.
    pub j: Option<usize>,
    pub verdict: Parity,
}

impl ParityCertificate {
    /// Checks the certificate's internal consistency: the digits reconstruct
    /// `k`, and `j` points at a zero digit with only ones above it.
    pub fn is_consistent(&self) -> bool {
        let digits = self.expansion_k.digits();
        if self.expansion_k.base() != 2 || self.expansion_k.value() != Some(self.k) {
            return false;
        }
        match (self.verdict, self.j) {
            (Parity::Odd, None) => digits.iter().all(|&d| d == 1),
            (Parity::Even, Some(j)) => {
                j + 1 < digits.len()
                    && digits[j] == 0
                    && digits[j + 1..].iter().all(|&d| d == 1)
                    // the vanishing Lucas factor C(b_{j+1}, a_{j+1}) = C(0, 1)
                    && self.expansion_k.digit(j + 1) == 1
            }
            _ => false,
        }
    }
}

/// Parity of the odd-graph order `C(2k+1, k)`, certified by the binary digits of `k`.
pub fn odd_graph_order_parity(k: u64) -> Result<ParityCertificate> {
    if k < 1 {
        return Err(domain!("odd graph parameter k must be at least 1, got {k}"));
    }
    let expansion_k = digits_base_p(k, 2)?;
    let j = expansion_k.digits().iter().rposition(|&d| d == 0);
    let verdict = if j.is_some() { Parity::Even } else { Parity::Odd };
    Ok(ParityCertificate {
        k,
        expansion_k,
        j,
        verdict,
    })
}

/// Whether `4 | C(2k+1, k)` for even `k > 4`.
///
/// `C(2k+1, k) = 2(2k+1)·t` with `(k+1)·t = C(2k−1, k−1)`. Since `k+1` is
/// odd, `t` is even iff `C(2(k−1)+1, k−1)` is even, which is the odd-graph
/// parity question for `k−1`.
pub fn is_multiple_of_4(k: u64) -> Result<bool> {
    if !k.is_multiple_of(2) || k <= 4 {
        return Err(domain!("mod-4 criterion needs an even k > 4, got {k}"));
    }
    Ok(odd_graph_order_parity(k - 1)?.verdict == Parity::Even)
}

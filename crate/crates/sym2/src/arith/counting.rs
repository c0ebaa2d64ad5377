//! The quadratic-congruence counts N(c) and M(c) and their Dirichlet-series identities.

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use super::{factorize, gcd, kronecker, mod_inverse, spf_table};
use crate::error::{Error, Result};

/// Direct enumeration is used up to this modulus, the closed form above it.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CountKind {
    /// x^2 = -1 (mod c), attached to discriminant -4.
    N,
    /// x^2 - x + 1 = 0 (mod c), attached to discriminant -3.
    M,
}

impl CountKind {
    pub fn discriminant(self) -> i64 {
        match self {
            CountKind::N => -4,
            CountKind::M => -3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CongruenceCount {
    pub c: u64,
    pub count: u64,
}

/// N(c) by enumeration, walking squares incrementally and using x <-> c - x.
pub fn count_n_enumerated(c: u64) -> u64 {
    assert!(c >= 1);
    if c == 1 {
        return 1;
    }
    let target = c - 1;
    let mut sq = 0u64; // x^2 mod c
    let mut half = 0u64;
    let top = (c - 1) / 2;
    for x in 1..=top {
        sq += 2 * x - 1;
        while sq >= c {
            sq -= c;
        }
        if sq == target {
            half += 1;
        }
    }
    let mut total = 2 * half;
    if c.is_multiple_of(2) {
        let h = c / 2;
        if ((h as u128 * h as u128) % c as u128) as u64 == target {
            total += 1;
        }
    }
    total
}

/// M(c) by enumeration of x^2 - x + 1 (mod c), using x <-> 1 - x.
pub fn count_m_enumerated(c: u64) -> u64 {
    assert!(c >= 1);
    if c == 1 {
        return 1;
    }
    // v(x) = x^2 - x + 1 mod c; v(x + 1) = v(x) + 2x. Start at x = 1, v = 1.
    let mut v = 1 % c;
    let mut half = 0u64;
    let top = c / 2;
    for x in 1..top {
        v += 2 * x;
        while v >= c {
            v -= c;
        }
        if v == 0 {
            half += 1;
        }
    }
    let mut total = 2 * half;
    if c % 2 == 1 {
        let h = c.div_ceil(2);
        let val = (h as u128 * h as u128 + 1 + c as u128 - h as u128) % c as u128;
        if val == 0 {
            total += 1;
        }
    }
    total
}

/// Product over p | n of (1 + chi_D(p))/2: 1 when D is a nonzero square mod every prime of n.
fn r_symbol(d: i64, primes: &[u64]) -> u64 {
    primes.iter().all(|&p| kronecker(d, p as i64) == 1) as u64
}

fn closed_from_factors(kind: CountKind, f: &[(u64, u32)]) -> u64 {
    let mut odd_primes = Vec::new();
    for &(p, e) in f {
        match (kind, p) {
            (CountKind::N, 2) if e >= 2 => return 0,
            (CountKind::N, 2) => {}
            (CountKind::M, 2) => return 0,
            (CountKind::M, 3) if e >= 2 => return 0,
            (CountKind::M, 3) => {}
            _ => odd_primes.push(p),
        }
    }
    (1u64 << odd_primes.len()) * r_symbol(kind.discriminant(), &odd_primes)
}

/// N(c) = 2^omega(n) R(-1, n) for c = 2^a n with a <= 1, else 0.
pub fn count_n_closed(c: u64) -> u64 {
    closed_from_factors(CountKind::N, &factorize(c))
}

/// M(c) = 2^omega(n) R(-3, n) for c = 3^b n with b <= 1 and gcd(n, 6) = 1, else 0.
pub fn count_m_closed(c: u64) -> u64 {
    closed_from_factors(CountKind::M, &factorize(c))
}

pub fn count_n(c: u64) -> u64 {
    if c <= ENUMERATION_LIMIT {
        count_n_enumerated(c)
    } else {
        count_n_closed(c)
    }
}

pub fn count_m(c: u64) -> u64 {
    if c <= ENUMERATION_LIMIT {
        count_m_enumerated(c)
    } else {
        count_m_closed(c)
    }
}

/// Counts for c = 1..=n_max (index 0 unused). `enumerate` picks the route.
pub fn count_table(kind: CountKind, n_max: u64, enumerate: bool) -> Vec<u64> {
    if enumerate {
        let f = match kind {
            CountKind::N => count_n_enumerated,
            CountKind::M => count_m_enumerated,
        };
        let mut out: Vec<u64> = (0..=n_max)
            .into_par_iter()
            .map(|c| if c == 0 { 0 } else { f(c) })
            .collect();
        out[0] = 0;
        out
    } else {
        let spf = spf_table(n_max as usize);
        let mut out = vec![0u64; n_max as usize + 1];
        for c in 1..=n_max as usize {
            let mut f: Vec<(u64, u32)> = Vec::new();
            let mut m = c;
            while m > 1 {
                let p = spf[m] as usize;
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                f.push((p as u64, e));
            }
            out[c] = closed_from_factors(kind, &f);
        }
        out
    }
}

/// The representative of x + x^-1 (mod c) in [1, c].
pub fn r_of(x: i64, c: u64) -> Result<u64> {
    if c == 0 {
        return Err(Error::Range("modulus must be positive".into()));
    }
    let xr = x.rem_euclid(c as i64) as u64;
    if gcd(xr, c) != 1 {
        return Err(Error::NotCoprime { x, c });
    }
    let inv = mod_inverse(xr, c).expect("unit");
    let r = (xr + inv) % c;
    Ok(if r == 0 { c } else { r })
}

/// r(x, c)/c in (0, 1].
pub fn r_ratio(x: i64, c: u64) -> Result<Rational> {
    Ok(Rational::from((r_of(x, c)?, c)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvolutionOutcome {
    pub kind: CountKind,
    pub n_max: u64,
    pub holds: bool,
    pub first_failure: Option<u64>,
}

/// Checks sum_{a^2 b = n} count(b) = sum_{d | n} chi_D(d) for all n <= n_max.
pub fn convolution_identity_check(kind: CountKind, n_max: u64) -> ConvolutionOutcome {
    let counts = count_table(kind, n_max, true);
    convolution_with_counts(kind, &counts)
}

pub(crate) fn convolution_with_counts(kind: CountKind, counts: &[u64]) -> ConvolutionOutcome {
    let n_max = counts.len() as u64 - 1;
    let n = n_max as usize;
    let mut lhs = vec![0i64; n + 1];
    let mut a = 1usize;
    while a * a <= n {
        let sq = a * a;
        for b in 1..=n / sq {
            lhs[sq * b] += counts[b] as i64;
        }
        a += 1;
    }
    let d_disc = kind.discriminant();
    let mut rhs = vec![0i64; n + 1];
    for d in 1..=n {
        let chi = kronecker(d_disc, d as i64) as i64;
        if chi != 0 {
            let mut m = d;
            while m <= n {
                rhs[m] += chi;
                m += d;
            }
        }
    }
    let first_failure = (1..=n).find(|&i| lhs[i] != rhs[i]).map(|i| i as u64);
    ConvolutionOutcome { kind, n_max, holds: first_failure.is_none(), first_failure }
}

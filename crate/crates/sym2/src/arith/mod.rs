//! Exact integer and rational arithmetic.

mod bernoulli;
mod counting;
mod kloosterman;
mod pcoeff;

pub use bernoulli::{bernoulli, bernoulli_range};
pub use counting::{
    convolution_identity_check, count_m, count_m_closed, count_m_enumerated, count_n,
    count_n_closed, count_n_enumerated, count_table, r_of, r_ratio, CongruenceCount,
    ConvolutionOutcome, CountKind, ENUMERATION_LIMIT,
};
pub use kloosterman::{kloosterman, kloosterman_residue_counts, KloostermanTable};
pub use pcoeff::p_coeff;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of x modulo c for gcd(x, c) = 1, in [0, c).
pub fn mod_inverse(x: u64, c: u64) -> Option<u64> {
    if c == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (c as i128, (x % c) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(c as i128) as u64)
}

/// Prime factorization by trial division, as (p, e) pairs in increasing p.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Primes up to and including n.
pub fn primes_up_to(n: usize) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// Smallest-prime-factor table for 0..=n.
pub fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Jacobi symbol (a/n) for odd n > 0.
fn jacobi(a: i64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut sign = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Kronecker symbol (d/n).
pub fn kronecker(d: i64, n: i64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut sign = 1;
    let mut m = n.unsigned_abs();
    if n < 0 && d < 0 {
        sign = -1;
    }
    let twos = m.trailing_zeros();
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        m >>= twos;
        let r = d.rem_euclid(8);
        if (r == 3 || r == 5) && twos % 2 == 1 {
            sign = -sign;
        }
    }
    if m == 1 {
        return sign;
    }
    sign * jacobi(d, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Integer;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 1), 1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-3, 3), 0);
        assert_eq!(kronecker(-3, 7), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(5, 0), 0);
        assert_eq!(kronecker(-1, 0), 1);
    }

    #[test]
    fn kronecker_minus3_at_two_by_residue_enumeration() {
        // (-3/2) is +1 iff -3 is a square mod 8 among odd residues; it is not.
        let squares: Vec<i64> = (1..8).step_by(2).map(|x: i64| (x * x) % 8).collect();
        let minus3 = (-3i64).rem_euclid(8);
        let expected = if squares.contains(&minus3) { 1 } else { -1 };
        assert_eq!(kronecker(-3, 2), expected);
    }

    #[test]
    fn kronecker_matches_gmp() {
        for d in -40i64..=40 {
            for n in -60i64..=60 {
                let g = Integer::from(d).kronecker(&Integer::from(n));
                assert_eq!(kronecker(d, n), g, "({d}/{n})");
            }
        }
    }

    #[test]
    fn inverses() {
        for c in 1..200u64 {
            for x in 0..c {
                match mod_inverse(x, c) {
                    Some(y) => assert_eq!((x * y) % c, 1 % c),
                    None => assert!(gcd(x, c) != 1),
                }
            }
        }
    }

    #[test]
    fn factorization_roundtrip() {
        for n in 1..3000u64 {
            let f = factorize(n);
            assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
        }
        assert_eq!(divisor_count(12), 6);
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let spf = spf_table(100);
        assert_eq!(spf[91], 7);
        assert_eq!(spf[97], 97);
    }
}

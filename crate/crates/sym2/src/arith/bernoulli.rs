use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

fn cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

fn extend(table: &mut Vec<Rational>, n: usize) {
    while table.len() <= n {
        let m = table.len();
        // sum_{j<m} C(m+1, j) B_j + (m+1) B_m = 0
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, b) in table.iter().enumerate() {
            if *b != 0 {
                acc += Rational::from(b * &binom);
            }
            binom *= (m + 1 - j) as u32;
            binom /= (j + 1) as u32;
        }
        let b = if m > 1 && m % 2 == 1 {
            Rational::new()
        } else {
            -acc / Integer::from(m + 1)
        };
        table.push(b);
    }
}

/// Exact Bernoulli number B_n with B_1 = -1/2.
pub fn bernoulli(n: u32) -> Rational {
    let mut t = cache().lock().expect("bernoulli cache");
    extend(&mut t, n as usize);
    t[n as usize].clone()
}

/// B_0..=B_n.
pub fn bernoulli_range(n: u32) -> Vec<Rational> {
    let mut t = cache().lock().expect("bernoulli cache");
    extend(&mut t, n as usize);
    t[..=n as usize].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(3), 0);
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(20), Rational::from((-174611, 330)));
    }

    #[test]
    fn recurrence_holds() {
        let b = bernoulli_range(40);
        for m in 1..40usize {
            let mut acc = Rational::new();
            for (j, bj) in b.iter().enumerate().take(m + 1) {
                acc += Rational::from(bj * Integer::from(Integer::binomial_u(m as u32 + 1, j as u32)));
            }
            assert_eq!(acc, 0, "m = {m}");
        }
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        // denominator of B_2n is the product of primes p with (p-1) | 2n
        for n in 1..30u32 {
            let b = bernoulli(2 * n);
            let mut den = Integer::from(1);
            for p in crate::arith::primes_up_to(2 * n as usize + 1) {
                if (2 * n as u64).is_multiple_of(p - 1) {
                    den *= p;
                }
            }
            assert_eq!(*b.denom(), den, "B_{}", 2 * n);
        }
    }
}

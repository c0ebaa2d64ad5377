use rug::{Integer, Rational};

use crate::error::{Error, Result};

fn mul_trunc(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}

/// Coefficient of x^(k - r - 1) in (1 - t x + m x^2)^(-r).
pub fn p_coeff(k: u32, r: u32, t: i64, m: i64) -> Result<Rational> {
    if r < 3 || r + 1 > k {
        return Err(Error::Range(format!("p_coeff needs 3 <= r <= k - 1, got k = {k}, r = {r}")));
    }
    let deg = (k - r - 1) as usize;
    let len = deg + 1;
    // 1/(1 - t x + m x^2): h_n = t h_{n-1} - m h_{n-2}
    let mut inv = vec![Integer::new(); len];
    inv[0] = Integer::from(1);
    for n in 1..len {
        let mut v = Integer::from(&inv[n - 1] * t);
        if n >= 2 {
            v -= Integer::from(&inv[n - 2] * m);
        }
        inv[n] = v;
    }
    // inv^r by binary powering
    let mut result = vec![Integer::new(); len];
    result[0] = Integer::from(1);
    let mut base = inv;
    let mut e = r;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_trunc(&result, &base, len);
        }
        e >>= 1;
        if e > 0 {
            base = mul_trunc(&base, &base, len);
        }
    }
    Ok(Rational::from(result[deg].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn examples() {
        assert_eq!(p_coeff(4, 3, 5, 7).unwrap(), 1);
        assert_eq!(p_coeff(12, 3, 0, 1).unwrap(), 15);
        assert_eq!(p_coeff(12, 3, 2, 1).unwrap(), 1287);
        assert!(p_coeff(12, 1, 0, 1).is_err());
        assert!(p_coeff(12, 13, 0, 1).is_err());
    }

    #[test]
    fn binomial_series_oracle() {
        // (1 - t x)^(-r) when m = 0: coefficient C(n + r - 1, n) t^n
        for r in [3u32, 5, 7] {
            for k in (r + 1)..(r + 12) {
                let n = k - r - 1;
                let want = Integer::from(Integer::binomial_u(n + r - 1, n)) * Integer::from(3).pow(n);
                assert_eq!(p_coeff(k, r, 3, 0).unwrap(), Rational::from(want));
            }
        }
    }
}

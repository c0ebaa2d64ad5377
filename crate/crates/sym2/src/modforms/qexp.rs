//! Exact integer q-expansions with Kronecker-substitution products.

use rug::integer::Order;
use rug::Integer;
use rug::ops::Pow;

use crate::error::{Error, Result};

/// a(0), a(1), ..., a(len - 1) of a level-one modular form of the given weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub weight: u32,
    pub coeffs: Vec<Integer>,
}

fn slot_limbs(a: &[Integer], b: &[Integer]) -> usize {
    let ba = a.iter().map(|x| x.significant_bits()).max().unwrap_or(0) as usize;
    let bb = b.iter().map(|x| x.significant_bits()).max().unwrap_or(0) as usize;
    let n = a.len().min(b.len()).max(1);
    let bits = ba + bb + (usize::BITS - n.leading_zeros()) as usize + 2;
    bits.div_ceil(64)
}

fn pack(a: &[Integer], limbs: usize) -> Integer {
    let mut pos = vec![0u64; a.len() * limbs];
    let mut neg = vec![0u64; a.len() * limbs];
    let mut any_neg = false;
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        let digits = x.as_abs().to_digits::<u64>(Order::Lsf);
        let dst = if *x < 0 {
            any_neg = true;
            &mut neg
        } else {
            &mut pos
        };
        dst[i * limbs..i * limbs + digits.len()].copy_from_slice(&digits);
    }
    let mut out = Integer::from_digits(&pos, Order::Lsf);
    if any_neg {
        out -= Integer::from_digits(&neg, Order::Lsf);
    }
    out
}

/// Truncated product of two signed integer sequences.
pub fn mul_trunc(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    if a.is_empty() || b.is_empty() || len == 0 {
        return vec![Integer::new(); len];
    }
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    let limbs = slot_limbs(a, b);
    let slot_bits = (limbs * 64) as u32;
    let mut prod = pack(a, limbs) * pack(b, limbs);
    // bias every slot by 2^(slot_bits - 1) so the packed digits carry no borrows
    let mut bias = vec![0u64; len * limbs];
    for i in 0..len {
        bias[i * limbs + limbs - 1] = 1u64 << 63;
    }
    prod += Integer::from_digits(&bias, Order::Lsf);
    prod.keep_bits_mut(slot_bits * len as u32);
    let digits = prod.to_digits::<u64>(Order::Lsf);
    let half = Integer::from(1) << (slot_bits - 1);
    (0..len)
        .map(|i| {
            let lo = (i * limbs).min(digits.len());
            let hi = ((i + 1) * limbs).min(digits.len());
            Integer::from_digits(&digits[lo..hi], Order::Lsf) - &half
        })
        .collect()
}

impl QExpansion {
    pub fn new(weight: u32, coeffs: Vec<Integer>) -> Self {
        QExpansion { weight, coeffs }
    }

    /// Number of stored coefficients a(0..len).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, n: usize) -> &Integer {
        &self.coeffs[n]
    }

    pub fn is_cusp(&self) -> bool {
        self.coeffs.first().is_none_or(|c| *c == 0)
    }

    pub fn mul(&self, other: &QExpansion) -> QExpansion {
        let len = self.len().min(other.len());
        QExpansion::new(self.weight + other.weight, mul_trunc(&self.coeffs, &other.coeffs, len))
    }

    pub fn pow(&self, e: u32) -> QExpansion {
        let mut out = QExpansion::one(self.len());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn one(len: usize) -> QExpansion {
        let mut c = vec![Integer::new(); len];
        if len > 0 {
            c[0] = Integer::from(1);
        }
        QExpansion::new(0, c)
    }

    pub fn add(&self, other: &QExpansion) -> Result<QExpansion> {
        self.combine(other, |a, b| Integer::from(a + b))
    }

    pub fn sub(&self, other: &QExpansion) -> Result<QExpansion> {
        self.combine(other, |a, b| Integer::from(a - b))
    }

    fn combine(&self, other: &QExpansion, op: impl Fn(&Integer, &Integer) -> Integer) -> Result<QExpansion> {
        if self.weight != other.weight {
            return Err(Error::Domain {
                func: "QExpansion",
                detail: format!("weights {} and {} differ", self.weight, other.weight),
            });
        }
        let len = self.len().min(other.len());
        let c = (0..len).map(|i| op(&self.coeffs[i], &other.coeffs[i])).collect();
        Ok(QExpansion::new(self.weight, c))
    }

    pub fn scale(&self, s: &Integer) -> QExpansion {
        QExpansion::new(self.weight, self.coeffs.iter().map(|c| Integer::from(c * s)).collect())
    }

    /// Exact division of every coefficient; fails when some coefficient is not divisible.
    pub fn div_exact(&self, d: &Integer) -> Result<QExpansion> {
        let mut out = Vec::with_capacity(self.len());
        for c in &self.coeffs {
            if !c.is_divisible(d) {
                return Err(Error::Domain { func: "QExpansion", detail: format!("{c} not divisible by {d}") });
            }
            out.push(Integer::from(c.div_exact_ref(d)));
        }
        Ok(QExpansion::new(self.weight, out))
    }

    pub fn truncate(&self, len: usize) -> QExpansion {
        QExpansion::new(self.weight, self.coeffs[..len.min(self.len())].to_vec())
    }
}

/// σ_r(n) for n < len by a divisor sieve.
fn sigma_table(r: u32, len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    for d in 1..len {
        let p = Integer::from(d).pow(r);
        let mut m = d;
        while m < len {
            out[m] += &p;
            m += d;
        }
    }
    out
}

/// E4 = 1 + 240 Σ σ3(n) q^n and E6 = 1 - 504 Σ σ5(n) q^n with coefficients a(0..len).
pub fn eisenstein(k: u32, len: usize) -> Result<QExpansion> {
    let (r, c) = match k {
        4 => (3, 240i32),
        6 => (5, -504),
        _ => return Err(Error::Domain { func: "eisenstein", detail: format!("weight {k} not in {{4, 6}}") }),
    };
    let mut coeffs = sigma_table(r, len);
    for x in coeffs.iter_mut().skip(1) {
        *x *= c;
    }
    if len > 0 {
        coeffs[0] = Integer::from(1);
    }
    Ok(QExpansion::new(k, coeffs))
}

/// Δ = q Π (1 - q^n)^24 through Euler's pentagonal series.
pub fn delta(len: usize) -> QExpansion {
    let mut euler = vec![Integer::new(); len];
    let mut m: i64 = 0;
    loop {
        let mut progressed = false;
        for j in [m, -m - 1] {
            let e = j * (3 * j - 1) / 2;
            if (e as usize) < len && e >= 0 {
                let sign = if j.rem_euclid(2) == 0 { 1 } else { -1 };
                euler[e as usize] = Integer::from(sign);
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
        m += 1;
    }
    let eta24 = QExpansion::new(0, euler).pow(24);
    let mut c = vec![Integer::new(); len];
    for n in 1..len {
        c[n] = eta24.coeffs[n - 1].clone();
    }
    QExpansion::new(12, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
        let mut out = vec![Integer::new(); len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < len {
                    out[i + j] += Integer::from(x * y);
                }
            }
        }
        out
    }

    #[test]
    fn kronecker_product_matches_schoolbook() {
        let a: Vec<Integer> = (0..37).map(|i| Integer::from((i * 7919 % 101) as i64 - 50) << (i % 90)).collect();
        let b: Vec<Integer> = (0..29).map(|i| Integer::from(-((i * 104729 % 97) as i64) + 40) << (i % 70)).collect();
        for len in [1, 10, 29, 40] {
            assert_eq!(mul_trunc(&a, &b, len), naive(&a, &b, len));
        }
    }

    #[test]
    fn eisenstein_examples() {
        let e4 = eisenstein(4, 10).unwrap();
        let e6 = eisenstein(6, 10).unwrap();
        assert_eq!(*e4.coeff(1), 240);
        assert_eq!(*e6.coeff(2), -16632);
        let diff = e4.pow(3).sub(&e6.pow(2)).unwrap();
        assert_eq!(*diff.coeff(0), 0);
        assert_eq!(*diff.coeff(1), 1728);
        assert!(eisenstein(8, 10).is_err());
    }

    #[test]
    fn delta_two_ways() {
        let n = 60;
        let d = delta(n);
        let tau: Vec<i64> = vec![0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643];
        for (i, t) in tau.iter().enumerate() {
            assert_eq!(*d.coeff(i), *t);
        }
        let e4 = eisenstein(4, n).unwrap();
        let e6 = eisenstein(6, n).unwrap();
        let other = e4.pow(3).sub(&e6.pow(2)).unwrap().div_exact(&Integer::from(1728)).unwrap();
        assert_eq!(other.coeffs, d.coeffs);
        assert!(d.is_cusp());
    }
}

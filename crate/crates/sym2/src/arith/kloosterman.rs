use rug::Float;

use super::{gcd, mod_inverse};
use crate::mp::pi;

/// Units x mod c paired with their inverses.
fn unit_pairs(c: u64) -> Vec<(u64, u64)> {
    (0..c)
        .filter(|&x| gcd(x, c) == 1)
        .map(|x| (x, mod_inverse(x, c).expect("unit")))
        .collect()
}

fn counts_from_pairs(m: i64, n: i64, c: u64, pairs: &[(u64, u64)]) -> Vec<u32> {
    let mm = m.rem_euclid(c as i64) as u64;
    let nn = n.rem_euclid(c as i64) as u64;
    let mut counts = vec![0u32; c as usize];
    for &(x, xb) in pairs {
        let r = ((mm as u128 * x as u128 + nn as u128 * xb as u128) % c as u128) as usize;
        counts[r] += 1;
    }
    counts
}

/// How often each residue r occurs as m x + n x^-1 (mod c) over units x.
pub fn kloosterman_residue_counts(m: i64, n: i64, c: u64) -> Vec<u32> {
    counts_from_pairs(m, n, c, &unit_pairs(c))
}

/// Per-modulus data for repeated Kloosterman sums: unit inverses and cos(2 pi r / c).
pub struct KloostermanTable {
    c: u64,
    pairs: Vec<(u64, u64)>,
    cos: Vec<Float>,
}

impl KloostermanTable {
    pub fn new(c: u64, prec: u32) -> Self {
        assert!(c >= 1);
        let pairs = unit_pairs(c);
        let step = pi(prec + 16) * 2u32 / c;
        let half = (c / 2) as usize;
        let mut cos: Vec<Float> = (0..=half)
            .map(|r| Float::with_val(prec, (step.clone() * r as u32).cos()))
            .collect();
        for r in half + 1..c as usize {
            let v = cos[c as usize - r].clone();
            cos.push(v);
        }
        Self { c, pairs, cos }
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    /// S(m, n; c). The residue counts are symmetric under r -> -r, so the sum is real.
    pub fn sum(&self, m: i64, n: i64) -> Float {
        let counts = counts_from_pairs(m, n, self.c, &self.pairs);
        let prec = self.cos[0].prec();
        let mut acc = Float::new(prec);
        for (r, &k) in counts.iter().enumerate() {
            if k != 0 {
                acc += Float::with_val(prec, &self.cos[r] * k);
            }
        }
        acc
    }
}

/// Kloosterman sum S(m, n; c) = sum over units x of e((m x + n x^-1)/c).
pub fn kloosterman(m: i64, n: i64, c: u64, prec: u32) -> Float {
    KloostermanTable::new(c, prec).sum(m, n)
}


use crate::error::{Error, Result};
use crate::modforms::qexp::{delta, eisenstein, QExpansion};

/// dim S_k for level one.
pub fn cusp_dimension(k: u32) -> u32 {
    if k % 2 == 1 || k < 12 {
        return 0;
    }
    let base = k / 12;
    if k % 12 == 2 {
        base - 1
    } else {
        base
    }
}

/// Echelon basis g_1..g_d of S_k with g_i = q^i + O(q^{d+1}), coefficients a(0..len).
pub fn miller_basis(k: u32, len: usize) -> Result<Vec<QExpansion>> {
    let d = cusp_dimension(k) as usize;
    if d == 0 {
        return Err(Error::DimensionZero(k));
    }
    let len = len.max(d + 2);
    let rest = k - 12 * d as u32;
    let e4 = eisenstein(4, len)?;
    let e6 = eisenstein(6, len)?;
    // rest ∈ {0, 4, 6, 8, 10, 14}
    let tail = match rest {
        0 => QExpansion::one(len),
        4 => e4.clone(),
        6 => e6.clone(),
        8 => e4.pow(2),
        10 => e4.mul(&e6),
        14 => e4.pow(2).mul(&e6),
        _ => unreachable!("weight {k} leaves remainder {rest}"),
    };
    let dl = delta(len);
    let e6sq = e6.pow(2);
    let mut rows: Vec<QExpansion> = (1..=d)
        .map(|j| dl.pow(j as u32).mul(&e6sq.pow((d - j) as u32)).mul(&tail))
        .collect();
    for r in rows.iter_mut() {
        r.weight = k;
    }
    // rows[j-1] = q^j + O(q^{j+1}); clear the entries above the diagonal
    for j in (0..d).rev() {
        for i in 0..j {
            let c = rows[i].coeffs[j + 1].clone();
            if c != 0 {
                let sub = rows[j].scale(&c);
                rows[i] = rows[i].sub(&sub)?;
            }
        }
    }
    for (i, r) in rows.iter().enumerate() {
        debug_assert!((1..=d).all(|n| r.coeffs[n] == u32::from(n == i + 1)));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let want = [(12, 1), (14, 0), (16, 1), (24, 2), (26, 1), (36, 3), (38, 2), (60, 5)];
        for (k, d) in want {
            assert_eq!(cusp_dimension(k), d, "k = {k}");
        }
    }

    #[test]
    fn weight_12_is_delta() {
        let b = miller_basis(12, 10).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(*b[0].coeff(2), -24);
        assert_eq!(*b[0].coeff(3), 252);
    }

    #[test]
    fn echelon_shape() {
        for k in [24u32, 36, 48, 60] {
            let b = miller_basis(k, 30).unwrap();
            let d = b.len();
            for (i, g) in b.iter().enumerate() {
                assert_eq!(*g.coeff(0), 0);
                for n in 1..=d {
                    assert_eq!(*g.coeff(n), u32::from(n == i + 1), "k = {k}, g_{}, n = {n}", i + 1);
                }
            }
        }
        assert_eq!(miller_basis(26, 10).unwrap().len(), 1);
        assert!(matches!(miller_basis(14, 10), Err(Error::DimensionZero(14))));
    }
}

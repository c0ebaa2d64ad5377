//! Hecke eigenforms from the exact T_p matrix on the echelon basis.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modforms::basis::miller_basis;
use crate::modforms::qexp::QExpansion;
use crate::mp::log2_abs;
use crate::precision::PrecisionPolicy;

#[derive(Clone, Debug)]
pub struct HeckeEigenform {
    pub k: u32,
    /// λ_f(n) for n < lambda.len(); index 0 holds 0.
    pub lambda: Vec<Float>,
    /// Eigenvalue of the Hecke operator used for the split, unnormalized.
    pub theta: Float,
    pub hecke_prime: u64,
    pub eigen_residual: f64,
    pub weight: Option<Float>,
}

impl HeckeEigenform {
    pub fn lambda(&self, n: usize) -> &Float {
        &self.lambda[n]
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.len() <= 1
    }

    pub fn prec(&self) -> u32 {
        self.lambda[1].prec()
    }

    pub fn weight(&self) -> Result<&Float> {
        self.weight.as_ref().ok_or_else(|| Error::Config(format!("weights not solved for k = {}", self.k)))
    }
}

/// Serializable summary of an eigenform for reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenformSummary {
    pub k: u32,
    pub theta: String,
    pub eigen_residual: f64,
    pub weight: Option<String>,
}

/// M_ij = g_i(pj) + p^{k-1} g_i(j/p): the matrix of T_p acting on row vectors of the basis.
pub fn hecke_matrix(basis: &[QExpansion], p: u64, k: u32) -> Vec<Vec<Integer>> {
    let d = basis.len();
    let pk = Integer::from(p).pow(k - 1);
    let p = p as usize;
    basis
        .iter()
        .map(|g| {
            (1..=d)
                .map(|j| {
                    let mut v = g.coeff(p * j).clone();
                    if j % p == 0 {
                        v += Integer::from(&pk * g.coeff(j / p));
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Monic characteristic polynomial, coefficients from the constant term up.
pub fn charpoly(m: &[Vec<Integer>]) -> Vec<Integer> {
    let n = m.len();
    let mut c = vec![Integer::new(); n + 1];
    c[n] = Integer::from(1);
    let mut mk = vec![vec![Integer::new(); n]; n];
    for step in 1..=n {
        // mk <- m * mk + c[n - step + 1] I
        let mut next = vec![vec![Integer::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Integer::new();
                for l in 0..n {
                    s += Integer::from(&m[i][l] * &mk[l][j]);
                }
                if i == j {
                    s += &c[n - step + 1];
                }
                next[i][j] = s;
            }
        }
        mk = next;
        let mut tr = Integer::new();
        for i in 0..n {
            for l in 0..n {
                tr += Integer::from(&m[i][l] * &mk[l][i]);
            }
        }
        c[n - step] = -(tr / step as u32);
    }
    c
}

fn eval_rat(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::new();
    for c in p.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let top = r.len() - 1;
        let q = Rational::from(&r[top] / &lead);
        for i in 0..=db {
            let t = Rational::from(&q * &b[i]);
            r[top - db + i] -= t;
        }
        r.pop();
        while r.last().is_some_and(|x| *x == 0) {
            r.pop();
        }
    }
    r
}

struct Sturm {
    seq: Vec<Vec<Rational>>,
}

impl Sturm {
    fn new(p: &[Integer]) -> Sturm {
        let p0: Vec<Rational> = p.iter().map(Rational::from).collect();
        let p1: Vec<Rational> = (1..p0.len()).map(|i| Rational::from(&p0[i] * i as u32)).collect();
        let mut seq = vec![p0, p1];
        loop {
            let n = seq.len();
            if seq[n - 1].len() <= 1 {
                break;
            }
            let r: Vec<Rational> = poly_rem(&seq[n - 2], &seq[n - 1]).into_iter().map(|x| -x).collect();
            if r.is_empty() {
                break;
            }
            seq.push(r);
        }
        Sturm { seq }
    }

    /// The last element is a nonzero constant iff the polynomial is squarefree.
    fn squarefree(&self) -> bool {
        self.seq.last().is_some_and(|l| l.len() == 1 && l[0] != 0)
    }

    fn changes(&self, x: &Rational) -> usize {
        let mut last = 0i32;
        let mut count = 0;
        for p in &self.seq {
            let v = eval_rat(p, x);
            let s = v.cmp0() as i32;
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }
}

/// Distinct real roots of a squarefree integer polynomial, ascending, to `bits` bits.
fn real_roots(p: &[Integer], bits: u32) -> Result<Vec<Float>> {
    let deg = p.len() - 1;
    let sturm = Sturm::new(p);
    if !sturm.squarefree() {
        return Err(Error::RepeatedEigenvalue(0));
    }
    // Cauchy bound
    let lead = p[deg].clone().abs();
    let mut bound = Integer::from(1);
    for c in &p[..deg] {
        let q = Integer::from(c.abs_ref()) / &lead + 1u32;
        if q > bound {
            bound = q;
        }
    }
    bound += 1u32;
    let mut stack = vec![(Rational::from(-bound.clone()), Rational::from(bound))];
    let mut intervals = Vec::new();
    while let Some((a, b)) = stack.pop() {
        let n = sturm.changes(&a) - sturm.changes(&b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            intervals.push((a, b));
            continue;
        }
        let mid = Rational::from(&a + &b) / 2u32;
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    if intervals.len() != deg {
        return Err(Error::Precision { func: "hecke_eigenforms", detail: "complex eigenvalues of a Hecke matrix".into() });
    }
    intervals.sort_by(|x, y| x.0.cmp(&y.0));
    let coef_bits = p.iter().map(|c| c.significant_bits()).max().unwrap_or(1);
    let wp = bits + coef_bits + 64;
    let eval_f = |x: &Float| {
        let mut acc = Float::new(wp);
        for c in p.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    };
    let mut roots = Vec::with_capacity(deg);
    for (a, b) in intervals {
        // (a, b] holds one root; b itself may be the root
        if eval_rat(p.iter().map(Rational::from).collect::<Vec<_>>().as_slice(), &b) == 0 {
            roots.push(Float::with_val(bits, &b));
            continue;
        }
        let mut lo = Float::with_val(wp, &a);
        let mut hi = Float::with_val(wp, &b);
        let s_hi = eval_f(&hi).cmp0();
        let width = log2_abs(&Float::with_val(wp, &hi - &lo));
        let iters = (width + bits as f64 + 8.0).ceil().max(1.0) as u32;
        for _ in 0..iters {
            let mid = Float::with_val(wp, &lo + &hi) / 2u32;
            let s = eval_f(&mid).cmp0();
            if s == s_hi {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        roots.push(Float::with_val(bits, (lo + hi) / 2u32));
    }
    Ok(roots)
}

/// Solve (M^T - θ) c = 0 with c_1 = 1.
fn eigenvector(m: &[Vec<Integer>], theta: &Float, prec: u32) -> Result<Vec<Float>> {
    let d = m.len();
    if d == 1 {
        return Ok(vec![Float::with_val(prec, 1)]);
    }
    // equation j: Σ_i (M_ij - θ δ_ij) c_i = 0; unknowns c_2..c_d from equations j = 2..d
    let n = d - 1;
    let mut a = vec![vec![Float::new(prec); n + 1]; n];
    for (r, j) in (1..d).enumerate() {
        for (col, i) in (1..d).enumerate() {
            let mut v = Float::with_val(prec, &m[i][j]);
            if i == j {
                v -= theta;
            }
            a[r][col] = v;
        }
        let mut rhs = Float::with_val(prec, &m[0][j]);
        rhs = -rhs;
        a[r][n] = rhs;
    }
    let sol = gauss_solve(a, prec).ok_or(Error::SingularSystem(d as u32))?;
    let mut c = vec![Float::with_val(prec, 1)];
    c.extend(sol);
    Ok(c)
}

/// Gaussian elimination with partial pivoting on an augmented n × (n+1) system.
pub(crate) fn gauss_solve(mut a: Vec<Vec<Float>>, prec: u32) -> Option<Vec<Float>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| {
            a[x][col].clone().abs().partial_cmp(&a[y][col].clone().abs()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        for r in (col + 1)..n {
            let f = Float::with_val(prec, &a[r][col] / &a[col][col]);
            for c in col..=n {
                let t = Float::with_val(prec, &f * &a[col][c]);
                a[r][c] -= t;
            }
        }
    }
    let mut x = vec![Float::new(prec); n];
    for r in (0..n).rev() {
        let mut s = a[r][n].clone();
        for c in (r + 1)..n {
            s -= Float::with_val(prec, &a[r][c] * &x[c]);
        }
        x[r] = s / &a[r][r];
    }
    Some(x)
}

fn residual(m: &[Vec<Integer>], theta: &Float, c: &[Float], prec: u32) -> f64 {
    let d = m.len();
    let mut num = Float::new(prec);
    let mut den = Float::new(prec);
    for j in 0..d {
        let mut s = Float::with_val(prec, -(Float::with_val(prec, theta * &c[j])));
        for i in 0..d {
            s += Float::with_val(prec, &c[i] * &m[i][j]);
        }
        num += s.square();
        den += Float::with_val(prec, c[j].square_ref());
    }
    (num / den).sqrt().to_f64()
}

/// Normalized eigenforms of weight k with λ_f(n) for n < len.
pub fn hecke_eigenforms(k: u32, len: usize, policy: &PrecisionPolicy) -> Result<Vec<HeckeEigenform>> {
    let len = len.max(2);
    let basis = miller_basis(k, len.max(3 * crate::modforms::cusp_dimension(k) as usize + 2))?;
    eigenforms_from_basis(k, &basis, len, policy)
}

pub fn eigenforms_from_basis(k: u32, basis: &[QExpansion], len: usize, policy: &PrecisionPolicy) -> Result<Vec<HeckeEigenform>> {
    let d = basis.len();
    let bits = policy.bits();
    let mut last_err = None;
    for p in [2u64, 3] {
        if basis[0].len() <= p as usize * d {
            break;
        }
        let m = hecke_matrix(basis, p, k);
        let poly = charpoly(&m);
        let entry_bits = m.iter().flatten().map(|x| x.significant_bits()).max().unwrap_or(1);
        let wp = bits + 2 * entry_bits + 64;
        let thetas = match real_roots(&poly, wp) {
            Ok(t) => t,
            Err(Error::RepeatedEigenvalue(_)) => {
                last_err = Some(Error::RepeatedEigenvalue(k));
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut out = Vec::with_capacity(d);
        for theta in thetas {
            let c = eigenvector(&m, &theta, wp)?;
            let res = residual(&m, &theta, &c, wp);
            if res > 1e-25 {
                return Err(Error::Precision { func: "hecke_eigenforms", detail: format!("eigen-residual {res:e} at k = {k}") });
            }
            let lambda = normalized_coefficients(k, basis, &c, len, bits);
            out.push(HeckeEigenform {
                k,
                lambda,
                theta: Float::with_val(bits, &theta),
                hecke_prime: p,
                eigen_residual: res,
                weight: None,
            });
        }
        return Ok(out);
    }
    Err(last_err.unwrap_or(Error::RepeatedEigenvalue(k)))
}

/// λ(n) = Σ_i c_i g_i(n) / n^{(k-1)/2}, with precision raised for the cancellation in the sum.
fn normalized_coefficients(k: u32, basis: &[QExpansion], c: &[Float], len: usize, bits: u32) -> Vec<Float> {
    let len = len.min(basis[0].len());
    let half = (k - 1) as f64 / 2.0;
    let c_bits = c.iter().map(|x| log2_abs(x).max(0.0)).fold(0.0, f64::max);
    let mut excess = 0.0f64;
    for g in basis {
        for n in 1..len {
            let b = g.coeff(n).significant_bits() as f64;
            excess = excess.max(b - half * (n as f64).log2());
        }
    }
    let wp = bits + (excess + c_bits).max(0.0).ceil() as u32 + 32;
    let cw: Vec<Float> = c.iter().map(|x| Float::with_val(wp, x)).collect();
    let exact = basis.len() == 1;
    let mut lambda = Vec::with_capacity(len);
    lambda.push(Float::new(bits));
    for n in 1..len {
        let mut a = Float::new(wp);
        if exact {
            a += basis[0].coeff(n);
        } else {
            for (ci, g) in cw.iter().zip(basis) {
                a += Float::with_val(wp, ci * g.coeff(n));
            }
        }
        // n^{(k-1)/2} = n^{(k-2)/2} √n
        let nf = Float::with_val(wp, n);
        let scale = Float::with_val(wp, (&nf).pow((k - 2) / 2)) * nf.sqrt();
        lambda.push(Float::with_val(bits, a / scale));
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn charpoly_small() {
        let m = vec![vec![Integer::from(2), Integer::from(1)], vec![Integer::from(1), Integer::from(3)]];
        let c = charpoly(&m);
        // x^2 - 5x + 5
        assert_eq!(c, vec![Integer::from(5), Integer::from(-5), Integer::from(1)]);
        let r = real_roots(&c, 100).unwrap();
        let s5 = 5f64.sqrt();
        assert!((r[0].to_f64() - (5.0 - s5) / 2.0).abs() < 1e-15);
        assert!((r[1].to_f64() - (5.0 + s5) / 2.0).abs() < 1e-15);
        let sq = vec![Integer::from(1), Integer::from(-2), Integer::from(1)];
        assert!(matches!(real_roots(&sq, 100), Err(Error::RepeatedEigenvalue(_))));
    }

    #[test]
    fn delta_eigenvalue() {
        let f = hecke_eigenforms(12, 20, &pol()).unwrap();
        assert_eq!(f.len(), 1);
        let want = -24.0 * 2f64.powf(-5.5);
        assert!((f[0].lambda(2).to_f64() - want).abs() < 1e-15);
        assert_eq!(f[0].theta.to_f64(), -24.0);
    }

    #[test]
    fn weight_24_trace() {
        let basis = miller_basis(24, 20).unwrap();
        let m = hecke_matrix(&basis, 2, 24);
        assert_eq!(Integer::from(&m[0][0] + &m[1][1]), 1080);
        let f = hecke_eigenforms(24, 20, &pol()).unwrap();
        let tr = Float::with_val(200, &f[0].theta + &f[1].theta);
        assert!((tr.to_f64() - 1080.0).abs() < 1e-20);
    }

    #[test]
    fn multiplicativity_and_deligne() {
        for k in [24u32, 36, 50, 60] {
            let forms = hecke_eigenforms(k, 200, &pol()).unwrap();
            for f in &forms {
                assert!(f.eigen_residual <= 1e-25);
                assert_eq!(*f.lambda(1), 1);
                for m in 1..14usize {
                    for n in 1..14usize {
                        let g = crate::arith::gcd(m as u64, n as u64) as usize;
                        let mut rhs = Float::new(200);
                        for dd in 1..=g {
                            if g.is_multiple_of(dd) {
                                rhs += f.lambda(m * n / (dd * dd));
                            }
                        }
                        let lhs = Float::with_val(200, f.lambda(m) * f.lambda(n));
                        let err = Float::with_val(200, &lhs - &rhs).abs().to_f64();
                        assert!(err <= 1e-20 * rhs.to_f64().abs().max(1.0), "k = {k} m = {m} n = {n}");
                    }
                }
                for p in primes_up_to(199) {
                    assert!(f.lambda(p as usize).to_f64().abs() <= 2.0 + 1e-10);
                }
            }
        }
    }
}

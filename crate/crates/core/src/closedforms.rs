//! Explicit formulas for the triangles, and the special numbers they use.

use std::cell::RefCell;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fps::TruncatedSeries;
use crate::polyring::{int, pow_rational_int, BigRational, LaurentPoly, Monomial, VariableId};

/// Memo tables for factorials, binomials, Stirling numbers and `E_k(0)`.
///
/// Meant to be owned by one thread; the free functions of this module share
/// a thread-local instance.
#[derive(Default, Debug)]
pub struct SpecialCache {
    factorials: Vec<BigInt>,
    // row n holds S(n, 0..=n)
    stirling: Vec<Vec<BigInt>>,
    euler: Vec<BigRational>,
}

impl SpecialCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn factorial(&mut self, n: usize) -> BigInt {
        if self.factorials.is_empty() {
            self.factorials.push(BigInt::one());
        }
        while self.factorials.len() <= n {
            let k = self.factorials.len();
            let next = &self.factorials[k - 1] * BigInt::from(k);
            self.factorials.push(next);
        }
        self.factorials[n].clone()
    }

    pub fn binomial(&mut self, n: usize, k: usize) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        let num = self.factorial(n);
        num / (self.factorial(k) * self.factorial(n - k))
    }

    /// `S(n,k)`, the number of partitions of an `n`-set into `k` blocks.
    pub fn stirling2(&mut self, n: usize, k: usize) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        if self.stirling.is_empty() {
            self.stirling.push(vec![BigInt::one()]);
        }
        while self.stirling.len() <= n {
            let prev = self.stirling.last().expect("row 0 present");
            let m = prev.len();
            let row = (0..=m)
                .map(|j| {
                    let stay = prev.get(j).map(|s| s * BigInt::from(j)).unwrap_or_default();
                    let step = if j > 0 { prev[j - 1].clone() } else { BigInt::zero() };
                    stay + step
                })
                .collect();
            self.stirling.push(row);
        }
        self.stirling[n][k].clone()
    }

    /// `E_k(0)`, read off `2/(e^t + 1) = sum_k E_k(0) t^k / k!`.
    pub fn euler_at_zero(&mut self, k: usize) -> BigRational {
        if self.euler.len() <= k {
            // recompute with headroom so repeated calls stay cheap
            let order = (k + 1).max(2 * self.euler.len());
            self.euler = euler_zero_series(order);
        }
        self.euler[k].clone()
    }
}

thread_local! {
    static CACHE: RefCell<SpecialCache> = RefCell::new(SpecialCache::new());
}

fn with_cache<T>(f: impl FnOnce(&mut SpecialCache) -> T) -> T {
    CACHE.with(|c| f(&mut c.borrow_mut()))
}

fn euler_zero_series(order: usize) -> Vec<BigRational> {
    let denom = TruncatedSeries::exp_linear(&int(1), order).add(&TruncatedSeries::one(order));
    denom
        .inverse()
        .expect("constant term 2 is invertible")
        .scale(&int(2))
        .egf_coeffs()
}

pub fn factorial(n: usize) -> BigInt {
    with_cache(|c| c.factorial(n))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    with_cache(|c| c.binomial(n, k))
}

pub fn stirling2(n: usize, k: usize) -> BigInt {
    with_cache(|c| c.stirling2(n, k))
}

pub fn euler_at_zero(k: usize) -> BigRational {
    with_cache(|c| c.euler_at_zero(k))
}

fn q(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `B_n(lambda) = sum_k S(n,k) lambda^k`.
pub fn bell_polynomial(n: usize, lambda: &BigRational) -> BigRational {
    (0..=n)
        .map(|k| q(stirling2(n, k)) * pow_rational_int(lambda, k as i64))
        .sum()
}

/// [`bell_polynomial`] at a polynomial argument.
pub fn bell_polynomial_poly(n: usize, lambda: &LaurentPoly) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    let mut power = LaurentPoly::one();
    for k in 0..=n {
        acc += &power.scale(&q(stirling2(n, k)));
        power = &power * lambda;
    }
    acc
}

/// `(x|a)^(k) = x (x+a) ... (x+(k-1)a)`; the empty product is 1.
pub fn rising_step(x: &BigRational, a: &BigRational, k: usize) -> BigRational {
    (0..k).map(|i| x + a * int(i as i64)).product()
}

/// `A_{m,r}(n,k) = sum_{j=0}^k (-1)^j C(n+1,j) (m(k-j)+r)^n`, with `0^0 = 1`.
pub fn a_mr_explicit(m: i64, r: i64, n: usize, k: usize) -> BigInt {
    (0..=k)
        .map(|j| {
            let base = BigInt::from(m * (k - j) as i64 + r);
            let term = binomial(n + 1, j) * num_traits::pow(base, n);
            if j.is_odd() {
                -term
            } else {
                term
            }
        })
        .sum()
}

/// `F(n,k) = 1/(a1^k k!) sum_j (-1)^(k-j) C(k,j) prod_{r=1}^n (a0 + a1 j + r a2)`.
pub fn f_gram_explicit(a0: i64, a1: i64, a2: i64, n: usize, k: usize) -> Result<BigRational> {
    if a1 == 0 {
        return Err(Error::ZeroA1);
    }
    let sum: BigInt = (0..=k)
        .map(|j| {
            let prod: BigInt = (1..=n as i64)
                .map(|r| BigInt::from(a0 + a1 * j as i64 + r * a2))
                .product();
            let term = binomial(k, j) * prod;
            if (k - j).is_odd() {
                -term
            } else {
                term
            }
        })
        .sum();
    let denom = num_traits::pow(BigInt::from(a1), k) * factorial(k);
    Ok(BigRational::new(sum, denom))
}

/// Triangle with `b2 = 0`: `(b0+b1 | b1)^(k) F(n,k)`, i.e. the prefactor
/// `prod_{i=1}^k (b0 + b1 i)`.
#[allow(clippy::too_many_arguments)]
pub fn t_b2zero_explicit(a0: i64, a1: i64, a2: i64, b0: i64, b1: i64, n: usize, k: usize) -> Result<BigRational> {
    if a1 == 0 {
        return Err(Error::ZeroA1);
    }
    if a2 == 0 {
        return Err(Error::ZeroA2);
    }
    let prefactor = rising_step(&int(b0 + b1), &int(b1), k);
    Ok(prefactor * f_gram_explicit(a0, a1, a2, n, k)?)
}

/// `F(n,k) = sum_{j=k}^n C(n,j) a0^(n-j) a1^(j-k) S(j,k)` for `a2 = 0`.
pub fn f_a2zero_explicit(a0: i64, a1: i64, n: usize, k: usize) -> BigRational {
    (k..=n)
        .map(|j| {
            q(binomial(n, j))
                * pow_rational_int(&int(a0), (n - j) as i64)
                * pow_rational_int(&int(a1), (j - k) as i64)
                * q(stirling2(j, k))
        })
        .sum()
}

/// The formal symbol used by [`touchard_check`].
pub fn alpha() -> VariableId {
    VariableId::new("alpha")
}

/// Both sides of `sum_k F(n,k) alpha^k = sum_k C(n,k) a1^k a0^(n-k) B_k(alpha/a1)`
/// as polynomials in `alpha`, with `F` from [`f_a2zero_explicit`].
pub fn touchard_check(a0: i64, a1: i64, n: usize) -> Result<(LaurentPoly, LaurentPoly)> {
    if a1 == 0 {
        return Err(Error::ZeroA1);
    }
    let al = alpha();
    let lhs = LaurentPoly::from_terms(
        (0..=n).map(|k| (Monomial::var_pow(&al, k as i64), f_a2zero_explicit(a0, a1, n, k))),
    );
    let lambda = LaurentPoly::var(&al).scale(&BigRational::new(1.into(), a1.into()));
    let mut rhs = LaurentPoly::zero();
    for k in 0..=n {
        let c = q(binomial(n, k))
            * pow_rational_int(&int(a1), k as i64)
            * pow_rational_int(&int(a0), (n - k) as i64);
        rhs += &bell_polynomial_poly(k, &lambda).scale(&c);
    }
    Ok((lhs, rhs))
}

/// Row sum for `a1 = 0, b = 1`: `a2^n alpha (alpha+1) ... (alpha+n-1)` with
/// `alpha = (1 + a0 + a2)/a2`, which is `prod_{j=1}^n (1 + a0 + a2 j)`.
pub fn witn1_rowsum(a0: i64, a2: i64, n: usize) -> Result<BigRational> {
    if a2 == 0 {
        return Err(Error::ZeroA2);
    }
    let a2q = int(a2);
    let alpha = BigRational::new((1 + a0 + a2).into(), a2.into());
    Ok(rising_step(&alpha, &int(1), n) * pow_rational_int(&a2q, n as i64))
}

/// `2^n sum_k C(n,k) m^k E_k(0) r^(n-k)`, the alternating row sum of `A_{m,r}`.
pub fn whitney_alternating_sum(m: i64, r: i64, n: usize) -> BigRational {
    let sum: BigRational = (0..=n)
        .map(|k| {
            q(binomial(n, k))
                * pow_rational_int(&int(m), k as i64)
                * euler_at_zero(k)
                * pow_rational_int(&int(r), (n - k) as i64)
        })
        .sum();
    sum * pow_rational_int(&int(2), n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational;
    use crate::triangles::{recurrence_triangle, whitney_eulerian};
    use crate::TriangleParams;

    #[test]
    fn special_numbers() {
        assert_eq!(stirling2(4, 2), BigInt::from(7));
        assert_eq!(stirling2(0, 0), BigInt::one());
        assert_eq!(stirling2(3, 5), BigInt::zero());
        assert_eq!(rising_step(&rational(3, 7), &int(5), 0), int(1));
        assert_eq!(rising_step(&int(2), &int(3), 3), int(2 * 5 * 8));
        let e: Vec<_> = (0..4).map(euler_at_zero).collect();
        assert_eq!(e, vec![int(1), rational(-1, 2), int(0), rational(1, 4)]);
        // Bell numbers 1, 1, 2, 5, 15, 52
        let bell: Vec<_> = (0..6).map(|n| bell_polynomial(n, &int(1))).collect();
        assert_eq!(bell, [1, 1, 2, 5, 15, 52].map(int).to_vec());
    }

    #[test]
    fn cache_matches_fresh_values() {
        let mut warm = SpecialCache::new();
        for n in 0..10 {
            for k in 0..=n {
                warm.stirling2(n, k);
            }
            warm.euler_at_zero(n);
        }
        for n in (0..10).rev() {
            let mut fresh = SpecialCache::new();
            assert_eq!(warm.factorial(n), fresh.factorial(n));
            assert_eq!(warm.euler_at_zero(n), fresh.euler_at_zero(n));
            for k in 0..=n + 1 {
                assert_eq!(warm.stirling2(n, k), fresh.stirling2(n, k));
                assert_eq!(warm.binomial(n, k), fresh.binomial(n, k));
            }
        }
    }

    #[test]
    fn a_mr_examples() {
        assert_eq!(a_mr_explicit(3, 2, 2, 1), BigInt::from(13));
        assert_eq!(a_mr_explicit(5, 0, 0, 0), BigInt::from(1));
        assert_eq!(a_mr_explicit(1, 1, 4, 1), BigInt::from(11));
        let t = whitney_eulerian(2, 1, 5).unwrap();
        for n in 0..=5 {
            for k in 0..=n {
                assert_eq!(q(a_mr_explicit(2, 1, n, k)), t.get(n as i64, k as i64));
            }
        }
    }

    #[test]
    fn f_gram_examples() {
        let t = recurrence_triangle(&TriangleParams::from_ints([0, 1, 1, 1, 0, 0]), 3);
        assert_eq!(f_gram_explicit(0, 1, 1, 3, 1).unwrap(), t.get(3, 1));
        // k = 0: prod (a0 + r a2)
        assert_eq!(f_gram_explicit(2, 3, 5, 3, 0).unwrap(), int(7 * 12 * 17));
        let t = recurrence_triangle(&TriangleParams::from_ints([1, 2, 1, 1, 0, 0]), 4);
        let v = f_gram_explicit(1, 2, 1, 4, 2).unwrap();
        assert!(v.is_integer());
        assert_eq!(v, t.get(4, 2));
        assert_eq!(f_gram_explicit(1, 0, 1, 2, 1), Err(Error::ZeroA1));
    }

    #[test]
    fn t_b2zero_examples() {
        assert_eq!(
            t_b2zero_explicit(1, 2, 3, 1, 0, 4, 2).unwrap(),
            f_gram_explicit(1, 2, 3, 4, 2).unwrap()
        );
        let t = recurrence_triangle(&TriangleParams::from_ints([0, 1, 1, 1, 1, 0]), 3);
        assert_eq!(t_b2zero_explicit(0, 1, 1, 1, 1, 3, 2).unwrap(), t.get(3, 2));
        assert_eq!(
            t_b2zero_explicit(2, 1, 1, 2, 2, 5, 0).unwrap(),
            f_gram_explicit(2, 1, 1, 5, 0).unwrap()
        );
        assert_eq!(t_b2zero_explicit(0, 1, 0, 1, 1, 3, 2), Err(Error::ZeroA2));
    }

    #[test]
    fn f_a2zero_examples() {
        for n in 0..6 {
            for k in 0..=n {
                assert_eq!(f_a2zero_explicit(0, 1, n, k), q(stirling2(n, k)));
            }
        }
        let row: Vec<_> = (0..=2).map(|k| f_a2zero_explicit(2, 2, 2, k)).collect();
        assert_eq!(row, vec![int(4), int(6), int(1)]);
        let t = recurrence_triangle(&TriangleParams::from_ints([1, 3, 0, 1, 0, 0]), 4);
        assert_eq!(f_a2zero_explicit(1, 3, 4, 2), t.get(4, 2));
    }

    #[test]
    fn touchard_examples() {
        let (l, r) = touchard_check(5, 3, 0).unwrap();
        assert!(l.is_one() && r.is_one());
        let (l, r) = touchard_check(0, 1, 3).unwrap();
        let expect = crate::parse::parse_poly("alpha + 3*alpha^2 + alpha^3").unwrap();
        assert_eq!((&l, &r), (&expect, &expect));
        let (l, r) = touchard_check(2, 2, 2).unwrap();
        let expect = crate::parse::parse_poly("4 + 6*alpha + alpha^2").unwrap();
        assert_eq!((&l, &r), (&expect, &expect));
        assert_eq!(touchard_check(1, 0, 2), Err(Error::ZeroA1));
    }

    #[test]
    fn witn1_examples() {
        assert_eq!(witn1_rowsum(4, 3, 1).unwrap(), int(1 + 4 + 3));
        assert_eq!(witn1_rowsum(4, 3, 0).unwrap(), int(1));
        assert_eq!(witn1_rowsum(0, 1, 3).unwrap(), int(24));
        let t = recurrence_triangle(&TriangleParams::from_ints([0, 0, 1, 1, 0, 0]), 3);
        assert_eq!(t.row_sum(3).unwrap(), int(24));
        assert_eq!(witn1_rowsum(1, 0, 2), Err(Error::ZeroA2));
    }

    #[test]
    fn alternating_sum_example() {
        assert_eq!(whitney_alternating_sum(1, 1, 3), int(-2));
        assert_eq!(whitney_alternating_sum(2, 0, 0), int(1));
    }
}

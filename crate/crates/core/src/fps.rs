//! Truncated formal power series in `t` and exact solutions of polynomial ODE
//! systems.
//!
//! Coefficient `i` of a [`TruncatedSeries`] is the coefficient of `t^i`
//! (ordinary, not exponential); factorials only enter at the boundary where an
//! exponential generating function is built or read.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::grammar::Grammar;
use crate::polyring::{int, BigRational, LaurentPoly, Monomial, VariableId};
use crate::triangles::{second_order_eulerian, whitney_eulerian};

/// Coefficient ring of a series: rationals, or Laurent polynomials in the
/// grammar letters for symbolic work.
pub trait Coeff: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &BigRational) -> Self;
    /// Multiplicative inverse, when it exists in the ring.
    fn try_inv(&self) -> Option<Self>;
    fn from_rational(c: BigRational) -> Self;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &BigRational) -> Self {
        self * c
    }
    fn try_inv(&self) -> Option<Self> {
        (!num_traits::Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_rational(c: BigRational) -> Self {
        c
    }
}

impl Coeff for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &BigRational) -> Self {
        LaurentPoly::scale(self, c)
    }
    /// Only single-term polynomials are units.
    fn try_inv(&self) -> Option<Self> {
        LaurentPoly::try_inv(self)
    }
    fn from_rational(c: BigRational) -> Self {
        LaurentPoly::constant(c)
    }
}

/// `c_0 + c_1 t + ... + c_N t^N`, everything beyond `t^N` discarded.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

fn recip_usize(n: usize) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(n))
}

impl<C: Coeff> TruncatedSeries<C> {
    /// Pads with zeros or truncates so that the series has exactly the given order.
    pub fn new(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        Self::new(vec![C::zero(), C::one()], order)
    }

    /// Built from exponential coefficients: `sum e_n t^n / n!`.
    pub fn from_egf(egf: Vec<C>, order: usize) -> Self {
        let mut fact = BigRational::one();
        let coeffs = egf
            .into_iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    fact /= int(n as i64);
                }
                c.scale(&fact)
            })
            .collect();
        Self::new(coeffs, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &C {
        &self.coeffs[i]
    }

    /// `n! c_n` for every `n`.
    pub fn egf_coeffs(&self) -> Vec<C> {
        let mut fact = BigRational::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    fact *= int(n as i64);
                }
                c.scale(&fact)
            })
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn map<D: Coeff>(&self, f: impl FnMut(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<D: Coeff>(&self, f: impl FnMut(&C) -> Result<D>) -> Result<TruncatedSeries<D>> {
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_zero)
    }

    /// Index of the first coefficient where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&i| self.coeffs[i] != other.coeffs[i])
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        TruncatedSeries {
            coeffs: (0..=n).map(|i| self.coeffs[i].add(&other.coeffs[i])).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        TruncatedSeries {
            coeffs: (0..=n).map(|i| self.coeffs[i].sub(&other.coeffs[i])).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(Coeff::neg)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        let coeffs = (0..=n)
            .map(|i| cauchy_term(&self.coeffs, &other.coeffs, i, 0))
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn scalar_mul(&self, c: &C) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        self.map(|x| x.scale(c))
    }

    /// Formal derivative; exact to order `N - 1`.
    pub fn differentiate(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        TruncatedSeries {
            coeffs: (1..=n).map(|i| self.coeffs[i].scale(&int(i as i64))).collect(),
        }
    }

    /// Antiderivative with zero constant term; exact to order `N + 1`.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&recip_usize(i + 1))),
        );
        TruncatedSeries { coeffs }
    }

    /// `exp` of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        // E' = A' E, so n e_n = sum_{k=1}^n k a_k e_{n-k}.
        let mut e = vec![C::one()];
        for n in 1..=self.order() {
            let mut acc = C::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc = acc.add(&self.coeffs[k].mul(&e[n - k]).scale(&int(k as i64)));
                }
            }
            e.push(acc.scale(&recip_usize(n)));
        }
        Ok(TruncatedSeries { coeffs: e })
    }

    /// `log` of a series with constant term one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].sub(&C::one()).is_zero() {
            return Err(Error::NonUnitConstantTerm);
        }
        // A L' = A', so n l_n = n a_n - sum_{k=1}^{n-1} k l_k a_{n-k}.
        let mut l = vec![C::zero()];
        for n in 1..=self.order() {
            let mut acc = self.coeffs[n].scale(&int(n as i64));
            for k in 1..n {
                acc = acc.sub(&l[k].mul(&self.coeffs[n - k]).scale(&int(k as i64)));
            }
            l.push(acc.scale(&recip_usize(n)));
        }
        Ok(TruncatedSeries { coeffs: l })
    }

    /// `exp(q log A)` for `A` with constant term one.
    pub fn pow_rational(&self, q: &BigRational) -> Result<Self> {
        self.log()?.scale(q).exp()
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let b0 = self.coeffs[0]
            .try_inv()
            .ok_or(Error::NonInvertibleConstantTerm)?;
        let mut b = vec![b0.clone()];
        for n in 1..=self.order() {
            let acc = cauchy_term(&self.coeffs, &b, n, 1);
            b.push(acc.mul(&b0).neg());
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    /// Integer power; negative powers go through [`TruncatedSeries::inverse`].
    pub fn pow_int(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonZeroInnerConstant);
        }
        let n = self.common_order(inner);
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for i in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[i]);
        }
        Ok(acc)
    }
}

impl TruncatedSeries<BigRational> {
    /// `exp(c t)` for a rational `c`.
    pub fn exp_linear(c: &BigRational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut x = BigRational::one();
        for n in 0..=order {
            if n > 0 {
                x = x * c / int(n as i64);
            }
            coeffs.push(x.clone());
        }
        TruncatedSeries { coeffs }
    }
}

impl TruncatedSeries<LaurentPoly> {
    /// Evaluates every coefficient at a rational point.
    pub fn eval(&self, point: &BTreeMap<VariableId, BigRational>) -> Result<TruncatedSeries<BigRational>> {
        self.try_map(|p| p.eval(point))
    }
}

impl<C: Coeff> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

// sum_{k=from}^{n} a_k b_{n-k}
fn cauchy_term<C: Coeff>(a: &[C], b: &[C], n: usize, from: usize) -> C {
    let mut acc = C::zero();
    for k in from..=n {
        if !a[k].is_zero() && !b[n - k].is_zero() {
            acc = acc.add(&a[k].mul(&b[n - k]));
        }
    }
    acc
}

/// `Gen(x, t) = sum_n D^n(x) t^n / n!` to order `N`.
pub fn gen_series(g: &Grammar, x: &LaurentPoly, order: usize) -> Result<TruncatedSeries<LaurentPoly>> {
    Ok(TruncatedSeries::from_egf(g.iterate(x, order)?, order))
}

/// `y_i' = rhs_i(y)`, `y_i(0) = initial_i`.
#[derive(Clone, Debug)]
pub struct OdeSystem<C> {
    pub variables: Vec<VariableId>,
    pub rhs: BTreeMap<VariableId, LaurentPoly>,
    pub initial: BTreeMap<VariableId, C>,
}

impl OdeSystem<LaurentPoly> {
    /// The system attached to a grammar, started at the letters themselves.
    pub fn from_grammar(g: &Grammar) -> Self {
        OdeSystem {
            variables: g.alphabet().to_vec(),
            rhs: g.rules().map(|(x, p)| (x.clone(), p.clone())).collect(),
            initial: g
                .alphabet()
                .iter()
                .map(|x| (x.clone(), LaurentPoly::var(x)))
                .collect(),
        }
    }
}

impl<C: Coeff> OdeSystem<C> {
    fn validate(&self) -> Result<()> {
        for x in &self.variables {
            let rhs = self
                .rhs
                .get(x)
                .ok_or_else(|| Error::InvalidArgument(format!("no right-hand side for `{x}`")))?;
            if let Some(y) = rhs.variables().into_iter().find(|y| !self.variables.contains(y)) {
                return Err(Error::UnknownVariable(y));
            }
            if !self.initial.contains_key(x) {
                return Err(Error::InvalidArgument(format!("no initial value for `{x}`")));
            }
        }
        Ok(())
    }
}

// Coefficient streams that can be advanced one degree at a time once the
// unknowns are known up to that degree.
enum Stream {
    // y_var^e with e >= 2 or e <= -1, via the power recurrence.
    Power { var: usize, exp: i64 },
    // y_var itself.
    Var(usize),
    // product of two earlier streams.
    Product(usize, usize),
}

struct Online<C> {
    streams: Vec<Stream>,
    values: Vec<Vec<C>>,
    // per variable: (coefficient, stream index or None for a constant) terms
    rhs: Vec<Vec<(BigRational, Option<usize>)>>,
}

impl<C: Coeff> Online<C> {
    fn build(sys: &OdeSystem<C>) -> Self {
        let index: BTreeMap<&VariableId, usize> =
            sys.variables.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let mut streams = Vec::new();
        let mut memo: BTreeMap<(usize, i64), usize> = BTreeMap::new();
        let mut products: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut rhs = Vec::new();
        for x in &sys.variables {
            let mut terms = Vec::new();
            for (m, c) in sys.rhs[x].terms() {
                let mut acc: Option<usize> = None;
                for (y, e) in m.iter() {
                    let var = index[y];
                    let s = *memo.entry((var, e)).or_insert_with(|| {
                        streams.push(if e == 1 {
                            Stream::Var(var)
                        } else {
                            Stream::Power { var, exp: e }
                        });
                        streams.len() - 1
                    });
                    acc = Some(match acc {
                        None => s,
                        Some(a) => *products.entry((a, s)).or_insert_with(|| {
                            streams.push(Stream::Product(a, s));
                            streams.len() - 1
                        }),
                    });
                }
                terms.push((c.clone(), acc));
            }
            rhs.push(terms);
        }
        let values = streams.iter().map(|_| Vec::new()).collect();
        Online {
            streams,
            values,
            rhs,
        }
    }

    // Pushes coefficient n of every stream; `ys` known through degree n.
    fn advance(&mut self, ys: &[Vec<C>], n: usize) -> Result<()> {
        for s in 0..self.streams.len() {
            let value = match self.streams[s] {
                Stream::Var(var) => ys[var][n].clone(),
                Stream::Product(a, b) => cauchy_term(&self.values[a], &self.values[b], n, 0),
                Stream::Power { var, exp } => power_coeff(&ys[var], &self.values[s], exp, n)?,
            };
            self.values[s].push(value);
        }
        Ok(())
    }

    fn rhs_coeff(&self, var: usize, n: usize) -> C {
        let mut acc = C::zero();
        for (c, s) in &self.rhs[var] {
            match s {
                Some(s) => acc = acc.add(&self.values[*s][n].scale(c)),
                None if n == 0 => acc = acc.add(&C::from_rational(c.clone())),
                None => {}
            }
        }
        acc
    }
}

// Coefficient n of a^e given a_0..a_n and p_0..p_{n-1}.
fn power_coeff<C: Coeff>(a: &[C], p: &[C], e: i64, n: usize) -> Result<C> {
    if n == 0 {
        return if e >= 0 {
            let mut acc = C::one();
            for _ in 0..e {
                acc = acc.mul(&a[0]);
            }
            Ok(acc)
        } else {
            let inv = a[0].try_inv().ok_or(Error::NonInvertibleConstantTerm)?;
            let mut acc = C::one();
            for _ in 0..-e {
                acc = acc.mul(&inv);
            }
            Ok(acc)
        };
    }
    match a[0].try_inv() {
        Some(inv) => {
            // A P' = e A' P, i.e. n a_0 p_n = sum_{k=1}^n ((e+1)k - n) a_k p_{n-k}.
            let mut acc = C::zero();
            for k in 1..=n {
                let w = (e + 1) * k as i64 - n as i64;
                if w != 0 && !a[k].is_zero() && !p[n - k].is_zero() {
                    acc = acc.add(&a[k].mul(&p[n - k]).scale(&int(w)));
                }
            }
            Ok(acc.mul(&inv).scale(&recip_usize(n)))
        }
        None if e >= 0 => {
            // Non-unit constant: expand the product directly.
            let series = TruncatedSeries::new(a[..=n].to_vec(), n);
            Ok(series.pow_int(e)?.coeffs[n].clone())
        }
        None => Err(Error::NonInvertibleConstantTerm),
    }
}

/// Formal solution of `sys` to order `N`, one degree at a time:
/// `c_{n+1} = [t^n] rhs(y) / (n + 1)`.
pub fn solve_ode<C: Coeff>(sys: &OdeSystem<C>, order: usize) -> Result<BTreeMap<VariableId, TruncatedSeries<C>>> {
    sys.validate()?;
    let mut ys: Vec<Vec<C>> = sys
        .variables
        .iter()
        .map(|x| vec![sys.initial[x].clone()])
        .collect();
    let mut online = Online::build(sys);
    for n in 0..order {
        online.advance(&ys, n)?;
        for (i, y) in ys.iter_mut().enumerate() {
            y.push(online.rhs_coeff(i, n).scale(&recip_usize(n + 1)));
        }
    }
    Ok(sys
        .variables
        .iter()
        .cloned()
        .zip(ys.into_iter().map(|c| TruncatedSeries::new(c, order)))
        .collect())
}

/// Outcome of a series identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub identity: String,
    pub parameters: String,
    pub max_order: usize,
    /// Lowest order at which the two sides disagree.
    pub first_failure: Option<usize>,
}

impl VerifyReport {
    fn new(identity: &str, parameters: String, max_order: usize, first_failure: Option<usize>) -> Self {
        VerifyReport {
            identity: identity.to_string(),
            parameters,
            max_order,
            first_failure,
        }
    }

    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_failure {
            None => write!(f, "{} [{}] pass to order {}", self.identity, self.parameters, self.max_order),
            Some(i) => write!(f, "{} [{}] FAIL at order {}", self.identity, self.parameters, i),
        }
    }
}

fn min_failure(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// Checks, at a rational point, that the Whitney–Eulerian EGF
/// `sum_n (sum_k A(n,k) u^(mn-mk) v^(mk)) t^n/n!` equals
/// `(u^m - v^m) e^((u^m - v^m) r t) / (u^m - v^m e^((u^m - v^m) m t))`.
pub fn verify_closed_form_whitney(
    m: i64,
    r: i64,
    u: &BigRational,
    v: &BigRational,
    order: usize,
) -> Result<VerifyReport> {
    let params = format!("m={m} r={r} u={u} v={v}");
    let um = crate::polyring::pow_rational_int(u, m);
    let vm = crate::polyring::pow_rational_int(v, m);
    let d = &um - &vm;
    if d.is_zero() {
        return Err(Error::DegeneratePoint(format!("u^m = v^m at {params}")));
    }
    let tri = whitney_eulerian(m, r, order)?;
    let egf = (0..=order)
        .map(|n| {
            tri.row(n)
                .expect("row in range")
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    let (n, k) = (n as i64, k as i64);
                    a * crate::polyring::pow_rational_int(u, m * (n - k))
                        * crate::polyring::pow_rational_int(v, m * k)
                })
                .sum()
        })
        .collect();
    let lhs = TruncatedSeries::from_egf(egf, order);
    let num = TruncatedSeries::exp_linear(&(&d * int(r)), order).scale(&d);
    let den = TruncatedSeries::constant(um, order)
        .sub(&TruncatedSeries::exp_linear(&(&d * int(m)), order).scale(&vm));
    let rhs = num.mul(&den.inverse()?);
    Ok(VerifyReport::new(
        "whitney-egf",
        params,
        order,
        lhs.first_difference(&rhs),
    ))
}

fn letter(name: &str) -> VariableId {
    VariableId::new(name)
}

fn monomial_poly(pairs: &[(&VariableId, i64)]) -> LaurentPoly {
    LaurentPoly::term(
        Monomial::from_pairs(pairs.iter().map(|(x, e)| ((*x).clone(), *e))),
        int(1),
    )
}

/// `{u -> u v^a1, v -> v}`: checks `V = v e^t` and
/// `U = u exp((v^a1 / a1)(e^(a1 t) - 1))` against the ODE solution, and the
/// Bell-polynomial form of `n! [t^n] U V^a0`.
pub fn verify_sol_witn2(a0: i64, a1: i64, order: usize) -> Result<VerifyReport> {
    if a1 == 0 {
        return Err(Error::ZeroA1);
    }
    let (u, v) = (letter("u"), letter("v"));
    let g = Grammar::new([
        (u.clone(), monomial_poly(&[(&u, 1), (&v, a1)])),
        (v.clone(), monomial_poly(&[(&v, 1)])),
    ])?;
    let sol = solve_ode(&OdeSystem::from_grammar(&g), order)?;
    let (big_u, big_v) = (&sol[&u], &sol[&v]);

    let v_expect = TruncatedSeries::exp_linear(&int(1), order).map(|c| LaurentPoly::var(&v).scale(c));
    let mut fail = big_v.first_difference(&v_expect);

    let va1 = monomial_poly(&[(&v, a1)]).scale(&BigRational::new(1.into(), a1.into()));
    let inner = TruncatedSeries::exp_linear(&int(a1), order)
        .sub(&TruncatedSeries::one(order))
        .map(|c| va1.scale(c));
    let u_expect = inner.exp()?.scalar_mul(&LaurentPoly::var(&u));
    fail = min_failure(fail, big_u.first_difference(&u_expect));

    let product = big_u.mul(&big_v.pow_int(a0)?).egf_coeffs();
    let prefix = monomial_poly(&[(&u, 1), (&v, a0)]);
    let bell: Vec<LaurentPoly> = (0..=order)
        .map(|n| {
            let mut acc = LaurentPoly::zero();
            for k in 0..=n {
                let c = BigRational::from_integer(crate::closedforms::binomial(n, k))
                    * crate::polyring::pow_rational_int(&int(a1), k as i64)
                    * crate::polyring::pow_rational_int(&int(a0), (n - k) as i64);
                acc += &crate::closedforms::bell_polynomial_poly(k, &va1).scale(&c);
            }
            &acc * &prefix
        })
        .collect();
    let bell_fail = (0..=order).find(|&n| product[n] != bell[n]);
    fail = min_failure(fail, bell_fail);
    Ok(VerifyReport::new(
        "witn2-solution",
        format!("a0={a0} a1={a1}"),
        order,
        fail,
    ))
}

/// `{u -> u v^a2, v -> v^(a2+1)}`: checks `V^a2 (1 - a2 t v^a2) = v^a2` and
/// `U v = u V` on the ODE solution.
pub fn verify_sol_witn1(a0: i64, a2: i64, order: usize) -> Result<VerifyReport> {
    if a2 == 0 {
        return Err(Error::ZeroA2);
    }
    let (u, v) = (letter("u"), letter("v"));
    let g = Grammar::new([
        (u.clone(), monomial_poly(&[(&u, 1), (&v, a2)])),
        (v.clone(), monomial_poly(&[(&v, a2 + 1)])),
    ])?;
    let sol = solve_ode(&OdeSystem::from_grammar(&g), order)?;
    let (big_u, big_v) = (&sol[&u], &sol[&v]);
    let va2 = monomial_poly(&[(&v, a2)]);
    let factor = TruncatedSeries::new(
        vec![LaurentPoly::one(), va2.scale(&int(-a2))],
        order,
    );
    let lhs = big_v.pow_int(a2)?.mul(&factor);
    let mut fail = lhs.first_difference(&TruncatedSeries::constant(va2, order));
    let left = big_u.scalar_mul(&LaurentPoly::var(&v));
    let right = big_v.scalar_mul(&LaurentPoly::var(&u));
    fail = min_failure(fail, left.first_difference(&right));
    Ok(VerifyReport::new(
        "witn1-solution",
        format!("a0={a0} a2={a2}"),
        order,
        fail,
    ))
}

/// `T(z) = sum_n n^(n-1) z^n / n!`, computed by iterating `T <- z e^T`.
pub fn tree_function(order: usize) -> TruncatedSeries<BigRational> {
    let z = TruncatedSeries::t(order);
    let mut tree = TruncatedSeries::zero(order);
    // each pass fixes one more coefficient
    for _ in 0..order {
        tree = z.mul(&tree.exp().expect("tree function has zero constant term"));
    }
    tree
}

/// Checks the EGF of the second-order Eulerian numbers,
/// `sum_n (sum_k B(n,k) y^(k+1)) t^n/n! = (1-y) W / (1-W)`, where `W` solves
/// `W' = (1-y)^2 W / (1-W)`, `W(0) = y`.
///
/// Setting `Z = 1/(1-W)` turns this into the polynomial system
/// `W' = (1-y)^2 W Z`, `Z' = (1-y)^2 W Z^3`.
pub fn verify_secondorder_egf(y: &BigRational, order: usize) -> Result<VerifyReport> {
    if y.is_zero() || *y == BigRational::one() {
        return Err(Error::DegenerateY);
    }
    let (w, z) = (letter("W"), letter("Z"));
    let c = (BigRational::one() - y) * (BigRational::one() - y);
    let sys = OdeSystem {
        variables: vec![w.clone(), z.clone()],
        rhs: [
            (w.clone(), monomial_poly(&[(&w, 1), (&z, 1)]).scale(&c)),
            (z.clone(), monomial_poly(&[(&w, 1), (&z, 3)]).scale(&c)),
        ]
        .into_iter()
        .collect(),
        initial: [
            (w.clone(), y.clone()),
            (z.clone(), (BigRational::one() - y).recip()),
        ]
        .into_iter()
        .collect(),
    };
    let sol = solve_ode(&sys, order)?;
    let rhs = sol[&w]
        .mul(&sol[&z])
        .scale(&(BigRational::one() - y));
    let tri = second_order_eulerian(2, order)?;
    let egf = (0..=order)
        .map(|n| {
            tri.row(n)
                .expect("row in range")
                .iter()
                .enumerate()
                .map(|(k, b)| b * crate::polyring::pow_rational_int(y, k as i64 + 1))
                .sum()
        })
        .collect();
    let lhs = TruncatedSeries::from_egf(egf, order);
    Ok(VerifyReport::new(
        "second-order-egf",
        format!("y={y}"),
        order,
        lhs.first_difference(&rhs),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_grammar, parse_poly};
    use crate::polyring::rational;

    type Q = TruncatedSeries<BigRational>;

    fn q(coeffs: &[(i64, i64)], order: usize) -> Q {
        Q::new(coeffs.iter().map(|&(n, d)| rational(n, d)).collect(), order)
    }

    #[test]
    fn exp_log_pow() {
        let t = Q::t(3);
        assert_eq!(t.exp().unwrap(), q(&[(1, 1), (1, 1), (1, 2), (1, 6)], 3));
        let t8 = Q::t(8);
        assert_eq!(t8.exp().unwrap().log().unwrap(), t8);
        let one_plus_t = Q::one(8).add(&t8);
        let root = one_plus_t.pow_rational(&rational(1, 2)).unwrap();
        assert_eq!(root.mul(&root), one_plus_t);
        assert_eq!(Q::one(3).exp(), Err(Error::NonZeroConstantTerm));
        assert_eq!(t.log(), Err(Error::NonUnitConstantTerm));
    }

    #[test]
    fn inverse_compose_and_powers() {
        let geo = Q::one(5).sub(&Q::t(5)).inverse().unwrap();
        assert_eq!(geo, Q::new(vec![int(1); 6], 5));
        assert_eq!(Q::t(4).inverse(), Err(Error::NonInvertibleConstantTerm));
        let sq = Q::one(5).add(&Q::t(5)).pow_int(-2).unwrap();
        assert_eq!(sq, q(&[(1, 1), (-2, 1), (3, 1), (-4, 1), (5, 1), (-6, 1)], 5));
        // exp(t) composed with 2t is exp(2t)
        let e = Q::t(6).exp().unwrap();
        assert_eq!(e.compose(&Q::t(6).scale(&int(2))).unwrap(), Q::exp_linear(&int(2), 6));
        assert_eq!(e.compose(&e), Err(Error::NonZeroInnerConstant));
    }

    #[test]
    fn differentiate_integrate() {
        let e = Q::exp_linear(&int(1), 6);
        assert_eq!(e.differentiate(), e.truncate(5));
        assert_eq!(e.integrate().truncate(6), e.sub(&Q::one(6)));
    }

    #[test]
    fn gen_series_examples() {
        let g = parse_grammar("u -> u*v^3\nv -> u^3*v").unwrap();
        let s = gen_series(&g, &parse_poly("u*v^2").unwrap(), 2).unwrap();
        assert_eq!(s.coeff(1), &parse_poly("u*v^5 + 2*u^4*v^2").unwrap());
        assert_eq!(s.coeff(2), &parse_poly("1/2*u*v^8 + 13/2*u^4*v^5 + 2*u^7*v^2").unwrap());
        let one = gen_series(&g, &LaurentPoly::one(), 4).unwrap();
        assert_eq!(one, TruncatedSeries::one(4));
        let uv = gen_series(&g, &parse_poly("u*v").unwrap(), 4).unwrap();
        let u = gen_series(&g, &parse_poly("u").unwrap(), 4).unwrap();
        let v = gen_series(&g, &parse_poly("v").unwrap(), 4).unwrap();
        assert_eq!(uv, u.mul(&v));
    }

    #[test]
    fn solve_ode_matches_gen_series() {
        let g = parse_grammar("u -> u*v^2\nv -> v").unwrap();
        let sol = solve_ode(&OdeSystem::from_grammar(&g), 3).unwrap();
        let v = VariableId::new("v");
        assert_eq!(
            sol[&v],
            TruncatedSeries::exp_linear(&int(1), 3).map(|c| LaurentPoly::var(&v).scale(c))
        );
        for x in g.alphabet() {
            assert_eq!(sol[x], gen_series(&g, &LaurentPoly::var(x), 3).unwrap());
        }

        let g = parse_grammar("x -> x^2*y\ny -> x^2*y").unwrap();
        let (x, y) = (VariableId::new("x"), VariableId::new("y"));
        let sys = OdeSystem {
            variables: vec![x.clone(), y.clone()],
            rhs: g.rules().map(|(a, p)| (a.clone(), p.clone())).collect(),
            initial: [(x.clone(), int(2)), (y.clone(), int(1))].into_iter().collect(),
        };
        let sol = solve_ode(&sys, 5).unwrap();
        let point = [(x.clone(), int(2)), (y.clone(), int(1))].into_iter().collect();
        for a in [&x, &y] {
            let expect = gen_series(&g, &LaurentPoly::var(a), 5).unwrap().eval(&point).unwrap();
            assert_eq!(sol[a], expect);
        }
    }

    #[test]
    fn solve_ode_zero_rhs_and_laurent_rules() {
        let x = VariableId::new("x");
        let sys = OdeSystem {
            variables: vec![x.clone()],
            rhs: [(x.clone(), LaurentPoly::zero())].into_iter().collect(),
            initial: [(x.clone(), int(7))].into_iter().collect(),
        };
        assert_eq!(solve_ode(&sys, 4).unwrap()[&x], Q::constant(int(7), 4));

        let g = parse_grammar("u -> u^-1*v^2\nv -> u^2*v^-3").unwrap();
        let sol = solve_ode(&OdeSystem::from_grammar(&g), 5).unwrap();
        for a in g.alphabet() {
            assert_eq!(sol[a], gen_series(&g, &LaurentPoly::var(a), 5).unwrap());
        }
    }

    #[test]
    fn whitney_egf_points() {
        let ok = verify_closed_form_whitney(1, 1, &int(2), &int(1), 6).unwrap();
        assert!(ok.passed(), "{ok}");
        assert!(verify_closed_form_whitney(3, 2, &int(1), &int(2), 5).unwrap().passed());
        assert!(matches!(
            verify_closed_form_whitney(2, 1, &int(1), &int(1), 4),
            Err(Error::DegeneratePoint(_))
        ));
        assert!(matches!(
            verify_closed_form_whitney(2, 1, &int(1), &int(-1), 4),
            Err(Error::DegeneratePoint(_))
        ));
    }

    #[test]
    fn witn_solutions() {
        assert!(verify_sol_witn2(2, 2, 4).unwrap().passed());
        assert!(verify_sol_witn1(1, 2, 5).unwrap().passed());
        assert!(verify_sol_witn1(0, -1, 5).unwrap().passed());
        assert_eq!(verify_sol_witn2(1, 0, 3), Err(Error::ZeroA1));
        assert_eq!(verify_sol_witn1(1, 0, 3), Err(Error::ZeroA2));
    }

    #[test]
    fn witn1_geometric_case() {
        let g = parse_grammar("u -> u*v\nv -> v^2").unwrap();
        let v = VariableId::new("v");
        let sol = solve_ode(&OdeSystem::from_grammar(&g), 6).unwrap();
        // v / (1 - t v) = sum v^(n+1) t^n
        let expect = TruncatedSeries::new(
            (0..=6)
                .map(|n| LaurentPoly::term(Monomial::var_pow(&v, n + 1), int(1)))
                .collect(),
            6,
        );
        assert_eq!(sol[&v], expect);
    }

    #[test]
    fn tree_function_coefficients() {
        let tf = tree_function(4);
        assert_eq!(tf.to_string(), "0, 1, 1, 3/2, 8/3");
        let tf = tree_function(8);
        let residual = tf.differentiate().mul(&Q::one(7).sub(&tf.truncate(7)));
        assert_eq!(residual, tf.exp().unwrap().truncate(7));
    }

    #[test]
    fn second_order_egf() {
        assert!(verify_secondorder_egf(&rational(1, 2), 6).unwrap().passed());
        assert!(verify_secondorder_egf(&int(2), 5).unwrap().passed());
        assert_eq!(verify_secondorder_egf(&int(1), 5), Err(Error::DegenerateY));
        assert_eq!(verify_secondorder_egf(&int(0), 5), Err(Error::DegenerateY));
    }
}

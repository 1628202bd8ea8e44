//! Context-free grammars on a finite alphabet and their derivation operator
//! `D = sum_x G(x) d/dx`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{fmt_rational, int, BigRational, LaurentPoly, Monomial, VariableId};
use crate::triangles::{FamilyTag, Triangle};

/// Map from letters to Laurent polynomials over those letters.
#[derive(Clone, PartialEq, Eq)]
pub struct Grammar {
    alphabet: Vec<VariableId>,
    rules: BTreeMap<VariableId, LaurentPoly>,
}

impl Grammar {
    /// Rules in alphabet order. Every letter used on a right-hand side must
    /// itself have a rule, and no letter may have two.
    pub fn new<I>(rules: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VariableId, LaurentPoly)>,
    {
        let mut alphabet = Vec::new();
        let mut map = BTreeMap::new();
        for (x, p) in rules {
            if map.insert(x.clone(), p).is_some() {
                return Err(Error::InvalidGrammar(format!("duplicate rule for `{x}`")));
            }
            alphabet.push(x);
        }
        for (x, p) in &map {
            if let Some(y) = p.variables().into_iter().find(|y| !map.contains_key(y)) {
                return Err(Error::InvalidGrammar(format!(
                    "rule for `{x}` mentions `{y}`, which has no rule"
                )));
            }
        }
        Ok(Grammar {
            alphabet,
            rules: map,
        })
    }

    pub fn alphabet(&self) -> &[VariableId] {
        &self.alphabet
    }

    pub fn rule(&self, x: &VariableId) -> Option<&LaurentPoly> {
        self.rules.get(x)
    }

    pub fn rules(&self) -> impl Iterator<Item = (&VariableId, &LaurentPoly)> {
        self.alphabet.iter().map(move |x| (x, &self.rules[x]))
    }

    fn check_vars(&self, p: &LaurentPoly) -> Result<()> {
        match p.variables().into_iter().find(|x| !self.rules.contains_key(x)) {
            Some(x) => Err(Error::UnknownVariable(x)),
            None => Ok(()),
        }
    }

    /// One application of the derivation `D`.
    pub fn apply(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_vars(p)?;
        Ok(self.apply_unchecked(p))
    }

    fn apply_unchecked(&self, p: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in p.terms() {
            for (x, e) in m.iter() {
                let factor = c * BigRational::from_integer(e.into());
                let rest = m.shifted(x, -1);
                for (rm, rc) in self.rules[x].terms() {
                    out.add_term(rest.mul(rm), &factor * rc);
                }
            }
        }
        out
    }

    /// `[seed, D seed, ..., D^n seed]`.
    pub fn iterate(&self, seed: &LaurentPoly, n: usize) -> Result<Vec<LaurentPoly>> {
        self.check_vars(seed)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(seed.clone());
        for i in 0..n {
            let next = self.apply_unchecked(&out[i]);
            out.push(next);
        }
        Ok(out)
    }

    /// True when the rule of `z` is `z` times an expression free of `z`, and
    /// no other rule mentions `z`.
    pub fn is_type_e(&self, z: &VariableId) -> bool {
        let Some(rule) = self.rules.get(z) else {
            return false;
        };
        let own_ok = rule.terms().all(|(m, _)| m.exponent(z) == 1);
        let others_ok = self
            .rules
            .iter()
            .filter(|(x, _)| *x != z)
            .all(|(_, p)| p.terms().all(|(m, _)| m.exponent(z) == 0));
        own_ok && others_ok
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, p) in self.rules() {
            writeln!(f, "{x} -> {p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grammar {{ ")?;
        for (i, (x, p)) in self.rules().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{x} -> {p}")?;
        }
        write!(f, " }}")
    }
}

/// Coefficients of `T(n,k) = (a0 + a1 k + a2 n) T(n-1,k) + (b0 + b1 k + b2 n) T(n-1,k-1)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[String; 6]", into = "[String; 6]")]
pub struct TriangleParams {
    pub a0: BigRational,
    pub a1: BigRational,
    pub a2: BigRational,
    pub b0: BigRational,
    pub b1: BigRational,
    pub b2: BigRational,
}

impl TriangleParams {
    pub fn new(values: [BigRational; 6]) -> Self {
        let [a0, a1, a2, b0, b1, b2] = values;
        TriangleParams {
            a0,
            a1,
            a2,
            b0,
            b1,
            b2,
        }
    }

    pub fn from_ints(values: [i64; 6]) -> Self {
        TriangleParams::new(values.map(int))
    }

    pub fn to_array(&self) -> [BigRational; 6] {
        [
            self.a0.clone(),
            self.a1.clone(),
            self.a2.clone(),
            self.b0.clone(),
            self.b1.clone(),
            self.b2.clone(),
        ]
    }

    /// The six parameters as machine integers, for grammar construction.
    pub fn as_integers(&self) -> Result<[i64; 6]> {
        let arr = self.to_array();
        let mut out = [0i64; 6];
        for (slot, q) in out.iter_mut().zip(arr.iter()) {
            *slot = q
                .is_integer()
                .then(|| q.to_integer().to_i64())
                .flatten()
                .ok_or_else(|| Error::NonIntegerParams(self.to_string()))?;
        }
        Ok(out)
    }

    /// `a2 n + a1 k + a0`, the weight on `T(n-1,k)`.
    pub fn a_coeff(&self, n: usize, k: usize) -> BigRational {
        &self.a0 + &self.a1 * BigRational::from_integer(k.into())
            + &self.a2 * BigRational::from_integer(n.into())
    }

    /// `b2 n + b1 k + b0`, the weight on `T(n-1,k-1)`.
    pub fn b_coeff(&self, n: usize, k: usize) -> BigRational {
        &self.b0 + &self.b1 * BigRational::from_integer(k.into())
            + &self.b2 * BigRational::from_integer(n.into())
    }
}

impl fmt::Display for TriangleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_array().iter().map(fmt_rational).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for TriangleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl TryFrom<[String; 6]> for TriangleParams {
    type Error = String;
    fn try_from(values: [String; 6]) -> std::result::Result<Self, String> {
        let mut out: [BigRational; 6] = Default::default();
        for (slot, s) in out.iter_mut().zip(values.iter()) {
            *slot = crate::parse::parse_rational(s).map_err(|e| e.to_string())?;
        }
        Ok(TriangleParams::new(out))
    }
}

impl From<TriangleParams> for [String; 6] {
    fn from(p: TriangleParams) -> Self {
        p.to_array().map(|q| fmt_rational(&q))
    }
}

pub fn u_var() -> VariableId {
    VariableId::new("u")
}

pub fn v_var() -> VariableId {
    VariableId::new("v")
}

/// `{u -> u^(b1+b2+1) v^(a1+a2), v -> u^b2 v^(a2+1)}`.
pub fn hao_grammar(p: &TriangleParams) -> Result<Grammar> {
    let [_, a1, a2, _, b1, b2] = p.as_integers()?;
    let (u, v) = (u_var(), v_var());
    let one = BigRational::from_integer(BigInt::from(1));
    Grammar::new([
        (
            u.clone(),
            LaurentPoly::term(
                Monomial::from_pairs([(u.clone(), b1 + b2 + 1), (v.clone(), a1 + a2)]),
                one.clone(),
            ),
        ),
        (
            v.clone(),
            LaurentPoly::term(
                Monomial::from_pairs([(u.clone(), b2), (v.clone(), a2 + 1)]),
                one,
            ),
        ),
    ])
}

/// `u^(b0+b1+b2) v^(a0+a2)`, the word whose iterated derivatives carry the triangle.
pub fn hao_seed(p: &TriangleParams) -> Result<Monomial> {
    let [a0, _, a2, b0, b1, b2] = p.as_integers()?;
    Ok(Monomial::from_pairs([
        (u_var(), b0 + b1 + b2),
        (v_var(), a0 + a2),
    ]))
}

/// Monomial of `D^n(seed)` that carries `T(n,k)`.
pub fn hao_cell_monomial(p: &[i64; 6], n: i64, k: i64) -> Monomial {
    let [a0, a1, a2, b0, b1, b2] = *p;
    Monomial::from_pairs([
        (u_var(), b2 * n + b1 * k + b0 + b1 + b2),
        (v_var(), a2 * n + a1 * k + a0 + a2),
    ])
}

/// Reads `T(n,k)` off the expansions `D^n(u^(b0+b1+b2) v^(a0+a2))`.
///
/// Fails with [`Error::NonTriangularExpansion`] when two columns share a
/// monomial (`a1 = b1 = 0`) or when an expansion contains a monomial that
/// belongs to no column.
pub fn extract_triangle(p: &TriangleParams, n_max: usize) -> Result<Triangle> {
    let ints = p.as_integers()?;
    let g = hao_grammar(p)?;
    let seed = LaurentPoly::term(hao_seed(p)?, int(1));
    let expansions = g.iter_expansions(&seed, n_max);
    let mut rows = Vec::with_capacity(n_max + 1);
    for (n, expansion) in expansions.enumerate() {
        let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
        for k in 0..=n {
            let m = hao_cell_monomial(&ints, n as i64, k as i64);
            if let Some(prev) = index.insert(m.clone(), k) {
                return Err(Error::NonTriangularExpansion {
                    n,
                    detail: format!("columns {prev} and {k} both map to {m}"),
                });
            }
        }
        let mut row = vec![BigRational::zero(); n + 1];
        for (m, c) in expansion.terms() {
            match index.get(m) {
                Some(&k) => row[k] = c.clone(),
                None => {
                    return Err(Error::NonTriangularExpansion {
                        n,
                        detail: format!("monomial {m} lies on no column"),
                    })
                }
            }
        }
        rows.push(row);
    }
    Ok(Triangle::from_rows(FamilyTag::gkp(p.clone()), rows))
}

impl Grammar {
    fn iter_expansions<'a>(
        &'a self,
        seed: &LaurentPoly,
        n_max: usize,
    ) -> impl Iterator<Item = LaurentPoly> + 'a {
        let mut current = Some(seed.clone());
        (0..=n_max).map(move |i| {
            let here = current.take().expect("expansion present");
            if i < n_max {
                current = Some(self.apply_unchecked(&here));
            }
            here
        })
    }
}

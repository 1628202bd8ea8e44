//! Brute-force enumeration of the structures counted by the triangles:
//! derivation histories of grammars, Stirling permutations, permutations by
//! excedances and set partitions.
//!
//! Everything here is deliberately naive; these are oracles for small `n`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::grammar::Grammar;
use crate::polyring::{BigRational, Monomial, VariableId};

/// Default cap on the number of objects a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::BudgetExceeded { budget: self.limit });
        }
        Ok(())
    }

    // Refuses up front when the object count is known to be too large.
    fn reserve(&self, count: &BigUint) -> Result<()> {
        if *count > BigUint::from(self.limit) {
            return Err(Error::BudgetExceeded { budget: self.limit });
        }
        Ok(())
    }
}

/// Counts of enumerated objects bucketed by an integer statistic.
#[derive(Clone, PartialEq, Eq)]
pub struct StructureCensus {
    statistic: String,
    counts: BTreeMap<i64, BigUint>,
}

impl StructureCensus {
    pub fn new(statistic: impl Into<String>) -> Self {
        StructureCensus {
            statistic: statistic.into(),
            counts: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, key: i64, count: impl Into<BigUint>) {
        let count = count.into();
        if !count.is_zero() {
            *self.counts.entry(key).or_default() += count;
        }
    }

    pub fn statistic(&self) -> &str {
        &self.statistic
    }

    pub fn counts(&self) -> &BTreeMap<i64, BigUint> {
        &self.counts
    }

    pub fn get(&self, key: i64) -> BigUint {
        self.counts.get(&key).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Buckets `shift..shift+len` as a row of rationals; bucket `k + shift`
    /// lands in column `k`.
    pub fn to_row(&self, len: usize, shift: i64) -> Vec<BigRational> {
        (0..len)
            .map(|k| BigRational::from_integer(BigInt::from(self.get(k as i64 + shift))))
            .collect()
    }

    /// True when every bucket lies in `shift..shift+len`.
    pub fn fits_row(&self, len: usize, shift: i64) -> bool {
        self.counts
            .keys()
            .all(|&k| k >= shift && k < shift + len as i64)
    }

    /// Shorthand for a census from literal pairs.
    pub fn from_pairs(statistic: &str, pairs: &[(i64, u64)]) -> Self {
        let mut c = StructureCensus::new(statistic);
        for &(k, n) in pairs {
            c.add(k, n);
        }
        c
    }
}

impl fmt::Display for StructureCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}\tcount", self.statistic)?;
        for (k, c) in &self.counts {
            writeln!(f, "{k}\t{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for StructureCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.statistic, self.counts)
    }
}

/// Which leaf was rewritten at each step; `steps[i]` indexes the leaves as
/// they stood before step `i + 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DerivationHistory {
    pub steps: Vec<usize>,
}

// A grammar whose rules are single monomials with nonnegative exponents and a
// positive integer coefficient, so a rewrite replaces one leaf by a fixed
// multiset of leaves.
struct LeafRules {
    letters: Vec<VariableId>,
    // children[x] = letters produced when a leaf x is rewritten
    children: Vec<Vec<usize>>,
    weight: Vec<BigUint>,
}

impl LeafRules {
    fn new(g: &Grammar) -> Result<Self> {
        let letters = g.alphabet().to_vec();
        let index = |y: &VariableId| letters.iter().position(|z| z == y);
        let mut children = Vec::new();
        let mut weight = Vec::new();
        for x in &letters {
            let rule = g.rule(x).expect("alphabet letter has a rule");
            let (m, c) = rule
                .as_single_term()
                .filter(|(_, c)| c.is_integer() && c.numer() > &BigInt::zero())
                .ok_or_else(|| Error::NonMonomialRule(x.clone()))?;
            if m.has_negative_exponent() {
                return Err(Error::NegativeLeafMultiplicity(format!("{x} -> {rule}")));
            }
            let mut kids = Vec::new();
            for (y, e) in m.iter() {
                kids.extend(std::iter::repeat_n(index(y).expect("rule letters in alphabet"), e as usize));
            }
            children.push(kids);
            weight.push(c.numer().to_biguint().expect("positive"));
        }
        Ok(LeafRules {
            letters,
            children,
            weight,
        })
    }

    fn leaves_of(&self, seed: &Monomial) -> Result<Vec<usize>> {
        if seed.has_negative_exponent() {
            return Err(Error::NegativeLeafMultiplicity(format!("seed {seed}")));
        }
        let mut leaves = Vec::new();
        for (y, e) in seed.iter() {
            let i = self
                .letters
                .iter()
                .position(|z| z == y)
                .ok_or_else(|| Error::UnknownVariable(y.clone()))?;
            leaves.extend(std::iter::repeat_n(i, e as usize));
        }
        Ok(leaves)
    }
}

/// Calls `visit(history, final_leaves, weight)` for every derivation history
/// of length `n` starting from `seed`. `weight` is the product of the rule
/// coefficients used (1 for the grammars of interest).
pub fn for_each_history(
    g: &Grammar,
    seed: &Monomial,
    n: usize,
    budget: u64,
    mut visit: impl FnMut(&DerivationHistory, &[VariableId], &BigUint),
) -> Result<()> {
    let rules = LeafRules::new(g)?;
    let leaves = rules.leaves_of(seed)?;
    let mut budget = Budget::new(budget);
    let mut history = DerivationHistory::default();
    let mut scratch = Vec::new();
    descend(
        &rules,
        leaves,
        n,
        BigUint::one(),
        &mut history,
        &mut budget,
        &mut |h, leaves, w| {
            scratch.clear();
            scratch.extend(leaves.iter().map(|&i| rules.letters[i].clone()));
            visit(h, &scratch, w);
        },
    )
}

fn descend(
    rules: &LeafRules,
    leaves: Vec<usize>,
    remaining: usize,
    weight: BigUint,
    history: &mut DerivationHistory,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&DerivationHistory, &[usize], &BigUint),
) -> Result<()> {
    if remaining == 0 {
        budget.tick()?;
        visit(history, &leaves, &weight);
        return Ok(());
    }
    for i in 0..leaves.len() {
        let x = leaves[i];
        let mut next = Vec::with_capacity(leaves.len() + rules.children[x].len());
        next.extend_from_slice(&leaves[..i]);
        next.extend_from_slice(&leaves[i + 1..]);
        next.extend_from_slice(&rules.children[x]);
        history.steps.push(i);
        descend(
            rules,
            next,
            remaining - 1,
            &weight * &rules.weight[x],
            history,
            budget,
            visit,
        )?;
        history.steps.pop();
    }
    Ok(())
}

/// Histories of length `n` bucketed by the number of `leaf_letter` leaves in
/// the final structure.
pub fn census_vleaves(
    g: &Grammar,
    seed: &Monomial,
    n: usize,
    leaf_letter: &VariableId,
    budget: u64,
) -> Result<StructureCensus> {
    let mut census = StructureCensus::new(format!("{leaf_letter}-leaves"));
    for_each_history(g, seed, n, budget, |_, leaves, w| {
        let k = leaves.iter().filter(|y| *y == leaf_letter).count();
        census.add(k as i64, w.clone());
    })?;
    Ok(census)
}

/// Histories of length `n` bucketed by the full multiset of final leaves;
/// this is `D^n(seed)` recovered by counting.
pub fn census_monomials(
    g: &Grammar,
    seed: &Monomial,
    n: usize,
    budget: u64,
) -> Result<BTreeMap<Monomial, BigUint>> {
    let mut out: BTreeMap<Monomial, BigUint> = BTreeMap::new();
    for_each_history(g, seed, n, budget, |_, leaves, w| {
        let mut exps: BTreeMap<&VariableId, i64> = BTreeMap::new();
        for y in leaves {
            *exps.entry(y).or_default() += 1;
        }
        let m = Monomial::from_pairs(exps.into_iter().map(|(y, e)| (y.clone(), e)));
        *out.entry(m).or_default() += w;
    })?;
    Ok(out)
}

/// Histories of `{u -> u v^(a1+a2), v -> v^(a2+1)}` from `u v^(a0+a2)`,
/// bucketed by how many steps rewrote the `u` leaf.
pub fn census_components(a0: i64, a1: i64, a2: i64, n: usize, budget: u64) -> Result<StructureCensus> {
    let (u, v) = (VariableId::new("u"), VariableId::new("v"));
    for (what, e) in [("a1+a2", a1 + a2), ("a2+1", a2 + 1), ("a0+a2", a0 + a2)] {
        if e < 0 {
            return Err(Error::NegativeLeafMultiplicity(format!("{what} = {e}")));
        }
    }
    let term = |pairs: &[(&VariableId, i64)]| {
        crate::polyring::LaurentPoly::term(
            Monomial::from_pairs(pairs.iter().map(|(x, e)| ((*x).clone(), *e))),
            BigRational::one(),
        )
    };
    let g = Grammar::new([
        (u.clone(), term(&[(&u, 1), (&v, a1 + a2)])),
        (v.clone(), term(&[(&v, a2 + 1)])),
    ])?;
    let seed = Monomial::from_pairs([(u.clone(), 1), (v.clone(), a0 + a2)]);
    let rules = LeafRules::new(&g)?;
    let mut census = StructureCensus::new("components");
    let mut budget = Budget::new(budget);
    components_walk(&rules, rules.leaves_of(&seed)?, n, 0, &mut budget, &mut census)?;
    Ok(census)
}

fn components_walk(
    rules: &LeafRules,
    leaves: Vec<usize>,
    remaining: usize,
    spine: i64,
    budget: &mut Budget,
    census: &mut StructureCensus,
) -> Result<()> {
    if remaining == 0 {
        budget.tick()?;
        census.add(spine, 1u32);
        return Ok(());
    }
    for i in 0..leaves.len() {
        let x = leaves[i];
        let mut next = leaves.clone();
        next.remove(i);
        next.extend_from_slice(&rules.children[x]);
        let on_u = usize::from(rules.letters[x].as_str() == "u") as i64;
        components_walk(rules, next, remaining - 1, spine + on_u, budget, census)?;
    }
    Ok(())
}

/// Rearranges `w` into the next word in lexicographic order; false after the last.
fn next_permutation(w: &mut [u8]) -> bool {
    let Some(i) = w.windows(2).rposition(|p| p[0] < p[1]) else {
        return false;
    };
    let j = w.iter().rposition(|&x| x > w[i]).expect("pivot has a successor");
    w.swap(i, j);
    w[i + 1..].reverse();
    true
}

fn factorial_big(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Every letter appearing between two consecutive occurrences of `i` exceeds `i`.
pub fn is_stirling_permutation(w: &[u8]) -> bool {
    let mut last: BTreeMap<u8, usize> = BTreeMap::new();
    for (p, &x) in w.iter().enumerate() {
        if let Some(&q) = last.get(&x) {
            if w[q + 1..p].iter().any(|&y| y < x) {
                return false;
            }
        }
        last.insert(x, p);
    }
    true
}

/// Stirling `r`-permutations of `[n]` bucketed by internal strict descents
/// (positions `i` with `w_i > w_(i+1)`).
pub fn stirling_descent_census(n: usize, r: usize, budget: u64) -> Result<StructureCensus> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    if n > u8::MAX as usize {
        return Err(Error::BudgetExceeded { budget });
    }
    let budget_guard = Budget::new(budget);
    let words = factorial_big(n * r) / num_traits::pow(factorial_big(r), n);
    budget_guard.reserve(&words)?;
    let mut budget = budget_guard;
    let mut w: Vec<u8> = (1..=n as u8).flat_map(|i| std::iter::repeat_n(i, r)).collect();
    let mut census = StructureCensus::new("descents");
    loop {
        budget.tick()?;
        if is_stirling_permutation(&w) {
            let descents = w.windows(2).filter(|p| p[0] > p[1]).count();
            census.add(descents as i64, 1u32);
        }
        if !next_permutation(&mut w) {
            break;
        }
    }
    Ok(census)
}

/// Permutations of `[n]` bucketed by `#{j : sigma(j) >= j + r}`.
pub fn r_excedance_census(n: usize, r: usize, budget: u64) -> Result<StructureCensus> {
    if n > u8::MAX as usize {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut budget = Budget::new(budget);
    budget.reserve(&factorial_big(n))?;
    let mut sigma: Vec<u8> = (1..=n as u8).collect();
    let mut census = StructureCensus::new("r-excedances");
    loop {
        budget.tick()?;
        let k = sigma
            .iter()
            .enumerate()
            .filter(|&(j, &s)| s as usize >= j + 1 + r)
            .count();
        census.add(k as i64, 1u32);
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    Ok(census)
}

/// Set partitions of `[n]` bucketed by number of blocks, enumerated as
/// restricted growth strings.
pub fn set_partition_census(n: usize, budget: u64) -> Result<StructureCensus> {
    let mut census = StructureCensus::new("blocks");
    let mut budget = Budget::new(budget);
    let mut rgs = vec![0usize; n];
    partitions_walk(&mut rgs, 0, 0, &mut budget, &mut census)?;
    Ok(census)
}

fn partitions_walk(
    rgs: &mut [usize],
    pos: usize,
    blocks: usize,
    budget: &mut Budget,
    census: &mut StructureCensus,
) -> Result<()> {
    if pos == rgs.len() {
        budget.tick()?;
        census.add(blocks as i64, 1u32);
        return Ok(());
    }
    for b in 0..=blocks {
        rgs[pos] = b;
        let blocks = if b == blocks { blocks + 1 } else { blocks };
        partitions_walk(rgs, pos + 1, blocks, budget, census)?;
    }
    Ok(())
}

/// `{x -> x^r y, y -> x^r y}` from `y`, bucketed by the number of `y`
/// (cadet) leaves; bucket `j` corresponds to column `j - 1`.
pub fn cadet_leaf_census(n: usize, r: i64, budget: u64) -> Result<StructureCensus> {
    if r < 1 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let (x, y) = (VariableId::new("x"), VariableId::new("y"));
    let rule = crate::polyring::LaurentPoly::term(
        Monomial::from_pairs([(x.clone(), r), (y.clone(), 1)]),
        BigRational::one(),
    );
    let g = Grammar::new([(x.clone(), rule.clone()), (y.clone(), rule)])?;
    let mut census = census_vleaves(&g, &Monomial::var(&y), n, &y, budget)?;
    census.statistic = "cadet-leaves".into();
    Ok(census)
}

/// Number of histories of length `n` (`prod` of leaf counts) when every rule
/// adds the same number of leaves; `None` otherwise.
pub fn predicted_history_total(g: &Grammar, seed: &Monomial, n: usize) -> Option<BigUint> {
    let rules = LeafRules::new(g).ok()?;
    let growth = rules.children.first()?.len();
    if rules.children.iter().any(|c| c.len() != growth) || rules.weight.iter().any(|w| !w.is_one()) {
        return None;
    }
    let start = seed.degree().to_usize()?;
    Some((0..n).map(|i| BigUint::from(start + i * (growth - 1))).product())
}

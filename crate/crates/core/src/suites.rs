//! Named verification batteries over small default grids.
//!
//! Each suite cross-checks two independent computations of the same numbers
//! (recurrence vs. grammar, recurrence vs. closed form, series vs. series,
//! recurrence vs. brute-force enumeration) and reports per-check outcomes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::closedforms::{
    a_mr_explicit, bell_polynomial, f_a2zero_explicit, f_gram_explicit, factorial, t_b2zero_explicit,
    touchard_check, whitney_alternating_sum, witn1_rowsum,
};
use crate::enumerate::{
    cadet_leaf_census, census_components, census_vleaves, for_each_history, r_excedance_census,
    set_partition_census, stirling_descent_census, DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::fps::{
    gen_series, solve_ode, tree_function, verify_closed_form_whitney, verify_secondorder_egf,
    verify_sol_witn1, verify_sol_witn2, OdeSystem, TruncatedSeries, VerifyReport,
};
use crate::grammar::{extract_triangle, hao_grammar, hao_seed, v_var, Grammar, TriangleParams};
use crate::polyring::{int, rational, BigRational, LaurentPoly, Monomial, VariableId};
use crate::triangles::{
    r_eulerian, recurrence_triangle, second_order_eulerian, stirling2_triangle, whitney_eulerian,
    FamilyTag,
};

/// Knobs shared by all suites; `None` means the suite's default.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub max_n: Option<usize>,
    pub order: Option<usize>,
    /// Largest absolute parameter value in parameter sweeps.
    pub range: Option<i64>,
    pub budget: u64,
    /// Families for the row-sum suite; empty means the default grid.
    pub families: Vec<FamilyTag>,
    pub y: Option<Vec<BigRational>>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_n: None,
            order: None,
            range: None,
            budget: DEFAULT_BUDGET,
            families: Vec::new(),
            y: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail { locus: String },
    Error { message: String, budget_exceeded: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub parameters: String,
    /// Number of individual comparisons made.
    pub cases: usize,
    #[serde(flatten)]
    pub status: Status,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub grid: String,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn budget_exceeded(&self) -> bool {
        self.checks.iter().any(|c| {
            matches!(
                c.status,
                Status::Error {
                    budget_exceeded: true,
                    ..
                }
            )
        })
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "{verdict} {} [{}]", self.suite, self.grid)?;
        for c in &self.checks {
            match &c.status {
                Status::Pass => writeln!(f, "  pass  {} ({}; {} cases)", c.name, c.parameters, c.cases)?,
                Status::Fail { locus } => {
                    writeln!(f, "  FAIL  {} ({}): first failure at {locus}", c.name, c.parameters)?
                }
                Status::Error { message, .. } => {
                    writeln!(f, "  ERROR {} ({}): {message}", c.name, c.parameters)?
                }
            }
        }
        Ok(())
    }
}

// Accumulates the cases of one check, remembering the first failure.
struct Check {
    name: String,
    parameters: String,
    cases: usize,
    status: Status,
}

impl Check {
    fn new(name: &str, parameters: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            parameters: parameters.into(),
            cases: 0,
            status: Status::Pass,
        }
    }

    fn case(&mut self, ok: bool, locus: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.status == Status::Pass {
            self.status = Status::Fail { locus: locus() };
        }
    }

    fn result(&mut self, r: Result<bool>, locus: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.case(ok, locus),
            Err(e) => self.error(e, locus),
        }
    }

    fn error(&mut self, e: Error, locus: impl FnOnce() -> String) {
        self.cases += 1;
        if !matches!(self.status, Status::Error { .. }) {
            self.status = Status::Error {
                message: format!("{}: {e}", locus()),
                budget_exceeded: matches!(e, Error::BudgetExceeded { .. }),
            };
        }
    }

    fn report(&mut self, r: Result<VerifyReport>, locus: impl Fn() -> String) {
        match r {
            Ok(rep) => self.case(rep.passed(), || format!("{} ({rep})", locus())),
            Err(e) => self.error(e, locus),
        }
    }

    fn done(self) -> CheckRecord {
        CheckRecord {
            name: self.name,
            parameters: self.parameters,
            cases: self.cases,
            status: self.status,
        }
    }
}

type Runner = fn(&SuiteOptions) -> SuiteReport;

/// `(name, description, runner)` of every suite, sorted by name.
const SUITES: &[(&str, &str, Runner)] = &[
    ("alternating-sums", "alternating row sums of A_{m,r} vs the Euler-number formula", alternating_sums),
    ("b2-zero", "closed form for b2 = 0 vs the recurrence", b2_zero),
    ("cadet-leaves", "cadet-leaf census vs second-order Eulerian numbers", cadet_leaves),
    ("components", "component census of type-(E) histories vs the b = 1 recurrence", components),
    ("f-gram", "explicit F(n,k) vs the b = 1 recurrence, with integrality", f_gram),
    ("gen-identities", "derivative, product and sum rules for Gen(x,t)", gen_identities),
    ("grammar-recurrence", "coefficients of D^n(seed) vs the recurrence", grammar_recurrence),
    ("ode-gen", "formal ODE solution vs Gen(x,t) letterwise", ode_gen),
    ("r-excedances", "permutations by r-excedances vs A_r", r_excedances),
    ("rising-rowsum", "rising-factorial row sum for a1 = 0", witn1_rowsum_suite),
    ("row-sums", "row sums vs their product formulas", row_sums),
    ("second-order-egf", "second-order Eulerian EGF vs the W-series", second_order_egf),
    ("self-consistency", "each named family reproduces its own recurrence", self_consistency),
    ("set-partitions", "set partitions by blocks vs Stirling numbers", set_partitions),
    ("special-solutions", "closed-form solutions of the a2 = 0 and a1 = 0 systems", witn_solutions),
    ("stirling-descents", "Stirling r-permutations by descents vs B^(r)", stirling_descents),
    ("structural-counts", "history totals n! m^n and leaf counts m(n+1)", structural_counts),
    ("touchard", "Bell-polynomial form and sum formula for a2 = 0", touchard),
    ("tree-function", "tree function coefficients and T = z e^T", tree_function_suite),
    ("whitney-egf", "Whitney-Eulerian EGF closed form at rational points", whitney_egf),
    ("whitney-explicit", "explicit A_{m,r}(n,k) vs the recurrence, with integrality", whitney_explicit),
];

/// Names and one-line descriptions of all suites.
pub fn suite_names() -> impl Iterator<Item = (&'static str, &'static str)> {
    SUITES.iter().map(|(n, d, _)| (*n, *d))
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    SUITES
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, _, run)| run(opts))
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

/// Every suite, in name order.
pub fn run_all(opts: &SuiteOptions) -> Vec<SuiteReport> {
    SUITES.iter().map(|(_, _, run)| run(opts)).collect()
}

fn suite(name: &str, grid: String, checks: Vec<Check>) -> SuiteReport {
    SuiteReport {
        suite: name.into(),
        grid,
        checks: checks.into_iter().map(Check::done).collect(),
    }
}

fn q(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Whitney grid: `m in 1..=3`, `0 <= r <= m`.
pub fn whitney_grid() -> Vec<(i64, i64)> {
    (1..=3).flat_map(|m| (0..=m).map(move |r| (m, r))).collect()
}

/// All six-tuples with entries in `-range..=range`.
pub fn param_cube(range: i64) -> impl Iterator<Item = [i64; 6]> {
    let side = (2 * range + 1) as usize;
    (0..side.pow(6)).map(move |mut i| {
        let mut p = [0i64; 6];
        for slot in p.iter_mut().rev() {
            *slot = (i % side) as i64 - range;
            i /= side;
        }
        p
    })
}

/// Whether columns of the grammar expansion are distinguishable.
pub fn lattice_nondegenerate(p: &[i64; 6]) -> bool {
    p[1] != 0 || p[4] != 0
}

fn grammar_recurrence(o: &SuiteOptions) -> SuiteReport {
    let (range, n) = (o.range.unwrap_or(2), o.max_n.unwrap_or(6));
    let mut c = Check::new("extract_triangle == recurrence_triangle", format!("n <= {n}"));
    let mut skipped = 0;
    for p in param_cube(range) {
        if !lattice_nondegenerate(&p) {
            skipped += 1;
            continue;
        }
        let params = TriangleParams::from_ints(p);
        let locus = || format!("params {params}");
        match extract_triangle(&params, n) {
            Ok(t) => c.case(t.rows() == recurrence_triangle(&params, n).rows(), locus),
            Err(e) => c.error(e, locus),
        }
    }
    suite(
        "grammar-recurrence",
        format!("params in [-{range},{range}]^6 minus {skipped} with a1 = b1 = 0, n <= {n}"),
        vec![c],
    )
}

fn named_families(n: usize) -> Vec<(FamilyTag, Result<crate::Triangle>)> {
    let mut fams: Vec<FamilyTag> = whitney_grid()
        .into_iter()
        .map(|(m, r)| FamilyTag::WhitneyEulerian { m, r })
        .collect();
    fams.extend((0..=3).map(|r| FamilyTag::REulerian { r }));
    fams.extend((1..=3).map(|r| FamilyTag::SecondOrderEulerian { r }));
    fams.push(FamilyTag::Stirling2);
    fams.into_iter().map(|f| {
        let t = f.build(n);
        (f, t)
    }).collect()
}

fn self_consistency(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(7);
    let mut c = Check::new("every cell from its parents", format!("n <= {n}"));
    for (f, t) in named_families(n) {
        match t {
            Ok(t) => {
                let bad = t.first_inconsistency();
                c.case(bad.is_none(), || format!("{} cell {bad:?}", f.name()));
            }
            Err(e) => c.error(e, || f.name()),
        }
    }
    suite(
        "self-consistency",
        format!("whitney m<=3, r-eulerian r<=3, second-order r<=3, stirling2; n <= {n}"),
        vec![c],
    )
}

/// Closed-form row sum of a family, where one is known.
pub fn expected_row_sum(f: &FamilyTag, n: usize) -> Result<BigRational> {
    match f {
        FamilyTag::WhitneyEulerian { m, .. } => {
            Ok(q(factorial(n)) * crate::polyring::pow_rational_int(&int(*m), n as i64))
        }
        FamilyTag::REulerian { .. } => Ok(q(factorial(n))),
        FamilyTag::SecondOrderEulerian { r } => Ok((0..n as i64).map(|i| int(r * i + 1)).product()),
        FamilyTag::Stirling2 => Ok(bell_polynomial(n, &int(1))),
        FamilyTag::Gkp { params } => {
            let p = params.as_integers()?;
            match p {
                [a0, 0, a2, 1, 0, 0] if a2 != 0 => witn1_rowsum(a0, a2, n),
                _ => Err(Error::InvalidArgument(format!(
                    "no row-sum formula for {}",
                    f.name()
                ))),
            }
        }
    }
}

fn row_sums(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(7);
    let families: Vec<FamilyTag> = match o.families.is_empty() {
        false => o.families.clone(),
        true => whitney_grid()
            .into_iter()
            .map(|(m, r)| FamilyTag::WhitneyEulerian { m, r })
            .chain([FamilyTag::SecondOrderEulerian { r: 2 }])
            .collect(),
    };
    let grid = families.iter().map(FamilyTag::name).collect::<Vec<_>>().join(", ");
    let mut checks = Vec::new();
    for f in families {
        let mut c = Check::new("row sum", f.name());
        match f.build(n) {
            Ok(t) => {
                for i in 0..=n {
                    let r = expected_row_sum(&f, i).map(|e| t.row_sum(i).expect("row in range") == e);
                    c.result(r, || format!("n = {i}"));
                }
            }
            Err(e) => c.error(e, || "build".into()),
        }
        checks.push(c);
    }
    suite("row-sums", format!("{grid}; n <= {n}"), checks)
}

fn alternating_sums(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(7);
    let mut c = Check::new("sum (-1)^k A(n,k) == 2^n sum C(n,k) m^k E_k(0) r^(n-k)", format!("n <= {n}"));
    for (m, r) in whitney_grid() {
        let t = whitney_eulerian(m, r, n).expect("m >= 1");
        for i in 0..=n {
            c.case(
                t.alternating_row_sum(i).expect("row in range") == whitney_alternating_sum(m, r, i),
                || format!("m={m} r={r} n={i}"),
            );
        }
    }
    suite("alternating-sums", format!("m <= 3, 0 <= r <= m, n <= {n}"), vec![c])
}

fn whitney_explicit(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(7);
    let mut c = Check::new("explicit sum == recurrence", format!("n <= {n}"));
    for (m, r) in whitney_grid() {
        let t = whitney_eulerian(m, r, n).expect("m >= 1");
        for i in 0..=n {
            for k in 0..=i {
                c.case(q(a_mr_explicit(m, r, i, k)) == t.get(i as i64, k as i64), || {
                    format!("m={m} r={r} n={i} k={k}")
                });
            }
        }
    }
    suite("whitney-explicit", format!("m <= 3, 0 <= r <= m, n <= {n}"), vec![c])
}

fn a_grid() -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for a0 in 0..=2 {
        for a1 in 1..=3 {
            for a2 in 1..=3 {
                out.push((a0, a1, a2));
            }
        }
    }
    out
}

fn f_gram(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(7);
    let mut eq = Check::new("explicit F(n,k) == recurrence", format!("b = 1, n <= {n}"));
    let mut integral = Check::new("explicit F(n,k) is an integer", format!("n <= {n}"));
    for (a0, a1, a2) in a_grid() {
        let t = recurrence_triangle(&TriangleParams::from_ints([a0, a1, a2, 1, 0, 0]), n);
        for i in 0..=n {
            for k in 0..=i {
                let locus = || format!("a=({a0},{a1},{a2}) n={i} k={k}");
                match f_gram_explicit(a0, a1, a2, i, k) {
                    Ok(v) => {
                        integral.case(v.is_integer(), locus);
                        eq.case(v == t.get(i as i64, k as i64), locus);
                    }
                    Err(e) => eq.error(e, locus),
                }
            }
        }
    }
    suite("f-gram", format!("a0 in 0..=2, a1, a2 in 1..=3, n <= {n}"), vec![eq, integral])
}

fn b2_zero(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(7);
    let mut c = Check::new("prefactor * F(n,k) == recurrence", format!("b2 = 0, n <= {n}"));
    for (a0, a1, a2) in a_grid() {
        for b0 in 0..=2 {
            for b1 in 0..=2 {
                let t = recurrence_triangle(&TriangleParams::from_ints([a0, a1, a2, b0, b1, 0]), n);
                for i in 0..=n {
                    for k in 0..=i {
                        let r = t_b2zero_explicit(a0, a1, a2, b0, b1, i, k)
                            .map(|v| v == t.get(i as i64, k as i64));
                        c.result(r, || format!("a=({a0},{a1},{a2}) b=({b0},{b1}) n={i} k={k}"));
                    }
                }
            }
        }
    }
    suite(
        "b2-zero",
        format!("a0 in 0..=2, a1, a2 in 1..=3, b0, b1 in 0..=2, n <= {n}"),
        vec![c],
    )
}

fn touchard(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(6);
    let mut poly = Check::new("sum F(n,k) alpha^k == Bell form", format!("n <= {n}"));
    let mut entries = Check::new("sum over Stirling numbers == recurrence", format!("a2 = 0, n <= {n}"));
    for a0 in 0..=2 {
        for a1 in 1..=3 {
            let t = recurrence_triangle(&TriangleParams::from_ints([a0, a1, 0, 1, 0, 0]), n);
            for i in 0..=n {
                let r = touchard_check(a0, a1, i).map(|(l, r)| l == r);
                poly.result(r, || format!("a0={a0} a1={a1} n={i}"));
                for k in 0..=i {
                    entries.case(f_a2zero_explicit(a0, a1, i, k) == t.get(i as i64, k as i64), || {
                        format!("a0={a0} a1={a1} n={i} k={k}")
                    });
                }
            }
        }
    }
    suite("touchard", format!("a0 in 0..=2, a1 in 1..=3, n <= {n}"), vec![poly, entries])
}

fn witn1_rowsum_suite(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(7);
    let mut c = Check::new("rising factorial == row sum", format!("a1 = 0, b = 1, n <= {n}"));
    for a0 in 0..=2 {
        for a2 in [-2, -1, 1, 2, 3] {
            let t = recurrence_triangle(&TriangleParams::from_ints([a0, 0, a2, 1, 0, 0]), n);
            for i in 0..=n {
                let r = witn1_rowsum(a0, a2, i).map(|v| v == t.row_sum(i).expect("row in range"));
                c.result(r, || format!("a0={a0} a2={a2} n={i}"));
            }
        }
    }
    suite("rising-rowsum", format!("a0 in 0..=2, a2 in {{-2,-1,1,2,3}}, n <= {n}"), vec![c])
}

/// Rational points for the Whitney EGF check.
pub fn whitney_points() -> Vec<(BigRational, BigRational)> {
    vec![(int(2), int(1)), (int(1), int(2)), (int(3), int(2))]
}

fn whitney_egf(o: &SuiteOptions) -> SuiteReport {
    let order = o.order.unwrap_or(6);
    let mut c = Check::new("EGF == closed form", format!("order {order}"));
    for (m, r) in whitney_grid() {
        for (u, v) in whitney_points() {
            c.report(verify_closed_form_whitney(m, r, &u, &v, order), || {
                format!("m={m} r={r} (u,v)=({u},{v})")
            });
        }
    }
    suite(
        "whitney-egf",
        format!("m <= 3, 0 <= r <= m, (u,v) in {{(2,1),(1,2),(3,2)}}, order {order}"),
        vec![c],
    )
}

fn letter_rule(x: &VariableId, pairs: &[(&VariableId, i64)]) -> (VariableId, LaurentPoly) {
    (
        x.clone(),
        LaurentPoly::term(
            Monomial::from_pairs(pairs.iter().map(|(y, e)| ((*y).clone(), *e))),
            BigRational::one(),
        ),
    )
}

/// The grammars on which the ODE solution and `Gen` are compared: Hao
/// grammars for all parameters in `[-range, range]^6` with a nondegenerate
/// lattice, `{x -> x^2 y, y -> x^2 y}`, and the two type-(E) families.
pub fn ode_battery(range: i64) -> Vec<(String, Grammar)> {
    let mut out: Vec<(String, Grammar)> = param_cube(range)
        .filter(lattice_nondegenerate)
        .map(|p| {
            let params = TriangleParams::from_ints(p);
            (format!("hao({params})"), hao_grammar(&params).expect("integer params"))
        })
        .collect();
    let (x, y, u, v) = (
        VariableId::new("x"),
        VariableId::new("y"),
        VariableId::new("u"),
        VariableId::new("v"),
    );
    out.push((
        "x -> x^2*y, y -> x^2*y".into(),
        Grammar::new([letter_rule(&x, &[(&x, 2), (&y, 1)]), letter_rule(&y, &[(&x, 2), (&y, 1)])])
            .expect("valid grammar"),
    ));
    for a1 in -2..=3 {
        out.push((
            format!("u -> u*v^{a1}, v -> v"),
            Grammar::new([letter_rule(&u, &[(&u, 1), (&v, a1)]), letter_rule(&v, &[(&v, 1)])])
                .expect("valid grammar"),
        ));
    }
    for a1 in -1..=2 {
        for a2 in -2..=2 {
            out.push((
                format!("u -> u*v^{}, v -> v^{}", a1 + a2, a2 + 1),
                Grammar::new([
                    letter_rule(&u, &[(&u, 1), (&v, a1 + a2)]),
                    letter_rule(&v, &[(&v, a2 + 1)]),
                ])
                .expect("valid grammar"),
            ));
        }
    }
    out
}

/// Whether the ODE solution equals `Gen` on every letter of `g`.
pub fn ode_matches_gen(g: &Grammar, order: usize) -> Result<bool> {
    let sol = solve_ode(&OdeSystem::from_grammar(g), order)?;
    for x in g.alphabet() {
        if sol[x] != gen_series(g, &LaurentPoly::var(x), order)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ode_gen(o: &SuiteOptions) -> SuiteReport {
    let (range, order) = (o.range.unwrap_or(1), o.order.unwrap_or(8));
    let mut c = Check::new("solve_ode == gen_series", format!("order {order}"));
    for (name, g) in ode_battery(range) {
        c.result(ode_matches_gen(&g, order), || name.clone());
    }
    suite(
        "ode-gen",
        format!("hao params in [-{range},{range}]^6 (nondegenerate) plus x->x^2y and type-(E) families, order {order}"),
        vec![c],
    )
}

fn gen_identities(o: &SuiteOptions) -> SuiteReport {
    let order = o.order.unwrap_or(6);
    let mut deriv = Check::new("d/dt Gen(x) == Gen(D x)", format!("order {order}"));
    let mut mult = Check::new("Gen(xy) == Gen(x) Gen(y)", format!("order {order}"));
    let mut add = Check::new("Gen(x + y) == Gen(x) + Gen(y)", format!("order {order}"));
    let (u, v) = (crate::grammar::u_var(), v_var());
    let polys = [
        LaurentPoly::var(&u),
        LaurentPoly::var(&v),
        LaurentPoly::term(Monomial::from_pairs([(u.clone(), 1), (v.clone(), 2)]), int(1)),
        LaurentPoly::term(Monomial::from_pairs([(u.clone(), -1), (v.clone(), 1)]), rational(3, 2)),
    ];
    for p in param_cube(1).filter(lattice_nondegenerate).step_by(7) {
        let params = TriangleParams::from_ints(p);
        let g = hao_grammar(&params).expect("integer params");
        let name = || format!("hao({params})");
        let mut run = || -> Result<()> {
            for a in &polys {
                let lhs = gen_series(&g, a, order)?.differentiate();
                let rhs = gen_series(&g, &g.apply(a)?, order - 1)?;
                deriv.case(lhs == rhs, || format!("{} x={a}", name()));
                for b in &polys {
                    let ga = gen_series(&g, a, order)?;
                    let gb = gen_series(&g, b, order)?;
                    mult.case(gen_series(&g, &(a * b), order)? == ga.mul(&gb), || {
                        format!("{} x={a} y={b}", name())
                    });
                    add.case(gen_series(&g, &(a + b), order)? == ga.add(&gb), || {
                        format!("{} x={a} y={b}", name())
                    });
                }
            }
            Ok(())
        };
        if let Err(e) = run() {
            deriv.error(e, name);
        }
    }
    suite(
        "gen-identities",
        format!("every 7th nondegenerate hao grammar with params in [-1,1]^6, 4 test polynomials, order {order}"),
        vec![deriv, mult, add],
    )
}

fn witn_solutions(o: &SuiteOptions) -> SuiteReport {
    let order = o.order.unwrap_or(5);
    let mut w2 = Check::new("a2 = 0 solution and Bell form", format!("order {order}"));
    let mut w1 = Check::new("a1 = 0 algebraic relations", format!("order {order}"));
    for a0 in 0..=2 {
        for a in [-2, -1, 1, 2, 3] {
            w2.report(verify_sol_witn2(a0, a, order), || format!("a0={a0} a1={a}"));
            w1.report(verify_sol_witn1(a0, a, order), || format!("a0={a0} a2={a}"));
        }
    }
    suite(
        "special-solutions",
        format!("a0 in 0..=2, a1 (resp. a2) in {{-2,-1,1,2,3}}, order {order}"),
        vec![w2, w1],
    )
}

fn tree_function_suite(o: &SuiteOptions) -> SuiteReport {
    let order = o.order.unwrap_or(12);
    let tf = tree_function(order);
    let mut coeffs = Check::new("[z^n] T == n^(n-1)/n!", format!("order {order}"));
    for n in 1..=order {
        let expect = BigRational::new(
            num_traits::pow(BigInt::from(n), n - 1),
            factorial(n),
        );
        coeffs.case(*tf.coeff(n) == expect, || format!("n = {n}"));
    }
    coeffs.case(tf.coeff(0).is_zero(), || "n = 0".into());
    let mut fe = Check::new("T - z e^T == 0", format!("order {order}"));
    let z = TruncatedSeries::t(order);
    match tf.exp() {
        Ok(e) => {
            let residual = tf.sub(&z.mul(&e));
            fe.case(residual.is_zero(), || format!("order {:?}", residual.first_difference(&TruncatedSeries::zero(order))));
        }
        Err(e) => fe.error(e, || "exp".into()),
    }
    suite("tree-function", format!("order {order}"), vec![coeffs, fe])
}

fn second_order_egf(o: &SuiteOptions) -> SuiteReport {
    let order = o.order.unwrap_or(6);
    let ys = o.y.clone().unwrap_or_else(|| vec![rational(1, 2), int(2)]);
    let mut c = Check::new("EGF == (1-y) W/(1-W)", format!("order {order}"));
    for y in &ys {
        c.report(verify_secondorder_egf(y, order), || format!("y = {y}"));
    }
    let grid = ys.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    suite("second-order-egf", format!("y in {{{grid}}}, order {order}"), vec![c])
}

fn compare_census(
    c: &mut Check,
    census: Result<crate::enumerate::StructureCensus>,
    row: &[BigRational],
    shift: i64,
    locus: impl Fn() -> String,
) {
    match census {
        Ok(census) => c.case(
            census.fits_row(row.len(), shift) && census.to_row(row.len(), shift) == row,
            || format!("{}: census {census:?}", locus()),
        ),
        Err(e) => c.error(e, locus),
    }
}

fn stirling_descents(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(4);
    let mut c = Check::new("descent census == B^(r) row", format!("n <= {n}"));
    for r in 1..=3 {
        let b = second_order_eulerian(r, n).expect("r >= 1");
        for i in 0..=n {
            compare_census(&mut c, stirling_descent_census(i, r as usize, o.budget), b.row(i).expect("row"), 0, || {
                format!("r={r} n={i}")
            });
        }
    }
    suite("stirling-descents", format!("r in 1..=3, n <= {n}"), vec![c])
}

fn r_excedances(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(7);
    let mut c = Check::new("excedance census == A_r row", format!("n <= {n}"));
    for r in 0..=2 {
        let a = r_eulerian(r, n).expect("r >= 0");
        for i in 0..=n {
            compare_census(&mut c, r_excedance_census(i, r as usize, o.budget), a.row(i).expect("row"), 0, || {
                format!("r={r} n={i}")
            });
        }
    }
    suite("r-excedances", format!("r in 0..=2, n <= {n}"), vec![c])
}

fn cadet_leaves(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(4);
    let mut c = Check::new("cadet bucket j == B^(r)(n, j-1)", format!("n <= {n}"));
    let r = 2;
    let b = second_order_eulerian(r, n).expect("r >= 1");
    for i in 0..=n {
        compare_census(&mut c, cadet_leaf_census(i, r, o.budget), b.row(i).expect("row"), 1, || {
            format!("r={r} n={i}")
        });
    }
    suite("cadet-leaves", format!("r = 2, n <= {n}"), vec![c])
}

fn set_partitions(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(7);
    let mut c = Check::new("block census == S(n,k) row", format!("n <= {n}"));
    let s = stirling2_triangle(n);
    for i in 0..=n {
        compare_census(&mut c, set_partition_census(i, o.budget), s.row(i).expect("row"), 0, || {
            format!("n={i}")
        });
    }
    suite("set-partitions", format!("n <= {n}"), vec![c])
}

/// `(a0, a1, a2)` with entries in `0..=2`.
pub fn components_grid() -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for a0 in 0..=2 {
        for a1 in 0..=2 {
            for a2 in 0..=2 {
                out.push((a0, a1, a2));
            }
        }
    }
    out
}

fn components(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(4);
    let mut c = Check::new("component census == b = 1 recurrence row", format!("n <= {n}"));
    for (a0, a1, a2) in components_grid() {
        let t = recurrence_triangle(&TriangleParams::from_ints([a0, a1, a2, 1, 0, 0]), n);
        for i in 0..=n {
            compare_census(&mut c, census_components(a0, a1, a2, i, o.budget), t.row(i).expect("row"), 0, || {
                format!("a=({a0},{a1},{a2}) n={i}")
            });
        }
    }
    suite("components", format!("a0, a1, a2 in 0..=2, n <= {n}"), vec![c])
}

/// Totals and final leaf counts of all histories of the Whitney grammar.
pub fn whitney_history_stats(m: i64, r: i64, n: usize, budget: u64) -> Result<(BigUint, Vec<usize>)> {
    let params = FamilyTag::WhitneyEulerian { m, r }.params();
    let g = hao_grammar(&params)?;
    let seed = hao_seed(&params)?;
    let mut total = BigUint::zero();
    let mut leaf_counts: BTreeMap<usize, ()> = BTreeMap::new();
    for_each_history(&g, &seed, n, budget, |_, leaves, w| {
        total += w;
        leaf_counts.insert(leaves.len(), ());
    })?;
    Ok((total, leaf_counts.into_keys().collect()))
}

fn structural_counts(o: &SuiteOptions) -> SuiteReport {
    let n = o.max_n.unwrap_or(5);
    let mut totals = Check::new("history total == n! m^n", format!("n <= {n}"));
    let mut leaves = Check::new("every history ends with m(n+1) leaves", format!("n <= {n}"));
    let mut buckets = Check::new("v-leaf census == A_{m,r} row", format!("n <= {n}"));
    for (m, r) in whitney_grid() {
        let t = whitney_eulerian(m, r, n).expect("m >= 1");
        for i in 0..=n {
            let locus = || format!("m={m} r={r} n={i}");
            match whitney_history_stats(m, r, i, o.budget) {
                Ok((total, counts)) => {
                    let expect = factorial(i) * num_traits::pow(BigInt::from(m), i);
                    totals.case(BigInt::from(total) == expect, locus);
                    leaves.case(counts == vec![m as usize * (i + 1)], locus);
                }
                Err(e) => totals.error(e, locus),
            }
            // bucket k <-> v-degree m k + r
            let params = FamilyTag::WhitneyEulerian { m, r }.params();
            let census = hao_grammar(&params).and_then(|g| {
                census_vleaves(&g, &hao_seed(&params)?, i, &v_var(), o.budget)
            });
            match census {
                Ok(census) => {
                    let row: Vec<BigRational> = (0..=i)
                        .map(|k| BigRational::from_integer(BigInt::from(census.get(m * k as i64 + r))))
                        .collect();
                    buckets.case(row == t.row(i).expect("row") && census.total() == census_total_from(&row), locus);
                }
                Err(e) => buckets.error(e, locus),
            }
        }
    }
    suite("structural-counts", format!("m <= 3, 0 <= r <= m, n <= {n}"), vec![totals, leaves, buckets])
}

fn census_total_from(row: &[BigRational]) -> BigUint {
    row.iter()
        .map(|x| x.to_integer().to_biguint().unwrap_or_default())
        .sum()
}

use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use gramtri::enumerate::{r_excedance_census, set_partition_census, stirling_descent_census, DEFAULT_BUDGET};
use gramtri::export::{parse_json, render_json};
use gramtri::fps::{gen_series, TruncatedSeries};
use gramtri::grammar::{hao_grammar, u_var, v_var};
use gramtri::parse::{parse_poly, parse_rational};
use gramtri::polyring::{fmt_rational, int, rational};
use gramtri::triangles::{recurrence_triangle, FamilyTag};
use gramtri::{extract_triangle, BigRational, Grammar, LaurentPoly, Monomial, TriangleParams, VariableId};

fn ratio() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rational(n, d))
}

fn nonzero_ratio() -> impl Strategy<Value = BigRational> {
    ratio().prop_filter("nonzero", |q| !num_traits::Zero::is_zero(q))
}

fn letters() -> Vec<VariableId> {
    vec![VariableId::new("u"), VariableId::new("v"), VariableId::new("w")]
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec(-2i64..=3, 3)
        .prop_map(|es| Monomial::from_pairs(letters().into_iter().zip(es)))
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((monomial(), ratio()), 0..5).prop_map(LaurentPoly::from_terms)
}

fn point() -> impl Strategy<Value = BTreeMap<VariableId, BigRational>> {
    prop::collection::vec(nonzero_ratio(), 3).prop_map(|vs| letters().into_iter().zip(vs).collect())
}

/// Single-monomial two-letter grammars `u -> c u^i v^j, v -> d u^k v^l`.
fn grammar() -> impl Strategy<Value = Grammar> {
    (nonzero_ratio(), -1i64..=2, -1i64..=2, nonzero_ratio(), -1i64..=2, -1i64..=2).prop_map(
        |(c, i, j, d, k, l)| {
            let (u, v) = (u_var(), v_var());
            Grammar::new([
                (u.clone(), LaurentPoly::term(Monomial::from_pairs([(u.clone(), i), (v.clone(), j)]), c)),
                (v.clone(), LaurentPoly::term(Monomial::from_pairs([(u.clone(), k), (v.clone(), l)]), d)),
            ])
            .unwrap()
        },
    )
}

fn uv_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-1i64..=2, -1i64..=2, ratio()), 0..4).prop_map(|ts| {
        LaurentPoly::from_terms(
            ts.into_iter()
                .map(|(i, j, c)| (Monomial::from_pairs([(u_var(), i), (v_var(), j)]), c)),
        )
    })
}

fn unit_series(order: usize) -> impl Strategy<Value = TruncatedSeries<BigRational>> {
    prop::collection::vec(ratio(), order).prop_map(move |tail| {
        let mut cs = vec![int(1)];
        cs.extend(tail);
        TruncatedSeries::new(cs, order)
    })
}

fn params() -> impl Strategy<Value = [i64; 6]> {
    prop::array::uniform6(-3i64..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, LaurentPoly::zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn partial_derivative_is_a_derivation(a in poly(), b in poly(), i in 0usize..3) {
        let x = &letters()[i];
        prop_assert_eq!((&a * &b).partial(x), &(&a.partial(x) * &b) + &(&a * &b.partial(x)));
        prop_assert_eq!((&a + &b).partial(x), &a.partial(x) + &b.partial(x));
    }

    #[test]
    fn eval_is_a_ring_homomorphism(a in poly(), b in poly(), at in point()) {
        let (ea, eb) = (a.eval(&at).unwrap(), b.eval(&at).unwrap());
        prop_assert_eq!((&a * &b).eval(&at).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).eval(&at).unwrap(), ea + eb);
    }

    #[test]
    fn render_then_parse(a in poly()) {
        let text = a.to_string();
        prop_assert_eq!(parse_poly(&text).unwrap(), a);
    }

    #[test]
    fn rational_text_round_trip(q in ratio()) {
        prop_assert_eq!(parse_rational(&fmt_rational(&q)).unwrap(), q);
    }

    #[test]
    fn derivation_is_linear_and_leibniz(g in grammar(), a in uv_poly(), b in uv_poly(), c in ratio()) {
        let d = |p: &LaurentPoly| g.apply(p).unwrap();
        prop_assert_eq!(d(&(&a + &b.scale(&c))), &d(&a) + &d(&b).scale(&c));
        prop_assert_eq!(d(&(&a * &b)), &(&d(&a) * &b) + &(&a * &d(&b)));
    }

    #[test]
    fn gen_is_additive_and_multiplicative(g in grammar(), a in uv_poly(), b in uv_poly()) {
        let n = 4;
        let (ga, gb) = (gen_series(&g, &a, n).unwrap(), gen_series(&g, &b, n).unwrap());
        prop_assert_eq!(gen_series(&g, &(&a + &b), n).unwrap(), ga.add(&gb));
        prop_assert_eq!(gen_series(&g, &(&a * &b), n).unwrap(), ga.mul(&gb));
    }

    #[test]
    fn gen_derivative(g in grammar(), a in uv_poly()) {
        let n = 4;
        let lhs = gen_series(&g, &a, n).unwrap().differentiate();
        prop_assert_eq!(lhs, gen_series(&g, &g.apply(&a).unwrap(), n - 1).unwrap());
    }

    #[test]
    fn exp_inverts_log(f in unit_series(6)) {
        prop_assert_eq!(f.log().unwrap().exp().unwrap(), f);
    }

    #[test]
    fn rational_powers_add(f in unit_series(5), p in ratio(), q in ratio()) {
        let lhs = f.pow_rational(&p).unwrap().mul(&f.pow_rational(&q).unwrap());
        prop_assert_eq!(lhs, f.pow_rational(&(p + q)).unwrap());
    }

    #[test]
    fn inverse_is_inverse(f in unit_series(6)) {
        prop_assert_eq!(f.mul(&f.inverse().unwrap()), TruncatedSeries::one(6));
    }

    #[test]
    fn recurrence_triangles_are_consistent(p in params()) {
        let t = recurrence_triangle(&TriangleParams::from_ints(p), 6);
        prop_assert_eq!(t.first_inconsistency(), None);
    }

    #[test]
    fn grammar_extraction_matches_recurrence(p in params()) {
        prop_assume!(p[1] != 0 || p[4] != 0);
        let params = TriangleParams::from_ints(p);
        prop_assert!(hao_grammar(&params).is_ok());
        let (a, b) = (extract_triangle(&params, 5).unwrap(), recurrence_triangle(&params, 5));
        prop_assert_eq!(a.rows(), b.rows());
    }

    #[test]
    fn json_round_trip(p in prop::array::uniform6(ratio()), n in 0usize..6) {
        let t = FamilyTag::gkp(TriangleParams::new(p)).build(n).unwrap();
        let s = render_json(&t);
        let back = parse_json(&s).unwrap();
        prop_assert_eq!(render_json(&back), s);
        prop_assert_eq!(back, t);
    }
}

#[test]
fn census_totals() {
    let mut double_factorial = BigInt::from(1);
    for n in 0..=4usize {
        if n > 0 {
            double_factorial *= 2 * n - 1;
        }
        let c = stirling_descent_census(n, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(BigInt::from(c.total()), double_factorial);
    }
    let mut factorial = BigInt::from(1);
    for n in 0..=6usize {
        if n > 0 {
            factorial *= n;
        }
        for r in 0..=2 {
            assert_eq!(BigInt::from(r_excedance_census(n, r, DEFAULT_BUDGET).unwrap().total()), factorial);
        }
    }
    let bell = [1u32, 1, 2, 5, 15, 52, 203, 877];
    for (n, b) in bell.iter().enumerate() {
        assert_eq!(set_partition_census(n, DEFAULT_BUDGET).unwrap().total(), (*b).into());
    }
}

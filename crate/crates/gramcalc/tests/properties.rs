//! Property-based invariants of the algebraic core: ring axioms, the
//! Leibniz rule, multiplicativity of the generating function, constant
//! absorption, and the rho-extension arithmetic against an independent
//! symbolic-expansion oracle.

use num::{BigInt, One, Zero};
use proptest::prelude::*;

use gramcalc::grammar::Grammar;
use gramcalc::poly::{rat, rho_modulus, LaurentPoly, Monomial, Rational, RhoElement, Variable};
use gramcalc::series::Series;

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn arb_monomial(lo: i32, hi: i32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(lo..=hi, 5).prop_map(|exps| {
        let mut m = Monomial::one();
        for (v, e) in Variable::ALL.into_iter().zip(exps) {
            m = m.with_exp(v, e);
        }
        m
    })
}

/// Sparse Laurent polynomial with up to four small terms.
fn arb_poly(lo: i32, hi: i32) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((arb_monomial(lo, hi), arb_rational()), 0..=4)
        .prop_map(LaurentPoly::from_terms)
}

/// Nonnegative-exponent polynomial in a, x, y of degree <= 3 per variable.
fn arb_plain_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(
        ((0i32..=3, 0i32..=3, 0i32..=3), arb_rational()),
        0..=4,
    )
    .prop_map(|terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|((a, x, y), c)| {
            (
                Monomial::one()
                    .with_exp(Variable::A, a)
                    .with_exp(Variable::X, x)
                    .with_exp(Variable::Y, y),
                c,
            )
        }))
    })
}

fn preset_grammars() -> Vec<Grammar> {
    ["peak", "run", "h", "uv", "euler", "andre"]
        .into_iter()
        .map(|name| Grammar::preset(name).unwrap())
        .collect()
}

/// Independent oracle for the rho product: expand with `u` standing in for
/// rho, then reduce `u^2 -> y^2 - x^2`. Inputs avoid `u`, so the stand-in
/// is free.
fn rho_mul_by_expansion(e1: &RhoElement, e2: &RhoElement) -> RhoElement {
    let u = LaurentPoly::var(Variable::U);
    let lift = |e: &RhoElement| e.p() + &(e.q() * &u);
    let expanded = &lift(e1) * &lift(e2);
    let modulus = rho_modulus();
    let mut p = LaurentPoly::zero();
    let mut q = LaurentPoly::zero();
    for (m, c) in expanded.terms() {
        let e = m.exp(Variable::U);
        let base = LaurentPoly::monomial(m.with_exp(Variable::U, 0), c.clone());
        match e {
            0 => p = &p + &base,
            1 => q = &q + &base,
            2 => p = &p + &(&base * &modulus),
            _ => unreachable!("inputs are rho-linear"),
        }
    }
    RhoElement::new(p, q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(p in arb_poly(-3, 3), q in arb_poly(-3, 3), r in arb_poly(-3, 3)) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    }

    #[test]
    fn leibniz_rule(p in arb_poly(-3, 3), q in arb_poly(-3, 3)) {
        for g in preset_grammars() {
            let lhs = g.derive(&(&p * &q));
            let rhs = &(&g.derive(&p) * &q) + &(&p * &g.derive(&q));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gen_multiplicativity(
        f in arb_monomial(-2, 2),
        h in arb_monomial(-2, 2),
        cf in arb_rational(),
        ch in arb_rational(),
    ) {
        let g = Grammar::run();
        let pf = LaurentPoly::monomial(f, cf);
        let ph = LaurentPoly::monomial(h, ch);
        let lhs = g.gen_series(&(&pf * &ph), 5);
        let rhs = &g.gen_series(&pf, 5) * &g.gen_series(&ph, 5);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_absorption(f in arb_poly(-2, 2)) {
        let cases = [
            ("peak", "x^2 - y^2"),
            ("run", "x*a^-1 + y*a^-1"),
            ("euler", "x - y"),
            ("andre", "y^2 - 2*x"),
        ];
        for (name, constant) in cases {
            let g = Grammar::preset(name).unwrap();
            let c = LaurentPoly::parse(constant).unwrap();
            prop_assert!(g.is_constant(&c));
            let mut cur = &c * &f;
            let mut plain = f.clone();
            for _ in 0..=8 {
                prop_assert_eq!(&cur, &(&c * &plain));
                cur = g.derive(&cur);
                plain = g.derive(&plain);
            }
        }
    }
}

proptest! {
    #[test]
    fn linearity_of_derive(
        p in arb_poly(-3, 3),
        q in arb_poly(-3, 3),
        alpha in arb_rational(),
        beta in arb_rational(),
    ) {
        for g in preset_grammars() {
            let combo = &p.scale(&alpha) + &q.scale(&beta);
            let lhs = g.derive(&combo);
            let rhs = &g.derive(&p).scale(&alpha) + &g.derive(&q).scale(&beta);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn monomial_power_inverses(m in arb_monomial(-2, 2), c in arb_rational(), k in 1i32..=5) {
        prop_assume!(!c.is_zero());
        let p = LaurentPoly::monomial(m, c);
        let pos = p.pow(k).unwrap();
        let neg = p.pow(-k).unwrap();
        prop_assert_eq!(&pos * &neg, LaurentPoly::one());
    }

    #[test]
    fn rho_product_matches_symbolic_expansion(
        p1 in arb_plain_poly(),
        q1 in arb_plain_poly(),
        p2 in arb_plain_poly(),
        q2 in arb_plain_poly(),
    ) {
        let e1 = RhoElement::new(p1, q1);
        let e2 = RhoElement::new(p2, q2);
        let direct = &e1 * &e2;
        let oracle = rho_mul_by_expansion(&e1, &e2);
        prop_assert_eq!(direct, oracle);
    }

    #[test]
    fn no_zero_terms_survive_operations(
        p in arb_poly(-2, 2),
        q in arb_poly(-2, 2),
        ops in prop::collection::vec(0u8..3, 1..6),
    ) {
        let mut acc = p;
        for op in ops {
            acc = match op {
                0 => &acc + &q,
                1 => &acc - &q,
                _ => &acc * &q,
            };
            prop_assert!(acc.terms().all(|(_, c)| !c.is_zero()));
        }
        // subtraction from itself cancels completely
        let diff = &acc - &acc;
        prop_assert!(diff.is_zero());
        prop_assert_eq!(diff.num_terms(), 0);
    }

    #[test]
    fn exp_group_law(coeffs in prop::collection::vec(arb_plain_poly(), 6)) {
        let mut v = vec![RhoElement::zero()];
        v.extend(coeffs.into_iter().map(RhoElement::from_poly));
        let s = Series::new(6, v);
        let e = s.exp().unwrap();
        let e_neg = (-&s).exp().unwrap();
        prop_assert_eq!(&e * &e_neg, Series::one(6));
    }

    #[test]
    fn display_parse_round_trip(p in arb_poly(-3, 3)) {
        let rendered = p.to_string();
        let back = LaurentPoly::parse(&rendered).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn derivative_of_power_rule_for_negative_exponents(k in -5i32..=-1) {
        // D(x^k) = k x^(k-1) D(x) under the peak grammar
        let g = Grammar::peak();
        let xk = LaurentPoly::monomial(Monomial::one().with_exp(Variable::X, k), rat(1));
        let expected = LaurentPoly::monomial(
            Monomial::one().with_exp(Variable::X, k).with_exp(Variable::Y, 1),
            rat(k as i64),
        );
        prop_assert_eq!(g.derive(&xk), expected);
    }
}

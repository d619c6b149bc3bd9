//! Substitution grammars and the formal derivative `D` they induce.
//!
//! A grammar maps variables to polynomial right-hand sides; `D` extends the
//! substitution to all Laurent polynomials by linearity, the power rule
//! `D(x^k) = k x^{k-1} D(x)` (valid for negative `k`), and the Leibniz rule
//! across the variables of a monomial. Variables without a rule are
//! constants (`D = 0`).

use std::collections::BTreeMap;
use std::fmt;



use crate::poly::{rat, LaurentPoly, Rational, RhoElement, Variable};
use crate::series::Series;
use crate::{Error, Result};

/// A substitution grammar: finitely many rules `v -> polynomial`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    rules: BTreeMap<Variable, LaurentPoly>,
}

/// Names accepted by [`Grammar::preset`].
pub const PRESET_NAMES: [&str; 6] = ["peak", "run", "h", "uv", "euler", "andre"];

impl Grammar {
    pub fn new<I: IntoIterator<Item = (Variable, LaurentPoly)>>(rules: I) -> Grammar {
        Grammar {
            rules: rules.into_iter().collect(),
        }
    }

    /// `{x -> xy, y -> x^2}`, the grammar of the peak polynomials.
    pub fn peak() -> Grammar {
        Grammar::parse("x -> x*y; y -> x^2").unwrap()
    }

    /// `{a -> ax, x -> xy, y -> x^2}`, the grammar of up-down runs.
    pub fn run() -> Grammar {
        Grammar::parse("a -> a*x; x -> x*y; y -> x^2").unwrap()
    }

    /// `{a -> ay, x -> xy, y -> x^2}`; `D^n(a)` here mirrors `D^n(x)` under
    /// the peak grammar.
    pub fn h() -> Grammar {
        Grammar::parse("a -> a*y; x -> x*y; y -> x^2").unwrap()
    }

    /// `{u -> v^2, v -> uv/2}`, the transformed grammar for interior peaks.
    pub fn uv() -> Grammar {
        Grammar::parse("u -> v^2; v -> 1/2*u*v").unwrap()
    }

    /// `{x -> xy, y -> xy}`, generating the Eulerian polynomials
    /// (`x - y` is a constant).
    pub fn euler() -> Grammar {
        Grammar::parse("x -> x*y; y -> x*y").unwrap()
    }

    /// `{x -> xy, y -> x}`, generating the Andre polynomials
    /// (`y^2 - 2x` is a constant).
    pub fn andre() -> Grammar {
        Grammar::parse("x -> x*y; y -> x").unwrap()
    }

    /// Look up a registered grammar by name.
    pub fn preset(name: &str) -> Result<Grammar> {
        match name {
            "peak" => Ok(Grammar::peak()),
            "run" => Ok(Grammar::run()),
            "h" => Ok(Grammar::h()),
            "uv" => Ok(Grammar::uv()),
            "euler" => Ok(Grammar::euler()),
            "andre" => Ok(Grammar::andre()),
            _ => Err(Error::UnknownGrammar(name.to_string())),
        }
    }

    /// Parse rule syntax such as `"x->x*y; y->x^2"` (rational coefficients
    /// allowed, e.g. `"v->1/2*u*v"`).
    pub fn parse(src: &str) -> Result<Grammar> {
        let mut rules = BTreeMap::new();
        for chunk in src.split(';') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let (lhs, rhs) = chunk
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("rule {chunk:?} lacks '->'")))?;
            let v: Variable = lhs.trim().parse()?;
            let image = LaurentPoly::parse(rhs)?;
            if rules.insert(v, image).is_some() {
                return Err(Error::Parse(format!("duplicate rule for {v}")));
            }
        }
        if rules.is_empty() {
            return Err(Error::Parse("empty grammar".into()));
        }
        Ok(Grammar { rules })
    }

    /// The right-hand side for `v`, if any.
    pub fn rule(&self, v: Variable) -> Option<&LaurentPoly> {
        self.rules.get(&v)
    }

    pub fn rules(&self) -> impl Iterator<Item = (&Variable, &LaurentPoly)> {
        self.rules.iter()
    }

    /// The formal derivative of `f`.
    pub fn derive(&self, f: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in f.terms() {
            for (&v, image) in self.rules.iter() {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                // c * e * m/v * image
                let base = m.with_exp(v, e - 1);
                let part = image.mul_monomial(&base, &(c * rat(e as i64)));
                out = &out + &part;
            }
        }
        out
    }

    /// `n`-fold derivative; `derive_n(f, 0) = f`.
    pub fn derive_n(&self, f: &LaurentPoly, n: usize) -> LaurentPoly {
        let mut cur = f.clone();
        for _ in 0..n {
            cur = self.derive(&cur);
        }
        cur
    }

    /// Whether `D(f) = 0`.
    pub fn is_constant(&self, f: &LaurentPoly) -> bool {
        self.derive(f).is_zero()
    }

    /// Truncated generating function `sum_n D^n(f) t^n / n!`, with
    /// coefficients embedded in the rho-extension (zero rho-part).
    pub fn gen_series(&self, f: &LaurentPoly, order: usize) -> Series {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut cur = f.clone(); // invariant: cur = D^n(f) / n!
        coeffs.push(RhoElement::from_poly(cur.clone()));
        for n in 1..=order {
            cur = self.derive(&cur).scale(&Rational::new(1.into(), n.into()));
            coeffs.push(RhoElement::from_poly(cur.clone()));
        }
        Series::new(order, coeffs)
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, image) in self.rules.iter() {
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "{} -> {}", v, image)?;
        }
        Ok(())
    }
}

/// Convenience used across the test and identity suites.
pub fn poly(s: &str) -> LaurentPoly {
    LaurentPoly::parse(s).unwrap_or_else(|e| panic!("bad polynomial literal {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rho_modulus;

    #[test]
    fn derive_of_rule_variable() {
        assert_eq!(Grammar::peak().derive(&poly("x")), poly("x*y"));
    }

    #[test]
    fn x2_minus_y2_is_constant_for_peak() {
        let g = Grammar::peak();
        assert_eq!(g.derive(&poly("x^2 - y^2")), LaurentPoly::zero());
        assert!(g.is_constant(&poly("x^2 - y^2")));
    }

    #[test]
    fn derive_of_x_inverse() {
        assert_eq!(Grammar::peak().derive(&poly("x^-1")), poly("-x^-1*y"));
    }

    #[test]
    fn run_grammar_reproduces_displayed_table() {
        let g = Grammar::run();
        let a = poly("a");
        assert_eq!(g.derive_n(&a, 1), poly("a*x"));
        assert_eq!(g.derive_n(&a, 2), poly("a*x*y + a*x^2"));
        assert_eq!(g.derive_n(&a, 3), poly("a*x*y^2 + 3*a*x^2*y + 2*a*x^3"));
        assert_eq!(
            g.derive_n(&a, 4),
            poly("a*x*y^3 + 7*a*x^2*y^2 + 11*a*x^3*y + 5*a*x^4")
        );
        assert_eq!(
            g.derive_n(&a, 6),
            poly("a*x*y^5 + 31*a*x^2*y^4 + 148*a*x^3*y^3 + 268*a*x^4*y^2 + 211*a*x^5*y + 61*a*x^6")
        );
    }

    #[test]
    fn x_inverse_derivative_pattern() {
        // D^{2n}(x^-1) = x^-1 (y^2-x^2)^n and D^{2n+1}(x^-1) = -x^-1 y (y^2-x^2)^n
        let g = Grammar::peak();
        let xinv = poly("x^-1");
        for n in 0..=6usize {
            let kernel = rho_modulus().pow(n as i32).unwrap();
            let even = poly("x^-1") * &kernel;
            let odd = poly("-x^-1*y") * &kernel;
            assert_eq!(g.derive_n(&xinv, 2 * n), even, "even case n={n}");
            assert_eq!(g.derive_n(&xinv, 2 * n + 1), odd, "odd case n={n}");
        }
    }

    #[test]
    fn constants_of_the_side_grammars() {
        assert!(Grammar::run().is_constant(&poly("x*a^-1 + y*a^-1")));
        assert!(Grammar::euler().is_constant(&poly("x - y")));
        assert!(Grammar::andre().is_constant(&poly("y^2 - 2*x")));
        assert!(!Grammar::peak().is_constant(&poly("x")));
    }

    #[test]
    fn unruled_variables_are_constants() {
        // `a` has no rule in the peak grammar
        assert!(Grammar::peak().is_constant(&poly("a")));
        assert_eq!(Grammar::peak().derive(&poly("a*x")), poly("a*x*y"));
    }

    #[test]
    fn gen_series_low_orders() {
        let g = Grammar::peak();
        let s = g.gen_series(&poly("x"), 2);
        assert_eq!(s.coeff(0), &RhoElement::from_poly(poly("x")));
        assert_eq!(s.coeff(1), &RhoElement::from_poly(poly("x*y")));
        assert_eq!(
            s.coeff(2),
            &RhoElement::from_poly(poly("1/2*x*y^2 + 1/2*x^3"))
        );

        let one = g.gen_series(&LaurentPoly::one(), 5);
        assert_eq!(one, Series::one(5));

        // coefficient of t^3 in Gen(a, t) under the run grammar
        let s3 = Grammar::run().gen_series(&poly("a"), 3);
        assert_eq!(
            s3.coeff(3),
            &RhoElement::from_poly(poly("1/6*a*x*y^2 + 1/2*a*x^2*y + 1/3*a*x^3"))
        );
    }

    #[test]
    fn h_grammar_mirrors_peak_x() {
        // x * D_H^n(a) = a * D_G^n(x) for the first few n
        let h = Grammar::h();
        let g = Grammar::peak();
        for n in 0..=10 {
            let lhs = poly("x") * h.derive_n(&poly("a"), n);
            let rhs = poly("a") * g.derive_n(&poly("x"), n);
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn preset_and_inline_parse() {
        for name in PRESET_NAMES {
            assert!(Grammar::preset(name).is_ok(), "{name}");
        }
        assert!(matches!(
            Grammar::preset("nope"),
            Err(Error::UnknownGrammar(_))
        ));
        let g = Grammar::parse("x->x*y; y->x^2").unwrap();
        assert_eq!(g, Grammar::peak());
        assert!(Grammar::parse("x->x*y; x->y").is_err());
        assert!(Grammar::parse("q->x").is_err());
    }
}

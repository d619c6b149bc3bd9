//! Truncated formal power series in `t` with coefficients in the
//! rho-extension of the Laurent-polynomial ring.
//!
//! Every closed-form generating function of the calculus is assembled here
//! from two rho-free kernels,
//!
//! ```text
//!   C(t) = sum_n (y^2-x^2)^n t^(2n)   / (2n)!     (cosh(t*rho))
//!   S(t) = sum_n (y^2-x^2)^n t^(2n+1) / (2n+1)!   (sinh(t*rho) / rho)
//! ```
//!
//! so that most formulas have plain polynomial coefficients; only the
//! `e^(rho t)`-style formulas carry a genuine rho-part, and those are
//! verified cross-multiplied rather than by division.
//!
//! A series records the modulus used for `rho^2` (default `y^2 - x^2`);
//! the Stanley forms live in the specialized ring with `rho^2 = 1 - x^2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, One};

use crate::poly::{rho_modulus, LaurentPoly, Monomial, Rational, RhoElement, Variable};
use crate::{Error, Result};

/// Truncated power series: coefficients of `t^0 .. t^order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    order: usize,
    coeffs: Vec<RhoElement>,
    rho_sq: LaurentPoly,
}

impl Series {
    /// Series over the default modulus `y^2 - x^2`.
    pub fn new(order: usize, coeffs: Vec<RhoElement>) -> Series {
        Series::new_mod(order, coeffs, rho_modulus())
    }

    /// Series over an explicit modulus for `rho^2`.
    pub fn new_mod(order: usize, coeffs: Vec<RhoElement>, rho_sq: LaurentPoly) -> Series {
        assert_eq!(coeffs.len(), order + 1, "need order+1 coefficients");
        Series {
            order,
            coeffs,
            rho_sq,
        }
    }

    pub fn zero(order: usize) -> Series {
        Series::constant(order, RhoElement::zero())
    }

    pub fn one(order: usize) -> Series {
        Series::constant(order, RhoElement::one())
    }

    /// Constant series with the default modulus.
    pub fn constant(order: usize, c: RhoElement) -> Series {
        Series::constant_mod(order, c, rho_modulus())
    }

    pub fn constant_mod(order: usize, c: RhoElement, rho_sq: LaurentPoly) -> Series {
        let mut coeffs = vec![RhoElement::zero(); order + 1];
        coeffs[0] = c;
        Series::new_mod(order, coeffs, rho_sq)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rho_sq(&self) -> &LaurentPoly {
        &self.rho_sq
    }

    /// Coefficient of `t^n`.
    pub fn coeff(&self, n: usize) -> &RhoElement {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[RhoElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RhoElement::is_zero)
    }

    fn check_compatible(&self, other: &Series) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        if self.rho_sq != other.rho_sq {
            return Err(Error::ModulusMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(Series::new_mod(self.order, coeffs, self.rho_sq.clone()))
    }

    pub fn try_mul(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let mut coeffs = vec![RhoElement::zero(); self.order + 1];
        for i in 0..=self.order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(self.order - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = self.coeffs[i].mul_mod(&other.coeffs[j], &self.rho_sq);
                coeffs[i + j] = &coeffs[i + j] + &prod;
            }
        }
        Ok(Series::new_mod(self.order, coeffs, self.rho_sq.clone()))
    }

    /// Derivative with respect to `t`; the truncation order drops by one.
    pub fn ddt(&self) -> Series {
        assert!(self.order >= 1, "ddt needs order >= 1");
        let coeffs = (0..self.order)
            .map(|n| self.coeffs[n + 1].scale(&Rational::from_integer(BigInt::from(n as u64 + 1))))
            .collect();
        Series::new_mod(self.order - 1, coeffs, self.rho_sq.clone())
    }

    /// Drop coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Series {
        assert!(order <= self.order);
        Series::new_mod(
            order,
            self.coeffs[..=order].to_vec(),
            self.rho_sq.clone(),
        )
    }

    /// Coefficient-wise product with a polynomial.
    pub fn scale_poly(&self, f: &LaurentPoly) -> Series {
        let coeffs = self.coeffs.iter().map(|c| c.scale_poly(f)).collect();
        Series::new_mod(self.order, coeffs, self.rho_sq.clone())
    }

    /// Coefficient-wise product with a rho-extension element.
    pub fn scale_rho(&self, e: &RhoElement) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.mul_mod(e, &self.rho_sq))
            .collect();
        Series::new_mod(self.order, coeffs, self.rho_sq.clone())
    }

    /// Multiplicative inverse. The constant coefficient must be a unit:
    /// a single monomial times a nonzero rational with zero rho-part.
    pub fn reciprocal(&self) -> Result<Series> {
        let c0 = &self.coeffs[0];
        if !c0.q().is_zero() {
            return Err(Error::NonUnitConstantTerm);
        }
        let (m, c) = c0.p().as_monomial().ok_or(Error::NonUnitConstantTerm)?;
        let inv0 = RhoElement::from_poly(LaurentPoly::monomial(m.pow(-1), c.recip()));
        let mut out = vec![RhoElement::zero(); self.order + 1];
        out[0] = inv0.clone();
        for n in 1..=self.order {
            // r_n = -r_0 * sum_{j=1..n} s_j r_{n-j}
            let mut acc = RhoElement::zero();
            for j in 1..=n {
                acc = &acc + &self.coeffs[j].mul_mod(&out[n - j], &self.rho_sq);
            }
            out[n] = (-&acc).mul_mod(&inv0, &self.rho_sq);
        }
        Ok(Series::new_mod(self.order, out, self.rho_sq.clone()))
    }

    /// `exp` of a series with zero constant term.
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ExpConstantTerm);
        }
        let mut acc = Series::one_like(self);
        let mut term = Series::one_like(self);
        for k in 1..=self.order {
            term = term
                .try_mul(self)?
                .scale_rational(&Rational::new(1.into(), BigInt::from(k as u64)));
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    fn one_like(model: &Series) -> Series {
        Series::constant_mod(model.order, RhoElement::one(), model.rho_sq.clone())
    }

    fn scale_rational(&self, c: &Rational) -> Series {
        let coeffs = self.coeffs.iter().map(|e| e.scale(c)).collect();
        Series::new_mod(self.order, coeffs, self.rho_sq.clone())
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.try_add(rhs).expect("series mismatch")
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.try_add(&-rhs).expect("series mismatch")
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.try_mul(rhs).expect("series mismatch")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        Series::new_mod(self.order, coeffs, self.rho_sq.clone())
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in self.coeffs.iter().enumerate() {
            writeln!(f, "t^{n}: {c}")?;
        }
        Ok(())
    }
}

/// Identifiers of the built-in closed forms.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FormulaId {
    /// `Gen(x^-1, t) = x^-1 C(t) - x^-1 y S(t)`.
    Bg,
    /// `Gen(x, t)`, the reciprocal of `bg`.
    Genx,
    /// `Gen(x^-1 y, t) = x^-1 y C(t) - x^-1 (y^2-x^2) S(t)`.
    GenXinvY,
    /// `Gen(y, t) = Gen(x, t) * Gen(x^-1 y, t)`.
    Geny,
    /// `1 - y + Gen(y, t)`, the bivariate interior-peak series.
    MBivariate,
    /// Numerator of the closed form for `Gen(a, t)`.
    GenaNum,
    /// Denominator of the closed form for `Gen(a, t)`.
    GenaDen,
    /// Numerator of the univariate up-down-run formula (`rho^2 = 1-x^2`).
    StanleyNum,
    /// Denominator of the univariate up-down-run formula.
    StanleyDen,
    /// The even kernel `C(t)`.
    CoshRho,
    /// The odd kernel `S(t)`.
    SinhOverRho,
}

impl FormulaId {
    pub const ALL: [FormulaId; 11] = [
        FormulaId::Bg,
        FormulaId::Genx,
        FormulaId::GenXinvY,
        FormulaId::Geny,
        FormulaId::MBivariate,
        FormulaId::StanleyNum,
        FormulaId::StanleyDen,
        FormulaId::GenaNum,
        FormulaId::GenaDen,
        FormulaId::CoshRho,
        FormulaId::SinhOverRho,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::Bg => "bg",
            FormulaId::Genx => "genx",
            FormulaId::GenXinvY => "gen_xinv_y",
            FormulaId::Geny => "geny",
            FormulaId::MBivariate => "m_bivariate",
            FormulaId::StanleyNum => "stanley_num",
            FormulaId::StanleyDen => "stanley_den",
            FormulaId::GenaNum => "gena_num",
            FormulaId::GenaDen => "gena_den",
            FormulaId::CoshRho => "cosh_rho",
            FormulaId::SinhOverRho => "sinh_over_rho",
        }
    }
}

impl FromStr for FormulaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<FormulaId> {
        FormulaId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownFormula(s.to_string()))
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

fn factorial_rational(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k as u64);
    }
    Rational::from_integer(acc)
}

/// `C(t)`: coefficient of `t^(2m)` is `rho_sq^m / (2m)!`.
pub fn kernel_cosh(order: usize, rho_sq: &LaurentPoly) -> Series {
    let mut coeffs = vec![RhoElement::zero(); order + 1];
    let mut power = LaurentPoly::one();
    let mut m = 0usize;
    while 2 * m <= order {
        let c = power.scale(&factorial_rational(2 * m).recip());
        coeffs[2 * m] = RhoElement::from_poly(c);
        power = &power * rho_sq;
        m += 1;
    }
    Series::new_mod(order, coeffs, rho_sq.clone())
}

/// `S(t)`: coefficient of `t^(2m+1)` is `rho_sq^m / (2m+1)!`.
pub fn kernel_sinh_over_rho(order: usize, rho_sq: &LaurentPoly) -> Series {
    let mut coeffs = vec![RhoElement::zero(); order + 1];
    let mut power = LaurentPoly::one();
    let mut m = 0usize;
    while 2 * m + 1 <= order {
        let c = power.scale(&factorial_rational(2 * m + 1).recip());
        coeffs[2 * m + 1] = RhoElement::from_poly(c);
        power = &power * rho_sq;
        m += 1;
    }
    Series::new_mod(order, coeffs, rho_sq.clone())
}

/// `e^(rho t) = C(t) + rho S(t)`.
fn exp_rho(order: usize, rho_sq: &LaurentPoly) -> Series {
    let c = kernel_cosh(order, rho_sq);
    let s = kernel_sinh_over_rho(order, rho_sq);
    &c + &s.scale_rho(&RhoElement::rho())
}

fn pvar(v: Variable) -> LaurentPoly {
    LaurentPoly::var(v)
}

fn pmono(v: Variable, e: i32) -> LaurentPoly {
    LaurentPoly::monomial(Monomial::one().with_exp(v, e), Rational::one())
}

/// Build a named closed form truncated at `order`.
pub fn closed_form(id: FormulaId, order: usize) -> Series {
    let x = pvar(Variable::X);
    let y = pvar(Variable::Y);
    let modulus = rho_modulus(); // y^2 - x^2
    match id {
        FormulaId::CoshRho => kernel_cosh(order, &modulus),
        FormulaId::SinhOverRho => kernel_sinh_over_rho(order, &modulus),
        FormulaId::Bg => {
            let c = kernel_cosh(order, &modulus);
            let s = kernel_sinh_over_rho(order, &modulus);
            let xinv = pmono(Variable::X, -1);
            let xinv_y = &xinv * &y;
            &c.scale_poly(&xinv) - &s.scale_poly(&xinv_y)
        }
        FormulaId::Genx => closed_form(FormulaId::Bg, order)
            .reciprocal()
            .expect("bg has unit constant term"),
        FormulaId::GenXinvY => {
            let c = kernel_cosh(order, &modulus);
            let s = kernel_sinh_over_rho(order, &modulus);
            let xinv = pmono(Variable::X, -1);
            &c.scale_poly(&(&xinv * &y)) - &s.scale_poly(&(&xinv * &modulus))
        }
        FormulaId::Geny => {
            &closed_form(FormulaId::Genx, order) * &closed_form(FormulaId::GenXinvY, order)
        }
        FormulaId::MBivariate => {
            let one_minus_y = &LaurentPoly::one() - &y;
            let adjust = Series::constant(order, RhoElement::from_poly(one_minus_y));
            &adjust + &closed_form(FormulaId::Geny, order)
        }
        FormulaId::GenaNum => {
            // a (y - x) [ y + rho + 2x e^(rho t) + (y - rho) e^(2 rho t) ]
            let e = exp_rho(order, &modulus);
            let e2 = &e * &e;
            let head = Series::constant(order, RhoElement::new(y.clone(), LaurentPoly::one()));
            let mid = e.scale_poly(&x.scale(&crate::poly::rat(2)));
            let tail = e2.scale_rho(&RhoElement::new(y.clone(), -LaurentPoly::one()));
            let inner = &(&head + &mid) + &tail;
            let a_y_minus_x = &pvar(Variable::A) * &(&y - &x);
            inner.scale_poly(&a_y_minus_x)
        }
        FormulaId::GenaDen => {
            // (y^2-x^2) + y rho + ((y^2-x^2) - y rho) e^(2 rho t)
            let e = exp_rho(order, &modulus);
            let e2 = &e * &e;
            let head = Series::constant(order, RhoElement::new(modulus.clone(), y.clone()));
            let tail = e2.scale_rho(&RhoElement::new(modulus.clone(), -&y));
            &head + &tail
        }
        FormulaId::StanleyNum => {
            // (1-x) [ 1 + rho + 2x e^(rho t) + (1 - rho) e^(2 rho t) ],  rho^2 = 1 - x^2
            let m = stanley_modulus();
            let e = exp_rho(order, &m);
            let e2 = &e * &e;
            let head = Series::constant_mod(
                order,
                RhoElement::new(LaurentPoly::one(), LaurentPoly::one()),
                m.clone(),
            );
            let mid = e.scale_poly(&x.scale(&crate::poly::rat(2)));
            let tail = e2.scale_rho(&RhoElement::new(LaurentPoly::one(), -LaurentPoly::one()));
            let inner = &(&head + &mid) + &tail;
            inner.scale_poly(&(&LaurentPoly::one() - &x))
        }
        FormulaId::StanleyDen => {
            // (1-x^2) + rho + ((1-x^2) - rho) e^(2 rho t),  rho^2 = 1 - x^2
            let m = stanley_modulus();
            let e = exp_rho(order, &m);
            let e2 = &e * &e;
            let head =
                Series::constant_mod(order, RhoElement::new(m.clone(), LaurentPoly::one()), m.clone());
            let tail = e2.scale_rho(&RhoElement::new(m.clone(), -LaurentPoly::one()));
            &head + &tail
        }
    }
}

/// `1 - x^2`, the modulus of the Stanley specialization (`a = y = 1`).
pub fn stanley_modulus() -> LaurentPoly {
    &LaurentPoly::one() - &pmono(Variable::X, 2)
}

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gcd::gcd;
use super::monomial::MAX_VARS;
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Exact element of Q(x1, ..., xn).
///
/// Canonical form: numerator and denominator are coprime integer
/// polynomials, their integer contents are coprime, and the denominator's
/// leading coefficient (graded-lex) is positive. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_poly(Polynomial::constant(BigInt::from(v)))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::from_parts_reduced(
            Polynomial::constant(q.numer().clone()),
            Polynomial::constant(q.denom().clone()),
        )
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn var(index: usize) -> Self {
        Self::from_poly(Polynomial::var(index))
    }

    /// Builds `num / den`, reducing to canonical form.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = gcd(&num, &den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(Self::from_parts_reduced(n, d))
    }

    /// Normalizes integer content and sign of an already coprime pair.
    fn from_parts_reduced(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut c = num.content().gcd(&den.content());
        if den.lc().is_negative() {
            c = -c;
        }
        if c.is_one() {
            RationalFunction { num, den }
        } else {
            RationalFunction {
                num: num.div_int_exact(&c),
                den: den.div_int_exact(&c),
            }
        }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The constant value, if this function is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(BigRational::new(n, d))
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn support(&self) -> u32 {
        self.num.support() | self.den.support()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_parts_reduced(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        let e = e as u32;
        Ok(Self::from_parts_reduced(self.num.pow(e), self.den.pow(e)))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self * &Self::from_integer(k)
    }

    /// Partial derivative with respect to the coordinate at `var`.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < MAX_VARS);
        let dn = self.num.derivative(var);
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            if dn.is_zero() {
                return Self::zero();
            }
            return Self::new(dn, self.den.clone()).expect("nonzero denominator");
        }
        // (n' d - n d') / d^2, cancelling the common factor of d first
        let g = gcd(&self.den, &dd);
        let dd_g = dd.div_exact(&g).expect("gcd divides");
        let d_g = self.den.div_exact(&g).expect("gcd divides");
        let top = &(&dn * &d_g) - &(&self.num * &dd_g);
        let bottom = &self.den * &d_g;
        Self::new(top, bottom).expect("nonzero denominator")
    }

    /// Exact value at a point; fails on a pole.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        let d = self.den.eval_rational(point);
        if d.is_zero() {
            return Err(Error::Pole(point_str(point)));
        }
        Ok(self.num.eval_rational(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    /// Canonical text: `num` when the denominator is 1, otherwise `(num)/(den)`.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.format_with(names);
        }
        format!("({})/({})", self.num.format_with(names), self.den.format_with(names))
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let on = if negate { -&other.num } else { other.num.clone() };
        if self.den == other.den {
            let n = &self.num + &on;
            return Self::new(n, self.den.clone()).expect("nonzero denominator");
        }
        if self.den.is_constant() && other.den.is_constant() {
            let n = &self.num.scale(&other.den.lc()) + &on.scale(&self.den.lc());
            let d = self.den.scale(&other.den.lc());
            return Self::from_parts_reduced_checked(n, d);
        }
        let g = gcd(&self.den, &other.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = other.den.div_exact(&g).expect("gcd divides");
        let n = &(&self.num * &d2) + &(&on * &d1);
        if n.is_zero() {
            return Self::zero();
        }
        let d = &self.den * &d2;
        if g.is_constant() {
            return Self::from_parts_reduced(n, d);
        }
        // only factors of g can cancel
        let h = gcd(&n, &g);
        if h.is_one() {
            Self::from_parts_reduced(n, d)
        } else {
            Self::from_parts_reduced(
                n.div_exact(&h).expect("gcd divides"),
                d.div_exact(&h).expect("gcd divides"),
            )
        }
    }

    fn from_parts_reduced_checked(num: Polynomial, den: Polynomial) -> Self {
        // denominator constant here, so the pair is coprime as polynomials
        Self::from_parts_reduced(num, den)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(&self.num * &other.num);
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        Self::from_parts_reduced(&n1 * &n2, &d1 * &d2)
    }
}

fn point_str(point: &[BigRational]) -> String {
    point.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&[]))
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        self.mul_impl(rhs)
    }
}

/// Panics on division by zero; use [`RationalFunction::checked_div`] to handle it.
impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -self.num,
            den: self.den,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<RationalFunction> for &'a RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = RationalFunction>>(iter: I) -> Self {
        iter.fold(RationalFunction::zero(), |acc, x| &acc + &x)
    }
}

impl From<i64> for RationalFunction {
    fn from(v: i64) -> Self {
        RationalFunction::from_integer(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> RationalFunction {
        RationalFunction::var(i)
    }

    fn k(v: i64) -> RationalFunction {
        RationalFunction::from_integer(v)
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn add_common_denominator() {
        let a = &x(0) / &x(1);
        let b = &x(1) / &x(0);
        let s = &a + &b;
        let expect = RationalFunction::new(
            &(x(0).numer() * x(0).numer()) + &(x(1).numer() * x(1).numer()),
            x(0).numer() * x(1).numer(),
        )
        .unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn difference_of_squares_division() {
        let num = &(&x(0) * &x(0)) - &(&x(1) * &x(1));
        let den = &x(0) - &x(1);
        assert_eq!(&num / &den, &x(0) + &x(1));
    }

    #[test]
    fn mul_by_zero_absorbs() {
        let f = &(&x(0) + &k(3)) / &x(2);
        assert!((&f * &k(0)).is_zero());
    }

    #[test]
    fn divide_by_zero_is_error() {
        assert!(matches!(x(0).checked_div(&k(0)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn derivative_examples() {
        // d/dx1 (1/4)(1/x2 + 1/x1) = -1/(4 x1^2)
        let f = &RationalFunction::from_ratio(1, 4) * &(&k(1) / &x(1) + &k(1) / &x(0));
        let expect = &RationalFunction::from_ratio(-1, 4) / &(&x(0) * &x(0));
        assert_eq!(f.derivative(0), expect);
        assert!((&x(0) * &x(1)).derivative(2).is_zero());
        assert_eq!((&x(0) / &x(1)).derivative(1), -(&x(0) / &(&x(1) * &x(1))));
    }

    #[test]
    fn evaluation_and_poles() {
        let f = &RationalFunction::from_ratio(1, 4) * &(&k(1) / &x(1) + &k(1) / &x(0));
        let one = vec![q(1); 4];
        assert_eq!(f.eval(&one).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(RationalFunction::zero().eval(&one).unwrap(), q(0));
        let g = &k(1) / &(&x(0) - &x(1));
        let p = vec![q(2), q(2), q(1), q(1)];
        assert!(matches!(g.eval(&p), Err(Error::Pole(_))));
    }

    #[test]
    fn canonical_sign_and_content() {
        let a = RationalFunction::new(
            Polynomial::constant(BigInt::from(2)),
            &Polynomial::var(0).scale(&BigInt::from(-4)) + &Polynomial::constant(BigInt::from(6)),
        )
        .unwrap();
        // 2 / (-4 x1 + 6) = -1 / (2 x1 - 3)
        assert_eq!(a.numer().constant_value(), Some(BigInt::from(-1)));
        assert_eq!(a.denom().lc(), BigInt::from(2));
    }

    #[test]
    fn zero_test_by_expansion() {
        let a = &(&x(0) * &x(0)) - &(&x(1) * &x(1));
        let b = &(&x(0) - &x(1)) * &(&x(0) + &x(1));
        assert!((&a - &b).is_zero());
        assert!(!(&x(0) - &x(1)).is_zero());
    }
}

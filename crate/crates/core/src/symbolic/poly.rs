use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::{Monomial, MAX_VARS};

/// Multivariate polynomial with integer coefficients.
///
/// Terms are kept strictly decreasing in graded-lex order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, BigInt)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial {
                terms: vec![(Monomial::ONE, c)],
            }
        }
    }

    pub fn var(index: usize) -> Self {
        assert!(index < MAX_VARS, "variable index out of range");
        Polynomial {
            terms: vec![(Monomial::var(index), BigInt::one())],
        }
    }

    pub fn monomial(m: Monomial, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(mut terms: Vec<(Monomial, BigInt)>) -> Self {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, BigInt)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Polynomial { terms: out }
    }

    /// Terms already sorted strictly decreasing with nonzero coefficients.
    fn from_sorted_unchecked(terms: Vec<(Monomial, BigInt)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Polynomial { terms }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// True for a single term `c * x^a`.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> BigInt {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_default()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|t| t.0.exp(var)).max().unwrap_or(0)
    }

    /// Bitmask of the variables that occur.
    pub fn support(&self) -> u32 {
        self.terms.iter().fold(0, |acc, t| acc | t.0.support())
    }

    /// Positive gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::ONE;
        };
        let mut g = *first;
        for (m, _) in it {
            g = g.gcd(m);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial::from_sorted_unchecked(self.terms.iter().map(|(m, a)| (*m, a * c)).collect())
    }

    /// Divides every coefficient by `c`; `c` must divide each exactly.
    pub fn div_int_exact(&self, c: &BigInt) -> Polynomial {
        Polynomial::from_sorted_unchecked(
            self.terms
                .iter()
                .map(|(m, a)| {
                    debug_assert!((a % c).is_zero());
                    (*m, a / c)
                })
                .collect(),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial::from_sorted_unchecked(self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect())
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| t.div(m).map(|q| (q, a.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(Polynomial::from_sorted_unchecked(terms))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        if c.is_one() {
            self.clone()
        } else {
            self.div_int_exact(&c)
        }
    }

    fn combine(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate_other { -&t.1 } else { t.1.clone() };
            out.push((t.0, c));
        }
        Polynomial::from_sorted_unchecked(out)
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_monomial(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut prods = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                prods.push((ma.mul(mb), ca * cb));
            }
        }
        Polynomial::from_terms(prods)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact division; `None` when `divisor` does not divide `self` over Z.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if divisor.terms.len() == 1 {
            let (m, c) = &divisor.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (t, a) in &self.terms {
                let q = t.div(m)?;
                let (qc, r) = a.div_rem(c);
                if !r.is_zero() {
                    return None;
                }
                out.push((q, qc));
            }
            return Some(Polynomial::from_sorted_unchecked(out));
        }
        let (lm, lc) = divisor.terms[0].clone();
        // quick necessary check: degrees per variable
        for v in 0..MAX_VARS {
            if divisor.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((rm, rc)) = rem.terms.first() {
            let qm = rm.div(&lm)?;
            let (qc, r) = rc.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            rem = &rem - &divisor.mul_monomial(&qm, &qc);
            quotient.push((qm, qc));
        }
        Some(Polynomial::from_sorted_unchecked(quotient))
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .map(|(m, c)| {
                let e = m.exp(var);
                (m.with_exp(var, e - 1), c * BigInt::from(e))
            })
            .collect();
        Polynomial::from_terms(terms)
    }

    /// Coefficients as a polynomial in `var`; index k holds the coefficient of `var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(var) as usize].push((m.with_exp(var, 0), c.clone()));
        }
        // removing one variable from a grlex-sorted list can break the order
        buckets.into_iter().map(Polynomial::from_terms).collect()
    }

    pub fn from_coefficients_in(var: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut terms = Vec::new();
        for (k, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                debug_assert_eq!(m.exp(var), 0);
                terms.push((m.with_exp(var, k as u16), c.clone()));
            }
        }
        Polynomial::from_terms(terms)
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (v, x) in point.iter().enumerate().take(MAX_VARS) {
                let e = m.exp(v);
                if e > 0 {
                    t *= num_traits::pow::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (v, x) in point.iter().enumerate().take(MAX_VARS) {
                let e = m.exp(v);
                if e > 0 {
                    t *= x.powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `value` for `var`, leaving a polynomial free of `var`.
    pub fn substitute(&self, var: usize, value: &BigInt) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let e = m.exp(var) as usize;
                (m.with_exp(var, 0), c * num_traits::pow::pow(value.clone(), e))
            })
            .collect();
        Polynomial::from_terms(terms)
    }

    /// Formats with the given variable names using `*` and `^`.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = names.get(v).cloned().unwrap_or_else(|| format!("x{}", v + 1));
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&[]))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.combine(rhs, true)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.product(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_sorted_unchecked(self.terms.iter().map(|(m, c)| (*m, -c)).collect())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for t in &mut self.terms {
            t.1 = -std::mem::take(&mut t.1);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(i)
    }

    fn c(v: i64) -> Polynomial {
        Polynomial::constant(BigInt::from(v))
    }

    #[test]
    fn arithmetic_basics() {
        let a = &x(0) + &x(1);
        let b = &x(0) - &x(1);
        let prod = &a * &b;
        let expect = &(&x(0) * &x(0)) - &(&x(1) * &x(1));
        assert_eq!(prod, expect);
        assert!((&a - &a).is_zero());
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&(&x(0) + &c(1))), None);
    }

    #[test]
    fn derivative_power_rule() {
        let p = &(&x(0) * &x(0)).pow(2) * &x(1); // x1^4 x2
        assert_eq!(p.derivative(0), &(&x(0).pow(3) * &x(1)) * &c(4));
        assert!(p.derivative(2).is_zero());
    }

    #[test]
    fn content_and_primitive() {
        let p = &(&x(0) * &c(-6)) + &c(4);
        assert_eq!(p.content(), BigInt::from(2));
        assert_eq!(p.primitive(), &(&x(0) * &c(3)) - &c(2));
        let q = &(&x(0) * &x(1)) + &x(0).pow(2);
        assert_eq!(q.monomial_content(), Monomial::var(0));
    }

    #[test]
    fn coefficients_round_trip() {
        let p = &(&(&x(0) * &x(1)).pow(2) + &x(2)) - &(&x(1) * &c(3));
        let cs = p.coefficients_in(1);
        assert_eq!(cs.len(), 3);
        assert_eq!(Polynomial::from_coefficients_in(1, &cs), p);
    }

    #[test]
    fn formatting() {
        let names: Vec<String> = ["x1", "x2"].iter().map(|s| s.to_string()).collect();
        let p = &(&(&x(0).pow(2) * &x(1)) + &(&x(0) * &c(2))) - &c(1);
        assert_eq!(p.format_with(&names), "x1^2*x2 + 2*x1 - 1");
        assert_eq!((-&x(1)).format_with(&names), "-x2");
    }
}

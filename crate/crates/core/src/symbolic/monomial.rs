use std::cmp::Ordering;

/// Maximum number of coordinates a chart may carry.
pub const MAX_VARS: usize = 8;

/// Exponent vector of a monomial, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; MAX_VARS] };

    pub fn var(index: usize) -> Self {
        Self::var_pow(index, 1)
    }

    pub fn var_pow(index: usize, power: u16) -> Self {
        let mut exps = [0; MAX_VARS];
        exps[index] = power;
        Monomial { exps }
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        let mut m = Monomial::ONE;
        m.exps[..exps.len()].copy_from_slice(exps);
        m
    }

    #[inline]
    pub fn exp(&self, index: usize) -> u16 {
        self.exps[index]
    }

    #[inline]
    pub fn exponents(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.exps == [0; MAX_VARS]
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e += *o;
        }
        Monomial { exps }
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    #[inline]
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            if *e < *o {
                return None;
            }
            *e -= *o;
        }
        Some(Monomial { exps })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = (*e).min(*o);
        }
        Monomial { exps }
    }

    pub fn with_exp(&self, index: usize, power: u16) -> Monomial {
        let mut m = *self;
        m.exps[index] = power;
        m
    }

    /// Bitmask of variables with a nonzero exponent.
    pub fn support(&self) -> u32 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let x1 = Monomial::var(0);
        let x2 = Monomial::var(1);
        let x1x2 = x1.mul(&x2);
        let x1sq = x1.mul(&x1);
        assert!(x1 > x2);
        assert!(x2 > Monomial::ONE);
        assert!(x1x2 > x1);
        assert!(x1sq > x1x2);
        assert!(Monomial::var_pow(1, 3) > x1sq);
    }

    #[test]
    fn division_and_gcd() {
        let a = Monomial::from_exponents(&[2, 1, 0]);
        let b = Monomial::from_exponents(&[1, 1, 0]);
        assert_eq!(a.div(&b), Some(Monomial::var(0)));
        assert_eq!(b.div(&a), None);
        assert_eq!(a.gcd(&Monomial::from_exponents(&[0, 3, 1])), Monomial::var(1));
        assert_eq!(a.support(), 0b11);
    }
}

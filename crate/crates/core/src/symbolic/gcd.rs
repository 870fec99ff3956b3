//! Greatest common divisors of integer multivariate polynomials.
//!
//! The common case in curvature computations is a coprime pair, so every
//! call first runs a modular image test: for a variable `v`, reduce both
//! inputs modulo a large prime and evaluate every other variable at a
//! pseudo-random point. When the leading coefficients in `v` survive the
//! evaluation, the degree in `v` of the univariate image gcd bounds the
//! degree in `v` of the true gcd from above. A zero bound is a proof that
//! the gcd is free of `v`. Pairs that survive this filter go through the
//! heuristic evaluation gcd (evaluate one variable at a large integer,
//! recurse, rebuild by balanced base-`x` expansion and verify by division),
//! with a recursive subresultant PRS as the last resort.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::monomial::{Monomial, MAX_VARS};
use super::poly::Polynomial;

const PRIME: u64 = (1 << 61) - 1;

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

#[inline]
fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

fn powmod(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base);
        }
        base = mulmod(base, base);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

fn reduce(c: &BigInt) -> u64 {
    c.mod_floor(&BigInt::from(PRIME))
        .to_u64()
        .expect("reduced residue fits u64")
}

fn splitmix(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Univariate image in `var` after evaluating all other variables at `values`.
fn image(p: &Polynomial, var: usize, values: &[u64; MAX_VARS]) -> Vec<u64> {
    let mut out = vec![0u64; p.degree_in(var) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = reduce(c);
        for (j, &e) in m.exponents().iter().enumerate() {
            if j != var && e > 0 {
                t = mulmod(t, powmod(values[j], e as u64));
            }
        }
        let k = m.exp(var) as usize;
        out[k] = addmod(out[k], t);
    }
    out
}

fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        // a <- a mod b
        let inv = invmod(*b.last().unwrap());
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let factor = mulmod(*a.last().unwrap(), inv);
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = submod(a[i + shift], mulmod(factor, bc));
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Upper bound on `deg_var gcd(a, b)`, or `None` if every tried point was unlucky.
fn degree_bound(a: &Polynomial, b: &Polynomial, var: usize) -> Option<usize> {
    let da = a.degree_in(var) as usize;
    let db = b.degree_in(var) as usize;
    for attempt in 0..4u64 {
        let mut values = [0u64; MAX_VARS];
        for (j, v) in values.iter_mut().enumerate() {
            let r = splitmix(0x5EED ^ (attempt << 8) ^ ((var as u64) << 20) ^ (j as u64));
            *v = r % (PRIME - 2) + 2;
        }
        let mut ia = image(a, var, &values);
        let mut ib = image(b, var, &values);
        trim(&mut ia);
        trim(&mut ib);
        if ia.len() != da + 1 || ib.len() != db + 1 {
            continue;
        }
        return Some(univariate_gcd_degree(ia, ib));
    }
    None
}

/// Content of `p` viewed as a polynomial in the variables of `mask`.
fn content_in(p: &Polynomial, mask: u32) -> Polynomial {
    let mut groups: std::collections::BTreeMap<Monomial, Vec<(Monomial, BigInt)>> = std::collections::BTreeMap::new();
    for (m, c) in p.terms() {
        let mut key = Monomial::ONE;
        let mut rest = *m;
        for v in 0..MAX_VARS {
            if mask & (1 << v) != 0 {
                key = key.with_exp(v, m.exp(v));
                rest = rest.with_exp(v, 0);
            }
        }
        groups.entry(key).or_default().push((rest, c.clone()));
    }
    let mut acc = Polynomial::zero();
    for (_, terms) in groups {
        let coeff = Polynomial::from_terms(terms);
        acc = gcd(&acc, &coeff);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Primitive gcd with positive leading coefficient; `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma).expect("monomial content divides").primitive();
    let b1 = b.div_monomial(&mb).expect("monomial content divides").primitive();
    let core = gcd_core(&a1, &b1);
    if m.is_one() {
        core
    } else {
        core.mul_monomial(&m, &BigInt::one())
    }
}

/// Pairwise coprime, squarefree, primitive polynomials whose products
/// generate every non-constant factor of the inputs.
pub fn coprime_base<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> Vec<Polynomial> {
    let mut base: Vec<Polynomial> = Vec::new();
    for p in polys {
        if p.is_zero() || p.is_constant() {
            continue;
        }
        for var in 0..MAX_VARS {
            if p.degree_in(var) > 1 {
                refine(&mut base, gcd(p, &p.derivative(var)));
            }
        }
        refine(&mut base, p.primitive());
    }
    base
}

fn refine(base: &mut Vec<Polynomial>, p: Polynomial) {
    if p.is_constant() {
        return;
    }
    for i in 0..base.len() {
        let g = gcd(&p, &base[i]);
        if g.is_constant() {
            continue;
        }
        let q = base.swap_remove(i);
        let q_rest = q.div_exact(&g).expect("gcd divides");
        let p_rest = p.div_exact(&g).expect("gcd divides");
        refine(base, g);
        refine(base, q_rest.primitive());
        refine(base, p_rest.primitive());
        return;
    }
    base.push(p);
}

/// `a`, `b` primitive with positive leading coefficient and no monomial factor.
fn gcd_core(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    if a == b {
        return a.clone();
    }
    let (sa, sb) = (a.support(), b.support());
    let shared = sa & sb;
    if shared == 0 {
        return Polynomial::one();
    }
    if sa & !sb != 0 {
        return gcd(&content_in(a, sa & !sb), b);
    }
    if sb & !sa != 0 {
        return gcd(a, &content_in(b, sb & !sa));
    }

    let mut bounds = [0usize; MAX_VARS];
    for v in 0..MAX_VARS {
        if shared & (1 << v) == 0 {
            continue;
        }
        match degree_bound(a, b, v) {
            Some(0) => {
                // gcd is free of v: it divides every coefficient in v
                return gcd(&content_in(a, 1 << v), &content_in(b, 1 << v));
            }
            Some(d) => bounds[v] = d,
            None => bounds[v] = a.degree_in(v).min(b.degree_in(v)) as usize,
        }
    }

    let fits = |p: &Polynomial| (0..MAX_VARS).all(|v| p.degree_in(v) as usize <= bounds[v]);
    if fits(b) {
        if a.div_exact(b).is_some() {
            return b.clone();
        }
    } else if fits(a) && b.div_exact(a).is_some() {
        return a.clone();
    }

    if let Some(h) = heuristic_gcd(a, b, shared) {
        return h;
    }

    let main = (0..MAX_VARS)
        .filter(|v| shared & (1 << v) != 0)
        .min_by_key(|&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("shared variable exists");
    prs_gcd(a, b, main)
}

fn max_norm(p: &Polynomial) -> BigInt {
    p.terms().iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

/// Gcd over Z including the integer content.
fn integer_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let c = a.content().gcd(&b.content());
    let g = gcd(a, b);
    if c.is_one() {
        g
    } else {
        g.scale(&c)
    }
}

/// Rebuilds a polynomial in `var` from its value at `var = x` using balanced digits.
fn interpolate(mut h: Polynomial, x: &BigInt, var: usize) -> Polynomial {
    let half = x >> 1u32;
    let mut terms = Vec::new();
    let mut power = 0u16;
    while !h.is_zero() {
        let digits: Vec<(Monomial, BigInt)> = h
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut r = c.mod_floor(x);
                if r > half {
                    r -= x;
                }
                (*m, r)
            })
            .collect();
        let digit = Polynomial::from_terms(digits);
        for (m, c) in digit.terms() {
            terms.push((m.with_exp(var, power), c.clone()));
        }
        h = (&h - &digit).div_int_exact(x);
        power += 1;
    }
    Polynomial::from_terms(terms)
}

/// Heuristic gcd for primitive inputs; `None` when every evaluation point failed.
fn heuristic_gcd(a: &Polynomial, b: &Polynomial, shared: u32) -> Option<Polynomial> {
    let var = (0..MAX_VARS)
        .filter(|v| shared & (1 << v) != 0)
        .max_by_key(|&v| (a.degree_in(v).max(b.degree_in(v)), v))?;
    let (na, nb) = (max_norm(a), max_norm(b));
    let bound: BigInt = 2 * na.clone().min(nb.clone()) + 29;
    let ratio_a = &na / a.lc().abs();
    let ratio_b = &nb / b.lc().abs();
    let mut x = bound.clone().min(99 * bound.sqrt());
    x = x.max(2 * ratio_a.min(ratio_b) + 2);
    for _ in 0..6 {
        let ea = a.substitute(var, &x);
        let eb = b.substitute(var, &x);
        if !ea.is_zero() && !eb.is_zero() {
            let image = integer_gcd(&ea, &eb);
            let h = interpolate(image, &x, var).primitive();
            if !h.is_zero() && a.div_exact(&h).is_some() && b.div_exact(&h).is_some() {
                return Some(h);
            }
        }
        x = (&x * x.sqrt().sqrt() * 73794) / 27011;
    }
    None
}

type UPoly = Vec<Polynomial>;

fn udeg(p: &UPoly) -> usize {
    p.len() - 1
}

fn utrim(p: &mut UPoly) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn uis_zero(p: &UPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn ucontent(p: &UPoly) -> Polynomial {
    let mut acc = Polynomial::zero();
    for c in p {
        acc = gcd(&acc, c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn udiv_scalar(p: &UPoly, d: &Polynomial) -> UPoly {
    if d.is_one() {
        return p.clone();
    }
    p.iter()
        .map(|c| c.div_exact(d).expect("exact coefficient division"))
        .collect()
}

/// Pseudo-remainder `lc(g)^(deg f - deg g + 1) f mod g`.
fn prem(f: &UPoly, g: &UPoly) -> UPoly {
    let n = udeg(g);
    let lcg = &g[n];
    let mut r = f.clone();
    let mut e = udeg(f) + 1 - n;
    while !uis_zero(&r) && udeg(&r) >= n {
        let d = udeg(&r);
        let lr = r[d].clone();
        for c in r.iter_mut() {
            *c = &*c * lcg;
        }
        for (i, gc) in g.iter().enumerate() {
            let t = gc * &lr;
            r[i + d - n] = &r[i + d - n] - &t;
        }
        debug_assert!(r[d].is_zero());
        r.pop();
        if r.is_empty() {
            r.push(Polynomial::zero());
        }
        utrim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let s = lcg.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &s;
        }
    }
    r
}

fn prs_gcd(a: &Polynomial, b: &Polynomial, var: usize) -> Polynomial {
    let mut fa = a.coefficients_in(var);
    let mut fb = b.coefficients_in(var);
    let ca = ucontent(&fa);
    let cb = ucontent(&fb);
    fa = udiv_scalar(&fa, &ca);
    fb = udiv_scalar(&fb, &cb);
    let c = gcd(&ca, &cb);

    if udeg(&fa) < udeg(&fb) {
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut f = fa;
    let mut g = fb;
    let mut lead = Polynomial::one();
    let mut h = Polynomial::one();
    let result: UPoly = loop {
        let delta = udeg(&f) - udeg(&g);
        let r = prem(&f, &g);
        if uis_zero(&r) {
            break g;
        }
        if udeg(&r) == 0 {
            break vec![Polynomial::one()];
        }
        let divisor = &lead * &h.pow(delta as u32);
        f = std::mem::replace(&mut g, udiv_scalar(&r, &divisor));
        lead = f[udeg(&f)].clone();
        h = match delta {
            0 => h,
            1 => lead.clone(),
            _ => lead
                .pow(delta as u32)
                .div_exact(&h.pow(delta as u32 - 1))
                .expect("subresultant h update is exact"),
        };
    };
    let cg = ucontent(&result);
    let primitive = udiv_scalar(&result, &cg);
    let g = Polynomial::from_coefficients_in(var, &primitive);
    (&c * &g).primitive()
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
    fn coprime_pairs() {
        let a = &x(0) + &x(1);
        let b = &x(0) - &x(1);
        assert!(gcd(&a, &b).is_one());
        assert!(gcd(&c(6), &a).is_one());
    }

    #[test]
    fn common_factor_recovered() {
        let f = &(&x(0) * &x(1)) + &c(1);
        let a = &f * &(&x(0) + &x(2));
        let b = &f * &(&x(1).pow(2) - &x(2));
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn monomial_and_integer_content() {
        let a = &(&x(0).pow(2) * &x(1)) * &c(6);
        let b = &(&x(0) * &x(1).pow(3)) * &c(4);
        assert_eq!(gcd(&a, &b), &x(0) * &x(1));
    }

    #[test]
    fn squared_factor() {
        let f = &x(0) - &(&x(1) * &x(2));
        let a = &f.pow(2) * &(&x(0) + &c(3));
        let b = &f.pow(3) * &x(2);
        assert_eq!(gcd(&a, &b), f.pow(2));
    }

    #[test]
    fn negative_leading_normalized() {
        let f = &x(1) - &x(0);
        let a = &f * &(&x(0) + &c(1));
        let b = &f * &(&x(0) - &c(1));
        let g = gcd(&a, &b);
        assert_eq!(g, &x(0) - &x(1));
    }

    #[test]
    fn divisor_of_other() {
        let f = &(&x(0) * &x(0)) + &(&x(1) * &x(2));
        let a = &f * &(&x(3) + &x(0));
        assert_eq!(gcd(&a, &f), f);
        assert_eq!(gcd(&f, &a), f);
    }
}

//! Exact scalar arithmetic: arbitrary-precision rationals, p-adic valuations,
//! primality testing, and desk-scale integer factorization.
//!
//! `Rational` is the scalar type for the whole crate. Values are always in
//! lowest terms with positive denominator (enforced by `num::BigRational`),
//! and all arithmetic is exact.

use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, BigUint, Integer, One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for small rational constants.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses a rational literal: optional '-', integer, optional '/positive-integer'.
/// No whitespace is allowed inside the literal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let ok_int = |t: &str, allow_sign: bool| -> bool {
        let digits = if allow_sign {
            t.strip_prefix('-').unwrap_or(t)
        } else {
            t
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok_int(num_str, true) {
        return Err(bad());
    }
    let numer: BigInt = num_str.parse().map_err(|_| bad())?;
    let denom: BigInt = match den_str {
        None => BigInt::one(),
        Some(d) => {
            if !ok_int(d, false) {
                return Err(bad());
            }
            d.parse().map_err(|_| bad())?
        }
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Formats a rational as a literal acceptable to [`parse_rational`].
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// A complete signed prime factorization.
///
/// `sign * prod(p_i^e_i)` reconstructs the input exactly; primes are strictly
/// increasing and every listed prime passes [`is_prime`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        let mag = BigInt::from(acc);
        if self.sign < 0 {
            -mag
        } else {
            mag
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// All positive divisors of |n|, ascending. Errors if there would be more
    /// than `cap` of them.
    pub fn divisors(&self, cap: usize) -> Result<Vec<BigUint>> {
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            let mut pk = BigUint::one();
            for _ in 0..=*e {
                for d in &divs {
                    next.push(d * &pk);
                }
                pk *= p;
            }
            if next.len() > cap {
                return Err(Error::DivisorOverflow(next.len()));
            }
            divs = next;
        }
        divs.sort();
        Ok(divs)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

const TRIAL_LIMIT: u32 = 1_000_000;

static SMALL_PRIMES: Lazy<Vec<u32>> = Lazy::new(|| {
    let n = TRIAL_LIMIT as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::with_capacity(80_000);
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u32);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
});

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn int_valuation(p: &BigUint, n: &BigInt) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p.clone());
    let mut m = n.abs();
    let mut k = 0i64;
    loop {
        let (q, r) = m.div_rem(&p);
        if r.is_zero() {
            k += 1;
            m = q;
        } else {
            return Some(k);
        }
    }
}

/// v_p(x) for a nonzero rational: exponent of p in the numerator minus the
/// exponent in the denominator. Errors on x = 0 and on composite p.
pub fn val(p: &BigUint, x: &Rational) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let vn = int_valuation(p, x.numer()).expect("nonzero numerator");
    let vd = int_valuation(p, x.denom()).expect("nonzero denominator");
    Ok(vn - vd)
}

/// Exact square test for a rational.
pub fn is_rational_square(x: &Rational) -> bool {
    if x.is_negative() {
        return false;
    }
    if x.is_zero() {
        return true;
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    is_perfect_square(n) && is_perfect_square(d)
}

fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

/// Primality test: deterministic Miller–Rabin below 2^64, BPSW above.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &p in SMALL_PRIMES.iter().take(100) {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    if let Ok(small) = u64::try_from(n) {
        return mr_u64(small);
    }
    // BPSW: strong base-2 Miller-Rabin plus a strong Lucas test.
    miller_rabin(n, &two) && strong_lucas(n)
}

fn mr_u64(n: u64) -> bool {
    // This base set is deterministic for all n < 2^64.
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'outer: for &a in &BASES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

fn miller_rabin(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = base.modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a/n) for odd positive n.
fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let mut a = a.mod_floor(&BigInt::from(n.clone()));
    let mut n = BigInt::from(n.clone());
    let mut result = 1i32;
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let r = (&n % 8u32).to_string().parse::<u32>().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigInt::from(3u32) && (&n % 4u32) == BigInt::from(3u32) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's method A parameters.
fn strong_lucas(n: &BigUint) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    // Find D in 5, -7, 9, -11, ... with Jacobi(D/n) = -1.
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 => {
                // Shares a factor with n (and |D| < n here since n has no
                // small prime factors by the time this runs).
                return false;
            }
            _ => {
                let step = BigInt::from(2);
                d = if d.is_positive() { -(d + step) } else { -(d - step) };
            }
        }
    }
    let nbig = BigInt::from(n.clone());
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / BigInt::from(4);

    // n + 1 = t * 2^s with t odd.
    let np1 = n + 1u32;
    let s = np1.trailing_zeros().unwrap_or(0);
    let t = &np1 >> s;

    // Compute U_t, V_t by binary ladder on the index.
    let modn = |x: &BigInt| x.mod_floor(&nbig);
    let half = |x: &BigInt| -> BigInt {
        // Division by 2 mod n (n odd).
        if x.is_even() {
            modn(&(x / 2))
        } else {
            modn(&((x + &nbig) / 2))
        }
    };
    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.clone();
    let bits = t.bits();
    for i in (0..bits - 1).rev() {
        // Double: U_{2k} = U_k V_k, V_{2k} = V_k^2 - 2 Q^k.
        u = modn(&(&u * &v));
        v = modn(&(&v * &v - 2 * &qk));
        qk = modn(&(&qk * &qk));
        if t.bit(i) {
            // Increment: U_{k+1} = (P U_k + V_k)/2, V_{k+1} = (D U_k + P V_k)/2.
            let u1 = half(&(&p * &u + &v));
            let v1 = half(&(&d * &u + &p * &v));
            u = u1;
            v = v1;
            qk = modn(&(&qk * &q));
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = modn(&(&v * &v - 2 * &qk));
        qk = modn(&(&qk * &qk));
        if v.is_zero() {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

pub const DEFAULT_FACTOR_BITS: u64 = 128;

/// Complete factorization with the default 2^128 cofactor bound.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    factor_with_bound(n, DEFAULT_FACTOR_BITS)
}

/// Factors n by trial division to 10^6 followed by Pollard rho (Brent cycle
/// detection). Composite cofactors wider than `bound_bits`, or ones rho fails
/// to split within its budget, produce an incomplete-factorization error
/// naming the cofactor.
pub fn factor_with_bound(n: &BigInt, bound_bits: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::FactorZero);
    }
    let sign: i8 = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut counts: std::collections::BTreeMap<BigUint, u32> = Default::default();

    for &p in SMALL_PRIMES.iter() {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        while (&m % &pb).is_zero() {
            m /= &pb;
            *counts.entry(pb.clone()).or_insert(0) += 1;
        }
    }
    if !m.is_one() {
        // Residue after trial division: either prime, or all prime factors
        // exceed 10^6. If m itself is below the trial bound squared it is prime.
        let mut stack = vec![m];
        while let Some(c) = stack.pop() {
            if c.is_one() {
                continue;
            }
            if is_prime(&c) {
                *counts.entry(c).or_insert(0) += 1;
                continue;
            }
            if c.bits() > bound_bits {
                return Err(Error::IncompleteFactorization { cofactor: c });
            }
            match pollard_brent(&c) {
                Some(d) => {
                    let q = &c / &d;
                    stack.push(d);
                    stack.push(q);
                }
                None => return Err(Error::IncompleteFactorization { cofactor: c }),
            }
        }
    }
    Ok(Factorization {
        sign,
        factors: counts.into_iter().collect(),
    })
}

/// Pollard rho with Brent's cycle detection; returns a nontrivial factor.
/// Deterministic: fixed polynomial offsets c = 1, 2, ... are tried in order.
fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Ok(small) = u64::try_from(n) {
        return pollard_brent_u64(small).map(BigUint::from);
    }
    for c in 1u32..=24 {
        if let Some(d) = brent_big(n, &BigUint::from(c), 1 << 22) {
            return Some(d);
        }
    }
    None
}

fn pollard_brent_u64(n: u64) -> Option<u64> {
    for c in 1u64..=24 {
        if let Some(d) = brent_u64(n, c, 1 << 24) {
            return Some(d);
        }
    }
    None
}

fn brent_u64(n: u64, c: u64, max_iters: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    let mut iters = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let lim = std::cmp::min(128, r - k);
            for _ in 0..lim {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += lim;
            iters += lim;
            if iters > max_iters {
                return None;
            }
        }
        r *= 2;
    }
    if g == n {
        // Backtrack one step at a time.
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn brent_big(n: &BigUint, c: &BigUint, max_iters: u64) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut iters = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            let lim = std::cmp::min(128, r - k);
            for _ in 0..lim {
                y = f(&y);
                q = (&q * absdiff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += lim;
            iters += lim;
            if iters > max_iters {
                return None;
            }
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = absdiff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;
    use proptest::prelude::*;

    fn p(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn parse_and_format_literals() {
        assert_eq!(parse_rational("-31/5").unwrap(), rat(-31, 5));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(format_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
        for bad in ["", "1/0", "1/-2", "1 /2", "+3", "a", "1/2/3", "3/ 2"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn lowest_terms_invariant() {
        let x = Rational::new(BigInt::from(44), BigInt::from(-121));
        assert_eq!(x.numer(), &BigInt::from(-4));
        assert_eq!(x.denom(), &BigInt::from(11));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(val(&p(5), &rat(-31, 5)).unwrap(), -1);
        assert_eq!(val(&p(11), &rat(-144, 11)).unwrap(), -1);
        assert_eq!(val(&p(421), &rat(15156, 275)).unwrap(), 1);
        assert!(matches!(
            val(&p(5), &int(0)),
            Err(Error::ZeroValuation)
        ));
        assert!(matches!(val(&p(6), &int(5)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn factor_examples() {
        let f = factor(&BigInt::from(15156)).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.factors, vec![(p(2), 2), (p(3), 2), (p(421), 1)]);

        let one = factor(&BigInt::one()).unwrap();
        assert_eq!(one.sign, 1);
        assert!(one.factors.is_empty());

        let f = factor(&BigInt::from(3661039374i64)).unwrap();
        assert_eq!(
            f.factors,
            vec![(p(2), 1), (p(3), 1), (p(401), 1), (p(1521629), 1)]
        );

        let f = factor(&BigInt::from(-12)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.reconstruct(), BigInt::from(-12));

        assert!(matches!(factor(&BigInt::zero()), Err(Error::FactorZero)));
    }

    #[test]
    fn factor_21_digit_prime_quickly() {
        // Largest prime from the level-4 place search; must be certified in
        // well under a second.
        let n: BigInt = "722144241378612874253".parse().unwrap();
        let f = factor(&n).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].1, 1);
        assert_eq!(f.reconstruct(), n);
    }

    #[test]
    fn incomplete_factorization_reports_cofactor() {
        // Both primes exceed the trial-division bound; a 2-bit budget cannot
        // admit rho on the 40-bit cofactor.
        let a = BigInt::from(1_000_003u64);
        let b = BigInt::from(1_000_033u64);
        let n = &a * &b;
        match factor_with_bound(&n, 2) {
            Err(Error::IncompleteFactorization { cofactor }) => {
                assert_eq!(BigInt::from(cofactor), n);
            }
            other => panic!("expected incomplete factorization, got {other:?}"),
        }
        // With the default bound rho splits it.
        let f = factor(&n).unwrap();
        assert_eq!(f.factors, vec![(p(1_000_003), 1), (p(1_000_033), 1)]);
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime(&p(2)));
        assert!(is_prime(&p(421)));
        assert!(is_prime(&p(1521629)));
        assert!(is_prime(&p(347651)));
        assert!(!is_prime(&p(1)));
        assert!(!is_prime(&p(561))); // Carmichael
        assert!(!is_prime(&p(3215031751))); // strong pseudoprime to bases 2,3,5,7
        let big: BigUint = "722144241378612874253".parse().unwrap();
        assert!(is_prime(&big));
        let sq = &big * &big;
        assert!(!is_prime(&sq));
        // Mersenne exponent checks around 2^64.
        let m89: BigUint = (BigUint::one() << 89u32) - 1u32;
        assert!(is_prime(&m89));
        let m87: BigUint = (BigUint::one() << 87u32) - 1u32;
        assert!(!is_prime(&m87));
    }

    #[test]
    fn square_test() {
        assert!(is_rational_square(&rat(4, 9)));
        assert!(is_rational_square(&int(0)));
        assert!(!is_rational_square(&int(-3)));
        assert!(!is_rational_square(&rat(-144, 11)));
        assert!(!is_rational_square(&rat(2, 1)));
    }

    #[test]
    fn divisors_enumeration() {
        let f = factor(&BigInt::from(12)).unwrap();
        let d: Vec<u64> = f
            .divisors(100)
            .unwrap()
            .iter()
            .map(|x| u64::try_from(x).unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }

    proptest! {
        #[test]
        fn val_is_additive(an in -2000i64..2000, ad in 1i64..2000, bn in -2000i64..2000, bd in 1i64..2000) {
            prop_assume!(an != 0 && bn != 0);
            let x = rat(an, ad);
            let y = rat(bn, bd);
            for q in [2u64, 3, 5, 7, 11] {
                let q = p(q);
                let vx = val(&q, &x).unwrap();
                let vy = val(&q, &y).unwrap();
                prop_assert_eq!(val(&q, &(&x * &y)).unwrap(), vx + vy);
                let s = &x + &y;
                if !s.is_zero() {
                    let vs = val(&q, &s).unwrap();
                    prop_assert!(vs >= vx.min(vy));
                    if vx != vy {
                        prop_assert_eq!(vs, vx.min(vy));
                    }
                }
            }
        }

        #[test]
        fn factor_reconstructs(n in -100_000_000i64..100_000_000i64) {
            prop_assume!(n != 0);
            let n = BigInt::from(n);
            let f = factor(&n).unwrap();
            prop_assert_eq!(f.reconstruct(), n);
            for (q, _) in &f.factors {
                prop_assert!(is_prime(q));
            }
            for w in f.factors.windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
        }

        #[test]
        fn rational_roundtrip_256bit(a in prop::array::uniform4(any::<u64>()), b in prop::array::uniform4(any::<u64>()), d1 in 1u64.., d2 in 1u64..) {
            let big = |w: [u64; 4]| {
                let mut acc = BigInt::zero();
                for part in w {
                    acc = (acc << 64) + BigInt::from_u64(part).unwrap();
                }
                acc
            };
            let x = Rational::new(big(a), BigInt::from(d1));
            let y = Rational::new(big(b), BigInt::from(d2));
            prop_assert_eq!(&(&(&x + &y) - &y), &x);
            let parsed = parse_rational(&format_rational(&x)).unwrap();
            prop_assert_eq!(parsed, x);
        }
    }
}

//! Dense univariate polynomials over the rationals.
//!
//! Everything is exact. Resultants run through a fraction-free subresultant
//! remainder sequence on denominator-cleared integer polynomials, so no root
//! is ever extracted; discriminants, Newton polygons, and rational-root
//! search are built on top.

use std::fmt;

use num::{BigInt, BigUint, Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Polynomial in one variable, coefficients indexed by degree.
/// The zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial z.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// Builds from low-to-high coefficients, trimming trailing zeros.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    /// Convenience constructor from small integers, low to high.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| exact::int(c)).collect())
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * Rational::from_integer(BigInt::from(i)));
        }
        Poly::from_coeffs(out)
    }

    /// Substitutes `inner` for the variable.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = divisor.degree().unwrap();
        let lc = divisor.leading_coeff();
        let mut rem = self.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let q = rem.leading_coeff() / &lc;
            let shift = dr - dd;
            quot[shift] = q.clone();
            let mut sub = vec![Rational::zero(); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c * &q));
            rem = rem.sub(&Poly::from_coeffs(sub));
        }
        Ok((Poly::from_coeffs(quot), rem))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses "c_k*z^k ± ... ± c_0" with rational-literal coefficients.
/// Accepts terms like `33*z^3`, `-z^2`, `9*z`, `z`, `1`, `47/11`.
pub fn parse_poly(s: &str) -> Result<Poly> {
    let bad = || Error::ParsePoly(s.to_string());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut terms: Vec<(i8, String)> = Vec::new();
    let mut sign: i8 = 1;
    let mut cur = String::new();
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.is_empty() && !cur.ends_with('/') {
            terms.push((sign, std::mem::take(&mut cur)));
            sign = if ch == '-' { -1 } else { 1 };
        } else if ch == '-' && i == 0 {
            sign = -1;
        } else if ch == '+' && i == 0 {
            // leading plus
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(bad());
    }
    terms.push((sign, cur));

    let mut acc = Poly::zero();
    for (sg, term) in terms {
        let (coeff_str, power) = match term.find('z') {
            None => (term.as_str(), 0usize),
            Some(pos) => {
                let coeff = &term[..pos];
                let rest = &term[pos + 1..];
                let power = if rest.is_empty() {
                    1
                } else {
                    let exp = rest.strip_prefix('^').ok_or_else(bad)?;
                    if exp.is_empty() || !exp.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(bad());
                    }
                    exp.parse::<usize>().map_err(|_| bad())?
                };
                let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
                (coeff, power)
            }
        };
        let mut c = if coeff_str.is_empty() {
            Rational::one()
        } else {
            exact::parse_rational(coeff_str)?
        };
        if sg < 0 {
            c = -c;
        }
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        acc = acc.add(&Poly::from_coeffs(coeffs));
    }
    Ok(acc)
}

/// n-fold self-composition; `iterate(f, 0)` is the identity map z.
pub fn iterate(f: &Poly, n: usize) -> Poly {
    let mut acc = Poly::var();
    for _ in 0..n {
        acc = f.compose(&acc);
    }
    acc
}

// ---------------------------------------------------------------------------
// Resultants and discriminants
// ---------------------------------------------------------------------------

/// Clears denominators: returns integer coefficients of d*p together with d.
fn clear_denominators(p: &Poly) -> (Vec<BigInt>, BigInt) {
    let mut d = BigInt::one();
    for c in p.coeffs() {
        d = d.lcm(c.denom());
    }
    let ints = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&d / c.denom()))
        .collect();
    (ints, d)
}

fn int_degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a  rem  b.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let da = int_degree(a).unwrap();
    let db = int_degree(b).unwrap();
    let lb = b[db].clone();
    let steps = da - db + 1;
    let mut r = a.to_vec();
    let mut applied = 0usize;
    loop {
        let d = match int_degree(&r) {
            Some(d) if d >= db => d,
            _ => break,
        };
        let lead = r[d].clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        applied += 1;
        for i in 0..=db {
            let sub = &lead * &b[i];
            r[d - db + i] -= sub;
        }
    }
    // The multiplier must be exactly lc(b)^(da-db+1) regardless of how fast
    // the degree dropped.
    for _ in applied..steps {
        for c in r.iter_mut() {
            *c *= &lb;
        }
    }
    r
}

/// Resultant of two nonconstant integer polynomials via the fraction-free
/// subresultant PRS (Cohen, Algorithm 3.3.7).
fn int_resultant(a_in: &[BigInt], b_in: &[BigInt]) -> BigInt {
    let da0 = int_degree(a_in).expect("nonzero");
    let db0 = int_degree(b_in).expect("nonzero");
    let (mut a, mut b, mut t) = if da0 < db0 {
        let sign = if (da0 * db0) % 2 == 1 {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        (b_in.to_vec(), a_in.to_vec(), sign)
    } else {
        (a_in.to_vec(), b_in.to_vec(), BigInt::one())
    };
    let content = |p: &[BigInt]| -> BigInt {
        let mut g = BigInt::zero();
        for c in p {
            g = g.gcd(c);
        }
        if g.is_zero() {
            BigInt::one()
        } else {
            g
        }
    };
    let ca = content(&a);
    let cb = content(&b);
    for c in a.iter_mut() {
        *c /= &ca;
    }
    for c in b.iter_mut() {
        *c /= &cb;
    }
    let da = int_degree(&a).unwrap();
    let db = int_degree(&b).unwrap();
    t *= ca.pow(db as u32) * cb.pow(da as u32);
    if db == 0 {
        return t * b[0].pow(da as u32);
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = int_degree(&a).unwrap();
        let db = int_degree(&b).unwrap();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            t = -t;
        }
        let mut r = pseudo_rem(&a, &b);
        let divisor = &g * h.pow(delta);
        for c in r.iter_mut() {
            debug_assert!((&*c % &divisor).is_zero());
            *c /= &divisor;
        }
        a = b;
        b = r;
        let na = int_degree(&a).unwrap();
        g = a[na].clone();
        h = if delta == 0 {
            h
        } else {
            let num = g.pow(delta);
            let den = h.pow(delta - 1);
            debug_assert!((&num % &den).is_zero());
            num / den
        };
        match int_degree(&b) {
            None => return BigInt::zero(),
            Some(0) => {
                let da = na;
                let num = b[0].pow(da as u32);
                let den = h.pow(da.saturating_sub(1) as u32);
                debug_assert!((&num % &den).is_zero());
                return t * (num / den);
            }
            Some(_) => {}
        }
    }
}

/// res(g, h) = lc(g)^deg(h) * prod over roots a of g of h(a),
/// computed fraction-free with no root extraction.
pub fn resultant(g: &Poly, h: &Poly) -> Result<Rational> {
    if g.is_zero() && h.is_zero() {
        return Err(Error::BothZero);
    }
    if g.is_zero() || h.is_zero() {
        return Ok(Rational::zero());
    }
    let dg = g.degree().unwrap();
    let dh = h.degree().unwrap();
    if dg == 0 {
        return Ok(pow_rational(&g.leading_coeff(), dh as u32));
    }
    if dh == 0 {
        return Ok(pow_rational(&h.leading_coeff(), dg as u32));
    }
    let (gi, gden) = clear_denominators(g);
    let (hi, hden) = clear_denominators(h);
    let raw = int_resultant(&gi, &hi);
    // res(c*g, h) = c^deg(h) * res(g, h) and symmetrically in h.
    let denom = gden.pow(dh as u32) * hden.pow(dg as u32);
    Ok(Rational::new(raw, denom))
}

fn pow_rational(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Discriminant, with the degree-1 convention fixed to 1:
/// (-1)^(d(d-1)/2) res(g, g') / lc(g).
pub fn discriminant(g: &Poly) -> Result<Rational> {
    let d = match g.degree() {
        None | Some(0) => return Err(Error::DegreeZeroDiscriminant),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(Rational::one());
    }
    let res = resultant(g, &g.derivative())?;
    let sign = if (d * (d - 1) / 2) % 2 == 1 { -1 } else { 1 };
    Ok(exact::int(sign) * res / g.leading_coeff())
}

// ---------------------------------------------------------------------------
// Newton polygons
// ---------------------------------------------------------------------------

/// One segment of a lower Newton polygon. A segment of slope s accounts for
/// `run` roots of p-adic valuation -s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub run: usize,
    pub slope: Rational,
    pub multiplicity: usize,
}

/// Lower convex hull of the points (i, v_p(c_i)) over nonzero coefficients.
/// Slopes strictly increase left to right; the hull spans from the lowest
/// nonzero-coefficient index to the degree, so the runs sum to
/// deg(g) - ord_0(g).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub points: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
}

pub fn newton_polygon(g: &Poly, p: &BigUint) -> Result<NewtonPolygon> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !exact::is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let mut points = Vec::new();
    for (i, c) in g.coeffs().iter().enumerate() {
        if !c.is_zero() {
            points.push((i, exact::val(p, c)?));
        }
    }
    // Monotone-chain lower hull; collinear middle points are dropped so that
    // consecutive slopes are strictly increasing.
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &(x, y) in &points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let lhs = (y2 - y1) as i128 * (x - x1) as i128;
            let rhs = (y - y1) as i128 * (x2 - x1) as i128;
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    let mut segments = Vec::new();
    for w in hull.windows(2) {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        let run = x2 - x1;
        segments.push(Segment {
            run,
            slope: Rational::new(BigInt::from(y2 - y1), BigInt::from(run as i64)),
            multiplicity: run,
        });
    }
    Ok(NewtonPolygon { points, segments })
}

impl NewtonPolygon {
    pub fn is_single_segment(&self) -> bool {
        self.segments.len() == 1
    }

    /// True when the polygon is one segment whose slope is not an integer.
    pub fn single_nonintegral_slope(&self) -> bool {
        self.is_single_segment() && !self.segments[0].slope.is_integer()
    }
}

// ---------------------------------------------------------------------------
// Rational roots
// ---------------------------------------------------------------------------

/// All rational roots with multiplicities, via p/q candidate testing against
/// the factored constant and leading coefficients.
pub fn rational_roots(g: &Poly) -> Result<Vec<(Rational, usize)>> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    let mut work = g.clone();

    let mut zero_mult = 0usize;
    while !work.is_zero() && work.coeff(0).is_zero() {
        work = Poly::from_coeffs(work.coeffs()[1..].to_vec());
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }
    if work.degree().unwrap_or(0) == 0 {
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        return Ok(roots);
    }

    let (ints, _) = clear_denominators(&work);
    let a0 = BigInt::from(ints[0].magnitude().clone());
    let ad = BigInt::from(ints.last().unwrap().magnitude().clone());
    let f0 = exact::factor(&a0)?;
    let fd = exact::factor(&ad)?;
    let num_divs = f0.divisors(1 << 20)?;
    let den_divs = fd.divisors(1 << 20)?;

    for p in &num_divs {
        for q in &den_divs {
            if !p.gcd(q).is_one() {
                continue;
            }
            for sign in [1i64, -1] {
                let cand = Rational::new(
                    BigInt::from(p.clone()) * BigInt::from(sign),
                    BigInt::from(q.clone()),
                );
                if !work.eval(&cand).is_zero() {
                    continue;
                }
                let linear = Poly::from_coeffs(vec![-cand.clone(), Rational::one()]);
                let mut mult = 0usize;
                loop {
                    match work.div_rem(&linear) {
                        Ok((quot, rem)) if rem.is_zero() => {
                            work = quot;
                            mult += 1;
                            if work.degree().unwrap_or(0) == 0 {
                                break;
                            }
                        }
                        _ => break,
                    }
                }
                if mult > 0 {
                    roots.push((cand, mult));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn pu(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn eval_and_compose() {
        let f = Poly::from_ints(&[1, 9, 0, 33]); // 33z^3 + 9z + 1
        assert_eq!(f.eval(&int(0)), int(1));
        assert_eq!(f.eval(&int(1)), int(43));
        assert_eq!(iterate(&f, 0), Poly::var());
        assert_eq!(iterate(&Poly::from_ints(&[0, 0, 0, 1]), 2).degree(), Some(9));
        let f2 = iterate(&f, 2);
        assert_eq!(f2.eval(&int(0)), int(43));
        assert_eq!(f2.degree(), Some(9));
    }

    #[test]
    fn display_and_parse() {
        let f = Poly::from_ints(&[1, 9, 0, 33]);
        assert_eq!(f.to_string(), "33*z^3 + 9*z + 1");
        assert_eq!(parse_poly("33*z^3 + 9*z + 1").unwrap(), f);
        assert_eq!(parse_poly("33*z^3+9*z+1").unwrap(), f);
        assert_eq!(
            parse_poly("z^2 - 2*z + 47/11").unwrap(),
            Poly::from_coeffs(vec![rat(47, 11), int(-2), int(1)])
        );
        assert_eq!(parse_poly("-z").unwrap(), Poly::from_ints(&[0, -1]));
        assert_eq!(parse_poly("-31/5").unwrap(), Poly::constant(rat(-31, 5)));
        assert!(parse_poly("z^").is_err());
        assert!(parse_poly("").is_err());
    }

    #[test]
    fn resultant_examples() {
        // res(z^2 - 1, z) = h(1) h(-1) = -1
        let g = Poly::from_ints(&[-1, 0, 1]);
        let h = Poly::var();
        assert_eq!(resultant(&g, &h).unwrap(), int(-1));
        // res(z - 3, z - 5) = (3 - 5) = -2
        let a = Poly::from_ints(&[-3, 1]);
        let b = Poly::from_ints(&[-5, 1]);
        assert_eq!(resultant(&a, &b).unwrap(), int(-2));
        assert!(matches!(
            resultant(&Poly::zero(), &Poly::zero()),
            Err(Error::BothZero)
        ));
    }

    #[test]
    fn discriminant_examples() {
        // z^2 + z + 1 -> b^2 - 4c = -3
        let g = Poly::from_ints(&[1, 1, 1]);
        assert_eq!(discriminant(&g).unwrap(), int(-3));
        // degree-1 convention
        let lin = Poly::from_coeffs(vec![rat(-7, 3), int(2)]);
        assert_eq!(discriminant(&lin).unwrap(), int(1));
        // f = 33z^3 + 9z + 1 has discriminant -125631 = -27*33^2*(47/11)
        let f = Poly::from_ints(&[1, 9, 0, 33]);
        assert_eq!(discriminant(&f).unwrap(), int(-125631));
        assert!(discriminant(&Poly::one()).is_err());
    }

    #[test]
    fn discriminant_against_resultant_path() {
        let f = Poly::from_ints(&[1, 9, 0, 33]);
        let res = resultant(&f, &f.derivative()).unwrap();
        let disc = discriminant(&f).unwrap();
        // d = 3: sign = (-1)^3 = -1
        assert_eq!(disc, int(-1) * res / f.leading_coeff());
    }

    #[test]
    fn newton_polygon_examples() {
        // 3z^2 + z + 9 at p = 3: points (0,2),(1,0),(2,1); slopes [-2, 1].
        let g = Poly::from_ints(&[9, 1, 3]);
        let np = newton_polygon(&g, &pu(3)).unwrap();
        assert_eq!(np.points, vec![(0, 2), (1, 0), (2, 1)]);
        assert_eq!(np.segments.len(), 2);
        assert_eq!(np.segments[0].slope, int(-2));
        assert_eq!(np.segments[0].multiplicity, 1);
        assert_eq!(np.segments[1].slope, int(1));
        assert_eq!(np.segments[1].multiplicity, 1);

        // Quartic shape with points (0,2),(1,2),(2,1),(4,0): a single segment
        // of slope -1/2 and multiplicity 4; the point (2,1) lies on it.
        // Realized at p = 2 by z^4 + 2z^2 + 4z + 4.
        let q = Poly::from_ints(&[4, 4, 2, 0, 1]);
        let np = newton_polygon(&q, &pu(2)).unwrap();
        assert_eq!(np.points, vec![(0, 2), (1, 2), (2, 1), (4, 0)]);
        assert!(np.is_single_segment());
        assert_eq!(np.segments[0].slope, rat(-1, 2));
        assert_eq!(np.segments[0].multiplicity, 4);
        assert!(np.single_nonintegral_slope());

        // f(z) - x0 with f = 33z^3+9z+1, x0 = -31/5, p = 5: single segment of
        // slope 1/3, so all roots have valuation -1/3.
        let f = Poly::from_coeffs(vec![int(1) + rat(31, 5), int(9), int(0), int(33)]);
        let np = newton_polygon(&f, &pu(5)).unwrap();
        assert!(np.is_single_segment());
        assert_eq!(np.segments[0].slope, rat(1, 3));
        assert_eq!(np.segments[0].multiplicity, 3);

        assert!(newton_polygon(&Poly::zero(), &pu(5)).is_err());
    }

    #[test]
    fn rational_root_examples() {
        let g = Poly::from_ints(&[-1, 0, 1]);
        let roots = rational_roots(&g).unwrap();
        assert_eq!(roots, vec![(int(-1), 1), (int(1), 1)]);
        assert!(rational_roots(&Poly::from_ints(&[-2, 0, 0, 1]))
            .unwrap()
            .is_empty());
        let h = Poly::var().mul(&Poly::var()).mul(&Poly::from_ints(&[-3, 2]));
        let roots = rational_roots(&h).unwrap();
        assert_eq!(roots, vec![(int(0), 2), (rat(3, 2), 1)]);
    }

    // Float sanity oracle: product of h over complex roots of g found by
    // Durand-Kerner. Sanity only; the exact path is authoritative.
    fn resultant_float(g: &Poly, h: &Poly) -> num::complex::Complex64 {
        use num::complex::Complex64;
        let to_f = |r: &Rational| {
            let n: f64 = r.numer().to_string().parse().unwrap();
            let d: f64 = r.denom().to_string().parse().unwrap();
            n / d
        };
        let gc: Vec<Complex64> = g
            .coeffs()
            .iter()
            .map(|c| Complex64::new(to_f(c), 0.0))
            .collect();
        let d = gc.len() - 1;
        let lead = gc[d];
        let evalc = |cs: &[Complex64], z: Complex64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in cs.iter().rev() {
                acc = acc * z + c;
            }
            acc
        };
        let mut roots: Vec<Complex64> = (0..d)
            .map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1))
            .collect();
        for _ in 0..300 {
            let prev = roots.clone();
            for i in 0..d {
                let mut denom = lead;
                for j in 0..d {
                    if i != j {
                        denom *= prev[i] - prev[j];
                    }
                }
                roots[i] = prev[i] - evalc(&gc, prev[i]) / denom;
            }
        }
        let hc: Vec<Complex64> = h
            .coeffs()
            .iter()
            .map(|c| Complex64::new(to_f(c), 0.0))
            .collect();
        let mut acc = lead.powu(h.degree().unwrap() as u32);
        for r in roots {
            acc *= evalc(&hc, r);
        }
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn resultant_swap_symmetry(ga in prop::collection::vec(-9i64..=9, 2..6), ha in prop::collection::vec(-9i64..=9, 2..6)) {
            let g = Poly::from_ints(&ga);
            let h = Poly::from_ints(&ha);
            prop_assume!(!g.is_zero() && !h.is_zero());
            let (dg, dh) = (g.degree().unwrap(), h.degree().unwrap());
            let r1 = resultant(&g, &h).unwrap();
            let r2 = resultant(&h, &g).unwrap();
            let sign = if (dg * dh) % 2 == 1 { int(-1) } else { int(1) };
            prop_assert_eq!(r1, sign * r2);
        }

        #[test]
        fn resultant_multiplicative_in_h(ga in prop::collection::vec(-6i64..=6, 2..5), ha in prop::collection::vec(-6i64..=6, 2..4), ka in prop::collection::vec(-6i64..=6, 2..4)) {
            let g = Poly::from_ints(&ga);
            let h = Poly::from_ints(&ha);
            let k = Poly::from_ints(&ka);
            prop_assume!(!g.is_zero() && !h.is_zero() && !k.is_zero());
            prop_assume!(g.degree().unwrap() >= 1);
            let lhs = resultant(&g, &h.mul(&k)).unwrap();
            let rhs = resultant(&g, &h).unwrap() * resultant(&g, &k).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn resultant_float_sanity(ga in prop::collection::vec(-5i64..=5, 3..6), ha in prop::collection::vec(-5i64..=5, 2..5)) {
            let g = Poly::from_ints(&ga);
            let h = Poly::from_ints(&ha);
            prop_assume!(g.degree().unwrap_or(0) >= 2 && !h.is_zero());
            let disc = discriminant(&g).unwrap();
            prop_assume!(!disc.is_zero());
            let exact_val = resultant(&g, &h).unwrap();
            let approx = resultant_float(&g, &h);
            let exact_f: f64 = {
                let n: f64 = exact_val.numer().to_string().parse().unwrap();
                let d: f64 = exact_val.denom().to_string().parse().unwrap();
                n / d
            };
            let scale = exact_f.abs().max(1.0);
            prop_assert!((approx.re - exact_f).abs() / scale < 1e-6,
                "float oracle {} vs exact {}", approx.re, exact_f);
        }

        #[test]
        fn discriminant_of_split_monic(r1 in -6i64..=6, r2 in -6i64..=6, r3 in -6i64..=6, r4 in -6i64..=6) {
            let rs = [r1, r2, r3, r4];
            prop_assume!(rs.iter().enumerate().all(|(i, a)| rs.iter().skip(i+1).all(|b| a != b)));
            let mut g = Poly::one();
            for r in rs {
                g = g.mul(&Poly::from_ints(&[-r, 1]));
            }
            let mut expect = int(1);
            for i in 0..4 {
                for j in (i+1)..4 {
                    let d = int(rs[i] - rs[j]);
                    expect *= &d * &d;
                }
            }
            prop_assert_eq!(discriminant(&g).unwrap(), expect);
        }

        #[test]
        fn polygon_unit_scaling_invariance(ga in prop::collection::vec(-40i64..=40, 2..7), num in 1i64..30, den in 1i64..30) {
            let g = Poly::from_ints(&ga);
            prop_assume!(!g.is_zero());
            for pr in [2u64, 3, 5] {
                let p = pu(pr);
                let mut n = num;
                let mut d = den;
                while n % pr as i64 == 0 { n /= pr as i64; }
                while d % pr as i64 == 0 { d /= pr as i64; }
                let scaled = g.scale(&rat(n, d));
                let a = newton_polygon(&g, &p).unwrap();
                let b = newton_polygon(&scaled, &p).unwrap();
                prop_assert_eq!(a.segments, b.segments);
            }
        }

        #[test]
        fn polygon_runs_sum_to_degree_minus_order(ga in prop::collection::vec(-100i64..=100, 1..9)) {
            let g = Poly::from_ints(&ga);
            prop_assume!(!g.is_zero());
            let p = pu(2);
            let np = newton_polygon(&g, &p).unwrap();
            let ord = g.coeffs().iter().position(|c| !c.is_zero()).unwrap();
            let total: usize = np.segments.iter().map(|s| s.run).sum();
            prop_assert_eq!(total, g.degree().unwrap() - ord);
            for w in np.segments.windows(2) {
                prop_assert!(w[0].slope < w[1].slope);
            }
        }

        #[test]
        fn roots_found_are_roots(ga in prop::collection::vec(-20i64..=20, 2..6)) {
            let g = Poly::from_ints(&ga);
            prop_assume!(!g.is_zero());
            for (r, m) in rational_roots(&g).unwrap() {
                prop_assert!(m >= 1);
                prop_assert!(g.eval(&r).is_zero());
            }
        }

        #[test]
        fn display_parse_round_trip(nums in prop::collection::vec(-99i64..=99, 1..7), dens in prop::collection::vec(1i64..=9, 1..7)) {
            let coeffs: Vec<Rational> = nums
                .iter()
                .zip(dens.iter().cycle())
                .map(|(&n, &d)| crate::exact::rat(n, d))
                .collect();
            let g = Poly::from_coeffs(coeffs);
            prop_assert_eq!(parse_poly(&g.to_string()).unwrap(), g);
        }

        #[test]
        fn planted_roots_are_found(p1 in -9i64..=9, q1 in 1i64..=4, cs in prop::collection::vec(-9i64..=9, 1..4)) {
            let root = rat(p1, q1);
            let tail = Poly::from_ints(&cs);
            prop_assume!(!tail.is_zero());
            let g = Poly::from_coeffs(vec![-root.clone(), int(1)]).mul(&tail);
            let roots = rational_roots(&g).unwrap();
            prop_assert!(roots.iter().any(|(r, _)| *r == root));
        }
    }
}

//! Cubic dynamics in the normal form f(z) = Az³ + Bz + c with c ∈ {0, 1}.
//!
//! The critical points are ±γ with γ² = -B/(3A). γ itself is never
//! materialized: writing fⁿ(γ) = Fₙγ + Gₙ keeps every quantity of interest —
//! critical orbits, collision tests, the discriminant tower, the resolvent
//! cubic and its quartic — inside the rationals.
//!
//! Recursions (seeded by F₀ = 1, G₀ = 0):
//!
//!   Fₙ = f'(Gₙ₋₁)·Fₙ₋₁ - (B/3)·Fₙ₋₁³
//!   Gₙ = f(Gₙ₋₁) - B·Fₙ₋₁²·Gₙ₋₁
//!
//! and the two critical points collide at iterate ℓ exactly when
//! F_{ℓ-1} ≠ 0 and F_ℓ = 0.

use std::collections::HashMap;

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::mpoly::MPoly;
use crate::poly::Poly;

/// The normal form (A, B, c): f(z) = Az³ + Bz + c with c ∈ {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicParams {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl CubicParams {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::NotCubic);
        }
        if !c.is_zero() && !c.is_one() {
            return Err(Error::UnsupportedRange(format!(
                "constant term must be 0 or 1, got {c}"
            )));
        }
        Ok(CubicParams { a, b, c })
    }

    /// The generic family Az³ + Bz + 1.
    pub fn monic_tail(a: Rational, b: Rational) -> Result<Self> {
        CubicParams::new(a, b, Rational::one())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// f as a polynomial in z.
    pub fn poly(&self) -> Poly {
        Poly::from_coeffs(vec![
            self.c.clone(),
            self.b.clone(),
            Rational::zero(),
            self.a.clone(),
        ])
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        (&self.a * z * z + &self.b) * z + &self.c
    }

    pub fn eval_derivative(&self, z: &Rational) -> Rational {
        exact::int(3) * &self.a * z * z + &self.b
    }

    /// γ² = -B/(3A).
    pub fn gamma_squared(&self) -> Rational {
        -&self.b / (exact::int(3) * &self.a)
    }
}

/// Affine conjugation z ↦ scale·z + shift carrying the input cubic to its
/// normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugation {
    pub scale: Rational,
    pub shift: Rational,
}

impl Conjugation {
    pub fn apply(&self, z: &Rational) -> Rational {
        &self.scale * z + &self.shift
    }

    pub fn as_poly(&self) -> Poly {
        Poly::from_coeffs(vec![self.shift.clone(), self.scale.clone()])
    }
}

/// Conjugates a₃z³+a₂z²+a₁z+a₀ into the normal form Az³+Bz+c, c ∈ {0,1},
/// returning the parameters and the affine map φ(z) = scale·z + shift with
/// normal_form = φ⁻¹ ∘ f ∘ φ. When c = 1 the pair (A, B) is unique.
pub fn normalize(
    a3: &Rational,
    a2: &Rational,
    a1: &Rational,
    a0: &Rational,
) -> Result<(CubicParams, Conjugation)> {
    if a3.is_zero() {
        return Err(Error::NotCubic);
    }
    // Translate by s = -a2/(3 a3) to kill the quadratic term:
    // g(z) = f(z + s) - s = a3 z^3 + b1 z + b0.
    let s = -a2 / (exact::int(3) * a3);
    let fs = |z: &Rational| ((a3 * z + a2) * z + a1) * z + a0;
    let b1 = exact::int(3) * a3 * &s * &s + exact::int(2) * a2 * &s + a1;
    let b0 = fs(&s) - &s;
    if b0.is_zero() {
        let params = CubicParams::new(a3.clone(), b1, Rational::zero())?;
        return Ok((
            params,
            Conjugation {
                scale: Rational::one(),
                shift: s,
            },
        ));
    }
    // Scale by b0: (1/b0) g(b0 z) = a3 b0^2 z^3 + b1 z + 1.
    let a = a3 * &b0 * &b0;
    let params = CubicParams::new(a, b1, Rational::one())?;
    Ok((
        params,
        Conjugation {
            scale: b0,
            shift: s,
        },
    ))
}

/// The exact orbit data (F_k, G_k) for k = 0..=n, with the derived
/// H_k = (B/3A)F_k² + G_k² and C_k = -(4B/3A)F_k².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitData {
    params: CubicParams,
    f: Vec<Rational>,
    g: Vec<Rational>,
}

impl OrbitData {
    pub fn len(&self) -> usize {
        self.f.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn f(&self, k: usize) -> &Rational {
        &self.f[k]
    }

    pub fn g(&self, k: usize) -> &Rational {
        &self.g[k]
    }

    pub fn h(&self, k: usize) -> Rational {
        let fk = &self.f[k];
        let gk = &self.g[k];
        self.params.b() / (exact::int(3) * self.params.a()) * fk * fk + gk * gk
    }

    pub fn c(&self, k: usize) -> Rational {
        let fk = &self.f[k];
        exact::int(-4) * self.params.b() / (exact::int(3) * self.params.a()) * fk * fk
    }

    /// E_k(x₀) = H_k - 2G_k·x₀ + x₀².
    pub fn e(&self, k: usize, x0: &Rational) -> Rational {
        self.h(k) - exact::int(2) * &self.g[k] * x0 + x0 * x0
    }

    /// E_k as a monic quadratic in t.
    pub fn e_poly(&self, k: usize) -> Poly {
        Poly::from_coeffs(vec![
            self.h(k),
            exact::int(-2) * &self.g[k],
            Rational::one(),
        ])
    }

    /// Ẽ_k(x₀) = G_k - x₀, defined exactly when F_k = 0 (the collided value
    /// fᵏ(γ) = G_k is then rational).
    pub fn e_tilde(&self, k: usize, x0: &Rational) -> Option<Rational> {
        if self.f[k].is_zero() {
            Some(&self.g[k] - x0)
        } else {
            None
        }
    }
}

/// (E_n(x₀), Ẽ_n(x₀)): the pair of level-n critical values; the second is
/// present exactly when F_n = 0.
pub fn e_values(data: &OrbitData, x0: &Rational, n: usize) -> (Rational, Option<Rational>) {
    (data.e(n, x0), data.e_tilde(n, x0))
}

/// Runs the orbit recursion to level n.
pub fn orbit(params: &CubicParams, n: usize) -> OrbitData {
    let third_b = params.b() / exact::int(3);
    let mut f = Vec::with_capacity(n + 1);
    let mut g = Vec::with_capacity(n + 1);
    f.push(Rational::one());
    g.push(Rational::zero());
    for k in 1..=n {
        let fp = params.eval_derivative(&g[k - 1]);
        let fk = &fp * &f[k - 1] - &third_b * &f[k - 1] * &f[k - 1] * &f[k - 1];
        let gk = params.eval(&g[k - 1]) - params.b() * &f[k - 1] * &f[k - 1] * &g[k - 1];
        f.push(fk);
        g.push(gk);
    }
    OrbitData {
        params: params.clone(),
        f,
        g,
    }
}

/// Fixed screening primes for the modular orbit: F_k != 0 mod p proves
/// F_k != 0 over the rationals whenever p divides no input denominator and
/// p != 3 (the recursion only ever divides by 3).
const SCREEN_PRIMES: [u64; 4] = [
    2305843009213693951, // 2^61 - 1
    2147483647,          // 2^31 - 1
    1000000007,
    998244353,
];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn rational_mod(x: &Rational, p: u64) -> Option<u64> {
    let pv = BigInt::from(p);
    let den = num::Integer::mod_floor(&(x.denom().clone()), &pv);
    let den = u64::try_from(den.magnitude().clone()).ok()?;
    if den == 0 {
        return None;
    }
    let num = num::Integer::mod_floor(&(x.numer().clone()), &pv);
    let num = u64::try_from(num.magnitude().clone()).ok()?;
    Some(mul_mod(num, pow_mod(den, p - 2, p), p))
}

/// F_k mod p for k = 0..=n, or None when p collides with a denominator.
fn screen_orbit(params: &CubicParams, n: usize, p: u64) -> Option<Vec<u64>> {
    let a = rational_mod(params.a(), p)?;
    let b = rational_mod(params.b(), p)?;
    let c = rational_mod(params.c(), p)?;
    let third = pow_mod(3, p - 2, p);
    let third_b = mul_mod(b, third, p);
    let mut f = vec![1u64];
    let mut g = vec![0u64];
    for _ in 1..=n {
        let gp = *g.last().unwrap();
        let fp = *f.last().unwrap();
        let fprime = (mul_mod(mul_mod(3 % p, a, p), mul_mod(gp, gp, p), p) + b) % p;
        let f3 = mul_mod(mul_mod(fp, fp, p), fp, p);
        let fk = (mul_mod(fprime, fp, p) + p - mul_mod(third_b, f3, p)) % p;
        let g3 = mul_mod(mul_mod(gp, gp, p), gp, p);
        let f_of_g = (mul_mod(a, g3, p) + mul_mod(b, gp, p) + c) % p;
        let gk = (f_of_g + p - mul_mod(b, mul_mod(mul_mod(fp, fp, p), gp, p), p)) % p;
        f.push(fk);
        g.push(gk);
    }
    Some(f)
}

/// Smallest ℓ ≤ max_iter with F_ℓ = 0 and F_{ℓ-1} ≠ 0, if any.
///
/// Refuses B = 0 (a doubled critical point) and c = 0 (the odd family, whose
/// collided value would be the fixed point 0). ℓ = 1 cannot occur in this
/// family since F₁ = 2B/3 ≠ 0; that is asserted, not assumed.
///
/// The heights of the exact orbit values triple per level, so vanishing is
/// first screened modulo fixed primes; a level whose screen is zero at every
/// prime is then confirmed by the exact recursion.
pub fn collision_index(params: &CubicParams, max_iter: usize) -> Result<Option<usize>> {
    if params.b().is_zero() {
        return Err(Error::DegenerateCriticalPoint);
    }
    if params.c().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let screens: Vec<Vec<u64>> = SCREEN_PRIMES
        .iter()
        .filter_map(|&p| screen_orbit(params, max_iter, p))
        .collect();
    let surely_nonzero = |k: usize| screens.iter().any(|f| f[k] != 0);

    for ell in 1..=max_iter {
        if !screens.is_empty() && surely_nonzero(ell) {
            continue;
        }
        // Every screen vanishes (or none applies): decide exactly, computing
        // only up to this level.
        let data = orbit(params, ell);
        assert!(!data.f(1).is_zero(), "F_1 = 2B/3 must be nonzero for B != 0");
        if data.f(ell).is_zero() {
            assert!(ell >= 2);
            assert!(!data.f(ell - 1).is_zero());
            return Ok(Some(ell));
        }
    }
    Ok(None)
}

/// Errors unless the critical points collide exactly at ℓ.
pub fn require_collision(params: &CubicParams, ell: usize) -> Result<OrbitData> {
    if ell < 2 {
        return Err(Error::BadEll);
    }
    if params.b().is_zero() {
        return Err(Error::DegenerateCriticalPoint);
    }
    if params.c().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let data = orbit(params, ell);
    if !data.f(ell).is_zero() || data.f(ell - 1).is_zero() {
        return Err(Error::NoCollision { ell });
    }
    Ok(data)
}

pub const MAX_SYMBOLIC_LEVEL: usize = 5;

/// F_ℓ(A, B) as a bivariate polynomial, by running the orbit recursion
/// symbolically (c = 1). Supported for 2 ≤ ℓ ≤ 5.
pub fn collision_locus(ell: usize) -> Result<MPoly> {
    if !(2..=MAX_SYMBOLIC_LEVEL).contains(&ell) {
        return Err(Error::UnsupportedRange(format!(
            "collision locus supported for 2 <= ell <= {MAX_SYMBOLIC_LEVEL}, got {ell}"
        )));
    }
    Ok(symbolic_orbit(ell).0.pop().unwrap())
}

/// Symbolic (F_k, G_k) sequences in Q[A, B] for k = 0..=n, c = 1.
pub fn symbolic_orbit(n: usize) -> (Vec<MPoly>, Vec<MPoly>) {
    let vars = ["A", "B"];
    let a = MPoly::var(&vars, "A").unwrap();
    let b = MPoly::var(&vars, "B").unwrap();
    let one = MPoly::constant(&vars, Rational::one());
    let third = exact::rat(1, 3);
    let mut f = vec![one.clone()];
    let mut g = vec![MPoly::zero(&vars)];
    for k in 1..=n {
        let gp = &g[k - 1];
        let fp = &f[k - 1];
        // f'(G) = 3A G^2 + B
        let fprime = a.mul(&gp.mul(gp)).scale(&exact::int(3)).add(&b);
        let fk = fprime.mul(fp).sub(&b.scale(&third).mul(&fp.mul(fp).mul(fp)));
        // f(G) = A G^3 + B G + 1
        let f_of_g = a.mul(&gp.mul(gp).mul(gp)).add(&b.mul(gp)).add(&one);
        let gk = f_of_g.sub(&b.mul(&fp.mul(fp)).mul(gp));
        f.push(fk);
        g.push(gk);
    }
    (f, g)
}

/// The discriminant tower Δ(fᵏ - x₀) for k = 0..=n, seeded by Δ = 1 at k = 0
/// and advanced by
///   Δ(fᵏ-x₀) = -3^(3^k) · A^(3^(2k-1)-1) · Δ(f^(k-1)-x₀)³ · E_k(x₀).
pub fn disc_tower(params: &CubicParams, x0: &Rational, n: usize) -> Vec<Rational> {
    let data = orbit(params, n);
    let mut out = vec![Rational::one()];
    for k in 1..=n {
        let three_pow = big_pow(3, pow3(k));
        let a_pow = rat_pow_big(params.a(), &(pow3_big(2 * k - 1) - BigInt::one()));
        let prev = &out[k - 1];
        let cube = prev * prev * prev;
        out.push(-Rational::from_integer(three_pow) * a_pow * cube * data.e(k, x0));
    }
    out
}

fn pow3(k: usize) -> BigInt {
    pow3_big(k)
}

fn pow3_big(k: usize) -> BigInt {
    BigInt::from(3).pow(k as u32)
}

fn big_pow(base: u32, exp: BigInt) -> BigInt {
    // exp is a power of 3 here, so it fits comfortably in u32 at desk scale.
    let e = u32::try_from(exp.magnitude().clone()).expect("desk-scale exponent");
    BigInt::from(base).pow(e)
}

fn rat_pow_big(x: &Rational, e: &BigInt) -> Rational {
    let e = u32::try_from(e.magnitude().clone()).expect("desk-scale exponent");
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// D_ℓ(x₀) = 3^((3^ℓ-1)/2) · A^((3^(2ℓ-1)-1)/2) · Δ(f^(ℓ-1)-x₀)² · (f^ℓ(γ)-x₀).
/// Both exponents are integers; that is asserted. Requires the collision.
pub fn d_ell(params: &CubicParams, x0: &Rational, ell: usize) -> Result<Rational> {
    let data = require_collision(params, ell)?;
    let e3 = pow3_big(ell) - BigInt::one();
    let ea = pow3_big(2 * ell - 1) - BigInt::one();
    assert!((&e3 % BigInt::from(2)).is_zero(), "(3^l - 1)/2 is integral");
    assert!((&ea % BigInt::from(2)).is_zero(), "(3^(2l-1) - 1)/2 is integral");
    let tower = disc_tower(params, x0, ell - 1);
    let delta_prev = &tower[ell - 1];
    let e_tilde = data.e_tilde(ell, x0).expect("collision gives rational value");
    Ok(
        Rational::from_integer(big_pow(3, e3 / BigInt::from(2)))
            * rat_pow_big(params.a(), &(ea / BigInt::from(2)))
            * delta_prev
            * delta_prev
            * e_tilde,
    )
}

/// The resolvent data attached to a collision at ℓ: elementary symmetric
/// functions s₁, s₂, s₃ of the three values E_{ℓ-1}(αᵢ) over f(αᵢ) = x₀,
/// the quartic z⁴ - 2s₂z² - 8s₃z + (s₂² - 4s₁s₃), and the exact identity
/// value s₂² - 4s₁s₃ = -(4B/3A³)·F_{ℓ-1}²·(f^ℓ(γ)-x₀)².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolventData {
    pub s1: Rational,
    pub s2: Rational,
    pub s3: Rational,
    pub quartic: Poly,
    pub identity_value: Rational,
}

impl ResolventData {
    /// z³ - s₁z² + s₂z - s₃, the monic cubic with roots E_{ℓ-1}(αᵢ).
    pub fn cubic(&self) -> Poly {
        Poly::from_coeffs(vec![
            -self.s3.clone(),
            self.s2.clone(),
            -self.s1.clone(),
            Rational::one(),
        ])
    }
}

pub fn resolvent(params: &CubicParams, x0: &Rational, ell: usize) -> Result<ResolventData> {
    let data = require_collision(params, ell)?;
    let a = params.a();
    let b = params.b();
    let g_prev = data.g(ell - 1);
    let f_prev = data.f(ell - 1);
    let e_tilde = data.e_tilde(ell, x0).expect("collision");
    let s1 = b / a + exact::int(12) * g_prev * g_prev;
    let s2 = exact::int(-6) / a * g_prev * &e_tilde;
    let s3 = &e_tilde * &e_tilde / (a * a);
    let identity_value = &s2 * &s2 - exact::int(4) * &s1 * &s3;
    let expected = exact::int(-4) * b / (exact::int(3) * a * a * a)
        * f_prev
        * f_prev
        * &e_tilde
        * &e_tilde;
    assert_eq!(identity_value, expected, "resolvent identity must be exact");
    let quartic = Poly::from_coeffs(vec![
        identity_value.clone(),
        exact::int(-8) * &s3,
        exact::int(-2) * &s2,
        Rational::zero(),
        Rational::one(),
    ]);
    Ok(ResolventData {
        s1,
        s2,
        s3,
        quartic,
        identity_value,
    })
}

/// Numeric evaluation of the symbolic orbit polynomials, used to cross-check
/// the two recursion routes.
pub fn eval_symbolic(p: &MPoly, a: &Rational, b: &Rational) -> Rational {
    let mut m = HashMap::new();
    m.insert("A".to_string(), a.clone());
    m.insert("B".to_string(), b.clone());
    p.eval(&m).expect("A, B assignment covers the variables")
}

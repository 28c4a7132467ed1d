//! Hypothesis checkers and certificates.
//!
//! A certificate records, prime by prime and level by level, the valuation
//! conditions under which the surjectivity machinery applies to a concrete
//! (A, B, x₀, ℓ): unit conditions on A, B, 6 and the collision data C_j,
//! unit conditions on the earlier orbit values E_i(x₀), and an odd-valuation
//! condition at the current level. Every boolean is reproducible from the
//! valuations stored next to it.
//!
//! The conclusions are deliberately bounded: a passing run reports
//! "verified through level N", never the unbounded statement.

use std::collections::BTreeMap;

use num::{BigUint, One, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::{orbit, require_collision, resolvent, CubicParams, OrbitData};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::poly::{newton_polygon, rational_roots, NewtonPolygon, Poly};

/// Per-level check record. `checks` and `valuations` share key names:
/// "vA", "vB", "v6", "vx0", "C1".., "E1".., "parity".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCheck {
    pub n: usize,
    pub prime: BigUint,
    pub checks: BTreeMap<String, bool>,
    pub valuations: BTreeMap<String, i64>,
}

impl LevelCheck {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|&b| b)
    }

    pub fn failed_names(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, &b)| !b)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Recomputes every boolean from the stored valuations; true when the
    /// record is self-consistent. (A missing "vx0" valuation encodes
    /// v(x₀) = +∞, i.e. x₀ = 0.)
    pub fn self_consistent(&self, ell: usize) -> bool {
        for (name, &flag) in &self.checks {
            let v = self.valuations.get(name).copied();
            let expect = match name.as_str() {
                "vA" | "vB" | "v6" => v == Some(0),
                "vx0" => v.is_none_or(|x| x >= 0),
                "parity" => v.is_some_and(|x| x % 2 != 0),
                _ if name.starts_with('C') || name.starts_with('E') => v == Some(0),
                _ => return false,
            };
            let _ = ell;
            if expect != flag {
                return false;
            }
        }
        true
    }
}

fn val_or_degenerate(p: &BigUint, x: &Rational, what: &str) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::DegenerateValue(format!(
            "{what} vanishes; its valuation is undefined"
        )));
    }
    exact::val(p, x)
}

/// Evaluates the level-n hypotheses at the place v: unit conditions on
/// A, B, 6, x₀ and on C_j (j <= min(ℓ-1, n)) and E_i (i < n), plus the
/// parity condition on E_n (n < ℓ) or Ẽ_n (n >= ℓ).
pub fn check_level(
    params: &CubicParams,
    x0: &Rational,
    ell: usize,
    n: usize,
    v: &BigUint,
) -> Result<LevelCheck> {
    require_collision(params, ell)?;
    if n < 1 {
        return Err(Error::UnsupportedRange("level must be >= 1".into()));
    }
    let data = orbit(params, n.max(ell));
    let mut checks = BTreeMap::new();
    let mut valuations = BTreeMap::new();

    let va = exact::val(v, params.a())?;
    checks.insert("vA".into(), va == 0);
    valuations.insert("vA".into(), va);
    let vb = val_or_degenerate(v, params.b(), "B")?;
    checks.insert("vB".into(), vb == 0);
    valuations.insert("vB".into(), vb);
    let v6 = exact::val(v, &exact::int(6))?;
    checks.insert("v6".into(), v6 == 0);
    valuations.insert("v6".into(), v6);
    if x0.is_zero() {
        checks.insert("vx0".into(), true);
    } else {
        let vx = exact::val(v, x0)?;
        checks.insert("vx0".into(), vx >= 0);
        valuations.insert("vx0".into(), vx);
    }

    for j in 1..=(ell - 1).min(n) {
        let cj = data.c(j);
        let vc = val_or_degenerate(v, &cj, &format!("C_{j}"))?;
        checks.insert(format!("C{j}"), vc == 0);
        valuations.insert(format!("C{j}"), vc);
    }

    for i in 1..n {
        let ei = data.e(i, x0);
        let ve = val_or_degenerate(v, &ei, &format!("E_{i}(x0)"))?;
        checks.insert(format!("E{i}"), ve == 0);
        valuations.insert(format!("E{i}"), ve);
    }

    let parity_value = if n < ell {
        data.e(n, x0)
    } else {
        data.e_tilde(n, x0)
            .expect("collision at ell forces F_n = 0 for n >= ell")
    };
    let vp = val_or_degenerate(v, &parity_value, "the level value")?;
    checks.insert("parity".into(), vp % 2 != 0);
    valuations.insert("parity".into(), vp);

    Ok(LevelCheck {
        n,
        prime: v.clone(),
        checks,
        valuations,
    })
}

/// Candidate places at one level of the search.
#[derive(Debug, Clone)]
pub struct LevelPlaces {
    pub n: usize,
    /// E_n(x₀) for n < ℓ, otherwise Ẽ_n(x₀).
    pub value: Rational,
    /// Primes of the numerator that were checked, with their outcome.
    pub candidates: Vec<(BigUint, LevelCheck)>,
    /// Candidates skipped because they already passed at a lower level.
    pub excluded: Vec<BigUint>,
    /// Set when the numerator would not factor within the bound.
    pub incomplete_cofactor: Option<BigUint>,
}

impl LevelPlaces {
    pub fn passing(&self) -> Vec<&BigUint> {
        self.candidates
            .iter()
            .filter(|(_, c)| c.passed())
            .map(|(p, _)| p)
            .collect()
    }
}

/// For each n <= max_level, factors the numerator of E_n(x₀) (n < ℓ) or
/// Ẽ_n(x₀) (n >= ℓ) and runs the level check at each prime, excluding primes
/// already used at lower levels so the selected places stay pairwise
/// distinct.
pub fn find_places(
    params: &CubicParams,
    x0: &Rational,
    ell: usize,
    max_level: usize,
    bound_bits: u64,
) -> Result<Vec<LevelPlaces>> {
    require_collision(params, ell)?;
    let data = orbit(params, max_level.max(ell));
    let mut out = Vec::new();
    let mut used: Vec<BigUint> = Vec::new();
    for n in 1..=max_level {
        let value = if n < ell {
            data.e(n, x0)
        } else {
            data.e_tilde(n, x0).expect("collision")
        };
        if value.is_zero() {
            return Err(Error::DegenerateValue(format!(
                "the level-{n} value vanishes at x0 = {x0}"
            )));
        }
        let mut incomplete = None;
        let primes: Vec<BigUint> = match exact::factor_with_bound(value.numer(), bound_bits) {
            Ok(f) => f.primes().cloned().collect(),
            Err(Error::IncompleteFactorization { cofactor }) => {
                // Keep whatever small factors trial division can see and
                // flag the rest.
                incomplete = Some(cofactor.clone());
                let partial = value.numer() / num::BigInt::from(cofactor);
                match exact::factor_with_bound(&partial, bound_bits) {
                    Ok(f) => f.primes().cloned().collect(),
                    Err(_) => Vec::new(),
                }
            }
            Err(e) => return Err(e),
        };
        let mut candidates = Vec::new();
        let mut excluded = Vec::new();
        for p in primes {
            if used.contains(&p) {
                excluded.push(p);
                continue;
            }
            let check = check_level(params, x0, ell, n, &p)?;
            candidates.push((p, check));
        }
        let passing: Vec<BigUint> = candidates
            .iter()
            .filter(|(_, c)| c.passed())
            .map(|(p, _)| p.clone())
            .collect();
        used.extend(passing);
        out.push(LevelPlaces {
            n,
            value,
            candidates,
            excluded,
            incomplete_cofactor: incomplete,
        });
    }
    Ok(out)
}

/// Searches the primes of the denominator of x₀ for a place u with
/// u(A) = 0 <= u(B), u(x₀) < 0, and u(x₀) prime to 3.
pub fn find_u(params: &CubicParams, x0: &Rational) -> Result<Option<(BigUint, i64)>> {
    if x0.is_zero() {
        return Ok(None);
    }
    let denom = x0.denom();
    if denom.is_one() {
        return Ok(None);
    }
    let f = exact::factor(denom)?;
    for p in f.primes() {
        let ua = exact::val(p, params.a())?;
        if ua != 0 {
            continue;
        }
        if !params.b().is_zero() && exact::val(p, params.b())? < 0 {
            continue;
        }
        let ux = exact::val(p, x0)?;
        if ux >= 0 || ux % 3 == 0 {
            continue;
        }
        return Ok(Some((p.clone(), ux)));
    }
    Ok(None)
}

/// Full report for the level-ℓ escape criterion at a place v: the three
/// hypothesis groups, the derived quartic with its v-adic Newton polygon
/// (expected: a single segment of non-integral slope), and the rational-root
/// diagnostic.
#[derive(Debug, Clone)]
pub struct EscapeCriterionReport {
    pub prime: BigUint,
    pub hypotheses: Vec<(String, bool)>,
    pub hypotheses_hold: bool,
    pub quartic: Poly,
    pub polygon: NewtonPolygon,
    pub polygon_single_nonintegral: bool,
    pub quartic_rational_roots: Vec<(Rational, usize)>,
    /// The escape conclusion: valid exactly when the hypotheses hold.
    pub h_escape: bool,
    pub note: String,
}

pub fn check_escape_criterion(
    params: &CubicParams,
    x0: &Rational,
    ell: usize,
    v: &BigUint,
) -> Result<EscapeCriterionReport> {
    let data = require_collision(params, ell)?;
    let mut hypotheses = Vec::new();

    let mut unit_ok = true;
    for (name, value) in [
        ("vA".to_string(), params.a().clone()),
        ("vB".to_string(), params.b().clone()),
        (format!("vC{}", ell - 1), data.c(ell - 1)),
        ("v6".to_string(), exact::int(6)),
    ] {
        let vv = val_or_degenerate(v, &value, &name)?;
        hypotheses.push((name, vv == 0));
        unit_ok &= vv == 0;
    }
    let x0_ok = if x0.is_zero() {
        true
    } else {
        exact::val(v, x0)? >= 0
    };
    hypotheses.push(("vx0".into(), x0_ok));
    unit_ok &= x0_ok;

    for i in 1..ell {
        let ei = data.e(i, x0);
        let ve = val_or_degenerate(v, &ei, &format!("E_{i}(x0)"))?;
        hypotheses.push((format!("E{i}"), ve == 0));
        unit_ok &= ve == 0;
    }

    let e_tilde = data.e_tilde(ell, x0).expect("collision");
    let vpar = val_or_degenerate(v, &e_tilde, "the collided level value")?;
    hypotheses.push(("parity".into(), vpar % 2 != 0));
    let hypotheses_hold = unit_ok && vpar % 2 != 0;

    let res = resolvent(params, x0, ell)?;
    let polygon = newton_polygon(&res.quartic, v)?;
    let polygon_single_nonintegral = polygon.single_nonintegral_slope();
    let quartic_rational_roots = rational_roots(&res.quartic)?;

    let note = if quartic_rational_roots.is_empty() {
        "the derived quartic has no rational roots".to_string()
    } else {
        let roots: Vec<String> = quartic_rational_roots
            .iter()
            .map(|(r, m)| format!("{r} (multiplicity {m})"))
            .collect();
        format!("the derived quartic has rational roots: {}", roots.join(", "))
    };

    Ok(EscapeCriterionReport {
        prime: v.clone(),
        hypotheses,
        hypotheses_hold,
        quartic: res.quartic,
        polygon,
        polygon_single_nonintegral,
        quartic_rational_roots,
        h_escape: hypotheses_hold,
        note,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    #[serde(rename = "QTILDE_FULL")]
    QTildeFull,
    #[serde(rename = "Q_FULL")]
    QFull,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl std::fmt::Display for Conclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Conclusion::QTildeFull => write!(f, "QTILDE_FULL"),
            Conclusion::QFull => write!(f, "Q_FULL"),
            Conclusion::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPlace {
    pub prime: BigUint,
    pub vx0: i64,
}

/// The assembled certificate for a concrete (A, B, x₀, ℓ) through level N.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub a: Rational,
    pub b: Rational,
    pub x0: Rational,
    pub ell: usize,
    pub levels: Vec<LevelCheck>,
    pub u: Option<UPlace>,
    pub conclusion: Conclusion,
    pub note: String,
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub bound_bits: u64,
    /// Reserved: a declared quadratic extension containing sqrt(-3) would
    /// upgrade the conclusion; over the plain rationals it never applies.
    pub sqrt_minus_three_in_field: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            bound_bits: exact::DEFAULT_FACTOR_BITS,
            sqrt_minus_three_in_field: false,
        }
    }
}

/// Orchestrates the u-place search and the per-level place searches, and
/// assembles the bounded conclusion.
pub fn certify(
    params: &CubicParams,
    x0: &Rational,
    ell: usize,
    max_level: usize,
    opts: CertifyOptions,
) -> Result<Certificate> {
    require_collision(params, ell)?;
    let mut levels = Vec::new();
    let mut note_parts: Vec<String> = Vec::new();

    let u = find_u(params, x0)?;
    let u_place = u.map(|(prime, vx0)| UPlace { prime, vx0 });

    let searches = find_places(params, x0, ell, max_level, opts.bound_bits)?;
    let mut all_levels_ok = true;
    for search in &searches {
        if let Some(cofactor) = &search.incomplete_cofactor {
            note_parts.push(format!(
                "level {}: factorization incomplete, cofactor {}",
                search.n, cofactor
            ));
        }
        match search.candidates.iter().find(|(_, c)| c.passed()) {
            Some((_, check)) => levels.push(check.clone()),
            None => {
                all_levels_ok = false;
                // Keep the most informative failing record for the report:
                // the one with the fewest failed checks.
                if let Some((_, check)) = search
                    .candidates
                    .iter()
                    .min_by_key(|(_, c)| c.failed_names().len())
                {
                    levels.push(check.clone());
                    note_parts.push(format!(
                        "level {}: no admissible place; best candidate {} fails {:?}",
                        search.n,
                        check.prime,
                        check.failed_names()
                    ));
                } else {
                    note_parts.push(format!(
                        "level {}: no candidate primes at all",
                        search.n
                    ));
                }
            }
        }
    }

    // sqrt(-3) is never rational: the exact square test on -3 settles it.
    debug_assert!(!exact::is_rational_square(&exact::int(-3)));

    let conclusion = if u_place.is_none() {
        note_parts.push("no place u with u(x0) negative and prime to 3".into());
        Conclusion::Inconclusive
    } else if !all_levels_ok {
        Conclusion::Inconclusive
    } else if opts.sqrt_minus_three_in_field {
        Conclusion::QFull
    } else {
        Conclusion::QTildeFull
    };
    if conclusion != Conclusion::Inconclusive {
        note_parts.insert(
            0,
            format!(
                "verified through level {max_level}; the full statement needs an admissible place at every level"
            ),
        );
    }

    Ok(Certificate {
        a: params.a().clone(),
        b: params.b().clone(),
        x0: x0.clone(),
        ell,
        levels,
        u: u_place,
        conclusion,
        note: note_parts.join("; "),
    })
}

impl Certificate {
    pub fn verified(&self) -> bool {
        self.conclusion != Conclusion::Inconclusive
    }

    /// Serializes to the documented schema:
    /// { "A": str, "B": str, "x0": str, "ell": int, "levels": [...],
    ///   "u": {"prime": str, "vx0": int} | null,
    ///   "conclusion": str, "note": str }.
    pub fn to_json(&self) -> serde_json::Value {
        let levels: Vec<serde_json::Value> = self
            .levels
            .iter()
            .map(|l| {
                serde_json::json!({
                    "n": l.n,
                    "prime": l.prime.to_string(),
                    "checks": l.checks,
                    "valuations": l.valuations,
                })
            })
            .collect();
        serde_json::json!({
            "A": exact::format_rational(&self.a),
            "B": exact::format_rational(&self.b),
            "x0": exact::format_rational(&self.x0),
            "ell": self.ell,
            "levels": levels,
            "u": self.u.as_ref().map(|u| serde_json::json!({
                "prime": u.prime.to_string(),
                "vx0": u.vx0,
            })),
            "conclusion": self.conclusion.to_string(),
            "note": self.note,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Certificate> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::BadPortrait("certificate must be an object".into()))?;
        let rat_field = |k: &str| -> Result<Rational> {
            exact::parse_rational(
                obj.get(k)
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| Error::BadPortrait(format!("missing {k}")))?,
            )
        };
        let a = rat_field("A")?;
        let b = rat_field("B")?;
        let x0 = rat_field("x0")?;
        let ell = obj
            .get("ell")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::BadPortrait("missing ell".into()))? as usize;
        let mut levels = Vec::new();
        for l in obj
            .get("levels")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::BadPortrait("missing levels".into()))?
        {
            let lo = l
                .as_object()
                .ok_or_else(|| Error::BadPortrait("level must be an object".into()))?;
            let n = lo.get("n").and_then(|x| x.as_u64()).unwrap_or(0) as usize;
            let prime: BigUint = lo
                .get("prime")
                .and_then(|x| x.as_str())
                .ok_or_else(|| Error::BadPortrait("missing prime".into()))?
                .parse()
                .map_err(|_| Error::BadPortrait("bad prime".into()))?;
            let mut checks = BTreeMap::new();
            for (k, val) in lo
                .get("checks")
                .and_then(|x| x.as_object())
                .ok_or_else(|| Error::BadPortrait("missing checks".into()))?
            {
                checks.insert(
                    k.clone(),
                    val.as_bool()
                        .ok_or_else(|| Error::BadPortrait("check must be a bool".into()))?,
                );
            }
            let mut valuations = BTreeMap::new();
            for (k, val) in lo
                .get("valuations")
                .and_then(|x| x.as_object())
                .ok_or_else(|| Error::BadPortrait("missing valuations".into()))?
            {
                valuations.insert(
                    k.clone(),
                    val.as_i64()
                        .ok_or_else(|| Error::BadPortrait("valuation must be an int".into()))?,
                );
            }
            levels.push(LevelCheck {
                n,
                prime,
                checks,
                valuations,
            });
        }
        let u = match obj.get("u") {
            None | Some(serde_json::Value::Null) => None,
            Some(uv) => {
                let uo = uv
                    .as_object()
                    .ok_or_else(|| Error::BadPortrait("u must be an object".into()))?;
                Some(UPlace {
                    prime: uo
                        .get("prime")
                        .and_then(|x| x.as_str())
                        .ok_or_else(|| Error::BadPortrait("missing u.prime".into()))?
                        .parse()
                        .map_err(|_| Error::BadPortrait("bad u.prime".into()))?,
                    vx0: uo
                        .get("vx0")
                        .and_then(|x| x.as_i64())
                        .ok_or_else(|| Error::BadPortrait("missing u.vx0".into()))?,
                })
            }
        };
        let conclusion = match obj.get("conclusion").and_then(|x| x.as_str()) {
            Some("QTILDE_FULL") => Conclusion::QTildeFull,
            Some("Q_FULL") => Conclusion::QFull,
            Some("INCONCLUSIVE") => Conclusion::Inconclusive,
            _ => return Err(Error::BadPortrait("bad conclusion".into())),
        };
        let note = obj
            .get("note")
            .and_then(|x| x.as_str())
            .unwrap_or("")
            .to_string();
        Ok(Certificate {
            a,
            b,
            x0,
            ell,
            levels,
            u,
            conclusion,
            note,
        })
    }
}

// ---------------------------------------------------------------------------
// Function-field variant
// ---------------------------------------------------------------------------

/// One level of the x₀ = t certificate.
#[derive(Debug, Clone)]
pub struct FunctionFieldLevel {
    pub n: usize,
    /// E_n(t) (monic quadratic, n < ℓ) or Ẽ_n(t) = G_n - t (linear, n >= ℓ).
    pub poly: Poly,
    /// disc(E_n) = C_n for the quadratic levels.
    pub discriminant: Option<Rational>,
    pub irreducible: bool,
}

#[derive(Debug, Clone)]
pub struct FunctionFieldCertificate {
    pub a: Rational,
    pub b: Rational,
    pub ell: usize,
    pub levels: Vec<FunctionFieldLevel>,
    pub pairwise_distinct: bool,
    pub conclusion: Conclusion,
    pub note: String,
}

impl FunctionFieldCertificate {
    pub fn verified(&self) -> bool {
        self.conclusion != Conclusion::Inconclusive
    }
}

/// Reports the first repeated value, if any.
pub fn first_repeat(values: &[Rational]) -> Option<(usize, usize)> {
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            if values[i] == values[j] {
                return Some((i, j));
            }
        }
    }
    None
}

/// The x₀ = t specialization over the rational constant field: each level
/// needs an irreducible E_n(t) (checked by the exact square test on its
/// discriminant C_n) or the linear Ẽ_n(t), and the places are pairwise
/// distinct exactly when the collided orbit values G_n are. The u-place is
/// the negative-degree valuation, which is always admissible.
pub fn certify_function_field(
    params: &CubicParams,
    ell: usize,
    max_level: usize,
) -> Result<FunctionFieldCertificate> {
    let data: OrbitData = require_collision(params, ell)?;
    let data = if max_level > ell {
        orbit(params, max_level)
    } else {
        data
    };
    let mut levels = Vec::new();
    let mut all_ok = true;
    let mut notes: Vec<String> = Vec::new();

    for n in 1..=max_level {
        if n < ell {
            let poly = data.e_poly(n);
            let disc = data.c(n);
            // Monic quadratic over Q: irreducible iff the discriminant is
            // not a rational square.
            let irreducible = !exact::is_rational_square(&disc);
            if !irreducible {
                all_ok = false;
                notes.push(format!(
                    "level {n}: E_{n}(t) splits (discriminant {disc} is a square)"
                ));
            }
            levels.push(FunctionFieldLevel {
                n,
                poly,
                discriminant: Some(disc),
                irreducible,
            });
        } else {
            let poly = Poly::from_coeffs(vec![data.g(n).clone(), exact::int(-1)]);
            levels.push(FunctionFieldLevel {
                n,
                poly,
                discriminant: None,
                irreducible: true,
            });
        }
    }

    // Pairwise-distinct places: the collided orbit values G_n (n >= ℓ) must
    // not repeat; a repeat would make the orbit preperiodic.
    let orbit_values: Vec<Rational> = (ell..=max_level).map(|n| data.g(n).clone()).collect();
    let pairwise_distinct = match first_repeat(&orbit_values) {
        Some((i, j)) => {
            return Err(Error::PreperiodicOrbit(format!(
                "G_{} = G_{} = {}",
                ell + i,
                ell + j,
                orbit_values[i]
            )));
        }
        None => true,
    };

    let conclusion = if all_ok {
        Conclusion::QTildeFull
    } else {
        Conclusion::Inconclusive
    };
    if all_ok {
        notes.insert(
            0,
            format!(
                "verified through level {max_level} with x0 = t; u = the negative-degree valuation (u(t) = -1)"
            ),
        );
    }

    Ok(FunctionFieldCertificate {
        a: params.a().clone(),
        b: params.b().clone(),
        ell,
        levels,
        pairwise_distinct,
        conclusion,
        note: notes.join("; "),
    })
}

//! Sparse multivariate polynomials over the rationals.
//!
//! Deliberately minimal: add, multiply, scale, and exact evaluation are all
//! the symbolic orbit recursion and the symmetric-function identity checks
//! need. Terms are kept in graded lexicographic order and zero coefficients
//! are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(pub Vec<u32>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let da: u64 = self.0.iter().map(|&e| e as u64).sum();
        let db: u64 = other.0.iter().map(|&e| e as u64).sum();
        da.cmp(&db).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in a fixed ordered list of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Rational) -> Self {
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; p.vars.len()]), c);
        }
        p
    }

    /// The variable `name`, which must be in the variable list.
    pub fn var(vars: &[&str], name: &str) -> Result<Self> {
        let mut p = MPoly::zero(vars);
        let i = p
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::MissingVariable(name.to_string()))?;
        let mut exp = vec![0; p.vars.len()];
        exp[i] = 1;
        p.terms.insert(Monomial(exp), Rational::one());
        Ok(p)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|m| m.0.iter().map(|&e| e as u64).sum())
            .max()
            .unwrap_or(0)
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.vars, other.vars);
        let mut out = MPoly::zero(&self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exp: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.insert(Monomial(exp), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let mut acc = MPoly::constant(&vars, Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation; the assignment must cover every variable.
    pub fn eval(&self, assignment: &HashMap<String, Rational>) -> Result<Rational> {
        let mut values = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            values.push(
                assignment
                    .get(v)
                    .ok_or_else(|| Error::MissingVariable(v.clone()))?
                    .clone(),
            );
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in values.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest graded-lex terms first.
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            use num::Signed;
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
            let is_const = m.0.iter().all(|&e| e == 0);
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first_var = true;
            for (v, &e) in self.vars.iter().zip(&m.0) {
                if e == 0 {
                    continue;
                }
                if !first_var {
                    write!(f, "*")?;
                }
                first_var = false;
                if e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Evaluates `q` at the given variable assignment. Thin named wrapper so the
/// operation reads the same here and in the CLI.
pub fn mv_eval(q: &MPoly, assignment: &HashMap<String, Rational>) -> Result<Rational> {
    q.eval(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn assign(pairs: &[(&str, Rational)]) -> HashMap<String, Rational> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }

    #[test]
    fn eval_product() {
        let vars = ["A", "B"];
        let a = MPoly::var(&vars, "A").unwrap();
        let b = MPoly::var(&vars, "B").unwrap();
        let ab = a.mul(&b);
        assert_eq!(
            mv_eval(&ab, &assign(&[("A", int(2)), ("B", int(3))])).unwrap(),
            int(6)
        );
        assert!(matches!(
            mv_eval(&ab, &assign(&[("A", int(2))])),
            Err(Error::MissingVariable(_))
        ));
    }

    #[test]
    fn canonical_order_and_display() {
        let vars = ["A", "B"];
        let a = MPoly::var(&vars, "A").unwrap();
        let b = MPoly::var(&vars, "B").unwrap();
        // B^3 + A*B + A (graded lex: B^3 first, then A*B, then A)
        let p = b.pow(3).add(&a.mul(&b)).add(&a);
        assert_eq!(p.to_string(), "B^3 + A*B + A");
        let q = p.sub(&b.pow(3));
        assert_eq!(q.num_terms(), 2);
        assert_eq!(p.total_degree(), 3);
    }

    #[test]
    fn no_zero_terms_stored() {
        let vars = ["A"];
        let a = MPoly::var(&vars, "A").unwrap();
        let z = a.sub(&a);
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
        let s = a.scale(&int(0));
        assert!(s.is_zero());
    }

    #[test]
    fn quartic_symmetric_identities_hold_symbolically() {
        // theta_i = ±d1 d2 ± d1 d3 ± d2 d3 with an even number of minus
        // signs: their elementary symmetric functions reduce to those of the
        // squares, as polynomial identities in Q[d1, d2, d3].
        let vars = ["d1", "d2", "d3"];
        let d1 = MPoly::var(&vars, "d1").unwrap();
        let d2 = MPoly::var(&vars, "d2").unwrap();
        let d3 = MPoly::var(&vars, "d3").unwrap();
        let p12 = d1.mul(&d2);
        let p13 = d1.mul(&d3);
        let p23 = d2.mul(&d3);
        let thetas = [
            p12.add(&p13).add(&p23),
            p12.sub(&p13).sub(&p23),
            p13.sub(&p12).sub(&p23),
            p23.sub(&p12).sub(&p13),
        ];
        let sq = [d1.mul(&d1), d2.mul(&d2), d3.mul(&d3)];
        let s1 = sq[0].add(&sq[1]).add(&sq[2]);
        let s2 = sq[0].mul(&sq[1]).add(&sq[0].mul(&sq[2])).add(&sq[1].mul(&sq[2]));
        let s3 = sq[0].mul(&sq[1]).mul(&sq[2]);

        let mut t1 = MPoly::zero(&vars);
        let mut t2 = MPoly::zero(&vars);
        let mut t3 = MPoly::zero(&vars);
        for i in 0..4 {
            t1 = t1.add(&thetas[i]);
            for j in (i + 1)..4 {
                t2 = t2.add(&thetas[i].mul(&thetas[j]));
                for k in (j + 1)..4 {
                    t3 = t3.add(&thetas[i].mul(&thetas[j]).mul(&thetas[k]));
                }
            }
        }
        let t4 = thetas[0].mul(&thetas[1]).mul(&thetas[2]).mul(&thetas[3]);

        assert!(t1.is_zero());
        assert_eq!(t2, s2.scale(&int(-2)));
        assert_eq!(t3, s3.scale(&int(8)));
        assert_eq!(t4, s2.mul(&s2).sub(&s1.mul(&s3).scale(&int(4))));
    }

    #[test]
    fn f2_eval_at_parameters() {
        // F2 = (2B/81)(81A + 27B - 4B^3); this expansion is exercised against
        // the orbit recursion in the dynamics tests. Here: direct evaluation.
        let vars = ["A", "B"];
        let a = MPoly::var(&vars, "A").unwrap();
        let b = MPoly::var(&vars, "B").unwrap();
        let inner = a
            .scale(&int(81))
            .add(&b.scale(&int(27)))
            .sub(&b.pow(3).scale(&int(4)));
        let f2 = b.scale(&rat(2, 81)).mul(&inner);
        assert_eq!(
            mv_eval(&f2, &assign(&[("A", int(33)), ("B", int(9))])).unwrap(),
            int(0)
        );
        assert_eq!(
            mv_eval(&f2, &assign(&[("A", int(1)), ("B", int(1))])).unwrap(),
            rat(208, 81)
        );
    }
}

//! Multivariate polynomials over the rationals with a fixed variable order.
//!
//! Terms are kept in a map keyed by exponent vector; the canonical term
//! order is lexicographic in the declared variable order (earlier variables
//! are more significant). No zero coefficient is ever stored.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{SymError, SymResult};

/// Exponent vector of a monomial. `Vec` ordering is lexicographic, which
/// matches the lex term order for a fixed variable list.
pub type Mono = Vec<u32>;

#[derive(Debug)]
struct RingInner {
    vars: Vec<String>,
}

/// An ordered list of symbols; all polynomials in a ring share it.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.vars == other.0.vars
    }
}
impl Eq for Ring {}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> SymResult<Ring> {
        let mut seen = std::collections::HashSet::new();
        for v in vars {
            if !seen.insert(v.as_ref().to_string()) {
                return Err(SymError::DuplicateSymbol(v.as_ref().to_string()));
            }
        }
        Ok(Ring(Arc::new(RingInner {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
        })))
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn len(&self) -> usize {
        self.0.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> SymResult<usize> {
        self.0
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| SymError::UnknownSymbol(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.vars.iter().any(|v| v == name)
    }

    fn describe(&self) -> String {
        self.0.vars.join(",")
    }

    pub fn zero(&self) -> Poly {
        Poly {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> Poly {
        self.constant(BigRational::one())
    }

    pub fn constant(&self, c: BigRational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u32; self.len()], c);
        }
        Poly {
            ring: self.clone(),
            terms,
        }
    }

    pub fn int(&self, n: i64) -> Poly {
        self.constant(BigRational::from(BigInt::from(n)))
    }

    pub fn var(&self, name: &str) -> SymResult<Poly> {
        let i = self.index_of(name)?;
        let mut exps = vec![0u32; self.len()];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigRational::one());
        Ok(Poly {
            ring: self.clone(),
            terms,
        })
    }
}

/// A multivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Mono, BigRational>,
}

impl Poly {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.iter().all(|&e| e == 0) && c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    /// The constant value if this polynomial has no variables, else None.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    fn same_ring(&self, other: &Poly) -> SymResult<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(SymError::RingMismatch(
                self.ring.describe(),
                other.ring.describe(),
            ))
        }
    }

    fn insert_term(terms: &mut BTreeMap<Mono, BigRational>, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
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

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_ring(other).expect("poly add: ring mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_ring(other).expect("poly mul: ring mismatch");
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Mono = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                Self::insert_term(&mut terms, m, ca * cb);
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return self.ring.zero();
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Leading term in the lex order (largest monomial).
    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m[var] > 0)
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let n = self.ring.len();
        let mut used = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..n).filter(|&i| used[i]).collect()
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[var] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            let e = m2[var];
            m2[var] = e - 1;
            Self::insert_term(&mut terms, m2, c * BigRational::from(BigInt::from(e)));
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Substitute zero for every variable in `vars`.
    pub fn substitute_zero(&self, vars: &[usize]) -> Poly {
        let mut terms = BTreeMap::new();
        'outer: for (m, c) in &self.terms {
            for &v in vars {
                if m[v] > 0 {
                    continue 'outer;
                }
            }
            terms.insert(m.clone(), c.clone());
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Substitute a polynomial (in the same ring) for a variable.
    pub fn substitute_poly(&self, var: usize, value: &Poly) -> Poly {
        // Horner in `var` over the coefficient list.
        let coeffs = self.coeffs_in(var);
        let mut acc = self.ring.zero();
        for c in coeffs.into_iter().rev() {
            acc = acc.mul(value).add(&c);
        }
        acc
    }

    /// Coefficient list in `var` (ascending powers); coefficients live in
    /// the same ring with the `var` exponent zeroed out.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![self.ring.zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m[var] as usize;
            let mut m2 = m.clone();
            m2[var] = 0;
            Self::insert_term(&mut out[e].terms, m2, c.clone());
        }
        out
    }

    /// Evaluate with every variable bound to a rational.
    pub fn eval_rational(&self, values: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= &values[i];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (i, &e) in m.iter().enumerate() {
                t *= values[i].powi(e as i32);
            }
            acc += t;
        }
        acc
    }

    /// Evaluate a subset of variables to rationals, keeping the rest symbolic.
    pub fn eval_partial(&self, values: &[(usize, BigRational)]) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut m2 = m.clone();
            for (i, v) in values {
                for _ in 0..m2[*i] {
                    coeff *= v;
                }
                m2[*i] = 0;
            }
            Self::insert_term(&mut terms, m2, coeff);
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Rational content: gcd of coefficient numerators over lcm of
    /// denominators, signed by the leading coefficient.
    pub fn content(&self) -> BigRational {
        use num_integer::Integer;
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        content
    }

    /// Divide out the rational content; leading coefficient becomes positive.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        self.scale(&c.recip())
    }

    /// Exact division; None when `other` does not divide `self`.
    pub fn exact_div(&self, other: &Poly) -> Option<Poly> {
        if other.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quo = self.ring.zero();
        let (lm, lc) = {
            let (m, c) = other.leading().unwrap();
            (m.clone(), c.clone())
        };
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let mut q = Vec::with_capacity(m.len());
            for (a, b) in m.iter().zip(&lm) {
                if a < b {
                    return None;
                }
                q.push(a - b);
            }
            let qc = &c / &lc;
            let mut qterm = BTreeMap::new();
            qterm.insert(q, qc);
            let qpoly = Poly {
                ring: self.ring.clone(),
                terms: qterm,
            };
            rem = rem.sub(&qpoly.mul(other));
            quo = quo.add(&qpoly);
        }
        Some(quo)
    }

    /// Embed into another ring that contains (at least) all used symbols.
    pub fn remap(&self, target: &Ring) -> SymResult<Poly> {
        let src = self.ring.vars();
        let mut map = Vec::with_capacity(src.len());
        let used = self.support();
        for (i, name) in src.iter().enumerate() {
            match target.index_of(name) {
                Ok(j) => map.push(Some(j)),
                Err(_) if !used.contains(&i) => map.push(None),
                Err(e) => return Err(e),
            }
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = vec![0u32; target.len()];
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    m2[map[i].expect("used var must map")] = e;
                }
            }
            Self::insert_term(&mut terms, m2, c.clone());
        }
        Ok(Poly {
            ring: target.clone(),
            terms,
        })
    }

    /// The monomial part (exponents) restricted to `vars`, per term, with
    /// the complementary part. Used by the kinetic decomposition.
    pub fn split_terms(&self, vars: &[usize]) -> Vec<(Mono, Mono, BigRational)> {
        let in_set = {
            let mut f = vec![false; self.ring.len()];
            for &v in vars {
                f[v] = true;
            }
            f
        };
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut part = vec![0u32; self.ring.len()];
                let mut rest = vec![0u32; self.ring.len()];
                for (i, &e) in m.iter().enumerate() {
                    if in_set[i] {
                        part[i] = e;
                    } else {
                        rest[i] = e;
                    }
                }
                (part, rest, c.clone())
            })
            .collect()
    }

    /// Build a polynomial from a single term.
    pub fn from_term(ring: &Ring, m: Mono, c: BigRational) -> Poly {
        let mut terms = BTreeMap::new();
        Self::insert_term(&mut terms, m, c);
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Sum of the terms whose rational coefficient is positive.
    pub fn positive_part(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.is_positive())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// True when every coefficient has the same sign.
    pub fn is_sign_definite(&self) -> bool {
        let mut pos = false;
        let mut neg = false;
        for c in self.terms.values() {
            if c.is_positive() {
                pos = true;
            } else {
                neg = true;
            }
        }
        !(pos && neg)
    }

    /// Dense univariate view; fails unless all other variables are absent.
    pub fn to_unipoly(&self, var: usize) -> SymResult<super::UniPoly> {
        for (i, _) in self.ring.vars().iter().enumerate() {
            if i != var && self.contains_var(i) {
                return Err(SymError::NotUnivariate(self.ring.vars()[var].clone()));
            }
        }
        let d = self.degree_in(var) as usize;
        let mut coeffs = vec![BigRational::zero(); d + 1];
        for (m, c) in &self.terms {
            coeffs[m[var] as usize] = c.clone();
        }
        Ok(super::UniPoly::new(coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let vars = self.ring.vars();
        // Lex-descending order.
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let is_const = m.iter().all(|&e| e == 0);
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            let mut wrote = false;
            if !abs.is_one() || is_const {
                if abs.denom().is_one() {
                    write!(f, "{}", abs.numer())?;
                } else {
                    write!(f, "{}/{}", abs.numer(), abs.denom())?;
                }
                wrote = true;
            }
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "{}", vars[i])?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::new(&["x", "y", "z"]).unwrap()
    }

    #[test]
    fn arithmetic_and_display() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let p = x.add(&y).pow(2);
        let q = x.pow(2).add(&x.mul(&y).scale(&BigRational::from(BigInt::from(2)))).add(&y.pow(2));
        assert_eq!(p, q);
        assert_eq!(format!("{}", p), "x^2 + 2*x*y + y^2");
        assert!(p.sub(&q).is_zero());
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let p = x.pow(2).sub(&y.pow(2));
        let d = x.sub(&y);
        let q = p.exact_div(&d).unwrap();
        assert_eq!(q, x.add(&y));
        assert!(p.exact_div(&x.add(&r.one())).is_none());
    }

    #[test]
    fn substitution_horner() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        // (x+y)^3 with x -> y gives 8y^3
        let p = x.add(&y).pow(3);
        let s = p.substitute_poly(0, &y);
        assert_eq!(s, y.pow(3).scale(&BigRational::from(BigInt::from(8))));
    }

    #[test]
    fn content_primitive() {
        let r = ring();
        let x = r.var("x").unwrap();
        let p = x.scale(&BigRational::new(BigInt::from(-4), BigInt::from(6)))
            .add(&r.constant(BigRational::new(BigInt::from(-2), BigInt::from(3))));
        let prim = p.primitive();
        assert_eq!(format!("{}", prim), "x + 1");
    }
}

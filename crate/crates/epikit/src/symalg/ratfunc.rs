//! Rational functions: quotients of multivariate polynomials, kept reduced
//! by rational content and a best-effort multivariate gcd.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{Poly, Ring};
use super::{SymError, SymResult};

/// Total-degree cutoff above which gcd reduction is skipped. Identity
/// testing goes through cross-multiplication and does not need reduced form.
const GCD_DEGREE_CUTOFF: u32 = 8;

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> SymResult<RationalFunction> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        let mut rf = RationalFunction { num, den };
        rf.reduce();
        Ok(rf)
    }

    pub fn from_poly(num: Poly) -> RationalFunction {
        let den = num.ring().one();
        RationalFunction { num, den }
    }

    pub fn zero(ring: &Ring) -> RationalFunction {
        RationalFunction {
            num: ring.zero(),
            den: ring.one(),
        }
    }

    pub fn one(ring: &Ring) -> RationalFunction {
        RationalFunction {
            num: ring.one(),
            den: ring.one(),
        }
    }

    pub fn constant(ring: &Ring, c: BigRational) -> RationalFunction {
        RationalFunction {
            num: ring.constant(c),
            den: ring.one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator is constant.
    pub fn as_poly(&self) -> Option<Poly> {
        self.den
            .as_constant()
            .map(|c| self.num.scale(&c.recip()))
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        let d = self.den.as_constant()?;
        let n = self.num.as_constant()?;
        Some(n / d)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = self.den.ring().one();
            return;
        }
        // Rational content always comes out; the denominator is left
        // primitive with a positive leading coefficient.
        let cn = self.num.content();
        let cd = self.den.content();
        let mut num = self.num.primitive();
        let mut den = self.den.primitive();
        if num.total_degree() <= GCD_DEGREE_CUTOFF && den.total_degree() <= GCD_DEGREE_CUTOFF {
            let g = poly_gcd(&num, &den);
            if g.total_degree() > 0 {
                if let (Some(n2), Some(d2)) = (num.exact_div(&g), den.exact_div(&g)) {
                    num = n2;
                    den = d2;
                }
            }
        }
        self.num = num.scale(&(cn / cd));
        self.den = den;
        if let Some(c) = self.den.as_constant() {
            if !c.is_one() {
                self.num = self.num.scale(&c.recip());
                self.den = self.den.ring().one();
            }
        }
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    pub fn div(&self, other: &RationalFunction) -> SymResult<RationalFunction> {
        if other.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> SymResult<RationalFunction> {
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &BigRational) -> RationalFunction {
        RationalFunction::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// Identity test by cross-multiplication; exact.
    pub fn eq_cross(&self, other: &RationalFunction) -> bool {
        self.num.mul(&other.den).sub(&other.num.mul(&self.den)).is_zero()
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.num.eval_f64(values) / self.den.eval_f64(values)
    }

    pub fn eval_rational(&self, values: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval_rational(values);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(values) / d)
    }

    /// Substitute rationals for a subset of variables.
    pub fn eval_partial(&self, values: &[(usize, BigRational)]) -> SymResult<RationalFunction> {
        RationalFunction::new(
            self.num.eval_partial(values),
            self.den.eval_partial(values),
        )
    }

    pub fn remap(&self, target: &Ring) -> SymResult<RationalFunction> {
        RationalFunction::new(self.num.remap(target)?, self.den.remap(target)?)
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.num.contains_var(var) || self.den.contains_var(var)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Substitute a rational function for a variable of a polynomial.
pub(crate) fn substitute_rf(p: &Poly, var: usize, value: &RationalFunction) -> RationalFunction {
    let coeffs = p.coeffs_in(var);
    let ring = p.ring().clone();
    let mut acc = RationalFunction::zero(&ring);
    for c in coeffs.into_iter().rev() {
        acc = acc.mul(value).add(&RationalFunction::from_poly(c));
    }
    acc
}

/// Multivariate gcd by primitive polynomial remainder sequences, recursing
/// over the variable list. Intended for small inputs; the callers cut off
/// at a modest total degree.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let ring = a.ring().clone();
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let mut used = a.support();
    for v in b.support() {
        if !used.contains(&v) {
            used.push(v);
        }
    }
    used.sort_unstable();
    if used.is_empty() {
        return ring.one();
    }
    gcd_rec(&a.primitive(), &b.primitive(), &used)
        .map(|g| g.primitive())
        .unwrap_or_else(|| ring.one())
}

fn gcd_rec(a: &Poly, b: &Poly, vars: &[usize]) -> Option<Poly> {
    let ring = a.ring().clone();
    if a.is_zero() {
        return Some(b.clone());
    }
    if b.is_zero() {
        return Some(a.clone());
    }
    let (&main, rest) = vars.split_first()?;
    if !a.contains_var(main) && !b.contains_var(main) {
        return if rest.is_empty() {
            Some(ring.one())
        } else {
            gcd_rec(a, b, rest)
        };
    }
    // contents and primitive parts wrt the main variable
    let (ca, pa) = content_pp(a, main, rest)?;
    let (cb, pb) = content_pp(b, main, rest)?;
    let cont_gcd = if rest.is_empty() {
        ring.one()
    } else {
        gcd_rec(&ca, &cb, rest)?
    };
    // primitive PRS on pa, pb in the main variable
    let (mut f, mut g) = if pa.degree_in(main) >= pb.degree_in(main) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    let mut steps = 0;
    loop {
        if g.is_zero() {
            break;
        }
        let r = pseudo_rem(&f, &g, main)?;
        let r = if r.is_zero() {
            r
        } else {
            let (_, rp) = content_pp(&r, main, rest)?;
            rp
        };
        f = g;
        g = r;
        steps += 1;
        if steps > 64 {
            return None;
        }
    }
    let (_, fpp) = content_pp(&f, main, rest)?;
    Some(cont_gcd.mul(&fpp))
}

/// Content (gcd of coefficients in the lower variables) and primitive part
/// of `p` viewed as univariate in `main`.
fn content_pp(p: &Poly, main: usize, rest: &[usize]) -> Option<(Poly, Poly)> {
    let ring = p.ring().clone();
    let coeffs = p.coeffs_in(main);
    let mut content = ring.zero();
    for c in &coeffs {
        if c.is_zero() {
            continue;
        }
        content = if content.is_zero() {
            c.primitive()
        } else if rest.is_empty() {
            ring.one()
        } else {
            gcd_rec(&content, &c.primitive(), rest)?
        };
        if content.is_one() {
            break;
        }
    }
    if content.is_zero() {
        return Some((ring.one(), p.clone()));
    }
    let pp = p.exact_div(&content)?;
    Some((content, pp))
}

/// Pseudo-remainder of f by g in the variable `main`.
fn pseudo_rem(f: &Poly, g: &Poly, main: usize) -> Option<Poly> {
    let df = f.degree_in(main);
    let dg = g.degree_in(main);
    if df < dg {
        return Some(f.clone());
    }
    let gc = g.coeffs_in(main);
    let glead = gc.last()?.clone();
    let mut r = f.clone();
    let ring = f.ring().clone();
    let main_var = Poly::from_term(
        &ring,
        {
            let mut m = vec![0u32; ring.len()];
            m[main] = 1;
            m
        },
        num_traits::One::one(),
    );
    let mut guard = 0;
    while !r.is_zero() && r.degree_in(main) >= dg {
        let dr = r.degree_in(main);
        let rc = r.coeffs_in(main);
        let rlead = rc.last()?.clone();
        // r <- glead*r - rlead * x^(dr-dg) * g
        let shift = main_var.pow(dr - dg);
        r = r.mul(&glead).sub(&g.mul(&rlead).mul(&shift));
        guard += 1;
        if guard > 256 {
            return None;
        }
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn reduction_by_gcd() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        // (x^2-y^2)/(x-y) reduces to x+y
        let rf = RationalFunction::new(x.pow(2).sub(&y.pow(2)), x.sub(&y)).unwrap();
        assert!(rf.den().is_one());
        assert_eq!(rf.num(), &x.add(&y));
    }

    #[test]
    fn cross_identity() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let a = RationalFunction::new(x.clone(), y.clone()).unwrap();
        let b = RationalFunction::new(x.mul(&y), y.mul(&y)).unwrap();
        assert!(a.eq_cross(&b));
    }

    #[test]
    fn multivar_gcd() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let common = x.add(&y);
        let a = common.mul(&x.sub(&y));
        let b = common.mul(&x.mul(&y).add(&r.one()));
        let g = poly_gcd(&a, &b);
        assert_eq!(g, common);
    }
}

//! Dense univariate polynomials over the rationals, Sturm sequences, and
//! real-root isolation with bisection refinement.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{SymError, SymResult};

/// Coefficients ascending: `coeffs[k]` multiplies `x^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> UniPoly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> UniPoly {
        UniPoly { coeffs: vec![] }
    }

    pub fn from_i64(coeffs: &[i64]) -> UniPoly {
        UniPoly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|k| k * c).collect(),
        }
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        UniPoly::new(out)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Euclidean division; divisor must be nonzero.
    pub fn div_rem(&self, divisor: &UniPoly) -> SymResult<(UniPoly, UniPoly)> {
        if divisor.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let dl = divisor.leading();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quo = vec![BigRational::zero(); rem.len() - dd];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let q = &rem[rem.len() - 1] / &dl;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    let idx = k + j;
                    let v = &rem[idx] - &q * c;
                    rem[idx] = v;
                }
                quo[k] = q;
            }
            rem.pop();
            while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
                rem.pop();
            }
        }
        Ok((UniPoly::new(quo), UniPoly::new(rem)))
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Square-free part together with the multiplicity structure: returns
    /// the list (factor, multiplicity) of Yun's decomposition.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        if self.degree() == 0 || self.is_zero() {
            return vec![];
        }
        let d = self.derivative();
        let g = self.gcd(&d);
        if g.degree() == 0 {
            return vec![(self.monic(), 1)];
        }
        let mut out = Vec::new();
        let mut c = self.div_rem(&g).unwrap().0;
        let mut w = d.div_rem(&g).unwrap().0;
        let mut mult = 1usize;
        loop {
            let y = w.sub(&c.derivative());
            let f = c.gcd(&y);
            if f.degree() > 0 {
                out.push((f.monic(), mult));
            }
            let cf = c.div_rem(&f).unwrap().0;
            if cf.degree() == 0 {
                break;
            }
            w = y.div_rem(&f).unwrap().0;
            c = cf;
            mult += 1;
        }
        out
    }

    /// Sturm chain of the (square-free) polynomial.
    pub fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).unwrap();
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        chain
    }

    fn sign_at(&self, x: &BigRational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Sign variations of the chain at x.
    fn variations(chain: &[UniPoly], x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in (lo, hi] by Sturm's theorem.
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let chain = self.sturm_chain();
        Self::variations(&chain, lo) - Self::variations(&chain, hi)
    }
}

/// One isolated real root.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    /// Exact bracketing interval (root in [lo, hi]).
    pub lo: BigRational,
    pub hi: BigRational,
    /// Floating refinement of the root.
    pub value: f64,
    /// Multiplicity in the original polynomial.
    pub multiplicity: usize,
}

/// Isolate and refine all real roots of `p` in `[lo, hi]`.
///
/// Sturm-sequence isolation on the square-free factors, bisection down to
/// the requested interval width (default 1e-12 when `width` is None), roots
/// sorted ascending with multiplicities from the square-free decomposition.
pub fn real_roots(
    p: &UniPoly,
    lo: f64,
    hi: f64,
    width: Option<f64>,
) -> SymResult<Vec<IsolatedRoot>> {
    if p.is_zero() {
        return Err(SymError::ZeroPolynomial);
    }
    let width = BigRational::from_float(width.unwrap_or(1e-12)).unwrap();
    let lo = BigRational::from_float(lo).ok_or(SymError::ZeroPolynomial)?;
    let hi = BigRational::from_float(hi).ok_or(SymError::ZeroPolynomial)?;
    let mut out: Vec<IsolatedRoot> = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        if factor.degree() == 0 {
            continue;
        }
        for (a, b) in isolate_on(&factor, &lo, &hi) {
            let (a, b) = bisect(&factor, a, b, &width);
            let value = refine_f64(&factor, &a, &b);
            out.push(IsolatedRoot {
                lo: a,
                hi: b,
                value,
                multiplicity: mult,
            });
        }
    }
    out.sort_by(|r, s| r.value.partial_cmp(&s.value).unwrap());
    Ok(out)
}

/// Isolating intervals (a, b] for the square-free `p` on [lo, hi]; the left
/// endpoint is handled by an explicit evaluation.
fn isolate_on(p: &UniPoly, lo: &BigRational, hi: &BigRational) -> Vec<(BigRational, BigRational)> {
    let chain = p.sturm_chain();
    let mut out = Vec::new();
    // A root exactly at lo is missed by the half-open Sturm count.
    if p.eval(lo).is_zero() {
        out.push((lo.clone(), lo.clone()));
    }
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let count = UniPoly::variations(&chain, &a) - UniPoly::variations(&chain, &b);
        match count {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let mid = (&a + &b) / BigRational::from(BigInt::from(2));
                if p.eval(&mid).is_zero() {
                    out.push((mid.clone(), mid.clone()));
                }
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

fn bisect(
    p: &UniPoly,
    mut a: BigRational,
    mut b: BigRational,
    width: &BigRational,
) -> (BigRational, BigRational) {
    if a == b {
        return (a, b);
    }
    let two = BigRational::from(BigInt::from(2));
    let sa = p.sign_at(&a);
    let mut sa = if sa == 0 {
        // root at the open left end belongs to a neighbor interval; the
        // bracketed root is strictly inside, step in.
        let eps = (&b - &a) / BigRational::from(BigInt::from(1 << 20));
        a = &a + &eps;
        p.sign_at(&a)
    } else {
        sa
    };
    while (&b - &a) > *width {
        let mid = (&a + &b) / &two;
        let sm = p.sign_at(&mid);
        if sm == 0 {
            return (mid.clone(), mid);
        }
        if sm == sa {
            a = mid;
            sa = sm;
        } else {
            b = mid;
        }
    }
    (a, b)
}

fn refine_f64(p: &UniPoly, a: &BigRational, b: &BigRational) -> f64 {
    let mut x = ((a + b) / BigRational::from(BigInt::from(2)))
        .to_f64()
        .unwrap_or(f64::NAN);
    let d = p.derivative();
    for _ in 0..4 {
        let fx = p.eval_f64(x);
        let dx = d.eval_f64(x);
        if dx == 0.0 || !fx.is_finite() {
            break;
        }
        let step = fx / dx;
        let x2 = x - step;
        // stay inside the verified bracket
        let (alo, bhi) = (a.to_f64().unwrap(), b.to_f64().unwrap());
        if x2 >= alo && x2 <= bhi {
            x = x2;
        } else {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        // (x^2-1) / (x-1) = x+1
        let p = UniPoly::from_i64(&[-1, 0, 1]);
        let d = UniPoly::from_i64(&[-1, 1]);
        let (q, r) = p.div_rem(&d).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, UniPoly::from_i64(&[1, 1]));
        let g = p.gcd(&d);
        assert_eq!(g, UniPoly::from_i64(&[-1, 1]).monic());
    }

    #[test]
    fn squarefree_multiplicity() {
        // (x-1)^2 (x+2)
        let p = UniPoly::from_i64(&[-1, 1]).mul(&UniPoly::from_i64(&[-1, 1]))
            .mul(&UniPoly::from_i64(&[2, 1]));
        let sf = p.squarefree_decomposition();
        assert_eq!(sf.len(), 2);
        let roots = real_roots(&p, -5.0, 5.0, None).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].multiplicity, 1);
        assert!((roots[0].value + 2.0).abs() < 1e-9);
        assert_eq!(roots[1].multiplicity, 2);
        assert!((roots[1].value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn trivial_linear_root() {
        // u - 1 on [0, 2] -> {1}
        let p = UniPoly::from_i64(&[-1, 1]);
        let roots = real_roots(&p, 0.0, 2.0, None).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_trace_zero_oracle() {
        // 25 i^2 - 16 i + 1: quadratic-formula oracle (16 ± sqrt(156))/50
        let p = UniPoly::from_i64(&[1, -16, 25]);
        let roots = real_roots(&p, 0.0, 1.0, None).unwrap();
        assert_eq!(roots.len(), 2);
        let d = 156f64.sqrt();
        assert!((roots[0].value - (16.0 - d) / 50.0).abs() < 1e-10);
        assert!((roots[1].value - (16.0 + d) / 50.0).abs() < 1e-10);
    }

    #[test]
    fn root_at_endpoint() {
        let p = UniPoly::from_i64(&[0, 1]); // x on [0, 1]
        let roots = real_roots(&p, 0.0, 1.0, None).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].value, 0.0);
    }

    #[test]
    fn sturm_count_matches() {
        let p = UniPoly::from_i64(&[1, -16, 25]);
        let lo = BigRational::from(BigInt::from(0));
        let hi = BigRational::from(BigInt::from(1));
        assert_eq!(p.count_roots(&lo, &hi), 2);
    }
}

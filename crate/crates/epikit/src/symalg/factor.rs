//! Partial factorization of symbolic characteristic polynomials.
//!
//! Strategy: (a) a symmetric permutation to block-triangular form via the
//! strongly connected components of the nonzero pattern, emitting the
//! characteristic polynomial of each diagonal block; (b) within each block,
//! extraction of linear factors by trial division, with candidate roots
//! drawn from the block's diagonal entries and pairwise sums/differences of
//! them; (c) the rest is left unfactored. There is no general multivariate
//! factorization over Q here; every disease-free Jacobian in the bundled
//! corpus is block-triangular up to permutation.

use num_rational::BigRational;
use num_traits::One;

use super::matrix::{charpoly_coeffs_rf, SymMatrix};
use super::poly::{Poly, Ring};
use super::ratfunc::RationalFunction;
use super::{SymError, SymResult};

/// Univariate polynomial in an implicit indeterminate with rational-function
/// coefficients, ascending order.
#[derive(Clone, Debug)]
pub struct UniRf {
    pub coeffs: Vec<RationalFunction>,
}

impl UniRf {
    pub fn new(coeffs: Vec<RationalFunction>) -> UniRf {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniRf { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn ring(&self) -> &Ring {
        self.coeffs[0].ring()
    }

    /// Evaluate at a rational-function argument.
    pub fn eval(&self, x: &RationalFunction) -> RationalFunction {
        let mut acc = RationalFunction::zero(self.ring());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Synthetic division by (u - root); Some(quotient) iff remainder is 0.
    pub fn divide_by_root(&self, root: &RationalFunction) -> Option<UniRf> {
        if self.coeffs.len() < 2 {
            return None;
        }
        let mut quo = vec![RationalFunction::zero(self.ring()); self.coeffs.len() - 1];
        let mut carry = RationalFunction::zero(self.ring());
        for k in (0..self.coeffs.len()).rev() {
            let v = self.coeffs[k].add(&carry);
            if k == 0 {
                if v.is_zero() {
                    return Some(UniRf::new(quo));
                }
                return None;
            }
            quo[k - 1] = v.clone();
            carry = v.mul(root);
        }
        unreachable!()
    }

    pub fn mul(&self, other: &UniRf) -> UniRf {
        let ring = self.ring().clone();
        let mut out =
            vec![RationalFunction::zero(&ring); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UniRf::new(out)
    }

    /// Clear denominators and normalize: a polynomial in `indet` over the
    /// base ring, primitive, with positive leading rational factor.
    pub fn to_poly(&self, indet: &str) -> SymResult<Poly> {
        let base = self.ring().clone();
        let mut names: Vec<String> = vec![indet.to_string()];
        names.extend(base.vars().iter().cloned());
        let ring = Ring::new(&names)?;
        let u = ring.var(indet)?;
        // common denominator = product of (distinct) denominators
        let mut common = base.one();
        for c in &self.coeffs {
            if common.exact_div(c.den()).is_none() {
                common = common.mul(c.den());
            }
        }
        let mut acc = ring.zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let scaled = c.num().mul(&common.exact_div(c.den()).expect("common multiple"));
            acc = acc.add(&scaled.remap(&ring)?.mul(&u.pow(k as u32)));
        }
        Ok(acc.primitive())
    }
}

/// Strongly connected components of the nonzero off-diagonal pattern,
/// returned in topological order of the condensation (Tarjan).
pub(crate) fn scc_blocks(m: &SymMatrix) -> Vec<Vec<usize>> {
    let n = m.rows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && !m.get(i, j).is_zero())
                .collect()
        })
        .collect();
    // iterative Tarjan
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        call.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei < adj[v].len() {
                let w = adj[v][*ei];
                *ei += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    // Tarjan emits components in reverse topological order.
    comps.reverse();
    comps
}

/// Characteristic-polynomial factors of each diagonal block, after linear
/// trial division, as univariate-with-RF-coefficient factors. The product
/// over all returned factors equals `charpoly(m)`.
pub fn factor_blocks_rf(m: &SymMatrix) -> SymResult<Vec<UniRf>> {
    if !m.is_square() {
        return Err(SymError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let ring = m.ring().clone();
    let mut out = Vec::new();
    for block in scc_blocks(m) {
        let k = block.len();
        let sub = SymMatrix::from_fn(k, k, |i, j| m.get(block[i], block[j]).clone());
        let coeffs = charpoly_coeffs_rf(&sub)?;
        let mut chp = vec![RationalFunction::zero(&ring); k + 1];
        chp[k] = RationalFunction::one(&ring);
        for (i, c) in coeffs.iter().enumerate() {
            chp[k - 1 - i] = c.clone();
        }
        let mut rest = UniRf::new(chp);
        // trial roots: diagonal entries and their pairwise sums/differences
        let mut candidates: Vec<RationalFunction> = Vec::new();
        let diag: Vec<RationalFunction> = (0..k).map(|i| sub.get(i, i).clone()).collect();
        for d in &diag {
            candidates.push(d.clone());
        }
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                candidates.push(diag[i].add(&diag[j]));
                candidates.push(diag[i].sub(&diag[j]));
            }
        }
        let mut progress = true;
        while progress && rest.degree() > 1 {
            progress = false;
            for r in &candidates {
                if let Some(q) = rest.divide_by_root(r) {
                    let lin = UniRf::new(vec![r.neg(), RationalFunction::one(&ring)]);
                    out.push(lin);
                    rest = q;
                    progress = true;
                    break;
                }
            }
        }
        out.push(rest);
    }
    Ok(out)
}

/// Factors of `charpoly(m, indet)` whose product equals it exactly, as
/// polynomials with cleared denominators (each primitive with positive
/// leading coefficient; an overall rational constant factor is appended
/// when needed to preserve the product identity).
pub fn factor_blocks(m: &SymMatrix, indet: &str) -> SymResult<Vec<Poly>> {
    let factors = factor_blocks_rf(m)?;
    let mut out = Vec::new();
    for f in &factors {
        for c in &f.coeffs {
            if c.as_poly().is_none() {
                return Err(SymError::NonConstantDenominator);
            }
        }
        out.push(f.to_poly(indet)?);
    }
    // preserve the exact product identity: charpoly is monic, each cleared
    // factor is primitive, so a rational constant may remain
    let chp = super::matrix::charpoly(m, indet)?;
    let ring = chp.ring().clone();
    let mut prod = ring.one();
    for p in &out {
        prod = prod.mul(&p.remap(&ring)?);
    }
    if prod != chp {
        // ratio of two proportional polynomials
        let (m1, c1) = chp.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let (m2, c2) = prod.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        if m1 == m2 {
            let ratio = c1 / c2;
            if !ratio.is_one() {
                out.push(ring.constant(ratio));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modeldsl::parse_expression;
    use crate::symalg::charpoly;

    fn rf(ring: &Ring, s: &str) -> RationalFunction {
        RationalFunction::from_poly(parse_expression(s, ring).unwrap())
    }

    #[test]
    fn diagonal_matrix_splits() {
        let ring = Ring::new(&["a", "b"]).unwrap();
        let m = SymMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => rf(&ring, "a"),
            (1, 1) => rf(&ring, "b"),
            _ => RationalFunction::zero(&ring),
        });
        let factors = factor_blocks(&m, "u").unwrap();
        assert_eq!(factors.len(), 2);
        let r = factors[0].ring().clone();
        let fa = parse_expression("u - a", &r).unwrap();
        let fb = parse_expression("u - b", &r).unwrap();
        assert!(factors.contains(&fa) && factors.contains(&fb));
    }

    #[test]
    fn dense_2x2_single_quadratic() {
        let ring = Ring::new(&["a", "b", "c", "d"]).unwrap();
        let m = SymMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => rf(&ring, "a"),
            (0, 1) => rf(&ring, "b"),
            (1, 0) => rf(&ring, "c"),
            (1, 1) => rf(&ring, "d"),
            _ => unreachable!(),
        });
        let factors = factor_blocks(&m, "u").unwrap();
        assert_eq!(factors.len(), 1);
        let r = factors[0].ring().clone();
        assert_eq!(factors[0], charpoly(&m, "u").unwrap().remap(&r).unwrap());
    }

    #[test]
    fn product_identity_block_triangular() {
        // [[a, 1, 0], [0, b, 0], [0, 1, a+b]]: blocks {0},{1},{2}
        let ring = Ring::new(&["a", "b"]).unwrap();
        let m = SymMatrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) => rf(&ring, "a"),
            (0, 1) => rf(&ring, "1"),
            (1, 1) => rf(&ring, "b"),
            (2, 1) => rf(&ring, "1"),
            (2, 2) => rf(&ring, "a + b"),
            _ => RationalFunction::zero(&ring),
        });
        let factors = factor_blocks(&m, "u").unwrap();
        let chp = charpoly(&m, "u").unwrap();
        let r = chp.ring().clone();
        let mut prod = r.one();
        for f in &factors {
            prod = prod.mul(&f.remap(&r).unwrap());
        }
        assert_eq!(prod, chp);
        assert_eq!(factors.len(), 3);
    }
}

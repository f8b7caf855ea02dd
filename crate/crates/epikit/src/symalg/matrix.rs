//! Matrices with rational-function entries, and the division-free
//! Faddeev-LeVerrier characteristic polynomial.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::poly::{Poly, Ring};
use super::ratfunc::RationalFunction;
use super::{SymError, SymResult};

/// A rows x cols grid of rational functions over a shared ring.
#[derive(Clone, Debug)]
pub struct SymMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RationalFunction>,
}

impl SymMatrix {
    pub fn from_fn<F: FnMut(usize, usize) -> RationalFunction>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> SymMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        SymMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_polys(rows: usize, cols: usize, entries: Vec<Poly>) -> SymMatrix {
        assert_eq!(entries.len(), rows * cols);
        SymMatrix {
            rows,
            cols,
            entries: entries
                .into_iter()
                .map(RationalFunction::from_poly)
                .collect(),
        }
    }

    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> SymMatrix {
        SymMatrix::from_fn(rows, cols, |_, _| RationalFunction::zero(ring))
    }

    pub fn identity(ring: &Ring, n: usize) -> SymMatrix {
        SymMatrix::from_fn(n, n, |i, j| {
            if i == j {
                RationalFunction::one(ring)
            } else {
                RationalFunction::zero(ring)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalFunction) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn ring(&self) -> &Ring {
        self.entries[0].ring()
    }

    pub fn map<F: FnMut(&RationalFunction) -> RationalFunction>(&self, mut f: F) -> SymMatrix {
        SymMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| f(e)).collect(),
        }
    }

    pub fn transpose(&self) -> SymMatrix {
        SymMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SymMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).add(other.get(i, j))
        })
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SymMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).sub(other.get(i, j))
        })
    }

    pub fn neg(&self) -> SymMatrix {
        self.map(|e| e.neg())
    }

    pub fn matmul(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.cols, other.rows);
        let ring = self.ring().clone();
        SymMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = RationalFunction::zero(&ring);
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn trace(&self) -> SymResult<RationalFunction> {
        if !self.is_square() {
            return Err(SymError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = RationalFunction::zero(self.ring());
        for i in 0..self.rows {
            acc = acc.add(self.get(i, i));
        }
        Ok(acc)
    }

    /// Gauss-Jordan inverse over the rational-function field.
    pub fn inverse(&self) -> SymResult<SymMatrix> {
        if !self.is_square() {
            return Err(SymError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let ring = self.ring().clone();
        let mut a = self.clone();
        let mut inv = SymMatrix::identity(&ring, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(SymError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a.get(col, j).clone();
                    a.set(col, j, a.get(pivot, j).clone());
                    a.set(pivot, j, tmp);
                    let tmp = inv.get(col, j).clone();
                    inv.set(col, j, inv.get(pivot, j).clone());
                    inv.set(pivot, j, tmp);
                }
            }
            let p = a.get(col, col).clone();
            let pinv = p.recip()?;
            for j in 0..n {
                a.set(col, j, a.get(col, j).mul(&pinv));
                inv.set(col, j, inv.get(col, j).mul(&pinv));
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    a.set(r, j, a.get(r, j).sub(&f.mul(a.get(col, j))));
                    inv.set(r, j, inv.get(r, j).sub(&f.mul(inv.get(col, j))));
                }
            }
        }
        Ok(inv)
    }

    /// Determinant via the Faddeev-LeVerrier coefficients.
    pub fn det(&self) -> SymResult<RationalFunction> {
        let coeffs = charpoly_coeffs_rf(self)?;
        // charpoly = u^n + c_1 u^(n-1) + ... + c_n ; det = (-1)^n c_n
        let n = self.rows;
        let cn = coeffs.last().expect("nonempty").clone();
        Ok(if n % 2 == 0 { cn } else { cn.neg() })
    }

    /// Substitute zero for the listed ring variables in every entry.
    pub fn substitute_zero(&self, vars: &[usize]) -> SymResult<SymMatrix> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(RationalFunction::new(
                e.num().substitute_zero(vars),
                e.den().substitute_zero(vars),
            )?);
        }
        Ok(SymMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn eval_f64(&self, values: &[f64]) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval_f64(values)).collect())
            .collect()
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Characteristic polynomial coefficients `[c_1, ..., c_n]` of
/// `det(uI - m) = u^n + c_1 u^(n-1) + ... + c_n` by Faddeev-LeVerrier.
/// Only divisions by integers occur.
pub fn charpoly_coeffs_rf(m: &SymMatrix) -> SymResult<Vec<RationalFunction>> {
    if !m.is_square() {
        return Err(SymError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut coeffs = Vec::with_capacity(n);
    let mut mk = m.clone();
    for k in 1..=n {
        let ck = mk
            .trace()?
            .scale(&-BigRational::new(BigInt::one(), BigInt::from(k)));
        coeffs.push(ck.clone());
        if k < n {
            // M_{k+1} = A (M_k + c_k I)
            let mut shifted = mk;
            for i in 0..n {
                let v = shifted.get(i, i).add(&ck);
                shifted.set(i, i, v);
            }
            mk = m.matmul(&shifted);
        }
    }
    Ok(coeffs)
}

/// `det(indet*I - m)` as a polynomial, monic in `indet`, degree = dimension.
///
/// Entries must be polynomial (constant denominators); the result lives in
/// a ring extending the matrix ring with `indet` (prepended, so existing
/// polynomials embed by name).
pub fn charpoly(m: &SymMatrix, indet: &str) -> SymResult<Poly> {
    let coeffs = charpoly_coeffs_rf(m)?;
    let base = m.ring().clone();
    if base.contains(indet) {
        return Err(SymError::DuplicateSymbol(indet.to_string()));
    }
    let mut names: Vec<String> = vec![indet.to_string()];
    names.extend(base.vars().iter().cloned());
    let ring = Ring::new(&names)?;
    let u = ring.var(indet)?;
    let n = m.rows();
    let mut acc = u.pow(n as u32);
    for (k, c) in coeffs.iter().enumerate() {
        let cp = c
            .as_poly()
            .ok_or(SymError::NonConstantDenominator)?
            .remap(&ring)?;
        acc = acc.add(&cp.mul(&u.pow((n - 1 - k) as u32)));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modeldsl::parse_expression;

    fn rf(ring: &Ring, s: &str) -> RationalFunction {
        RationalFunction::from_poly(parse_expression(s, ring).unwrap())
    }

    #[test]
    fn charpoly_identity_2x2() {
        let ring = Ring::new(&["a"]).unwrap();
        let m = SymMatrix::identity(&ring, 2);
        let p = charpoly(&m, "u").unwrap();
        let r = p.ring().clone();
        let expect = parse_expression("(u - 1)^2", &r).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn charpoly_companion() {
        // [[0,1],[-c0,-c1]] -> u^2 + c1 u + c0 (hand cofactor expansion)
        let ring = Ring::new(&["c0", "c1"]).unwrap();
        let m = SymMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => RationalFunction::zero(&ring),
            (0, 1) => RationalFunction::one(&ring),
            (1, 0) => rf(&ring, "-c0"),
            (1, 1) => rf(&ring, "-c1"),
            _ => unreachable!(),
        });
        let p = charpoly(&m, "u").unwrap();
        let r = p.ring().clone();
        assert_eq!(p, parse_expression("u^2 + c1*u + c0", &r).unwrap());
    }

    #[test]
    fn charpoly_triangular_sair_v() {
        // V of the SAIR parametrization is upper triangular:
        // [[g1+L, -g12],[0, g2+L+d]] -> (u-(g1+L))(u-(g2+L+d))
        let ring = Ring::new(&["g1", "g2", "g12", "d", "L"]).unwrap();
        let m = SymMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => rf(&ring, "g1 + L"),
            (0, 1) => rf(&ring, "-g12"),
            (1, 0) => RationalFunction::zero(&ring),
            (1, 1) => rf(&ring, "g2 + L + d"),
            _ => unreachable!(),
        });
        let p = charpoly(&m, "u").unwrap();
        let r = p.ring().clone();
        let expect = parse_expression("(u - (g1 + L))*(u - (g2 + L + d))", &r).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn inverse_round_trip() {
        let ring = Ring::new(&["a", "b"]).unwrap();
        let m = SymMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => rf(&ring, "a"),
            (0, 1) => rf(&ring, "1"),
            (1, 0) => rf(&ring, "0"),
            (1, 1) => rf(&ring, "b"),
            _ => unreachable!(),
        });
        let inv = m.inverse().unwrap();
        let prod = m.matmul(&inv);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j {
                    RationalFunction::one(&ring)
                } else {
                    RationalFunction::zero(&ring)
                };
                assert!(prod.get(i, j).eq_cross(&expect));
            }
        }
    }
}

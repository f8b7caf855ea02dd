//! The model definition language and per-model structural checks.
//!
//! A model is a pair (vector field, variables): named state variables and
//! parameters with one polynomial right-hand side per state variable, plus
//! an optional user-declared infectious index set. The infectious set is
//! declared, not inferred.

mod parse;

pub use parse::{parse_expression, parse_model, ParseError};

use num_rational::BigRational;
use num_traits::Signed;

use crate::symalg::{Mono, Poly, Ring, SymError, SymResult};

/// A polynomial ODE model over exact rational coefficients.
#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    state_vars: Vec<String>,
    params: Vec<String>,
    /// One polynomial per state variable, same order, in [`Model::ring`].
    rhs: Vec<Poly>,
    infectious: Option<Vec<usize>>,
    ring: Ring,
}

impl Model {
    /// Assemble a model; the ring orders state variables first, parameters
    /// after. Right-hand sides must already live in that ring.
    pub fn new(
        name: String,
        state_vars: Vec<String>,
        params: Vec<String>,
        rhs: Vec<Poly>,
        infectious: Option<Vec<usize>>,
    ) -> SymResult<Model> {
        let mut names = state_vars.clone();
        names.extend(params.iter().cloned());
        let ring = Ring::new(&names)?;
        if rhs.len() != state_vars.len() {
            return Err(SymError::UnknownSymbol(format!(
                "expected {} equations, got {}",
                state_vars.len(),
                rhs.len()
            )));
        }
        let rhs = rhs
            .into_iter()
            .map(|p| p.remap(&ring))
            .collect::<SymResult<Vec<_>>>()?;
        if let Some(inf) = &infectious {
            for &i in inf {
                if i >= state_vars.len() {
                    return Err(SymError::UnknownSymbol(format!(
                        "infectious index {} out of range",
                        i
                    )));
                }
            }
        }
        Ok(Model {
            name,
            state_vars,
            params,
            rhs,
            infectious,
            ring,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn state_vars(&self) -> &[String] {
        &self.state_vars
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn n_states(&self) -> usize {
        self.state_vars.len()
    }

    pub fn rhs(&self) -> &[Poly] {
        &self.rhs
    }

    /// Ring indices of the state variables (0..n_states by construction).
    pub fn state_indices(&self) -> Vec<usize> {
        (0..self.state_vars.len()).collect()
    }

    /// Ring indices of the parameters.
    pub fn param_indices(&self) -> Vec<usize> {
        (self.state_vars.len()..self.ring.len()).collect()
    }

    pub fn infectious(&self) -> Option<&[usize]> {
        self.infectious.as_deref()
    }

    pub fn set_infectious(&mut self, names: &[String]) -> SymResult<()> {
        let mut idx = Vec::new();
        for n in names {
            idx.push(
                self.state_vars
                    .iter()
                    .position(|v| v == n)
                    .ok_or_else(|| SymError::UnknownSymbol(n.clone()))?,
            );
        }
        self.infectious = Some(idx);
        Ok(())
    }

    pub fn state_index(&self, name: &str) -> SymResult<usize> {
        self.state_vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| SymError::UnknownSymbol(name.to_string()))
    }

    /// Canonical printer; `parse_model` of the output reproduces the model.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("model {}\n", self.name));
        out.push_str(&format!("vars {}\n", self.state_vars.join(" ")));
        if !self.params.is_empty() {
            out.push_str(&format!("params {}\n", self.params.join(" ")));
        }
        if let Some(inf) = &self.infectious {
            let names: Vec<&str> = inf.iter().map(|&i| self.state_vars[i].as_str()).collect();
            out.push_str(&format!("infectious {}\n", names.join(" ")));
        }
        for (v, p) in self.state_vars.iter().zip(&self.rhs) {
            out.push_str(&format!("eq {}' = {}\n", v, p));
        }
        out
    }
}

/// Outcome of the essential-non-negativity check.
#[derive(Clone, Debug)]
pub struct NonnegReport {
    pub ok: bool,
    /// (equation index, offending term) pairs.
    pub violations: Vec<(usize, Poly)>,
}

/// Essential non-negativity by inspection of the expanded right-hand sides:
/// every negative term must carry the variable whose equation it sits in
/// (the decomposition f_i = g_i - x_i h_i with nonnegative g_i, h_i).
/// Parameters count as positive symbols; a term is negative iff its
/// rational numeric factor is negative.
pub fn check_hungarian(m: &Model) -> NonnegReport {
    let mut violations = Vec::new();
    for (i, p) in m.rhs.iter().enumerate() {
        for (mono, coeff) in p.terms() {
            if coeff.is_negative() && mono[i] == 0 {
                violations.push((i, Poly::from_term(m.ring(), mono.clone(), coeff.clone())));
            }
        }
    }
    NonnegReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// One source term of a direction column.
#[derive(Clone, Debug)]
pub struct LedgerEntry {
    pub equation: usize,
    /// Signed rational numeric factor of the term.
    pub coefficient: BigRational,
    /// Full monomial (state and parameter exponents).
    pub monomial: Mono,
}

/// The pseudo-linear form rhs = S * x^Y: distinct state monomials with
/// their direction columns. Direction entries are polynomials in the
/// parameters (exact rationals once parameters are numeric).
#[derive(Clone, Debug)]
pub struct KineticDecomposition {
    /// Exponent columns y_k over the state variables (full-ring monomials
    /// with zero parameter part), pairwise distinct.
    pub state_monomials: Vec<Mono>,
    /// Direction columns s_k; `directions[k][i]` multiplies x^{y_k} in
    /// equation i.
    pub directions: Vec<Vec<Poly>>,
    /// Ungrouped, rate-constant-aware view per column.
    pub term_ledger: Vec<Vec<LedgerEntry>>,
}

impl KineticDecomposition {
    /// Rebuild the right-hand sides; exact identity with the model.
    pub fn reconstruct(&self, m: &Model) -> Vec<Poly> {
        let ring = m.ring().clone();
        let mut out = vec![ring.zero(); m.n_states()];
        for (k, mono) in self.state_monomials.iter().enumerate() {
            let xk = Poly::from_term(&ring, mono.clone(), num_traits::One::one());
            for (i, s) in self.directions[k].iter().enumerate() {
                out[i] = out[i].add(&s.mul(&xk));
            }
        }
        out
    }
}

/// Group the right-hand sides by state monomial. Columns are sorted by
/// exponent vector; no zero column is kept.
pub fn kinetic_decomposition(m: &Model) -> KineticDecomposition {
    use std::collections::BTreeMap;
    let states = m.state_indices();
    let ring = m.ring().clone();
    let mut groups: BTreeMap<Mono, (Vec<Poly>, Vec<LedgerEntry>)> = BTreeMap::new();
    for (i, p) in m.rhs.iter().enumerate() {
        for (state_mono, param_mono, coeff) in p.split_terms(&states) {
            let full: Mono = state_mono
                .iter()
                .zip(&param_mono)
                .map(|(a, b)| a + b)
                .collect();
            let entry = groups
                .entry(state_mono)
                .or_insert_with(|| (vec![ring.zero(); m.n_states()], Vec::new()));
            entry.0[i] = entry.0[i].add(&Poly::from_term(&ring, param_mono, coeff.clone()));
            entry.1.push(LedgerEntry {
                equation: i,
                coefficient: coeff,
                monomial: full,
            });
        }
    }
    let mut state_monomials = Vec::new();
    let mut directions = Vec::new();
    let mut term_ledger = Vec::new();
    for (mono, (dir, ledger)) in groups {
        if dir.iter().all(|p| p.is_zero()) {
            continue;
        }
        state_monomials.push(mono);
        directions.push(dir);
        term_ledger.push(ledger);
    }
    KineticDecomposition {
        state_monomials,
        directions,
        term_ledger,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lorenz() -> Model {
        parse_model(
            "model lorenz\n\
             vars x y z\n\
             params sigma rho beta\n\
             eq x' = sigma*y - sigma*x\n\
             eq y' = rho*x - y - x*z\n\
             eq z' = x*y - beta*z\n",
        )
        .unwrap()
    }

    #[test]
    fn lorenz_negative_cross_effect() {
        let report = check_hungarian(&lorenz());
        assert!(!report.ok);
        assert_eq!(report.violations.len(), 1);
        let (eq, term) = &report.violations[0];
        assert_eq!(*eq, 1);
        assert_eq!(format!("{}", term), "-x*z");
    }

    #[test]
    fn hethcote_passes_hungarian() {
        let m = parse_model(
            "model hethcote\n\
             vars s i r\n\
             params lam beta gam\n\
             infectious i\n\
             eq s' = -beta*s*i + lam - lam*s\n\
             eq i' = beta*s*i - lam*i - gam*i\n\
             eq r' = gam*i - lam*r\n",
        )
        .unwrap();
        assert!(check_hungarian(&m).ok);
    }

    #[test]
    fn constant_negative_term_flagged() {
        let m = parse_model("model t\nvars x\neq x' = -1\n").unwrap();
        let report = check_hungarian(&m);
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn decay_decomposition() {
        let m = parse_model("model t\nvars x\neq x' = -x\n").unwrap();
        let kd = kinetic_decomposition(&m);
        assert_eq!(kd.state_monomials.len(), 1);
        assert_eq!(kd.state_monomials[0], vec![1]);
        assert_eq!(format!("{}", kd.directions[0][0]), "-1");
        assert_eq!(kd.reconstruct(&m), m.rhs().to_vec());
    }

    #[test]
    fn reconstruction_identity() {
        let m = lorenz();
        let kd = kinetic_decomposition(&m);
        assert_eq!(kd.reconstruct(&m), m.rhs().to_vec());
    }

    #[test]
    fn print_parse_round_trip() {
        let m = lorenz();
        let again = parse_model(&m.to_source()).unwrap();
        assert_eq!(m.to_source(), again.to_source());
        assert_eq!(m.rhs(), again.rhs());
    }
}

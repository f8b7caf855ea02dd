//! Buchberger's algorithm for lexicographic Groebner bases, with
//! Gebauer-Moeller style pair elimination and an explicit reduction budget.

use super::poly::{Mono, Poly, Ring};
use super::{SymError, SymResult};

/// Default number of S-pair reductions before giving up. Desk-scale models
/// finish far below this; the budget makes failure explicit instead of
/// hanging.
pub const DEFAULT_PAIR_BUDGET: usize = 20_000;

fn mono_lcm(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn mono_divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn mono_coprime(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Full reduction of `p` modulo `basis`: repeatedly cancels any term
/// divisible by some leading term. Returns the normal form.
pub fn reduce_mod_basis(p: &Poly, basis: &[Poly]) -> Poly {
    let ring = p.ring().clone();
    let leads: Vec<(Mono, num_rational::BigRational)> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let (m, c) = g.leading().unwrap();
            (m.clone(), c.clone())
        })
        .collect();
    let gens: Vec<&Poly> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut rem = ring.zero();
    let mut work = p.clone();
    'outer: while let Some((m, c)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
        for (i, (lm, lc)) in leads.iter().enumerate() {
            if mono_divides(lm, &m) {
                let q: Mono = m.iter().zip(lm).map(|(a, b)| a - b).collect();
                let factor = Poly::from_term(&ring, q, &c / lc);
                work = work.sub(&factor.mul(gens[i]));
                continue 'outer;
            }
        }
        // leading term irreducible: move it to the remainder
        let t = Poly::from_term(&ring, m, c);
        rem = rem.add(&t);
        work = work.sub(&t);
    }
    rem
}

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let ring = f.ring().clone();
    let (fm, fc) = f.leading().expect("nonzero");
    let (gm, gc) = g.leading().expect("nonzero");
    let l = mono_lcm(fm, gm);
    let fq: Mono = l.iter().zip(fm).map(|(a, b)| a - b).collect();
    let gq: Mono = l.iter().zip(gm).map(|(a, b)| a - b).collect();
    let ft = Poly::from_term(&ring, fq, fc.recip());
    let gt = Poly::from_term(&ring, gq, gc.recip());
    ft.mul(f).sub(&gt.mul(g))
}

/// Reduced lexicographic Groebner basis with the default budget.
///
/// The ring built for the computation orders `eliminate_symbols` before
/// `keep_symbols`, so the basis elements free of the eliminated symbols
/// generate the elimination ideal; filter on `contains_var` to get them.
pub fn gb_lex<S: AsRef<str>, T: AsRef<str>>(
    generators: &[Poly],
    keep_symbols: &[S],
    eliminate_symbols: &[T],
) -> SymResult<Vec<Poly>> {
    gb_lex_budget(
        generators,
        keep_symbols,
        eliminate_symbols,
        DEFAULT_PAIR_BUDGET,
    )
}

pub fn gb_lex_budget<S: AsRef<str>, T: AsRef<str>>(
    generators: &[Poly],
    keep_symbols: &[S],
    eliminate_symbols: &[T],
    budget: usize,
) -> SymResult<Vec<Poly>> {
    let mut names: Vec<String> = Vec::new();
    for s in eliminate_symbols {
        names.push(s.as_ref().to_string());
    }
    for s in keep_symbols {
        if names.contains(&s.as_ref().to_string()) {
            return Err(SymError::DuplicateSymbol(s.as_ref().to_string()));
        }
        names.push(s.as_ref().to_string());
    }
    let ring = Ring::new(&names)?;
    let gens: Vec<Poly> = generators
        .iter()
        .map(|g| g.remap(&ring))
        .collect::<SymResult<_>>()?;
    buchberger(&ring, gens, budget)
}

fn buchberger(ring: &Ring, generators: Vec<Poly>, budget: usize) -> SymResult<Vec<Poly>> {
    let mut basis: Vec<Poly> = Vec::new();
    for g in generators {
        if !g.is_zero() {
            basis.push(g.primitive());
        }
    }
    if basis.is_empty() {
        return Ok(vec![]);
    }
    // pair queue with the Gebauer-Moeller update
    let mut pairs: Vec<(usize, usize, Mono)> = Vec::new();
    for i in 0..basis.len() {
        add_pairs(&basis, &mut pairs, i);
    }
    let mut reductions = 0usize;
    while let Some(pos) = select_pair(&pairs) {
        let (i, j, _) = pairs.swap_remove(pos);
        reductions += 1;
        if reductions > budget {
            return Err(SymError::BudgetExhausted {
                reductions: reductions - 1,
                partial: autoreduce(basis),
            });
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = reduce_mod_basis(&s, &basis);
        if !r.is_zero() {
            basis.push(r.primitive());
            let k = basis.len() - 1;
            prune_pairs(&basis, &mut pairs, k);
            add_pairs(&basis, &mut pairs, k);
        }
    }
    Ok(autoreduce(basis))
}

/// Pick the pair with the smallest lcm (normal selection strategy).
fn select_pair(pairs: &[(usize, usize, Mono)]) -> Option<usize> {
    pairs
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            let da: u32 = a.2.iter().sum();
            let db: u32 = b.2.iter().sum();
            da.cmp(&db).then_with(|| a.2.cmp(&b.2))
        })
        .map(|(i, _)| i)
}

fn add_pairs(basis: &[Poly], pairs: &mut Vec<(usize, usize, Mono)>, k: usize) {
    let lk = basis[k].leading().unwrap().0.clone();
    for i in 0..k {
        let li = basis[i].leading().unwrap().0;
        // product criterion: coprime leading terms reduce to zero
        if mono_coprime(li, &lk) {
            continue;
        }
        let l = mono_lcm(li, &lk);
        // chain criterion against existing members
        let redundant = basis.iter().enumerate().take(k).any(|(j, g)| {
            if j == i {
                return false;
            }
            let lj = g.leading().unwrap().0;
            mono_divides(lj, &l)
                && mono_lcm(li, lj) != l
                && mono_lcm(&lk, lj) != l
        });
        if !redundant {
            pairs.push((i, k, l));
        }
    }
}

/// Drop queued pairs whose lcm is strictly reducible by the new element.
fn prune_pairs(basis: &[Poly], pairs: &mut Vec<(usize, usize, Mono)>, k: usize) {
    let lk = basis[k].leading().unwrap().0.clone();
    pairs.retain(|(i, j, l)| {
        if !mono_divides(&lk, l) {
            return true;
        }
        let li = basis[*i].leading().unwrap().0;
        let lj = basis[*j].leading().unwrap().0;
        mono_lcm(li, &lk) == *l || mono_lcm(lj, &lk) == *l
    });
}

/// Inter-reduce: no leading term divides any term of another element; each
/// element primitive; deterministic order (lex-ascending leading term).
fn autoreduce(mut basis: Vec<Poly>) -> Vec<Poly> {
    // remove elements whose leading term another leading term divides
    loop {
        let mut removed = false;
        'scan: for i in 0..basis.len() {
            let li = basis[i].leading().unwrap().0.clone();
            for (j, g) in basis.iter().enumerate() {
                if i != j && mono_divides(g.leading().unwrap().0, &li) {
                    basis.remove(i);
                    removed = true;
                    break 'scan;
                }
            }
        }
        if !removed {
            break;
        }
    }
    // tail reduction
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..basis.len() {
            let others: Vec<Poly> = basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let r = reduce_mod_basis(&basis[i], &others).primitive();
            if r != basis[i] {
                if r.is_zero() {
                    basis.remove(i);
                } else {
                    basis[i] = r;
                }
                changed = true;
                break;
            }
        }
    }
    basis.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    basis
}

/// Check that `q` reduces to zero modulo `basis` (used by tests and the
/// basis-contract assertions).
pub fn reduces_to_zero(q: &Poly, basis: &[Poly]) -> bool {
    reduce_mod_basis(q, basis).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(ring: &Ring, s: &str) -> Poly {
        crate::modeldsl::parse_expression(s, ring).unwrap()
    }

    #[test]
    fn single_generator_is_basis() {
        let ring = Ring::new(&["x"]).unwrap();
        let x = ring.var("x").unwrap();
        let gb = gb_lex(&[x.clone()], &["x"], &[] as &[&str]).unwrap();
        assert_eq!(gb.len(), 1);
        assert_eq!(gb[0], x);
    }

    #[test]
    fn empty_generators_empty_basis() {
        let gb = gb_lex(&[], &["x"], &[] as &[&str]).unwrap();
        assert!(gb.is_empty());
    }

    #[test]
    fn hand_substitution_elimination() {
        // {s + i - 1, i - 2s}, keep {i}, eliminate {s}:
        // substituting s = 1 - i into i - 2s gives 3i - 2.
        let ring = Ring::new(&["s", "i"]).unwrap();
        let g1 = poly(&ring, "s + i - 1");
        let g2 = poly(&ring, "i - 2*s");
        let gb = gb_lex(&[g1, g2], &["i"], &["s"]).unwrap();
        let elim_ring = gb[0].ring().clone();
        let s_idx = elim_ring.index_of("s").unwrap();
        let elim: Vec<&Poly> = gb.iter().filter(|p| !p.contains_var(s_idx)).collect();
        assert_eq!(elim.len(), 1);
        let expect = poly(&elim_ring, "3*i - 2").primitive();
        assert_eq!(elim[0], &expect);
    }

    #[test]
    fn buchberger_keeps_x_square_pair() {
        // {x^2 - y, y - 1}, eliminate {x}: elimination part is {y - 1};
        // the S-pair x^2 - 1 still involves x.
        let ring = Ring::new(&["x", "y"]).unwrap();
        let g1 = poly(&ring, "x^2 - y");
        let g2 = poly(&ring, "y - 1");
        let gb = gb_lex(&[g1.clone(), g2.clone()], &["y"], &["x"]).unwrap();
        let r = gb[0].ring().clone();
        let x_idx = r.index_of("x").unwrap();
        let elim: Vec<&Poly> = gb.iter().filter(|p| !p.contains_var(x_idx)).collect();
        assert_eq!(elim.len(), 1);
        assert_eq!(elim[0], &poly(&r, "y - 1"));
        // contract: generators reduce to zero mod the basis
        for g in [&g1, &g2] {
            assert!(reduces_to_zero(&g.remap(&r).unwrap(), &gb));
        }
        // contract: all S-polynomials reduce to zero
        for i in 0..gb.len() {
            for j in i + 1..gb.len() {
                assert!(reduces_to_zero(&s_polynomial(&gb[i], &gb[j]), &gb));
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_explicit() {
        let ring = Ring::new(&["x", "y", "z"]).unwrap();
        let gens = vec![
            poly(&ring, "x^2*y - z^2"),
            poly(&ring, "y^2*z - x"),
            poly(&ring, "z^2*x - y"),
        ];
        match gb_lex_budget(&gens, &["z"], &["x", "y"], 1) {
            Err(SymError::BudgetExhausted { partial, .. }) => assert!(!partial.is_empty()),
            other => panic!("expected budget exhaustion, got {:?}", other.map(|v| v.len())),
        }
    }
}

//! Triangular elimination of a face system down to one univariate residue.
//!
//! Works both on instantiated systems (parameters replaced by rationals) and
//! on symbolic ones, where parameters are treated as positive and generic.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{Monomial, MultiPoly, RatFunc, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UndecidedReason {
    /// The univariate residue has an irreducible part of this degree above two.
    DegreeOverflow(usize),
    /// No variable appears linearly and more than one unknown is left.
    EliminationStall,
    /// Coordinates would need two different square roots.
    MixedRadicals,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BranchEnd {
    /// Every unknown was eliminated.
    Triangular,
    /// One unknown is left, constrained by this polynomial.
    Univariate(usize, MultiPoly),
    /// Some unknown is unconstrained.
    Degenerate(Vec<usize>),
    Stall(Vec<MultiPoly>),
}

/// One consistent branch of the elimination.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    /// Free variables set to zero on this branch.
    pub zeros: Vec<usize>,
    /// `(v, expr)` in elimination order; `expr` only involves unknowns
    /// eliminated later, the final unknown, zeros, and parameters.
    pub subs: Vec<(usize, RatFunc)>,
    pub end: BranchEnd,
}

#[derive(Debug, Clone)]
struct State {
    eqs: Vec<MultiPoly>,
    unknowns: BTreeSet<usize>,
    subs: Vec<(usize, RatFunc)>,
    zeros: Vec<usize>,
    /// Polynomials that cannot vanish on this branch.
    nonzero: Vec<MultiPoly>,
}

/// Problem description shared by all branches.
pub struct Problem {
    /// Number of state variables; ring indices at or above it are parameters.
    pub n: usize,
    /// Variables that must be strictly positive.
    pub residents: BTreeSet<usize>,
    /// Variables allowed to vanish; they branch when they factor out.
    pub free: BTreeSet<usize>,
    pub keep: Option<usize>,
}

const MAX_BRANCHES: usize = 64;

impl Problem {
    fn strip(&self, mut p: MultiPoly, nonzero: &[MultiPoly]) -> MultiPoly {
        if p.is_zero() {
            return p;
        }
        let content = p.monomial_content();
        let removable: Vec<u32> = content
            .exponents()
            .iter()
            .enumerate()
            .map(|(i, &e)| if i >= self.n || self.residents.contains(&i) { e } else { 0 })
            .collect();
        p = p.div_monomial(&Monomial::from_exponents(removable));
        for f in nonzero {
            if f.is_constant() {
                continue;
            }
            while !p.is_constant() {
                match p.div_exact(f) {
                    Some(q) => p = q,
                    None => break,
                }
            }
        }
        p.primitive()
    }

    fn unknowns_of(&self, p: &MultiPoly, unknowns: &BTreeSet<usize>) -> BTreeSet<usize> {
        p.vars().into_iter().filter(|v| unknowns.contains(v)).collect()
    }

    /// Runs the elimination on the numerators `eqs` with the given unknowns.
    pub fn solve(&self, eqs: Vec<MultiPoly>, unknowns: BTreeSet<usize>) -> Vec<Branch> {
        let mut out = Vec::new();
        let nonzero = self.residents.iter().map(|&v| MultiPoly::var(v)).collect();
        self.run(State { eqs, unknowns, subs: Vec::new(), zeros: Vec::new(), nonzero }, &mut out);
        out
    }

    fn run(&self, mut st: State, out: &mut Vec<Branch>) {
        if out.len() >= MAX_BRANCHES {
            return;
        }
        loop {
            // normalize, detect inconsistency
            let mut eqs = Vec::new();
            for e in std::mem::take(&mut st.eqs) {
                let e = self.strip(e, &st.nonzero);
                if e.is_zero() {
                    continue;
                }
                if self.unknowns_of(&e, &st.unknowns).is_empty() {
                    return;
                }
                if !eqs.contains(&e) {
                    eqs.push(e);
                }
            }
            st.eqs = eqs;

            // a free unknown factoring out of an equation splits the branch
            let split = st.eqs.iter().find_map(|e| {
                let c = e.monomial_content();
                st.unknowns.iter().copied().find(|v| self.free.contains(v) && c.exp(*v) > 0)
            });
            if let Some(v) = split {
                let mut zero = st.clone();
                let vals: BTreeMap<usize, Rational> = [(v, Rational::zero())].into();
                zero.eqs = zero.eqs.iter().map(|e| e.substitute_values(&vals)).collect();
                zero.unknowns.remove(&v);
                zero.zeros.push(v);
                self.run(zero, out);
                st.nonzero.push(MultiPoly::var(v));
                continue;
            }

            if st.eqs.is_empty() {
                let end = if st.unknowns.is_empty() {
                    BranchEnd::Triangular
                } else {
                    BranchEnd::Degenerate(st.unknowns.iter().copied().collect())
                };
                out.push(Branch { zeros: st.zeros, subs: st.subs, end });
                return;
            }

            let constrained: BTreeSet<usize> = st.eqs.iter().flat_map(|e| self.unknowns_of(e, &st.unknowns)).collect();
            if constrained.len() < st.unknowns.len() {
                let rest = st.unknowns.difference(&constrained).copied().collect();
                out.push(Branch { zeros: st.zeros, subs: st.subs, end: BranchEnd::Degenerate(rest) });
                return;
            }
            if constrained.len() == 1 {
                let u = *constrained.iter().next().expect("one unknown");
                if st.eqs.iter().all(|e| e.degree_in(u) > 1) {
                    let g = st.eqs.iter().skip(1).fold(st.eqs[0].clone(), |g, e| g.gcd(e));
                    if g.degree_in(u) > 0 {
                        out.push(Branch { zeros: st.zeros, subs: st.subs, end: BranchEnd::Univariate(u, g.primitive()) });
                    }
                    return;
                }
            }

            let Some((ei, v)) = self.pick(&st) else {
                out.push(Branch { zeros: st.zeros, subs: st.subs, end: BranchEnd::Stall(st.eqs) });
                return;
            };
            let pivot = st.eqs.remove(ei);
            let c = pivot.coeffs_in(v);
            let (b, a) = (c[0].clone(), c[1].clone());
            let expr = RatFunc::new(-b.clone(), a.clone()).expect("nonzero linear coefficient");
            let a_free = self.unknowns_of(&a, &st.unknowns).is_empty();
            st.eqs = st.eqs.iter().map(|e| substitute_linear(e, v, &b, &a)).collect();
            st.nonzero = st
                .nonzero
                .iter()
                .map(|f| substitute_linear(f, v, &b, &a).primitive())
                .filter(|f| !f.is_constant())
                .collect();
            if !a_free {
                st.nonzero.push(a.primitive());
            }
            st.unknowns.remove(&v);
            st.subs.push((v, expr));
        }
    }

    fn pick(&self, st: &State) -> Option<(usize, usize)> {
        let mut best: Option<((bool, usize, bool, usize), (usize, usize))> = None;
        for (i, e) in st.eqs.iter().enumerate() {
            for v in self.unknowns_of(e, &st.unknowns) {
                if e.degree_in(v) != 1 {
                    continue;
                }
                let a = &e.coeffs_in(v)[1];
                let key = (!self.unknowns_of(a, &st.unknowns).is_empty(), e.num_terms(), Some(v) == self.keep, v);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, (i, v)));
                }
            }
        }
        best.map(|(_, p)| p)
    }
}

/// Numerator of `e(v = -b/a)` with every factor of `a` removed.
fn substitute_linear(e: &MultiPoly, v: usize, b: &MultiPoly, a: &MultiPoly) -> MultiPoly {
    let d = e.degree_in(v);
    if d == 0 {
        return e.clone();
    }
    let c = e.coeffs_in(v);
    let nb = -b.clone();
    let mut out = MultiPoly::zero();
    for (i, ci) in c.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        out = out + &(ci * &nb.pow(i as u32)) * &a.pow(d - i as u32);
    }
    if out.is_zero() || a.is_constant() {
        return out;
    }
    loop {
        let g = out.gcd(a);
        if g.is_constant() {
            return out;
        }
        out = out.div_exact(&g).expect("gcd divides");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> MultiPoly {
        MultiPoly::var(i)
    }
    fn c(k: i64) -> MultiPoly {
        MultiPoly::constant(Rational::from_integer(k.into()))
    }

    #[test]
    fn linear_chain_is_triangular() {
        // x + y - 3 = 0, x - y - 1 = 0
        let p = Problem { n: 2, residents: BTreeSet::new(), free: [0, 1].into(), keep: Some(0) };
        let br = p.solve(vec![v(0) + v(1) - c(3), v(0) - v(1) - c(1)], [0, 1].into());
        assert_eq!(br.len(), 1);
        assert_eq!(br[0].end, BranchEnd::Triangular);
    }

    #[test]
    fn free_factor_branches() {
        // x*(y - 1) = 0, y - 2 + x = 0
        let p = Problem { n: 2, residents: BTreeSet::new(), free: [0, 1].into(), keep: Some(1) };
        let br = p.solve(vec![v(0) * (v(1) - c(1)), v(1) - c(2) + v(0)], [0, 1].into());
        assert_eq!(br.len(), 2);
        assert_eq!(br[0].zeros, vec![0]);
    }

    #[test]
    fn quadratic_residue() {
        // y = x, x*y - 2 = 0
        let p = Problem { n: 2, residents: [0, 1].into(), free: BTreeSet::new(), keep: Some(0) };
        let br = p.solve(vec![v(1) - v(0), v(0) * v(1) - c(2)], [0, 1].into());
        assert_eq!(br.len(), 1);
        assert_eq!(br[0].end, BranchEnd::Univariate(0, v(0) * v(0) - c(2)));
    }
}

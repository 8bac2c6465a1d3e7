//! Reaction-network view of a model: rates, stoichiometry, siphons and the
//! siphon lattice.

mod lattice;
mod siphon;

pub use lattice::{siphon_lattice, Cover, SiphonLattice};
pub use siphon::{is_siphon, minimal_siphons, siphon_flags, verify_face_invariance, Siphon};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::scalar::rational_gcd;
use crate::algebra::{DecideSign, Monomial, MultiPoly, RatFunc, Rational, Sign};
use crate::error::{Error, Result};
use crate::model::Model;

#[derive(Debug, Clone, PartialEq)]
enum Kernel {
    /// Product of state variables.
    Mono(Monomial),
    /// A whole rational rate with a variable-dependent denominator.
    Rational(RatFunc),
}

#[derive(Debug, Clone)]
struct Atom {
    kernel: Kernel,
    coeff: RatFunc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reaction {
    /// Reactant multiplicity per species.
    pub reactants: Vec<u32>,
    /// Product multiplicity per species.
    pub products: Vec<u32>,
    pub rate: usize,
}

impl Reaction {
    pub fn produces(&self, s: usize) -> bool {
        self.products[s] > 0
    }

    pub fn consumes_any(&self, set: &[usize]) -> bool {
        set.iter().any(|&s| self.reactants[s] > 0)
    }
}

#[derive(Debug, Clone)]
pub struct ReactionNetwork {
    pub species: Vec<String>,
    /// Names of the ring variables: species then parameters.
    pub symbols: Vec<String>,
    pub rates: Vec<RatFunc>,
    /// `gamma[species][rate]`.
    pub gamma: Vec<Vec<i64>>,
    pub reactions: Vec<Reaction>,
    /// Model right-hand sides, kept for factor tests.
    pub rhs: Vec<RatFunc>,
}

impl ReactionNetwork {
    pub fn n_species(&self) -> usize {
        self.species.len()
    }

    /// `gamma . rates`, which must reproduce the right-hand sides.
    pub fn reconstruct(&self) -> Vec<RatFunc> {
        self.gamma
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.rates)
                    .filter(|(g, _)| **g != 0)
                    .fold(RatFunc::zero(), |acc, (g, r)| acc + RatFunc::constant(Rational::from_integer((*g).into())) * r.clone())
            })
            .collect()
    }

    fn side(&self, mult: &[u32]) -> String {
        let parts: Vec<String> = mult
            .iter()
            .enumerate()
            .filter(|(_, k)| **k > 0)
            .map(|(s, k)| if *k == 1 { self.species[s].clone() } else { format!("{k}{}", self.species[s]) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn reaction_text(&self, r: &Reaction) -> String {
        format!("{} -> {}  [{}]", self.side(&r.reactants), self.side(&r.products), self.rates[r.rate].display_with(&self.symbols))
    }
}

fn atoms_of(term: &RatFunc, n: usize) -> Result<Vec<Atom>> {
    if term.is_polynomial() {
        let den = term.den().constant_value().expect("polynomial term");
        let mut out = Vec::new();
        for (m, c) in term.num().terms() {
            let mut var_part = vec![0u32; n];
            let mut par_part = m.exponents().to_vec();
            for (i, e) in m.exponents().iter().enumerate().take(n) {
                var_part[i] = *e;
                par_part[i] = 0;
            }
            let coeff = MultiPoly::term(c / &den, Monomial::from_exponents(par_part));
            out.push(Atom { kernel: Kernel::Mono(Monomial::from_exponents(var_part)), coeff: RatFunc::from_poly(coeff) });
        }
        return Ok(out);
    }
    let lead = term.num().leading_coeff();
    let kernel = term.clone() * RatFunc::constant(lead.recip());
    if kernel.decide_sign() != Some(Sign::Positive) {
        return Err(Error::UnparseableRate(format!("{term:?}")));
    }
    Ok(vec![Atom { kernel: Kernel::Rational(kernel), coeff: RatFunc::constant(lead) }])
}

fn kernel_rate(k: &Kernel) -> RatFunc {
    match k {
        Kernel::Mono(m) => RatFunc::from_poly(MultiPoly::term(Rational::one(), m.clone())),
        Kernel::Rational(r) => r.clone(),
    }
}

fn kernel_support(k: &Kernel, n: usize) -> Vec<u32> {
    match k {
        Kernel::Mono(m) => (0..n).map(|i| m.exp(i)).collect(),
        Kernel::Rational(r) => {
            let vars = r.vars();
            (0..n).map(|i| u32::from(vars.contains(&i))).collect()
        }
    }
}

/// Merges atoms of one equation that share a kernel, as long as the merged
/// coefficient keeps a decidable sign.
fn merge_equation(atoms: Vec<Atom>) -> Vec<Atom> {
    let mut out: Vec<Atom> = Vec::new();
    for a in atoms {
        if let Some(prev) = out.iter_mut().find(|p| p.kernel == a.kernel) {
            let sum = prev.coeff.clone() + a.coeff.clone();
            if sum.is_zero() || sum.decide_sign().is_some() {
                prev.coeff = sum;
                continue;
            }
        }
        out.push(a);
    }
    out.retain(|a| !a.coeff.is_zero());
    out
}

/// Reads the right-hand sides as `gamma . rates` with nonnegative
/// reactant and product multisets.
pub fn extract_network(m: &Model) -> Result<ReactionNetwork> {
    let n = m.n();
    let mut kernels: Vec<Kernel> = Vec::new();
    let mut base: Vec<RatFunc> = Vec::new();
    let mut entries: Vec<Vec<Rational>> = Vec::new(); // [rate][species]
    for (i, eq) in m.equations.iter().enumerate() {
        let mut atoms = Vec::new();
        for t in &eq.terms {
            atoms.extend(atoms_of(t, n)?);
        }
        for a in merge_equation(atoms) {
            let mut placed = false;
            for (r, k) in kernels.iter().enumerate() {
                if *k != a.kernel {
                    continue;
                }
                if let Some(q) = (a.coeff.clone() / base[r].clone()).constant_value() {
                    entries[r][i] += q;
                    placed = true;
                    break;
                }
            }
            if placed {
                continue;
            }
            let sign = a.coeff.decide_sign().ok_or_else(|| Error::UnparseableRate(a.coeff.display_with(&m.symbols())))?;
            let (c, g) = if sign == Sign::Negative { (-a.coeff, -Rational::one()) } else { (a.coeff, Rational::one()) };
            kernels.push(a.kernel);
            base.push(c);
            let mut col = vec![Rational::zero(); n];
            col[i] = g;
            entries.push(col);
        }
    }

    let symbols = m.symbols();
    let mut rates = Vec::new();
    let mut gamma = vec![Vec::new(); n];
    let mut reactions = Vec::new();
    let mut r_out = 0;
    for (r, col) in entries.into_iter().enumerate() {
        if col.iter().all(|q| q.is_zero()) {
            continue;
        }
        let g = rational_gcd(col.iter());
        let ints: Vec<i64> = col
            .iter()
            .map(|q| {
                let z = q / &g;
                i64::try_from(z.to_integer()).map_err(|_| Error::UnparseableRate("stoichiometry out of range".into()))
            })
            .collect::<Result<_>>()?;
        let rate = RatFunc::constant(g) * base[r].clone() * kernel_rate(&kernels[r]);
        let alpha = kernel_support(&kernels[r], n);
        let mut beta = Vec::with_capacity(n);
        for s in 0..n {
            let b = i64::from(alpha[s]) + ints[s];
            if b < 0 {
                return Err(Error::NotPositive(format!(
                    "rate {} removes {} without depending on it",
                    rate.display_with(&symbols),
                    m.variables[s]
                )));
            }
            beta.push(b as u32);
        }
        for s in 0..n {
            gamma[s].push(ints[s]);
        }
        rates.push(rate);
        reactions.push(Reaction { reactants: alpha, products: beta, rate: r_out });
        r_out += 1;
    }
    Ok(ReactionNetwork { species: m.variables.clone(), symbols, rates, gamma, reactions, rhs: m.rhs() })
}

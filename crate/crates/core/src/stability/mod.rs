//! Jacobians at face equilibria, transversal blocks, next-generation
//! splittings, invasion numbers and local stability.

mod ngm;
mod rank_one;
mod screen;

pub use ngm::{ngm_split, reproduction_function, split_with_f, RegularSplitting, SpectralRadius};
pub use rank_one::{determinant_identity, rank_one_bound, BoundReport};
pub use screen::{
    block_structure_screen, face_block_is_zero, platform_cubic, verify_face_block_theorem, BlockInfo, HopfFlag,
    PlatformCubic, ScreenReport,
};

use std::collections::BTreeMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::algebra::{
    hurwitz_test, metzler_sign, ExactMatrix, ExactScalar, HurwitzVerdict, Matrix, RatFunc, Rational, Sign,
    UniPoly,
};
use crate::equilibria::FaceEquilibrium;
use crate::error::{Error, Result};
use crate::model::Model;

/// Symbolic Jacobian of a model over its variables.
#[derive(Debug, Clone)]
pub struct JacobianView {
    pub full: Matrix<RatFunc>,
}

pub fn jacobian(m: &Model) -> JacobianView {
    let rhs = m.rhs();
    let n = m.n();
    JacobianView { full: Matrix::from_fn(n, n, |i, j| rhs[i].differentiate(j)) }
}

/// Parameter values of `m` keyed by ring index.
pub(crate) fn param_point(m: &Model) -> BTreeMap<usize, ExactScalar> {
    let n = m.n();
    m.parameters
        .iter()
        .enumerate()
        .filter_map(|(j, p)| m.values.get(p).map(|q| (n + j, ExactScalar::rational(q.clone()))))
        .collect()
}

pub(crate) fn eval_at(f: &RatFunc, params: &BTreeMap<usize, ExactScalar>, coords: &[ExactScalar]) -> Result<ExactScalar> {
    f.evaluate_exact(&|i| coords.get(i).cloned().or_else(|| params.get(&i).cloned()))
}

impl JacobianView {
    /// Evaluates at a state using the parameter values stored in `m`.
    pub fn at(&self, m: &Model, coords: &[ExactScalar]) -> Result<ExactMatrix> {
        let params = param_point(m);
        self.full.try_map(|f| eval_at(f, &params, coords))
    }

    /// `(non-invader, invader)` index lists for a block `sigma`.
    pub fn blocks(&self, sigma: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let rest = (0..self.full.rows()).filter(|i| !sigma.contains(i)).collect();
        (rest, sigma.to_vec())
    }
}

fn check_on_face(sigma: &[usize], e: &FaceEquilibrium, m: &Model) -> Result<()> {
    if sigma.is_empty() || !sigma.iter().all(|v| e.face.contains(v)) {
        return Err(Error::NotOnFace(format!("{} not inside {}", m.format_set(sigma), m.format_set(&e.face))));
    }
    Ok(())
}

/// `D_{x_sigma} f_sigma` at a face equilibrium.
pub fn transversal_block(m: &Model, sigma: &[usize], e: &FaceEquilibrium) -> Result<ExactMatrix> {
    check_on_face(sigma, e, m)?;
    Ok(jacobian(m).at(m, &e.coords)?.principal(sigma))
}

/// Restriction of the Jacobian to the variables outside `sigma`.
pub fn tangential_block(m: &Model, sigma: &[usize], e: &FaceEquilibrium) -> Result<ExactMatrix> {
    let j = jacobian(m).at(m, &e.coords)?;
    let rest: Vec<usize> = (0..m.n()).filter(|i| !sigma.contains(i)).collect();
    Ok(j.principal(&rest))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Undecided,
}

impl Comparison {
    fn of_sign(s: Sign) -> Self {
        match s {
            Sign::Negative => Comparison::Less,
            Sign::Zero => Comparison::Equal,
            Sign::Positive => Comparison::Greater,
        }
    }

    /// Sign of `value - 1` that this comparison implies.
    pub fn as_sign(self) -> Option<Sign> {
        match self {
            Comparison::Less => Some(Sign::Negative),
            Comparison::Equal => Some(Sign::Zero),
            Comparison::Greater => Some(Sign::Positive),
            Comparison::Undecided => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvasionReport {
    pub sigma: Vec<usize>,
    /// Spectral radius of the next-generation matrix, when the splitting is
    /// valid and the radius is representable.
    pub value: Option<ExactScalar>,
    pub comparison_to_one: Comparison,
    pub abscissa_sign: Sign,
    /// Which splitting produced `value`: `"model"`, `"mask"` or `"default"`.
    pub splitting: &'static str,
    pub splitting_error: Option<String>,
}

/// `F` of the model's new-production terms for `sigma`, differentiated along
/// `sigma` and evaluated at `coords`.
fn model_f(m: &Model, sigma: &[usize], coords: &[ExactScalar]) -> Result<Option<ExactMatrix>> {
    let Some(spec) = m.ngm_spec(sigma) else { return Ok(None) };
    let params = param_point(m);
    let k = sigma.len();
    let mut f = Matrix::zeros(k, k);
    for (v, terms) in &spec.new_terms {
        let Some(r) = sigma.iter().position(|s| s == v) else { continue };
        let total = terms.total();
        for (c, &s) in sigma.iter().enumerate() {
            f.set(r, c, eval_at(&total.differentiate(s), &params, coords)?);
        }
    }
    Ok(Some(f))
}

/// Mask entries of the model for `sigma`, in block coordinates.
fn model_mask(m: &Model, sigma: &[usize]) -> Option<Vec<(usize, usize)>> {
    let spec = m.mask_spec(sigma)?;
    let pos = |v: usize| sigma.iter().position(|&s| s == v);
    spec.entries.iter().map(|&(r, c)| Some((pos(r)?, pos(c)?))).collect()
}

/// Invasion number of block `sigma` at a face equilibrium. `mask` overrides
/// the model's own splitting; the abscissa sign never depends on it.
pub fn invasion_number(m: &Model, sigma: &[usize], e: &FaceEquilibrium, mask: Option<&[(usize, usize)]>) -> Result<InvasionReport> {
    let block = transversal_block(m, sigma, e)?;
    let abscissa_sign = metzler_sign(&block)?;
    let (split, splitting) = match mask {
        Some(mask) => (ngm_split(&block, Some(mask)), "mask"),
        None => match model_f(m, sigma, &e.coords)? {
            Some(f) => (split_with_f(&block, f, Vec::new()), "model"),
            None => match model_mask(m, sigma) {
                Some(mask) => (ngm_split(&block, Some(&mask)), "mask"),
                None => (ngm_split(&block, None), "default"),
            },
        },
    };
    let (value, splitting_error) = match split {
        Ok(s) => (s.rho, None),
        Err(e) => (None, Some(e.to_string())),
    };
    let comparison_to_one = match &value {
        Some(v) => match v.try_sub(&ExactScalar::from_int(1)) {
            Ok(d) => Comparison::of_sign(d.sign()),
            Err(_) => Comparison::Undecided,
        },
        None => Comparison::Undecided,
    };
    Ok(InvasionReport { sigma: sigma.to_vec(), value, comparison_to_one, abscissa_sign, splitting, splitting_error })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LasVerdict {
    LAS,
    Unstable,
    Boundary,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LasReport {
    pub verdict: LasVerdict,
    /// Characteristic factors, one per diagonal block or rational root.
    pub factors: Vec<String>,
    pub detail: Option<String>,
}

/// Diagonal blocks of a matrix under its strongly connected components,
/// upstream blocks first.
pub fn scc_blocks<T: crate::algebra::Field>(a: &Matrix<T>) -> Vec<Vec<usize>> {
    let n = a.rows();
    let mut g = DiGraph::<usize, ()>::new();
    let idx: Vec<_> = (0..n).map(|i| g.add_node(i)).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j && !a.get(i, j).is_zero() {
                g.add_edge(idx[j], idx[i], ());
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| g[x]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    comps.reverse();
    comps
}

/// Splits off rational roots of a characteristic factor with rational coefficients.
fn split_rational_roots(p: &UniPoly<ExactScalar>) -> Vec<UniPoly<ExactScalar>> {
    let Some(coeffs) = p.coeffs().iter().map(|c| c.as_rational().cloned()).collect::<Option<Vec<Rational>>>() else {
        return vec![p.clone()];
    };
    let mut rest = UniPoly::new(coeffs);
    let mut out = Vec::new();
    for r in rest.square_free().rational_roots() {
        let lin = UniPoly::new(vec![-r.clone(), Rational::from_integer(1.into())]);
        loop {
            let (q, rem) = rest.div_rem(&lin);
            if !rem.is_zero() || rest.degree() == 0 {
                break;
            }
            out.push(lin.clone());
            rest = q;
        }
    }
    if rest.degree() > 0 {
        out.push(rest);
    }
    out.into_iter().map(|f| f.map(|c| ExactScalar::rational(c.clone()))).collect()
}

/// Exact local stability of an equilibrium from the full Jacobian: the
/// characteristic polynomial is split along diagonal blocks and rational
/// roots before the Hurwitz test.
pub fn las_test(m: &Model, e: &FaceEquilibrium) -> LasReport {
    las_of_matrix(&match jacobian(m).at(m, &e.coords) {
        Ok(j) => j,
        Err(err) => return LasReport { verdict: LasVerdict::Undecided, factors: Vec::new(), detail: Some(err.to_string()) },
    })
}

pub fn las_of_matrix(j: &ExactMatrix) -> LasReport {
    let mut factors = Vec::new();
    let mut verdicts = Vec::new();
    for block in scc_blocks(j) {
        let cp = match j.principal(&block).char_poly_exact() {
            Ok(p) => p,
            Err(err) => return LasReport { verdict: LasVerdict::Undecided, factors, detail: Some(err.to_string()) },
        };
        for f in split_rational_roots(&cp) {
            factors.push(f.display_in("lambda"));
            match hurwitz_test(&f) {
                Ok(v) => verdicts.push(v),
                Err(err) => {
                    return LasReport { verdict: LasVerdict::Undecided, factors, detail: Some(err.to_string()) };
                }
            }
        }
    }
    let verdict = if verdicts.contains(&HurwitzVerdict::NotHurwitz) {
        LasVerdict::Unstable
    } else if verdicts.contains(&HurwitzVerdict::Boundary) {
        LasVerdict::Boundary
    } else {
        LasVerdict::LAS
    };
    LasReport { verdict, factors, detail: None }
}

/// Hurwitz verdict of a matrix, `None` when signs cannot be decided.
pub fn matrix_hurwitz(a: &ExactMatrix) -> Option<HurwitzVerdict> {
    match las_of_matrix(a).verdict {
        LasVerdict::LAS => Some(HurwitzVerdict::Hurwitz),
        LasVerdict::Unstable => Some(HurwitzVerdict::NotHurwitz),
        LasVerdict::Boundary => Some(HurwitzVerdict::Boundary),
        LasVerdict::Undecided => None,
    }
}

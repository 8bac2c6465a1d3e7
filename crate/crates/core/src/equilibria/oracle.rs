//! Closed-form equilibria of the builtin models, written out independently
//! of the face solver.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Classification, FaceEquilibrium};
use crate::algebra::{quad_solve, ExactScalar, Rational, Sign};
use crate::builtin::{builtin_variant, equilibrium_face, Variant};
use crate::error::{Error, Result};
use crate::expr::parse_expr;
use crate::model::Model;

const X0: &str = "Lambda/mu";
const X_HAT: &str = "mun/beta";
const U_HAT: &str = "(beta*Lambda - mu*mun)/(beta*mun)";
const X_TILDE: &str = "betaw*Lambda/(mu*(beta + betaw))";
const U_TILDE: &str = "mu/betaw";
const W_TILDE: &str = "beta*(betaw*Lambda/(mu*(beta + betaw)) - mun/beta)/betaw";
const STRAIN_S: &str = "(beta{j}*U - mu{j}*(1 + alpha{j}*U))/(gamma{j}*eps{j})";
const STRAIN_B: &str = "(beta{j}*U - mu{j}*(1 + alpha{j}*U))/(eps{j}*mu{j})";

const E1_A: &str = "beta^2*(beta + betaw)*mu*eps{j}";
const E1_B: &str = "beta*(beta*betaw*(mu{j} - Lambda*eps{j}) + betaw*mu*(-alpha{j}*mu{j} + beta{j} + eps{j}*mun) + beta*mu*eps{j}*mun)";
const E1_C: &str = "-betaw*(-alpha{j}*beta*Lambda*mu{j} + beta*beta{j}*Lambda + alpha{j}*mu*mu{j}*mun - beta{j}*mu*mun - beta*mu{j}*mun)";
const E1_S_CLOSED: &str =
    "mu*(beta*x1/mun - 1)*(beta{j}*mu - mu{j}*(alpha{j}*mu + betaw))/(gamma{j}*betaw*(-alpha{j}*mu{j} + beta{j} + (beta*x1 - mu)*eps{j}))";

const D0: &str = "((beta2 - alpha2*mu2)*eps1 + (beta1 - alpha1*mu1)*eps2 - mu*eps1*eps2)";
const EE_A: &str = "-beta*mu*eps1*eps2*(beta + betaw)";
const EE_B: &str = "-betaw*mu*D0 + beta*eps1*eps2*(betaw*Lambda + mu^2) - beta*betaw*(mu2*eps1 + mu1*eps2)";
const EE_C: &str = "betaw*Lambda*D0";
const EE_S1: &str = "(beta1*mu2*betaw - mu1*betaw*(alpha1*mu2 - alpha2*mu2 + beta2 + (beta*x1 - mu)*eps2) - mu*eps2*(beta1 - alpha1*mu1)*(mu - beta*x1))/(gamma1*betaw*(D0 + beta*eps1*eps2*x1))";
const EE_S2: &str = "(beta2*mu1*betaw - mu2*betaw*(-alpha1*mu1 + alpha2*mu1 + beta1 + (beta*x1 - mu)*eps1) - mu*eps1*(beta2 - alpha2*mu2)*(mu - beta*x1))/(gamma2*betaw*(D0 + beta*eps1*eps2*x1))";

fn strain(src: &str, j: usize) -> String {
    src.replace("{j}", &j.to_string())
}

struct Evaluator {
    model: Model,
    params: BTreeMap<String, Rational>,
}

impl Evaluator {
    fn new(v: Variant, params: &BTreeMap<String, Rational>) -> Self {
        Evaluator { model: builtin_variant(v), params: params.clone() }
    }

    fn eval(&self, src: &str, vars: &[(&str, &ExactScalar)]) -> Result<ExactScalar> {
        let src = src.replace("D0", D0);
        let f = parse_expr(&src, &self.model.symbols())?;
        let n = self.model.n();
        let mut point: BTreeMap<usize, ExactScalar> = BTreeMap::new();
        for (j, p) in self.model.parameters.iter().enumerate() {
            if let Some(q) = self.params.get(p) {
                point.insert(n + j, ExactScalar::rational(q.clone()));
            }
        }
        for (name, x) in vars {
            point.insert(self.model.var_index(name).expect("builtin variable"), (*x).clone());
        }
        for v in f.vars() {
            if !point.contains_key(&v) {
                let name = &self.model.symbols()[v];
                return Err(Error::MissingParameter(name.clone()));
            }
        }
        f.evaluate_exact(&|i| point.get(&i).cloned())
    }

    fn rat(&self, src: &str) -> Result<Rational> {
        Ok(self.eval(src, &[])?.as_rational().expect("rational expression").clone())
    }

    fn build(&self, v: Variant, name: &str, values: &[(&str, ExactScalar)], cls: Classification) -> FaceEquilibrium {
        let m = &self.model;
        let mut coords = vec![ExactScalar::zero(); m.n()];
        for (k, x) in values {
            coords[m.var_index(k).expect("builtin variable")] = x.clone();
        }
        let mut face: Vec<usize> =
            equilibrium_face(v, name).expect("known name").iter().map(|k| m.var_index(k).expect("builtin variable")).collect();
        face.sort_unstable();
        FaceEquilibrium { face, coords, classification: cls, name: Some(name.to_string()) }
    }
}

/// `(A, B, C)` of the quadratic in `y = x1 - mun/beta` for strain `j` alone
/// with return flow, as expression text over the builtin symbols.
pub fn e1_quadratic(j: usize) -> [String; 3] {
    [strain(E1_A, j), strain(E1_B, j), strain(E1_C, j)]
}

/// `(A, B, C)` of the quadratic in `x1` for both strains with return flow.
pub fn ee_quadratic() -> [String; 3] {
    [EE_A.to_string(), EE_B.replace("D0", D0), EE_C.replace("D0", D0)]
}

/// The single-strain `S_j` expression as printed with the return-flow
/// coordinates, in terms of `x1`.
pub fn e1_strain_formula(j: usize) -> String {
    strain(E1_S_CLOSED, j)
}

fn pick_root(roots: Vec<ExactScalar>, ok: impl Fn(&ExactScalar) -> Result<bool>) -> Result<Option<ExactScalar>> {
    for r in roots.iter().rev() {
        if ok(r)? {
            return Ok(Some(r.clone()));
        }
    }
    Ok(roots.into_iter().last())
}

fn positive(xs: &[&ExactScalar]) -> bool {
    xs.iter().all(|x| x.sign() == Sign::Positive)
}

/// Closed-form coordinates of a named equilibrium of a builtin variant.
/// For the quadratic rows the admissible root is chosen, else the larger one.
pub fn closed_form_oracle(v: Variant, name: &str, params: &BTreeMap<String, Rational>) -> Result<FaceEquilibrium> {
    if equilibrium_face(v, name).is_none() || (v == Variant::OmegaPos && ["E1g", "E2g", "EEg", "DFE"].contains(&name)) {
        return Err(Error::NotApplicable(format!("{name} is not an equilibrium of {}", v.name())));
    }
    let ev = Evaluator::new(v, params);
    let q = |s: &str| -> Result<ExactScalar> { ev.eval(s, &[]) };
    let strain_at = |j: usize, u: &ExactScalar| -> Result<(ExactScalar, ExactScalar)> {
        Ok((ev.eval(&strain(STRAIN_S, j), &[("U", u)])?, ev.eval(&strain(STRAIN_B, j), &[("U", u)])?))
    };
    let rational = Classification::Rational;
    let omega = v == Variant::OmegaPos;
    let eq = match name {
        "DFE" | "OSND" => ev.build(v, name, &[("x1", q(X0)?)], rational),
        "gOSN" | "E1g" | "E2g" | "EEg" => {
            let (x, u) = (q(X_HAT)?, q(U_HAT)?);
            let mut vals = vec![("x1", x), ("U", u.clone())];
            for (j, s, b) in [(1, "S1", "B1"), (2, "S2", "B2")] {
                let active = name == "EEg" || name == format!("E{j}g");
                if active {
                    let (sv, bv) = strain_at(j, &u)?;
                    vals.push((s, sv));
                    vals.push((b, bv));
                }
            }
            ev.build(v, name, &vals, rational)
        }
        "RFE" => ev.build(v, name, &[("x1", q(X_TILDE)?), ("U", q(U_TILDE)?), ("W", q(W_TILDE)?)], rational),
        "E1" | "E2" | "EE" if !omega => {
            let u = q(U_TILDE)?;
            let mut vals = vec![("x1", q(X_TILDE)?), ("U", u.clone()), ("W", q(W_TILDE)?)];
            for (j, s, b) in [(1, "S1", "B1"), (2, "S2", "B2")] {
                if name == "EE" || name == format!("E{j}") {
                    let (sv, bv) = strain_at(j, &u)?;
                    vals.push((s, sv));
                    vals.push((b, bv));
                }
            }
            ev.build(v, name, &vals, rational)
        }
        "E1" | "E2" => {
            let j = if name == "E1" { 1 } else { 2 };
            let [a, b, c] = e1_quadratic(j).map(|s| ev.rat(&s));
            let roots = quad_solve(&a?, &b?, &c?)?;
            let x_hat = q(X_HAT)?;
            let coords_for = |y: &ExactScalar| -> Result<Vec<(&'static str, ExactScalar)>> {
                let x1 = x_hat.try_add(y)?;
                let w = ev.eval("beta*x1/betaw - mun/betaw", &[("x1", &x1)])?;
                let u = ev.eval("(Lambda - mu*x1)/(beta*x1)", &[("x1", &x1)])?;
                let s = ev.eval(&strain("(U - mu/betaw)*(mun - beta*x1)/gamma{j}", j), &[("x1", &x1), ("U", &u)])?;
                let bj = ev.eval(&strain("gamma{j}*S{j}/mu{j}", j), &[(if j == 1 { "S1" } else { "S2" }, &s)])?;
                let r = ev.eval(&strain("gamma{j}*S{j}/omega", j), &[(if j == 1 { "S1" } else { "S2" }, &s)])?;
                let (sn, bn) = if j == 1 { ("S1", "B1") } else { ("S2", "B2") };
                Ok(vec![("x1", x1), ("U", u), ("W", w), (sn, s), (bn, bj), ("R", r)])
            };
            let y = pick_root(roots.roots(), |y| {
                let c = coords_for(y)?;
                Ok(positive(&c.iter().map(|(_, x)| x).collect::<Vec<_>>()))
            })?
            .ok_or_else(|| Error::NotApplicable(format!("{name} has no real root at this point")))?;
            let cls = classify(&y, &ev, &e1_quadratic(j), "y")?;
            ev.build(v, name, &coords_for(&y)?, cls)
        }
        "EE" => {
            let [a, b, c] = ee_quadratic().map(|s| ev.rat(&s));
            let roots = quad_solve(&a?, &b?, &c?)?;
            let coords_for = |x1: &ExactScalar| -> Result<Vec<(&'static str, ExactScalar)>> {
                let s1 = ev.eval(EE_S1, &[("x1", x1)])?;
                let s2 = ev.eval(EE_S2, &[("x1", x1)])?;
                let b1 = ev.eval("gamma1*S1/mu1", &[("S1", &s1)])?;
                let b2 = ev.eval("gamma2*S2/mu2", &[("S2", &s2)])?;
                let w = ev.eval("beta*x1/betaw - mun/betaw", &[("x1", x1)])?;
                let u = ev.eval("(Lambda - mu*x1)/(beta*x1)", &[("x1", x1)])?;
                let r = ev.eval("(gamma1*S1 + gamma2*S2)/omega", &[("S1", &s1), ("S2", &s2)])?;
                Ok(vec![("x1", x1.clone()), ("U", u), ("W", w), ("S1", s1), ("B1", b1), ("S2", s2), ("B2", b2), ("R", r)])
            };
            let x1 = pick_root(roots.roots(), |x| {
                let c = coords_for(x)?;
                Ok(positive(&c.iter().map(|(_, x)| x).collect::<Vec<_>>()))
            })?
            .ok_or_else(|| Error::NotApplicable("EE has no real root at this point".into()))?;
            let cls = classify(&x1, &ev, &ee_quadratic(), "x1")?;
            ev.build(v, name, &coords_for(&x1)?, cls)
        }
        _ => return Err(Error::NotApplicable(name.to_string())),
    };
    Ok(eq)
}

fn classify(root: &ExactScalar, ev: &Evaluator, abc: &[String; 3], var: &str) -> Result<Classification> {
    if root.is_rational() {
        return Ok(Classification::Rational);
    }
    let c: Vec<Rational> = abc.iter().map(|s| ev.rat(s)).collect::<Result<_>>()?;
    let lead = c[0].clone();
    let show = |k: &Rational| k / &lead;
    let poly = format!("{var}^2 + ({})*{var} + ({})", show(&c[1]), show(&c[2]));
    Ok(Classification::QuadraticRUR { poly, root: root.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::builtin::default_values;

    #[test]
    fn rfe_and_e1g_at_default_point() {
        let p = default_values(Variant::Omega0);
        let rfe = closed_form_oracle(Variant::Omega0, "RFE", &p).unwrap();
        assert_eq!(rfe.coords[..3], [rat(2, 3), rat(2, 1), rat(-2, 3)].map(ExactScalar::rational));
        let e1g = closed_form_oracle(Variant::Omega0, "E1g", &p).unwrap();
        assert_eq!(e1g.coords[3], ExactScalar::from_int(1));
        assert_eq!(e1g.coords[4], ExactScalar::from_int(1));
        assert!(matches!(closed_form_oracle(Variant::OmegaPos, "E1g", &p), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn solver_agrees_with_closed_forms() {
        for v in [Variant::Omega0, Variant::OmegaPos] {
            let m = builtin_variant(v);
            let p = default_values(v);
            let solver = super::super::EquilibriumSolver::new(&m).unwrap();
            for name in crate::builtin::equilibrium_names(v) {
                let face = m.parse_var_set(&equilibrium_face(v, name).unwrap().join(",")).unwrap();
                let got = solver.face_equilibria(&face).unwrap();
                let Ok(want) = closed_form_oracle(v, name, &p) else {
                    assert!(got.equilibria.iter().all(|e| e.name.as_deref() != Some(*name)), "{} {name}", v.name());
                    continue;
                };
                let hit = got.equilibria.iter().find(|e| e.coords == want.coords);
                assert!(hit.is_some(), "{} {name}: {:?} not in {:?}", v.name(), want.coords, got.equilibria);
                assert_eq!(hit.unwrap().name.as_deref(), Some(*name), "{} {name}", v.name());
            }
        }
    }

    #[test]
    fn printed_strain_formula_at_e1() {
        let v = Variant::OmegaPos;
        let p = default_values(v);
        let e1 = closed_form_oracle(v, "E1", &p).unwrap();
        let ev = Evaluator::new(v, &p);
        let printed = ev.eval(&e1_strain_formula(1), &[("x1", &e1.coords[0])]).unwrap();
        assert_eq!(printed, e1.coords[3]);
    }
}

//! The two online-social-network rumor models shipped with the crate, their
//! default parameter point, threshold quantities, and equilibrium names.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{rat, Rational};
use crate::error::{Error, Result};
use crate::model::{parse_model, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// No return flow from skeptics; seven variables.
    Omega0,
    /// Skeptics return to withdrawn users at rate omega; eight variables.
    OmegaPos,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Omega0 => "osn_omega0",
            Variant::OmegaPos => "osn_omega_pos",
        }
    }

    pub fn of_model(m: &Model) -> Option<Variant> {
        match m.name.as_str() {
            "osn_omega0" => Some(Variant::Omega0),
            "osn_omega_pos" => Some(Variant::OmegaPos),
            _ => None,
        }
    }
}

const STRAIN: &str = "S{j}' = beta{j}*B{j}*U/(B{j}*eps{j} + alpha{j}*U + 1) - gamma{j}*S{j}\nB{j}' = gamma{j}*S{j} - mu{j}*B{j}\n";

fn model_text(v: Variant) -> String {
    let omega = v == Variant::OmegaPos;
    let mut t = format!("# {}\n[variables]\nx1, U, W, S1, B1, S2, B2", v.name());
    if omega {
        t.push_str(", R");
    }
    t.push_str("\n[parameters]\nLambda, mu, beta, mun, betaw, beta1, beta2, alpha1, alpha2, eps1, eps2, gamma1, gamma2, mu1, mu2");
    if omega {
        t.push_str(", omega");
    }
    t.push_str("\n[equations]\nx1' = Lambda - mu*x1 - beta*x1*U\nU' = -U*(mun - beta*x1 + betaw*W)\n");
    t.push_str(if omega { "W' = betaw*U*W - mu*W + omega*R\n" } else { "W' = betaw*U*W - mu*W\n" });
    for j in ["1", "2"] {
        t.push_str(&STRAIN.replace("{j}", j));
    }
    if omega {
        t.push_str("R' = mu1*B1 + mu2*B2 - omega*R\n");
    }
    t.push_str("[values]\n");
    for (k, val) in default_values(v) {
        t.push_str(&format!("{k} = {val}\n"));
    }
    t.push_str("[metadata]\nkeep: x1\nngm U: U = beta*x1*U\n");
    if !omega {
        t.push_str("ngm W: W = betaw*U*W\n");
    } else {
        t.push_str("rank_one: W, R\n");
    }
    for j in ["1", "2"] {
        t.push_str(&"ngm S{j},B{j}: S{j} = beta{j}*B{j}*U/(B{j}*eps{j} + alpha{j}*U + 1)\n".replace("{j}", j));
    }
    t
}

/// The default parameter point: `Lambda = 2`, `betaw = 1/2`, `beta1 = 3`,
/// everything else 1, and `omega = 1/2` for the return-flow variant.
pub fn default_values(v: Variant) -> BTreeMap<String, Rational> {
    let mut m: BTreeMap<String, Rational> = [
        "mu", "beta", "mun", "beta2", "alpha1", "alpha2", "eps1", "eps2", "gamma1", "gamma2", "mu1", "mu2",
    ]
    .iter()
    .map(|k| (k.to_string(), Rational::one()))
    .collect();
    m.insert("Lambda".into(), rat(2, 1));
    m.insert("betaw".into(), rat(1, 2));
    m.insert("beta1".into(), rat(3, 1));
    if v == Variant::OmegaPos {
        m.insert("omega".into(), rat(1, 2));
    }
    m
}

pub fn builtin_variant(v: Variant) -> Model {
    parse_model(&model_text(v)).expect("builtin model text parses")
}

pub fn builtin_model(name: &str) -> Result<Model> {
    match name {
        "osn_omega0" => Ok(builtin_variant(Variant::Omega0)),
        "osn_omega_pos" => Ok(builtin_variant(Variant::OmegaPos)),
        _ => Err(Error::UnknownModel(name.to_string())),
    }
}

/// Threshold quantities of the OSN models at a parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    #[serde(serialize_with = "ser_rat")]
    pub r0: Rational,
    /// `1 + beta/betaw`, the withdrawal threshold on `r0`.
    #[serde(serialize_with = "ser_rat")]
    pub r0_withdrawal_threshold: Rational,
    /// `betaw * U_hat / mu`.
    #[serde(serialize_with = "ser_rat")]
    pub r0_w: Rational,
    #[serde(serialize_with = "ser_rat_vec")]
    pub r_gosn: Vec<Rational>,
    #[serde(serialize_with = "ser_rat_vec")]
    pub r_rfe: Vec<Rational>,
    #[serde(serialize_with = "ser_rat")]
    pub x0: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub x1_hat: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub u_hat: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub x1_tilde: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub u_tilde: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub w_tilde: Rational,
}

fn ser_rat<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_rat_vec<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&q.to_string())?;
    }
    seq.end()
}

/// Region membership of a parameter point, as strict comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Region {
    pub r0_gt_1: bool,
    pub r0_gt_withdrawal: bool,
    pub r1_gosn_gt_1: bool,
    pub r2_gosn_gt_1: bool,
    pub r1_rfe_gt_1: bool,
    pub r2_rfe_gt_1: bool,
}

/// Parameter lookup that reports the missing name.
pub struct Params<'a>(pub &'a BTreeMap<String, Rational>);

impl Params<'_> {
    pub fn get(&self, k: &str) -> Result<Rational> {
        self.0.get(k).cloned().ok_or_else(|| Error::MissingParameter(k.to_string()))
    }
}

/// `R_j(U) = beta_j U / (mu_j (1 + alpha_j U))`.
pub fn strain_reproduction(p: &BTreeMap<String, Rational>, j: usize, u: &Rational) -> Result<Rational> {
    let p = Params(p);
    let den = p.get(&format!("mu{j}"))? * (Rational::one() + p.get(&format!("alpha{j}"))? * u);
    if den.is_zero() {
        return Err(Error::DenominatorZero);
    }
    Ok(p.get(&format!("beta{j}"))? * u / den)
}

pub fn thresholds(p: &BTreeMap<String, Rational>) -> Result<Thresholds> {
    let g = Params(p);
    let (lambda, mu, beta, mun, betaw) = (g.get("Lambda")?, g.get("mu")?, g.get("beta")?, g.get("mun")?, g.get("betaw")?);
    if mu.is_zero() || beta.is_zero() || mun.is_zero() || betaw.is_zero() {
        return Err(Error::DenominatorZero);
    }
    let x0 = &lambda / &mu;
    let x1_hat = &mun / &beta;
    let u_hat = (&beta * &lambda - &mu * &mun) / (&beta * &mun);
    let r0 = &beta * &lambda / (&mu * &mun);
    let x1_tilde = &betaw * &lambda / (&mu * (&beta + &betaw));
    let u_tilde = &mu / &betaw;
    let w_tilde = &beta * (&x1_tilde - &x1_hat) / &betaw;
    Ok(Thresholds {
        r0_withdrawal_threshold: Rational::one() + &beta / &betaw,
        r0_w: &betaw * &u_hat / &mu,
        r_gosn: vec![strain_reproduction(p, 1, &u_hat)?, strain_reproduction(p, 2, &u_hat)?],
        r_rfe: vec![strain_reproduction(p, 1, &u_tilde)?, strain_reproduction(p, 2, &u_tilde)?],
        r0,
        x0,
        x1_hat,
        u_hat,
        x1_tilde,
        u_tilde,
        w_tilde,
    })
}

impl Thresholds {
    pub fn region(&self) -> Region {
        let one = Rational::one();
        Region {
            r0_gt_1: self.r0 > one,
            r0_gt_withdrawal: self.r0 > self.r0_withdrawal_threshold,
            r1_gosn_gt_1: self.r_gosn[0] > one,
            r2_gosn_gt_1: self.r_gosn[1] > one,
            r1_rfe_gt_1: self.r_rfe[0] > one,
            r2_rfe_gt_1: self.r_rfe[1] > one,
        }
    }
}

/// Names of the equilibria of a variant, in table order.
pub fn equilibrium_names(v: Variant) -> &'static [&'static str] {
    match v {
        Variant::Omega0 => &["DFE", "gOSN", "E1g", "E2g", "EEg", "RFE", "E1", "E2", "EE"],
        Variant::OmegaPos => &["OSND", "gOSN", "RFE", "E1", "E2", "EE"],
    }
}

/// Zero set of a named equilibrium, as variable names.
pub fn equilibrium_face(v: Variant, name: &str) -> Option<&'static [&'static str]> {
    let strains: &[&str] = &["S1", "B1", "S2", "B2"];
    Some(match (v, name) {
        (Variant::Omega0, "DFE") => &["U", "W", "S1", "B1", "S2", "B2"],
        (Variant::Omega0, "gOSN") => &["W", "S1", "B1", "S2", "B2"],
        (Variant::Omega0, "E1g") => &["W", "S2", "B2"],
        (Variant::Omega0, "E2g") => &["W", "S1", "B1"],
        (Variant::Omega0, "EEg") => &["W"],
        (Variant::Omega0, "RFE") => strains,
        (Variant::OmegaPos, "OSND") => &["U", "S1", "B1", "S2", "B2"],
        (Variant::OmegaPos, "gOSN") | (Variant::OmegaPos, "RFE") => strains,
        (_, "E1") => &["S2", "B2"],
        (_, "E2") => &["S1", "B1"],
        (_, "EE") => &[],
        _ => return None,
    })
}

/// Names an equilibrium of a builtin model from its zero pattern. On the
/// rumor-free face of the return-flow variant, `gOSN` and `RFE` share a
/// face and differ by whether `W` vanishes.
pub fn label_equilibrium(m: &Model, zero_set: &[usize], w_is_zero: bool) -> Option<String> {
    let v = Variant::of_model(m)?;
    let mut names: Vec<&str> = zero_set.iter().map(|&i| m.variables[i].as_str()).collect();
    names.sort_unstable();
    for &name in equilibrium_names(v) {
        let mut face: Vec<&str> = equilibrium_face(v, name)?.to_vec();
        face.sort_unstable();
        if face == names {
            if v == Variant::OmegaPos && (name == "gOSN" || name == "RFE") {
                return Some(if w_is_zero { "gOSN" } else { "RFE" }.to_string());
            }
            return Some(name.to_string());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let m = builtin_model("osn_omega_pos").unwrap();
        assert_eq!(m.variables.len(), 8);
        assert_eq!(m.parameters.len(), 16);
        assert!(m.missing_parameters().is_empty());
        let z = builtin_model("osn_omega0").unwrap();
        assert_eq!(z.variables.len(), 7);
        assert!(!z.parameters.contains(&"omega".to_string()));
        assert_eq!(builtin_model("sir"), Err(Error::UnknownModel("sir".into())));
    }

    #[test]
    fn default_point_thresholds() {
        let t = thresholds(&default_values(Variant::Omega0)).unwrap();
        assert_eq!(t.r0, rat(2, 1));
        assert_eq!(t.r0_withdrawal_threshold, rat(3, 1));
        assert_eq!(t.u_hat, rat(1, 1));
        assert_eq!(t.r_gosn, vec![rat(3, 2), rat(1, 2)]);
        assert_eq!(t.r0_w, rat(1, 2));
        assert_eq!((t.x1_tilde.clone(), t.u_tilde.clone(), t.w_tilde.clone()), (rat(2, 3), rat(2, 1), rat(-2, 3)));
    }
}

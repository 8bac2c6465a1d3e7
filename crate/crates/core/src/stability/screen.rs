//! Structural screens on the symbolic Jacobian: block triangular structure,
//! Hopf impossibility, and the zero mixed block on invariant faces.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{jacobian, scc_blocks};
use crate::algebra::{hurwitz_test, DecideSign, ExactMatrix, HurwitzVerdict, Matrix, Monomial, RatFunc, Rational, Sign};
use crate::error::{Error, Result};
use crate::expr::parse_expr;
use crate::model::Model;
use crate::network::{extract_network, minimal_siphons, verify_face_invariance};

/// Blocks above this size are not run through symbolic Routh-Hurwitz.
const MAX_SYMBOLIC_BLOCK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HopfFlag {
    Impossible,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockInfo {
    pub vars: Vec<usize>,
    pub names: Vec<String>,
    pub trace_sign: Option<Sign>,
    pub hopf_impossible: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreenReport {
    /// Finest block lower-triangular partition, upstream blocks first.
    pub blocks: Vec<BlockInfo>,
    pub hopf: HopfFlag,
    /// Metzler flag of each minimal siphon's transversal block on its face.
    pub transversal_metzler: Vec<(Vec<String>, Option<bool>)>,
    /// Every transversal block is Metzler, so no invasion can start with a
    /// complex pair.
    pub hopf_relay_impossible: bool,
}

/// `f / x_v` when `x_v` factors out of `f`.
fn lv_factor(f: &RatFunc, v: usize) -> Option<RatFunc> {
    let content = f.num().monomial_content();
    if content.exp(v) == 0 {
        return None;
    }
    let mut e = vec![0u32; v + 1];
    e[v] = 1;
    RatFunc::new(f.num().div_monomial(&Monomial::from_exponents(e)), f.den().clone()).ok()
}

/// Jacobian rows of `block` on one Lotka-Volterra branch: variables in
/// `zero` vanish, variables in `cancel` have their cofactor set to zero.
fn branch_block(rhs: &[RatFunc], block: &[usize], zero: &[usize], cancel: &[usize]) -> Result<(Vec<usize>, Matrix<RatFunc>)> {
    let keep: Vec<usize> = block.iter().copied().filter(|v| !zero.contains(v)).collect();
    let zeros: BTreeMap<usize, Rational> = zero.iter().map(|&v| (v, Rational::zero())).collect();
    let k = keep.len();
    let mut m = Matrix::zeros(k, k);
    for (r, &i) in keep.iter().enumerate() {
        for (c, &j) in keep.iter().enumerate() {
            let d = if cancel.contains(&i) {
                let g = lv_factor(&rhs[i], i).expect("Lotka-Volterra variable");
                RatFunc::var(i) * g.differentiate(j)
            } else {
                rhs[i].differentiate(j)
            };
            m.set(r, c, d.substitute_values(&zeros)?);
        }
    }
    Ok((keep, m))
}

/// No purely imaginary pair can occur in this symbolic block.
fn block_hopf_free(m: &Matrix<RatFunc>) -> std::result::Result<&'static str, String> {
    match m.rows() {
        0 | 1 => return Ok("real eigenvalue"),
        2 if m.trace().decide_sign() == Some(Sign::Negative) => return Ok("negative trace"),
        n if n > MAX_SYMBOLIC_BLOCK => return Err(format!("{n}x{n} block not screened symbolically")),
        _ => {}
    }
    let p = m.char_poly().map_err(|e| e.to_string())?;
    match hurwitz_test(&p) {
        Ok(HurwitzVerdict::Hurwitz) => Ok("identically Hurwitz"),
        Ok(v) => Err(format!("Routh-Hurwitz gives {v:?}")),
        Err(e) => Err(e.to_string()),
    }
}

pub fn block_structure_screen(m: &Model) -> Result<ScreenReport> {
    let jac = jacobian(m).full;
    let rhs = m.rhs();
    let mut blocks = Vec::new();
    for block in scc_blocks(&jac) {
        let trace_sign = jac.principal(&block).trace().decide_sign();
        let lv: Vec<usize> = block.iter().copied().filter(|&v| lv_factor(&rhs[v], v).is_some()).collect();
        let mut ok = true;
        let mut reasons = Vec::new();
        if lv.len() > 8 {
            ok = false;
            reasons.push("too many Lotka-Volterra branches".to_string());
        } else {
            for mask in 0u32..(1 << lv.len()) {
                let zero: Vec<usize> = (0..lv.len()).filter(|b| mask >> b & 1 == 1).map(|b| lv[b]).collect();
                let cancel: Vec<usize> = lv.iter().copied().filter(|v| !zero.contains(v)).collect();
                let (_, sub) = branch_block(&rhs, &block, &zero, &cancel)?;
                match block_hopf_free(&sub) {
                    Ok(r) => {
                        if !reasons.iter().any(|x| x == r) {
                            reasons.push(r.to_string());
                        }
                    }
                    Err(r) => {
                        ok = false;
                        if zero.is_empty() {
                            reasons.push(r.to_string());
                        } else {
                            reasons.push(format!("branch {} = 0: {r}", m.format_set(&zero)));
                        }
                        break;
                    }
                }
            }
        }
        blocks.push(BlockInfo {
            names: block.iter().map(|&i| m.variables[i].clone()).collect(),
            vars: block,
            trace_sign,
            hopf_impossible: ok,
            reason: reasons.join("; "),
        });
    }
    let hopf = if blocks.iter().all(|b| b.hopf_impossible) { HopfFlag::Impossible } else { HopfFlag::Inconclusive };

    let mut transversal_metzler = Vec::new();
    if let Ok(rn) = extract_network(m) {
        for s in minimal_siphons(&rn) {
            let zeros: BTreeMap<usize, Rational> = s.members.iter().map(|&v| (v, Rational::zero())).collect();
            let block = jac.principal(&s.members).try_map(|f| f.substitute_values(&zeros))?;
            let names = s.members.iter().map(|&i| m.variables[i].clone()).collect();
            transversal_metzler.push((names, block.is_metzler()));
        }
    }
    let hopf_relay_impossible = !transversal_metzler.is_empty() && transversal_metzler.iter().all(|(_, f)| *f == Some(true));
    Ok(ScreenReport { blocks, hopf, transversal_metzler, hopf_relay_impossible })
}

/// The rows `face` against the columns off `face` vanish exactly.
pub fn face_block_is_zero(j: &ExactMatrix, face: &[usize]) -> bool {
    face.iter().all(|&i| (0..j.cols()).filter(|c| !face.contains(c)).all(|c| j.get(i, c).is_zero()))
}

/// Checks that `D_y f_x` vanishes on the face `x = 0`, symbolically and at
/// `samples` random positive points.
pub fn verify_face_block_theorem(m: &Model, face: &[usize], samples: usize) -> Result<bool> {
    if !verify_face_invariance(m, face) {
        return Err(Error::Precondition(format!("face {} is not forward invariant", m.format_set(face))));
    }
    let rhs = m.rhs();
    let n = m.n();
    let zeros: BTreeMap<usize, Rational> = face.iter().map(|&v| (v, Rational::zero())).collect();
    let others: Vec<usize> = (0..n).filter(|v| !face.contains(v)).collect();
    let mut mixed = Vec::new();
    for &i in face {
        for &j in &others {
            let d = rhs[i].differentiate(j).substitute_values(&zeros)?;
            if !d.num().is_zero() {
                return Ok(false);
            }
            mixed.push(rhs[i].differentiate(j));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let ring = n + m.parameters.len();
    for _ in 0..samples {
        let point: Vec<Rational> = (0..ring)
            .map(|i| {
                if face.contains(&i) {
                    Rational::zero()
                } else {
                    Rational::new(rng.gen_range(1..=40).into(), rng.gen_range(1..=12).into())
                }
            })
            .collect();
        for d in &mixed {
            match d.evaluate::<Rational>(&|i| point.get(i).cloned()) {
                Ok(v) if !v.is_zero() => return Ok(false),
                _ => {}
            }
        }
    }
    Ok(true)
}

/// The platform block `(x1, U, W)` at points where `U` and `W` are at their
/// nonzero equilibrium branch, with its Routh-Hurwitz surplus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlatformCubic {
    /// `a1, a2, a3` of `lambda^3 + a1 lambda^2 + a2 lambda + a3`.
    pub coeffs: Vec<String>,
    pub surplus: String,
    pub coeffs_match: bool,
    pub surplus_matches: bool,
}

pub fn platform_cubic(m: &Model) -> Result<PlatformCubic> {
    let names = m.symbols();
    let idx = |s: &str| m.var_index(s).ok_or_else(|| Error::Precondition(format!("model has no variable {s}")));
    let block = vec![idx("x1")?, idx("U")?, idx("W")?];
    let rhs = m.rhs();
    let cancel = [block[1], block[2]];
    if cancel.iter().any(|&v| lv_factor(&rhs[v], v).is_none()) {
        return Err(Error::Precondition("U and W must factor out of their own equations".into()));
    }
    let (_, j) = branch_block(&rhs, &block, &[], &cancel)?;
    let p = j.char_poly()?;
    let (a1, a2, a3) = (p.coeff(2), p.coeff(1), p.coeff(0));
    let surplus = a1.clone() * a2.clone() - a3.clone();
    let e = |s: &str| parse_expr(s, &names);
    let want = [e("mu + beta*U")?, e("betaw^2*U*W + beta^2*x1*U")?, e("(mu + beta*U)*betaw^2*U*W")?];
    let coeffs_match = [&a1, &a2, &a3].iter().zip(&want).all(|(a, w)| *a == w);
    let surplus_matches = surplus == e("(mu + beta*U)*beta^2*x1*U")?;
    Ok(PlatformCubic {
        coeffs: [a1, a2, a3].iter().map(|c| c.display_with(&names)).collect(),
        surplus: surplus.display_with(&names),
        coeffs_match,
        surplus_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin_model;
    use crate::model::parse_model;

    #[test]
    fn omega0_partition_is_hopf_free() {
        let m = builtin_model("osn_omega0").unwrap();
        let r = block_structure_screen(&m).unwrap();
        let parts: Vec<Vec<String>> = r.blocks.iter().map(|b| b.names.clone()).collect();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], vec!["x1", "U", "W"]);
        assert!(parts.contains(&vec!["S1".to_string(), "B1".to_string()]));
        assert_eq!(r.hopf, HopfFlag::Impossible, "{:?}", r.blocks);
        assert!(r.hopf_relay_impossible);
    }

    #[test]
    fn omega_pos_is_one_block() {
        let m = builtin_model("osn_omega_pos").unwrap();
        let r = block_structure_screen(&m).unwrap();
        assert_eq!(r.blocks.len(), 1);
        assert_eq!(r.hopf, HopfFlag::Inconclusive);
    }

    #[test]
    fn diagonal_system() {
        let m = parse_model("[variables]\nx, y\n[equations]\nx' = -x\ny' = -2*y\n").unwrap();
        let r = block_structure_screen(&m).unwrap();
        assert_eq!(r.blocks.len(), 2);
        assert_eq!(r.hopf, HopfFlag::Impossible);
    }

    #[test]
    fn platform_surplus() {
        let m = builtin_model("osn_omega0").unwrap();
        let c = platform_cubic(&m).unwrap();
        assert!(c.coeffs_match && c.surplus_matches, "{c:?}");
    }

    #[test]
    fn face_theorem() {
        let m = builtin_model("osn_omega_pos").unwrap();
        let f = m.parse_var_set("S1,B1").unwrap();
        assert!(verify_face_block_theorem(&m, &f, 5).unwrap());
        assert!(matches!(verify_face_block_theorem(&m, &m.parse_var_set("S1").unwrap(), 5), Err(Error::Precondition(_))));
        let xy = parse_model("[variables]\nx, y\n[equations]\nx' = x*y\ny' = -y\n").unwrap();
        assert!(verify_face_block_theorem(&xy, &[0], 3).unwrap());
    }
}

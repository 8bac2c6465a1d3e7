//! Acceptance criteria, one pass/fail line each. Every decision is exact
//! unless a tolerance is named next to it.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use nalgebra::DMatrix;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crnrelay::algebra::{metzler_sign, ExactMatrix, ExactScalar, HurwitzVerdict, Matrix, RatFunc, Rational, Sign};
use crnrelay::builtin::{builtin_variant, default_values, equilibrium_names, thresholds, Thresholds, Variant};
use crnrelay::equilibria::{closed_form_oracle, e1_quadratic, symbolic_face_branches, BranchEnd, FaceEquilibrium};
use crnrelay::expr::parse_expr;
use crnrelay::model::Model;
use crnrelay::network::{extract_network, minimal_siphons};
use crnrelay::relay::{RelayContext, StrictVerdict};
use crnrelay::stability::{
    block_structure_screen, face_block_is_zero, invasion_number, jacobian, las_test, matrix_hurwitz, platform_cubic,
    rank_one_bound, split_with_f, tangential_block, HopfFlag, LasVerdict,
};

/// Floating tolerance for the spectral-abscissa comparison.
const ALPHA_TOL: f64 = 1e-6;
const CLOSED_FORM_POINTS: usize = 25;
const RELAY_POINTS: usize = 200;
const SIGN_MATRICES: usize = 500;
const E1_POINTS: usize = 50;
const RANK_ONE_MATRICES: usize = 50;

type Point = BTreeMap<String, Rational>;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn random_point(v: Variant, rng: &mut ChaCha8Rng, num: i64, den: i64) -> Point {
    default_values(v).into_keys().map(|k| (k, rat(rng.gen_range(1..=num), rng.gen_range(1..=den)))).collect()
}

fn model_at(v: Variant, p: &Point) -> Model {
    builtin_variant(v).with_values(p).expect("complete parameter point")
}

fn names(m: &Model, vars: &[usize]) -> BTreeSet<String> {
    vars.iter().map(|&i| m.variables[i].clone()).collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn gt1(q: &Rational) -> bool {
    q > &Rational::one()
}

fn all_equilibria(ctx: &RelayContext) -> Vec<FaceEquilibrium> {
    ctx.lattice.faces().iter().flat_map(|f| ctx.face(f).equilibria).collect()
}

/// The existing equilibrium carrying `name`, else any one carrying it.
/// Quadratic faces can hold one admissible and one spurious root.
fn named(ctx: &RelayContext, name: &str) -> Option<FaceEquilibrium> {
    let all: Vec<FaceEquilibrium> = all_equilibria(ctx).into_iter().filter(|e| e.name.as_deref() == Some(name)).collect();
    all.iter().find(|e| ctx.solver.positivity_check(e).exists).or(all.first()).cloned()
}

fn exists(ctx: &RelayContext, e: &Option<FaceEquilibrium>) -> bool {
    e.as_ref().is_some_and(|e| ctx.solver.positivity_check(e).exists)
}

/// An invasion number read at gOSN only counts when gOSN exists.
fn invades_gosn(t: &Thresholds, j: usize) -> bool {
    gt1(&t.r0) && gt1(&t.r_gosn[j])
}

fn report(out: &mut Vec<(usize, bool)>, n: usize, ok: bool, detail: String) {
    let mut err = std::io::stderr();
    let _ = writeln!(err, "criterion {n:>2}: {} | {detail}", if ok { "PASS" } else { "FAIL" });
    out.push((n, ok));
}

fn minimal_siphon_sets() -> (bool, String) {
    let want_pos = vec![set(&["U"]), set(&["S1", "B1"]), set(&["S2", "B2"])];
    let mut want_zero = want_pos.clone();
    want_zero.push(set(&["W"]));
    let mut ok = true;
    let mut detail = Vec::new();
    for (v, want) in [(Variant::OmegaPos, want_pos), (Variant::Omega0, want_zero)] {
        let m = builtin_variant(v);
        let got: BTreeSet<BTreeSet<String>> =
            minimal_siphons(&extract_network(&m).unwrap()).iter().map(|s| names(&m, &s.members)).collect();
        let want: BTreeSet<BTreeSet<String>> = want.into_iter().collect();
        ok &= got == want;
        detail.push(format!("{}: {:?}", v.name(), got));
    }
    (ok, detail.join("; "))
}

fn closed_forms() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut checked, mut coincident, mut degenerate) = (0, 0, 0);
    let mut bad = Vec::new();
    for _ in 0..CLOSED_FORM_POINTS {
        for v in [Variant::Omega0, Variant::OmegaPos] {
            let p = random_point(v, &mut rng, 12, 4);
            let ctx = RelayContext::new(&model_at(v, &p)).unwrap();
            let list: &[&str] = match v {
                Variant::Omega0 => equilibrium_names(v),
                Variant::OmegaPos => &["OSND", "gOSN", "RFE"],
            };
            for &name in list {
                let want = match closed_form_oracle(v, name, &p) {
                    Ok(e) => e,
                    Err(e) => {
                        bad.push(format!("{name}: oracle error {e}"));
                        continue;
                    }
                };
                if !ctx.solver.is_equilibrium(&want.coords) {
                    // strain rows divide by U, which vanishes when R0 = 1
                    degenerate += 1;
                    continue;
                }
                checked += 1;
                match named(&ctx, name) {
                    Some(got) if got.coords == want.coords => {}
                    // on a threshold two rows collapse into one point that carries one name
                    _ if all_equilibria(&ctx).iter().any(|e| e.coords == want.coords) => coincident += 1,
                    got => bad.push(format!("{} {name} at {p:?}: got {:?}", v.name(), got.map(|g| g.coords))),
                }
            }
        }
    }
    (bad.is_empty(), format!(
            "{checked} coordinate vectors compared ({coincident} on a threshold, matched under another name; {degenerate} closed forms not an equilibrium there), {} mismatches {:?}",
            bad.len(),
            bad.first()
        ))
}

/// The existence-table rows for the seven-variable model. Existence of a row also
/// requires its relay predecessor to exist; both strain rows of the
/// coexistence equilibria need their strain to invade, so `EEg` and `EE`
/// use the minimum of the two invasion numbers.
fn table_one(t: &Thresholds) -> BTreeMap<&'static str, (bool, bool)> {
    let r0 = gt1(&t.r0);
    let w = t.r0 > t.r0_withdrawal_threshold;
    let (g1, g2) = (gt1(&t.r_gosn[0]), gt1(&t.r_gosn[1]));
    let (r1, r2) = (gt1(&t.r_rfe[0]), gt1(&t.r_rfe[1]));
    let mut rows = BTreeMap::new();
    rows.insert("DFE", (true, !r0));
    rows.insert("gOSN", (r0, r0 && !g1 && !g2 && !w));
    rows.insert("E1g", (r0 && g1, r0 && g1 && !g2 && !w));
    rows.insert("E2g", (r0 && g2, r0 && g2 && !g1 && !w));
    rows.insert("EEg", (r0 && g1 && g2, r0 && g1 && g2 && !w));
    rows.insert("RFE", (w, w && !r1 && !r2));
    rows.insert("E1", (w && r1, w && r1 && !r2));
    rows.insert("E2", (w && r2, w && r2 && !r1));
    rows.insert("EE", (w && r1 && r2, w && r1 && r2));
    rows
}

fn pattern(t: &Thresholds) -> Option<[bool; 6]> {
    let one = Rational::one();
    let cmp = [&t.r0, &t.r_gosn[0], &t.r_gosn[1], &t.r_rfe[0], &t.r_rfe[1]];
    if cmp.iter().any(|q| **q == one) || t.r0 == t.r0_withdrawal_threshold {
        return None;
    }
    Some([gt1(&t.r0), t.r0 > t.r0_withdrawal_threshold, gt1(&t.r_gosn[0]), gt1(&t.r_gosn[1]), gt1(&t.r_rfe[0]), gt1(&t.r_rfe[1])])
}

fn table_one_regions() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut regions: BTreeMap<[bool; 6], Point> = BTreeMap::new();
    for i in 0..20_000 {
        let (num, den) = if i % 2 == 0 { (12, 4) } else { (40, 10) };
        let p = random_point(Variant::Omega0, &mut rng, num, den);
        if let Some(k) = thresholds(&p).ok().as_ref().and_then(pattern) {
            regions.entry(k).or_insert(p);
        }
    }
    let mut bad = Vec::new();
    let mut literal_max = 0;
    for (k, p) in &regions {
        let m = model_at(Variant::Omega0, p);
        let t = thresholds(p).unwrap();
        let ctx = RelayContext::new(&m).unwrap();
        for (name, (want_exists, want_las)) in table_one(&t) {
            let e = named(&ctx, name);
            let got_exists = exists(&ctx, &e);
            let las = if got_exists { las_test(&m, e.as_ref().unwrap()).verdict } else { LasVerdict::Unstable };
            if got_exists != want_exists || (las == LasVerdict::LAS) != want_las {
                bad.push(format!("{name} region {k:?}: exists {got_exists} las {las:?}, table ({want_exists}, {want_las})"));
            }
        }
        // the literal "max" reading of the coexistence rows
        let g_max = t.r0 > Rational::one() && (gt1(&t.r_gosn[0]) || gt1(&t.r_gosn[1]));
        if g_max != exists(&ctx, &named(&ctx, "EEg")) {
            literal_max += 1;
        }
    }
    (
        bad.is_empty(),
        format!(
            "{} realizable regions found, {} row mismatches {:?}; literal max-reading of EEg disagrees in {literal_max} regions",
            regions.len(),
            bad.len(),
            bad.first()
        ),
    )
}

fn relay_pair_identity() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut detail = Vec::new();
    let mut ok = true;
    for v in [Variant::Omega0, Variant::OmegaPos] {
        let (mut tested, mut skipped) = (0, 0);
        let mut counter: Vec<String> = Vec::new();
        for _ in 0..RELAY_POINTS {
            let p = random_point(v, &mut rng, 12, 4);
            let m = model_at(v, &p);
            let ctx = RelayContext::new(&m).unwrap();
            for face in ctx.lattice.faces() {
                let residents = ctx.residents(&face);
                for cover in ctx.lattice.covers_from(&face) {
                    for e in &residents {
                        let h2 = tangential_block(&m, &cover.sigma, e).ok().and_then(|t| matrix_hurwitz(&t));
                        let abscissa = invasion_number(&m, &cover.sigma, e, None).map(|r| r.abscissa_sign);
                        let (Some(HurwitzVerdict::Hurwitz), Ok(a)) = (h2, abscissa) else {
                            skipped += 1;
                            continue;
                        };
                        if a == Sign::Zero {
                            skipped += 1;
                            continue;
                        }
                        tested += 1;
                        let successor = ctx
                            .residents(&cover.lower)
                            .iter()
                            .any(|s| cover.sigma.iter().all(|&i| s.coords[i].sign() == Sign::Positive));
                        if (a == Sign::Positive) != successor {
                            let t = thresholds(&p).unwrap();
                            counter.push(format!(
                                "{} via {:?}: abscissa {a:?}, successor {successor}, R0={} R(gOSN)={:?} R(RFE)={:?}",
                                e.label(&m),
                                names(&m, &cover.sigma),
                                t.r0,
                                t.r_gosn.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                                t.r_rfe.iter().map(|q| q.to_string()).collect::<Vec<_>>()
                            ));
                        }
                    }
                }
            }
        }
        ok &= counter.is_empty();
        let kinds: BTreeSet<String> = counter.iter().map(|c| c.split(':').next().unwrap().to_string()).collect();
        detail.push(format!(
            "{}: {tested} resident-cover pairs with (H2), {skipped} skipped, {} counterexamples {:?} first {:?}",
            v.name(),
            counter.len(),
            kinds,
            counter.first()
        ));
    }
    (ok, detail.join("; "))
}

fn to_f64(a: &ExactMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j).as_rational().unwrap().to_f64().unwrap())
}

fn sign_equivalence() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut compared, mut skipped, mut bad) = (0, 0, Vec::new());
    let q = |r: Rational| ExactScalar::rational(r);
    for _ in 0..SIGN_MATRICES {
        let n = rng.gen_range(1..=5);
        let mut f: ExactMatrix = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(0.5) {
                    f.set(i, j, q(rat(rng.gen_range(1..=9), rng.gen_range(1..=4))));
                }
            }
        }
        let off: Vec<Vec<Rational>> =
            (0..n).map(|i| (0..n).map(|j| if i != j && rng.gen_bool(0.4) { rat(rng.gen_range(1..=5), 4) } else { Rational::zero() }).collect()).collect();
        let margin: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(1..=8), rng.gen_range(1..=4))).collect();
        let v: ExactMatrix = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                q(off[i].iter().cloned().sum::<Rational>() + margin[i].clone())
            } else {
                q(-off[i][j].clone())
            }
        });
        let m = f.sub(&v);
        if split_with_f(&m, f.clone(), Vec::new()).is_err() {
            skipped += 1;
            continue;
        }
        let exact = metzler_sign(&m).unwrap();
        let mf = to_f64(&m);
        let alpha = mf.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        if alpha.abs() <= ALPHA_TOL {
            skipped += 1;
            continue;
        }
        let k = to_f64(&f) * to_f64(&v).try_inverse().unwrap();
        let rho = k.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        compared += 1;
        let float_sign = if rho > 1.0 { Sign::Positive } else { Sign::Negative };
        if exact != float_sign || (alpha > 0.0) != (exact == Sign::Positive) {
            bad.push(format!("n={n} exact {exact:?} alpha {alpha} rho {rho}"));
        }
    }
    (bad.is_empty(), format!("{compared} compared, {skipped} skipped (|alpha| <= {ALPHA_TOL} or invalid splitting), {} mismatches {:?}", bad.len(), bad.first()))
}

fn hopf_screen() -> (bool, String) {
    let m = builtin_variant(Variant::Omega0);
    let r = block_structure_screen(&m).unwrap();
    let got: BTreeSet<BTreeSet<String>> = r.blocks.iter().map(|b| b.names.iter().cloned().collect()).collect();
    let want: BTreeSet<BTreeSet<String>> = [set(&["x1", "U", "W"]), set(&["S1", "B1"]), set(&["S2", "B2"])].into_iter().collect();
    let cubic = platform_cubic(&m).unwrap();
    let ok = got == want && r.hopf == HopfFlag::Impossible && cubic.coeffs_match && cubic.surplus_matches;
    (ok, format!("partition {got:?}, hopf {:?}, cubic coefficients {}, surplus {} matches {}", r.hopf, cubic.coeffs_match, cubic.surplus, cubic.surplus_matches))
}

fn e1_quadratics() -> (bool, String) {
    let m = builtin_variant(Variant::OmegaPos);
    let syms = m.symbols();
    let x1 = m.var_index("x1").unwrap();
    let face = m.parse_var_set("S2,B2").unwrap();
    let [a, b, c] = e1_quadratic(1);
    let target = parse_expr(&format!("({a})*x1^2 + ({b})*x1 + ({c})"), &syms).unwrap();
    let shift = BTreeMap::from([(x1, RatFunc::var(x1) + parse_expr("mun/beta", &syms).unwrap())]);
    let mut symbolic = false;
    for br in symbolic_face_branches(&m, &face).unwrap() {
        if let BranchEnd::Univariate(v, poly) = &br.end {
            if *v != x1 {
                continue;
            }
            let shifted = RatFunc::from_poly(poly.clone()).substitute(&shift).unwrap();
            let ratio = shifted / target.clone();
            symbolic |= ratio.differentiate(x1).num().is_zero();
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut agree, mut predicted, mut logged, mut misses) = (0, 0, Vec::new(), Vec::new());
    for _ in 0..E1_POINTS {
        let p = random_point(Variant::OmegaPos, &mut rng, 12, 4);
        let m = model_at(Variant::OmegaPos, &p);
        let t = thresholds(&p).unwrap();
        let ctx = RelayContext::new(&m).unwrap();
        let e1 = named(&ctx, "E1");
        if exists(&ctx, &e1) == invades_gosn(&t, 0) {
            agree += 1;
        } else {
            misses.push(format!(
                "E1 exists {} with R1(gOSN)={} R0W={} R1(RFE)={}",
                exists(&ctx, &e1),
                t.r_gosn[0],
                t.r0_w,
                t.r_rfe[0]
            ));
        }
        for (j, name) in [(0, "E1"), (1, "E2")] {
            let e = named(&ctx, name);
            if !exists(&ctx, &e) {
                continue;
            }
            predicted += 1;
            let las = las_test(&m, e.as_ref().unwrap()).verdict;
            let prediction = !invades_gosn(&t, 1 - j);
            if (las == LasVerdict::LAS) != prediction {
                logged.push(format!("{name}: {las:?}, predicted LAS {prediction}"));
            }
        }
    }
    if !logged.is_empty() {
        let _ = writeln!(std::io::stderr(), "  strain-equilibrium stability differs from the prediction: {logged:?}");
    }
    (
        symbolic && agree == E1_POINTS,
        format!(
            "symbolic match {symbolic}; existence agrees with R0 > 1 and R1(gOSN) > 1 at {agree}/{E1_POINTS} {misses:?}; stability predictions compared {predicted}, disagreements logged {}",
            logged.len()
        ),
    )
}

fn rank_one() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut cases, mut bad) = (0, Vec::new());
    let q = |r: Rational| ExactScalar::rational(r);
    while cases < RANK_ONE_MATRICES {
        let n = rng.gen_range(2..=6);
        let off: Vec<Vec<Rational>> =
            (0..n).map(|i| (0..n).map(|j| if i != j && rng.gen_bool(0.5) { rat(rng.gen_range(1..=6), 3) } else { Rational::zero() }).collect()).collect();
        let margin: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(1..=6), rng.gen_range(1..=3))).collect();
        let a: ExactMatrix = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                q(-(off[i].iter().cloned().sum::<Rational>() + margin[i].clone()))
            } else {
                q(off[i][j].clone())
            }
        });
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let gain = -a.inverse().unwrap().unwrap().get(v, u).as_rational().unwrap().clone();
        if gain.is_zero() {
            continue;
        }
        let scale = rat(rng.gen_range(1..=99), 100);
        let kappa = if rng.gen_bool(0.5) { scale / gain } else { -scale / gain };
        let r = rank_one_bound(&a, u, v, &kappa).unwrap();
        cases += 1;
        if r.bound_holds != Some(true) || r.j_hurwitz != Some(HurwitzVerdict::Hurwitz) || !r.identity_checks.iter().all(|(_, ok)| *ok) {
            bad.push(format!("n={n} ({u},{v}) kappa={kappa}: {r:?}"));
        }
    }

    // gOSN of the return-flow model with the W <- R coupling removed
    let mut gosn = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut stable_seen = 0;
    for _ in 0..20 {
        let p = random_point(Variant::OmegaPos, &mut rng, 12, 4);
        let m = model_at(Variant::OmegaPos, &p);
        let ctx = RelayContext::new(&m).unwrap();
        let Some(e) = named(&ctx, "gOSN").filter(|e| ctx.solver.positivity_check(e).exists) else { continue };
        let (w, r) = (m.var_index("W").unwrap(), m.var_index("R").unwrap());
        let j = jacobian(&m).at(&m, &e.coords).unwrap();
        let omega = p["omega"].clone();
        let mut a = j.clone();
        a.set(w, r, j.get(w, r).clone() - q(omega.clone()));
        let Some(ainv) = a.inverse().unwrap() else { continue };
        let gain = -ainv.get(r, w).clone();
        let bound = (q(omega.clone()) * gain.clone() - ExactScalar::one()).sign() == Sign::Negative;
        let a_hurwitz = matrix_hurwitz(&a) == Some(HurwitzVerdict::Hurwitz);
        let las = las_test(&m, &e).verdict == LasVerdict::LAS;
        stable_seen += las as usize;
        if a_hurwitz && bound && !las {
            bad.push(format!("gOSN at {p:?}: bound holds, A Hurwitz, las_test not LAS"));
        }
        gosn.push(format!("{}:{}", gain, if a.is_metzler() == Some(true) { "M" } else { "nM" }));
    }
    let gosn: BTreeSet<String> = gosn.into_iter().collect();
    (
        bad.is_empty(),
        format!(
            "{cases} random Metzler-Hurwitz cases, {} failures {:?}; gOSN DC gains (value:Metzler?) {gosn:?}, {stable_seen} LAS points",
            bad.len(),
            bad.first()
        ),
    )
}

fn face_block_theorem() -> (bool, String) {
    let mut ok = true;
    let (mut faces, mut points) = (0, 0);
    for v in [Variant::Omega0, Variant::OmegaPos] {
        let m = builtin_variant(v);
        let jac = jacobian(&m).full;
        let ctx = RelayContext::new(&m).unwrap();
        for face in ctx.lattice.faces() {
            faces += 1;
            let zeros: BTreeMap<usize, Rational> = face.iter().map(|&i| (i, Rational::zero())).collect();
            for &i in &face {
                for j in (0..m.n()).filter(|j| !face.contains(j)) {
                    ok &= jac.get(i, j).substitute_values(&zeros).unwrap().num().is_zero();
                }
            }
            for e in ctx.face(&face).equilibria {
                points += 1;
                ok &= face_block_is_zero(&jacobian(&m).at(&m, &e.coords).unwrap(), &face);
            }
        }
    }
    (ok, format!("{faces} faces checked symbolically, {points} face equilibria checked exactly"))
}

/// Hand traces of the reference routine at the default point. The eigenvalues
/// of the 2x2 strain blocks are quadratic surds, which its rationality filter
/// lets through, so every trace reaches a verdict.
fn reference_conformance() -> (bool, String) {
    let m = builtin_variant(Variant::Omega0);
    let ctx = RelayContext::new(&m).unwrap();
    let cases = [
        // gOSN: alpha = -1 + sqrt(6)/2 > 0; E1g = (1, 1, 1, 1) is Hurwitz
        ("W,S1,B1,S2,B2", "W,S2,B2", StrictVerdict::RelayHolds),
        // DFE: alpha = -1; gOSN: alpha = -1 + 1/sqrt(2) <= 0; loop ends
        ("W,S1,B1,S2,B2", "W,S1,B1", StrictVerdict::NoRelay),
        // DFE: alpha = 1 > 0; gOSN has U > 0 but is not Hurwitz; loop ends
        ("U,W,S1,B1,S2,B2", "W,S1,B1,S2,B2", StrictVerdict::NoRelay),
    ];
    let mut bad = Vec::new();
    for (upper, lower, want) in cases {
        let r = ctx.test_cover(&m.parse_var_set(upper).unwrap(), &m.parse_var_set(lower).unwrap()).unwrap();
        if r.strict != want {
            bad.push(format!("{upper} -> {lower}: {:?}, traced {want:?}", r.strict));
        }
    }
    (bad.is_empty(), format!("{} scenarios, mismatches {bad:?}", cases.len()))
}

#[test]
fn acceptance_criteria() {
    let mut out = Vec::new();
    let _ = writeln!(std::io::stderr());
    let checks: [(usize, fn() -> (bool, String)); 10] = [
        (1, minimal_siphon_sets),
        (2, closed_forms),
        (3, table_one_regions),
        (4, relay_pair_identity),
        (5, sign_equivalence),
        (6, hopf_screen),
        (7, e1_quadratics),
        (8, rank_one),
        (9, face_block_theorem),
        (10, reference_conformance),
    ];
    for (n, check) in checks {
        let t = std::time::Instant::now();
        let (ok, detail) = check();
        report(&mut out, n, ok, format!("{detail} [{:.1}s]", t.elapsed().as_secs_f64()));
    }
    let failed: Vec<usize> = out.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}


use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crnrelay::algebra::{parse_rational, Rational};
use crnrelay::builtin::{builtin_model, thresholds, Variant};
use crnrelay::equilibria::{EquilibriumSolver, FaceEquilibrium};
use crnrelay::model::{parse_model, Model};
use crnrelay::network::{extract_network, minimal_siphons, siphon_lattice, verify_face_invariance};
use crnrelay::relay::{to_dot, RelayContext, RelayVerdict};
use crnrelay::stability::{
    block_structure_screen, invasion_number, jacobian, las_test, rank_one_bound, reproduction_function,
    verify_face_block_theorem, LasVerdict,
};
use crnrelay::Error;

const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_UNDECIDED: u8 = 4;

#[derive(Parser)]
#[command(name = "crnrelay", version, about = "Siphon lattices, face equilibria and boundary relays of reaction networks")]
struct Cli {
    /// Model file, or a builtin name (osn_omega0, osn_omega_pos).
    #[arg(long, global = true, default_value = "osn_omega0")]
    model: String,
    /// Override a parameter value, e.g. --set beta1=3/2 (repeatable).
    #[arg(long = "set", global = true, value_name = "PARAM=RATIONAL")]
    set: Vec<String>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Collapse relay verdicts to RelayHolds / NoRelay / Undecided.
    #[arg(long, global = true)]
    strict_paper_verdicts: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal siphons with their flags.
    Siphons,
    /// Union lattice of minimal siphons and its covers.
    Lattice,
    /// Equilibria on every lattice face.
    Equilibria,
    /// Local stability of a named equilibrium.
    Stability {
        #[arg(long)]
        equilibrium: String,
    },
    /// Invasion number of a block, at an equilibrium or as a function of the residents.
    Invasion {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        equilibrium: Option<String>,
    },
    /// Relay test along the cover from face `sigma` to face `sigma-prime`.
    Relay {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        sigma_prime: String,
    },
    /// Relay graph over inhabited faces.
    RelayGraph,
    /// Block structure of the Jacobian and Hopf screening.
    ScreenOscillation,
    /// Rank-one coupling bound at an equilibrium.
    RankOneBound {
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        /// Coupling strength; defaults to the Jacobian entry (u, v).
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long, default_value = "gOSN")]
        equilibrium: String,
    },
    /// Zero mixed Jacobian block on invariant faces.
    VerifyFaceTheorem {
        #[arg(long)]
        face: Option<String>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
}

struct Report {
    json: Value,
    text: String,
    dot: Option<String>,
    undecided: bool,
}

impl Report {
    fn new(json: Value, text: String) -> Self {
        Report { json, text, dot: None, undecided: false }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } | Error::UnknownSymbol(_) | Error::DuplicateVariable(_) | Error::UnknownModel(_) => EXIT_PARSE,
        _ => EXIT_PRECONDITION,
    }
}

fn load(cli: &Cli) -> Result<Model, Error> {
    let base = match builtin_model(&cli.model) {
        Ok(m) => m,
        Err(_) => {
            let text = std::fs::read_to_string(&cli.model)
                .map_err(|e| Error::UnknownModel(format!("{}: {e}", cli.model)))?;
            parse_model(&text)?
        }
    };
    let mut vals = base.values.clone();
    for s in &cli.set {
        let (k, v) = s.split_once('=').ok_or_else(|| Error::Syntax { line: 0, column: 0, message: format!("--set {s}: expected name=value") })?;
        let q = parse_rational(v.trim()).ok_or_else(|| Error::Syntax { line: 0, column: 0, message: format!("--set {s}: not a rational") })?;
        if base.param_index(k.trim()).is_none() {
            return Err(Error::UnknownSymbol(k.trim().to_string()));
        }
        vals.insert(k.trim().to_string(), q);
    }
    base.with_values(&vals)
}

fn names(m: &Model, vars: &[usize]) -> Vec<String> {
    vars.iter().map(|&v| m.variables[v].clone()).collect()
}

fn set_text(v: &[String]) -> String {
    format!("{{{}}}", v.join(","))
}

/// Parameter point, and thresholds with region flags for the builtin models.
fn context(m: &Model) -> (Value, String) {
    let point: BTreeMap<&String, String> = m.values.iter().map(|(k, v)| (k, v.to_string())).collect();
    let mut text = format!("model {}\nparameters {}\n", m.name, point.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "));
    let mut j = json!({ "model": m.name, "parameters": point });
    if Variant::of_model(m).is_some() {
        if let Ok(t) = thresholds(&m.values) {
            let r = t.region();
            text.push_str(&format!(
                "R0={} (>1: {}, >1+beta/betaw={}: {}) R0^W={} R(gOSN)=[{}, {}] R(RFE)=[{}, {}]\n",
                t.r0, r.r0_gt_1, t.r0_withdrawal_threshold, r.r0_gt_withdrawal, t.r0_w, t.r_gosn[0], t.r_gosn[1], t.r_rfe[0], t.r_rfe[1]
            ));
            j["thresholds"] = serde_json::to_value(&t).unwrap_or(Value::Null);
            j["region"] = serde_json::to_value(r).unwrap_or(Value::Null);
        }
    }
    (j, text)
}

fn eq_json(m: &Model, s: &EquilibriumSolver, e: &FaceEquilibrium) -> Value {
    let coords: BTreeMap<&String, String> = m.variables.iter().zip(&e.coords).map(|(k, v)| (k, v.to_string())).collect();
    let ex = s.positivity_check(e);
    json!({
        "label": e.label(m),
        "face": names(m, &e.face),
        "coords": coords,
        "classification": e.classification,
        "exists": ex.exists,
        "violated": ex.violated,
    })
}

fn eq_text(m: &Model, s: &EquilibriumSolver, e: &FaceEquilibrium) -> String {
    let coords: Vec<String> = m.variables.iter().zip(&e.coords).map(|(k, v)| format!("{k}={v}")).collect();
    let ex = s.positivity_check(e);
    format!("{} exists={} {}", e.label(m), ex.exists, coords.join(" "))
}

fn find_equilibrium(ctx: &RelayContext, label: &str) -> Result<FaceEquilibrium, Error> {
    let m = ctx.model();
    let mut fallback = None;
    for face in ctx.lattice.faces() {
        for e in ctx.face(&face).equilibria.into_iter().filter(|e| e.label(m) == label) {
            if ctx.solver.positivity_check(&e).exists {
                return Ok(e);
            }
            fallback.get_or_insert(e);
        }
    }
    fallback.ok_or_else(|| Error::Precondition(format!("no equilibrium labelled {label}")))
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let m = load(cli)?;
    let (head_json, head_text) = context(&m);
    let mut report = match &cli.command {
        Command::Siphons => {
            let rn = extract_network(&m)?;
            let mins = minimal_siphons(&rn);
            let mut text = String::new();
            let mut list = Vec::new();
            for s in &mins {
                let n = names(&m, &s.members);
                text.push_str(&format!("{} lotka_volterra={} inhabited_candidate={}\n", set_text(&n), s.lotka_volterra, s.inhabited_candidate));
                list.push(json!({ "members": n, "lotka_volterra": s.lotka_volterra, "inhabited_candidate": s.inhabited_candidate }));
            }
            Report::new(json!({ "minimal_siphons": list }), text)
        }
        Command::Lattice => {
            let rn = extract_network(&m)?;
            let l = siphon_lattice(&rn, &minimal_siphons(&rn));
            let mut text = format!("DFE siphon {}\nnodes:\n", set_text(&names(&m, &l.dfe)));
            for n in &l.nodes {
                text.push_str(&format!("  {}{}\n", set_text(&names(&m, &n.members)), if n.minimal { " minimal" } else { "" }));
            }
            text.push_str("covers:\n");
            let mut covers = Vec::new();
            for c in &l.covers {
                let (u, lo, s) = (names(&m, &c.upper), names(&m, &c.lower), names(&m, &c.sigma));
                text.push_str(&format!("  {} > {} sigma={}\n", set_text(&u), set_text(&lo), set_text(&s)));
                covers.push(json!({ "upper": u, "lower": lo, "sigma": s }));
            }
            let nodes: Vec<Vec<String>> = l.nodes.iter().map(|n| names(&m, &n.members)).collect();
            Report::new(json!({ "dfe": names(&m, &l.dfe), "nodes": nodes, "covers": covers }), text)
        }
        Command::Equilibria => {
            let ctx = RelayContext::new(&m)?;
            let mut text = String::new();
            let mut faces = Vec::new();
            let mut undecided = false;
            for face in ctx.lattice.faces() {
                let fs = ctx.face(&face);
                text.push_str(&format!("face {}\n", set_text(&names(&m, &face))));
                for e in &fs.equilibria {
                    text.push_str(&format!("  {}\n", eq_text(&m, &ctx.solver, e)));
                }
                for u in &fs.undecided {
                    text.push_str(&format!("  undecided {:?}: {}\n", u.reason, u.detail));
                }
                undecided |= !fs.undecided.is_empty();
                let eqs: Vec<Value> = fs.equilibria.iter().map(|e| eq_json(&m, &ctx.solver, e)).collect();
                faces.push(json!({ "face": names(&m, &face), "equilibria": eqs, "undecided": fs.undecided }));
            }
            let mut r = Report::new(json!({ "faces": faces }), text);
            r.undecided = undecided && faces.iter().all(|f| f["equilibria"].as_array().is_some_and(|a| a.is_empty()));
            r
        }
        Command::Stability { equilibrium } => {
            let ctx = RelayContext::new(&m)?;
            let e = find_equilibrium(&ctx, equilibrium)?;
            let las = las_test(&m, &e);
            let mut text = format!("{}\nLAS verdict {:?}\nfactors {}\n", eq_text(&m, &ctx.solver, &e), las.verdict, las.factors.iter().map(|f| format!("({f})")).collect::<Vec<_>>().join(" "));
            let mut attribution = Vec::new();
            for s in ctx.lattice.minimal.iter().filter(|s| s.members.iter().all(|v| e.face.contains(v))) {
                let r = invasion_number(&m, &s.members, &e, None)?;
                let value = r.value.as_ref().map(|v| v.to_string());
                text.push_str(&format!(
                    "  invasion by {}: R={} abscissa {:?}\n",
                    set_text(&names(&m, &s.members)),
                    value.clone().unwrap_or_else(|| "?".into()),
                    r.abscissa_sign
                ));
                attribution.push(json!({ "sigma": names(&m, &s.members), "value": value, "comparison_to_one": r.comparison_to_one, "abscissa_sign": r.abscissa_sign }));
            }
            let mut r = Report::new(
                json!({ "equilibrium": eq_json(&m, &ctx.solver, &e), "las": las, "transversal": attribution }),
                text,
            );
            r.undecided = las.verdict == LasVerdict::Undecided;
            r
        }
        Command::Invasion { sigma, equilibrium } => {
            let sig = m.parse_var_set(sigma)?;
            match equilibrium {
                Some(label) => {
                    let ctx = RelayContext::new(&m)?;
                    let e = find_equilibrium(&ctx, label)?;
                    let r = invasion_number(&m, &sig, &e, None)?;
                    let text = format!(
                        "R_{} at {} = {} ({:?} one), abscissa {:?}, splitting {}\n",
                        set_text(&names(&m, &sig)),
                        label,
                        r.value.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "?".into()),
                        r.comparison_to_one,
                        r.abscissa_sign,
                        r.splitting
                    );
                    let mut rep = Report::new(serde_json::to_value(&r).unwrap_or(Value::Null), text);
                    rep.undecided = r.value.is_none();
                    rep
                }
                None => {
                    let f = reproduction_function(&m, &sig)?;
                    let shown = f.map(|f| f.display_with(&m.symbols()));
                    let text = format!("R_{} = {}\n", set_text(&names(&m, &sig)), shown.clone().unwrap_or_else(|| "?".into()));
                    Report::new(json!({ "sigma": names(&m, &sig), "reproduction_function": shown }), text)
                }
            }
        }
        Command::Relay { sigma, sigma_prime } => {
            let ctx = RelayContext::new(&m)?;
            let r = ctx.test_cover(&m.parse_var_set(sigma)?, &m.parse_var_set(sigma_prime)?)?;
            let shown = if cli.strict_paper_verdicts { format!("{:?}", r.strict) } else { format!("{:?}", r.verdict) };
            let mut text = format!("{} -> {} sigma={}: {shown}\n", set_text(&r.upper), set_text(&r.lower), set_text(&r.sigma));
            for res in &r.residents {
                text.push_str(&format!(
                    "  resident {} abscissa {:?} R={} tangential {:?}: {:?}\n",
                    res.label,
                    res.abscissa_sign,
                    res.invasion_value.clone().unwrap_or_else(|| "?".into()),
                    res.tangential_hurwitz,
                    res.verdict
                ));
                for s in &res.successors {
                    text.push_str(&format!("    successor {} {:?}\n", s.label, s.las));
                }
            }
            let mut j = serde_json::to_value(&r).unwrap_or(Value::Null);
            if cli.strict_paper_verdicts {
                j["verdict"] = serde_json::to_value(r.strict).unwrap_or(Value::Null);
            }
            let mut rep = Report::new(j, text);
            rep.undecided = r.verdict == RelayVerdict::Undecided;
            rep
        }
        Command::RelayGraph => {
            let ctx = RelayContext::new(&m)?;
            let g = ctx.graph();
            let mut text = String::from("nodes:\n");
            for n in &g.nodes {
                let eqs: Vec<String> = n.equilibria.iter().map(|e| format!("{} {:?}", e.label, e.las)).collect();
                text.push_str(&format!("  {} {}\n", set_text(&n.face), eqs.join(", ")));
            }
            text.push_str("edges:\n");
            for e in &g.edges {
                let v = if cli.strict_paper_verdicts { format!("{:?}", e.verdict.strict()) } else { format!("{:?}", e.verdict) };
                text.push_str(&format!(
                    "  {} -> {} via {} R={} {v} {:?}\n",
                    e.resident,
                    set_text(&e.lower),
                    set_text(&e.sigma),
                    e.invasion_value.clone().unwrap_or_else(|| "?".into()),
                    e.class
                ));
            }
            let mut j = serde_json::to_value(&g).unwrap_or(Value::Null);
            if cli.strict_paper_verdicts {
                for (key, list) in [("edges", &g.edges), ("quiet", &g.quiet)] {
                    if let Some(edges) = j[key].as_array_mut() {
                        for (ej, e) in edges.iter_mut().zip(list) {
                            ej["verdict"] = serde_json::to_value(e.verdict.strict()).unwrap_or(Value::Null);
                        }
                    }
                }
            }
            let mut rep = Report::new(j, text);
            rep.dot = Some(to_dot(&g));
            rep
        }
        Command::ScreenOscillation => {
            let r = block_structure_screen(&m)?;
            let mut text = String::new();
            for b in &r.blocks {
                text.push_str(&format!("block {} trace {:?} hopf-free {} ({})\n", set_text(&b.names), b.trace_sign, b.hopf_impossible, b.reason));
            }
            text.push_str(&format!("Hopf {:?}; transversal blocks Metzler: {}\n", r.hopf, r.hopf_relay_impossible));
            Report::new(serde_json::to_value(&r).unwrap_or(Value::Null), text)
        }
        Command::RankOneBound { u, v, kappa, equilibrium } => {
            let (du, dv) = m.metadata.rank_one.unzip();
            let pick = |s: &Option<String>, d: Option<usize>| -> Result<usize, Error> {
                match s {
                    Some(s) => m.var_index(s).ok_or_else(|| Error::UnknownSymbol(s.clone())),
                    None => d.ok_or_else(|| Error::Precondition("no rank-one edge given or declared".into())),
                }
            };
            let (u, v) = (pick(u, du)?, pick(v, dv)?);
            let ctx = RelayContext::new(&m)?;
            let e = find_equilibrium(&ctx, equilibrium)?;
            let j = jacobian(&m).at(&m, &e.coords)?;
            let k: Rational = match kappa {
                Some(s) => parse_rational(s).ok_or_else(|| Error::Syntax { line: 0, column: 0, message: format!("--kappa {s}: not a rational") })?,
                None => j.get(u, v).as_rational().cloned().ok_or_else(|| Error::Precondition("coupling entry is irrational".into()))?,
            };
            let mut a = j.clone();
            a.set(u, v, j.get(u, v).clone() - crnrelay::algebra::ExactScalar::rational(k.clone()));
            let r = rank_one_bound(&a, u, v, &k)?;
            let text = format!(
                "edge ({}, {}) kappa={k} at {equilibrium}\nA Hurwitz {:?}, Metzler {:?}\nDC gain {} bound {} holds {:?}\nJ Hurwitz {:?}\ndeterminant identity {:?}\n",
                m.variables[u],
                m.variables[v],
                r.a_hurwitz,
                r.a_metzler,
                r.dc_gain.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into()),
                r.bound_value.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into()),
                r.bound_holds,
                r.j_hurwitz,
                r.identity_checks
            );
            Report::new(serde_json::to_value(&r).unwrap_or(Value::Null), text)
        }
        Command::VerifyFaceTheorem { face, samples } => {
            let faces = match face {
                Some(f) => vec![m.parse_var_set(f)?],
                None => {
                    let rn = extract_network(&m)?;
                    siphon_lattice(&rn, &minimal_siphons(&rn)).nodes.into_iter().map(|n| n.members).collect()
                }
            };
            let mut text = String::new();
            let mut out = Vec::new();
            for f in faces {
                if face.is_none() && !verify_face_invariance(&m, &f) {
                    continue;
                }
                let ok = verify_face_block_theorem(&m, &f, *samples)?;
                text.push_str(&format!("{} mixed block zero: {ok}\n", set_text(&names(&m, &f))));
                out.push(json!({ "face": names(&m, &f), "holds": ok }));
            }
            Report::new(json!({ "faces": out }), text)
        }
    };
    if let Value::Object(map) = &mut report.json {
        map.insert("context".into(), head_json);
    }
    report.text = format!("{head_text}{}", report.text);
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let body = match cli.format {
        Format::Text => report.text.clone(),
        Format::Json => serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n",
        Format::Dot => match &report.dot {
            Some(d) => d.clone(),
            None => {
                eprintln!("error: this command has no dot output");
                return ExitCode::from(EXIT_PRECONDITION);
            }
        },
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &body) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(EXIT_PRECONDITION);
            }
        }
        None => print!("{body}"),
    }
    if report.undecided {
        ExitCode::from(EXIT_UNDECIDED)
    } else {
        ExitCode::SUCCESS
    }
}

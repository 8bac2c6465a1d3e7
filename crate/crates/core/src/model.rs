//! Models: named variables and parameters, right-hand sides, a parameter
//! point, and optional analysis metadata, together with the text format
//! they are read from.
//!
//! ```text
//! [variables]
//! x, y
//! [parameters]
//! a, b
//! [equations]
//! x' = a - b*x*y
//! y' = b*x*y - y
//! [values]
//! a = 3/2
//! b = 0.5
//! [metadata]
//! keep: x
//! ngm y: y = b*x*y
//! ```

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{parse_rational, RatFunc, Rational};
use crate::error::{Error, Result};
use crate::expr::{parse_terms_at, TermSum};

/// New-production terms for one siphon: the `F` part of a next-generation
/// splitting is the Jacobian of these terms with respect to the siphon.
#[derive(Debug, Clone, PartialEq)]
pub struct NgmSpec {
    pub siphon: Vec<usize>,
    pub new_terms: Vec<(usize, TermSum)>,
}

/// Explicit entry mask `(row variable, column variable)` routed to `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskSpec {
    pub siphon: Vec<usize>,
    pub entries: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Metadata {
    pub ngm: Vec<NgmSpec>,
    pub masks: Vec<MaskSpec>,
    /// `(u, v)` of a rank-one coupling `kappa e_u e_v^T`.
    pub rank_one: Option<(usize, usize)>,
    /// Preferred variable for the final univariate in face solving.
    pub keep: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub name: String,
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    /// One term sum per variable, over the ring `variables ++ parameters`.
    pub equations: Vec<TermSum>,
    pub values: BTreeMap<String, Rational>,
    pub metadata: Metadata,
}

/// Parameter assignment by name.
pub type ParamPoint = BTreeMap<String, Rational>;

impl Model {
    pub fn n(&self) -> usize {
        self.variables.len()
    }

    /// Variables followed by parameters: the names of ring indices.
    pub fn symbols(&self) -> Vec<String> {
        self.variables.iter().chain(self.parameters.iter()).cloned().collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.parameters.iter().position(|v| v == name).map(|i| i + self.n())
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.var_index(name).or_else(|| self.param_index(name))
    }

    pub fn rhs(&self) -> Vec<RatFunc> {
        self.equations.iter().map(|t| t.total()).collect()
    }

    pub fn state_vars(&self) -> BTreeSet<usize> {
        (0..self.n()).collect()
    }

    /// Resolves a comma/space separated list of variable names.
    pub fn parse_var_set(&self, s: &str) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for name in s.split(|c: char| c == ',' || c.is_whitespace() || c == '{' || c == '}').filter(|x| !x.is_empty()) {
            out.push(self.var_index(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn format_set(&self, vars: &[usize]) -> String {
        let names: Vec<&str> = vars.iter().map(|&v| self.variables[v].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn with_values(&self, vals: &ParamPoint) -> Result<Model> {
        let mut m = self.clone();
        for (k, v) in vals {
            if self.param_index(k).is_none() {
                return Err(Error::UnknownSymbol(k.clone()));
            }
            m.values.insert(k.clone(), v.clone());
        }
        Ok(m)
    }

    fn value_map(&self) -> Result<BTreeMap<usize, Rational>> {
        let mut map = BTreeMap::new();
        for (j, p) in self.parameters.iter().enumerate() {
            if let Some(v) = self.values.get(p) {
                map.insert(self.n() + j, v.clone());
            }
        }
        Ok(map)
    }

    /// Parameters that appear in the equations but have no value.
    pub fn missing_parameters(&self) -> Vec<String> {
        let used: BTreeSet<usize> = self.rhs().iter().flat_map(|r| r.vars()).filter(|&i| i >= self.n()).collect();
        used.into_iter()
            .map(|i| self.parameters[i - self.n()].clone())
            .filter(|p| !self.values.contains_key(p))
            .collect()
    }

    /// The model with every parameter replaced by its value.
    pub fn instantiate(&self) -> Result<Model> {
        if let Some(p) = self.missing_parameters().into_iter().next() {
            return Err(Error::MissingParameter(p));
        }
        let vals = self.value_map()?;
        let sub = |t: &TermSum| -> Result<TermSum> {
            Ok(TermSum { terms: t.terms.iter().map(|x| x.substitute_values(&vals)).collect::<Result<Vec<_>>>()?.into_iter().filter(|x| !x.is_zero()).collect() })
        };
        let mut m = self.clone();
        m.equations = self.equations.iter().map(sub).collect::<Result<_>>()?;
        for spec in &mut m.metadata.ngm {
            for (_, t) in &mut spec.new_terms {
                *t = sub(t)?;
            }
        }
        Ok(m)
    }

    /// True when no equation mentions a parameter.
    pub fn is_instantiated(&self) -> bool {
        self.rhs().iter().all(|r| r.vars().iter().all(|&i| i < self.n()))
    }

    /// Canonical model-file text.
    pub fn to_text(&self) -> String {
        let sym = self.symbols();
        let mut out = String::new();
        out.push_str(&format!("# {}\n[variables]\n{}\n", self.name, self.variables.join(", ")));
        out.push_str(&format!("[parameters]\n{}\n[equations]\n", self.parameters.join(", ")));
        for (v, eq) in self.variables.iter().zip(&self.equations) {
            out.push_str(&format!("{v}' = {}\n", eq.display_with(&sym)));
        }
        if !self.values.is_empty() {
            out.push_str("[values]\n");
            for p in &self.parameters {
                if let Some(q) = self.values.get(p) {
                    out.push_str(&format!("{p} = {q}\n"));
                }
            }
        }
        let md = &self.metadata;
        if md.keep.is_some() || md.rank_one.is_some() || !md.ngm.is_empty() || !md.masks.is_empty() {
            out.push_str("[metadata]\n");
            if let Some(k) = md.keep {
                out.push_str(&format!("keep: {}\n", self.variables[k]));
            }
            if let Some((u, v)) = md.rank_one {
                out.push_str(&format!("rank_one: {}, {}\n", self.variables[u], self.variables[v]));
            }
            for spec in &md.ngm {
                let parts: Vec<String> = spec
                    .new_terms
                    .iter()
                    .map(|(i, t)| format!("{} = {}", self.variables[*i], t.display_with(&sym)))
                    .collect();
                out.push_str(&format!("ngm {}: {}\n", self.names_csv(&spec.siphon), parts.join("; ")));
            }
            for mask in &md.masks {
                let parts: Vec<String> = mask
                    .entries
                    .iter()
                    .map(|(i, j)| format!("({},{})", self.variables[*i], self.variables[*j]))
                    .collect();
                out.push_str(&format!("ngm_mask {}: {}\n", self.names_csv(&mask.siphon), parts.join(" ")));
            }
        }
        out
    }

    fn names_csv(&self, vars: &[usize]) -> String {
        vars.iter().map(|&v| self.variables[v].clone()).collect::<Vec<_>>().join(",")
    }

    pub fn ngm_spec(&self, siphon: &[usize]) -> Option<&NgmSpec> {
        self.metadata.ngm.iter().find(|s| s.siphon == siphon)
    }

    pub fn mask_spec(&self, siphon: &[usize]) -> Option<&MaskSpec> {
        self.metadata.masks.iter().find(|s| s.siphon == siphon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Variables,
    Parameters,
    Equations,
    Values,
    Metadata,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn split_names(s: &str) -> Vec<&str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|x| !x.is_empty()).collect()
}

fn valid_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_alphabetic() || ch == '_') && c.all(|ch| ch.is_alphanumeric() || ch == '_')
}

/// Parses the sectioned model-file format.
pub fn parse_model(text: &str) -> Result<Model> {
    let mut section = Section::None;
    let mut name = String::from("model");
    let mut variables: Vec<String> = Vec::new();
    let mut parameters: Vec<String> = Vec::new();
    let mut eq_src: Vec<(usize, usize, String, usize, String)> = Vec::new();
    let mut value_src: Vec<(usize, String, String)> = Vec::new();
    let mut meta_src: Vec<(usize, String)> = Vec::new();
    let mut seen = BTreeSet::new();

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        if ln == 1 {
            if let Some(title) = raw.trim().strip_prefix('#') {
                name = title.trim().to_string();
            }
        }
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('[') {
            section = match trimmed {
                "[variables]" => Section::Variables,
                "[parameters]" => Section::Parameters,
                "[equations]" => Section::Equations,
                "[values]" => Section::Values,
                "[metadata]" => Section::Metadata,
                _ => return Err(syntax(ln, 1, format!("unknown section {trimmed}"))),
            };
            continue;
        }
        match section {
            Section::None => return Err(syntax(ln, 1, "content before the first section")),
            Section::Variables | Section::Parameters => {
                for n in split_names(trimmed) {
                    if !valid_ident(n) {
                        return Err(syntax(ln, 1, format!("invalid name `{n}`")));
                    }
                    if !seen.insert(n.to_string()) {
                        return Err(Error::DuplicateVariable(n.to_string()));
                    }
                    if section == Section::Variables {
                        variables.push(n.to_string());
                    } else {
                        parameters.push(n.to_string());
                    }
                }
            }
            Section::Equations => {
                let Some(eq) = line.find('=') else {
                    return Err(syntax(ln, 1, "expected `name' = expression`"));
                };
                let lhs = line[..eq].trim();
                let var = lhs
                    .strip_suffix('\'')
                    .ok_or_else(|| syntax(ln, 1, "left-hand side must look like `x'`"))?
                    .trim()
                    .to_string();
                let col = line[..eq + 1].chars().count() + 1;
                eq_src.push((ln, 1, var, col, line[eq + 1..].to_string()));
            }
            Section::Values => {
                let (k, v) = trimmed.split_once('=').ok_or_else(|| syntax(ln, 1, "expected `name = value`"))?;
                value_src.push((ln, k.trim().to_string(), v.trim().to_string()));
            }
            Section::Metadata => meta_src.push((ln, trimmed.to_string())),
        }
    }

    let n = variables.len();
    let symbols: Vec<String> = variables.iter().chain(parameters.iter()).cloned().collect();
    let resolve = |s: &str| symbols.iter().position(|x| x == s);
    let mut equations: Vec<Option<TermSum>> = vec![None; n];
    for (ln, _, var, col, src) in eq_src {
        let i = variables.iter().position(|v| *v == var).ok_or_else(|| Error::UnknownSymbol(var.clone()))?;
        if equations[i].is_some() {
            return Err(Error::DuplicateVariable(format!("{var}'")));
        }
        equations[i] = Some(parse_terms_at(&src, &resolve, ln, col)?);
    }
    let equations: Vec<TermSum> = equations
        .into_iter()
        .enumerate()
        .map(|(i, e)| e.ok_or_else(|| Error::Precondition(format!("no equation for `{}`", variables[i]))))
        .collect::<Result<_>>()?;

    let mut values = BTreeMap::new();
    for (ln, k, v) in value_src {
        if !parameters.contains(&k) {
            return Err(Error::UnknownSymbol(k));
        }
        let q = parse_rational(&v).ok_or_else(|| syntax(ln, 1, format!("`{v}` is not a rational number")))?;
        values.insert(k, q);
    }

    let mut model = Model { name, variables, parameters, equations, values, metadata: Metadata::default() };
    for (ln, src) in meta_src {
        parse_metadata_line(&mut model, ln, &src, &resolve)?;
    }
    Ok(model)
}

fn parse_metadata_line(model: &mut Model, ln: usize, src: &str, resolve: &dyn Fn(&str) -> Option<usize>) -> Result<()> {
    let (head, body) = src.split_once(':').ok_or_else(|| syntax(ln, 1, "metadata lines look like `key ...: value`"))?;
    let head = head.trim();
    let body = body.trim();
    let var = |name: &str| model.var_index(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()));
    if head == "keep" {
        model.metadata.keep = Some(var(body)?);
    } else if head == "rank_one" {
        let names = split_names(body);
        if names.len() != 2 {
            return Err(syntax(ln, 1, "rank_one expects two variables"));
        }
        model.metadata.rank_one = Some((var(names[0])?, var(names[1])?));
    } else if head == "name" {
        model.name = body.to_string();
    } else if let Some(set) = head.strip_prefix("ngm_mask") {
        let siphon = model.parse_var_set(set)?;
        let mut entries = Vec::new();
        for pair in body.split(')').map(|p| p.trim().trim_start_matches('(')).filter(|p| !p.is_empty()) {
            let names = split_names(pair);
            if names.len() != 2 {
                return Err(syntax(ln, 1, format!("mask entry `{pair}` must name two variables")));
            }
            entries.push((var(names[0])?, var(names[1])?));
        }
        model.metadata.masks.push(MaskSpec { siphon, entries });
    } else if let Some(set) = head.strip_prefix("ngm") {
        let siphon = model.parse_var_set(set)?;
        let mut new_terms = Vec::new();
        let offset = src.find(':').map(|i| i + 1).unwrap_or(0);
        for part in body.split(';').filter(|p| !p.trim().is_empty()) {
            let (lhs, rhs) = part.split_once('=').ok_or_else(|| syntax(ln, offset, "expected `x = terms`"))?;
            let i = var(lhs.trim())?;
            new_terms.push((i, parse_terms_at(rhs, resolve, ln, offset + 1)?));
        }
        model.metadata.ngm.push(NgmSpec { siphon, new_terms });
    } else {
        return Err(syntax(ln, 1, format!("unknown metadata key `{head}`")));
    }
    Ok(())
}

/// Serializable summary of a model.
#[derive(Debug, Clone, Serialize)]
pub struct ModelSummary {
    pub name: String,
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    pub equations: Vec<String>,
    pub values: BTreeMap<String, String>,
}

impl From<&Model> for ModelSummary {
    fn from(m: &Model) -> Self {
        let sym = m.symbols();
        ModelSummary {
            name: m.name.clone(),
            variables: m.variables.clone(),
            parameters: m.parameters.clone(),
            equations: m.equations.iter().map(|e| e.display_with(&sym)).collect(),
            values: m.values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIR: &str = "# toy\n[variables]\nx, y\n[parameters]\na, b\n[equations]\nx' = a - b*x*y\ny' = b*x*y - y\n[values]\na = 3/2\nb = 0.5\n[metadata]\nkeep: x\nngm y: y = b*x*y\n";

    #[test]
    fn parses_sections() {
        let m = parse_model(SIR).unwrap();
        assert_eq!(m.name, "toy");
        assert_eq!(m.variables, vec!["x", "y"]);
        assert_eq!(m.values["b"], Rational::new(1.into(), 2.into()));
        assert_eq!(m.metadata.keep, Some(0));
        assert_eq!(m.metadata.ngm[0].siphon, vec![1]);
        let again = parse_model(&m.to_text()).unwrap();
        assert_eq!(again.rhs(), m.rhs());
        assert_eq!(again.metadata, m.metadata);
    }

    #[test]
    fn reports_errors() {
        let dup = "[variables]\nx, x\n[equations]\nx' = 1\n";
        assert_eq!(parse_model(dup), Err(Error::DuplicateVariable("x".into())));
        let bad = "[variables]\nx\n[equations]\nx' = x +* 2\n";
        match parse_model(bad) {
            Err(Error::Syntax { line: 4, column: 9, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let unknown = "[variables]\nx\n[equations]\nx' = q*x\n";
        assert_eq!(parse_model(unknown), Err(Error::UnknownSymbol("q".into())));
    }

    #[test]
    fn instantiation_removes_parameters() {
        let m = parse_model(SIR).unwrap();
        let i = m.instantiate().unwrap();
        assert!(i.is_instantiated());
        let mut partial = m.clone();
        partial.values.remove("a");
        assert_eq!(partial.instantiate(), Err(Error::MissingParameter("a".into())));
    }
}

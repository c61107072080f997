//! The line-oriented spec format.
//!
//! ```text
//! # polyvector fields on R^1
//! GENERATORS
//!   x 0
//!   xi 1
//! OPERATOR delta
//!   d[x]*d[xi]
//! ROLES D=delta
//! SUITE bv-core linfty
//! BUDGET degree=3 tuples=500 seed=7
//! ```
//!
//! Section headers start in column 1; body lines are indented. A builtin
//! `MODEL name key=value…` replaces GENERATORS and predefines operators.
//! `#` starts a comment.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use bvcheck_core::models::{
    exterior_cubic_model, koszul_complex_model, poisson_model, polyvector_model, split_lab_model,
};
use bvcheck_core::structures::Window;
use bvcheck_core::text::parse_operator;
use bvcheck_core::{Budget, Error as CoreError, GeneratorTable, Operator};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SpecError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SpecError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        SpecError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Order,
    SquareZero,
    BracketEquivalence,
    Linfty,
    Split,
    Derivation,
    Bvinfty,
    Cohomology,
    Gerstenhaber,
    BvCore,
    All,
}

impl Suite {
    pub const NAMES: [(&'static str, Suite); 11] = [
        ("order", Suite::Order),
        ("square-zero", Suite::SquareZero),
        ("bracket-equivalence", Suite::BracketEquivalence),
        ("linfty", Suite::Linfty),
        ("split", Suite::Split),
        ("derivation", Suite::Derivation),
        ("bvinfty", Suite::Bvinfty),
        ("cohomology", Suite::Cohomology),
        ("gerstenhaber", Suite::Gerstenhaber),
        ("bv-core", Suite::BvCore),
        ("all", Suite::All),
    ];

    pub fn name(self) -> &'static str {
        Suite::NAMES
            .iter()
            .find(|(_, s)| *s == self)
            .map(|(n, _)| *n)
            .expect("every suite is named")
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, suite)| *suite)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::NAMES.iter().map(|(n, _)| *n).collect();
                format!("unknown suite `{s}`; expected one of {}", names.join(", "))
            })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    Polyvector {
        n: usize,
    },
    Koszul {
        exponents: Vec<Vec<u32>>,
        divergence: bool,
    },
    Poisson,
    ExteriorCubic,
    SplitLab,
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Polyvector { n } => write!(f, "polyvector n={n}"),
            Builtin::Koszul {
                exponents,
                divergence,
            } => {
                let e: Vec<String> = exponents
                    .iter()
                    .map(|v| v.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
                    .collect();
                write!(
                    f,
                    "koszul exponents={} divergence={divergence}",
                    e.join(";")
                )
            }
            Builtin::Poisson => f.write_str("poisson"),
            Builtin::ExteriorCubic => f.write_str("exterior-cubic"),
            Builtin::SplitLab => f.write_str("split-lab"),
        }
    }
}

/// A validated spec.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub table: Arc<GeneratorTable>,
    pub model: Option<Builtin>,
    /// Named operators in definition order, builtin ones first.
    pub operators: Vec<(String, Operator)>,
    /// Name of the operator `D` under test.
    pub big_d: String,
    /// Name of the differential `d`; `None` means `d = 0`.
    pub d: Option<String>,
    pub suites: Vec<Suite>,
    pub budget: Budget,
    pub weights: Option<Vec<u32>>,
    pub window: Window,
}

pub const DEFAULT_WINDOW: u32 = 4;

impl ModelSpec {
    pub fn operator(&self, name: &str) -> Option<&Operator> {
        self.operators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, op)| op)
    }

    pub fn big_d(&self) -> &Operator {
        self.operator(&self.big_d).expect("validated role")
    }

    pub fn d(&self) -> Operator {
        match &self.d {
            Some(name) => self.operator(name).expect("validated role").clone(),
            None => Operator::zero(&self.table),
        }
    }
}

struct Line<'a> {
    no: usize,
    indent: usize,
    text: &'a str,
}

fn lines(src: &str) -> Vec<Line<'_>> {
    src.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let trimmed = body.trim_start();
            let text = trimmed.trim_end();
            (!text.is_empty()).then(|| Line {
                no: i + 1,
                indent: body.len() - trimmed.len(),
                text,
            })
        })
        .collect()
}

/// Whitespace-separated words with their 1-based columns.
fn words<'a>(line: &Line<'a>) -> Vec<(usize, &'a str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.text.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line.text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line.text[s..]));
    }
    out.into_iter()
        .map(|(s, w)| (line.indent + line.text[..s].chars().count() + 1, w))
        .collect()
}

fn key_values<'a>(
    line: &Line<'_>,
    items: &[(usize, &'a str)],
) -> Result<Vec<(usize, &'a str, &'a str)>, SpecError> {
    items
        .iter()
        .map(|&(col, w)| {
            w.split_once('=').map(|(k, v)| (col, k, v)).ok_or_else(|| {
                SpecError::new(line.no, col, format!("expected key=value, found `{w}`"))
            })
        })
        .collect()
}

fn number<T: FromStr>(line: usize, col: usize, s: &str, what: &str) -> Result<T, SpecError> {
    s.parse().map_err(|_| {
        SpecError::new(
            line,
            col,
            format!("{what} must be a nonnegative integer, found `{s}`"),
        )
    })
}

struct OperatorSource {
    name: String,
    header: (usize, usize),
    body: Vec<(usize, usize, String)>,
}

/// `(line, column, name, degree)` of one generator line.
type GeneratorLine = (usize, usize, String, i64);
/// `(column, role, operator name)` of one role assignment.
type RoleLine = (usize, String, String);

#[derive(Default)]
struct Raw {
    generators: Option<(usize, Vec<GeneratorLine>)>,
    model: Option<(usize, usize, Builtin)>,
    operators: Vec<OperatorSource>,
    roles: Option<(usize, Vec<RoleLine>)>,
    suites: Vec<Suite>,
    budget: Option<Budget>,
    weights: Option<(usize, usize, Vec<u32>)>,
    window: Option<u32>,
}

fn parse_builtin(line: &Line<'_>, items: &[(usize, &str)]) -> Result<Builtin, SpecError> {
    let Some(&(col, name)) = items.first() else {
        return Err(SpecError::new(
            line.no,
            line.indent + 6,
            "MODEL needs a name",
        ));
    };
    let kv = key_values(line, &items[1..])?;
    let mut n = None;
    let mut exponents = None;
    let mut divergence = false;
    for (c, k, v) in kv {
        match (name, k) {
            ("polyvector", "n") => n = Some(number::<usize>(line.no, c, v, "n")?),
            ("koszul", "exponents") => {
                let parsed: Result<Vec<Vec<u32>>, SpecError> = v
                    .split(';')
                    .map(|e| {
                        e.split(',')
                            .map(|x| number(line.no, c, x, "an exponent"))
                            .collect()
                    })
                    .collect();
                exponents = Some(parsed?);
            }
            ("koszul", "divergence") => {
                divergence = match v {
                    "true" => true,
                    "false" => false,
                    _ => {
                        return Err(SpecError::new(
                            line.no,
                            c,
                            "divergence must be true or false",
                        ))
                    }
                }
            }
            _ => {
                return Err(SpecError::new(
                    line.no,
                    c,
                    format!("unknown parameter `{k}` for model `{name}`"),
                ))
            }
        }
    }
    match name {
        "polyvector" => Ok(Builtin::Polyvector {
            n: n.ok_or_else(|| SpecError::new(line.no, col, "polyvector needs n=<dimension>"))?,
        }),
        "koszul" => Ok(Builtin::Koszul {
            exponents: exponents
                .ok_or_else(|| SpecError::new(line.no, col, "koszul needs exponents=<e1;e2;…>"))?,
            divergence,
        }),
        "poisson" => Ok(Builtin::Poisson),
        "exterior-cubic" => Ok(Builtin::ExteriorCubic),
        "split-lab" => Ok(Builtin::SplitLab),
        _ => Err(SpecError::new(
            line.no,
            col,
            format!("unknown model `{name}`; expected polyvector, koszul, poisson, exterior-cubic or split-lab"),
        )),
    }
}

struct BuiltinParts {
    table: Arc<GeneratorTable>,
    operators: Vec<(String, Operator)>,
    big_d: String,
    d: Option<String>,
    weights: Option<Vec<u32>>,
}

fn instantiate(b: &Builtin) -> Result<BuiltinParts, CoreError> {
    Ok(match b {
        Builtin::Polyvector { n } => {
            let m = polyvector_model(*n)?;
            BuiltinParts {
                table: m.table.clone(),
                operators: vec![("delta".into(), m.delta)],
                big_d: "delta".into(),
                d: None,
                weights: None,
            }
        }
        Builtin::Koszul {
            exponents,
            divergence,
        } => {
            let k = koszul_complex_model(exponents, *divergence)?;
            let total = k.total();
            let mut operators = vec![("d".to_string(), k.d)];
            if let Some(d2) = k.divergence {
                operators.push(("D2".into(), d2));
            }
            operators.push(("D".into(), total));
            BuiltinParts {
                table: k.table,
                operators,
                big_d: "D".into(),
                d: Some("d".into()),
                weights: Some(k.weights),
            }
        }
        Builtin::Poisson => {
            let p = poisson_model()?;
            BuiltinParts {
                table: p.base.table.clone(),
                operators: vec![
                    ("d".into(), p.d),
                    ("delta".into(), p.base.delta),
                    ("D".into(), p.total),
                ],
                big_d: "D".into(),
                d: Some("d".into()),
                weights: None,
            }
        }
        Builtin::ExteriorCubic => {
            let (table, d) = exterior_cubic_model();
            BuiltinParts {
                table,
                operators: vec![("D".into(), d)],
                big_d: "D".into(),
                d: None,
                weights: None,
            }
        }
        Builtin::SplitLab => {
            let lab = split_lab_model()?;
            let [d1, d2, d3] = lab.parts;
            BuiltinParts {
                table: lab.table,
                operators: vec![
                    ("D1".into(), d1),
                    ("D2".into(), d2),
                    ("D3".into(), d3),
                    ("D".into(), lab.total),
                ],
                big_d: "D".into(),
                d: Some("D1".into()),
                weights: None,
            }
        }
    })
}

const SECTIONS: [&str; 8] = [
    "GENERATORS",
    "OPERATOR",
    "MODEL",
    "ROLES",
    "SUITE",
    "BUDGET",
    "WEIGHTS",
    "WINDOW",
];

fn collect(src: &str) -> Result<Raw, SpecError> {
    let mut raw = Raw::default();
    let ls = lines(src);
    let mut i = 0;
    while i < ls.len() {
        let line = &ls[i];
        if line.indent > 0 {
            return Err(SpecError::new(
                line.no,
                line.indent + 1,
                "indented line outside a section body",
            ));
        }
        let ws = words(line);
        let (_, head) = ws[0];
        let rest = &ws[1..];
        let mut body = Vec::new();
        while i + 1 < ls.len() && ls[i + 1].indent > 0 {
            i += 1;
            body.push(&ls[i]);
        }
        let takes_body = matches!(head, "GENERATORS" | "OPERATOR");
        if !takes_body {
            if let Some(b) = body.first() {
                return Err(SpecError::new(
                    b.no,
                    b.indent + 1,
                    format!("{head} takes no body lines"),
                ));
            }
        }
        match head {
            "GENERATORS" => {
                if raw.generators.is_some() {
                    return Err(SpecError::new(line.no, 1, "duplicate GENERATORS section"));
                }
                if let Some(&(c, _)) = rest.first() {
                    return Err(SpecError::new(
                        line.no,
                        c,
                        "GENERATORS lists one generator per indented line",
                    ));
                }
                let mut gens: Vec<(usize, usize, String, i64)> = Vec::new();
                for b in body {
                    let bw = words(b);
                    let [(c, name), (dc, deg)] = bw[..] else {
                        return Err(SpecError::new(b.no, b.indent + 1, "expected `name degree`"));
                    };
                    if !name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                        || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                        || name == "d"
                    {
                        return Err(SpecError::new(
                            b.no,
                            c,
                            format!("invalid generator name `{name}`"),
                        ));
                    }
                    if gens.iter().any(|g| g.2 == name) {
                        return Err(SpecError::new(
                            b.no,
                            c,
                            format!("duplicate generator `{name}`"),
                        ));
                    }
                    let deg: i64 = deg.parse().map_err(|_| {
                        SpecError::new(
                            b.no,
                            dc,
                            format!("degree must be an integer, found `{deg}`"),
                        )
                    })?;
                    gens.push((b.no, c, name.to_string(), deg));
                }
                raw.generators = Some((line.no, gens));
            }
            "OPERATOR" => {
                let (name, inline) = match rest {
                    [] => return Err(SpecError::new(line.no, 10, "OPERATOR needs a name")),
                    [(_, name)] => (*name, None),
                    [(_, name), (ec, "="), ..] => {
                        let start = ec + 1;
                        (*name, Some(start))
                    }
                    [_, (c, _), ..] => {
                        return Err(SpecError::new(
                            line.no,
                            *c,
                            "expected `OPERATOR name` or `OPERATOR name = terms`",
                        ))
                    }
                };
                if raw.operators.iter().any(|o| o.name == name) {
                    return Err(SpecError::new(
                        line.no,
                        rest[0].0,
                        format!("duplicate operator `{name}`"),
                    ));
                }
                let mut src = Vec::new();
                if let Some(start) = inline {
                    let text: String = line.text.chars().skip(start - 1).collect();
                    let offset = start - 1 + text.len() - text.trim_start().len();
                    src.push((line.no, offset, text.trim().to_string()));
                }
                for b in body {
                    src.push((b.no, b.indent, b.text.to_string()));
                }
                if src.iter().all(|(_, _, t)| t.is_empty()) {
                    return Err(SpecError::new(
                        line.no,
                        rest[0].0,
                        format!("operator `{name}` has no terms"),
                    ));
                }
                raw.operators.push(OperatorSource {
                    name: name.to_string(),
                    header: (line.no, rest[0].0),
                    body: src,
                });
            }
            "MODEL" => {
                if raw.model.is_some() {
                    return Err(SpecError::new(line.no, 1, "duplicate MODEL section"));
                }
                let b = parse_builtin(line, rest)?;
                raw.model = Some((line.no, rest.first().map_or(1, |w| w.0), b));
            }
            "ROLES" => {
                if raw.roles.is_some() {
                    return Err(SpecError::new(line.no, 1, "duplicate ROLES section"));
                }
                let kv = key_values(line, rest)?;
                let mut roles = Vec::new();
                for (c, k, v) in kv {
                    if k != "D" && k != "d" {
                        return Err(SpecError::new(
                            line.no,
                            c,
                            format!("unknown role `{k}`; expected D or d"),
                        ));
                    }
                    if roles
                        .iter()
                        .any(|(_, r, _): &(usize, String, String)| r == k)
                    {
                        return Err(SpecError::new(line.no, c, format!("duplicate role `{k}`")));
                    }
                    roles.push((c + k.len() + 1, k.to_string(), v.to_string()));
                }
                raw.roles = Some((line.no, roles));
            }
            "SUITE" => {
                for &(c, w) in rest {
                    let s: Suite = w.parse().map_err(|m| SpecError::new(line.no, c, m))?;
                    if !raw.suites.contains(&s) {
                        raw.suites.push(s);
                    }
                }
            }
            "BUDGET" => {
                if raw.budget.is_some() {
                    return Err(SpecError::new(line.no, 1, "duplicate BUDGET section"));
                }
                let mut b = Budget::default();
                for (c, k, v) in key_values(line, rest)? {
                    let vc = c + k.len() + 1;
                    match k {
                        "degree" => b.max_degree = number(line.no, vc, v, "degree")?,
                        "tuples" => b.max_tuples = number(line.no, vc, v, "tuples")?,
                        "seed" => b.seed = number(line.no, vc, v, "seed")?,
                        _ => {
                            return Err(SpecError::new(
                                line.no,
                                c,
                                format!(
                                    "unknown budget key `{k}`; expected degree, tuples or seed"
                                ),
                            ))
                        }
                    }
                }
                raw.budget = Some(b);
            }
            "WEIGHTS" => {
                if raw.weights.is_some() {
                    return Err(SpecError::new(line.no, 1, "duplicate WEIGHTS section"));
                }
                let w = rest
                    .iter()
                    .map(|&(c, v)| number(line.no, c, v, "a weight"))
                    .collect::<Result<Vec<u32>, _>>()?;
                raw.weights = Some((line.no, 1, w));
            }
            "WINDOW" => {
                if raw.window.is_some() {
                    return Err(SpecError::new(line.no, 1, "duplicate WINDOW section"));
                }
                let [(c, v)] = rest else {
                    return Err(SpecError::new(line.no, 1, "expected `WINDOW <max weight>`"));
                };
                raw.window = Some(number(line.no, *c, v, "the window")?);
            }
            other => {
                return Err(SpecError::new(
                    line.no,
                    1,
                    format!(
                        "unknown section `{other}`; expected one of {}",
                        SECTIONS.join(", ")
                    ),
                ))
            }
        }
        i += 1;
    }
    Ok(raw)
}

fn parse_operator_source(
    table: &Arc<GeneratorTable>,
    src: &OperatorSource,
) -> Result<Operator, SpecError> {
    let mut total = Operator::zero(table);
    for (no, offset, text) in &src.body {
        let op = parse_operator(table, text).map_err(|e| match e {
            CoreError::Parse { column, message } => SpecError::new(*no, offset + column, message),
            other => SpecError::new(*no, offset + 1, other.to_string()),
        })?;
        total = &total + &op;
    }
    Ok(total)
}

/// Parse and validate a spec document.
pub fn parse_spec(src: &str) -> Result<ModelSpec, SpecError> {
    let raw = collect(src)?;
    let (table, mut operators, mut big_d, mut d, model_weights, model) =
        match (&raw.model, &raw.generators) {
            (Some((no, _, _)), Some(_)) => {
                return Err(SpecError::new(
                    *no,
                    1,
                    "MODEL and GENERATORS cannot both be given",
                ));
            }
            (Some((no, col, b)), None) => {
                let parts = instantiate(b).map_err(|e| SpecError::new(*no, *col, e.to_string()))?;
                (
                    parts.table,
                    parts.operators,
                    Some(parts.big_d),
                    parts.d,
                    parts.weights,
                    Some(b.clone()),
                )
            }
            (None, Some((no, gens))) => {
                if gens.is_empty() {
                    return Err(SpecError::new(*no, 1, "GENERATORS declares no generators"));
                }
                let table = GeneratorTable::new(gens.iter().map(|g| (g.2.clone(), g.3)))
                    .map_err(|e| SpecError::new(*no, 1, e.to_string()))?;
                (table, Vec::new(), None, None, None, None)
            }
            (None, None) => return Err(SpecError::new(1, 1, "a spec needs GENERATORS or MODEL")),
        };

    for src in &raw.operators {
        if operators.iter().any(|(n, _)| *n == src.name) {
            return Err(SpecError::new(
                src.header.0,
                src.header.1,
                format!("operator `{}` is already defined by the model", src.name),
            ));
        }
        operators.push((src.name.clone(), parse_operator_source(&table, src)?));
    }

    if let Some((_, roles)) = &raw.roles {
        for (col, role, name) in roles {
            let no = raw.roles.as_ref().map_or(1, |r| r.0);
            let known = name == "0" || operators.iter().any(|(n, _)| n == name);
            if !known {
                return Err(SpecError::new(
                    no,
                    *col,
                    format!("unknown operator `{name}`"),
                ));
            }
            let value = (name != "0").then(|| name.clone());
            match role.as_str() {
                "D" => {
                    big_d = Some(value.ok_or_else(|| SpecError::new(no, *col, "D cannot be 0"))?);
                }
                _ => d = value,
            }
        }
    }
    if big_d.is_none() && operators.len() == 1 {
        big_d = Some(operators[0].0.clone());
    }
    let big_d = big_d.ok_or_else(|| {
        SpecError::new(
            raw.roles.as_ref().map_or(1, |r| r.0),
            1,
            "name the operator under test with `ROLES D=<name>`",
        )
    })?;

    let weights = match raw.weights {
        Some((no, col, w)) => {
            if w.len() != table.len() {
                return Err(SpecError::new(
                    no,
                    col,
                    format!("{} weights given for {} generators", w.len(), table.len()),
                ));
            }
            Some(w)
        }
        None => model_weights,
    };

    Ok(ModelSpec {
        table,
        model,
        operators,
        big_d,
        d,
        suites: raw.suites,
        budget: raw.budget.unwrap_or_default(),
        weights,
        window: Window {
            max_weight: raw.window.unwrap_or(DEFAULT_WINDOW),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_custom_spec() {
        let s = parse_spec("GENERATORS\n  x 0\n  xi 1\nOPERATOR delta\n  d[x]*d[xi]\n").unwrap();
        assert_eq!(s.table.len(), 2);
        assert_eq!(s.big_d, "delta");
        assert!(s.d().is_zero());
        assert!(s.suites.is_empty());
        assert_eq!(s.budget, Budget::default());
    }

    #[test]
    fn builtin_with_suite() {
        let s = parse_spec("MODEL polyvector n=3\nSUITE bv-core\n").unwrap();
        assert_eq!(s.model, Some(Builtin::Polyvector { n: 3 }));
        assert_eq!(s.suites, vec![Suite::BvCore]);
        assert_eq!(s.big_d().num_terms(), 3);
    }

    #[test]
    fn odd_derivative_exponent_is_positioned() {
        let e = parse_spec("GENERATORS\n  x 0\n  xi 1\nOPERATOR bad\n  x*d[xi^2]\n").unwrap_err();
        assert_eq!((e.line, e.column), (5, 7));
    }

    #[test]
    fn inline_operator_and_comments() {
        let s = parse_spec("GENERATORS # two\n  x 0\n  xi 1\nOPERATOR D = -3/2*x*d[xi]  # tail\n")
            .unwrap();
        assert_eq!(s.big_d().to_string(), "-3/2*x*d[xi]");
        let e = parse_spec("GENERATORS\n  x 0\nOPERATOR D = x*d[y]\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 18));
    }

    #[test]
    fn positioned_errors() {
        let cases = [
            ("GENERATORS\n  x 0\n  x 1\n", (3, 3)),
            ("GENERATORS\n  x zero\n", (2, 5)),
            ("MODEL polyvector n=0\n", (1, 7)),
            ("MODEL polyvector\n", (1, 7)),
            ("MODEL torus\n", (1, 7)),
            ("MODEL poisson\nSUITE nothing\n", (2, 7)),
            ("MODEL poisson\nBUDGET degree=x\n", (2, 15)),
            ("MODEL poisson\nROLES D=nope\n", (2, 9)),
            ("MODEL poisson\nWEIGHTS 1 1\n", (2, 1)),
            ("MODEL poisson\nFROB\n", (2, 1)),
            (
                "GENERATORS\n  x 0\nOPERATOR a\n  d[x]\nOPERATOR a\n  x\n",
                (5, 10),
            ),
            ("  x 0\n", (1, 3)),
        ];
        for (src, pos) in cases {
            let e = parse_spec(src).unwrap_err();
            assert_eq!((e.line, e.column), pos, "{src:?}: {e}");
        }
    }

    #[test]
    fn roles_and_overrides() {
        let s = parse_spec(
            "MODEL poisson\nOPERATOR half = 1/2*d[x1]*d[xi1]\nROLES D=delta d=0\nWEIGHTS 1 1 1 1\nWINDOW 2\n",
        )
        .unwrap();
        assert_eq!(s.big_d, "delta");
        assert!(s.d.is_none());
        assert_eq!(s.weights, Some(vec![1, 1, 1, 1]));
        assert_eq!(s.window.max_weight, 2);
        assert!(s.operator("half").is_some());
    }

    #[test]
    fn koszul_builtin() {
        let s = parse_spec("MODEL koszul exponents=2 divergence=false\n").unwrap();
        assert_eq!(s.d().to_string(), "x^2*d[xi]");
        assert_eq!(s.weights, Some(vec![1, 2]));
        let s = parse_spec("MODEL koszul exponents=1,0;0,1 divergence=true\n").unwrap();
        assert!(s.operator("D2").is_some());
    }
}

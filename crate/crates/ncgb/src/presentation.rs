//! The line-oriented presentation file format.
//!
//! ```text
//! name quantum-plane
//! field Q
//! var x1 deg 1
//! var x2 deg 1
//! rel x2*x1 = -1/2*x1*x2
//! ```
//!
//! `field` is one of `Q`, `Q(w) minpoly w^2+w+1`, or
//! `Q(params: a,b; nonzero: a)`. `var` lines list variables in adjunction
//! order; an optional `order` line (`order x2 < x3 < x1`) fixes the
//! comparison order when it differs from the listing. `rel` lines hold
//! `lhs = rhs`, stored as `lhs - rhs`; coefficients prefix each term, and
//! `*` separates the factors of a term.

use num::BigRational;
use thiserror::Error;

use crate::coeff::{FieldElement, FieldSpec, ParamSpec};
use crate::freealg::{Polynomial, VariableTable, Word};
use crate::ore::AlgebraPresentation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: relation mixes degrees at term `{term}`")]
    InhomogeneousRelation { line: usize, term: String },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

pub fn parse_presentation(text: &str) -> Result<AlgebraPresentation, ParseError> {
    let mut name = String::new();
    let mut field: Option<FieldSpec> = None;
    let mut vars: Vec<(String, u32)> = Vec::new();
    let mut order: Option<Vec<String>> = None;
    let mut rels: Vec<(usize, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "name" => name = rest.to_string(),
            "field" => field = Some(parse_field(rest, lineno)?),
            "var" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    [vname, "deg", d] => {
                        let deg: u32 = d
                            .parse()
                            .map_err(|_| syntax(lineno, format!("bad degree `{d}`")))?;
                        if deg == 0 {
                            return Err(syntax(lineno, "variable degrees must be at least 1"));
                        }
                        if vars.iter().any(|(n, _)| n == vname) {
                            return Err(syntax(lineno, format!("duplicate variable `{vname}`")));
                        }
                        vars.push((vname.to_string(), deg));
                    }
                    _ => return Err(syntax(lineno, "expected `var <name> deg <int>`")),
                }
            }
            "order" => {
                let names: Vec<String> =
                    rest.split('<').map(|s| s.trim().to_string()).collect();
                if names.iter().any(|n| n.is_empty()) {
                    return Err(syntax(lineno, "expected `order a < b < ...`"));
                }
                order = Some(names);
            }
            "rel" => rels.push((lineno, rest.to_string())),
            _ => return Err(syntax(lineno, format!("unknown keyword `{keyword}`"))),
        }
    }

    let field = field.ok_or_else(|| syntax(0, "missing `field` line"))?;
    if vars.is_empty() {
        return Err(syntax(0, "no variables declared"));
    }
    // comparison order: the `order` line when present, listing order otherwise
    let ordered: Vec<(String, u32)> = match order {
        None => vars.clone(),
        Some(names) => {
            if names.len() != vars.len() {
                return Err(syntax(0, "`order` must mention every variable exactly once"));
            }
            names
                .iter()
                .map(|n| {
                    vars.iter()
                        .find(|(vn, _)| vn == n)
                        .cloned()
                        .ok_or_else(|| syntax(0, format!("`order` names unknown variable `{n}`")))
                })
                .collect::<Result<_, _>>()?
        }
    };
    if let FieldSpec::Parametric(ps) = &field {
        for (vname, _) in &ordered {
            if ps.names.contains(vname) {
                return Err(syntax(0, format!("`{vname}` is both a variable and a parameter")));
            }
        }
    }
    let table = VariableTable::new(ordered);

    let mut relations = Vec::new();
    for (lineno, body) in rels {
        let (lhs, rhs) = body
            .split_once('=')
            .ok_or_else(|| syntax(lineno, "expected `rel <poly> = <poly>`"))?;
        let l = parse_polynomial(lhs.trim(), &table, &field, lineno)?;
        let r = parse_polynomial(rhs.trim(), &table, &field, lineno)?;
        let rel = l.sub(&r);
        if rel.is_zero() {
            return Err(syntax(lineno, "relation is identically zero"));
        }
        if rel.homogeneous_degree().is_none() {
            let term = rel
                .leading_term()
                .map(|(w, _)| w.display(&table))
                .unwrap_or_default();
            return Err(ParseError::InhomogeneousRelation { line: lineno, term });
        }
        relations.push(rel);
    }

    AlgebraPresentation::new(name, field.clone(), table, relations)
        .map_err(|e| syntax(0, e.to_string()))
}

fn parse_field(rest: &str, lineno: usize) -> Result<FieldSpec, ParseError> {
    let compact: String = rest.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    if compact == "Q(w)minpolyw^2+w+1" {
        return Ok(FieldSpec::Cyclotomic3);
    }
    if let Some(inner) = compact.strip_prefix("Q(params:").and_then(|s| s.strip_suffix(')')) {
        let (params_part, nonzero_part) = match inner.split_once(";nonzero:") {
            Some((p, z)) => (p, z),
            None => (inner, ""),
        };
        let names: Vec<String> = params_part
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.to_string())
            .collect();
        if names.is_empty() {
            return Err(syntax(lineno, "parametric field declares no parameters"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(syntax(lineno, format!("duplicate parameter `{n}`")));
            }
        }
        let nonzero: Vec<&str> = nonzero_part.split(',').filter(|s| !s.is_empty()).collect();
        for z in &nonzero {
            if !names.iter().any(|n| n == z) {
                return Err(syntax(lineno, format!("nonzero names unknown parameter `{z}`")));
            }
        }
        return Ok(FieldSpec::Parametric(ParamSpec::new(names, &nonzero)));
    }
    Err(syntax(lineno, format!("unrecognized field `{rest}`")))
}

/// A sum of terms; each term is a `*`-separated product of an optional
/// rational literal, coefficient symbols (`w` or parameters, with optional
/// `^power`), and variable names. `0` is the zero polynomial.
pub fn parse_polynomial(
    text: &str,
    table: &VariableTable,
    field: &FieldSpec,
    lineno: usize,
) -> Result<Polynomial, ParseError> {
    let text = text.trim();
    if text == "0" {
        return Ok(Polynomial::zero());
    }
    let mut out = Polynomial::zero();
    for (sign, term) in split_terms(text) {
        if term.is_empty() {
            return Err(syntax(lineno, "empty term"));
        }
        let mut coeff = field.one();
        if sign < 0 {
            coeff = coeff.neg();
        }
        let mut ranks: Vec<usize> = Vec::new();
        for factor in term.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(syntax(lineno, format!("empty factor in `{term}`")));
            }
            // pieces after a '/' divide the coefficient: h1/i1, 2/3, e4/i1^2
            for (piece_idx, piece) in factor.split('/').enumerate() {
                let (base, power) = match piece.split_once('^') {
                    Some((b, p)) => {
                        let e: u32 = p
                            .parse()
                            .map_err(|_| syntax(lineno, format!("bad exponent in `{factor}`")))?;
                        (b, e)
                    }
                    None => (piece, 1),
                };
                if let Some(rank) = table.rank_of(base) {
                    if piece_idx > 0 {
                        return Err(syntax(lineno, format!("variable `{base}` in a denominator")));
                    }
                    for _ in 0..power {
                        ranks.push(rank);
                    }
                } else if let Some(c) = parse_scalar(base, field) {
                    if c.is_zero() && piece_idx > 0 {
                        return Err(syntax(lineno, "division by zero"));
                    }
                    for _ in 0..power {
                        coeff = if piece_idx == 0 {
                            coeff.mul(&c)
                        } else {
                            scalar_div(&coeff, &c, field)
                        };
                    }
                } else {
                    return Err(syntax(lineno, format!("unknown symbol `{base}`")));
                }
            }
        }
        out.add_term(Word::from_ranks(&ranks, table), coeff);
    }
    Ok(out)
}

fn parse_scalar(token: &str, field: &FieldSpec) -> Option<FieldElement> {
    if let Ok(n) = token.parse::<num::BigInt>() {
        return Some(field.from_rational(BigRational::from_integer(n)));
    }
    match field {
        FieldSpec::Cyclotomic3 if token == "w" => Some(field.omega()),
        FieldSpec::Parametric(ps) => ps.index_of(token).map(|i| field.param(i)),
        _ => None,
    }
}

/// Division used only while reading files: the divisor is a nonzero literal
/// the file itself supplies, so no invertibility certificate applies.
fn scalar_div(a: &FieldElement, b: &FieldElement, field: &FieldSpec) -> FieldElement {
    use crate::coeff::RatFun;
    match (a, b) {
        (FieldElement::Par(x), FieldElement::Par(y)) => FieldElement::Par(RatFun::new(
            x.num().mul(y.den()),
            x.den().mul(y.num()),
        )),
        _ => a.div(b, field).expect("nonzero scalar divisor"),
    }
}

/// Split `a - b + c` into signed terms, honoring a leading sign.
fn split_terms(text: &str) -> Vec<(i32, String)> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut sign = 1;
    for ch in text.chars() {
        match ch {
            '+' | '-' => {
                if !current.trim().is_empty() {
                    out.push((sign, current.trim().to_string()));
                }
                current = String::new();
                sign = if ch == '-' { -1 } else { 1 };
            }
            _ => current.push(ch),
        }
    }
    if !current.trim().is_empty() {
        out.push((sign, current.trim().to_string()));
    }
    out
}

/// Canonical text form: fields, variables in comparison order, and each
/// relation as `leading term = rest`. Parsing the output reproduces the
/// presentation exactly.
pub fn print_presentation(p: &AlgebraPresentation) -> String {
    let mut out = String::new();
    if !p.name.is_empty() {
        out.push_str(&format!("name {}\n", p.name));
    }
    match &p.field {
        FieldSpec::Rationals => out.push_str("field Q\n"),
        FieldSpec::Cyclotomic3 => out.push_str("field Q(w) minpoly w^2+w+1\n"),
        FieldSpec::Parametric(ps) => {
            let nz: Vec<String> =
                ps.nonzero.iter().map(|&i| ps.names[i].clone()).collect();
            if nz.is_empty() {
                out.push_str(&format!("field Q(params: {})\n", ps.names.join(",")));
            } else {
                out.push_str(&format!(
                    "field Q(params: {}; nonzero: {})\n",
                    ps.names.join(","),
                    nz.join(",")
                ));
            }
        }
    }
    for (name, deg) in p.table.entries() {
        out.push_str(&format!("var {name} deg {deg}\n"));
    }
    for rel in &p.relations {
        let (lead, lc) = rel.leading_term().expect("relations are nonzero");
        let mut rest = rel.clone();
        rest.add_term(lead.clone(), lc.neg());
        let lhs = Polynomial::monomial(lead.clone(), lc.clone());
        out.push_str(&format!(
            "rel {} = {}\n",
            render_polynomial(&lhs, &p.table, &p.field),
            render_polynomial(&rest.neg(), &p.table, &p.field)
        ));
    }
    out
}

/// Render a polynomial in the file grammar: every coefficient is split into
/// additive atoms (rational part, `w` part, numerator monomials over a
/// monomial denominator) so the output contains no parentheses.
pub fn render_polynomial(p: &Polynomial, table: &VariableTable, field: &FieldSpec) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for (w, c) in p.terms().rev() {
        for (neg, scalar) in scalar_atoms(c, field) {
            let mut body = String::new();
            if scalar != "1" || w.is_one() {
                body.push_str(&scalar);
            }
            if !w.is_one() {
                if !body.is_empty() {
                    body.push('*');
                }
                body.push_str(&w.display(table));
            }
            pieces.push((neg, body));
        }
    }
    let mut out = String::new();
    for (i, (neg, body)) in pieces.iter().enumerate() {
        if i == 0 {
            if *neg {
                out.push('-');
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        out.push_str(body);
    }
    out
}

/// Additive atoms of a coefficient as (negative?, factor-string) pairs,
/// each expressible in the file grammar.
fn scalar_atoms(c: &FieldElement, field: &FieldSpec) -> Vec<(bool, String)> {
    use num::Signed;
    let rat_atom = |q: &BigRational, extra: Option<&str>| -> (bool, String) {
        let neg = q.is_negative();
        let mag = q.abs();
        let mut s = String::new();
        match extra {
            Some(sym) => {
                if mag != BigRational::from_integer(1.into()) {
                    s.push_str(&format!("{mag}*"));
                }
                s.push_str(sym);
            }
            None => s.push_str(&mag.to_string()),
        }
        (neg, s)
    };
    match c {
        FieldElement::Rat(a) => vec![rat_atom(a, None)],
        FieldElement::Cyc(a, b) => {
            let mut out = Vec::new();
            if !num::Zero::is_zero(a) {
                out.push(rat_atom(a, None));
            }
            if !num::Zero::is_zero(b) {
                out.push(rat_atom(b, Some("w")));
            }
            out
        }
        FieldElement::Par(r) => {
            let FieldSpec::Parametric(ps) = field else { panic!("spec mismatch") };
            let den = r.den();
            assert!(
                den.is_monomial(),
                "file grammar needs monomial denominators"
            );
            let den_exps = den.leading().expect("nonzero denominator").0.clone();
            let mut out = Vec::new();
            for (exps, q) in r.num().terms().rev() {
                let neg = q.is_negative();
                let mag = q.abs();
                let mut factors: Vec<String> = Vec::new();
                let has_params = exps.total() > 0;
                if mag != BigRational::from_integer(1.into()) || !has_params {
                    factors.push(mag.to_string());
                }
                for (i, &e) in exps.0.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(ps.names[i].clone()),
                        _ => factors.push(format!("{}^{}", ps.names[i], e)),
                    }
                }
                let mut s = factors.join("*");
                for (i, &e) in den_exps.0.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("/{}", ps.names[i])),
                        _ => s.push_str(&format!("/{}^{}", ps.names[i], e)),
                    }
                }
                out.push((neg, s));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rational_presentation() {
        let text = "\
name demo
field Q
var x1 deg 1
var x2 deg 1
rel x2*x1 = -1/2*x1*x2
";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.name, "demo");
        assert_eq!(p.table.len(), 2);
        assert_eq!(p.relations.len(), 1);
        let rel = &p.relations[0];
        let (lead, c) = rel.leading_term().unwrap();
        assert_eq!(lead.display(&p.table), "x2*x1");
        assert!(c.is_one());
    }

    #[test]
    fn empty_relation_list_is_a_free_algebra() {
        let p = parse_presentation("field Q\nvar x deg 1\n").unwrap();
        assert!(p.relations.is_empty());
    }

    #[test]
    fn inhomogeneous_relation_is_rejected() {
        let text = "field Q\nvar x1 deg 1\nvar x2 deg 2\nrel x2*x1 = x1*x1\n";
        match parse_presentation(text) {
            Err(ParseError::InhomogeneousRelation { line: 4, .. }) => {}
            other => panic!("expected inhomogeneous error, got {other:?}"),
        }
    }

    #[test]
    fn cyclotomic_and_parametric_fields() {
        let p = parse_presentation(
            "field Q(w) minpoly w^2+w+1\nvar x deg 1\nvar y deg 1\nrel y*x = w*x*y\n",
        )
        .unwrap();
        assert_eq!(p.field, FieldSpec::Cyclotomic3);
        let p = parse_presentation(
            "field Q(params: a,b; nonzero: b)\nvar x deg 1\nvar y deg 1\nrel y*x = a*x*y\n",
        )
        .unwrap();
        assert!(matches!(p.field, FieldSpec::Parametric(_)));
    }

    #[test]
    fn order_line_sets_comparison_order() {
        let text = "\
field Q
var x1 deg 2
var x2 deg 1
var x3 deg 1
order x2 < x3 < x1
rel x1*x2 = x2*x1
";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.table.name(0), "x2");
        assert_eq!(p.table.name(2), "x1");
    }

    #[test]
    fn print_parse_round_trip() {
        let text = "\
name round-trip
field Q(w) minpoly w^2+w+1
var x1 deg 5
var x2 deg 3
var x3 deg 2
var x4 deg 1
var x5 deg 1
rel x3*x2 = x1 - x2*x3 - w*x2*x3
rel x5*x2 = -x2*x5 - w*x3*x3
";
        let p = parse_presentation(text).unwrap();
        let printed = print_presentation(&p);
        let q = parse_presentation(&printed).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn variable_powers_expand() {
        let p = parse_presentation("field Q\nvar x deg 1\nvar y deg 1\nrel y*x = x^2\n").unwrap();
        let (_, c) = p.relations[0].leading_term().unwrap();
        assert!(c.is_one());
        assert_eq!(p.relations[0].num_terms(), 2);
    }
}

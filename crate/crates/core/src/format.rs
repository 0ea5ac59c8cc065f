//! Plain-text element files and the machine-readable JSON form.
//!
//! An element file starts with `instance <descriptor>` followed by one term
//! per line. Hecke terms are `<coeff> [<element>]`; crossed-product terms
//! are `<coeff> mu*(<t>) e[<x>] mu(<s>)`. Blank lines and lines starting
//! with `#` are ignored. Terms are written in sorted key order.

use serde_json::{json, Value};

use crate::crossed::{CpElement, CrossedProduct, Monomial};
use crate::error::{Error, Result};
use crate::hecke::HeckeElement;
use crate::pair::{Descriptor, HeckePair};
use crate::quad::QuadScalar;

/// Reads the `instance` header without parsing the terms.
pub fn peek_instance(text: &str) -> Result<Descriptor> {
    body_lines(text).map(|(d, _)| d)
}

fn body_lines(text: &str) -> Result<(Descriptor, Vec<&str>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty element file".into()))?;
    let desc = header
        .strip_prefix("instance")
        .filter(|r| r.starts_with(char::is_whitespace))
        .ok_or_else(|| Error::Parse(format!("expected `instance <descriptor>`, found `{header}`")))?
        .parse()?;
    Ok((desc, lines.collect()))
}

fn parse_coeff(text: &str) -> Result<QuadScalar> {
    let text = text.trim();
    if text.is_empty() {
        Ok(QuadScalar::one())
    } else {
        text.parse()
    }
}

pub fn render_element<P: HeckePair>(pair: &P, h: &HeckeElement<P>) -> String {
    let mut out = format!("instance {}\n", h.instance());
    for (k, c) in h.terms() {
        out.push_str(&format!("{c} [{}]\n", pair.render_key(k)));
    }
    out
}

pub fn parse_element<P: HeckePair>(pair: &P, text: &str) -> Result<HeckeElement<P>> {
    let (desc, lines) = body_lines(text)?;
    pair.check_same(&desc)?;
    let mut out = HeckeElement::zero(desc);
    for line in lines {
        let bad = || Error::Parse(format!("bad term `{line}`: expected `<coeff> [<element>]`"));
        let (coeff, rest) = line.split_once('[').ok_or_else(bad)?;
        let elem = rest.trim_end().strip_suffix(']').ok_or_else(bad)?;
        out.add_term(pair.parse_key(elem)?, parse_coeff(coeff)?);
    }
    Ok(out)
}

pub fn render_monomial<P: HeckePair>(pair: &P, m: &Monomial<P>) -> String {
    format!("mu*({}) e[{}] mu({})", pair.render_s(&m.t), pair.render_key(&m.x), pair.render_s(&m.s))
}

pub fn render_cp<P: HeckePair>(pair: &P, a: &CpElement<P>) -> String {
    let mut out = format!("instance {}\n", a.instance());
    for (_, m, c) in a.terms() {
        out.push_str(&format!("{c} {}\n", render_monomial(pair, m)));
    }
    out
}

pub fn parse_monomial<P: HeckePair>(pair: &P, text: &str) -> Result<Monomial<P>> {
    let bad = || Error::Parse(format!("bad monomial `{text}`: expected `mu*(<t>) e[<x>] mu(<s>)`"));
    let rest = text.trim().strip_prefix("mu*(").ok_or_else(bad)?;
    let (t, rest) = rest.split_once(')').ok_or_else(bad)?;
    let rest = rest.trim_start().strip_prefix("e[").ok_or_else(bad)?;
    let (x, rest) = rest.rsplit_once(']').ok_or_else(bad)?;
    let s = rest.trim().strip_prefix("mu(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let x = pair.parse_key(x)?;
    if !pair.key_in_n(&x) {
        return Err(Error::NotInN);
    }
    Ok(Monomial { t: pair.parse_s(t)?, x, s: pair.parse_s(s)? })
}

pub fn parse_cp<P: HeckePair>(cp: &CrossedProduct<P>, text: &str) -> Result<CpElement<P>> {
    let pair = cp.algebra().pair();
    let (desc, lines) = body_lines(text)?;
    pair.check_same(&desc)?;
    let mut out = cp.zero();
    for line in lines {
        let at = line
            .find("mu*(")
            .ok_or_else(|| Error::Parse(format!("bad term `{line}`: expected `<coeff> mu*(<t>) e[<x>] mu(<s>)`")))?;
        let m = parse_monomial(pair, &line[at..])?;
        cp.add_monomial(&mut out, m, parse_coeff(&line[..at])?);
    }
    Ok(out)
}

pub fn element_json<P: HeckePair>(pair: &P, h: &HeckeElement<P>) -> Value {
    let terms: Vec<Value> =
        h.terms().iter().map(|(k, c)| json!({ "coeff": c.to_string(), "element": pair.render_key(k) })).collect();
    json!({ "instance": h.instance().to_string(), "terms": terms })
}

pub fn cp_json<P: HeckePair>(pair: &P, a: &CpElement<P>) -> Value {
    let terms: Vec<Value> = a
        .terms()
        .map(|(_, m, c)| {
            json!({
                "coeff": c.to_string(),
                "t": pair.render_s(&m.t),
                "x": pair.render_key(&m.x),
                "s": pair.render_s(&m.s),
            })
        })
        .collect();
    json!({ "instance": a.instance().to_string(), "terms": terms })
}

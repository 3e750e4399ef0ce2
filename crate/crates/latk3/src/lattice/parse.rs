//! The lattice expression language and the JSON Gram file format.
//!
//! ```text
//! expr := term ("+" term)*
//! term := [int "*"] atom ["(" nonzero-int ")"]
//! atom := name | "@" path | "(" nonzero-int ")"
//! ```

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::Value;

use crate::exactmat::IntMatrix;
use crate::{Error, Result};

use super::{catalog, IntegralLattice};

const MAX_RANK: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Name(String),
    File(String),
    /// The rank one lattice `(a)`.
    Scalar(BigInt),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub count: usize,
    pub atom: Atom,
    pub scale: Option<BigInt>,
    pub pos: usize,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn digits(&mut self) -> &'a str {
        let r = self.rest();
        let n = r.bytes().take_while(|b| b.is_ascii_digit()).count();
        self.pos += n;
        &r[..n]
    }

    fn signed_int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        let neg = if self.eat('-') || self.eat('\u{2212}') {
            true
        } else {
            self.eat('+');
            false
        };
        self.skip_ws();
        let d = self.digits();
        if d.is_empty() {
            self.pos = start;
            return self.err("expected an integer");
        }
        let v: BigInt = d.parse().expect("ascii digits");
        Ok(if neg { -v } else { v })
    }

    fn nonzero_int(&mut self) -> Result<BigInt> {
        let start = self.pos;
        let v = self.signed_int()?;
        if v.is_zero() {
            self.pos = start;
            return self.err("zero scale");
        }
        Ok(v)
    }
}

/// Parse an expression into terms without resolving names or files.
pub fn parse_terms(text: &str) -> Result<Vec<Term>> {
    let mut lx = Lexer { src: text, pos: 0 };
    let mut terms = Vec::new();
    loop {
        lx.skip_ws();
        let pos = lx.pos;
        let mut count = 1usize;
        if lx.peek().is_some_and(|c| c.is_ascii_digit()) {
            let d = lx.digits();
            let k: usize = match d.parse() {
                Ok(k) if k > 0 && k <= MAX_RANK => k,
                _ => {
                    lx.pos = pos;
                    return lx.err("repeat count out of range");
                }
            };
            lx.expect('*')?;
            count = k;
        }
        let atom = match lx.peek() {
            Some('@') => {
                lx.pos += 1;
                let r = lx.rest();
                let n = r.find(|c: char| c.is_whitespace() || c == '+' || c == '(').unwrap_or(r.len());
                if n == 0 {
                    return lx.err("empty file name");
                }
                lx.pos += n;
                Atom::File(r[..n].to_string())
            }
            Some('(') => {
                lx.pos += 1;
                let v = lx.nonzero_int()?;
                lx.expect(')')?;
                Atom::Scalar(v)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let r = lx.rest();
                let n = r.bytes().take_while(|b| b.is_ascii_alphanumeric()).count();
                lx.pos += n;
                Atom::Name(r[..n].to_string())
            }
            _ => return lx.err("expected a lattice name"),
        };
        let scale = if lx.eat('(') {
            let v = lx.nonzero_int()?;
            lx.expect(')')?;
            Some(v)
        } else {
            None
        };
        terms.push(Term { count, atom, scale, pos });
        if lx.peek().is_none() {
            break;
        }
        lx.expect('+')?;
    }
    Ok(terms)
}

/// Parse and assemble, resolving `@path` references through `load`.
pub fn parse_lattice_expr_with(
    text: &str,
    load: &mut dyn FnMut(&str) -> Result<IntegralLattice>,
) -> Result<IntegralLattice> {
    let terms = parse_terms(text)?;
    let mut parts = Vec::new();
    let mut rank = 0usize;
    for t in &terms {
        let base = match &t.atom {
            Atom::Name(n) => catalog::by_name(n)?,
            Atom::File(f) => load(f)?,
            Atom::Scalar(a) => IntegralLattice::new(IntMatrix::diagonal(std::slice::from_ref(a)))?,
        };
        let l = match &t.scale {
            Some(a) => base.rescale(a)?,
            None => base,
        };
        rank += l.rank() * t.count;
        if rank > MAX_RANK {
            return Err(Error::Parse { pos: t.pos, msg: format!("total rank exceeds {MAX_RANK}") });
        }
        for _ in 0..t.count {
            parts.push(l.clone());
        }
    }
    let mut out = IntegralLattice::direct_sum(&parts)?;
    if terms.len() > 1 || terms[0].count > 1 || terms[0].scale.is_some() {
        out = out.with_label(text.trim());
    }
    Ok(out)
}

/// Parse and assemble; `@path` is read relative to the working directory.
pub fn parse_lattice_expr(text: &str) -> Result<IntegralLattice> {
    parse_lattice_expr_with(text, &mut |p| read_gram_file(std::path::Path::new(p)))
}

pub fn read_gram_file(path: &std::path::Path) -> Result<IntegralLattice> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_gram_json(&text)
}

fn json_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::Invalid(format!("non-integer entry {n}")))
            }
        }
        Value::String(s) => {
            let t = s.trim();
            let ok = !t.is_empty() && t.trim_start_matches('-').bytes().all(|b| b.is_ascii_digit()) && t != "-";
            if !ok {
                return Err(Error::Invalid(format!("non-integer entry {s:?}")));
            }
            Ok(t.parse().expect("checked digits"))
        }
        other => Err(Error::Invalid(format!("non-integer entry {other}"))),
    }
}

/// `{"gram": [[...], ...], "label": "..."}`. Entries are JSON integers or
/// decimal strings for values beyond 64 bits.
pub fn parse_gram_json(text: &str) -> Result<IntegralLattice> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("json: {e}")))?;
    let obj = v.as_object().ok_or_else(|| Error::Invalid("expected a json object".into()))?;
    let rows = obj
        .get("gram")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Invalid("missing `gram` array".into()))?;
    if rows.is_empty() || rows.len() > MAX_RANK {
        return Err(Error::Invalid(format!("gram has {} rows", rows.len())));
    }
    let mut m = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.as_array().ok_or_else(|| Error::Invalid("gram rows must be arrays".into()))?;
        m.push(r.iter().map(json_int).collect::<Result<Vec<_>>>()?);
    }
    let mut l = IntegralLattice::new(IntMatrix::from_rows(m)?)?;
    match obj.get("label") {
        None | Some(Value::Null) => {}
        Some(Value::String(s)) => l = l.with_label(s.clone()),
        Some(_) => return Err(Error::Invalid("`label` must be a string".into())),
    }
    Ok(l)
}

pub fn to_gram_json(l: &IntegralLattice) -> Value {
    let rows: Vec<Value> = l
        .gram()
        .to_rows()
        .into_iter()
        .map(|r| Value::Array(r.iter().map(int_value).collect()))
        .collect();
    let mut obj = serde_json::Map::new();
    obj.insert("gram".into(), Value::Array(rows));
    if let Some(s) = l.label() {
        obj.insert("label".into(), Value::String(s.to_string()));
    }
    Value::Object(obj)
}

/// Integers that fit in 64 bits become JSON numbers, others decimal strings.
pub fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(x.to_string()),
    }
}

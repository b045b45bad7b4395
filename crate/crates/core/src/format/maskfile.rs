//! Mask files:
//!
//! ```text
//! p 2
//! n 2
//! a 0 1/2
//! a 3 1/2
//! ```
//!
//! `a <alpha> <c0> [<c1> ..]` gives a coefficient by its coordinates over
//! `1, ζ, .., ζ^{p-2}`; `v <cell> <c0> [..]` gives a cell value instead.
//! Unlisted entries are zero. After `backend float` the coordinates become
//! `<re> [<im>]` decimals.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::lexer::{parse_int, Cursor, Tok};
use super::ParseError;
use crate::group::Prime;
use crate::mask::{Approx, Cyclotomic, Mask, Scalar, MAX_MASK_LEN};

#[derive(Clone, Debug, PartialEq)]
pub enum ParsedMask {
    Exact(Mask<Cyclotomic>),
    Float(Mask<Approx>),
}

impl ParsedMask {
    pub fn prime(&self) -> Prime {
        match self {
            ParsedMask::Exact(m) => m.prime(),
            ParsedMask::Float(m) => m.prime(),
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            ParsedMask::Exact(m) => m.n(),
            ParsedMask::Float(m) => m.n(),
        }
    }
}

/// `n/d`, an integer, or an exact decimal such as `-0.25`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    if text.contains('/') {
        let r = BigRational::from_str(text).ok()?;
        return Some(r);
    }
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all_digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Some(BigRational::new(numer * sign, denom))
}

enum Kind {
    Coeff,
    Value,
}

struct Entry {
    at: Tok,
    index: usize,
    coords: Vec<Tok>,
}

/// Parses a mask file.
pub fn parse_mask(text: &str) -> Result<ParsedMask, ParseError> {
    let mut cur = Cursor::new(text);
    let mut prime = None;
    let mut n = None;
    let mut float = false;
    let mut kind: Option<(Kind, Tok)> = None;
    let mut entries: Vec<Entry> = Vec::new();
    while let Some(kw) = cur.next() {
        match kw.text.as_str() {
            "p" | "n" if !entries.is_empty() => {
                return Err(kw.error(format!("`{}` must precede the entries", kw.text)))
            }
            "p" if prime.is_none() => {
                let t = cur.expect("a prime")?;
                let v: u32 = parse_int(&t, "prime")?;
                prime = Some(Prime::new(v).map_err(|e| t.error(e.to_string()))?);
            }
            "n" if n.is_none() => {
                let t = cur.expect("a length")?;
                let v: u32 = parse_int(&t, "length")?;
                if v == 0 {
                    return Err(t.error("n must be at least 1"));
                }
                n = Some((v, t));
            }
            "backend" => {
                let t = cur.expect("`float` or `exact`")?;
                match t.text.as_str() {
                    "float" => float = true,
                    "exact" => float = false,
                    other => return Err(t.error(format!("unknown backend `{other}`"))),
                }
            }
            "a" | "v" => {
                let this = if kw.text == "a" { Kind::Coeff } else { Kind::Value };
                if let Some((k, first)) = &kind {
                    if std::mem::discriminant(k) != std::mem::discriminant(&this) {
                        return Err(kw.error(format!(
                            "`a` and `v` lines cannot be mixed (line {} uses `{}`)",
                            first.line, first.text
                        )));
                    }
                } else {
                    kind = Some((this, kw.clone()));
                }
                let idx = cur.expect("an index")?;
                let index: usize = parse_int(&idx, "index")?;
                let mut coords = Vec::new();
                while cur.same_line(&kw) {
                    coords.push(cur.next().expect("peeked"));
                }
                if coords.is_empty() {
                    return Err(idx.error("expected a value after the index"));
                }
                entries.push(Entry { at: idx, index, coords });
            }
            "p" | "n" => return Err(kw.error(format!("`{}` given twice", kw.text))),
            other => return Err(kw.error(format!("unknown statement `{other}`"))),
        }
    }
    let missing = |what: &str| ParseError::new(1, 1, format!("missing `{what}` line"));
    let prime = prime.ok_or_else(|| missing("p"))?;
    let (n, n_tok) = n.ok_or_else(|| missing("n"))?;
    let len = (prime.get() as u64)
        .checked_pow(n)
        .filter(|&l| l <= MAX_MASK_LEN)
        .ok_or_else(|| n_tok.error(format!("p^n exceeds {MAX_MASK_LEN}")))? as usize;
    let by_values = matches!(kind, Some((Kind::Value, _)));
    let mut seen = vec![None; len];
    for e in &entries {
        if e.index >= len {
            return Err(e.at.error(format!("index {} is not below p^n = {len}", e.index)));
        }
        if let Some(line) = seen[e.index] {
            return Err(e.at.error(format!("index {} already given on line {line}", e.index)));
        }
        seen[e.index] = Some(e.at.line);
    }
    if float {
        let mut xs = vec![Approx::zero(prime); len];
        for e in &entries {
            if e.coords.len() > 2 {
                return Err(e.coords[2].error("float values take `<re> [<im>]`"));
            }
            let num = |t: &Tok| -> Result<f64, ParseError> {
                t.text
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| t.error(format!("`{}` is not a finite number", t.text)))
            };
            let re = num(&e.coords[0])?;
            let im = e.coords.get(1).map(num).transpose()?.unwrap_or(0.0);
            xs[e.index] = Approx::new(prime, Complex64::new(re, im));
        }
        let m = if by_values {
            Mask::from_values(prime, n, xs)
        } else {
            Mask::new(prime, n, xs)
        };
        return m.map(ParsedMask::Float).map_err(|e| n_tok.error(e.to_string()));
    }
    let mut xs = vec![Cyclotomic::zero(prime); len];
    for e in &entries {
        if e.coords.len() > prime.get() as usize - 1 {
            return Err(e.coords[prime.get() as usize - 1].error(format!(
                "at most {} coordinates over 1, ζ, .., ζ^{}",
                prime.get() - 1,
                prime.get() - 2
            )));
        }
        let coords = e
            .coords
            .iter()
            .map(|t| {
                parse_rational(&t.text)
                    .ok_or_else(|| t.error(format!("`{}` is not an exact rational", t.text)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        xs[e.index] = Cyclotomic::from_coords(prime, coords).expect("length checked");
    }
    let m = if by_values {
        Mask::from_values(prime, n, xs)
    } else {
        Mask::new(prime, n, xs)
    };
    m.map(ParsedMask::Exact).map_err(|e| n_tok.error(e.to_string()))
}

/// Canonical text of an exact mask in coefficient form.
pub fn print_mask(m: &Mask<Cyclotomic>) -> String {
    let mut out = format!("p {}\nn {}\n", m.prime(), m.n());
    for (alpha, a) in m.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mut coords: Vec<String> = a.coords().iter().map(|c| c.to_string()).collect();
        while coords.len() > 1 && coords.last().is_some_and(|c| c == "0") {
            coords.pop();
        }
        out.push_str(&format!("a {alpha} {}\n", coords.join(" ")));
    }
    out
}

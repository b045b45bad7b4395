//! Set files:
//!
//! ```text
//! p 3
//! cyl 1.
//! cyl 0.2
//! cyl 0. res -1
//! tail r 1 from 1 anchor 0. body { cyl 1. }
//! ```

use std::fmt::Write as _;

use super::lexer::{parse_int, Cursor, Tok};
use super::ParseError;
use crate::cylinder::Cylinder;
use crate::error::Error;
use crate::group::{Point, Prime};
use crate::set::CylinderSet;
use crate::stream::{PieceOrigin, PieceStream, TailFamily};

fn parse_prime(cur: &mut Cursor) -> Result<Prime, ParseError> {
    let kw = cur.expect("`p <prime>`")?;
    if kw.text != "p" {
        return Err(kw.error(format!("the file must start with `p <prime>`, found `{}`", kw.text)));
    }
    let t = cur.expect("a prime")?;
    let n: u32 = parse_int(&t, "prime")?;
    Prime::new(n).map_err(|e| t.error(e.to_string()))
}

fn parse_point(prime: Prime, t: &Tok) -> Result<(Point, usize), ParseError> {
    Point::parse_token(prime, &t.text).map_err(|e| {
        ParseError::new(t.line, t.column + e.column, e.message)
    })
}

/// `cyl TOKEN [res N]`, after the keyword.
fn parse_cylinder(prime: Prime, cur: &mut Cursor) -> Result<(Cylinder, Tok), ParseError> {
    let t = cur.expect("a point token")?;
    let (anchor, frac) = parse_point(prime, &t)?;
    let mut resolution = frac as i64;
    if cur.peek().is_some_and(|n| n.text == "res") {
        cur.next();
        let r = cur.expect("a resolution")?;
        resolution = parse_int(&r, "resolution")?;
    }
    let c = Cylinder::new(anchor, resolution).map_err(|e| t.error(e.to_string()))?;
    Ok((c, t))
}

/// Rejects overlapping cylinders, citing both lines.
fn check_disjoint(cells: &mut [(Cylinder, Tok)]) -> Result<(), ParseError> {
    cells.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.line.cmp(&b.1.line)));
    for w in cells.windows(2) {
        if w[0].0.intersects(&w[1].0) {
            let (first, second) = if w[0].1.line <= w[1].1.line {
                (&w[0], &w[1])
            } else {
                (&w[1], &w[0])
            };
            return Err(second.1.error(format!(
                "cylinder {} overlaps cylinder {} on line {}",
                second.0, first.0, first.1.line
            )));
        }
    }
    Ok(())
}

struct TailDecl {
    family: TailFamily,
    line: Tok,
}

fn parse_tail(prime: Prime, kw: Tok, cur: &mut Cursor) -> Result<TailDecl, ParseError> {
    let (mut ratio, mut start, mut anchor) = (None, None, None);
    loop {
        let key = cur.expect("`r`, `from`, `anchor` or `body`")?;
        match key.text.as_str() {
            "r" if ratio.is_none() => {
                let t = cur.expect("a ratio")?;
                let r: u32 = parse_int(&t, "ratio")?;
                if r == 0 {
                    return Err(t.error("tail ratio must be at least 1"));
                }
                ratio = Some(r);
            }
            "from" if start.is_none() => start = Some(parse_int::<u32>(&cur.expect("a start index")?, "start index")?),
            "anchor" if anchor.is_none() => {
                let t = cur.expect("an anchor token")?;
                anchor = Some((parse_point(prime, &t)?.0, t));
            }
            "body" => break,
            "r" | "from" | "anchor" => return Err(key.error(format!("`{}` given twice", key.text))),
            other => return Err(key.error(format!("unknown tail key `{other}`"))),
        }
    }
    let missing = |what: &str| kw.error(format!("tail needs `{what}`"));
    let ratio = ratio.ok_or_else(|| missing("r"))?;
    let start = start.ok_or_else(|| missing("from"))?;
    let (anchor, anchor_tok) = anchor.ok_or_else(|| missing("anchor"))?;
    cur.keyword("{")?;
    let mut cells = Vec::new();
    loop {
        let t = cur.expect("`cyl` or `}`")?;
        match t.text.as_str() {
            "}" => break,
            "cyl" => cells.push(parse_cylinder(prime, cur)?),
            other => return Err(t.error(format!("expected `cyl` or `}}` in tail body, found `{other}`"))),
        }
    }
    check_disjoint(&mut cells)?;
    let body = CylinderSet::from_cylinders(prime, cells.into_iter().map(|(c, _)| c))
        .map_err(|e| kw.error(e.to_string()))?;
    let family = TailFamily::new(ratio, anchor, body, start).map_err(|e| match e {
        Error::Domain(m) => anchor_tok.error(m),
        other => kw.error(other.to_string()),
    })?;
    Ok(TailDecl { family, line: kw })
}

/// Parses a set file into a validated stream.
pub fn parse_set(text: &str) -> Result<PieceStream, ParseError> {
    let mut cur = Cursor::new(text);
    let prime = parse_prime(&mut cur)?;
    let mut cells = Vec::new();
    let mut tails = Vec::new();
    while let Some(kw) = cur.next() {
        match kw.text.as_str() {
            "cyl" => cells.push(parse_cylinder(prime, &mut cur)?),
            "tail" => tails.push(parse_tail(prime, kw, &mut cur)?),
            "p" => return Err(kw.error("`p` given twice")),
            other => return Err(kw.error(format!("unknown statement `{other}`"))),
        }
    }
    check_disjoint(&mut cells)?;
    let finite =
        CylinderSet::from_cylinders(prime, cells.iter().map(|(c, _)| c.clone())).expect("same prime");
    let families = tails.iter().map(|t| t.family.clone()).collect();
    let stream = PieceStream::described_unchecked(finite, families);
    if let Some(o) = stream.find_overlap() {
        let line_of = |origin: PieceOrigin, c: &Cylinder| -> usize {
            match origin {
                PieceOrigin::Tail { family, .. } => tails[family].line.line,
                _ => cells
                    .iter()
                    .find(|(cell, _)| cell.intersects(c))
                    .map_or(0, |(_, t)| t.line),
            }
        };
        let a = line_of(o.first.0, &o.first.1);
        let b = line_of(o.second.0, &o.second.1);
        let at = tails
            .iter()
            .map(|t| &t.line)
            .find(|t| t.line == a.max(b))
            .cloned()
            .unwrap_or(Tok {
                text: String::new(),
                line: a.max(b),
                column: 1,
            });
        return Err(at.error(format!(
            "pieces from lines {} and {} overlap: {o}",
            a.min(b),
            a.max(b)
        )));
    }
    Ok(stream)
}

fn write_cylinder(out: &mut String, indent: &str, c: &Cylinder) {
    let _ = writeln!(out, "{indent}cyl {c}");
}

/// Canonical text of a finite set.
pub fn print_set(set: &CylinderSet) -> String {
    let mut out = format!("p {}\n", set.prime());
    for c in set.iter() {
        write_cylinder(&mut out, "", c);
    }
    out
}

/// Canonical text of a described stream; `None` for generated streams.
pub fn print_stream(stream: &PieceStream) -> Option<String> {
    let mut out = print_set(stream.finite_part()?);
    for t in stream.tails() {
        let _ = writeln!(
            out,
            "tail r {} from {} anchor {} body {{",
            t.ratio(),
            t.start(),
            t.anchor().to_token(0)
        );
        for c in t.body().iter() {
            write_cylinder(&mut out, "  ", c);
        }
        out.push_str("}\n");
    }
    Some(out)
}

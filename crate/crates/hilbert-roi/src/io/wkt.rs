//! Well-known text `POLYGON`.
//!
//! Both `POLYGON ((x y, ...), (x y, ...))` and the single-ring shorthand
//! `POLYGON (x y, ...)` are read. Output always uses the standard form with
//! explicitly closed rings.

use std::fmt::Write as _;

use hilbert_roi_core::PolygonGeom;

use super::{closed, RawPolygon};
use crate::error::{Error, Result};

const FMT: &str = "WKT";

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Num(f64),
    Open,
    Close,
    Comma,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    /// Next token and its byte offset.
    fn next(&mut self) -> Result<(Tok, usize)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let tok = match b {
            b'(' => {
                self.pos += 1;
                Tok::Open
            }
            b')' => {
                self.pos += 1;
                Tok::Close
            }
            b',' => {
                self.pos += 1;
                Tok::Comma
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while self.pos < bytes.len() && bytes[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                Tok::Word(self.src[start..self.pos].to_ascii_uppercase())
            }
            b'0'..=b'9' | b'-' | b'+' | b'.' => {
                while self.pos < bytes.len()
                    && matches!(
                        bytes[self.pos],
                        b'0'..=b'9' | b'-' | b'+' | b'.' | b'e' | b'E'
                    )
                {
                    self.pos += 1;
                }
                let text = &self.src[start..self.pos];
                let v = text
                    .parse::<f64>()
                    .map_err(|_| Error::parse(FMT, start, format!("bad number `{text}`")))?;
                Tok::Num(v)
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                return Err(Error::parse(
                    FMT,
                    start,
                    format!("unexpected character `{ch}`"),
                ));
            }
        };
        Ok((tok, start))
    }

    fn peek(&mut self) -> Result<Tok> {
        let saved = self.pos;
        let (t, _) = self.next()?;
        self.pos = saved;
        Ok(t)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let (t, at) = self.next()?;
        if t == want {
            Ok(())
        } else {
            Err(Error::parse(
                FMT,
                at,
                format!("expected {what}, found {t:?}"),
            ))
        }
    }
}

/// Parse without quantizing.
pub fn parse_wkt_raw(text: &str) -> Result<RawPolygon> {
    let mut lx = Lexer::new(text);
    let (tok, at) = lx.next()?;
    match tok {
        Tok::Word(w) if w == "POLYGON" => {}
        Tok::Word(w) => return Err(Error::UnsupportedType(w)),
        other => {
            return Err(Error::parse(
                FMT,
                at,
                format!("expected POLYGON, found {other:?}"),
            ))
        }
    }
    if let Tok::Word(w) = lx.peek()? {
        let (_, at) = lx.next()?;
        return Err(if w == "EMPTY" {
            Error::parse(FMT, at, "empty polygons are not supported")
        } else {
            Error::parse(FMT, at, format!("unsupported modifier `{w}`"))
        });
    }
    lx.expect(Tok::Open, "`(`")?;
    let rings = if lx.peek()? == Tok::Open {
        let mut rings = Vec::new();
        loop {
            lx.expect(Tok::Open, "`(`")?;
            rings.push(parse_coords(&mut lx)?);
            let (t, at) = lx.next()?;
            match t {
                Tok::Comma => continue,
                Tok::Close => break,
                other => {
                    return Err(Error::parse(
                        FMT,
                        at,
                        format!("expected `,` or `)`, found {other:?}"),
                    ))
                }
            }
        }
        rings
    } else {
        vec![parse_coords(&mut lx)?]
    };
    let (t, at) = lx.next()?;
    if t != Tok::End {
        return Err(Error::parse(FMT, at, format!("trailing input {t:?}")));
    }
    Ok(RawPolygon { rings })
}

/// `x y, x y, ... )` including the closing parenthesis.
fn parse_coords(lx: &mut Lexer<'_>) -> Result<Vec<(f64, f64)>> {
    let mut ring = Vec::new();
    loop {
        let mut coord = [0.0; 2];
        for c in &mut coord {
            let (t, at) = lx.next()?;
            match t {
                Tok::Num(v) => *c = v,
                other => {
                    return Err(Error::parse(
                        FMT,
                        at,
                        format!("expected number, found {other:?}"),
                    ))
                }
            }
        }
        ring.push((coord[0], coord[1]));
        let (t, at) = lx.next()?;
        match t {
            Tok::Comma => continue,
            Tok::Close => return Ok(ring),
            Tok::Num(_) => return Err(Error::parse(FMT, at, "only 2-D coordinates are supported")),
            other => {
                return Err(Error::parse(
                    FMT,
                    at,
                    format!("expected `,` or `)`, found {other:?}"),
                ))
            }
        }
    }
}

pub fn parse_wkt(text: &str) -> Result<PolygonGeom> {
    parse_wkt_raw(text)?.quantize(1.0)
}

pub fn emit_wkt(poly: &PolygonGeom) -> String {
    let mut out = String::from("POLYGON (");
    for (i, ring) in poly.rings().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('(');
        for (j, p) in closed(ring).enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{} {}", p.x, p.y);
        }
        out.push(')');
    }
    out.push(')');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hilbert_roi_core::Point;

    #[test]
    fn single_and_double_paren_forms() {
        let a = parse_wkt("POLYGON (1 1, 1 4, 3 5, 5 3, 4 1, 1 1)").unwrap();
        let b = parse_wkt("polygon((1 1,1 4,3 5,5 3,4 1,1 1))").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.outer().len(), 5);
        let sq = parse_wkt("POLYGON ((0 0, 0 1, 1 1, 1 0, 0 0))").unwrap();
        assert_eq!(
            sq.outer(),
            &[
                Point::new(0, 0),
                Point::new(0, 1),
                Point::new(1, 1),
                Point::new(1, 0)
            ]
        );
        assert_eq!(emit_wkt(&sq), "POLYGON ((0 0, 0 1, 1 1, 1 0, 0 0))");
    }

    #[test]
    fn holes() {
        let t = "POLYGON ((0 0, 10 0, 10 10, 0 10, 0 0), (2 2, 2 4, 4 4, 4 2, 2 2))";
        let p = parse_wkt(t).unwrap();
        assert_eq!(p.holes().len(), 1);
        assert_eq!(emit_wkt(&p), t);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_wkt("POINT (1 1)"), Err(Error::UnsupportedType(t)) if t == "POINT"));
        assert!(matches!(
            parse_wkt("LINESTRING (0 0, 1 1)"),
            Err(Error::UnsupportedType(_))
        ));
        assert!(matches!(
            parse_wkt("POLYGON ((0 0, 1 0 1 1, 0 0))"),
            Err(Error::Parse { position: 19, .. })
        ));
        assert!(matches!(
            parse_wkt("POLYGON ((0 0, 1 0, 1 1)"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_wkt("POLYGON EMPTY"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_wkt("POLYGON ((0 0, 1 x))"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_wkt("POLYGON ((0 0, 1 0, 1 1)) junk"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_wkt("POLYGON ((0 0, 1.5 0, 1 1))"),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            parse_wkt("POLYGON ((0 0, 1 1, 0 0))"),
            Err(Error::Core(_))
        ));
    }

    #[test]
    fn integral_floats_accepted() {
        let p = parse_wkt("POLYGON ((0.0 0, 2e0 0, 2 2.0))").unwrap();
        assert_eq!(p.outer()[1], Point::new(2, 0));
    }
}

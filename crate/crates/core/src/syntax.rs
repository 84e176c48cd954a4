//! Text syntax for fields, square classes and forms.
//!
//! ```text
//! field  := ("F3" | "R" | "C" | "F9") "[" [var ("," var)*] "]"
//! form   := term ("+" term)*
//! term   := [class "*"] ("<" [class ("," class)*] ">" | "<<" [class ("," class)*] ">>")
//! class  := ["-"] factor ("*" factor)*
//! factor := "1" | "t" digits | "u"
//! ```
//!
//! `+` is the orthogonal sum. `u` names the non-square unit of the `F9` base.

use crate::error::{Error, Result};
use crate::qform::{DiagonalForm, PfisterSpec};
use crate::sqclass::{Base, FieldDesc, SquareClass, MAX_VARS};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn peek2(&mut self) -> Option<(u8, u8)> {
        self.skip_ws();
        Some((*self.s.get(self.pos)?, *self.s.get(self.pos + 1)?))
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "number too large".into() })
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            Err(self.err("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

pub fn parse_field(s: &str) -> Result<FieldDesc> {
    let mut c = Cursor::new(s);
    c.skip_ws();
    let rest = &s[c.pos..];
    let (base, len) = if rest.starts_with("F3") {
        (Base::F3, 2)
    } else if rest.starts_with("F9") {
        (Base::SquareMinusOne, 2)
    } else if rest.starts_with('R') {
        (Base::R, 1)
    } else if rest.starts_with('C') {
        (Base::C, 1)
    } else {
        return Err(c.err("expected base F3, R, C or F9"));
    };
    c.pos += len;
    c.expect(b'[')?;
    let mut n = 0;
    if !c.eat(b']') {
        loop {
            c.skip_ws();
            let at = c.pos;
            c.expect(b't')?;
            let k = c.number()?;
            if k != n + 1 {
                return Err(Error::Parse {
                    pos: at,
                    msg: format!("variables must be t1..tn in order; found t{k} at position {}", n + 1),
                });
            }
            n = k;
            if c.eat(b']') {
                break;
            }
            c.expect(b',')?;
        }
    }
    c.finish()?;
    FieldDesc::new(base, n).map_err(|e| Error::Parse { pos: 0, msg: e.to_string() })
}

fn parse_class_at(c: &mut Cursor, field: &FieldDesc) -> Result<SquareClass> {
    let mut a = SquareClass::ONE;
    if c.eat(b'-') {
        a = field.minus_one();
    }
    loop {
        c.skip_ws();
        let at = c.pos;
        match c.peek() {
            Some(b'1') => {
                c.pos += 1;
            }
            Some(b't') => {
                c.pos += 1;
                let k = c.number()?;
                if k == 0 || k > field.nvars.min(MAX_VARS) {
                    return Err(Error::UnknownVariable { index: k, nvars: field.nvars });
                }
                a *= SquareClass(1 << k);
            }
            Some(b'u') if field.base == Base::SquareMinusOne => {
                c.pos += 1;
                a *= SquareClass(1);
            }
            _ => return Err(Error::Parse { pos: at, msg: "expected 1, t<k> or u".into() }),
        }
        let save = c.pos;
        if !c.eat(b'*') {
            return Ok(a);
        }
        // `c*<...>` is a scaled form, not another factor.
        if c.peek() == Some(b'<') {
            c.pos = save;
            return Ok(a);
        }
    }
}

pub fn parse_class(s: &str, field: &FieldDesc) -> Result<SquareClass> {
    let mut c = Cursor::new(s);
    let a = parse_class_at(&mut c, field)?;
    c.finish()?;
    Ok(a)
}

fn parse_list(c: &mut Cursor, field: &FieldDesc, close: &[u8]) -> Result<Vec<SquareClass>> {
    let mut out = Vec::new();
    let at_close = |c: &mut Cursor| {
        c.skip_ws();
        c.s[c.pos..].starts_with(close)
    };
    if at_close(c) {
        c.pos += close.len();
        return Ok(out);
    }
    loop {
        out.push(parse_class_at(c, field)?);
        if at_close(c) {
            c.pos += close.len();
            return Ok(out);
        }
        c.expect(b',')?;
    }
}

fn parse_term(c: &mut Cursor, field: &FieldDesc) -> Result<DiagonalForm> {
    let mut scalar = SquareClass::ONE;
    if c.peek() != Some(b'<') {
        scalar = parse_class_at(c, field)?;
        c.expect(b'*')?;
    }
    if c.peek2() == Some((b'<', b'<')) {
        c.pos += 2;
        let slots = parse_list(c, field, b">>")?;
        Ok(PfisterSpec::new(scalar, slots).expand(field))
    } else {
        c.expect(b'<')?;
        let entries = parse_list(c, field, b">")?;
        Ok(DiagonalForm::new(*field, entries)?.scale(scalar))
    }
}

pub fn parse_form(s: &str, field: &FieldDesc) -> Result<DiagonalForm> {
    let mut c = Cursor::new(s);
    let mut form = parse_term(&mut c, field)?;
    while c.eat(b'+') {
        let t = parse_term(&mut c, field)?;
        form = form.orth_sum(&t)?;
    }
    c.finish()?;
    Ok(form)
}

pub fn print_form(form: &DiagonalForm) -> String {
    let parts: Vec<String> = form.entries().iter().map(|&a| form.field().print_class(a)).collect();
    format!("<{}>", parts.join(","))
}

pub fn print_pfister(field: &FieldDesc, spec: &PfisterSpec) -> String {
    let slots: Vec<String> = spec.slots.iter().map(|&a| field.print_class(a)).collect();
    if spec.scalar == SquareClass::ONE {
        format!("<<{}>>", slots.join(","))
    } else {
        format!("{}*<<{}>>", field.print_class(spec.scalar), slots.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_examples() {
        assert_eq!(parse_field("F3[t1,t2]").unwrap(), FieldDesc::f3(2));
        assert_eq!(parse_field("C[]").unwrap(), FieldDesc::complex(0));
        assert_eq!(parse_field(" R[ t1 , t2 ,t3 ] ").unwrap(), FieldDesc::real(3));
        assert!(matches!(parse_field("F3[t2]"), Err(Error::Parse { .. })));
        assert!(matches!(parse_field("Q[t1]"), Err(Error::Parse { pos: 0, .. })));
        assert!(parse_field("F3[t1,]").is_err());
        assert!(parse_field("F3[t1] x").is_err());
    }

    #[test]
    fn form_examples() {
        let f = FieldDesc::f3(2);
        let phi = parse_form("<1,-t1,t2*t1>", &f).unwrap();
        assert_eq!(print_form(&phi), "<1,t1*t2,-t1>");
        let pf = parse_form("<<t1,t2>>", &f).unwrap();
        assert_eq!(pf, parse_form("<1,-t1,-t2,t1*t2>", &f).unwrap());
        let g = FieldDesc::f3(1);
        assert_eq!(
            parse_form("<t3>", &g),
            Err(Error::UnknownVariable { index: 3, nvars: 1 })
        );
    }

    #[test]
    fn scaled_and_sums() {
        let f = FieldDesc::f3(3);
        let a = parse_form("t3*<<t1>>", &f).unwrap();
        assert_eq!(a, parse_form("<t3,-t1*t3>", &f).unwrap());
        let b = parse_form("<<t1>> + -1*<1>", &f).unwrap();
        assert_eq!(b, parse_form("<1,-t1,-1>", &f).unwrap());
        let e = parse_form("<>", &f).unwrap();
        assert_eq!(e.dim(), 0);
        let s = parse_form("-t1*t2*<1,t3>", &f).unwrap();
        assert_eq!(s, parse_form("<-t1*t2,-t1*t2*t3>", &f).unwrap());
    }

    #[test]
    fn class_round_trip() {
        for base in [Base::F3, Base::R, Base::C, Base::SquareMinusOne] {
            let f = FieldDesc { base, nvars: 3 };
            for a in f.classes() {
                let s = f.print_class(a);
                assert_eq!(parse_class(&s, &f).unwrap(), a, "{s}");
            }
        }
        let c = FieldDesc::complex(1);
        assert_eq!(parse_class("-t1", &c).unwrap(), SquareClass(2));
        assert!(parse_class("u", &FieldDesc::f3(1)).is_err());
    }
}

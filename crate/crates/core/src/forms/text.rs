//! Text form of class components.
//!
//! ```text
//! form   := '0' | term (('+' | '-') term)*
//! term   := [INT ['*']] factor ('*' | '∧')? factor ...
//! factor := var ['^' INT] | ('B' | 'β') var
//! var    := 'x' INDEX | 'x' | 'y' | 'z'        (letters only when m <= 3)
//! ```
//!
//! Over F_2 every term is a degree-two monomial. Over odd primes a term is either a
//! wedge of two distinct variables, in the order written, or a single Bockstein.

use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::forms::altbock::AlternatingBockstein;
use crate::forms::component::ClassComponent;
use crate::forms::quadratic::QuadraticFormF2;

const ALIASES: [char; 3] = ['x', 'y', 'z'];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Factor {
    Var { index: usize, power: u32 },
    Bock(usize),
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    m: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, m: usize) -> Self {
        Parser {
            chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            m,
            src,
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |&(i, _)| i)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn int(&mut self) -> Option<u64> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            v = v.saturating_mul(10).saturating_add(d as u64);
            self.pos += 1;
        }
        (self.pos > start).then_some(v)
    }

    fn var(&mut self) -> Result<usize> {
        let at = self.pos;
        match self.bump() {
            Some('x') => {
                if let Some(i) = self.int() {
                    if i == 0 || i as usize > self.m {
                        self.pos = at;
                        return self.err(format!("variable x{i} outside x1..x{}", self.m));
                    }
                    Ok(i as usize - 1)
                } else {
                    self.alias(at, 0)
                }
            }
            Some('y') => self.alias(at, 1),
            Some('z') => self.alias(at, 2),
            _ => {
                self.pos = at;
                self.err("expected a variable")
            }
        }
    }

    fn alias(&mut self, at: usize, k: usize) -> Result<usize> {
        if self.m > 3 || k >= self.m {
            self.pos = at;
            return self.err(format!(
                "variable '{}' needs indexed names in {} variables",
                ALIASES[k], self.m
            ));
        }
        Ok(k)
    }

    fn factor(&mut self) -> Result<Factor> {
        match self.peek() {
            Some('B') | Some('β') => {
                self.pos += 1;
                Ok(Factor::Bock(self.var()?))
            }
            _ => {
                let index = self.var()?;
                let mut power = 1;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    match self.int() {
                        Some(e) if e >= 1 => power = e.min(u32::MAX as u64) as u32,
                        _ => return self.err("expected a positive exponent"),
                    }
                }
                Ok(Factor::Var { index, power })
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some('x' | 'y' | 'z' | 'B' | 'β'))
    }

    /// `(coefficient, factors, offset of the term)`.
    fn term(&mut self) -> Result<(i64, Vec<Factor>, usize)> {
        let at = self.offset();
        let coeff = self.int().map(|c| c.min(i64::MAX as u64) as i64);
        if coeff.is_some() && self.peek() == Some('*') {
            self.pos += 1;
        }
        let mut factors = Vec::new();
        while self.starts_factor() {
            factors.push(self.factor()?);
            if matches!(self.peek(), Some('*' | '∧')) {
                self.pos += 1;
                if !self.starts_factor() {
                    return self.err("expected a factor");
                }
            }
        }
        if factors.is_empty() {
            return if coeff.is_some() {
                self.err("constant terms are not allowed")
            } else {
                self.err("expected a term")
            };
        }
        Ok((coeff.unwrap_or(1), factors, at))
    }

    fn form(&mut self) -> Result<Vec<(i64, Vec<Factor>, usize)>> {
        if self.chars.len() == 1 && self.peek() == Some('0') {
            self.pos = 1;
            return Ok(Vec::new());
        }
        if self.chars.is_empty() {
            return self.err("empty form");
        }
        let mut terms = Vec::new();
        let mut sign = 1;
        if self.peek() == Some('-') {
            self.pos += 1;
            sign = -1;
        }
        loop {
            let (c, f, at) = self.term()?;
            terms.push((sign * c, f, at));
            match self.bump() {
                None => break,
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(_) => {
                    self.pos -= 1;
                    return self.err("expected '+' or '-'");
                }
            }
        }
        Ok(terms)
    }
}

/// Parses one component of a class in `m` variables over `F_p`.
pub fn parse_component(text: &str, p: Prime, m: usize) -> Result<ClassComponent> {
    let mut parser = Parser::new(text, m);
    let terms = parser.form()?;
    let syntax = |pos: usize, msg: &str| Error::Syntax {
        pos,
        msg: msg.into(),
    };
    if p.is_odd() {
        let mut a = AlternatingBockstein::zero(p, m)?;
        for (c, factors, at) in terms {
            match factors.as_slice() {
                [Factor::Bock(i)] => a.add_bockstein(*i, c)?,
                [Factor::Var { index: i, power: 1 }, Factor::Var { index: j, power: 1 }] if i != j => {
                    a.add_wedge(*i, *j, c)?
                }
                [Factor::Var { .. }, Factor::Var { .. }] | [Factor::Var { power: 2, .. }] => {
                    return Err(syntax(at, "squares vanish in odd characteristic; write x∧y or Bx"))
                }
                _ => return Err(syntax(at, "expected a wedge of two variables or a Bockstein")),
            }
        }
        Ok(a.into())
    } else {
        let mut q = QuadraticFormF2::zero(m);
        for (c, factors, at) in terms {
            let mut vars = Vec::new();
            for f in &factors {
                match *f {
                    Factor::Var { index, power } => {
                        vars.extend(std::iter::repeat(index).take(power.min(3) as usize))
                    }
                    Factor::Bock(_) => {
                        return Err(syntax(at, "Bockstein terms need an odd prime"));
                    }
                }
            }
            if vars.len() != 2 {
                return Err(syntax(at, "terms must have degree two"));
            }
            if c.rem_euclid(2) == 1 {
                q.toggle(vars[0], vars[1]);
            }
        }
        Ok(q.into())
    }
}

fn var_name(i: usize, m: usize) -> String {
    if m <= 3 {
        ALIASES[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

fn monomial(i: usize, j: usize, m: usize) -> String {
    if m <= 3 {
        format!("{}{}", var_name(i, m), var_name(j, m))
    } else {
        format!("{}*{}", var_name(i, m), var_name(j, m))
    }
}

/// Canonical text: terms in lexicographic index order, letters for at most three variables.
pub fn print_component(c: &ClassComponent) -> String {
    let m = c.m();
    let mut terms = Vec::new();
    match c {
        ClassComponent::Quadratic(q) => {
            for (i, j) in q.terms() {
                terms.push(if i == j {
                    format!("{}^2", var_name(i, m))
                } else {
                    monomial(i, j, m)
                });
            }
        }
        ClassComponent::AltBock(a) => {
            let coef = |v: u8| if v == 1 { String::new() } else { format!("{v}*") };
            for i in 0..m {
                for j in i + 1..m {
                    let v = a.wedge(i, j);
                    if v != 0 {
                        terms.push(format!("{}{}", coef(v), monomial(i, j, m)));
                    }
                }
            }
            for (i, &v) in a.bock().iter().enumerate() {
                if v != 0 {
                    terms.push(format!("{}B{}", coef(v), var_name(i, m)));
                }
            }
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u32) -> Prime {
        Prime::new(v).unwrap()
    }

    fn q2(text: &str, m: usize) -> QuadraticFormF2 {
        parse_component(text, Prime::TWO, m).unwrap().as_quadratic().unwrap().clone()
    }

    #[test]
    fn parses_quadratic_forms() {
        assert_eq!(q2("x^2+yz", 3), QuadraticFormF2::from_terms(3, &[(0, 0), (1, 2)]).unwrap());
        assert_eq!(q2("x1*x2 + x3*x4", 4), QuadraticFormF2::from_terms(4, &[(0, 1), (2, 3)]).unwrap());
        assert_eq!(q2("xx + yx", 2), QuadraticFormF2::from_terms(2, &[(0, 0), (0, 1)]).unwrap());
        assert_eq!(q2("xy + xy", 2), QuadraticFormF2::zero(2));
        assert_eq!(q2("3xy - y^2", 2), QuadraticFormF2::from_terms(2, &[(0, 1), (1, 1)]).unwrap());
        assert_eq!(q2("0", 3), QuadraticFormF2::zero(3));
        assert_eq!(q2(" x 1 ^ 2 ", 1), QuadraticFormF2::from_terms(1, &[(0, 0)]).unwrap());
    }

    #[test]
    fn rejects_malformed_forms() {
        for (text, m) in [
            ("", 2),
            ("x", 2),
            ("xyz", 3),
            ("x^2 +", 2),
            ("w^2", 2),
            ("x5^2", 4),
            ("x^2", 4),
            ("z^2", 2),
            ("1", 2),
            ("Bx", 2),
            ("x^0", 2),
            ("x^2 ) y^2", 2),
        ] {
            let r = parse_component(text, Prime::TWO, m);
            assert!(matches!(r, Err(Error::Syntax { .. })), "{text:?} -> {r:?}");
        }
    }

    #[test]
    fn syntax_error_positions() {
        match parse_component("x^2 + q", Prime::TWO, 2) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parses_odd_classes() {
        let c = parse_component("xy + 2Bx - By", p(5), 2).unwrap();
        let a = c.as_alt_bock().unwrap();
        assert_eq!(a.wedge(0, 1), 1);
        assert_eq!(a.bock(), &[2, 4]);
        let c = parse_component("yx", p(3), 2).unwrap();
        assert_eq!(c.as_alt_bock().unwrap().wedge(0, 1), 2);
        let c = parse_component("x1∧x2 + x3*x4", p(3), 4).unwrap();
        assert_eq!(print_component(&c), "x1*x2 + x3*x4");
        for bad in ["x^2", "xx", "xyz", "BxBy", "xBy"] {
            assert!(parse_component(bad, p(3), 3).is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(print_component(&parse_component("yz + x^2", Prime::TWO, 3).unwrap()), "x^2 + yz");
        assert_eq!(
            print_component(&parse_component("x2*x1 + x4^2", Prime::TWO, 4).unwrap()),
            "x1*x2 + x4^2"
        );
        assert_eq!(print_component(&ClassComponent::zero(Prime::TWO, 2)), "0");
        assert_eq!(print_component(&parse_component("yx + Bz", p(5), 3).unwrap()), "4*xy + Bz");
        assert_eq!(print_component(&parse_component("3Bx2", p(7), 4).unwrap()), "3*Bx2");
    }

    #[test]
    fn round_trips_all_small_forms() {
        for m in 1..=4usize {
            let d = m * (m + 1) / 2;
            for code in 0u32..1 << d {
                let coeffs = (0..d).map(|b| (code >> b & 1) as u8).collect();
                let c = ClassComponent::from(QuadraticFormF2::new(m, coeffs).unwrap());
                let text = print_component(&c);
                assert_eq!(parse_component(&text, Prime::TWO, m).unwrap(), c, "{text}");
            }
        }
        let p3 = p(3);
        for code in 0u32..729 {
            let mut k = code;
            let coords: Vec<u8> = (0..6).map(|_| { let v = (k % 3) as u8; k /= 3; v }).collect();
            let c = ClassComponent::from_coords(p3, 3, &coords).unwrap();
            assert_eq!(parse_component(&print_component(&c), p3, 3).unwrap(), c);
        }
    }
}

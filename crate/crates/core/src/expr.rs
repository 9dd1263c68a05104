//! Text syntax for algebra elements.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor (('*' | '·') factor)*
//! factor  := 'S' word | 'S*' word | 'chi' '{' points '}' | 'chi' '[' real ',' real ')'
//!          | number | 'i' | '(' expr ')'
//! word    := '[' [letter (',' letter)*] ']'
//! points  := point (',' point)*          point := integer | '(' integer (',' integer)* ')'
//! real    := ['-'] rterm (('+' | '-') rterm)*   rterm := number ['*' name] | name
//! number  := digits ['/' digits | '.' digits]
//! ```
//!
//! Whitespace is ignored. Real endpoints are rational combinations of the
//! basis names of the group; a bare number is a multiple of the basis value
//! named `1`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{scale_gen, Algebra, AlgebraElement, GenTerm};
use crate::error::{Error, Result};
use crate::function::FiniteFunction;
use crate::gamma::{GroupDescriptor, GroupElement};
use crate::scalar::{parse_rational, Scalar};
use crate::words::Word;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    algebra: &'a Algebra,
}

fn perr(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

impl<'a> Parser<'a> {
    fn group(&self) -> &GroupDescriptor {
        self.algebra.group()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            let found = self.src[self.pos..].chars().next().map_or("end of input".into(), |c| format!("{c:?}"));
            Err(perr(self.pos, format!("expected {s:?}, found {found}")))
        }
    }

    fn expr(&mut self) -> Result<Vec<GenTerm>> {
        let mut out = vec![];
        let mut negate = self.eat("-");
        loop {
            let t = self.term()?;
            if negate {
                out.extend(t.iter().map(|g| scale_gen(g, &Scalar::from_int(-1))));
            } else {
                out.extend(t);
            }
            if self.eat("+") {
                negate = false;
            } else if self.eat("-") {
                negate = true;
            } else {
                return Ok(out);
            }
        }
    }

    fn term(&mut self) -> Result<Vec<GenTerm>> {
        let mut acc = self.factor()?;
        while self.eat("*") || self.eat("·") {
            let next = self.factor()?;
            acc = self.algebra.mul_gen_sums(&acc, &next)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Vec<GenTerm>> {
        let start = {
            self.skip_ws();
            self.pos
        };
        if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        }
        if self.eat("chi") {
            let f = if self.eat("{") {
                let f = self.points(start)?;
                self.expect("}")?;
                f
            } else if self.eat("[") {
                let lo = self.real_point()?;
                self.expect(",")?;
                let hi = self.real_point()?;
                self.expect(")")?;
                FiniteFunction::interval(self.group(), lo, hi, Scalar::one()).map_err(|e| perr(start, e.to_string()))?
            } else {
                return Err(perr(self.pos, "expected '{' or '[' after chi"));
            };
            return Ok(vec![GenTerm::func(f)]);
        }
        if self.eat("S*") {
            let w = self.word()?;
            return Ok(vec![GenTerm::s_star(w)]);
        }
        if self.eat("S") {
            let w = self.word()?;
            return Ok(vec![GenTerm::s(w)]);
        }
        if self.eat("i") {
            return Ok(vec![GenTerm::scalar(Scalar::i())]);
        }
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let r = self.number()?;
                Ok(vec![GenTerm::scalar(Scalar::real(r))])
            }
            Some(c) => Err(perr(self.pos, format!("unexpected {c:?}"))),
            None => Err(perr(self.pos, "unexpected end of input")),
        }
    }

    fn digits(&mut self) -> &'a str {
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<BigRational> {
        self.skip_ws();
        let start = self.pos;
        if self.digits().is_empty() {
            return Err(perr(start, "expected a number"));
        }
        if self.src[self.pos..].starts_with('/') || self.src[self.pos..].starts_with('.') {
            self.pos += 1;
            if self.digits().is_empty() {
                return Err(perr(self.pos, "expected digits"));
            }
        }
        parse_rational(&self.src[start..self.pos]).map_err(|e| perr(start, e.to_string()))
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat("-");
        self.skip_ws();
        let d = self.digits();
        if d.is_empty() {
            return Err(perr(start, "expected an integer"));
        }
        let v: i64 = d.parse().map_err(|_| perr(start, "integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn word(&mut self) -> Result<Word> {
        self.expect("[")?;
        let mut letters = vec![];
        if !self.eat("]") {
            loop {
                let at = self.pos;
                let l = self.integer()?;
                if l < 1 {
                    return Err(perr(at, "letters are positive"));
                }
                letters.push(l as usize);
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(Word::new(letters))
    }

    fn points(&mut self, start: usize) -> Result<FiniteFunction> {
        if self.group().is_real() {
            return Err(perr(start, "point sets are not available on the real line; use chi[a,b)"));
        }
        let mut pts = vec![];
        loop {
            let at = self.pos;
            let raw = if self.eat("(") {
                let mut v = vec![self.integer()?];
                while self.eat(",") {
                    v.push(self.integer()?);
                }
                self.expect(")")?;
                v
            } else {
                vec![self.integer()?]
            };
            pts.push(self.group().discrete_from_raw(&raw).map_err(|e| perr(at, e.to_string()))?);
            if !self.eat(",") {
                break;
            }
        }
        FiniteFunction::indicator(self.group(), &pts).map_err(|e| perr(start, e.to_string()))
    }

    fn name(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn real_point(&mut self) -> Result<GroupElement> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let basis = match self.group() {
            GroupDescriptor::RealLine(b) => b.clone(),
            _ => return Err(perr(start, "intervals need a real_line group")),
        };
        let unit = basis.index_of("1");
        let mut coords = vec![BigRational::zero(); basis.len()];
        let mut sign = if self.eat("-") { -BigRational::one() } else { BigRational::one() };
        loop {
            let at = {
                self.skip_ws();
                self.pos
            };
            let (coef, idx) = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let r = self.number()?;
                if self.eat("*") {
                    let nm = self.name();
                    (r, basis.index_of(nm).ok_or_else(|| perr(at, format!("unknown basis name {nm:?}")))?)
                } else {
                    (r, unit.ok_or_else(|| perr(at, "bare numbers need a basis value named \"1\""))?)
                }
            } else {
                let nm = self.name();
                if nm.is_empty() {
                    return Err(perr(at, "expected a number or basis name"));
                }
                (BigRational::one(), basis.index_of(nm).ok_or_else(|| perr(at, format!("unknown basis name {nm:?}")))?)
            };
            coords[idx] += sign.clone() * coef;
            if self.eat("+") {
                sign = BigRational::one();
            } else if self.eat("-") {
                sign = -BigRational::one();
            } else {
                return Ok(GroupElement::Real(coords));
            }
        }
    }
}

/// Parse the formal sum without canonicalizing; constant word terms survive.
pub fn parse_terms(algebra: &Algebra, src: &str) -> Result<Vec<GenTerm>> {
    let mut p = Parser { src, pos: 0, algebra };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(perr(p.pos, format!("unexpected trailing input {:?}", &src[p.pos..])));
    }
    Ok(out)
}

/// Parse and canonicalize an element.
pub fn parse(algebra: &Algebra, src: &str) -> Result<AlgebraElement> {
    algebra.from_gen_terms(parse_terms(algebra, src)?)
}

/// Render in the same syntax, one indicator per term: `S[1]·chi{0}·S*[1] + (1/4)·chi{2}`.
pub fn render(algebra: &Algebra, x: &AlgebraElement) -> String {
    let group = algebra.group();
    let mut parts = vec![];
    for ((mu, nu), f) in x.terms() {
        for (value, indicator) in f.split_by_value() {
            for chi in indicator.render_indicator(group) {
                let mut factors = vec![];
                if !value.is_one() {
                    factors.push(format!("({value})"));
                }
                if !mu.is_empty() {
                    factors.push(format!("S{mu}"));
                }
                factors.push(chi);
                if !nu.is_empty() {
                    factors.push(format!("S*{nu}"));
                }
                parts.push(factors.join("·"));
            }
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::OmegaData;

    fn alg(weights: &[i64]) -> Algebra {
        Algebra::new(OmegaData::over_integers(weights).unwrap())
    }

    #[test]
    fn parses_and_renders() {
        let a = alg(&[1, 2]);
        let x = parse(&a, "chi{1} * S[1]*chi{0}*S*[1]").unwrap();
        assert_eq!(render(&a, &x), "S[1]·chi{0}·S*[1]");
        let y = parse(&a, "S[1,2] * chi{0} * S*[2] + (1/4) * chi{1}").unwrap();
        let text = render(&a, &y);
        assert_eq!(parse(&a, &text).unwrap(), y);
        assert!(parse(&a, "S*[2]·S[1]·chi{0}").unwrap().is_zero());
        let z = parse(&a, "S*[1] · S[1] · chi{0} · S*[2]").unwrap();
        assert_eq!(render(&a, &z), "chi{0}·S*[2]");
    }

    #[test]
    fn scalars_and_signs() {
        let a = alg(&[1, 2]);
        let x = parse(&a, "i*chi{0} - 2*chi{0}").unwrap();
        assert_eq!(render(&a, &x), "(-2+i)·chi{0}");
        assert_eq!(parse(&a, "-(chi{0,1})").unwrap(), a.scale(&parse(&a, "chi{0,1}").unwrap(), &Scalar::from_int(-1)));
        assert_eq!(render(&a, &AlgebraElement::zero()), "0");
    }

    #[test]
    fn errors_carry_offsets() {
        let a = alg(&[1, 2]);
        match parse(&a, "chi{0} + S[1] *").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 15),
            e => panic!("{e:?}"),
        }
        assert!(matches!(parse(&a, "S[1]").unwrap_err(), Error::Argument { .. }));
        assert!(matches!(parse(&a, "chi{0} )").unwrap_err(), Error::Parse { offset: 7, .. }));
    }

    #[test]
    fn lattice_points() {
        let om = OmegaData::finite(
            GroupDescriptor::lattice(2),
            vec![GroupElement::free(&[1, 0]), GroupElement::free(&[0, 1])],
        )
        .unwrap();
        let a = Algebra::new(om);
        let x = parse(&a, "chi{(1,0),(0,1)}").unwrap();
        assert_eq!(parse(&a, &render(&a, &x)).unwrap(), x);
    }

    #[test]
    fn real_intervals() {
        let g = GroupDescriptor::real_sqrt2();
        let om = OmegaData::finite(g, vec![GroupElement::real_ints(&[1, 0]), GroupElement::real_ints(&[0, 1])]).unwrap();
        let a = Algebra::new(om);
        let x = parse(&a, "chi[0, 1+1/2*sqrt2) - chi[1, 2*sqrt2)").unwrap();
        let text = render(&a, &x);
        assert_eq!(parse(&a, &text).unwrap(), x);
        assert!(parse(&a, "chi{0}").is_err());
        assert!(parse(&a, "chi[0, pi)").is_err());
    }
}

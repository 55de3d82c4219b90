use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use super::{CoordinateFrame, Expr, ExprError, Func, Number};

/// Human readable summary of the accepted grammar, quoted in error messages.
pub const GRAMMAR: &str = "expr := term (('+'|'-') term)*; term := unary (('*'|'/') unary)*; \
unary := '-' unary | power; power := atom ('^' ['-'] integer)?; \
atom := number | p/q | identifier | (sin|cos|exp|sqrt) '(' expr ')' | '(' expr ')'";

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { text: String, integer: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(position: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax { position, message: message.into() }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            c if c.is_ascii_digit() || c == '.' => {
                let mut integer = true;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    integer = false;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        integer = false;
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                if text == "." {
                    return Err(syntax(start, "lone '.'"));
                }
                out.push((start, Tok::Num { text: text.to_string(), integer }));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character '{other}'"))),
        }
        i += 1;
    }
    Ok(out)
}

/// Exact value of a decimal literal such as `12`, `0.25` or `1.5e-3`.
fn literal_value(text: &str) -> Number {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i64>().unwrap_or(0)),
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let numer: BigInt = digits.parse().expect("digits only");
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * Pow::pow(&ten, scale as u64))
    } else {
        BigRational::new(numer, Pow::pow(&ten, (-scale) as u64))
    };
    Number::new(value)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    accept: &'a dyn Fn(&str) -> bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ExprError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.position(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    terms.push(negate(t));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) })
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary(true)?;
        // `acc` is a product opened by this chain and may absorb further factors.
        let mut open_product = false;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.unary(true)?;
                    match (&mut acc, open_product) {
                        (Expr::Mul(factors), true) => factors.push(rhs),
                        _ => {
                            acc = Expr::Mul(vec![acc, rhs]);
                            open_product = true;
                        }
                    }
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.unary(false)?;
                    acc = Expr::Div(Box::new(acc), Box::new(rhs));
                    open_product = false;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self, allow_ratio: bool) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(negate(self.unary(allow_ratio)?))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary(allow_ratio)
            }
            _ => self.power(allow_ratio),
        }
    }

    fn power(&mut self, allow_ratio: bool) -> Result<Expr, ExprError> {
        let base = self.atom(allow_ratio)?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let exponent = self.exponent()?;
        Ok(Expr::Pow(Box::new(base), exponent))
    }

    fn exponent(&mut self) -> Result<i64, ExprError> {
        let pos = self.position();
        let parenthesized = self.peek() == Some(&Tok::LParen);
        if parenthesized {
            self.bump();
        }
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Minus) => {
                sign = -1;
                self.bump();
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let value = match self.bump() {
            Some(Tok::Num { text, integer: true }) => text
                .parse::<i64>()
                .map_err(|_| syntax(pos, "exponent out of range"))?,
            _ => return Err(syntax(pos, "exponent must be an integer literal")),
        };
        if parenthesized {
            self.expect(Tok::RParen, "')'")?;
        }
        Ok(sign * value)
    }

    fn atom(&mut self, allow_ratio: bool) -> Result<Expr, ExprError> {
        let pos = self.position();
        match self.bump() {
            Some(Tok::Num { text, integer }) => {
                let mut value = literal_value(&text);
                // `p/q` is read as one rational literal unless the quotient is
                // itself a divisor or the denominator carries an exponent.
                if allow_ratio && integer {
                    if let (Some(Tok::Slash), Some(Tok::Num { text: den, integer: true })) =
                        (self.peek(), self.peek_at(1))
                    {
                        if self.peek_at(2) != Some(&Tok::Caret) {
                            let den = literal_value(den);
                            if !den.is_zero() {
                                value = &value / &den;
                                self.pos += 2;
                            }
                        }
                    }
                }
                Ok(Expr::Const(value))
            }
            Some(Tok::Ident(name)) => {
                if let Some(func) = Func::from_name(&name) {
                    self.expect(Tok::LParen, "'(' after function name")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    return Ok(Expr::Func(func, Box::new(arg)));
                }
                if self.peek() == Some(&Tok::LParen) {
                    return Err(syntax(pos, format!("unknown function `{name}`")));
                }
                if !(self.accept)(&name) {
                    return Err(ExprError::UnknownSymbol(name));
                }
                Ok(Expr::var(&name))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(_) => Err(syntax(pos, "expected a number, identifier or '('")),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

fn negate(e: Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(-c),
        other => Expr::Mul(vec![Expr::int(-1), other]),
    }
}

fn parse_impl(text: &str, accept: &dyn Fn(&str) -> bool) -> Result<Expr, ExprError> {
    let toks = tokenize(text)?;
    let mut parser = Parser { toks, pos: 0, end: text.len(), accept };
    let e = parser.expr()?;
    if parser.pos < parser.toks.len() {
        return Err(syntax(parser.position(), "unexpected trailing input"));
    }
    Ok(e)
}

impl Expr {
    /// Parse `text`; identifiers must be coordinates of `frame`.
    pub fn parse(text: &str, frame: &CoordinateFrame) -> Result<Expr, ExprError> {
        parse_impl(text, &|name| frame.contains(name))
    }

    /// Parse `text`, accepting any identifier as a symbol.
    pub fn parse_free(text: &str) -> Result<Expr, ExprError> {
        parse_impl(text, &|_| true)
    }
}

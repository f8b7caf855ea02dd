//! Parser for the model definition language.
//!
//! ```text
//! model <name>
//! vars <v1> <v2> ...
//! params <p1> <p2> ...
//! infectious <vi> ...            # optional
//! eq <v>' = <polynomial expression>
//! ```
//!
//! Expressions use `+ - * ^`, integer or rational literals (`3`, `5/16`,
//! `0.25`), and parentheses. `#` starts a comment. The parser is total: any
//! input produces either a `Model` or a positioned error, never a panic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Model;
use crate::symalg::{Poly, Ring};

#[derive(Debug, Clone, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(BigRational),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Equals,
    Prime,
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex_line(text: &str, line_no: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
            }
            '+' => {
                out.push(Spanned { tok: Tok::Plus, line: line_no, col });
                i += 1;
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, line: line_no, col });
                i += 1;
            }
            '*' => {
                out.push(Spanned { tok: Tok::Star, line: line_no, col });
                i += 1;
            }
            '^' => {
                out.push(Spanned { tok: Tok::Caret, line: line_no, col });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, line: line_no, col });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, line: line_no, col });
                i += 1;
            }
            '[' => {
                out.push(Spanned { tok: Tok::LBracket, line: line_no, col });
                i += 1;
            }
            ']' => {
                out.push(Spanned { tok: Tok::RBracket, line: line_no, col });
                i += 1;
            }
            ',' => {
                out.push(Spanned { tok: Tok::Comma, line: line_no, col });
                i += 1;
            }
            '=' => {
                out.push(Spanned { tok: Tok::Equals, line: line_no, col });
                i += 1;
            }
            '\'' => {
                out.push(Spanned { tok: Tok::Prime, line: line_no, col });
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let int_part: String = chars[start..i].iter().collect();
                let numer: BigInt = int_part.parse().expect("digits");
                // rational literal p/q (no spaces) or decimal literal
                if i < chars.len() && chars[i] == '/' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let den_part: String = chars[dstart..i].iter().collect();
                    let denom: BigInt = den_part.parse().expect("digits");
                    if denom.is_zero() {
                        return Err(ParseError::new(line_no, col, "zero denominator in rational literal"));
                    }
                    out.push(Spanned {
                        tok: Tok::Number(BigRational::new(numer, denom)),
                        line: line_no,
                        col,
                    });
                } else if i < chars.len() && chars[i] == '.' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    let fstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let frac: String = chars[fstart..i].iter().collect();
                    let scale = BigInt::from(10u32).pow(frac.len() as u32);
                    let fnum: BigInt = frac.parse().expect("digits");
                    let value = BigRational::new(numer * &scale + fnum, scale);
                    out.push(Spanned {
                        tok: Tok::Number(value),
                        line: line_no,
                        col,
                    });
                } else {
                    out.push(Spanned {
                        tok: Tok::Number(BigRational::from(numer)),
                        line: line_no,
                        col,
                    });
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                out.push(Spanned {
                    tok: Tok::Ident(name),
                    line: line_no,
                    col,
                });
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    col,
                    format!("unexpected character `{}`", other),
                ))
            }
        }
    }
    Ok(out)
}

pub(crate) struct ExprParser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    ring: &'a Ring,
    line: usize,
}

impl<'a> ExprParser<'a> {
    pub fn new(toks: &'a [Spanned], ring: &'a Ring, line: usize) -> Self {
        ExprParser { toks, pos: 0, ring, line }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or((self.line, self.toks.last().map(|s| s.col + 1).unwrap_or(1)))
    }

    fn bump(&mut self) -> Option<&Spanned> {
        let s = self.toks.get(self.pos);
        self.pos += 1;
        s
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, msg)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn parse_expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                self.parse_term()?.neg()
            }
            Some(Tok::Plus) => {
                self.bump();
                self.parse_term()?
            }
            _ => self.parse_term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.parse_term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.parse_term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.parse_factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = acc.mul(&self.parse_factor()?);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.parse_atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            match self.bump().cloned() {
                Some(Spanned { tok: Tok::Number(n), line, col }) => {
                    if !n.denom().is_one() || n.numer().sign() == num_bigint::Sign::Minus {
                        return Err(ParseError::new(line, col, "exponent must be a non-negative integer"));
                    }
                    let e: u32 = n.numer().try_into().map_err(|_| {
                        ParseError::new(line, col, "exponent too large")
                    })?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected integer exponent after `^`")),
            }
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> Result<Poly, ParseError> {
        match self.bump().cloned() {
            Some(Spanned { tok: Tok::Number(n), .. }) => Ok(self.ring.constant(n)),
            Some(Spanned { tok: Tok::Ident(name), line, col }) => self
                .ring
                .var(&name)
                .map_err(|_| ParseError::new(line, col, format!("unknown symbol `{}`", name))),
            Some(Spanned { tok: Tok::Minus, .. }) => Ok(self.parse_factor()?.neg()),
            Some(Spanned { tok: Tok::LParen, line, col }) => {
                let inner = self.parse_expr()?;
                match self.bump() {
                    Some(Spanned { tok: Tok::RParen, .. }) => Ok(inner),
                    _ => Err(ParseError::new(line, col, "unclosed parenthesis")),
                }
            }
            Some(Spanned { tok, line, col }) => Err(ParseError::new(
                line,
                col,
                format!("unexpected token {:?} in expression", tok),
            )),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parse a standalone polynomial expression over the given ring.
pub fn parse_expression(text: &str, ring: &Ring) -> Result<Poly, ParseError> {
    let toks = lex_line(text, 1)?;
    let mut p = ExprParser::new(&toks, ring, 1);
    if p.at_end() {
        return Err(ParseError::new(1, 1, "empty expression"));
    }
    let e = p.parse_expr()?;
    if !p.at_end() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(e)
}

fn idents(toks: &[Spanned]) -> Result<Vec<String>, ParseError> {
    toks.iter()
        .map(|s| match &s.tok {
            Tok::Ident(n) => Ok(n.clone()),
            other => Err(ParseError::new(
                s.line,
                s.col,
                format!("expected a name, found {:?}", other),
            )),
        })
        .collect()
}

/// Parse a full model source.
pub fn parse_model(text: &str) -> Result<Model, ParseError> {
    let mut name: Option<String> = None;
    let mut vars: Vec<String> = Vec::new();
    let mut params: Vec<String> = Vec::new();
    let mut infectious: Option<Vec<String>> = None;
    let mut equations: Vec<(String, usize, usize, Vec<Spanned>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = lex_line(raw, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let head = match &toks[0].tok {
            Tok::Ident(k) => k.clone(),
            _ => {
                return Err(ParseError::new(
                    line_no,
                    toks[0].col,
                    "expected a directive (model/vars/params/infectious/eq)",
                ))
            }
        };
        match head.as_str() {
            "model" => {
                if name.is_some() {
                    return Err(ParseError::new(line_no, toks[0].col, "duplicate `model` line"));
                }
                let rest = idents(&toks[1..])?;
                if rest.len() != 1 {
                    return Err(ParseError::new(line_no, toks[0].col, "expected `model <name>`"));
                }
                name = Some(rest[0].clone());
            }
            "vars" => {
                if !vars.is_empty() {
                    return Err(ParseError::new(line_no, toks[0].col, "duplicate `vars` line"));
                }
                vars = idents(&toks[1..])?;
                if vars.is_empty() {
                    return Err(ParseError::new(line_no, toks[0].col, "`vars` needs at least one name"));
                }
            }
            "params" => {
                if !params.is_empty() {
                    return Err(ParseError::new(line_no, toks[0].col, "duplicate `params` line"));
                }
                params = idents(&toks[1..])?;
            }
            "infectious" => {
                if infectious.is_some() {
                    return Err(ParseError::new(line_no, toks[0].col, "duplicate `infectious` line"));
                }
                infectious = Some(idents(&toks[1..])?);
            }
            "eq" => {
                // eq <v>' = <expr>
                if toks.len() < 4 {
                    return Err(ParseError::new(line_no, toks[0].col, "expected `eq <v>' = <expression>`"));
                }
                let var = match &toks[1].tok {
                    Tok::Ident(v) => v.clone(),
                    _ => return Err(ParseError::new(line_no, toks[1].col, "expected a variable name after `eq`")),
                };
                if toks[2].tok != Tok::Prime {
                    return Err(ParseError::new(line_no, toks[2].col, "expected `'` after the variable name"));
                }
                if toks[3].tok != Tok::Equals {
                    return Err(ParseError::new(line_no, toks[3].col, "expected `=`"));
                }
                equations.push((var, line_no, toks[1].col, toks[4..].to_vec()));
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    toks[0].col,
                    format!("unknown directive `{}`", other),
                ))
            }
        }
    }

    let name = name.ok_or_else(|| ParseError::new(1, 1, "missing `model` line"))?;
    if vars.is_empty() {
        return Err(ParseError::new(1, 1, "missing `vars` line"));
    }
    // duplicate names across vars and params
    {
        let mut seen = std::collections::HashSet::new();
        for n in vars.iter().chain(params.iter()) {
            if !seen.insert(n.clone()) {
                return Err(ParseError::new(1, 1, format!("duplicate name `{}`", n)));
            }
        }
    }
    let mut names = vars.clone();
    names.extend(params.iter().cloned());
    let ring = Ring::new(&names).map_err(|e| ParseError::new(1, 1, e.to_string()))?;

    if equations.len() != vars.len() {
        return Err(ParseError::new(
            1,
            1,
            format!(
                "equation count mismatch: {} vars but {} equations",
                vars.len(),
                equations.len()
            ),
        ));
    }
    let mut rhs: Vec<Option<Poly>> = vec![None; vars.len()];
    for (var, line_no, col, toks) in equations {
        let vi = vars
            .iter()
            .position(|v| v == &var)
            .ok_or_else(|| ParseError::new(line_no, col, format!("`{}` is not a declared variable", var)))?;
        if rhs[vi].is_some() {
            return Err(ParseError::new(line_no, col, format!("duplicate equation for `{}`", var)));
        }
        let mut p = ExprParser::new(&toks, &ring, line_no);
        if p.at_end() {
            return Err(ParseError::new(line_no, col, "empty right-hand side"));
        }
        let e = p.parse_expr()?;
        if !p.at_end() {
            return Err(p.err("trailing input after expression"));
        }
        rhs[vi] = Some(e);
    }
    let rhs: Vec<Poly> = rhs.into_iter().map(|p| p.expect("checked count")).collect();

    let mut model = Model::new(name, vars, params, rhs, None)
        .map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    if let Some(inf) = infectious {
        model
            .set_infectious(&inf)
            .map_err(|e| ParseError::new(1, 1, format!("infectious: {}", e)))?;
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undeclared_symbol_named_in_error() {
        let src = "model m\nvars x\nparams a\neq x' = a*x + b\n";
        let err = parse_model(src).unwrap_err();
        assert!(err.msg.contains("`b`"), "{}", err);
        assert_eq!(err.line, 4);
    }

    #[test]
    fn equation_count_mismatch() {
        let src = "model m\nvars x y\nparams a\neq x' = a*x\n";
        let err = parse_model(src).unwrap_err();
        assert!(err.msg.contains("equation count"));
    }

    #[test]
    fn duplicate_names_rejected() {
        let src = "model m\nvars x x\neq x' = x\n";
        assert!(parse_model(src).is_err());
        let src2 = "model m\nvars x\nparams x\neq x' = x\n";
        assert!(parse_model(src2).is_err());
    }

    #[test]
    fn sirm_superinfection_form() {
        // the superinfection SIR written with an explicit composite rate
        let src = "model sirm\n\
                   vars s i\n\
                   params lam b beta beta_xi gamt\n\
                   infectious i\n\
                   eq s' = lam - b*s - (beta + beta_xi*i)*s*i\n\
                   eq i' = i*((beta + beta_xi*i)*s - (b + gamt))\n";
        let m = parse_model(src).unwrap();
        assert_eq!(m.state_vars(), &["s", "i"]);
        assert_eq!(m.params(), &["lam", "b", "beta", "beta_xi", "gamt"]);
        assert_eq!(m.infectious(), Some(&[1usize][..]));
    }

    #[test]
    fn rational_and_decimal_literals() {
        let ring = Ring::new(&["x"]).unwrap();
        let a = parse_expression("5/16*x", &ring).unwrap();
        let b = parse_expression("0.3125*x", &ring).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parser_never_panics_on_junk() {
        for junk in ["eq ' =", "model", "vars 1 2", "eq x' = ^", "eq x' = ((", "\u{0}"] {
            let _ = parse_model(junk);
        }
    }
}

//! Problem files and the polynomial expression grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := rational | 'i' | 's' | var | '(' expr ')' | '-' factor
//! ```

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::descent::{DescentOptions, DescentProblem};
use crate::numbers::{FieldElement, FieldSpec, Rational};
use crate::poly::{Context, MonomialOrder, PolyMap, Polynomial, VariableContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer;

impl Lexer {
    /// Tokens with their 1-based column.
    fn run(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            let col = col0 + k;
            if c.is_whitespace() {
                k += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().collect();
                out.push((Tok::Num(s.parse().unwrap()), col));
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = k;
                while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                    k += 1;
                }
                out.push((Tok::Ident(chars[start..k].iter().collect()), col));
                continue;
            }
            let t = match c {
                '+' => Tok::Plus,
                '-' | '−' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(ParseError::new(line, col, format!("unexpected character `{c}`"))),
            };
            out.push((t, col));
            k += 1;
        }
        Ok(out)
    }
}

struct ExprParser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    ctx: &'a Context,
    field: FieldSpec,
}

impl ExprParser<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let col = self.col();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| ParseError::new(self.line, col, "exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(ParseError::new(self.line, col, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut r = Rational::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dcol = self.col();
                    match self.bump() {
                        Some(Tok::Num(d)) if d != BigInt::from(0) => r /= Rational::from_integer(d),
                        Some(Tok::Num(_)) => return Err(ParseError::new(self.line, dcol, "zero denominator")),
                        _ => return Err(ParseError::new(self.line, dcol, "expected an integer denominator")),
                    }
                }
                Ok(Polynomial::constant(self.ctx, FieldElement::from_rational(r, self.field)))
            }
            Some(Tok::Ident(name)) => {
                if let Some(idx) = self.ctx.index_of(&name) {
                    return Ok(Polynomial::var(self.ctx, self.field, idx));
                }
                let is_sqrt = match (name.as_str(), self.field) {
                    ("i", FieldSpec::Quadratic(-1)) => true,
                    ("s", FieldSpec::Quadratic(_)) => true,
                    ("i", FieldSpec::Quadratic(m)) => {
                        return Err(ParseError::new(
                            self.line,
                            col,
                            format!("`i` is only available over Q(i); use `s` for sqrt({m})"),
                        ))
                    }
                    ("i" | "s", FieldSpec::Rationals) => {
                        return Err(ParseError::new(self.line, col, format!("`{name}` is not defined over Q")))
                    }
                    _ => false,
                };
                if is_sqrt {
                    Ok(Polynomial::constant(self.ctx, FieldElement::sqrt_m(self.field).unwrap()))
                } else {
                    Err(ParseError::new(self.line, col, format!("undeclared variable `{name}`")))
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(ParseError::new(self.line, self.col().saturating_sub(1).max(col), "expected `)`")),
                }
            }
            Some(t) => Err(ParseError::new(self.line, col, format!("unexpected token {t:?}"))),
            None => Err(ParseError::new(self.line, col, "unexpected end of expression")),
        }
    }
}

fn parse_poly_at(
    text: &str,
    ctx: &Context,
    field: FieldSpec,
    line: usize,
    col0: usize,
) -> Result<Polynomial, ParseError> {
    let toks = Lexer::run(text, line, col0)?;
    let end_col = col0 + text.chars().count();
    if toks.is_empty() {
        return Err(ParseError::new(line, col0, "empty expression"));
    }
    let mut p = ExprParser { toks, pos: 0, line, end_col, ctx, field };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses one polynomial expression over `ctx`.
pub fn parse_poly(text: &str, ctx: &Context, field: FieldSpec) -> Result<Polynomial, ParseError> {
    parse_poly_at(text, ctx, field, 1, 1)
}

/// Canonical text of a polynomial; inverse of [`parse_poly`].
pub fn print_poly(p: &Polynomial) -> String {
    p.to_string()
}

/// Field declaration text: `Q`, `Q(i)` or `Q(sqrt -d)`.
pub fn parse_field(text: &str) -> Result<FieldSpec, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.as_str() {
        "Q" => return Ok(FieldSpec::Rationals),
        "Q(i)" => return Ok(FieldSpec::gaussian()),
        _ => {}
    }
    let inner = compact
        .strip_prefix("Q(sqrt")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| format!("invalid field `{}`; expected Q, Q(i) or Q(sqrt -d)", text.trim()))?;
    let inner = inner.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(inner);
    let m: i64 = inner.parse().map_err(|_| format!("invalid radicand `{inner}`"))?;
    FieldSpec::quadratic(m).map_err(|e| e.to_string())
}

/// Raw contents of a problem file; `symmetry` may be absent for `gb`.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub field: FieldSpec,
    pub vars: Context,
    pub ideal: Vec<Polynomial>,
    pub symmetry: Option<Vec<Polynomial>>,
    pub order: Option<MonomialOrder>,
}

#[derive(PartialEq)]
enum Section {
    Header,
    Ideal,
    Symmetry,
    Options,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

/// Parses a problem file without requiring a symmetry section.
pub fn parse_problem_file(text: &str) -> Result<ProblemFile, ParseError> {
    let mut field: Option<FieldSpec> = None;
    let mut vars: Option<Context> = None;
    let mut ideal = Vec::new();
    let mut symmetry: Option<Vec<Polynomial>> = None;
    let mut order = None;
    let mut section = Section::Header;
    let mut last_line = 1;

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        last_line = line_no;
        let body = strip_comment(raw);
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.chars().take_while(|c| c.is_whitespace()).count() + 1;
        match trimmed {
            "ideal:" => {
                section = Section::Ideal;
                continue;
            }
            "symmetry:" => {
                section = Section::Symmetry;
                symmetry.get_or_insert_with(Vec::new);
                continue;
            }
            "options:" => {
                section = Section::Options;
                continue;
            }
            _ => {}
        }
        if let Some(rest) = trimmed.strip_prefix("field ").or(if trimmed == "field" { Some("") } else { None }) {
            if vars.is_some() || field.is_some() {
                return Err(ParseError::new(line_no, indent, "field must be declared once, before vars"));
            }
            field = Some(parse_field(rest).map_err(|m| ParseError::new(line_no, indent + 6, m))?);
            section = Section::Header;
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("vars").filter(|r| r.is_empty() || r.starts_with(char::is_whitespace))
        {
            if vars.is_some() {
                return Err(ParseError::new(line_no, indent, "vars declared twice"));
            }
            let names: Vec<&str> = rest.split_whitespace().collect();
            if names.is_empty() {
                return Err(ParseError::new(line_no, indent, "at least one variable must be declared"));
            }
            for n in &names {
                let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                if !ok || *n == "i" || *n == "s" {
                    let col = raw.find(n).map(|c| c + 1).unwrap_or(indent);
                    return Err(ParseError::new(line_no, col, format!("invalid variable name `{n}`")));
                }
            }
            vars = Some(
                VariableContext::new(names.iter().copied())
                    .map_err(|e| ParseError::new(line_no, indent, e.to_string()))?,
            );
            section = Section::Header;
            continue;
        }
        match section {
            Section::Header => {
                return Err(ParseError::new(line_no, indent, format!("unexpected line `{trimmed}`")));
            }
            Section::Ideal | Section::Symmetry => {
                let f = field.ok_or_else(|| ParseError::new(line_no, indent, "field must be declared first"))?;
                let ctx =
                    vars.as_ref().ok_or_else(|| ParseError::new(line_no, indent, "vars must be declared first"))?;
                let p = parse_poly_at(body.trim_end(), ctx, f, line_no, 1)?;
                if section == Section::Ideal {
                    ideal.push(p);
                } else {
                    symmetry.as_mut().unwrap().push(p);
                }
            }
            Section::Options => {
                let (key, value) = trimmed
                    .split_once('=')
                    .ok_or_else(|| ParseError::new(line_no, indent, "expected `key = value`"))?;
                match (key.trim(), value.trim()) {
                    ("order", "grevlex") => order = Some(MonomialOrder::GrevLex),
                    ("order", "lex") => order = Some(MonomialOrder::Lex),
                    ("order", v) => {
                        return Err(ParseError::new(line_no, indent, format!("unknown order `{v}`")));
                    }
                    (k, _) => return Err(ParseError::new(line_no, indent, format!("unknown option `{k}`"))),
                }
            }
        }
    }

    let field = field.ok_or_else(|| ParseError::new(1, 1, "missing field declaration"))?;
    let vars = vars.ok_or_else(|| ParseError::new(1, 1, "missing vars declaration"))?;
    if ideal.iter().all(Polynomial::is_zero) {
        return Err(ParseError::new(last_line, 1, "ideal must have at least one generator"));
    }
    if let Some(sym) = &symmetry {
        if sym.len() != vars.len() {
            return Err(ParseError::new(
                last_line,
                1,
                format!("symmetry must have exactly {} components, found {}", vars.len(), sym.len()),
            ));
        }
    }
    Ok(ProblemFile { field, vars, ideal, symmetry, order })
}

/// Parses a problem file into a [`DescentProblem`]; the symmetry section is
/// mandatory.
pub fn parse_problem(text: &str) -> Result<DescentProblem, ParseError> {
    let file = parse_problem_file(text)?;
    file.into_problem()
}

impl ProblemFile {
    pub fn into_problem(self) -> Result<DescentProblem, ParseError> {
        let symmetry = self.symmetry.ok_or_else(|| ParseError::new(1, 1, "missing symmetry section"))?;
        let map = PolyMap::new(&self.vars, &self.vars, symmetry).expect("arity checked while parsing");
        let mut options = DescentOptions::default();
        if let Some(o) = self.order {
            options.order = o;
        }
        Ok(DescentProblem::new(self.field, self.ideal, map, options).expect("parsed components share a context"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const HUMBERT: &str = "\
field Q(i)
vars x1 x2 x3 x4
ideal:
  1 + x1^2 + x2^2
  -1 + x1^2 + x3^2
  i + x1^2 + x4^2
symmetry:
  i*x1
  i*x3
  i*x2
  i*x4
";

    fn ctx4() -> Context {
        VariableContext::indexed("x", 4)
    }

    #[test]
    fn humbert_file() {
        let p = parse_problem(HUMBERT).unwrap();
        assert_eq!(p.dimension(), 4);
        assert_eq!(p.generators().len(), 3);
        assert_eq!(p.generators()[2].to_string(), "x1^2 + x4^2 + i");
    }

    #[test]
    fn empty_ideal_rejected() {
        let e = parse_problem("field Q\nvars x\nideal:\nsymmetry:\n  x\n").unwrap_err();
        assert_eq!(e.message, "ideal must have at least one generator");
    }

    #[test]
    fn undeclared_variable() {
        let e = parse_poly("x1 + x5", &ctx4(), FieldSpec::gaussian()).unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        assert!(e.message.contains("x5"));
        let e = parse_problem("field Q\nvars x1 x2 x3 x4\nideal:\n  x5\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 3));
    }

    #[test]
    fn symmetry_arity() {
        let e = parse_problem("field Q\nvars x y\nideal:\n  x\nsymmetry:\n  x\n").unwrap_err();
        assert!(e.message.contains("exactly 2"));
    }

    #[test]
    fn field_specs() {
        assert_eq!(parse_field("Q"), Ok(FieldSpec::Rationals));
        assert_eq!(parse_field("Q(i)"), Ok(FieldSpec::gaussian()));
        assert_eq!(parse_field("Q(sqrt -2)"), Ok(FieldSpec::Quadratic(-2)));
        assert_eq!(parse_field("Q(sqrt(-7))"), Ok(FieldSpec::Quadratic(-7)));
        assert!(parse_field("Q(sqrt -4)").is_err());
        assert!(parse_field("Q(sqrt 3)").is_err());
        assert!(parse_problem("field Q(sqrt -8)\nvars x\nideal:\n x\nsymmetry:\n x\n").is_err());
    }

    #[test]
    fn expressions() {
        let c = ctx4();
        let g = FieldSpec::gaussian();
        let p = parse_poly("i + x1^2 + x4^2", &c, g).unwrap();
        assert_eq!(p.terms().last().unwrap().1, FieldElement::sqrt_m(g).unwrap());
        assert!(parse_poly("0", &c, g).unwrap().is_zero());
        assert_eq!(parse_poly("(x1+1)^2", &c, g).unwrap().to_string(), "x1^2 + 2*x1 + 1");
        assert_eq!(parse_poly("-x1*-x2", &c, g).unwrap().to_string(), "x1*x2");
        assert_eq!(parse_poly("1/2*x1 - 3/4", &c, FieldSpec::Rationals).unwrap().to_string(), "1/2*x1 - 3/4");
        assert!(parse_poly("x1 x2", &c, g).is_err());
        assert!(parse_poly("x1^", &c, g).is_err());
        assert!(parse_poly("(x1", &c, g).is_err());
        assert!(parse_poly("1/0", &c, g).is_err());
    }

    #[test]
    fn sqrt_symbols() {
        let c = ctx4();
        let f2 = FieldSpec::quadratic(-2).unwrap();
        assert_eq!(parse_poly("s*s", &c, f2).unwrap().to_string(), "-2");
        assert!(parse_poly("i", &c, f2).is_err());
        assert!(parse_poly("i", &c, FieldSpec::Rationals).is_err());
        assert_eq!(parse_poly("s*x1", &c, FieldSpec::gaussian()).unwrap().to_string(), "i*x1");
    }

    #[test]
    fn printing() {
        let c = ctx4();
        let g = FieldSpec::gaussian();
        assert_eq!(print_poly(&parse_poly("0", &c, g).unwrap()), "0");
        assert_eq!(print_poly(&parse_poly("x1^2 - 1", &c, g).unwrap()), "x1^2 - 1");
        assert_eq!(print_poly(&parse_poly("x1^2 - i*x2", &c, g).unwrap()), "x1^2 - i*x2");
        let s = "x1^2 + 2*i*x1*x2 - 1/2";
        assert_eq!(print_poly(&parse_poly(s, &c, g).unwrap()), s);
    }

    #[test]
    fn comments_and_options() {
        let text = "# header\nfield Q # rationals\nvars x y\nideal:\n  x - y # first\noptions:\n  order = lex\n";
        let f = parse_problem_file(text).unwrap();
        assert_eq!(f.order, Some(MonomialOrder::Lex));
        assert!(f.symmetry.is_none());
        assert!(parse_problem_file("field Q\nvars x\nideal:\n x\noptions:\n order = deglex\n").is_err());
    }
}

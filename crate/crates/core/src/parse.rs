//! Parser for the knowledge-base text format.
//!
//! The format is UTF-8 and line-oriented, `#` starts a comment:
//!
//! ```text
//! pred Smokes/1
//! const a b c
//! axiom sym : ~F(x,y)^0.96 | F(y,x)      : [1,1]
//! fact  Smokes(a) : [1,1]
//! query q1 : exists y. F(a,y)
//! ```
//!
//! Formula grammar, tightest first: `~`, `&`, `|`, `->` (right
//! associative); quantifier scope extends maximally right. An operand
//! weight is written `operand^0.9`; a connective bias as a suffix on
//! the connective token (`&@1.2`, `|@0.8`, `->@1.1`). Unannotated
//! weights and biases default to 1.

use crate::bounds::Bounds;
use crate::formula::{Axiom, Fact, Formula, KbError, KnowledgeBase, Query, Term, Weighted};
use crate::{lit, Real};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Kb(#[from] KbError),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Not,
    And(Option<f64>),
    Or(Option<f64>),
    Implies(Option<f64>),
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Slash,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line,
            col: 1,
        }
    }

    fn error<S: Into<String>>(&self, msg: S) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied();
        if b.is_some() {
            self.pos += 1;
            self.col += 1;
        }
        b
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9') | Some(b'.')) {
            self.bump();
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<f64>().map_err(|_| self.error(format!("bad number literal {:?}", s)))
    }

    fn opt_bias(&mut self) -> Result<Option<f64>, ParseError> {
        if self.peek() == Some(b'@') {
            self.bump();
            Ok(Some(self.number()?))
        } else {
            Ok(None)
        }
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'\r')) {
                self.bump();
            }
            let col = self.col;
            let b = match self.peek() {
                None | Some(b'#') => break,
                Some(b) => b,
            };
            let tok = match b {
                b'~' | b'!' => {
                    self.bump();
                    Tok::Not
                }
                b'&' => {
                    self.bump();
                    Tok::And(self.opt_bias()?)
                }
                b'|' => {
                    self.bump();
                    Tok::Or(self.opt_bias()?)
                }
                b'-' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Implies(self.opt_bias()?)
                    } else {
                        return Err(self.error("expected '>' after '-'"));
                    }
                }
                b'^' => {
                    self.bump();
                    Tok::Caret
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b':' => {
                    self.bump();
                    Tok::Colon
                }
                b'/' => {
                    self.bump();
                    Tok::Slash
                }
                b'.' => {
                    if matches!(self.peek2(), Some(b'0'..=b'9')) {
                        Tok::Number(self.number()?)
                    } else {
                        self.bump();
                        Tok::Dot
                    }
                }
                b'0'..=b'9' => Tok::Number(self.number()?),
                b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                    let start = self.pos;
                    while matches!(
                        self.peek(),
                        Some(b'A'..=b'Z') | Some(b'a'..=b'z') | Some(b'0'..=b'9') | Some(b'_') | Some(b'\'')
                    ) {
                        self.bump();
                    }
                    let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    Tok::Ident(s.to_string())
                }
                other => return Err(self.error(format!("unexpected character {:?}", other as char))),
            };
            out.push((tok, self.line, col));
        }
        Ok(out)
    }
}

struct Parser<'k, T> {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    kb: Option<&'k KnowledgeBase<T>>,
}

impl<'k, T: Real> Parser<'k, T> {
    fn new(toks: Vec<Spanned>, line: usize, kb: Option<&'k KnowledgeBase<T>>) -> Self {
        Parser { toks, pos: 0, line, kb }
    }

    fn error<S: Into<String>>(&self, msg: S) -> ParseError {
        let col = self.toks.get(self.pos).map(|t| t.2).unwrap_or(0);
        ParseError::Syntax {
            line: self.line,
            col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.bump() {
            Some(Tok::Ident(s)) => Ok(s),
            other => Err(self.error(format!("expected identifier, found {:?}", other))),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.bump() {
            Some(ref t) if *t == tok => Ok(()),
            other => Err(self.error(format!("expected {:?}, found {:?}", tok, other))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// formula with no dangling operand weight
    fn formula(&mut self) -> Result<Formula<T>, ParseError> {
        let w = self.quantified()?;
        if w.weight != T::one() {
            return Err(self.error("operand weight without an enclosing connective"));
        }
        Ok(w.formula)
    }

    fn quantified(&mut self) -> Result<Weighted<T>, ParseError> {
        if let Some(Tok::Ident(kw)) = self.peek() {
            if kw == "forall" || kw == "exists" {
                let is_forall = kw == "forall";
                self.bump();
                let mut vars = Vec::new();
                loop {
                    match self.peek() {
                        Some(Tok::Ident(_)) => vars.push(self.expect_ident()?),
                        Some(Tok::Dot) => {
                            self.bump();
                            break;
                        }
                        _ => return Err(self.error("expected variable or '.' in quantifier")),
                    }
                }
                if vars.is_empty() {
                    return Err(self.error("quantifier needs at least one variable"));
                }
                let body = self.quantified()?;
                if body.weight != T::one() {
                    return Err(self.error("quantifier body cannot carry a weight"));
                }
                let f = if is_forall {
                    Formula::ForAll { vars, body: Box::new(body.formula) }
                } else {
                    Formula::Exists { vars, body: Box::new(body.formula) }
                };
                return Ok(Weighted { weight: T::one(), formula: f });
            }
        }
        self.implication()
    }

    fn implication(&mut self) -> Result<Weighted<T>, ParseError> {
        let lhs = self.disjunction()?;
        if let Some(Tok::Implies(bias)) = self.peek().cloned() {
            self.bump();
            let rhs = self.quantified()?; // right associative, quantifiers allowed
            let f = Formula::Implies {
                antecedent: Box::new(lhs),
                consequent: Box::new(rhs),
                bias: bias.map(lit::<T>).unwrap_or_else(T::one),
            };
            return Ok(Weighted { weight: T::one(), formula: f });
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Weighted<T>, ParseError> {
        let first = self.conjunction()?;
        if !matches!(self.peek(), Some(Tok::Or(_))) {
            return Ok(first);
        }
        let mut operands = vec![first];
        let mut bias: Option<f64> = None;
        while let Some(Tok::Or(b)) = self.peek().cloned() {
            self.bump();
            if let Some(b) = b {
                if bias.is_some() && bias != Some(b) {
                    return Err(self.error("conflicting bias annotations in one chain"));
                }
                bias = Some(b);
            }
            operands.push(self.conjunction()?);
        }
        Ok(Weighted {
            weight: T::one(),
            formula: Formula::Or {
                operands,
                bias: bias.map(lit::<T>).unwrap_or_else(T::one),
            },
        })
    }

    fn conjunction(&mut self) -> Result<Weighted<T>, ParseError> {
        let first = self.operand()?;
        if !matches!(self.peek(), Some(Tok::And(_))) {
            return Ok(first);
        }
        let mut operands = vec![first];
        let mut bias: Option<f64> = None;
        while let Some(Tok::And(b)) = self.peek().cloned() {
            self.bump();
            if let Some(b) = b {
                if bias.is_some() && bias != Some(b) {
                    return Err(self.error("conflicting bias annotations in one chain"));
                }
                bias = Some(b);
            }
            operands.push(self.operand()?);
        }
        Ok(Weighted {
            weight: T::one(),
            formula: Formula::And {
                operands,
                bias: bias.map(lit::<T>).unwrap_or_else(T::one),
            },
        })
    }

    fn operand(&mut self) -> Result<Weighted<T>, ParseError> {
        let f = self.negation()?;
        let weight = if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Number(n)) => lit::<T>(n),
                other => return Err(self.error(format!("expected weight after '^', found {:?}", other))),
            }
        } else {
            T::one()
        };
        Ok(Weighted { weight, formula: f })
    }

    fn negation(&mut self) -> Result<Formula<T>, ParseError> {
        if self.peek() == Some(&Tok::Not) {
            self.bump();
            let inner = self.negation()?;
            return Ok(Formula::Not(Box::new(inner)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula<T>, ParseError> {
        match self.bump() {
            Some(Tok::LParen) => {
                let w = self.quantified()?;
                if w.weight != T::one() {
                    return Err(self.error("operand weight without an enclosing connective"));
                }
                self.expect(Tok::RParen)?;
                Ok(w.formula)
            }
            Some(Tok::Ident(name)) => {
                if name == "forall" || name == "exists" {
                    return Err(self.error("quantifier not allowed here; parenthesize it"));
                }
                let mut args = Vec::new();
                if self.peek() == Some(&Tok::LParen) {
                    self.bump();
                    if self.peek() == Some(&Tok::RParen) {
                        self.bump();
                    } else {
                        loop {
                            let id = self.expect_ident()?;
                            args.push(id);
                            match self.bump() {
                                Some(Tok::Comma) => continue,
                                Some(Tok::RParen) => break,
                                other => {
                                    return Err(self.error(format!(
                                        "expected ',' or ')' in argument list, found {:?}",
                                        other
                                    )))
                                }
                            }
                        }
                    }
                }
                let terms = args
                    .into_iter()
                    .map(|a| match self.kb {
                        Some(kb) => kb.resolve_term(&a),
                        None => Term::Var(a),
                    })
                    .collect();
                Ok(Formula::Atom { pred: name, args: terms })
            }
            other => Err(self.error(format!("expected formula, found {:?}", other))),
        }
    }

    fn bounds(&mut self) -> Result<Bounds<T>, ParseError> {
        self.expect(Tok::LBracket)?;
        let lo = match self.bump() {
            Some(Tok::Number(n)) => n,
            other => return Err(self.error(format!("expected lower bound, found {:?}", other))),
        };
        self.expect(Tok::Comma)?;
        let hi = match self.bump() {
            Some(Tok::Number(n)) => n,
            other => return Err(self.error(format!("expected upper bound, found {:?}", other))),
        };
        self.expect(Tok::RBracket)?;
        Ok(Bounds::new(lit(lo), lit(hi)))
    }
}

/// Parse a standalone formula. Argument identifiers become variables;
/// use [`parse_formula_in`] to resolve constants against a KB.
pub fn parse_formula<T: Real>(text: &str) -> Result<Formula<T>, ParseError> {
    let toks = Lexer::new(text, 1).tokens()?;
    let mut p: Parser<'_, T> = Parser::new(toks, 1, None);
    let f = p.formula()?;
    if !p.at_end() {
        return Err(p.error("trailing input after formula"));
    }
    Ok(f)
}

/// Parse a formula resolving declared constants.
pub fn parse_formula_in<'k, T: Real>(
    text: &str,
    kb: &'k KnowledgeBase<T>,
) -> Result<Formula<T>, ParseError> {
    let toks = Lexer::new(text, 1).tokens()?;
    let mut p = Parser::new(toks, 1, Some(kb));
    let f = p.formula()?;
    if !p.at_end() {
        return Err(p.error("trailing input after formula"));
    }
    Ok(f)
}

/// Parse a whole knowledge-base file.
pub fn parse_kb<T: Real>(text: &str) -> Result<KnowledgeBase<T>, ParseError> {
    let mut kb = KnowledgeBase::default();
    // first pass: declarations and constants, so atom arguments can be
    // resolved while parsing formulae on the second pass
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let toks = Lexer::new(raw, line).tokens()?;
        if toks.is_empty() {
            continue;
        }
        let mut p: Parser<'_, T> = Parser::new(toks, line, None);
        let kw = p.expect_ident()?;
        match kw.as_str() {
            "pred" => {
                let name = p.expect_ident()?;
                p.expect(Tok::Slash)?;
                let arity = match p.bump() {
                    Some(Tok::Number(n)) if n.fract() == 0.0 && n >= 0.0 => n as usize,
                    other => return Err(p.error(format!("expected arity, found {:?}", other))),
                };
                if let Some(&prev) = kb.predicates.get(&name) {
                    if prev != arity {
                        return Err(KbError::DuplicatePredicate(name).into());
                    }
                }
                kb.predicates.insert(name, arity);
            }
            "const" => {
                while !p.at_end() {
                    let name = p.expect_ident()?;
                    kb.add_constant(&name);
                }
            }
            "fact" => {
                // register the constants now; bounds parsed on pass two
                let _pred = p.expect_ident()?;
                if p.peek() == Some(&Tok::LParen) {
                    p.bump();
                    if p.peek() == Some(&Tok::RParen) {
                        p.bump();
                    } else {
                        loop {
                            let id = p.expect_ident()?;
                            kb.add_constant(&id);
                            match p.bump() {
                                Some(Tok::Comma) => continue,
                                Some(Tok::RParen) => break,
                                other => {
                                    return Err(p.error(format!(
                                        "expected ',' or ')' in fact arguments, found {:?}",
                                        other
                                    )))
                                }
                            }
                        }
                    }
                }
            }
            "axiom" | "query" => {}
            other => {
                return Err(p.error(format!(
                    "unknown directive {:?}; expected pred/const/axiom/fact/query",
                    other
                )))
            }
        }
    }
    // second pass: axioms, facts, queries
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let toks = Lexer::new(raw, line).tokens()?;
        if toks.is_empty() {
            continue;
        }
        let keyword = match &toks[0].0 {
            Tok::Ident(s) => s.clone(),
            _ => unreachable!("validated in pass one"),
        };
        match keyword.as_str() {
            "pred" | "const" => {}
            "axiom" => {
                let mut p = Parser::new(toks, line, Some(&kb));
                p.bump();
                let id = p.expect_ident()?;
                p.expect(Tok::Colon)?;
                let formula = p.formula()?;
                let bounds = if p.peek() == Some(&Tok::Colon) {
                    p.bump();
                    p.bounds()?
                } else {
                    // formulae are taken as true unless annotated
                    Bounds::new(T::one(), T::one())
                };
                if !p.at_end() {
                    return Err(p.error("trailing input after axiom"));
                }
                kb.axioms.push(Axiom { id, formula, bounds });
            }
            "query" => {
                let mut p = Parser::new(toks, line, Some(&kb));
                p.bump();
                let id = p.expect_ident()?;
                p.expect(Tok::Colon)?;
                let formula = p.formula()?;
                if !p.at_end() {
                    return Err(p.error("trailing input after query"));
                }
                kb.queries.push(Query { id, formula });
            }
            "fact" => {
                let mut p: Parser<'_, T> = Parser::new(toks, line, None);
                p.bump();
                let pred = p.expect_ident()?;
                let mut args = Vec::new();
                if p.peek() == Some(&Tok::LParen) {
                    p.bump();
                    if p.peek() == Some(&Tok::RParen) {
                        p.bump();
                    } else {
                        loop {
                            args.push(p.expect_ident()?);
                            match p.bump() {
                                Some(Tok::Comma) => continue,
                                Some(Tok::RParen) => break,
                                _ => unreachable!("validated in pass one"),
                            }
                        }
                    }
                }
                let bounds = if p.peek() == Some(&Tok::Colon) {
                    p.bump();
                    p.bounds()?
                } else {
                    Bounds::new(T::one(), T::one())
                };
                if !p.at_end() {
                    return Err(p.error("trailing input after fact"));
                }
                kb.add_fact(Fact { pred, args, bounds });
            }
            _ => {}
        }
    }
    kb.validate()?;
    Ok(kb)
}

/// Render a KB back to its textual form.
pub fn format_kb<T: Real>(kb: &KnowledgeBase<T>) -> String {
    let mut out = String::new();
    for (name, arity) in &kb.predicates {
        out.push_str(&format!("pred {}/{}\n", name, arity));
    }
    if !kb.constants.is_empty() {
        out.push_str(&format!("const {}\n", kb.constants.join(" ")));
    }
    for ax in &kb.axioms {
        out.push_str(&format!(
            "axiom {} : {} : [{},{}]\n",
            ax.id, ax.formula, ax.bounds.lower, ax.bounds.upper
        ));
    }
    for f in &kb.facts {
        let args = if f.args.is_empty() {
            String::new()
        } else {
            format!("({})", f.args.join(","))
        };
        out.push_str(&format!(
            "fact {}{} : [{},{}]\n",
            f.pred, args, f.bounds.lower, f.bounds.upper
        ));
    }
    for q in &kb.queries {
        out.push_str(&format!("query {} : {}\n", q.id, q.formula));
    }
    out
}

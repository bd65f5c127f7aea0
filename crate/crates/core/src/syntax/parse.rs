//! Recursive-descent parser for the concrete grammar:
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := prefix ("&" prefix)*
//! prefix  := ("~"|"?"|"!"|"box"|"nabla"|"dia") prefix
//!          | ("forall"|"exists") IDENT+ "." prefix
//!          | "[" term "]" prefix
//!          | atom
//! atom    := "(" formula ")" | "Top" | "Bot" | "Triv" | "Abs" | IDENT ("(" term ("," term)* ")")?
//! term    := IDENT | term "'" | term "[" term "]" | "*" "{" formula "}"
//! ```
//!
//! `~`, `<->`, `box`, `nabla` and `dia` are abbreviations and are expanded
//! while parsing; `[t]F` is only available with proof terms enabled.

use super::signature::KEYWORDS;
use super::{Formula, Pos, Signature, Sort, SyntaxError, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Tilde,
    Query,
    Bang,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Prime,
    Star,
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut iter = text.char_indices().peekable();
    while let Some(&(offset, ch)) = iter.peek() {
        let pos = Pos { offset, line, col };
        let mut advance = |iter: &mut std::iter::Peekable<std::str::CharIndices>| {
            let (_, c) = iter.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        if ch.is_whitespace() {
            advance(&mut iter);
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&(_, c)) = iter.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    advance(&mut iter);
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(s), pos));
            continue;
        }
        let tok = match ch {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '~' | '¬' => Tok::Tilde,
            '?' => Tok::Query,
            '!' => Tok::Bang,
            '&' | '∧' => Tok::Amp,
            '|' | '∨' => Tok::Bar,
            '→' => Tok::Arrow,
            '↔' => Tok::DArrow,
            '\'' | '′' => Tok::Prime,
            '*' => Tok::Star,
            '∀' => Tok::Ident("forall".into()),
            '∃' => Tok::Ident("exists".into()),
            '□' => Tok::Ident("box".into()),
            '∇' => Tok::Ident("nabla".into()),
            '◇' => Tok::Ident("dia".into()),
            '⊤' => Tok::Ident("Top".into()),
            '⊥' => Tok::Ident("Bot".into()),
            '✓' => Tok::Ident("Triv".into()),
            '⨳' => Tok::Ident("Abs".into()),
            '-' => {
                advance(&mut iter);
                match iter.peek() {
                    Some(&(_, '>')) => {
                        advance(&mut iter);
                        out.push((Tok::Arrow, pos));
                        continue;
                    }
                    _ => return Err(SyntaxError::Lex { ch: '-', at: Some(pos) }),
                }
            }
            '<' => {
                advance(&mut iter);
                let ok = matches!(iter.peek(), Some(&(_, '-')));
                if ok {
                    advance(&mut iter);
                    if matches!(iter.peek(), Some(&(_, '>'))) {
                        advance(&mut iter);
                        out.push((Tok::DArrow, pos));
                        continue;
                    }
                }
                return Err(SyntaxError::Lex { ch: '<', at: Some(pos) });
            }
            other => return Err(SyntaxError::Lex { ch: other, at: Some(pos) }),
        };
        advance(&mut iter);
        out.push((tok, pos));
    }
    let end = Pos { offset: text.len(), line, col };
    out.push((Tok::Eof, end));
    Ok(out)
}

/// Parser over a token stream, checking identifiers against a signature.
pub struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    idx: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    pub fn new(text: &str, sig: &'a Signature) -> Result<Self, SyntaxError> {
        Ok(Parser { toks: lex(text)?, idx: 0, sig })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.idx].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].0.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn err(&self, msg: String) -> SyntaxError {
        let found = match self.peek() {
            Tok::Eof => "end of input".to_string(),
            Tok::Ident(s) => format!("`{s}`"),
            t => format!("{t:?}"),
        };
        SyntaxError::Grammar { msg: format!("{msg}, found {found}"), at: Some(self.pos()) }
    }

    pub fn finish(&mut self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.err("expected end of formula".into()))
        }
    }

    fn binary(&self, at: Pos, a: Formula, b: Formula, mk: fn(Formula, Formula) -> Formula) -> Result<Formula, SyntaxError> {
        let (sa, sb) = (a.sort(), b.sort());
        if sa != sb {
            return Err(SyntaxError::SortClash { left: sa, right: sb, at: Some(at) });
        }
        Ok(mk(a, b))
    }

    pub fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DArrow {
            let at = self.pos();
            self.bump();
            let rhs = self.imp()?;
            lhs = self.binary(at, lhs, rhs, Formula::iff)?;
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            let at = self.pos();
            self.bump();
            let rhs = self.imp()?;
            return self.binary(at, lhs, rhs, Formula::imp);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Bar {
            let at = self.pos();
            self.bump();
            let rhs = self.and()?;
            lhs = self.binary(at, lhs, rhs, Formula::or)?;
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.prefix()?;
        while *self.peek() == Tok::Amp {
            let at = self.pos();
            self.bump();
            let rhs = self.prefix()?;
            lhs = self.binary(at, lhs, rhs, Formula::and)?;
        }
        Ok(lhs)
    }

    fn need_mixing(&self, at: Pos) -> Result<(), SyntaxError> {
        if self.sig.flags.query_bang {
            Ok(())
        } else {
            Err(SyntaxError::Disabled { feature: "the operators ? and !", at: Some(at) })
        }
    }

    fn operand(&self, op: &'static str, f: &Formula, expected: Sort, at: Pos) -> Result<(), SyntaxError> {
        let found = f.sort();
        if found == expected {
            Ok(())
        } else {
            Err(SyntaxError::WrongOperand { op, expected, found, at: Some(at) })
        }
    }

    fn prefix(&mut self) -> Result<Formula, SyntaxError> {
        let at = self.pos();
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                let f = self.prefix()?;
                Ok(Formula::not(f))
            }
            Tok::Query => {
                self.bump();
                self.need_mixing(at)?;
                let f = self.prefix()?;
                self.operand("?", &f, Sort::I, at)?;
                Ok(Formula::query(f))
            }
            Tok::Bang => {
                self.bump();
                self.need_mixing(at)?;
                let f = self.prefix()?;
                self.operand("!", &f, Sort::C, at)?;
                Ok(Formula::bang(f))
            }
            Tok::LBracket => {
                self.bump();
                if !self.sig.flags.proof_terms {
                    return Err(SyntaxError::Disabled { feature: "proof terms", at: Some(at) });
                }
                let t = self.term()?;
                self.expect(Tok::RBracket, "`]`")?;
                let f = self.prefix()?;
                self.operand("[t]", &f, Sort::C, at)?;
                Ok(Formula::ProofOf(t, Box::new(f)))
            }
            Tok::Ident(kw) if matches!(kw.as_str(), "box" | "nabla" | "dia") => {
                self.bump();
                self.need_mixing(at)?;
                let f = self.prefix()?;
                match kw.as_str() {
                    "box" => {
                        self.operand("box", &f, Sort::C, at)?;
                        Ok(Formula::boxed(f))
                    }
                    "nabla" => {
                        self.operand("nabla", &f, Sort::I, at)?;
                        Ok(Formula::nabla(f))
                    }
                    _ => {
                        self.operand("dia", &f, Sort::C, at)?;
                        Ok(Formula::diamond(f))
                    }
                }
            }
            Tok::Ident(kw) if kw == "forall" || kw == "exists" => {
                self.bump();
                let mut vars = Vec::new();
                while let Tok::Ident(x) = self.peek().clone() {
                    if KEYWORDS.contains(&x.as_str()) {
                        return Err(self.err("expected a variable".into()));
                    }
                    self.bump();
                    vars.push(x);
                }
                if vars.is_empty() {
                    return Err(self.err("expected a bound variable".into()));
                }
                self.expect(Tok::Dot, "`.` after quantified variables")?;
                let mut body = self.prefix()?;
                for x in vars.into_iter().rev() {
                    body = if kw == "forall" { Formula::forall(x, body) } else { Formula::exists(x, body) };
                }
                Ok(body)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let at = self.pos();
        match self.bump() {
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) => match name.as_str() {
                "Top" | "Bot" => {
                    if !self.sig.flags.c_sort {
                        return Err(SyntaxError::Disabled { feature: "c-formulas", at: Some(at) });
                    }
                    Ok(if name == "Top" { Formula::Top } else { Formula::Bot })
                }
                "Triv" | "Abs" => {
                    if !self.sig.flags.i_sort {
                        return Err(SyntaxError::Disabled { feature: "i-formulas", at: Some(at) });
                    }
                    Ok(if name == "Triv" { Formula::Triv } else { Formula::Absurd })
                }
                kw if KEYWORDS.contains(&kw) => Err(SyntaxError::Grammar {
                    msg: format!("unexpected keyword `{kw}`"),
                    at: Some(at),
                }),
                _ => {
                    let decl = self
                        .sig
                        .get(&name)
                        .cloned()
                        .ok_or(SyntaxError::Undeclared { name: name.clone(), at: Some(at) })?;
                    let enabled = match decl.sort {
                        Sort::I => self.sig.flags.i_sort,
                        Sort::C => self.sig.flags.c_sort,
                    };
                    if !enabled {
                        return Err(SyntaxError::Disabled { feature: "this sort", at: Some(at) });
                    }
                    let mut args = Vec::new();
                    if *self.peek() == Tok::LParen {
                        self.bump();
                        loop {
                            let targ_at = self.pos();
                            let t = self.term()?;
                            if !t.is_var() && !self.sig.flags.proof_terms {
                                return Err(SyntaxError::Disabled { feature: "proof terms", at: Some(targ_at) });
                            }
                            args.push(t);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                        self.expect(Tok::RParen, "`)` or `,`")?;
                    }
                    if args.len() != decl.arity {
                        return Err(SyntaxError::Arity {
                            name,
                            expected: decl.arity,
                            found: args.len(),
                            at: Some(at),
                        });
                    }
                    Ok(Formula::Atom { pred: name, sort: decl.sort, args })
                }
            },
            _ => {
                self.idx -= 1;
                Err(self.err("expected a formula".into()))
            }
        }
    }

    pub fn term(&mut self) -> Result<Term, SyntaxError> {
        let at = self.pos();
        let mut t = match self.bump() {
            Tok::Ident(x) if !KEYWORDS.contains(&x.as_str()) => Term::Var(x),
            Tok::Star => {
                if !self.sig.flags.proof_terms {
                    return Err(SyntaxError::Disabled { feature: "proof terms", at: Some(at) });
                }
                self.expect(Tok::LBrace, "`{` after `*`")?;
                let f = self.formula()?;
                self.operand("*{}", &f, Sort::C, at)?;
                self.expect(Tok::RBrace, "`}`")?;
                Term::Star(Box::new(f))
            }
            _ => {
                self.idx -= 1;
                return Err(self.err("expected a term".into()));
            }
        };
        loop {
            match self.peek() {
                Tok::Prime => {
                    let p = self.pos();
                    self.bump();
                    if !self.sig.flags.proof_terms {
                        return Err(SyntaxError::Disabled { feature: "proof terms", at: Some(p) });
                    }
                    t = Term::Prime(Box::new(t));
                }
                Tok::LBracket => {
                    let p = self.pos();
                    if !self.sig.flags.proof_terms {
                        return Err(SyntaxError::Disabled { feature: "proof terms", at: Some(p) });
                    }
                    self.bump();
                    let arg = self.term()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    t = Term::App(Box::new(t), Box::new(arg));
                }
                _ => break,
            }
        }
        Ok(t)
    }
}

/// Parses and sort-checks a formula against `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, sig)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new()
            .problem("alpha", 0)
            .problem("beta", 0)
            .problem("gamma", 2)
            .pred("p", 0)
            .pred("q", 1)
    }

    #[test]
    fn query_bang_example() {
        let f = parse_formula("?!p -> p", &sig()).unwrap();
        assert_eq!(f, Formula::imp(Formula::boxed(Formula::prop("p")), Formula::prop("p")));
        assert_eq!(f.sort(), Sort::C);
    }

    #[test]
    fn mixed_conjunction_is_a_sort_clash() {
        let err = parse_formula("alpha & p", &sig()).unwrap_err();
        assert!(matches!(err, SyntaxError::SortClash { .. }), "{err}");
    }

    #[test]
    fn negation_desugars_by_sort() {
        let a = Formula::problem("alpha");
        let f = parse_formula("~~alpha -> alpha", &sig()).unwrap();
        let nn = Formula::imp(Formula::imp(a.clone(), Formula::Absurd), Formula::Absurd);
        assert_eq!(f, Formula::imp(nn, a));
        assert_eq!(f.sort(), Sort::I);
        let g = parse_formula("~p", &sig()).unwrap();
        assert_eq!(g, Formula::imp(Formula::prop("p"), Formula::Bot));
    }

    #[test]
    fn unicode_and_ascii_agree() {
        let s = sig();
        let a = parse_formula("∀x y. γ_dummy", &s);
        assert!(a.is_err());
        let u = parse_formula("∀x. ∃y. gamma(x, y) ∧ ✓ → ¬⨳", &s).unwrap();
        let v = parse_formula("forall x. exists y. gamma(x,y) & Triv -> ~Abs", &s).unwrap();
        assert_eq!(u, v);
        assert_eq!(parse_formula("□p ↔ ◇p", &s).unwrap(), parse_formula("box p <-> dia p", &s).unwrap());
    }

    #[test]
    fn precedence_and_associativity() {
        let s = sig();
        let f = parse_formula("alpha -> beta -> alpha", &s).unwrap();
        let a = Formula::problem("alpha");
        let b = Formula::problem("beta");
        assert_eq!(f, Formula::imp(a.clone(), Formula::imp(b.clone(), a.clone())));
        let g = parse_formula("alpha & beta | alpha", &s).unwrap();
        assert_eq!(g, Formula::or(Formula::and(a.clone(), b.clone()), a.clone()));
        let h = parse_formula("forall x. alpha & beta", &s).unwrap();
        assert_eq!(h, Formula::and(Formula::forall("x", a), b));
    }

    #[test]
    fn reports_errors() {
        let s = sig();
        assert!(matches!(parse_formula("delta", &s), Err(SyntaxError::Undeclared { .. })));
        assert!(matches!(parse_formula("q", &s), Err(SyntaxError::Arity { .. })));
        assert!(matches!(parse_formula("q(x, y)", &s), Err(SyntaxError::Arity { .. })));
        assert!(matches!(parse_formula("?p", &s), Err(SyntaxError::WrongOperand { .. })));
        assert!(matches!(parse_formula("!alpha", &s), Err(SyntaxError::WrongOperand { .. })));
        assert!(matches!(parse_formula("p $ p", &s), Err(SyntaxError::Lex { .. })));
        assert!(matches!(parse_formula("p ->", &s), Err(SyntaxError::Grammar { .. })));
        assert!(matches!(parse_formula("q(x')", &s), Err(SyntaxError::Disabled { .. })));
        let err = parse_formula("p &\n  alpha", &s).unwrap_err();
        assert!(err.to_string().contains("1:3"), "{err}");
    }

    #[test]
    fn proof_terms() {
        let mut s = sig();
        s.flags.proof_terms = true;
        let f = parse_formula("[s[t]] q(t') -> [*{p}]p", &s).unwrap();
        match f {
            Formula::Imp(a, b) => {
                assert!(matches!(*a, Formula::ProofOf(Term::App(..), _)));
                assert!(matches!(*b, Formula::ProofOf(Term::Star(_), _)));
            }
            _ => panic!(),
        }
        assert!(matches!(parse_formula("[t]alpha", &s), Err(SyntaxError::WrongOperand { .. })));
    }
}

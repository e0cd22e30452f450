//! Lexer and recursive-descent parser for `.mpd` programs.
//!
//! Statement precedence, loosest first: `;`, then `[]`, then `[r]`. All three
//! associate to the right. The branches of `if` and the body of `while` extend
//! over choices but stop at `;`, so `if b then s1 else s2; s3` runs `s3` after
//! the conditional.

use num_bigint::BigInt;
use num_traits::Zero;

use super::ast::{BExp, Pos, Program, Stmt, StmtKind};
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, in_unit_interval, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Var,
    Skip,
    Diverge,
    If,
    Then,
    Else,
    While,
    Do,
    True,
    False,
    Assign,
    Semi,
    LBracket,
    RBracket,
    Choice,
    Slash,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Bang,
    Amp,
    Bar,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Eof => "end of input".into(),
            other => {
                let s = match other {
                    Tok::Var => "var",
                    Tok::Skip => "skip",
                    Tok::Diverge => "diverge",
                    Tok::If => "if",
                    Tok::Then => "then",
                    Tok::Else => "else",
                    Tok::While => "while",
                    Tok::Do => "do",
                    Tok::True => "true",
                    Tok::False => "false",
                    Tok::Assign => ":=",
                    Tok::Semi => ";",
                    Tok::LBracket => "[",
                    Tok::RBracket => "]",
                    Tok::Choice => "[]",
                    Tok::Slash => "/",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::Bang => "!",
                    Tok::Amp => "&",
                    Tok::Bar => "|",
                    _ => unreachable!(),
                };
                format!("`{s}`")
            }
        }
    }
}

fn syntax(pos: Pos, msg: impl Into<String>) -> Error {
    Error::SyntaxError {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(&mut i, &mut line, &mut col);
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match word.as_str() {
                "var" => Tok::Var,
                "skip" => Tok::Skip,
                "diverge" => Tok::Diverge,
                "if" => Tok::If,
                "then" => Tok::Then,
                "else" => Tok::Else,
                "while" => Tok::While,
                "do" => Tok::Do,
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(word),
            };
            out.push((tok, pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col);
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().expect("ascii digits")), pos));
            continue;
        }
        let tok = match c {
            ':' if chars.get(i + 1) == Some(&'=') => {
                advance(&mut i, &mut line, &mut col);
                Tok::Assign
            }
            ';' => Tok::Semi,
            '[' => {
                // `[]` may contain blanks but nothing else
                let mut j = i + 1;
                while j < chars.len() && (chars[j] == ' ' || chars[j] == '\t') {
                    j += 1;
                }
                if chars.get(j) == Some(&']') {
                    while i < j {
                        advance(&mut i, &mut line, &mut col);
                    }
                    Tok::Choice
                } else {
                    Tok::LBracket
                }
            }
            ']' => Tok::RBracket,
            '/' => Tok::Slash,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        };
        advance(&mut i, &mut line, &mut col);
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    vars: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Pos> {
        if *self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {}, found {}", want.describe(), self.peek().describe()),
            ))
        }
    }

    fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UndeclaredVariable(name.to_string()))
    }

    fn program(&mut self) -> Result<Program> {
        while *self.peek() == Tok::Var {
            self.bump();
            let pos = self.pos();
            match self.bump().0 {
                Tok::Ident(name) => {
                    if self.vars.contains(&name) {
                        return Err(syntax(pos, format!("variable `{name}` declared twice")));
                    }
                    self.vars.push(name);
                }
                other => return Err(syntax(pos, format!("expected a variable name, found {}", other.describe()))),
            }
            self.expect(Tok::Semi)?;
        }
        let body = self.seq()?;
        if *self.peek() != Tok::Eof {
            return Err(syntax(self.pos(), format!("unexpected {}", self.peek().describe())));
        }
        Ok(Program {
            vars: std::mem::take(&mut self.vars),
            body,
        })
    }

    fn seq(&mut self) -> Result<Stmt> {
        let first = self.choice()?;
        if *self.peek() == Tok::Semi {
            let pos = self.bump().1;
            let rest = self.seq()?;
            return Ok(Stmt {
                pos,
                kind: StmtKind::Seq(Box::new(first), Box::new(rest)),
            });
        }
        Ok(first)
    }

    fn choice(&mut self) -> Result<Stmt> {
        let first = self.prob()?;
        if *self.peek() == Tok::Choice {
            let pos = self.bump().1;
            let rest = self.choice()?;
            return Ok(Stmt {
                pos,
                kind: StmtKind::Choice(Box::new(first), Box::new(rest)),
            });
        }
        Ok(first)
    }

    fn prob(&mut self) -> Result<Stmt> {
        let first = self.atom()?;
        if *self.peek() == Tok::LBracket {
            let pos = self.bump().1;
            let r = self.rational()?;
            self.expect(Tok::RBracket)?;
            let rest = self.prob()?;
            return Ok(Stmt {
                pos,
                kind: StmtKind::Prob(r, Box::new(first), Box::new(rest)),
            });
        }
        Ok(first)
    }

    fn rational(&mut self) -> Result<Rat> {
        let pos = self.pos();
        let num = match self.bump().0 {
            Tok::Int(n) => n,
            other => return Err(syntax(pos, format!("expected a probability, found {}", other.describe()))),
        };
        let r = if *self.peek() == Tok::Slash {
            self.bump();
            let dpos = self.pos();
            let den = match self.bump().0 {
                Tok::Int(d) => d,
                other => return Err(syntax(dpos, format!("expected a denominator, found {}", other.describe()))),
            };
            if den.is_zero() {
                return Err(syntax(dpos, "zero denominator"));
            }
            Rat::new(num, den)
        } else {
            Rat::from_integer(num)
        };
        if !in_unit_interval(&r) {
            return Err(Error::ProbabilityOutOfRange(fmt_rat(&r)));
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Stmt> {
        let (tok, pos) = self.bump();
        let kind = match tok {
            Tok::Skip => StmtKind::Skip,
            Tok::Diverge => StmtKind::Diverge,
            Tok::Ident(name) => {
                let v = self.var_index(&name)?;
                self.expect(Tok::Assign)?;
                StmtKind::Assign(v, self.bexp()?)
            }
            Tok::If => {
                let c = self.bexp()?;
                self.expect(Tok::Then)?;
                let a = self.choice()?;
                self.expect(Tok::Else)?;
                let b = self.choice()?;
                StmtKind::If(c, Box::new(a), Box::new(b))
            }
            Tok::While => {
                let c = self.bexp()?;
                self.expect(Tok::Do)?;
                StmtKind::While(c, Box::new(self.choice()?))
            }
            Tok::LBrace => {
                let inner = self.seq()?;
                self.expect(Tok::RBrace)?;
                return Ok(inner);
            }
            other => return Err(syntax(pos, format!("expected a statement, found {}", other.describe()))),
        };
        Ok(Stmt { pos, kind })
    }

    fn bexp(&mut self) -> Result<BExp> {
        let first = self.conj()?;
        if *self.peek() == Tok::Bar {
            self.bump();
            return Ok(BExp::Or(Box::new(first), Box::new(self.bexp()?)));
        }
        Ok(first)
    }

    fn conj(&mut self) -> Result<BExp> {
        let first = self.unary()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            return Ok(BExp::And(Box::new(first), Box::new(self.conj()?)));
        }
        Ok(first)
    }

    fn unary(&mut self) -> Result<BExp> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::True => Ok(BExp::True),
            Tok::False => Ok(BExp::False),
            Tok::Ident(name) => Ok(BExp::Var(self.var_index(&name)?)),
            Tok::Bang => Ok(BExp::Not(Box::new(self.unary()?))),
            Tok::LParen => {
                let inner = self.bexp()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(syntax(pos, format!("expected a boolean expression, found {}", other.describe()))),
        }
    }
}

pub fn parse_program(text: &str) -> Result<Program> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        vars: Vec::new(),
    };
    p.program()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn kind(text: &str) -> StmtKind {
        parse_program(text).unwrap().body.kind
    }

    #[test]
    fn parses_basic_forms() {
        let p = parse_program("var x; skip").unwrap();
        assert_eq!(p.vars, vec!["x"]);
        assert_eq!(p.body.kind, StmtKind::Skip);
        match kind("var x; x := true [1/3] x := false") {
            StmtKind::Prob(r, a, b) => {
                assert_eq!(r, rat(1, 3));
                assert_eq!(a.kind, StmtKind::Assign(0, BExp::True));
                assert_eq!(b.kind, StmtKind::Assign(0, BExp::False));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        // `;` loosest, then `[]`, then `[r]`
        match kind("skip [1/2] skip [] diverge ; skip") {
            StmtKind::Seq(a, _) => match a.kind {
                StmtKind::Choice(l, _) => assert!(matches!(l.kind, StmtKind::Prob(..))),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
        match kind("skip [1/2] diverge [1/3] skip") {
            StmtKind::Prob(_, l, r) => {
                assert_eq!(l.kind, StmtKind::Skip);
                assert!(matches!(r.kind, StmtKind::Prob(..)));
            }
            other => panic!("{other:?}"),
        }
        match kind("{ skip ; skip } [] skip") {
            StmtKind::Choice(l, _) => assert!(matches!(l.kind, StmtKind::Seq(..))),
            other => panic!("{other:?}"),
        }
        match kind("var x; if x then skip else skip ; diverge") {
            StmtKind::Seq(a, b) => {
                assert!(matches!(a.kind, StmtKind::If(..)));
                assert_eq!(b.kind, StmtKind::Diverge);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boolean_expressions() {
        match kind("var x; var y; x := !x & y | false") {
            StmtKind::Assign(0, BExp::Or(l, r)) => {
                assert!(matches!(*l, BExp::And(..)));
                assert_eq!(*r, BExp::False);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_program("var x; x := true [5/3] skip").unwrap_err(),
            Error::ProbabilityOutOfRange("5/3".into())
        );
        assert_eq!(parse_program("skip; y := true").unwrap_err(), Error::UndeclaredVariable("y".into()));
        match parse_program("var x;\nx := ").unwrap_err() {
            Error::SyntaxError { line, col, .. } => assert_eq!((line, col), (2, 6)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_program("skip [1/0] skip"), Err(Error::SyntaxError { .. })));
        assert!(matches!(parse_program("var x; var x; skip"), Err(Error::SyntaxError { .. })));
        assert!(matches!(parse_program("skip skip"), Err(Error::SyntaxError { .. })));
    }

    #[test]
    fn comments_and_spaced_choice() {
        let p = parse_program("# header\nvar x; # trailing\nskip [ ] diverge").unwrap();
        assert!(matches!(p.body.kind, StmtKind::Choice(..)));
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "var x; var y; x := true [1/3] { y := x | !y [] diverge }; while x do x := false [1/2] skip",
            "var b; if b & true then { skip [] b := false } else diverge; skip",
        ] {
            let p = parse_program(text).unwrap();
            let again = parse_program(&p.to_string()).unwrap();
            assert_eq!(p.to_string(), again.to_string());
        }
    }
}

use std::fmt;

use crate::rat::{fmt_rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Boolean expressions; variables are indices into the declaration list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BExp {
    True,
    False,
    Var(usize),
    Not(Box<BExp>),
    And(Box<BExp>, Box<BExp>),
    Or(Box<BExp>, Box<BExp>),
}

impl BExp {
    pub fn eval(&self, get: &impl Fn(usize) -> bool) -> bool {
        match self {
            BExp::True => true,
            BExp::False => false,
            BExp::Var(v) => get(*v),
            BExp::Not(b) => !b.eval(get),
            BExp::And(a, b) => a.eval(get) && b.eval(get),
            BExp::Or(a, b) => a.eval(get) || b.eval(get),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub pos: Pos,
    pub kind: StmtKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Skip,
    Diverge,
    Assign(usize, BExp),
    Seq(Box<Stmt>, Box<Stmt>),
    /// `s1 [r] s2`: `s1` with probability `r`.
    Prob(Rat, Box<Stmt>, Box<Stmt>),
    /// `s1 [] s2`.
    Choice(Box<Stmt>, Box<Stmt>),
    If(BExp, Box<Stmt>, Box<Stmt>),
    While(BExp, Box<Stmt>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub vars: Vec<String>,
    pub body: Stmt,
}

impl Program {
    fn fmt_bexp(&self, b: &BExp, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match b {
            BExp::True => write!(f, "true"),
            BExp::False => write!(f, "false"),
            BExp::Var(v) => write!(f, "{}", self.vars[*v]),
            BExp::Not(x) => {
                write!(f, "!(")?;
                self.fmt_bexp(x, f)?;
                write!(f, ")")
            }
            BExp::And(x, y) | BExp::Or(x, y) => {
                write!(f, "(")?;
                self.fmt_bexp(x, f)?;
                write!(f, "{}", if matches!(b, BExp::And(..)) { " & " } else { " | " })?;
                self.fmt_bexp(y, f)?;
                write!(f, ")")
            }
        }
    }

    fn fmt_stmt(&self, s: &Stmt, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &s.kind {
            StmtKind::Skip => write!(f, "skip"),
            StmtKind::Diverge => write!(f, "diverge"),
            StmtKind::Assign(v, b) => {
                write!(f, "{} := ", self.vars[*v])?;
                self.fmt_bexp(b, f)
            }
            StmtKind::Seq(a, b) => {
                write!(f, "{{ ")?;
                self.fmt_stmt(a, f)?;
                write!(f, "; ")?;
                self.fmt_stmt(b, f)?;
                write!(f, " }}")
            }
            StmtKind::Prob(r, a, b) => {
                write!(f, "{{ ")?;
                self.fmt_stmt(a, f)?;
                write!(f, " [{}] ", fmt_rat(r))?;
                self.fmt_stmt(b, f)?;
                write!(f, " }}")
            }
            StmtKind::Choice(a, b) => {
                write!(f, "{{ ")?;
                self.fmt_stmt(a, f)?;
                write!(f, " [] ")?;
                self.fmt_stmt(b, f)?;
                write!(f, " }}")
            }
            StmtKind::If(c, a, b) => {
                write!(f, "{{ if ")?;
                self.fmt_bexp(c, f)?;
                write!(f, " then ")?;
                self.fmt_stmt(a, f)?;
                write!(f, " else ")?;
                self.fmt_stmt(b, f)?;
                write!(f, " }}")
            }
            StmtKind::While(c, body) => {
                write!(f, "{{ while ")?;
                self.fmt_bexp(c, f)?;
                write!(f, " do ")?;
                self.fmt_stmt(body, f)?;
                write!(f, " }}")
            }
        }
    }
}

/// Fully braced source text that parses back to the same program.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vars {
            write!(f, "var {v}; ")?;
        }
        self.fmt_stmt(&self.body, f)
    }
}

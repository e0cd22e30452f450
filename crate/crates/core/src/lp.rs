//! Exact two-phase simplex over the rationals.
//!
//! Every variable is implicitly nonnegative. Pivoting follows Bland's rule
//! (lowest eligible column enters, lowest basic index breaks ratio ties), so
//! the solver terminates and its output depends only on the input order.
//! Infeasible systems come back with a Farkas certificate that has already
//! been checked against the original constraints.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn flipped(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    pub coeffs: Vec<Rat>,
    pub direction: Direction,
}

/// Constraints over nonnegative variables, with an optional objective.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub objective: Option<Objective>,
}

impl LinearSystem {
    pub fn new(variables: Vec<String>) -> Self {
        LinearSystem {
            variables,
            constraints: Vec::new(),
            objective: None,
        }
    }

    pub fn with_vars(n: usize, prefix: &str) -> Self {
        Self::new((0..n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn push(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) {
        self.constraints.push(Constraint::new(coeffs, rel, rhs));
    }

    pub fn minimize(&mut self, coeffs: Vec<Rat>) {
        self.objective = Some(Objective {
            coeffs,
            direction: Direction::Minimize,
        });
    }

    pub fn maximize(&mut self, coeffs: Vec<Rat>) {
        self.objective = Some(Objective {
            coeffs,
            direction: Direction::Maximize,
        });
    }

    fn validate(&self) -> Result<()> {
        let n = self.variables.len();
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::MalformedSystem(format!(
                    "constraint {i} has {} coefficients for {n} variables",
                    c.coeffs.len()
                )));
            }
        }
        if let Some(obj) = &self.objective {
            if obj.coeffs.len() != n {
                return Err(Error::MalformedSystem(format!(
                    "objective has {} coefficients for {n} variables",
                    obj.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    /// Whether `x` (nonnegative) satisfies every constraint.
    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        x.len() == self.variables.len()
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs: Rat = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
                match c.rel {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }
}

/// Multipliers `y`, one per constraint, proving infeasibility: `y_i >= 0` on
/// `<=` rows, `y_i <= 0` on `>=` rows, `Σ y_i a_i >= 0` columnwise and
/// `Σ y_i b_i < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rat>,
}

impl FarkasCertificate {
    pub fn verify(&self, sys: &LinearSystem) -> bool {
        if self.multipliers.len() != sys.constraints.len() {
            return false;
        }
        let signs_ok = sys.constraints.iter().zip(&self.multipliers).all(|(c, y)| match c.rel {
            Relation::Le => !y.is_negative(),
            Relation::Ge => !y.is_positive(),
            Relation::Eq => true,
        });
        let columns_ok = (0..sys.variables.len()).all(|j| {
            let s: Rat = sys
                .constraints
                .iter()
                .zip(&self.multipliers)
                .map(|(c, y)| y * &c.coeffs[j])
                .sum();
            !s.is_negative()
        });
        let rhs: Rat = sys
            .constraints
            .iter()
            .zip(&self.multipliers)
            .map(|(c, y)| y * &c.rhs)
            .sum();
        signs_ok && columns_ok && rhs.is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible {
        assignment: Vec<Rat>,
        objective: Option<Rat>,
    },
    Infeasible(FarkasCertificate),
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible { .. })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Original,
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    /// Reduced costs, with `-objective` in the last slot.
    cost: Vec<Rat>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
    live: Vec<bool>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule over the allowed columns. Returns `false` when the
    /// objective is unbounded below.
    fn optimize(&mut self, allowed: impl Fn(ColumnKind) -> bool) -> bool {
        let rhs = self.width();
        loop {
            let entering = (0..self.width())
                .find(|&j| allowed(self.kinds[j]) && self.cost[j].is_negative());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !self.live[i] || !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn set_costs(&mut self, c: &[Rat]) {
        let rhs = self.width();
        let mut cost: Vec<Rat> = c.to_vec();
        cost.push(Rat::zero());
        for (i, row) in self.rows.iter().enumerate() {
            if !self.live[i] {
                continue;
            }
            let cb = &c[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=rhs {
                if !row[j].is_zero() {
                    cost[j] -= cb * &row[j];
                }
            }
        }
        self.cost = cost;
    }
}

/// Solves `sys` exactly.
pub fn lp_solve(sys: &LinearSystem) -> Result<LpOutcome> {
    sys.validate()?;
    let n = sys.variables.len();
    let m = sys.constraints.len();

    // normalize to nonnegative right-hand sides
    let mut signs = Vec::with_capacity(m);
    let mut rels = Vec::with_capacity(m);
    for c in &sys.constraints {
        if c.rhs.is_negative() {
            signs.push(-Rat::one());
            rels.push(c.rel.flipped());
        } else {
            signs.push(Rat::one());
            rels.push(c.rel);
        }
    }

    let mut kinds = vec![ColumnKind::Original; n];
    let mut slack_col = vec![None; m];
    let mut art_col = vec![None; m];
    for (i, rel) in rels.iter().enumerate() {
        if *rel != Relation::Eq {
            slack_col[i] = Some(kinds.len());
            kinds.push(ColumnKind::Slack);
        }
    }
    for (i, rel) in rels.iter().enumerate() {
        if *rel != Relation::Le {
            art_col[i] = Some(kinds.len());
            kinds.push(ColumnKind::Artificial);
        }
    }
    let width = kinds.len();

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (i, c) in sys.constraints.iter().enumerate() {
        let mut row = vec![Rat::zero(); width + 1];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a * &signs[i];
        }
        row[width] = &c.rhs * &signs[i];
        if let Some(s) = slack_col[i] {
            row[s] = if rels[i] == Relation::Le { Rat::one() } else { -Rat::one() };
        }
        if let Some(a) = art_col[i] {
            row[a] = Rat::one();
            basis.push(a);
        } else {
            basis.push(slack_col[i].expect("<= rows carry a slack"));
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        cost: Vec::new(),
        basis,
        kinds,
        live: vec![true; m],
    };

    // phase 1: minimize the sum of artificials
    let phase1: Vec<Rat> = t
        .kinds
        .iter()
        .map(|k| if *k == ColumnKind::Artificial { Rat::one() } else { Rat::zero() })
        .collect();
    t.set_costs(&phase1);
    t.optimize(|_| true);
    let infeasibility = -t.cost[width].clone();
    if infeasibility.is_positive() {
        // dual multipliers π_i = c_k - d_k for the initial basic column k of row i
        let multipliers: Vec<Rat> = (0..m)
            .map(|i| {
                let k = art_col[i].or(slack_col[i]).expect("every row has an initial basic column");
                let pi = &phase1[k] - &t.cost[k];
                -pi * &signs[i]
            })
            .collect();
        let cert = FarkasCertificate { multipliers };
        debug_assert!(cert.verify(sys), "phase-1 multipliers must certify infeasibility");
        if !cert.verify(sys) {
            return Err(Error::MalformedSystem("failed to certify infeasibility".into()));
        }
        return Ok(LpOutcome::Infeasible(cert));
    }

    // drive zero-level artificials out of the basis
    for r in 0..m {
        if t.kinds[t.basis[r]] != ColumnKind::Artificial {
            continue;
        }
        let replacement = (0..width).find(|&j| t.kinds[j] != ColumnKind::Artificial && !t.rows[r][j].is_zero());
        match replacement {
            Some(c) => t.pivot(r, c),
            None => t.live[r] = false,
        }
    }

    let mut objective_value = None;
    if let Some(obj) = &sys.objective {
        let mut c = vec![Rat::zero(); width];
        for (j, a) in obj.coeffs.iter().enumerate() {
            c[j] = match obj.direction {
                Direction::Minimize => a.clone(),
                Direction::Maximize => -a.clone(),
            };
        }
        t.set_costs(&c);
        if !t.optimize(|k| k != ColumnKind::Artificial) {
            return Ok(LpOutcome::Unbounded);
        }
        let min_value = -t.cost[width].clone();
        objective_value = Some(match obj.direction {
            Direction::Minimize => min_value,
            Direction::Maximize => -min_value,
        });
    }

    let mut assignment = vec![Rat::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if t.live[i] && b < n {
            assignment[b] = t.rows[i][width].clone();
        }
    }
    debug_assert!(sys.satisfied_by(&assignment));
    Ok(LpOutcome::Feasible {
        assignment,
        objective: objective_value,
    })
}

use num_traits::One;

use super::{Domain, Law, Scalar, Statement, Term};
use crate::rat::Rat;

fn v(i: usize) -> Term {
    Term::Var(i)
}

fn p(i: usize) -> Scalar {
    Scalar::Var(i)
}

fn comb(r: Scalar, a: Term, b: Term) -> Term {
    Term::Comb(r, Box::new(a), Box::new(b))
}

fn union(a: Term, b: Term) -> Term {
    Term::Union(Box::new(a), Box::new(b))
}

fn scale(r: Scalar, a: Term) -> Term {
    Term::Scale(r, Box::new(a))
}

fn one_minus(r: Scalar) -> Scalar {
    Scalar::OneMinus(Box::new(r))
}

fn mul(a: Scalar, b: Scalar) -> Scalar {
    Scalar::Mul(Box::new(a), Box::new(b))
}

fn eq(id: &'static str, carriers: usize, scalars: Vec<Domain>, l: Term, r: Term) -> Law {
    Law {
        id,
        carriers,
        scalars,
        statement: Statement::Equation(l, r),
    }
}

/// Every law known to the engine.
pub fn catalog() -> Vec<Law> {
    use Domain::*;
    let (a, b, c, d) = (v(0), v(1), v(2), v(3));
    vec![
        eq("comb-one", 2, vec![], comb(Scalar::Const(Rat::one()), a.clone(), b.clone()), a.clone()),
        eq("comb-idem", 1, vec![Closed], comb(p(0), a.clone(), a.clone()), a.clone()),
        eq("skew-comm", 2, vec![Closed], comb(p(0), a.clone(), b.clone()), comb(one_minus(p(0)), b.clone(), a.clone())),
        // (a +_p b) +_q c = a +_{pq} (b +_{(q-pq)/(1-pq)} c), p, q < 1
        eq(
            "skew-assoc",
            3,
            vec![HalfOpen, HalfOpen],
            comb(p(1), comb(p(0), a.clone(), b.clone()), c.clone()),
            comb(
                mul(p(0), p(1)),
                a.clone(),
                comb(
                    Scalar::Div(
                        Box::new(mul(p(1), one_minus(p(0)))),
                        Box::new(one_minus(mul(p(0), p(1)))),
                    ),
                    b.clone(),
                    c.clone(),
                ),
            ),
        ),
        eq(
            "entropic",
            4,
            vec![Closed, Closed],
            comb(p(1), comb(p(0), a.clone(), b.clone()), comb(p(0), c.clone(), d.clone())),
            comb(p(0), comb(p(1), a.clone(), c.clone()), comb(p(1), b.clone(), d.clone())),
        ),
        eq(
            "comb-distrib",
            3,
            vec![Closed, Closed],
            comb(p(1), comb(p(0), a.clone(), b.clone()), c.clone()),
            comb(p(0), comb(p(1), a.clone(), c.clone()), comb(p(1), b.clone(), c.clone())),
        ),
        eq(
            "union-assoc",
            3,
            vec![],
            union(union(a.clone(), b.clone()), c.clone()),
            union(a.clone(), union(b.clone(), c.clone())),
        ),
        eq("union-comm", 2, vec![], union(a.clone(), b.clone()), union(b.clone(), a.clone())),
        eq("union-idem", 1, vec![], union(a.clone(), a.clone()), a.clone()),
        eq(
            "union-convex",
            2,
            vec![Closed],
            union(a.clone(), union(comb(p(0), a.clone(), b.clone()), b.clone())),
            union(a.clone(), b.clone()),
        ),
        eq(
            "comb-over-union",
            3,
            vec![Closed],
            comb(p(0), a.clone(), union(b.clone(), c.clone())),
            union(comb(p(0), a.clone(), b.clone()), comb(p(0), a.clone(), c.clone())),
        ),
        eq(
            "union-over-comb",
            3,
            vec![Closed],
            union(a.clone(), comb(p(0), b.clone(), c.clone())),
            comb(p(0), union(a.clone(), b.clone()), union(a.clone(), c.clone())),
        ),
        eq("scale-one", 1, vec![], scale(Scalar::Const(Rat::one()), a.clone()), a.clone()),
        eq("scale-zero", 1, vec![], scale(Scalar::Const(Rat::from_integer(0.into())), a.clone()), Term::Zero),
        eq(
            "scale-compose",
            1,
            vec![Closed, Closed],
            scale(p(0), scale(p(1), a.clone())),
            scale(mul(p(0), p(1)), a.clone()),
        ),
        Law {
            id: "order-rescale",
            carriers: 3,
            scalars: vec![Open, Open],
            statement: Statement::Implication {
                premise: (comb(p(0), a.clone(), c.clone()), comb(p(0), b.clone(), c.clone())),
                conclusion: (comb(p(1), a.clone(), c.clone()), comb(p(1), b.clone(), c.clone())),
            },
        },
        Law {
            id: "scale-cancel",
            carriers: 2,
            scalars: vec![Open],
            statement: Statement::Implication {
                premise: (scale(p(0), a.clone()), scale(p(0), b.clone())),
                conclusion: (a, b),
            },
        },
    ]
}

pub fn by_id(id: &str) -> Option<Law> {
    catalog().into_iter().find(|l| l.id == id)
}

fn pick(ids: &[&str]) -> Vec<Law> {
    ids.iter().map(|id| by_id(id).expect("law id is in the catalog")).collect()
}

/// Axioms of barycentric algebras.
pub fn barycentric_suite() -> Vec<Law> {
    pick(&["comb-one", "comb-idem", "skew-comm", "skew-assoc", "entropic", "comb-distrib"])
}

pub fn semilattice_suite() -> Vec<Law> {
    pick(&["union-assoc", "union-comm", "union-idem"])
}

/// Laws of the scalar action of a pointed barycentric algebra.
pub fn pointed_suite() -> Vec<Law> {
    pick(&["scale-one", "scale-zero", "scale-compose"])
}

/// Order properties that need a bound `leq`.
pub fn ordered_suite() -> Vec<Law> {
    pick(&["order-rescale", "scale-cancel"])
}

/// Barycentric and semilattice laws, the convexity identity and
/// distributivity of `+_r` over `∪`.
pub fn kegelspitze_semilattice_suite() -> Vec<Law> {
    let mut out = barycentric_suite();
    out.extend(semilattice_suite());
    out.extend(pick(&["union-convex", "comb-over-union"]));
    out
}

/// Commutativity and associativity of `∪` and distributivity of `∪` over `+_r`.
pub fn ccsa_suite() -> Vec<Law> {
    pick(&["union-assoc", "union-comm", "union-over-comb"])
}

/// Everything a valuation model is expected to satisfy.
pub fn valuation_suite() -> Vec<Law> {
    let mut out = barycentric_suite();
    out.extend(pointed_suite());
    out.extend(ordered_suite());
    out
}

/// Everything a power-element model of any flavor is expected to satisfy.
pub fn power_suite() -> Vec<Law> {
    let mut out = kegelspitze_semilattice_suite();
    out.extend(pointed_suite());
    out.extend(ordered_suite());
    out
}

//! Negation normal form.
//!
//! Negation is pushed down to atoms using the dualities
//! `!<op> X f = [op] X !f`, `!<op>(f U g) = [op](!f R !g)` and
//! `!<op>(f R g) = [op](!f U !g)`. Implications and biconditionals are
//! expanded on the way.

use super::Formula;

pub fn to_nnf(f: &Formula) -> Formula {
    pos(f)
}

fn pos(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => neg(a),
        Formula::And(a, b) => Formula::and(pos(a), pos(b)),
        Formula::Or(a, b) => Formula::or(pos(a), pos(b)),
        Formula::Implies(a, b) => Formula::or(neg(a), pos(b)),
        Formula::Iff(a, b) => Formula::or(Formula::and(pos(a), pos(b)), Formula::and(neg(a), neg(b))),
        Formula::Next(a) => Formula::next(pos(a)),
        Formula::Until(a, b) => Formula::until(pos(a), pos(b)),
        Formula::Release(a, b) => Formula::release(pos(a), pos(b)),
        Formula::Strategic(op, path) => Formula::strategic(*op, pos(path)),
    }
}

fn neg(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom(_) => Formula::not(f.clone()),
        Formula::Not(a) => pos(a),
        Formula::And(a, b) => Formula::or(neg(a), neg(b)),
        Formula::Or(a, b) => Formula::and(neg(a), neg(b)),
        Formula::Implies(a, b) => Formula::and(pos(a), neg(b)),
        Formula::Iff(a, b) => Formula::or(Formula::and(pos(a), neg(b)), Formula::and(neg(a), pos(b))),
        Formula::Next(a) => Formula::next(neg(a)),
        Formula::Until(a, b) => Formula::release(neg(a), neg(b)),
        Formula::Release(a, b) => Formula::until(neg(a), neg(b)),
        Formula::Strategic(op, path) => Formula::strategic(op.flipped(), neg(path)),
    }
}

/// Negation only on atoms, no `->` or `<->`.
pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::Not(a) => matches!(**a, Formula::Atom(_)),
        Formula::Implies(..) | Formula::Iff(..) => false,
        _ => f.children().into_iter().all(is_nnf),
    }
}

//! Classic CTL model checking by fixpoint labelling. Costs play no role.

use crate::model::{Model, StateId};
use crate::syntax::ctl::{CtlFormula, PathQuantifier};

/// `(M, s) |= f` in CTL.
pub fn ctl_check(m: &Model, s: StateId, f: &CtlFormula) -> bool {
    label(m, f)[s.index()]
}

/// The set of states satisfying `f`, as a membership vector.
pub fn label(m: &Model, f: &CtlFormula) -> Vec<bool> {
    let n = m.state_count();
    let succ: Vec<Vec<usize>> = m
        .states()
        .map(|s| m.successors(s).into_iter().map(StateId::index).collect())
        .collect();
    let pre = |z: &[bool], all: bool| -> Vec<bool> {
        (0..n)
            .map(|s| {
                if all {
                    succ[s].iter().all(|&t| z[t])
                } else {
                    succ[s].iter().any(|&t| z[t])
                }
            })
            .collect()
    };
    let zip = |a: &[bool], b: &[bool], op: fn(bool, bool) -> bool| -> Vec<bool> {
        a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()
    };
    // Least fixpoint of z = b | (a & pre(z)).
    let lfp = |a: &[bool], b: &[bool], all: bool| {
        let mut z = vec![false; n];
        loop {
            let p = pre(&z, all);
            let next: Vec<bool> = (0..n).map(|s| b[s] || (a[s] && p[s])).collect();
            if next == z {
                return z;
            }
            z = next;
        }
    };
    // Greatest fixpoint of z = b & (a | pre(z)).
    let gfp = |a: &[bool], b: &[bool], all: bool| {
        let mut z = vec![true; n];
        loop {
            let p = pre(&z, all);
            let next: Vec<bool> = (0..n).map(|s| b[s] && (a[s] || p[s])).collect();
            if next == z {
                return z;
            }
            z = next;
        }
    };
    let all = |q: &PathQuantifier| *q == PathQuantifier::All;
    let tt = vec![true; n];
    let ff = vec![false; n];
    match f {
        CtlFormula::True => tt,
        CtlFormula::False => ff,
        CtlFormula::Atom(a) => m.states().map(|s| m.holds(a, s)).collect(),
        CtlFormula::Not(a) => label(m, a).into_iter().map(|x| !x).collect(),
        CtlFormula::And(a, b) => zip(&label(m, a), &label(m, b), |x, y| x && y),
        CtlFormula::Or(a, b) => zip(&label(m, a), &label(m, b), |x, y| x || y),
        CtlFormula::Implies(a, b) => zip(&label(m, a), &label(m, b), |x, y| !x || y),
        CtlFormula::Iff(a, b) => zip(&label(m, a), &label(m, b), |x, y| x == y),
        CtlFormula::Next(q, a) => pre(&label(m, a), all(q)),
        CtlFormula::Until(q, a, b) => lfp(&label(m, a), &label(m, b), all(q)),
        CtlFormula::Release(q, a, b) => gfp(&label(m, a), &label(m, b), all(q)),
        CtlFormula::Finally(q, a) => lfp(&tt, &label(m, a), all(q)),
        CtlFormula::Globally(q, a) => gfp(&ff, &label(m, a), all(q)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelBuilder;
    use crate::syntax::ctl::parse_ctl;

    #[test]
    fn small_cycle() {
        // a -> b -> c -> c, p at c.
        let m = ModelBuilder::new(1)
            .states(["a", "b", "c"])
            .edge("a", "b")
            .edge("b", "c")
            .edge("c", "c")
            .edge("a", "a")
            .atom("p", ["c"])
            .build()
            .unwrap();
        let at = |f: &str, s: &str| ctl_check(&m, m.state_id(s).unwrap(), &parse_ctl(f).unwrap());
        assert!(at("EF p", "a"));
        assert!(!at("AF p", "a"));
        assert!(at("AF p", "b"));
        assert!(at("EG !p", "a"));
        assert!(at("AG p", "c"));
        assert!(at("A(!p U p)", "b"));
        assert!(at("E(false R !p)", "a"));
        assert!(!at("A(false R !p)", "a"));
    }
}

//! Embedding CTL into each logic through the budget-0 operator.
//!
//! With budget 0 nobody can change the model, so the budget-0 operator `H`
//! (`<d:0>`, `<a:0>` or `<<a,d|0,0>>`) quantifies over paths only:
//! `AX f = H X f`, `A(f U g) = H (f U g)` and `A(f R g) = H (f R g)`.
//! Existential path quantifiers go through negation.

use crate::syntax::ctl::{CtlFormula, PathQuantifier};
use crate::syntax::{Flavor, Formula};

pub fn translate_ctl(f: &CtlFormula, flavor: Flavor) -> Formula {
    let h = |path: Formula| Formula::strategic(flavor.zero_op(), path);
    let t = |g: &CtlFormula| translate_ctl(g, flavor);
    use PathQuantifier::{All, Some as Ex};
    match f {
        CtlFormula::True => Formula::True,
        CtlFormula::False => Formula::False,
        CtlFormula::Atom(a) => Formula::atom(a.clone()),
        CtlFormula::Not(a) => Formula::not(t(a)),
        CtlFormula::And(a, b) => Formula::and(t(a), t(b)),
        CtlFormula::Or(a, b) => Formula::or(t(a), t(b)),
        CtlFormula::Implies(a, b) => Formula::implies(t(a), t(b)),
        CtlFormula::Iff(a, b) => Formula::iff(t(a), t(b)),
        CtlFormula::Next(All, a) => h(Formula::next(t(a))),
        CtlFormula::Next(Ex, a) => Formula::not(h(Formula::next(t(a).negated()))),
        CtlFormula::Until(All, a, b) => h(Formula::until(t(a), t(b))),
        CtlFormula::Until(Ex, a, b) => Formula::not(h(Formula::release(t(a).negated(), t(b).negated()))),
        CtlFormula::Release(All, a, b) => h(Formula::release(t(a), t(b))),
        CtlFormula::Release(Ex, a, b) => Formula::not(h(Formula::until(t(a).negated(), t(b).negated()))),
        CtlFormula::Finally(All, a) => h(Formula::eventually(t(a))),
        CtlFormula::Finally(Ex, a) => Formula::not(h(Formula::always(t(a).negated()))),
        CtlFormula::Globally(All, a) => h(Formula::always(t(a))),
        CtlFormula::Globally(Ex, a) => Formula::not(h(Formula::eventually(t(a).negated()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ctl::parse_ctl;

    #[test]
    fn shapes() {
        let tr = |s: &str, fl| translate_ctl(&parse_ctl(s).unwrap(), fl).to_string();
        assert_eq!(tr("EF p", Flavor::Sdl), "!<d:0> false R (!p)");
        assert_eq!(tr("AX p", Flavor::Scl), "<a:0> X p");
        assert_eq!(tr("A(p U q)", Flavor::Sul), "<<a,d|0,0>> p U q");
        assert_eq!(tr("EX !p", Flavor::Sdl), "!<d:0> X p");
    }
}

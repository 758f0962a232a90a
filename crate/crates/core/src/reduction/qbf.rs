//! QBF to model-checking reductions for SDL and SCL.
//!
//! For `Q1 p1 ... Qn pn : psi` the model has a hub `s` and one state per
//! literal: `s_i` carries `p<i>_1` and `s_{n+i}` carries `p<i>_0`. Setting
//! `p_i` to true means `p<i>_1` stays (SDL) or becomes (SCL) reachable in
//! two steps while `p<i>_0` does not. One budget-1 round per quantifier
//! makes that choice, guarded by `chosen_k`, which says the first `k`
//! variables are decided and the rest untouched.

use thiserror::Error;

use crate::model::{ModelBuilder, ModelError, PointedModel};
use crate::oracle::qbf::{Prop, QbfInstance, Quantifier};
use crate::syntax::{Flavor, Formula, Mode, StrategicOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("the QBF has no quantified variables")]
    EmptyPrefix,
    #[error("QBF reductions exist for sdl and scl only, not {0}")]
    Flavor(Flavor),
    #[error("the family index must be at least 1")]
    FamilyIndex,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone)]
pub struct QbfReduction {
    pub model: PointedModel,
    pub formula: Formula,
}

fn literal(i: usize, value: bool) -> String {
    format!("p{i}_{}", u8::from(value))
}

/// Build the pointed model and formula whose verdict equals the truth of `q`.
pub fn reduce_qbf(q: &QbfInstance, flavor: Flavor) -> Result<QbfReduction, ReductionError> {
    let n = q.prefix.len();
    if n == 0 {
        return Err(ReductionError::EmptyPrefix);
    }
    let mode = |budget| match flavor {
        Flavor::Sdl => Ok(Mode::Demon(budget)),
        Flavor::Scl => Ok(Mode::Angel(budget)),
        Flavor::Sul => Err(ReductionError::Flavor(Flavor::Sul)),
    };
    let step = mode(1)?;

    let literal_state = |k: usize| format!("s{k}");
    let mut b = ModelBuilder::new(1)
        .state("s")
        .states((1..=2 * n).map(literal_state))
        .edge("s", "s");
    for k in 1..=2 * n {
        if flavor == Flavor::Sdl {
            b = b.edge("s", literal_state(k));
        }
        b = b.edge(literal_state(k), "s");
    }
    if flavor == Flavor::Sdl {
        // The demon must not be able to cut the hub's loop.
        b = b.cost("s", "s", 2);
    }
    for i in 1..=n {
        b = b
            .atom(literal(i, true), [literal_state(i)])
            .atom(literal(i, false), [literal_state(n + i)]);
    }
    let model = PointedModel::named(b.build()?, "s")?;

    let reach = |atom: String| Formula::diamond(flavor, Formula::diamond(flavor, Formula::Atom(atom)));
    let chosen = |k: usize| {
        (1..=n)
            .map(|i| {
                let zero = reach(literal(i, false));
                let one = reach(literal(i, true));
                if i <= k {
                    Formula::iff(zero, Formula::not(one))
                } else if flavor == Flavor::Sdl {
                    Formula::and(zero, one)
                } else {
                    Formula::and(Formula::not(zero), Formula::not(one))
                }
            })
            .reduce(Formula::and)
            .expect("n > 0")
    };
    let index = |v: &str| q.prefix.iter().position(|(_, w)| w == v).expect("closed") + 1;
    fn matrix(p: &Prop, atom: &dyn Fn(&str) -> Formula) -> Formula {
        match p {
            Prop::True => Formula::True,
            Prop::False => Formula::False,
            Prop::Var(v) => atom(v),
            Prop::Not(a) => Formula::not(matrix(a, atom)),
            Prop::And(a, b) => Formula::and(matrix(a, atom), matrix(b, atom)),
            Prop::Or(a, b) => Formula::or(matrix(a, atom), matrix(b, atom)),
            Prop::Implies(a, b) => Formula::implies(matrix(a, atom), matrix(b, atom)),
            Prop::Iff(a, b) => Formula::iff(matrix(a, atom), matrix(b, atom)),
        }
    }
    let mut formula = matrix(&q.matrix, &|v| reach(literal(index(v), true)));
    for (k, (quant, _)) in q.prefix.iter().enumerate().rev() {
        let guard = chosen(k + 1);
        formula = match quant {
            Quantifier::Forall => Formula::strategic(
                StrategicOp { mode: step, dual: true },
                Formula::next(Formula::implies(guard, formula)),
            ),
            Quantifier::Exists => Formula::strategic(
                StrategicOp {
                    mode: step,
                    dual: false,
                },
                Formula::next(Formula::and(guard, formula)),
            ),
        };
    }
    Ok(QbfReduction { model, formula })
}

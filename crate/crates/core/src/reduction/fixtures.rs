//! The worked-example models, keyed `figN.NAME`.
//!
//! The security-system models (`fig1.*`, `fig2.*`) label every drawn edge,
//! including the two candidate edges `s1 -> s0` and `s3 -> s2`. Pairs that
//! are not drawn get cost 4, out of reach of every budget the examples use.

use crate::model::{Model, ModelBuilder, PointedModel};
use crate::updates::{apply_update, UpdateChoice};

use super::qbf::reduce_qbf;
use crate::oracle::QbfInstance;
use crate::syntax::Flavor;

pub const FIXTURE_KEYS: [&str; 9] = [
    "fig1.M1",
    "fig1.M2",
    "fig2.M3",
    "fig2.M4",
    "fig3.M1",
    "fig3.M2",
    "fig3.M3",
    "fig3.M4",
    "fig6.MPsi",
];

/// Cost of pairs the security-system figure does not draw.
pub const UNDRAWN_COST: u64 = 4;

fn security_m1() -> Model {
    ModelBuilder::new(UNDRAWN_COST)
        .states(["s0", "s1", "s2", "s3"])
        .weighted_edge("s0", "s0", 3)
        .weighted_edge("s0", "s1", 3)
        .weighted_edge("s0", "s2", 2)
        .weighted_edge("s0", "s3", 2)
        .weighted_edge("s1", "s1", 3)
        .weighted_edge("s2", "s0", 1)
        .weighted_edge("s2", "s2", 2)
        .weighted_edge("s2", "s3", 1)
        .weighted_edge("s3", "s3", 2)
        .cost("s1", "s0", 1)
        .cost("s3", "s2", 1)
        .atom("error", ["s1"])
        .atom("server", ["s2", "s3"])
        .atom("admin", ["s3"])
        .build()
        .expect("fixture is well formed")
}

fn update(m: &Model, add: &[(&str, &str)], remove: &[(&str, &str)]) -> Model {
    let choice = UpdateChoice {
        additions: m.edge_set_named(add).expect("fixture states"),
        removals: m.edge_set_named(remove).expect("fixture states"),
    };
    apply_update(m, &choice).expect("fixture update is legal")
}

fn two_states(default_cost: u64, connected: bool) -> Model {
    let mut b = ModelBuilder::new(default_cost)
        .states(["s", "t"])
        .edge("s", "s")
        .edge("t", "t")
        .atom("p", ["s"]);
    if connected {
        b = b.edge("s", "t").edge("t", "s");
    }
    b.build().expect("fixture is well formed")
}

/// The model for a fixture key, or `None` for an unknown key.
pub fn fixture(key: &str) -> Option<Model> {
    let m = match key {
        "fig1.M1" => security_m1(),
        "fig1.M2" => update(&security_m1(), &[], &[("s0", "s3"), ("s2", "s3")]),
        "fig2.M3" => update(&security_m1(), &[("s1", "s0")], &[]),
        "fig2.M4" => {
            let m2 = fixture("fig1.M2")?;
            let step = update(&m2, &[("s3", "s2")], &[]);
            update(&step, &[], &[("s3", "s3")])
        }
        "fig3.M1" => two_states(1, true),
        "fig3.M2" => two_states(2, true),
        "fig3.M3" => two_states(1, false),
        "fig3.M4" => ModelBuilder::new(1)
            .state("s")
            .edge("s", "s")
            .atom("p", ["s"])
            .build()
            .expect("fixture is well formed"),
        "fig6.MPsi" => {
            let psi = QbfInstance::parse("forall p1 exists p2 : (p1 -> p2)").expect("valid QBF");
            reduce_qbf(&psi, Flavor::Sdl).expect("reducible").model.model
        }
        _ => return None,
    };
    Some(m)
}

/// The fixture with its usual point: `s0` for the security models, `s`
/// otherwise.
pub fn pointed_fixture(key: &str) -> Option<PointedModel> {
    let m = fixture(key)?;
    let point = if key.starts_with("fig1") || key.starts_with("fig2") {
        "s0"
    } else {
        "s"
    };
    PointedModel::named(m, point).ok()
}

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::FormulaShape;
use sulcheck::checker::holds;
use sulcheck::model::PointedModel;
use sulcheck::oracle::{brute_force_next, ctl_check, qbf_eval, unfold_check, OracleError, OracleLimits, QbfInstance};
use sulcheck::reduction::{fixture, pointed_fixture};
use sulcheck::syntax::ctl::{parse_ctl, CtlFormula, PathQuantifier};
use sulcheck::syntax::{parse_formula, Flavor};

fn qbf(text: &str) -> bool {
    qbf_eval(&QbfInstance::parse(text).unwrap())
}

#[test]
fn qbf_examples() {
    assert!(qbf("forall p : (p | !p)"));
    assert!(!qbf("exists p : (p & !p)"));
    assert!(qbf("forall p1 exists p2 : (p1 -> p2)"));
    assert!(!qbf("exists p1 forall p2 : (p1 <-> p2)"));
    assert!(qbf("forall p2 exists p1 : (p1 <-> p2)"));
}

#[test]
fn qbf_must_be_closed_and_linear() {
    assert!(QbfInstance::parse("forall p : (p & q)").is_err());
    assert!(QbfInstance::parse("forall p exists p : p").is_err());
    assert!(QbfInstance::parse("forall p : ").is_err());
}

#[test]
fn ctl_examples() {
    let m1 = pointed_fixture("fig3.M1").unwrap();
    assert!(ctl_check(&m1.model, m1.point, &parse_ctl("EX !p").unwrap()));
    let m2 = fixture("fig1.M2").unwrap();
    for s in m2.states() {
        assert!(ctl_check(&m2, s, &parse_ctl("AG true").unwrap()));
    }
    let s1 = m2.state_id("s1").unwrap();
    assert!(!ctl_check(&m2, s1, &parse_ctl("EF admin").unwrap()));
    let s0 = m2.state_id("s0").unwrap();
    assert!(!ctl_check(&m2, s0, &parse_ctl("EF admin").unwrap()));
    let m1 = fixture("fig1.M1").unwrap();
    assert!(ctl_check(&m1, s0, &parse_ctl("E(!error U admin)").unwrap()));
    assert!(!ctl_check(&m1, s0, &parse_ctl("A(!error U admin)").unwrap()));
}

#[test]
fn brute_force_examples() {
    let limits = OracleLimits::default();
    let m1 = pointed_fixture("fig3.M1").unwrap();
    assert!(brute_force_next(&m1, &parse_formula("<d:1> X p").unwrap(), &limits).unwrap());
    let m2 = pointed_fixture("fig3.M2").unwrap();
    assert!(!brute_force_next(&m2, &parse_formula("<d:1> X p").unwrap(), &limits).unwrap());
    for key in ["fig3.M1", "fig3.M3", "fig3.M4"] {
        let pm = pointed_fixture(key).unwrap();
        assert!(brute_force_next(&pm, &parse_formula("<d:0> X true").unwrap(), &limits).unwrap());
    }
}

#[test]
fn brute_force_refuses_what_it_cannot_do() {
    let limits = OracleLimits::default();
    let small = pointed_fixture("fig3.M1").unwrap();
    assert!(matches!(
        brute_force_next(&small, &parse_formula("<d:1> F p").unwrap(), &limits),
        Err(OracleError::NotNextTime(_))
    ));
    let big = pointed_fixture("fig1.M1").unwrap();
    assert!(matches!(
        brute_force_next(&big, &parse_formula("<d:1> X p").unwrap(), &limits),
        Err(OracleError::TooLarge(_))
    ));
    assert!(matches!(
        brute_force_next(&small, &parse_formula("<d:3> X p").unwrap(), &limits),
        Err(OracleError::TooLarge(_))
    ));
}

#[test]
fn unfolding_agrees_on_the_small_examples() {
    let limits = OracleLimits::default();
    for (key, text, expected) in [
        ("fig3.M1", "<d:1> X p", true),
        ("fig3.M2", "<d:1> X p", false),
        ("fig3.M3", "<a:1> X [a:0] X !p", true),
        ("fig3.M4", "<a:1> X [a:0] X !p", false),
        ("fig3.M1", "<d:1> G p", true),
        ("fig3.M2", "<d:1> G p", false),
        ("fig3.M3", "<a:1> F !p", false),
        ("fig3.M3", "<<a,d|1,0>> X !p", false),
    ] {
        let pm = pointed_fixture(key).unwrap();
        let f = parse_formula(text).unwrap();
        assert_eq!(unfold_check(&pm, &f, &limits).unwrap(), expected, "{key} {text}");
        assert_eq!(holds(&pm, &f).unwrap(), expected, "{key} {text}");
    }
}

fn flavor_of(k: u8) -> Flavor {
    [Flavor::Sdl, Flavor::Scl, Flavor::Sul][k as usize % 3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dual_prefix_negates_qbf(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars = ["p1", "p2", "p3"];
        let n = rng.random_range(1..=3);
        let connectives = rng.random_range(0..=6);
        let matrix = common::random_prop(&mut rng, &vars[..n], connectives);
        let prefixes = common::all_prefixes(&vars[..n]);
        let prefix = prefixes[rng.random_range(0..prefixes.len())].clone();
        let q = common::qbf_from(prefix, matrix);
        prop_assert_eq!(qbf_eval(&q.dual()), !qbf_eval(&q));
    }

    #[test]
    fn always_is_not_eventually_not(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pm = common::random_pointed(&mut rng, 4, &["p", "q"], 1);
        let phi = common::random_ctl(&mut rng, &["p", "q"], 2);
        let ag = CtlFormula::Globally(PathQuantifier::All, Box::new(phi.clone()));
        let ef = CtlFormula::Finally(PathQuantifier::Some, Box::new(CtlFormula::not(phi)));
        prop_assert_eq!(ctl_check(&pm.model, pm.point, &ag), !ctl_check(&pm.model, pm.point, &ef));
    }

    #[test]
    fn brute_force_is_total_on_its_fragment(seed in any::<u64>(), k in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pm: PointedModel = common::random_pointed(&mut rng, 3, &["p", "q"], 2);
        let shape = FormulaShape { depth: 2, max_budget: 2, next_only: true, allow_iff: true };
        let f = common::random_formula(&mut rng, flavor_of(k), &["p", "q"], shape);
        let v = brute_force_next(&pm, &f, &OracleLimits::default());
        prop_assert!(v.is_ok(), "{}: {:?}", f, v);
        prop_assert_eq!(v.unwrap(), holds(&pm, &f).unwrap());
    }
}

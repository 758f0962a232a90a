mod common;

use std::path::Path;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sulcheck::checker::holds;
use sulcheck::model::{serialize_model, Model};
use sulcheck::oracle::{ctl_check, qbf_eval, QbfInstance};
use sulcheck::reduction::{
    build_distinguishing_family, fixture, pointed_fixture, reduce_qbf, translate_ctl, ReductionError, FIXTURE_KEYS,
};
use sulcheck::syntax::ctl::parse_ctl;
use sulcheck::syntax::{parse_formula, Flavor, Formula};

fn reduce(text: &str, flavor: Flavor) -> (bool, bool) {
    let q = QbfInstance::parse(text).unwrap();
    let r = reduce_qbf(&q, flavor).unwrap();
    (holds(&r.model, &r.formula).unwrap(), qbf_eval(&q))
}

fn edge_names(m: &Model) -> Vec<(String, String)> {
    m.edges()
        .map(|(a, b)| (m.state_name(a).to_string(), m.state_name(b).to_string()))
        .collect()
}

fn all_costs(m: &Model) -> Vec<u64> {
    m.states().flat_map(|a| m.states().map(move |b| m.cost(a, b))).collect()
}

#[test]
fn sdl_reduction_of_the_running_example() {
    let q = QbfInstance::parse("forall p1 exists p2 : (p1 -> p2)").unwrap();
    let r = reduce_qbf(&q, Flavor::Sdl).unwrap();
    let m = &r.model.model;
    assert_eq!(m.state_count(), 5);
    assert_eq!(r.model.point_name(), "s");
    let hub = m.state_id("s").unwrap();
    for a in m.states() {
        for b in m.states() {
            assert_eq!(m.cost(a, b), if (a, b) == (hub, hub) { 2 } else { 1 });
        }
    }
    for i in 1..=4 {
        let si = format!("s{i}");
        let edges = edge_names(m);
        assert!(edges.contains(&("s".into(), si.clone())) && edges.contains(&(si, "s".into())));
    }
    assert_eq!(m.atom_states("p1_1"), [m.state_id("s1").unwrap()]);
    assert_eq!(m.atom_states("p1_0"), [m.state_id("s3").unwrap()]);
    assert_eq!(*m, fixture("fig6.MPsi").unwrap());
    assert_eq!(reduce("forall p1 exists p2 : (p1 -> p2)", Flavor::Sdl), (true, true));
}

#[test]
fn sdl_reduction_small_cases() {
    let q = QbfInstance::parse("exists p : p").unwrap();
    assert_eq!(reduce_qbf(&q, Flavor::Sdl).unwrap().model.model.state_count(), 3);
    assert_eq!(reduce("exists p : p", Flavor::Sdl), (true, true));
    assert_eq!(reduce("exists p : (p & !p)", Flavor::Sdl), (false, false));
}

#[test]
fn scl_reduction_of_the_running_example() {
    let q = QbfInstance::parse("forall p1 exists p2 : (p1 -> p2)").unwrap();
    let r = reduce_qbf(&q, Flavor::Scl).unwrap();
    let m = &r.model.model;
    assert_eq!(m.state_count(), 5);
    let mut expected: Vec<(String, String)> = (1..=4).map(|i| (format!("s{i}"), "s".to_string())).collect();
    expected.insert(0, ("s".into(), "s".into()));
    let mut edges = edge_names(m);
    edges.sort();
    expected.sort();
    assert_eq!(edges, expected);
    assert!(all_costs(m).iter().all(|&c| c == 1));
    let budgets: Vec<u64> = r
        .formula
        .strategic_ops()
        .iter()
        .map(|o| o.mode.angel_budget())
        .collect();
    assert!(budgets.iter().all(|&b| b <= 1));
    let top: Vec<u64> = r
        .formula
        .strategic_ops()
        .iter()
        .filter(|o| o.mode.angel_budget() > 0)
        .map(|o| o.mode.angel_budget())
        .collect();
    assert_eq!(top, [1, 1]);
    assert_eq!(reduce("forall p1 exists p2 : (p1 -> p2)", Flavor::Scl), (true, true));
    assert_eq!(reduce("forall p : p", Flavor::Scl), (false, false));
}

#[test]
fn reduction_errors() {
    let q = QbfInstance::new(vec![], sulcheck::oracle::Prop::True).unwrap();
    assert_eq!(reduce_qbf(&q, Flavor::Sdl).unwrap_err(), ReductionError::EmptyPrefix);
    let q = QbfInstance::parse("exists p : p").unwrap();
    assert_eq!(
        reduce_qbf(&q, Flavor::Sul).unwrap_err(),
        ReductionError::Flavor(Flavor::Sul)
    );
}

#[test]
fn three_variable_reductions() {
    for text in [
        "forall p1 exists p2 forall p3 : ((p1 | p3) -> p2)",
        "exists p1 forall p2 exists p3 : (p1 & (p2 <-> p3))",
        "forall p1 forall p2 exists p3 : (p3 <-> (p1 & !p2))",
    ] {
        for flavor in [Flavor::Sdl, Flavor::Scl] {
            let (check, truth) = reduce(text, flavor);
            assert_eq!(check, truth, "{flavor} {text}");
        }
    }
}

#[test]
fn translation_examples() {
    let t = |text: &str, flavor| translate_ctl(&parse_ctl(text).unwrap(), flavor).to_string();
    assert_eq!(t("AX p", Flavor::Sdl), "<d:0> X p");
    assert_eq!(t("A(p U q)", Flavor::Sul), "<<a,d|0,0>> p U q");
    assert_eq!(t("EF p", Flavor::Sdl), "!<d:0> false R (!p)");
    let ef = translate_ctl(&parse_ctl("EF p").unwrap(), Flavor::Sdl);
    assert_eq!(ef, Formula::not(parse_formula("<d:0> G !p").unwrap()));
    assert_eq!(t("AX p", Flavor::Scl), "<a:0> X p");
}

#[test]
fn distinguishing_family() {
    let formula = parse_formula("<d:1> F p").unwrap();
    for n in 1..=2 {
        let (short, long) = build_distinguishing_family(n).unwrap();
        assert_eq!(short.model.state_count(), (n + 1) + (n + 2));
        assert_eq!(long.model.state_count(), (n + 1) + (n + 3));
        for pm in [&short, &long] {
            assert_eq!(pm.point_name(), "s1");
            assert_eq!(pm.model.atom_states("p"), [pm.model.state_id("t1").unwrap()]);
            assert!(all_costs(&pm.model).iter().all(|&c| c == 1));
            for s in pm.model.states().filter(|&s| pm.model.state_name(s).starts_with('t')) {
                assert!(pm.model.has_edge(s, s));
            }
        }
        assert!(holds(&short, &formula).unwrap(), "n = {n}");
        assert!(!holds(&long, &formula).unwrap(), "n = {n}");
    }
    assert_eq!(build_distinguishing_family(0).unwrap_err(), ReductionError::FamilyIndex);
}

#[test]
fn figure_fixtures() {
    let m1 = fixture("fig1.M1").unwrap();
    assert_eq!((m1.state_count(), m1.edge_count()), (4, 9));
    let names = |atom| -> Vec<&str> { m1.atom_states(atom).into_iter().map(|s| m1.state_name(s)).collect() };
    assert_eq!(names("error"), ["s1"]);
    assert_eq!(names("server"), ["s2", "s3"]);
    assert_eq!(names("admin"), ["s3"]);
    let m4 = pointed_fixture("fig3.M4").unwrap();
    assert_eq!((m4.model.state_count(), m4.model.edge_count()), (1, 1));
    assert!(m4.model.holds("p", m4.point));
    let fig2_m4 = fixture("fig2.M4").unwrap();
    let s3 = fig2_m4.state_id("s3").unwrap();
    assert_eq!(fig2_m4.successors(s3), [fig2_m4.state_id("s2").unwrap()]);
    assert!(FIXTURE_KEYS.iter().all(|k| pointed_fixture(k).is_some()));
    assert!(fixture("fig9.M1").is_none());
}

#[test]
fn shipped_fixture_files_match() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for key in FIXTURE_KEYS {
        let text = std::fs::read_to_string(dir.join(format!("{key}.model"))).unwrap();
        let pm = pointed_fixture(key).unwrap();
        assert_eq!(text, serialize_model(&pm.model, Some(pm.point)), "{key}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn translation_preserves_truth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pm = common::random_pointed(&mut rng, 3, &["p", "q"], 1);
        let f = common::random_ctl(&mut rng, &["p", "q"], 2);
        let expected = ctl_check(&pm.model, pm.point, &f);
        for flavor in [Flavor::Sdl, Flavor::Scl, Flavor::Sul] {
            let g = translate_ctl(&f, flavor);
            prop_assert_eq!(g.flavor().unwrap().unwrap_or(flavor), flavor);
            prop_assert_eq!(holds(&pm, &g).unwrap(), expected, "{} {}", flavor, g);
        }
    }
}

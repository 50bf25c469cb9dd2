use psdual_core::manifold::{thom_iso_is_linear, LevelStatus, Structure, VirtualBundle};
use psdual_core::module::IsoOptions;
use psdual_core::spaces::{data_dir, hp, load_str, rp, Space, SpaceSpec};
use psdual_core::{Error, Letter, Prime, SubalgebraSpec};

fn report(s: &str) -> psdual_core::manifold::ObstructionReport {
    let primes = [Prime::TWO, Prime::THREE, Prime::FIVE];
    s.parse::<SpaceSpec>().unwrap().build(&primes).unwrap().report(&IsoOptions::default()).unwrap()
}

#[test]
fn g2_so4_is_spin_but_not_string() {
    let sp = Space::from_file(&data_dir().join("g2_so4.mod")).unwrap();
    assert_eq!(sp.name, "G_2/SO(4)");
    let r = sp.report(&IsoOptions::default()).unwrap();
    assert_eq!(r.dimension, 8);
    assert_eq!(r.verdict(Structure::Spin).status, LevelStatus::Yes);
    assert_eq!(r.verdict(Structure::String).status, LevelStatus::No);
    assert_eq!(r.obstruction().as_deref(), Some("Sq^4 asymmetry"));
    assert!(r.disagreements.is_empty());
}

#[test]
fn joker_in_g2_so4_is_self_dual_over_a1() {
    let sp = Space::from_file(&data_dir().join("g2_so4.mod")).unwrap();
    let ring = sp.ring(2).unwrap();
    // Sq^2 Sq^2 a = chi(Sq^4) a is the degree-2 to degree-6 link
    let a = ring.basis_class(ring.index_of("a").unwrap());
    let b2 = ring.basis_class(ring.index_of("b^2").unwrap());
    assert_eq!(ring.act_word(&[Letter::Sq(2), Letter::Sq(2)], &a), b2);
}

#[test]
fn summaries() {
    assert_eq!(report("cp:11").summary(), "A(2)_2-PSD: YES; A(1)_3-PSD: YES; string: NO (p_1/2 = 6)");
    assert_eq!(report("op2").summary(), "string-level PSD: YES; 5-brane: NO (Sq^8 asymmetry)");
    assert!(report("rp:5").summary().ends_with("spin: NO (Sq^2 asymmetry)"));
    let text = report("hp:3").render_text();
    assert!(text.lines().last().unwrap().starts_with("summary: "));
}

#[test]
fn lower_failure_propagates() {
    let r = report("rp:5");
    assert_eq!(r.verdict(Structure::String).line(), "string: NO (not spin)");
    assert_eq!(r.verdict(Structure::FiveBrane).status, LevelStatus::No);
}

#[test]
fn report_serializes() {
    let v = serde_json::to_value(report("cp:3")).unwrap();
    assert_eq!(v["space"], "CP^3");
    assert_eq!(v["primes"], serde_json::json!([2, 3, 5]));
    assert!(v["structures"].as_array().unwrap().len() == 4);
}

#[test]
fn unsupported_and_unknown() {
    let s: SpaceSpec = "rp:4".parse().unwrap();
    assert!(matches!(s.ring(Prime::THREE), Err(Error::UnsupportedPrime { prime: 3, .. })));
    assert!(matches!("cp:0".parse::<SpaceSpec>(), Err(Error::UnknownSpace(_))));
    assert!("file:/nonexistent/x.mod".parse::<SpaceSpec>().unwrap().build(&[Prime::TWO]).is_err());
    assert!(matches!(Prime::new(9), Err(Error::NotPrime(9))));
}

#[test]
fn hp_at_seven() {
    let p = Prime::new(7).unwrap();
    let r = hp(4, p).unwrap();
    assert!(r.validate().is_empty());
    // P^1 x = C(2,1) (-1)^3 x^(1+3)
    let x = r.basis_class(1);
    assert_eq!(r.act(Letter::P(1), &x), r.scale(&r.basis_class(4), 5));
}

#[test]
fn rp11_thom_counterexample() {
    let r = rp(11).unwrap();
    let nu = VirtualBundle::negative_tangent(&r).unwrap();
    assert!(thom_iso_is_linear(&nu, &SubalgebraSpec::new(Prime::TWO, 1)).linear);
    let lin = thom_iso_is_linear(&nu, &SubalgebraSpec::new(Prime::TWO, 2));
    assert!(!lin.linear);
    assert!(lin.counterexample.unwrap().contains("Sq4"));
}

#[test]
fn bad_files_report_lines() {
    let err = load_str("prime 2\nbasis 1 0\nbasis x 1\nfundamental 1\ncup x x = 1\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 5, .. } | Error::Validation(_)), "{err}");
    let err = load_str("prime 2\nbasis 1 0\nop Sq1 1 = q\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
}

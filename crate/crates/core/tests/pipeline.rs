mod common;

use common::{random_normalized, rng};
use magnus_core::catalog;
use magnus_core::pipeline::{
    analyze, expand_levels, level_rewrite, schreier_rewrite, shift_levels, Analysis, BasisChange, Options,
};
use magnus_core::{CompatiblePair, Error, Generator, SurfacePresentation, Word};
use rand::Rng;

fn shipped(name: &str) -> (SurfacePresentation, CompatiblePair) {
    let f = &catalog::example(name).unwrap().presentations()[0];
    (f.presentation.clone(), f.pair.unwrap())
}

fn run(p: &SurfacePresentation, pair: &CompatiblePair) -> Analysis {
    analyze(p, pair, Options::default()).unwrap()
}

#[test]
fn shipped_instances_round_trip() {
    for name in ["exceptional-pair", "m1-early-exit"] {
        let (p, pair) = shipped(name);
        let a = run(&p, &pair);
        assert!(a.check_round_trips(), "{name}");
    }
}

#[test]
fn exceptional_instance_shape() {
    let (p, pair) = shipped("exceptional-pair");
    let a = run(&p, &pair);
    assert_eq!((a.m(), a.p()), (0, Some(0)));
    let inst = a.instance.as_ref().unwrap();
    assert_eq!(inst.relator_string(), "L{b1@-2}^4 F{b2@-2}^-3 L{b1@-2}^2 F{b2@-2}^-3");
    let expansions: Vec<String> = inst.generators.iter().map(|g| g.expansion.to_string()).collect();
    assert_eq!(expansions, ["a1^-1 b1^-1 a1 b1", "a2^-2 b2 a2^2", "a1^-2 b1 a1^2"]);
}

#[test]
fn level_rewrite_expands_back() {
    let mut r = rng(3);
    for genus in 2..=4 {
        let pair = CompatiblePair::new(genus, 1, 2).unwrap();
        for _ in 0..20 {
            let len = r.gen_range(4..=14);
            let p = random_normalized(&mut r, genus, &pair, len);
            let ak = Generator::a(genus);
            let raw = level_rewrite(p.relator(), &ak, 0).unwrap();
            assert_eq!(expand_levels(&raw, &ak), *p.relator());
            let start = r.gen_range(-3..=3);
            let shifted = level_rewrite(p.relator(), &ak, start).unwrap();
            assert_eq!(shifted, shift_levels(&raw, start));
            let anchor = r.gen_range(-2..=2);
            let elim = schreier_rewrite(p.relator(), genus, Some(anchor)).unwrap();
            let diff = &expand_levels(&elim, &ak) * &p.relator().inverse();
            assert!(p.is_trivial_in_surface(&diff));
        }
    }
}

#[test]
fn random_instances_round_trip_and_are_margin_stable() {
    let mut r = rng(17);
    let mut analyzed = 0;
    for genus in 2..=4 {
        for _ in 0..15 {
            let j = r.gen_range(1..genus);
            let i = r.gen_range(2..=(j + 1).min(genus));
            let pair = CompatiblePair::new(genus, j, i).unwrap();
            let len = r.gen_range(4..=14);
            let p = random_normalized(&mut r, genus, &pair, len);
            let a = match analyze(&p, &pair, Options::default()) {
                Ok(a) => a,
                Err(Error::DegenerateRelator) => continue,
                Err(e) => panic!("{}: {e}", p.relator()),
            };
            analyzed += 1;
            assert!(a.check_round_trips(), "{}", p.relator());
            let wide = analyze(&p, &pair, Options { margin: 2 }).unwrap();
            assert_eq!((wide.m(), wide.p()), (a.m(), a.p()), "{}", p.relator());
        }
    }
    assert!(analyzed >= 30);
}

#[test]
fn basis_change_normalizes_both_gradings() {
    let mut r = rng(23);
    for genus in 2..=4 {
        for _ in 0..20 {
            let len = r.gen_range(3..=12);
            let rel = common::random_relator(&mut r, genus, len);
            let p = SurfacePresentation::new(genus, rel).unwrap();
            let bc = BasisChange::compute(&p);
            assert_eq!(bc.relator.exponent_sum(&Generator::a(1)), 0);
            assert_eq!(bc.relator.exponent_sum(&Generator::a(genus)), 0);
            assert_eq!(bc.to_normalized.apply(p.relator()), bc.relator.conjugate_by(&bc.conjugator));
            let back = bc.original_conjugator(&Word::identity());
            let lhs = bc.to_original.apply(&bc.relator);
            assert!(p.is_trivial_in_surface(&(&lhs * &p.relator().conjugate_by(&back).inverse())));
        }
    }
}

#[test]
fn errors_surface_through_analyze() {
    let pair = CompatiblePair::new(2, 1, 2).unwrap();
    let p = SurfacePresentation::new(2, "a1 b1 a1^-1".parse().unwrap());
    assert_eq!(p.unwrap_err(), Error::NotCyclicallyReduced);
    let p = SurfacePresentation::new(2, "b1^3".parse().unwrap()).unwrap();
    assert!(matches!(analyze(&p, &pair, Options::default()), Err(Error::RConjugateIntoFactor(_))));
}

//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use common::{conjugate_product, random_normalized, random_relator, random_word, rng};
use magnus_core::catalog::{self, non_cyclonormal};
use magnus_core::endgame::{
    decide_exceptional, decide_with, in_double_coset, intersection_sample, DoubleCoset, Membership, Verdict,
};
use magnus_core::pipeline::{analyze, Analysis, Options};
use magnus_core::surface::{surface_relator, AmalgamForm};
use magnus_core::{
    Budget, CompatiblePair, Error, Generator, Letter, SubgroupGraph, SurfacePresentation, Word,
};
use rand::Rng;

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.pass = false;
            self.notes.push(format!("failed: {what}"));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn shipped(name: &str) -> (SurfacePresentation, CompatiblePair) {
    let f = &catalog::example(name).expect("bundled").presentations()[0];
    (f.presentation.clone(), f.pair.expect("pair"))
}

/// `w` matches `pattern` after a bijective renaming of symbols, a cyclic rotation and possibly inversion.
fn matches_up_to_renaming(w: &Word<usize>, pattern: &Word<usize>) -> bool {
    let syms: Vec<usize> = {
        let mut v: Vec<usize> = w.symbols().copied().collect();
        v.sort();
        v.dedup();
        v
    };
    if syms.len() != 2 || w.len() != pattern.len() {
        return false;
    }
    for first in [syms[0], syms[1]] {
        let renamed = w.map_symbols(|s| if *s == first { 0 } else { 1 });
        for p in [pattern.clone(), pattern.inverse()] {
            if (0..p.len()).any(|k| p.rotate(k) == renamed) {
                return true;
            }
        }
    }
    false
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let (p, pair) = shipped("exceptional-pair");
    let start = Instant::now();
    let d = match decide_exceptional(&p, &pair, &Budget::default()) {
        Ok(d) => d,
        Err(e) => {
            o.check(false, format!("analyze: {e}"));
            return o;
        }
    };
    let elapsed = start.elapsed();
    o.check(d.analysis.m() == 0, format!("m = {}", d.analysis.m()));
    o.check(d.analysis.p() == Some(0), format!("p = {:?}", d.analysis.p()));
    let pattern: Word<usize> = Word::from_letters(
        [(0, 4), (1, -3), (0, 2), (1, -3)]
            .iter()
            .flat_map(|&(s, e): &(usize, i64)| {
                let l = if e > 0 { Letter::pos(s) } else { Letter::neg(s) };
                std::iter::repeat_n(l, e.unsigned_abs() as usize)
            })
            .collect(),
    );
    match &d.analysis.instance {
        Some(inst) => {
            o.note(format!("instance relator {}", inst.relator_string()));
            o.check(matches_up_to_renaming(&inst.relator, &pattern), "instance relator is u^4 f^-3 u^2 f^-3");
        }
        None => o.check(false, "no instance"),
    }
    match &d.verdict {
        Verdict::Exceptional { generator, partner, certificate } => {
            let expected = "a1^-2 b1 a1^2".parse::<Word>().unwrap().pow(6);
            o.note(format!("generator {generator} = {partner} in G, certificate of {} factors", certificate.len()));
            o.check(certificate.verify_in_surface(&p, &(generator * &partner.inverse())), "certificate verifies");
            o.check(
                p.is_trivial_in_surface(&(generator * &expected.inverse())),
                "generator equals (a1^-2 b1 a1^2)^6 in the surface group",
            );
        }
        other => o.check(false, format!("verdict {other:?}")),
    }
    o.check(elapsed < Duration::from_secs(60), format!("runtime {elapsed:?}"));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let ex = catalog::example("non-cyclonormal").unwrap();
    let t = Instant::now();
    let identity_ok = ex.presentations().iter().all(|f| {
        let lhs: Word = "a2^-1 b2 a2".parse().unwrap();
        let rhs: Word = "b2 a1^-1 b1^-1 a1 b1".parse().unwrap();
        f.presentation.dehn_reduce(&(&lhs * &rhs.inverse())).is_empty()
    });
    o.check(identity_ok && t.elapsed() < Duration::from_secs(1), "a2^-1 b2 a2 = b2 [a1,b1] by Dehn reduction");
    let budget = Budget::default();
    let mut any_conj = false;
    let mut any_pair = false;
    for f in ex.presentations() {
        let run = non_cyclonormal(&f.presentation, &budget);
        let r = run.presentation.relator().clone();
        for (sign, cert) in &run.conjugation {
            let target = &"b1^6".parse::<Word>().unwrap()
                * &"b1^6".parse::<Word>().unwrap().pow(*sign).conjugate_by(&"a2^-1".parse().unwrap()).inverse();
            let ok = cert.verify_free(&r, &target);
            o.check(ok, "conjugation certificate verifies freely");
            o.note(format!("relator {r}: b1^6 = a2^-1 b1^{} a2 certified ({} factors)", 6 * sign, cert.len()));
            any_conj |= ok;
        }
        for x in &run.pairs {
            o.check(
                x.certificate.verify_in_surface(&run.presentation, &(&x.target * &x.u.inverse())),
                format!("pair {} -> {} verifies", x.w, x.u),
            );
        }
        if let Some((u1, u2)) = &run.noncommuting {
            let in_m = |w: &Word| w.symbols().all(|g| catalog::non_cyclonormal_subgroup().contains(g));
            let nontrivial = !Word::commutator(u1, u2).is_empty();
            o.check(in_m(u1) && in_m(u2) && nontrivial, "non-commuting pair lies in M");
            o.note(format!("relator {r}: [{u1}, {u2}] != 1 in M, both in M ∩ a2 M a2^-1"));
            any_pair = true;
        }
    }
    o.check(any_conj, "b1^6 conjugation identity certified for some variant");
    o.check(any_pair, "two certified intersection elements with nontrivial commutator");
    let elapsed = start.elapsed();
    o.check(elapsed < Duration::from_secs(300), format!("runtime {elapsed:?}"));
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let (p, pair) = shipped("m1-early-exit");
    let budget = Budget::default();
    match decide_exceptional(&p, &pair, &budget) {
        Ok(d) => o.check(matches!(d.verdict, Verdict::NonExceptional(_)), format!("verdict {:?}", d.verdict)),
        Err(e) => o.check(false, e.to_string()),
    }
    let source = pair.m2().generators(p.genus());
    let got = intersection_sample(&p, &source, &Membership::Prefix(pair.prefix), &Word::identity(), &budget);
    let delta = SubgroupGraph::fold(&[pair.delta()]);
    let mut powers = Vec::new();
    for x in &got {
        o.check(delta.contains(&x.u).is_some(), format!("{} -> {} is a power of delta", x.w, x.u));
        powers.push(x.u.to_string());
    }
    powers.sort();
    powers.dedup();
    o.note(format!("{} certified pairs, distinct u: {}", got.len(), powers.join(", ")));
    let elapsed = start.elapsed();
    o.check(elapsed < Duration::from_secs(60), format!("runtime {elapsed:?}"));
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut r = rng(4);
    for n in 0..100 {
        let genus = 2 + (n % 3) as u32;
        let len = r.gen_range(3..=16);
        let rel = random_relator(&mut r, genus, len);
        let p = SurfacePresentation::new(genus, rel).unwrap();
        let sr = surface_relator(genus);
        for handle in 1..=genus {
            let nb = p.normalize_basis(handle);
            let rn = nb.presentation.relator();
            o.check(rn.exponent_sum(&Generator::a(handle)) == 0, format!("{} handle {handle}: exponent sum", p.relator()));
            o.check(nb.to_normalized.apply(&sr) == sr, format!("{}: commutator preserved", p.relator()));
            o.check(nb.to_original.apply(&sr) == sr, format!("{}: commutator preserved by inverse", p.relator()));
            for g in Generator::all(genus) {
                let x = Word::single(g);
                o.check(
                    nb.to_original.apply(&nb.to_normalized.apply(&x)) == x
                        && nb.to_normalized.apply(&nb.to_original.apply(&x)) == x,
                    format!("{}: inverse on {g}", p.relator()),
                );
            }
            o.check(rn.conjugate_by(&nb.conjugator) == nb.to_normalized.apply(p.relator()), "conjugator recorded");
        }
    }
    let elapsed = start.elapsed();
    o.note("100 relators, every handle normalized".to_string());
    o.check(elapsed < Duration::from_secs(10), format!("runtime {elapsed:?}"));
    o
}

fn brute_force(gens: &[Word], depth: usize) -> HashSet<Word> {
    let letters: Vec<Word> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    let mut all: HashSet<Word> = HashSet::from([Word::identity()]);
    let mut layer = vec![Word::identity()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                let p = w * l;
                if all.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        layer = next;
    }
    all
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut r = rng(5);
    let gens = Generator::all(2);
    let mut checked = 0usize;
    for _ in 0..200 {
        let count = r.gen_range(1..=3);
        let sub: Vec<Word> = (0..count)
            .map(|_| {
                let len = r.gen_range(1..=4);
                random_word(&mut r, &gens, len)
            })
            .collect();
        let graph = SubgroupGraph::fold(&sub);
        let members = brute_force(&sub, 6);
        for w in &members {
            let hit = graph.contains(w);
            o.check(hit.as_ref().is_some_and(|e| graph.evaluate(e) == *w), format!("{w} in <{sub:?}>"));
            checked += 1;
        }
        let max_len = members.iter().map(Word::len).max().unwrap_or(0).max(1);
        for _ in 0..200 {
            let len = r.gen_range(1..=max_len);
            let w = random_word(&mut r, &gens, len);
            if let Some(e) = graph.contains(&w) {
                o.check(graph.evaluate(&e) == w, format!("expression for {w} evaluates back"));
            } else {
                o.check(!members.contains(&w), format!("{w} enumerated but rejected"));
            }
            checked += 1;
        }
    }
    o.note(format!("{checked} membership queries against brute force"));
    let sr: Vec<Word> = (2..=4).map(surface_relator).collect();
    for n in 0..1000 {
        let genus = 2 + (n % 3) as u32;
        let count = r.gen_range(1..=5);
        let w = conjugate_product(&mut r, &sr[genus as usize - 2], &Generator::all(genus), count, 6);
        let p = SurfacePresentation::new(genus, Word::single(Generator::a(1))).unwrap();
        o.check(p.dehn_reduce(&w).is_empty(), format!("Dehn reduces {w}"));
    }
    o.note("1000 products of relator conjugates reduce to e".to_string());
    let elapsed = start.elapsed();
    o.check(elapsed < Duration::from_secs(120), format!("runtime {elapsed:?}"));
    o
}

fn random_pair(r: &mut impl Rng, genus: u32) -> CompatiblePair {
    let j = r.gen_range(1..genus);
    let i = r.gen_range(2..=(j + 1).min(genus));
    CompatiblePair::new(genus, j, i).unwrap()
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let budget = Budget::default();
    let mut cases: Vec<(SurfacePresentation, CompatiblePair)> =
        vec![shipped("exceptional-pair"), shipped("m1-early-exit")];
    let mut r = rng(6);
    let mut degenerate = 0;
    let mut random = 0;
    while random < 100 {
        let genus = r.gen_range(2..=4);
        let pair = random_pair(&mut r, genus);
        let len = r.gen_range(4..=14);
        let p = random_normalized(&mut r, genus, &pair, len);
        match analyze(&p, &pair, Options::default()) {
            Err(Error::DegenerateRelator) => degenerate += 1,
            _ => {
                cases.push((p, pair));
                random += 1;
            }
        }
    }
    let mut verdicts = [0usize; 3];
    for (p, pair) in &cases {
        let base = decide_with(p, pair, &budget, Options::default());
        let wide = decide_with(p, pair, &budget, Options { margin: 2 });
        let (base, wide) = match (base, wide) {
            (Ok(a), Ok(b)) => (a, b),
            (a, b) => {
                o.check(false, format!("{}: {:?} / {:?}", p.relator(), a.err(), b.err()));
                continue;
            }
        };
        let a: &Analysis = &base.analysis;
        o.check(a.check_round_trips(), format!("{}: round trip", p.relator()));
        o.check(wide.analysis.check_round_trips(), format!("{}: widened round trip", p.relator()));
        o.check(
            (a.m(), a.p()) == (wide.analysis.m(), wide.analysis.p()),
            format!("{}: m, p stable under widening", p.relator()),
        );
        o.check(base.verdict == wide.verdict, format!("{}: verdict stable under widening", p.relator()));
        verdicts[match base.verdict {
            Verdict::NonExceptional(_) => 0,
            Verdict::Exceptional { .. } => 1,
            Verdict::Inconclusive => 2,
        }] += 1;
    }
    o.note(format!(
        "{} instances ({degenerate} degenerate relators redrawn): {} non-exceptional, {} exceptional, {} inconclusive",
        cases.len(),
        verdicts[0],
        verdicts[1],
        verdicts[2]
    ));
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let budget = Budget::default();
    let mut r = rng(7);
    let mut instances: Vec<(SurfacePresentation, CompatiblePair, Verdict)> = Vec::new();
    let (p, pair) = shipped("m1-early-exit");
    let v = decide_exceptional(&p, &pair, &budget).unwrap().verdict;
    instances.push((p, pair, v));
    let (p, pair) = shipped("exceptional-pair");
    let v = decide_exceptional(&p, &pair, &budget).unwrap().verdict;
    instances.push((p, pair, v));
    while instances.len() < 10 {
        let genus = r.gen_range(2..=3);
        let pair = random_pair(&mut r, genus);
        let len = r.gen_range(4..=12);
        let p = random_normalized(&mut r, genus, &pair, len);
        if let Ok(d) = decide_exceptional(&p, &pair, &budget) {
            instances.push((p, pair, d.verdict));
        }
    }
    let (mut m0_pairs, mut commuting_checks, mut skipped_g, mut violations) = (0, 0, 0, 0);
    for (p, pair, verdict) in &instances {
        let genus = p.genus();
        let source = pair.m2().generators(genus);
        let into = Membership::Prefix(pair.prefix);
        if matches!(verdict, Verdict::NonExceptional(_)) {
            let m0 = SubgroupGraph::fold(&pair.m0_generators());
            for x in intersection_sample(p, &source, &into, &Word::identity(), &budget) {
                let ok = m0.contains(&x.u).is_some();
                o.check(ok, format!("{}: {} -> {} outside M0", p.relator(), x.w, x.u));
                violations += usize::from(!ok);
                m0_pairs += 1;
            }
        }
        for _ in 0..3 {
            // g with at least three syllables along the prefix split is not a literal product
            let g = loop {
                let len = r.gen_range(3..=6);
                let g = random_word(&mut r, &Generator::all(genus), len);
                if AmalgamForm::new(genus, pair.prefix, &g).len() >= 3 {
                    break g;
                }
            };
            if let DoubleCoset::Witness { .. } = in_double_coset(p, pair, &g, &budget.scaled(3)) {
                skipped_g += 1;
                continue;
            }
            let got = intersection_sample(p, &source, &into, &g, &budget);
            for (i, x) in got.iter().enumerate() {
                for y in &got[i + 1..] {
                    commuting_checks += 1;
                    let ok = Word::commutator(&x.u, &y.u).is_empty();
                    o.check(ok, format!("{}: g = {g}: {} and {} do not commute", p.relator(), x.u, y.u));
                    violations += usize::from(!ok);
                }
            }
        }
    }
    o.note(format!(
        "{} instances; {m0_pairs} certified pairs checked against M0; {commuting_checks} commutation checks; \
         {skipped_g} g found in M1 M2; {violations} certified violations",
        instances.len()
    ));
    o
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        ("1 end-to-end exceptional example", criterion_1),
        ("2 non-cyclonormal counterexample", criterion_2),
        ("3 early-exit soundness", criterion_3),
        ("4 exponent-sum normalization", criterion_4),
        ("5 Stallings and Dehn oracles", criterion_5),
        ("6 pipeline round trips and truncation stability", criterion_6),
        ("7 theorem-property runs", criterion_7),
    ];
    let only: Option<String> = std::env::args().nth(1).filter(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (name, f) in criteria {
        if only.as_deref().is_some_and(|o| !name.starts_with(o)) {
            continue;
        }
        let start = Instant::now();
        let out = f();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name} ({:.2?})", start.elapsed());
        for n in out.notes.iter().take(20) {
            println!("    {n}");
        }
        failed += usize::from(!out.pass);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

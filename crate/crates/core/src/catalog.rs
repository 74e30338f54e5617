//! Bundled regression instances and their expected outcomes.

use crate::budget::Budget;
use crate::endgame::{
    decide_exceptional, intersection_sample, normal_closure_member, Certificate, IntersectionPair, Membership,
    Verdict,
};
use crate::surface::PresentationFile;
use crate::surface::SurfacePresentation;
use crate::word::{Generator, Word};

pub struct Example {
    pub name: &'static str,
    pub summary: &'static str,
    pub files: &'static [(&'static str, &'static str)],
}

pub const EXAMPLES: &[Example] = &[
    Example {
        name: "exceptional-pair",
        summary: "genus 2, <a1,b1> and <a2,b2> meet in an extra cyclic factor",
        files: &[("exceptional-pair.txt", include_str!("../data/exceptional-pair.txt"))],
    },
    Example {
        name: "non-cyclonormal",
        summary: "genus 2, <a1,b1,b2> is not cyclonormal (both relator sign variants)",
        files: &[
            ("non-cyclonormal-a.txt", include_str!("../data/non-cyclonormal-a.txt")),
            ("non-cyclonormal-b.txt", include_str!("../data/non-cyclonormal-b.txt")),
        ],
    },
    Example {
        name: "m1-early-exit",
        summary: "genus 2, first window width 1 forces M1 ∩ M2 = M0",
        files: &[("m1-early-exit.txt", include_str!("../data/m1-early-exit.txt"))],
    },
];

pub fn example(name: &str) -> Option<&'static Example> {
    EXAMPLES.iter().find(|e| e.name == name)
}

impl Example {
    /// Parsed files, in bundle order.
    pub fn presentations(&self) -> Vec<PresentationFile> {
        self.files.iter().map(|(_, text)| text.parse().expect("bundled files parse")).collect()
    }

    pub fn check(&self, budget: &Budget) -> Vec<Check> {
        match self.name {
            "exceptional-pair" => check_exceptional(&self.presentations()[0], budget),
            "non-cyclonormal" => check_non_cyclonormal(budget),
            "m1-early-exit" => check_m1(&self.presentations()[0], budget),
            _ => Vec::new(),
        }
    }
}

/// One expected-vs-actual line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    fn new(label: &str, expected: impl ToString, actual: impl ToString) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Check { label: label.into(), pass: expected == actual, expected, actual }
    }

    fn flag(label: &str, expected: &str, actual: String, pass: bool) -> Self {
        Check { label: label.into(), expected: expected.into(), actual, pass }
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Exceptional { generator, .. } => format!("exceptional {generator}"),
        other => other.label().to_string(),
    }
}

fn check_exceptional(file: &PresentationFile, budget: &Budget) -> Vec<Check> {
    let pres = &file.presentation;
    let pair = file.pair.as_ref().expect("exceptional file has a pair");
    let d = match decide_exceptional(pres, pair, budget) {
        Ok(d) => d,
        Err(e) => return vec![Check::new("analyze", "ok", e)],
    };
    let expected = exceptional_generator();
    let gen_ok = match &d.verdict {
        Verdict::Exceptional { generator, .. } => {
            pres.is_trivial_in_surface(&(generator * &expected.inverse()))
                || pres.is_trivial_in_surface(&(generator * &expected))
        }
        _ => false,
    };
    vec![
        Check::new("m", 0, d.analysis.m()),
        Check::new("p", "0", d.analysis.p().map_or("-".into(), |p| p.to_string())),
        Check::flag("verdict", &format!("exceptional {expected}"), verdict_text(&d.verdict), gen_ok),
    ]
}

/// `(a1^-2 b1 a1^2)^6`.
pub fn exceptional_generator() -> Word {
    "a1^-2 b1^6 a1^2".parse().expect("literal")
}

fn check_m1(file: &PresentationFile, budget: &Budget) -> Vec<Check> {
    let pair = file.pair.as_ref().expect("m1 file has a pair");
    match decide_exceptional(&file.presentation, pair, budget) {
        Ok(d) => vec![Check::new("m", 1, d.analysis.m()), Check::new("verdict", "non-exceptional", d.verdict.label())],
        Err(e) => vec![Check::new("analyze", "ok", e)],
    }
}

/// Outcome of the non-cyclonormal instance for one relator variant.
#[derive(Clone, Debug)]
pub struct NonCyclonormal {
    pub presentation: SurfacePresentation,
    /// `a2^-1 b2 a2 = b2 [a1,b1]` in the surface group.
    pub surface_identity: bool,
    /// Certified identities `b1^6 = a2^-1 b1^(±6) a2`, keyed by the sign.
    pub conjugation: Vec<(i64, Certificate)>,
    /// Certified elements of `<a1,b1,b2> ∩ a2 <a1,b1,b2> a2^-1`.
    pub pairs: Vec<IntersectionPair>,
    /// Two of the `u`s whose free commutator is nontrivial.
    pub noncommuting: Option<(Word, Word)>,
}

pub fn non_cyclonormal_subgroup() -> Vec<Generator> {
    vec![Generator::a(1), Generator::b(1), Generator::b(2)]
}

/// Runs the non-cyclonormal checks on one presentation.
pub fn non_cyclonormal(pres: &SurfacePresentation, budget: &Budget) -> NonCyclonormal {
    let p = |s: &str| -> Word { s.parse().expect("literal") };
    let surface_identity =
        pres.is_trivial_in_surface(&(&p("a2^-1 b2 a2") * &p("b2 a1^-1 b1^-1 a1 b1").inverse()));
    let b6 = p("b1^6");
    let conjugation = [1, -1]
        .into_iter()
        .filter_map(|s| {
            let rhs = b6.pow(s).conjugate_by(&p("a2^-1"));
            let target = &b6 * &rhs.inverse();
            normal_closure_member(pres.relator(), &target, budget).map(|c| (s, c))
        })
        .collect();
    let source = non_cyclonormal_subgroup();
    let pairs = intersection_sample(pres, &source, &Membership::Letters(source.clone()), &p("a2"), budget);
    let mut noncommuting = None;
    'outer: for (i, x) in pairs.iter().enumerate() {
        for y in &pairs[i + 1..] {
            if !Word::commutator(&x.u, &y.u).is_empty() {
                noncommuting = Some((x.u.clone(), y.u.clone()));
                break 'outer;
            }
        }
    }
    NonCyclonormal { presentation: pres.clone(), surface_identity, conjugation, pairs, noncommuting }
}

fn check_non_cyclonormal(budget: &Budget) -> Vec<Check> {
    let ex = example("non-cyclonormal").expect("bundled");
    let runs: Vec<NonCyclonormal> =
        ex.presentations().iter().map(|f| non_cyclonormal(&f.presentation, budget)).collect();
    let describe = |r: &NonCyclonormal| {
        let signs: Vec<String> = r.conjugation.iter().map(|(s, _)| format!("{:+}", s * 6)).collect();
        format!("{} [{}]", r.presentation.relator(), signs.join(","))
    };
    let conj: Vec<String> = runs.iter().filter(|r| !r.conjugation.is_empty()).map(describe).collect();
    let pair_desc = runs
        .iter()
        .find_map(|r| r.noncommuting.as_ref())
        .map_or("none".to_string(), |(x, y)| format!("{x} , {y}"));
    vec![
        Check::new("a2^-1 b2 a2 = b2 [a1,b1]", true, runs.iter().all(|r| r.surface_identity)),
        Check::flag("b1^6 conjugation", "certified for some variant", conj.join("; "), !conj.is_empty()),
        Check::flag(
            "non-commuting pair",
            "two certified elements with nontrivial commutator",
            pair_desc,
            runs.iter().any(|r| r.noncommuting.is_some()),
        ),
    ]
}

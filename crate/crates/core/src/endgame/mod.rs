//! Bounded, certificate-producing searches in one-relator quotients.
//!
//! Every positive answer carries a [`Certificate`], a product of conjugates
//! of the relator that is re-verified exactly before it is returned.

mod sample;
mod search;

pub use sample::{
    exceptional_search, in_double_coset, intersection_sample, DoubleCoset, ExceptionalWitness, IntersectionPair,
    Membership,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::Result;
use crate::pipeline::{analyze, Analysis, Options};
use crate::surface::{CompatiblePair, SurfacePresentation};
use crate::word::{Generator, Symbol, Word};
use search::InsertionSearch;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "Word<S>: Serialize", deserialize = "Word<S>: Deserialize<'de>"))]
pub struct CertFactor<S = Generator> {
    pub conjugator: Word<S>,
    pub exp: i64,
}

/// `product over factors of conjugator * r^exp * conjugator^-1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent, bound(serialize = "Word<S>: Serialize", deserialize = "Word<S>: Deserialize<'de>"))]
pub struct Certificate<S = Generator> {
    pub factors: Vec<CertFactor<S>>,
}

impl<S: Symbol> Certificate<S> {
    pub fn empty() -> Self {
        Certificate { factors: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self, relator: &Word<S>) -> Word<S> {
        self.factors
            .iter()
            .fold(Word::identity(), |acc, f| &acc * &relator.pow(f.exp).conjugate_by(&f.conjugator))
    }

    /// `product = target` in the free group.
    pub fn verify_free(&self, relator: &Word<S>, target: &Word<S>) -> bool {
        self.product(relator) == target.reduced()
    }

    pub fn map<T: Symbol>(&self, mut f: impl FnMut(&Word<S>) -> Word<T>) -> Certificate<T> {
        Certificate {
            factors: self.factors.iter().map(|x| CertFactor { conjugator: f(&x.conjugator), exp: x.exp }).collect(),
        }
    }

    /// Appends `other`.
    pub fn then(mut self, other: &Certificate<S>) -> Self {
        self.factors.extend(other.factors.iter().cloned());
        self
    }
}

impl Certificate<Generator> {
    /// `product = target` in the surface group, using the presentation's relator.
    pub fn verify_in_surface(&self, pres: &SurfacePresentation, target: &Word) -> bool {
        let diff = &self.product(pres.relator()) * &target.inverse();
        pres.is_trivial_in_surface(&diff)
    }

    /// Conjugates every factor by `h`.
    pub fn conjugated(&self, h: &Word) -> Self {
        self.map(|c| h * c)
    }
}

fn exponent_map<S: Symbol>(w: &Word<S>) -> BTreeMap<S, i64> {
    let mut m = BTreeMap::new();
    for l in w.letters() {
        *m.entry(l.sym.clone()).or_insert(0) += l.sign();
    }
    m.retain(|_, v| *v != 0);
    m
}

/// `Some(n)` when the exponent vector of `target` is `n` times that of `relator`.
pub fn exponent_multiple<S: Symbol>(relator: &Word<S>, target: &Word<S>) -> Option<i64> {
    let r = exponent_map(relator);
    let t = exponent_map(target);
    if t.is_empty() {
        return Some(0);
    }
    let (sym, &rv) = r.iter().next()?;
    let tv = t.get(sym).copied().unwrap_or(0);
    if tv % rv != 0 {
        return None;
    }
    let n = tv / rv;
    let ok = r.keys().chain(t.keys()).all(|s| t.get(s).copied().unwrap_or(0) == n * r.get(s).copied().unwrap_or(0));
    ok.then_some(n)
}

/// Semi-decides `target ∈ <<relator>>` in a free group.
pub fn normal_closure_member<S: Symbol>(relator: &Word<S>, target: &Word<S>, budget: &Budget) -> Option<Certificate<S>> {
    let target = target.reduced();
    if target.is_empty() {
        return Some(Certificate::empty());
    }
    if budget.is_zero() || exponent_multiple(relator, &target).is_none() {
        return None;
    }
    let id = |w: &Word<S>| w.clone();
    let search = InsertionSearch::new(relator, &id);
    let (_, cert) = search.run(&target, budget, |w| w.is_empty().then_some(()))?;
    cert.verify_free(relator, &target).then_some(cert)
}

/// Semi-decides `target = 1` in `G`, searching in the surface group.
pub fn normal_closure_member_in_surface(
    pres: &SurfacePresentation,
    target: &Word,
    budget: &Budget,
) -> Option<Certificate> {
    let dehn = pres.dehn();
    if dehn.reduce(target).is_empty() {
        return Some(Certificate::empty());
    }
    if budget.is_zero() || exponent_multiple(pres.relator(), target).is_none() {
        return None;
    }
    let norm = |w: &Word| dehn.reduce(w);
    let search = InsertionSearch::new(pres.relator(), &norm);
    let (_, cert) = search.run(target, budget, |w| w.is_empty().then_some(()))?;
    cert.verify_in_surface(pres, target).then_some(cert)
}

/// Outcome of a bounded equality test in `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equality {
    /// `w1 w2^-1` equals the certificate's product in the surface group.
    Verified(Certificate),
    /// The abelianization separates the two words.
    Refuted,
    Inconclusive,
}

pub fn equal_in_g(pres: &SurfacePresentation, w1: &Word, w2: &Word, budget: &Budget) -> Equality {
    let target = w1 * &w2.inverse();
    if pres.is_trivial_in_surface(&target) {
        return Equality::Verified(Certificate::empty());
    }
    let reduced = pres.dehn_reduce(&target);
    if exponent_multiple(pres.relator(), &reduced).is_none() {
        return Equality::Refuted;
    }
    match normal_closure_member_in_surface(pres, &target, budget) {
        Some(c) => Equality::Verified(c),
        None => Equality::Inconclusive,
    }
}

/// Why the intersection is not exceptional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reason {
    /// The first window width is positive.
    M(i64),
    /// The second window width is positive.
    P(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NonExceptional(Reason),
    /// `generator` lies in `M1`, equals `partner ∈ M2` in `G`, and
    /// `generator * partner^-1` is the certificate's product in the surface group.
    Exceptional { generator: Word, partner: Word, certificate: Certificate },
    Inconclusive,
}

impl Verdict {
    pub fn is_decided(&self) -> bool {
        !matches!(self, Verdict::Inconclusive)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::NonExceptional(_) => "non-exceptional",
            Verdict::Exceptional { .. } => "exceptional",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Pipeline output together with its verdict.
#[derive(Clone, Debug)]
pub struct Decision {
    pub analysis: Analysis,
    pub verdict: Verdict,
    pub witness: Option<ExceptionalWitness>,
}

pub fn decide_exceptional(pres: &SurfacePresentation, pair: &CompatiblePair, budget: &Budget) -> Result<Decision> {
    decide_with(pres, pair, budget, Options::default())
}

pub fn decide_with(
    pres: &SurfacePresentation,
    pair: &CompatiblePair,
    budget: &Budget,
    opts: Options,
) -> Result<Decision> {
    let analysis = analyze(pres, pair, opts)?;
    let verdict_only = |analysis, verdict| Ok(Decision { analysis, verdict, witness: None });
    if analysis.m() > 0 {
        let m = analysis.m();
        return verdict_only(analysis, Verdict::NonExceptional(Reason::M(m)));
    }
    if let Some(p) = analysis.p().filter(|&p| p > 0) {
        return verdict_only(analysis, Verdict::NonExceptional(Reason::P(p)));
    }
    let inst = analysis.instance.as_ref().expect("m = p = 0 yields an instance");
    let Some(wit) = exceptional_search(inst, budget) else {
        return verdict_only(analysis, Verdict::Inconclusive);
    };
    let bc = &analysis.basis_change;
    let generator = bc.to_original.apply(&inst.expand(&wit.prefix_word));
    let partner = bc.to_original.apply(&inst.expand(&wit.suffix_word));
    let certificate = wit.certificate.map(|g| bc.original_conjugator(&(&inst.expand(g) * &inst.conjugator)));
    let target = &generator * &partner.inverse();
    if !certificate.verify_in_surface(pres, &target) {
        return verdict_only(analysis, Verdict::Inconclusive);
    }
    let verdict = Verdict::Exceptional { generator, partner, certificate };
    Ok(Decision { analysis, verdict, witness: Some(wit) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    #[test]
    fn trivial_certificates() {
        let r = w("a1 b1 a1^-1 b1^-2");
        assert!(Certificate::empty().verify_free(&r, &Word::identity()));
        let one = Certificate { factors: vec![CertFactor { conjugator: Word::identity(), exp: 1 }] };
        assert!(one.verify_free(&r, &r));
        let found = normal_closure_member(&r, &r, &Budget::default()).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found.factors[0].conjugator.is_empty());
    }

    #[test]
    fn exponent_pruning() {
        let r = w("a1^2 b1");
        assert_eq!(exponent_multiple(&r, &w("b1 a1^2")), Some(1));
        assert_eq!(exponent_multiple(&r, &w("a1^-4 b1^-2")), Some(-2));
        assert_eq!(exponent_multiple(&r, &w("a1 b1")), None);
        assert_eq!(normal_closure_member(&r, &w("a1"), &Budget::default()), None);
    }

    #[test]
    fn conjugate_products_are_found() {
        let r = w("a1 b1 a1^-1 b1^-2");
        let t = &r.conjugate_by(&w("b1")) * &r.inverse().conjugate_by(&w("a1^-1"));
        let c = normal_closure_member(&r, &t, &Budget::default()).unwrap();
        assert!(c.verify_free(&r, &t));
    }

    #[test]
    fn equality_in_g() {
        let pres = SurfacePresentation::new(2, w("a1 b1 a1^-1 b1^-2")).unwrap();
        let b = Budget::default();
        assert_eq!(equal_in_g(&pres, &w("a2"), &w("a2"), &b), Equality::Verified(Certificate::empty()));
        assert_eq!(equal_in_g(&pres, &w("a2"), &w("b2"), &b), Equality::Refuted);
        match equal_in_g(&pres, pres.relator(), &Word::identity(), &b) {
            Equality::Verified(c) => assert!(c.verify_in_surface(&pres, pres.relator())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certificate_json() {
        let c = Certificate { factors: vec![CertFactor { conjugator: w("a1 b2^-1"), exp: -1 }] };
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"[{"conjugator":"a1 b2^-1","exp":-1}]"#);
        assert_eq!(serde_json::from_str::<Certificate>(&s).unwrap(), c);
    }
}

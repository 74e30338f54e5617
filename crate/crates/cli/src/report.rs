use magnus_core::endgame::{Certificate, Decision, Reason, Verdict};
use magnus_core::pipeline::dump_tokens;
use magnus_core::{Budget, CompatiblePair, SurfacePresentation};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub genus: u32,
    pub relator: String,
    pub magnus1: String,
    pub magnus2: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// Transvections taking the input basis to the normalized one.
    pub steps: String,
    pub relator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Leveled {
    pub first_raw: String,
    pub first_anchor: i64,
    pub first_rewritten: String,
    pub second_rewritten: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceGenerator {
    pub name: String,
    pub role: String,
    pub expansion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub generators: Vec<InstanceGenerator>,
    pub relator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    /// `non-exceptional`, `exceptional` or `inconclusive`.
    pub kind: String,
    pub reason: Option<Reason>,
    pub generator: Option<String>,
    pub partner: Option<String>,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: InputEcho,
    pub normalization: Normalization,
    pub m: i64,
    pub p: Option<i64>,
    pub leveled: Leveled,
    pub instance: Option<Instance>,
    pub verdict: VerdictReport,
    pub budget: Budget,
    pub wall_time_ms: u64,
    pub exit_code: i32,
}

pub fn exit_code(v: &Verdict) -> i32 {
    if v.is_decided() {
        0
    } else {
        2
    }
}

impl AnalysisReport {
    pub fn new(
        pres: &SurfacePresentation,
        pair: &CompatiblePair,
        d: &Decision,
        budget: Budget,
        wall_time_ms: u64,
    ) -> Self {
        let a = &d.analysis;
        let instance = a.instance.as_ref().map(|inst| Instance {
            generators: inst
                .generators
                .iter()
                .map(|g| InstanceGenerator {
                    name: g.name.clone(),
                    role: format!("{:?}", g.role),
                    expansion: a.basis_change.to_original.apply(&g.expansion).to_string(),
                })
                .collect(),
            relator: inst.relator_string(),
        });
        let verdict = match &d.verdict {
            Verdict::NonExceptional(r) => VerdictReport {
                kind: d.verdict.label().into(),
                reason: Some(*r),
                generator: None,
                partner: None,
                certificate: None,
            },
            Verdict::Exceptional { generator, partner, certificate } => VerdictReport {
                kind: d.verdict.label().into(),
                reason: None,
                generator: Some(generator.to_string()),
                partner: Some(partner.to_string()),
                certificate: Some(certificate.clone()),
            },
            Verdict::Inconclusive => VerdictReport {
                kind: d.verdict.label().into(),
                reason: None,
                generator: None,
                partner: None,
                certificate: None,
            },
        };
        AnalysisReport {
            input: InputEcho {
                genus: pres.genus(),
                relator: pres.relator().to_string(),
                magnus1: pair.m1().to_string(),
                magnus2: pair.m2().to_string(),
            },
            normalization: Normalization {
                steps: a.basis_change.to_normalized.to_string(),
                relator: a.basis_change.relator.to_string(),
            },
            m: a.m(),
            p: a.p(),
            leveled: Leveled {
                first_raw: dump_tokens(&a.first.raw),
                first_anchor: a.first.anchor,
                first_rewritten: dump_tokens(&a.first.rewritten),
                second_rewritten: a.second.as_ref().map(|s| dump_tokens(&s.rewritten)),
            },
            instance,
            verdict,
            budget,
            wall_time_ms,
            exit_code: exit_code(&d.verdict),
        }
    }

    pub fn human(&self, leveled: bool) -> String {
        let mut out = Vec::new();
        out.push(format!("genus {}  relator {}", self.input.genus, self.input.relator));
        out.push(format!("pair {} / {}", self.input.magnus1, self.input.magnus2));
        out.push(format!("normalization {}  ->  {}", self.normalization.steps, self.normalization.relator));
        out.push(format!("m = {}", self.m));
        out.push(format!("p = {}", self.p.map_or("-".into(), |p| p.to_string())));
        if leveled {
            out.push(format!("first raw (anchor {}): {}", self.leveled.first_anchor, self.leveled.first_raw));
            out.push(format!("first rewritten: {}", self.leveled.first_rewritten));
            if let Some(s) = &self.leveled.second_rewritten {
                out.push(format!("second rewritten: {s}"));
            }
        }
        if let Some(inst) = &self.instance {
            out.push("instance:".into());
            for g in &inst.generators {
                out.push(format!("  {:<12} {:<3} = {}", g.name, g.role, g.expansion));
            }
            out.push(format!("  relator {}", inst.relator));
        }
        let v = &self.verdict;
        let detail = match (&v.reason, &v.generator) {
            (Some(Reason::M(m)), _) => format!(" (m = {m})"),
            (Some(Reason::P(p)), _) => format!(" (p = {p})"),
            (None, Some(g)) => format!(" generator {g} = {} in G", v.partner.as_deref().unwrap_or("?")),
            _ => String::new(),
        };
        out.push(format!("verdict: {}{detail}", v.kind));
        if let Some(c) = &v.certificate {
            out.push(format!("certificate ({} factors):", c.len()));
            for f in &c.factors {
                out.push(format!("  ({}) R^{} ({})^-1", f.conjugator, f.exp, f.conjugator));
            }
        }
        out.push(format!("time {} ms", self.wall_time_ms));
        out.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use magnus_core::endgame::decide_exceptional;
    use magnus_core::{Word, SurfacePresentation};

    #[test]
    fn reports_round_trip() {
        let r: Word = "b1 a2 b1 a2^-1 b2".parse().unwrap();
        let pres = SurfacePresentation::new(2, r).unwrap();
        let pair = CompatiblePair::new(2, 1, 2).unwrap();
        let budget = Budget::default();
        let d = decide_exceptional(&pres, &pair, &budget).unwrap();
        let rep = AnalysisReport::new(&pres, &pair, &d, budget, 5);
        let text = serde_json::to_string(&rep).unwrap();
        assert_eq!(serde_json::from_str::<AnalysisReport>(&text).unwrap(), rep);
        assert_eq!(rep.exit_code, 0);
        assert!(rep.human(true).contains("verdict: non-exceptional (m = 1)"));
    }
}

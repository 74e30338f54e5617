use serde::{Deserialize, Serialize};

/// Limits for every bounded search in the crate.
///
/// All searches enumerate deterministically, so two runs with the same
/// budget give identical answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Longest candidate word (or pair of words, summed) tried by samplers.
    pub max_candidate_len: usize,
    /// Longest conjugator allowed in a certificate factor.
    pub max_conjugator_len: usize,
    /// Most relator conjugates in one certificate.
    pub max_conjugates: usize,
    /// Search nodes expanded per single consequence search.
    pub max_states: usize,
    /// Candidates handed to the consequence search per sampler call.
    pub max_candidates: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_candidate_len: 12,
            max_conjugator_len: 8,
            max_conjugates: 6,
            max_states: 400,
            max_candidates: 200,
        }
    }
}

impl Budget {
    pub const ENV_VAR: &'static str = "MAGNUS_BUDGET";

    pub fn zero() -> Self {
        Budget {
            max_candidate_len: 0,
            max_conjugator_len: 0,
            max_conjugates: 0,
            max_states: 0,
            max_candidates: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.max_conjugates == 0 || self.max_states == 0
    }

    /// Multiplies the counting limits by `factor`; lengths are kept.
    /// `scaled(0)` is the zero budget.
    pub fn scaled(&self, factor: usize) -> Self {
        if factor == 0 {
            return Budget::zero();
        }
        Budget {
            max_states: self.max_states * factor,
            max_candidates: self.max_candidates * factor,
            max_conjugates: self.max_conjugates * factor,
            ..*self
        }
    }

    /// Parses either a scale factor (`0`, `1`, `3`) or a comma list such as
    /// `len=10,conj=6,count=4,states=500,candidates=100`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Ok(n) = s.parse::<usize>() {
            return Ok(Budget::default().scaled(n));
        }
        let mut b = Budget::default();
        for part in s.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
            let v: usize = v.trim().parse().map_err(|_| format!("bad number in {part:?}"))?;
            match k.trim() {
                "len" => b.max_candidate_len = v,
                "conj" => b.max_conjugator_len = v,
                "count" => b.max_conjugates = v,
                "states" => b.max_states = v,
                "candidates" => b.max_candidates = v,
                other => return Err(format!("unknown budget key {other:?}")),
            }
        }
        Ok(b)
    }
}

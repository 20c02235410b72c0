//! Verdicts and per-suite tallies produced by the verification runs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ktypes::KType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    /// Both sides are the same pole or indeterminate form.
    #[serde(rename = "PASS-flagged")]
    PassFlagged,
    #[serde(rename = "FAIL")]
    Fail,
    /// The target has `λ(T*T) = 0`.
    #[serde(rename = "SKIPPED-DEGENERATE")]
    SkippedDegenerate,
    /// A block coefficient has no value, even as a limit.
    #[serde(rename = "SKIPPED-SINGULAR")]
    SkippedSingular,
    /// A ratio needed to state the relation is not finite.
    #[serde(rename = "SKIPPED-POLE")]
    SkippedPole,
}

impl Verdict {
    pub const ALL: [Verdict; 6] = [
        Verdict::Pass,
        Verdict::PassFlagged,
        Verdict::Fail,
        Verdict::SkippedDegenerate,
        Verdict::SkippedSingular,
        Verdict::SkippedPole,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::PassFlagged => "PASS-flagged",
            Verdict::Fail => "FAIL",
            Verdict::SkippedDegenerate => "SKIPPED-DEGENERATE",
            Verdict::SkippedSingular => "SKIPPED-SINGULAR",
            Verdict::SkippedPole => "SKIPPED-POLE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One compared quantity on one transition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    /// Both sides or the exact residual, as text.
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) -> Check {
        Check { name: name.into(), verdict, detail: detail.into() }
    }
}

/// All checks made on one edge (or one center for pointwise suites).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub case: String,
    pub r: String,
    pub from: KType,
    pub to: Option<KType>,
    pub direction: Option<String>,
    /// Evaluated as a limit along `f` through a removable singularity.
    pub via_limit: bool,
    pub checks: Vec<Check>,
}

impl TransitionReport {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }
}

impl fmt::Display for TransitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] r={} {}", self.case, self.r, self.from)?;
        if let Some(to) = &self.to {
            write!(f, " -> {to}")?;
        }
        if let Some(d) = &self.direction {
            write!(f, " ({d})")?;
        }
        for c in &self.checks {
            write!(f, "; {}: {} {}", c.name, c.verdict, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub pass_flagged: usize,
    pub fail: usize,
    pub skipped_degenerate: usize,
    pub skipped_singular: usize,
    pub skipped_pole: usize,
}

impl Counts {
    pub fn add(&mut self, v: Verdict) {
        *match v {
            Verdict::Pass => &mut self.pass,
            Verdict::PassFlagged => &mut self.pass_flagged,
            Verdict::Fail => &mut self.fail,
            Verdict::SkippedDegenerate => &mut self.skipped_degenerate,
            Verdict::SkippedSingular => &mut self.skipped_singular,
            Verdict::SkippedPole => &mut self.skipped_pole,
        } += 1;
    }

    pub fn get(&self, v: Verdict) -> usize {
        match v {
            Verdict::Pass => self.pass,
            Verdict::PassFlagged => self.pass_flagged,
            Verdict::Fail => self.fail,
            Verdict::SkippedDegenerate => self.skipped_degenerate,
            Verdict::SkippedSingular => self.skipped_singular,
            Verdict::SkippedPole => self.skipped_pole,
        }
    }

    pub fn total(&self) -> usize {
        Verdict::ALL.iter().map(|v| self.get(*v)).sum()
    }

    pub fn merge(&mut self, other: &Counts) {
        for v in Verdict::ALL {
            for _ in 0..other.get(v) {
                self.add(v);
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub counts: Counts,
    /// Transitions evaluated through a limit along `f`.
    pub limit_edges: usize,
    pub notes: Vec<String>,
    pub transitions: Vec<TransitionReport>,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>) -> SuiteReport {
        SuiteReport { name: name.into(), ..Default::default() }
    }

    pub fn push(&mut self, t: TransitionReport) {
        for c in &t.checks {
            self.counts.add(c.verdict);
        }
        if t.via_limit {
            self.limit_edges += 1;
        }
        self.transitions.push(t);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.counts.fail == 0
    }

    pub fn first_failure(&self) -> Option<&TransitionReport> {
        self.transitions.iter().find(|t| t.failed())
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.counts.merge(&other.counts);
        self.limit_edges += other.limit_edges;
        self.notes.extend(other.notes);
        self.transitions.extend(other.transitions);
    }

    pub fn summary(&self) -> String {
        let mut parts = vec![format!("{}: {} checks", self.name, self.counts.total())];
        for v in Verdict::ALL {
            let c = self.counts.get(v);
            if c > 0 {
                parts.push(format!("{v} {c}"));
            }
        }
        if self.limit_edges > 0 {
            parts.push(format!("via limit {}", self.limit_edges));
        }
        parts.join(", ")
    }
}

//! The uniform result type of every checker.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cylinder::Cylinder;
use crate::group::Point;

/// Interpretation choices a checker may surface in its report.
pub mod decisions {
    pub const ETA_PLUS_ONE: &str =
        "the '⊕ 1' on the right of the η identity is integer addition η(Bω) + 1";
    pub const ETA_CHANGE_OF_VARIABLES: &str =
        "the translate-sum of η_S is compared with η_BS evaluated at Bω (equivalently at I(ω))";
    pub const INVARIANT_UNDER_INVERSE_DILATION: &str =
        "'invariant under B^-1' is read as B^-1 S ⊆ S; equality is reported separately";
    pub const INVERSE_DILATION_BRANCHES: &str =
        "the blocked-set transition is B^-1(ω_[l] ⊕ ω), the p branches of the inverse dilation";
    pub const CONSISTENCY_NECESSARY_ONLY: &str =
        "the consistency equation is checked as a necessary condition only";
    pub const THETA_NEIGHBORHOOD: &str =
        "lim 1_S(B^-k ω) = 1 a.e. is decided by covering a θ-neighborhood up to null sets";
    pub const MULTIWAVELET_COUNT: &str =
        "multiwavelet families are expected to have p - 1 members";
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// No violation found; the part left unexamined has at most this measure.
    PassCertified { uncovered: BigRational },
    Fail,
    Undecided { depth: u32 },
}

impl Status {
    fn rank(&self) -> u8 {
        match self {
            Status::Fail => 0,
            Status::Undecided { .. } => 1,
            Status::PassCertified { .. } => 2,
            Status::Pass => 3,
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Status::Pass | Status::PassCertified { .. })
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Status::Fail)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::PassCertified { .. } => "pass-certified",
            Status::Fail => "fail",
            Status::Undecided { .. } => "undecided",
        }
    }

    /// The weaker of two statuses; certified bounds add up.
    pub fn meet(&self, other: &Status) -> Status {
        match (self, other) {
            (Status::PassCertified { uncovered: a }, Status::PassCertified { uncovered: b }) => {
                Status::PassCertified {
                    uncovered: a + b,
                }
            }
            (Status::Undecided { depth: a }, Status::Undecided { depth: b }) => Status::Undecided {
                depth: (*a).min(*b),
            },
            _ if self.rank() <= other.rank() => self.clone(),
            _ => other.clone(),
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => f.write_str("PASS"),
            Status::PassCertified { uncovered } => {
                write!(f, "PASS (certified, uncovered <= {})", fmt_rational(uncovered))
            }
            Status::Fail => f.write_str("FAIL"),
            Status::Undecided { depth } => write!(f, "UNDECIDED at depth {depth}"),
        }
    }
}

/// Concrete evidence for a failure.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Witness {
    pub description: String,
    pub cylinders: Vec<Cylinder>,
    pub points: Vec<Point>,
    pub measure: Option<BigRational>,
}

impl Witness {
    pub fn new(description: impl Into<String>) -> Self {
        Witness {
            description: description.into(),
            ..Witness::default()
        }
    }

    pub fn with_cylinders(mut self, cylinders: impl IntoIterator<Item = Cylinder>) -> Self {
        self.cylinders.extend(cylinders);
        self
    }

    pub fn with_points(mut self, points: impl IntoIterator<Item = Point>) -> Self {
        self.points.extend(points);
        self
    }

    pub fn with_measure(mut self, m: BigRational) -> Self {
        self.measure = Some(m);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "description": self.description,
            "cylinders": self.cylinders.iter().map(cylinder_json).collect::<Vec<_>>(),
            "points": self.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        });
        if let Some(m) = &self.measure {
            v["measure"] = json!(fmt_rational(m));
        }
        v
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description)?;
        if !self.cylinders.is_empty() {
            let cells: Vec<String> = self.cylinders.iter().map(|c| c.to_string()).collect();
            write!(f, " [cylinders: {}]", cells.join(", "))?;
        }
        if !self.points.is_empty() {
            let pts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
            write!(f, " [points: {}]", pts.join(", "))?;
        }
        if let Some(m) = &self.measure {
            write!(f, " [measure {}]", fmt_rational(m))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub name: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub conditions: Vec<Condition>,
    pub measures: BTreeMap<String, BigRational>,
    pub notes: Vec<String>,
    pub decisions: Vec<String>,
}

impl Verdict {
    fn with_status(status: Status) -> Self {
        Verdict {
            status,
            witnesses: Vec::new(),
            conditions: Vec::new(),
            measures: BTreeMap::new(),
            notes: Vec::new(),
            decisions: Vec::new(),
        }
    }

    pub fn pass() -> Self {
        Verdict::with_status(Status::Pass)
    }

    /// `Pass` when `uncovered` is zero.
    pub fn certified(uncovered: BigRational) -> Self {
        if uncovered.is_zero() {
            Verdict::pass()
        } else {
            Verdict::with_status(Status::PassCertified { uncovered })
        }
    }

    pub fn fail(witness: Witness) -> Self {
        let mut v = Verdict::with_status(Status::Fail);
        v.witnesses.push(witness);
        v
    }

    pub fn undecided(depth: u32, why: impl Into<String>) -> Self {
        let mut v = Verdict::with_status(Status::Undecided { depth });
        v.notes.push(why.into());
        v
    }

    /// Conjunction of named sub-verdicts.
    pub fn all(conditions: Vec<(String, Verdict)>) -> Self {
        let mut status = Status::Pass;
        let mut decisions = Vec::new();
        for (_, v) in &conditions {
            status = status.meet(&v.status);
            for d in &v.decisions {
                if !decisions.contains(d) {
                    decisions.push(d.clone());
                }
            }
        }
        let mut v = Verdict::with_status(status);
        v.decisions = decisions;
        v.conditions = conditions
            .into_iter()
            .map(|(name, verdict)| Condition { name, verdict })
            .collect();
        v
    }

    pub fn with_measure(mut self, key: &str, value: BigRational) -> Self {
        self.measures.insert(key.to_string(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_decision(mut self, decision: &str) -> Self {
        if !self.decisions.iter().any(|d| d == decision) {
            self.decisions.push(decision.to_string());
        }
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status.is_pass()
    }

    pub fn is_fail(&self) -> bool {
        self.status.is_fail()
    }

    pub fn condition(&self, name: &str) -> Option<&Verdict> {
        self.conditions
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.verdict)
    }

    /// All witnesses, including those of sub-conditions.
    pub fn all_witnesses(&self) -> Vec<&Witness> {
        let mut out: Vec<&Witness> = self.witnesses.iter().collect();
        for c in &self.conditions {
            out.extend(c.verdict.all_witnesses());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "status": self.status.tag(),
            "conditions": self.conditions.iter().map(|c| {
                let mut inner = c.verdict.to_json();
                inner["name"] = json!(c.name);
                inner
            }).collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(Witness::to_json).collect::<Vec<_>>(),
            "measures": self.measures.iter()
                .map(|(k, m)| (k.clone(), json!(fmt_rational(m))))
                .collect::<serde_json::Map<_, _>>(),
            "notes": self.notes,
            "decisions": self.decisions,
        });
        match &self.status {
            Status::PassCertified { uncovered } => v["uncovered"] = json!(fmt_rational(uncovered)),
            Status::Undecided { depth } => v["undecided_depth"] = json!(depth),
            _ => {}
        }
        v
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        for (k, m) in &self.measures {
            writeln!(f, "{pad}{k} = {}", fmt_rational(m))?;
        }
        for w in &self.witnesses {
            writeln!(f, "{pad}witness: {w}")?;
        }
        for n in &self.notes {
            writeln!(f, "{pad}note: {n}")?;
        }
        for c in &self.conditions {
            writeln!(f, "{pad}{}: {}", c.name, c.verdict.status)?;
            c.verdict.write_indented(f, indent + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.status)?;
        self.write_indented(f, 1)?;
        for d in &self.decisions {
            writeln!(f, "  reading: {d}")?;
        }
        Ok(())
    }
}

/// `num/den`, always with an explicit denominator.
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn cylinder_json(c: &Cylinder) -> Value {
    let (lo, hi) = c.interval();
    json!({
        "token": c.token(),
        "resolution": c.resolution(),
        "lo": fmt_rational(&lo),
        "hi": fmt_rational(&hi),
    })
}

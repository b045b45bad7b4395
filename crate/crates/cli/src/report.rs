use serde_json::{json, Value};
use vilenkin_core::verdict::{fmt_rational, Status, Verdict, Witness};
use vilenkin_core::Prime;

/// Exit codes shared by every command.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_UNDECIDED: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

/// The result of one command, rendered as text or JSON.
pub struct Outcome {
    pub command: String,
    pub prime: Prime,
    pub depth: Option<u32>,
    pub verdict: Verdict,
    pub payload: Value,
    /// Extra text appended to the human-readable report.
    pub text: Option<String>,
    /// Replaces the status-derived exit code.
    pub exit: Option<u8>,
}

impl Outcome {
    pub fn new(command: &str, prime: Prime, depth: Option<u32>, verdict: Verdict) -> Self {
        Outcome {
            command: command.to_string(),
            prime,
            depth,
            verdict,
            payload: Value::Null,
            text: None,
            exit: None,
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.exit.unwrap_or(match self.verdict.status {
            Status::Pass | Status::PassCertified { .. } => EXIT_PASS,
            Status::Fail => EXIT_FAIL,
            Status::Undecided { .. } => EXIT_UNDECIDED,
        })
    }

    pub fn to_json(&self) -> Value {
        let inner = self.verdict.to_json();
        let uncovered = match &self.verdict.status {
            Status::PassCertified { uncovered } => json!(fmt_rational(uncovered)),
            _ => Value::Null,
        };
        json!({
            "command": self.command,
            "prime": self.prime.get(),
            "verdict": self.verdict.status.tag(),
            "uncovered": uncovered,
            "conditions": inner["conditions"],
            "witnesses": self
                .verdict
                .all_witnesses()
                .into_iter()
                .map(Witness::to_json)
                .collect::<Vec<_>>(),
            "measures": inner["measures"],
            "depth": self.depth,
            "decisions": self.verdict.decisions,
            "notes": self.verdict.notes,
            "payload": self.payload,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} (p = {}", self.command, self.prime);
        if let Some(d) = self.depth {
            out.push_str(&format!(", depth {d}"));
        }
        out.push_str(&format!("): {}", self.verdict));
        if let Some(t) = &self.text {
            out.push_str(t);
            if !t.ends_with('\n') {
                out.push('\n');
            }
        }
        out
    }
}

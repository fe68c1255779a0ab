//! Pass/fail reports with named witnesses.

use serde::Serialize;
use std::fmt;

/// One axiom violation, naming the law and the basis data witnessing it.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Failure {
    /// The law that failed, e.g. `"associativity"`, `"(Rep.1)"`, `"(Mod.2)"`.
    pub axiom: String,
    /// The objects / basis elements / degrees exhibiting the failure.
    pub witness: String,
}

/// Outcome of a check: empty failure list means pass.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub subject: String,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fail(&mut self, axiom: impl Into<String>, witness: impl Into<String>) {
        self.failures.push(Failure {
            axiom: axiom.into(),
            witness: witness.into(),
        });
    }

    /// Fold another report's failures into this one, prefixing witnesses.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for f in other.failures {
            self.failures.push(Failure {
                axiom: f.axiom,
                witness: if prefix.is_empty() {
                    f.witness
                } else {
                    format!("{}: {}", prefix, f.witness)
                },
            });
        }
    }

    /// Keep reports deterministic regardless of the order checks ran in.
    pub fn sort(&mut self) {
        self.failures
            .sort_by(|a, b| (&a.axiom, &a.witness).cmp(&(&b.axiom, &b.witness)));
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            writeln!(f, "PASS {}", self.subject)
        } else {
            writeln!(
                f,
                "FAIL {} ({} failure(s))",
                self.subject,
                self.failures.len()
            )?;
            for fail in &self.failures {
                writeln!(f, "  {} @ {}", fail.axiom, fail.witness)?;
            }
            Ok(())
        }
    }
}

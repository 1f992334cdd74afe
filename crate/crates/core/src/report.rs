//! Named check results and machine-readable reports.
//!
//! Every verification routine returns a list of [`Check`]s; a failed check
//! carries a human-readable witness (the offending basis indices and the
//! nonzero residue).  The CLI prints them as a table or serialises the whole
//! report as JSON.

use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), ok: true, witness: None }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { name: name.into(), ok: false, witness: Some(witness.into()) }
    }

    pub fn of(name: impl Into<String>, result: Result<(), String>) -> Self {
        match result {
            Ok(()) => Check::pass(name),
            Err(w) => Check::fail(name, w),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: Vec<Check>) {
        self.checks.extend(checks);
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.ok)
    }

    /// Panics with the first failing check; used by tests that require a
    /// fully verified structure before proceeding.
    pub fn expect_ok(&self, context: &str) {
        if let Some(c) = self.first_failure() {
            panic!(
                "{context}: check '{}' failed{}",
                c.name,
                c.witness.as_deref().map(|w| format!(": {w}")).unwrap_or_default()
            );
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "[{}] {}{}",
                if c.ok { "ok" } else { "FAIL" },
                c.name,
                c.witness.as_deref().map(|w| format!(" — {w}")).unwrap_or_default()
            )?;
        }
        Ok(())
    }
}

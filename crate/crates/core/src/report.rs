//! Check reports shared by every verifier in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Tolerance for construction-time identities.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tolerance for round trips that pass through two extra conjugations.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

/// Outcome of one check, possibly aggregating sub-checks.
///
/// `passed` is always `residual <= tolerance && subs.iter().all(passed)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subs: Vec<CheckReport>,
}

impl CheckReport {
    pub fn leaf(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        CheckReport {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            subs: Vec::new(),
        }
    }

    /// Aggregate: the residual is the largest sub-residual (0 when empty).
    pub fn group(name: impl Into<String>, tolerance: f64, subs: Vec<CheckReport>) -> Self {
        let residual = subs.iter().map(|s| s.residual).fold(0.0, f64::max);
        let passed = residual <= tolerance && subs.iter().all(|s| s.passed);
        CheckReport {
            name: name.into(),
            residual,
            tolerance,
            passed,
            subs,
        }
    }

    /// A check that cannot be expressed as a residual (e.g. a dimension count).
    pub fn flag(name: impl Into<String>, ok: bool, tolerance: f64) -> Self {
        CheckReport::leaf(name, if ok { 0.0 } else { f64::INFINITY }, tolerance)
    }

    pub fn push(&mut self, sub: CheckReport) {
        self.residual = self.residual.max(sub.residual);
        self.subs.push(sub);
        self.passed = self.residual <= self.tolerance && self.subs.iter().all(|s| s.passed);
    }

    pub fn find(&self, name: &str) -> Option<&CheckReport> {
        if self.name == name {
            return Some(self);
        }
        self.subs.iter().find_map(|s| s.find(name))
    }

    /// Recursively orders sub-reports by name.
    pub fn sorted(mut self) -> Self {
        self.subs = self.subs.into_iter().map(CheckReport::sorted).collect();
        self.subs.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }

    /// `Ok(self)` when passed, otherwise `Err(Error::CheckFailed)`.
    pub fn into_result(self) -> crate::Result<Self> {
        if self.passed {
            Ok(self)
        } else {
            Err(crate::Error::failed(self))
        }
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(
            f,
            "{:indent$}[{}] {}: residual {:.3e} (tol {:.1e})",
            "",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance,
            indent = depth * 2
        )?;
        for sub in &self.subs {
            sub.write_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_fails_if_any_sub_fails() {
        let r = CheckReport::group(
            "g",
            1.0,
            vec![CheckReport::leaf("a", 0.0, 1.0), CheckReport::leaf("b", 0.5, 0.1)],
        );
        assert!(!r.passed);
        assert_eq!(r.residual, 0.5);
    }

    #[test]
    fn empty_group_passes() {
        assert!(CheckReport::group("g", 0.0, vec![]).passed);
    }

    #[test]
    fn sorted_orders_by_name() {
        let r = CheckReport::group(
            "g",
            1.0,
            vec![CheckReport::leaf("b", 0.0, 1.0), CheckReport::leaf("a", 0.0, 1.0)],
        )
        .sorted();
        assert_eq!(r.subs[0].name, "a");
    }
}

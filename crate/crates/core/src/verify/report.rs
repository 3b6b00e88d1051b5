use std::fmt;

use serde::Serialize;

/// How `lhs` must compare with `rhs` for a check to pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|lhs - rhs| <= tol`.
    Eq,
    /// `lhs <= rhs + tol`.
    Le,
    /// `lhs >= rhs - tol`.
    Ge,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub name: String,
    pub lhs: f64,
    /// `None` when the bound is outside its domain; such checks pass vacuously.
    pub rhs: Option<f64>,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn compare(
        suite: &str,
        name: impl Into<String>,
        lhs: f64,
        relation: Relation,
        rhs: Option<f64>,
        tolerance: f64,
    ) -> Self {
        let pass = match rhs {
            None => lhs.is_finite(),
            Some(rhs) => match relation {
                Relation::Eq => (lhs - rhs).abs() <= tolerance,
                Relation::Le => lhs <= rhs + tolerance,
                Relation::Ge => lhs >= rhs - tolerance,
            },
        };
        CheckReport {
            suite: suite.to_owned(),
            name: name.into(),
            lhs,
            rhs,
            relation,
            tolerance,
            pass,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {}/{} {:.15e} {} ",
            self.suite,
            self.name,
            self.lhs,
            self.relation.symbol()
        )?;
        match self.rhs {
            Some(rhs) => write!(f, "{rhs:.15e}"),
            None => write!(f, "(bound out of domain)"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub checks: Vec<CheckReport>,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn new(checks: Vec<CheckReport>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        let failed = checks.len() - passed;
        Summary {
            checks,
            passed,
            failed,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        assert!(CheckReport::compare("s", "a", 1.0, Relation::Eq, Some(1.0 + 1e-13), 1e-12).pass);
        assert!(!CheckReport::compare("s", "a", 1.0, Relation::Le, Some(0.5), 1e-12).pass);
        assert!(CheckReport::compare("s", "a", 1.0, Relation::Ge, Some(0.5), 0.0).pass);
        assert!(CheckReport::compare("s", "a", 1.0, Relation::Le, None, 0.0).pass);
    }

    #[test]
    fn line_and_json() {
        let c = CheckReport::compare("demo", "x", 0.25, Relation::Le, Some(0.5), 0.0);
        assert!(c.to_string().starts_with("PASS demo/x 2.5"));
        let s = Summary::new(vec![c]);
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["passed"], 1);
        assert_eq!(v["checks"][0]["relation"], "le");
        assert_eq!(v["checks"][0]["rhs"], 0.5);
    }
}

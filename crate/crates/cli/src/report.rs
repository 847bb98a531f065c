//! Line-oriented `key=value` run reports. Keys appear in insertion order.

use std::fmt;
use std::time::Duration;

use abscomp::Tolerances;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    entries: Vec<(String, String)>,
}

impl RunReport {
    pub fn new(command: &str, pol: &Tolerances) -> Self {
        let mut r = Self::default();
        r.push("command", command);
        r.push("eig_tol", sci(pol.eig_tol));
        r.push("eq_tol", sci(pol.eq_tol));
        r.push("rank_tol", sci(pol.rank_tol));
        r
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) -> &mut Self {
        let value = value.to_string().replace('\n', " ");
        self.entries.push((key.into(), value));
        self
    }

    pub fn num(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.push(key, sci(value))
    }

    pub fn flag(&mut self, key: impl Into<String>, value: bool) -> &mut Self {
        self.push(key, value)
    }

    pub fn elapsed(&mut self, d: Duration) -> &mut Self {
        self.push("elapsed_ms", format!("{:.3}", d.as_secs_f64() * 1e3))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}

pub fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

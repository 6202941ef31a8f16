//! Structured pass/fail reports shared by every verification routine.

use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// Passes when `value >= threshold`.
    Ge,
    /// Passes when `value <= threshold`.
    Le,
    /// Boolean sub-check; `value` is 1 or 0 and `threshold` is 1.
    Flag,
}

/// Where a check attains its extreme value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Z {
        re: f64,
        im: f64,
    },
    ZEps {
        z_re: f64,
        z_im: f64,
        eps_re: f64,
        eps_im: f64,
    },
    T {
        t: f64,
    },
    Interval {
        lo: f64,
        hi: f64,
    },
    Text {
        detail: String,
    },
}

impl Witness {
    pub fn z(z: Complex64) -> Self {
        Witness::Z { re: z.re, im: z.im }
    }

    pub fn z_eps(z: Complex64, eps: Complex64) -> Self {
        Witness::ZEps {
            z_re: z.re,
            z_im: z.im,
            eps_re: eps.re,
            eps_im: eps.im,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub relation: Relation,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn ge(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::build(name, value, threshold, Relation::Ge, value >= threshold)
    }

    pub fn le(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::build(name, value, threshold, Relation::Le, value <= threshold)
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::build(name, if ok { 1.0 } else { 0.0 }, 1.0, Relation::Flag, ok)
    }

    fn build(
        name: impl Into<String>,
        value: f64,
        threshold: f64,
        relation: Relation,
        pass: bool,
    ) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            relation,
            pass,
            witness: None,
        }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }
}

/// `pass` is the conjunction of all checks (true for an empty report).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub pass: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Default for Report {
    fn default() -> Self {
        Self::new()
    }
}

impl Report {
    pub fn new() -> Self {
        Self {
            pass: true,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Appends every check and note of `other`, prefixing check names.
    pub fn merge(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.push(c);
        }
        self.notes.extend(other.notes);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

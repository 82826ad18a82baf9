//! Structured experiment output: named integer measures checked against
//! expected values, rendered as a text table or JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    Equal {
        value: u64,
    },
    AtMost {
        value: u64,
    },
    Range {
        low: u64,
        high: u64,
    },
    /// Observed for information only; always passes.
    Recorded,
}

impl Expectation {
    pub fn admits(&self, observed: u64) -> bool {
        match *self {
            Expectation::Equal { value } => observed == value,
            Expectation::AtMost { value } => observed <= value,
            Expectation::Range { low, high } => (low..=high).contains(&observed),
            Expectation::Recorded => true,
        }
    }

    fn describe(&self) -> String {
        match *self {
            Expectation::Equal { value } => format!("= {value}"),
            Expectation::AtMost { value } => format!("<= {value}"),
            Expectation::Range { low, high } => format!("in [{low}, {high}]"),
            Expectation::Recorded => "-".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measure {
    pub name: String,
    pub observed: u64,
    pub expected: Expectation,
    pub pass: bool,
}

impl Measure {
    pub fn new(name: impl Into<String>, observed: u64, expected: Expectation) -> Self {
        Measure {
            name: name.into(),
            observed,
            expected,
            pass: expected.admits(observed),
        }
    }

    pub fn equal(name: impl Into<String>, observed: u64, value: u64) -> Self {
        Self::new(name, observed, Expectation::Equal { value })
    }

    pub fn recorded(name: impl Into<String>, observed: u64) -> Self {
        Self::new(name, observed, Expectation::Recorded)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trials: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub parameters: Parameters,
    pub measures: Vec<Measure>,
    /// Free-form lines that do not fit an integer measure.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub details: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(experiment: impl Into<String>, parameters: Parameters, measures: Vec<Measure>) -> Self {
        let pass = measures.iter().all(|m| m.pass);
        Report {
            experiment: experiment.into(),
            parameters,
            measures,
            details: Vec::new(),
            pass,
        }
    }

    pub fn with_details(mut self, details: Vec<String>) -> Self {
        self.details = details;
        self
    }

    pub fn measure(&self, name: &str) -> Option<&Measure> {
        self.measures.iter().find(|m| m.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "experiment: {}", self.experiment).unwrap();
        let p = &self.parameters;
        let mut params = Vec::new();
        if let Some(m) = p.m {
            params.push(format!("m={m}"));
        }
        if let Some(n) = p.n {
            params.push(format!("n={n}"));
        }
        if let Some(f) = &p.family {
            params.push(format!("family={f}"));
        }
        if let Some(s) = p.seed {
            params.push(format!("seed={s}"));
        }
        if let Some(t) = p.trials {
            params.push(format!("trials={t}"));
        }
        if !params.is_empty() {
            writeln!(out, "parameters: {}", params.join(" ")).unwrap();
        }

        let rows: Vec<[String; 4]> = self
            .measures
            .iter()
            .map(|m| {
                [
                    m.name.clone(),
                    m.observed.to_string(),
                    m.expected.describe(),
                    if m.pass { "ok" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        let header = ["measure", "observed", "expected", "pass"].map(String::from);
        let mut widths = header.clone().map(|h| h.len());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        for row in std::iter::once(&header).chain(&rows) {
            let line = format!(
                "{:<w0$}  {:>w1$}  {:<w2$}  {}",
                row[0],
                row[1],
                row[2],
                row[3],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2],
            );
            writeln!(out, "{}", line.trim_end()).unwrap();
        }
        for d in &self.details {
            writeln!(out, "{d}").unwrap();
        }
        writeln!(out, "result: {}", if self.pass { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

//! Text and JSON reports for decisions, generated points and enumerations.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arith::{PrimeSet, Rat};
use crate::curve::{AffinePoint, CurveInput};
use crate::decider::{decide, Decision, Generator, Verdict};
use crate::engine::{enumerate_points, generate_points};
use crate::error::Error;

/// An exact rational as [numerator, denominator] decimal strings.
pub type RatJson = [String; 2];

fn rat_json(r: &Rat) -> RatJson {
    r.to_pair_strings()
}

fn point_json(p: &AffinePoint) -> Vec<RatJson> {
    p.coords.iter().map(rat_json).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GeneratorJson {
    Integers {
        step: String,
    },
    SUnitPower {
        p: String,
        step: String,
    },
    /// gamma = a + b sqrt(D)
    NormOnePower {
        gamma: [RatJson; 2],
        step: String,
    },
}

impl From<&Generator> for GeneratorJson {
    fn from(g: &Generator) -> Self {
        match g {
            Generator::Integers { step } => GeneratorJson::Integers {
                step: step.to_string(),
            },
            Generator::SUnitPower { p, step } => GeneratorJson::SUnitPower {
                p: p.to_string(),
                step: step.to_string(),
            },
            Generator::NormOnePower { gamma, step } => GeneratorJson::NormOnePower {
                gamma: [rat_json(gamma.a()), rat_json(gamma.b())],
                step: step.to_string(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub verdict: String,
    pub reason: String,
    pub case: Option<String>,
    #[serde(rename = "D")]
    pub d: Option<String>,
    #[serde(rename = "N")]
    pub n: Option<String>,
    pub generator: Option<GeneratorJson>,
    pub assumptions: Vec<String>,
    pub points: Vec<Vec<RatJson>>,
    #[serde(skip)]
    text_details: Vec<String>,
    #[serde(skip)]
    text_points: Vec<String>,
    #[serde(skip)]
    exit_code: i32,
}

impl Report {
    pub fn from_decision(d: &Decision, points: &[AffinePoint]) -> Self {
        let mut r = Report {
            verdict: d.verdict.name().to_string(),
            reason: d.reason.clone(),
            case: None,
            d: None,
            n: None,
            generator: None,
            assumptions: d.assumptions.clone(),
            points: points.iter().map(point_json).collect(),
            text_details: Vec::new(),
            text_points: points.iter().map(ToString::to_string).collect(),
            exit_code: d.verdict.exit_code(),
        };
        if let Verdict::Infinite(w) = &d.verdict {
            r.case = Some(w.case.to_string());
            r.d = w.d.map(|d| d.to_string());
            r.n = Some(w.n.to_string());
            r.generator = Some((&w.generator).into());
            r.text_details.push(format!("base point: {}", w.base_point));
            for (i, f) in w.fs.iter().enumerate() {
                r.text_details.push(format!("F{}(U) = {f}", i + 1));
            }
            r.text_details.push(format!("generator: {}", w.generator));
        }
        r
    }

    /// A report for input that could not be processed.
    pub fn error(e: &Error) -> Self {
        Report::from_decision(
            &Decision {
                verdict: Verdict::Error(e.to_string()),
                reason: e.to_string(),
                assumptions: Vec::new(),
            },
            &[],
        )
    }

    pub fn exit_code(&self) -> i32 {
        self.exit_code
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict: {}", self.verdict);
        let _ = writeln!(out, "reason: {}", self.reason);
        if let Some(c) = &self.case {
            let _ = writeln!(out, "case: {c}");
        }
        if let Some(d) = &self.d {
            let _ = writeln!(out, "D: {d}");
        }
        if let Some(n) = &self.n {
            let _ = writeln!(out, "N: {n}");
        }
        for line in &self.text_details {
            let _ = writeln!(out, "{line}");
        }
        if self.assumptions.is_empty() {
            let _ = writeln!(out, "assumptions: none");
        } else {
            let _ = writeln!(out, "assumptions: {}", self.assumptions.join("; "));
        }
        for p in &self.text_points {
            let _ = writeln!(out, "{p}");
        }
        out
    }
}

/// Decide and report.
pub fn decide_report(input: &CurveInput, s: &PrimeSet, bound: u64) -> Report {
    Report::from_decision(&decide(input, s, bound), &[])
}

/// Decide and, when infinite, attach `count` verified points.
pub fn generate_report(input: &CurveInput, s: &PrimeSet, bound: u64, count: usize) -> Report {
    let decision = decide(input, s, bound);
    if let Verdict::Infinite(w) = &decision.verdict {
        match generate_points(w, input, s, count) {
            Ok(points) => Report::from_decision(&decision, &points),
            Err(e) => Report::error(&e),
        }
    } else {
        Report::from_decision(&decision, &[])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub bound: String,
    pub count: String,
    pub points: Vec<Vec<RatJson>>,
    #[serde(skip)]
    text_points: Vec<String>,
}

impl EnumerationReport {
    pub fn new(bound: u64, points: &[AffinePoint]) -> Self {
        EnumerationReport {
            bound: bound.to_string(),
            count: points.len().to_string(),
            points: points.iter().map(point_json).collect(),
            text_points: points.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.text_points {
            let _ = writeln!(out, "{p}");
        }
        let _ = writeln!(out, "count: {}", self.count);
        out
    }
}

pub fn enumerate_report(
    input: &CurveInput,
    s: &PrimeSet,
    bound: u64,
) -> crate::error::Result<EnumerationReport> {
    if bound == 0 {
        return Err(Error::InvalidInput("search bound must be positive".into()));
    }
    Ok(EnumerationReport::new(
        bound,
        &enumerate_points(input, s, bound)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> CurveInput {
        CurveInput::parse_implicit("x^2+y^2-1", false).unwrap()
    }

    #[test]
    fn json_schema() {
        let r = generate_report(&circle(), &PrimeSet::new([5]).unwrap(), 100, 2);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["verdict"], "infinite");
        assert_eq!(v["case"], "I2L");
        assert_eq!(v["D"], "-1");
        assert!(v["N"].is_string());
        assert_eq!(v["generator"]["type"], "norm-one-power");
        assert_eq!(v["generator"]["gamma"][0][1], "5");
        assert_eq!(v["points"].as_array().unwrap().len(), 2);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back.points, r.points);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn finite_json_has_null_witness() {
        let r = decide_report(&circle(), &PrimeSet::empty(), 100);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["verdict"], "finite");
        assert!(v["case"].is_null() && v["N"].is_null() && v["generator"].is_null());
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn text_lists_points() {
        let xy = CurveInput::parse_implicit("x*y-1", false).unwrap();
        let r = generate_report(&xy, &PrimeSet::new([2]).unwrap(), 100, 2);
        let text = r.to_text();
        assert!(text.contains("x = 2, y = 1/2\nx = 4, y = 1/4\n"), "{text}");
        assert!(text.starts_with("verdict: infinite\n"));
    }

    #[test]
    fn enumeration_report() {
        let r = enumerate_report(&circle(), &PrimeSet::empty(), 100).unwrap();
        assert_eq!(r.count, "4");
        assert!(r.to_text().ends_with("count: 4\n"));
    }
}

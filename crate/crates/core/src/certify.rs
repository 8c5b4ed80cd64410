//! Independent verification of critical colorings and the certificate file
//! format.
//!
//! Verification always recounts every color class from scratch; it never
//! takes a reward from the caller.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{emit_matrix, parse_matrix_with_colors, EdgeColoring};
use crate::pattern::{reward, PatternGraph, PatternRegistry, RewardReport};

pub const CERT_HEADER: &str = "RAMSEY-CERT v1";

/// A monochromatic copy of `patterns[color]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub color: u8,
    pub vertices: Vec<usize>,
}

/// `R(G_1, ..., G_m) >= value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub patterns: Vec<String>,
    pub value: usize,
}

impl fmt::Display for LowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R({}) >= {}", self.patterns.join(","), self.value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Critical,
    NotCritical,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Critical => "critical",
            Verdict::NotCritical => "not-critical",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "critical" => Ok(Verdict::Critical),
            "not-critical" => Ok(Verdict::NotCritical),
            other => Err(Error::Parse(format!("unknown verdict `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub coloring: EdgeColoring,
    pub patterns: Vec<PatternGraph>,
    pub counts: RewardReport,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub implied_bound: Option<LowerBound>,
}

impl Certificate {
    pub fn is_critical(&self) -> bool {
        self.verdict == Verdict::Critical
    }

    /// The certificate file: header, `n m`, pattern specs, verdict, implied
    /// bound (or `none`), then the coloring matrix.
    pub fn to_text(&self) -> Result<String> {
        let specs: Vec<String> = self.patterns.iter().map(|p| p.spec()).collect();
        let bound = self
            .implied_bound
            .as_ref()
            .map_or_else(|| "none".to_string(), |b| b.to_string());
        Ok(format!(
            "{CERT_HEADER}\n{} {}\n{}\n{}\n{}\n{}",
            self.coloring.n(),
            self.coloring.m(),
            specs.join(" "),
            self.verdict,
            bound,
            emit_matrix(&self.coloring)?
        ))
    }
}

/// Recounts every color class and builds a certificate. For a non-critical
/// coloring the witness is the first copy found in the lowest offending color.
pub fn verify_critical(c: &EdgeColoring, patterns: &[PatternGraph]) -> Result<Certificate> {
    let counts = reward(c, patterns)?;
    let witness = match counts.per_color.iter().position(|&k| k > 0) {
        None => None,
        Some(color) => {
            let host = c.monochrome_graph(color as u8)?;
            let vertices = patterns[color].find_copy(&host).ok_or_else(|| {
                Error::Pattern(format!(
                    "counter for {} reported copies but found no witness",
                    patterns[color]
                ))
            })?;
            Some(Witness {
                color: color as u8,
                vertices,
            })
        }
    };
    let verdict = if witness.is_none() {
        Verdict::Critical
    } else {
        Verdict::NotCritical
    };
    let implied_bound = (verdict == Verdict::Critical).then(|| LowerBound {
        patterns: patterns.iter().map(|p| p.spec()).collect(),
        value: c.n() + 1,
    });
    Ok(Certificate {
        coloring: c.clone(),
        patterns: patterns.to_vec(),
        counts,
        verdict,
        witness,
        implied_bound,
    })
}

/// Checks that deleting any single vertex leaves a critical coloring.
pub fn deletion_closure_check(cert: &Certificate) -> Result<bool> {
    if !cert.is_critical() {
        return Err(Error::Parameter(
            "deletion closure applies only to critical certificates".into(),
        ));
    }
    let n = cert.coloring.n();
    if n < 2 {
        return Ok(true);
    }
    let verdicts = (0..n)
        .into_par_iter()
        .map(|v| {
            let smaller = cert.coloring.delete_vertex(v)?;
            Ok(verify_critical(&smaller, &cert.patterns)?.is_critical())
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(verdicts.into_iter().all(|ok| ok))
}

/// Published critical colorings bundled with the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixture {
    /// `K_13`, no `W_5` in color 0 and no `W_7` in color 1.
    W5W7,
    /// `K_19`, no `K_{2,5}` in color 0 and no `K_{3,5}` in color 1.
    K25K35,
    /// `K_16`, no `B_3` in color 0 and no `B_6` in color 1.
    B3B6,
    /// `K_17`, no `B_4` in color 0 and no `B_5` in color 1.
    B4B5,
}

impl Fixture {
    pub const ALL: [Fixture; 4] = [Fixture::W5W7, Fixture::K25K35, Fixture::B3B6, Fixture::B4B5];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::W5W7 => "W5W7",
            Fixture::K25K35 => "K25K35",
            Fixture::B3B6 => "B3B6",
            Fixture::B4B5 => "B4B5",
        }
    }

    pub fn matrix_text(self) -> &'static str {
        match self {
            Fixture::W5W7 => include_str!("../fixtures/w5w7.txt"),
            Fixture::K25K35 => include_str!("../fixtures/k25k35.txt"),
            Fixture::B3B6 => include_str!("../fixtures/b3b6.txt"),
            Fixture::B4B5 => include_str!("../fixtures/b4b5.txt"),
        }
    }

    pub fn pattern_specs(self) -> [&'static str; 2] {
        match self {
            Fixture::W5W7 => ["W5", "W7"],
            Fixture::K25K35 => ["K2,5", "K3,5"],
            Fixture::B3B6 => ["B3", "B6"],
            Fixture::B4B5 => ["B4", "B5"],
        }
    }

    pub fn load(self) -> Result<(EdgeColoring, Vec<PatternGraph>)> {
        let coloring = parse_matrix_with_colors(self.matrix_text(), 2)?;
        let patterns = self
            .pattern_specs()
            .iter()
            .map(|s| PatternGraph::parse(s))
            .collect::<Result<_>>()?;
        Ok((coloring, patterns))
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::Parameter(format!(
                    "unknown fixture `{s}` (expected one of W5W7, K25K35, B3B6, B4B5)"
                ))
            })
    }
}

pub fn load_fixture(name: &str) -> Result<(EdgeColoring, Vec<PatternGraph>)> {
    name.parse::<Fixture>()?.load()
}

/// Contents of a certificate file, before re-verification.
#[derive(Clone, Debug)]
pub struct CertificateFile {
    pub coloring: EdgeColoring,
    pub patterns: Vec<PatternGraph>,
    pub recorded_verdict: Verdict,
    pub recorded_bound: Option<String>,
}

pub fn is_certificate_text(text: &str) -> bool {
    text.lines().next().map(str::trim) == Some(CERT_HEADER)
}

pub fn parse_certificate(text: &str, registry: &PatternRegistry) -> Result<CertificateFile> {
    let mut lines = text.lines();
    let mut next = |what: &str| {
        lines
            .next()
            .map(str::trim)
            .ok_or_else(|| Error::Parse(format!("certificate is missing the {what} line")))
    };
    if next("header")? != CERT_HEADER {
        return Err(Error::Parse(format!(
            "certificate must start with `{CERT_HEADER}`"
        )));
    }
    let dims = next("dimensions")?;
    let (n, m) = dims
        .split_once(' ')
        .and_then(|(a, b)| {
            Some((
                a.trim().parse::<usize>().ok()?,
                b.trim().parse::<usize>().ok()?,
            ))
        })
        .ok_or_else(|| Error::Parse(format!("malformed dimensions line `{dims}`")))?;
    let patterns = next("patterns")?
        .split_whitespace()
        .map(|s| registry.parse(s))
        .collect::<Result<Vec<_>>>()?;
    let recorded_verdict: Verdict = next("verdict")?.parse()?;
    let recorded_bound = match next("bound")? {
        "none" => None,
        b => Some(b.to_string()),
    };
    let body: Vec<&str> = lines.collect();
    let coloring = parse_matrix_with_colors(&body.join("\n"), m)?;
    if coloring.n() != n {
        return Err(Error::Parse(format!(
            "certificate declares n = {n} but the matrix has {} rows",
            coloring.n()
        )));
    }
    if patterns.len() != m {
        return Err(Error::Parse(format!(
            "certificate lists {} patterns for {m} colors",
            patterns.len()
        )));
    }
    Ok(CertificateFile {
        coloring,
        patterns,
        recorded_verdict,
        recorded_bound,
    })
}

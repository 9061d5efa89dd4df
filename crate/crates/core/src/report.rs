//! Verdict records shared by the checkers, the scanner and the CLI.

use crate::rational::Rational;
use crate::REPORT_SCHEMA;
use serde::Serialize;
use serde_json::Value;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckId {
    Lemma1,
    Lemma2,
    Lemma3i,
    Lemma3ii,
    Cor1i,
    Cor1ii,
    Thm2,
    Thm3,
    Surgery,
}

impl CheckId {
    pub const ALL: [CheckId; 9] = [
        CheckId::Lemma1,
        CheckId::Lemma2,
        CheckId::Lemma3i,
        CheckId::Lemma3ii,
        CheckId::Cor1i,
        CheckId::Cor1ii,
        CheckId::Thm2,
        CheckId::Thm3,
        CheckId::Surgery,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Lemma1 => "lemma1",
            CheckId::Lemma2 => "lemma2",
            CheckId::Lemma3i => "lemma3i",
            CheckId::Lemma3ii => "lemma3ii",
            CheckId::Cor1i => "cor1i",
            CheckId::Cor1ii => "cor1ii",
            CheckId::Thm2 => "thm2",
            CheckId::Thm3 => "thm3",
            CheckId::Surgery => "surgery",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

/// Graph plus the indices of the members inside 𝓛(G) (or 0..k for ad-hoc
/// systems).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct InstanceId {
    pub graph6: String,
    pub members: Vec<usize>,
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}", self.graph6, self.members)
    }
}

/// One inequality (or family of inequalities) evaluated on one instance.
/// `lhs`/`rhs` hold the tightest evaluated pair, read as `lhs <= rhs` for
/// upper bounds and `lhs >= rhs` for lower bounds (see `relation`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema: &'static str,
    pub check: CheckId,
    pub instance: InstanceId,
    pub status: Status,
    pub relation: &'static str,
    pub lhs: Option<Rational>,
    pub rhs: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl CheckReport {
    pub fn new(check: CheckId, instance: InstanceId, relation: &'static str) -> Self {
        CheckReport {
            schema: REPORT_SCHEMA,
            check,
            instance,
            status: Status::Vacuous,
            relation,
            lhs: None,
            rhs: None,
            witness: None,
            detail: Value::Null,
        }
    }

    pub fn sides(mut self, lhs: Rational, rhs: Rational) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }

    pub fn detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }

    pub fn pass(mut self) -> Self {
        self.status = Status::Pass;
        self.witness = None;
        self
    }

    pub fn vacuous(mut self) -> Self {
        self.status = Status::Vacuous;
        self.witness = None;
        self
    }

    /// Failing verdicts always carry a witness.
    pub fn fail(mut self, witness: Value) -> Self {
        self.status = Status::Fail;
        self.witness = Some(witness);
        self
    }

    /// Pass or fail depending on `holds`.
    pub fn verdict(self, holds: bool, witness: impl FnOnce() -> Value) -> Self {
        if holds {
            self.pass()
        } else {
            self.fail(witness())
        }
    }
}

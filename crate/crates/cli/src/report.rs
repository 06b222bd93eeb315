//! Reports emitted by every command, as JSON or text.

use std::fmt::Write as _;

use cotorsion_core::subcat::{SearchBounds, Verdict};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliResult, EXIT_FAILS, EXIT_HOLDS, EXIT_UNKNOWN};
use crate::files::SCHEMA_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Generate,
    Twin,
    Heart,
    Integral,
    Abelian,
    Probe,
    InStar,
    Replay,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Holds,
    Fails,
    Unknown,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Holds => EXIT_HOLDS,
            Outcome::Fails => EXIT_FAILS,
            Outcome::Unknown => EXIT_UNKNOWN,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub check: Check,
    pub verdict: Outcome,
    /// Why a Holds verdict holds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub bounds: SearchBounds,
    pub field_char: u32,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(check: Check, bounds: SearchBounds, field_char: u32, seed: u64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            check,
            verdict: Outcome::Unknown,
            route: None,
            certificate: None,
            detail: None,
            notes: Vec::new(),
            bounds,
            field_char,
            seed,
            data: Value::Null,
            timing_ms: 0,
        }
    }

    /// Fills verdict, route, certificate and detail from a core verdict.
    pub fn set_verdict<H: Serialize, C: Serialize>(&mut self, v: &Verdict<H, C>) -> CliResult<()> {
        match v {
            Verdict::Holds(h) => {
                self.verdict = Outcome::Holds;
                let r = serde_json::to_value(h)?;
                self.route = match r {
                    Value::String(s) => Some(s),
                    Value::Null => None,
                    other => {
                        self.data_insert("witness", other);
                        None
                    }
                };
            }
            Verdict::Fails(c) => {
                self.verdict = Outcome::Fails;
                self.certificate = Some(serde_json::to_value(c)?);
            }
            Verdict::UnknownWithinBound(u) => {
                self.verdict = Outcome::Unknown;
                self.detail = Some(u.detail.clone());
            }
        }
        Ok(())
    }

    pub fn data_insert(&mut self, key: &str, value: Value) {
        if !self.data.is_object() {
            self.data = Value::Object(Default::default());
        }
        self.data
            .as_object_mut()
            .expect("data is an object")
            .insert(key.to_string(), value);
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> CliResult<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Text rendering; carries the same verdict content as the JSON form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let verdict = serde_json::to_value(self.verdict).expect("serializable");
        let check = serde_json::to_value(self.check).expect("serializable");
        let _ = writeln!(s, "check: {}", check.as_str().unwrap_or_default());
        let _ = writeln!(s, "verdict: {}", verdict.as_str().unwrap_or_default());
        if let Some(r) = &self.route {
            let _ = writeln!(s, "route: {r}");
        }
        if let Some(d) = &self.detail {
            let _ = writeln!(s, "detail: {d}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(
            s,
            "bounds: multiplicity {}, dimension cap {}; field F_{}; seed {}",
            self.bounds.mult, self.bounds.dim_cap, self.field_char, self.seed
        );
        if let Some(c) = &self.certificate {
            let _ = writeln!(s, "certificate:");
            for line in serde_json::to_string_pretty(c)
                .expect("serializable")
                .lines()
            {
                let _ = writeln!(s, "  {line}");
            }
        }
        if let Value::Object(m) = &self.data {
            for (k, v) in m {
                match v {
                    Value::Array(items) if items.iter().all(Value::is_string) => {
                        let items: Vec<&str> = items.iter().filter_map(Value::as_str).collect();
                        let _ = writeln!(
                            s,
                            "{k}: {}",
                            if items.is_empty() {
                                "-".into()
                            } else {
                                items.join(" ")
                            }
                        );
                    }
                    Value::String(x) => {
                        let _ = writeln!(s, "{k}: {x}");
                    }
                    Value::Number(x) => {
                        let _ = writeln!(s, "{k}: {x}");
                    }
                    Value::Bool(x) => {
                        let _ = writeln!(s, "{k}: {x}");
                    }
                    other => {
                        let _ = writeln!(s, "{k}:");
                        for line in serde_json::to_string_pretty(other)
                            .expect("serializable")
                            .lines()
                        {
                            let _ = writeln!(s, "  {line}");
                        }
                    }
                }
            }
        }
        let _ = writeln!(s, "time: {} ms", self.timing_ms);
        s
    }
}

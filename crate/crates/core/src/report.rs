//! Structured pass/fail records for a single claim over a parameter range.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Reports keep at most this many counterexamples, earliest first.
pub const MAX_FAILURES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

impl Status {
    pub fn is_ok(self) -> bool {
        self != Status::Fail
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Vacuous => "vacuous",
        })
    }
}

/// Either an exact identity or a congruence modulo an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Modulus {
    Exact,
    Mod(BigInt),
}

impl Modulus {
    pub fn power_of_five(k: u32) -> Self {
        Modulus::Mod(BigInt::from(5u32).pow(k))
    }

    /// Whether `lhs` and `rhs` agree under this modulus.
    pub fn holds(&self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            Modulus::Exact => lhs == rhs,
            Modulus::Mod(m) => num_integer::Integer::mod_floor(&(lhs - rhs), m) == BigInt::default(),
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Exact => f.write_str("exact"),
            Modulus::Mod(m) => write!(f, "{m}"),
        }
    }
}

impl Serialize for Modulus {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Modulus {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text == "exact" {
            return Ok(Modulus::Exact);
        }
        text.parse().map(Modulus::Mod).map_err(|_| serde::de::Error::custom(format!("bad modulus `{text}`")))
    }
}

/// One counterexample. Integers are carried as decimal strings so that no
/// JSON consumer can round them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(rename = "claim")]
    pub claim_id: String,
    pub params: BTreeMap<String, String>,
    pub modulus: Modulus,
    pub range: String,
    pub status: Status,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status.is_ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Copy with timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        Self { elapsed_ms: 0, ..self.clone() }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(
            f,
            "{:<7} {:<10} [{}] mod {} over {} ({} ms)",
            self.status.to_string().to_uppercase(),
            self.claim_id,
            params.join(" "),
            self.modulus,
            self.range,
            self.elapsed_ms
        )?;
        for fail in &self.failures {
            write!(f, "\n        at {}: {} vs {}", fail.index, fail.lhs, fail.rhs)?;
        }
        Ok(())
    }
}

/// Accumulates checks for one report.
#[derive(Debug)]
pub struct ReportBuilder {
    claim_id: String,
    params: BTreeMap<String, String>,
    modulus: Modulus,
    range: String,
    checked: usize,
    failures: Vec<Failure>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(claim_id: &str, modulus: Modulus) -> Self {
        Self {
            claim_id: claim_id.to_owned(),
            params: BTreeMap::new(),
            modulus,
            range: String::new(),
            checked: 0,
            failures: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn range(mut self, range: impl Into<String>) -> Self {
        self.range = range.into();
        self
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// Records one comparison under the report's modulus.
    pub fn compare(&mut self, index: impl fmt::Display, lhs: &BigInt, rhs: &BigInt) -> bool {
        let ok = self.modulus.holds(lhs, rhs);
        self.record(index, ok, || (lhs.to_string(), rhs.to_string()));
        ok
    }

    /// Records a check whose outcome was decided elsewhere.
    pub fn record(&mut self, index: impl fmt::Display, ok: bool, sides: impl FnOnce() -> (String, String)) {
        self.checked += 1;
        if !ok && self.failures.len() < MAX_FAILURES {
            let (lhs, rhs) = sides();
            self.failures.push(Failure { index: index.to_string(), lhs, rhs });
        }
    }

    /// Merges per-chunk outcomes (already in index order).
    pub fn absorb(&mut self, checked: usize, failures: Vec<Failure>) {
        self.checked += checked;
        let room = MAX_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(failures.into_iter().take(room));
    }

    /// An empty builder for one chunk of this report's index range.
    pub fn fork(&self) -> Self {
        Self {
            claim_id: self.claim_id.clone(),
            params: BTreeMap::new(),
            modulus: self.modulus.clone(),
            range: String::new(),
            checked: 0,
            failures: Vec::new(),
            started: self.started,
        }
    }

    /// Appends a chunk produced by [`fork`](Self::fork). Chunks must be
    /// merged in index order.
    pub fn merge(&mut self, chunk: ReportBuilder) {
        self.absorb(chunk.checked, chunk.failures);
    }

    pub fn checked(&self) -> usize {
        self.checked
    }

    pub fn finish(self) -> VerificationReport {
        let status = if !self.failures.is_empty() {
            Status::Fail
        } else if self.checked == 0 {
            Status::Vacuous
        } else {
            Status::Pass
        };
        VerificationReport {
            claim_id: self.claim_id,
            params: self.params,
            modulus: self.modulus,
            range: self.range,
            status,
            failures: self.failures,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

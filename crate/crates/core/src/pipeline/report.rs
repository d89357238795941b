use serde::{Deserialize, Serialize};

use crate::enumerate::PointTally;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Affine,
    Projective,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub poly: String,
    pub b: i64,
    pub mode: Mode,
}

/// One branch taken while counting, with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub branch: String,
    pub detail: serde_json::Value,
}

impl TraceStep {
    pub fn new(branch: &str, detail: serde_json::Value) -> Self {
        TraceStep {
            branch: branch.into(),
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub query: Query,
    pub count: u64,
    /// Upper bounds along the reduction chain, outermost first.
    pub bounds: Vec<(String, u64)>,
    pub trace: Vec<TraceStep>,
    pub certificates: Vec<serde_json::Value>,
    pub warnings: Vec<String>,
    pub wall_time_s: f64,
    pub seed: u64,
    pub oracle_count: Option<u64>,
}

impl CountReport {
    pub fn new(query: Query, seed: u64) -> Self {
        CountReport {
            query,
            count: 0,
            bounds: Vec::new(),
            trace: Vec::new(),
            certificates: Vec::new(),
            warnings: Vec::new(),
            wall_time_s: 0.0,
            seed,
            oracle_count: None,
        }
    }

    pub fn oracle_agrees(&self) -> Option<bool> {
        self.oracle_count.map(|o| o == self.count)
    }

    /// Records the exhaustive count; a disagreement is an error.
    pub fn cross_check(&mut self, oracle: u64) -> Result<()> {
        self.oracle_count = Some(oracle);
        if oracle != self.count {
            return Err(Error::Invalid(format!(
                "pipeline count {} differs from enumeration {}",
                self.count, oracle
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}

/// Intermediate result shared between routines.
#[derive(Clone, Debug, Default)]
pub(crate) struct Tally {
    pub points: PointTally,
    pub trace: Vec<TraceStep>,
    pub certificates: Vec<serde_json::Value>,
    pub warnings: Vec<String>,
}

impl Tally {
    pub fn absorb(&mut self, o: Tally) {
        self.points.merge(&o.points);
        self.trace.extend(o.trace);
        self.certificates.extend(o.certificates);
        self.warnings.extend(o.warnings);
    }

    pub fn into_report(self, query: Query, seed: u64, started: std::time::Instant) -> CountReport {
        let mut r = CountReport::new(query, seed);
        r.count = self.points.kept;
        r.trace = self.trace;
        r.certificates = self.certificates;
        r.warnings = self.warnings;
        r.wall_time_s = started.elapsed().as_secs_f64();
        r
    }
}

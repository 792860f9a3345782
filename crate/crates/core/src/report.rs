//! Index run reports: exact strings for exact quantities, IEEE doubles for
//! quadrature results. The JSON form round-trips losslessly.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of the exact engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactOutcome {
    /// The summed contribution reduced to a Laurent polynomial; `index` is
    /// its constant coefficient and `certificate` the polynomial itself.
    Value { index: String, certificate: String },
    /// Reduction left a genuine pole: the surviving denominator factors.
    SingularityNotCancelled { surviving_factors: String },
}

/// Outcome of the numeric engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericOutcome {
    pub index: f64,
    /// Difference between the quadrature at the requested node count and at
    /// half that count, plus a rounding floor.
    pub error_estimate: f64,
    /// Nodes nudged off a pole during evaluation.
    pub perturbed_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub name: String,
    /// Exact per-component contribution as a rational function of `u`.
    pub exact: String,
    /// Chamber-dependent numeric average, when the numeric engine ran.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub numeric: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub operator: String,
    pub engine: String,
    pub rank: usize,
    /// Chamber coordinates as exact rationals.
    pub chamber: Vec<String>,
    pub nodes: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<ExactOutcome>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub numeric: Option<NumericOutcome>,
    pub components: Vec<ComponentReport>,
}

impl IndexReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<IndexReport, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// True when the exact engine ran and failed to cancel singularities.
    pub fn has_uncancelled_singularity(&self) -> bool {
        matches!(
            self.exact,
            Some(ExactOutcome::SingularityNotCancelled { .. })
        )
    }
}

impl fmt::Display for IndexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "operator: {}", self.operator)?;
        writeln!(f, "engine:   {}", self.engine)?;
        writeln!(
            f,
            "chamber:  [{}]  (contour radii e^(q/2))",
            self.chamber.join(", ")
        )?;
        if self.numeric.is_some() {
            writeln!(f, "nodes:    {} per axis", self.nodes)?;
        }
        for c in &self.components {
            match c.numeric {
                Some(v) => writeln!(f, "  {}: {}   [numeric {:.12}]", c.name, c.exact, v)?,
                None => writeln!(f, "  {}: {}", c.name, c.exact)?,
            }
        }
        match &self.exact {
            Some(ExactOutcome::Value { index, certificate }) => {
                writeln!(f, "exact index: {}", index)?;
                writeln!(f, "cancellation certificate: {}", certificate)?;
            }
            Some(ExactOutcome::SingularityNotCancelled { surviving_factors }) => {
                writeln!(f, "exact index: singularity not cancelled")?;
                writeln!(f, "surviving denominator: {}", surviving_factors)?;
            }
            None => {}
        }
        if let Some(n) = &self.numeric {
            writeln!(
                f,
                "numeric index: {:.12} (error estimate {:.3e}{})",
                n.index,
                n.error_estimate,
                if n.perturbed_nodes > 0 {
                    format!(", {} perturbed nodes", n.perturbed_nodes)
                } else {
                    String::new()
                }
            )?;
        }
        Ok(())
    }
}

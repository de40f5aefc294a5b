//! Outcome of one inequality check.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    HoldsWithEquality,
    Violated,
}

impl Verdict {
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        if margin.is_nan() || margin < -tol {
            Verdict::Violated
        } else if margin <= tol {
            Verdict::HoldsWithEquality
        } else {
            Verdict::Holds
        }
    }

    pub fn ok(self) -> bool {
        self != Verdict::Violated
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// The inequality in plain notation, e.g. `S(f) >= S(f*)`.
    pub statement: String,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    /// Smallest `lhs - rhs` (or containment slack) over the sub-checks.
    pub margin: f64,
    pub verdict: Verdict,
    pub tol: f64,
    /// FNV-1a hash of the serialized input.
    pub digest: String,
    /// Serialized input, kept only for violations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

/// 64-bit FNV-1a, hex encoded.
pub fn fnv1a(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

impl CheckReport {
    pub fn new<I: Serialize>(
        name: &str,
        statement: &str,
        lhs: Vec<f64>,
        rhs: Vec<f64>,
        margin: f64,
        tol: f64,
        input: &I,
    ) -> Self {
        let json = serde_json::to_value(input).unwrap_or(serde_json::Value::Null);
        let digest = fnv1a(json.to_string().as_bytes());
        let verdict = Verdict::from_margin(margin, tol);
        CheckReport {
            name: name.to_string(),
            statement: statement.to_string(),
            lhs,
            rhs,
            margin,
            verdict,
            tol,
            digest,
            witness: (verdict == Verdict::Violated).then_some(json),
        }
    }

    /// Report for `lhs_i >= rhs_i` for every `i`, margin relative to `max(1, |rhs_i|)`.
    pub fn at_least<I: Serialize>(
        name: &str,
        statement: &str,
        lhs: Vec<f64>,
        rhs: Vec<f64>,
        tol: f64,
        input: &I,
    ) -> Self {
        let margin = lhs
            .iter()
            .zip(&rhs)
            .map(|(l, r)| (l - r) / r.abs().max(1.0))
            .fold(f64::INFINITY, f64::min);
        Self::new(name, statement, lhs, rhs, margin, tol, input)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert_eq!(Verdict::from_margin(1.0, 1e-9), Verdict::Holds);
        assert_eq!(Verdict::from_margin(-1e-12, 1e-9), Verdict::HoldsWithEquality);
        assert_eq!(Verdict::from_margin(-1e-3, 1e-9), Verdict::Violated);
        assert_eq!(Verdict::from_margin(f64::NAN, 1e-9), Verdict::Violated);
    }

    #[test]
    fn witness_only_on_violation() {
        let ok = CheckReport::at_least("x", "a >= b", vec![2.0], vec![1.0], 1e-9, &[1, 2]);
        assert!(ok.witness.is_none());
        let bad = CheckReport::at_least("x", "a >= b", vec![0.0], vec![1.0], 1e-9, &[1, 2]);
        assert_eq!(bad.verdict, Verdict::Violated);
        assert!(bad.witness.is_some());
        assert_eq!(ok.digest, bad.digest);
        assert_eq!(fnv1a(b""), "cbf29ce484222325");
    }
}

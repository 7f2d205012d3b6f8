//! Register labels for two-level systems.

use crate::{QuantumError, Result};
use std::fmt;

/// Identifier of one two-level system inside a register.
///
/// The protocol uses `r` and `l` for the two qubits and `a` and `g` for the
/// two friend memories, but any single character can label a system; all
/// register-algebra operations only require labels within one register to be
/// distinct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SystemLabel(pub char);

impl fmt::Display for SystemLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<char> for SystemLabel {
    fn from(c: char) -> Self {
        SystemLabel(c)
    }
}

/// Parses a compact register string such as `"ralg"` or `"lg"` into an
/// ordered label list, rejecting duplicates.
pub fn parse_register(text: &str) -> Result<Vec<SystemLabel>> {
    let labels: Vec<SystemLabel> = text.chars().map(SystemLabel).collect();
    if labels.is_empty() {
        return Err(QuantumError::InvalidRegister(text.to_string()));
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[i + 1..].contains(l) {
            return Err(QuantumError::InvalidRegister(text.to_string()));
        }
    }
    Ok(labels)
}

/// Renders a register as the compact string used in error messages.
pub(crate) fn register_string(register: &[SystemLabel]) -> String {
    register.iter().map(|l| l.0).collect()
}

/// Checks that two registers are identical (same labels, same order).
pub(crate) fn require_same_register(a: &[SystemLabel], b: &[SystemLabel]) -> Result<()> {
    if a != b {
        return Err(QuantumError::RegisterMismatch {
            expected: register_string(a),
            found: register_string(b),
        });
    }
    Ok(())
}

/// Checks that the labels of `a` and `b` are disjoint, as required for a
/// tensor product.
pub(crate) fn require_disjoint(a: &[SystemLabel], b: &[SystemLabel]) -> Result<()> {
    for l in a {
        if b.contains(l) {
            return Err(QuantumError::LabelClash(*l));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_register() {
        let reg = parse_register("ralg").unwrap();
        assert_eq!(reg.len(), 4);
        assert_eq!(reg[0], SystemLabel('r'));
        assert_eq!(reg[3], SystemLabel('g'));
    }

    #[test]
    fn rejects_duplicate_labels() {
        assert!(parse_register("rr").is_err());
        assert!(parse_register("").is_err());
    }
}

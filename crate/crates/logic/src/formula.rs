//! Formula AST for the multi-agent modal language, with a printer that
//! round-trips through the parser.

use serde::{Deserialize, Serialize};
use std::fmt;

/// An agent identifier (e.g. `a`, `c`, `d`, `g`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Agent(pub String);

impl Agent {
    /// Builds an agent from any string-like id.
    pub fn new(id: impl Into<String>) -> Self {
        Agent(id.into())
    }

    /// The agent's id.
    pub fn id(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Agent {
    fn from(id: &str) -> Self {
        Agent(id.to_owned())
    }
}

/// A modal formula. `Diamond` is stored as its own node but evaluates as
/// the dual `¬□¬`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// A propositional atom, named by its exact surface text.
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Equiv(Box<Formula>, Box<Formula>),
    /// `[x]φ`: agent x is certain of φ.
    Box(Agent, Box<Formula>),
    /// `<x>φ`: agent x holds φ possible.
    Diamond(Agent, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn equiv(self, other: Formula) -> Formula {
        Formula::Equiv(Box::new(self), Box::new(other))
    }

    pub fn boxed(agent: impl Into<Agent>, inner: Formula) -> Formula {
        Formula::Box(agent.into(), Box::new(inner))
    }

    pub fn diamond(agent: impl Into<Agent>, inner: Formula) -> Formula {
        Formula::Diamond(agent.into(), Box::new(inner))
    }

    /// Conjunction of a non-empty formula sequence, left-associated.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// True when no `Box`/`Diamond` occurs anywhere in the formula.
    pub fn is_box_free(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(inner) => inner.is_box_free(),
            Formula::And(lhs, rhs)
            | Formula::Or(lhs, rhs)
            | Formula::Implies(lhs, rhs)
            | Formula::Equiv(lhs, rhs) => lhs.is_box_free() && rhs.is_box_free(),
            Formula::Box(_, _) | Formula::Diamond(_, _) => false,
        }
    }

    /// Every atom name occurring in the formula, in first-occurrence order
    /// without duplicates.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::Atom(name) => {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
            Formula::Not(inner) | Formula::Box(_, inner) | Formula::Diamond(_, inner) => {
                inner.collect_atoms(out)
            }
            Formula::And(lhs, rhs)
            | Formula::Or(lhs, rhs)
            | Formula::Implies(lhs, rhs)
            | Formula::Equiv(lhs, rhs) => {
                lhs.collect_atoms(out);
                rhs.collect_atoms(out);
            }
        }
    }

    /// Every agent occurring under a modality, in first-occurrence order
    /// without duplicates.
    pub fn agents(&self) -> Vec<&Agent> {
        let mut out = Vec::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents<'a>(&'a self, out: &mut Vec<&'a Agent>) {
        match self {
            Formula::Atom(_) => {}
            Formula::Not(inner) => inner.collect_agents(out),
            Formula::Box(agent, inner) | Formula::Diamond(agent, inner) => {
                if !out.contains(&agent) {
                    out.push(agent);
                }
                inner.collect_agents(out);
            }
            Formula::And(lhs, rhs)
            | Formula::Or(lhs, rhs)
            | Formula::Implies(lhs, rhs)
            | Formula::Equiv(lhs, rhs) => {
                lhs.collect_agents(out);
                rhs.collect_agents(out);
            }
        }
    }

    /// Binding strength used by the printer; higher binds tighter.
    fn level(&self) -> u8 {
        match self {
            Formula::Atom(_) => 6,
            Formula::Not(_) | Formula::Box(_, _) | Formula::Diamond(_, _) => 5,
            Formula::And(_, _) => 4,
            Formula::Or(_, _) => 3,
            Formula::Implies(_, _) => 2,
            Formula::Equiv(_, _) => 1,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, parent_level: u8) -> fmt::Result {
        let my_level = self.level();
        let needs_parens = my_level < parent_level;
        if needs_parens {
            f.write_str("(")?;
        }
        match self {
            Formula::Atom(name) => f.write_str(name)?,
            Formula::Not(inner) => {
                f.write_str("~")?;
                inner.fmt_at(f, 5)?;
            }
            Formula::Box(agent, inner) => {
                write!(f, "[{agent}]")?;
                inner.fmt_at(f, 5)?;
            }
            Formula::Diamond(agent, inner) => {
                write!(f, "<{agent}>")?;
                inner.fmt_at(f, 5)?;
            }
            // Left-associative connectives: the right child re-parenthesizes
            // at one level tighter so `p & (q & r)` keeps its shape.
            Formula::And(lhs, rhs) => {
                lhs.fmt_at(f, 4)?;
                f.write_str(" & ")?;
                rhs.fmt_at(f, 5)?;
            }
            Formula::Or(lhs, rhs) => {
                lhs.fmt_at(f, 3)?;
                f.write_str(" | ")?;
                rhs.fmt_at(f, 4)?;
            }
            // Right-associative connectives: mirrored treatment.
            Formula::Implies(lhs, rhs) => {
                lhs.fmt_at(f, 3)?;
                f.write_str(" -> ")?;
                rhs.fmt_at(f, 2)?;
            }
            Formula::Equiv(lhs, rhs) => {
                lhs.fmt_at(f, 2)?;
                f.write_str(" <-> ")?;
                rhs.fmt_at(f, 1)?;
            }
        }
        if needs_parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printer_uses_minimal_parentheses() {
        let f = Formula::boxed(
            "a",
            Formula::atom("p").implies(Formula::atom("q")),
        );
        assert_eq!(f.to_string(), "[a](p -> q)");

        let g = Formula::atom("p")
            .and(Formula::atom("q"))
            .or(Formula::atom("r"));
        assert_eq!(g.to_string(), "p & q | r");

        let h = Formula::atom("p").and(Formula::atom("q").or(Formula::atom("r")));
        assert_eq!(h.to_string(), "p & (q | r)");
    }

    #[test]
    fn implication_prints_right_associated() {
        let chain = Formula::atom("p").implies(Formula::atom("q").implies(Formula::atom("r")));
        assert_eq!(chain.to_string(), "p -> q -> r");
        let left = Formula::atom("p").implies(Formula::atom("q")).implies(Formula::atom("r"));
        assert_eq!(left.to_string(), "(p -> q) -> r");
    }

    #[test]
    fn box_freedom_and_atom_collection() {
        let f = Formula::boxed("a", Formula::atom("p").and(Formula::atom("q")));
        assert!(!f.is_box_free());
        assert_eq!(f.atoms(), vec!["p", "q"]);
        assert_eq!(f.agents(), vec![&Agent::new("a")]);
    }
}

//! Typed constructors for the protocol's structured atoms.
//!
//! Every atom the scenario uses goes through these helpers, so the strings
//! are guaranteed to match the logic kernel's structured-atom grammar:
//! `M[agent,time]=value` for outcome records, `ket[state;system;time]` for
//! state assignments, `ind[agent;state;system;time]` for an agent's
//! indicated state, and `ind2[x;y;state;system;time]` for the nested
//! "x indicates that y's records indicate" facts available after the
//! halting comparison.

use frlab_logic::Formula;

/// `M[agent,time]=value` — the recorded outcome of a measurement.
pub fn measured(agent: &str, time: &str, value: &str) -> String {
    format!("M[{agent},{time}]={value}")
}

/// `ket[state;system;time]` — a state assignment to a subsystem.
pub fn ket(state: &str, system: &str, time: &str) -> String {
    format!("ket[{state};{system};{time}]")
}

/// `ind[agent;state;system;time]` — the agent's indicated (known) state.
pub fn ind(agent: &str, state: &str, system: &str, time: &str) -> String {
    format!("ind[{agent};{state};{system};{time}]")
}

/// `ind2[x;y;state;system;time]` — x's record of y's indicated state.
pub fn ind2(x: &str, y: &str, state: &str, system: &str, time: &str) -> String {
    format!("ind2[{x};{y};{state};{system};{time}]")
}

/// Atom formula from any of the constructors above.
pub fn atom(text: impl Into<String>) -> Formula {
    Formula::atom(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use frlab_logic::parse;

    #[test]
    fn constructed_atoms_survive_the_kernel_grammar() {
        let samples = [
            measured("a", "t1", "1"),
            measured("d", "t4", "fail"),
            ket("+", "l", "t2"),
            ket("00", "lg", "tp"),
            ket("init", "r", "0"),
            ind("a", "+0", "lg", "tp"),
            ind("c", "init", "ralg", "0"),
            ind2("d", "c", "ok", "ra", "5"),
        ];
        for text in samples {
            let parsed = parse(&text).expect("atom should parse");
            assert_eq!(parsed, Formula::atom(&text));
            assert_eq!(parsed.to_string(), text);
        }
    }
}

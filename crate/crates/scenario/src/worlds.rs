//! The sixteen outcome worlds and the protocol valuation.
//!
//! A world fixes the four measurement records: `a`'s coin reading at t1,
//! `g`'s qubit reading at t2, and the ok/fail outcomes of the two late
//! lab measurements by `c` (at t3, on the pair r,a) and `d` (at t4, on
//! the pair l,g). Every other atom of the protocol language — state
//! assignments and indicator facts — is a deterministic function of those
//! four records, so the valuation is reproducible bit for bit.
//!
//! The identification of indicator atoms with outcome records (an agent
//! who saw outcome `v` indicates the corresponding eigenstate) is the
//! standard eigenstate link; every bridge rule built on top of it carries
//! an explicit flag so reports can surface where the link was used.

use crate::atoms::{ind, ind2, ket, measured};
use crate::{Result, ScenarioError};
use frlab_logic::search::FixedUniverse;
use frlab_logic::{satisfies, Agent, Formula, KripkeFrame, KripkeModel};
use std::collections::{BTreeMap, BTreeSet};

/// Outcome of an ok/fail lab measurement. `Fail` sorts (and indexes) as 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LabOutcome {
    Fail,
    Ok,
}

impl LabOutcome {
    pub fn text(self) -> &'static str {
        match self {
            LabOutcome::Fail => "fail",
            LabOutcome::Ok => "ok",
        }
    }

    const fn bit(self) -> usize {
        match self {
            LabOutcome::Fail => 0,
            LabOutcome::Ok => 1,
        }
    }

    const fn from_bit(bit: usize) -> Self {
        if bit == 0 {
            LabOutcome::Fail
        } else {
            LabOutcome::Ok
        }
    }
}

/// One complete assignment of the four measurement records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OutcomeWorld {
    /// `a`'s coin reading at t1 (0 = heads, 1 = tails).
    pub a: u8,
    /// `g`'s qubit reading at t2.
    pub g: u8,
    /// `c`'s outcome at t3.
    pub c: LabOutcome,
    /// `d`'s outcome at t4.
    pub d: LabOutcome,
}

impl OutcomeWorld {
    /// Canonical index: `a` is the most significant bit, then `g`, `c`, `d`.
    pub const fn index(self) -> usize {
        (self.a as usize) * 8 + (self.g as usize) * 4 + self.c.bit() * 2 + self.d.bit()
    }

    pub const fn from_index(index: usize) -> Self {
        OutcomeWorld {
            a: ((index >> 3) & 1) as u8,
            g: ((index >> 2) & 1) as u8,
            c: LabOutcome::from_bit((index >> 1) & 1),
            d: LabOutcome::from_bit(index & 1),
        }
    }

    /// Stable world name, e.g. `a1g1-cok-dok`.
    pub fn name(self) -> String {
        format!(
            "a{}g{}-c{}-d{}",
            self.a,
            self.g,
            self.c.text(),
            self.d.text()
        )
    }
}

const fn build_all() -> [OutcomeWorld; 16] {
    let mut out = [OutcomeWorld {
        a: 0,
        g: 0,
        c: LabOutcome::Fail,
        d: LabOutcome::Fail,
    }; 16];
    let mut i = 0;
    while i < 16 {
        out[i] = OutcomeWorld::from_index(i);
        i += 1;
    }
    out
}

/// All sixteen worlds in index order.
pub const ALL_WORLDS: [OutcomeWorld; 16] = build_all();

/// The double-ok world `(a=1, g=1, c=ok, d=ok)` — the postselected history.
pub const W_HAT: OutcomeWorld = OutcomeWorld {
    a: 1,
    g: 1,
    c: LabOutcome::Ok,
    d: LabOutcome::Ok,
};

/// The four reasoning agents in sorted order.
pub fn agents() -> Vec<Agent> {
    ["a", "c", "d", "g"].into_iter().map(Agent::new).collect()
}

type AtomCondition = fn(OutcomeWorld) -> bool;

/// The full atom catalogue with each atom's truth condition.
///
/// This is the single source for the valuation: measurement records are
/// read off the world tuple, state assignments follow the preparation
/// clauses (a heads reading prepares `l` in `|0⟩`, a tails reading in
/// `|+⟩`, persisting until the t2 measurement), and indicator atoms
/// restate the records through the eigenstate link. The two nested
/// indicators exist exactly at double-ok worlds, where the halting
/// comparison at t=5 puts each late agent's record in the other's hands.
fn atom_conditions() -> Vec<(String, AtomCondition)> {
    vec![
        // Measurement records.
        (measured("a", "t1", "0"), |w| w.a == 0),
        (measured("a", "t1", "1"), |w| w.a == 1),
        (measured("g", "t2", "0"), |w| w.g == 0),
        (measured("g", "t2", "1"), |w| w.g == 1),
        (measured("c", "t3", "ok"), |w| w.c == LabOutcome::Ok),
        (measured("c", "t3", "fail"), |w| w.c == LabOutcome::Fail),
        (measured("d", "t4", "ok"), |w| w.d == LabOutcome::Ok),
        (measured("d", "t4", "fail"), |w| w.d == LabOutcome::Fail),
        // State assignments.
        (ket("init", "r", "0"), |_| true),
        (ket("0", "r", "t1"), |w| w.a == 0),
        (ket("1", "r", "t1"), |w| w.a == 1),
        (ket("0", "l", "tp"), |w| w.a == 0),
        (ket("+", "l", "tp"), |w| w.a == 1),
        (ket("0", "l", "t2"), |w| w.a == 0),
        (ket("+", "l", "t2"), |w| w.a == 1),
        (ket("0", "g", "tp"), |_| true),
        (ket("00", "lg", "tp"), |w| w.a == 0),
        (ket("+0", "lg", "tp"), |w| w.a == 1),
        (ket("ok", "ra", "t3"), |w| w.c == LabOutcome::Ok),
        (ket("fail", "ra", "t3"), |w| w.c == LabOutcome::Fail),
        (ket("ok", "lg", "t4"), |w| w.d == LabOutcome::Ok),
        (ket("fail", "lg", "t4"), |w| w.d == LabOutcome::Fail),
        // Indicated states (eigenstate link: record ⇒ indicated eigenstate).
        (ind("a", "0", "r", "t1"), |w| w.a == 0),
        (ind("a", "1", "r", "t1"), |w| w.a == 1),
        (ind("a", "00", "lg", "tp"), |w| w.a == 0),
        (ind("a", "+0", "lg", "tp"), |w| w.a == 1),
        (ind("g", "0", "l", "t2"), |w| w.g == 0),
        (ind("g", "1", "l", "t2"), |w| w.g == 1),
        (ind("c", "ok", "ra", "t3"), |w| w.c == LabOutcome::Ok),
        (ind("c", "fail", "ra", "t3"), |w| w.c == LabOutcome::Fail),
        (ind("d", "ok", "lg", "t4"), |w| w.d == LabOutcome::Ok),
        (ind("d", "fail", "lg", "t4"), |w| w.d == LabOutcome::Fail),
        (ind("c", "init", "ralg", "0"), |_| true),
        (ind("d", "init", "ralg", "0"), |_| true),
        // Nested indicators after the halting comparison.
        (ind2("d", "c", "ok", "ra", "5"), |w| {
            w.c == LabOutcome::Ok && w.d == LabOutcome::Ok
        }),
        (ind2("c", "d", "ok", "lg", "5"), |w| {
            w.c == LabOutcome::Ok && w.d == LabOutcome::Ok
        }),
    ]
}

/// Valuation over world indices, one entry per catalogue atom.
pub fn indexed_valuation() -> BTreeMap<String, BTreeSet<usize>> {
    atom_conditions()
        .into_iter()
        .map(|(atom, holds)| {
            let worlds = ALL_WORLDS
                .iter()
                .enumerate()
                .filter(|(_, w)| holds(**w))
                .map(|(i, _)| i)
                .collect();
            (atom, worlds)
        })
        .collect()
}

/// The sixteen-world model skeleton: full valuation, empty relations,
/// pointed at the double-ok world. Runs fill in relations per constraint
/// system; the skeleton itself is enough to evaluate any box-free formula.
pub fn build_worlds() -> Result<KripkeModel> {
    let worlds: Vec<String> = ALL_WORLDS.iter().map(|w| w.name()).collect();
    let relations = agents()
        .into_iter()
        .map(|agent| (agent, Vec::new()))
        .collect();
    let frame = KripkeFrame::new(worlds, agents(), relations)?;
    let model = KripkeModel::from_indexed(frame, indexed_valuation(), Some(W_HAT.index()))?;
    Ok(model)
}

/// The same universe in the form the model finder consumes.
pub fn fixed_universe() -> FixedUniverse {
    let valuation = atom_conditions()
        .into_iter()
        .map(|(atom, holds)| {
            let worlds = ALL_WORLDS
                .iter()
                .filter(|w| holds(**w))
                .map(|w| w.name())
                .collect::<BTreeSet<String>>();
            (atom, worlds)
        })
        .collect();
    FixedUniverse {
        worlds: ALL_WORLDS.iter().map(|w| w.name()).collect(),
        valuation,
        point: Some(W_HAT.name()),
    }
}

/// `1_a ∧ 1_g ∧ ok_c ∧ ok_d` — true exactly at the double-ok world.
pub fn double_ok() -> Formula {
    Formula::conjunction([
        Formula::atom(measured("a", "t1", "1")),
        Formula::atom(measured("g", "t2", "1")),
        Formula::atom(measured("c", "t3", "ok")),
        Formula::atom(measured("d", "t4", "ok")),
    ])
    .expect("nonempty conjunction")
}

/// The protocol clauses, enforced as global validities in every run.
///
/// Treating them as valid at every world is the modal stand-in for common
/// knowledge of the protocol: under global validity every agent knows
/// them, knows that every agent knows them, and so on at all depths.
pub fn protocol_clauses() -> Vec<(String, Formula)> {
    let m = |agent: &str, time: &str, value: &str| Formula::atom(measured(agent, time, value));
    let k = |state: &str, system: &str, time: &str| Formula::atom(ket(state, system, time));
    let i =
        |agent: &str, state: &str, system: &str, time: &str| Formula::atom(ind(agent, state, system, time));

    let exclusive = |one: Formula, other: Formula| one.clone().and(other.clone()).not();
    let anchor = |one: Formula, other: Formula| one.or(other);

    vec![
        ("phi0:init".to_string(), k("init", "r", "0")),
        (
            "phi0:init-known".to_string(),
            i("c", "init", "ralg", "0").and(i("d", "init", "ralg", "0")),
        ),
        (
            "phi1:anchor".to_string(),
            anchor(m("a", "t1", "0"), m("a", "t1", "1")),
        ),
        (
            "phi1:exclusive".to_string(),
            exclusive(m("a", "t1", "0"), m("a", "t1", "1")),
        ),
        (
            "phi1:heads".to_string(),
            m("a", "t1", "0").implies(
                k("0", "r", "t1")
                    .and(k("0", "l", "tp"))
                    .and(k("0", "l", "t2"))
                    .and(i("a", "0", "r", "t1"))
                    .and(i("a", "00", "lg", "tp")),
            ),
        ),
        (
            "phi1:tails".to_string(),
            m("a", "t1", "1").implies(
                k("1", "r", "t1")
                    .and(k("+", "l", "tp"))
                    .and(k("+", "l", "t2"))
                    .and(i("a", "1", "r", "t1"))
                    .and(i("a", "+0", "lg", "tp")),
            ),
        ),
        ("phi2:probe".to_string(), k("0", "g", "tp")),
        (
            "phi2:pair-zero".to_string(),
            k("00", "lg", "tp").equiv(k("0", "l", "tp").and(k("0", "g", "tp"))),
        ),
        (
            "phi2:pair-plus".to_string(),
            k("+0", "lg", "tp").equiv(k("+", "l", "tp").and(k("0", "g", "tp"))),
        ),
        (
            "phi3:anchor".to_string(),
            anchor(m("g", "t2", "0"), m("g", "t2", "1")),
        ),
        (
            "phi3:exclusive".to_string(),
            exclusive(m("g", "t2", "0"), m("g", "t2", "1")),
        ),
        (
            "phi3:records".to_string(),
            m("g", "t2", "0")
                .equiv(i("g", "0", "l", "t2"))
                .and(m("g", "t2", "1").equiv(i("g", "1", "l", "t2"))),
        ),
        (
            "phi4:anchor".to_string(),
            anchor(m("c", "t3", "ok"), m("c", "t3", "fail")),
        ),
        (
            "phi4:exclusive".to_string(),
            exclusive(m("c", "t3", "ok"), m("c", "t3", "fail")),
        ),
        (
            "phi4:records".to_string(),
            m("c", "t3", "ok")
                .equiv(i("c", "ok", "ra", "t3"))
                .and(m("c", "t3", "fail").equiv(i("c", "fail", "ra", "t3"))),
        ),
        (
            "phi4:collapse".to_string(),
            m("c", "t3", "ok")
                .equiv(k("ok", "ra", "t3"))
                .and(m("c", "t3", "fail").equiv(k("fail", "ra", "t3"))),
        ),
        (
            "phi5:anchor".to_string(),
            anchor(m("d", "t4", "ok"), m("d", "t4", "fail")),
        ),
        (
            "phi5:exclusive".to_string(),
            exclusive(m("d", "t4", "ok"), m("d", "t4", "fail")),
        ),
        (
            "phi5:records".to_string(),
            m("d", "t4", "ok")
                .equiv(i("d", "ok", "lg", "t4"))
                .and(m("d", "t4", "fail").equiv(i("d", "fail", "lg", "t4"))),
        ),
        (
            "phi5:collapse".to_string(),
            m("d", "t4", "ok")
                .equiv(k("ok", "lg", "t4"))
                .and(m("d", "t4", "fail").equiv(k("fail", "lg", "t4"))),
        ),
        (
            "phi5:halt-shares-c-record".to_string(),
            m("c", "t3", "ok")
                .and(m("d", "t4", "ok"))
                .equiv(Formula::atom(ind2("d", "c", "ok", "ra", "5"))),
        ),
        (
            "phi5:halt-shares-d-record".to_string(),
            m("c", "t3", "ok")
                .and(m("d", "t4", "ok"))
                .equiv(Formula::atom(ind2("c", "d", "ok", "lg", "5"))),
        ),
    ]
}

/// Worlds (by index) where a box-free formula holds.
pub fn extension(formula: &Formula) -> Result<BTreeSet<usize>> {
    if !formula.is_box_free() {
        return Err(ScenarioError::Invariant(format!(
            "extension is defined for box-free formulas only, got {formula}"
        )));
    }
    let skeleton = build_worlds()?;
    let mut worlds = BTreeSet::new();
    for index in 0..ALL_WORLDS.len() {
        if satisfies(&skeleton, index, formula)? {
            worlds.insert(index);
        }
    }
    Ok(worlds)
}

/// Which unitaries each agent may apply in its reasoning: the three
/// global evolutions are available to the outside agents only, while `a`
/// reasons through the local l→g copy interaction — an agent never
/// evolves a system containing itself.
pub fn permitted_unitaries() -> BTreeMap<Agent, Vec<String>> {
    let outside = vec!["U_t1".to_string(), "U_t'".to_string(), "U_t2".to_string()];
    let mut table = BTreeMap::new();
    table.insert(Agent::new("a"), vec!["U_a".to_string()]);
    table.insert(Agent::new("c"), outside.clone());
    table.insert(Agent::new("d"), outside.clone());
    table.insert(Agent::new("g"), outside);
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use frlab_logic::{parse, valid_in_model};

    #[test]
    fn index_and_tuple_round_trip() {
        for (i, world) in ALL_WORLDS.iter().enumerate() {
            assert_eq!(world.index(), i);
            assert_eq!(OutcomeWorld::from_index(i), *world);
        }
        assert_eq!(W_HAT.index(), 15);
        assert_eq!(W_HAT.name(), "a1g1-cok-dok");
    }

    #[test]
    fn every_catalogue_atom_parses_as_an_atom() {
        for (atom, _) in atom_conditions() {
            let parsed = parse(&atom).expect("catalogue atom should parse");
            assert_eq!(parsed, Formula::atom(&atom), "{atom}");
        }
    }

    #[test]
    fn protocol_clauses_are_valid_at_every_world() {
        let model = build_worlds().unwrap();
        for (id, clause) in protocol_clauses() {
            assert!(
                valid_in_model(&model, &clause).unwrap(),
                "clause {id} should be valid: {clause}"
            );
        }
    }

    #[test]
    fn double_ok_holds_exactly_at_the_distinguished_world() {
        let ext = extension(&double_ok()).unwrap();
        assert_eq!(ext, BTreeSet::from([W_HAT.index()]));
    }

    #[test]
    fn pair_states_are_conjunctions_of_their_factors() {
        let pair = extension(&Formula::atom(ket("+0", "lg", "tp"))).unwrap();
        let factors = extension(
            &Formula::atom(ket("+", "l", "tp")).and(Formula::atom(ket("0", "g", "tp"))),
        )
        .unwrap();
        assert_eq!(pair, factors);
    }

    #[test]
    fn skeleton_construction_is_reproducible() {
        let first = build_worlds().unwrap().to_json();
        let second = build_worlds().unwrap().to_json();
        assert_eq!(first, second);
        let fixed_one = format!("{:?}", fixed_universe());
        let fixed_two = format!("{:?}", fixed_universe());
        assert_eq!(fixed_one, fixed_two);
    }
}

//! Bounded model finding over constrained frame classes.
//!
//! Two complementary modes share one entry point, [`find_model`]:
//!
//! **Bounded mode** synthesizes universes `w0..w{n-1}` for every `n` up to
//! a hard cap and searches valuations and per-agent relations outright. It
//! supports the full constraint language (arbitrary formulas, all five
//! frame properties) but is exponential in both atoms and relation bits, so
//! it is meant for small universes — countermodel hunting, not scale.
//!
//! **Fixed-universe mode** takes a world set with a pinned valuation (the
//! scenario encoder's sixteen outcome worlds) and searches sub-universes
//! containing the point together with per-agent relations. It restricts the
//! constraint language to a fragment where *maximal admissible relations
//! are conclusive*: box-free formulas, reflexivity/seriality, forbidden
//! pairs, and existential witness requirements. Within that fragment the
//! subset scan is sound and complete: box-free truth is independent of
//! relations; forbidden pairs only shrink the maximal relation; and
//! seriality and witness satisfaction are monotone in the relation, so they
//! hold for some admissible relation iff they hold for the maximal one.
//! Reflexivity reduces to per-world diagonal admissibility.
//!
//! Both modes aggregate every rejected candidate into an exhaustion
//! certificate (constraint id → count + first representative), and both
//! re-verify a satisfying model through the public evaluator and frame
//! checker before reporting it.

use crate::formula::{Agent, Formula};
use crate::frames::{check_frame_property, FrameProperty};
use crate::model::{KripkeFrame, KripkeModel};
use crate::semantics::{satisfies, valid_in_model};
use crate::{LogicError, Result, FIXED_WORLD_LIMIT, GENERIC_WORLD_LIMIT};
use std::collections::{BTreeMap, BTreeSet};

/// Where the search draws its universe from.
#[derive(Debug, Clone)]
pub enum Universe {
    /// Synthesize worlds `w0..w{n-1}` for each n up to the bound and search
    /// the named atoms' valuations alongside the relations.
    Bounded {
        world_count_max: usize,
        atoms: Vec<String>,
    },
    /// A fixed world set with a pinned valuation; only sub-universes and
    /// relations are searched.
    Fixed(FixedUniverse),
}

/// A pinned universe for fixed-mode search.
#[derive(Debug, Clone)]
pub struct FixedUniverse {
    pub worlds: Vec<String>,
    /// Atom → names of worlds where it holds. Atoms not mentioned by any
    /// constraint may be omitted; atoms that are mentioned must appear.
    pub valuation: BTreeMap<String, BTreeSet<String>>,
    /// The distinguished world every candidate sub-universe must contain.
    pub point: Option<String>,
}

/// Requires an accessible target-satisfying successor from each scoped
/// world: `∃w' (w R_x w' ∧ w' ⊨ target)` — the relational form of `<x>target`.
#[derive(Debug, Clone)]
pub struct WitnessConstraint {
    pub agent: Agent,
    pub scope: WitnessScope,
    pub target: Formula,
}

/// Which source worlds a witness constraint applies to.
#[derive(Debug, Clone)]
pub enum WitnessScope {
    AllWorlds,
    Worlds(BTreeSet<String>),
}

/// A complete search problem.
#[derive(Debug, Clone, Default)]
pub struct ModelSearchSpec {
    pub agents: Vec<Agent>,
    pub universe: Universe,
    /// Required frame properties per agent; absent agents are unconstrained.
    pub frame: BTreeMap<Agent, BTreeSet<FrameProperty>>,
    /// Formulas that must hold at every world (global validities).
    pub must_hold: Vec<Formula>,
    /// Formulas that must hold at the point.
    pub must_hold_at_point: Vec<Formula>,
    /// Pairs that must stay outside each agent's relation.
    pub forbidden_pairs: BTreeMap<Agent, BTreeSet<(String, String)>>,
    pub required_witnesses: Vec<WitnessConstraint>,
}

impl Default for Universe {
    fn default() -> Self {
        Universe::Bounded {
            world_count_max: 2,
            atoms: Vec::new(),
        }
    }
}

/// A model that passed every constraint, already re-verified.
#[derive(Debug, Clone)]
pub struct SatResult {
    pub model: KripkeModel,
    /// Name of the point world, when the search pinned or selected one.
    pub point: Option<String>,
}

/// One aggregated rejection reason from the exhausted search.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RejectionSignature {
    /// Stable constraint identifier, e.g. `reflexive:a:forbidden-diagonal`.
    pub constraint: String,
    /// How many candidates this constraint rejected.
    pub count: u64,
    /// Compact description of the first rejected candidate.
    pub representative: String,
}

/// Proof of exhaustion: every candidate in the advertised space was
/// examined and rejected for one of the recorded reasons.
#[derive(Debug, Clone, serde::Serialize)]
pub struct UnsatCertificate {
    /// Human-readable description of the searched space.
    pub search_space: String,
    pub candidates_examined: u64,
    /// Rejection reasons sorted by constraint id.
    pub rejections: Vec<RejectionSignature>,
}

/// Outcome of a search.
#[derive(Debug, Clone)]
pub enum SearchVerdict {
    Sat(Box<SatResult>),
    Unsat(UnsatCertificate),
}

impl SearchVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, SearchVerdict::Sat(_))
    }
}

/// Collects rejections keyed by constraint id.
#[derive(Default)]
struct RejectionLog {
    entries: BTreeMap<String, (u64, String)>,
}

impl RejectionLog {
    fn record(&mut self, constraint: &str, representative: impl FnOnce() -> String) {
        match self.entries.get_mut(constraint) {
            Some((count, _)) => *count += 1,
            None => {
                self.entries
                    .insert(constraint.to_owned(), (1, representative()));
            }
        }
    }

    fn into_signatures(self) -> Vec<RejectionSignature> {
        self.entries
            .into_iter()
            .map(|(constraint, (count, representative))| RejectionSignature {
                constraint,
                count,
                representative,
            })
            .collect()
    }
}

/// Searches for a model satisfying the spec. SAT results are re-verified
/// through the evaluator and frame checker before being returned; UNSAT
/// results carry the exhaustion certificate.
pub fn find_model(spec: &ModelSearchSpec) -> Result<SearchVerdict> {
    match &spec.universe {
        Universe::Fixed(universe) => fixed_search(spec, universe),
        Universe::Bounded {
            world_count_max,
            atoms,
        } => bounded_search(spec, *world_count_max, atoms),
    }
}

// ---------------------------------------------------------------------
// Fixed-universe mode
// ---------------------------------------------------------------------

fn fixed_search(spec: &ModelSearchSpec, universe: &FixedUniverse) -> Result<SearchVerdict> {
    let n = universe.worlds.len();
    if n == 0 || n > FIXED_WORLD_LIMIT {
        return Err(LogicError::BoundExceeded {
            requested: n,
            max: FIXED_WORLD_LIMIT,
        });
    }
    let world_index: BTreeMap<&str, usize> = universe
        .worlds
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    if world_index.len() != n {
        let dup = universe
            .worlds
            .iter()
            .find(|w| universe.worlds.iter().filter(|v| v == w).count() > 1)
            .expect("duplicate exists");
        return Err(LogicError::DuplicateWorld(dup.clone()));
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };

    for properties in spec.frame.values() {
        for property in properties {
            if !matches!(property, FrameProperty::Reflexive | FrameProperty::Serial) {
                return Err(LogicError::UnsupportedInFixedMode(format!(
                    "frame property '{property}' (only reflexive and serial reduce to \
                     maximal-relation checks)"
                )));
            }
        }
    }

    // Box-free world masks for every constraint formula.
    let eval_mask = |formula: &Formula| -> Result<u32> {
        if !formula.is_box_free() {
            return Err(LogicError::UnsupportedInFixedMode(format!(
                "formula '{formula}' contains a modality; fixed-universe constraints must be \
                 box-free (modal structure is encoded as forbidden pairs and witnesses)"
            )));
        }
        let mut mask = 0u32;
        for w in 0..n {
            if eval_box_free(formula, |atom| {
                universe
                    .valuation
                    .get(atom)
                    .map(|worlds| worlds.contains(&universe.worlds[w]))
                    .ok_or_else(|| LogicError::UnknownAtom(atom.to_owned()))
            })? {
                mask |= 1 << w;
            }
        }
        Ok(mask)
    };

    let point = match &universe.point {
        Some(name) => Some(
            *world_index
                .get(name.as_str())
                .ok_or_else(|| LogicError::UnknownWorld(name.clone()))?,
        ),
        None => None,
    };
    if point.is_none() && !spec.must_hold_at_point.is_empty() {
        return Err(LogicError::UnsupportedInFixedMode(
            "point formulas require a pinned point world".into(),
        ));
    }

    // Validity constraints become "subset must avoid these worlds" masks.
    let mut validity_bad: Vec<(String, u32)> = Vec::new();
    for formula in &spec.must_hold {
        let ok_mask = eval_mask(formula)?;
        validity_bad.push((format!("validity:{formula}"), full & !ok_mask));
    }
    // Point constraints are world-independent of the subset choice.
    let mut point_failures: Vec<String> = Vec::new();
    for formula in &spec.must_hold_at_point {
        let ok_mask = eval_mask(formula)?;
        let p = point.expect("checked above");
        if ok_mask & (1 << p) == 0 {
            point_failures.push(format!("point:{formula}"));
        }
    }

    // Admissible-successor masks: adm[agent][w] = worlds w' with (w, w')
    // not forbidden.
    let agent_list: Vec<&Agent> = spec.agents.iter().collect();
    let mut adm: BTreeMap<&Agent, Vec<u32>> = BTreeMap::new();
    for agent in &agent_list {
        let mut rows = vec![full; n];
        if let Some(pairs) = spec.forbidden_pairs.get(agent) {
            for (from, to) in pairs {
                let f = *world_index
                    .get(from.as_str())
                    .ok_or_else(|| LogicError::UnknownWorld(from.clone()))?;
                let t = *world_index
                    .get(to.as_str())
                    .ok_or_else(|| LogicError::UnknownWorld(to.clone()))?;
                rows[f] &= !(1 << t);
            }
        }
        adm.insert(agent, rows);
    }
    for agent in spec.forbidden_pairs.keys() {
        if !spec.agents.contains(agent) {
            return Err(LogicError::UnknownAgent(agent.0.clone()));
        }
    }

    #[derive(Clone)]
    struct PreparedWitness {
        constraint_id: String,
        scope_mask: u32,
        /// Per source world: admissible successors that satisfy the target.
        reachable: Vec<u32>,
    }
    let mut witnesses: Vec<PreparedWitness> = Vec::new();
    for constraint in &spec.required_witnesses {
        let agent_pos = agent_list
            .iter()
            .position(|a| **a == constraint.agent)
            .ok_or_else(|| LogicError::UnknownAgent(constraint.agent.0.clone()))?;
        let target_mask = eval_mask(&constraint.target)?;
        let scope_mask = match &constraint.scope {
            WitnessScope::AllWorlds => full,
            WitnessScope::Worlds(names) => {
                let mut mask = 0u32;
                for name in names {
                    let w = *world_index
                        .get(name.as_str())
                        .ok_or_else(|| LogicError::UnknownWorld(name.clone()))?;
                    mask |= 1 << w;
                }
                mask
            }
        };
        let rows = &adm[agent_list[agent_pos]];
        witnesses.push(PreparedWitness {
            constraint_id: format!("witness:{}:{}", constraint.agent, constraint.target),
            scope_mask,
            reachable: (0..n).map(|w| rows[w] & target_mask).collect(),
        });
    }

    let needs = |agent: &Agent, property: FrameProperty| {
        spec.frame
            .get(agent)
            .map(|set| set.contains(&property))
            .unwrap_or(false)
    };

    let mut log = RejectionLog::default();
    let mut examined = 0u64;
    let describe = |subset: u32| -> String {
        let names: Vec<&str> = (0..n)
            .filter(|w| subset & (1 << w) != 0)
            .map(|w| universe.worlds[w].as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    };

    'subsets: for subset in 1..=full {
        if let Some(p) = point {
            if subset & (1 << p) == 0 {
                continue;
            }
        }
        examined += 1;

        for (id, bad) in &validity_bad {
            if subset & bad != 0 {
                log.record(id, || describe(subset));
                continue 'subsets;
            }
        }
        if let Some(id) = point_failures.first() {
            log.record(id, || describe(subset));
            continue 'subsets;
        }
        for agent in &agent_list {
            let rows = &adm[*agent];
            if needs(agent, FrameProperty::Reflexive) {
                for (w, &row) in rows.iter().enumerate() {
                    if subset & (1 << w) != 0 && row & (1 << w) == 0 {
                        log.record(
                            &format!("reflexive:{agent}:forbidden-diagonal"),
                            || format!("world {} in {}", universe.worlds[w], describe(subset)),
                        );
                        continue 'subsets;
                    }
                }
            }
            if needs(agent, FrameProperty::Serial) || needs(agent, FrameProperty::Reflexive) {
                for (w, &row) in rows.iter().enumerate() {
                    if subset & (1 << w) != 0 && row & subset == 0 {
                        log.record(
                            &format!("serial:{agent}:no-admissible-successor"),
                            || format!("world {} in {}", universe.worlds[w], describe(subset)),
                        );
                        continue 'subsets;
                    }
                }
            }
        }
        for witness in &witnesses {
            let sources = subset & witness.scope_mask;
            for w in 0..n {
                if sources & (1 << w) != 0 && witness.reachable[w] & subset == 0 {
                    log.record(&witness.constraint_id, || {
                        format!("world {} in {}", universe.worlds[w], describe(subset))
                    });
                    continue 'subsets;
                }
            }
        }

        // Smallest surviving subset: materialize the maximal admissible
        // relations and hand the model to the self-audit.
        let result = materialize_fixed(spec, universe, subset, &world_index, &adm, point)?;
        audit(spec, &result)?;
        return Ok(SearchVerdict::Sat(Box::new(result)));
    }

    Ok(SearchVerdict::Unsat(UnsatCertificate {
        search_space: format!(
            "all {} sub-universes of the {}-world set{}",
            if point.is_some() {
                1u64 << (n - 1)
            } else {
                (1u64 << n) - 1
            },
            n,
            match point {
                Some(p) => format!(" containing {}", universe.worlds[p]),
                None => String::new(),
            }
        ),
        candidates_examined: examined,
        rejections: log.into_signatures(),
    }))
}

fn materialize_fixed(
    spec: &ModelSearchSpec,
    universe: &FixedUniverse,
    subset: u32,
    world_index: &BTreeMap<&str, usize>,
    adm: &BTreeMap<&Agent, Vec<u32>>,
    point: Option<usize>,
) -> Result<SatResult> {
    let n = universe.worlds.len();
    let kept: Vec<usize> = (0..n).filter(|w| subset & (1 << w) != 0).collect();
    let names: Vec<String> = kept.iter().map(|&w| universe.worlds[w].clone()).collect();
    let reindex: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &w)| (w, i)).collect();

    let mut relations: BTreeMap<Agent, Vec<(String, String)>> = BTreeMap::new();
    for agent in &spec.agents {
        let rows = &adm[agent];
        let mut pairs = Vec::new();
        for &from in &kept {
            for &to in &kept {
                if rows[from] & (1 << to) != 0 {
                    pairs.push((
                        universe.worlds[from].clone(),
                        universe.worlds[to].clone(),
                    ));
                }
            }
        }
        relations.insert(agent.clone(), pairs);
    }
    let frame = KripkeFrame::new(names, spec.agents.clone(), relations)?;
    let valuation: BTreeMap<String, Vec<String>> = universe
        .valuation
        .iter()
        .map(|(atom, worlds)| {
            (
                atom.clone(),
                worlds
                    .iter()
                    .filter(|w| {
                        world_index
                            .get(w.as_str())
                            .is_some_and(|i| reindex.contains_key(i))
                    })
                    .cloned()
                    .collect(),
            )
        })
        .collect();
    let point_name = point.map(|p| universe.worlds[p].clone());
    let model = KripkeModel::new(frame, valuation, point_name.clone())?;
    Ok(SatResult {
        model,
        point: point_name,
    })
}

// ---------------------------------------------------------------------
// Bounded mode
// ---------------------------------------------------------------------

fn bounded_search(
    spec: &ModelSearchSpec,
    world_count_max: usize,
    declared_atoms: &[String],
) -> Result<SearchVerdict> {
    if world_count_max == 0 || world_count_max > GENERIC_WORLD_LIMIT {
        return Err(LogicError::BoundExceeded {
            requested: world_count_max,
            max: GENERIC_WORLD_LIMIT,
        });
    }
    // Atom set: declared plus everything mentioned by constraint formulas.
    let mut atoms: BTreeSet<String> = declared_atoms.iter().cloned().collect();
    let check_agents = |formula: &Formula| -> Result<()> {
        for agent in formula.agents() {
            if !spec.agents.contains(agent) {
                return Err(LogicError::UnknownAgent(agent.0.clone()));
            }
        }
        Ok(())
    };
    for formula in spec
        .must_hold
        .iter()
        .chain(&spec.must_hold_at_point)
        .chain(spec.required_witnesses.iter().map(|w| &w.target))
    {
        check_agents(formula)?;
        atoms.extend(formula.atoms().iter().map(|a| (*a).to_owned()));
    }
    for constraint in &spec.required_witnesses {
        if !spec.agents.contains(&constraint.agent) {
            return Err(LogicError::UnknownAgent(constraint.agent.0.clone()));
        }
    }
    let atoms: Vec<String> = atoms.into_iter().collect();

    let mut log = RejectionLog::default();
    let mut examined = 0u64;

    for n in 1..=world_count_max {
        let worlds: Vec<String> = (0..n).map(|w| format!("w{w}")).collect();
        let resolve = |name: &str| worlds.iter().position(|w| w == name);

        // Forbidden pairs that name worlds beyond this n constrain larger
        // universes only.
        let mut forbidden: BTreeMap<&Agent, BTreeSet<(usize, usize)>> = BTreeMap::new();
        for (agent, pairs) in &spec.forbidden_pairs {
            if !spec.agents.contains(agent) {
                return Err(LogicError::UnknownAgent(agent.0.clone()));
            }
            let resolved = pairs
                .iter()
                .filter_map(|(f, t)| Some((resolve(f)?, resolve(t)?)))
                .collect();
            forbidden.insert(agent, resolved);
        }

        // Candidate relations per agent, in ascending bitmask order.
        let mut candidates: Vec<Vec<u64>> = Vec::with_capacity(spec.agents.len());
        for agent in &spec.agents {
            let properties = spec.frame.get(agent).cloned().unwrap_or_default();
            let empty = BTreeSet::new();
            let banned = forbidden.get(agent).unwrap_or(&empty);
            let list = enumerate_relations(n, &properties, banned);
            if list.is_empty() {
                log.record(&format!("frame:{agent}:no-admissible-relation"), || {
                    format!("n={n}")
                });
            }
            candidates.push(list);
        }

        if candidates.iter().any(|list| list.is_empty()) {
            continue;
        }

        let valuation_count = 1u64 << (n * atoms.len());
        for valuation_code in 0..valuation_count {
            // Decode: atom i owns bit block i (least significant = first
            // atom), each block is a world mask.
            let atom_mask = |i: usize| ((valuation_code >> (i * n)) as u32) & ((1u32 << n) - 1);

            let mut combo = vec![0usize; spec.agents.len()];
            'combos: loop {
                examined += 1;
                let model = build_bounded_model(
                    spec,
                    &worlds,
                    &atoms,
                    atom_mask,
                    &candidates,
                    &combo,
                )?;

                match bounded_model_passes(spec, &model, &mut log, n, valuation_code, &combo)? {
                    Some(point) => {
                        let point_name = point.map(|p| worlds[p].clone());
                        let result = SatResult {
                            model: model.with_point(point),
                            point: point_name,
                        };
                        audit(spec, &result)?;
                        return Ok(SearchVerdict::Sat(Box::new(result)));
                    }
                    None => {
                        // Advance the agent-relation odometer (last agent
                        // fastest).
                        let mut slot = spec.agents.len();
                        loop {
                            if slot == 0 {
                                break 'combos;
                            }
                            slot -= 1;
                            combo[slot] += 1;
                            if combo[slot] < candidates[slot].len() {
                                break;
                            }
                            combo[slot] = 0;
                        }
                        if spec.agents.is_empty() {
                            break 'combos;
                        }
                    }
                }
            }
        }
    }

    Ok(SearchVerdict::Unsat(UnsatCertificate {
        search_space: format!(
            "synthesized universes of 1..={world_count_max} worlds, {} atom(s), {} agent(s)",
            atoms.len(),
            spec.agents.len()
        ),
        candidates_examined: examined,
        rejections: log.into_signatures(),
    }))
}

fn build_bounded_model(
    spec: &ModelSearchSpec,
    worlds: &[String],
    atoms: &[String],
    atom_mask: impl Fn(usize) -> u32,
    candidates: &[Vec<u64>],
    combo: &[usize],
) -> Result<KripkeModel> {
    let n = worlds.len();
    let mut relations: BTreeMap<Agent, Vec<(String, String)>> = BTreeMap::new();
    for (slot, agent) in spec.agents.iter().enumerate() {
        let mask = candidates[slot][combo[slot]];
        let mut pairs = Vec::new();
        for from in 0..n {
            for to in 0..n {
                if mask & (1u64 << (from * n + to)) != 0 {
                    pairs.push((worlds[from].clone(), worlds[to].clone()));
                }
            }
        }
        relations.insert(agent.clone(), pairs);
    }
    let frame = KripkeFrame::new(worlds.to_vec(), spec.agents.clone(), relations)?;
    let valuation: BTreeMap<String, Vec<String>> = atoms
        .iter()
        .enumerate()
        .map(|(i, atom)| {
            let mask = atom_mask(i);
            (
                atom.clone(),
                (0..n)
                    .filter(|w| mask & (1 << w) != 0)
                    .map(|w| worlds[w].clone())
                    .collect(),
            )
        })
        .collect();
    KripkeModel::new(frame, valuation, None)
}

/// Returns `Some(point)` when the model passes all constraints (the point
/// is `None` when no point formulas were given), or `None` with a logged
/// rejection.
fn bounded_model_passes(
    spec: &ModelSearchSpec,
    model: &KripkeModel,
    log: &mut RejectionLog,
    n: usize,
    valuation_code: u64,
    combo: &[usize],
) -> Result<Option<Option<usize>>> {
    let describe = || format!("n={n},valuation=0x{valuation_code:x},relations={combo:?}");

    for formula in &spec.must_hold {
        if !valid_in_model(model, formula)? {
            log.record(&format!("validity:{formula}"), describe);
            return Ok(None);
        }
    }
    for constraint in &spec.required_witnesses {
        let diamond = Formula::Diamond(
            constraint.agent.clone(),
            Box::new(constraint.target.clone()),
        );
        let sources: Vec<usize> = match &constraint.scope {
            WitnessScope::AllWorlds => (0..model.frame().world_count()).collect(),
            WitnessScope::Worlds(names) => names
                .iter()
                .filter_map(|name| model.frame().world_index(name).ok())
                .collect(),
        };
        for world in sources {
            if !satisfies(model, world, &diamond)? {
                log.record(
                    &format!("witness:{}:{}", constraint.agent, constraint.target),
                    describe,
                );
                return Ok(None);
            }
        }
    }
    if spec.must_hold_at_point.is_empty() {
        return Ok(Some(None));
    }
    'points: for world in 0..model.frame().world_count() {
        for formula in &spec.must_hold_at_point {
            if !satisfies(model, world, formula)? {
                continue 'points;
            }
        }
        return Ok(Some(Some(world)));
    }
    log.record("point:no-world-satisfies-point-formulas", describe);
    Ok(None)
}

/// All relation bitmasks over `n` worlds satisfying the given properties
/// and avoiding the banned pairs, ascending. Bit `from*n + to` encodes the
/// pair (from, to).
fn enumerate_relations(
    n: usize,
    properties: &BTreeSet<FrameProperty>,
    banned: &BTreeSet<(usize, usize)>,
) -> Vec<u64> {
    let bits = n * n;
    let mut forced_in = 0u64;
    let mut forced_out = 0u64;
    for &(from, to) in banned {
        forced_out |= 1u64 << (from * n + to);
    }
    if properties.contains(&FrameProperty::Reflexive) {
        for w in 0..n {
            forced_in |= 1u64 << (w * n + w);
        }
    }
    if forced_in & forced_out != 0 {
        return Vec::new();
    }

    // Free positions are everything not forced either way; enumerate their
    // assignments in ascending order of the resulting full mask.
    let free: Vec<usize> = (0..bits)
        .filter(|b| forced_in & (1u64 << b) == 0 && forced_out & (1u64 << b) == 0)
        .collect();
    let mut result = Vec::new();
    for choice in 0u64..(1u64 << free.len()) {
        let mut mask = forced_in;
        for (i, &bit) in free.iter().enumerate() {
            if choice & (1u64 << i) != 0 {
                mask |= 1u64 << bit;
            }
        }
        if relation_satisfies(n, mask, properties) {
            result.push(mask);
        }
    }
    result.sort_unstable();
    result
}

fn relation_satisfies(n: usize, mask: u64, properties: &BTreeSet<FrameProperty>) -> bool {
    let has = |from: usize, to: usize| mask & (1u64 << (from * n + to)) != 0;
    for property in properties {
        let ok = match property {
            FrameProperty::Reflexive => (0..n).all(|w| has(w, w)),
            FrameProperty::Serial => (0..n).all(|w| (0..n).any(|v| has(w, v))),
            FrameProperty::Symmetric => (0..n)
                .all(|w| (0..n).all(|v| !has(w, v) || has(v, w))),
            FrameProperty::Transitive => (0..n).all(|w1| {
                (0..n).all(|w2| {
                    !has(w1, w2) || (0..n).all(|w3| !has(w2, w3) || has(w1, w3))
                })
            }),
            FrameProperty::Euclidean => (0..n).all(|w| {
                (0..n).all(|w1| {
                    !has(w, w1) || (0..n).all(|w2| !has(w, w2) || has(w1, w2))
                })
            }),
        };
        if !ok {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------
// Self-audit
// ---------------------------------------------------------------------

/// Independently re-verifies a claimed SAT result through the public
/// evaluator and frame checker. Any failure is a kernel bug surfaced as
/// `SelfAuditFailed` rather than a silently wrong answer.
fn audit(spec: &ModelSearchSpec, result: &SatResult) -> Result<()> {
    let model = &result.model;
    let fail = |what: String| Err(LogicError::SelfAuditFailed(what));

    for (agent, properties) in &spec.frame {
        for property in properties {
            if let Some(violation) = check_frame_property(model.frame(), *property, agent)? {
                return fail(format!("claimed model violates {violation}"));
            }
        }
    }
    for (agent, pairs) in &spec.forbidden_pairs {
        let relation = model.frame().relation(agent)?;
        for (from, to) in pairs {
            let (Ok(f), Ok(t)) = (
                model.frame().world_index(from),
                model.frame().world_index(to),
            ) else {
                continue; // pair talks about worlds outside the model
            };
            if relation.contains(&(f, t)) {
                return fail(format!(
                    "claimed model contains forbidden pair ({from}, {to}) for agent {agent}"
                ));
            }
        }
    }
    for formula in &spec.must_hold {
        if !valid_in_model(model, formula)? {
            return fail(format!("claimed model does not validate '{formula}'"));
        }
    }
    if !spec.must_hold_at_point.is_empty() {
        let Some(point) = model.point() else {
            return fail("claimed model lacks a point".into());
        };
        for formula in &spec.must_hold_at_point {
            if !satisfies(model, point, formula)? {
                return fail(format!("claimed point does not satisfy '{formula}'"));
            }
        }
    }
    for constraint in &spec.required_witnesses {
        let diamond = Formula::Diamond(
            constraint.agent.clone(),
            Box::new(constraint.target.clone()),
        );
        let sources: Vec<usize> = match &constraint.scope {
            WitnessScope::AllWorlds => (0..model.frame().world_count()).collect(),
            WitnessScope::Worlds(names) => names
                .iter()
                .filter_map(|name| model.frame().world_index(name).ok())
                .collect(),
        };
        for world in sources {
            if !satisfies(model, world, &diamond)? {
                return fail(format!(
                    "claimed model misses witness '{}' for agent {} at {}",
                    constraint.target,
                    constraint.agent,
                    model.frame().world_name(world)
                ));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Box-free evaluation against a raw valuation
// ---------------------------------------------------------------------

fn eval_box_free(
    formula: &Formula,
    lookup: impl Fn(&str) -> Result<bool> + Copy,
) -> Result<bool> {
    match formula {
        Formula::Atom(name) => lookup(name),
        Formula::Not(inner) => Ok(!eval_box_free(inner, lookup)?),
        Formula::And(a, b) => Ok(eval_box_free(a, lookup)? && eval_box_free(b, lookup)?),
        Formula::Or(a, b) => Ok(eval_box_free(a, lookup)? || eval_box_free(b, lookup)?),
        Formula::Implies(a, b) => Ok(!eval_box_free(a, lookup)? || eval_box_free(b, lookup)?),
        Formula::Equiv(a, b) => Ok(eval_box_free(a, lookup)? == eval_box_free(b, lookup)?),
        Formula::Box(_, _) | Formula::Diamond(_, _) => Err(LogicError::UnsupportedInFixedMode(
            format!("modality inside '{formula}'"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn reflexive_validity_conflicts_with_point_negation() {
        let spec = ModelSearchSpec {
            agents: vec![Agent::new("x")],
            universe: Universe::Bounded {
                world_count_max: 2,
                atoms: vec!["p".into()],
            },
            frame: BTreeMap::from([(
                Agent::new("x"),
                BTreeSet::from([FrameProperty::Reflexive]),
            )]),
            must_hold: vec![parse("p").unwrap()],
            must_hold_at_point: vec![parse("~p").unwrap()],
            ..Default::default()
        };
        let verdict = find_model(&spec).unwrap();
        match verdict {
            SearchVerdict::Unsat(cert) => {
                assert!(cert.candidates_examined > 0);
                assert!(!cert.rejections.is_empty());
            }
            SearchVerdict::Sat(_) => panic!("expected UNSAT"),
        }
    }

    #[test]
    fn nested_certainty_with_doubt_needs_two_worlds() {
        let spec = ModelSearchSpec {
            agents: vec![Agent::new("x"), Agent::new("y")],
            universe: Universe::Bounded {
                world_count_max: 2,
                atoms: vec![],
            },
            frame: BTreeMap::from([
                (
                    Agent::new("x"),
                    BTreeSet::from([
                        FrameProperty::Serial,
                        FrameProperty::Transitive,
                        FrameProperty::Euclidean,
                    ]),
                ),
                (
                    Agent::new("y"),
                    BTreeSet::from([
                        FrameProperty::Serial,
                        FrameProperty::Transitive,
                        FrameProperty::Euclidean,
                    ]),
                ),
            ]),
            must_hold_at_point: vec![parse("[x][y]phi & <x>~phi").unwrap()],
            ..Default::default()
        };
        let verdict = find_model(&spec).unwrap();
        let SearchVerdict::Sat(result) = verdict else {
            panic!("expected SAT");
        };
        assert_eq!(result.model.frame().world_count(), 2);
        let point = result.model.point().unwrap();
        assert!(satisfies(
            &result.model,
            point,
            &parse("[x][y]phi & <x>~phi").unwrap()
        )
        .unwrap());
    }

    #[test]
    fn same_shape_is_unsat_under_reflexivity() {
        let spec = ModelSearchSpec {
            agents: vec![Agent::new("x"), Agent::new("y")],
            universe: Universe::Bounded {
                world_count_max: 2,
                atoms: vec![],
            },
            frame: BTreeMap::from([
                (
                    Agent::new("x"),
                    BTreeSet::from([FrameProperty::Reflexive]),
                ),
                (
                    Agent::new("y"),
                    BTreeSet::from([FrameProperty::Reflexive]),
                ),
            ]),
            must_hold_at_point: vec![parse("[x][y]phi & <x>~phi").unwrap()],
            ..Default::default()
        };
        assert!(!find_model(&spec).unwrap().is_sat());
    }

    #[test]
    fn fixed_mode_respects_forbidden_diagonals() {
        let universe = FixedUniverse {
            worlds: vec!["u".into(), "v".into()],
            valuation: BTreeMap::from([(
                "p".to_string(),
                BTreeSet::from(["u".to_string()]),
            )]),
            point: Some("u".into()),
        };
        let base = ModelSearchSpec {
            agents: vec![Agent::new("x")],
            universe: Universe::Fixed(universe.clone()),
            frame: BTreeMap::from([(
                Agent::new("x"),
                BTreeSet::from([FrameProperty::Reflexive]),
            )]),
            must_hold_at_point: vec![parse("p").unwrap()],
            ..Default::default()
        };

        // Unconstrained diagonal: the singleton {u} survives.
        let verdict = find_model(&base).unwrap();
        let SearchVerdict::Sat(result) = verdict else {
            panic!("expected SAT")
        };
        assert_eq!(result.model.frame().worlds(), &["u".to_string()]);

        // Forbidding (u,u) kills every reflexive sub-universe through u.
        let mut poisoned = base;
        poisoned.forbidden_pairs = BTreeMap::from([(
            Agent::new("x"),
            BTreeSet::from([("u".to_string(), "u".to_string())]),
        )]);
        let verdict = find_model(&poisoned).unwrap();
        let SearchVerdict::Unsat(cert) = verdict else {
            panic!("expected UNSAT")
        };
        assert_eq!(cert.candidates_examined, 2);
        assert_eq!(cert.rejections.len(), 1);
        assert!(cert.rejections[0]
            .constraint
            .starts_with("reflexive:x:forbidden-diagonal"));
    }

    #[test]
    fn fixed_mode_witness_requires_reachable_target() {
        let universe = FixedUniverse {
            worlds: vec!["u".into(), "v".into()],
            valuation: BTreeMap::from([("p".to_string(), BTreeSet::from(["v".to_string()]))]),
            point: Some("u".into()),
        };
        let spec = ModelSearchSpec {
            agents: vec![Agent::new("x")],
            universe: Universe::Fixed(universe),
            frame: BTreeMap::from([(Agent::new("x"), BTreeSet::from([FrameProperty::Serial]))]),
            required_witnesses: vec![WitnessConstraint {
                agent: Agent::new("x"),
                scope: WitnessScope::AllWorlds,
                target: parse("p").unwrap(),
            }],
            ..Default::default()
        };
        let SearchVerdict::Sat(result) = find_model(&spec).unwrap() else {
            panic!("expected SAT")
        };
        // The singleton {u} cannot witness p (p holds only at v), so the
        // first surviving subset must include v.
        assert!(result
            .model
            .frame()
            .worlds()
            .contains(&"v".to_string()));
    }

    #[test]
    fn fixed_mode_rejects_modal_constraints() {
        let universe = FixedUniverse {
            worlds: vec!["u".into()],
            valuation: BTreeMap::from([("p".to_string(), BTreeSet::new())]),
            point: None,
        };
        let spec = ModelSearchSpec {
            agents: vec![Agent::new("x")],
            universe: Universe::Fixed(universe),
            must_hold: vec![parse("[x]p").unwrap()],
            ..Default::default()
        };
        assert!(matches!(
            find_model(&spec),
            Err(LogicError::UnsupportedInFixedMode(_))
        ));
    }

    #[test]
    fn bound_above_the_cap_is_rejected() {
        let spec = ModelSearchSpec {
            agents: vec![],
            universe: Universe::Bounded {
                world_count_max: 7,
                atoms: vec![],
            },
            ..Default::default()
        };
        assert!(matches!(
            find_model(&spec),
            Err(LogicError::BoundExceeded { .. })
        ));
    }
}

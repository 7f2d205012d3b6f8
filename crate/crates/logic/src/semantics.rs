//! Satisfaction evaluation over pointed Kripke models.

use crate::formula::Formula;
use crate::model::KripkeModel;
use crate::{LogicError, Result};

/// Whether `formula` holds at the world with the given index.
///
/// Certainty (`[x]φ`) quantifies over all x-accessible worlds; possibility
/// (`<x>φ`) is evaluated as its dual. Unknown atoms and undeclared agents
/// are hard errors, never silent falsity.
pub fn satisfies(model: &KripkeModel, world: usize, formula: &Formula) -> Result<bool> {
    if world >= model.frame().world_count() {
        return Err(LogicError::UnknownWorld(format!("index {world}")));
    }
    eval(model, world, formula)
}

/// Whether `formula` holds at the named world.
pub fn satisfies_at(model: &KripkeModel, world: &str, formula: &Formula) -> Result<bool> {
    let index = model.frame().world_index(world)?;
    eval(model, index, formula)
}

fn eval(model: &KripkeModel, world: usize, formula: &Formula) -> Result<bool> {
    match formula {
        Formula::Atom(name) => model.atom_true_at(name, world),
        Formula::Not(inner) => Ok(!eval(model, world, inner)?),
        Formula::And(lhs, rhs) => Ok(eval(model, world, lhs)? && eval(model, world, rhs)?),
        Formula::Or(lhs, rhs) => Ok(eval(model, world, lhs)? || eval(model, world, rhs)?),
        Formula::Implies(lhs, rhs) => Ok(!eval(model, world, lhs)? || eval(model, world, rhs)?),
        Formula::Equiv(lhs, rhs) => Ok(eval(model, world, lhs)? == eval(model, world, rhs)?),
        Formula::Box(agent, inner) => {
            for successor in model.frame().successors(agent, world)? {
                if !eval(model, successor, inner)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Diamond(agent, inner) => {
            for successor in model.frame().successors(agent, world)? {
                if eval(model, successor, inner)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Whether `formula` holds at every world of the model.
pub fn valid_in_model(model: &KripkeModel, formula: &Formula) -> Result<bool> {
    for world in 0..model.frame().world_count() {
        if !eval(model, world, formula)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Agent;
    use crate::model::KripkeFrame;
    use crate::parse::parse;
    use std::collections::BTreeMap;

    /// Two worlds; x sees its own world, y sees w1 from both; phi true at
    /// w1 only. At w0: [x][y]phi holds, <x>~phi holds, phi fails.
    fn nested_certainty_model() -> KripkeModel {
        let frame = KripkeFrame::new(
            vec!["w0".into(), "w1".into()],
            vec![Agent::new("x"), Agent::new("y")],
            BTreeMap::from([
                (
                    Agent::new("x"),
                    vec![("w0".into(), "w0".into()), ("w1".into(), "w1".into())],
                ),
                (
                    Agent::new("y"),
                    vec![("w0".into(), "w1".into()), ("w1".into(), "w1".into())],
                ),
            ]),
        )
        .unwrap();
        KripkeModel::new(
            frame,
            BTreeMap::from([("phi".into(), vec!["w1".into()])]),
            Some("w0".into()),
        )
        .unwrap()
    }

    #[test]
    fn nested_certainty_with_local_doubt() {
        let model = nested_certainty_model();
        let f = parse("[x][y]phi & <x>~phi").unwrap();
        assert!(satisfies_at(&model, "w0", &f).unwrap());
    }

    #[test]
    fn tautologies_hold_everywhere() {
        let model = nested_certainty_model();
        let f = parse("phi | ~phi").unwrap();
        assert!(valid_in_model(&model, &f).unwrap());
    }

    #[test]
    fn diamond_is_the_dual_of_box() {
        let model = nested_certainty_model();
        let direct = parse("<y>~phi").unwrap();
        let dual = parse("~[y]~~phi").unwrap();
        for world in 0..2 {
            assert_eq!(
                satisfies(&model, world, &direct).unwrap(),
                satisfies(&model, world, &dual).unwrap()
            );
        }
    }

    #[test]
    fn unknown_atom_is_an_error() {
        let model = nested_certainty_model();
        let f = parse("mystery").unwrap();
        assert!(matches!(
            satisfies_at(&model, "w0", &f),
            Err(LogicError::UnknownAtom(_))
        ));
    }

    #[test]
    fn unknown_agent_is_an_error() {
        let model = nested_certainty_model();
        let f = parse("[z]phi").unwrap();
        assert!(matches!(
            satisfies_at(&model, "w0", &f),
            Err(LogicError::UnknownAgent(_))
        ));
    }

    #[test]
    fn validity_fails_where_a_world_disagrees() {
        let model = nested_certainty_model();
        let t_instance = parse("[x]phi -> phi").unwrap();
        // Reflexive x: T-instance is valid.
        assert!(valid_in_model(&model, &t_instance).unwrap());
        let t_for_y = parse("[y]phi -> phi").unwrap();
        // y is not reflexive at w0: [y]phi holds there but phi does not.
        assert!(!valid_in_model(&model, &t_for_y).unwrap());
    }
}

//! Command-line workbench: evaluate formulas in models, check frame
//! properties, run the bounded model finder, recompute the quantum
//! protocol table, and execute the scenario runs and ablations.
//!
//! Exit codes follow one convention across subcommands: 0 when the verdict
//! is the expected one (the scenario derives its contradiction, an ablation
//! that admits a model finds one, `eval` prints true, a checked property
//! holds), 1 when the verdict is unexpected, and 2 for usage or input
//! errors.  Reports print to stdout; identical invocations produce
//! byte-identical output.

mod specfile;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use frlab_halpern::{holds, holds_generalized, induced_kripke, load_structure, LoadedStructure};
use frlab_logic::search::{find_model, SearchVerdict};
use frlab_logic::{check_frame_property, parse, satisfies, Agent, FrameProperty, ModelFile};
use frlab_quantum::{
    fail_state, plus_state, protocol_expectations, protocol_unitaries, DenseOperator, StateVector,
    SystemLabel,
};
use frlab_scenario::{
    ablate, run_consistency_lemma, run_nesting_lemma, run_theorem_fr, run_theorem_fr_star,
    Ablation, FrameChoice, ScenarioReport, Verdict,
};

use specfile::SpecFile;

#[derive(Parser)]
#[command(
    name = "frlab",
    version,
    about = "Workbench for a multi-agent no-go argument",
    long_about = "Workbench for a multi-agent no-go argument: a small quantum engine \
                  recomputes the protocol's expectation table, a Kripke kernel checks \
                  and searches multi-agent models, and the scenario runs combine the \
                  two into fully re-verified derivations."
)]
struct Cli {
    /// Numeric tolerance: amplitudes, probabilities, and "probability 1" all compare within this bound
    #[arg(long, global = true, default_value_t = frlab_scenario::DEFAULT_TOLERANCE)]
    tolerance: f64,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Line-oriented text
    Human,
    /// Structured JSON documents
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a world of a model file
    ///
    /// Relational models evaluate boxes over accessibility; weighted models
    /// evaluate them as probability-1 certainty. Prints true or false; exit
    /// code 0 means true.
    Eval {
        /// Model file (relational or weighted)
        #[arg(long)]
        model: PathBuf,
        /// World to evaluate at (defaults to the model's point)
        #[arg(long)]
        world: Option<String>,
        /// Formula in the kernel grammar, e.g. "[x][y]phi & <x>~phi"
        formula: String,
    },
    /// Check a frame property of a model's accessibility relations
    ///
    /// Weighted models are checked on the relation their weights induce.
    /// Exit code 0 means the property holds for every checked agent.
    CheckFrame {
        /// Model file (relational or weighted)
        #[arg(long)]
        model: PathBuf,
        /// Property to check
        #[arg(long, value_enum)]
        property: PropertyArg,
        /// Restrict the check to one agent (defaults to all agents)
        #[arg(long)]
        agent: Option<String>,
    },
    /// Run the bounded model finder on a search-specification file
    ///
    /// Prints the model on success or the exhaustion certificate otherwise.
    /// Exit code 0 means a model was found.
    FindModel {
        /// Search specification (JSON with formulas as grammar strings)
        #[arg(long)]
        spec: PathBuf,
    },
    /// Recompute the protocol expectation table and operator checks
    ///
    /// Exit code 0 means every value lands within the tolerance and every
    /// operator check passes.
    QuantumVerify,
    /// Execute a scenario run end to end
    ///
    /// Exit code 0 means the run reproduced its established verdict: a
    /// contradiction for the full argument on either frame, validity for the
    /// consistency lemma, a countermodel for the nesting lemma.
    FrRun {
        /// Which run to execute (lemma targets ignore --frame)
        #[arg(long, value_enum, default_value_t = Target::Theorem)]
        target: Target,
        /// Frame discipline imposed on every agent
        #[arg(long, value_enum, default_value_t = FrameArg::Reflexive)]
        frame: FrameArg,
    },
    /// Re-run the scenario with part of the bridge-rule set removed
    ///
    /// Exit code 0 means the verdict matches the established ablation table
    /// (dropping a's copy-interaction rules or all certainty constraints
    /// admits a model; dropping the possibility witnesses admits one only on
    /// serial frames; dropping nothing reproduces the contradiction).
    FrAblate {
        /// Which rules to remove
        #[arg(long, value_enum, default_value_t = DropArg::UForA)]
        drop: DropArg,
        /// Frame discipline imposed on every agent
        #[arg(long, value_enum, default_value_t = FrameArg::Reflexive)]
        frame: FrameArg,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    Reflexive,
    Serial,
    Transitive,
    Symmetric,
    Euclidean,
}

impl PropertyArg {
    fn property(self) -> FrameProperty {
        match self {
            PropertyArg::Reflexive => FrameProperty::Reflexive,
            PropertyArg::Serial => FrameProperty::Serial,
            PropertyArg::Transitive => FrameProperty::Transitive,
            PropertyArg::Symmetric => FrameProperty::Symmetric,
            PropertyArg::Euclidean => FrameProperty::Euclidean,
        }
    }

    fn label(self) -> &'static str {
        match self {
            PropertyArg::Reflexive => "reflexive",
            PropertyArg::Serial => "serial",
            PropertyArg::Transitive => "transitive",
            PropertyArg::Symmetric => "symmetric",
            PropertyArg::Euclidean => "euclidean",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Target {
    /// The full argument on the chosen frame
    Theorem,
    /// Consistency of certainty (joint certainty of a record and its negation is impossible)
    LemmaS,
    /// Collapse of nested certainty, with its non-reflexive countermodel
    LemmaC,
    /// Every run in sequence: theorem on both frames, then both lemmas
    All,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FrameArg {
    Reflexive,
    Serial,
}

impl FrameArg {
    fn choice(self) -> FrameChoice {
        match self {
            FrameArg::Reflexive => FrameChoice::Reflexive,
            FrameArg::Serial => FrameChoice::Serial,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum DropArg {
    /// Keep every rule (reproduces the contradiction)
    None,
    /// Remove agent a's copy-interaction rules
    UForA,
    /// Remove every certainty-derived forbidden pair
    StarNecessity,
    /// Remove the possibility witnesses derived from the 11/12 weight
    StarWitness,
}

impl DropArg {
    fn ablation(self) -> Ablation {
        match self {
            DropArg::None => Ablation::None,
            DropArg::UForA => Ablation::DropCopyInteractionRules,
            DropArg::StarNecessity => Ablation::DropCertaintyConstraints,
            DropArg::StarWitness => Ablation::DropPossibilityConstraints,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tolerance.is_finite() && cli.tolerance > 0.0 && cli.tolerance < 1.0) {
        eprintln!("error: --tolerance must be finite and strictly between 0 and 1");
        return ExitCode::from(2);
    }
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Eval {
            model,
            world,
            formula,
        } => cmd_eval(&model, world, &formula, cli.tolerance, cli.format),
        Command::CheckFrame {
            model,
            property,
            agent,
        } => cmd_check_frame(&model, property, agent, cli.tolerance, cli.format),
        Command::FindModel { spec } => cmd_find_model(&spec, cli.format),
        Command::QuantumVerify => cmd_quantum_verify(cli.tolerance, cli.format),
        Command::FrRun { target, frame } => cmd_fr_run(target, frame, cli.tolerance, cli.format),
        Command::FrAblate { drop, frame } => {
            cmd_fr_ablate(drop, frame, cli.tolerance, cli.format)
        }
    }
}

fn read_model_file(path: &Path) -> Result<ModelFile, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    ModelFile::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_json(value: &serde_json::Value) {
    let mut text =
        serde_json::to_string_pretty(value).expect("JSON reports serialize infallibly");
    text.push('\n');
    print!("{text}");
}

fn exit(expected: bool) -> ExitCode {
    if expected {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_eval(
    model_path: &Path,
    world: Option<String>,
    formula_text: &str,
    tolerance: f64,
    format: Format,
) -> Result<ExitCode, String> {
    let file = read_model_file(model_path)?;
    let formula = parse(formula_text).map_err(|e| e.to_string())?;

    let (value, world_name, weighted) = if file.weights.is_some() {
        let point = file.point.clone();
        let structure = load_structure(&file, tolerance).map_err(|e| e.to_string())?;
        let name = world
            .or(point)
            .ok_or("no --world given and the model has no point")?;
        let value = match &structure {
            LoadedStructure::Single(single) => {
                let index = single.world_index(&name).map_err(|e| e.to_string())?;
                holds(single, index, &formula).map_err(|e| e.to_string())?
            }
            LoadedStructure::PerWorld(per_world) => {
                let index = per_world
                    .worlds()
                    .iter()
                    .position(|w| w == &name)
                    .ok_or_else(|| format!("unknown world {name:?}"))?;
                holds_generalized(per_world, index, &formula).map_err(|e| e.to_string())?
            }
        };
        (value, name, true)
    } else {
        let model = file.into_kripke().map_err(|e| e.to_string())?;
        let name = world
            .or_else(|| {
                model
                    .point()
                    .map(|index| model.frame().world_name(index).to_owned())
            })
            .ok_or("no --world given and the model has no point")?;
        let index = model.frame().world_index(&name).map_err(|e| e.to_string())?;
        let value = satisfies(&model, index, &formula).map_err(|e| e.to_string())?;
        (value, name, false)
    };

    match format {
        Format::Human => println!("{value}"),
        Format::Machine => print_json(&json!({
            "command": "eval",
            "formula": formula.to_string(),
            "world": world_name,
            "semantics": if weighted { "probability-1 certainty" } else { "relational" },
            "value": value,
        })),
    }
    Ok(exit(value))
}

fn cmd_check_frame(
    model_path: &Path,
    property: PropertyArg,
    agent: Option<String>,
    tolerance: f64,
    format: Format,
) -> Result<ExitCode, String> {
    let file = read_model_file(model_path)?;
    let (model, induced) = if file.weights.is_some() {
        let structure = load_structure(&file, tolerance).map_err(|e| e.to_string())?;
        let generalized = match structure {
            LoadedStructure::Single(single) => single.generalize(),
            LoadedStructure::PerWorld(per_world) => per_world,
        };
        (induced_kripke(&generalized).map_err(|e| e.to_string())?, true)
    } else {
        (file.into_kripke().map_err(|e| e.to_string())?, false)
    };

    let agents: Vec<Agent> = match agent {
        Some(name) => vec![Agent::new(name)],
        None => model.frame().agents().cloned().collect(),
    };

    let mut rows = BTreeMap::new();
    let mut all_hold = true;
    for agent in &agents {
        let violation = check_frame_property(model.frame(), property.property(), agent)
            .map_err(|e| e.to_string())?;
        all_hold &= violation.is_none();
        rows.insert(agent.0.clone(), violation);
    }

    match format {
        Format::Human => {
            for (agent, violation) in &rows {
                match violation {
                    None => println!("{agent}: {} holds", property.label()),
                    Some(violation) => println!("{agent}: {violation}"),
                }
            }
            if induced {
                println!("(checked on the accessibility relation induced by the weights)");
            }
        }
        Format::Machine => print_json(&json!({
            "command": "check-frame",
            "property": property.label(),
            "induced": induced,
            "agents": rows,
            "holds": all_hold,
        })),
    }
    Ok(exit(all_hold))
}

fn cmd_find_model(spec_path: &Path, format: Format) -> Result<ExitCode, String> {
    let text =
        fs::read_to_string(spec_path).map_err(|e| format!("{}: {e}", spec_path.display()))?;
    let spec = SpecFile::from_json(&text)?.into_spec()?;
    match find_model(&spec).map_err(|e| e.to_string())? {
        SearchVerdict::Sat(found) => {
            match format {
                Format::Human => {
                    println!("verdict: SAT");
                    match &found.point {
                        Some(point) => println!("point: {point}"),
                        None => println!("point: (none)"),
                    }
                    print!("{}", found.model.to_json());
                }
                Format::Machine => print_json(&json!({
                    "command": "find-model",
                    "verdict": "SAT",
                    "point": found.point,
                    "model": found.model.to_file(),
                })),
            }
            Ok(exit(true))
        }
        SearchVerdict::Unsat(certificate) => {
            match format {
                Format::Human => {
                    println!("verdict: UNSAT");
                    println!("candidates examined: {}", certificate.candidates_examined);
                    for rejection in &certificate.rejections {
                        println!("  {:>8} x {}", rejection.count, rejection.constraint);
                    }
                }
                Format::Machine => print_json(&json!({
                    "command": "find-model",
                    "verdict": "UNSAT",
                    "certificate": certificate,
                })),
            }
            Ok(exit(false))
        }
    }
}

fn cmd_quantum_verify(tolerance: f64, format: Format) -> Result<ExitCode, String> {
    let table = protocol_expectations();
    let expectations = [
        ("ok_c_and_zero_g", table.ok_c_and_zero_g, 0.0, "0"),
        ("joint_ok", table.joint_ok, 1.0 / 12.0, "1/12"),
        (
            "joint_ok_complement",
            table.joint_ok_complement,
            11.0 / 12.0,
            "11/12",
        ),
        ("one_g_and_zero_a", table.one_g_and_zero_a, 0.0, "0"),
        (
            "fail_d_from_plus_zero",
            table.fail_d_from_plus_zero,
            1.0,
            "1",
        ),
        (
            "not_ok_d_from_plus_zero",
            table.not_ok_d_from_plus_zero,
            1.0,
            "1",
        ),
    ];

    let unitaries = protocol_unitaries();
    let operators: [(&str, &DenseOperator, bool); 4] = [
        ("U_t1", &unitaries.u_t1, true),
        ("U_t'", &unitaries.u_tprime, true),
        ("U_t2", &unitaries.u_t2, true),
        ("U_a", &unitaries.u_a, false),
    ];

    let plus_zero = plus_state(SystemLabel('l'))
        .tensor(&StateVector::basis(vec![SystemLabel('g')], &[0]).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let mapped = unitaries.u_a.apply(&plus_zero).map_err(|e| e.to_string())?;
    let copy_ok =
        mapped.approx_eq_up_to_phase(&fail_state(SystemLabel('l'), SystemLabel('g')), tolerance);

    let mut all_ok = copy_ok;
    let mut expectation_rows = Vec::new();
    for (name, value, exact, exact_text) in expectations {
        let drift = (value - exact).abs();
        let ok = drift <= tolerance;
        all_ok &= ok;
        expectation_rows.push((name, value, exact_text, drift, ok));
    }
    let mut operator_rows = Vec::new();
    for (name, operator, self_adjoint_required) in operators {
        let unitary = operator.is_unitary(tolerance);
        let self_adjoint = operator.is_hermitian(tolerance);
        let ok = unitary && (!self_adjoint_required || self_adjoint);
        all_ok &= ok;
        operator_rows.push((name, unitary, self_adjoint, self_adjoint_required, ok));
    }

    match format {
        Format::Human => {
            println!("protocol expectation table (tolerance {tolerance:e})");
            for (name, value, exact_text, drift, ok) in &expectation_rows {
                println!(
                    "  {name:<24} {value:.16e}  expected {exact_text:<5}  drift {drift:.3e}  {}",
                    if *ok { "ok" } else { "FAILED" }
                );
            }
            println!("operators");
            for (name, unitary, self_adjoint, required, ok) in &operator_rows {
                println!(
                    "  {name:<5} unitary {}  self-adjoint {}{}  {}",
                    if *unitary { "yes" } else { "NO" },
                    if *self_adjoint { "yes" } else { "no" },
                    if *required { " (required)" } else { "" },
                    if *ok { "ok" } else { "FAILED" }
                );
            }
            println!(
                "copy interaction maps |+,0> on (l,g) to the fail state: {}",
                if copy_ok { "ok" } else { "FAILED" }
            );
            println!("verdict: {}", if all_ok { "ok" } else { "FAILED" });
        }
        Format::Machine => print_json(&json!({
            "command": "quantum-verify",
            "tolerance": tolerance,
            "expectations": expectation_rows
                .iter()
                .map(|(name, value, exact_text, drift, ok)| {
                    json!({
                        "name": name,
                        "value": value,
                        "expected": exact_text,
                        "drift": drift,
                        "ok": ok,
                    })
                })
                .collect::<Vec<_>>(),
            "operators": operator_rows
                .iter()
                .map(|(name, unitary, self_adjoint, required, ok)| {
                    json!({
                        "name": name,
                        "unitary": unitary,
                        "self_adjoint": self_adjoint,
                        "self_adjoint_required": required,
                        "ok": ok,
                    })
                })
                .collect::<Vec<_>>(),
            "copy_interaction_maps_plus_zero_to_fail": copy_ok,
            "ok": all_ok,
        })),
    }
    Ok(exit(all_ok))
}

fn print_reports(runs: &[(ScenarioReport, Verdict)], format: Format) -> ExitCode {
    let mut all_expected = true;
    for (index, (report, expected)) in runs.iter().enumerate() {
        match format {
            Format::Human => {
                if index > 0 {
                    println!();
                }
                print!("{}", report.human());
            }
            Format::Machine => print!("{}", report.machine()),
        }
        all_expected &= report.verdict == *expected;
    }
    if format == Format::Human && runs.len() > 1 {
        let matched = runs
            .iter()
            .filter(|(report, expected)| report.verdict == *expected)
            .count();
        println!();
        println!("summary: {matched}/{} runs reproduced their established verdicts", runs.len());
    }
    exit(all_expected)
}

fn cmd_fr_run(
    target: Target,
    frame: FrameArg,
    tolerance: f64,
    format: Format,
) -> Result<ExitCode, String> {
    let theorem = |frame: FrameArg| -> Result<(ScenarioReport, Verdict), String> {
        let report = match frame {
            FrameArg::Reflexive => run_theorem_fr(tolerance),
            FrameArg::Serial => run_theorem_fr_star(tolerance),
        }
        .map_err(|e| e.to_string())?;
        Ok((report, Verdict::Contradiction))
    };
    let runs: Vec<(ScenarioReport, Verdict)> = match target {
        Target::Theorem => vec![theorem(frame)?],
        Target::LemmaS => vec![(
            run_consistency_lemma().map_err(|e| e.to_string())?,
            Verdict::Unsat,
        )],
        Target::LemmaC => vec![(
            run_nesting_lemma().map_err(|e| e.to_string())?,
            Verdict::Sat,
        )],
        Target::All => vec![
            theorem(FrameArg::Reflexive)?,
            theorem(FrameArg::Serial)?,
            (
                run_consistency_lemma().map_err(|e| e.to_string())?,
                Verdict::Unsat,
            ),
            (
                run_nesting_lemma().map_err(|e| e.to_string())?,
                Verdict::Sat,
            ),
        ],
    };
    Ok(print_reports(&runs, format))
}

fn cmd_fr_ablate(
    drop: DropArg,
    frame: FrameArg,
    tolerance: f64,
    format: Format,
) -> Result<ExitCode, String> {
    let report = ablate(drop.ablation(), frame.choice(), tolerance).map_err(|e| e.to_string())?;
    let expected = match (drop, frame) {
        (DropArg::None, _) => Verdict::Contradiction,
        (DropArg::UForA, _) | (DropArg::StarNecessity, _) => Verdict::Sat,
        (DropArg::StarWitness, FrameArg::Reflexive) => Verdict::Contradiction,
        (DropArg::StarWitness, FrameArg::Serial) => Verdict::Sat,
    };
    Ok(print_reports(&[(report, expected)], format))
}

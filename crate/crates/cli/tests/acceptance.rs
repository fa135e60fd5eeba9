//! Acceptance gate: every top-level promise of the crate checked in one
//! place, one pass/fail line per criterion. Criteria report through
//! `Result` instead of panicking so a failure in one never hides the
//! others' verdicts.

use std::collections::HashSet;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use acespec_core::ace::{self, parse_document, recover_facts, DocumentError, Rule, SentenceError};
use acespec_core::facts::{extract_facts, facts_equal, Fact, FactBase};
use acespec_core::generate::generate_document;
use acespec_core::model::{
    parse_model, Channel, Component, ConstantFunction, DataDictionary, EnumerationType, Model,
    Port, PortDirection, StateAutomaton, Transition, TypeTag,
};
use acespec_core::query::{ask, QueryError};

const BIN: &str = env!("CARGO_BIN_EXE_acespec");

#[test]
fn acceptance() {
    let criteria: &[(&str, fn() -> Result<(), String>)] = &[
        (
            "reference models render to the frozen documents within 1s",
            reference_generation,
        ),
        (
            "worked-example questions get the reference answers",
            reference_answers,
        ),
        (
            "200 seeded random models round-trip text back to equal facts within 30s",
            random_round_trip,
        ),
        (
            "every generated document passes the validate subcommand",
            self_validation,
        ),
        (
            "malformed and ambiguous inputs are rejected with the expected rule",
            negative_suite,
        ),
        (
            "generation is byte-deterministic within and across processes",
            determinism,
        ),
        (
            "answers agree with a brute-force scan of the fact base",
            query_soundness,
        ),
    ];

    let mut failed = Vec::new();
    println!();
    for (name, criterion) in criteria {
        match criterion() {
            Ok(()) => println!("PASS {name}"),
            Err(reason) => {
                println!("FAIL {name}: {reason}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:#?}");
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn fixture_model(name: &str) -> Result<Model, String> {
    let text = fs::read_to_string(fixture(name)).map_err(|e| format!("{name}: {e}"))?;
    parse_model(&text).map_err(|e| format!("{name}: {e}"))
}

// --- criterion 1 -----------------------------------------------------------

fn reference_generation() -> Result<(), String> {
    for name in ["trafficlight", "crossing"] {
        let model = fixture_model(&format!("{name}.xml"))?;
        let start = Instant::now();
        let doc = generate_document(&model).map_err(|e| format!("{name}: {e}"))?;
        let elapsed = start.elapsed();
        let golden = fs::read_to_string(fixture(&format!("{name}.ace")))
            .map_err(|e| format!("{name}.ace: {e}"))?;
        if doc.text != golden {
            return Err(format!(
                "{name}: rendered document differs from {name}.ace:\n{}",
                first_difference(&doc.text, &golden)
            ));
        }
        if elapsed > Duration::from_secs(1) {
            return Err(format!("{name}: generation took {elapsed:?}, budget is 1s"));
        }
    }
    Ok(())
}

fn first_difference(got: &str, want: &str) -> String {
    for (i, (g, w)) in got.lines().zip(want.lines()).enumerate() {
        if g != w {
            return format!("line {}: got {g:?}, want {w:?}", i + 1);
        }
    }
    format!(
        "line counts differ: got {}, want {}",
        got.lines().count(),
        want.lines().count()
    )
}

// --- criterion 2 -----------------------------------------------------------

fn reference_answers() -> Result<(), String> {
    let model = fixture_model("trafficlight.xml")?;
    let doc = generate_document(&model).map_err(|e| e.to_string())?;
    let transcript = [
        ("What is TrafficColor?", "It is a data-type."),
        (
            "How many elements does pedastrianColor have?",
            "It has 2 elements.",
        ),
        ("Is Walk an element of pedastrianColor?", "Yes, it is."),
        ("Is Blue an element of TrafficColor?", "No, it is not."),
    ];
    for (question, expected) in transcript {
        let answer =
            ask(question, &doc.lexicon, &doc.facts).map_err(|e| format!("{question}: {e}"))?;
        if answer.text != expected {
            return Err(format!(
                "{question}: answered {:?}, expected {expected:?}",
                answer.text
            ));
        }
        let report = ace::check_text(&answer.text, &doc.lexicon);
        if !report.ok() {
            return Err(format!(
                "answer {:?} fails its own grammar: {}",
                answer.text, report.diagnostics[0]
            ));
        }
    }
    Ok(())
}

// --- criterion 3 -----------------------------------------------------------

/// Unique-by-counter names keep every model scope collision-free without
/// tracking which pools fed which part of the model.
struct Namer {
    n: usize,
}

impl Namer {
    fn fresh(&mut self, stem: &str) -> String {
        self.n += 1;
        format!("{stem}{}", self.n)
    }
}

fn random_ports(rng: &mut ChaCha8Rng, namer: &mut Namer, types: &[String]) -> Vec<Port> {
    (0..rng.gen_range(0..3))
        .map(|_| Port {
            name: namer.fresh("P"),
            direction: if rng.gen_bool(0.5) {
                PortDirection::Input
            } else {
                PortDirection::Output
            },
            type_name: types[rng.gen_range(0..types.len())].clone(),
        })
        .collect()
}

fn random_model(rng: &mut ChaCha8Rng) -> Model {
    let mut namer = Namer { n: 0 };

    let data_dictionary = if rng.gen_bool(0.8) {
        Some(DataDictionary {
            enumerations: (0..rng.gen_range(0..3))
                .map(|_| EnumerationType {
                    name: namer.fresh("Color"),
                    members: (0..rng.gen_range(1..5)).map(|_| namer.fresh("Shade")).collect(),
                })
                .collect(),
            constants: (0..rng.gen_range(0..3))
                .map(|_| ConstantFunction {
                    name: namer.fresh("lim"),
                    value: match rng.gen_range(0..10) {
                        0 => i64::MIN,
                        1 => i64::MAX,
                        _ => rng.gen_range(-10_000..10_000),
                    },
                    return_type: TypeTag::Integer,
                })
                .collect(),
        })
    } else {
        None
    };

    let mut types: Vec<String> = data_dictionary
        .iter()
        .flat_map(|d| d.enumerations.iter().map(|e| e.name.clone()))
        .collect();
    types.push("integer".to_string());
    types.push("boolean".to_string());

    let architecture = if rng.gen_bool(0.7) {
        let subcomponents: Vec<Component> = (0..rng.gen_range(0..3))
            .map(|_| Component {
                name: namer.fresh("Unit"),
                ports: random_ports(rng, &mut namer, &types),
                subcomponents: Vec::new(),
                channels: Vec::new(),
            })
            .collect();
        let sources: Vec<(String, String)> = subcomponents
            .iter()
            .flat_map(|c| {
                c.ports
                    .iter()
                    .filter(|p| p.direction == PortDirection::Output)
                    .map(|p| (c.name.clone(), p.name.clone()))
            })
            .collect();
        let targets: Vec<(String, String)> = subcomponents
            .iter()
            .flat_map(|c| {
                c.ports
                    .iter()
                    .filter(|p| p.direction == PortDirection::Input)
                    .map(|p| (c.name.clone(), p.name.clone()))
            })
            .collect();
        let channels = if sources.is_empty() || targets.is_empty() {
            Vec::new()
        } else {
            (0..rng.gen_range(0..3))
                .map(|_| {
                    let (sc, sp) = sources[rng.gen_range(0..sources.len())].clone();
                    let (tc, tp) = targets[rng.gen_range(0..targets.len())].clone();
                    Channel {
                        name: namer.fresh("ch"),
                        source_component: sc,
                        source_port: sp,
                        target_component: tc,
                        target_port: tp,
                    }
                })
                .collect()
        };
        Some(Component {
            name: namer.fresh("Rig"),
            ports: random_ports(rng, &mut namer, &types),
            subcomponents,
            channels,
        })
    } else {
        None
    };

    let owner = architecture
        .as_ref()
        .map(|c| c.name.clone())
        .unwrap_or_else(|| namer.fresh("Host"));

    let automata = (0..rng.gen_range(0..3))
        .map(|_| {
            let states: Vec<String> =
                (0..rng.gen_range(1..4)).map(|_| namer.fresh("St")).collect();
            let transitions = (0..rng.gen_range(0..4))
                .map(|_| Transition {
                    source: states[rng.gen_range(0..states.len())].clone(),
                    target: states[rng.gen_range(0..states.len())].clone(),
                    guard: match rng.gen_range(0..3) {
                        0 => None,
                        1 => Some(format!(
                            "{} == {}",
                            namer.fresh("sig"),
                            rng.gen_range(0..100)
                        )),
                        _ => Some(namer.fresh("flag")),
                    },
                    action: match rng.gen_range(0..3) {
                        0 => None,
                        1 => Some(format!("reset {}", namer.fresh("cnt"))),
                        _ => Some(namer.fresh("act")),
                    },
                })
                .collect();
            StateAutomaton {
                name: namer.fresh("Auto"),
                owner: owner.clone(),
                states: states.clone(),
                initial_state: states[0].clone(),
                transitions,
            }
        })
        .collect();

    Model {
        name: namer.fresh("Mod"),
        data_dictionary,
        architecture,
        automata,
    }
}

fn random_round_trip() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACE5);
    for i in 0..200 {
        let model = random_model(&mut rng);
        let doc = generate_document(&model).map_err(|e| format!("model {i}: generate: {e}"))?;
        let parsed = parse_document(&doc.text, &ace::default_lexicon())
            .map_err(|e| format!("model {i}: reparse: {e}\n{}", doc.text))?;
        let recovered = recover_facts(&parsed.sentences)
            .map_err(|e| format!("model {i}: recover: {e}\n{}", doc.text))?;
        let expected = extract_facts(&model);
        if !facts_equal(&recovered, &expected) {
            return Err(format!(
                "model {i}: recovered facts differ from the model's\n{}",
                doc.text
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(30) {
        return Err(format!("200 round trips took {elapsed:?}, budget is 30s"));
    }
    Ok(())
}

// --- criterion 4 -----------------------------------------------------------

fn self_validation() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut documents = vec![
        generate_document(&fixture_model("trafficlight.xml")?)
            .map_err(|e| e.to_string())?
            .text,
        generate_document(&fixture_model("crossing.xml")?)
            .map_err(|e| e.to_string())?
            .text,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..5 {
        documents.push(
            generate_document(&random_model(&mut rng))
                .map_err(|e| e.to_string())?
                .text,
        );
    }
    for (i, text) in documents.iter().enumerate() {
        let path = dir.path().join(format!("doc{i}.ace"));
        fs::write(&path, text).map_err(|e| e.to_string())?;
        let output = Command::new(BIN)
            .args(["validate", path.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        if output.status.code() != Some(0) {
            return Err(format!(
                "document {i} failed validate: {}\n{text}",
                String::from_utf8_lossy(&output.stderr)
            ));
        }
    }
    Ok(())
}

// --- criterion 5 -----------------------------------------------------------

fn negative_suite() -> Result<(), String> {
    let mut lexicon = ace::default_lexicon();
    for name in ["TrafficColor", "Stop", "tGreen", "Idle", "Busy"] {
        lexicon
            .register_proper_name(name)
            .map_err(|e| e.to_string())?;
    }

    let cases: &[(&str, Rule)] = &[
        ("TrafficColor is datatype.", Rule::PredicateShape),
        ("TrafficColor is an datatype.", Rule::ArticleAgreement),
        (
            "It consists-of 2 elements that are Stop.",
            Rule::CountAgreement,
        ),
        (
            "It consists-of one elements that is Stop.",
            Rule::CountAgreement,
        ),
        ("xyzzy flurble.", Rule::UnknownToken),
        ("tGreen is a constant", Rule::MissingTerminator),
        ("What is TrafficColor.", Rule::TerminatorKind),
        ("Is Stop a element of TrafficColor?", Rule::ArticleAgreement),
        ("Yes, it is not.", Rule::PolarityAgreement),
        ("It is equal to tGreen.", Rule::ObjectShape),
        ("The component is a component.", Rule::SubjectShape),
        (
            "It is equal to 99999999999999999999.",
            Rule::NumberRange,
        ),
    ];
    for (text, expected) in cases {
        let report = ace::check_text(text, &lexicon);
        let Some(diagnostic) = report.diagnostics.first() else {
            return Err(format!("{text:?} was accepted"));
        };
        if diagnostic.rule != *expected {
            return Err(format!(
                "{text:?}: rejected by {}, expected {}",
                diagnostic.rule, expected
            ));
        }
    }

    // Structurally fine, but no enclosing automaton to attach to.
    let tokens =
        ace::tokenize("There is a transition from Idle to Busy.", &lexicon).map_err(|e| e.to_string())?;
    match ace::parse_sentence(&tokens) {
        Err(SentenceError::Invalid(d)) if d.rule == Rule::AutomatonContext => {}
        other => return Err(format!("transition outside automaton: {other:?}")),
    }

    // A port sentence leaves two antecedent candidates; a bare pronoun
    // after it cannot pick one.
    let ambiguous = "Root is a component.\n\
                     Root has an input port Inlet of type Signal.\n\
                     It is a component.\n";
    match parse_document(ambiguous, &ace::default_lexicon()) {
        Err(DocumentError::Sentence { line: 3, source }) => {
            if !matches!(source, SentenceError::Ambiguous { .. }) {
                return Err(format!("pronoun after port sentence: {source}"));
            }
        }
        other => return Err(format!("pronoun after port sentence: {other:?}")),
    }

    Ok(())
}

// --- criterion 6 -----------------------------------------------------------

fn determinism() -> Result<(), String> {
    // Twice in one process, over models exercising every template.
    let mut rng_a = ChaCha8Rng::seed_from_u64(23);
    let mut rng_b = ChaCha8Rng::seed_from_u64(23);
    for i in 0..20 {
        let a = generate_document(&random_model(&mut rng_a)).map_err(|e| e.to_string())?;
        let b = generate_document(&random_model(&mut rng_b)).map_err(|e| e.to_string())?;
        if a.text != b.text {
            return Err(format!("model {i}: same seed, different documents"));
        }
    }
    // Twice across processes (fresh hashers, fresh everything).
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            Command::new(BIN)
                .args(["generate", &fixture("crossing.xml")])
                .output()
                .map(|o| o.stdout)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    if runs[0] != runs[1] {
        return Err("two generate runs produced different bytes".to_string());
    }
    Ok(())
}

// --- criterion 7 -----------------------------------------------------------

/// Every name a question may legitimately be about: the names facts are
/// indexed under (guard/action symbols ride inside transition facts and
/// are not subjects).
fn name_universe(facts: &FactBase) -> Vec<String> {
    let mut names = HashSet::new();
    for fact in facts.facts() {
        match fact {
            Fact::IsDatatype { type_name } | Fact::HasElementCount { type_name, .. } => {
                names.insert(type_name.clone());
            }
            Fact::ElementOf { member, type_name } => {
                names.insert(member.clone());
                names.insert(type_name.clone());
            }
            Fact::IsConstant { name } | Fact::HasValue { name, .. } => {
                names.insert(name.clone());
            }
            Fact::IsComponent { name } => {
                names.insert(name.clone());
            }
            Fact::Subcomponent { parent, child } => {
                names.insert(parent.clone());
                names.insert(child.clone());
            }
            Fact::HasPort {
                component, port, ..
            } => {
                names.insert(component.clone());
                names.insert(port.clone());
            }
            Fact::Connects {
                channel,
                source_component,
                target_component,
                ..
            } => {
                names.insert(channel.clone());
                names.insert(source_component.clone());
                names.insert(target_component.clone());
            }
            Fact::IsAutomaton { automaton, owner } => {
                names.insert(automaton.clone());
                names.insert(owner.clone());
            }
            Fact::HasState { automaton, state } | Fact::IsInitialState { automaton, state } => {
                names.insert(automaton.clone());
                names.insert(state.clone());
            }
            Fact::HasTransition { automaton, .. } => {
                names.insert(automaton.clone());
            }
        }
    }
    let mut sorted: Vec<String> = names.into_iter().collect();
    sorted.sort();
    sorted
}

/// The role set each kind noun covers, written against the raw fact list.
fn scan_is_a(name: &str, kind: &str, facts: &FactBase) -> bool {
    facts.facts().iter().any(|fact| match (kind, fact) {
        ("datatype", Fact::IsDatatype { type_name }) => type_name == name,
        ("constant", Fact::IsConstant { name: n }) => n == name,
        ("component", Fact::IsComponent { name: n }) => n == name,
        ("component", Fact::Subcomponent { parent, child }) => parent == name || child == name,
        ("component", Fact::HasPort { component, .. }) => component == name,
        (
            "component",
            Fact::Connects {
                source_component,
                target_component,
                ..
            },
        ) => source_component == name || target_component == name,
        ("component", Fact::IsAutomaton { owner, .. }) => owner == name,
        ("state-automaton", Fact::IsAutomaton { automaton, .. }) => automaton == name,
        ("element", Fact::ElementOf { member, .. }) => member == name,
        ("state", Fact::HasState { state, .. }) => state == name,
        ("port", Fact::HasPort { port, .. }) => port == name,
        ("channel", Fact::Connects { channel, .. }) => channel == name,
        _ => false,
    })
}

/// True when the answer text is backed by a fact about `name`.
fn entailed(name: &str, text: &str, facts: &FactBase) -> bool {
    let strip = |prefix: &str| {
        text.strip_prefix(prefix)
            .and_then(|rest| rest.strip_suffix('.'))
    };
    if let Some(type_name) = strip("It is an element of ") {
        return facts.facts().iter().any(
            |f| matches!(f, Fact::ElementOf { member, type_name: t } if member == name && t == type_name),
        );
    }
    if let Some(component) = strip("It is a port of ") {
        return facts.facts().iter().any(
            |f| matches!(f, Fact::HasPort { component: c, port, .. } if c == component && port == name),
        );
    }
    if let Some(automaton) = strip("It is a state of ") {
        return facts.facts().iter().any(
            |f| matches!(f, Fact::HasState { automaton: a, state } if a == automaton && state == name),
        );
    }
    if let Some(owner) = strip("It is a state-automaton of the component ") {
        return facts.facts().iter().any(
            |f| matches!(f, Fact::IsAutomaton { automaton, owner: o } if automaton == name && o == owner),
        );
    }
    match text {
        "It is a data-type." => scan_is_a(name, "datatype", facts),
        "It is a constant." => scan_is_a(name, "constant", facts),
        "It is a component." => scan_is_a(name, "component", facts),
        "It is a channel." => scan_is_a(name, "channel", facts),
        _ => false,
    }
}

fn query_soundness() -> Result<(), String> {
    let mut models = vec![
        fixture_model("trafficlight.xml")?,
        fixture_model("crossing.xml")?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..25 {
        models.push(random_model(&mut rng));
    }

    let kinds: &[(&str, &str)] = &[
        ("a", "datatype"),
        ("a", "constant"),
        ("a", "component"),
        ("a", "state-automaton"),
        ("an", "element"),
        ("a", "state"),
        ("a", "port"),
        ("a", "channel"),
    ];

    for (m, model) in models.iter().enumerate() {
        let doc = generate_document(model).map_err(|e| format!("model {m}: {e}"))?;
        let facts = &doc.facts;
        let names = name_universe(facts);
        let datatypes: Vec<&String> = names
            .iter()
            .filter(|n| scan_is_a(n, "datatype", facts))
            .collect();

        for name in &names {
            // Classification must succeed for every mentioned name and be
            // backed by a fact.
            let question = format!("What is {name}?");
            let answer = ask(&question, &doc.lexicon, facts)
                .map_err(|e| format!("model {m}: {question}: {e}"))?;
            if !entailed(name, &answer.text, facts) {
                return Err(format!(
                    "model {m}: {question} answered {:?} without a backing fact",
                    answer.text
                ));
            }

            // Kind questions must match the role scan exactly.
            for (article, kind) in kinds {
                let question = format!("Is {name} {article} {kind}?");
                let answer = ask(&question, &doc.lexicon, facts)
                    .map_err(|e| format!("model {m}: {question}: {e}"))?;
                if answer.truth != Some(scan_is_a(name, kind, facts)) {
                    return Err(format!(
                        "model {m}: {question} answered {:?}, scan says {}",
                        answer.text,
                        scan_is_a(name, kind, facts)
                    ));
                }
            }

            // Element counts: datatypes answer with the number of member
            // facts, everything else is refused as uncounted.
            let question = format!("How many elements does {name} have?");
            let member_count = facts
                .facts()
                .iter()
                .filter(|f| matches!(f, Fact::ElementOf { type_name, .. } if type_name == name))
                .count();
            match ask(&question, &doc.lexicon, facts) {
                Ok(answer) if scan_is_a(name, "datatype", facts) => {
                    if answer.count != Some(member_count) {
                        return Err(format!(
                            "model {m}: {question} answered {:?}, scan counts {member_count}",
                            answer.text
                        ));
                    }
                }
                Ok(answer) => {
                    return Err(format!(
                        "model {m}: {question} answered {:?} for a non-datatype",
                        answer.text
                    ));
                }
                Err(QueryError::NotADatatype { .. }) if !scan_is_a(name, "datatype", facts) => {}
                Err(e) => return Err(format!("model {m}: {question}: {e}")),
            }

            // Membership against every datatype, giving plenty of negatives.
            for datatype in &datatypes {
                let question = format!("Is {name} an element of {datatype}?");
                let answer = ask(&question, &doc.lexicon, facts)
                    .map_err(|e| format!("model {m}: {question}: {e}"))?;
                let expected = facts.facts().iter().any(
                    |f| matches!(f, Fact::ElementOf { member, type_name } if member == name && type_name == *datatype),
                );
                if answer.truth != Some(expected) {
                    return Err(format!(
                        "model {m}: {question} answered {:?}, scan says {expected}",
                        answer.text
                    ));
                }
            }
        }

        // Names never mentioned are refused, not guessed at.
        match ask("What is Zzz999?", &doc.lexicon, facts) {
            Err(QueryError::UnknownEntity { .. }) => {}
            other => return Err(format!("model {m}: unmentioned name: {other:?}")),
        }
    }
    Ok(())
}

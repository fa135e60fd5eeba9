//! Atomic semantic facts extracted from a model.
//!
//! The fact base is the shared ground truth for three consumers: the
//! generator (which renders facts as sentences), the round-trip check
//! (generated text must parse back to an equal fact base), and the query
//! engine (which answers questions by fact lookup). Facts are first-order
//! and flat; guard/action text rides inside HasTransition in lexicalized
//! form (see [`lexicalize_symbol`]).

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::model::{Component, Model, PortDirection};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Fact {
    IsDatatype {
        type_name: String,
    },
    HasElementCount {
        type_name: String,
        count: usize,
    },
    ElementOf {
        member: String,
        type_name: String,
    },
    IsConstant {
        name: String,
    },
    HasValue {
        name: String,
        value: i64,
    },
    IsComponent {
        name: String,
    },
    Subcomponent {
        parent: String,
        child: String,
    },
    HasPort {
        component: String,
        port: String,
        direction: PortDirection,
        type_name: String,
    },
    Connects {
        channel: String,
        source_component: String,
        source_port: String,
        target_component: String,
        target_port: String,
    },
    IsAutomaton {
        automaton: String,
        owner: String,
    },
    HasState {
        automaton: String,
        state: String,
    },
    IsInitialState {
        automaton: String,
        state: String,
    },
    HasTransition {
        automaton: String,
        source: String,
        target: String,
        guard: Option<String>,
        action: Option<String>,
    },
}

impl Fact {
    /// Entity names this fact should be findable under.
    fn subjects(&self) -> Vec<&str> {
        match self {
            Fact::IsDatatype { type_name } => vec![type_name],
            Fact::HasElementCount { type_name, .. } => vec![type_name],
            Fact::ElementOf { member, type_name } => vec![member, type_name],
            Fact::IsConstant { name } | Fact::HasValue { name, .. } => vec![name],
            Fact::IsComponent { name } => vec![name],
            Fact::Subcomponent { parent, child } => vec![parent, child],
            Fact::HasPort {
                component, port, ..
            } => vec![component, port],
            Fact::Connects {
                channel,
                source_component,
                target_component,
                ..
            } => vec![channel, source_component, target_component],
            Fact::IsAutomaton { automaton, owner } => vec![automaton, owner],
            Fact::HasState { automaton, state } => vec![automaton, state],
            Fact::IsInitialState { automaton, state } => vec![automaton, state],
            Fact::HasTransition { automaton, .. } => vec![automaton],
        }
    }
}

/// Stable textual form, one fact per line in CLI output.
impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::IsDatatype { type_name } => write!(f, "IsDatatype({type_name})"),
            Fact::HasElementCount { type_name, count } => {
                write!(f, "HasElementCount({type_name}, {count})")
            }
            Fact::ElementOf { member, type_name } => {
                write!(f, "ElementOf({member}, {type_name})")
            }
            Fact::IsConstant { name } => write!(f, "IsConstant({name})"),
            Fact::HasValue { name, value } => write!(f, "HasValue({name}, {value})"),
            Fact::IsComponent { name } => write!(f, "IsComponent({name})"),
            Fact::Subcomponent { parent, child } => write!(f, "Subcomponent({parent}, {child})"),
            Fact::HasPort {
                component,
                port,
                direction,
                type_name,
            } => write!(
                f,
                "HasPort({component}, {port}, {}, {type_name})",
                direction.as_str()
            ),
            Fact::Connects {
                channel,
                source_component,
                source_port,
                target_component,
                target_port,
            } => write!(
                f,
                "Connects({channel}, {source_component}, {source_port}, {target_component}, {target_port})"
            ),
            Fact::IsAutomaton { automaton, owner } => {
                write!(f, "IsAutomaton({automaton}, {owner})")
            }
            Fact::HasState { automaton, state } => write!(f, "HasState({automaton}, {state})"),
            Fact::IsInitialState { automaton, state } => {
                write!(f, "IsInitialState({automaton}, {state})")
            }
            Fact::HasTransition {
                automaton,
                source,
                target,
                guard,
                action,
            } => {
                write!(f, "HasTransition({automaton}, {source}, {target}")?;
                if let Some(g) = guard {
                    write!(f, ", guard={g}")?;
                }
                if let Some(a) = action {
                    write!(f, ", action={a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Ordered, duplicate-free collection of facts with a name index.
#[derive(Debug, Clone, Default)]
pub struct FactBase {
    facts: Vec<Fact>,
    seen: HashSet<Fact>,
    index: HashMap<String, Vec<usize>>,
}

impl FactBase {
    pub fn new() -> Self {
        FactBase::default()
    }

    /// Inserts unless already present; returns whether the fact was new.
    pub fn insert(&mut self, fact: Fact) -> bool {
        if self.seen.contains(&fact) {
            return false;
        }
        let at = self.facts.len();
        for name in fact.subjects() {
            self.index.entry(name.to_string()).or_default().push(at);
        }
        self.seen.insert(fact.clone());
        self.facts.push(fact);
        true
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.seen.contains(fact)
    }

    /// Facts mentioning `name`, in insertion order.
    pub fn about<'a>(&'a self, name: &str) -> impl Iterator<Item = &'a Fact> {
        self.index
            .get(name)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&i| &self.facts[i])
    }
}

/// Set equality ignoring order.
pub fn facts_equal(a: &FactBase, b: &FactBase) -> bool {
    a.len() == b.len() && a.facts.iter().all(|f| b.contains(f))
}

/// Normalizes guard and action expressions into single scannable symbols:
/// whitespace-separated pieces joined with hyphens ("reset counter" ->
/// "reset-counter"). Facts, sentences, and query answers all carry this
/// one form.
pub fn lexicalize_symbol(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join("-")
}

/// Reduces a model to facts. Insertion order mirrors the generator's
/// sentence order so both sides of the round trip enumerate alike:
/// enumerations, constants, architecture (pre-order: component, its
/// subcomponent links, ports, channels), automata.
pub fn extract_facts(model: &Model) -> FactBase {
    let mut base = FactBase::new();
    if let Some(dict) = &model.data_dictionary {
        for e in &dict.enumerations {
            base.insert(Fact::IsDatatype {
                type_name: e.name.clone(),
            });
            base.insert(Fact::HasElementCount {
                type_name: e.name.clone(),
                count: e.members.len(),
            });
            for m in &e.members {
                base.insert(Fact::ElementOf {
                    member: m.clone(),
                    type_name: e.name.clone(),
                });
            }
        }
        for c in &dict.constants {
            base.insert(Fact::IsConstant {
                name: c.name.clone(),
            });
            base.insert(Fact::HasValue {
                name: c.name.clone(),
                value: c.value,
            });
        }
    }
    if let Some(root) = &model.architecture {
        component_facts(root, &mut base);
    }
    for a in &model.automata {
        base.insert(Fact::IsAutomaton {
            automaton: a.name.clone(),
            owner: a.owner.clone(),
        });
        for s in &a.states {
            base.insert(Fact::HasState {
                automaton: a.name.clone(),
                state: s.clone(),
            });
        }
        base.insert(Fact::IsInitialState {
            automaton: a.name.clone(),
            state: a.initial_state.clone(),
        });
        for t in &a.transitions {
            base.insert(Fact::HasTransition {
                automaton: a.name.clone(),
                source: t.source.clone(),
                target: t.target.clone(),
                guard: t.guard.as_deref().map(lexicalize_symbol),
                action: t.action.as_deref().map(lexicalize_symbol),
            });
        }
    }
    base
}

fn component_facts(component: &Component, base: &mut FactBase) {
    base.insert(Fact::IsComponent {
        name: component.name.clone(),
    });
    for sub in &component.subcomponents {
        base.insert(Fact::Subcomponent {
            parent: component.name.clone(),
            child: sub.name.clone(),
        });
    }
    for port in &component.ports {
        base.insert(Fact::HasPort {
            component: component.name.clone(),
            port: port.name.clone(),
            direction: port.direction,
            type_name: port.type_name.clone(),
        });
    }
    for channel in &component.channels {
        base.insert(Fact::Connects {
            channel: channel.name.clone(),
            source_component: channel.source_component.clone(),
            source_port: channel.source_port.clone(),
            target_component: channel.target_component.clone(),
            target_port: channel.target_port.clone(),
        });
    }
    for sub in &component.subcomponents {
        component_facts(sub, base);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DataDictionary, EnumerationType};

    fn enum_model(name: &str, members: &[&str]) -> Model {
        Model {
            name: "M".to_string(),
            data_dictionary: Some(DataDictionary {
                enumerations: vec![EnumerationType {
                    name: name.to_string(),
                    members: members.iter().map(|s| s.to_string()).collect(),
                }],
                constants: vec![],
            }),
            ..Model::default()
        }
    }

    #[test]
    fn single_member_enumeration_facts() {
        let base = extract_facts(&enum_model("Signal", &["Present"]));
        let expected = [
            "IsDatatype(Signal)",
            "HasElementCount(Signal, 1)",
            "ElementOf(Present, Signal)",
        ];
        let got: Vec<String> = base.facts().iter().map(|f| f.to_string()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn empty_model_yields_empty_fact_base() {
        assert!(extract_facts(&Model::default()).is_empty());
    }

    #[test]
    fn four_member_enumeration_count() {
        let base = extract_facts(&enum_model(
            "TrafficColor",
            &["Green", "Red", "RedYellow", "Yellow"],
        ));
        assert!(base.contains(&Fact::HasElementCount {
            type_name: "TrafficColor".to_string(),
            count: 4,
        }));
        let element_of = base
            .facts()
            .iter()
            .filter(|f| matches!(f, Fact::ElementOf { .. }))
            .count();
        assert_eq!(element_of, 4);
    }

    #[test]
    fn facts_equal_ignores_order_and_detects_subsets() {
        let base = extract_facts(&enum_model("T", &["A", "B"]));
        assert!(facts_equal(&base, &base));

        let mut permuted = FactBase::new();
        for f in base.facts().iter().rev() {
            permuted.insert(f.clone());
        }
        assert!(facts_equal(&base, &permuted));

        let mut smaller = FactBase::new();
        for f in base.facts().iter().skip(1) {
            smaller.insert(f.clone());
        }
        assert!(!facts_equal(&base, &smaller));
    }

    #[test]
    fn insert_deduplicates() {
        let mut base = FactBase::new();
        let fact = Fact::IsConstant {
            name: "tGreen".to_string(),
        };
        assert!(base.insert(fact.clone()));
        assert!(!base.insert(fact));
        assert_eq!(base.len(), 1);
    }

    #[test]
    fn about_finds_facts_by_any_subject() {
        let base = extract_facts(&enum_model("Signal", &["Present"]));
        assert_eq!(base.about("Present").count(), 1);
        assert_eq!(base.about("Signal").count(), 3);
        assert_eq!(base.about("Ghost").count(), 0);
    }

    #[test]
    fn transition_display_shows_optional_parts_only_when_present() {
        let plain = Fact::HasTransition {
            automaton: "A".to_string(),
            source: "S".to_string(),
            target: "T".to_string(),
            guard: None,
            action: None,
        };
        assert_eq!(plain.to_string(), "HasTransition(A, S, T)");
        let full = Fact::HasTransition {
            automaton: "A".to_string(),
            source: "S".to_string(),
            target: "T".to_string(),
            guard: Some("x==1".to_string()),
            action: Some("reset".to_string()),
        };
        assert_eq!(
            full.to_string(),
            "HasTransition(A, S, T, guard=x==1, action=reset)"
        );
    }

    #[test]
    fn extraction_is_deterministic() {
        let model = enum_model("T", &["A", "B", "C"]);
        let one: Vec<String> = extract_facts(&model)
            .facts()
            .iter()
            .map(|f| f.to_string())
            .collect();
        let two: Vec<String> = extract_facts(&model)
            .facts()
            .iter()
            .map(|f| f.to_string())
            .collect();
        assert_eq!(one, two);
    }
}

//! Rendering models into controlled-language documents.
//!
//! Every model identifier becomes a registered proper name; identifiers
//! that do not start with an uppercase letter additionally get a
//! `#! name` directive line so the rendered text is self-contained.
//! Guard and action expressions are lexicalized by joining whitespace-
//! separated pieces with hyphens ("reset counter" -> "reset-counter").
//!
//! Rendering is validated end to end before it is returned: the document
//! is re-parsed with the base vocabulary, every sentence is re-checked,
//! and the facts recovered from the parse must equal the facts extracted
//! from the model. A failure of those checks is a bug in the templates,
//! reported as an internal error rather than silently shipped.

use std::fmt;

use thiserror::Error;

use crate::ace::{self, Lexicon, LexiconError};
use crate::facts::{extract_facts, facts_equal, FactBase};
use crate::model::{Component, DataDictionary, Model, PortDirection, StateAutomaton};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    /// A model identifier cannot enter the vocabulary (reserved word,
    /// unscannable characters, or a collision).
    #[error("cannot lexicalize the {role} \"{name}\": {source}")]
    NotLexicalizable {
        name: String,
        role: &'static str,
        #[source]
        source: LexiconError,
    },
    /// A rendered sentence failed its own validation: a template bug.
    #[error("internal error: rendered text failed validation: {detail}")]
    InternalCheck { detail: String },
    /// The parsed rendering does not reproduce the model's facts: a
    /// template bug.
    #[error("internal error: rendered text does not round-trip: {detail}")]
    RoundTrip { detail: String },
}

/// Which parts of the model to render.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionSelection {
    pub dictionary: bool,
    pub architecture: bool,
    pub behavior: bool,
}

impl Default for SectionSelection {
    fn default() -> Self {
        SectionSelection {
            dictionary: true,
            architecture: true,
            behavior: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: &'static str,
    pub sentences: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct GeneratedDocument {
    /// The complete document: comments, directives, and sentences.
    pub text: String,
    pub sections: Vec<Section>,
    /// The base vocabulary extended with the model's names.
    pub lexicon: Lexicon,
    /// Facts extracted from the rendered parts of the model.
    pub facts: FactBase,
}

impl fmt::Display for GeneratedDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

pub fn generate_document(model: &Model) -> Result<GeneratedDocument, GenerateError> {
    generate_selected(model, SectionSelection::default())
}

pub fn generate_selected(
    model: &Model,
    selection: SectionSelection,
) -> Result<GeneratedDocument, GenerateError> {
    generate_with(model, selection, &ace::default_lexicon())
}

/// Generation against a caller-supplied base vocabulary: model identifiers
/// that collide with the caller's extra content words are rejected instead
/// of silently shadowed. The rendered text never uses the extra words, so
/// it stays self-contained under the built-in vocabulary.
pub fn generate_with(
    model: &Model,
    selection: SectionSelection,
    base: &Lexicon,
) -> Result<GeneratedDocument, GenerateError> {
    let mut renderer = Renderer::with_base(base.clone());
    let mut sections = Vec::new();

    if selection.dictionary {
        if let Some(dd) = &model.data_dictionary {
            sections.push(Section {
                title: "Data dictionary",
                sentences: renderer.data_dictionary(dd)?,
            });
        }
    }
    if selection.architecture {
        if let Some(root) = &model.architecture {
            sections.push(Section {
                title: "Architecture",
                sentences: renderer.architecture(root)?,
            });
        }
    }
    if selection.behavior {
        let mut sentences = Vec::new();
        for automaton in &model.automata {
            sentences.extend(renderer.automaton(automaton)?);
        }
        if !sentences.is_empty() {
            sections.push(Section {
                title: "Behavior",
                sentences,
            });
        }
    }

    let text = assemble(&model.name, &renderer.directives, &sections);
    let facts = extract_facts(&filtered(model, selection));
    validate_rendering(&text, &facts)?;

    Ok(GeneratedDocument {
        text,
        sections,
        lexicon: renderer.lexicon,
        facts,
    })
}

/// A copy of the model holding only the selected parts, so the round-trip
/// check compares against exactly what was rendered.
fn filtered(model: &Model, selection: SectionSelection) -> Model {
    Model {
        name: model.name.clone(),
        data_dictionary: model
            .data_dictionary
            .clone()
            .filter(|_| selection.dictionary),
        architecture: model.architecture.clone().filter(|_| selection.architecture),
        automata: if selection.behavior {
            model.automata.clone()
        } else {
            Vec::new()
        },
    }
}

fn assemble(model_name: &str, directives: &[String], sections: &[Section]) -> String {
    let mut text = String::new();
    if !model_name.is_empty() {
        text.push_str(&format!("# Model {model_name}\n"));
    }
    for directive in directives {
        text.push_str(directive);
        text.push('\n');
    }
    for section in sections {
        text.push('\n');
        text.push_str(&format!("# {}\n", section.title));
        for sentence in &section.sentences {
            text.push_str(sentence);
            text.push('\n');
        }
    }
    text
}

/// Re-parses the rendered text from scratch and compares the recovered
/// facts with the extracted ones.
fn validate_rendering(text: &str, expected: &FactBase) -> Result<(), GenerateError> {
    let base = ace::default_lexicon();
    let document = ace::parse_document(text, &base).map_err(|e| GenerateError::InternalCheck {
        detail: e.to_string(),
    })?;
    for sentence in &document.sentences {
        let report = ace::check_sentence(&sentence.tokens);
        if !report.ok() {
            return Err(GenerateError::InternalCheck {
                detail: format!(
                    "\"{}\": {}",
                    ace::detokenize(&sentence.tokens),
                    report.diagnostics[0]
                ),
            });
        }
    }
    let recovered = ace::recover_facts(&document.sentences).map_err(|e| {
        GenerateError::InternalCheck {
            detail: e.to_string(),
        }
    })?;
    if !facts_equal(&recovered, expected) {
        let missing: Vec<String> = expected
            .facts()
            .iter()
            .filter(|f| !recovered.contains(f))
            .map(|f| f.to_string())
            .collect();
        let extra: Vec<String> = recovered
            .facts()
            .iter()
            .filter(|f| !expected.contains(f))
            .map(|f| f.to_string())
            .collect();
        return Err(GenerateError::RoundTrip {
            detail: format!("missing [{}], extra [{}]", missing.join(", "), extra.join(", ")),
        });
    }
    Ok(())
}

struct Renderer {
    lexicon: Lexicon,
    directives: Vec<String>,
}

impl Renderer {
    fn with_base(lexicon: Lexicon) -> Self {
        Renderer {
            lexicon,
            directives: Vec::new(),
        }
    }

    /// Registers a model identifier and returns it as a sentence surface.
    /// Names that would not tokenize as proper names on their own get a
    /// `#! name` directive.
    fn name(&mut self, name: &str, role: &'static str) -> Result<String, GenerateError> {
        let known = self.lexicon.is_proper_name(name);
        self.lexicon
            .register_proper_name(name)
            .map_err(|source| GenerateError::NotLexicalizable {
                name: name.to_string(),
                role,
                source,
            })?;
        let self_scanning = name.chars().next().is_some_and(|c| c.is_uppercase());
        if !known && !self_scanning {
            self.directives.push(format!("#! name {name}"));
        }
        Ok(name.to_string())
    }

    /// Guard and action expressions: lexicalized the same way facts store
    /// them, then registered like any identifier.
    fn symbol(&mut self, text: &str, role: &'static str) -> Result<String, GenerateError> {
        let joined = crate::facts::lexicalize_symbol(text);
        if joined.is_empty() {
            return Err(GenerateError::NotLexicalizable {
                name: text.to_string(),
                role,
                source: LexiconError::EmptySurface,
            });
        }
        self.name(&joined, role)
    }

    /// Port types are either declared datatypes (proper names) or the
    /// built-in type nouns, which are already vocabulary.
    fn type_name(&mut self, name: &str) -> Result<String, GenerateError> {
        match name {
            "integer" | "boolean" => Ok(name.to_string()),
            _ => self.name(name, "type"),
        }
    }

    fn data_dictionary(&mut self, dd: &DataDictionary) -> Result<Vec<String>, GenerateError> {
        let mut lines = Vec::new();
        for enumeration in &dd.enumerations {
            let type_name = self.name(&enumeration.name, "datatype")?;
            let members = enumeration
                .members
                .iter()
                .map(|m| self.name(m, "element"))
                .collect::<Result<Vec<_>, _>>()?;
            lines.push(format!("{type_name} is a datatype."));
            lines.push(consists_of_line(&members, "element", "elements"));
        }
        for constant in &dd.constants {
            let name = self.name(&constant.name, "constant")?;
            lines.push(format!("{name} is a constant."));
            lines.push(format!("It is equal to {}.", constant.value));
        }
        Ok(lines)
    }

    fn architecture(&mut self, root: &Component) -> Result<Vec<String>, GenerateError> {
        let mut lines = Vec::new();
        self.component(root, &mut lines)?;
        Ok(lines)
    }

    fn component(
        &mut self,
        component: &Component,
        lines: &mut Vec<String>,
    ) -> Result<(), GenerateError> {
        let name = self.name(&component.name, "component")?;
        lines.push(format!("{name} is a component."));
        if !component.subcomponents.is_empty() {
            let children = component
                .subcomponents
                .iter()
                .map(|c| self.name(&c.name, "component"))
                .collect::<Result<Vec<_>, _>>()?;
            lines.push(consists_of_line(&children, "component", "components"));
        }
        for port in &component.ports {
            let port_name = self.name(&port.name, "port")?;
            let type_name = self.type_name(&port.type_name)?;
            let direction = match port.direction {
                PortDirection::Input => "input",
                PortDirection::Output => "output",
            };
            lines.push(format!(
                "{name} has an {direction} port {port_name} of type {type_name}."
            ));
        }
        for channel in &component.channels {
            let channel_name = self.name(&channel.name, "channel")?;
            let source_port = self.name(&channel.source_port, "port")?;
            let source_component = self.name(&channel.source_component, "component")?;
            let target_port = self.name(&channel.target_port, "port")?;
            let target_component = self.name(&channel.target_component, "component")?;
            lines.push(format!("{channel_name} is a channel."));
            lines.push(format!(
                "It connects the port {source_port} of {source_component} to the port {target_port} of {target_component}."
            ));
        }
        for child in &component.subcomponents {
            self.component(child, lines)?;
        }
        Ok(())
    }

    fn automaton(&mut self, automaton: &StateAutomaton) -> Result<Vec<String>, GenerateError> {
        let mut lines = Vec::new();
        let name = self.name(&automaton.name, "state-automaton")?;
        let owner = self.name(&automaton.owner, "component")?;
        lines.push(format!(
            "{name} is a state-automaton of the component {owner}."
        ));
        let states = automaton
            .states
            .iter()
            .map(|s| self.name(s, "state"))
            .collect::<Result<Vec<_>, _>>()?;
        lines.push(consists_of_line(&states, "state", "states"));
        let initial = self.name(&automaton.initial_state, "state")?;
        lines.push(format!("The initial state is {initial}."));
        for transition in &automaton.transitions {
            let source = self.name(&transition.source, "state")?;
            let target = self.name(&transition.target, "state")?;
            lines.push(format!(
                "There is a transition from {source} to {target}."
            ));
            if let Some(guard) = &transition.guard {
                let guard = self.symbol(guard, "guard")?;
                lines.push(format!("It is triggered-by {guard}."));
            }
            if let Some(action) = &transition.action {
                let action = self.symbol(action, "action")?;
                lines.push(format!("It performs {action}."));
            }
        }
        Ok(lines)
    }
}

/// "It consists-of one <singular> that is X." or
/// "It consists-of <n> <plural> that are <list>."
fn consists_of_line(members: &[String], singular: &str, plural: &str) -> String {
    if members.len() == 1 {
        format!("It consists-of one {singular} that is {}.", members[0])
    } else {
        format!(
            "It consists-of {} {plural} that are {}.",
            members.len(),
            name_list(members)
        )
    }
}

/// "A and B" for two names, "A, B, and C" beyond.
fn name_list(names: &[String]) -> String {
    match names.len() {
        0 => String::new(),
        1 => names[0].clone(),
        2 => format!("{} and {}", names[0], names[1]),
        _ => {
            let head = names[..names.len() - 1].join(", ");
            format!("{head}, and {}", names[names.len() - 1])
        }
    }
}

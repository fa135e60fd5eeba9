//! Documents: line-oriented sentence sequences with comments and
//! vocabulary directives, and the recovery of facts from parsed readings.
//!
//! Document format:
//!   - `#!` lines are vocabulary directives: `#! name <identifier>`
//!     registers a proper name (needed for lowercase identifiers),
//!     `#! word <category> <surface> [<lexeme>]` registers a content word.
//!   - other `#` lines are comments and section headings.
//!   - every other nonempty line holds one or more complete sentences;
//!     sentences do not span lines.
//!
//! A rendered document carries its own directives, so validating it needs
//! no side channel: the text alone reconstructs the vocabulary it uses.

use std::fmt;

use thiserror::Error;

use crate::facts::{Fact, FactBase};

use super::grammar::{self, Context, Reading, Sentence, SentenceError};
use super::lexicon::{ContentCategory, Lexicon};
use super::token::{self, TokenizeError};

#[derive(Debug, Clone)]
pub struct ParsedDocument {
    pub sentences: Vec<Sentence>,
    /// The base lexicon extended by the document's directives.
    pub lexicon: Lexicon,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DocumentError {
    #[error("line {line}: directive error: {message}")]
    Directive { line: usize, message: String },
    #[error("line {line}: {source}")]
    Token {
        line: usize,
        #[source]
        source: TokenizeError,
    },
    #[error("line {line}: {source}")]
    Sentence {
        line: usize,
        #[source]
        source: SentenceError,
    },
}

impl DocumentError {
    pub fn line(&self) -> usize {
        match self {
            DocumentError::Directive { line, .. }
            | DocumentError::Token { line, .. }
            | DocumentError::Sentence { line, .. } => *line,
        }
    }
}

/// Parses a whole document: applies directives, tokenizes each sentence
/// line, and parses the sentences in order under one shared context.
pub fn parse_document(text: &str, base: &Lexicon) -> Result<ParsedDocument, DocumentError> {
    let mut lexicon = base.clone();
    let mut sentences = Vec::new();
    let mut ctx = Context::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(directive) = line.strip_prefix("#!") {
            apply_directive(directive.trim(), &mut lexicon).map_err(|message| {
                DocumentError::Directive {
                    line: line_no,
                    message,
                }
            })?;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let tokens =
            token::tokenize(line, &lexicon).map_err(|source| DocumentError::Token {
                line: line_no,
                source,
            })?;
        for sentence_tokens in token::split_sentences(&tokens) {
            let sentence = grammar::parse_sentence_in(sentence_tokens, &mut ctx).map_err(
                |source| DocumentError::Sentence {
                    line: line_no,
                    source,
                },
            )?;
            sentences.push(sentence);
        }
    }
    Ok(ParsedDocument { sentences, lexicon })
}

fn apply_directive(directive: &str, lexicon: &mut Lexicon) -> Result<(), String> {
    let mut fields = directive.split_whitespace();
    match fields.next() {
        Some("name") => {
            let name = fields.next().ok_or("\"name\" needs an identifier")?;
            if let Some(extra) = fields.next() {
                return Err(format!("unexpected trailing field \"{extra}\""));
            }
            lexicon.register_proper_name(name).map_err(|e| e.to_string())
        }
        Some("word") => {
            let category = match fields.next() {
                Some("noun") => ContentCategory::Noun,
                Some("verb") => ContentCategory::Verb,
                Some("adj") => ContentCategory::Adjective,
                Some("adv") => ContentCategory::Adverb,
                Some("prep") => ContentCategory::Preposition,
                Some(other) => {
                    return Err(format!(
                        "unknown category \"{other}\" (expected noun|verb|adj|adv|prep)"
                    ))
                }
                None => return Err("\"word\" needs a category and a surface".to_string()),
            };
            let surface = fields.next().ok_or("\"word\" needs a surface form")?;
            let result = match fields.next() {
                Some(lexeme) => lexicon.register_with_lexeme(surface, category, lexeme),
                None => lexicon.register_content_word(surface, category),
            };
            if let Some(extra) = fields.next() {
                return Err(format!("unexpected trailing field \"{extra}\""));
            }
            result.map_err(|e| e.to_string())
        }
        Some(other) => Err(format!("unknown directive \"{other}\"")),
        None => Err("empty directive".to_string()),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecoveryError {
    #[error("a guard (\"{guard}\") appears without an open transition")]
    DanglingGuard { guard: String },
    #[error("an action (\"{action}\") appears without an open transition")]
    DanglingAction { action: String },
    #[error("the open transition already has a guard")]
    DuplicateGuard,
    #[error("the open transition already has an action")]
    DuplicateAction,
}

/// Folds parsed readings back into facts. Transition sentences open a
/// pending transition that absorbs its guard and action suffixes and is
/// flushed by the next non-suffix sentence.
pub fn recover_facts(sentences: &[Sentence]) -> Result<FactBase, RecoveryError> {
    struct Pending {
        automaton: String,
        source: String,
        target: String,
        guard: Option<String>,
        action: Option<String>,
    }
    let mut base = FactBase::new();
    let mut pending: Option<Pending> = None;
    let flush = |pending: &mut Option<Pending>, base: &mut FactBase| {
        if let Some(p) = pending.take() {
            base.insert(Fact::HasTransition {
                automaton: p.automaton,
                source: p.source,
                target: p.target,
                guard: p.guard,
                action: p.action,
            });
        }
    };

    for sentence in sentences {
        match &sentence.reading {
            Reading::TransitionDecl {
                automaton,
                source,
                target,
            } => {
                flush(&mut pending, &mut base);
                pending = Some(Pending {
                    automaton: automaton.clone(),
                    source: source.clone(),
                    target: target.clone(),
                    guard: None,
                    action: None,
                });
            }
            Reading::TransitionGuard { guard } => match pending.as_mut() {
                None => {
                    return Err(RecoveryError::DanglingGuard {
                        guard: guard.clone(),
                    })
                }
                Some(p) if p.guard.is_some() => return Err(RecoveryError::DuplicateGuard),
                Some(p) => p.guard = Some(guard.clone()),
            },
            Reading::TransitionAction { action } => match pending.as_mut() {
                None => {
                    return Err(RecoveryError::DanglingAction {
                        action: action.clone(),
                    })
                }
                Some(p) if p.action.is_some() => return Err(RecoveryError::DuplicateAction),
                Some(p) => p.action = Some(action.clone()),
            },
            reading => {
                flush(&mut pending, &mut base);
                recover_one(reading, &mut base);
            }
        }
    }
    flush(&mut pending, &mut base);
    Ok(base)
}

fn recover_one(reading: &Reading, base: &mut FactBase) {
    match reading {
        Reading::DatatypeDecl { name } => {
            base.insert(Fact::IsDatatype {
                type_name: name.clone(),
            });
        }
        Reading::ConstantDecl { name } => {
            base.insert(Fact::IsConstant { name: name.clone() });
        }
        Reading::ComponentDecl { name } => {
            base.insert(Fact::IsComponent { name: name.clone() });
        }
        // Channels contribute their fact via the connects sentence.
        Reading::ChannelDecl { .. } => {}
        Reading::AutomatonDecl { name, owner } => {
            base.insert(Fact::IsAutomaton {
                automaton: name.clone(),
                owner: owner.clone(),
            });
        }
        Reading::ConsistsOf {
            type_name,
            count,
            members,
        } => {
            base.insert(Fact::HasElementCount {
                type_name: type_name.clone(),
                count: *count,
            });
            for member in members {
                base.insert(Fact::ElementOf {
                    member: member.clone(),
                    type_name: type_name.clone(),
                });
            }
        }
        Reading::SubcomponentList {
            parent, children, ..
        } => {
            for child in children {
                base.insert(Fact::Subcomponent {
                    parent: parent.clone(),
                    child: child.clone(),
                });
            }
        }
        Reading::StateList {
            automaton, states, ..
        } => {
            for state in states {
                base.insert(Fact::HasState {
                    automaton: automaton.clone(),
                    state: state.clone(),
                });
            }
        }
        Reading::EqualsValue { name, value } => {
            base.insert(Fact::HasValue {
                name: name.clone(),
                value: *value,
            });
        }
        Reading::PortDecl {
            component,
            port,
            direction,
            type_name,
        } => {
            base.insert(Fact::HasPort {
                component: component.clone(),
                port: port.clone(),
                direction: *direction,
                type_name: type_name.clone(),
            });
        }
        Reading::ChannelConnects {
            channel,
            source_port,
            source_component,
            target_port,
            target_component,
        } => {
            base.insert(Fact::Connects {
                channel: channel.clone(),
                source_component: source_component.clone(),
                source_port: source_port.clone(),
                target_component: target_component.clone(),
                target_port: target_port.clone(),
            });
        }
        Reading::InitialDecl { automaton, state } => {
            base.insert(Fact::IsInitialState {
                automaton: automaton.clone(),
                state: state.clone(),
            });
        }
        Reading::KindOf {
            subject,
            kind,
            container: Some(container),
        } if kind == "ELEMENT" => {
            base.insert(Fact::ElementOf {
                member: subject.clone(),
                type_name: container.clone(),
            });
        }
        Reading::KindOf {
            subject,
            kind,
            container: Some(container),
        } if kind == "STATE" => {
            base.insert(Fact::HasState {
                automaton: container.clone(),
                state: subject.clone(),
            });
        }
        // Other kind statements, answers, and questions carry no facts.
        Reading::KindOf { .. } => {}
        Reading::HasCount { subject, count } => {
            base.insert(Fact::HasElementCount {
                type_name: subject.clone(),
                count: *count,
            });
        }
        Reading::TransitionDecl { .. }
        | Reading::TransitionGuard { .. }
        | Reading::TransitionAction { .. } => {
            unreachable!("transition readings are folded by recover_facts")
        }
        Reading::YesNoAnswer { .. } | Reading::Question(_) => {}
    }
}

impl fmt::Display for ParsedDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for sentence in &self.sentences {
            writeln!(f, "{}", token::detokenize(&sentence.tokens))?;
        }
        Ok(())
    }
}

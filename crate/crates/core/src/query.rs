//! Question answering over a fact base.
//!
//! Three question forms are supported: "What is X?", "How many elements
//! does X have?", and the membership questions "Is X a <kind>?" /
//! "Is X an element of T?". Other grammatical questions are rejected as
//! unsupported rather than ungrammatical.
//!
//! Membership questions are pure: they answer "No, it is not." for names
//! the specification never mentions. The other two forms require the
//! entity to exist.

use thiserror::Error;

use crate::ace::{self, Lexicon, QuestionShape, Reading};
use crate::facts::{Fact, FactBase};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuestionForm {
    WhatIs { name: String },
    HowManyElements { type_name: String },
    IsElementOf { member: String, type_name: String },
    /// "Is X a <kind>?" with the kind noun's lexeme.
    IsA { name: String, kind: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    pub form: QuestionForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer {
    /// A grammatical sentence of the controlled language.
    pub text: String,
    /// Polarity for membership questions.
    pub truth: Option<bool>,
    /// Count for how-many questions.
    pub count: Option<usize>,
}

impl Answer {
    fn plain(text: impl Into<String>) -> Self {
        Answer {
            text: text.into(),
            truth: None,
            count: None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("not a valid question: {detail}")]
    Invalid { detail: String },
    #[error("unsupported question form: {detail}")]
    UnsupportedQuestionForm { detail: String },
    #[error("\"{name}\" is not mentioned in the specification")]
    UnknownEntity { name: String },
    #[error("\"{name}\" does not have counted elements")]
    NotADatatype { name: String },
}

/// Parses one question sentence. The text must hold exactly one sentence,
/// and that sentence must be a question in a supported form.
pub fn parse_question(text: &str, lexicon: &Lexicon) -> Result<Question, QueryError> {
    let tokens = ace::tokenize(text, lexicon).map_err(|e| QueryError::Invalid {
        detail: e.to_string(),
    })?;
    let sentences = ace::split_sentences(&tokens);
    if sentences.len() != 1 {
        return Err(QueryError::Invalid {
            detail: format!("expected one sentence, found {}", sentences.len()),
        });
    }
    let sentence = ace::parse_sentence(sentences[0]).map_err(|e| QueryError::Invalid {
        detail: e.to_string(),
    })?;
    let shape = match sentence.reading {
        Reading::Question(shape) => shape,
        _ => {
            return Err(QueryError::Invalid {
                detail: "the sentence is a statement, not a question".to_string(),
            })
        }
    };
    let form = match shape {
        QuestionShape::Wh { query_word, name } => {
            if query_word != "what" {
                return Err(QueryError::UnsupportedQuestionForm {
                    detail: format!("\"{query_word}\" questions are not supported"),
                });
            }
            QuestionForm::WhatIs { name }
        }
        QuestionShape::HowMany {
            quantifier,
            noun,
            name,
        } => {
            if quantifier != "many" {
                return Err(QueryError::UnsupportedQuestionForm {
                    detail: "\"how much\" is not a supported question".to_string(),
                });
            }
            if noun != "ELEMENT" {
                return Err(QueryError::UnsupportedQuestionForm {
                    detail: "only elements can be counted".to_string(),
                });
            }
            QuestionForm::HowManyElements { type_name: name }
        }
        QuestionShape::IsAKind { name, kind } => QuestionForm::IsA { name, kind },
        QuestionShape::IsElementOf { member, type_name } => {
            QuestionForm::IsElementOf { member, type_name }
        }
    };
    Ok(Question { form })
}

/// Answers a question against the facts.
pub fn answer(question: &Question, facts: &FactBase) -> Result<Answer, QueryError> {
    match &question.form {
        QuestionForm::WhatIs { name } => what_is(name, facts),
        QuestionForm::HowManyElements { type_name } => how_many_elements(type_name, facts),
        QuestionForm::IsElementOf { member, type_name } => Ok(yes_no(facts.contains(
            &Fact::ElementOf {
                member: member.clone(),
                type_name: type_name.clone(),
            },
        ))),
        QuestionForm::IsA { name, kind } => Ok(yes_no(is_a(name, kind, facts))),
    }
}

/// Convenience: parse and answer in one step.
pub fn ask(text: &str, lexicon: &Lexicon, facts: &FactBase) -> Result<Answer, QueryError> {
    answer(&parse_question(text, lexicon)?, facts)
}

fn yes_no(truth: bool) -> Answer {
    Answer {
        text: if truth {
            "Yes, it is.".to_string()
        } else {
            "No, it is not.".to_string()
        },
        truth: Some(truth),
        count: None,
    }
}

/// Classifies a name by the strongest kind of fact that mentions it. The
/// precedence makes the answer deterministic when one name plays several
/// roles (an enum member that is also a state answers as an element) and
/// independent of fact insertion order (a subcomponent is mentioned by
/// its parent before its own declaration).
fn what_is(name: &str, facts: &FactBase) -> Result<Answer, QueryError> {
    let mut best: Option<(usize, Answer)> = None;
    for fact in facts.about(name) {
        let candidate = match fact {
            Fact::IsDatatype { type_name } if type_name == name => {
                Some((0, Answer::plain("It is a data-type.")))
            }
            Fact::IsConstant { name: n } if n == name => {
                Some((1, Answer::plain("It is a constant.")))
            }
            fact if component_evidence(name, fact) => {
                Some((2, Answer::plain("It is a component.")))
            }
            Fact::IsAutomaton { automaton, owner } if automaton == name => Some((
                3,
                Answer::plain(format!(
                    "It is a state-automaton of the component {owner}."
                )),
            )),
            Fact::ElementOf { member, type_name } if member == name => Some((
                4,
                Answer::plain(format!("It is an element of {type_name}.")),
            )),
            Fact::HasPort {
                component, port, ..
            } if port == name => {
                Some((5, Answer::plain(format!("It is a port of {component}."))))
            }
            Fact::HasState { automaton, state } if state == name => {
                Some((6, Answer::plain(format!("It is a state of {automaton}."))))
            }
            Fact::Connects { channel, .. } if channel == name => {
                Some((7, Answer::plain("It is a channel.")))
            }
            _ => None,
        };
        if let Some((precedence, answer)) = candidate {
            if best.as_ref().map_or(true, |(b, _)| precedence < *b) {
                best = Some((precedence, answer));
            }
        }
    }
    best.map(|(_, answer)| answer)
        .ok_or_else(|| QueryError::UnknownEntity {
            name: name.to_string(),
        })
}

fn how_many_elements(type_name: &str, facts: &FactBase) -> Result<Answer, QueryError> {
    let mut known = false;
    let mut count = None;
    for fact in facts.about(type_name) {
        known = true;
        if let Fact::HasElementCount { type_name: t, count: c } = fact {
            if t == type_name {
                count = Some(*c);
                break;
            }
        }
    }
    if !known {
        return Err(QueryError::UnknownEntity {
            name: type_name.to_string(),
        });
    }
    match count {
        Some(1) => Ok(Answer {
            text: "It has 1 element.".to_string(),
            truth: None,
            count: Some(1),
        }),
        Some(n) => Ok(Answer {
            text: format!("It has {n} elements."),
            truth: None,
            count: Some(n),
        }),
        None => Err(QueryError::NotADatatype {
            name: type_name.to_string(),
        }),
    }
}

fn is_a(name: &str, kind: &str, facts: &FactBase) -> bool {
    facts.about(name).any(|fact| match (kind, fact) {
        ("DATATYPE", Fact::IsDatatype { type_name }) => type_name == name,
        ("CONSTANT", Fact::IsConstant { name: n }) => n == name,
        ("COMPONENT", fact) => component_evidence(name, fact),
        ("STATE-AUTOMATON", Fact::IsAutomaton { automaton, .. }) => automaton == name,
        ("ELEMENT", Fact::ElementOf { member, .. }) => member == name,
        ("STATE", Fact::HasState { state, .. }) => state == name,
        ("PORT", Fact::HasPort { port, .. }) => port == name,
        ("CHANNEL", Fact::Connects { channel, .. }) => channel == name,
        _ => false,
    })
}

/// Componenthood is also implied by the roles only components can play:
/// parent or child in a consists-of relation, port or channel endpoint,
/// and automaton owner. This keeps names that appear solely in such roles
/// answerable instead of reported as unmentioned.
fn component_evidence(name: &str, fact: &Fact) -> bool {
    match fact {
        Fact::IsComponent { name: n } => n == name,
        Fact::Subcomponent { parent, child } => parent == name || child == name,
        Fact::HasPort { component, .. } => component == name,
        Fact::Connects {
            source_component,
            target_component,
            ..
        } => source_component == name || target_component == name,
        Fact::IsAutomaton { owner, .. } => owner == name,
        _ => false,
    }
}

//! The vocabulary: closed function-word classes, the two fixed phrases,
//! a mutable content-word registry, and registered proper names.
//!
//! Function words and fixed phrases are compiled in and cannot be changed
//! at runtime. Content words (nouns, verbs, adjectives, adverbs,
//! prepositions) can be registered, subject to the no-blank-space rule:
//! multiword content must be hyphenated ("interested in" becomes
//! "interested-in"). Proper names are model identifiers registered during
//! generation; they are kept apart from the content registry so user
//! lexicon edits never mix with model-derived vocabulary.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContentCategory {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Preposition,
}

impl ContentCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ContentCategory::Noun => "noun",
            ContentCategory::Verb => "verb",
            ContentCategory::Adjective => "adjective",
            ContentCategory::Adverb => "adverb",
            ContentCategory::Preposition => "preposition",
        }
    }
}

impl fmt::Display for ContentCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionRole {
    Determiner,
    Quantifier,
    Coordinator,
    Negation,
    Pronoun,
    QueryWord,
    Auxiliary,
    Be,
    Genitive,
    Interjection,
}

/// Closed class: matched case-insensitively.
const FUNCTION_WORDS: &[(&str, FunctionRole)] = &[
    ("a", FunctionRole::Determiner),
    ("an", FunctionRole::Determiner),
    ("the", FunctionRole::Determiner),
    ("many", FunctionRole::Quantifier),
    ("much", FunctionRole::Quantifier),
    ("every", FunctionRole::Quantifier),
    ("all", FunctionRole::Quantifier),
    ("and", FunctionRole::Coordinator),
    ("or", FunctionRole::Coordinator),
    ("not", FunctionRole::Negation),
    ("no", FunctionRole::Negation),
    ("it", FunctionRole::Pronoun),
    ("that", FunctionRole::Pronoun),
    ("what", FunctionRole::QueryWord),
    ("when", FunctionRole::QueryWord),
    ("where", FunctionRole::QueryWord),
    ("who", FunctionRole::QueryWord),
    ("whom", FunctionRole::QueryWord),
    ("whose", FunctionRole::QueryWord),
    ("which", FunctionRole::QueryWord),
    ("why", FunctionRole::QueryWord),
    ("how", FunctionRole::QueryWord),
    ("do", FunctionRole::Auxiliary),
    ("does", FunctionRole::Auxiliary),
    ("did", FunctionRole::Auxiliary),
    ("can", FunctionRole::Auxiliary),
    ("could", FunctionRole::Auxiliary),
    ("may", FunctionRole::Auxiliary),
    ("might", FunctionRole::Auxiliary),
    ("must", FunctionRole::Auxiliary),
    ("shall", FunctionRole::Auxiliary),
    ("should", FunctionRole::Auxiliary),
    ("will", FunctionRole::Auxiliary),
    ("would", FunctionRole::Auxiliary),
    ("is", FunctionRole::Be),
    ("are", FunctionRole::Be),
    ("am", FunctionRole::Be),
    ("was", FunctionRole::Be),
    ("were", FunctionRole::Be),
    ("be", FunctionRole::Be),
    ("been", FunctionRole::Be),
    ("being", FunctionRole::Be),
    ("'s", FunctionRole::Genitive),
    ("yes", FunctionRole::Interjection),
];

/// Closed class: matched case-insensitively, longest first.
pub const FIXED_PHRASES: &[&str] = &["it is true that", "there is"];

/// Words that only occur inside fixed phrases and are not tokens on their
/// own; they must stay out of every other class.
const PHRASE_ONLY_WORDS: &[&str] = &["there", "true"];

/// The count word recognized as the number 1 (exact lowercase form).
pub const NUMBER_WORD_ONE: &str = "one";

pub fn function_role(word: &str) -> Option<FunctionRole> {
    let folded = word.to_lowercase();
    FUNCTION_WORDS
        .iter()
        .find(|(w, _)| *w == folded)
        .map(|(_, r)| *r)
}

pub fn is_phrase_only_word(word: &str) -> bool {
    let folded = word.to_lowercase();
    PHRASE_ONLY_WORDS.contains(&folded.as_str())
}

/// True when the surface cannot become a content word or proper name
/// because the closed classes already own it.
fn is_reserved(word: &str) -> bool {
    // The count word is matched exactly by the tokenizer, so only the
    // exact lowercase form is off limits.
    function_role(word).is_some() || is_phrase_only_word(word) || word == NUMBER_WORD_ONE
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentEntry {
    pub category: ContentCategory,
    /// Canonical lexeme; synonym surfaces share one ("datatype" and
    /// "data-type" both map to DATATYPE).
    pub lexeme: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("content word surface is empty")]
    EmptySurface,
    #[error("\"{surface}\" contains a blank space; hyphenate multiword content (\"interested in\" -> \"interested-in\")")]
    BlankSpaceInContentWord { surface: String },
    #[error("\"{surface}\" cannot be scanned as one word token (letters, digits, '_', '-', '=' with at least one letter)")]
    UnscannableContentWord { surface: String },
    #[error("\"{surface}\" is reserved closed-class vocabulary (function word, fixed phrase, or count word)")]
    FunctionWordCollision { surface: String },
    #[error("\"{surface}\" is already registered as {existing}, not {requested}")]
    CategoryConflict {
        surface: String,
        existing: ContentCategory,
        requested: ContentCategory,
    },
    #[error("\"{surface}\" is already in use as {other}")]
    NameCollision {
        surface: String,
        /// What the surface is already used as ("a proper name", "a noun", ...).
        other: String,
    },
    #[error("\"{name}\" cannot be a proper name: {reason}")]
    InvalidProperName { name: String, reason: String },
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    content: HashMap<String, ContentEntry>,
    proper_names: HashMap<String, ()>,
    /// Insertion order of registrations, for deterministic listings.
    content_order: Vec<String>,
    name_order: Vec<String>,
}

/// The built-in vocabulary: closed classes plus the content words the
/// sentence templates and answer forms need.
pub fn default_lexicon() -> Lexicon {
    use ContentCategory::*;
    let mut lex = Lexicon::default();
    let entries: &[(&str, ContentCategory, &str)] = &[
        ("datatype", Noun, "DATATYPE"),
        ("data-type", Noun, "DATATYPE"),
        ("constant", Noun, "CONSTANT"),
        ("element", Noun, "ELEMENT"),
        ("elements", Noun, "ELEMENT"),
        ("component", Noun, "COMPONENT"),
        ("components", Noun, "COMPONENT"),
        ("port", Noun, "PORT"),
        ("channel", Noun, "CHANNEL"),
        ("state", Noun, "STATE"),
        ("states", Noun, "STATE"),
        ("state-automaton", Noun, "STATE-AUTOMATON"),
        ("transition", Noun, "TRANSITION"),
        ("type", Noun, "TYPE"),
        ("integer", Noun, "INTEGER"),
        ("boolean", Noun, "BOOLEAN"),
        ("consists-of", Verb, "CONSISTS-OF"),
        ("connects", Verb, "CONNECTS"),
        ("performs", Verb, "PERFORMS"),
        ("have", Verb, "HAVE"),
        ("has", Verb, "HAVE"),
        ("equal", Adjective, "EQUAL"),
        ("triggered-by", Adjective, "TRIGGERED-BY"),
        ("initial", Adjective, "INITIAL"),
        ("input", Adjective, "INPUT"),
        ("output", Adjective, "OUTPUT"),
        ("to", Preposition, "TO"),
        ("of", Preposition, "OF"),
        ("from", Preposition, "FROM"),
    ];
    for (surface, category, lexeme) in entries {
        lex.register_with_lexeme(surface, *category, lexeme)
            .expect("built-in vocabulary is valid");
    }
    lex
}

impl Lexicon {
    pub fn content(&self, surface: &str) -> Option<&ContentEntry> {
        self.content.get(surface)
    }

    pub fn is_proper_name(&self, surface: &str) -> bool {
        self.proper_names.contains_key(surface)
    }

    /// Registers a content word under its own canonical lexeme (the
    /// uppercased surface). Idempotent for an identical (surface, category).
    pub fn register_content_word(
        &mut self,
        surface: &str,
        category: ContentCategory,
    ) -> Result<(), LexiconError> {
        let lexeme = surface.to_uppercase();
        self.register_with_lexeme(surface, category, &lexeme)
    }

    /// Registration with an explicit canonical lexeme, used by the built-in
    /// vocabulary and by lexicon files to form synonym groups.
    pub fn register_with_lexeme(
        &mut self,
        surface: &str,
        category: ContentCategory,
        lexeme: &str,
    ) -> Result<(), LexiconError> {
        if surface.is_empty() {
            return Err(LexiconError::EmptySurface);
        }
        if surface.contains(char::is_whitespace) {
            return Err(LexiconError::BlankSpaceInContentWord {
                surface: surface.to_string(),
            });
        }
        if !is_valid_name_token(surface) {
            return Err(LexiconError::UnscannableContentWord {
                surface: surface.to_string(),
            });
        }
        if is_reserved(surface) {
            return Err(LexiconError::FunctionWordCollision {
                surface: surface.to_string(),
            });
        }
        if self.is_proper_name(surface) {
            return Err(LexiconError::NameCollision {
                surface: surface.to_string(),
                other: "a proper name".to_string(),
            });
        }
        if let Some(existing) = self.content.get(surface) {
            if existing.category != category {
                return Err(LexiconError::CategoryConflict {
                    surface: surface.to_string(),
                    existing: existing.category,
                    requested: category,
                });
            }
            return Ok(());
        }
        self.content.insert(
            surface.to_string(),
            ContentEntry {
                category,
                lexeme: lexeme.to_string(),
            },
        );
        self.content_order.push(surface.to_string());
        Ok(())
    }

    /// Registers a model identifier so it tokenizes as a proper name even
    /// when it is not capitalized (tGreen, pedastrianColor). The name must
    /// be scannable as one token and must not shadow existing vocabulary.
    pub fn register_proper_name(&mut self, name: &str) -> Result<(), LexiconError> {
        if self.is_proper_name(name) {
            return Ok(());
        }
        if name.is_empty() {
            return Err(LexiconError::InvalidProperName {
                name: name.to_string(),
                reason: "empty".to_string(),
            });
        }
        if !is_valid_name_token(name) {
            return Err(LexiconError::InvalidProperName {
                name: name.to_string(),
                reason: "must consist of letters, digits, '_', '-', '=' and contain a letter"
                    .to_string(),
            });
        }
        if is_reserved(name) {
            return Err(LexiconError::InvalidProperName {
                name: name.to_string(),
                reason: "collides with closed-class vocabulary".to_string(),
            });
        }
        if let Some(entry) = self.content.get(name) {
            return Err(LexiconError::NameCollision {
                surface: name.to_string(),
                other: format!("a {}", entry.category),
            });
        }
        self.proper_names.insert(name.to_string(), ());
        self.name_order.push(name.to_string());
        Ok(())
    }

    /// Content words registered beyond the built-in set, in registration
    /// order. Drives the `#! word` directives in rendered documents.
    pub fn extra_content_words(&self) -> Vec<(&str, &ContentEntry)> {
        let defaults = default_lexicon();
        self.content_order
            .iter()
            .filter(|s| defaults.content(s).is_none())
            .map(|s| (s.as_str(), &self.content[s.as_str()]))
            .collect()
    }

    /// Registered proper names in registration order.
    pub fn proper_names(&self) -> impl Iterator<Item = &str> {
        self.name_order.iter().map(|s| s.as_str())
    }

    /// Applies a lexicon file: `<category> <surface>\[<canonical-lexeme>\]`
    /// per line, `#` starts a comment. Categories: noun|verb|adj|adv|prep.
    pub fn load_lexicon_file(&mut self, text: &str) -> Result<(), LexiconFileError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let category = match parts.next().unwrap() {
                "noun" => ContentCategory::Noun,
                "verb" => ContentCategory::Verb,
                "adj" => ContentCategory::Adjective,
                "adv" => ContentCategory::Adverb,
                "prep" => ContentCategory::Preposition,
                other => {
                    return Err(LexiconFileError {
                        line: idx + 1,
                        message: format!(
                            "unknown category \"{other}\" (expected noun|verb|adj|adv|prep)"
                        ),
                    })
                }
            };
            let surface = parts.next().ok_or_else(|| LexiconFileError {
                line: idx + 1,
                message: "missing surface form".to_string(),
            })?;
            let result = match parts.next() {
                Some(lexeme) => self.register_with_lexeme(surface, category, lexeme),
                None => self.register_content_word(surface, category),
            };
            if let Some(extra) = parts.next() {
                return Err(LexiconFileError {
                    line: idx + 1,
                    message: format!("unexpected trailing field \"{extra}\""),
                });
            }
            result.map_err(|e| LexiconFileError {
                line: idx + 1,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }
}

/// Token policy for identifiers and lexicalized guard/action text.
pub fn is_valid_name_token(text: &str) -> bool {
    !text.is_empty()
        && text
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '='))
        && text.chars().any(|c| c.is_ascii_alphabetic())
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("lexicon file line {line}: {message}")]
pub struct LexiconFileError {
    pub line: usize,
    pub message: String,
}

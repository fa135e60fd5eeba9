//! The controlled-language layer: vocabulary, tokenization, sentence
//! grammar, and document parsing.
//!
//! The language is a small checked subset of controlled English.
//! Sentences are built from closed-class function words, two
//! fixed phrases ("there is", "it is true that"), registered content
//! words, numbers, and proper names; each valid sentence has exactly one
//! reading. See docs/language.md for the sentence shapes and the
//! diagnostic rules.

pub mod document;
pub mod grammar;
pub mod lexicon;
pub mod token;

pub use document::{parse_document, recover_facts, DocumentError, ParsedDocument, RecoveryError};
pub use grammar::{
    check_sentence, check_text, parse_sentence, parse_sentence_in, Context, Diagnostic,
    QuestionShape, Reading, Rule, Sentence, SentenceError, ValidationReport,
};
pub use lexicon::{
    default_lexicon, ContentCategory, FunctionRole, Lexicon, LexiconError, LexiconFileError,
};
pub use token::{detokenize, split_sentences, tokenize, Terminator, Token, TokenKind, TokenizeError};

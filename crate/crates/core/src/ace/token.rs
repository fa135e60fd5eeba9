//! Greedy longest-match tokenizer.
//!
//! Classification order at each word: fixed phrases, then function words
//! (case-insensitive), then content words (case-sensitive), then numbers,
//! then registered proper names, then capitalized unknown words as proper
//! names. Anything left over is an unknown token.
//!
//! Detokenization joins surfaces with single spaces, attaching terminators,
//! commas, and genitives to the preceding token; tokenize and detokenize
//! are mutually inverse on single-space-normalized sentences.

use std::fmt;

use thiserror::Error;

use super::lexicon::{
    self, ContentCategory, FunctionRole, Lexicon, FIXED_PHRASES, NUMBER_WORD_ONE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Terminator {
    Period,
    QuestionMark,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TokenKind {
    FunctionWord(FunctionRole),
    FixedPhrase,
    ContentWord {
        category: ContentCategory,
        /// Canonical lexeme shared by synonym surfaces.
        lexeme: String,
    },
    Number(i64),
    ProperName,
    Terminator(Terminator),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    /// Exact input slice, original casing preserved.
    pub surface: String,
    pub kind: TokenKind,
    /// Byte offset of the surface in the tokenized text.
    pub position: usize,
}

impl Token {
    pub fn is_terminator(&self) -> bool {
        matches!(self.kind, TokenKind::Terminator(_))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TokenizeError {
    #[error("unknown token \"{word}\" at byte {position}")]
    UnknownToken { word: String, position: usize },
    #[error("unexpected character '{ch}' at byte {position}")]
    UnexpectedCharacter { ch: char, position: usize },
    #[error("number \"{text}\" at byte {position} is out of range")]
    NumberOutOfRange { text: String, position: usize },
}

impl TokenizeError {
    pub fn position(&self) -> usize {
        match self {
            TokenizeError::UnknownToken { position, .. }
            | TokenizeError::UnexpectedCharacter { position, .. }
            | TokenizeError::NumberOutOfRange { position, .. } => *position,
        }
    }
}

/// Strict tokenization: stops at the first unclassifiable input.
pub fn tokenize(text: &str, lexicon: &Lexicon) -> Result<Vec<Token>, TokenizeError> {
    let (tokens, errors) = scan(text, lexicon);
    match errors.into_iter().next() {
        Some(err) => Err(err),
        None => Ok(tokens),
    }
}

/// Lenient tokenization: classifies what it can and reports every
/// unclassifiable word, so diagnostics cover a whole sentence at once.
pub fn scan(text: &str, lexicon: &Lexicon) -> (Vec<Token>, Vec<TokenizeError>) {
    let mut tokens = Vec::new();
    let mut errors = Vec::new();
    let bytes = text.as_bytes();
    let mut pos = 0;

    while pos < bytes.len() {
        let rest = &text[pos..];
        let ch = rest.chars().next().unwrap();
        if ch.is_whitespace() {
            pos += ch.len_utf8();
            continue;
        }
        match ch {
            '.' => {
                tokens.push(Token {
                    surface: ".".to_string(),
                    kind: TokenKind::Terminator(Terminator::Period),
                    position: pos,
                });
                pos += 1;
            }
            '?' => {
                tokens.push(Token {
                    surface: "?".to_string(),
                    kind: TokenKind::Terminator(Terminator::QuestionMark),
                    position: pos,
                });
                pos += 1;
            }
            ',' => {
                tokens.push(Token {
                    surface: ",".to_string(),
                    kind: TokenKind::FunctionWord(FunctionRole::Coordinator),
                    position: pos,
                });
                pos += 1;
            }
            '\'' => {
                if rest[1..].starts_with('s') && is_boundary(rest[2..].chars().next()) {
                    tokens.push(Token {
                        surface: "'s".to_string(),
                        kind: TokenKind::FunctionWord(FunctionRole::Genitive),
                        position: pos,
                    });
                    pos += 2;
                } else {
                    errors.push(TokenizeError::UnexpectedCharacter { ch, position: pos });
                    pos += 1;
                }
            }
            c if is_word_char(c) => {
                if let Some(phrase_len) = match_fixed_phrase(&text[pos..]) {
                    tokens.push(Token {
                        surface: text[pos..pos + phrase_len].to_string(),
                        kind: TokenKind::FixedPhrase,
                        position: pos,
                    });
                    pos += phrase_len;
                    continue;
                }
                let end = text[pos..]
                    .char_indices()
                    .find(|(_, c)| !is_word_char(*c))
                    .map(|(i, _)| pos + i)
                    .unwrap_or(text.len());
                let word = &text[pos..end];
                match classify_word(word, lexicon, pos) {
                    Ok(kind) => tokens.push(Token {
                        surface: word.to_string(),
                        kind,
                        position: pos,
                    }),
                    Err(err) => errors.push(err),
                }
                pos = end;
            }
            _ => {
                errors.push(TokenizeError::UnexpectedCharacter { ch, position: pos });
                pos += ch.len_utf8();
            }
        }
    }
    (tokens, errors)
}

/// Word characters cover identifiers, hyphenated content words, and
/// lexicalized guard text like "counter==tRed" or "-5".
fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '=')
}

fn is_boundary(c: Option<char>) -> bool {
    match c {
        None => true,
        Some(c) => !is_word_char(c),
    }
}

/// Returns the byte length of a fixed phrase starting at the front of
/// `rest`, matching word-by-word case-insensitively. Longest phrase wins.
fn match_fixed_phrase(rest: &str) -> Option<usize> {
    'phrase: for phrase in FIXED_PHRASES {
        let mut offset = 0;
        for (i, expected) in phrase.split(' ').enumerate() {
            if i > 0 {
                let ws_len: usize = rest[offset..]
                    .chars()
                    .take_while(|c| c.is_whitespace())
                    .map(|c| c.len_utf8())
                    .sum();
                if ws_len == 0 {
                    continue 'phrase;
                }
                offset += ws_len;
            }
            let word_end = rest[offset..]
                .char_indices()
                .find(|(_, c)| !is_word_char(*c))
                .map(|(i, _)| offset + i)
                .unwrap_or(rest.len());
            let word = &rest[offset..word_end];
            if !word.eq_ignore_ascii_case(expected) {
                continue 'phrase;
            }
            offset = word_end;
        }
        return Some(offset);
    }
    None
}

fn classify_word(word: &str, lexicon: &Lexicon, pos: usize) -> Result<TokenKind, TokenizeError> {
    if let Some(role) = lexicon::function_role(word) {
        return Ok(TokenKind::FunctionWord(role));
    }
    if let Some(entry) = lexicon.content(word) {
        return Ok(TokenKind::ContentWord {
            category: entry.category,
            lexeme: entry.lexeme.clone(),
        });
    }
    if word == NUMBER_WORD_ONE {
        return Ok(TokenKind::Number(1));
    }
    let digits = word.strip_prefix('-').unwrap_or(word);
    if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
        return match word.parse::<i64>() {
            Ok(value) => Ok(TokenKind::Number(value)),
            Err(_) => Err(TokenizeError::NumberOutOfRange {
                text: word.to_string(),
                position: pos,
            }),
        };
    }
    if lexicon.is_proper_name(word) {
        return Ok(TokenKind::ProperName);
    }
    let first = word.chars().next().unwrap();
    if first.is_uppercase() && !lexicon::is_phrase_only_word(word) {
        return Ok(TokenKind::ProperName);
    }
    Err(TokenizeError::UnknownToken {
        word: word.to_string(),
        position: pos,
    })
}

/// Joins token surfaces back into sentence text: single spaces between
/// tokens, none before terminators, commas, or genitives.
pub fn detokenize(tokens: &[Token]) -> String {
    let mut out = String::new();
    for token in tokens {
        let attach = matches!(token.kind, TokenKind::Terminator(_))
            || token.surface == ","
            || token.surface == "'s";
        if !out.is_empty() && !attach {
            out.push(' ');
        }
        out.push_str(&token.surface);
    }
    out
}

/// Splits a token stream into sentences after each terminator. A trailing
/// fragment without a terminator is returned as a final sentence so the
/// grammar can report the missing terminator itself.
pub fn split_sentences(tokens: &[Token]) -> Vec<&[Token]> {
    let mut sentences = Vec::new();
    let mut start = 0;
    for (i, token) in tokens.iter().enumerate() {
        if token.is_terminator() {
            sentences.push(&tokens[start..=i]);
            start = i + 1;
        }
    }
    if start < tokens.len() {
        sentences.push(&tokens[start..]);
    }
    sentences
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TokenKind::FunctionWord(role) => write!(f, "functionWord({:?}, {})", role, self.surface),
            TokenKind::FixedPhrase => write!(f, "fixedPhrase({})", self.surface),
            TokenKind::ContentWord { category, lexeme } => {
                write!(f, "contentWord({}, {})", category, lexeme)
            }
            TokenKind::Number(n) => write!(f, "number({n})"),
            TokenKind::ProperName => write!(f, "properName({})", self.surface),
            TokenKind::Terminator(Terminator::Period) => f.write_str("period"),
            TokenKind::Terminator(Terminator::QuestionMark) => f.write_str("questionMark"),
        }
    }
}

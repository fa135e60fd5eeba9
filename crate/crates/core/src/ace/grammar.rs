//! Sentence grammar: structural checking and one-meaning parsing.
//!
//! `check_sentence` verifies that a token stream fits one of the supported
//! sentence shapes; it performs no anaphora, so answers with dangling
//! pronouns ("It is a data-type.") still check. `parse_sentence_in` adds
//! the document dimension: pronoun subjects resolve against the antecedent
//! candidates of the preceding sentence, transition suffixes attach to the
//! open transition, and a pronoun that supports more than one distinct
//! reading is rejected as ambiguous rather than silently resolved.
//!
//! Antecedent policy: a declarative exposes its grammatical subject; a
//! sentence that introduces a fresh entity additionally exposes that
//! entity ("C has an input port p ..." exposes both C and p; "There is a
//! transition ..." exposes only the unnamed transition). Questions expose
//! their queried subject so that answers can refer back to it.

use std::fmt;

use crate::model::PortDirection;

use super::lexicon::Lexicon;
use super::token::{self, Terminator, Token, TokenKind};
use super::lexicon::FunctionRole;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    UnknownToken,
    UnexpectedCharacter,
    NumberRange,
    EmptySentence,
    MissingTerminator,
    TrailingTokens,
    TerminatorKind,
    SubjectShape,
    PredicateShape,
    ArticleAgreement,
    CountAgreement,
    ListShape,
    KindTail,
    ObjectShape,
    QuestionShape,
    PolarityAgreement,
    PronounAntecedent,
    PronounReference,
    AutomatonContext,
    TransitionSuffix,
    Ambiguity,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::UnknownToken => "unknown-token",
            Rule::UnexpectedCharacter => "unexpected-character",
            Rule::NumberRange => "number-range",
            Rule::EmptySentence => "empty-sentence",
            Rule::MissingTerminator => "missing-terminator",
            Rule::TrailingTokens => "trailing-tokens",
            Rule::TerminatorKind => "terminator-kind",
            Rule::SubjectShape => "subject-shape",
            Rule::PredicateShape => "predicate-shape",
            Rule::ArticleAgreement => "article-agreement",
            Rule::CountAgreement => "count-agreement",
            Rule::ListShape => "list-shape",
            Rule::KindTail => "kind-of-phrase",
            Rule::ObjectShape => "object-shape",
            Rule::QuestionShape => "question-shape",
            Rule::PolarityAgreement => "answer-polarity",
            Rule::PronounAntecedent => "pronoun-antecedent",
            Rule::PronounReference => "pronoun-reference",
            Rule::AutomatonContext => "automaton-context",
            Rule::TransitionSuffix => "transition-suffix",
            Rule::Ambiguity => "ambiguity",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One violated rule: the first failure found at `position` (byte offset
/// into the sentence text).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub position: usize,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "byte {}: {}: {}", self.position, self.rule, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// The single meaning assigned to a sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reading {
    DatatypeDecl { name: String },
    ConstantDecl { name: String },
    ComponentDecl { name: String },
    ChannelDecl { name: String },
    AutomatonDecl { name: String, owner: String },
    ConsistsOf { type_name: String, count: usize, members: Vec<String> },
    SubcomponentList { parent: String, count: usize, children: Vec<String> },
    StateList { automaton: String, count: usize, states: Vec<String> },
    EqualsValue { name: String, value: i64 },
    PortDecl {
        component: String,
        port: String,
        direction: PortDirection,
        type_name: String,
    },
    ChannelConnects {
        channel: String,
        source_port: String,
        source_component: String,
        target_port: String,
        target_component: String,
    },
    InitialDecl { automaton: String, state: String },
    TransitionDecl { automaton: String, source: String, target: String },
    TransitionGuard { guard: String },
    TransitionAction { action: String },
    /// "X is a <kind> [of Y]." for kinds without a dedicated declaration
    /// shape; `kind` is the canonical noun lexeme.
    KindOf {
        subject: String,
        kind: String,
        container: Option<String>,
    },
    HasCount { subject: String, count: usize },
    YesNoAnswer { positive: bool },
    Question(QuestionShape),
}

/// Grammatical question shapes. Which of these a query engine supports is
/// its own concern; the grammar accepts them all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuestionShape {
    /// "<Query-word> is <Name>?"
    Wh { query_word: String, name: String },
    /// "How <many|much> <noun> does <Name> have?" (`noun` is the lexeme)
    HowMany {
        quantifier: String,
        noun: String,
        name: String,
    },
    /// "Is <Name> a <kind>?" (`kind` is the lexeme)
    IsAKind { name: String, kind: String },
    /// "Is <Member> an element of <Type>?"
    IsElementOf { member: String, type_name: String },
}

impl QuestionShape {
    /// The entity the question is about; becomes the antecedent for a
    /// following answer sentence.
    pub fn subject(&self) -> &str {
        match self {
            QuestionShape::Wh { name, .. }
            | QuestionShape::HowMany { name, .. }
            | QuestionShape::IsAKind { name, .. } => name,
            QuestionShape::IsElementOf { member, .. } => member,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub reading: Reading,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SentenceError {
    Invalid(Diagnostic),
    /// The sentence is grammatical but supports more than one reading.
    Ambiguous {
        position: usize,
        readings: Vec<Reading>,
    },
}

impl fmt::Display for SentenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SentenceError::Invalid(d) => d.fmt(f),
            SentenceError::Ambiguous { position, readings } => write!(
                f,
                "byte {position}: {}: the pronoun supports {} readings",
                Rule::Ambiguity,
                readings.len()
            ),
        }
    }
}

impl std::error::Error for SentenceError {}

/// What a pronoun in the next sentence may refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Antecedent {
    Named(String),
    /// The unnamed transition introduced by a "There is a transition"
    /// sentence, with its suffix saturation.
    Transition { has_guard: bool, has_action: bool },
}

/// Cross-sentence parsing state.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    candidates: Vec<Antecedent>,
    automaton: Option<String>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }
}

enum Mode<'a> {
    /// Structure only: pronouns bind a placeholder, context rules are off.
    Check,
    Resolve(&'a Context),
}

/// Structural validation of one sentence (tokens include the terminator).
pub fn check_sentence(tokens: &[Token]) -> ValidationReport {
    match parse_readings(tokens, &Mode::Check) {
        Ok(_) => ValidationReport::default(),
        Err(d) => ValidationReport {
            diagnostics: vec![d],
        },
    }
}

/// Tokenizes and checks whole text: tokenizer diagnostics are collected
/// across the text; grammar diagnostics are collected per sentence.
pub fn check_text(text: &str, lexicon: &Lexicon) -> ValidationReport {
    let (tokens, errors) = token::scan(text, lexicon);
    if !errors.is_empty() {
        return ValidationReport {
            diagnostics: errors
                .into_iter()
                .map(|e| Diagnostic {
                    position: e.position(),
                    rule: match e {
                        token::TokenizeError::UnknownToken { .. } => Rule::UnknownToken,
                        token::TokenizeError::UnexpectedCharacter { .. } => {
                            Rule::UnexpectedCharacter
                        }
                        token::TokenizeError::NumberOutOfRange { .. } => Rule::NumberRange,
                    },
                    message: e.to_string(),
                })
                .collect(),
        };
    }
    let mut report = ValidationReport::default();
    for sentence in token::split_sentences(&tokens) {
        report
            .diagnostics
            .extend(check_sentence(sentence).diagnostics);
    }
    report
}

/// Context-free parse: equivalent to parsing at the start of a document.
pub fn parse_sentence(tokens: &[Token]) -> Result<Sentence, SentenceError> {
    let mut ctx = Context::new();
    parse_sentence_in(tokens, &mut ctx)
}

/// Parses one sentence within a document context. On success the context
/// advances (antecedents, current automaton, open transition); on failure
/// it is left untouched.
pub fn parse_sentence_in(tokens: &[Token], ctx: &mut Context) -> Result<Sentence, SentenceError> {
    let mut readings =
        parse_readings(tokens, &Mode::Resolve(ctx)).map_err(SentenceError::Invalid)?;
    readings.dedup();
    if readings.len() > 1 {
        let position = tokens.first().map(|t| t.position).unwrap_or(0);
        return Err(SentenceError::Ambiguous { position, readings });
    }
    let reading = readings.pop().expect("parse produces at least one reading");
    advance_context(ctx, &reading);
    Ok(Sentence {
        tokens: tokens.to_vec(),
        reading,
    })
}

fn advance_context(ctx: &mut Context, reading: &Reading) {
    let named = |name: &String| vec![Antecedent::Named(name.clone())];
    match reading {
        Reading::DatatypeDecl { name }
        | Reading::ConstantDecl { name }
        | Reading::ComponentDecl { name }
        | Reading::ChannelDecl { name }
        | Reading::EqualsValue { name, .. } => ctx.candidates = named(name),
        Reading::AutomatonDecl { name, .. } => {
            ctx.candidates = named(name);
            ctx.automaton = Some(name.clone());
        }
        Reading::ConsistsOf { type_name, .. } => ctx.candidates = named(type_name),
        Reading::SubcomponentList { parent, .. } => ctx.candidates = named(parent),
        Reading::StateList { automaton, .. } => ctx.candidates = named(automaton),
        Reading::PortDecl {
            component, port, ..
        } => {
            ctx.candidates = vec![
                Antecedent::Named(component.clone()),
                Antecedent::Named(port.clone()),
            ];
        }
        Reading::ChannelConnects { channel, .. } => ctx.candidates = named(channel),
        Reading::InitialDecl { state, .. } => ctx.candidates = named(state),
        Reading::TransitionDecl { .. } => {
            ctx.candidates = vec![Antecedent::Transition {
                has_guard: false,
                has_action: false,
            }];
        }
        Reading::TransitionGuard { .. } => {
            if let Some(Antecedent::Transition { has_guard, .. }) = ctx.candidates.first_mut() {
                *has_guard = true;
            }
        }
        Reading::TransitionAction { .. } => {
            if let Some(Antecedent::Transition { has_action, .. }) = ctx.candidates.first_mut() {
                *has_action = true;
            }
        }
        Reading::KindOf { subject, .. } | Reading::HasCount { subject, .. } => {
            ctx.candidates = named(subject)
        }
        Reading::YesNoAnswer { .. } => {}
        Reading::Question(shape) => {
            ctx.candidates = vec![Antecedent::Named(shape.subject().to_string())]
        }
    }
}

fn fail(position: usize, rule: Rule, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        position,
        rule,
        message: message.into(),
    }
}

struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// Byte position of the next token, or just past the last one.
    fn here(&self) -> usize {
        match self.tokens.get(self.pos) {
            Some(t) => t.position,
            None => self
                .tokens
                .last()
                .map(|t| t.position + t.surface.len())
                .unwrap_or(0),
        }
    }

    fn expect_role(&mut self, role: FunctionRole, what: &str) -> Result<&'a Token, Diagnostic> {
        let pos = self.here();
        match self.bump() {
            Some(t) if t.kind == TokenKind::FunctionWord(role) => Ok(t),
            _ => Err(fail(
                pos,
                Rule::PredicateShape,
                format!("expected {what}"),
            )),
        }
    }

    fn expect_surface(
        &mut self,
        role: FunctionRole,
        surface: &str,
        what: &str,
    ) -> Result<&'a Token, Diagnostic> {
        let pos = self.here();
        match self.bump() {
            Some(t)
                if t.kind == TokenKind::FunctionWord(role)
                    && t.surface.eq_ignore_ascii_case(surface) =>
            {
                Ok(t)
            }
            _ => Err(fail(
                pos,
                Rule::PredicateShape,
                format!("expected \"{what}\""),
            )),
        }
    }

    fn expect_noun(&mut self, what: &str) -> Result<(&'a str, &'a str), Diagnostic> {
        let pos = self.here();
        match self.bump() {
            Some(t) => match &t.kind {
                TokenKind::ContentWord {
                    category: super::lexicon::ContentCategory::Noun,
                    lexeme,
                } => Ok((t.surface.as_str(), lexeme.as_str())),
                _ => Err(fail(pos, Rule::PredicateShape, format!("expected {what}"))),
            },
            None => Err(fail(pos, Rule::PredicateShape, format!("expected {what}"))),
        }
    }

    fn expect_prep(&mut self, lexeme: &str, surface: &str) -> Result<(), Diagnostic> {
        let pos = self.here();
        match self.bump() {
            Some(t) => match &t.kind {
                TokenKind::ContentWord {
                    category: super::lexicon::ContentCategory::Preposition,
                    lexeme: l,
                } if l == lexeme => Ok(()),
                _ => Err(fail(
                    pos,
                    Rule::PredicateShape,
                    format!("expected \"{surface}\""),
                )),
            },
            None => Err(fail(
                pos,
                Rule::PredicateShape,
                format!("expected \"{surface}\""),
            )),
        }
    }

    fn expect_name(&mut self, what: &str) -> Result<String, Diagnostic> {
        let pos = self.here();
        match self.bump() {
            Some(t) if t.kind == TokenKind::ProperName => Ok(t.surface.clone()),
            _ => Err(fail(
                pos,
                Rule::ObjectShape,
                format!("expected a proper name ({what})"),
            )),
        }
    }

    fn expect_number(&mut self, what: &str) -> Result<(i64, usize), Diagnostic> {
        let pos = self.here();
        match self.bump() {
            Some(t) => match t.kind {
                TokenKind::Number(n) => Ok((n, pos)),
                _ => Err(fail(pos, Rule::ObjectShape, format!("expected {what}"))),
            },
            None => Err(fail(pos, Rule::ObjectShape, format!("expected {what}"))),
        }
    }

    fn expect_done(&mut self) -> Result<(), Diagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(fail(
                t.position,
                Rule::TrailingTokens,
                format!("unexpected \"{}\" after the sentence", t.surface),
            )),
        }
    }
}

fn starts_with_vowel(word: &str) -> bool {
    matches!(
        word.chars().next().map(|c| c.to_ascii_lowercase()),
        Some('a' | 'e' | 'i' | 'o' | 'u')
    )
}

fn check_article(article: &Token, next_word: &str) -> Result<(), Diagnostic> {
    let wants_an = starts_with_vowel(next_word);
    let is_an = article.surface.eq_ignore_ascii_case("an");
    if article.surface.eq_ignore_ascii_case("the") || wants_an == is_an {
        Ok(())
    } else {
        Err(fail(
            article.position,
            Rule::ArticleAgreement,
            format!(
                "\"{} {}\" should be \"{} {}\"",
                article.surface,
                next_word,
                if wants_an { "an" } else { "a" },
                next_word
            ),
        ))
    }
}

/// Parses one sentence into its candidate readings (one per admissible
/// pronoun binding; exactly one for sentences with a named subject).
fn parse_readings(tokens: &[Token], mode: &Mode) -> Result<Vec<Reading>, Diagnostic> {
    if tokens.is_empty() {
        return Err(fail(0, Rule::EmptySentence, "empty sentence"));
    }
    let term_idx = match tokens.iter().position(|t| t.is_terminator()) {
        None => {
            let last = tokens.last().unwrap();
            return Err(fail(
                last.position + last.surface.len(),
                Rule::MissingTerminator,
                "sentence does not end with '.' or '?'",
            ));
        }
        Some(i) => i,
    };
    if term_idx + 1 < tokens.len() {
        return Err(fail(
            tokens[term_idx + 1].position,
            Rule::TrailingTokens,
            "text continues after the sentence terminator",
        ));
    }
    let terminator = match tokens[term_idx].kind {
        TokenKind::Terminator(t) => t,
        _ => unreachable!(),
    };
    let body = &tokens[..term_idx];
    if body.is_empty() {
        return Err(fail(
            tokens[term_idx].position,
            Rule::EmptySentence,
            "sentence has no words",
        ));
    }

    let mut cursor = Cursor {
        tokens: body,
        pos: 0,
    };
    let first = body.first().unwrap();
    let question = matches!(
        first.kind,
        TokenKind::FunctionWord(FunctionRole::QueryWord)
            | TokenKind::FunctionWord(FunctionRole::Be)
    );
    match (question, terminator) {
        (true, Terminator::Period) => {
            return Err(fail(
                tokens[term_idx].position,
                Rule::TerminatorKind,
                "a question ends with a question mark",
            ))
        }
        (false, Terminator::QuestionMark) => {
            return Err(fail(
                tokens[term_idx].position,
                Rule::TerminatorKind,
                "a declarative sentence ends with a period",
            ))
        }
        _ => {}
    }

    let readings = match &first.kind {
        TokenKind::FunctionWord(FunctionRole::QueryWord) => {
            vec![parse_question(&mut cursor)?]
        }
        TokenKind::FunctionWord(FunctionRole::Be) => vec![parse_yes_no_question(&mut cursor)?],
        TokenKind::FunctionWord(FunctionRole::Interjection)
        | TokenKind::FunctionWord(FunctionRole::Negation) => {
            vec![parse_answer(&mut cursor, mode)?]
        }
        TokenKind::FixedPhrase if first.surface.eq_ignore_ascii_case("there is") => {
            vec![parse_transition(&mut cursor, mode)?]
        }
        TokenKind::FixedPhrase => {
            // "It is true that ..." wraps a declarative transparently.
            cursor.bump();
            parse_declarative(&mut cursor, mode, false)?
        }
        _ => parse_declarative(&mut cursor, mode, true)?,
    };
    cursor.expect_done()?;
    Ok(readings)
}

/// Declaratives reachable inside or outside a truth wrapper: subject +
/// predicate, the initial-state form, and (unwrapped only via dispatch)
/// nothing else.
fn parse_declarative(
    cursor: &mut Cursor,
    mode: &Mode,
    _top_level: bool,
) -> Result<Vec<Reading>, Diagnostic> {
    let first = match cursor.peek() {
        Some(t) => t,
        None => {
            return Err(fail(
                cursor.here(),
                Rule::EmptySentence,
                "nothing follows the phrase",
            ))
        }
    };
    match &first.kind {
        TokenKind::FixedPhrase if first.surface.eq_ignore_ascii_case("there is") => {
            Ok(vec![parse_transition(cursor, mode)?])
        }
        TokenKind::FixedPhrase => Err(fail(
            first.position,
            Rule::PredicateShape,
            "truth wrapping cannot nest",
        )),
        TokenKind::FunctionWord(FunctionRole::Determiner)
            if first.surface.eq_ignore_ascii_case("the") =>
        {
            Ok(vec![parse_initial_state(cursor, mode)?])
        }
        TokenKind::ProperName => {
            let name = cursor.bump().unwrap().surface.clone();
            parse_predicate(cursor, mode, Subject::Named(name))
        }
        TokenKind::FunctionWord(FunctionRole::Pronoun)
            if first.surface.eq_ignore_ascii_case("it") =>
        {
            let position = first.position;
            cursor.bump();
            parse_predicate(cursor, mode, Subject::Pronoun { position })
        }
        _ => Err(fail(
            first.position,
            Rule::SubjectShape,
            "declarative must begin with noun phrase",
        )),
    }
}

enum Subject {
    Named(String),
    Pronoun { position: usize },
}

/// "The initial state is S." (needs an automaton context when resolving)
fn parse_initial_state(cursor: &mut Cursor, mode: &Mode) -> Result<Reading, Diagnostic> {
    let the = cursor.bump().unwrap();
    let adj_pos = cursor.here();
    match cursor.bump() {
        Some(t)
            if matches!(
                &t.kind,
                TokenKind::ContentWord { category: super::lexicon::ContentCategory::Adjective, lexeme }
                    if lexeme == "INITIAL"
            ) => {}
        _ => {
            return Err(fail(
                adj_pos,
                Rule::SubjectShape,
                "declarative must begin with noun phrase",
            ))
        }
    }
    let (state_surface, state_lexeme) = cursor.expect_noun("the noun \"state\"")?;
    if state_lexeme != "STATE" || state_surface.ends_with('s') {
        return Err(fail(
            the.position,
            Rule::PredicateShape,
            "expected \"the initial state is ...\"",
        ));
    }
    cursor.expect_role(FunctionRole::Be, "\"is\"")?;
    let state = cursor.expect_name("the initial state")?;
    let automaton = match mode {
        Mode::Check => String::new(),
        Mode::Resolve(ctx) => match &ctx.automaton {
            Some(a) => a.clone(),
            None => {
                return Err(fail(
                    the.position,
                    Rule::AutomatonContext,
                    "no state-automaton declared before the initial state",
                ))
            }
        },
    };
    Ok(Reading::InitialDecl { automaton, state })
}

/// "There is a transition from S to T."
fn parse_transition(cursor: &mut Cursor, mode: &Mode) -> Result<Reading, Diagnostic> {
    let phrase = cursor.bump().unwrap();
    let article = cursor.expect_role(FunctionRole::Determiner, "\"a\"")?;
    let (noun_surface, noun_lexeme) = cursor.expect_noun("the noun \"transition\"")?;
    if noun_lexeme != "TRANSITION" {
        return Err(fail(
            phrase.position,
            Rule::PredicateShape,
            "\"there is\" introduces only transitions",
        ));
    }
    check_article(article, noun_surface)?;
    cursor.expect_prep("FROM", "from")?;
    let source = cursor.expect_name("the source state")?;
    cursor.expect_prep("TO", "to")?;
    let target = cursor.expect_name("the target state")?;
    let automaton = match mode {
        Mode::Check => String::new(),
        Mode::Resolve(ctx) => match &ctx.automaton {
            Some(a) => a.clone(),
            None => {
                return Err(fail(
                    phrase.position,
                    Rule::AutomatonContext,
                    "no state-automaton declared before the transition",
                ))
            }
        },
    };
    Ok(Reading::TransitionDecl {
        automaton,
        source,
        target,
    })
}

/// "Yes, it is." / "No, it is not."
fn parse_answer(cursor: &mut Cursor, mode: &Mode) -> Result<Reading, Diagnostic> {
    let opener = cursor.bump().unwrap();
    let positive = match &opener.kind {
        TokenKind::FunctionWord(FunctionRole::Interjection) => true,
        TokenKind::FunctionWord(FunctionRole::Negation)
            if opener.surface.eq_ignore_ascii_case("no") =>
        {
            false
        }
        _ => {
            return Err(fail(
                opener.position,
                Rule::SubjectShape,
                "declarative must begin with noun phrase",
            ))
        }
    };
    let comma_pos = cursor.here();
    match cursor.bump() {
        Some(t)
            if t.kind == TokenKind::FunctionWord(FunctionRole::Coordinator)
                && t.surface == "," => {}
        _ => {
            return Err(fail(
                comma_pos,
                Rule::PredicateShape,
                "expected a comma after the answer word",
            ))
        }
    }
    let it_pos = cursor.here();
    match cursor.bump() {
        Some(t)
            if t.kind == TokenKind::FunctionWord(FunctionRole::Pronoun)
                && t.surface.eq_ignore_ascii_case("it") => {}
        _ => {
            return Err(fail(
                it_pos,
                Rule::PredicateShape,
                "expected \"it\"",
            ))
        }
    }
    if let Mode::Resolve(ctx) = mode {
        if ctx.candidates.is_empty() {
            return Err(fail(
                it_pos,
                Rule::PronounAntecedent,
                "no preceding sentence provides an antecedent for \"it\"",
            ));
        }
    }
    cursor.expect_surface(FunctionRole::Be, "is", "is")?;
    let negated = match cursor.peek() {
        Some(t)
            if t.kind == TokenKind::FunctionWord(FunctionRole::Negation)
                && t.surface.eq_ignore_ascii_case("not") =>
        {
            cursor.bump();
            true
        }
        _ => false,
    };
    if positive == negated {
        return Err(fail(
            cursor.here(),
            Rule::PolarityAgreement,
            if positive {
                "a yes answer must not be negated"
            } else {
                "a no answer requires \"not\""
            },
        ));
    }
    Ok(Reading::YesNoAnswer { positive })
}

/// Questions opened by a query word: "What is X?" and
/// "How many <noun> does X have?".
fn parse_question(cursor: &mut Cursor) -> Result<Reading, Diagnostic> {
    let qw = cursor.bump().unwrap();
    if qw.surface.eq_ignore_ascii_case("how") {
        let quant_pos = cursor.here();
        let quantifier = match cursor.bump() {
            Some(t)
                if matches!(t.kind, TokenKind::FunctionWord(FunctionRole::Quantifier))
                    && (t.surface.eq_ignore_ascii_case("many")
                        || t.surface.eq_ignore_ascii_case("much")) =>
            {
                t.surface.to_lowercase()
            }
            _ => {
                return Err(fail(
                    quant_pos,
                    Rule::QuestionShape,
                    "\"how\" takes a quantifier (\"how many\")",
                ))
            }
        };
        let (_, noun_lexeme) = cursor.expect_noun("a counted noun")?;
        let aux_pos = cursor.here();
        match cursor.bump() {
            Some(t)
                if matches!(t.kind, TokenKind::FunctionWord(FunctionRole::Auxiliary))
                    && t.surface.eq_ignore_ascii_case("does") => {}
            _ => {
                return Err(fail(
                    aux_pos,
                    Rule::QuestionShape,
                    "expected \"does\"",
                ))
            }
        }
        let name = cursor.expect_name("the questioned entity")?;
        let verb_pos = cursor.here();
        match cursor.bump() {
            Some(t)
                if matches!(
                    &t.kind,
                    TokenKind::ContentWord { category: super::lexicon::ContentCategory::Verb, lexeme }
                        if lexeme == "HAVE"
                ) =>
            {
                if !t.surface.eq_ignore_ascii_case("have") {
                    return Err(fail(
                        verb_pos,
                        Rule::QuestionShape,
                        "after \"does\" use the base form \"have\"",
                    ));
                }
            }
            _ => {
                return Err(fail(
                    verb_pos,
                    Rule::QuestionShape,
                    "expected the verb \"have\"",
                ))
            }
        }
        return Ok(Reading::Question(QuestionShape::HowMany {
            quantifier,
            noun: noun_lexeme.to_string(),
            name,
        }));
    }
    cursor.expect_surface(FunctionRole::Be, "is", "is")?;
    let name = cursor.expect_name("the questioned entity")?;
    Ok(Reading::Question(QuestionShape::Wh {
        query_word: qw.surface.to_lowercase(),
        name,
    }))
}

/// "Is <Name> a <kind> [of <Type>]?"
fn parse_yes_no_question(cursor: &mut Cursor) -> Result<Reading, Diagnostic> {
    let be = cursor.bump().unwrap();
    if !be.surface.eq_ignore_ascii_case("is") {
        return Err(fail(
            be.position,
            Rule::QuestionShape,
            "yes/no questions start with \"is\"",
        ));
    }
    let name = cursor.expect_name("the questioned entity")?;
    let article_pos = cursor.here();
    let article = match cursor.bump() {
        Some(t)
            if matches!(t.kind, TokenKind::FunctionWord(FunctionRole::Determiner))
                && !t.surface.eq_ignore_ascii_case("the") =>
        {
            t
        }
        _ => {
            return Err(fail(
                article_pos,
                Rule::QuestionShape,
                "expected \"a\" or \"an\"",
            ))
        }
    };
    let (kind_surface, kind_lexeme) = cursor.expect_noun("a kind noun")?;
    check_article(article, kind_surface)?;
    match cursor.peek() {
        None => Ok(Reading::Question(QuestionShape::IsAKind {
            name,
            kind: kind_lexeme.to_string(),
        })),
        Some(t)
            if matches!(
                &t.kind,
                TokenKind::ContentWord { category: super::lexicon::ContentCategory::Preposition, lexeme }
                    if lexeme == "OF"
            ) =>
        {
            if kind_lexeme != "ELEMENT" {
                return Err(fail(
                    t.position,
                    Rule::KindTail,
                    "only element membership questions take an of-phrase",
                ));
            }
            cursor.bump();
            let type_name = cursor.expect_name("the containing datatype")?;
            Ok(Reading::Question(QuestionShape::IsElementOf {
                member: name,
                type_name,
            }))
        }
        Some(t) => Err(fail(
            t.position,
            Rule::QuestionShape,
            format!("unexpected \"{}\" in the question", t.surface),
        )),
    }
}

/// Everything after a named or pronoun subject.
fn parse_predicate(
    cursor: &mut Cursor,
    mode: &Mode,
    subject: Subject,
) -> Result<Vec<Reading>, Diagnostic> {
    let head_pos = cursor.here();
    let head = match cursor.bump() {
        Some(t) => t,
        None => {
            return Err(fail(
                head_pos,
                Rule::PredicateShape,
                "subject without a predicate",
            ))
        }
    };
    match &head.kind {
        TokenKind::FunctionWord(FunctionRole::Be) if head.surface.eq_ignore_ascii_case("is") => {
            parse_be_predicate(cursor, mode, subject)
        }
        TokenKind::ContentWord {
            category: super::lexicon::ContentCategory::Verb,
            lexeme,
        } => match lexeme.as_str() {
            "CONSISTS-OF" => parse_consists_of(cursor, mode, subject),
            "CONNECTS" => parse_connects(cursor, mode, subject),
            "PERFORMS" => {
                let text = cursor.expect_name("the performed action")?;
                transition_suffix(mode, subject, head.position, "action", || {
                    Reading::TransitionAction {
                        action: text.clone(),
                    }
                })
            }
            "HAVE" => parse_have(cursor, mode, subject, head),
            _ => Err(fail(
                head.position,
                Rule::PredicateShape,
                format!("the verb \"{}\" has no sentence shape", head.surface),
            )),
        },
        _ => Err(fail(
            head.position,
            Rule::PredicateShape,
            "expected a verb or \"is\"",
        )),
    }
}

/// Binds the subject for ordinary (non-transition-suffix) predicates.
/// Returns every admissible binding; more than one distinct reading means
/// the sentence is ambiguous.
fn bind_subjects(
    mode: &Mode,
    subject: &Subject,
) -> Result<Vec<String>, Diagnostic> {
    match subject {
        Subject::Named(name) => Ok(vec![name.clone()]),
        Subject::Pronoun { position } => match mode {
            Mode::Check => Ok(vec![String::new()]),
            Mode::Resolve(ctx) => {
                if ctx.candidates.is_empty() {
                    return Err(fail(
                        *position,
                        Rule::PronounAntecedent,
                        "no preceding sentence provides an antecedent for \"it\"",
                    ));
                }
                let named: Vec<String> = ctx
                    .candidates
                    .iter()
                    .filter_map(|c| match c {
                        Antecedent::Named(n) => Some(n.clone()),
                        Antecedent::Transition { .. } => None,
                    })
                    .collect();
                if named.is_empty() {
                    return Err(fail(
                        *position,
                        Rule::PronounReference,
                        "the antecedent is an unnamed transition; only \"triggered-by\" and \"performs\" may refer to it",
                    ));
                }
                Ok(named)
            }
        },
    }
}

/// Guard/action sentences: the pronoun must refer to the open transition.
fn transition_suffix(
    mode: &Mode,
    subject: Subject,
    position: usize,
    what: &str,
    reading: impl Fn() -> Reading,
) -> Result<Vec<Reading>, Diagnostic> {
    match subject {
        Subject::Named(_) => Err(fail(
            position,
            Rule::PredicateShape,
            format!("a {what} attaches to a preceding transition via \"It\""),
        )),
        Subject::Pronoun { position } => {
            if let Mode::Resolve(ctx) = mode {
                match ctx.candidates.first() {
                    Some(Antecedent::Transition {
                        has_guard,
                        has_action,
                    }) => {
                        let saturated = match what {
                            "guard" => *has_guard,
                            _ => *has_action,
                        };
                        if saturated {
                            return Err(fail(
                                position,
                                Rule::TransitionSuffix,
                                format!("the transition already has a {what}"),
                            ));
                        }
                    }
                    _ => {
                        return Err(fail(
                            position,
                            Rule::PronounReference,
                            format!("a {what} needs a preceding transition sentence"),
                        ))
                    }
                }
            }
            Ok(vec![reading()])
        }
    }
}

fn parse_be_predicate(
    cursor: &mut Cursor,
    mode: &Mode,
    subject: Subject,
) -> Result<Vec<Reading>, Diagnostic> {
    let next_pos = cursor.here();
    let next = match cursor.bump() {
        Some(t) => t,
        None => {
            return Err(fail(
                next_pos,
                Rule::PredicateShape,
                "\"is\" without a complement",
            ))
        }
    };
    match &next.kind {
        TokenKind::FunctionWord(FunctionRole::Determiner)
            if !next.surface.eq_ignore_ascii_case("the") =>
        {
            parse_kind(cursor, mode, subject, next)
        }
        TokenKind::ContentWord {
            category: super::lexicon::ContentCategory::Adjective,
            lexeme,
        } => match lexeme.as_str() {
            "EQUAL" => {
                cursor.expect_prep("TO", "to")?;
                let (value, _) = cursor.expect_number("a number")?;
                let subjects = bind_subjects(mode, &subject)?;
                Ok(subjects
                    .into_iter()
                    .map(|name| Reading::EqualsValue { name, value })
                    .collect())
            }
            "TRIGGERED-BY" => {
                let text = cursor.expect_name("the guard")?;
                transition_suffix(mode, subject, next.position, "guard", || {
                    Reading::TransitionGuard {
                        guard: text.clone(),
                    }
                })
            }
            _ => Err(fail(
                next.position,
                Rule::PredicateShape,
                format!("the adjective \"{}\" has no sentence shape", next.surface),
            )),
        },
        _ => Err(fail(
            next.position,
            Rule::PredicateShape,
            "expected \"a\", \"an\", or a predicate adjective after \"is\"",
        )),
    }
}

/// "<subject> is a <kind> [of <X> | of the component <X>]."
fn parse_kind(
    cursor: &mut Cursor,
    mode: &Mode,
    subject: Subject,
    article: &Token,
) -> Result<Vec<Reading>, Diagnostic> {
    let (kind_surface, kind_lexeme) = cursor.expect_noun("a kind noun")?;
    check_article(article, kind_surface)?;
    let kind_lexeme = kind_lexeme.to_string();

    enum Tail {
        None,
        Of(String),
        OfTheComponent(String),
    }
    let tail = match cursor.peek() {
        Some(t)
            if matches!(
                &t.kind,
                TokenKind::ContentWord { category: super::lexicon::ContentCategory::Preposition, lexeme }
                    if lexeme == "OF"
            ) =>
        {
            cursor.bump();
            match cursor.peek() {
                Some(t)
                    if matches!(t.kind, TokenKind::FunctionWord(FunctionRole::Determiner))
                        && t.surface.eq_ignore_ascii_case("the") =>
                {
                    cursor.bump();
                    let (_, noun) = cursor.expect_noun("the noun \"component\"")?;
                    if noun != "COMPONENT" {
                        return Err(fail(
                            cursor.here(),
                            Rule::KindTail,
                            "expected \"of the component <Name>\"",
                        ));
                    }
                    Tail::OfTheComponent(cursor.expect_name("the owning component")?)
                }
                _ => Tail::Of(cursor.expect_name("the container")?),
            }
        }
        _ => Tail::None,
    };

    let subjects = bind_subjects(mode, &subject)?;
    let build = |name: String| -> Result<Reading, Diagnostic> {
        Ok(match (kind_lexeme.as_str(), &tail) {
            ("DATATYPE", Tail::None) => Reading::DatatypeDecl { name },
            ("CONSTANT", Tail::None) => Reading::ConstantDecl { name },
            ("COMPONENT", Tail::None) => Reading::ComponentDecl { name },
            ("CHANNEL", Tail::None) => Reading::ChannelDecl { name },
            ("STATE-AUTOMATON", Tail::OfTheComponent(owner)) => Reading::AutomatonDecl {
                name,
                owner: owner.clone(),
            },
            ("ELEMENT" | "STATE" | "PORT", Tail::Of(container)) => Reading::KindOf {
                subject: name,
                kind: kind_lexeme.clone(),
                container: Some(container.clone()),
            },
            (_, Tail::None) => Reading::KindOf {
                subject: name,
                kind: kind_lexeme.clone(),
                container: None,
            },
            (_, Tail::Of(_)) => {
                return Err(fail(
                    article.position,
                    Rule::KindTail,
                    format!("\"{kind_surface}\" does not take an of-phrase"),
                ))
            }
            (_, Tail::OfTheComponent(_)) => {
                return Err(fail(
                    article.position,
                    Rule::KindTail,
                    "only a state-automaton belongs to a component this way",
                ))
            }
        })
    };
    subjects.into_iter().map(build).collect()
}

/// "<subject> consists-of <N> <unit> that <is|are> <list>."
fn parse_consists_of(
    cursor: &mut Cursor,
    mode: &Mode,
    subject: Subject,
) -> Result<Vec<Reading>, Diagnostic> {
    let (count, count_pos) = cursor.expect_number("a count")?;
    if count < 1 {
        return Err(fail(
            count_pos,
            Rule::CountAgreement,
            "the count must be at least one",
        ));
    }
    let count = count as usize;
    let unit_pos = cursor.here();
    let (unit_surface, unit_lexeme) = cursor.expect_noun("a unit noun")?;
    let unit_lexeme = unit_lexeme.to_string();
    if !matches!(unit_lexeme.as_str(), "ELEMENT" | "COMPONENT" | "STATE") {
        return Err(fail(
            unit_pos,
            Rule::PredicateShape,
            "\"consists-of\" counts elements, components, or states",
        ));
    }
    let plural_surface = unit_surface.ends_with('s');
    if (count == 1) == plural_surface {
        return Err(fail(
            unit_pos,
            Rule::CountAgreement,
            if count == 1 {
                format!("count 1 takes the singular (\"{unit_surface}\")")
            } else {
                format!("count {count} takes the plural (\"{unit_surface}\")")
            },
        ));
    }
    let that_pos = cursor.here();
    match cursor.bump() {
        Some(t)
            if t.kind == TokenKind::FunctionWord(FunctionRole::Pronoun)
                && t.surface.eq_ignore_ascii_case("that") => {}
        _ => {
            return Err(fail(
                that_pos,
                Rule::PredicateShape,
                "expected \"that\"",
            ))
        }
    }
    let be_pos = cursor.here();
    let be = match cursor.bump() {
        Some(t) if matches!(t.kind, TokenKind::FunctionWord(FunctionRole::Be)) => &t.surface,
        _ => {
            return Err(fail(
                be_pos,
                Rule::PredicateShape,
                "expected \"is\" or \"are\"",
            ))
        }
    };
    let plural_be = be.eq_ignore_ascii_case("are");
    if (count == 1) == plural_be {
        return Err(fail(
            be_pos,
            Rule::CountAgreement,
            if count == 1 {
                "count 1 takes \"is\""
            } else {
                "a plural count takes \"are\""
            },
        ));
    }
    let members = parse_name_list(cursor)?;
    if members.len() != count {
        return Err(fail(
            count_pos,
            Rule::CountAgreement,
            format!("count {count} does not match {} listed names", members.len()),
        ));
    }

    let subjects = bind_subjects(mode, &subject)?;
    Ok(subjects
        .into_iter()
        .map(|name| match unit_lexeme.as_str() {
            "ELEMENT" => Reading::ConsistsOf {
                type_name: name,
                count,
                members: members.clone(),
            },
            "COMPONENT" => Reading::SubcomponentList {
                parent: name,
                count,
                children: members.clone(),
            },
            _ => Reading::StateList {
                automaton: name,
                count,
                states: members.clone(),
            },
        })
        .collect())
}

/// `Name ((, | , and | and) Name)*` with names as the only list members.
fn parse_name_list(cursor: &mut Cursor) -> Result<Vec<String>, Diagnostic> {
    let mut names = vec![cursor.expect_name("a list member")?];
    loop {
        match cursor.peek() {
            Some(t)
                if t.kind == TokenKind::FunctionWord(FunctionRole::Coordinator)
                    && t.surface == "," =>
            {
                cursor.bump();
                if let Some(t) = cursor.peek() {
                    if t.kind == TokenKind::FunctionWord(FunctionRole::Coordinator)
                        && t.surface.eq_ignore_ascii_case("and")
                    {
                        cursor.bump();
                    }
                }
                names.push(cursor.expect_name("a list member")?);
            }
            Some(t)
                if t.kind == TokenKind::FunctionWord(FunctionRole::Coordinator)
                    && t.surface.eq_ignore_ascii_case("and") =>
            {
                cursor.bump();
                names.push(cursor.expect_name("a list member")?);
            }
            Some(t)
                if t.kind == TokenKind::FunctionWord(FunctionRole::Coordinator) =>
            {
                return Err(fail(
                    t.position,
                    Rule::ListShape,
                    format!("\"{}\" cannot join a name list", t.surface),
                ))
            }
            _ => return Ok(names),
        }
    }
}

/// "<subject> connects the port <P> of <A> to the port <Q> of <B>."
fn parse_connects(
    cursor: &mut Cursor,
    mode: &Mode,
    subject: Subject,
) -> Result<Vec<Reading>, Diagnostic> {
    let mut port_of = |prep: Option<(&str, &str)>| -> Result<(String, String), Diagnostic> {
        if let Some((lexeme, surface)) = prep {
            cursor.expect_prep(lexeme, surface)?;
        }
        cursor.expect_surface(FunctionRole::Determiner, "the", "the")?;
        let noun_pos = cursor.here();
        let (_, lexeme) = cursor.expect_noun("the noun \"port\"")?;
        if lexeme != "PORT" {
            return Err(fail(noun_pos, Rule::PredicateShape, "expected \"port\""));
        }
        let port = cursor.expect_name("a port")?;
        cursor.expect_prep("OF", "of")?;
        let component = cursor.expect_name("a component")?;
        Ok((port, component))
    };
    let (source_port, source_component) = port_of(None)?;
    let (target_port, target_component) = port_of(Some(("TO", "to")))?;

    let subjects = bind_subjects(mode, &subject)?;
    Ok(subjects
        .into_iter()
        .map(|channel| Reading::ChannelConnects {
            channel,
            source_port: source_port.clone(),
            source_component: source_component.clone(),
            target_port: target_port.clone(),
            target_component: target_component.clone(),
        })
        .collect())
}

/// "has an <input|output> port <P> of type <T>." and "has <N> elements."
fn parse_have(
    cursor: &mut Cursor,
    mode: &Mode,
    subject: Subject,
    verb: &Token,
) -> Result<Vec<Reading>, Diagnostic> {
    if !verb.surface.eq_ignore_ascii_case("has") {
        return Err(fail(
            verb.position,
            Rule::PredicateShape,
            "a singular subject takes \"has\"",
        ));
    }
    let next_pos = cursor.here();
    match cursor.peek() {
        Some(t) if matches!(t.kind, TokenKind::FunctionWord(FunctionRole::Determiner)) => {
            let article = cursor.bump().unwrap();
            if article.surface.eq_ignore_ascii_case("the") {
                return Err(fail(
                    article.position,
                    Rule::PredicateShape,
                    "expected \"a\" or \"an\"",
                ));
            }
            let adj_pos = cursor.here();
            let direction = match cursor.bump() {
                Some(t) => match &t.kind {
                    TokenKind::ContentWord {
                        category: super::lexicon::ContentCategory::Adjective,
                        lexeme,
                    } if lexeme == "INPUT" => {
                        check_article(article, &t.surface)?;
                        PortDirection::Input
                    }
                    TokenKind::ContentWord {
                        category: super::lexicon::ContentCategory::Adjective,
                        lexeme,
                    } if lexeme == "OUTPUT" => {
                        check_article(article, &t.surface)?;
                        PortDirection::Output
                    }
                    _ => {
                        return Err(fail(
                            adj_pos,
                            Rule::PredicateShape,
                            "expected \"input\" or \"output\"",
                        ))
                    }
                },
                None => {
                    return Err(fail(
                        adj_pos,
                        Rule::PredicateShape,
                        "expected \"input\" or \"output\"",
                    ))
                }
            };
            let noun_pos = cursor.here();
            let (_, lexeme) = cursor.expect_noun("the noun \"port\"")?;
            if lexeme != "PORT" {
                return Err(fail(noun_pos, Rule::PredicateShape, "expected \"port\""));
            }
            let port = cursor.expect_name("the port")?;
            cursor.expect_prep("OF", "of")?;
            let type_noun_pos = cursor.here();
            let (_, lexeme) = cursor.expect_noun("the noun \"type\"")?;
            if lexeme != "TYPE" {
                return Err(fail(type_noun_pos, Rule::PredicateShape, "expected \"type\""));
            }
            let type_pos = cursor.here();
            let type_name = match cursor.bump() {
                Some(t) => match &t.kind {
                    TokenKind::ProperName => t.surface.clone(),
                    TokenKind::ContentWord {
                        category: super::lexicon::ContentCategory::Noun,
                        lexeme,
                    } if lexeme == "INTEGER" || lexeme == "BOOLEAN" => t.surface.clone(),
                    _ => {
                        return Err(fail(
                            type_pos,
                            Rule::ObjectShape,
                            "expected a type name",
                        ))
                    }
                },
                None => {
                    return Err(fail(
                        type_pos,
                        Rule::ObjectShape,
                        "expected a type name",
                    ))
                }
            };
            let subjects = bind_subjects(mode, &subject)?;
            Ok(subjects
                .into_iter()
                .map(|component| Reading::PortDecl {
                    component,
                    port: port.clone(),
                    direction,
                    type_name: type_name.clone(),
                })
                .collect())
        }
        Some(t) if matches!(t.kind, TokenKind::Number(_)) => {
            let (count, count_pos) = cursor.expect_number("a count")?;
            if count < 0 {
                return Err(fail(
                    count_pos,
                    Rule::CountAgreement,
                    "the count cannot be negative",
                ));
            }
            let unit_pos = cursor.here();
            let (unit_surface, unit_lexeme) = cursor.expect_noun("the noun \"elements\"")?;
            if unit_lexeme != "ELEMENT" {
                return Err(fail(
                    unit_pos,
                    Rule::PredicateShape,
                    "\"has\" counts elements",
                ));
            }
            let plural_surface = unit_surface.ends_with('s');
            if (count == 1) == plural_surface {
                return Err(fail(
                    unit_pos,
                    Rule::CountAgreement,
                    if count == 1 {
                        "count 1 takes \"element\""
                    } else {
                        "this count takes \"elements\""
                    },
                ));
            }
            let subjects = bind_subjects(mode, &subject)?;
            Ok(subjects
                .into_iter()
                .map(|name| Reading::HasCount {
                    subject: name,
                    count: count as usize,
                })
                .collect())
        }
        _ => Err(fail(
            next_pos,
            Rule::PredicateShape,
            "\"has\" takes a port declaration or an element count",
        )),
    }
}

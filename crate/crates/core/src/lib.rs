//! Generation and checking of controlled-English specifications from
//! XML component models.
//!
//! The pipeline has five stages:
//!
//! 1. [`model`] parses an XML file into a typed [`model::Model`].
//! 2. [`facts`] reduces a model to a [`facts::FactBase`] of semantic triples.
//! 3. [`ace`] holds the controlled-language machinery: lexicon, tokenizer,
//!    grammar checker, and the parser that maps each sentence to exactly one
//!    reading (and back to facts).
//! 4. [`generate`] renders a model into an ordered document of sentences,
//!    each of which must pass the stage-3 checker.
//! 5. [`query`] answers the supported question forms against a fact base.
//!
//! The round trip `parse(generate(model))` recovers a fact base equal to
//! `extract_facts(model)`; the test suites assert this over randomized
//! models.

pub mod ace;
pub mod facts;
pub mod generate;
pub mod model;
pub mod query;

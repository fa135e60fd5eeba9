//! Command-line front end for acespec-core: renders component models as
//! controlled-English specifications, validates such documents, prints
//! fact bases, and answers questions about a model.

use std::env;
use std::fs;
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use acespec_core::ace::{self, parse_document, recover_facts, Lexicon};
use acespec_core::facts::{extract_facts, FactBase};
use acespec_core::generate::{generate_with, SectionSelection};
use acespec_core::model::{parse_model_with_warnings, Model};
use acespec_core::query::ask;

#[derive(Parser)]
#[command(
    name = "acespec",
    version,
    about = "Controlled-English specifications for component models",
    after_help = "Exit codes: 0 success, 1 input error, 2 document invalid, 3 question failed."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a model file as a controlled-English specification
    Generate {
        /// Model XML file
        model: PathBuf,
        /// Write the document here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Comma-separated subset of sections to render
        #[arg(long, value_delimiter = ',', value_name = "SECTION")]
        sections: Vec<SectionName>,
        /// Extra vocabulary file (also read from ACESPEC_LEXICON)
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Treat skipped model elements as errors
        #[arg(long)]
        strict: bool,
    },
    /// Check that a document parses with exactly one meaning per sentence
    Validate {
        /// Specification document
        document: PathBuf,
        /// Extra vocabulary file (also read from ACESPEC_LEXICON)
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },
    /// Print the fact base of a model file or of a specification document
    Facts {
        /// Model XML file (*.xml) or specification document (anything else)
        input: PathBuf,
        /// Extra vocabulary file (also read from ACESPEC_LEXICON)
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Treat skipped model elements as errors
        #[arg(long)]
        strict: bool,
    },
    /// Answer questions about a model
    Query {
        /// Model XML file
        model: PathBuf,
        /// One question; without it, questions are read line by line from stdin
        #[arg(short, long)]
        question: Option<String>,
        /// Extra vocabulary file (also read from ACESPEC_LEXICON)
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Treat skipped model elements as errors
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SectionName {
    Dictionary,
    Architecture,
    Behavior,
}

/// An error carrying the process exit code for its failure class.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn input(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }

    fn invalid(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }

    fn question(error: anyhow::Error) -> Self {
        Failure { code: 3, error }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate {
            model,
            output,
            sections,
            lexicon,
            strict,
        } => cmd_generate(&model, output.as_deref(), &sections, lexicon.as_deref(), strict),
        Command::Validate { document, lexicon } => cmd_validate(&document, lexicon.as_deref()),
        Command::Facts {
            input,
            lexicon,
            strict,
        } => cmd_facts(&input, lexicon.as_deref(), strict),
        Command::Query {
            model,
            question,
            lexicon,
            strict,
        } => cmd_query(&model, question.as_deref(), lexicon.as_deref(), strict),
    }
}

fn cmd_generate(
    model_path: &Path,
    output: Option<&Path>,
    sections: &[SectionName],
    lexicon_path: Option<&Path>,
    strict: bool,
) -> Result<(), Failure> {
    let lexicon = load_lexicon(lexicon_path)?;
    let model = load_model(model_path, strict)?;
    let doc = generate_with(&model, selection_from(sections), &lexicon)
        .map_err(|e| Failure::invalid(anyhow!(e)))?;
    match output {
        Some(path) => fs::write(path, &doc.text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Failure::invalid)?,
        None => print!("{}", doc.text),
    }
    Ok(())
}

fn cmd_validate(document: &Path, lexicon_path: Option<&Path>) -> Result<(), Failure> {
    let lexicon = load_lexicon(lexicon_path)?;
    let text = read_input(document)?;
    let parsed = parse_document(&text, &lexicon)
        .map_err(|e| Failure::invalid(anyhow!("{}: {e}", document.display())))?;
    let facts = recover_facts(&parsed.sentences)
        .map_err(|e| Failure::invalid(anyhow!("{}: {e}", document.display())))?;
    println!(
        "ok: {}, {}",
        counted(parsed.sentences.len(), "sentence"),
        counted(facts.len(), "fact")
    );
    Ok(())
}

fn counted(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("{n} {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

fn cmd_facts(input: &Path, lexicon_path: Option<&Path>, strict: bool) -> Result<(), Failure> {
    let is_xml = input
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("xml"));
    let base = if is_xml {
        extract_facts(&load_model(input, strict)?)
    } else {
        let lexicon = load_lexicon(lexicon_path)?;
        let text = read_input(input)?;
        let parsed = parse_document(&text, &lexicon)
            .map_err(|e| Failure::invalid(anyhow!("{}: {e}", input.display())))?;
        recover_facts(&parsed.sentences)
            .map_err(|e| Failure::invalid(anyhow!("{}: {e}", input.display())))?
    };
    for fact in base.facts() {
        println!("{fact}");
    }
    Ok(())
}

fn cmd_query(
    model_path: &Path,
    question: Option<&str>,
    lexicon_path: Option<&Path>,
    strict: bool,
) -> Result<(), Failure> {
    let lexicon = load_lexicon(lexicon_path)?;
    let model = load_model(model_path, strict)?;
    // Rendering the model registers every entity name, so questions may
    // mention anything the specification mentions.
    let doc = generate_with(&model, SectionSelection::default(), &lexicon)
        .map_err(|e| Failure::invalid(anyhow!(e)))?;
    match question {
        Some(q) => {
            let answer = ask(q, &doc.lexicon, &doc.facts).map_err(|e| Failure::question(anyhow!(e)))?;
            println!("{}", answer.text);
            Ok(())
        }
        None => repl(&doc.lexicon, &doc.facts),
    }
}

fn repl(lexicon: &Lexicon, facts: &FactBase) -> Result<(), Failure> {
    let interactive = io::stdin().is_terminal();
    let mut any_failed = false;
    let mut line = String::new();
    loop {
        if interactive {
            eprint!("? ");
            let _ = io::stderr().flush();
        }
        line.clear();
        let read = io::stdin()
            .lock()
            .read_line(&mut line)
            .context("cannot read stdin")
            .map_err(Failure::input)?;
        if read == 0 {
            break;
        }
        let question = line.trim();
        if question.is_empty() {
            continue;
        }
        match ask(question, lexicon, facts) {
            Ok(answer) => println!("{}", answer.text),
            Err(e) => {
                eprintln!("error: {e}");
                any_failed = true;
            }
        }
    }
    if any_failed {
        Err(Failure::question(anyhow!("some questions failed")))
    } else {
        Ok(())
    }
}

fn selection_from(sections: &[SectionName]) -> SectionSelection {
    if sections.is_empty() {
        return SectionSelection::default();
    }
    SectionSelection {
        dictionary: sections.contains(&SectionName::Dictionary),
        architecture: sections.contains(&SectionName::Architecture),
        behavior: sections.contains(&SectionName::Behavior),
    }
}

fn load_lexicon(flag: Option<&Path>) -> Result<Lexicon, Failure> {
    let mut lexicon = ace::default_lexicon();
    let path = flag
        .map(Path::to_path_buf)
        .or_else(|| env::var_os("ACESPEC_LEXICON").map(PathBuf::from));
    if let Some(path) = path {
        let text = read_input(&path)?;
        lexicon
            .load_lexicon_file(&text)
            .map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))?;
    }
    Ok(lexicon)
}

fn load_model(path: &Path, strict: bool) -> Result<Model, Failure> {
    let text = read_input(path)?;
    let (model, warnings) = parse_model_with_warnings(&text)
        .map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))?;
    for warning in &warnings {
        eprintln!("warning: {}: {warning}", path.display());
    }
    if strict && !warnings.is_empty() {
        return Err(Failure::input(anyhow!(
            "{}: {} skipped in strict mode",
            path.display(),
            counted(warnings.len(), "element")
        )));
    }
    Ok(model)
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::input)
}

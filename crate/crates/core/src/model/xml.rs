//! XML ingestion for the model types.
//!
//! Accepts the tag vocabulary described in docs/model-schema.md: a wrapper
//! element holding `rootElements` sections (data dictionary, component
//! architecture), with automata nested as `containedElements` of components.
//! `xsi:type` values are matched by their final colon-separated segment so
//! namespace prefixes carry no weight. Internal `id` attributes are ignored.

use roxmltree::{Document, Node};
use thiserror::Error;

use super::{
    Channel, Component, ConstantFunction, DataDictionary, EnumerationType, Model, Port,
    PortDirection, StateAutomaton, Transition, TypeTag,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed XML: {detail}")]
    MalformedXml { detail: String },
    #[error("unknown section type \"{type_name}\" in {context} (line {line})")]
    UnknownSectionType {
        type_name: String,
        context: String,
        line: u32,
    },
    #[error("element <{element}> is missing attribute \"{attribute}\" (line {line})")]
    MissingAttribute {
        element: String,
        attribute: &'static str,
        line: u32,
    },
    #[error("element <{element}> lacks a required <{child}> child (line {line})")]
    MissingElement {
        element: &'static str,
        child: &'static str,
        line: u32,
    },
    #[error("attribute \"{attribute}\" on <{element}> is invalid: {detail} (line {line})")]
    InvalidAttribute {
        element: String,
        attribute: &'static str,
        detail: String,
        line: u32,
    },
    #[error("duplicate {kind} name \"{name}\" (line {second_line}; first declared at line {first_line})")]
    DuplicateName {
        kind: &'static str,
        name: String,
        first_line: u32,
        second_line: u32,
    },
    #[error("more than one {kind} section (line {line})")]
    DuplicateSection { kind: &'static str, line: u32 },
    #[error("enumeration \"{name}\" has no members (line {line})")]
    EmptyEnumeration { name: String, line: u32 },
    #[error("state automaton \"{name}\" has no states (line {line})")]
    EmptyAutomaton { name: String, line: u32 },
    #[error("{context} references unknown {kind} \"{name}\" (line {line})")]
    UnknownReference {
        kind: &'static str,
        name: String,
        context: String,
        line: u32,
    },
    #[error("channel \"{channel}\": {reason} (line {line})")]
    InvalidChannel {
        channel: String,
        reason: String,
        line: u32,
    },
}

/// Non-fatal finding: an element inside a known section that the ingester
/// does not understand and skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: u32,
    pub message: String,
}

impl std::fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

pub fn parse_model(xml_text: &str) -> Result<Model, ParseError> {
    parse_model_with_warnings(xml_text).map(|(model, _)| model)
}

pub fn parse_model_with_warnings(
    xml_text: &str,
) -> Result<(Model, Vec<ParseWarning>), ParseError> {
    let doc = Document::parse(xml_text).map_err(|e| ParseError::MalformedXml {
        detail: e.to_string(),
    })?;
    let mut parser = Parser {
        warnings: Vec::new(),
    };
    let model = parser.model(doc.root_element())?;
    Ok((model, parser.warnings))
}

const XSI_NS: &str = "http://www.w3.org/2001/XMLSchema-instance";
const BUILTIN_TYPES: [&str; 2] = ["integer", "boolean"];

struct Parser {
    warnings: Vec<ParseWarning>,
}

fn line_of(node: Node) -> u32 {
    node.document().text_pos_at(node.range().start).row
}

fn tag<'a>(node: Node<'a, 'a>) -> &'a str {
    node.tag_name().name()
}

/// The `xsi:type` value reduced to its final colon-separated segment.
/// A plain `type` attribute is accepted as a fallback for hand-made files.
fn section_type<'a>(node: Node<'a, 'a>) -> Option<&'a str> {
    let raw = node
        .attribute((XSI_NS, "type"))
        .or_else(|| node.attribute("type"))?;
    Some(raw.rsplit(':').next().unwrap_or(raw))
}

fn attr<'a>(node: Node<'a, 'a>, attribute: &'static str) -> Result<&'a str, ParseError> {
    let value = node
        .attribute(attribute)
        .ok_or_else(|| ParseError::MissingAttribute {
            element: tag(node).to_string(),
            attribute,
            line: line_of(node),
        })?;
    if value.is_empty() {
        return Err(ParseError::InvalidAttribute {
            element: tag(node).to_string(),
            attribute,
            detail: "empty value".to_string(),
            line: line_of(node),
        });
    }
    Ok(value)
}

/// Identifier attributes become single sentence tokens later on, which
/// rules out blank spaces at the model level already.
fn ident_attr<'a>(node: Node<'a, 'a>, attribute: &'static str) -> Result<&'a str, ParseError> {
    let value = attr(node, attribute)?;
    if value.contains(char::is_whitespace) {
        return Err(ParseError::InvalidAttribute {
            element: tag(node).to_string(),
            attribute,
            detail: format!("\"{value}\" contains blank space"),
            line: line_of(node),
        });
    }
    Ok(value)
}

fn elements<'a>(node: Node<'a, 'a>) -> impl Iterator<Item = Node<'a, 'a>> {
    node.children().filter(|c| c.is_element())
}

/// Tracks first-seen lines so duplicates report both locations.
struct NameScope {
    kind: &'static str,
    seen: Vec<(String, u32)>,
}

impl NameScope {
    fn new(kind: &'static str) -> Self {
        NameScope {
            kind,
            seen: Vec::new(),
        }
    }

    fn claim(&mut self, name: &str, line: u32) -> Result<(), ParseError> {
        if let Some((_, first)) = self.seen.iter().find(|(n, _)| n == name) {
            return Err(ParseError::DuplicateName {
                kind: self.kind,
                name: name.to_string(),
                first_line: *first,
                second_line: line,
            });
        }
        self.seen.push((name.to_string(), line));
        Ok(())
    }
}

impl Parser {
    fn warn(&mut self, node: Node, message: String) {
        self.warnings.push(ParseWarning {
            line: line_of(node),
            message,
        });
    }

    fn model(&mut self, root: Node) -> Result<Model, ParseError> {
        let mut model = Model {
            name: root.attribute("name").unwrap_or_default().to_string(),
            ..Model::default()
        };
        let mut dict_line = None;
        let mut arch_line = None;
        // Allows a bare `rootElements` fragment as the document root.
        let sections: Vec<Node> = if tag(root) == "rootElements" {
            vec![root]
        } else {
            elements(root).collect()
        };
        for section in sections {
            if tag(section) != "rootElements" {
                self.warn(
                    section,
                    format!("ignoring unknown top-level element <{}>", tag(section)),
                );
                continue;
            }
            let line = line_of(section);
            let kind = section_type(section).ok_or(ParseError::MissingAttribute {
                element: "rootElements".to_string(),
                attribute: "xsi:type",
                line,
            })?;
            match kind {
                "DataDictionary" => {
                    if dict_line.is_some() {
                        return Err(ParseError::DuplicateSection {
                            kind: "data dictionary",
                            line,
                        });
                    }
                    dict_line = Some(line);
                    model.data_dictionary = Some(self.data_dictionary(section)?);
                }
                "ComponentArchitecture" => {
                    if arch_line.is_some() {
                        return Err(ParseError::DuplicateSection {
                            kind: "component architecture",
                            line,
                        });
                    }
                    arch_line = Some(line);
                    let mut automata = Vec::new();
                    model.architecture = Some(self.component(section, &mut automata)?);
                    model.automata = automata;
                }
                other => {
                    return Err(ParseError::UnknownSectionType {
                        type_name: other.to_string(),
                        context: "rootElements".to_string(),
                        line,
                    })
                }
            }
        }
        self.check_cross_references(&model)?;
        Ok(model)
    }

    fn data_dictionary(&mut self, section: Node) -> Result<DataDictionary, ParseError> {
        let mut dict = DataDictionary::default();
        let mut names = NameScope::new("data dictionary entry");
        for child in elements(section) {
            match tag(child) {
                "typeDefinitions" => match section_type(child) {
                    Some("Enumeration") => {
                        let e = self.enumeration(child)?;
                        names.claim(&e.name, line_of(child))?;
                        dict.enumerations.push(e);
                    }
                    Some(other) => self.warn(
                        child,
                        format!("ignoring unsupported type definition kind \"{other}\""),
                    ),
                    None => self.warn(child, "ignoring untyped <typeDefinitions>".to_string()),
                },
                "functions" => {
                    let c = self.constant(child)?;
                    names.claim(&c.name, line_of(child))?;
                    dict.constants.push(c);
                }
                other => self.warn(
                    child,
                    format!("ignoring unknown data dictionary element <{other}>"),
                ),
            }
        }
        Ok(dict)
    }

    fn enumeration(&mut self, node: Node) -> Result<EnumerationType, ParseError> {
        let name = ident_attr(node, "name")?;
        let mut members = Vec::new();
        let mut scope = NameScope::new("enumeration member");
        for child in elements(node) {
            if tag(child) == "members" {
                let member = ident_attr(child, "name")?;
                scope.claim(member, line_of(child))?;
                members.push(member.to_string());
            } else {
                self.warn(
                    child,
                    format!("ignoring unknown enumeration element <{}>", tag(child)),
                );
            }
        }
        if members.is_empty() {
            return Err(ParseError::EmptyEnumeration {
                name: name.to_string(),
                line: line_of(node),
            });
        }
        Ok(EnumerationType {
            name: name.to_string(),
            members,
        })
    }

    /// Constant as a nullary function: the name sits on the inner <function>
    /// element, the value on <definition>/<statements Return>/<value IntConst>.
    fn constant(&mut self, node: Node) -> Result<ConstantFunction, ParseError> {
        let line = line_of(node);
        let function = elements(node)
            .find(|c| tag(*c) == "function")
            .ok_or(ParseError::MissingElement {
                element: "functions",
                child: "function",
                line,
            })?;
        let name = ident_attr(function, "name")?;

        let definition = elements(node)
            .find(|c| tag(*c) == "definition")
            .ok_or(ParseError::MissingElement {
                element: "functions",
                child: "definition",
                line,
            })?;
        let statements = elements(definition)
            .find(|c| tag(*c) == "statements")
            .ok_or(ParseError::MissingElement {
                element: "definition",
                child: "statements",
                line: line_of(definition),
            })?;
        match section_type(statements) {
            Some("Return") => {}
            other => {
                return Err(ParseError::UnknownSectionType {
                    type_name: other.unwrap_or("(none)").to_string(),
                    context: format!("constant \"{name}\" statements"),
                    line: line_of(statements),
                })
            }
        }
        let value_node = elements(statements)
            .find(|c| tag(*c) == "value")
            .ok_or(ParseError::MissingElement {
                element: "statements",
                child: "value",
                line: line_of(statements),
            })?;
        match section_type(value_node) {
            Some("IntConst") => {}
            other => {
                return Err(ParseError::UnknownSectionType {
                    type_name: other.unwrap_or("(none)").to_string(),
                    context: format!("constant \"{name}\" value"),
                    line: line_of(value_node),
                })
            }
        }
        let raw = attr(value_node, "value")?;
        let value: i64 = raw.parse().map_err(|_| ParseError::InvalidAttribute {
            element: "value".to_string(),
            attribute: "value",
            detail: format!("\"{raw}\" is not an integer"),
            line: line_of(value_node),
        })?;

        if let Some(rt) = elements(node).find(|c| tag(*c) == "returnType") {
            match section_type(rt) {
                Some("TInt") | None => {}
                Some(other) => {
                    return Err(ParseError::UnknownSectionType {
                        type_name: other.to_string(),
                        context: format!("constant \"{name}\" returnType"),
                        line: line_of(rt),
                    })
                }
            }
        }
        Ok(ConstantFunction {
            name: name.to_string(),
            value,
            return_type: TypeTag::Integer,
        })
    }

    fn component(
        &mut self,
        node: Node,
        automata: &mut Vec<StateAutomaton>,
    ) -> Result<Component, ParseError> {
        let name = ident_attr(node, "name")?;
        let mut component = Component {
            name: name.to_string(),
            ..Component::default()
        };
        let mut port_names = NameScope::new("port");
        let mut child_names = NameScope::new("subcomponent");
        let mut channel_lines = Vec::new();
        for child in elements(node) {
            match tag(child) {
                "ports" => {
                    let port = self.port(child)?;
                    port_names.claim(&port.name, line_of(child))?;
                    component.ports.push(port);
                }
                "channels" => {
                    channel_lines.push(line_of(child));
                    component.channels.push(self.channel(child)?);
                }
                "containedElements" => match section_type(child) {
                    Some("Component") => {
                        let sub = self.component(child, automata)?;
                        child_names.claim(&sub.name, line_of(child))?;
                        component.subcomponents.push(sub);
                    }
                    Some("StateAutomaton") => {
                        automata.push(self.automaton(child, name)?);
                    }
                    Some(other) => {
                        return Err(ParseError::UnknownSectionType {
                            type_name: other.to_string(),
                            context: format!("containedElements of component \"{name}\""),
                            line: line_of(child),
                        })
                    }
                    None => {
                        return Err(ParseError::MissingAttribute {
                            element: "containedElements".to_string(),
                            attribute: "xsi:type",
                            line: line_of(child),
                        })
                    }
                },
                other => self.warn(
                    child,
                    format!("ignoring unknown component element <{other}>"),
                ),
            }
        }
        self.check_channels(&component, &channel_lines)?;
        Ok(component)
    }

    fn port(&mut self, node: Node) -> Result<Port, ParseError> {
        let name = ident_attr(node, "name")?;
        let direction = match attr(node, "direction")? {
            "input" => PortDirection::Input,
            "output" => PortDirection::Output,
            other => {
                return Err(ParseError::InvalidAttribute {
                    element: "ports".to_string(),
                    attribute: "direction",
                    detail: format!("\"{other}\" is neither \"input\" nor \"output\""),
                    line: line_of(node),
                })
            }
        };
        Ok(Port {
            name: name.to_string(),
            direction,
            type_name: ident_attr(node, "type")?.to_string(),
        })
    }

    fn channel(&mut self, node: Node) -> Result<Channel, ParseError> {
        Ok(Channel {
            name: ident_attr(node, "name")?.to_string(),
            source_component: ident_attr(node, "sourceComponent")?.to_string(),
            source_port: ident_attr(node, "sourcePort")?.to_string(),
            target_component: ident_attr(node, "targetComponent")?.to_string(),
            target_port: ident_attr(node, "targetPort")?.to_string(),
        })
    }

    /// Channel endpoints may name the enclosing component itself (boundary
    /// flow) or one of its direct subcomponents. Direction must fit:
    /// source = subcomponent output or own input; target symmetrically.
    fn check_channels(&self, component: &Component, lines: &[u32]) -> Result<(), ParseError> {
        for (channel, &line) in component.channels.iter().zip(lines) {
            let resolve = |comp_name: &str,
                           port_name: &str,
                           end: &str|
             -> Result<(PortDirection, bool), ParseError> {
                let (target, boundary) = if comp_name == component.name {
                    (component, true)
                } else {
                    let sub = component
                        .subcomponents
                        .iter()
                        .find(|s| s.name == comp_name)
                        .ok_or_else(|| ParseError::UnknownReference {
                            kind: "component",
                            name: comp_name.to_string(),
                            context: format!("channel \"{}\" {end}", channel.name),
                            line,
                        })?;
                    (sub, false)
                };
                let port = target.port(port_name).ok_or_else(|| ParseError::UnknownReference {
                    kind: "port",
                    name: format!("{comp_name}.{port_name}"),
                    context: format!("channel \"{}\" {end}", channel.name),
                    line,
                })?;
                Ok((port.direction, boundary))
            };

            let (dir, boundary) =
                resolve(&channel.source_component, &channel.source_port, "source")?;
            let source_ok = if boundary {
                dir == PortDirection::Input
            } else {
                dir == PortDirection::Output
            };
            if !source_ok {
                return Err(ParseError::InvalidChannel {
                    channel: channel.name.clone(),
                    reason: format!(
                        "source port \"{}\" of \"{}\" has the wrong direction",
                        channel.source_port, channel.source_component
                    ),
                    line,
                });
            }
            let (dir, boundary) =
                resolve(&channel.target_component, &channel.target_port, "target")?;
            let target_ok = if boundary {
                dir == PortDirection::Output
            } else {
                dir == PortDirection::Input
            };
            if !target_ok {
                return Err(ParseError::InvalidChannel {
                    channel: channel.name.clone(),
                    reason: format!(
                        "target port \"{}\" of \"{}\" has the wrong direction",
                        channel.target_port, channel.target_component
                    ),
                    line,
                });
            }
        }
        Ok(())
    }

    fn automaton(&mut self, node: Node, owner: &str) -> Result<StateAutomaton, ParseError> {
        let name = ident_attr(node, "name")?;
        let initial = ident_attr(node, "initialState")?;
        let mut states = Vec::new();
        let mut state_names = NameScope::new("state");
        let mut transitions = Vec::new();
        let mut transition_lines = Vec::new();
        for child in elements(node) {
            match tag(child) {
                "states" => {
                    let state = ident_attr(child, "name")?;
                    state_names.claim(state, line_of(child))?;
                    states.push(state.to_string());
                }
                "transitions" => {
                    transition_lines.push(line_of(child));
                    transitions.push(Transition {
                        source: ident_attr(child, "source")?.to_string(),
                        target: ident_attr(child, "target")?.to_string(),
                        guard: child.attribute("guard").map(str::to_string),
                        action: child.attribute("action").map(str::to_string),
                    });
                }
                other => self.warn(
                    child,
                    format!("ignoring unknown automaton element <{other}>"),
                ),
            }
        }
        if states.is_empty() {
            return Err(ParseError::EmptyAutomaton {
                name: name.to_string(),
                line: line_of(node),
            });
        }
        let check_state = |state: &str, context: String, line: u32| -> Result<(), ParseError> {
            if states.iter().any(|s| s == state) {
                Ok(())
            } else {
                Err(ParseError::UnknownReference {
                    kind: "state",
                    name: state.to_string(),
                    context,
                    line,
                })
            }
        };
        check_state(
            initial,
            format!("automaton \"{name}\" initialState"),
            line_of(node),
        )?;
        for (t, &line) in transitions.iter().zip(&transition_lines) {
            check_state(&t.source, format!("automaton \"{name}\" transition source"), line)?;
            check_state(&t.target, format!("automaton \"{name}\" transition target"), line)?;
        }
        Ok(StateAutomaton {
            name: name.to_string(),
            owner: owner.to_string(),
            states,
            initial_state: initial.to_string(),
            transitions,
        })
    }

    /// Global uniqueness and cross-section reference checks that need the
    /// whole model: component/automaton/channel name spaces and port types
    /// against the data dictionary. Runs on the built model, where XML
    /// positions are no longer at hand; zero means "location not tracked".
    fn check_cross_references(&self, model: &Model) -> Result<(), ParseError> {
        let mut components = NameScope::new("component");
        let mut channels = NameScope::new("channel");
        if let Some(root) = &model.architecture {
            for comp in root.walk() {
                components.claim(&comp.name, 0)?;
                for ch in &comp.channels {
                    channels.claim(&ch.name, 0)?;
                }
            }
        }
        let mut automata = NameScope::new("automaton");
        for a in &model.automata {
            automata.claim(&a.name, 0)?;
        }

        let declared: Vec<&str> = model
            .data_dictionary
            .as_ref()
            .map(|d| d.enumerations.iter().map(|e| e.name.as_str()).collect())
            .unwrap_or_default();
        if let Some(root) = &model.architecture {
            for comp in root.walk() {
                for port in &comp.ports {
                    let known = BUILTIN_TYPES.contains(&port.type_name.as_str())
                        || declared.contains(&port.type_name.as_str());
                    if !known {
                        return Err(ParseError::UnknownReference {
                            kind: "type",
                            name: port.type_name.clone(),
                            context: format!(
                                "port \"{}\" of component \"{}\"",
                                port.name, comp.name
                            ),
                            line: 0,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

//! Typed in-memory representation of a component model parsed from XML.
//!
//! A model file contributes up to three section kinds: a data dictionary
//! (enumeration types and integer constants), a component architecture
//! (one root component with nested subcomponents, ports, and channels),
//! and state automata owned by components. See docs/model-schema.md for
//! the accepted XML vocabulary.

mod xml;

pub use xml::{parse_model, parse_model_with_warnings, ParseError, ParseWarning};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Model {
    pub name: String,
    pub data_dictionary: Option<DataDictionary>,
    /// Root component of the architecture section, if present.
    pub architecture: Option<Component>,
    /// All automata in document order, lifted out of their owning components.
    pub automata: Vec<StateAutomaton>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DataDictionary {
    pub enumerations: Vec<EnumerationType>,
    pub constants: Vec<ConstantFunction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationType {
    pub name: String,
    /// Nonempty; member names are unique within one enumeration.
    pub members: Vec<String>,
}

/// A function with a constant integer body. Only integer-valued constants
/// are in scope, so the return type tag has a single inhabitant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantFunction {
    pub name: String,
    pub value: i64,
    pub return_type: TypeTag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TypeTag {
    #[default]
    Integer,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Component {
    pub name: String,
    pub ports: Vec<Port>,
    pub subcomponents: Vec<Component>,
    pub channels: Vec<Channel>,
}

impl Component {
    /// Depth-first pre-order walk, self first.
    pub fn walk(&self) -> Vec<&Component> {
        let mut out = vec![self];
        for sub in &self.subcomponents {
            out.extend(sub.walk());
        }
        out
    }

    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub direction: PortDirection,
    /// A declared enumeration name or a built-in ("integer", "boolean").
    pub type_name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PortDirection {
    Input,
    Output,
}

impl PortDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            PortDirection::Input => "input",
            PortDirection::Output => "output",
        }
    }
}

/// Directed connection between two (component, port) endpoints, declared
/// inside the component whose children (or own boundary ports) it wires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    pub name: String,
    pub source_component: String,
    pub source_port: String,
    pub target_component: String,
    pub target_port: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateAutomaton {
    pub name: String,
    /// Name of the component the automaton describes.
    pub owner: String,
    /// Nonempty; state names are unique within one automaton.
    pub states: Vec<String>,
    /// Always a member of `states`.
    pub initial_state: String,
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub source: String,
    pub target: String,
    /// Opaque guard expression text; never interpreted.
    pub guard: Option<String>,
    pub action: Option<String>,
}

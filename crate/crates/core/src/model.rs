//! Block-diagram data model.
//!
//! A [`ModelLibrary`] holds named [`Model`]s. Each model owns a [`Context`]:
//! boundary in/out ports, child blocks (subsystems or model references) and the
//! connections between them. Ports are identified by name only, and the ports
//! and blocks of one context share a single flat namespace.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Port direction, seen from inside the context that declares the port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn keyword(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::In => Direction::Out,
            Direction::Out => Direction::In,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Ordered collection of uniquely named models.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelLibrary {
    models: Vec<Model>,
}

impl ModelLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_models(models: impl IntoIterator<Item = Model>) -> Result<Self, ModelError> {
        let mut lib = ModelLibrary::new();
        for model in models {
            lib.insert(model)?;
        }
        Ok(lib)
    }

    /// Appends `model`, rejecting a second model with the same name.
    pub fn insert(&mut self, model: Model) -> Result<(), ModelError> {
        if self.get(&model.name).is_some() {
            return Err(ModelError::DuplicateModel(model.name));
        }
        self.models.push(model);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Model> {
        self.models.iter().find(|m| m.name == name)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Model> {
        self.models.iter_mut().find(|m| m.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    /// Models in insertion order.
    pub fn models(&self) -> impl Iterator<Item = &Model> {
        self.models.iter()
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    /// Moves all models of `other` into `self`; fails on the first name clash.
    pub fn merge(&mut self, other: ModelLibrary) -> Result<(), ModelError> {
        for model in other.models {
            self.insert(model)?;
        }
        Ok(())
    }

    /// Models that are not referenced from any other model, in library order.
    pub fn roots(&self) -> Vec<&Model> {
        let mut referenced = BTreeSet::new();
        for model in &self.models {
            model.body.visit(&mut |ctx| {
                for block in &ctx.blocks {
                    if let Block::ModelRef { model: target, .. } = block {
                        if *target != model.name {
                            referenced.insert(target.clone());
                        }
                    }
                }
            });
        }
        self.models.iter().filter(|m| !referenced.contains(&m.name)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    pub body: Context,
}

impl Model {
    pub fn new(name: impl Into<String>, body: Context) -> Self {
        Model { name: name.into(), body }
    }
}

/// Contents of a model or of a subsystem block.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    pub in_ports: Vec<String>,
    pub out_ports: Vec<String>,
    pub blocks: Vec<Block>,
    pub connections: Vec<Connection>,
}

impl Context {
    pub fn ports(&self, dir: Direction) -> &[String] {
        match dir {
            Direction::In => &self.in_ports,
            Direction::Out => &self.out_ports,
        }
    }

    pub fn ports_mut(&mut self, dir: Direction) -> &mut Vec<String> {
        match dir {
            Direction::In => &mut self.in_ports,
            Direction::Out => &mut self.out_ports,
        }
    }

    pub fn has_port(&self, dir: Direction, name: &str) -> bool {
        self.ports(dir).iter().any(|p| p == name)
    }

    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name() == name)
    }

    pub fn block_mut(&mut self, name: &str) -> Option<&mut Block> {
        self.blocks.iter_mut().find(|b| b.name() == name)
    }

    /// True if a port or block of this context is called `name`.
    pub fn declares(&self, name: &str) -> bool {
        self.in_ports.iter().chain(&self.out_ports).any(|p| p == name) || self.block(name).is_some()
    }

    /// All names in the flat namespace, in declaration-kind order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.in_ports.iter().chain(&self.out_ports).map(String::as_str).chain(self.blocks.iter().map(Block::name))
    }

    /// The interface other contexts see when this context is a block body.
    pub fn interface(&self) -> Interface {
        Interface {
            in_ports: self.in_ports.iter().cloned().collect(),
            out_ports: self.out_ports.iter().cloned().collect(),
        }
    }

    /// Connections that touch `endpoint`, as source or target.
    pub fn incident<'a>(&'a self, endpoint: &'a Endpoint) -> impl Iterator<Item = &'a Connection> {
        self.connections.iter().filter(move |c| &c.source == endpoint || &c.target == endpoint)
    }

    /// Calls `f` on this context and every nested subsystem body, pre-order.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Context)) {
        f(self);
        for block in &self.blocks {
            if let Block::Subsystem { body, .. } = block {
                body.visit(f);
            }
        }
    }

    /// True if there are no blocks and no connections. Such a context stands
    /// for a leaf computation whose internals are not modeled.
    pub fn is_leaf(&self) -> bool {
        self.blocks.is_empty() && self.connections.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Subsystem { name: String, body: Context },
    ModelRef { name: String, model: String },
}

impl Block {
    pub fn subsystem(name: impl Into<String>, body: Context) -> Self {
        Block::Subsystem { name: name.into(), body }
    }

    pub fn model_ref(name: impl Into<String>, model: impl Into<String>) -> Self {
        Block::ModelRef { name: name.into(), model: model.into() }
    }

    pub fn name(&self) -> &str {
        match self {
            Block::Subsystem { name, .. } | Block::ModelRef { name, .. } => name,
        }
    }

    pub fn set_name(&mut self, new_name: String) {
        match self {
            Block::Subsystem { name, .. } | Block::ModelRef { name, .. } => *name = new_name,
        }
    }
}

/// One end of a connection.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    /// A boundary port of the enclosing context.
    Boundary(String),
    /// Port `port` of child block `block`.
    ChildPort { block: String, port: String },
}

impl Endpoint {
    pub fn boundary(port: impl Into<String>) -> Self {
        Endpoint::Boundary(port.into())
    }

    pub fn child(block: impl Into<String>, port: impl Into<String>) -> Self {
        Endpoint::ChildPort { block: block.into(), port: port.into() }
    }

    pub fn block(&self) -> Option<&str> {
        match self {
            Endpoint::Boundary(_) => None,
            Endpoint::ChildPort { block, .. } => Some(block),
        }
    }

    pub fn port(&self) -> &str {
        match self {
            Endpoint::Boundary(port) | Endpoint::ChildPort { port, .. } => port,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Boundary(port) => f.write_str(port),
            Endpoint::ChildPort { block, port } => write!(f, "{block}.{port}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Connection {
    pub source: Endpoint,
    pub target: Endpoint,
}

impl Connection {
    pub fn new(source: Endpoint, target: Endpoint) -> Self {
        Connection { source, target }
    }

    pub fn touches_block(&self, block: &str) -> bool {
        self.source.block() == Some(block) || self.target.block() == Some(block)
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)
    }
}

/// Port names a block exposes, per direction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interface {
    pub in_ports: BTreeSet<String>,
    pub out_ports: BTreeSet<String>,
}

impl Interface {
    pub fn ports(&self, dir: Direction) -> &BTreeSet<String> {
        match dir {
            Direction::In => &self.in_ports,
            Direction::Out => &self.out_ports,
        }
    }

    /// True if `self` offers at least every port of `other` in the same direction.
    pub fn is_superset_of(&self, other: &Interface) -> bool {
        self.in_ports.is_superset(&other.in_ports) && self.out_ports.is_superset(&other.out_ports)
    }
}

/// Which end of a connection an endpoint is used as.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Source,
    Target,
}

impl Role {
    /// Direction a boundary port needs to play this role.
    fn boundary_direction(self) -> Direction {
        match self {
            Role::Source => Direction::In,
            Role::Target => Direction::Out,
        }
    }

    /// Direction a child block port needs to play this role.
    fn child_direction(self) -> Direction {
        match self {
            Role::Source => Direction::Out,
            Role::Target => Direction::In,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Source => "source",
            Role::Target => "target",
        })
    }
}

/// Outcome of resolving an endpoint inside a context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndpointCheck {
    Valid,
    /// Nothing with that name exists.
    Missing(String),
    /// The port exists but points the wrong way for the role.
    WrongDirection(String),
    /// The endpoint names a model reference whose model is absent.
    Unresolved(String),
}

/// Resolves `endpoint` in `ctx` for the given role.
pub fn check_endpoint(ctx: &Context, endpoint: &Endpoint, role: Role, lib: &ModelLibrary) -> EndpointCheck {
    match endpoint {
        Endpoint::Boundary(port) => {
            let wanted = role.boundary_direction();
            if ctx.has_port(wanted, port) {
                EndpointCheck::Valid
            } else if ctx.has_port(wanted.opposite(), port) {
                EndpointCheck::WrongDirection(format!(
                    "boundary port `{port}` is an {} port and cannot be a connection {role}",
                    wanted.opposite()
                ))
            } else if ctx.block(port).is_some() {
                EndpointCheck::Missing(format!("`{port}` is a block, not a boundary port"))
            } else {
                EndpointCheck::Missing(format!("no boundary port `{port}`"))
            }
        }
        Endpoint::ChildPort { block, port } => {
            let Some(child) = ctx.block(block) else {
                return EndpointCheck::Missing(format!("no block `{block}`"));
            };
            let iface = match resolve_interface(child, lib) {
                Ok(iface) => iface,
                Err(err) => return EndpointCheck::Unresolved(err.to_string()),
            };
            let wanted = role.child_direction();
            if iface.ports(wanted).contains(port) {
                EndpointCheck::Valid
            } else if iface.ports(wanted.opposite()).contains(port) {
                EndpointCheck::WrongDirection(format!(
                    "port `{port}` of block `{block}` is an {} port and cannot be a connection {role}",
                    wanted.opposite()
                ))
            } else {
                EndpointCheck::Missing(format!("block `{block}` has no port `{port}`"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("model `{0}` is defined more than once")]
    DuplicateModel(String),
    #[error("no subsystem context at `{path}`: {reason}")]
    PathNotFound { path: String, reason: String },
}

/// Interface of `block`; model references are resolved through `lib`.
pub fn resolve_interface(block: &Block, lib: &ModelLibrary) -> Result<Interface, ModelError> {
    match block {
        Block::Subsystem { body, .. } => Ok(body.interface()),
        Block::ModelRef { model, .. } => {
            lib.get(model).map(|m| m.body.interface()).ok_or_else(|| ModelError::UnknownModel(model.clone()))
        }
    }
}

/// Descends from model `model` through the named subsystems. Model references
/// are never traversed.
pub fn lookup_context<'a, S: AsRef<str>>(
    lib: &'a ModelLibrary,
    model: &str,
    subsystems: &[S],
) -> Result<&'a Context, ModelError> {
    let mut ctx = &lib
        .get(model)
        .ok_or_else(|| ModelError::PathNotFound { path: model.to_string(), reason: format!("no model `{model}`") })?
        .body;
    let mut path = model.to_string();
    for segment in subsystems {
        let segment = segment.as_ref();
        path.push('/');
        path.push_str(segment);
        ctx = match ctx.block(segment) {
            Some(Block::Subsystem { body, .. }) => body,
            Some(Block::ModelRef { model, .. }) => {
                return Err(ModelError::PathNotFound {
                    path,
                    reason: format!("`{segment}` is a reference to model `{model}`, not a subsystem"),
                })
            }
            None => return Err(ModelError::PathNotFound { path, reason: format!("no block `{segment}`") }),
        };
    }
    Ok(ctx)
}

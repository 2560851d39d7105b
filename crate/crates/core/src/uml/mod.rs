//! UML subset inputs: use-case models and class models, with line-based
//! text formats and canonical serializers.

mod class;
mod usecase;

use thiserror::Error;

use crate::lexer::{ParseError, Pos};

pub use class::{parse_class, serialize_class, Attribute, Class, ClassModel, Operation};
pub use usecase::{parse_usecase, serialize_usecase, Extend, UseCaseModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UmlError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{line}:{column}: undeclared name `{name}`")]
    UndeclaredName {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: duplicate name `{name}`")]
    DuplicateName {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: `{name}` cannot relate to itself")]
    SelfRelation {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("generalization cycle through `{0}`")]
    CyclicGeneralization(String),
}

impl UmlError {
    pub(crate) fn undeclared(name: &str, pos: Pos) -> Self {
        UmlError::UndeclaredName {
            name: name.to_string(),
            line: pos.line,
            column: pos.column,
        }
    }

    pub(crate) fn duplicate(name: &str, pos: Pos) -> Self {
        UmlError::DuplicateName {
            name: name.to_string(),
            line: pos.line,
            column: pos.column,
        }
    }
}

/// Either kind of UML input, for callers that serialize without caring
/// which one they hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UmlModel {
    UseCase(UseCaseModel),
    Class(ClassModel),
}

pub fn serialize_uml(model: &UmlModel) -> String {
    match model {
        UmlModel::UseCase(m) => serialize_usecase(m),
        UmlModel::Class(m) => serialize_class(m),
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library reports. The variant name is the stable
/// identifier printed by the command line tool.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("NotAGroup: {0}")]
    NotAGroup(String),
    #[error("IndexOutOfRange: {what} index {index} not below {bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },
    #[error("NotAHom: fails at ({0}, {1})")]
    NotAHom(usize, usize),
    #[error("NotAnAction: {0}")]
    NotAnAction(String),
    #[error("Peiffer1Violation: h={h} g={g}")]
    Peiffer1Violation { h: usize, g: usize },
    #[error("Peiffer2Violation: g={g} g'={g2}")]
    Peiffer2Violation { g: usize, g2: usize },
    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),
    #[error("InvalidCover: {0}")]
    InvalidCover(String),
    #[error("InvalidGroupoid: {0}")]
    InvalidGroupoid(String),
    #[error("NotAMorphism: {0}")]
    NotAMorphism(String),
    #[error("NotARefinement: fine set {set} point {point}")]
    NotARefinement { set: usize, point: usize },
    #[error("NotGenSurjSubmersion: object {0} is not a target")]
    NotGenSurjSubmersion(usize),
    #[error("NotSurjective: {0}")]
    NotSurjective(String),
    #[error("CocycleRelation1: i={i} j={j} k={k} x={x}")]
    CocycleRelation1 {
        i: usize,
        j: usize,
        k: usize,
        x: usize,
    },
    #[error("CocycleRelation2: i={i} j={j} k={k} l={l} x={x}")]
    CocycleRelation2 {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        x: usize,
    },
    #[error("NormalizationViolation: i={i} j={j} x={x}")]
    NormalizationViolation { i: usize, j: usize, x: usize },
    #[error("UnnormalizedCoboundary: i={i} x={x}")]
    UnnormalizedCoboundary { i: usize, x: usize },
    #[error("DomainMismatch: {0}")]
    DomainMismatch(String),
    #[error("SearchSpaceTooLarge: {size} exceeds {bound}")]
    SearchSpaceTooLarge { size: u128, bound: u64 },
    #[error("KernelFiberMismatch: object {0}")]
    KernelFiberMismatch(usize),
    #[error("BundleAxiomViolation: {0}")]
    BundleAxiomViolation(String),
    #[error("ChiNotInBand: element {0}")]
    ChiNotInBand(usize),
    #[error("ChiNotEquivariant: {0}")]
    ChiNotEquivariant(String),
    #[error("ChiRhoViolation: element {p} g={g}")]
    ChiRhoViolation { p: usize, g: usize },
    #[error("BaseNotCech")]
    BaseNotCech,
    #[error("NotAdapted: {0}")]
    NotAdapted(String),
    #[error("NotRelating")]
    NotRelating,
    #[error("NotASection: object {0}")]
    NotASection(usize),
    #[error("NotAnIsomorphism: {0}")]
    NotAnIsomorphism(String),
    #[error("BaseNotTrivial")]
    BaseNotTrivial,
    #[error("WitnessFailure: {0}")]
    WitnessFailure(String),
    #[error("ParseError: line {line}: {reason}")]
    ParseError { line: usize, reason: String },
    #[error("UnresolvedReference: {kind} {name}")]
    UnresolvedReference { kind: String, name: String },
    #[error("in [{kind} {name}]: {source}")]
    InSection {
        kind: String,
        name: String,
        source: Box<Error>,
    },
}

impl Error {
    /// Strips section context and returns the innermost error.
    pub fn root(&self) -> &Error {
        match self {
            Error::InSection { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for errors caused by malformed text or dangling names rather
    /// than by a mathematical check.
    pub fn is_document_error(&self) -> bool {
        matches!(
            self.root(),
            Error::ParseError { .. } | Error::UnresolvedReference { .. }
        )
    }

    /// The bare variant name.
    pub fn name(&self) -> String {
        let s = self.root().to_string();
        s.split(':').next().unwrap_or_default().to_string()
    }
}

pub(crate) fn check_index(what: &'static str, index: usize, bound: usize) -> Result<()> {
    if index < bound {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { what, index, bound })
    }
}

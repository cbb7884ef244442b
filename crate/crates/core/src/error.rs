use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate simplex")]
    DegenerateSimplex,
    #[error("point {0} lies outside the simplex of degree {1}")]
    OutsideSimplex(String, u32),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("duplicate exponent {0}")]
    DuplicateExponent(String),
    #[error("exponent outside N0^3: {0}")]
    NegativeExponent(String),
    #[error("polynomial of degree 0 is not a surface")]
    DegreeZero,
    #[error("support does not affinely span R^3")]
    DegenerateSupport,
    #[error("cells do not tile the convex hull of the support: {0}")]
    NotATiling(String),
    #[error("wrong degree shape: Newton polytope is not the simplex of degree {0}")]
    WrongDegreeShape(u32),
    #[error("surface is not smooth")]
    NotSmooth,
    #[error("lifting magnitude too large for exact integer kernel")]
    Overflow,
    #[error("tropical line is not on the surface")]
    LineNotOnSurface,
    #[error("malformed tropical line: {0}")]
    MalformedLine(String),
    #[error("line classification requires degree >= 3 (got {0})")]
    DegreeTooLow(u32),
    #[error("points coincide")]
    CoincidentPoints,
    #[error("point is not in the compact 2-cell")]
    NotInCompactCell,
    #[error("expected a smooth quadric")]
    NotAQuadric,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("join precondition violated: {0}")]
    Join(String),
    #[error("glue precondition violated: {0}")]
    Glue(String),
    #[error("invalid truncation: {0}")]
    Truncation(String),
    #[error("degree {0} is too large for exhaustive enumeration; use the targeted searches")]
    TooLarge(u32),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

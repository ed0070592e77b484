use thiserror::Error;

/// Failures of the elementary half-plane constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeomError {
    /// The two points handed to a geodesic construction coincide.
    #[error("coincident points determine no geodesic")]
    CoincidentPoints,
    /// Horocycle intersection requires distinct base points.
    #[error("horocycles share their base point")]
    SameBase,
}

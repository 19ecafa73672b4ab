//! Exact scalars, edge polynomials and face polynomials.

pub mod face;
pub mod rational;
pub mod uni;

pub use face::{face_one, FaceKind, FacePoly, MonoPoly};
pub use rational::{format_rational, frac, int, parse_rational, Rational};
pub use uni::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatPolyError {
    #[error("expected {expected} coefficients, found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("polynomial does not fit the degree-{degree} space of a {kind:?} face")]
    DegreeExceeded { kind: FaceKind, degree: usize },
}

pub fn bernstein_to_monomial(p: &FacePoly) -> MonoPoly {
    p.to_monomial()
}

pub fn monomial_to_bernstein(
    kind: FaceKind,
    k: usize,
    m: &MonoPoly,
) -> Result<FacePoly, RatPolyError> {
    FacePoly::from_monomial(kind, k, m)
}

/// (value, d/du, d/dv, d2/dudv) at a corner, in the frame where both corner edges leave the corner.
pub fn jet_at_corner(p: &FacePoly, corner: usize) -> [Rational; 4] {
    p.corner_jet(corner)
}

pub fn edge_restriction_jet(p: &FacePoly, slot: usize) -> (UniPoly, UniPoly) {
    p.edge_restriction(slot)
}

pub fn integrate(a: &UniPoly) -> UniPoly {
    a.integrate()
}

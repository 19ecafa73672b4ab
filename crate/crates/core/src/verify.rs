//! Independent checks: G1 residuals, a brute-force constraint-system dimension, and structural
//! properties of a computed basis.
//!
//! Side data here are read straight from the Bernstein net in the frame of each side's start
//! corner, so the residuals do not depend on the slot/side conversions used elsewhere.

use crate::basis::{resolve_vertex, BasisTag, Spline, SplineBasis};
use crate::dimension;
use crate::gluing::{GluedSurface, GluingError};
use crate::linalg::IntEchelon;
use crate::ratpoly::{int, FacePoly, Rational, UniPoly};
use crate::surface::Side;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Largest number of unknowns the brute-force oracle accepts.
pub const ORACLE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("constraint system has {unknowns} unknowns, above the limit of {limit}")]
    SizeLimit { unknowns: usize, limit: usize },
    #[error(transparent)]
    Gluing(#[from] GluingError),
}

/// Restriction and transversal derivative along a side, in the frame of its start corner.
pub fn side_data(p: &FacePoly, side: &Side) -> (UniPoly, UniPoly) {
    let k = p.degree;
    let corner = side.start_corner(p.kind);
    // unreversed sides run along the first corner axis, reversed ones along the second
    let at = |t: usize, n: usize| {
        if side.reversed {
            p.get_in_corner(corner, n, t).clone()
        } else {
            p.get_in_corner(corner, t, n).clone()
        }
    };
    let row0: Vec<Rational> = (0..=k).map(|t| at(t, 0)).collect();
    let g = UniPoly::from_bernstein(&row0);
    if k == 0 {
        return (g, UniPoly::zero());
    }
    let kk = int(k as i64);
    let hk = k - p.kind.f_delta();
    let d: Vec<Rational> = (0..=hk).map(|t| &kk * (at(t, 1) - &row0[t])).collect();
    (g, UniPoly::from_bernstein(&d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeResidual {
    pub edge: String,
    /// continuity defect
    pub r0: UniPoly,
    /// tangent-plane defect
    pub r1: UniPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResidualReport {
    pub edges: Vec<EdgeResidual>,
}

impl ResidualReport {
    pub fn is_zero(&self) -> bool {
        self.edges.iter().all(|e| e.r0.is_zero() && e.r1.is_zero())
    }

    pub fn first_failure(&self) -> Option<String> {
        self.edges
            .iter()
            .find(|e| !(e.r0.is_zero() && e.r1.is_zero()))
            .map(|e| e.edge.clone())
    }
}

fn edge_residual(
    gs: &GluedSurface,
    edge: usize,
    faces: &[FacePoly],
) -> Result<(UniPoly, UniPoly), GluingError> {
    let e = &gs.surface.edges[edge];
    let gl = gs.gluing(edge)?;
    let (g0, h0) = side_data(&faces[e.sides[0].face], &e.sides[0]);
    let (g1, h1) = side_data(&faces[e.sides[1].face], &e.sides[1]);
    let r0 = &g0 - &g1;
    let r1 = &(&(&gl.c * &h0) - &(&gl.b * &h1)) - &(&gl.a * &g1.derivative());
    Ok((r0, r1))
}

/// Residuals of the G1 conditions on every interior edge.
pub fn g1_residual(spline: &Spline, gs: &GluedSurface) -> ResidualReport {
    let mut out = ResidualReport::default();
    for edge in gs.surface.interior_edges() {
        let (r0, r1) = match edge_residual(gs, edge, &spline.faces) {
            Ok(r) => r,
            Err(_) => (UniPoly::one(), UniPoly::one()),
        };
        out.edges.push(EdgeResidual {
            edge: gs.surface.edges[edge].id.clone(),
            r0,
            r1,
        });
    }
    out
}

/// Dimension of the degree-k G1 space as the nullity of the full linear constraint system on
/// all Bernstein coefficients.
pub fn brute_force_dimension(gs: &GluedSurface, k: usize) -> Result<usize, VerifyError> {
    let surface = &gs.surface;
    let offsets: Vec<usize> = surface
        .faces
        .iter()
        .scan(0, |acc, f| {
            let o = *acc;
            *acc += f.kind.num_coeffs(k);
            Some(o)
        })
        .collect();
    let unknowns: usize = surface.faces.iter().map(|f| f.kind.num_coeffs(k)).sum();
    if unknowns > ORACLE_LIMIT {
        return Err(VerifyError::SizeLimit {
            unknowns,
            limit: ORACLE_LIMIT,
        });
    }
    let mut ech = IntEchelon::new(unknowns);
    let mut zero: Vec<FacePoly> = surface
        .faces
        .iter()
        .map(|f| FacePoly::zero(f.kind, k))
        .collect();
    for edge in surface.interior_edges() {
        // (residual, power) -> sparse row
        let mut rows: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
        let mut cols: Vec<(usize, usize, usize, usize)> = Vec::new();
        for side in &surface.edges[edge].sides {
            let kind = surface.faces[side.face].kind;
            for b in 0..2 {
                for a in (0..=k).filter(|&a| kind.contains(k, a, b)) {
                    let (i, j) = kind.corner_to_face(k, side.slot, a, b);
                    let col = offsets[side.face] + kind.index(k, i, j);
                    if !cols.iter().any(|c| c.3 == col) {
                        cols.push((side.face, i, j, col));
                    }
                }
            }
        }
        for &(face, i, j, col) in &cols {
            zero[face].set(i, j, Rational::from_integer(1.into()));
            let (r0, r1) = edge_residual(gs, edge, &zero)?;
            zero[face].set(i, j, Rational::zero());
            for (which, r) in [(0, r0), (1, r1)] {
                for (pow, x) in r.coeffs().iter().enumerate() {
                    if !x.is_zero() {
                        rows.entry((which, pow)).or_default().push((col, x.clone()));
                    }
                }
            }
        }
        for (_, mut row) in rows {
            row.sort_by_key(|(c, _)| *c);
            ech.insert_sparse_rational(&row);
        }
    }
    Ok(unknowns - ech.rank())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    pub count: usize,
}

/// Exact rank of the basis coefficient vectors.
pub fn check_independence(basis: &SplineBasis) -> RankReport {
    let n = basis.members.first().map_or(0, |(_, s)| s.flat().len());
    let mut ech = IntEchelon::new(n);
    for (_, s) in &basis.members {
        ech.insert_rational(&s.flat());
    }
    RankReport {
        rank: ech.rank(),
        count: basis.members.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AmplenessReport {
    pub points: usize,
    pub failures: Vec<String>,
}

/// Sample points on a face: corners, edge midpoints and the centroid, in face coordinates.
fn sample_points(kind: crate::ratpoly::FaceKind) -> Vec<(Rational, Rational)> {
    let corners: Vec<(Rational, Rational)> =
        (0..kind.corners()).map(|c| kind.corner_point(c)).collect();
    let n = corners.len();
    let mut pts = corners.clone();
    for c in 0..n {
        let (p, q) = (&corners[c], &corners[(c + 1) % n]);
        pts.push(((&p.0 + &q.0) / int(2), (&p.1 + &q.1) / int(2)));
    }
    let nn = int(n as i64);
    let sx = corners.iter().fold(Rational::zero(), |a, p| a + &p.0) / &nn;
    let sy = corners.iter().fold(Rational::zero(), |a, p| a + &p.1) / &nn;
    pts.push((sx, sy));
    pts
}

/// The basis must span value and gradient at every sample point.
pub fn ampleness_check(gs: &GluedSurface, basis: &SplineBasis) -> AmplenessReport {
    let mut rep = AmplenessReport::default();
    for (fi, face) in gs.surface.faces.iter().enumerate() {
        let monos: Vec<_> = basis
            .members
            .iter()
            .filter(|(_, s)| !s.faces[fi].is_zero())
            .map(|(_, s)| s.faces[fi].to_monomial())
            .collect();
        let grads: Vec<_> = monos.iter().map(|m| (m.du(), m.dv())).collect();
        for (u, v) in sample_points(face.kind) {
            rep.points += 1;
            let mut ech = IntEchelon::new(3);
            for (m, (du, dv)) in monos.iter().zip(&grads) {
                ech.insert_rational(&[m.eval(&u, &v), du.eval(&u, &v), dv.eval(&u, &v)]);
                if ech.rank() == 3 {
                    break;
                }
            }
            if ech.rank() < 3 {
                rep.failures
                    .push(format!("{} at ({u}, {v}): rank {}", face.id, ech.rank()));
            }
        }
    }
    rep
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DualityReport {
    pub failures: Vec<String>,
}

impl DualityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Corner jets of every fan face at a vertex, concatenated.
fn vertex_functional(gs: &GluedSurface, vertex: usize, s: &Spline) -> Vec<Rational> {
    gs.surface.vertices[vertex]
        .faces
        .iter()
        .flat_map(|f| s.faces[f.face].corner_jet(f.corner))
        .collect()
}

/// Vertex families are dual to the vertex jet functionals; edge and face functions have zero
/// vertex jets, and face functions vanish to first order on all edges.
pub fn jet_duality_check(gs: &GluedSurface, basis: &SplineBasis) -> DualityReport {
    let mut rep = DualityReport::default();
    let nv = gs.surface.vertices.len();
    let owner: Vec<Option<usize>> = basis
        .members
        .iter()
        .map(|(t, _)| t.vertex().and_then(|key| resolve_vertex(&gs.surface, key)))
        .collect();
    for v in 0..nv {
        let label = gs.surface.vertices[v].label(&gs.surface);
        let width = gs.surface.vertices[v].faces.len() * 4;
        let mut ech = IntEchelon::new(width);
        let mut own = 0;
        for ((tag, s), o) in basis.members.iter().zip(&owner) {
            let t = vertex_functional(gs, v, s);
            if *o == Some(v) {
                own += 1;
                ech.insert_rational(&t);
            } else if t.iter().any(|x| !x.is_zero()) {
                rep.failures
                    .push(format!("{tag} has nonzero jet at {label}"));
            }
        }
        match dimension::dim_h_vertex(gs, v) {
            Ok(d) if d == own && ech.rank() == own => {}
            Ok(d) => rep.failures.push(format!(
                "{label}: {own} functions, jet rank {}, expected {d}",
                ech.rank()
            )),
            Err(e) => rep.failures.push(format!("{label}: {e}")),
        }
    }
    for (tag, s) in &basis.members {
        if let BasisTag::FaceFn { face, .. } = tag {
            let Some(fi) = gs.surface.face_index(face) else {
                rep.failures.push(format!("{tag}: unknown face"));
                continue;
            };
            let p = &s.faces[fi];
            let touches = (0..p.kind.corners()).any(|slot| {
                let (g, h) = p.edge_restriction(slot);
                !(g.is_zero() && h.is_zero())
            });
            if touches {
                rep.failures.push(format!(
                    "{tag} does not vanish to first order on its boundary"
                ));
            }
        }
    }
    rep
}

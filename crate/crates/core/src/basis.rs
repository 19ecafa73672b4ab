//! Explicit basis of the G1 spline space: vertex, edge and face functions as exact Bernstein
//! coefficient arrays.

use crate::dimension::{self, DimensionError, SeparabilityMode};
use crate::gluing::{GluedSurface, GluingError};
use crate::linalg;
use crate::ratpoly::{FaceKind, FacePoly, Rational};
use crate::surface::TopoSurface;
use crate::syzygy::{EdgeSpace, SyzygyError, CORNER_OFFSETS};
use crate::verify;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BasisError {
    #[error("degree {k} is below the separability threshold {s_star}")]
    BelowSeparability { k: usize, s_star: usize },
    #[error("vertex {0}: jet relations are inconsistent")]
    PropagationInconsistent(String),
    #[error("edge {0}: crossing-edge system has no solution for the requested jets")]
    SingularInconsistent(String),
    #[error("edge {0}: no edge spline matches the requested end jets")]
    IntegralInfeasible(String),
    #[error("face {face}: coefficient ({i}, {j}) assigned twice with different values")]
    MergeConflict { face: String, i: usize, j: usize },
    #[error("certification failed for {tag}: {reason}")]
    CertificationFailed { tag: String, reason: String },
    #[error(transparent)]
    Gluing(#[from] GluingError),
    #[error(transparent)]
    Syzygy(#[from] SyzygyError),
    #[error(transparent)]
    Dimension(#[from] DimensionError),
}

/// A polynomial of degree k on every face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spline {
    pub degree: usize,
    pub faces: Vec<FacePoly>,
}

impl Spline {
    pub fn zero(surface: &TopoSurface, k: usize) -> Self {
        Spline {
            degree: k,
            faces: surface
                .faces
                .iter()
                .map(|f| FacePoly::zero(f.kind, k))
                .collect(),
        }
    }

    pub fn constant_one(surface: &TopoSurface, k: usize) -> Self {
        Spline {
            degree: k,
            faces: surface
                .faces
                .iter()
                .map(|f| crate::ratpoly::face_one(f.kind, k))
                .collect(),
        }
    }

    /// All coefficients, faces in order.
    pub fn flat(&self) -> Vec<Rational> {
        self.faces
            .iter()
            .flat_map(|f| f.coeffs().iter().cloned())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.faces.iter().all(|f| f.is_zero())
    }

    pub fn add_scaled(&mut self, other: &Spline, s: &Rational) {
        for (f, g) in self.faces.iter_mut().zip(&other.faces) {
            f.add_assign(&g.scaled(s));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum BasisTag {
    VertexValue { vertex: String },
    VertexDeriv { vertex: String, index: usize },
    VertexCross { vertex: String, face: String },
    EdgeFn { edge: String, index: usize },
    FaceFn { face: String, i: usize, j: usize },
}

impl std::fmt::Display for BasisTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisTag::VertexValue { vertex } => write!(f, "value({vertex})"),
            BasisTag::VertexDeriv { vertex, index } => write!(f, "deriv{index}({vertex})"),
            BasisTag::VertexCross { vertex, face } => write!(f, "cross({vertex}, {face})"),
            BasisTag::EdgeFn { edge, index } => write!(f, "edge({edge}, {index})"),
            BasisTag::FaceFn { face, i, j } => write!(f, "face({face}, {i}, {j})"),
        }
    }
}

impl BasisTag {
    /// The vertex key of vertex tags.
    pub fn vertex(&self) -> Option<&str> {
        match self {
            BasisTag::VertexValue { vertex }
            | BasisTag::VertexDeriv { vertex, .. }
            | BasisTag::VertexCross { vertex, .. } => Some(vertex),
            _ => None,
        }
    }
}

/// Stable text key of a vertex: "face:corner" of the first face of its fan.
pub fn vertex_key(surface: &TopoSurface, vertex: usize) -> String {
    let f = surface.vertices[vertex].faces[0];
    format!("{}:{}", surface.faces[f.face].id, f.corner)
}

pub fn resolve_vertex(surface: &TopoSurface, key: &str) -> Option<usize> {
    let (face, corner) = key.rsplit_once(':')?;
    let fi = surface.face_index(face)?;
    let c: usize = corner.parse().ok()?;
    surface.corner_vertex.get(fi)?.get(c).copied()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplineBasis {
    pub degree: usize,
    pub members: Vec<(BasisTag, Spline)>,
}

/// Which jet family to solve for at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetKind {
    Value,
    /// unit derivative along the first (0) or second (1) fan edge
    Deriv(usize),
    /// unit cross derivative on the given fan face, a component representative
    Cross(usize),
}

/// Corner jet (p, q along the corner frame's first axis, q along the second, cross) per fan face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceJet {
    pub face: usize,
    pub corner: usize,
    pub jet: [Rational; 4],
}

/// Fan faces linked by crossing edges share one free cross derivative; returns the component
/// representative (smallest fan index) of every fan face.
pub fn cross_components(gs: &GluedSurface, vertex: usize) -> Result<Vec<usize>, GluingError> {
    let v = &gs.surface.vertices[vertex];
    let f = v.face_count();
    let mut rep: Vec<usize> = (0..f).collect();
    fn find(rep: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while rep[r] != r {
            r = rep[r];
        }
        rep[x] = r;
        r
    }
    for j in gs.vertex_jets(vertex)? {
        if j.crossing {
            let (a, b) = ((j.position + f - 1) % f, j.position % f);
            let (ra, rb) = (find(&mut rep, a), find(&mut rep, b));
            rep[ra.max(rb)] = ra.min(rb);
        }
    }
    Ok((0..f).map(|i| find(&mut rep, i)).collect())
}

/// Solves the first and second order jet relations around a vertex.
pub fn vertex_jet_solve(
    gs: &GluedSurface,
    vertex: usize,
    kind: JetKind,
) -> Result<Vec<FaceJet>, BasisError> {
    let v = &gs.surface.vertices[vertex];
    let f = v.face_count();
    let ne = v.edges.len();
    let jets = gs.vertex_jets(vertex)?;
    let comps = cross_components(gs, vertex)?;
    // unknowns: p, q_0..q_{ne-1}, s_0..s_{f-1}, r per interior fan edge
    let (qo, so, ro) = (1, 1 + ne, 1 + ne + f);
    let nv = ro + jets.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let unit = |i: usize, x: Rational| {
        let mut r = vec![Rational::zero(); nv];
        r[i] = x;
        r
    };
    for (ji, j) in jets.iter().enumerate() {
        let pos = j.position;
        let (before, after) = ((pos + f - 1) % f, pos % f);
        let prev_q = (pos + ne - 1) % ne;
        let next_q = (pos + 1) % ne;
        let fj = &j.fan;
        let mut r = vec![Rational::zero(); nv];
        r[qo + next_q] += Rational::one();
        r[qo + pos] -= &fj.a0;
        r[qo + prev_q] -= &fj.b0;
        rows.push(r);
        rhs.push(Rational::zero());
        let mut r = vec![Rational::zero(); nv];
        r[so + after] += Rational::one();
        r[so + before] -= &fj.b0;
        r[qo + pos] -= &fj.a1;
        r[qo + prev_q] -= &fj.b1;
        r[ro + ji] -= &fj.a0;
        rows.push(r);
        rhs.push(Rational::zero());
    }
    let (p, q0, q1) = match kind {
        JetKind::Value => (1, 0, 0),
        JetKind::Deriv(0) => (0, 1, 0),
        JetKind::Deriv(_) => (0, 0, 1),
        JetKind::Cross(_) => (0, 0, 0),
    };
    for (i, x) in [(0, p), (qo, q0), (qo + 1, q1)] {
        rows.push(unit(i, Rational::one()));
        rhs.push(Rational::from_integer(x.into()));
    }
    for i in 0..f {
        if comps[i] == i {
            let x = i64::from(kind == JetKind::Cross(i));
            rows.push(unit(so + i, Rational::one()));
            rhs.push(Rational::from_integer(x.into()));
        }
    }
    let x = linalg::solve(&rows, &rhs, nv)
        .ok_or_else(|| BasisError::PropagationInconsistent(v.label(&gs.surface)))?;
    Ok((0..f)
        .map(|i| {
            let ff = v.faces[i];
            let (qu, qv) = (x[qo + i].clone(), x[qo + (i + 1) % ne].clone());
            let (qu, qv) = if ff.swapped { (qv, qu) } else { (qu, qv) };
            FaceJet {
                face: ff.face,
                corner: ff.corner,
                jet: [x[0].clone(), qu, qv, x[so + i].clone()],
            }
        })
        .collect())
}

/// Writes corner jets as the four corner coefficients.
fn set_corner_jet(p: &mut FacePoly, corner: usize, jet: &[Rational; 4]) {
    let k = p.degree;
    let kk = Rational::from_integer(k.into());
    let c00 = jet[0].clone();
    let c10 = &c00 + &jet[1] / &kk;
    let c01 = &c00 + &jet[2] / &kk;
    let c11 = &c10 + &c01 - &c00 + &jet[3] / p.kind.cross_factor(k);
    p.set_in_corner(corner, 0, 0, c00);
    p.set_in_corner(corner, 1, 0, c10);
    p.set_in_corner(corner, 0, 1, c01);
    p.set_in_corner(corner, 1, 1, c11);
}

/// Tracks which coefficients have been assigned while merging strips.
struct Assembly<'a> {
    gs: &'a GluedSurface,
    spline: Spline,
    assigned: Vec<Vec<bool>>,
}

impl<'a> Assembly<'a> {
    fn new(gs: &'a GluedSurface, k: usize) -> Self {
        let spline = Spline::zero(&gs.surface, k);
        let assigned = spline
            .faces
            .iter()
            .map(|f| vec![false; f.coeffs().len()])
            .collect();
        Assembly {
            gs,
            spline,
            assigned,
        }
    }

    fn assign(&mut self, face: usize, i: usize, j: usize, x: Rational) -> Result<(), BasisError> {
        let p = &mut self.spline.faces[face];
        let idx = p.kind.index(p.degree, i, j);
        if self.assigned[face][idx] {
            if p.get(i, j) != &x {
                return Err(BasisError::MergeConflict {
                    face: self.gs.surface.faces[face].id.clone(),
                    i,
                    j,
                });
            }
            return Ok(());
        }
        self.assigned[face][idx] = true;
        p.set(i, j, x);
        Ok(())
    }

    /// Copies the two rows along `slot` of `strip` into the face.
    fn merge_strip(
        &mut self,
        face: usize,
        slot: usize,
        strip: &FacePoly,
    ) -> Result<(), BasisError> {
        let k = strip.degree;
        let kind = strip.kind;
        for b in 0..2 {
            for a in 0..=k {
                if !kind.contains(k, a, b) {
                    continue;
                }
                let (i, j) = kind.corner_to_face(k, slot, a, b);
                self.assign(face, i, j, strip.get(i, j).clone())?;
            }
        }
        Ok(())
    }
}

/// An edge spline matching the corner coefficients of `target` at both ends of the edge.
pub fn lift(gs: &GluedSurface, edge: usize, target: &Spline) -> Result<[FacePoly; 2], BasisError> {
    let k = target.degree;
    let space = EdgeSpace::new(gs, edge, k)?;
    let sides = &gs.surface.edges[edge].sides;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for end in [false, true] {
        rows.extend(space.corner_rows(gs, end));
        for (side, corner) in EdgeSpace::corners(gs, edge, end) {
            let face = &target.faces[sides[side].face];
            for (a, b) in CORNER_OFFSETS {
                rhs.push(face.get_in_corner(corner, a, b).clone());
            }
        }
    }
    let x = linalg::solve(&rows, &rhs, space.nvars()).ok_or_else(|| {
        let id = gs.surface.edges[edge].id.clone();
        let crossing = gs.crossing_at(edge, false).unwrap_or(false)
            || gs.crossing_at(edge, true).unwrap_or(false);
        if crossing {
            BasisError::SingularInconsistent(id)
        } else {
            BasisError::IntegralInfeasible(id)
        }
    })?;
    Ok(space.evaluate(&x))
}

/// The spline with the given corner jets at `vertex`, zero jets elsewhere, supported on the
/// faces around the vertex.
pub fn vertex_function(
    gs: &GluedSurface,
    vertex: usize,
    jets: &[FaceJet],
    k: usize,
) -> Result<Spline, BasisError> {
    let mut corners = Spline::zero(&gs.surface, k);
    for fj in jets {
        set_corner_jet(&mut corners.faces[fj.face], fj.corner, &fj.jet);
    }
    let mut asm = Assembly::new(gs, k);
    for fj in jets {
        for (a, b) in CORNER_OFFSETS {
            let (i, j) = fj_kind(gs, fj.face).corner_to_face(k, fj.corner, a, b);
            asm.assign(fj.face, i, j, corners.faces[fj.face].get(i, j).clone())?;
        }
    }
    let mut done = Vec::new();
    for fe in gs.surface.fan_edges(vertex) {
        if fe.after_side.is_none() || done.contains(&fe.edge) {
            continue;
        }
        done.push(fe.edge);
        let strips = lift(gs, fe.edge, &corners)?;
        for (side, strip) in gs.surface.edges[fe.edge].sides.iter().zip(&strips) {
            asm.merge_strip(side.face, side.slot, strip)?;
        }
    }
    Ok(asm.spline)
}

fn fj_kind(gs: &GluedSurface, face: usize) -> FaceKind {
    gs.surface.faces[face].kind
}

pub fn vertex_basis(
    gs: &GluedSurface,
    vertex: usize,
    k: usize,
) -> Result<Vec<(BasisTag, Spline)>, BasisError> {
    let key = vertex_key(&gs.surface, vertex);
    let mut out = Vec::new();
    let value = vertex_jet_solve(gs, vertex, JetKind::Value)?;
    out.push((
        BasisTag::VertexValue {
            vertex: key.clone(),
        },
        vertex_function(gs, vertex, &value, k)?,
    ));
    for index in 0..2 {
        let jets = vertex_jet_solve(gs, vertex, JetKind::Deriv(index))?;
        out.push((
            BasisTag::VertexDeriv {
                vertex: key.clone(),
                index: index + 1,
            },
            vertex_function(gs, vertex, &jets, k)?,
        ));
    }
    let comps = cross_components(gs, vertex)?;
    let v = &gs.surface.vertices[vertex];
    for i in 0..v.face_count() {
        if comps[i] != i {
            continue;
        }
        let jets = vertex_jet_solve(gs, vertex, JetKind::Cross(i))?;
        let face = gs.surface.faces[v.faces[i].face].id.clone();
        out.push((
            BasisTag::VertexCross {
                vertex: key.clone(),
                face,
            },
            vertex_function(gs, vertex, &jets, k)?,
        ));
    }
    Ok(out)
}

/// Splines supported along one edge with vanishing corner jets at both ends.
pub fn edge_basis(
    gs: &GluedSurface,
    edge: usize,
    k: usize,
) -> Result<Vec<(BasisTag, Spline)>, BasisError> {
    let e = &gs.surface.edges[edge];
    let tag = |index| BasisTag::EdgeFn {
        edge: e.id.clone(),
        index,
    };
    let mut out = Vec::new();
    if !e.is_interior() {
        let side = e.sides[0];
        let kind = gs.surface.faces[side.face].kind;
        let last1 = if kind == FaceKind::Triangle {
            k.saturating_sub(3)
        } else {
            k.saturating_sub(2)
        };
        let units = (2..=k.saturating_sub(2))
            .map(|a| (a, 0))
            .chain((2..=last1).map(|a| (a, 1)));
        for (a, b) in units {
            let mut s = Spline::zero(&gs.surface, k);
            s.faces[side.face].set_in_corner(side.slot, a, b, Rational::one());
            out.push((tag(out.len()), s));
        }
        return Ok(out);
    }
    let space = EdgeSpace::new(gs, edge, k)?;
    let mut rows = space.corner_rows(gs, false);
    rows.extend(space.corner_rows(gs, true));
    for x in linalg::nullspace(&rows, space.nvars()) {
        let strips = space.evaluate(&x);
        let mut s = Spline::zero(&gs.surface, k);
        for (side, strip) in e.sides.iter().zip(strips) {
            s.faces[side.face].add_assign(&strip);
        }
        out.push((tag(out.len()), s));
    }
    Ok(out)
}

/// Bernstein functions vanishing to first order along every edge of the face.
pub fn face_basis(gs: &GluedSurface, face: usize, k: usize) -> Vec<(BasisTag, Spline)> {
    let kind = gs.surface.faces[face].kind;
    let id = &gs.surface.faces[face].id;
    let mut out = Vec::new();
    for (i, j) in kind.indices(k) {
        let inside = match kind {
            FaceKind::Quad => i >= 2 && j >= 2 && i + 2 <= k && j + 2 <= k,
            FaceKind::Triangle => i >= 2 && j >= 2 && i + j + 2 <= k,
        };
        if inside {
            let mut s = Spline::zero(&gs.surface, k);
            s.faces[face].set(i, j, Rational::one());
            out.push((
                BasisTag::FaceFn {
                    face: id.clone(),
                    i,
                    j,
                },
                s,
            ));
        }
    }
    out
}

/// Vertex, edge and face families, certified: count equals the dimension, exact rank equals the
/// count, and every member has zero G1 residual.
pub fn full_basis(gs: &GluedSurface, k: usize) -> Result<SplineBasis, BasisError> {
    let s_star = dimension::s_star(gs, SeparabilityMode::Exact)?;
    if k < s_star {
        return Err(BasisError::BelowSeparability { k, s_star });
    }
    let basis = assemble(gs, k)?;
    certify(gs, &basis)?;
    Ok(basis)
}

/// Builds the three families without certification.
pub fn assemble(gs: &GluedSurface, k: usize) -> Result<SplineBasis, BasisError> {
    let mut members = Vec::new();
    for v in 0..gs.surface.vertices.len() {
        members.extend(vertex_basis(gs, v, k)?);
    }
    for e in 0..gs.surface.edges.len() {
        members.extend(edge_basis(gs, e, k)?);
    }
    for f in 0..gs.surface.faces.len() {
        members.extend(face_basis(gs, f, k));
    }
    Ok(SplineBasis { degree: k, members })
}

pub fn certify(gs: &GluedSurface, basis: &SplineBasis) -> Result<(), BasisError> {
    let fail = |tag: String, reason: String| BasisError::CertificationFailed { tag, reason };
    for (tag, s) in &basis.members {
        let r = verify::g1_residual(s, gs);
        if !r.is_zero() {
            return Err(fail(
                tag.to_string(),
                format!(
                    "nonzero residual on {}",
                    r.first_failure().unwrap_or_default()
                ),
            ));
        }
    }
    let report = dimension::dim_spline_space(gs, basis.degree, SeparabilityMode::Exact)?;
    if report.dimension != basis.members.len() {
        return Err(fail(
            "basis".into(),
            format!(
                "{} functions, dimension {}",
                basis.members.len(),
                report.dimension
            ),
        ));
    }
    let rank = verify::check_independence(basis);
    if rank.rank != rank.count {
        return Err(fail(
            "basis".into(),
            format!("rank {} of {}", rank.rank, rank.count),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ratpoly::int;

    #[test]
    fn round_corner_vertex_counts() {
        let gs = fixtures::round_corner();
        for v in 0..gs.surface.vertices.len() {
            let fam = vertex_basis(&gs, v, 4).unwrap();
            assert_eq!(fam.len(), dimension::dim_h_vertex(&gs, v).unwrap());
            for (tag, s) in &fam {
                assert!(verify::g1_residual(s, &gs).is_zero(), "{tag}");
            }
        }
    }

    #[test]
    fn value_jets_are_constant() {
        let gs = fixtures::round_corner();
        let g = gs.surface.vertices.iter().position(|v| v.interior).unwrap();
        for fj in vertex_jet_solve(&gs, g, JetKind::Value).unwrap() {
            assert_eq!(fj.jet, [int(1), int(0), int(0), int(0)]);
        }
    }

    #[test]
    fn face_counts() {
        let gs = fixtures::pruned_octahedron();
        let tri = gs
            .surface
            .faces
            .iter()
            .position(|f| f.kind == FaceKind::Triangle)
            .unwrap();
        assert_eq!(face_basis(&gs, tri, 6).len(), 1);
        assert_eq!(face_basis(&gs, tri, 4).len(), 0);
        let gs = fixtures::round_corner();
        assert_eq!(face_basis(&gs, 0, 4).len(), 1);
    }

    #[test]
    fn round_corner_full_basis() {
        let gs = fixtures::round_corner();
        let b = full_basis(&gs, 4).unwrap();
        assert_eq!(b.members.len(), 48);
        assert!(verify::jet_duality_check(&gs, &b).ok());
        assert!(verify::ampleness_check(&gs, &b).failures.is_empty());
    }

    #[test]
    fn octahedron_full_basis() {
        let gs = fixtures::pruned_octahedron();
        let b = full_basis(&gs, 6).unwrap();
        assert_eq!(b.members.len(), 83);
        let d = verify::jet_duality_check(&gs, &b);
        assert!(d.ok(), "{:?}", d.failures);
    }

    #[test]
    fn below_threshold_rejected() {
        let gs = fixtures::pruned_octahedron();
        assert!(matches!(
            full_basis(&gs, 5),
            Err(BasisError::BelowSeparability { .. })
        ));
    }
}

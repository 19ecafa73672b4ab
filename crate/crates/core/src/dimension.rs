//! Dimension counts: per-edge syzygy dimensions, separability, vertex jet spaces and the
//! total dimension of the G1 spline space.

use crate::gluing::GluedSurface;
use crate::ratpoly::FaceKind;
use crate::syzygy::{edge_mu_basis, EdgeSpace, SyzygyError};
use crate::verify;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeparabilityMode {
    Bound,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimensionError {
    #[error(transparent)]
    Syzygy(#[from] SyzygyError),
    #[error(transparent)]
    Gluing(#[from] crate::gluing::GluingError),
    #[error(transparent)]
    Oracle(#[from] verify::VerifyError),
}

/// F_Delta of the single face of a boundary edge.
fn boundary_f_delta(gs: &GluedSurface, edge: usize) -> usize {
    gs.surface.side_f_delta(edge, 0)
}

/// d_tau(k): dim Z_k for interior edges, 2k + 3 - F_Delta for boundary edges.
pub fn d_tau(gs: &GluedSurface, edge: usize, k: usize) -> Result<usize, DimensionError> {
    if gs.surface.edges[edge].is_interior() {
        Ok(edge_mu_basis(gs, edge)?.dim_zk(k))
    } else {
        Ok(2 * k + 3 - boundary_f_delta(gs, edge))
    }
}

/// Crossing flags (c at start, c at end) of an edge.
pub fn edge_crossings(gs: &GluedSurface, edge: usize) -> Result<(bool, bool), DimensionError> {
    Ok((gs.crossing_at(edge, false)?, gs.crossing_at(edge, true)?))
}

/// Separability of an edge: the bound nu + m + 4, or the least degree at which the edge splines
/// reach every admissible corner configuration at both ends.
pub fn separability(
    gs: &GluedSurface,
    edge: usize,
    mode: SeparabilityMode,
) -> Result<usize, DimensionError> {
    if !gs.surface.edges[edge].is_interior() {
        return Ok(3 + boundary_f_delta(gs, edge));
    }
    let mb = edge_mu_basis(gs, edge)?;
    let bound = mb.nu + mb.m + 4;
    if mode == SeparabilityMode::Bound {
        return Ok(bound);
    }
    let (c0, c1) = edge_crossings(gs, edge)?;
    let target = 10 - usize::from(c0) - usize::from(c1);
    for k in 2..=bound {
        if EdgeSpace::new(gs, edge, k)?.corner_rank(gs) == target {
            return Ok(k);
        }
    }
    Ok(bound)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexDimData {
    pub vertex: String,
    pub interior: bool,
    pub faces: usize,
    pub sum_crossing: usize,
    pub c_plus: bool,
    pub dim_h: usize,
}

pub fn vertex_dim_data(gs: &GluedSurface, vertex: usize) -> Result<VertexDimData, DimensionError> {
    let v = &gs.surface.vertices[vertex];
    let jets = gs.vertex_jets(vertex)?;
    let sum_crossing = jets.iter().filter(|j| j.crossing).count();
    let c_plus = v.interior && jets.len() == 4 && sum_crossing == 4;
    let f = v.face_count();
    Ok(VertexDimData {
        vertex: v.label(&gs.surface),
        interior: v.interior,
        faces: f,
        sum_crossing,
        c_plus,
        dim_h: 3 + f - sum_crossing + usize::from(c_plus),
    })
}

/// dim H(gamma) = 3 + F - sum of crossing flags + c_plus.
pub fn dim_h_vertex(gs: &GluedSurface, vertex: usize) -> Result<usize, DimensionError> {
    Ok(vertex_dim_data(gs, vertex)?.dim_h)
}

/// dim E_k(tau) = d_tau(k) - 9 + c(start) + c(end); may be negative below separability.
pub fn dim_e_edge(gs: &GluedSurface, edge: usize, k: usize) -> Result<i64, DimensionError> {
    let (c0, c1) = edge_crossings(gs, edge)?;
    Ok(d_tau(gs, edge, k)? as i64 - 9 + i64::from(c0) + i64::from(c1))
}

/// Number of interior (face) functions of one face.
pub fn face_interior_count(kind: FaceKind, k: usize) -> usize {
    match kind {
        FaceKind::Quad => k.saturating_sub(3).pow(2),
        FaceKind::Triangle => {
            let n = k.saturating_sub(4);
            n * n.saturating_sub(1) / 2
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeDimData {
    pub edge: String,
    pub interior: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<usize>,
    pub f_delta: usize,
    pub crossing_start: bool,
    pub crossing_end: bool,
    pub separability: usize,
    pub d_tau: usize,
    pub dim_e: i64,
}

pub fn edge_dim_data(
    gs: &GluedSurface,
    edge: usize,
    k: usize,
    mode: SeparabilityMode,
) -> Result<EdgeDimData, DimensionError> {
    let e = &gs.surface.edges[edge];
    let (c0, c1) = edge_crossings(gs, edge)?;
    let (mu, nu, m, n, ee, f_delta) = if e.is_interior() {
        let mb = edge_mu_basis(gs, edge)?;
        (
            Some(mb.mu),
            Some(mb.nu),
            Some(mb.m),
            Some(mb.n),
            Some(mb.e),
            mb.inv.f_delta,
        )
    } else {
        (None, None, None, None, None, boundary_f_delta(gs, edge))
    };
    Ok(EdgeDimData {
        edge: e.id.clone(),
        interior: e.is_interior(),
        mu,
        nu,
        m,
        n,
        e: ee,
        f_delta,
        crossing_start: c0,
        crossing_end: c1,
        separability: separability(gs, edge, mode)?,
        d_tau: d_tau(gs, edge, k)?,
        dim_e: dim_e_edge(gs, edge, k)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceDimData {
    pub face: String,
    pub interior: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub degree: usize,
    pub dimension: usize,
    pub separability_mode: SeparabilityMode,
    pub s_star: usize,
    /// below s_star the total comes from the brute-force oracle
    pub from_oracle: bool,
    /// vertex + edge + face breakdown; meaningful for k >= s_star
    pub breakdown_total: i64,
    pub closed_form: i64,
    pub vertices: Vec<VertexDimData>,
    pub edges: Vec<EdgeDimData>,
    pub faces: Vec<FaceDimData>,
}

/// Threshold degree s* = max separability over all edges.
pub fn s_star(gs: &GluedSurface, mode: SeparabilityMode) -> Result<usize, DimensionError> {
    let mut s = 0;
    for e in 0..gs.surface.edges.len() {
        s = s.max(separability(gs, e, mode)?);
    }
    Ok(s)
}

/// Closed form: (k-3)^2 F_quad + (k-5)(k-4)/2 F_tri + sum F(gamma) + sum d_tau - 9 F_1 + 3 F_0 + F_+.
pub fn closed_form(gs: &GluedSurface, k: usize) -> Result<i64, DimensionError> {
    let s = &gs.surface;
    let cross = gs.crossing_vertices()?;
    let counts = s.counts(&cross);
    let mut total = (counts.f_quad * face_interior_count(FaceKind::Quad, k)) as i64
        + (counts.f_tri * face_interior_count(FaceKind::Triangle, k)) as i64
        + (4 * counts.f_quad + 3 * counts.f_tri) as i64
        - 9 * counts.f_edges as i64
        + 3 * counts.f_vertices as i64
        + counts.f_crossing_vertices as i64;
    for e in 0..s.edges.len() {
        total += d_tau(gs, e, k)? as i64;
    }
    Ok(total)
}

pub fn dim_spline_space(
    gs: &GluedSurface,
    k: usize,
    mode: SeparabilityMode,
) -> Result<DimensionReport, DimensionError> {
    let s = &gs.surface;
    let vertices = (0..s.vertices.len())
        .map(|v| vertex_dim_data(gs, v))
        .collect::<Result<Vec<_>, _>>()?;
    let edges = (0..s.edges.len())
        .map(|e| edge_dim_data(gs, e, k, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let faces: Vec<FaceDimData> = s
        .faces
        .iter()
        .map(|f| FaceDimData {
            face: f.id.clone(),
            interior: face_interior_count(f.kind, k),
        })
        .collect();
    let s_star = edges.iter().map(|e| e.separability).max().unwrap_or(0);
    let breakdown_total = vertices.iter().map(|v| v.dim_h as i64).sum::<i64>()
        + edges.iter().map(|e| e.dim_e).sum::<i64>()
        + faces.iter().map(|f| f.interior as i64).sum::<i64>();
    let closed = closed_form(gs, k)?;
    assert_eq!(
        breakdown_total, closed,
        "breakdown and closed form are the same sum regrouped"
    );
    let from_oracle = k < s_star;
    let dimension = if from_oracle {
        verify::brute_force_dimension(gs, k)?
    } else {
        breakdown_total as usize
    };
    Ok(DimensionReport {
        degree: k,
        dimension,
        separability_mode: mode,
        s_star,
        from_oracle,
        breakdown_total,
        closed_form: closed,
        vertices,
        edges,
        faces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_corner_terms() {
        let gs = fixtures::round_corner();
        let s = &gs.surface;
        for e in 0..s.edges.len() {
            if s.edges[e].is_interior() {
                assert_eq!(d_tau(&gs, e, 4).unwrap(), 9);
                assert_eq!(dim_e_edge(&gs, e, 4).unwrap(), 1);
                assert_eq!(separability(&gs, e, SeparabilityMode::Exact).unwrap(), 4);
            } else {
                assert_eq!(d_tau(&gs, e, 4).unwrap(), 11);
                assert_eq!(dim_e_edge(&gs, e, 4).unwrap(), 2);
            }
        }
        let mut dims: Vec<usize> = (0..s.vertices.len())
            .map(|v| dim_h_vertex(&gs, v).unwrap())
            .collect();
        dims.sort();
        assert_eq!(dims, vec![4, 4, 4, 4, 4, 4, 6]);
        let r = dim_spline_space(&gs, 4, SeparabilityMode::Exact).unwrap();
        assert_eq!((r.dimension, r.from_oracle, r.s_star), (48, false, 4));
    }

    #[test]
    fn octahedron_terms() {
        let gs = fixtures::pruned_octahedron();
        let s = &gs.surface;
        let eb = s.edge_index("EB").unwrap();
        assert_eq!(separability(&gs, eb, SeparabilityMode::Exact).unwrap(), 6);
        assert_eq!(separability(&gs, eb, SeparabilityMode::Bound).unwrap(), 7);
        let ef = s.edge_index("EF").unwrap();
        assert_eq!(dim_e_edge(&gs, ef, 6).unwrap(), 4);
        let ab = s.edge_index("AB").unwrap();
        assert_eq!(dim_e_edge(&gs, ab, 6).unwrap(), 4);
        let r = dim_spline_space(&gs, 6, SeparabilityMode::Exact).unwrap();
        assert_eq!(r.dimension, 83);
        for k in 6..=10 {
            let expected = (2 * k - 3) * (2 * k - 3) + k - 4;
            assert_eq!(closed_form(&gs, k).unwrap(), expected as i64, "k = {k}");
        }
    }

    #[test]
    fn boundary_d_tau() {
        let gs = fixtures::two_patch(FaceKind::Triangle, FaceKind::Triangle);
        let b = gs
            .surface
            .edges
            .iter()
            .position(|e| !e.is_interior())
            .unwrap();
        assert_eq!(d_tau(&gs, b, 5).unwrap(), 12);
    }
}

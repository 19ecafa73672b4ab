//! Topological surfaces: faces, edge identifications, vertex classes and fans.

use crate::ratpoly::FaceKind;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("dangling reference: {0}")]
    DanglingReference(String),
    #[error("slot {slot} of face {face} is used by more than one edge")]
    SlotReuse { face: String, slot: usize },
    #[error("edge {0} is glued to itself")]
    SelfGluedEdge(String),
    #[error("vertex through {0} is not a single fan or chain")]
    NonManifoldVertex(String),
    #[error("duplicate identifier {0}")]
    DuplicateId(String),
    #[error("edge {0} must list one or two sides")]
    SideCount(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub id: String,
    pub kind: FaceKind,
}

/// One side of an edge as written in a surface file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideSpec {
    pub face: String,
    pub slot: usize,
    #[serde(default)]
    pub reversed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub sides: Vec<SideSpec>,
}

/// A resolved edge side: `face` indexes `TopoSurface::faces`.
///
/// The shared edge parameter starts at the slot's first corner unless `reversed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Side {
    pub face: usize,
    pub slot: usize,
    pub reversed: bool,
}

impl Side {
    /// Corner of the face sitting at parameter 0 of the edge.
    pub fn start_corner(&self, kind: FaceKind) -> usize {
        if self.reversed {
            (self.slot + 1) % kind.corners()
        } else {
            self.slot
        }
    }

    /// Corner of the face sitting at parameter 1 of the edge.
    pub fn end_corner(&self, kind: FaceKind) -> usize {
        if self.reversed {
            self.slot
        } else {
            (self.slot + 1) % kind.corners()
        }
    }
}

/// Side 0 plays the role of the face where the edge is {v=0}; side 1 the face where it is {u=0}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub sides: Vec<Side>,
    /// Set for boundary edges created for slots the input did not mention.
    pub implicit: bool,
}

impl Edge {
    pub fn is_interior(&self) -> bool {
        self.sides.len() == 2
    }
}

/// A face corner seen from a vertex: `swapped` is true when the corner frame's first axis
/// runs along the fan's next edge rather than the previous one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FanFace {
    pub face: usize,
    pub corner: usize,
    pub swapped: bool,
}

/// An edge seen from a vertex fan. `after_side` is the stored side index of the face that
/// follows the edge in fan order (interior edges only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FanEdge {
    pub edge: usize,
    pub at_end: bool,
    pub after_side: Option<usize>,
}

/// An equivalence class of polygon corners.
///
/// `faces[i]` lies between `edges[i]` and `edges[i + 1]` (indices mod F for interior
/// vertices). Interior vertices have F edges, boundary vertices F + 1, starting and ending
/// with boundary edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClass {
    pub id: usize,
    pub interior: bool,
    pub faces: Vec<FanFace>,
    pub edges: Vec<usize>,
}

impl VertexClass {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Edge between fan faces i-1 and i (0-based, cyclic for interior vertices).
    pub fn edge_before(&self, i: usize) -> usize {
        self.edges[i]
    }

    pub fn edge_after(&self, i: usize) -> usize {
        if self.interior {
            self.edges[(i + 1) % self.edges.len()]
        } else {
            self.edges[i + 1]
        }
    }

    pub fn label(&self, surface: &TopoSurface) -> String {
        let f = &self.faces[0];
        format!("v{}({}:{})", self.id, surface.faces[f.face].id, f.corner)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceCounts {
    pub f_quad: usize,
    pub f_tri: usize,
    pub f_edges: usize,
    pub f_vertices: usize,
    pub f_crossing_vertices: usize,
    pub f_boundary_edges: usize,
    pub f_boundary_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopoSurface {
    pub faces: Vec<Face>,
    pub edges: Vec<Edge>,
    pub vertices: Vec<VertexClass>,
    /// `slot_edge[f][s]` is the edge using slot `s` of face `f`.
    pub slot_edge: Vec<Vec<usize>>,
    /// `corner_vertex[f][c]` is the vertex class of corner `c` of face `f`.
    pub corner_vertex: Vec<Vec<usize>>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn build_surface(faces: &[Face], edges: &[EdgeSpec]) -> Result<TopoSurface, SurfaceError> {
    let mut face_index = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        if face_index.insert(f.id.clone(), i).is_some() {
            return Err(SurfaceError::DuplicateId(f.id.clone()));
        }
    }
    let mut slot_edge: Vec<Vec<Option<usize>>> =
        faces.iter().map(|f| vec![None; f.kind.corners()]).collect();
    let mut out_edges = Vec::new();
    let mut edge_ids = HashMap::new();
    for e in edges {
        if edge_ids.insert(e.id.clone(), out_edges.len()).is_some() {
            return Err(SurfaceError::DuplicateId(e.id.clone()));
        }
        if e.sides.is_empty() || e.sides.len() > 2 {
            return Err(SurfaceError::SideCount(e.id.clone()));
        }
        let mut sides = Vec::new();
        for s in &e.sides {
            let &fi = face_index.get(&s.face).ok_or_else(|| {
                SurfaceError::DanglingReference(format!("edge {} names face {}", e.id, s.face))
            })?;
            if s.slot >= faces[fi].kind.corners() {
                return Err(SurfaceError::DanglingReference(format!(
                    "edge {} names slot {} of face {}",
                    e.id, s.slot, s.face
                )));
            }
            sides.push(Side {
                face: fi,
                slot: s.slot,
                reversed: s.reversed,
            });
        }
        if sides.len() == 2 && sides[0].face == sides[1].face && sides[0].slot == sides[1].slot {
            return Err(SurfaceError::SelfGluedEdge(e.id.clone()));
        }
        for s in &sides {
            if slot_edge[s.face][s.slot].is_some() {
                return Err(SurfaceError::SlotReuse {
                    face: faces[s.face].id.clone(),
                    slot: s.slot,
                });
            }
            slot_edge[s.face][s.slot] = Some(out_edges.len());
        }
        out_edges.push(Edge {
            id: e.id.clone(),
            sides,
            implicit: false,
        });
    }
    for (fi, f) in faces.iter().enumerate() {
        for s in 0..f.kind.corners() {
            if slot_edge[fi][s].is_none() {
                slot_edge[fi][s] = Some(out_edges.len());
                out_edges.push(Edge {
                    id: format!("{}#{}", f.id, s),
                    sides: vec![Side {
                        face: fi,
                        slot: s,
                        reversed: false,
                    }],
                    implicit: true,
                });
            }
        }
    }
    let slot_edge: Vec<Vec<usize>> = slot_edge
        .into_iter()
        .map(|v| v.into_iter().map(|x| x.unwrap()).collect())
        .collect();

    // corners are numbered face * 4 + corner
    let mut uf = UnionFind::new(faces.len() * 4);
    for e in &out_edges {
        if let [s0, s1] = e.sides[..] {
            let (k0, k1) = (faces[s0.face].kind, faces[s1.face].kind);
            uf.union(
                s0.face * 4 + s0.start_corner(k0),
                s1.face * 4 + s1.start_corner(k1),
            );
            uf.union(
                s0.face * 4 + s0.end_corner(k0),
                s1.face * 4 + s1.end_corner(k1),
            );
        }
    }
    let mut class_of_root = HashMap::new();
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut corner_vertex: Vec<Vec<usize>> =
        faces.iter().map(|f| vec![0; f.kind.corners()]).collect();
    for (fi, f) in faces.iter().enumerate() {
        for c in 0..f.kind.corners() {
            let r = uf.find(fi * 4 + c);
            let id = *class_of_root.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[id].push((fi, c));
            corner_vertex[fi][c] = id;
        }
    }

    let mut surface = TopoSurface {
        faces: faces.to_vec(),
        edges: out_edges,
        vertices: Vec::new(),
        slot_edge,
        corner_vertex,
    };
    let mut vertices = Vec::new();
    for (id, corners) in classes.iter().enumerate() {
        vertices.push(surface.walk_fan(id, corners)?);
    }
    surface.vertices = vertices;
    Ok(surface)
}

impl TopoSurface {
    fn kind(&self, face: usize) -> FaceKind {
        self.faces[face].kind
    }

    /// The two slots meeting at a corner: (leaving, arriving).
    fn corner_slots(&self, face: usize, corner: usize) -> (usize, usize) {
        let n = self.kind(face).corners();
        (corner, (corner + n - 1) % n)
    }

    /// Index of the side of `edge` lying in (face, slot).
    pub fn side_index(&self, edge: usize, face: usize, slot: usize) -> usize {
        self.edges[edge]
            .sides
            .iter()
            .position(|s| s.face == face && s.slot == slot)
            .expect("slot belongs to edge")
    }

    /// Across the interior edge in (face, slot), the corner matching `corner` of `face`.
    fn across(&self, face: usize, corner: usize, slot: usize) -> Option<(usize, usize, usize)> {
        let e = self.slot_edge[face][slot];
        let edge = &self.edges[e];
        if !edge.is_interior() {
            return None;
        }
        let mine = self.side_index(e, face, slot);
        let me = edge.sides[mine];
        let other = edge.sides[1 - mine];
        let at_start = me.start_corner(self.kind(face)) == corner;
        let oc = if at_start {
            other.start_corner(self.kind(other.face))
        } else {
            other.end_corner(self.kind(other.face))
        };
        Some((other.face, oc, other.slot))
    }

    fn walk_fan(&self, id: usize, corners: &[(usize, usize)]) -> Result<VertexClass, SurfaceError> {
        let label = || {
            let (f, c) = corners[0];
            format!("{}:{}", self.faces[f].id, c)
        };
        let is_boundary_slot = |f: usize, s: usize| !self.edges[self.slot_edge[f][s]].is_interior();
        // a chain starts at a corner with a boundary slot
        let start = corners.iter().copied().find(|&(f, c)| {
            let (o, i) = self.corner_slots(f, c);
            is_boundary_slot(f, o) || is_boundary_slot(f, i)
        });
        let interior = start.is_none();
        let (f0, c0) = start.unwrap_or(corners[0]);
        let (out0, in0) = self.corner_slots(f0, c0);
        // first edge of the fan is the first axis of the first face
        let first_slot = if interior || is_boundary_slot(f0, out0) {
            out0
        } else {
            in0
        };
        let mut faces = Vec::new();
        let mut edges = vec![self.slot_edge[f0][first_slot]];
        let (mut f, mut c, mut entry) = (f0, c0, first_slot);
        loop {
            let (o, i) = self.corner_slots(f, c);
            let swapped = entry != o;
            let exit = if swapped { o } else { i };
            faces.push(FanFace {
                face: f,
                corner: c,
                swapped,
            });
            if faces.len() > corners.len() {
                return Err(SurfaceError::NonManifoldVertex(label()));
            }
            let exit_edge = self.slot_edge[f][exit];
            match self.across(f, c, exit) {
                None => {
                    edges.push(exit_edge);
                    break;
                }
                Some((nf, nc, ns)) => {
                    if interior && (nf, nc) == (f0, c0) {
                        break;
                    }
                    edges.push(exit_edge);
                    f = nf;
                    c = nc;
                    entry = ns;
                }
            }
        }
        if faces.len() != corners.len() {
            return Err(SurfaceError::NonManifoldVertex(label()));
        }
        Ok(VertexClass {
            id,
            interior,
            faces,
            edges,
        })
    }

    /// Vertex classes at parameter 0 and 1 of an edge.
    pub fn edge_vertices(&self, edge: usize) -> (usize, usize) {
        let s = self.edges[edge].sides[0];
        let k = self.kind(s.face);
        (
            self.corner_vertex[s.face][s.start_corner(k)],
            self.corner_vertex[s.face][s.end_corner(k)],
        )
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&e| self.edges[e].is_interior())
    }

    pub fn face_index(&self, id: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// F_Delta of the face on side `i` of an edge.
    pub fn side_f_delta(&self, edge: usize, i: usize) -> usize {
        self.kind(self.edges[edge].sides[i].face).f_delta()
    }

    /// `c_plus` flags per vertex must be supplied by the caller (they depend on gluing data).
    pub fn counts(&self, c_plus: &[bool]) -> SurfaceCounts {
        SurfaceCounts {
            f_quad: self
                .faces
                .iter()
                .filter(|f| f.kind == FaceKind::Quad)
                .count(),
            f_tri: self
                .faces
                .iter()
                .filter(|f| f.kind == FaceKind::Triangle)
                .count(),
            f_edges: self.edges.len(),
            f_vertices: self.vertices.len(),
            f_crossing_vertices: c_plus.iter().filter(|&&b| b).count(),
            f_boundary_edges: self.edges.iter().filter(|e| !e.is_interior()).count(),
            f_boundary_vertices: self.vertices.iter().filter(|v| !v.interior).count(),
        }
    }

    pub fn vertex_fan(&self, vertex: usize) -> &VertexClass {
        &self.vertices[vertex]
    }

    /// Slot of fan face `i` lying on the edge before it (`before`) or after it.
    fn fan_slot(&self, ff: &FanFace, before: bool) -> usize {
        let (o, i) = self.corner_slots(ff.face, ff.corner);
        if before != ff.swapped {
            o
        } else {
            i
        }
    }

    /// Per fan edge: which end of the edge sits at the vertex and which stored side is the
    /// face following the edge in fan order.
    pub fn fan_edges(&self, vertex: usize) -> Vec<FanEdge> {
        let v = &self.vertices[vertex];
        let f = v.faces.len();
        (0..v.edges.len())
            .map(|j| {
                let edge = v.edges[j];
                let (ff, slot) = if j < f {
                    (v.faces[j], self.fan_slot(&v.faces[j], true))
                } else {
                    (v.faces[f - 1], self.fan_slot(&v.faces[f - 1], false))
                };
                let side_idx = self.side_index(edge, ff.face, slot);
                let side = self.edges[edge].sides[side_idx];
                let at_end = side.start_corner(self.kind(ff.face)) != ff.corner;
                let after_side = (j < f && self.edges[edge].is_interior()).then_some(side_idx);
                FanEdge {
                    edge,
                    at_end,
                    after_side,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(id: &str) -> Face {
        Face {
            id: id.into(),
            kind: FaceKind::Quad,
        }
    }

    fn side(face: &str, slot: usize, reversed: bool) -> SideSpec {
        SideSpec {
            face: face.into(),
            slot,
            reversed,
        }
    }

    #[test]
    fn two_quads() {
        let s = build_surface(
            &[quad("A"), quad("B")],
            &[EdgeSpec {
                id: "e".into(),
                sides: vec![side("A", 1, false), side("B", 3, true)],
            }],
        )
        .unwrap();
        assert_eq!(s.interior_edges().count(), 1);
        assert_eq!(s.edges.len(), 7);
        assert_eq!(s.vertices.len(), 6);
        assert!(s.vertices.iter().all(|v| !v.interior));
        let sum_f: usize = s.vertices.iter().map(|v| v.face_count()).sum();
        assert_eq!(sum_f, 8);
    }

    #[test]
    fn single_triangle_counts() {
        let s = build_surface(
            &[Face {
                id: "T".into(),
                kind: FaceKind::Triangle,
            }],
            &[],
        )
        .unwrap();
        let c = s.counts(&vec![false; s.vertices.len()]);
        assert_eq!(
            (c.f_tri, c.f_edges, c.f_vertices, c.f_crossing_vertices),
            (1, 3, 3, 0)
        );
        assert_eq!(c.f_boundary_edges, 3);
        for v in &s.vertices {
            assert_eq!(v.edges.len(), 2);
        }
    }

    #[test]
    fn errors() {
        let faces = [quad("A"), quad("B")];
        let bad_face = EdgeSpec {
            id: "e".into(),
            sides: vec![side("Z", 0, false)],
        };
        assert!(matches!(
            build_surface(&faces, &[bad_face]),
            Err(SurfaceError::DanglingReference(_))
        ));
        let self_glued = EdgeSpec {
            id: "e".into(),
            sides: vec![side("A", 0, false), side("A", 0, true)],
        };
        assert!(matches!(
            build_surface(&faces, &[self_glued]),
            Err(SurfaceError::SelfGluedEdge(_))
        ));
        let reuse = [
            EdgeSpec {
                id: "e".into(),
                sides: vec![side("A", 0, false), side("B", 0, true)],
            },
            EdgeSpec {
                id: "f".into(),
                sides: vec![side("A", 0, false), side("B", 1, true)],
            },
        ];
        assert!(matches!(
            build_surface(&faces, &reuse),
            Err(SurfaceError::SlotReuse { .. })
        ));
    }

    #[test]
    fn mobius_pair_accepted() {
        // two quads glued along two opposite edge pairs, one of them with a twist
        let s = build_surface(
            &[quad("A"), quad("B")],
            &[
                EdgeSpec {
                    id: "e".into(),
                    sides: vec![side("A", 1, false), side("B", 3, true)],
                },
                EdgeSpec {
                    id: "f".into(),
                    sides: vec![side("B", 1, false), side("A", 3, false)],
                },
            ],
        )
        .unwrap();
        assert_eq!(s.interior_edges().count(), 2);
        let sum_f: usize = s.vertices.iter().map(|v| v.face_count()).sum();
        assert_eq!(sum_f, 8);
    }

    #[test]
    fn three_quad_cylinder() {
        // three quads glued in a ring
        let faces = [quad("A"), quad("B"), quad("C")];
        let edges = [
            EdgeSpec {
                id: "ab".into(),
                sides: vec![side("A", 1, false), side("B", 3, true)],
            },
            EdgeSpec {
                id: "bc".into(),
                sides: vec![side("B", 1, false), side("C", 3, true)],
            },
            EdgeSpec {
                id: "ca".into(),
                sides: vec![side("C", 1, false), side("A", 3, true)],
            },
        ];
        let s = build_surface(&faces, &edges).unwrap();
        let sum_f: usize = s.vertices.iter().map(|v| v.face_count()).sum();
        assert_eq!(sum_f, 12);
        assert_eq!(s.vertices.len(), 6);
    }
}

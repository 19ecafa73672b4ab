//! Built-in surfaces: the round corner, the pruned octahedron, two-patch configurations and
//! planar lattice triangulations.

use crate::gluing::{EdgeGluing, GluedSurface};
use crate::ratpoly::{FaceKind, Rational, UniPoly};
use crate::surface::{build_surface, EdgeSpec, Face, SideSpec, TopoSurface};
use std::collections::BTreeMap;

/// A face given by its corner labels in counterclockwise order.
#[derive(Debug, Clone)]
pub struct LabeledFace {
    pub id: String,
    pub corners: Vec<String>,
}

impl LabeledFace {
    pub fn new(id: impl Into<String>, corners: &[&str]) -> Self {
        LabeledFace {
            id: id.into(),
            corners: corners.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn kind(&self) -> FaceKind {
        if self.corners.len() == 3 {
            FaceKind::Triangle
        } else {
            FaceKind::Quad
        }
    }
}

/// Builds a surface from corner-labelled faces. Labels shared by two faces along consecutive
/// corners become interior edges; `orient(x, y)` returns the edge id and its start label.
pub fn labeled_topology(
    faces: &[LabeledFace],
    orient: impl Fn(&str, &str) -> (String, String),
) -> TopoSurface {
    // unordered label pair -> (face, slot, first label of the slot)
    let mut pairs: BTreeMap<(String, String), Vec<(usize, usize, String)>> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        let n = f.corners.len();
        for s in 0..n {
            let (x, y) = (&f.corners[s], &f.corners[(s + 1) % n]);
            let key = if x < y {
                (x.clone(), y.clone())
            } else {
                (y.clone(), x.clone())
            };
            pairs.entry(key).or_default().push((fi, s, x.clone()));
        }
    }
    let mut edges = Vec::new();
    for ((x, y), sides) in &pairs {
        if sides.len() != 2 {
            continue;
        }
        let (id, from) = orient(x, y);
        edges.push(EdgeSpec {
            id,
            sides: sides
                .iter()
                .map(|(fi, s, first)| SideSpec {
                    face: faces[*fi].id.clone(),
                    slot: *s,
                    reversed: *first != from,
                })
                .collect(),
        });
    }
    let topo: Vec<Face> = faces
        .iter()
        .map(|f| Face {
            id: f.id.clone(),
            kind: f.kind(),
        })
        .collect();
    build_surface(&topo, &edges).expect("fixture topology is valid")
}

fn concat_ids(from: &str, to: &str) -> String {
    format!("{from}{to}")
}

/// Three quads around an interior vertex g, glued with [u-1, -1, 1] from g.
pub fn round_corner() -> GluedSurface {
    let faces: Vec<LabeledFace> = (1..=3)
        .map(|i| {
            let next = i % 3 + 1;
            LabeledFace::new(
                format!("s{i}"),
                &["g", &format!("d{i}"), &format!("e{i}"), &format!("d{next}")],
            )
        })
        .collect();
    let surface = labeled_topology(&faces, |x, y| {
        let other = if x == "g" { y } else { x };
        (format!("t{}", &other[1..]), "g".to_string())
    });
    let gluings = surface
        .edges
        .iter()
        .map(|e| {
            e.is_interior()
                .then(|| EdgeGluing::from_ints(&[-1, 1], &[-1], &[1]))
        })
        .collect();
    GluedSurface::new(surface, gluings)
}

/// Six triangles and one quad on the vertices A..F. Edges EB and FD carry [2u+u^2, -1, 1],
/// the others [2u, -1, 1], each oriented from its crossing endpoint.
pub fn pruned_octahedron() -> GluedSurface {
    let faces = vec![
        LabeledFace::new("ABE", &["A", "B", "E"]),
        LabeledFace::new("BCE", &["E", "B", "C"]),
        LabeledFace::new("CEF", &["E", "C", "F"]),
        LabeledFace::new("AEF", &["A", "E", "F"]),
        LabeledFace::new("ADF", &["A", "F", "D"]),
        LabeledFace::new("CDF", &["C", "D", "F"]),
        LabeledFace::new("ABCD", &["A", "D", "C", "B"]),
    ];
    let start = |x: &str, y: &str| -> String {
        for p in ["E", "F", "A", "C"] {
            if x == p || y == p {
                return p.to_string();
            }
        }
        unreachable!()
    };
    let surface = labeled_topology(&faces, |x, y| {
        let from = start(x, y);
        let to = if from == x { y } else { x };
        (concat_ids(&from, to), from)
    });
    let gluings = surface
        .edges
        .iter()
        .map(|e| {
            e.is_interior().then(|| {
                if e.id == "EB" || e.id == "FD" {
                    EdgeGluing::from_ints(&[0, 2, 1], &[-1], &[1])
                } else {
                    EdgeGluing::from_ints(&[0, 2], &[-1], &[1])
                }
            })
        })
        .collect();
    GluedSurface::new(surface, gluings)
}

/// Two faces sharing one edge with constant gluing [0, -1, 1].
pub fn two_patch(first: FaceKind, second: FaceKind) -> GluedSurface {
    let corners = |k: FaceKind, tail: &[&'static str]| -> Vec<String> {
        let mut v = vec!["p".to_string(), "q".to_string()];
        v.extend(tail.iter().take(k.corners() - 2).map(|s| s.to_string()));
        v
    };
    let a = LabeledFace {
        id: "A".into(),
        corners: corners(first, &["a1", "a2"]),
    };
    // the second face runs along the shared edge in the opposite direction
    let mut b_corners = corners(second, &["b1", "b2"]);
    b_corners.swap(0, 1);
    let b = LabeledFace {
        id: "B".into(),
        corners: b_corners,
    };
    let surface = labeled_topology(&[a, b], |_, _| ("pq".into(), "p".into()));
    let gluings = surface
        .edges
        .iter()
        .map(|e| {
            e.is_interior()
                .then(|| EdgeGluing::from_ints(&[], &[-1], &[1]))
        })
        .collect();
    GluedSurface::new(surface, gluings)
}

/// How a lattice cell is cut into faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellSplit {
    Quad,
    /// one triangle pair cut along the diagonal through the lower left corner
    Diagonal,
    AntiDiagonal,
    /// four triangles meeting at the cell center
    Cross,
}

/// Planar lattice of `nx` by `ny` unit cells (row-major `splits`), with the constant affine
/// gluing that makes G1 splines exactly the planar C1 splines.
pub fn planar_grid(nx: usize, ny: usize, splits: &[CellSplit]) -> GluedSurface {
    assert_eq!(splits.len(), nx * ny, "one split per cell");
    // doubled coordinates keep cell centers integral
    let mut pos: BTreeMap<String, (i64, i64)> = BTreeMap::new();
    let mut p = |i: usize, j: usize| {
        let l = format!("{i},{j}");
        pos.insert(l.clone(), (2 * i as i64, 2 * j as i64));
        l
    };
    let mut faces = Vec::new();
    let mut centers = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (p(i, j), p(i + 1, j), p(i + 1, j + 1), p(i, j + 1));
            let id = |n: usize| format!("c{i}_{j}_{n}");
            match splits[j * nx + i] {
                CellSplit::Quad => faces.push(LabeledFace::new(id(0), &[&a, &b, &c, &d])),
                CellSplit::Diagonal => {
                    faces.push(LabeledFace::new(id(0), &[&a, &b, &c]));
                    faces.push(LabeledFace::new(id(1), &[&a, &c, &d]));
                }
                CellSplit::AntiDiagonal => {
                    faces.push(LabeledFace::new(id(0), &[&a, &b, &d]));
                    faces.push(LabeledFace::new(id(1), &[&b, &c, &d]));
                }
                CellSplit::Cross => {
                    let m = format!("m{i},{j}");
                    centers.push((m.clone(), (2 * i as i64 + 1, 2 * j as i64 + 1)));
                    for (n, (x, y)) in [(&a, &b), (&b, &c), (&c, &d), (&d, &a)]
                        .into_iter()
                        .enumerate()
                    {
                        faces.push(LabeledFace::new(id(n), &[x, y, &m]));
                    }
                }
            }
        }
    }
    pos.extend(centers);
    let surface = labeled_topology(&faces, |x, y| (format!("{x}~{y}"), x.to_string()));
    let corner_pos = |face: usize, corner: usize| {
        let f = &faces[face];
        pos[&f.corners[corner % f.corners.len()]]
    };
    let gluings = surface
        .edges
        .iter()
        .map(|e| {
            if !e.is_interior() {
                return None;
            }
            // side frames at the start vertex: the edge and the other edge at that corner
            let mut frame = Vec::new();
            for s in &e.sides {
                let n = faces[s.face].corners.len();
                let kind = surface.faces[s.face].kind;
                let c = s.start_corner(kind);
                let other = if s.slot == c { c + n - 1 } else { c + 1 };
                let o = corner_pos(s.face, c);
                let edge_to = corner_pos(s.face, s.end_corner(kind));
                let w = corner_pos(s.face, other);
                frame.push(((edge_to.0 - o.0, edge_to.1 - o.1), (w.0 - o.0, w.1 - o.1)));
            }
            let det = |p: (i64, i64), q: (i64, i64)| p.0 * q.1 - p.1 * q.0;
            let (e0, w0) = frame[0];
            let w1 = frame[1].1;
            // w0 = a*e + b*w1
            let d = det(e0, w1);
            let a = Rational::new(det(w0, w1).into(), d.into());
            let b = Rational::new(det(e0, w0).into(), d.into());
            Some(
                EdgeGluing::new(UniPoly::constant(a), UniPoly::constant(b), UniPoly::one())
                    .expect("planar frames are nondegenerate"),
            )
        })
        .collect();
    GluedSurface::new(surface, gluings)
}

/// The surface of a planar grid with gluing replaced by the symmetric construction.
pub fn symmetric_grid(
    nx: usize,
    ny: usize,
    splits: &[CellSplit],
) -> Result<GluedSurface, crate::gluing::GluingError> {
    let surface = planar_grid(nx, ny, splits).surface;
    let gluings = crate::gluing::generate_symmetric_gluing(&surface)?;
    Ok(GluedSurface::new(surface, gluings))
}

/// Names of the built-in fixtures accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "round-corner",
    "pruned-octahedron",
    "two-quads",
    "quad-tri",
    "two-triangles",
    "planar-mixed",
];

pub fn by_name(name: &str) -> Option<GluedSurface> {
    use CellSplit::*;
    Some(match name {
        "round-corner" => round_corner(),
        "pruned-octahedron" => pruned_octahedron(),
        "two-quads" => two_patch(FaceKind::Quad, FaceKind::Quad),
        "quad-tri" => two_patch(FaceKind::Quad, FaceKind::Triangle),
        "two-triangles" => two_patch(FaceKind::Triangle, FaceKind::Triangle),
        "planar-mixed" => planar_grid(
            3,
            3,
            &[
                Diagonal,
                AntiDiagonal,
                Cross,
                Cross,
                Diagonal,
                AntiDiagonal,
                AntiDiagonal,
                Cross,
                Diagonal,
            ],
        ),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gluing::{check_topology, check_vertex_compatibility, Level};

    #[test]
    fn round_corner_counts() {
        let gs = round_corner();
        let s = &gs.surface;
        let cross = gs.crossing_vertices().unwrap();
        let c = s.counts(&cross);
        assert_eq!(
            (c.f_quad, c.f_edges, c.f_vertices, c.f_crossing_vertices),
            (3, 9, 7, 0)
        );
        assert_eq!(s.interior_edges().count(), 3);
        let interior: Vec<_> = s.vertices.iter().filter(|v| v.interior).collect();
        assert_eq!(interior.len(), 1);
        assert_eq!(interior[0].face_count(), 3);
    }

    #[test]
    fn round_corner_jets() {
        let gs = round_corner();
        let g = gs.surface.vertices.iter().position(|v| v.interior).unwrap();
        let jets = gs.vertex_jets(g).unwrap();
        assert_eq!(jets.len(), 3);
        for j in &jets {
            assert_eq!(j.local.a0, crate::ratpoly::int(-1));
            assert_eq!(j.local.b0, crate::ratpoly::int(-1));
            assert_eq!(j.local.a1, crate::ratpoly::int(1));
            assert!(!j.crossing);
        }
        for v in 0..gs.surface.vertices.len() {
            assert!(check_vertex_compatibility(&gs, v).is_ok());
        }
        // every delta vertex sees its single interior edge as crossing
        for (vi, v) in gs.surface.vertices.iter().enumerate() {
            if !v.interior && v.face_count() == 2 {
                let jets = gs.vertex_jets(vi).unwrap();
                assert!(jets.len() == 1 && jets[0].crossing);
            }
        }
        assert!(check_topology(&gs, true)
            .unwrap()
            .iter()
            .all(|f| f.level == Level::Pass));
    }

    #[test]
    fn octahedron_counts_and_validity() {
        let gs = pruned_octahedron();
        let cross = gs.crossing_vertices().unwrap();
        let c = gs.surface.counts(&cross);
        assert_eq!(
            (
                c.f_tri,
                c.f_quad,
                c.f_edges,
                c.f_vertices,
                c.f_crossing_vertices
            ),
            (6, 1, 11, 6, 4)
        );
        assert!(gs.surface.vertices.iter().all(|v| v.interior));
        for v in 0..gs.surface.vertices.len() {
            check_vertex_compatibility(&gs, v).unwrap();
        }
        assert!(check_topology(&gs, true)
            .unwrap()
            .iter()
            .all(|f| f.level == Level::Pass));
    }

    #[test]
    fn planar_grid_is_compatible() {
        let gs = by_name("planar-mixed").unwrap();
        for v in 0..gs.surface.vertices.len() {
            check_vertex_compatibility(&gs, v).unwrap();
        }
        assert!(check_topology(&gs, true)
            .unwrap()
            .iter()
            .all(|f| f.level == Level::Pass));
    }

    #[test]
    fn symmetric_octahedron_gluing() {
        let surface = pruned_octahedron().surface;
        let gl = crate::gluing::generate_symmetric_gluing(&surface).unwrap();
        for (e, g) in surface.edges.iter().zip(&gl) {
            let g = g.as_ref().unwrap();
            let expected = if e.id == "EB" || e.id == "FD" {
                EdgeGluing::from_ints(&[0, 2, 1], &[-1], &[1])
            } else {
                EdgeGluing::from_ints(&[0, 2], &[-1], &[1])
            };
            assert_eq!(g, &expected, "edge {}", e.id);
        }
    }
}

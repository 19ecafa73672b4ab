//! Surface and basis file formats (JSON, rationals as "p/q" strings).

use crate::basis::{BasisTag, Spline, SplineBasis};
use crate::gluing::{EdgeGluing, GluedSurface, GluingError};
use crate::ratpoly::rational::serde_rational_vec;
use crate::ratpoly::{FacePoly, Rational};
use crate::surface::{build_surface, EdgeSpec, Face, SideSpec, SurfaceError};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Gluing(#[from] GluingError),
    #[error("edge {0} has two sides but no gluing block")]
    MissingGluing(String),
    #[error("boundary edge {0} carries a gluing block")]
    BoundaryGluing(String),
    #[error("basis file does not match the surface: {0}")]
    Mismatch(String),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub id: String,
    pub sides: Vec<SideSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gluing: Option<EdgeGluing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceFile {
    pub faces: Vec<Face>,
    pub edges: Vec<EdgeEntry>,
}

impl SurfaceFile {
    pub fn from_glued(gs: &GluedSurface) -> Self {
        let s = &gs.surface;
        let edges = s
            .edges
            .iter()
            .zip(&gs.gluings)
            .filter(|(e, _)| !e.implicit)
            .map(|(e, g)| EdgeEntry {
                id: e.id.clone(),
                sides: e
                    .sides
                    .iter()
                    .map(|sd| SideSpec {
                        face: s.faces[sd.face].id.clone(),
                        slot: sd.slot,
                        reversed: sd.reversed,
                    })
                    .collect(),
                gluing: g.clone(),
            })
            .collect();
        SurfaceFile {
            faces: s.faces.clone(),
            edges,
        }
    }

    pub fn build(&self) -> Result<GluedSurface, IoError> {
        let specs: Vec<EdgeSpec> = self
            .edges
            .iter()
            .map(|e| EdgeSpec {
                id: e.id.clone(),
                sides: e.sides.clone(),
            })
            .collect();
        let surface = build_surface(&self.faces, &specs)?;
        let mut gluings = vec![None; surface.edges.len()];
        for entry in &self.edges {
            let idx = surface
                .edge_index(&entry.id)
                .expect("edge listed in the file");
            match (&entry.gluing, entry.sides.len()) {
                (Some(g), 2) => {
                    let mut n = EdgeGluing::new(g.a.clone(), g.b.clone(), g.c.clone())?;
                    n.allow_sharp = g.allow_sharp;
                    gluings[idx] = Some(n);
                }
                (None, 2) => return Err(IoError::MissingGluing(entry.id.clone())),
                (Some(_), _) => return Err(IoError::BoundaryGluing(entry.id.clone())),
                (None, _) => {}
            }
        }
        Ok(GluedSurface::new(surface, gluings))
    }
}

pub fn parse_surface(text: &str) -> Result<GluedSurface, IoError> {
    let file: SurfaceFile = serde_json::from_str(text)?;
    file.build()
}

pub fn print_surface(gs: &GluedSurface) -> String {
    serde_json::to_string_pretty(&SurfaceFile::from_glued(gs)).expect("surface serializes")
}

/// SHA-256 of the compact surface file, hex encoded.
pub fn surface_hash(gs: &GluedSurface) -> String {
    let compact = serde_json::to_string(&SurfaceFile::from_glued(gs)).expect("surface serializes");
    hex::encode(Sha256::digest(compact.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisHeader {
    pub surface_hash: String,
    pub degree: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coeffs(#[serde(with = "serde_rational_vec")] pub Vec<Rational>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub tag: BasisTag,
    /// face id to Bernstein coefficients; faces where the function vanishes are omitted
    pub faces: BTreeMap<String, Coeffs>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisFile {
    pub header: BasisHeader,
    pub records: Vec<BasisRecord>,
}

impl BasisFile {
    pub fn from_basis(gs: &GluedSurface, basis: &SplineBasis) -> Self {
        let records = basis
            .members
            .iter()
            .map(|(tag, s)| BasisRecord {
                tag: tag.clone(),
                faces: s
                    .faces
                    .iter()
                    .zip(&gs.surface.faces)
                    .filter(|(p, _)| !p.is_zero())
                    .map(|(p, f)| (f.id.clone(), Coeffs(p.coeffs().to_vec())))
                    .collect(),
            })
            .collect();
        BasisFile {
            header: BasisHeader {
                surface_hash: surface_hash(gs),
                degree: basis.degree,
                count: basis.members.len(),
            },
            records,
        }
    }

    /// Rebuilds the splines; the surface hash and all face ids and sizes must match.
    pub fn to_basis(&self, gs: &GluedSurface) -> Result<SplineBasis, IoError> {
        let h = &self.header;
        if h.surface_hash != surface_hash(gs) {
            return Err(IoError::Mismatch("surface hash differs".into()));
        }
        if h.count != self.records.len() {
            return Err(IoError::Mismatch(format!(
                "header count {} but {} records",
                h.count,
                self.records.len()
            )));
        }
        let mut members = Vec::with_capacity(self.records.len());
        for r in &self.records {
            let mut s = Spline::zero(&gs.surface, h.degree);
            for (id, c) in &r.faces {
                let fi = gs
                    .surface
                    .face_index(id)
                    .ok_or_else(|| IoError::Mismatch(format!("{}: unknown face {id}", r.tag)))?;
                let kind = gs.surface.faces[fi].kind;
                s.faces[fi] = FacePoly::from_coeffs(kind, h.degree, c.0.clone())
                    .map_err(|e| IoError::Mismatch(format!("{}: face {id}: {e}", r.tag)))?;
            }
            members.push((r.tag.clone(), s));
        }
        Ok(SplineBasis {
            degree: h.degree,
            members,
        })
    }
}

pub fn print_basis(gs: &GluedSurface, basis: &SplineBasis) -> String {
    serde_json::to_string_pretty(&BasisFile::from_basis(gs, basis)).expect("basis serializes")
}

pub fn parse_basis(text: &str, gs: &GluedSurface) -> Result<SplineBasis, IoError> {
    let file: BasisFile = serde_json::from_str(text)?;
    file.to_basis(gs)
}

//! Gluing data on interior edges, vertex-local jets and the compatibility conditions.
//!
//! Conventions. On an interior edge the shared parameter u runs from the start vertex to the
//! end vertex. Stored side 0 is the face where the edge is {v=0} with transversal derivative
//! `h0`; stored side 1 is the other face with transversal derivative `h1`, both measured in
//! the side frames whose first axis is the edge. The G1 condition reads
//! `c*h0 = b*h1 + a*g'` where `g` is the common restriction.

use crate::linalg;
use crate::ratpoly::{FaceKind, Rational, UniPoly};
use crate::surface::{FanEdge, TopoSurface};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GluingError {
    #[error("interior edge {0} has no gluing data")]
    MissingGluing(String),
    #[error("gluing on edge {0} is degenerate (b or c is zero)")]
    Degenerate(String),
    #[error("edge {edge}: {which}(0) vanishes at vertex {vertex}")]
    ZeroDenominator {
        edge: String,
        vertex: String,
        which: &'static str,
    },
    #[error("vertex {vertex}: transition product is {product}, expected the identity")]
    Condition1Violated { vertex: String, product: String },
    #[error("vertex {vertex}: second order relations do not close ({witness})")]
    Condition2Violated { vertex: String, witness: String },
    #[error("vertex {vertex}: all {edges} edges are crossing edges, only 4 are supported")]
    CrossingVertexDegree { vertex: String, edges: usize },
    #[error("symmetric gluing correction infeasible: {0}")]
    InfeasibleCorrection(String),
}

/// First order transition data [a, b, c] on an interior edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeGluing {
    pub a: UniPoly,
    pub b: UniPoly,
    pub c: UniPoly,
    /// Accept b/c > 0 (a sharp edge) without a topology warning.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_sharp: bool,
}

impl EdgeGluing {
    /// Normalized data: common polynomial factor and integer content removed, first nonzero
    /// coefficient of c positive.
    pub fn new(a: UniPoly, b: UniPoly, c: UniPoly) -> Result<Self, GluingError> {
        if b.is_zero() || c.is_zero() {
            return Err(GluingError::Degenerate(format!("[{a}, {b}, {c}]")));
        }
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = if g.degree().unwrap_or(0) > 0 {
            (a.div_rem(&g).0, b.div_rem(&g).0, c.div_rem(&g).0)
        } else {
            (a, b, c)
        };
        let den = [&a, &b, &c]
            .iter()
            .fold(BigInt::one(), |acc, p| acc.lcm(&p.denominator_lcm()));
        let scaled: Vec<UniPoly> = [&a, &b, &c]
            .iter()
            .map(|p| p.scale(&Rational::from_integer(den.clone())))
            .collect();
        let num = scaled
            .iter()
            .fold(BigInt::zero(), |acc, p| acc.gcd(&p.numerator_gcd()));
        let mut s = Rational::new(den, num);
        let lead_c = c.coeffs().iter().find(|x| !x.is_zero()).unwrap().clone();
        if lead_c.is_negative() {
            s = -s;
        }
        a = a.scale(&s);
        b = b.scale(&s);
        c = c.scale(&s);
        Ok(EdgeGluing {
            a,
            b,
            c,
            allow_sharp: false,
        })
    }

    pub fn from_ints(a: &[i64], b: &[i64], c: &[i64]) -> Self {
        Self::new(
            UniPoly::from_ints(a),
            UniPoly::from_ints(b),
            UniPoly::from_ints(c),
        )
        .expect("nondegenerate gluing")
    }

    /// Data seen from the end vertex: parameter reversed and frames moved to the far corners.
    /// `kinds` are the face kinds of stored sides 0 and 1.
    pub fn reversed(&self, kinds: [FaceKind; 2]) -> (UniPoly, UniPoly, UniPoly) {
        let k0 = Rational::from_integer(kinds[0].f_delta().into());
        let k1 = Rational::from_integer(kinds[1].f_delta().into());
        let a = -(&self.a + &self.b.scale(&k1) - self.c.scale(&k0));
        (a.reversed(), self.b.reversed(), self.c.reversed())
    }
}

impl fmt::Display for EdgeGluing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// A surface together with gluing data on its interior edges (indexed like `surface.edges`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedSurface {
    pub surface: TopoSurface,
    pub gluings: Vec<Option<EdgeGluing>>,
}

/// 1-jets of the transition ratios a/c and b/c at the vertex end of an edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Jet {
    #[serde(with = "crate::ratpoly::rational::serde_rational")]
    pub a0: Rational,
    #[serde(with = "crate::ratpoly::rational::serde_rational")]
    pub b0: Rational,
    #[serde(with = "crate::ratpoly::rational::serde_rational")]
    pub a1: Rational,
    #[serde(with = "crate::ratpoly::rational::serde_rational")]
    pub b1: Rational,
}

impl Jet {
    fn from_polys(a: &UniPoly, b: &UniPoly, c: &UniPoly) -> Option<Jet> {
        let c0 = c.coeff(0);
        if c0.is_zero() {
            return None;
        }
        let c1 = c.coeff(1);
        let ratio = |p: &UniPoly| {
            let (p0, p1) = (p.coeff(0), p.coeff(1));
            (&p0 / &c0, (&p1 * &c0 - &p0 * &c1) / (&c0 * &c0))
        };
        let (a0, a1) = ratio(a);
        let (b0, b1) = ratio(b);
        Some(Jet { a0, b0, a1, b1 })
    }
}

/// Gluing jets of one edge at one vertex. `local` keeps the stored side roles with the edge
/// oriented away from the vertex; `fan` exchanges roles so the face after the edge in fan
/// order plays side 0, giving `q_next = a0*q_edge + b0*q_prev`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexJet {
    pub edge: usize,
    pub position: usize,
    pub at_end: bool,
    pub local: Jet,
    pub fan: Jet,
    pub crossing: bool,
}

impl GluedSurface {
    pub fn new(surface: TopoSurface, gluings: Vec<Option<EdgeGluing>>) -> Self {
        GluedSurface { surface, gluings }
    }

    pub fn gluing(&self, edge: usize) -> Result<&EdgeGluing, GluingError> {
        self.gluings[edge]
            .as_ref()
            .ok_or_else(|| GluingError::MissingGluing(self.surface.edges[edge].id.clone()))
    }

    fn side_kinds(&self, edge: usize) -> [FaceKind; 2] {
        let s = &self.surface.edges[edge].sides;
        [
            self.surface.faces[s[0].face].kind,
            self.surface.faces[s[1].face].kind,
        ]
    }

    /// (a, b, c) with the edge oriented away from the chosen end, in stored roles.
    pub fn local_abc(
        &self,
        edge: usize,
        at_end: bool,
    ) -> Result<(UniPoly, UniPoly, UniPoly), GluingError> {
        let g = self.gluing(edge)?;
        Ok(if at_end {
            g.reversed(self.side_kinds(edge))
        } else {
            (g.a.clone(), g.b.clone(), g.c.clone())
        })
    }

    fn jet_at(
        &self,
        vertex: usize,
        position: usize,
        fe: &FanEdge,
    ) -> Result<VertexJet, GluingError> {
        let (a, b, c) = self.local_abc(fe.edge, fe.at_end)?;
        let zero = |which| GluingError::ZeroDenominator {
            edge: self.surface.edges[fe.edge].id.clone(),
            vertex: self.surface.vertices[vertex].label(&self.surface),
            which,
        };
        if b.coeff(0).is_zero() {
            return Err(zero("b"));
        }
        let local = Jet::from_polys(&a, &b, &c).ok_or_else(|| zero("c"))?;
        let fan = if fe.after_side == Some(1) {
            Jet::from_polys(&-&a, &c, &b).ok_or_else(|| zero("b"))?
        } else {
            local.clone()
        };
        let crossing = local.a0.is_zero();
        Ok(VertexJet {
            edge: fe.edge,
            position,
            at_end: fe.at_end,
            local,
            fan,
            crossing,
        })
    }

    /// Jets of every interior edge at the vertex, in fan order.
    pub fn vertex_jets(&self, vertex: usize) -> Result<Vec<VertexJet>, GluingError> {
        self.surface
            .fan_edges(vertex)
            .iter()
            .enumerate()
            .filter(|(_, fe)| fe.after_side.is_some())
            .map(|(j, fe)| self.jet_at(vertex, j, fe))
            .collect()
    }

    /// c_tau(gamma): whether the edge is a crossing edge at the given end. Boundary edges never are.
    pub fn crossing_at(&self, edge: usize, at_end: bool) -> Result<bool, GluingError> {
        if !self.surface.edges[edge].is_interior() {
            return Ok(false);
        }
        let (a, _, _) = self.local_abc(edge, at_end)?;
        Ok(a.coeff(0).is_zero())
    }

    /// Interior vertex all of whose edges are crossing edges.
    pub fn is_crossing_vertex(&self, vertex: usize) -> Result<bool, GluingError> {
        let v = &self.surface.vertices[vertex];
        if !v.interior {
            return Ok(false);
        }
        Ok(self.vertex_jets(vertex)?.iter().all(|j| j.crossing))
    }

    /// Crossing-vertex flags for every vertex.
    pub fn crossing_vertices(&self) -> Result<Vec<bool>, GluingError> {
        (0..self.surface.vertices.len())
            .map(|v| self.is_crossing_vertex(v))
            .collect()
    }
}

/// Edge data (restriction, transversal derivative) of a side, converted from the slot's
/// canonical frame. A reversed side is read from the slot's far corner; on a triangle that
/// frame is sheared, which mixes the tangential derivative into the transversal one.
pub fn side_from_slot(
    kind: FaceKind,
    reversed: bool,
    g: &UniPoly,
    h: &UniPoly,
) -> (UniPoly, UniPoly) {
    if !reversed {
        return (g.clone(), h.clone());
    }
    let kappa = Rational::from_integer(kind.f_delta().into());
    let gr = g.reversed();
    let hr = h.reversed() - g.derivative().reversed().scale(&kappa);
    (gr, hr)
}

/// Inverse of [`side_from_slot`].
pub fn slot_from_side(
    kind: FaceKind,
    reversed: bool,
    g: &UniPoly,
    h: &UniPoly,
) -> (UniPoly, UniPoly) {
    if !reversed {
        return (g.clone(), h.clone());
    }
    let kappa = Rational::from_integer(kind.f_delta().into());
    let gs = g.reversed();
    let hs = h.reversed() - g.derivative().reversed().scale(&kappa);
    (gs, hs)
}

type Mat2 = [[Rational; 2]; 2];

fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn identity() -> Mat2 {
    [
        [Rational::one(), Rational::zero()],
        [Rational::zero(), Rational::one()],
    ]
}

fn transfer(j: &Jet) -> Mat2 {
    [
        [Rational::zero(), Rational::one()],
        [j.b0.clone(), j.a0.clone()],
    ]
}

fn fmt_mat(m: &Mat2) -> String {
    use crate::ratpoly::format_rational as f;
    format!(
        "[[{}, {}], [{}, {}]]",
        f(&m[0][0]),
        f(&m[0][1]),
        f(&m[1][0]),
        f(&m[1][1])
    )
}

/// Product M_F ... M_1 of the transfer matrices around an interior vertex.
pub fn transfer_product(jets: &[VertexJet]) -> Mat2 {
    jets.iter()
        .fold(identity(), |acc, j| mat_mul(&transfer(&j.fan), &acc))
}

/// Closure defect of the cross-derivative relations around a 4-edge crossing vertex, as the
/// coefficients of the two free first derivatives. Zero iff the second condition holds.
pub fn condition2_defect(jets: &[Jet]) -> [Rational; 2] {
    let n = jets.len();
    // linear forms in (q_0, q_1); q_i is the derivative along fan edge i
    let mut q: Vec<[Rational; 2]> = vec![
        [Rational::one(), Rational::zero()],
        [Rational::zero(), Rational::one()],
    ];
    for i in 1..n {
        let j = &jets[i];
        let next = [
            &j.a0 * &q[i][0] + &j.b0 * &q[i - 1][0],
            &j.a0 * &q[i][1] + &j.b0 * &q[i - 1][1],
        ];
        q.push(next);
    }
    let prev = |i: usize| if i == 0 { n - 1 } else { i - 1 };
    // s on the face before edge 0 starts at zero; after a full turn the induced value must be zero
    let mut s = [Rational::zero(), Rational::zero()];
    for i in 0..n {
        let j = &jets[i];
        let qp = &q[prev(i)];
        let qi = &q[i];
        s = [
            &j.b0 * &s[0] + &j.a1 * &qi[0] + &j.b1 * &qp[0],
            &j.b0 * &s[1] + &j.a1 * &qi[1] + &j.b1 * &qp[1],
        ];
    }
    s
}

/// Checks both compatibility conditions at a vertex; returns whether it is a crossing vertex.
pub fn check_vertex_compatibility(gs: &GluedSurface, vertex: usize) -> Result<bool, GluingError> {
    let v = &gs.surface.vertices[vertex];
    let jets = gs.vertex_jets(vertex)?;
    if !v.interior {
        return Ok(false);
    }
    let label = v.label(&gs.surface);
    let prod = transfer_product(&jets);
    if prod != identity() {
        return Err(GluingError::Condition1Violated {
            vertex: label,
            product: fmt_mat(&prod),
        });
    }
    if !jets.iter().all(|j| j.crossing) {
        return Ok(false);
    }
    if jets.len() != 4 {
        return Err(GluingError::CrossingVertexDegree {
            vertex: label,
            edges: jets.len(),
        });
    }
    let fan: Vec<Jet> = jets.iter().map(|j| j.fan.clone()).collect();
    let d = condition2_defect(&fan);
    if !d[0].is_zero() || !d[1].is_zero() {
        use crate::ratpoly::format_rational as f;
        let b: Vec<String> = fan.iter().map(|j| f(&j.b0)).collect();
        return Err(GluingError::Condition2Violated {
            vertex: label,
            witness: format!(
                "defect ({}, {}), b(0) = [{}]",
                f(&d[0]),
                f(&d[1]),
                b.join(", ")
            ),
        });
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Pass,
    Warn,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub level: Level,
    pub subject: String,
    pub message: String,
}

impl Finding {
    fn new(level: Level, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Finding {
            level,
            subject: subject.into(),
            message: message.into(),
        }
    }
}

/// Sign of b/c along every interior edge (exact, via Sturm sequences) and the fan condition at
/// interior vertices. With `strict`, warnings become failures.
pub fn check_topology(gs: &GluedSurface, strict: bool) -> Result<Vec<Finding>, GluingError> {
    let mut out = Vec::new();
    let warn = if strict { Level::Fail } else { Level::Warn };
    for e in gs.surface.interior_edges() {
        let g = gs.gluing(e)?;
        let id = format!("edge {}", gs.surface.edges[e].id);
        let bc = &g.b * &g.c;
        let zero = Rational::zero();
        let one = Rational::one();
        let (v0, v1) = (bc.eval(&zero), bc.eval(&one));
        if v0.is_zero() || v1.is_zero() {
            out.push(Finding::new(
                Level::Fail,
                id,
                format!("b*c vanishes at an endpoint: {}", bc),
            ));
            continue;
        }
        let roots = bc.sturm_roots_open01();
        if roots > 0 {
            out.push(Finding::new(
                Level::Fail,
                id,
                format!("b*c = {} has {} root(s) in (0,1)", bc, roots),
            ));
        } else if v0.is_positive() {
            let level = if g.allow_sharp { Level::Pass } else { warn };
            out.push(Finding::new(
                level,
                id,
                "b/c > 0 on [0,1]: pasted at a sharp edge",
            ));
        } else {
            out.push(Finding::new(Level::Pass, id, "b/c < 0 on [0,1]"));
        }
    }
    for (vi, v) in gs.surface.vertices.iter().enumerate() {
        if !v.interior {
            continue;
        }
        let jets = gs.vertex_jets(vi)?;
        let f = jets.len();
        let label = format!("vertex {}", v.label(&gs.surface));
        let mut bad = None;
        // partial products M_k ... M_j for 1 < j <= k < F (1-based)
        'outer: for j in 1..f {
            let mut m = identity();
            for k in j..f.saturating_sub(1) {
                m = mat_mul(&transfer(&jets[k].fan), &m);
                if !m[1][0].is_negative() && !m[1][1].is_negative() {
                    bad = Some((j + 1, k + 1, fmt_mat(&m)));
                    break 'outer;
                }
            }
        }
        match bad {
            Some((j, k, m)) => out.push(Finding::new(
                warn,
                label,
                format!("fan condition: product of transfers {j}..{k} is {m}"),
            )),
            None => out.push(Finding::new(Level::Pass, label, "fan condition holds")),
        }
    }
    Ok(out)
}

/// Directions of the fan edges at a vertex with `faces` faces.
///
/// Valences 3, 4 and 6 use affinely regular fans; other closed fans take lattice points of a
/// circle spread as evenly as possible. Open fans span a half plane.
pub fn fan_vectors(faces: usize, interior: bool) -> Vec<(i64, i64)> {
    if !interior {
        let f = faces as i64;
        return (0..=f).map(|j| (f - 2 * j, f)).collect();
    }
    match faces {
        3 => vec![(1, 0), (0, 1), (-1, -1)],
        4 => vec![(1, 0), (0, 1), (-1, 0), (0, -1)],
        6 => vec![(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)],
        f => {
            let pts = circle_points();
            let n = pts.len();
            (0..f).map(|j| pts[(j * n + f / 2) / f % n]).collect()
        }
    }
}

/// Integer points on the circle of radius 1105, counterclockwise from (1105, 0).
fn circle_points() -> Vec<(i64, i64)> {
    const R: i64 = 1105;
    let mut pts = Vec::new();
    for x in -R..=R {
        let y2 = R * R - x * x;
        let y = y2.sqrt();
        if y * y == y2 {
            pts.push((x, y));
            if y != 0 {
                pts.push((x, -y));
            }
        }
    }
    pts.sort_by(|p, q| {
        let half = |p: &(i64, i64)| u8::from(p.1 < 0 || (p.1 == 0 && p.0 < 0));
        half(p)
            .cmp(&half(q))
            .then_with(|| (q.0 * p.1).cmp(&(p.0 * q.1)))
    });
    pts.dedup();
    pts
}

fn det(p: (i64, i64), q: (i64, i64)) -> i64 {
    p.0 * q.1 - p.1 * q.0
}

/// Endpoint data of one edge end produced by the fan: values a(t), b(t) with c = 1, for t the
/// parameter of that end.
#[derive(Debug, Clone)]
struct EndValues {
    a: Rational,
    b: Rational,
}

/// Gluing data from regular (or lattice) vector fans: b linear, c = 1, a linear plus a
/// quadratic bubble on edges through crossing vertices chosen to meet the second condition.
pub fn generate_symmetric_gluing(
    surface: &TopoSurface,
) -> Result<Vec<Option<EdgeGluing>>, GluingError> {
    let ne = surface.edges.len();
    let mut ends: Vec<[Option<EndValues>; 2]> = vec![[None, None]; ne];
    for (vi, v) in surface.vertices.iter().enumerate() {
        let f = v.faces.len();
        let u = fan_vectors(f, v.interior);
        let nu = u.len();
        for (j, fe) in surface.fan_edges(vi).iter().enumerate() {
            let Some(after) = fe.after_side else { continue };
            let (um, ui, up) = (u[(j + nu - 1) % nu], u[j], u[(j + 1) % nu]);
            let d = det(um, ui);
            let fa = Rational::new(det(um, up).into(), d.into());
            let fb = Rational::new((-det(ui, up)).into(), d.into());
            // undo the role exchange, then the reversal
            let (la, lb) = if after == 1 {
                (-&fa / &fb, Rational::one() / &fb)
            } else {
                (fa, fb)
            };
            let vals = if fe.at_end {
                let s = &surface.edges[fe.edge].sides;
                let k0 = Rational::from_integer(surface.faces[s[0].face].kind.f_delta().into());
                let k1 = Rational::from_integer(surface.faces[s[1].face].kind.f_delta().into());
                EndValues {
                    a: -la - &k1 * &lb + k0,
                    b: lb,
                }
            } else {
                EndValues { a: la, b: lb }
            };
            ends[fe.edge][usize::from(fe.at_end)] = Some(vals);
        }
    }
    let mut base: Vec<Option<(UniPoly, UniPoly)>> = vec![None; ne];
    for e in surface.interior_edges() {
        let [Some(s), Some(t)] = &ends[e] else {
            unreachable!("interior edge ends are covered by fans")
        };
        let lin = |x: &Rational, y: &Rational| UniPoly::new(vec![x.clone(), y - x]);
        base[e] = Some((lin(&s.a, &t.a), lin(&s.b, &t.b)));
    }

    let build = |delta: &[Rational]| -> Vec<Option<EdgeGluing>> {
        (0..ne)
            .map(|e| {
                base[e].as_ref().map(|(a, b)| {
                    let bubble =
                        UniPoly::new(vec![Rational::zero(), delta[e].clone(), -delta[e].clone()]);
                    EdgeGluing {
                        a: a + &bubble,
                        b: b.clone(),
                        c: UniPoly::one(),
                        allow_sharp: false,
                    }
                })
            })
            .collect()
    };

    let zero_delta = vec![Rational::zero(); ne];
    let probe = GluedSurface::new(surface.clone(), build(&zero_delta));
    let crossing: Vec<usize> = (0..surface.vertices.len())
        .filter(|&v| probe.is_crossing_vertex(v).unwrap_or(false))
        .collect();
    if crossing.is_empty() {
        return Ok(probe.gluings);
    }
    // columns: edges touching exactly one crossing vertex first, then the rest
    let mut touches = vec![0usize; ne];
    for &v in &crossing {
        for fe in surface.fan_edges(v) {
            touches[fe.edge] += 1;
        }
    }
    let mut cols: Vec<usize> = (0..ne).filter(|&e| touches[e] == 1).collect();
    cols.extend((0..ne).filter(|&e| touches[e] > 1));

    let defects = |gs: &GluedSurface| -> Result<Vec<Rational>, GluingError> {
        let mut out = Vec::new();
        for &v in &crossing {
            let jets: Vec<Jet> = gs.vertex_jets(v)?.into_iter().map(|j| j.fan).collect();
            if jets.len() != 4 {
                return Err(GluingError::CrossingVertexDegree {
                    vertex: gs.surface.vertices[v].label(&gs.surface),
                    edges: jets.len(),
                });
            }
            out.extend(condition2_defect(&jets));
        }
        Ok(out)
    };
    let d0 = defects(&probe)?;
    let mut matrix = vec![vec![Rational::zero(); cols.len()]; d0.len()];
    for (ci, &e) in cols.iter().enumerate() {
        let mut delta = zero_delta.clone();
        delta[e] = Rational::one();
        let de = defects(&GluedSurface::new(surface.clone(), build(&delta)))?;
        for r in 0..d0.len() {
            matrix[r][ci] = &de[r] - &d0[r];
        }
    }
    let rhs: Vec<Rational> = d0.iter().map(|x| -x).collect();
    let sol = linalg::solve(&matrix, &rhs, cols.len()).ok_or_else(|| {
        GluingError::InfeasibleCorrection(format!(
            "{} crossing vertices, {} correctable edges",
            crossing.len(),
            cols.len()
        ))
    })?;
    let mut delta = zero_delta;
    for (ci, &e) in cols.iter().enumerate() {
        delta[e] = sol[ci].clone();
    }
    Ok(build(&delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{frac, int};

    #[test]
    fn normalization() {
        let g = EdgeGluing::new(
            UniPoly::new(vec![frac(-1, 2), frac(1, 2)]),
            UniPoly::new(vec![frac(1, 2)]),
            UniPoly::new(vec![frac(-1, 2)]),
        )
        .unwrap();
        assert_eq!(g, EdgeGluing::from_ints(&[1, -1], &[-1], &[1]));
        let common = UniPoly::from_ints(&[1, 1]);
        let g = EdgeGluing::new(
            &UniPoly::from_ints(&[0, 2]) * &common,
            &UniPoly::from_ints(&[-1]) * &common,
            common.clone(),
        )
        .unwrap();
        assert_eq!(g, EdgeGluing::from_ints(&[0, 2], &[-1], &[1]));
    }

    #[test]
    fn reversal_of_constant_quad_data() {
        let g = EdgeGluing::from_ints(&[], &[-1], &[1]);
        let (a, b, c) = g.reversed([FaceKind::Quad, FaceKind::Quad]);
        assert!(a.is_zero());
        assert_eq!((b, c), (UniPoly::from_ints(&[-1]), UniPoly::one()));
    }

    #[test]
    fn jet_quotient_rule() {
        let j = Jet::from_polys(
            &UniPoly::from_ints(&[1, 2]),
            &UniPoly::from_ints(&[-1]),
            &UniPoly::from_ints(&[2, 1]),
        )
        .unwrap();
        assert_eq!((j.a0, j.b0), (frac(1, 2), frac(-1, 2)));
        assert_eq!((j.a1, j.b1), (frac(3, 4), frac(1, 4)));
    }

    #[test]
    fn regular_fan_values() {
        for f in [3usize, 4, 5, 6, 7, 8] {
            let u = fan_vectors(f, true);
            for i in 0..f {
                let (um, ui, up) = (u[(i + f - 1) % f], u[i], u[(i + 1) % f]);
                assert!(det(um, ui) > 0, "valence {f}");
                if [3, 4, 6].contains(&f) {
                    let a = Rational::new(det(um, up).into(), det(um, ui).into());
                    let expected = match f {
                        3 => int(-1),
                        4 => int(0),
                        _ => int(1),
                    };
                    assert_eq!(a, expected);
                }
            }
        }
    }

    #[test]
    fn defect_of_planar_crossing() {
        let j = Jet {
            a0: int(0),
            b0: int(-1),
            a1: int(0),
            b1: int(0),
        };
        let d = condition2_defect(&vec![j.clone(); 4]);
        assert!(d[0].is_zero() && d[1].is_zero());
        let mut bumped = vec![j; 4];
        bumped[0].a1 = int(1);
        let d = condition2_defect(&bumped);
        assert!(!d[0].is_zero() || !d[1].is_zero());
    }
}

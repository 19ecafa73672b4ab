//! Syzygies of the gluing data: the graded module {(A,B,C) : A a + B b + C c = 0}, its
//! two generators, the degree-bounded pieces Z_k and their images as edge splines.

use crate::gluing::{slot_from_side, GluedSurface, GluingError};
use crate::linalg;
use crate::ratpoly::rational::serde_rational;
use crate::ratpoly::{FaceKind, FacePoly, Rational, UniPoly};
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyzygyError {
    #[error("gluing data is not coprime (common factor {0})")]
    NonCoprimeInput(String),
    #[error("b and c must be nonzero")]
    ZeroEntry,
    #[error("syzygy does not fit the degree {k} edge space")]
    DegreeBoundViolated { k: usize },
    #[error(transparent)]
    Gluing(#[from] GluingError),
}

/// Homogenization data of an edge. Side 0 plays the face where the edge is {v=0}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SyzygyInvariants {
    pub n: usize,
    pub m: usize,
    pub e: usize,
    pub d_a: usize,
    pub d_b: usize,
    pub d_c: usize,
    /// number of triangles among the two faces
    pub f_delta: usize,
}

pub type Triple = [UniPoly; 3];

pub fn syzygy_invariants(
    a: &UniPoly,
    b: &UniPoly,
    c: &UniPoly,
    side0: FaceKind,
    side1: FaceKind,
) -> Result<SyzygyInvariants, SyzygyError> {
    if b.is_zero() || c.is_zero() {
        return Err(SyzygyError::ZeroEntry);
    }
    let g = a.gcd(b).gcd(c);
    if g.degree() != Some(0) {
        return Err(SyzygyError::NonCoprimeInput(g.to_string()));
    }
    let n = [a, b, c].iter().filter_map(|p| p.degree()).max().unwrap();
    let (f0, f1) = (side0.f_delta(), side1.f_delta());
    let (d_a, d_b, d_c) = (n + 1, n + f1, n + f0);
    let slack = |d: usize, p: &UniPoly| p.degree().map(|x| d - x);
    let min_slack = [slack(d_a, a), slack(d_b, b), slack(d_c, c)]
        .into_iter()
        .flatten()
        .min();
    Ok(SyzygyInvariants {
        n,
        m: f0.min(f1),
        e: usize::from(min_slack != Some(0)),
        d_a,
        d_b,
        d_c,
        f_delta: f0 + f1,
    })
}

/// Exact basis of the syzygies with deg A <= caps[0], deg B <= caps[1], deg C <= caps[2]
/// (a negative cap forces that entry to zero). Unknowns are ordered A, B, C ascending.
pub fn syzygies_with_caps(abc: [&UniPoly; 3], caps: [i64; 3]) -> Vec<Triple> {
    let lens: Vec<usize> = caps.iter().map(|&c| (c + 1).max(0) as usize).collect();
    let nv: usize = lens.iter().sum();
    if nv == 0 {
        return Vec::new();
    }
    let top = (0..3)
        .filter(|&i| lens[i] > 0)
        .map(|i| lens[i] - 1 + abc[i].degree().unwrap_or(0))
        .max()
        .unwrap();
    let mut rows = vec![vec![Rational::zero(); nv]; top + 1];
    let mut off = 0;
    for i in 0..3 {
        for j in 0..lens[i] {
            for (d, coef) in abc[i].coeffs().iter().enumerate() {
                rows[j + d][off + j] += coef;
            }
        }
        off += lens[i];
    }
    let kernel = linalg::row_echelon_basis(&linalg::nullspace(&rows, nv), nv);
    kernel.iter().map(|v| split_triple(v, &lens)).collect()
}

fn split_triple(v: &[Rational], lens: &[usize]) -> Triple {
    let a = UniPoly::new(v[..lens[0]].to_vec());
    let b = UniPoly::new(v[lens[0]..lens[0] + lens[1]].to_vec());
    let c = UniPoly::new(v[lens[0] + lens[1]..].to_vec());
    [a, b, c]
}

fn flatten(t: &Triple, lens: &[usize]) -> Vec<Rational> {
    let mut out = Vec::new();
    for (p, &l) in t.iter().zip(lens) {
        out.extend((0..l).map(|i| p.coeff(i)));
    }
    out
}

pub fn cross(s: &Triple, t: &Triple) -> Triple {
    [
        &s[1] * &t[2] - &s[2] * &t[1],
        &s[2] * &t[0] - &s[0] * &t[2],
        &s[0] * &t[1] - &s[1] * &t[0],
    ]
}

pub fn pairing(s: &Triple, abc: [&UniPoly; 3]) -> UniPoly {
    &(&s[0] * abc[0]) + &(&(&s[1] * abc[1]) + &(&s[2] * abc[2]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuBasis {
    #[serde(rename = "S1")]
    pub s1: Triple,
    #[serde(rename = "S2")]
    pub s2: Triple,
    pub n: usize,
    pub m: usize,
    pub e: usize,
    pub mu: usize,
    pub nu: usize,
    #[serde(skip)]
    pub inv: SyzygyInvariants,
}

impl SyzygyInvariants {
    /// Degree caps for (A, B, C) in graded degree `d`.
    pub fn caps(&self, d: usize) -> [i64; 3] {
        let d = d as i64;
        [
            d - self.d_a as i64,
            d - self.d_b as i64,
            d - self.d_c as i64,
        ]
    }
}

pub fn mu_basis(
    a: &UniPoly,
    b: &UniPoly,
    c: &UniPoly,
    side0: FaceKind,
    side1: FaceKind,
) -> Result<MuBasis, SyzygyError> {
    let inv = syzygy_invariants(a, b, c, side0, side1)?;
    let abc = [a, b, c];
    let total = inv.d_a + inv.d_b + inv.d_c;
    let low = inv.n + inv.m;
    let mut d1 = low;
    let mut v1 = syzygies_with_caps(abc, inv.caps(d1));
    while v1.is_empty() {
        d1 += 1;
        assert!(
            d1 <= total,
            "a coprime triple has syzygies below the sum of its degrees"
        );
        v1 = syzygies_with_caps(abc, inv.caps(d1));
    }
    let s1 = normalize_first(v1[0].clone());
    let (d2, s2) = if v1.len() >= 2 {
        (d1, v1[1].clone())
    } else {
        let mut d2 = d1 + 1;
        loop {
            let vd = syzygies_with_caps(abc, inv.caps(d2));
            if vd.len() > d2 - d1 + 1 {
                break (d2, reduce_against(&s1, &vd, inv.caps(d2), d2 - d1));
            }
            d2 += 1;
            assert!(
                d2 <= total,
                "second generator bounded by the sum of degrees"
            );
        }
    };
    debug_assert_eq!(d1 + d2 + inv.e, total);
    let x = cross(&s1, &s2);
    let lambda = [a, b, c]
        .iter()
        .zip(&x)
        .find(|(p, _)| !p.is_zero())
        .map(|(p, q)| q.leading() / p.leading())
        .expect("b is nonzero");
    let s2 = s2.map(|p| p.scale(&(Rational::one() / &lambda)));
    Ok(MuBasis {
        s1,
        s2,
        n: inv.n,
        m: inv.m,
        e: inv.e,
        mu: d1 - low,
        nu: d2 - low,
        inv,
    })
}

fn normalize_first(t: Triple) -> Triple {
    let lead = t
        .iter()
        .flat_map(|p| p.coeffs().iter())
        .find(|x| !x.is_zero())
        .cloned()
        .expect("nonzero syzygy");
    t.map(|p| p.scale(&(Rational::one() / &lead)))
}

/// The representative of V_d modulo multiples of `s1` vanishing at the pivot columns of the
/// echelon form of {u^j s1}.
fn reduce_against(s1: &Triple, vd: &[Triple], caps: [i64; 3], shifts: usize) -> Triple {
    let lens: Vec<usize> = caps.iter().map(|&c| (c + 1).max(0) as usize).collect();
    let nv: usize = lens.iter().sum();
    let mut multiples: Vec<Vec<Rational>> = (0..=shifts)
        .map(|j| {
            let sh = s1
                .clone()
                .map(|p| &p * &UniPoly::monomial(Rational::one(), j));
            flatten(&sh, &lens)
        })
        .collect();
    let pivots = linalg::rref(&mut multiples, nv);
    for t in vd {
        let mut v = flatten(t, &lens);
        for (r, &col) in pivots.iter().enumerate() {
            let f = v[col].clone();
            if !f.is_zero() {
                for (x, y) in v.iter_mut().zip(&multiples[r]) {
                    *x -= &f * y;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            return split_triple(&v, &lens);
        }
    }
    unreachable!("V_d is larger than the multiples of the first generator")
}

impl MuBasis {
    /// Degree caps of the multipliers P, Q spanning Z_k (None when that part is empty).
    pub fn multiplier_caps(&self, k: usize) -> (Option<usize>, Option<usize>) {
        let cap = |g: usize| k.checked_sub(g + self.m);
        (cap(self.mu), cap(self.nu))
    }

    pub fn dim_zk(&self, k: usize) -> usize {
        let (p, q) = self.multiplier_caps(k);
        p.map_or(0, |x| x + 1) + q.map_or(0, |x| x + 1)
    }

    pub fn combine(&self, p: &UniPoly, q: &UniPoly) -> Triple {
        [
            &(p * &self.s1[0]) + &(q * &self.s2[0]),
            &(p * &self.s1[1]) + &(q * &self.s2[1]),
            &(p * &self.s1[2]) + &(q * &self.s2[2]),
        ]
    }
}

/// Z_k computed from the closed form of the free module.
pub fn dim_zk(mb: &MuBasis, k: usize) -> usize {
    mb.dim_zk(k)
}

/// μ-basis of an interior edge of a glued surface.
pub fn edge_mu_basis(gs: &GluedSurface, edge: usize) -> Result<MuBasis, SyzygyError> {
    let g = gs.gluing(edge)?;
    let s = &gs.surface.edges[edge].sides;
    let kind = |i: usize| gs.surface.faces[s[i].face].kind;
    mu_basis(&g.a, &g.b, &g.c, kind(0), kind(1))
}

/// Two-row edge strips realizing edge data (g, h0) on side 0 and (g, h1) on side 1, where the
/// common restriction is `c0 + ∫A`, `h0 = -C` and `h1 = B`.
pub fn theta_sides(
    gs: &GluedSurface,
    edge: usize,
    c0: &Rational,
    syz: &Triple,
    k: usize,
) -> Result<[FacePoly; 2], SyzygyError> {
    let sides = &gs.surface.edges[edge].sides;
    let g = &UniPoly::constant(c0.clone()) + &syz[0].integrate();
    let hs = [-&syz[2], syz[1].clone()];
    let mut out = Vec::new();
    for (side, h) in sides.iter().zip(&hs) {
        let kind = gs.surface.faces[side.face].kind;
        let (gsl, hsl) = slot_from_side(kind, side.reversed, &g, h);
        let mut f = FacePoly::zero(kind, k);
        f.set_edge_strip(side.slot, &gsl, &hsl)
            .map_err(|_| SyzygyError::DegreeBoundViolated { k })?;
        out.push(f);
    }
    Ok([out.remove(0), out.remove(0)])
}

/// Linear parametrization of the edge splines of degree k along one interior edge:
/// variables are (c0, coefficients of P, coefficients of Q) for the syzygy P S1 + Q S2.
#[derive(Debug, Clone)]
pub struct EdgeSpace {
    pub edge: usize,
    pub k: usize,
    pub mb: MuBasis,
    pub p_len: usize,
    pub q_len: usize,
    /// image of each unit variable
    pub columns: Vec<[FacePoly; 2]>,
}

/// Corner positions read by [`EdgeSpace::corner_rows`]: for each end, each side, the four
/// coefficients (0,0), (1,0), (0,1), (1,1) in the corner frame.
pub const CORNER_OFFSETS: [(usize, usize); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

impl EdgeSpace {
    pub fn new(gs: &GluedSurface, edge: usize, k: usize) -> Result<Self, SyzygyError> {
        let mb = edge_mu_basis(gs, edge)?;
        let (pc, qc) = mb.multiplier_caps(k);
        let p_len = pc.map_or(0, |x| x + 1);
        let q_len = qc.map_or(0, |x| x + 1);
        let mut columns = Vec::with_capacity(1 + p_len + q_len);
        let zero = UniPoly::zero();
        columns.push(theta_sides(
            gs,
            edge,
            &Rational::one(),
            &[zero.clone(), zero.clone(), zero.clone()],
            k,
        )?);
        for i in 0..p_len {
            let syz = mb.combine(&UniPoly::monomial(Rational::one(), i), &zero);
            columns.push(theta_sides(gs, edge, &Rational::zero(), &syz, k)?);
        }
        for i in 0..q_len {
            let syz = mb.combine(&zero, &UniPoly::monomial(Rational::one(), i));
            columns.push(theta_sides(gs, edge, &Rational::zero(), &syz, k)?);
        }
        Ok(EdgeSpace {
            edge,
            k,
            mb,
            p_len,
            q_len,
            columns,
        })
    }

    pub fn nvars(&self) -> usize {
        self.columns.len()
    }

    /// (side, corner) pairs at the start (end = false) or end of the edge.
    pub fn corners(gs: &GluedSurface, edge: usize, end: bool) -> [(usize, usize); 2] {
        let sides = &gs.surface.edges[edge].sides;
        let corner = |i: usize| {
            let kind = gs.surface.faces[sides[i].face].kind;
            if end {
                sides[i].end_corner(kind)
            } else {
                sides[i].start_corner(kind)
            }
        };
        [(0, corner(0)), (1, corner(1))]
    }

    /// 8 rows per end: corner coefficients of sides 0 and 1 as linear forms in the variables.
    pub fn corner_rows(&self, gs: &GluedSurface, end: bool) -> Vec<Vec<Rational>> {
        let mut rows = Vec::new();
        for (side, corner) in Self::corners(gs, self.edge, end) {
            for (a, b) in CORNER_OFFSETS {
                rows.push(
                    self.columns
                        .iter()
                        .map(|col| col[side].get_in_corner(corner, a, b).clone())
                        .collect(),
                );
            }
        }
        rows
    }

    /// Rank of the map to the corner coefficients at both ends.
    pub fn corner_rank(&self, gs: &GluedSurface) -> usize {
        let mut rows = self.corner_rows(gs, false);
        rows.extend(self.corner_rows(gs, true));
        linalg::rank(&rows, self.nvars())
    }

    pub fn evaluate(&self, x: &[Rational]) -> [FacePoly; 2] {
        let mut out = [
            self.columns[0][0].scaled(&Rational::zero()),
            self.columns[0][1].scaled(&Rational::zero()),
        ];
        for (xi, col) in x.iter().zip(&self.columns) {
            if xi.is_zero() {
                continue;
            }
            out[0].add_assign(&col[0].scaled(xi));
            out[1].add_assign(&col[1].scaled(xi));
        }
        out
    }

    /// The syzygy (A, B, C) and constant belonging to a variable vector.
    pub fn syzygy_of(&self, x: &[Rational]) -> (Rational, Triple) {
        let p = UniPoly::new(x[1..1 + self.p_len].to_vec());
        let q = UniPoly::new(x[1 + self.p_len..].to_vec());
        (x[0].clone(), self.mb.combine(&p, &q))
    }
}

/// Serialized form used by `dim --explain`.
#[derive(Debug, Clone, Serialize)]
pub struct MuBasisReport {
    pub edge: String,
    #[serde(flatten)]
    pub basis: MuBasis,
    pub d_a: usize,
    pub d_b: usize,
    pub d_c: usize,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
}

impl MuBasisReport {
    /// μ-basis of an interior edge with λ such that S1 × S2 = λ (a, b, c).
    pub fn for_edge(gs: &GluedSurface, edge: usize) -> Result<Self, SyzygyError> {
        let basis = edge_mu_basis(gs, edge)?;
        let g = gs.gluing(edge)?;
        let x = cross(&basis.s1, &basis.s2);
        let lambda = [(&x[0], &g.a), (&x[1], &g.b), (&x[2], &g.c)]
            .iter()
            .find(|(_, p)| !p.is_zero())
            .map(|(q, p)| q.leading() / p.leading())
            .unwrap_or_else(Rational::zero);
        Ok(MuBasisReport {
            edge: gs.surface.edges[edge].id.clone(),
            d_a: basis.inv.d_a,
            d_b: basis.inv.d_b,
            d_c: basis.inv.d_c,
            basis,
            lambda,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FaceKind::{Quad, Triangle};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn check(mb: &MuBasis, a: &UniPoly, b: &UniPoly, c: &UniPoly) {
        assert!(pairing(&mb.s1, [a, b, c]).is_zero());
        assert!(pairing(&mb.s2, [a, b, c]).is_zero());
        assert_eq!(cross(&mb.s1, &mb.s2), [a.clone(), b.clone(), c.clone()]);
    }

    #[test]
    fn invariants_examples() {
        let i = syzygy_invariants(&p(&[-1, 1]), &p(&[-1]), &p(&[1]), Quad, Quad).unwrap();
        assert_eq!((i.n, i.m, i.e, i.d_a, i.d_b, i.d_c), (1, 0, 1, 2, 1, 1));
        let i = syzygy_invariants(&p(&[0, 2, 1]), &p(&[-1]), &p(&[1]), Triangle, Triangle).unwrap();
        assert_eq!((i.n, i.m, i.e, i.d_a, i.d_b, i.d_c), (2, 1, 1, 3, 3, 3));
        let i = syzygy_invariants(&p(&[]), &p(&[-1]), &p(&[1]), Triangle, Triangle).unwrap();
        assert_eq!((i.n, i.m, i.e), (0, 1, 1));
        assert!(matches!(
            syzygy_invariants(&p(&[0, 1]), &p(&[0, 1]), &p(&[0, 2]), Quad, Quad),
            Err(SyzygyError::NonCoprimeInput(_))
        ));
    }

    #[test]
    fn round_corner_basis() {
        let (a, b, c) = (p(&[-1, 1]), p(&[-1]), p(&[1]));
        let mb = mu_basis(&a, &b, &c, Quad, Quad).unwrap();
        assert_eq!((mb.mu, mb.nu), (0, 1));
        assert_eq!(mb.s1, [p(&[]), p(&[1]), p(&[1])]);
        check(&mb, &a, &b, &c);
        // S2 is [1, u, 1] up to sign and multiples of S1
        let diff = mb.combine(&p(&[]), &p(&[1]));
        let target = [p(&[-1]), p(&[0, -1]), p(&[-1])];
        let rest: Triple = [
            &diff[0] - &target[0],
            &diff[1] - &target[1],
            &diff[2] - &target[2],
        ];
        assert!(cross(&rest, &mb.s1).iter().all(|x| x.is_zero()));
        assert_eq!(mb.dim_zk(4), 9);
    }

    #[test]
    fn octahedron_basis() {
        let (a, b, c) = (p(&[0, 2, 1]), p(&[-1]), p(&[1]));
        let mb = mu_basis(&a, &b, &c, Triangle, Triangle).unwrap();
        assert_eq!((mb.mu, mb.nu), (0, 2));
        assert_eq!(mb.s1, [p(&[]), p(&[1]), p(&[1])]);
        check(&mb, &a, &b, &c);
        assert_eq!(mb.dim_zk(6), 10);
    }

    #[test]
    fn constant_quad_basis() {
        let (a, b, c) = (p(&[]), p(&[-1]), p(&[1]));
        let mb = mu_basis(&a, &b, &c, Quad, Quad).unwrap();
        assert_eq!((mb.mu, mb.nu), (0, 1));
        assert_eq!(mb.s1, [p(&[]), p(&[1]), p(&[1])]);
        check(&mb, &a, &b, &c);
        let mixed = mu_basis(&a, &b, &c, Quad, Triangle).unwrap();
        check(&mixed, &a, &b, &c);
        assert_eq!(mixed.mu + mixed.nu + mixed.e + 2 * mixed.m, mixed.n + 1 + 1);
    }

    #[test]
    fn small_caps_vanish() {
        let mb = mu_basis(&p(&[0, 2, 1]), &p(&[-1]), &p(&[1]), Triangle, Triangle).unwrap();
        assert_eq!(mb.dim_zk(0), 0);
    }
}

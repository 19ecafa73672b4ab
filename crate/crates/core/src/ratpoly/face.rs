//! Bivariate polynomials on a single triangle or unit square, in Bernstein form.

use super::rational::{binomial, factorial, falling, int, serde_rational_vec, Rational};
use super::uni::{bernstein_basis, UniPoly};
use super::RatPolyError;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceKind {
    #[serde(alias = "Triangle", alias = "tri")]
    Triangle,
    #[serde(alias = "Quad", alias = "rectangle")]
    Quad,
}

impl FaceKind {
    pub fn corners(self) -> usize {
        match self {
            FaceKind::Triangle => 3,
            FaceKind::Quad => 4,
        }
    }

    /// 1 for triangles, 0 for quads.
    pub fn f_delta(self) -> usize {
        match self {
            FaceKind::Triangle => 1,
            FaceKind::Quad => 0,
        }
    }

    pub fn num_coeffs(self, k: usize) -> usize {
        match self {
            FaceKind::Triangle => (k + 1) * (k + 2) / 2,
            FaceKind::Quad => (k + 1) * (k + 1),
        }
    }

    pub fn contains(self, k: usize, i: usize, j: usize) -> bool {
        match self {
            FaceKind::Triangle => i + j <= k,
            FaceKind::Quad => i <= k && j <= k,
        }
    }

    /// Position of c_{i,j} in the serialized coefficient list.
    pub fn index(self, k: usize, i: usize, j: usize) -> usize {
        debug_assert!(self.contains(k, i, j));
        match self {
            FaceKind::Quad => j * (k + 1) + i,
            FaceKind::Triangle => {
                let t = i + j;
                t * (t + 1) / 2 + i
            }
        }
    }

    /// All (i, j) in serialization order.
    pub fn indices(self, k: usize) -> Vec<(usize, usize)> {
        match self {
            FaceKind::Quad => (0..=k).flat_map(|j| (0..=k).map(move |i| (i, j))).collect(),
            FaceKind::Triangle => (0..=k)
                .flat_map(|t| (0..=t).map(move |i| (i, t - i)))
                .collect(),
        }
    }

    /// Factor in front of the second difference in the cross derivative at a corner.
    pub fn cross_factor(self, k: usize) -> Rational {
        let k = k as i64;
        match self {
            FaceKind::Triangle => int(k * (k - 1)),
            FaceKind::Quad => int(k * k),
        }
    }

    /// Maps the index (a, b) of the frame attached to `corner` back to the face index (i, j).
    ///
    /// The frame of corner `c` has its first axis along slot `c` (leaving the corner) and its
    /// second axis along slot `c - 1` (traversed backwards), which is also the canonical
    /// frame of slot `c`.
    pub fn corner_to_face(self, k: usize, corner: usize, a: usize, b: usize) -> (usize, usize) {
        match (self, corner) {
            (FaceKind::Quad, 0) => (a, b),
            (FaceKind::Quad, 1) => (k - b, a),
            (FaceKind::Quad, 2) => (k - a, k - b),
            (FaceKind::Quad, 3) => (b, k - a),
            (FaceKind::Triangle, 0) => (a, b),
            (FaceKind::Triangle, 1) => (k - a - b, a),
            (FaceKind::Triangle, 2) => (b, k - a - b),
            _ => panic!("corner {corner} out of range for {self:?}"),
        }
    }

    /// Reference coordinates of a corner.
    pub fn corner_point(self, corner: usize) -> (Rational, Rational) {
        let (u, v) = match (self, corner) {
            (FaceKind::Quad, 0) | (FaceKind::Triangle, 0) => (0, 0),
            (FaceKind::Quad, 1) | (FaceKind::Triangle, 1) => (1, 0),
            (FaceKind::Quad, 2) => (1, 1),
            (FaceKind::Quad, 3) | (FaceKind::Triangle, 2) => (0, 1),
            _ => panic!("corner {corner} out of range for {self:?}"),
        };
        (int(u), int(v))
    }
}

/// Dense monomial table: `c[i][j]` multiplies u^i v^j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoPoly {
    pub c: Vec<Vec<Rational>>,
}

impl MonoPoly {
    pub fn zero(n: usize) -> Self {
        MonoPoly {
            c: vec![vec![Rational::zero(); n + 1]; n + 1],
        }
    }

    pub fn size(&self) -> usize {
        self.c.len()
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for row in self.c.iter().rev() {
            let mut inner = Rational::zero();
            for c in row.iter().rev() {
                inner = inner * v + c;
            }
            acc = acc * u + inner;
        }
        acc
    }

    pub fn du(&self) -> MonoPoly {
        let n = self.size();
        let mut out = MonoPoly {
            c: vec![vec![Rational::zero(); n]; n],
        };
        for i in 1..n {
            for j in 0..n {
                out.c[i - 1][j] = &self.c[i][j] * int(i as i64);
            }
        }
        out
    }

    pub fn dv(&self) -> MonoPoly {
        let n = self.size();
        let mut out = MonoPoly {
            c: vec![vec![Rational::zero(); n]; n],
        };
        for i in 0..n {
            for j in 1..n {
                out.c[i][j - 1] = &self.c[i][j] * int(j as i64);
            }
        }
        out
    }

    fn is_zero_beyond(&self, kind: FaceKind, k: usize) -> bool {
        for (i, row) in self.c.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() && !kind.contains(k, i, j) {
                    return false;
                }
            }
        }
        true
    }
}

/// Bernstein coefficients of a polynomial on one face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacePoly {
    pub kind: FaceKind,
    pub degree: usize,
    #[serde(with = "serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl FacePoly {
    pub fn zero(kind: FaceKind, k: usize) -> Self {
        FacePoly {
            kind,
            degree: k,
            coeffs: vec![Rational::zero(); kind.num_coeffs(k)],
        }
    }

    /// Coefficients in serialization order.
    pub fn from_coeffs(
        kind: FaceKind,
        k: usize,
        coeffs: Vec<Rational>,
    ) -> Result<Self, RatPolyError> {
        if coeffs.len() != kind.num_coeffs(k) {
            return Err(RatPolyError::CoefficientCount {
                expected: kind.num_coeffs(k),
                found: coeffs.len(),
            });
        }
        Ok(FacePoly {
            kind,
            degree: k,
            coeffs,
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.coeffs[self.kind.index(self.degree, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        let idx = self.kind.index(self.degree, i, j);
        self.coeffs[idx] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add_assign(&mut self, other: &FacePoly) {
        assert_eq!((self.kind, self.degree), (other.kind, other.degree));
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scaled(&self, s: &Rational) -> FacePoly {
        FacePoly {
            kind: self.kind,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn to_monomial(&self) -> MonoPoly {
        let k = self.degree;
        let mut out = MonoPoly::zero(k);
        match self.kind {
            FaceKind::Quad => {
                let basis: Vec<UniPoly> = (0..=k).map(|i| bernstein_basis(k, i)).collect();
                for (i, j) in self.kind.indices(k) {
                    let c = self.get(i, j);
                    if c.is_zero() {
                        continue;
                    }
                    for (p, bu) in basis[i].coeffs().iter().enumerate() {
                        for (q, bv) in basis[j].coeffs().iter().enumerate() {
                            out.c[p][q] += c * bu * bv;
                        }
                    }
                }
            }
            FaceKind::Triangle => {
                let kf = factorial(k);
                for (i, j) in self.kind.indices(k) {
                    let c = self.get(i, j);
                    if c.is_zero() {
                        continue;
                    }
                    let l = k - i - j;
                    let mult =
                        Rational::new(kf.clone(), factorial(i) * factorial(j) * factorial(l));
                    // (1-u-v)^l = sum (-1)^(p+q) l!/(p! q! (l-p-q)!) u^p v^q
                    for p in 0..=l {
                        for q in 0..=(l - p) {
                            let t = Rational::new(
                                factorial(l),
                                factorial(p) * factorial(q) * factorial(l - p - q),
                            );
                            let t = if (p + q) % 2 == 1 { -t } else { t };
                            out.c[i + p][j + q] += c * &mult * t;
                        }
                    }
                }
            }
        }
        out
    }

    /// Inverse of `to_monomial`; fails if the monomial support exceeds the face degree structure.
    pub fn from_monomial(kind: FaceKind, k: usize, m: &MonoPoly) -> Result<FacePoly, RatPolyError> {
        if !m.is_zero_beyond(kind, k) {
            return Err(RatPolyError::DegreeExceeded { kind, degree: k });
        }
        let mut out = FacePoly::zero(kind, k);
        for (a, row) in m.c.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (i, j) in kind.indices(k) {
                    if i < a || j < b {
                        continue;
                    }
                    let w = match kind {
                        FaceKind::Triangle => {
                            Rational::new(falling(i, a) * falling(j, b), falling(k, a + b))
                        }
                        FaceKind::Quad => Rational::new(
                            binomial(i, a) * binomial(j, b),
                            binomial(k, a) * binomial(k, b),
                        ),
                    };
                    let idx = kind.index(k, i, j);
                    out.coeffs[idx] += c * w;
                }
            }
        }
        Ok(out)
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        self.to_monomial().eval(u, v)
    }

    /// Same polynomial at degree k + 1.
    pub fn elevated(&self) -> FacePoly {
        FacePoly::from_monomial(self.kind, self.degree + 1, &self.to_monomial())
            .expect("degree elevation stays inside the face space")
    }

    /// Coefficient at index (a, b) of the frame attached to `corner`.
    pub fn get_in_corner(&self, corner: usize, a: usize, b: usize) -> &Rational {
        let (i, j) = self.kind.corner_to_face(self.degree, corner, a, b);
        self.get(i, j)
    }

    pub fn set_in_corner(&mut self, corner: usize, a: usize, b: usize, v: Rational) {
        let (i, j) = self.kind.corner_to_face(self.degree, corner, a, b);
        self.set(i, j, v);
    }

    /// The same polynomial written in the frame of `corner`.
    pub fn in_corner_frame(&self, corner: usize) -> FacePoly {
        let mut out = FacePoly::zero(self.kind, self.degree);
        for (a, b) in self.kind.indices(self.degree) {
            out.set(a, b, self.get_in_corner(corner, a, b).clone());
        }
        out
    }

    /// (f, f_u, f_v, f_uv) at `corner`, in that corner's frame.
    pub fn corner_jet(&self, corner: usize) -> [Rational; 4] {
        let k = self.degree;
        let c00 = self.get_in_corner(corner, 0, 0).clone();
        if k == 0 {
            return [c00, Rational::zero(), Rational::zero(), Rational::zero()];
        }
        let kk = int(k as i64);
        let c10 = self.get_in_corner(corner, 1, 0).clone();
        let c01 = self.get_in_corner(corner, 0, 1).clone();
        let c11 = if self.kind.contains(k, 1, 1) {
            self.get_in_corner(corner, 1, 1).clone()
        } else {
            Rational::zero()
        };
        let cross = self.kind.cross_factor(k) * (&c11 - &c10 - &c01 + &c00);
        [c00.clone(), &kk * (&c10 - &c00), &kk * (&c01 - &c00), cross]
    }

    /// Restriction `g` and transversal derivative `h` along the edge of `slot`,
    /// both in the canonical frame of that slot.
    pub fn edge_restriction(&self, slot: usize) -> (UniPoly, UniPoly) {
        let k = self.degree;
        let row0: Vec<Rational> = (0..=k)
            .map(|a| self.get_in_corner(slot, a, 0).clone())
            .collect();
        let g = UniPoly::from_bernstein(&row0);
        if k == 0 {
            return (g, UniPoly::zero());
        }
        let hk = k - self.kind.f_delta();
        let kk = int(k as i64);
        let diffs: Vec<Rational> = (0..=hk)
            .map(|a| &kk * (self.get_in_corner(slot, a, 1) - &row0[a]))
            .collect();
        (g, UniPoly::from_bernstein(&diffs))
    }

    /// Overwrites the two coefficient rows along `slot` so that the edge data become (g, h).
    pub fn set_edge_strip(
        &mut self,
        slot: usize,
        g: &UniPoly,
        h: &UniPoly,
    ) -> Result<(), RatPolyError> {
        let k = self.degree;
        let hk = k - self.kind.f_delta();
        let too_high = || RatPolyError::DegreeExceeded {
            kind: self.kind,
            degree: k,
        };
        let row0 = g.to_bernstein(k).ok_or_else(too_high)?;
        let hb = h.to_bernstein(hk).ok_or_else(too_high)?;
        let kk = int(k as i64);
        for (a, c) in row0.iter().enumerate() {
            self.set_in_corner(slot, a, 0, c.clone());
        }
        for (a, d) in hb.iter().enumerate() {
            self.set_in_corner(slot, a, 1, &row0[a] + d / &kk);
        }
        Ok(())
    }

    /// Partial derivatives (f, f_u, f_v) at a point given in face coordinates.
    pub fn value_and_gradient(&self, u: &Rational, v: &Rational) -> [Rational; 3] {
        let m = self.to_monomial();
        [m.eval(u, v), m.du().eval(u, v), m.dv().eval(u, v)]
    }
}

/// Constant polynomial 1 on a face, all Bernstein coefficients equal to one.
pub fn face_one(kind: FaceKind, k: usize) -> FacePoly {
    FacePoly::from_coeffs(kind, k, vec![Rational::one(); kind.num_coeffs(k)]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rational::frac;

    fn unit(kind: FaceKind, k: usize, i: usize, j: usize) -> FacePoly {
        let mut p = FacePoly::zero(kind, k);
        p.set(i, j, int(1));
        p
    }

    #[test]
    fn partition_of_unity() {
        for kind in [FaceKind::Triangle, FaceKind::Quad] {
            for k in 0..6 {
                let m = face_one(kind, k).to_monomial();
                let mut expect = MonoPoly::zero(k);
                expect.c[0][0] = int(1);
                assert_eq!(m, expect);
            }
        }
    }

    #[test]
    fn triangle_single_bernstein() {
        let m = unit(FaceKind::Triangle, 2, 0, 0).to_monomial();
        // (1-u-v)^2 = 1 - 2u - 2v + u^2 + 2uv + v^2
        assert_eq!(m.c[0][0], int(1));
        assert_eq!(m.c[1][0], int(-2));
        assert_eq!(m.c[0][1], int(-2));
        assert_eq!(m.c[2][0], int(1));
        assert_eq!(m.c[1][1], int(2));
        assert_eq!(m.c[0][2], int(1));
    }

    #[test]
    fn jets() {
        let t = unit(FaceKind::Triangle, 3, 0, 0);
        assert_eq!(t.corner_jet(0), [int(1), int(-3), int(-3), int(6)]);
        let q = unit(FaceKind::Quad, 4, 1, 1);
        assert_eq!(q.corner_jet(0), [int(0), int(0), int(0), int(16)]);
        let one = face_one(FaceKind::Quad, 3);
        for c in 0..4 {
            assert_eq!(one.corner_jet(c), [int(1), int(0), int(0), int(0)]);
        }
    }

    #[test]
    fn corner_frames_are_affine_reparametrisations() {
        // Evaluating the reindexed polynomial at the corner-frame point must agree
        // with the original evaluated at the mapped point.
        let pt = (frac(1, 5), frac(2, 7));
        for kind in [FaceKind::Triangle, FaceKind::Quad] {
            let k = 3;
            let mut p = FacePoly::zero(kind, k);
            for (n, (i, j)) in kind.indices(k).into_iter().enumerate() {
                p.set(i, j, frac(n as i64 * 3 - 7, (n % 4 + 1) as i64));
            }
            for corner in 0..kind.corners() {
                let q = p.in_corner_frame(corner);
                let (x, y) = pt.clone();
                let one = int(1);
                let (u, v) = match (kind, corner) {
                    (_, 0) => (x.clone(), y.clone()),
                    (FaceKind::Quad, 1) => (&one - &y, x.clone()),
                    (FaceKind::Quad, 2) => (&one - &x, &one - &y),
                    (FaceKind::Quad, 3) => (y.clone(), &one - &x),
                    (FaceKind::Triangle, 1) => (&one - &x - &y, x.clone()),
                    (FaceKind::Triangle, 2) => (y.clone(), &one - &x - &y),
                    _ => unreachable!(),
                };
                assert_eq!(q.eval(&x, &y), p.eval(&u, &v), "{kind:?} corner {corner}");
            }
        }
    }

    #[test]
    fn edge_strip_round_trip() {
        for kind in [FaceKind::Triangle, FaceKind::Quad] {
            let k = 4;
            let g = UniPoly::new(vec![frac(1, 2), int(3), int(-1)]);
            let h = UniPoly::new(vec![int(2), frac(-1, 3)]);
            for slot in 0..kind.corners() {
                let mut p = FacePoly::zero(kind, k);
                p.set_edge_strip(slot, &g, &h).unwrap();
                assert_eq!(p.edge_restriction(slot), (g.clone(), h.clone()));
            }
        }
    }

    #[test]
    fn monomial_inverse_rejects_excess_degree() {
        let mut m = MonoPoly::zero(3);
        m.c[2][2] = int(1);
        assert!(FacePoly::from_monomial(FaceKind::Triangle, 3, &m).is_err());
        assert!(FacePoly::from_monomial(FaceKind::Quad, 3, &m).is_ok());
    }

    #[test]
    fn elevation_preserves_values() {
        let mut p = FacePoly::zero(FaceKind::Triangle, 3);
        p.set(1, 1, int(5));
        p.set(0, 3, frac(-2, 3));
        let e = p.elevated();
        let (u, v) = (frac(1, 3), frac(1, 4));
        assert_eq!(p.eval(&u, &v), e.eval(&u, &v));
    }
}

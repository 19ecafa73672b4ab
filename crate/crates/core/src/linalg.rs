//! Exact linear algebra over the rationals.
//!
//! Small dense systems go through a reduced row echelon form over `Rational`. Large rank
//! computations (the brute-force oracle, independence of a basis) use fraction-free integer
//! elimination on sparse rows, keeping every row primitive to limit coefficient growth.

use crate::ratpoly::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][col];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel, one vector per free column (that entry set to 1).
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![None; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut out = Vec::new();
    for free in 0..ncols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][free].clone();
        }
        out.push(v);
    }
    out
}

/// Some solution of `rows * x = rhs` (free variables set to zero), or `None` if inconsistent.
pub fn solve(rows: &[Vec<Rational>], rhs: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][ncols].clone();
    }
    Some(x)
}

/// Row space basis in reduced echelon form (zero rows dropped).
pub fn row_echelon_basis(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    m.truncate(pivots.len());
    m
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut e = IntEchelon::new(ncols);
    for r in rows {
        e.insert_rational(r);
    }
    e.rank()
}

pub type SparseRow = Vec<(usize, BigInt)>;

/// Incremental fraction-free echelon form over the integers.
#[derive(Debug, Clone)]
pub struct IntEchelon {
    ncols: usize,
    pivots: Vec<Option<SparseRow>>,
    rank: usize,
}

impl IntEchelon {
    pub fn new(ncols: usize) -> Self {
        IntEchelon {
            ncols,
            pivots: vec![None; ncols],
            rank: 0,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Adds a dense rational row; returns true if it raised the rank.
    pub fn insert_rational(&mut self, row: &[Rational]) -> bool {
        let sparse: Vec<(usize, Rational)> = row
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        self.insert_sparse_rational(&sparse)
    }

    pub fn insert_sparse_rational(&mut self, row: &[(usize, Rational)]) -> bool {
        let den = row
            .iter()
            .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
        let mut ints: SparseRow = row
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (*i, x.numer() * (&den / x.denom())))
            .collect();
        ints.sort_by_key(|(i, _)| *i);
        self.insert(ints)
    }

    /// Adds an integer row (sorted by column); returns true if it raised the rank.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        make_primitive(&mut row);
        loop {
            let Some((lead, _)) = row.first() else {
                return false;
            };
            let lead = *lead;
            match &self.pivots[lead] {
                Some(p) => {
                    row = eliminate(&row, p);
                }
                None => {
                    if row[0].1.is_negative() {
                        for (_, x) in row.iter_mut() {
                            *x = -&*x;
                        }
                    }
                    self.pivots[lead] = Some(row);
                    self.rank += 1;
                    return true;
                }
            }
        }
    }

    /// True if the row lies in the span of the rows inserted so far.
    pub fn contains_rational(&self, row: &[Rational]) -> bool {
        let mut copy = self.clone();
        !copy.insert_rational(row)
    }
}

/// `a_lead * row - row_lead * pivot`, divided by common factors; the leading entry cancels.
fn eliminate(row: &SparseRow, pivot: &SparseRow) -> SparseRow {
    let a = &pivot[0].1;
    let b = &row[0].1;
    let g = a.gcd(b);
    let fa = a / &g;
    let fb = b / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        let (col, val) = if ci < cj {
            let v = &fa * &row[i].1;
            i += 1;
            (ci, v)
        } else if cj < ci {
            let v = -(&fb * &pivot[j].1);
            j += 1;
            (cj, v)
        } else {
            let v = &fa * &row[i].1 - &fb * &pivot[j].1;
            i += 1;
            j += 1;
            (ci, v)
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut SparseRow) {
    row.retain(|(_, x)| !x.is_zero());
    let g = row.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

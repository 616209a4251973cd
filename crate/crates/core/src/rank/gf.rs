//! Finite fields GF(p^k) and dense matrices over them.
//!
//! Elements are integers in `0..q`; for `k > 1` an element's base-`p` digits
//! are the coefficients of a polynomial reduced modulo a fixed irreducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_FIELD_ORDER: u32 = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    q: u32,
    p: u32,
    k: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Product of two polynomials over GF(p), reduced modulo a monic `modulus`
/// of degree `k` (given by its `k` low coefficients).
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len();
    let mut prod = vec![0u32; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        // x^k ≡ −Σ modulus[i] x^i
        for (i, &m) in modulus.iter().enumerate() {
            let t = deg - k + i;
            prod[t] = (prod[t] + (p - (c * m) % p)) % p;
        }
    }
    prod.truncate(k);
    prod
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::InvalidArgument(format!("field order {q} is not a prime power")))?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::InvalidArgument(format!("field order {q} above {MAX_FIELD_ORDER}")));
        }
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        if k == 1 {
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = (a + b) % p;
                    mul[(a * q + b) as usize] = (a * b) % p;
                }
            }
        } else {
            let modulus = Self::irreducible(p, k);
            for a in 0..q {
                let da = digits(a, p, k);
                for b in 0..q {
                    let db = digits(b, p, k);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    add[(a * q + b) as usize] = undigits(&s, p);
                    mul[(a * q + b) as usize] = undigits(&poly_mulmod(&da, &db, &modulus, p), p);
                }
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap()).collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap() })
            .collect();
        Ok(Self { q, p, k, add, mul, neg, inv })
    }

    /// Low coefficients of the first monic degree-`k` polynomial with no
    /// monic factor of degree `1..=k/2`.
    fn irreducible(p: u32, k: u32) -> Vec<u32> {
        let q = p.pow(k);
        'cand: for low in 0..q {
            let cand = digits(low, p, k);
            if cand[0] == 0 {
                continue;
            }
            for d in 1..=k / 2 {
                for flow in 0..p.pow(d) {
                    let mut f = digits(flow, p, d);
                    f.push(1);
                    if poly_divides(&f, &cand, p) {
                        continue 'cand;
                    }
                }
            }
            return cand;
        }
        unreachable!("irreducible polynomials exist for every degree")
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg[b as usize])
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }
}

/// Whether monic `f` divides the monic polynomial `x^k + Σ g[i] x^i`.
fn poly_divides(f: &[u32], g_low: &[u32], p: u32) -> bool {
    let mut r: Vec<u32> = g_low.to_vec();
    r.push(1);
    let df = f.len() - 1;
    while r.len() > df {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - df;
        if lead != 0 {
            for (i, &c) in f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

/// Dense row-major matrix over a field, entries in `0..q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, row_lists: &[Vec<u32>]) -> Result<Self> {
        if row_lists.len() != rows || row_lists.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape(format!("expected a {rows}x{cols} matrix")));
        }
        Ok(Self { rows, cols, data: row_lists.concat() })
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec()).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn check_entries(&self, field: &Field) -> Result<()> {
        if self.data.iter().any(|&x| x >= field.order()) {
            return Err(Error::InvalidArgument(format!("matrix entry outside GF({})", field.order())));
        }
        Ok(())
    }

    /// Horizontal concatenation; all parts need the same row count.
    pub fn hconcat(rows: usize, parts: &[&Matrix]) -> Result<Matrix> {
        if parts.iter().any(|m| m.rows != rows) {
            return Err(Error::Shape("row counts differ in concatenation".into()));
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut off = 0;
        for m in parts {
            for r in 0..rows {
                for c in 0..m.cols {
                    out.set(r, off + c, m.get(r, c));
                }
            }
            off += m.cols;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix, field: &Field) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape("inner dimensions differ".into()));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = field.add(out.get(r, c), field.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, x: &[u32], field: &Field) -> Vec<u32> {
        let mut y = vec![0; self.cols];
        for (k, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (c, yc) in y.iter_mut().enumerate() {
                *yc = field.add(*yc, field.mul(a, self.get(k, c)));
            }
        }
        y
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self, field: &Field) -> usize {
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| m[r * cols + c] != 0) else { continue };
            for k in 0..cols {
                m.swap(piv * cols + k, rank * cols + k);
            }
            let inv = field.inv(m[rank * cols + c]);
            for k in 0..cols {
                m[rank * cols + k] = field.mul(m[rank * cols + k], inv);
            }
            for r in 0..rows {
                let f = m[r * cols + c];
                if r == rank || f == 0 {
                    continue;
                }
                for k in 0..cols {
                    let v = field.sub(m[r * cols + k], field.mul(f, m[rank * cols + k]));
                    m[r * cols + k] = v;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn reduce(m: &mut [u32], rows: usize, cols: usize, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        for c in 0..cols {
            let rank = pivots.len();
            if rank == rows {
                break;
            }
            let Some(piv) = (rank..rows).find(|&r| m[r * cols + c] != 0) else { continue };
            for k in 0..cols {
                m.swap(piv * cols + k, rank * cols + k);
            }
            let inv = field.inv(m[rank * cols + c]);
            for k in 0..cols {
                m[rank * cols + k] = field.mul(m[rank * cols + k], inv);
            }
            for r in 0..rows {
                let f = m[r * cols + c];
                if r == rank || f == 0 {
                    continue;
                }
                for k in 0..cols {
                    m[r * cols + k] = field.sub(m[r * cols + k], field.mul(f, m[rank * cols + k]));
                }
            }
            pivots.push(c);
        }
        pivots
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Some `X` with `self · X = rhs`, free unknowns set to zero.
    pub fn solve_right(&self, rhs: &Matrix, field: &Field) -> Option<Matrix> {
        if rhs.rows != self.rows {
            return None;
        }
        let joined = Matrix::hconcat(self.rows, &[self, rhs]).ok()?;
        let cols = joined.cols;
        let mut m = joined.data;
        let pivots = Self::reduce(&mut m, self.rows, cols, field);
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for k in 0..rhs.cols {
                x.set(c, k, m[r * cols + self.cols + k]);
            }
        }
        Some(x)
    }

    /// Canonical basis of the column space: the transposed reduced row
    /// echelon form of `selfᵀ`, zero columns dropped. Two matrices span the
    /// same column space iff their canonical bases are equal.
    pub fn column_space(&self, field: &Field) -> Matrix {
        let t = self.transpose();
        let mut m = t.data;
        let rank = Self::reduce(&mut m, t.rows, t.cols, field).len();
        let basis = Matrix { rows: rank, cols: t.cols, data: m[..rank * t.cols].to_vec() };
        basis.transpose()
    }

    /// Whether every column of `self` lies in the column span of `space`.
    pub fn columns_in_span_of(&self, space: &Matrix, field: &Field) -> Result<bool> {
        let joined = Matrix::hconcat(space.rows, &[space, self])?;
        Ok(joined.rank(field) == space.rank(field))
    }
}

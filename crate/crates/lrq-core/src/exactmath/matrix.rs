use std::fmt;

use super::cyclotomic::CycNum;
use super::{lcm_u64, Rational, CONDUCTOR_CAP};
use crate::error::{Error, Result};

/// Dense matrix over a cyclotomic field; all entries share one conductor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    conductor: u64,
    entries: Vec<CycNum>, // row-major
}

impl CycMatrix {
    /// Build from entries of possibly mixed conductor; everything is promoted
    /// to the least common conductor (capped).
    pub fn new(rows: usize, cols: usize, entries: Vec<CycNum>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::BadInput(format!(
                "matrix needs {rows}x{cols} = {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let mut m = 1u64;
        for e in &entries {
            m = lcm_u64(m, e.conductor());
            if m > CONDUCTOR_CAP {
                return Err(Error::ConductorCapExceeded(m));
            }
        }
        let entries = entries
            .into_iter()
            .map(|e| e.promote(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix {
            rows,
            cols,
            conductor: m,
            entries,
        })
    }

    pub fn identity(d: usize, conductor: u64) -> Self {
        let mut entries = vec![CycNum::zero(conductor); d * d];
        for i in 0..d {
            entries[i * d + i] = CycNum::one(conductor);
        }
        CycMatrix {
            rows: d,
            cols: d,
            conductor,
            entries,
        }
    }

    /// Square diagonal matrix from the given entries.
    pub fn diagonal(diag: Vec<CycNum>) -> Result<Self> {
        let d = diag.len();
        let mut m = CycMatrix::new(1, d, diag)?;
        let conductor = m.conductor;
        let mut entries = vec![CycNum::zero(conductor); d * d];
        for i in 0..d {
            entries[i * d + i] = std::mem::replace(&mut m.entries[i], CycNum::zero(conductor));
        }
        Ok(CycMatrix {
            rows: d,
            cols: d,
            conductor,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn at(&self, r: usize, c: usize) -> &CycNum {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(k, e)| k / self.cols == k % self.cols || e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.entries.iter().enumerate().all(|(k, e)| {
                if k / self.cols == k % self.cols {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
    }

    pub fn promote(&self, m2: u64) -> Result<CycMatrix> {
        if m2 > CONDUCTOR_CAP {
            return Err(Error::ConductorCapExceeded(m2));
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.promote(m2))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: m2,
            entries,
        })
    }

    fn unified(&self, other: &CycMatrix) -> Result<(CycMatrix, CycMatrix)> {
        if self.conductor == other.conductor {
            return Ok((self.clone(), other.clone()));
        }
        let m = lcm_u64(self.conductor, other.conductor);
        if m > CONDUCTOR_CAP {
            return Err(Error::ConductorCapExceeded(m));
        }
        Ok((self.promote(m)?, other.promote(m)?))
    }

    pub fn mul(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.cols != other.rows {
            return Err(Error::BadInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, b) = self.unified(other)?;
        let m = a.conductor;
        let mut entries = Vec::with_capacity(a.rows * b.cols);
        for r in 0..a.rows {
            for c in 0..b.cols {
                let mut acc = CycNum::zero(m);
                for k in 0..a.cols {
                    let x = a.at(r, k);
                    if x.is_zero() {
                        continue;
                    }
                    let y = b.at(k, c);
                    if y.is_zero() {
                        continue;
                    }
                    acc = acc.add(&x.mul(y));
                }
                entries.push(acc);
            }
        }
        Ok(CycMatrix {
            rows: a.rows,
            cols: b.cols,
            conductor: m,
            entries,
        })
    }

    pub fn add(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::BadInput("shape mismatch in matrix addition".into()));
        }
        let (a, b) = self.unified(other)?;
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x.add(y))
            .collect();
        Ok(CycMatrix {
            rows: a.rows,
            cols: a.cols,
            conductor: a.conductor,
            entries,
        })
    }

    pub fn sub(&self, other: &CycMatrix) -> Result<CycMatrix> {
        self.add(&other.scale_rational(&Rational::from(num::BigInt::from(-1))))
    }

    pub fn scale(&self, s: &CycNum) -> Result<CycMatrix> {
        let m = lcm_u64(self.conductor, s.conductor());
        if m > CONDUCTOR_CAP {
            return Err(Error::ConductorCapExceeded(m));
        }
        let s = s.promote(m)?;
        let entries = self
            .entries
            .iter()
            .map(|e| Ok(e.promote(m)?.mul(&s)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: m,
            entries,
        })
    }

    pub fn scale_rational(&self, q: &Rational) -> CycMatrix {
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: self.conductor,
            entries: self.entries.iter().map(|e| e.scale(q)).collect(),
        }
    }

    pub fn trace(&self) -> CycNum {
        let mut t = CycNum::zero(self.conductor);
        for i in 0..self.rows.min(self.cols) {
            t = t.add(self.at(i, i));
        }
        t
    }

    pub fn block_diagonal(&self, other: &CycMatrix) -> Result<CycMatrix> {
        let (a, b) = self.unified(other)?;
        let rows = a.rows + b.rows;
        let cols = a.cols + b.cols;
        let mut entries = vec![CycNum::zero(a.conductor); rows * cols];
        for r in 0..a.rows {
            for c in 0..a.cols {
                entries[r * cols + c] = a.at(r, c).clone();
            }
        }
        for r in 0..b.rows {
            for c in 0..b.cols {
                entries[(a.rows + r) * cols + (a.cols + c)] = b.at(r, c).clone();
            }
        }
        Ok(CycMatrix {
            rows,
            cols,
            conductor: a.conductor,
            entries,
        })
    }

    /// Exact rank. Diagonal matrices short-circuit to a pivot count; square
    /// matrices up to 3x3 use division-free minor tests; everything else
    /// falls back to Gaussian elimination over the field.
    pub fn rank(&self) -> usize {
        if self.is_diagonal() {
            return (0..self.rows.min(self.cols))
                .filter(|&i| !self.at(i, i).is_zero())
                .count();
        }
        if self.is_square() && self.rows <= 3 {
            return self.rank_by_minors();
        }
        let mut w: Vec<Vec<CycNum>> = (0..self.rows)
            .map(|r| self.entries[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect();
        let mut rank = 0usize;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !w[r][col].is_zero()) else {
                continue;
            };
            w.swap(rank, p);
            let inv = w[rank][col].invert().expect("pivot is nonzero");
            for c in col..self.cols {
                w[rank][c] = w[rank][c].mul(&inv);
            }
            for r in rank + 1..self.rows {
                if !w[r][col].is_zero() {
                    let f = w[r][col].clone();
                    for c in col..self.cols {
                        let t = f.mul(&w[rank][c]);
                        w[r][c] = w[r][c].sub(&t);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn minor2(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> CycNum {
        self.at(r0, c0)
            .mul(self.at(r1, c1))
            .sub(&self.at(r0, c1).mul(self.at(r1, c0)))
    }

    /// Division-free rank for square matrices of size <= 3: highest order of
    /// a nonvanishing minor.
    fn rank_by_minors(&self) -> usize {
        let d = self.rows;
        if self.entries.iter().all(|e| e.is_zero()) {
            return 0;
        }
        if d == 1 {
            return 1;
        }
        if d == 2 {
            return if self.minor2(0, 1, 0, 1).is_zero() { 1 } else { 2 };
        }
        if !self.det_cofactor3().is_zero() {
            return 3;
        }
        for rows in [(0, 1), (0, 2), (1, 2)] {
            for cols in [(0, 1), (0, 2), (1, 2)] {
                if !self.minor2(rows.0, rows.1, cols.0, cols.1).is_zero() {
                    return 2;
                }
            }
        }
        1
    }

    fn det_cofactor3(&self) -> CycNum {
        let m = |r: usize, c: usize| self.at(r, c);
        let t1 = m(0, 0).mul(&self.minor2(1, 2, 1, 2));
        let t2 = m(0, 1).mul(&self.minor2(1, 2, 0, 2));
        let t3 = m(0, 2).mul(&self.minor2(1, 2, 0, 1));
        t1.sub(&t2).add(&t3)
    }

    /// Exact determinant (square matrices), reduced to a canonical CycNum.
    /// Sizes up to 3 expand cofactors (division-free); larger matrices use
    /// elimination with exact division.
    pub fn det(&self) -> Result<CycNum> {
        if !self.is_square() {
            return Err(Error::BadInput("determinant of a non-square matrix".into()));
        }
        let d = self.rows;
        if self.is_diagonal() {
            let mut acc = CycNum::one(self.conductor);
            for i in 0..d {
                acc = acc.mul(self.at(i, i));
            }
            return Ok(acc);
        }
        match d {
            1 => return Ok(self.at(0, 0).clone()),
            2 => return Ok(self.minor2(0, 1, 0, 1)),
            3 => return Ok(self.det_cofactor3()),
            _ => {}
        }
        let mut w: Vec<Vec<CycNum>> = (0..d)
            .map(|r| self.entries[r * d..(r + 1) * d].to_vec())
            .collect();
        let mut det = CycNum::one(self.conductor);
        for col in 0..d {
            let Some(p) = (col..d).find(|&r| !w[r][col].is_zero()) else {
                return Ok(CycNum::zero(self.conductor));
            };
            if p != col {
                w.swap(col, p);
                det = det.neg();
            }
            let pivot = w[col][col].clone();
            det = det.mul(&pivot);
            let inv = pivot.invert().expect("pivot is nonzero");
            for r in col + 1..d {
                if !w[r][col].is_zero() {
                    let f = w[r][col].mul(&inv);
                    for c in col..d {
                        let t = f.mul(&w[col][c]);
                        w[r][c] = w[r][c].sub(&t);
                    }
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CycMatrix {}x{} over Q(zeta_{})", self.rows, self.cols, self.conductor)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::root_of_unity;

    fn diag2(a: CycNum, b: CycNum) -> CycMatrix {
        CycMatrix::diagonal(vec![a, b]).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(CycMatrix::identity(2, 1).rank(), 2);
        let z = CycMatrix::new(2, 2, vec![CycNum::zero(1); 4]).unwrap();
        assert_eq!(z.rank(), 0);
        // diag(z5, z5^2) - I has two nonzero pivots
        let m = diag2(root_of_unity(5, 1), root_of_unity(5, 2));
        let diff = m.sub(&CycMatrix::identity(2, 5)).unwrap();
        assert!(!diff.at(0, 0).is_zero() && !diff.at(1, 1).is_zero());
        assert_eq!(diff.rank(), 2);
    }

    #[test]
    fn determinants_of_catalog_generators() {
        // [[0, z4], [z4, 0]] has determinant -z4^2 = 1
        let z4 = root_of_unity(4, 1);
        let m = CycMatrix::new(
            2,
            2,
            vec![CycNum::zero(4), z4.clone(), z4.clone(), CycNum::zero(4)],
        )
        .unwrap();
        assert!(m.det().unwrap().is_one());
        // the binary tetrahedral extra generator lands in SL2
        let z8 = |k| root_of_unity(8, k);
        let sqrt2_inv = z8(1).add(&z8(7)).invert().unwrap();
        let bt = CycMatrix::new(2, 2, vec![z8(7), z8(7), z8(5), z8(1)])
            .unwrap()
            .scale(&sqrt2_inv)
            .unwrap();
        assert!(bt.det().unwrap().is_one());
    }

    #[test]
    fn mixed_conductor_products_promote() {
        let a = diag2(root_of_unity(4, 1), root_of_unity(4, 3));
        let b = diag2(root_of_unity(3, 1), root_of_unity(3, 2));
        let p = a.mul(&b).unwrap();
        assert_eq!(p.conductor(), 12);
        assert_eq!(*p.at(0, 0), root_of_unity(12, 3).mul(&root_of_unity(12, 4)));
    }

    #[test]
    fn conductor_cap_is_enforced() {
        let a = CycNum::one(2520);
        let b = root_of_unity(11, 1);
        let err = CycMatrix::new(1, 2, vec![a, b]).unwrap_err();
        assert!(matches!(err, Error::ConductorCapExceeded(_)));
    }
}

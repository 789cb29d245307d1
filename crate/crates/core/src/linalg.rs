//! Dense matrices over a word-sized prime field, row-vector convention.

use crate::arith::modp::{inv_mod_u64, pow_mod_u64};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, o: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, o.rows);
        let p = self.p as u128;
        let mut out = Self::zeros(self.p, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = (out.get(i, j) as u128 + a as u128 * o.get(k, j) as u128) % p;
                    out.set(i, j, v as u64);
                }
            }
        }
        out
    }

    /// `v * self` for a row vector `v`.
    pub fn apply_row(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        let p = self.p as u128;
        let mut out = vec![0u64; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = ((*o as u128 + a as u128 * self.get(i, j) as u128) % p) as u64;
            }
        }
        out
    }

    /// `self - c * I`.
    pub fn minus_scalar(&self, c: u64) -> FpMatrix {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let c = c % self.p;
        for i in 0..self.rows {
            m.set(i, i, (m.get(i, i) + self.p - c) % self.p);
        }
        m
    }

    /// Horizontal concatenation.
    pub fn hconcat(&self, o: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, o.rows);
        let mut m = Self::zeros(self.p, self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j));
            }
        }
        m
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod_u64(self.get(r, c), p).expect("nonzero pivot");
            for j in c..self.cols {
                let v = (self.get(r, j) as u128 * inv as u128 % p as u128) as u64;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let sub = (f as u128 * self.get(r, j) as u128 % p as u128) as u64;
                    self.set(i, j, (self.get(i, j) + p - sub) % p);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis (as rows) of `{x : self * x^T = 0}`.
    pub fn right_kernel(&self) -> FpMatrix {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.p, free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                let v = m.get(r, f);
                out.set(k, pc, (self.p - v) % self.p);
            }
        }
        out
    }

    /// Basis (as rows) of `{v : v * self = 0}`.
    pub fn left_kernel(&self) -> FpMatrix {
        self.transpose().right_kernel()
    }

    /// Determinant by elimination.
    pub fn det(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        let p = self.p;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = 1u64;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return 0;
            };
            if piv != c {
                for j in 0..n {
                    m.data.swap(piv * n + j, c * n + j);
                }
                det = (p - det) % p;
            }
            let pv = m.get(c, c);
            det = (det as u128 * pv as u128 % p as u128) as u64;
            let inv = inv_mod_u64(pv, p).unwrap();
            for i in c + 1..n {
                let f = (m.get(i, c) as u128 * inv as u128 % p as u128) as u64;
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    let sub = (f as u128 * m.get(c, j) as u128 % p as u128) as u64;
                    m.set(i, j, (m.get(i, j) + p - sub) % p);
                }
            }
        }
        det
    }

    /// Characteristic polynomial det(xI - M), constant term first, by
    /// evaluating at n+1 points and interpolating (needs p > n).
    pub fn charpoly(&self) -> Vec<u64> {
        let n = self.rows;
        let p = self.p;
        assert!(p as usize > n, "interpolation needs more field elements");
        let xs: Vec<u64> = (0..=n as u64).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| {
                let m = self.minus_scalar(x);
                // det(xI - M) = (-1)^n det(M - xI)
                let d = m.det();
                if n % 2 == 1 {
                    (p - d) % p
                } else {
                    d
                }
            })
            .collect();
        lagrange(&xs, &ys, p)
    }
}

fn lagrange(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mulm = |a: u64, b: u64| (a as u128 * b as u128 % p as u128) as u64;
    let mut out = vec![0u64; n];
    for i in 0..n {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut num = vec![1u64];
        let mut den = 1u64;
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![0u64; num.len() + 1];
            for (k, &c) in num.iter().enumerate() {
                next[k + 1] = (next[k + 1] + c) % p;
                next[k] = (next[k] + p - mulm(c, xs[j] % p)) % p;
            }
            num = next;
            den = mulm(den, (xs[i] + p - xs[j] % p) % p);
        }
        let scale = mulm(ys[i], pow_mod_u64(den, p - 2, p));
        for (k, &c) in num.iter().enumerate() {
            out[k] = (out[k] + mulm(c, scale)) % p;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank() {
        let m = FpMatrix::from_rows(7, 3, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.right_kernel();
        assert_eq!(k.rows, 1);
        let v = k.row(0);
        for i in 0..3 {
            let s: u64 = (0..3).map(|j| m.get(i, j) * v[j]).sum::<u64>() % 7;
            assert_eq!(s, 0);
        }
        let lk = m.left_kernel();
        assert_eq!(lk.rows, 1);
        assert!(m.apply_row(lk.row(0)).iter().all(|&x| x == 0));
    }

    #[test]
    fn charpoly_of_companion() {
        // companion of x^2 + 3x + 5 over F_11
        let m = FpMatrix::from_rows(11, 2, &[vec![0, 1], vec![11 - 5, 11 - 3]]);
        assert_eq!(m.charpoly(), vec![5, 3, 1]);
        assert_eq!(m.det(), 5);
    }
}

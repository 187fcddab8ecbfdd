use serde::{Deserialize, Serialize};

use super::residue::Prime;

/// A dense matrix over `F_p`. Column `j` of a linear map's matrix is the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<u64>>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p: p.get(),
            rows,
            cols,
            data: vec![vec![0; cols]; rows],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i][i] = 1 % m.p;
        }
        m
    }

    /// Build from the images of basis vectors (each image becomes a column).
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m.data[i][j] = c[i] % m.p;
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.data[i][j]).collect()
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i]
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (a, b)| (acc + a * b) % self.p)
            })
            .collect()
    }

    pub fn compose(&self, right: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, right.rows);
        let cols: Vec<Vec<u64>> = (0..right.cols).map(|j| self.apply(&right.column(j))).collect();
        let mut out = FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: right.cols,
            data: vec![vec![0; right.cols]; self.rows],
        };
        for (j, c) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out.data[i][j] = c[i];
            }
        }
        out
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] = (self.data[i][j] + self.p - other.data[i][j]) % self.p;
            }
        }
        out
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut data = vec![vec![0; self.rows]; self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                data[j][i] = *v;
            }
        }
        FpMatrix {
            p: self.p,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.data[i][j] == u64::from(i == j)))
    }

    /// Reduced row echelon form and pivot columns (leftmost pivot per row).
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(src) = (r..m.rows).find(|&i| m.data[i][c] != 0) else {
                continue;
            };
            m.data.swap(r, src);
            let inv = inv_mod(m.data[r][c], p);
            for v in m.data[r].iter_mut() {
                *v = *v * inv % p;
            }
            for i in 0..m.rows {
                if i != r && m.data[i][c] != 0 {
                    let f = m.data[i][c];
                    for j in 0..m.cols {
                        m.data[i][j] = (m.data[i][j] + p * p - f * m.data[r][j]) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Inverse of a square matrix, if invertible.
    pub fn inverse(&self) -> Option<FpMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FpMatrix {
            p: self.p,
            rows: n,
            cols: 2 * n,
            data: self
                .data
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut r = row.clone();
                    r.extend((0..n).map(|j| u64::from(i == j)));
                    r
                })
                .collect(),
        };
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        aug.data = r.data.into_iter().map(|row| row[n..].to_vec()).collect();
        aug.cols = n;
        Some(aug)
    }

    pub fn pow(&self, mut e: u32) -> FpMatrix {
        let p = Prime::new(self.p).expect("matrix modulus is prime");
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column, in increasing free-column order.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - m.data[row][f]) % p;
                }
                v
            })
            .collect()
    }

    /// Row-reduced basis of the column space.
    pub fn image(&self) -> Vec<Vec<u64>> {
        span_basis(self.p, self.rows, &(0..self.cols).map(|j| self.column(j)).collect::<Vec<_>>())
    }

    /// Standard basis vectors completing the column space to the whole space,
    /// chosen greedily in index order. Their classes form a basis of the cokernel.
    pub fn cokernel(&self) -> Vec<Vec<u64>> {
        complement_basis(self.p, self.rows, &self.image())
    }
}

/// Row-reduced basis (rref rows) of the span of `vectors` in `F_p^dim`.
pub fn span_basis(p: u64, dim: usize, vectors: &[Vec<u64>]) -> Vec<Vec<u64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = FpMatrix {
        p,
        rows: vectors.len(),
        cols: dim,
        data: vectors.iter().map(|v| v.iter().map(|x| x % p).collect()).collect(),
    };
    let (r, pivots) = m.rref();
    r.data.into_iter().take(pivots.len()).collect()
}

/// Standard basis vectors `e_i` (in increasing `i`) that extend `basis` to all of `F_p^dim`.
pub fn complement_basis(p: u64, dim: usize, basis: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut current: Vec<Vec<u64>> = basis.to_vec();
    let mut rank = span_basis(p, dim, &current).len();
    let mut out = Vec::new();
    for i in 0..dim {
        let mut e = vec![0; dim];
        e[i] = 1;
        current.push(e.clone());
        let r = span_basis(p, dim, &current).len();
        if r > rank {
            rank = r;
            out.push(e);
        } else {
            current.pop();
        }
    }
    out
}

/// Coordinates of `v` in terms of the linearly independent `basis`, if `v` lies in its span.
pub fn coordinates(p: u64, basis: &[Vec<u64>], v: &[u64]) -> Option<Vec<u64>> {
    let dim = v.len();
    let k = basis.len();
    // augmented system: sum_j c_j basis_j = v
    let mut aug = FpMatrix {
        p,
        rows: dim,
        cols: k + 1,
        data: vec![vec![0; k + 1]; dim],
    };
    for i in 0..dim {
        for (j, b) in basis.iter().enumerate() {
            aug.data[i][j] = b[i] % p;
        }
        aug.data[i][k] = v[i] % p;
    }
    let (r, pivots) = aug.rref();
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![0; k];
    for (row, &pc) in pivots.iter().enumerate() {
        c[pc] = r.data[row][k];
    }
    Some(c)
}

/// Decompose `v` against a subspace basis and a complement: returns the complement
/// coordinates, i.e. the class of `v` in the quotient.
pub fn quotient_coordinates(p: u64, sub: &[Vec<u64>], complement: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
    let mut all = complement.to_vec();
    all.extend(sub.iter().cloned());
    let c = coordinates(p, &all, v).expect("subspace and complement span the space");
    c[..complement.len()].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Prime {
        Prime::new(2).unwrap()
    }

    #[test]
    fn zero_and_identity() {
        let z = FpMatrix::zeros(p2(), 2, 2);
        assert_eq!(z.kernel().len(), 2);
        assert_eq!(z.cokernel().len(), 2);
        let id = FpMatrix::identity(p2(), 2);
        assert!(id.kernel().is_empty());
        assert!(id.cokernel().is_empty());
    }

    #[test]
    fn frobenius_minus_one_on_f4() {
        // Frob on F_4 in basis {1, w}: 1 -> 1, w -> w + 1
        let frob = FpMatrix::from_columns(p2(), 2, &[vec![1, 0], vec![1, 1]]);
        let m = frob.sub(&FpMatrix::identity(p2(), 2));
        assert_eq!(m.kernel(), vec![vec![1, 0]]);
        assert_eq!(m.cokernel().len(), 1);
        // brute force: fixed points of a -> a^2 among the 4 elements
        let fixed: Vec<_> = (0..4u64)
            .map(|i| vec![i & 1, i >> 1])
            .filter(|v| frob.apply(v) == *v)
            .collect();
        assert_eq!(fixed.len(), 2);
    }

    #[test]
    fn rank_nullity_mod_3() {
        let p = Prime::new(3).unwrap();
        let m = FpMatrix::from_columns(p, 3, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]);
        assert_eq!(m.rank() + m.kernel().len(), 3);
        for k in m.kernel() {
            assert!(m.apply(&k).iter().all(|x| *x == 0));
        }
        assert_eq!(m.image().len() + m.cokernel().len(), 3);
    }

    #[test]
    fn inverse_round_trip() {
        let p = Prime::new(3).unwrap();
        let m = FpMatrix::from_columns(p, 2, &[vec![1, 2], vec![2, 2]]);
        let inv = m.inverse().unwrap();
        assert!(m.compose(&inv).is_identity());
        assert!(FpMatrix::zeros(p, 2, 2).inverse().is_none());
    }

    #[test]
    fn coordinates_solve() {
        let basis = vec![vec![1, 1, 0], vec![0, 1, 1]];
        assert_eq!(coordinates(2, &basis, &[1, 0, 1]), Some(vec![1, 1]));
        assert_eq!(coordinates(2, &basis, &[1, 0, 0]), None);
    }
}

use serde::{Deserialize, Serialize};

use super::linalg::FpMatrix;
use super::residue::Prime;
use super::ring::{CommRing, FiniteRing};
use crate::error::{Error, Result};

/// Element enumeration is exhaustive up to this many elements.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 12;

/// A finite-dimensional commutative `F_p`-algebra given by structure constants.
///
/// `sc[i][j][k]` is the coefficient of basis element `k` in `x_i * x_j`.
/// Elements are coordinate vectors of length `dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AlgebraRepr", into = "AlgebraRepr")]
pub struct FiniteFpAlgebra {
    p: Prime,
    labels: Vec<String>,
    sc: Vec<Vec<Vec<u64>>>,
    unit: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    p: u64,
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    unit: Vec<u64>,
    sc: Vec<Vec<Vec<u64>>>,
}

impl TryFrom<AlgebraRepr> for FiniteFpAlgebra {
    type Error = Error;

    fn try_from(r: AlgebraRepr) -> Result<Self> {
        let p = Prime::new(r.p)?;
        let labels = r
            .labels
            .unwrap_or_else(|| (0..r.dim).map(|i| format!("e{i}")).collect());
        if labels.len() != r.dim {
            return Err(Error::InvalidAlgebra("label count differs from dim".into()));
        }
        FiniteFpAlgebra::new(p, labels, r.sc, r.unit)
    }
}

impl From<FiniteFpAlgebra> for AlgebraRepr {
    fn from(a: FiniteFpAlgebra) -> Self {
        AlgebraRepr {
            p: a.p.get(),
            dim: a.dim(),
            labels: Some(a.labels),
            unit: a.unit,
            sc: a.sc,
        }
    }
}

impl FiniteFpAlgebra {
    /// Validate shape, entry range, commutativity, associativity on basis
    /// triples, and that `unit` acts as the identity.
    pub fn new(p: Prime, labels: Vec<String>, sc: Vec<Vec<Vec<u64>>>, unit: Vec<u64>) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        let shape_ok = sc.len() == dim
            && sc.iter().all(|row| row.len() == dim && row.iter().all(|v| v.len() == dim))
            && unit.len() == dim;
        if !shape_ok {
            return Err(Error::InvalidAlgebra(format!("structure constants must be {dim}x{dim}x{dim}")));
        }
        let pv = p.get();
        if sc.iter().flatten().flatten().chain(unit.iter()).any(|c| *c >= pv) {
            return Err(Error::InvalidAlgebra(format!("entries must lie in [0, {pv})")));
        }
        let a = FiniteFpAlgebra { p, labels, sc, unit };
        for i in 0..dim {
            for j in 0..dim {
                if a.sc[i][j] != a.sc[j][i] {
                    return Err(Error::InvalidAlgebra(format!("not commutative: x{i}*x{j} != x{j}*x{i}")));
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let (ei, ej, ek) = (a.basis(i), a.basis(j), a.basis(k));
                    if a.mul(&a.mul(&ei, &ej), &ek) != a.mul(&ei, &a.mul(&ej, &ek)) {
                        return Err(Error::InvalidAlgebra(format!(
                            "not associative on (x{i}, x{j}, x{k})"
                        )));
                    }
                }
            }
        }
        for i in 0..dim {
            let ei = a.basis(i);
            if a.mul(&a.unit, &ei) != ei {
                return Err(Error::InvalidAlgebra(format!("unit does not fix x{i}")));
            }
        }
        Ok(a)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("algebra serializes")
    }

    /// `F_p^S` in the indicator basis: diagonal structure constants.
    pub fn diagonal(p: Prime, labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptySet);
        }
        let mut sc = vec![vec![vec![0; n]; n]; n];
        for (i, row) in sc.iter_mut().enumerate() {
            row[i][i] = 1;
        }
        Self::new(p, labels, sc, vec![1; n])
    }

    /// `F_p[x]/(f)` for monic `f = x^d + c_{d-1} x^{d-1} + ... + c_0`, in the basis `1, x, ..., x^{d-1}`.
    /// `lower` holds `c_0..c_{d-1}` (reduced mod p).
    pub fn monogenic(p: Prime, lower: &[i64]) -> Result<Self> {
        let d = lower.len();
        if d == 0 {
            return Err(Error::InvalidAlgebra("degree must be positive".into()));
        }
        let pv = p.get() as i64;
        let c: Vec<u64> = lower.iter().map(|v| v.rem_euclid(pv) as u64).collect();
        // reduce x^e for e < 2d - 1 into the basis
        let mut powers: Vec<Vec<u64>> = Vec::with_capacity(2 * d);
        for e in 0..2 * d {
            let v = if e < d {
                let mut v = vec![0; d];
                v[e] = 1;
                v
            } else {
                // x * x^(e-1)
                let prev = &powers[e - 1];
                let mut v = vec![0u64; d];
                for k in 0..d - 1 {
                    v[k + 1] = prev[k];
                }
                let top = prev[d - 1];
                for k in 0..d {
                    v[k] = (v[k] + p.get() * p.get() - top * c[k] % p.get()) % p.get();
                }
                v
            };
            powers.push(v);
        }
        let sc = (0..d)
            .map(|i| (0..d).map(|j| powers[i + j].clone()).collect())
            .collect();
        let labels = (0..d)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        let mut unit = vec![0; d];
        unit[0] = 1;
        Self::new(p, labels, sc, unit)
    }

    /// The prime field `F_p` itself.
    pub fn prime_field(p: Prime) -> Self {
        Self::diagonal(p, vec!["1".into()]).expect("dimension 1")
    }

    /// Product algebra `A x B`, basis the disjoint union.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::ParameterMismatch("product of algebras over different primes".into()));
        }
        let (n, m) = (self.dim(), other.dim());
        let d = n + m;
        let mut sc = vec![vec![vec![0; d]; d]; d];
        for i in 0..n {
            for j in 0..n {
                sc[i][j][..n].copy_from_slice(&self.sc[i][j]);
            }
        }
        for i in 0..m {
            for j in 0..m {
                sc[n + i][n + j][n..].copy_from_slice(&other.sc[i][j]);
            }
        }
        let labels = self
            .labels
            .iter()
            .map(|l| format!("({l},0)"))
            .chain(other.labels.iter().map(|l| format!("(0,{l})")))
            .collect();
        let mut unit = self.unit.clone();
        unit.extend(other.unit.iter().copied());
        Self::new(self.p, labels, sc, unit)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<u64>>] {
        &self.sc
    }

    pub fn unit(&self) -> &[u64] {
        &self.unit
    }

    pub fn basis(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// `p^dim`, saturating.
    pub fn cardinality(&self) -> u64 {
        self.p.get().checked_pow(self.dim() as u32).unwrap_or(u64::MAX)
    }

    pub fn is_exhaustively_enumerable(&self) -> bool {
        self.cardinality() <= EXHAUSTIVE_LIMIT
    }

    /// Coordinates of `x^p`.
    pub fn frobenius(&self, x: &[u64]) -> Vec<u64> {
        self.pow(&x.to_vec(), self.p.get())
    }

    /// The matrix of `x -> x^p` in the given basis.
    pub fn frobenius_matrix(&self) -> FpMatrix {
        let cols: Vec<Vec<u64>> = (0..self.dim()).map(|i| self.frobenius(&self.basis(i))).collect();
        FpMatrix::from_columns(self.p, self.dim(), &cols)
    }

    /// Multiplication-by-`a` as a matrix.
    pub fn multiplication_matrix(&self, a: &[u64]) -> FpMatrix {
        let a = a.to_vec();
        let cols: Vec<Vec<u64>> = (0..self.dim()).map(|i| self.mul(&a, &self.basis(i))).collect();
        FpMatrix::from_columns(self.p, self.dim(), &cols)
    }

    /// Enumerate all `p^dim` elements in lexicographic coordinate order.
    pub fn all_elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let p = self.p.get();
        let d = self.dim();
        (0..self.cardinality()).map(move |mut idx| {
            let mut v = vec![0; d];
            for c in v.iter_mut() {
                *c = idx % p;
                idx /= p;
            }
            v
        })
    }

    /// Build the algebra structure on a subspace closed under multiplication and containing the unit.
    /// `basis` must be linearly independent; the result uses it as its basis.
    pub fn subalgebra(&self, basis: &[Vec<u64>], labels: Vec<String>) -> Result<Self> {
        let p = self.p.get();
        let k = basis.len();
        let mut sc = vec![vec![vec![0; k]; k]; k];
        for i in 0..k {
            for j in 0..k {
                let prod = self.mul(&basis[i], &basis[j]);
                sc[i][j] = super::linalg::coordinates(p, basis, &prod)
                    .ok_or_else(|| Error::InvalidAlgebra("subspace not closed under multiplication".into()))?;
            }
        }
        let unit = super::linalg::coordinates(p, basis, &self.unit)
            .ok_or_else(|| Error::InvalidAlgebra("subspace does not contain the unit".into()))?;
        Self::new(self.p, labels, sc, unit)
    }

    /// Row-reduced basis of the ideal generated by `gens`.
    pub fn ideal_span(&self, gens: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut vs = Vec::new();
        for g in gens {
            for i in 0..self.dim() {
                vs.push(self.mul(g, &self.basis(i)));
            }
        }
        super::linalg::span_basis(self.p.get(), self.dim(), &vs)
    }
}

impl CommRing for FiniteFpAlgebra {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.dim()]
    }

    fn one(&self) -> Vec<u64> {
        self.unit.clone()
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.p.get();
        a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
    }

    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        let p = self.p.get();
        a.iter().map(|x| (p - x % p) % p).collect()
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.p.get();
        let d = self.dim();
        let mut out = vec![0u64; d];
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if *bj == 0 {
                    continue;
                }
                let f = ai * bj % p;
                for (k, o) in out.iter_mut().enumerate() {
                    *o = (*o + f * self.sc[i][j][k]) % p;
                }
            }
        }
        out
    }

    fn characteristic(&self) -> Option<u64> {
        Some(self.p.get())
    }

    fn from_u64(&self, n: u64) -> Vec<u64> {
        let c = n % self.p.get();
        self.unit.iter().map(|u| u * c % self.p.get()).collect()
    }
}

impl FiniteRing for FiniteFpAlgebra {
    fn elements(&self) -> Vec<Vec<u64>> {
        self.all_elements().collect()
    }

    fn order(&self) -> u64 {
        self.cardinality()
    }
}

/// Named algebras used throughout tests, fixtures, and the verification corpus.
pub mod examples {
    use super::*;

    /// `F_4 = F_2[w]/(w^2 + w + 1)`, basis `{1, w}`.
    pub fn f4() -> FiniteFpAlgebra {
        let mut a = FiniteFpAlgebra::monogenic(Prime::new(2).unwrap(), &[1, 1]).unwrap();
        a.labels = vec!["1".into(), "w".into()];
        a
    }

    /// `F_p[x]/(x^2)`.
    pub fn dual_numbers(p: Prime) -> FiniteFpAlgebra {
        FiniteFpAlgebra::monogenic(p, &[0, 0]).unwrap()
    }

    /// `F_2^2` presented in the non-diagonal basis `{1, e}` with `e^2 = e`.
    pub fn f2_squared_idempotent_basis() -> FiniteFpAlgebra {
        let mut a = FiniteFpAlgebra::monogenic(Prime::new(2).unwrap(), &[0, 1]).unwrap();
        a.labels = vec!["1".into(), "e".into()];
        a
    }

    pub fn function_algebra(p: Prime, n: usize) -> FiniteFpAlgebra {
        FiniteFpAlgebra::diagonal(p, (0..n).map(|i| format!("s{i}")).collect()).unwrap()
    }
}

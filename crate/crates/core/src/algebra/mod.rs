//! Exact arithmetic kernel: residue rings `Z/p^m`, integer polynomials,
//! finite-dimensional `F_p`-algebras, linear algebra over `F_p`, and function rings.

pub mod fp_algebra;
pub mod function_ring;
pub mod hom;
pub mod linalg;
pub mod poly;
pub mod residue;
pub mod ring;

pub use fp_algebra::FiniteFpAlgebra;
pub use function_ring::FunctionRing;
pub use hom::{enumerate_ring_homs, FiniteHom};
pub use linalg::FpMatrix;
pub use poly::IntPolynomial;
pub use residue::{residue_arith, ArithOp, Prime, ResidueInt, ResidueRing};
pub use ring::{CommRing, FiniteRing};

/// `frobenius_matrix` as a free function.
pub fn frobenius_matrix(a: &FiniteFpAlgebra) -> FpMatrix {
    a.frobenius_matrix()
}

/// Kernel and cokernel bases of a square matrix over `F_p`.
///
/// The kernel basis has one vector per free column of the reduced row echelon
/// form; the cokernel is represented by the standard basis vectors that
/// complete the image, chosen in index order.
pub fn linear_ker_coker(m: &FpMatrix) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    (m.kernel(), m.cokernel())
}

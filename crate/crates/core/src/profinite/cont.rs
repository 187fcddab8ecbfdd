use super::tower::Tower;
use crate::algebra::{FunctionRing, ResidueRing};
use crate::error::Result;

/// Functions `S_n -> Z/p^m` (for `m = 1`, functions into `F_p`).
pub fn cont_functions(t: &Tower, n: usize, codomain: ResidueRing) -> Result<FunctionRing> {
    t.check_level(n)?;
    FunctionRing::new(t.level_size(n), codomain)
}

/// Pull a function on `S_n` back to `S_{n+1}` along the transition.
pub fn inflate(t: &Tower, n: usize, f: &[u64]) -> Vec<u64> {
    t.transition(n).iter().map(|x| f[*x]).collect()
}

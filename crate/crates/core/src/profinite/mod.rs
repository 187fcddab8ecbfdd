//! Light profinite sets as depth-truncated towers of finite sets, pro-maps, finite limits,
//! quotient presentations and functions on levels.

pub mod cont;
pub mod fiber;
pub mod fixtures;
pub mod promap;
pub mod quotient;
pub mod tower;

pub use cont::{cont_functions, inflate};
pub use fiber::{tower_fiber_product, universal_property_failure, FiberProduct};
pub use promap::ProMap;
pub use quotient::{quotient_presentation, quotient_tower, quotient_transition, EquivRelPresentation, Quotient};
pub use tower::{
    canonical_cantor, canonical_ntilde, check_sequential_surjectivity, tower_limit_elements, tower_product,
    SurjectivityReport, Tower,
};

/// Every function `0..domain -> 0..codomain` as a table, in lexicographic order.
pub fn all_functions(domain: usize, codomain: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = if codomain == 0 {
        usize::from(domain == 0)
    } else {
        codomain.checked_pow(domain as u32).expect("function count fits in usize")
    };
    (0..count).map(move |mut idx| {
        let mut f = vec![0; domain];
        for slot in f.iter_mut().rev() {
            *slot = idx % codomain;
            idx /= codomain;
        }
        f
    })
}

//! Set-valued presheaves on a finite site of tower levels: the sheaf condition,
//! condensification of finite and quotient-presented sets, quasi-compactness and
//! quasi-separatedness at finite level, and pushforward to Stone δ-rings.

pub mod betti;
pub mod presheaf;
pub mod quotient;
pub mod sheaf;
pub mod site;

pub use betti::{
    betti_delta_check, betti_naturality, psi_dual_map, psi_pushforward, psi_pushforward_map, psi_site_object, BettiCheck,
};
pub use presheaf::{ConstantPresheaf, Presheaf, PresheafApprox, Representable, Restriction};
pub use quotient::{
    coequalizer_check, condensify, is_generator, qc_check, qs_check_presented, CoequalizerCheck, Condensable, QcReport, QsReport,
    QuotientCondensedSet,
};
pub use sheaf::{sheaf_check, sheaf_check_site, SheafCheck};
pub use site::{site_fiber_product, Cover, FiniteSite, SiteMap, SiteObject, SitePullback};

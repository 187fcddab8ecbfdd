use crate::error::{Error, Result};

/// One verification check: which acceptance criterion it belongs to, what it asserts,
/// and how its instances are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckInfo {
    pub id: &'static str,
    pub criterion: u8,
    pub statement: &'static str,
    pub instances: &'static str,
}

pub const CATALOG: &[CheckInfo] = &[
    CheckInfo {
        id: "witt.ring-axioms",
        criterion: 1,
        statement: "Truncated Witt vectors W_n(R) form a commutative ring under the universal addition and multiplication polynomials.",
        instances: "W_2(F_2) and W_2(F_3): every ordered triple of elements. W_3(F_4): 500 triples drawn with ChaCha8 from the config seed.",
    },
    CheckInfo {
        id: "witt.ghost-hom",
        criterion: 1,
        statement: "The ghost map W_n(R) -> R^n is a ring homomorphism.",
        instances: "W_2 over Z/p^2 for p in {2, 3} and W_3(F_2): every ordered pair.",
    },
    CheckInfo {
        id: "witt.ghost-identities",
        criterion: 1,
        statement: "The addition and multiplication polynomials satisfy the ghost identities as integer polynomial identities.",
        instances: "p in {2, 3, 5}, length 1 to 4, expanded symbolically.",
    },
    CheckInfo {
        id: "witt.fp-iso",
        criterion: 1,
        statement: "W_n(F_p) is isomorphic to Z/p^n through the Teichmuller expansion, and the ghost route agrees.",
        instances: "p in {2, 3}, n from 1 to 4: bijectivity plus every ordered pair for additivity and multiplicativity.",
    },
    CheckInfo {
        id: "delta.axioms",
        criterion: 2,
        statement: "delta(x) = (phi(x) - x^p)/p satisfies delta(1) = 0, the product rule and the sum rule.",
        instances: "phi = id on Z/p^m for p in {2, 3}, m from 2 to 4, and the Witt vector Frobenius on W_3(F_4); every ordered pair.",
    },
    CheckInfo {
        id: "delta.mutation",
        criterion: 2,
        statement: "A deliberately corrupted delta is rejected by the axiom checker.",
        instances: "Corrupted delta on Z/16 and on W_3(F_4); the check passes when a failure is reported.",
    },
    CheckInfo {
        id: "stone.round-trip",
        criterion: 3,
        statement: "Taking characters of the function algebra F_p^S returns S, with every character an evaluation.",
        instances: "Sets of size 1 to 5.",
    },
    CheckInfo {
        id: "stone.double-dual",
        criterion: 3,
        statement: "Dualizing a set map twice recovers it.",
        instances: "Every map between sets of size up to the configured bound.",
    },
    CheckInfo {
        id: "stone.p-boolean-iso",
        criterion: 3,
        statement: "Every p-Boolean algebra is isomorphic to the function algebra on its characters; non-reduced or non-split algebras are not p-Boolean.",
        instances: "Corpus algebras of dimension up to 5, including non-standard bases and products.",
    },
    CheckInfo {
        id: "duality.roundtrip",
        criterion: 4,
        statement: "Taking continuous Z/p^m-valued functions on a level and then the characters of the reduction returns the level.",
        instances: "Levels of the N-tilde and Cantor towers, their product and quotient fixtures, at every depth and precision up to the configured bounds.",
    },
    CheckInfo {
        id: "duality.functoriality",
        criterion: 4,
        statement: "Pullback of functions is contravariantly functorial and dualizing a level map twice recovers it.",
        instances: "Every map and composable pair among sets of size up to the configured bound, plus every transition of the corpus towers.",
    },
    CheckInfo {
        id: "duality.witt-cont-exhaustive",
        criterion: 5,
        statement: "Witt vectors of F_p-valued functions are the Z/p^m-valued functions: the digitwise Teichmuller map is a ring isomorphism.",
        instances: "Levels of size 1 and 2 with precision 1 and 2: every element and every ordered pair.",
    },
    CheckInfo {
        id: "duality.witt-cont-sampled",
        criterion: 5,
        statement: "The same isomorphism on a larger level, by sampling.",
        instances: "Level of size 3, precision 3: pairs drawn with ChaCha8 seeded from the run seed.",
    },
    CheckInfo {
        id: "flatness.ff-correspondence",
        criterion: 6,
        statement: "A map of finite function algebras is faithfully flat exactly when the dual set map is surjective, exactly when the ring map is injective.",
        instances: "Every map F_p^S -> F_p^T with |S|, |T| up to the configured bound, generated from set maps T -> S.",
    },
    CheckInfo {
        id: "flatness.p-complete",
        criterion: 6,
        statement: "The Witt-lifted map of function rings is p-completely faithfully flat exactly when its reduction is faithfully flat.",
        instances: "The same maps lifted to Z/p^m coefficients at the configured precision.",
    },
    CheckInfo {
        id: "site.translate",
        criterion: 7,
        statement: "Translating a finite family of level maps into ring maps and back is the identity, and the family is jointly surjective exactly when the product ring map is p-completely faithfully flat.",
        instances: "Every family of up to 3 maps into a level of size up to the configured bound, up to reordering.",
    },
    CheckInfo {
        id: "site.mutated-cover",
        criterion: 7,
        statement: "A family that misses a point yields a product map that is not faithfully flat, with the missed point as witness.",
        instances: "Each covering family with one point of the base removed from every image.",
    },
    CheckInfo {
        id: "stone.characterization",
        criterion: 8,
        statement: "A perfect delta-ring carrier has phi = id exactly when the map to its phi-coinvariants is p-completely faithfully flat.",
        instances: "W_m of function algebras, of F_4, of F_4 x F_2 and of F_9, for m in {1, 2}.",
    },
    CheckInfo {
        id: "adjunction.frobenius",
        criterion: 9,
        statement: "Frobenius invariants, coinvariants, coperfection and perfection satisfy their hom-set bijections.",
        instances: "Algebras of dimension up to 2 over F_2 and F_3 against function algebras of dimension up to 3 and perfect targets; all algebra maps enumerated.",
    },
    CheckInfo {
        id: "adjunction.delta",
        criterion: 9,
        statement: "delta-invariants and delta-coinvariants satisfy their hom-set bijections.",
        instances: "W_2 carriers with at most 16 elements against Stone carriers.",
    },
    CheckInfo {
        id: "profinite.replete",
        criterion: 10,
        statement: "A sequential tower with surjective transitions lifts every level point to a compatible family.",
        instances: "N-tilde and Cantor towers of depth 1 to 6.",
    },
    CheckInfo {
        id: "profinite.fiber-universal",
        criterion: 10,
        statement: "Levelwise fiber products satisfy the universal property against every cone from small finite sets.",
        instances: "Every cospan of levelwise maps among depth-2 towers with level sizes up to 3, and seeded random cospans.",
    },
    CheckInfo {
        id: "condensed.sheaf-condensify",
        criterion: 11,
        statement: "Condensifications of finite sets and of quotient presentations satisfy the sheaf condition.",
        instances: "Every cover of up to 3 members of every object of the standard site.",
    },
    CheckInfo {
        id: "condensed.sheaf-representable",
        criterion: 11,
        statement: "Representable presheaves satisfy the sheaf condition.",
        instances: "Representables of the standard site objects and of a four-point level, on every cover of up to 3 members; plus one tabulated presheaf.",
    },
    CheckInfo {
        id: "condensed.qc",
        criterion: 11,
        statement: "Representables and quotient-presented sets admit a surjection from a representable.",
        instances: "Standard site objects and the dyadic interval quotient at level 2.",
    },
    CheckInfo {
        id: "condensed.betti",
        criterion: 11,
        statement: "Maps from the dual of A into K correspond bijectively to delta-maps from continuous Z/p^m-valued functions on K into A.",
        instances: "Corpus pairs (K, A) at p = 2 and precision 1 and 2.",
    },
    CheckInfo {
        id: "condensed.betti-naturality",
        criterion: 11,
        statement: "The bijection is natural in A.",
        instances: "Every set map between corpus levels, for every corpus K.",
    },
    CheckInfo {
        id: "condensed.coequalizer",
        criterion: 11,
        statement: "The condensification of a quotient is the coequalizer of the condensified relation pair.",
        instances: "Dyadic interval presentation at levels 0 to 3, evaluated on every standard site object.",
    },
    CheckInfo {
        id: "determinism.rerun",
        criterion: 12,
        statement: "Seeded checks produce identical records when rerun with the same configuration.",
        instances: "The sampled and random checks run twice and compared byte for byte.",
    },
];

pub fn check_info(id: &str) -> Result<&'static CheckInfo> {
    CATALOG
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCheck(id.to_string()))
}

/// Human-readable description of a check.
pub fn explain(id: &str) -> Result<String> {
    let c = check_info(id)?;
    Ok(format!(
        "{}\n  acceptance criterion: {}\n  asserts: {}\n  instances: {}\n",
        c.id, c.criterion, c.statement, c.instances
    ))
}

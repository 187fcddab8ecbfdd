use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::vector::{WittRing, WittVector};
use crate::algebra::{CommRing, FiniteFpAlgebra, FiniteRing, FunctionRing, Prime, ResidueRing};
use crate::error::{Error, Result};

/// A ring that is `p`-adically truncated at some precision `m`, with the
/// precision-lowering maps that `δ` needs.
///
/// `reduce` is the quotient map to precision `m - 1`; `div_p` divides a
/// multiple of `p` exactly, landing at precision `m - 1`.
pub trait TruncatedCarrier: CommRing + Clone {
    fn prime(&self) -> Prime;
    fn precision(&self) -> u32;
    fn lowered(&self) -> Result<Self>;
    fn reduce(&self, x: &Self::Elem) -> Self::Elem;
    fn div_p(&self, x: &Self::Elem) -> Result<Self::Elem>;
}

impl TruncatedCarrier for ResidueRing {
    fn prime(&self) -> Prime {
        ResidueRing::prime(self)
    }

    fn precision(&self) -> u32 {
        ResidueRing::precision(self)
    }

    fn lowered(&self) -> Result<Self> {
        ResidueRing::lowered(self)
    }

    fn reduce(&self, x: &u64) -> u64 {
        self.truncate_to(*x, self.precision() - 1)
    }

    fn div_p(&self, x: &u64) -> Result<u64> {
        ResidueRing::div_p(self, *x)
    }
}

impl TruncatedCarrier for FunctionRing {
    fn prime(&self) -> Prime {
        FunctionRing::prime(self)
    }

    fn precision(&self) -> u32 {
        FunctionRing::precision(self)
    }

    fn lowered(&self) -> Result<Self> {
        FunctionRing::lowered(self)
    }

    fn reduce(&self, x: &Vec<u64>) -> Vec<u64> {
        self.truncate_to(x, self.precision() - 1)
    }

    fn div_p(&self, x: &Vec<u64>) -> Result<Vec<u64>> {
        FunctionRing::div_p(self, x)
    }
}

/// `W_n(R)` over a perfect finite `F_p`-algebra `R` is `W(R)/p^n`, so its precision is `n`.
impl TruncatedCarrier for WittRing<FiniteFpAlgebra> {
    fn prime(&self) -> Prime {
        WittRing::prime(self)
    }

    fn precision(&self) -> u32 {
        self.len() as u32
    }

    fn lowered(&self) -> Result<Self> {
        WittRing::lowered(self)
    }

    fn reduce(&self, x: &WittVector<Vec<u64>>) -> WittVector<Vec<u64>> {
        self.restrict(x)
    }

    fn div_p(&self, x: &WittVector<Vec<u64>>) -> Result<WittVector<Vec<u64>>> {
        WittRing::div_p(self, x)
    }
}

type Endo<E> = Arc<dyn Fn(&E) -> E + Send + Sync>;

/// A Frobenius lift on a truncated carrier, with `δ(x) = (φ(x) - x^p) / p`.
///
/// `δ` maps precision-`m` data to precision `m - 1`.
#[derive(Clone)]
pub struct DeltaStructure<C: TruncatedCarrier> {
    carrier: C,
    lower: C,
    lift: Endo<C::Elem>,
    corrupted: bool,
}

impl<C: TruncatedCarrier + fmt::Debug> fmt::Debug for DeltaStructure<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeltaStructure")
            .field("carrier", &self.carrier)
            .field("corrupted", &self.corrupted)
            .finish()
    }
}

impl<C: TruncatedCarrier> DeltaStructure<C> {
    pub fn new(carrier: C, lift: impl Fn(&C::Elem) -> C::Elem + Send + Sync + 'static) -> Result<Self> {
        if carrier.precision() < 2 {
            return Err(Error::ParameterMismatch(
                "a δ-structure needs precision at least 2".into(),
            ));
        }
        let lower = carrier.lowered()?;
        Ok(DeltaStructure {
            carrier,
            lower,
            lift: Arc::new(lift),
            corrupted: false,
        })
    }

    /// `φ = id`.
    pub fn identity_lift(carrier: C) -> Result<Self> {
        Self::new(carrier, |x| x.clone())
    }

    /// Replace `δ` by `δ + 1`; used by mutation fixtures.
    pub fn corrupted(mut self) -> Self {
        self.corrupted = true;
        self
    }

    pub fn carrier(&self) -> &C {
        &self.carrier
    }

    pub fn lower(&self) -> &C {
        &self.lower
    }

    pub fn phi(&self, x: &C::Elem) -> C::Elem {
        (self.lift)(x)
    }

    pub fn delta(&self, x: &C::Elem) -> Result<C::Elem> {
        let d = delta_from_lift(&self.carrier, |y| (self.lift)(y), x)?;
        Ok(if self.corrupted {
            self.lower.add(&d, &self.lower.one())
        } else {
            d
        })
    }
}

/// `δ(x) = (φ(x) - x^p) / p`, one precision lower.
///
/// Fails with [`Error::NotDivisible`] when `φ(x) ≢ x^p (mod p)`, i.e. when the
/// supplied map is not a Frobenius lift at `x`.
pub fn delta_from_lift<C: TruncatedCarrier>(carrier: &C, phi: impl Fn(&C::Elem) -> C::Elem, x: &C::Elem) -> Result<C::Elem> {
    let xp = carrier.pow(x, carrier.prime().get());
    carrier.div_p(&carrier.sub(&phi(x), &xp))
}

/// One failed δ-axiom with its first counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: &'static str,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaAxiomReport {
    pub passed: bool,
    pub pairs_checked: usize,
    pub failures: Vec<AxiomFailure>,
}

impl DeltaAxiomReport {
    pub fn failed(&self, axiom: &str) -> bool {
        self.failures.iter().any(|f| f.axiom == axiom)
    }
}

/// Check `δ(1) = 0`, the product rule and the sum rule at precision `m - 1` on every sample pair.
///
/// Each axiom reports only its first counterexample.
pub fn check_delta_axioms<C: TruncatedCarrier>(
    delta: &DeltaStructure<C>,
    samples: impl IntoIterator<Item = (C::Elem, C::Elem)>,
) -> DeltaAxiomReport {
    let a = &delta.carrier;
    let low = &delta.lower;
    let p = a.prime().get();
    let mut failures: Vec<AxiomFailure> = Vec::new();
    let record = |failures: &mut Vec<AxiomFailure>, axiom: &'static str, witness: String| {
        if !failures.iter().any(|f| f.axiom == axiom) {
            failures.push(AxiomFailure { axiom, witness });
        }
    };

    match delta.delta(&a.one()) {
        Ok(d) if low.is_zero(&d) => {}
        Ok(d) => record(&mut failures, "unit", format!("δ(1) = {d:?}")),
        Err(e) => record(&mut failures, "lift", format!("at 1: {e}")),
    }

    let mut pairs_checked = 0;
    for (x, y) in samples {
        pairs_checked += 1;
        let (dx, dy, dxy, dsum) = match (
            delta.delta(&x),
            delta.delta(&y),
            delta.delta(&a.mul(&x, &y)),
            delta.delta(&a.add(&x, &y)),
        ) {
            (Ok(dx), Ok(dy), Ok(dxy), Ok(dsum)) => (dx, dy, dxy, dsum),
            _ => {
                record(&mut failures, "lift", format!("φ is not a Frobenius lift near x={x:?}, y={y:?}"));
                continue;
            }
        };
        let (rx, ry) = (a.reduce(&x), a.reduce(&y));
        let xp = low.pow(&rx, p);
        let yp = low.pow(&ry, p);
        let product_rhs = low.add(
            &low.add(&low.mul(&xp, &dy), &low.mul(&dx, &yp)),
            &low.scale(&low.mul(&dx, &dy), p),
        );
        if dxy != product_rhs {
            record(
                &mut failures,
                "product",
                format!("x={x:?}, y={y:?}: δ(xy)={dxy:?} but rule gives {product_rhs:?}"),
            );
        }
        let binom = a.sub(
            &a.add(&a.pow(&x, p), &a.pow(&y, p)),
            &a.pow(&a.add(&x, &y), p),
        );
        match a.div_p(&binom) {
            Ok(c) => {
                let sum_rhs = low.add(&low.add(&dx, &dy), &c);
                if dsum != sum_rhs {
                    record(
                        &mut failures,
                        "sum",
                        format!("x={x:?}, y={y:?}: δ(x+y)={dsum:?} but rule gives {sum_rhs:?}"),
                    );
                }
            }
            Err(e) => record(&mut failures, "sum", format!("x={x:?}, y={y:?}: {e}")),
        }
    }
    DeltaAxiomReport {
        passed: failures.is_empty(),
        pairs_checked,
        failures,
    }
}

/// Whether the lift is a bijection of the (finite) carrier.
pub fn is_perfect_delta<C: FiniteRing>(carrier: &C, phi: impl Fn(&C::Elem) -> C::Elem) -> bool {
    let els = carrier.elements();
    let image: HashSet<C::Elem> = els.iter().map(&phi).collect();
    image.len() == els.len()
}

/// All ordered pairs of carrier elements.
pub fn all_pairs<E: Clone>(els: &[E]) -> Vec<(E, E)> {
    els.iter()
        .flat_map(|a| els.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

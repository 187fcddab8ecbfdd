use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::{IntPolynomial, Prime};
use crate::error::{Error, Result};

/// Universal sum, product and difference polynomials for `W_n` at a prime `p`,
/// in the variables `X0..X(n-1), Y0..Y(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WittPolySet {
    pub p: Prime,
    pub len: usize,
    pub sums: Vec<IntPolynomial>,
    pub products: Vec<IntPolynomial>,
    #[serde(skip)]
    pub differences: Vec<IntPolynomial>,
}

pub fn witt_variables(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| format!("X{i}"))
        .chain((0..n).map(|i| format!("Y{i}")))
        .collect()
}

/// Ghost polynomial `w_i(Z) = sum_{j<=i} p^j Z_j^(p^(i-j))`, where `Z_j` is variable `offset + j`.
pub fn ghost_polynomial(p: Prime, i: usize, vars: &[String], offset: usize) -> IntPolynomial {
    let mut acc = IntPolynomial::zero(vars.to_vec());
    for j in 0..=i {
        let z = IntPolynomial::variable(vars.to_vec(), offset + j);
        let term = z.pow(p.get().pow((i - j) as u32));
        acc = acc.add(&term.scale(&BigInt::from(p.get()).pow(j as u32)));
    }
    acc
}

/// `sum_{j<i} p^j Q_j^(p^(i-j))`: the lower-order part of the ghost component of `Q`.
fn ghost_tail(p: Prime, i: usize, qs: &[IntPolynomial]) -> IntPolynomial {
    let vars = qs[0].variables().to_vec();
    let mut acc = IntPolynomial::zero(vars);
    for (j, q) in qs.iter().enumerate().take(i) {
        let term = q.pow(p.get().pow((i - j) as u32));
        acc = acc.add(&term.scale(&BigInt::from(p.get()).pow(j as u32)));
    }
    acc
}

fn solve_level(p: Prime, i: usize, target: &IntPolynomial, lower: &[IntPolynomial]) -> Result<IntPolynomial> {
    let mut r = if i == 0 {
        target.clone()
    } else {
        target.sub(&ghost_tail(p, i, lower))
    };
    for _ in 0..i {
        r = r.exact_div_p(p).map_err(|e| Error::Internal(format!("Witt polynomial integrality: {e}")))?;
    }
    Ok(r)
}

fn compute(p: Prime, n: usize) -> Result<WittPolySet> {
    let vars = witt_variables(n);
    let mut sums: Vec<IntPolynomial> = Vec::with_capacity(n);
    let mut products: Vec<IntPolynomial> = Vec::with_capacity(n);
    let mut differences: Vec<IntPolynomial> = Vec::with_capacity(n);
    for i in 0..n {
        let wx = ghost_polynomial(p, i, &vars, 0);
        let wy = ghost_polynomial(p, i, &vars, n);
        sums.push(solve_level(p, i, &wx.add(&wy), &sums)?);
        products.push(solve_level(p, i, &wx.mul(&wy), &products)?);
        differences.push(solve_level(p, i, &wx.sub(&wy), &differences)?);
    }
    Ok(WittPolySet {
        p,
        len: n,
        sums,
        products,
        differences,
    })
}

type Cell = Arc<OnceLock<Arc<WittPolySet>>>;

fn memo() -> &'static Mutex<HashMap<(u64, usize), Cell>> {
    static MEMO: OnceLock<Mutex<HashMap<(u64, usize), Cell>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn fills() -> &'static Mutex<HashMap<(u64, usize), usize>> {
    static FILLS: OnceLock<Mutex<HashMap<(u64, usize), usize>>> = OnceLock::new();
    FILLS.get_or_init(Default::default)
}

static TOTAL_FILLS: AtomicUsize = AtomicUsize::new(0);

/// The universal polynomials for `(p, n)`, computed once per process and shared.
pub fn witt_polys(p: Prime, n: usize) -> Result<Arc<WittPolySet>> {
    if n == 0 {
        return Err(Error::ParameterMismatch("Witt length must be at least 1".into()));
    }
    let cell = {
        let mut m = memo().lock().expect("memo lock");
        m.entry((p.get(), n)).or_default().clone()
    };
    // integrality failures would be a bug in this module; surface them as a panic here
    // and as an error from `compute` in tests.
    let set = cell.get_or_init(|| {
        *fills().lock().expect("fill lock").entry((p.get(), n)).or_default() += 1;
        TOTAL_FILLS.fetch_add(1, Ordering::SeqCst);
        Arc::new(compute(p, n).expect("universal Witt polynomials are integral"))
    });
    Ok(set.clone())
}

/// How many times the memo entry for `(p, n)` has been computed (0 or 1).
pub fn memo_fill_count(p: Prime, n: usize) -> usize {
    fills().lock().expect("fill lock").get(&(p.get(), n)).copied().unwrap_or(0)
}

/// Check `w_i(S) = w_i(X) + w_i(Y)` and `w_i(P) = w_i(X) w_i(Y)` as polynomial identities.
///
/// This recomputes the ghost side from scratch rather than reusing the
/// recursion in [`witt_polys`].
pub fn verify_ghost_identities(set: &WittPolySet) -> std::result::Result<(), String> {
    let n = set.len;
    let vars = witt_variables(n);
    for i in 0..n {
        let wx = ghost_polynomial(set.p, i, &vars, 0);
        let wy = ghost_polynomial(set.p, i, &vars, n);
        let mut ws = IntPolynomial::zero(vars.clone());
        let mut wp = IntPolynomial::zero(vars.clone());
        for j in 0..=i {
            let e = set.p.get().pow((i - j) as u32);
            let k = BigInt::from(set.p.get()).pow(j as u32);
            ws = ws.add(&set.sums[j].pow(e).scale(&k));
            wp = wp.add(&set.products[j].pow(e).scale(&k));
        }
        if ws != wx.add(&wy) {
            return Err(format!("sum ghost identity fails at level {i} (p={}, n={n})", set.p));
        }
        if wp != wx.mul(&wy) {
            return Err(format!("product ghost identity fails at level {i} (p={}, n={n})", set.p));
        }
    }
    Ok(())
}

impl WittPolySet {
    /// Canonical JSON: polynomials as sorted `{exp, coeff}` term lists.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("poly set serializes")
    }
}

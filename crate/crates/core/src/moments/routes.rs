//! Independent routes to the even moments `r_n`, plus Delaney and generalized Euler numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::sequences::{r_by_enumeration, sequences_by_recursion};
use crate::arith::{binomial, factorial, MultiPoly, PowerSeries, Rational};
use crate::error::{Error, Result};
use crate::partition::{enumerate_nc, nesting_forest, weight_histogram, Limits, OrderFilter};

/// `(p + q) / 2`.
pub fn half_sum() -> MultiPoly {
    (MultiPoly::p() + MultiPoly::q()).scale(&Rational::new(1.into(), 2.into()))
}

/// Coefficients `r_0, …, r_N` of `R(z) = (s - 1 - √(1 - 2sz)) / (s - 2 + 2z)`, `s = p + q`.
///
/// With `d = s - 2` the expansion of `1/(d + 2z)` puts `d^{n+1}` under `r_n`;
/// each coefficient is divided by `d` exactly `n + 1` times and must come out a polynomial.
pub fn r_by_closed_form(order: usize) -> Result<Vec<MultiPoly>> {
    let s = MultiPoly::p() + MultiPoly::q();
    let d = &s - &MultiPoly::from_int(2);
    let radicand = PowerSeries::new(
        vec![
            MultiPoly::one(),
            s.scale(&Rational::from_integer((-2).into())),
        ],
        order,
    );
    let root = radicand.sqrt()?;
    let numerator: Vec<MultiPoly> = (0..=order)
        .map(|k| {
            if k == 0 {
                &d + &(MultiPoly::one() - root.coeff(0))
            } else {
                -root.coeff(k)
            }
        })
        .collect();

    let minus_two = MultiPoly::from_int(-2);
    let mut d_pow = vec![MultiPoly::one()];
    let mut m2_pow = vec![MultiPoly::one()];
    for k in 1..=order {
        d_pow.push(&d_pow[k - 1] * &d);
        m2_pow.push(&m2_pow[k - 1] * &minus_two);
    }

    (0..=order)
        .map(|n| {
            let mut value: MultiPoly = (0..=n)
                .map(|k| &(&numerator[n - k] * &m2_pow[k]) * &d_pow[n - k])
                .sum();
            for _ in 0..=n {
                value = value
                    .div_exact(&d)
                    .map_err(|_| Error::UnclearedDenominator(n))?;
            }
            Ok(value)
        })
        .collect()
}

/// Weighted Dyck paths: a down-step from height 1 weighs 1, from any higher level `t = (p+q)/2`.
/// Returns `m_{2n}` for `n = 0..=N`.
pub fn r_by_jacobi(order: usize) -> Vec<MultiPoly> {
    let t = half_sum();
    let steps = 2 * order;
    let mut heights = vec![MultiPoly::zero(); steps + 2];
    heights[0] = MultiPoly::one();
    let mut out = vec![MultiPoly::one()];
    for step in 1..=steps {
        let mut next = vec![MultiPoly::zero(); steps + 2];
        for h in 0..=steps {
            if heights[h].is_zero() {
                continue;
            }
            next[h + 1] += &heights[h];
            if h >= 1 {
                let down = if h == 1 {
                    heights[h].clone()
                } else {
                    &heights[h] * &t
                };
                next[h - 1] += &down;
            }
        }
        heights = next;
        if step % 2 == 0 {
            out.push(heights[0].clone());
        }
    }
    out
}

/// `D(n, k) = C(n+k-1, k) - C(n+k-1, k-1)`; zero outside `0 ≤ k ≤ n - 1`.
pub fn delaney(n: usize, k: usize) -> BigInt {
    if n == 0 || k >= n {
        return BigInt::zero();
    }
    let (n, k) = (n as i64, k as i64);
    binomial(n + k - 1, k) - binomial(n + k - 1, k - 1)
}

/// Counts of `NC²_{2n}` partitions by number of inner blocks.
pub fn delaney_by_enumeration(n: usize, limits: &Limits) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; n.max(1)];
    for base in enumerate_nc(2 * n, true, limits)? {
        counts[nesting_forest(&base)?.inner_count()] += 1;
    }
    Ok(counts)
}

/// `r_n = Σ_k D(n, k) t^k`.
pub fn r_by_delaney(n: usize) -> MultiPoly {
    if n == 0 {
        return MultiPoly::one();
    }
    let t = half_sum();
    (0..n)
        .map(|k| {
            t.pow(k as u32)
                .scale(&Rational::from_integer(delaney(n, k)))
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerRoute {
    Formula,
    Enumeration,
}

/// Generalized Euler number `E(n, k, j)`: ordered pair partitions of `[2n]`
/// with `k` disorders and `j` orders.
pub fn gen_euler(
    n: usize,
    k: usize,
    j: usize,
    route: EulerRoute,
    limits: &Limits,
) -> Result<Rational> {
    if n == 0 || k >= n || j >= n {
        return Ok(Rational::zero());
    }
    match route {
        EulerRoute::Formula => {
            let m = k + j;
            let scale = Rational::new(factorial(n), BigInt::from(2).pow(m as u32));
            Ok(scale * Rational::from_integer(binomial(m as i64, k as i64) * delaney(n, m)))
        }
        EulerRoute::Enumeration => {
            let histogram = euler_table(n, limits)?;
            let count = histogram.get(&(k as u32, j as u32)).copied().unwrap_or(0);
            Ok(Rational::from_integer(count.into()))
        }
    }
}

/// All `E(n, ·, ·)` at once from one enumeration pass.
pub fn euler_table(n: usize, limits: &Limits) -> Result<BTreeMap<(u32, u32), u64>> {
    let limits = Limits {
        pair_max: limits.pair_max.min(12),
        ..*limits
    };
    weight_histogram(2 * n, OrderFilter::pairs(), &limits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Route {
    Enumeration,
    Recursion,
    ClosedForm,
    Jacobi,
    Delaney,
}

impl Route {
    pub const ALL: [Route; 5] = [
        Route::Enumeration,
        Route::Recursion,
        Route::ClosedForm,
        Route::Jacobi,
        Route::Delaney,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Enumeration => "enum",
            Route::Recursion => "rec",
            Route::ClosedForm => "closed",
            Route::Jacobi => "jacobi",
            Route::Delaney => "delaney",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown route {s:?}")))
    }
}

/// `r_n` by a single route.
pub fn r_by_route(n: usize, route: Route, limits: &Limits) -> Result<MultiPoly> {
    Ok(match route {
        Route::Enumeration => r_by_enumeration(n, limits)?,
        Route::Recursion => sequences_by_recursion(n.max(1), 1).r[n].clone(),
        Route::ClosedForm => r_by_closed_form(n)?.swap_remove(n),
        Route::Jacobi => r_by_jacobi(n).swap_remove(n),
        Route::Delaney => r_by_delaney(n),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentReport {
    pub n: usize,
    pub value: MultiPoly,
    pub routes: BTreeMap<String, MultiPoly>,
    pub agreement: bool,
}

impl MomentReport {
    /// Runs each route; `agreement` holds iff every value is the same canonical polynomial.
    pub fn compute(n: usize, routes: &[Route], limits: &Limits) -> Result<Self> {
        let mut values = BTreeMap::new();
        for &route in routes {
            values.insert(route.name().to_string(), r_by_route(n, route, limits)?);
        }
        let first = values
            .values()
            .next()
            .cloned()
            .unwrap_or_else(MultiPoly::zero);
        let agreement = values.values().all(|v| *v == first);
        Ok(MomentReport {
            n,
            value: first,
            routes: values,
            agreement,
        })
    }

    /// Route values evaluated at exact `(p, q)`.
    pub fn evaluated(&self, p: &Rational, q: &Rational) -> MomentReport {
        let routes: BTreeMap<_, _> = self
            .routes
            .iter()
            .map(|(k, v)| (k.clone(), v.eval_pq(p, q)))
            .collect();
        let value = self.value.eval_pq(p, q);
        let agreement = routes.values().all(|v| *v == value);
        MomentReport {
            n: self.n,
            value,
            routes,
            agreement,
        }
    }
}

/// `Σ_{k,j} E(n,k,j) p^k q^j / n!`, which must equal `r_n`.
pub fn r_from_euler(n: usize, limits: &Limits) -> Result<MultiPoly> {
    let norm = Rational::new(BigInt::one(), factorial(n));
    Ok(euler_table(n, limits)?
        .into_iter()
        .map(|((k, j), c)| {
            MultiPoly::pq_monomial(k, j).scale(&(Rational::from_integer(c.into()) * &norm))
        })
        .sum())
}

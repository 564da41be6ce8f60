//! The sequences `r_n`, `s_n`, `a_n`, `s_n^(r)` and the series identities tying them together.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{factorial, MultiPoly, PowerSeries, Rational};
use crate::error::{Error, Result};
use crate::partition::{weight_histogram, Limits, OrderFilter};

/// `(1/k!) Σ_P w(P)` over the ordered pair partitions of `[2k]` selected by `filter`.
pub fn normalized_weight_sum(k: usize, filter: OrderFilter, limits: &Limits) -> Result<MultiPoly> {
    let histogram = weight_histogram(2 * k, filter, limits)?;
    let norm = Rational::new(BigInt::from(1), factorial(k));
    Ok(histogram
        .into_iter()
        .map(|((e, e_prime), count)| {
            MultiPoly::pq_monomial(e, e_prime)
                .scale(&(Rational::from_integer(count.into()) * &norm))
        })
        .sum())
}

/// `r_n = (1/n!) Σ_{P ∈ ONC²_{2n}} w(P)` by direct enumeration.
pub fn r_by_enumeration(n: usize, limits: &Limits) -> Result<MultiPoly> {
    normalized_weight_sum(n, OrderFilter::pairs(), limits)
}

/// `s_n`: the same sum restricted to covered partitions.
pub fn s_by_enumeration(n: usize, limits: &Limits) -> Result<MultiPoly> {
    let filter = OrderFilter {
        covered_only: true,
        ..OrderFilter::pairs()
    };
    normalized_weight_sum(n, filter, limits)
}

/// `s_n^(r)`: ordered pair partitions of `[2n]` with exactly `r` outer blocks.
pub fn s_r_by_enumeration(n: usize, r: usize, limits: &Limits) -> Result<MultiPoly> {
    let filter = OrderFilter {
        outer_blocks: Some(r),
        ..OrderFilter::pairs()
    };
    normalized_weight_sum(n, filter, limits)
}

/// `r`, `s`, `a` and `s^(r)` through order `N`, filled by the mutual recursion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceTable {
    pub r: Vec<MultiPoly>,
    pub s: Vec<MultiPoly>,
    pub a: Vec<MultiPoly>,
    /// `s_r[r][n] = s_n^(r)`, with row 0 the unit sequence `[n = 0]`.
    pub s_r: Vec<Vec<MultiPoly>>,
    pub order: usize,
}

impl SequenceTable {
    pub fn r_max(&self) -> usize {
        self.s_r.len() - 1
    }

    fn series(values: &[MultiPoly], order: usize) -> PowerSeries {
        PowerSeries::new(values.to_vec(), order)
    }

    pub fn r_series(&self) -> PowerSeries {
        Self::series(&self.r, self.order)
    }

    pub fn s_series(&self) -> PowerSeries {
        Self::series(&self.s, self.order)
    }

    pub fn a_series(&self) -> PowerSeries {
        Self::series(&self.a, self.order)
    }

    pub fn s_r_series(&self, r: usize) -> PowerSeries {
        Self::series(&self.s_r[r], self.order)
    }
}

/// Fills the table in increasing `n`: `s_n^(r)` from the two-term recursion in
/// `a_{k-1}`, then `s_n = s_n^(1)`, `a_n = p Σ s_k a_{n-k}`, and `r_n = Σ s_k r_{n-k}`.
pub fn sequences_by_recursion(order: usize, r_max: usize) -> SequenceTable {
    let r_max = r_max.max(1);
    let zero = MultiPoly::zero;
    let mut s_r = vec![vec![zero(); order + 1]; r_max + 1];
    s_r[0][0] = MultiPoly::one();
    let mut a = vec![MultiPoly::one()];
    let mut s = vec![zero()];
    let mut r = vec![MultiPoly::one()];
    let p = MultiPoly::p();
    let q = MultiPoly::q();

    for n in 1..=order {
        for rr in 1..=r_max {
            s_r[rr][n] = match n.cmp(&rr) {
                std::cmp::Ordering::Less => zero(),
                std::cmp::Ordering::Equal => MultiPoly::one(),
                std::cmp::Ordering::Greater => {
                    let first: MultiPoly = (1..=n - rr + 1)
                        .map(|k| &a[k - 1] * &s_r[rr - 1][n - k])
                        .sum();
                    let second: MultiPoly = (1..=n - rr)
                        .map(|k| {
                            let c = Rational::from_integer(BigInt::from(2 * n - 2 * k - rr));
                            (&a[k - 1] * &s_r[rr][n - k]).scale(&c)
                        })
                        .sum();
                    let inv_n = Rational::new(BigInt::from(1), BigInt::from(n));
                    (first.scale(&Rational::from_integer(BigInt::from(rr))) + &q * &second)
                        .scale(&inv_n)
                }
            };
        }
        s.push(s_r[1][n].clone());
        let a_n: MultiPoly = (1..=n).map(|k| &s[k] * &a[n - k]).sum();
        a.push(&p * &a_n);
        let r_n: MultiPoly = (1..=n).map(|k| &s[k] * &r[n - k]).sum();
        r.push(r_n);
    }
    SequenceTable {
        r,
        s,
        a,
        s_r,
        order,
    }
}

/// Outcome of one coefficient-wise identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub through_order: usize,
    pub passed: bool,
}

fn compare(
    name: String,
    lhs: &PowerSeries,
    rhs: &PowerSeries,
    out: &mut Vec<IdentityCheck>,
) -> Result<()> {
    let through = lhs.order().min(rhs.order());
    if let Some(n) = lhs.first_difference(rhs) {
        return Err(Error::Mismatch {
            check: name,
            detail: format!("coefficient of z^{n}: {} vs {}", lhs.coeff(n), rhs.coeff(n)),
        });
    }
    out.push(IdentityCheck {
        name,
        through_order: through,
        passed: true,
    });
    Ok(())
}

/// Checks `R = 1/(1-S)`, `A = 1/(1-pS)`, `S^(r) = S^r` and the differential
/// recurrence `(S^(r))' = r S^(r-1) A + 2qz (S^(r))' A - q r A S^(r)` for every
/// `r` in the table, coefficient-wise. Aborts on the first mismatch.
pub fn series_identity_checks(table: &SequenceTable) -> Result<Vec<IdentityCheck>> {
    let n = table.order;
    let mut out = Vec::new();
    let one = PowerSeries::one(n);
    let s = table.s_series();
    let a = table.a_series();
    let p = MultiPoly::p();
    let q = MultiPoly::q();

    let r_closed = (&one - &s).invert()?;
    compare(
        "R = 1/(1 - S)".into(),
        &table.r_series(),
        &r_closed,
        &mut out,
    )?;
    let a_closed = (&one - &s.scale(&p)).invert()?;
    compare("A = 1/(1 - pS)".into(), &a, &a_closed, &mut out)?;

    for r in 1..=table.r_max() {
        compare(
            format!("S^({r}) = S^{r}"),
            &table.s_r_series(r),
            &s.pow(r as u32),
            &mut out,
        )?;
    }

    for r in 1..=table.r_max() {
        let sr = table.s_r_series(r);
        let sr_prev = table.s_r_series(r - 1);
        let d = sr.derivative();
        let r_poly = MultiPoly::from_int(r as i64);
        let rhs1 = (&sr_prev * &a).scale(&r_poly);
        let rhs2 = (&d * &a).shift().scale(&(&q * &MultiPoly::from_int(2)));
        let rhs3 = (&a * &sr).scale(&(&q * &r_poly));
        let rhs = &(&rhs1 + &rhs2) - &rhs3;
        compare(
            format!("differential recurrence r={r}"),
            &d,
            &rhs.truncate(d.order()),
            &mut out,
        )?;
    }
    Ok(out)
}

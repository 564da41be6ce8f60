//! The Kesten laws `μ_{p,q}`: density, atoms, Cauchy transform and quadrature moments.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest moment order accepted by [`KestenMeasure::quadrature_moment`].
pub const MAX_QUADRATURE_ORDER: usize = 12;
/// Cap on integrand evaluations per quadrature call.
pub const MAX_NODES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub position: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KestenMeasure {
    pub p: f64,
    pub q: f64,
    pub edge: f64,
    pub atoms: Vec<Atom>,
    boolean: bool,
}

impl KestenMeasure {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite() && p >= 0.0 && q >= 0.0 && p + q > 0.0) {
            return Err(Error::Parameters(format!(
                "need p, q >= 0 with p + q > 0, got p={p}, q={q}"
            )));
        }
        let mut m = KestenMeasure {
            p,
            q,
            edge: (2.0 * (p + q)).sqrt(),
            atoms: Vec::new(),
            boolean: false,
        };
        m.atoms = m.atom_masses();
        Ok(m)
    }

    /// The `p + q → 0` limit: `(δ_{-1} + δ_1) / 2`.
    pub fn boolean_limit() -> Self {
        KestenMeasure {
            p: 0.0,
            q: 0.0,
            edge: 0.0,
            atoms: vec![
                Atom {
                    position: -1.0,
                    mass: 0.5,
                },
                Atom {
                    position: 1.0,
                    mass: 0.5,
                },
            ],
            boolean: true,
        }
    }

    pub fn is_boolean_limit(&self) -> bool {
        self.boolean
    }

    fn s(&self) -> f64 {
        self.p + self.q
    }

    /// Absolutely continuous part; zero outside `(-edge, edge)`.
    pub fn density(&self, x: f64) -> f64 {
        if self.boolean || x.abs() >= self.edge {
            return 0.0;
        }
        let s = self.s();
        let denominator = 2.0 - (2.0 - s) * x * x;
        // 2 - (2-s)x^2 vanishes at x^2 = 2/(2-s), which lies inside x^2 < 2s only if (s-1)^2 < 0.
        assert!(
            denominator > 0.0,
            "density denominator {denominator} not positive at x={x}, s={s}"
        );
        (2.0 * s - x * x).sqrt() / (PI * denominator)
    }

    /// `G(z) = s / ((s-1)z + z√(1 - 2s/z²))` with the principal root.
    fn cauchy_unchecked(&self, z: Complex64) -> Complex64 {
        if self.boolean {
            return z / (z * z - 1.0);
        }
        let s = self.s();
        let root = z * (Complex64::new(1.0, 0.0) - 2.0 * s / (z * z)).sqrt();
        s / ((s - 1.0) * z + root)
    }

    /// Cauchy transform `∫ dμ(x) / (z - x)`.
    pub fn cauchy_eval(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 && z.re.abs() <= self.edge {
            return Err(Error::OnCut(format!(
                "{z}, on the support [-{e}, {e}]",
                e = self.edge
            )));
        }
        if self.atoms.iter().any(|a| z.im == 0.0 && z.re == a.position) {
            return Err(Error::OnCut(format!("{z}, a pole")));
        }
        Ok(self.cauchy_unchecked(z))
    }

    /// Real poles of `G` outside the support, with their residues as masses.
    /// Present only when `p + q < 1`.
    pub fn atom_masses(&self) -> Vec<Atom> {
        if self.boolean {
            return self.atoms.clone();
        }
        let s = self.s();
        if s >= 1.0 {
            return Vec::new();
        }
        let a = 1.0 / (1.0 - s / 2.0).sqrt();
        // G = N / D with N(z) = (s-1)z - √(z² - 2s), D(z) = 2 - (2-s)z²; residue N(a) / D'(a).
        let numerator = (s - 1.0) * a - (a * a - 2.0 * s).sqrt();
        let mass = numerator / (-2.0 * (2.0 - s) * a);
        vec![Atom { position: -a, mass }, Atom { position: a, mass }]
    }

    /// `∫ x^n dμ`, with the continuous part computed under `x = edge·sin θ`.
    pub fn quadrature_moment(&self, n: usize, tol: f64) -> Result<f64> {
        if n > MAX_QUADRATURE_ORDER {
            return Err(Error::LimitExceeded {
                what: "quadrature moment order",
                value: n,
                limit: MAX_QUADRATURE_ORDER,
            });
        }
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|a| a.mass * a.position.powi(n as i32))
            .sum();
        if self.boolean {
            return Ok(atoms);
        }
        let s = self.s();
        let edge = self.edge;
        let damp = (1.0 - s) * (1.0 - s);
        let integrand = |theta: f64| {
            let (sin, cos) = theta.sin_cos();
            let c2 = cos * cos;
            let denom = c2 + damp * sin * sin;
            let ratio = if denom == 0.0 { 1.0 } else { c2 / denom };
            (s / PI) * (edge * sin).powi(n as i32) * ratio
        };
        Ok(adaptive_simpson(integrand, -FRAC_PI_2, FRAC_PI_2, tol)? + atoms)
    }

    pub fn total_mass(&self, tol: f64) -> Result<f64> {
        self.quadrature_moment(0, tol)
    }
}

struct Simpson<F> {
    f: F,
    evaluations: usize,
}

impl<F: Fn(f64) -> f64> Simpson<F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evaluations += 1;
        (self.f)(x)
    }

    /// Returns `(value, error estimate)`; stops splitting once the node budget is spent.
    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let flm = self.eval(0.5 * (a + m));
        let frm = self.eval(0.5 * (m + b));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol || self.evaluations + 2 > MAX_NODES {
            return (left + right + delta / 15.0, delta.abs() / 15.0);
        }
        let (l, le) = self.refine(a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
        let (r, re) = self.refine(m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
        (l + r, le + re)
    }
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`, seeded with eight panels.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    const PANELS: usize = 8;
    let mut rule = Simpson { f, evaluations: 0 };
    let h = (b - a) / PANELS as f64;
    let nodes: Vec<f64> = (0..=PANELS).map(|i| rule.eval(a + h * i as f64)).collect();
    let mut total = 0.0;
    let mut error = 0.0;
    for i in 0..PANELS {
        let lo = a + h * i as f64;
        let mid = rule.eval(lo + 0.5 * h);
        let whole = h / 6.0 * (nodes[i] + 4.0 * mid + nodes[i + 1]);
        let (v, e) = rule.refine(
            lo,
            lo + h,
            nodes[i],
            mid,
            nodes[i + 1],
            whole,
            tol / PANELS as f64,
            48,
        );
        total += v;
        error += e;
    }
    if error.is_nan() || error > tol {
        return Err(Error::Quadrature {
            estimate: total,
            error,
        });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn density_values() {
        let semicircle = KestenMeasure::new(1.0, 1.0).unwrap();
        assert!(close(semicircle.density(0.0), 1.0 / PI, 1e-15));
        let arcsine = KestenMeasure::new(0.0, 1.0).unwrap();
        assert!(close(arcsine.density(0.0), 1.0 / (PI * 2f64.sqrt()), 1e-15));
        assert!(close(
            arcsine.density(0.7),
            1.0 / (PI * (2.0 - 0.49f64).sqrt()),
            1e-14
        ));
        for (p, q) in [(1.0, 1.0), (0.3, 0.2), (1.5, 0.4), (3.0, 2.0)] {
            let m = KestenMeasure::new(p, q).unwrap();
            assert_eq!(m.density(m.edge), 0.0);
            assert_eq!(m.density(-m.edge - 1.0), 0.0);
            assert!((1..100).all(|i| m.density(m.edge * (i as f64 / 50.0 - 1.0)) >= 0.0));
        }
        assert!(KestenMeasure::new(0.0, 0.0).is_err());
        assert!(KestenMeasure::new(-1.0, 2.0).is_err());
    }

    #[test]
    fn atoms() {
        let m = KestenMeasure::new(0.3, 0.2).unwrap();
        assert_eq!(m.atoms.len(), 2);
        assert!(close(m.atoms[1].position, 1.0 / 0.75f64.sqrt(), 1e-14));
        // Residue of s / ((s-1)z + √(z²-2s)), simplified by hand.
        let s = 0.5;
        assert!(close(m.atoms[1].mass, (1.0 - s) / (2.0 - s), 1e-14));
        assert!(m.atoms.iter().all(|a| a.mass > 0.0 && a.mass < 0.5));
        assert!(KestenMeasure::new(0.5, 0.5).unwrap().atoms.is_empty());
        assert!(KestenMeasure::new(1.5, 0.4).unwrap().atoms.is_empty());
        let tiny = KestenMeasure::new(1e-9, 1e-9).unwrap();
        assert!(close(tiny.atoms[1].mass, 0.5, 1e-8));
        assert!(close(tiny.atoms[1].position, 1.0, 1e-8));
    }

    #[test]
    fn cauchy_values() {
        let semicircle = KestenMeasure::new(1.0, 1.0).unwrap();
        let g = semicircle.cauchy_eval(Complex64::new(3.0, 0.0)).unwrap();
        assert!(close(g.re, (3.0 - 5f64.sqrt()) / 2.0, 1e-14));
        let z = Complex64::new(0.0, 10.0);
        assert!((z * semicircle.cauchy_eval(z).unwrap() - 1.0).norm() < 0.03);
        let g = KestenMeasure::boolean_limit()
            .cauchy_eval(Complex64::new(2.0, 0.0))
            .unwrap();
        assert!(close(g.re, 2.0 / 3.0, 1e-15));
        assert!(semicircle.cauchy_eval(Complex64::new(1.0, 0.0)).is_err());
        // Negative real axis outside the support picks the same branch by symmetry.
        let g = semicircle.cauchy_eval(Complex64::new(-3.0, 0.0)).unwrap();
        assert!(close(g.re, -(3.0 - 5f64.sqrt()) / 2.0, 1e-14));
    }

    #[test]
    fn nevanlinna_property() {
        for (p, q) in [(1.0, 1.0), (0.0, 1.0), (0.3, 0.2), (1.5, 0.4), (4.0, 3.0)] {
            let m = KestenMeasure::new(p, q).unwrap();
            for re in [-5.0, -1.3, -0.2, 0.0, 0.4, 1.1, 7.0] {
                for im in [1e-3, 0.5, 2.0, 40.0] {
                    let g = m.cauchy_eval(Complex64::new(re, im)).unwrap();
                    assert!(g.im <= 0.0, "({p},{q}) at {re}+{im}i: {g}");
                }
            }
        }
    }

    #[test]
    fn stieltjes_inversion() {
        for (p, q) in [(1.0, 1.0), (0.3, 0.2), (1.5, 0.4), (0.0, 1.0)] {
            let m = KestenMeasure::new(p, q).unwrap();
            for i in 1..10 {
                let x = m.edge * (i as f64 / 5.0 - 1.0);
                let g = m.cauchy_eval(Complex64::new(x, 1e-6)).unwrap();
                assert!(close(-g.im / PI, m.density(x), 1e-4), "({p},{q}) x={x}");
            }
        }
    }

    #[test]
    fn quadrature_moments() {
        let semicircle = KestenMeasure::new(1.0, 1.0).unwrap();
        assert!(close(
            semicircle.quadrature_moment(0, 1e-12).unwrap(),
            1.0,
            1e-10
        ));
        assert!(close(
            semicircle.quadrature_moment(4, 1e-12).unwrap(),
            2.0,
            1e-10
        ));
        assert!(close(
            semicircle.quadrature_moment(3, 1e-12).unwrap(),
            0.0,
            1e-10
        ));
        let atomic = KestenMeasure::new(0.3, 0.2).unwrap();
        assert!(close(
            atomic.quadrature_moment(4, 1e-12).unwrap(),
            1.25,
            1e-10
        ));
        assert!(close(atomic.total_mass(1e-12).unwrap(), 1.0, 1e-10));
        let boolean = KestenMeasure::boolean_limit();
        assert_eq!(boolean.quadrature_moment(6, 1e-12).unwrap(), 1.0);
        assert!(semicircle.quadrature_moment(13, 1e-12).is_err());
    }

    #[test]
    fn quadrature_reports_unreachable_tolerance() {
        let err = adaptive_simpson(|x| x.sin() * 1e6, 0.0, 100.0, 1e-300).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn moments_match_exact_polynomials() {
        let exact = crate::moments::r_by_closed_form(5).unwrap();
        for (p, q) in [
            (1.0, 1.0),
            (0.0, 1.0),
            (1.0, 0.0),
            (0.5, 0.5),
            (0.3, 0.2),
            (1.5, 0.4),
        ] {
            let m = KestenMeasure::new(p, q).unwrap();
            assert!(close(m.total_mass(1e-13).unwrap(), 1.0, 1e-10));
            for (k, r_k) in exact.iter().enumerate() {
                let want = r_k.eval_f64(p, q, 0.0);
                let got = m.quadrature_moment(2 * k, 1e-12).unwrap();
                assert!(
                    close(got, want, 1e-8),
                    "({p},{q}) n={}: {got} vs {want}",
                    2 * k
                );
                assert!(close(
                    m.quadrature_moment(2 * k + 1, 1e-12).unwrap(),
                    0.0,
                    1e-8
                ));
            }
        }
    }
}

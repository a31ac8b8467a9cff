//! Rational inner functions `e^{i alpha} z1^b1 z2^b2 p~/p` and the
//! skew-products built from them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mobius::MobiusMap;
use crate::poly::{cis, wrap_angle, BiPoly, Cpx, UniPoly};
use crate::roots::{self, CircleRootSet};
use crate::tol;

#[derive(Clone, Debug)]
pub struct Rif {
    alpha: f64,
    beta: (usize, usize),
    p: BiPoly,
    ptilde: BiPoly,
    bidegree: (usize, usize),
    phase: Cpx,
    scale: f64,
}

/// Outcome of a stability scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Stability {
    Stable,
    /// A point at (or numerically at) which `p` vanishes in the closed bidisk.
    Witness { z1: Cpx, z2: Cpx },
}

impl Rif {
    /// Validates stability of `p` and caches its reflection at `bidegree`.
    pub fn build(p: BiPoly, bidegree: (usize, usize), alpha: f64, beta: (usize, usize)) -> Result<Self> {
        let rif = Self::new_unchecked(p, bidegree, alpha, beta)?;
        match validate_stability(&rif.p)? {
            Stability::Stable => Ok(rif),
            Stability::Witness { z1, z2 } => Err(Error::UnstableDenominator { z1, z2 }),
        }
    }

    /// Same as [`Rif::build`] without the stability scan.
    pub fn new_unchecked(
        p: BiPoly,
        bidegree: (usize, usize),
        alpha: f64,
        beta: (usize, usize),
    ) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !alpha.is_finite() {
            return Err(Error::Input("alpha must be finite".into()));
        }
        let ptilde = p.reflect(bidegree.0, bidegree.1)?;
        let scale = p.norm1();
        Ok(Rif {
            alpha,
            beta,
            p,
            ptilde,
            bidegree,
            phase: cis(alpha),
            scale,
        })
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Rif {
            alpha,
            phase: cis(alpha),
            ..self.clone()
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn phase(&self) -> Cpx {
        self.phase
    }

    pub fn beta(&self) -> (usize, usize) {
        self.beta
    }

    pub fn p(&self) -> &BiPoly {
        &self.p
    }

    pub fn ptilde(&self) -> &BiPoly {
        &self.ptilde
    }

    pub fn bidegree(&self) -> (usize, usize) {
        self.bidegree
    }

    /// `||p||_1`, an upper bound for `|p|` on the closed bidisk.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Numerator `e^{i alpha} z^beta p~` as a polynomial.
    pub fn numerator(&self) -> BiPoly {
        self.ptilde.shift(self.beta.0, self.beta.1).scale(self.phase)
    }

    fn monomial(&self, z1: Cpx, z2: Cpx) -> Cpx {
        z1.powu(self.beta.0 as u32) * z2.powu(self.beta.1 as u32)
    }

    /// Direct evaluation of the quotient.
    pub fn eval(&self, z1: Cpx, z2: Cpx) -> Cpx {
        self.phase * self.monomial(z1, z2) * self.ptilde.eval(z1, z2) / self.p.eval(z1, z2)
    }

    pub fn is_singular_at(&self, z1: Cpx, z2: Cpx) -> bool {
        let t = tol::EPS_SING * self.scale;
        self.p.eval(z1, z2).norm() <= t && self.ptilde.eval(z1, z2).norm() <= t
    }

    /// Boundary value on the torus; radial limit with Richardson
    /// extrapolation at singular points.
    pub fn boundary_value(&self, z1: Cpx, z2: Cpx) -> Result<Cpx> {
        if !self.is_singular_at(z1, z2) {
            let v = self.eval(z1, z2);
            if v.is_finite() {
                return Ok(v);
            }
        }
        self.radial_limit(z1, z2)
    }

    fn radial_limit(&self, z1: Cpx, z2: Cpx) -> Result<Cpx> {
        let samples: Vec<Cpx> = (8..=20)
            .map(|k| {
                let r = 1.0 - 0.5f64.powi(k);
                self.eval(z1 * r, z2 * r)
            })
            .collect();
        let extrap: Vec<Cpx> = samples.windows(2).map(|w| 2.0 * w[1] - w[0]).collect();
        let n = extrap.len();
        let w = extrap[n - 1];
        let converged = w.is_finite() && (w - extrap[n - 2]).norm() <= 1e-6 && (w.norm() - 1.0).abs() <= 1e-6;
        if converged {
            Ok(w / w.norm())
        } else {
            Err(Error::NonconvergentLimit { z1, z2 })
        }
    }

    /// Value for iteration: direct evaluation, or the radial limit (flagged)
    /// at torus points where the quotient is undetermined.
    pub fn value(&self, z1: Cpx, z2: Cpx) -> Result<(Cpx, bool)> {
        let on_torus = (z1.norm() - 1.0).abs() <= tol::TORUS && (z2.norm() - 1.0).abs() <= tol::TORUS;
        if on_torus && self.is_singular_at(z1, z2) {
            return Ok((self.radial_limit(z1, z2)?, true));
        }
        let v = self.eval(z1, z2);
        if v.is_finite() {
            Ok((v, false))
        } else {
            Ok((self.radial_limit(z1, z2)?, true))
        }
    }
}

/// Checks that `p` has no zeros in the open bidisk.
///
/// For `z1`-degree at most one, `p = p1 + z1 p2` is stable iff `p1` has no
/// zeros in the closed disk and `|p2| <= |p1|` there; the zero of each fiber
/// is `-p1/p2`. Higher `z1`-degree falls back to fiberwise root finding over
/// a polar grid of `z2`, which is a heuristic.
pub fn validate_stability(p: &BiPoly) -> Result<Stability> {
    let Some((m, _)) = p.bidegree() else {
        return Err(Error::ZeroPolynomial);
    };
    if m <= 1 {
        let (p1, p2) = p.split_p1_p2()?;
        if p1.is_zero() {
            return Ok(Stability::Witness {
                z1: Cpx::new(0.0, 0.0),
                z2: Cpx::new(0.0, 0.0),
            });
        }
        let witness = |z2: Cpx| Stability::Witness {
            z1: -p1.eval(z2) / p2.eval(z2),
            z2,
        };
        if let Some(r) = roots::root_in_closed_disk(&p1)? {
            // prefer a zero strictly inside the bidisk when one is on the grid
            if !p2.is_zero() {
                if let Some(w) = polar_grid(64).find(|&z2| p2.eval(z2).norm() > p1.eval(z2).norm()) {
                    return Ok(witness(w));
                }
            }
            return Ok(Stability::Witness {
                z1: Cpx::new(0.0, 0.0),
                z2: r,
            });
        }
        if p2.is_zero() {
            return Ok(Stability::Stable);
        }
        const N_CIRCLE: usize = 4096;
        for k in 0..N_CIRCLE {
            let z2 = Cpx::from_polar(1.0, std::f64::consts::TAU * k as f64 / N_CIRCLE as f64);
            if p2.eval(z2).norm() > (1.0 + tol::EPS_T) * p1.eval(z2).norm() {
                return Ok(witness(z2));
            }
        }
        if let Some(z2) = polar_grid(64).find(|&z2| p2.eval(z2).norm() > (1.0 + 1e-12) * p1.eval(z2).norm()) {
            return Ok(witness(z2));
        }
        return Ok(Stability::Stable);
    }

    const N: usize = 128;
    for i in 0..N {
        let r = i as f64 / N as f64;
        for j in 0..N {
            let z2 = Cpx::from_polar(r, std::f64::consts::TAU * j as f64 / N as f64);
            let fiber = p.restrict_fiber(z2);
            if fiber.is_zero() {
                return Ok(Stability::Witness {
                    z1: Cpx::new(0.0, 0.0),
                    z2,
                });
            }
            if fiber.degree() == Some(0) {
                continue;
            }
            let rs = roots::all_roots(&fiber)?;
            if let Some(z1) = rs
                .roots
                .iter()
                .map(|r| r.location)
                .find(|z| z.norm() < 1.0 - tol::EPS_T)
            {
                return Ok(Stability::Witness { z1, z2 });
            }
        }
    }
    Ok(Stability::Stable)
}

/// `n x n` polar grid of the open unit disk.
fn polar_grid(n: usize) -> impl Iterator<Item = Cpx> {
    (0..n).flat_map(move |i| {
        let r = (i + 1) as f64 / (n + 1) as f64;
        (0..n).map(move |j| Cpx::from_polar(r, std::f64::consts::TAU * j as f64 / n as f64))
    })
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum RispKind {
    /// `(phi, z2)` with `phi` of bidegree `(1, n)` and no monomial factor.
    Simple,
    /// `(z^beta phi, z2)`; iteration only.
    MonomialTwisted,
    /// `(phi1, phi2)`, a general rational inner mapping.
    Rim,
}

/// Cached fiber polynomials of a simple skew-product.
#[derive(Clone, Debug)]
pub struct FiberData {
    pub p1: UniPoly,
    pub p2: UniPoly,
    pub p1t: UniPoly,
    pub p2t: UniPoly,
    /// `D = p1 p1~ - p2 p2~`; its circle roots are the collapsing fibers.
    pub degeneracy: UniPoly,
    pub lambda_flat: CircleRootSet,
    pub lambda_sharp: CircleRootSet,
}

#[derive(Clone, Debug)]
pub struct Risp {
    kind: RispKind,
    phi: Rif,
    second: Option<Rif>,
    fibers: Option<FiberData>,
}

impl Risp {
    pub fn simple(phi: Rif) -> Result<Self> {
        if phi.beta != (0, 0) {
            return Err(Error::Degree("a simple skew-product has no monomial factor".into()));
        }
        let (m, n) = phi.bidegree;
        if m != 1 || phi.p.bidegree().map(|b| b.0) != Some(1) {
            return Err(Error::Degree(format!(
                "a simple skew-product needs z1-degree exactly 1, got declared {m}"
            )));
        }
        let (p1, p2) = phi.p.split_p1_p2()?;
        let p1t = p1.reflect(n)?;
        let p2t = p2.reflect(n)?;
        let d_scale = p1.norm1() * p1t.norm1() + p2.norm1() * p2t.norm1();
        let degeneracy = &(&p1 * &p1t) - &(&p2 * &p2t);
        if degeneracy.max_abs() <= 1e-12 * d_scale {
            return Err(Error::Degenerate(
                "p1 p1~ - p2 p2~ vanishes identically (toral input)".into(),
            ));
        }
        let lambda_flat = roots::circle_roots(&degeneracy, tol::EPS_T)?;
        let lambda_sharp = roots::circle_roots(&p2, tol::EPS_T)?;
        Ok(Risp {
            kind: RispKind::Simple,
            phi,
            second: None,
            fibers: Some(FiberData {
                p1,
                p2,
                p1t,
                p2t,
                degeneracy,
                lambda_flat,
                lambda_sharp,
            }),
        })
    }

    pub fn monomial_twisted(phi: Rif) -> Result<Self> {
        if phi.beta == (0, 0) {
            return Err(Error::Degree("monomial-twisted map needs a nonzero beta".into()));
        }
        Ok(Risp {
            kind: RispKind::MonomialTwisted,
            phi,
            second: None,
            fibers: None,
        })
    }

    pub fn rim(phi1: Rif, phi2: Rif) -> Self {
        Risp {
            kind: RispKind::Rim,
            phi: phi1,
            second: Some(phi2),
            fibers: None,
        }
    }

    pub fn kind(&self) -> RispKind {
        self.kind
    }

    pub fn phi(&self) -> &Rif {
        &self.phi
    }

    pub fn second(&self) -> Option<&Rif> {
        self.second.as_ref()
    }

    pub fn alpha(&self) -> f64 {
        self.phi.alpha
    }

    pub fn phase(&self) -> Cpx {
        self.phi.phase
    }

    pub fn fibers(&self) -> Result<&FiberData> {
        self.fibers.as_ref().ok_or(Error::NotSimple)
    }

    /// The Möbius map `z1 -> phi(z1, lambda)`.
    pub fn fiber_map(&self, lambda: Cpx) -> Result<MobiusMap> {
        let f = self.fibers()?;
        let e = self.phase();
        Ok(MobiusMap::new(
            e * f.p1t.eval(lambda),
            e * f.p2t.eval(lambda),
            f.p2.eval(lambda),
            f.p1.eval(lambda),
        ))
    }

    /// Singular points on collapsing fibers, one per `lambda` in the flat set.
    pub fn sf_points(&self) -> Result<Vec<SfPoint>> {
        let f = self.fibers()?;
        let q = crate::analysis::q_alpha(self)?;
        let mut out = Vec::new();
        for cr in &f.lambda_flat.angles {
            let lambda = cr.point();
            let p2 = f.p2.eval(lambda);
            let tau1 = -f.p1.eval(lambda) / p2;
            if !tau1.is_finite() || (tau1.norm() - 1.0).abs() > 1e-8 {
                return Err(Error::NonUnimodularTau { tau1, lambda });
            }
            let tau1 = tau1 / tau1.norm();
            let q_order = (!q.is_identically_zero).then(|| crate::analysis::vanishing_order(&q.q, lambda));
            let crossing = match q_order {
                Some(0) => Crossing::SingleBranch,
                Some(k) if k % 2 == 0 => Crossing::TwoBranch,
                _ => Crossing::Undetermined,
            };
            let boundary_value = self.phi.boundary_value(tau1, lambda).ok();
            let fixed = boundary_value.is_some_and(|u| (u - tau1).norm() <= 1e-6);
            let residual = self
                .phi
                .p
                .eval(tau1, lambda)
                .norm()
                .max(self.phi.ptilde.eval(tau1, lambda).norm())
                / self.phi.scale;
            out.push(SfPoint {
                tau1,
                lambda,
                crossing,
                q_order,
                boundary_value,
                fixed,
                residual,
            });
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Crossing {
    SingleBranch,
    TwoBranch,
    Undetermined,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SfPoint {
    pub tau1: Cpx,
    pub lambda: Cpx,
    pub crossing: Crossing,
    /// Vanishing order of `Q_alpha` at `lambda`; `None` when `Q_alpha = 0`.
    pub q_order: Option<u32>,
    /// Radial boundary value of `phi` at `(tau1, lambda)`.
    pub boundary_value: Option<Cpx>,
    /// Whether the boundary value equals `tau1`.
    pub fixed: bool,
    /// `max(|p|, |p~|) / ||p||_1` at the point.
    pub residual: f64,
}

/// The `alpha` for which `e^{i alpha} p~/p` has boundary value `tau.0` at `tau`.
pub fn normalize_alpha_for_sf(p: &BiPoly, bidegree: (usize, usize), tau: (Cpx, Cpx)) -> Result<f64> {
    let base = Rif::new_unchecked(p.clone(), bidegree, 0.0, (0, 0))?;
    let u = base.boundary_value(tau.0, tau.1)?;
    let alpha = wrap_angle((tau.0 / u).arg());
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn r(x: f64) -> Cpx {
        Cpx::new(x, 0.0)
    }

    fn ex21_p() -> BiPoly {
        BiPoly::from_real(&[&[2.0, -1.0], &[-1.0, 0.0]])
    }

    #[test]
    fn stability_examples() {
        let ex51 = BiPoly::from_real(&[&[4.0, -3.0, 1.0], &[-1.0, -1.0, 0.0]]);
        assert_eq!(validate_stability(&ex51).unwrap(), Stability::Stable);
        let diag = BiPoly::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]);
        assert_eq!(validate_stability(&diag).unwrap(), Stability::Stable);
        let bad = BiPoly::from_real(&[&[1.0], &[-2.0]]);
        match validate_stability(&bad).unwrap() {
            Stability::Witness { z1, z2 } => {
                assert!(bad.eval(z1, z2).norm() < 1e-12);
                assert!((z1 - 0.5).norm() < 1e-12);
            }
            Stability::Stable => panic!("1 - 2 z1 is not stable"),
        }
    }

    #[test]
    fn interior_zero_rejected_with_witness() {
        let p = BiPoly::from_real(&[&[1.0, -1.0], &[-1.0, 0.0]]);
        match Rif::build(p.clone(), (1, 1), 0.0, (0, 0)) {
            Err(Error::UnstableDenominator { z1, z2 }) => {
                assert!(p.eval(z1, z2).norm() < 1e-12);
                assert!(z1.norm() < 1.0 && z2.norm() < 1.0);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn higher_degree_scan() {
        // (2 - z1)^2 - z2 is stable; (z1 - 0.3)(z1 - 3) is not
        let good = BiPoly::from_real(&[&[4.0, -1.0], &[-4.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(validate_stability(&good).unwrap(), Stability::Stable);
        let bad = BiPoly::from_real(&[&[0.9], &[-3.3], &[1.0]]);
        match validate_stability(&bad).unwrap() {
            Stability::Witness { z1, .. } => assert!((z1 - 0.3).norm() < 1e-9),
            Stability::Stable => panic!("zero at z1 = 0.3 missed"),
        }
    }

    #[test]
    fn constant_rif() {
        let rif = Rif::build(BiPoly::constant(r(1.0)), (0, 0), 0.0, (0, 0)).unwrap();
        assert_eq!(rif.eval(r(0.3), r(-0.2)), r(1.0));
    }

    #[test]
    fn ex21_values() {
        let rif = Rif::build(ex21_p(), (1, 1), PI, (0, 0)).unwrap();
        assert!(rif.is_singular_at(r(1.0), r(1.0)));
        let v = rif.boundary_value(r(1.0), r(1.0)).unwrap();
        assert!((v - 1.0).norm() < 1e-9);
        let i = Cpx::new(0.0, 1.0);
        let v = rif.boundary_value(i, i).unwrap();
        assert!((v - i).norm() < 1e-12);
        let z = Cpx::from_polar(1.0, 0.7);
        let w = Cpx::from_polar(1.0, -2.1);
        assert!((rif.eval(z, w).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_normalization() {
        let a = normalize_alpha_for_sf(&ex21_p(), (1, 1), (r(1.0), r(1.0))).unwrap();
        assert!((a - PI).abs() < 1e-9);
        let ex51 = BiPoly::from_real(&[&[4.0, -3.0, 1.0], &[-1.0, -1.0, 0.0]]);
        let a = normalize_alpha_for_sf(&ex51, (1, 2), (r(1.0), r(1.0))).unwrap();
        assert!((a - PI).abs() < 1e-6);
        // regular point: alpha = -arg(p~/p)
        let p = BiPoly::from_real(&[&[3.0, -1.0], &[-1.0, 0.0]]);
        let a = normalize_alpha_for_sf(&p, (1, 1), (r(1.0), r(1.0))).unwrap();
        let rif = Rif::new_unchecked(p, (1, 1), a, (0, 0)).unwrap();
        assert!((rif.eval(r(1.0), r(1.0)) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn simple_requires_degree_one() {
        let p = BiPoly::from_real(&[&[4.0, 0.0], &[0.0, 0.0], &[1.0, 0.0]]);
        let rif = Rif::build(p, (2, 0), 0.0, (0, 0)).unwrap();
        assert!(matches!(Risp::simple(rif), Err(Error::Degree(_))));
    }
}

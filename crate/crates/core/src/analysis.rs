//! Fixed-point analysis of simple skew-products: `Q_alpha`, the two
//! fixed-point branches, curve tracing, rotation belts, multiplier
//! profiles, and the fixed-point polynomials of a general mapping.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mobius::{MobiusKind, MobiusMap};
use crate::poly::{wrap_angle, BiPoly, Cpx, UniPoly};
use crate::rif::{Rif, Risp};
use crate::roots::{self, angle_dist, CircleRootSet};
use crate::tol;

// ---------------------------------------------------------------------------
// Q_alpha
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct QPoly {
    pub q: UniPoly,
    pub circle_roots: CircleRootSet,
    pub is_identically_zero: bool,
    /// `(angle, order)` for each circle root.
    pub vanishing_orders: Vec<(f64, u32)>,
    /// Coefficient scale of the terms that were summed.
    pub scale: f64,
}

impl QPoly {
    /// Largest coefficient of `q~ - e^{-2i alpha} q` at degree `2n`, relative to scale.
    pub fn symmetry_defect(&self, alpha: f64, n: usize) -> f64 {
        if self.is_identically_zero {
            return 0.0;
        }
        let Ok(qt) = self.q.reflect(2 * n) else {
            return f64::INFINITY;
        };
        let rhs = self.q.scale(crate::poly::cis(-2.0 * alpha));
        (qt - rhs).max_abs() / self.scale.max(f64::MIN_POSITIVE)
    }
}

/// `Q_alpha = (p1 - e^{i alpha} p1~)^2 + 4 e^{i alpha} p2 p2~`.
pub fn q_alpha(r: &Risp) -> Result<QPoly> {
    let f = r.fibers()?;
    let e = r.phase();
    let diff = &f.p1 - &f.p1t.scale(e);
    let prod = (&f.p2 * &f.p2t).scale(4.0 * e);
    let raw = &(&diff * &diff) + &prod;
    let scale = (f.p1.norm1() + f.p1t.norm1()).powi(2) + 4.0 * f.p2.norm1() * f.p2t.norm1();
    if raw.max_abs() <= 1e-12 * scale {
        return Ok(QPoly {
            q: UniPoly::zero(),
            circle_roots: CircleRootSet {
                tolerance: tol::EPS_T,
                ..Default::default()
            },
            is_identically_zero: true,
            vanishing_orders: Vec::new(),
            scale,
        });
    }
    let circle_roots = roots::circle_roots(&raw, tol::EPS_T)?;
    let vanishing_orders = circle_roots
        .angles
        .iter()
        .map(|c| (c.angle, vanishing_order(&raw, c.point())))
        .collect();
    Ok(QPoly {
        q: raw,
        circle_roots,
        is_identically_zero: false,
        vanishing_orders,
        scale,
    })
}

/// Smallest `k` with `|q^{(k)}(z)|` above `1e-8` of its evaluation scale.
pub fn vanishing_order(q: &UniPoly, z: Cpx) -> u32 {
    let mut d = q.clone();
    let mut k = 0;
    while !d.is_zero() {
        let scale = d.eval_abs(z);
        if d.eval(z).norm() > 1e-8 * scale {
            return k;
        }
        d = d.derivative();
        k += 1;
    }
    k
}

// ---------------------------------------------------------------------------
// psi branches
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PsiPair {
    pub psi1: Cpx,
    pub psi2: Cpx,
    /// The square root of `Q_alpha(lambda)` used for `psi1`.
    pub sqrt_q: Cpx,
}

/// Roots of `p2 z^2 + (p1 - e p1~) z - e p2~ = 0` at `lambda`, i.e. the
/// fixed points of the fiber map: `(e p1~ - p1 +- sqrt Q) / (2 p2)`.
pub fn psi_branches(r: &Risp, lambda: Cpx) -> Result<PsiPair> {
    psi_branches_with(r, lambda, None)
}

/// As [`psi_branches`], choosing the sign of `sqrt Q` nearest to `prev`.
pub fn psi_branches_with(r: &Risp, lambda: Cpx, prev: Option<Cpx>) -> Result<PsiPair> {
    let f = r.fibers()?;
    let e = r.phase();
    let a = f.p2.eval(lambda);
    if a.norm() <= 1e-12 * f.p2.eval_abs(lambda) {
        return Err(Error::LambdaSharpPoint { lambda });
    }
    let b = f.p1.eval(lambda) - e * f.p1t.eval(lambda);
    let c = -e * f.p2t.eval(lambda);
    let disc = b * b - 4.0 * a * c;
    // at a root of Q the rounding in disc would otherwise split psi by ~sqrt(eps)
    let b_abs = f.p1.eval_abs(lambda) + f.p1t.eval_abs(lambda);
    let disc_abs = b_abs * b_abs + 4.0 * f.p2.eval_abs(lambda) * f.p2t.eval_abs(lambda);
    let mut s = if disc.norm() <= 1e-12 * disc_abs {
        Cpx::new(0.0, 0.0)
    } else {
        disc.sqrt()
    };
    if let Some(p) = prev {
        if (-s - p).norm() < (s - p).norm() {
            s = -s;
        }
    }
    let (np, nm) = (-b + s, -b - s);
    let (psi1, psi2) = if np.norm() >= nm.norm() {
        let big = np / (2.0 * a);
        let other = if big.norm() > 0.0 { c / (a * big) } else { nm / (2.0 * a) };
        (big, other)
    } else {
        let big = nm / (2.0 * a);
        let other = if big.norm() > 0.0 { c / (a * big) } else { np / (2.0 * a) };
        (other, big)
    };
    Ok(PsiPair {
        psi1,
        psi2,
        sqrt_q: s,
    })
}

/// Multiplier `det / (c z1 + d)^2` of the fiber map at `z1`.
pub fn fixed_point_multiplier(r: &Risp, lambda: Cpx, z1: Cpx) -> Result<Cpx> {
    Ok(r.fiber_map(lambda)?.derivative(z1))
}

// ---------------------------------------------------------------------------
// Curve tracing
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum PointClass {
    HyperbolicAttracting,
    HyperbolicRepelling,
    Parabolic,
    EllipticInterior,
    EllipticExterior,
    IdentityFiber,
}

impl PointClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PointClass::HyperbolicAttracting => "hyperbolic-attracting",
            PointClass::HyperbolicRepelling => "hyperbolic-repelling",
            PointClass::Parabolic => "parabolic",
            PointClass::EllipticInterior => "elliptic-interior",
            PointClass::EllipticExterior => "elliptic-exterior",
            PointClass::IdentityFiber => "identity-fiber",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            PointClass::HyperbolicAttracting,
            PointClass::HyperbolicRepelling,
            PointClass::Parabolic,
            PointClass::EllipticInterior,
            PointClass::EllipticExterior,
            PointClass::IdentityFiber,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurveSample {
    pub lambda_angle: f64,
    pub z1: Cpx,
    pub on_torus: bool,
    pub class: PointClass,
    pub multiplier: Cpx,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointCurve {
    /// 1 or 2.
    pub branch: u8,
    pub samples: Vec<CurveSample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveTrace {
    pub branches: [FixedPointCurve; 2],
    /// Circle roots of `Q_alpha` (off the excluded sets) crossed by the trace.
    pub branch_events: Vec<f64>,
    /// Centers of the excluded arcs (collapsing and `p2 = 0` fibers).
    pub excluded: Vec<f64>,
    /// `|psi1|, |psi2|` per traced angle.
    pub modulus_profile: Vec<(f64, f64, f64)>,
}

fn classify_point(m: &MobiusMap, z1: Cpx, k: Cpx) -> Option<PointClass> {
    Some(match m.kind {
        MobiusKind::Constant => return None,
        MobiusKind::Identity => PointClass::IdentityFiber,
        MobiusKind::Parabolic => PointClass::Parabolic,
        MobiusKind::Rotation | MobiusKind::Elliptic => {
            if z1.norm() < 1.0 {
                PointClass::EllipticInterior
            } else {
                PointClass::EllipticExterior
            }
        }
        MobiusKind::Hyperbolic | MobiusKind::Loxodromic => {
            if k.norm() < 1.0 {
                PointClass::HyperbolicAttracting
            } else {
                PointClass::HyperbolicRepelling
            }
        }
    })
}

/// Excluded angles: collapsing fibers and zeros of `p2` on the circle.
pub fn excluded_angles(r: &Risp) -> Result<Vec<f64>> {
    let f = r.fibers()?;
    Ok(f.lambda_flat
        .angles
        .iter()
        .chain(f.lambda_sharp.angles.iter())
        .map(|c| c.angle)
        .collect())
}

/// Samples both fixed-point branches at `t_k = -pi + 2 pi (k+1)/n`.
pub fn trace_fixed_curves(r: &Risp, n_samples: usize) -> Result<CurveTrace> {
    if n_samples == 0 {
        return Err(Error::Input("n_samples must be positive".into()));
    }
    let q = q_alpha(r)?;
    if q.is_identically_zero {
        return Err(Error::QIdenticallyZero);
    }
    let excluded = excluded_angles(r)?;
    let step = TAU / n_samples as f64;

    let mut b1 = Vec::with_capacity(n_samples);
    let mut b2 = Vec::with_capacity(n_samples);
    let mut profile = Vec::with_capacity(n_samples);
    // last two (angle, sqrt Q); the branch is chosen against a linear prediction
    // so that sqrt Q keeps its sign through double roots
    let mut hist: Vec<(f64, Cpx)> = Vec::with_capacity(2);
    for k in 0..n_samples {
        let t = -PI + step * (k + 1) as f64;
        if excluded.iter().any(|&x| angle_dist(x, t) <= tol::EXCLUSION) {
            continue;
        }
        let lambda = Cpx::from_polar(1.0, t);
        let predicted = match hist.as_slice() {
            [(t0, s0), (t1, s1)] => Some(s1 + (s1 - s0) * ((t - t1) / (t1 - t0))),
            [(_, s1)] => Some(*s1),
            _ => None,
        };
        let pair = psi_branches_with(r, lambda, predicted)?;
        if hist.len() == 2 {
            hist.remove(0);
        }
        hist.push((t, pair.sqrt_q));
        let m = r.fiber_map(lambda)?;
        for (z1, out) in [(pair.psi1, &mut b1), (pair.psi2, &mut b2)] {
            let k = m.derivative(z1);
            if let Some(class) = classify_point(&m, z1, k) {
                out.push(CurveSample {
                    lambda_angle: t,
                    z1,
                    on_torus: (z1.norm() - 1.0).abs() <= tol::EPS_T,
                    class,
                    multiplier: k,
                });
            }
        }
        profile.push((t, pair.psi1.norm(), pair.psi2.norm()));
    }
    let branch_events = q
        .circle_roots
        .angles
        .iter()
        .map(|c| c.angle)
        .filter(|&a| !excluded.iter().any(|&x| angle_dist(x, a) <= tol::EXCLUSION))
        .collect();
    Ok(CurveTrace {
        branches: [
            FixedPointCurve {
                branch: 1,
                samples: b1,
            },
            FixedPointCurve {
                branch: 2,
                samples: b2,
            },
        ],
        branch_events,
        excluded,
        modulus_profile: profile,
    })
}

// ---------------------------------------------------------------------------
// Rotation belts
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    Parabolic,
    IdentityFiber,
    /// Non-identity rotation fiber over a zero of `p2`; no fixed point on the circle.
    Rotation,
    /// Collapsing fiber.
    Collapsing,
}

#[derive(Clone, Debug, Serialize)]
pub struct Belt {
    pub start_angle: f64,
    pub end_angle: f64,
    pub start_kind: BoundaryKind,
    pub end_kind: BoundaryKind,
    /// Rotation fibers inside the belt that split it into several arcs.
    pub merged_across: Vec<f64>,
}

impl Belt {
    /// Counter-clockwise angular length.
    pub fn length(&self) -> f64 {
        let d = (self.end_angle - self.start_angle).rem_euclid(TAU);
        if d == 0.0 {
            TAU
        } else {
            d
        }
    }

    /// Angle `fraction` of the way from start to end.
    pub fn interior_angle(&self, fraction: f64) -> f64 {
        wrap_angle(self.start_angle + fraction * self.length())
    }

    pub fn contains(&self, t: f64) -> bool {
        let d = (t - self.start_angle).rem_euclid(TAU);
        d > 0.0 && d < self.length()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BeltReport {
    pub belts: Vec<Belt>,
    pub qa_circle_root_count_excl_flat: usize,
    pub bound: usize,
    pub bound_satisfied: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
struct Breakpoint {
    angle: f64,
    kind: BoundaryKind,
}

/// Interior samples per arc when testing for fixed points on the circle.
const ARC_SAMPLES: usize = 9;
/// `||psi| - 1|` above this means the fixed point is off the circle.
const OFF_CIRCLE: f64 = 1e-7;

fn classify_breakpoint(r: &Risp, angle: f64, flat: bool, sharp: bool) -> Result<BoundaryKind> {
    if flat {
        return Ok(BoundaryKind::Collapsing);
    }
    let m = r.fiber_map(Cpx::from_polar(1.0, angle))?;
    match (m.kind, sharp) {
        (MobiusKind::Identity, _) => Ok(BoundaryKind::IdentityFiber),
        (MobiusKind::Rotation, true) => Ok(BoundaryKind::Rotation),
        (MobiusKind::Parabolic, false) => Ok(BoundaryKind::Parabolic),
        (kind, _) => Err(Error::AmbiguousBoundary {
            angle,
            detail: format!("fiber map classified as {kind:?}"),
        }),
    }
}

/// Arcs of fibers with no fixed point on the circle, bounded by fibers that
/// carry one.
pub fn rotation_belts(r: &Risp) -> Result<BeltReport> {
    let f = r.fibers()?;
    let q = q_alpha(r)?;
    if q.is_identically_zero {
        return Err(Error::QIdenticallyZero);
    }
    let same = |a: f64, b: f64| angle_dist(a, b) <= 1e-7;
    let flat: Vec<f64> = f.lambda_flat.angles.iter().map(|c| c.angle).collect();
    let sharp: Vec<f64> = f.lambda_sharp.angles.iter().map(|c| c.angle).collect();

    let mut angles: Vec<f64> = q.circle_roots.angles.iter().map(|c| c.angle).collect();
    angles.extend(&flat);
    angles.extend(&sharp);
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| same(*a, *b));
    if angles.len() > 1 && same(angles[0], angles[angles.len() - 1]) {
        angles.pop();
    }

    let count: usize = q
        .circle_roots
        .angles
        .iter()
        .filter(|c| !flat.iter().any(|&x| same(x, c.angle)))
        .map(|c| c.multiplicity)
        .sum();
    let bound = count / 2;
    let mut notes = Vec::new();

    if angles.is_empty() {
        notes.push("no parabolic, collapsing or p2 = 0 fibers: no arc can be bounded".into());
        return Ok(BeltReport {
            belts: Vec::new(),
            qa_circle_root_count_excl_flat: count,
            bound,
            bound_satisfied: true,
            notes,
        });
    }

    let bps: Vec<Breakpoint> = angles
        .iter()
        .map(|&a| {
            let is_flat = flat.iter().any(|&x| same(x, a));
            let is_sharp = sharp.iter().any(|&x| same(x, a));
            classify_breakpoint(r, a, is_flat, is_sharp).map(|kind| Breakpoint { angle: a, kind })
        })
        .collect::<Result<_>>()?;

    let m = bps.len();
    let arc_len = |i: usize| {
        let d = (bps[(i + 1) % m].angle - bps[i].angle).rem_euclid(TAU);
        if d == 0.0 {
            TAU
        } else {
            d
        }
    };
    let mut free = Vec::with_capacity(m);
    for i in 0..m {
        let len = arc_len(i);
        let mut n_free = 0;
        let mut impure = false;
        for j in 1..=ARC_SAMPLES {
            let t = bps[i].angle + len * j as f64 / (ARC_SAMPLES + 1) as f64;
            let lambda = Cpx::from_polar(1.0, t);
            let pair = psi_branches(r, lambda)?;
            let off = (pair.psi1.norm() - 1.0)
                .abs()
                .min((pair.psi2.norm() - 1.0).abs());
            if off > OFF_CIRCLE {
                n_free += 1;
                if !r.fiber_map(lambda)?.is_elliptic() {
                    impure = true;
                }
            }
        }
        if n_free != 0 && n_free != ARC_SAMPLES {
            notes.push(format!(
                "arc starting at {:.6} mixes fibers with and without circle fixed points; treated as not free",
                bps[i].angle
            ));
        }
        if impure && n_free == ARC_SAMPLES {
            notes.push(format!(
                "arc starting at {:.6} has a fixed-point-free fiber that is not elliptic",
                bps[i].angle
            ));
        }
        free.push(n_free == ARC_SAMPLES && !impure);
    }

    let mergeable = |i: usize| bps[i].kind == BoundaryKind::Rotation;
    // a run may start at breakpoint s if s is not mergeable or the arc before s is not free
    let start = (0..m).find(|&s| !mergeable(s) || !free[(s + m - 1) % m]);
    let mut belts = Vec::new();
    match start {
        None => {
            if free.iter().all(|&x| x) {
                notes.push("every fiber is a rotation; the whole torus is fixed-point free but unbounded".into());
            }
        }
        Some(s) => {
            let mut i = 0;
            while i < m {
                let idx = (s + i) % m;
                if !free[idx] {
                    i += 1;
                    continue;
                }
                let run_start = idx;
                let mut merged_across = Vec::new();
                let mut j = i;
                loop {
                    let next_bp = (s + j + 1) % m;
                    if j + 1 < m && mergeable(next_bp) && free[next_bp] {
                        merged_across.push(bps[next_bp].angle);
                        j += 1;
                    } else {
                        break;
                    }
                }
                let end_bp = (s + j + 1) % m;
                let (sk, ek) = (bps[run_start].kind, bps[end_bp].kind);
                let bounded = |k: BoundaryKind| matches!(k, BoundaryKind::Parabolic | BoundaryKind::IdentityFiber);
                if bounded(sk) && bounded(ek) {
                    belts.push(Belt {
                        start_angle: bps[run_start].angle,
                        end_angle: bps[end_bp].angle,
                        start_kind: sk,
                        end_kind: ek,
                        merged_across: merged_across.clone(),
                    });
                } else {
                    notes.push(format!(
                        "fixed-point-free arc from {:.6} to {:.6} ends at {:?}/{:?}; not a belt",
                        bps[run_start].angle, bps[end_bp].angle, sk, ek
                    ));
                }
                if !merged_across.is_empty() {
                    notes.push(format!(
                        "merged across rotation fibers at {merged_across:?} (p2 = 0, no fixed point on the circle)"
                    ));
                }
                i = j + 1;
            }
        }
    }
    belts.sort_by(|a, b| a.start_angle.total_cmp(&b.start_angle));
    let bound_satisfied = belts.len() <= bound;
    Ok(BeltReport {
        belts,
        qa_circle_root_count_excl_flat: count,
        bound,
        bound_satisfied,
        notes,
    })
}

// ---------------------------------------------------------------------------
// Multiplier profile
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProfileSample {
    pub lambda_angle: f64,
    pub multiplier: Cpx,
    /// `p/q` with `arg(multiplier) / pi` within `1e-6`, for unimodular multipliers.
    pub rational: Option<(i64, u64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplierProfile {
    pub branch: u8,
    pub samples: Vec<ProfileSample>,
    /// Angles between consecutive samples where the multiplier jumps.
    pub discontinuities: Vec<f64>,
    /// Jumps not explained by a nearby excluded angle or branch point.
    pub unexpected_discontinuities: Vec<f64>,
}

/// Best `p/q` approximation with `q <= max_q` within `eps`.
pub fn rational_approx(x: f64, max_q: u64, eps: f64) -> Option<(i64, u64)> {
    (1..=max_q).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() <= eps).then_some((p as i64, q))
    })
}

pub fn multiplier_profile(r: &Risp, curve: &FixedPointCurve) -> Result<MultiplierProfile> {
    let q = q_alpha(r)?;
    if q.is_identically_zero {
        return Err(Error::QIdenticallyZero);
    }
    let mut special = excluded_angles(r)?;
    special.extend(q.circle_roots.angles.iter().map(|c| c.angle));

    let samples: Vec<ProfileSample> = curve
        .samples
        .iter()
        .map(|s| {
            let unimodular = (s.multiplier.norm() - 1.0).abs() <= 1e-9;
            ProfileSample {
                lambda_angle: s.lambda_angle,
                multiplier: s.multiplier,
                rational: if unimodular {
                    rational_approx(s.multiplier.arg() / PI, 64, 1e-6)
                } else {
                    None
                },
            }
        })
        .collect();

    let mut discontinuities = Vec::new();
    let mut unexpected = Vec::new();
    for w in samples.windows(2) {
        let (a, b) = (w[0], w[1]);
        let jump = (b.multiplier - a.multiplier).norm();
        if jump > 0.1 * (1.0 + a.multiplier.norm() + b.multiplier.norm()) {
            let mid = wrap_angle(a.lambda_angle + 0.5 * wrap_angle(b.lambda_angle - a.lambda_angle));
            discontinuities.push(mid);
            let gap = angle_dist(a.lambda_angle, b.lambda_angle);
            let explained = special
                .iter()
                .any(|&x| angle_dist(x, mid) <= 2.0 * gap + tol::EXCLUSION);
            if !explained {
                unexpected.push(mid);
            }
        }
    }
    Ok(MultiplierProfile {
        branch: curve.branch,
        samples,
        discontinuities,
        unexpected_discontinuities: unexpected,
    })
}

// ---------------------------------------------------------------------------
// General mappings
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct RimFixedData {
    #[serde(skip)]
    pub p1: BiPoly,
    #[serde(skip)]
    pub p2: BiPoly,
    pub p1_bidegree: Option<(usize, usize)>,
    pub p2_bidegree: Option<(usize, usize)>,
    /// Declared bidegrees at which the symmetry is checked.
    pub declared: [(usize, usize); 2],
    pub symmetric_ok: [bool; 2],
    pub symmetry_defect: [f64; 2],
    pub p1_identically_zero: bool,
    pub p2_identically_zero: bool,
    pub common_factor_suspected: bool,
    /// `M1 N2 + M2 N1` from the actual bidegrees; `None` when inapplicable.
    pub bezout_bound: Option<usize>,
    pub common_zero_estimate: Vec<(Cpx, Cpx)>,
    pub flags: Vec<String>,
}

/// `e^{i alpha} z^beta p~ - z_j p` at the bidegree where it is essentially symmetric.
fn fixed_point_poly(phi: &Rif, coordinate: usize) -> (BiPoly, (usize, usize)) {
    let (m, n) = phi.bidegree();
    let (b1, b2) = phi.beta();
    let (shift, declared) = if coordinate == 1 {
        ((1, 0), (m + b1 + 1, n + b2))
    } else {
        ((0, 1), (m + b1, n + b2 + 1))
    };
    let poly = &phi.numerator() - &phi.p().shift(shift.0, shift.1);
    (poly, declared)
}

fn torus_grid_zeros(p1: &BiPoly, p2: &BiPoly) -> Vec<(Cpx, Cpx)> {
    const G: usize = 128;
    let s1 = p1.norm1().max(f64::MIN_POSITIVE);
    let s2 = p2.norm1().max(f64::MIN_POSITIVE);
    let at = |i: usize, j: usize| {
        let z1 = Cpx::from_polar(1.0, TAU * i as f64 / G as f64);
        let z2 = Cpx::from_polar(1.0, TAU * j as f64 / G as f64);
        (z1, z2)
    };
    let f = |z1: Cpx, z2: Cpx| (p1.eval(z1, z2).norm() / s1).powi(2) + (p2.eval(z1, z2).norm() / s2).powi(2);
    let grid: Vec<Vec<f64>> = (0..G)
        .map(|i| {
            (0..G)
                .map(|j| {
                    let (a, b) = at(i, j);
                    f(a, b)
                })
                .collect()
        })
        .collect();
    let (d1, d2) = (p1.derivative_z1(), p1.derivative_z2());
    let (e1, e2) = (p2.derivative_z1(), p2.derivative_z2());
    let mut found: Vec<(Cpx, Cpx)> = Vec::new();
    for i in 0..G {
        for j in 0..G {
            let v = grid[i][j];
            if v > 0.05 {
                continue;
            }
            let is_min = (-1i64..=1).all(|di| {
                (-1i64..=1).all(|dj| {
                    let ii = (i as i64 + di).rem_euclid(G as i64) as usize;
                    let jj = (j as i64 + dj).rem_euclid(G as i64) as usize;
                    (di == 0 && dj == 0) || grid[ii][jj] >= v
                })
            });
            if !is_min {
                continue;
            }
            let (mut z1, mut z2) = at(i, j);
            let mut ok = false;
            for _ in 0..50 {
                let (f1, f2) = (p1.eval(z1, z2), p2.eval(z1, z2));
                let (a, b) = (d1.eval(z1, z2), d2.eval(z1, z2));
                let (c, d) = (e1.eval(z1, z2), e2.eval(z1, z2));
                let det = a * d - b * c;
                if det.norm() == 0.0 || !det.is_finite() {
                    break;
                }
                let dz1 = (d * f1 - b * f2) / det;
                let dz2 = (a * f2 - c * f1) / det;
                z1 -= dz1;
                z2 -= dz2;
                if dz1.norm() + dz2.norm() <= 1e-14 {
                    ok = true;
                    break;
                }
            }
            let on_torus = (z1.norm() - 1.0).abs() <= 1e-6 && (z2.norm() - 1.0).abs() <= 1e-6;
            let small = p1.eval(z1, z2).norm() <= 1e-10 * s1 && p2.eval(z1, z2).norm() <= 1e-10 * s2;
            if (ok || small) && on_torus && small {
                let (z1, z2) = (z1 / z1.norm(), z2 / z2.norm());
                if !found
                    .iter()
                    .any(|&(a, b)| (a - z1).norm() + (b - z2).norm() <= 1e-6)
                {
                    found.push((z1, z2));
                }
            }
        }
    }
    found.sort_by(|a, b| (a.0.arg(), a.1.arg()).partial_cmp(&(b.0.arg(), b.1.arg())).unwrap_or(std::cmp::Ordering::Equal));
    found
}

fn shares_root(a: &UniPoly, b: &UniPoly) -> bool {
    if a.degree().unwrap_or(0) == 0 || b.degree().unwrap_or(0) == 0 {
        return false;
    }
    let Ok(rs) = roots::all_roots(a) else {
        return false;
    };
    rs.roots
        .iter()
        .any(|r| b.eval(r.location).norm() <= 1e-8 * b.eval_abs(r.location))
}

/// Fixed-point polynomials `P1`, `P2` of the mapping `(phi1, phi2)`.
pub fn rim_fixed_data(phi1: &Rif, phi2: &Rif) -> Result<RimFixedData> {
    let (p1, decl1) = fixed_point_poly(phi1, 1);
    let (p2, decl2) = fixed_point_poly(phi2, 2);
    let mut flags = Vec::new();

    let defect = |p: &BiPoly, decl: (usize, usize), alpha: f64, scale: f64| -> Result<f64> {
        let pt = p.reflect(decl.0, decl.1)?;
        let rhs = p.scale(-crate::poly::cis(-alpha));
        Ok(pt.max_diff(&rhs) / scale.max(f64::MIN_POSITIVE))
    };
    let sc1 = phi1.p().norm1();
    let sc2 = phi2.p().norm1();
    let d1 = defect(&p1, decl1, phi1.alpha(), sc1)?;
    let d2 = defect(&p2, decl2, phi2.alpha(), sc2)?;

    let z1 = p1.max_abs() <= 1e-12 * sc1;
    let z2 = p2.max_abs() <= 1e-12 * sc2;
    if z1 {
        flags.push("P1 identically 0".to_string());
    }
    if z2 {
        flags.push("P2 identically 0".to_string());
    }

    let mut common = false;
    if !z1 && !z2 {
        let ws = [0.37, 1.21, 2.03, 2.71, -0.55, -1.39, -2.47];
        common = ws.iter().all(|&w| {
            let lam = Cpx::from_polar(0.83, w);
            let (a, b) = (p1.restrict_fiber(lam), p2.restrict_fiber(lam));
            shares_root(&a, &b)
        });
        if common {
            flags.push("common factor suspected".to_string());
        }
    }
    let bezout_bound = match (p1.bidegree(), p2.bidegree()) {
        (Some((m1, n1)), Some((m2, n2))) if !common => Some(m1 * n2 + m2 * n1),
        _ => None,
    };
    let common_zero_estimate = if z1 || z2 { Vec::new() } else { torus_grid_zeros(&p1, &p2) };
    if let Some(b) = bezout_bound {
        if common_zero_estimate.len() > b {
            flags.push(format!(
                "{} torus common zeros exceed the Bezout bound {b}",
                common_zero_estimate.len()
            ));
        }
    }
    Ok(RimFixedData {
        p1_bidegree: p1.bidegree(),
        p2_bidegree: p2.bidegree(),
        p1,
        p2,
        declared: [decl1, decl2],
        symmetric_ok: [d1 <= 1e-10, d2 <= 1e-10],
        symmetry_defect: [d1, d2],
        p1_identically_zero: z1,
        p2_identically_zero: z2,
        common_factor_suspected: common,
        bezout_bound,
        common_zero_estimate,
        flags,
    })
}

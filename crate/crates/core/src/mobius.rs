//! Möbius maps `z -> (a z + b) / (c z + d)` and their fixed-point classification.

use serde::Serialize;

use crate::poly::Cpx;

/// Relative threshold for "this coefficient vanishes".
const COEFF_TOL: f64 = 1e-9;
/// Relative threshold on `det` for a collapsing (constant) map.
const DEG_TOL: f64 = 1e-9;
/// Normalized discriminant threshold for a double fixed point.
const DISC_TOL: f64 = 1e-9;
/// Multiplier distance to 1 allowed for a parabolic call.
const PARABOLIC_MULT_TOL: f64 = 1e-6;
/// Multiplier distance from the unit circle / positive axis.
const KIND_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq, Hash)]
#[serde(rename_all = "kebab-case")]
pub enum MobiusKind {
    Identity,
    /// Collapsing fiber: `det` vanishes.
    Constant,
    /// `z -> e^{i beta} z`.
    Rotation,
    Elliptic,
    Parabolic,
    Hyperbolic,
    Loxodromic,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct FixedPoint {
    /// `None` is the point at infinity.
    pub location: Option<Cpx>,
    pub multiplier: Cpx,
}

#[derive(Clone, Debug, Serialize)]
pub struct MobiusMap {
    pub a: Cpx,
    pub b: Cpx,
    pub c: Cpx,
    pub d: Cpx,
    pub det: Cpx,
    pub kind: MobiusKind,
    pub fixed_points: Vec<FixedPoint>,
}

impl MobiusMap {
    pub fn new(a: Cpx, b: Cpx, c: Cpx, d: Cpx) -> Self {
        let det = a * d - b * c;
        let (kind, fixed_points) = classify(a, b, c, d, det);
        MobiusMap {
            a,
            b,
            c,
            d,
            det,
            kind,
            fixed_points,
        }
    }

    pub fn apply(&self, z: Cpx) -> Cpx {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn derivative(&self, z: Cpx) -> Cpx {
        let den = self.c * z + self.d;
        self.det / (den * den)
    }

    /// Multiplier at a finite fixed point.
    pub fn multiplier_at(&self, t: Cpx) -> Cpx {
        self.derivative(t)
    }

    /// Conjugate to a rotation, i.e. no fixed point on the circle for a
    /// disk automorphism.
    pub fn is_elliptic(&self) -> bool {
        matches!(self.kind, MobiusKind::Rotation | MobiusKind::Elliptic)
    }

    /// Rotation angle of an elliptic map, read off the multiplier at the
    /// fixed point inside the disk.
    pub fn rotation_angle(&self) -> Option<f64> {
        if !self.is_elliptic() {
            return None;
        }
        self.fixed_points
            .iter()
            .find(|f| f.location.is_some_and(|t| t.norm() < 1.0))
            .map(|f| f.multiplier.arg())
    }

    /// Finite fixed points.
    pub fn finite_fixed_points(&self) -> Vec<Cpx> {
        self.fixed_points.iter().filter_map(|f| f.location).collect()
    }

    fn scale(&self) -> f64 {
        scale(self.a, self.b, self.c, self.d)
    }

    /// The map with coefficients normalized to unit max modulus.
    pub fn normalized(&self) -> (Cpx, Cpx, Cpx, Cpx) {
        let s = self.scale();
        if s == 0.0 {
            return (self.a, self.b, self.c, self.d);
        }
        (self.a / s, self.b / s, self.c / s, self.d / s)
    }
}

fn scale(a: Cpx, b: Cpx, c: Cpx, d: Cpx) -> f64 {
    a.norm().max(b.norm()).max(c.norm()).max(d.norm())
}

fn kind_from_multiplier(k: Cpx) -> MobiusKind {
    let on_circle = (k.norm() - 1.0).abs() <= KIND_TOL;
    let on_axis = k.arg().abs() <= KIND_TOL;
    match (on_circle, on_axis) {
        (true, true) => MobiusKind::Parabolic,
        (true, false) => MobiusKind::Elliptic,
        (false, true) => MobiusKind::Hyperbolic,
        (false, false) => MobiusKind::Loxodromic,
    }
}

fn classify(a: Cpx, b: Cpx, c: Cpx, d: Cpx, det: Cpx) -> (MobiusKind, Vec<FixedPoint>) {
    let s = scale(a, b, c, d);
    if s == 0.0 {
        return (MobiusKind::Constant, Vec::new());
    }
    let (an, bn, cn, dn) = (a / s, b / s, c / s, d / s);

    if bn.norm() <= COEFF_TOL && cn.norm() <= COEFF_TOL && (an - dn).norm() <= COEFF_TOL {
        return (MobiusKind::Identity, Vec::new());
    }

    if det.norm() <= DEG_TOL * s * s {
        // rows are proportional; the map is the constant a/c = b/d
        let value = if c.norm() >= d.norm() {
            (c.norm() > 0.0).then(|| a / c)
        } else {
            Some(b / d)
        };
        let fixed = value
            .map(|v| {
                vec![FixedPoint {
                    location: Some(v),
                    multiplier: Cpx::new(0.0, 0.0),
                }]
            })
            .unwrap_or_default();
        return (MobiusKind::Constant, fixed);
    }

    if bn.norm() <= COEFF_TOL && cn.norm() <= COEFF_TOL {
        let k = a / d;
        let fixed = vec![
            FixedPoint {
                location: Some(Cpx::new(0.0, 0.0)),
                multiplier: k,
            },
            FixedPoint {
                location: None,
                multiplier: k.inv(),
            },
        ];
        let kind = if (k.norm() - 1.0).abs() <= KIND_TOL {
            MobiusKind::Rotation
        } else {
            kind_from_multiplier(k)
        };
        return (kind, fixed);
    }

    if cn.norm() <= COEFF_TOL {
        // affine: z -> (a z + b) / d, fixed at infinity with multiplier d/a
        if (an - dn).norm() <= COEFF_TOL {
            return (
                MobiusKind::Parabolic,
                vec![FixedPoint {
                    location: None,
                    multiplier: Cpx::new(1.0, 0.0),
                }],
            );
        }
        let t = b / (d - a);
        let k = a / d;
        return (
            kind_from_multiplier(k),
            vec![
                FixedPoint {
                    location: Some(t),
                    multiplier: k,
                },
                FixedPoint {
                    location: None,
                    multiplier: d / a,
                },
            ],
        );
    }

    // c t^2 + (d - a) t - b = 0
    let disc = (d - a) * (d - a) + 4.0 * b * c;
    let trace = a + d;
    if disc.norm() <= DISC_TOL * s * s && trace.norm() > 0.0 {
        let k = 4.0 * det / (trace * trace);
        if (k - 1.0).norm() <= PARABOLIC_MULT_TOL {
            let t = (a - d) / (2.0 * c);
            return (
                MobiusKind::Parabolic,
                vec![FixedPoint {
                    location: Some(t),
                    multiplier: Cpx::new(1.0, 0.0),
                }],
            );
        }
    }

    let sq = disc.sqrt();
    let (n_plus, n_minus) = ((a - d) + sq, (a - d) - sq);
    let big = if n_plus.norm() >= n_minus.norm() {
        n_plus
    } else {
        n_minus
    };
    let t1 = big / (2.0 * c);
    let t2 = if t1.norm() > 0.0 {
        -b / (c * t1)
    } else {
        ((a - d) - sq) / (2.0 * c)
    };
    let m = |t: Cpx| {
        let den = c * t + d;
        det / (den * den)
    };
    let (k1, k2) = (m(t1), m(t2));
    let kind = match (kind_from_multiplier(k1), kind_from_multiplier(k2)) {
        (MobiusKind::Parabolic, _) | (_, MobiusKind::Parabolic) => {
            // discriminant not small enough for a double point; pick the nearer class
            if (k1.norm() - 1.0).abs() < k1.arg().abs() {
                MobiusKind::Elliptic
            } else {
                MobiusKind::Hyperbolic
            }
        }
        (k, _) => k,
    };
    (
        kind,
        vec![
            FixedPoint {
                location: Some(t1),
                multiplier: k1,
            },
            FixedPoint {
                location: Some(t2),
                multiplier: k2,
            },
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Cpx {
        Cpx::new(x, 0.0)
    }

    #[test]
    fn hyperbolic_two_one_over_two_minus() {
        // (2z - 1)/(2 - z): fixed points +-1, multipliers 3 and 1/3
        let m = MobiusMap::new(r(2.0), r(-1.0), r(-1.0), r(2.0));
        assert_eq!(m.kind, MobiusKind::Hyperbolic);
        let mut ks: Vec<f64> = m.fixed_points.iter().map(|f| f.multiplier.re).collect();
        ks.sort_by(f64::total_cmp);
        assert!((ks[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((ks[1] - 3.0).abs() < 1e-12);
        let prod = m.fixed_points[0].multiplier * m.fixed_points[1].multiplier;
        assert!((prod - 1.0).norm() < 1e-12);
    }

    #[test]
    fn rotation_minus_z() {
        let m = MobiusMap::new(r(-1.0), r(0.0), r(0.0), r(1.0));
        assert_eq!(m.kind, MobiusKind::Rotation);
        assert!(m.is_elliptic());
        assert!((m.rotation_angle().unwrap().abs() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn identity_and_constant() {
        let m = MobiusMap::new(r(2.0), r(0.0), r(0.0), r(2.0));
        assert_eq!(m.kind, MobiusKind::Identity);
        let m = MobiusMap::new(r(1.0), r(-1.0), r(1.0), r(-1.0));
        assert_eq!(m.kind, MobiusKind::Constant);
        assert_eq!(m.fixed_points[0].location, Some(r(1.0)));
    }

    #[test]
    fn parabolic_example() {
        // ((2+i)z + i)/(2 - i - i z) has a single fixed point at -1
        let i = Cpx::new(0.0, 1.0);
        let m = MobiusMap::new(r(2.0) + i, i, -i, r(2.0) - i);
        assert_eq!(m.kind, MobiusKind::Parabolic);
        let t = m.fixed_points[0].location.unwrap();
        assert!((t + 1.0).norm() < 1e-12);
    }

    #[test]
    fn elliptic_fixed_points_reflect() {
        // (2z - i)/(i z + 2) preserves the disk... check (-4z+1)/(4-z) instead
        let m = MobiusMap::new(r(-4.0), r(1.0), r(-1.0), r(4.0));
        assert_eq!(m.kind, MobiusKind::Elliptic);
        let t = m.finite_fixed_points();
        assert!((t[0] * t[1].conj() - 1.0).norm() < 1e-12);
        // order two rotation
        let z = Cpx::new(0.3, -0.2);
        assert!((m.apply(m.apply(z)) - z).norm() < 1e-14);
        assert!((m.rotation_angle().unwrap().abs() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn translation_is_parabolic_at_infinity() {
        let m = MobiusMap::new(r(1.0), r(1.0), r(0.0), r(1.0));
        assert_eq!(m.kind, MobiusKind::Parabolic);
        assert_eq!(m.fixed_points[0].location, None);
    }
}

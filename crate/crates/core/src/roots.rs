//! Simultaneous root finding (Aberth–Ehrlich) with multiplicity detection,
//! plus unit-circle filtering.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{wrap_angle, Cpx, UniPoly};
use crate::tol;

const MAX_ITER: usize = 200;
const NEWTON_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct Root {
    pub location: Cpx,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// `max |q(root)|` over the set.
    pub residual: f64,
    /// Residual bound declared for this solve.
    pub tolerance: f64,
    pub iterations: usize,
    /// Human-readable notes on clusters whose multiplicity call was close.
    pub diagnostics: Vec<String>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Roots repeated according to multiplicity.
    pub fn flat(&self) -> Vec<Cpx> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat(r.location).take(r.multiplicity))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct CircleRoot {
    /// Angle in `(-pi, pi]`.
    pub angle: f64,
    pub multiplicity: usize,
}

impl CircleRoot {
    pub fn point(&self) -> Cpx {
        Cpx::from_polar(1.0, self.angle)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CircleRootSet {
    pub angles: Vec<CircleRoot>,
    pub tolerance: f64,
    /// Roots that missed the circle by less than `1e-6` but more than the tolerance.
    pub near_misses: Vec<Cpx>,
}

impl CircleRootSet {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.angles.iter().map(|r| r.multiplicity).sum()
    }

    /// Whether `t` lies within `eps` (circular distance) of a listed angle.
    pub fn contains_angle(&self, t: f64, eps: f64) -> bool {
        self.angles.iter().any(|r| angle_dist(r.angle, t) <= eps)
    }
}

/// Circular distance between two angles.
pub fn angle_dist(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// All complex roots of `q`, with multiplicities summing to its degree.
pub fn all_roots(q: &UniPoly) -> Result<RootSet> {
    let Some(deg) = q.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    let mut roots = Vec::new();
    let mut diagnostics = Vec::new();

    let zeros = q.coeffs().iter().take_while(|c| **c == Cpx::new(0.0, 0.0)).count();
    if zeros > 0 {
        roots.push(Root {
            location: Cpx::new(0.0, 0.0),
            multiplicity: zeros,
        });
    }
    let reduced = UniPoly::new(q.coeffs()[zeros..].to_vec());
    let mut iterations = 0;
    if reduced.degree().unwrap_or(0) > 0 {
        let (approx, iters) = aberth(&reduced)?;
        iterations = iters;
        roots.extend(cluster(&reduced, approx, &mut diagnostics));
    }
    roots.sort_by(|a, b| {
        (a.location.re, a.location.im)
            .partial_cmp(&(b.location.re, b.location.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let residual = roots
        .iter()
        .map(|r| q.eval(r.location).norm())
        .fold(0.0, f64::max);
    let tolerance = roots
        .iter()
        .map(|r| 1e-9 * q.eval_abs(r.location))
        .fold(0.0, f64::max);
    debug_assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), deg);
    Ok(RootSet {
        roots,
        residual,
        tolerance,
        iterations,
        diagnostics,
    })
}

fn initial_guesses(q: &UniPoly) -> Vec<Cpx> {
    let n = q.degree().unwrap_or(0);
    let ratio = (q.coeff(0) / q.leading()).norm();
    let radius = (1.0 + ratio).powf(1.0 / n as f64);
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| Cpx::from_polar(radius, 0.4 + golden * k as f64))
        .collect()
}

fn aberth(q: &UniPoly) -> Result<(Vec<Cpx>, usize)> {
    let n = q.degree().unwrap_or(0);
    let dq = q.derivative();
    let mut z = initial_guesses(q);
    let mut done = vec![false; n];
    let floor = 8.0 * n as f64 * f64::EPSILON;

    for iter in 1..=MAX_ITER {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let v = q.eval(zi);
            if v.norm() <= floor * q.eval_abs(zi) {
                done[i] = true;
                continue;
            }
            let ratio = v / dq.eval(zi);
            let sum: Cpx = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = zi - z[j];
                    if d.norm() == 0.0 {
                        Cpx::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let w = ratio / (Cpx::new(1.0, 0.0) - ratio * sum);
            let w = if w.is_finite() { w } else { ratio };
            if w.is_finite() {
                z[i] = zi - w;
            }
            if w.norm() <= NEWTON_TOL * (1.0 + z[i].norm()) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok((z, iter));
        }
    }
    let ok = z
        .iter()
        .all(|&zi| q.eval(zi).norm() <= 1e-8 * q.eval_abs(zi));
    if ok {
        Ok((z, MAX_ITER))
    } else {
        Err(Error::NonConvergence {
            iterations: MAX_ITER,
            best: z,
        })
    }
}

/// Single-linkage clustering within `CLUSTER_RADIUS`, centroid refined by
/// Newton on `q^{(m-1)}`.
fn cluster(q: &UniPoly, approx: Vec<Cpx>, diagnostics: &mut Vec<String>) -> Vec<Root> {
    let n = approx.len();
    let rho = |z: Cpx| tol::CLUSTER_RADIUS * z.norm().max(1.0);
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (approx[i] - approx[j]).norm() <= rho(approx[i]) {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<Cpx>> = Vec::new();
    let mut head: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut label, i);
        match head[r] {
            Some(g) => groups[g].push(approx[i]),
            None => {
                head[r] = Some(groups.len());
                groups.push(vec![approx[i]]);
            }
        }
    }

    let groups = merge_wide(q, groups);

    let mut out = Vec::with_capacity(groups.len());
    for g in &groups {
        let m = g.len();
        let centroid = g.iter().sum::<Cpx>() / m as f64;
        let z = if m == 1 {
            polish(q, centroid)
        } else {
            refine_multiple(q, centroid, m, WIDE_RADIUS)
        };
        if m > 1 {
            let d1 = q.derivative();
            let rel = d1.eval(z).norm() / d1.eval_abs(z).max(f64::MIN_POSITIVE);
            if rel > 1e-6 {
                diagnostics.push(format!(
                    "cluster of {m} near {z} has |q'| relative {rel:.2e}; multiplicity taken from cluster size"
                ));
            }
        }
        out.push(Root {
            location: z,
            multiplicity: m,
        });
    }

    // separations just outside the cluster radius are worth a note
    for (i, a) in out.iter().enumerate() {
        for b in out.iter().skip(i + 1) {
            let d = (a.location - b.location).norm();
            if d <= 1e3 * rho(a.location) {
                diagnostics.push(format!(
                    "roots {} and {} are {d:.2e} apart (cluster radius {:.0e}); kept separate",
                    a.location,
                    b.location,
                    tol::CLUSTER_RADIUS
                ));
            }
        }
    }
    out
}

fn polish(q: &UniPoly, mut z: Cpx) -> Cpx {
    for _ in 0..3 {
        let (v, d) = q.eval_with_derivative(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - v / d;
        if !next.is_finite() || q.eval(next).norm() >= v.norm() {
            break;
        }
        z = next;
    }
    z
}

/// A root of multiplicity `m` perturbed by rounding spreads to about
/// `eps^(1/m)`; groups closer than this are merged when the derivatives
/// confirm a multiple root at the refined centroid.
const WIDE_RADIUS: f64 = 1e-2;
const MULTIPLE_ROOT_REL: f64 = 1e-8;

fn merge_wide(q: &UniPoly, groups: Vec<Vec<Cpx>>) -> Vec<Vec<Cpx>> {
    let centroid = |g: &[Cpx]| g.iter().sum::<Cpx>() / g.len() as f64;
    let n = groups.len();
    let cs: Vec<Cpx> = groups.iter().map(|g| centroid(g)).collect();
    let mut comp: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if (cs[i] - cs[j]).norm() <= WIDE_RADIUS * cs[i].norm().max(1.0) {
                let (a, b) = (comp[i], comp[j]);
                for c in comp.iter_mut() {
                    if *c == b {
                        *c = a;
                    }
                }
            }
        }
    }
    let mut out: Vec<Vec<Cpx>> = Vec::new();
    for root in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| comp[i] == root).collect();
        if members.is_empty() {
            continue;
        }
        if members.len() == 1 {
            out.push(groups[members[0]].clone());
            continue;
        }
        let merged: Vec<Cpx> = members.iter().flat_map(|&i| groups[i].iter().copied()).collect();
        let m = merged.len();
        let z = refine_multiple(q, centroid(&merged), m, WIDE_RADIUS);
        let confirmed = (0..m).all(|j| {
            let d = q.nth_derivative(j);
            d.eval(z).norm() <= MULTIPLE_ROOT_REL * d.eval_abs(z).max(f64::MIN_POSITIVE)
        });
        if confirmed {
            out.push(merged);
        } else {
            out.extend(members.iter().map(|&i| groups[i].clone()));
        }
    }
    out
}

fn refine_multiple(q: &UniPoly, centroid: Cpx, m: usize, radius: f64) -> Cpx {
    let g = q.nth_derivative(m - 1);
    let mut z = centroid;
    for _ in 0..8 {
        let (v, d) = g.eval_with_derivative(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = v / d;
        let next = z - step;
        if !next.is_finite() || (next - centroid).norm() > radius * centroid.norm().max(1.0) {
            break;
        }
        z = next;
        if step.norm() <= NEWTON_TOL * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Roots within `eps_t` of the unit circle, as sorted angles.
pub fn unimodular_roots(rs: &RootSet, eps_t: f64) -> CircleRootSet {
    let mut angles: Vec<CircleRoot> = Vec::new();
    let mut near_misses = Vec::new();
    for r in &rs.roots {
        let dist = (r.location.norm() - 1.0).abs();
        if dist <= eps_t {
            angles.push(CircleRoot {
                angle: wrap_angle(r.location.arg()),
                multiplicity: r.multiplicity,
            });
        } else if dist <= 1e-6 {
            near_misses.push(r.location);
        }
    }
    angles.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    let mut merged: Vec<CircleRoot> = Vec::with_capacity(angles.len());
    for a in angles {
        match merged.last_mut() {
            Some(last) if (a.angle - last.angle).abs() <= tol::CLUSTER_RADIUS => {
                last.multiplicity += a.multiplicity;
            }
            _ => merged.push(a),
        }
    }
    // -pi and pi are the same point
    if merged.len() > 1 {
        let (first, last) = (merged[0], merged[merged.len() - 1]);
        if angle_dist(first.angle, last.angle) <= tol::CLUSTER_RADIUS {
            let k = merged.len() - 1;
            merged[k].multiplicity += first.multiplicity;
            merged.remove(0);
        }
    }
    CircleRootSet {
        angles: merged,
        tolerance: eps_t,
        near_misses,
    }
}

/// Circle roots of `q`; an empty set for a nonzero constant.
pub fn circle_roots(q: &UniPoly, eps_t: f64) -> Result<CircleRootSet> {
    match q.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Ok(CircleRootSet {
            tolerance: eps_t,
            ..Default::default()
        }),
        Some(_) => Ok(unimodular_roots(&all_roots(q)?, eps_t)),
    }
}

/// True iff `q` has a root of modulus at most `1 + EPS_T`.
pub fn has_root_in_closed_disk(q: &UniPoly) -> Result<bool> {
    Ok(root_in_closed_disk(q)?.is_some())
}

/// A root of modulus at most `1 + EPS_T`, if any.
pub fn root_in_closed_disk(q: &UniPoly) -> Result<Option<Cpx>> {
    match q.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Ok(None),
        Some(_) => Ok(all_roots(q)?
            .roots
            .iter()
            .map(|r| r.location)
            .find(|z| z.norm() <= 1.0 + tol::EPS_T)),
    }
}

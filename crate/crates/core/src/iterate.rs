//! Forward orbits on the closed bidisk and the torus.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{wrap_angle, Cpx};
use crate::rif::{Risp, RispKind};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepResult {
    pub point: (Cpx, Cpx),
    /// The value came from a radial limit at a singular point.
    pub singular: bool,
}

/// One application of the mapping.
pub fn step(map: &Risp, z: (Cpx, Cpx)) -> Result<StepResult> {
    let (z1, z2) = z;
    let (w1, s1) = map.phi().value(z1, z2)?;
    match map.kind() {
        RispKind::Simple | RispKind::MonomialTwisted => Ok(StepResult {
            point: (w1, z2),
            singular: s1,
        }),
        RispKind::Rim => {
            let second = map.second().ok_or(Error::NotSimple)?;
            let (w2, s2) = second.value(z1, z2)?;
            Ok(StepResult {
                point: (w1, w2),
                singular: s1 || s2,
            })
        }
    }
}

fn project(z: Cpx, eps: f64) -> Cpx {
    let r = z.norm();
    if (r - 1.0).abs() <= eps && r > 0.0 {
        z / r
    } else {
        z
    }
}

/// `n` steps from `z`, every point kept; torus points are re-projected.
pub fn orbit(map: &Risp, z: (Cpx, Cpx), n: usize) -> Result<(Vec<(Cpx, Cpx)>, bool)> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(z);
    let mut cur = z;
    let mut flagged = false;
    for _ in 0..n {
        let s = step(map, cur)?;
        flagged |= s.singular;
        cur = (project(s.point.0, tol::TORUS), project(s.point.1, tol::TORUS));
        out.push(cur);
    }
    Ok((out, flagged))
}

/// `Phi^n` by repeated stepping.
pub fn iterate_point(map: &Risp, z: (Cpx, Cpx), n: usize) -> Result<(Cpx, Cpx)> {
    Ok(*orbit(map, z, n)?.0.last().expect("orbit includes the seed"))
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitDataset {
    pub map_id: String,
    /// Seeds as angle pairs in `(-pi, pi]^2`.
    pub seeds: Vec<(f64, f64)>,
    /// `frames[k]` holds the images after `k + 1` steps, in seed order.
    pub frames: Vec<Vec<(f64, f64)>>,
    /// `flags[k][i]`: seed `i` met a singular point at or before frame `k`.
    pub flags: Vec<Vec<bool>>,
    pub n_iters: usize,
    /// Largest `||z| - 1|` seen before projection.
    pub max_raw_drift: f64,
    /// Unprojected points, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw: Option<Vec<Vec<(Cpx, Cpx)>>>,
}

#[derive(Clone, Copy, Debug)]
pub struct GridOptions {
    pub torus_tolerance: f64,
    pub keep_raw: bool,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            torus_tolerance: tol::TORUS,
            keep_raw: false,
        }
    }
}

struct SeedOrbit {
    points: Vec<(f64, f64)>,
    flags: Vec<bool>,
    raw: Vec<(Cpx, Cpx)>,
    drift: f64,
}

fn run_seed(map: &Risp, seed: (f64, f64), n: usize, opts: GridOptions) -> SeedOrbit {
    let mut z = (Cpx::from_polar(1.0, seed.0), Cpx::from_polar(1.0, seed.1));
    let mut flagged = false;
    let mut out = SeedOrbit {
        points: Vec::with_capacity(n),
        flags: Vec::with_capacity(n),
        raw: Vec::new(),
        drift: 0.0,
    };
    for _ in 0..n {
        match step(map, z) {
            Ok(s) => {
                flagged |= s.singular;
                let (w1, w2) = s.point;
                let drift = (w1.norm() - 1.0).abs().max((w2.norm() - 1.0).abs());
                if !(drift <= opts.torus_tolerance) {
                    flagged = true;
                }
                if drift.is_finite() {
                    out.drift = out.drift.max(drift);
                }
                if opts.keep_raw {
                    out.raw.push((w1, w2));
                }
                z = (project(w1, opts.torus_tolerance), project(w2, opts.torus_tolerance));
            }
            Err(_) => {
                flagged = true;
            }
        }
        out.points.push((wrap_angle(z.0.arg()), wrap_angle(z.1.arg())));
        out.flags.push(flagged);
    }
    out
}

/// Seeds on vertical lines `t1 = a pi`, `t2 = -pi + 2 pi (k+1)/P`.
pub fn grid_seeds(vertical_lines: &[f64], points_per_line: usize) -> Vec<(f64, f64)> {
    let step = 2.0 * PI / points_per_line as f64;
    vertical_lines
        .iter()
        .flat_map(|&a| (0..points_per_line).map(move |k| (a * PI, -PI + step * (k + 1) as f64)))
        .collect()
}

/// Iterates every seed `n` times; parallel over seeds, assembled in seed order.
pub fn iterate_grid(
    map: &Risp,
    map_id: &str,
    vertical_lines: &[f64],
    points_per_line: usize,
    n: usize,
    opts: GridOptions,
) -> Result<OrbitDataset> {
    if n == 0 {
        return Err(Error::Input("iteration count must be at least 1".into()));
    }
    if points_per_line == 0 {
        return Err(Error::Input("points per line must be positive".into()));
    }
    if let Some(a) = vertical_lines.iter().find(|a| !(a.abs() < 1.0)) {
        return Err(Error::Input(format!("vertical line {a} is outside (-1, 1)")));
    }
    let seeds = grid_seeds(vertical_lines, points_per_line);
    let orbits = run_all(map, &seeds, n, opts);

    let mut frames = vec![Vec::with_capacity(seeds.len()); n];
    let mut flags = vec![Vec::with_capacity(seeds.len()); n];
    let mut raw = opts.keep_raw.then(|| vec![Vec::with_capacity(seeds.len()); n]);
    let mut max_raw_drift: f64 = 0.0;
    for o in &orbits {
        max_raw_drift = max_raw_drift.max(o.drift);
        for k in 0..n {
            frames[k].push(o.points[k]);
            flags[k].push(o.flags[k]);
            if let Some(r) = raw.as_mut() {
                if let Some(&p) = o.raw.get(k) {
                    r[k].push(p);
                }
            }
        }
    }
    Ok(OrbitDataset {
        map_id: map_id.to_string(),
        seeds,
        frames,
        flags,
        n_iters: n,
        max_raw_drift,
        raw,
    })
}

#[cfg(feature = "parallel")]
fn run_all(map: &Risp, seeds: &[(f64, f64)], n: usize, opts: GridOptions) -> Vec<SeedOrbit> {
    use rayon::prelude::*;
    seeds.par_iter().map(|&s| run_seed(map, s, n, opts)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_all(map: &Risp, seeds: &[(f64, f64)], n: usize, opts: GridOptions) -> Vec<SeedOrbit> {
    seeds.iter().map(|&s| run_seed(map, s, n, opts)).collect()
}

/// Closed form of the `n`-th iterate of
/// `(-(2 z1 z2 - z1 - z2)/(2 - z1 - z2), z2)`.
pub fn closed_form_phi_n_ex21(z: (Cpx, Cpx), n: u32) -> Result<(Cpx, Cpx)> {
    let (z1, z2) = z;
    let k = 2f64.powi(n as i32);
    let num = -(k * z1 * z2 - z1 - (k - 1.0) * z2);
    let den = k - (k - 1.0) * z1 - z2;
    let scale = k + (k - 1.0) * z1.norm() + z2.norm();
    if den.norm() <= 1e-14 * scale {
        return Err(Error::DenominatorZero);
    }
    Ok((num / den, z2))
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Limit {
    Converged { point: (Cpx, Cpx), after: usize },
    Periodic { period: usize, after: usize },
    Undecided,
}

fn dist(a: (Cpx, Cpx), b: (Cpx, Cpx)) -> f64 {
    (a.0 - b.0).norm().max((a.1 - b.1).norm())
}

/// Classifies the tail of the orbit of `seed` over `n_max` steps.
pub fn detect_limit(map: &Risp, seed: (Cpx, Cpx), n_max: usize, tol: f64) -> Result<Limit> {
    let (orb, _) = orbit(map, seed, n_max)?;
    let last = orb[n_max];
    let min_tail = 2.max(n_max / 4);

    // Cauchy tail: everything from `after` on sits within tol of the final point
    let mut after = n_max;
    while after > 0 && dist(orb[after - 1], last) <= tol {
        after -= 1;
    }
    if after == 0 || n_max - after >= min_tail {
        return Ok(Limit::Converged { point: last, after });
    }

    for period in 2..=64usize {
        if n_max < 2 * period {
            break;
        }
        let mut start = n_max - period;
        while start > 0 && dist(orb[start - 1], orb[start - 1 + period]) <= tol {
            start -= 1;
        }
        let matched = (start..=n_max - period).all(|j| dist(orb[j], orb[j + period]) <= tol);
        if matched && n_max - start >= 2 * period {
            return Ok(Limit::Periodic { period, after: start });
        }
    }
    Ok(Limit::Undecided)
}

//! Built-in maps and a generator of random stable simple skew-products.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{BiPoly, Cpx, UniPoly};
use crate::rif::{Rif, Risp};

/// Ids accepted by [`by_id`].
pub const IDS: &[&str] = &["ex21", "ex22", "ex23", "ex51", "ex52", "twisted", "rim21"];

fn simple(rows: &[&[f64]], n: usize, alpha: f64) -> Risp {
    let rif = Rif::build(BiPoly::from_real(rows), (1, n), alpha, (0, 0)).expect("catalog polynomial is stable");
    Risp::simple(rif).expect("catalog map is simple")
}

/// `(-(2 z1 z2 - z1 - z2)/(2 - z1 - z2), z2)`.
pub fn ex21() -> Risp {
    simple(&[&[2.0, -1.0], &[-1.0, 0.0]], 1, PI)
}

/// `(-(3 z1 z2 - z1 - z2 - 1)/(3 - z1 - z2 - z1 z2), z2)`.
pub fn ex22() -> Risp {
    simple(&[&[3.0, -1.0], &[-1.0, -1.0]], 1, PI)
}

/// `((3 z1 z2 - z1 - z2)/(3 - z1 - z2), z2)`.
pub fn ex23() -> Risp {
    simple(&[&[3.0, -1.0], &[-1.0, 0.0]], 1, 0.0)
}

/// `p = 4 - z1 - 3 z2 - z1 z2 + z2^2`, `alpha = pi`.
pub fn ex51() -> Risp {
    simple(&[&[4.0, -3.0, 1.0], &[-1.0, -1.0, 0.0]], 2, PI)
}

/// `p = 4 - z1 + z1 z2 - 3 z1 z2^2 - z1 z2^3`, `alpha = 0`.
pub fn ex52() -> Risp {
    simple(&[&[4.0, 0.0, 0.0, 0.0], &[-1.0, 1.0, -3.0, -1.0]], 3, 0.0)
}

/// `(-z1 (2 z1 z2 - z1 - z2)/(2 - z1 - z2), z2)`.
pub fn twisted() -> Risp {
    let rif = Rif::build(BiPoly::from_real(&[&[2.0, -1.0], &[-1.0, 0.0]]), (1, 1), PI, (1, 0))
        .expect("stable");
    Risp::monomial_twisted(rif).expect("nonzero beta")
}

/// The identity `z2` written as a rational inner function.
pub fn identity_z2() -> Rif {
    Rif::build(BiPoly::constant(Cpx::new(1.0, 0.0)), (0, 0), 0.0, (0, 1)).expect("constant is stable")
}

/// The first component of `ex21` in both slots.
pub fn rim21() -> Risp {
    let phi = ex21().phi().clone();
    Risp::rim(phi.clone(), phi)
}

pub fn by_id(id: &str) -> Option<Risp> {
    Some(match id {
        "ex21" => ex21(),
        "ex22" => ex22(),
        "ex23" => ex23(),
        "ex51" => ex51(),
        "ex52" => ex52(),
        "twisted" => twisted(),
        "rim21" => rim21(),
        _ => return None,
    })
}

/// A random stable simple map of bidegree `(1, n)`.
///
/// `p1` has its roots at moduli in `[1.2, 3]`; `p2` is rescaled so that
/// `max |p2/p1|` over the circle is `0.9`, and `alpha` is uniform.
pub fn random_stable_simple(seed: u64, n: usize) -> Risp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots = Vec::with_capacity(n);
    for _ in 0..n {
        let r = rng.gen_range(1.2..3.0);
        let t = rng.gen_range(-PI..PI);
        roots.push(Cpx::from_polar(r, t));
    }
    let lead = Cpx::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI));
    let p1 = UniPoly::from_roots(&roots).scale(lead);
    let p2 = UniPoly::new(
        (0..=n)
            .map(|_| Cpx::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    );
    let m = (0..2048)
        .map(|k| {
            let z = Cpx::from_polar(1.0, 2.0 * PI * k as f64 / 2048.0);
            p2.eval(z).norm() / p1.eval(z).norm()
        })
        .fold(0.0, f64::max);
    let p2 = p2.scale(Cpx::new(0.9 / m, 0.0));
    let alpha = rng.gen_range(-PI..PI);
    let p = BiPoly::from_z1_rows(&[p1, p2]);
    let rif = Rif::build(p, (1, n), alpha, (0, 0)).expect("generator produces stable polynomials");
    Risp::simple(rif).expect("generator produces simple maps")
}

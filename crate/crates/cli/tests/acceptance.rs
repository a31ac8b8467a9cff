//! Acceptance gate: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use risp_dyn::analysis::{
    fixed_point_multiplier, multiplier_profile, psi_branches, q_alpha, rim_fixed_data, rotation_belts,
    trace_fixed_curves, vanishing_order,
};
use risp_dyn::iterate::{closed_form_phi_n_ex21, iterate_grid, iterate_point, orbit, GridOptions};
use risp_dyn::mobius::MobiusKind;
use risp_dyn::rif::Crossing;
use risp_dyn::roots::{all_roots, angle_dist};
use risp_dyn::{catalog, cis, BiPoly, Cpx, Rif, Risp, UniPoly};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn c(re: f64, im: f64) -> Cpx {
    Cpx::new(re, im)
}

fn max_rel_coeff_err(q: &UniPoly, expect: &[f64]) -> f64 {
    let scale = expect.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let n = expect.len().max(q.coeffs().len());
    (0..n)
        .map(|k| (q.coeff(k) - expect.get(k).copied().unwrap_or(0.0)).norm() / scale)
        .fold(0.0, f64::max)
}

// Oracle expansions (sympy) of 16z^2-28z+16, 25(z-1)^2(z^2-14z/25+1), 4(z+1)^2(z^2+1)(5z^2-8z+5).
const Q23: [f64; 3] = [16.0, -28.0, 16.0];
const Q51: [f64; 5] = [25.0, -64.0, 78.0, -64.0, 25.0];
const Q52: [f64; 7] = [20.0, 8.0, -4.0, 16.0, -4.0, 8.0, 20.0];

fn criterion_1() -> Check {
    let mut worst: f64 = 0.0;
    for (map, expect) in [
        (catalog::ex23(), &Q23[..]),
        (catalog::ex51(), &Q51[..]),
        (catalog::ex52(), &Q52[..]),
    ] {
        let q = q_alpha(&map).map_err(|e| e.to_string())?;
        ensure!(q.q.degree() == Some(expect.len() - 1), "degree {:?}", q.q.degree());
        worst = worst.max(max_rel_coeff_err(&q.q, expect));
    }
    ensure!(worst <= 1e-10, "relative coefficient error {worst:e}");
    Ok(format!("max relative coefficient error {worst:.1e}"))
}

fn criterion_2() -> Check {
    let s15 = 15f64.sqrt() / 8.0;
    let cases: [(Risp, Vec<(Cpx, usize)>); 3] = [
        (catalog::ex23(), vec![(c(0.875, s15), 1), (c(0.875, -s15), 1)]),
        (
            catalog::ex51(),
            vec![(c(1.0, 0.0), 2), (c(0.28, 0.96), 1), (c(0.28, -0.96), 1)],
        ),
        (
            catalog::ex52(),
            vec![
                (c(-1.0, 0.0), 2),
                (c(0.0, 1.0), 1),
                (c(0.0, -1.0), 1),
                (c(0.8, 0.6), 1),
                (c(0.8, -0.6), 1),
            ],
        ),
    ];
    let mut worst: f64 = 0.0;
    for (map, expect) in cases {
        let q = q_alpha(&map).map_err(|e| e.to_string())?;
        let rs = all_roots(&q.q).map_err(|e| e.to_string())?;
        ensure!(rs.roots.len() == expect.len(), "found {} distinct roots, expected {}", rs.roots.len(), expect.len());
        for (z, m) in expect {
            let r = rs
                .roots
                .iter()
                .min_by(|a, b| (a.location - z).norm().total_cmp(&(b.location - z).norm()))
                .unwrap();
            let err = (r.location - z).norm();
            ensure!(err <= 1e-8, "root {z}: error {err:e}");
            ensure!(r.multiplicity == m, "root {z}: multiplicity {} != {m}", r.multiplicity);
            worst = worst.max(err);
        }
    }
    Ok(format!("max root error {worst:.1e}, multiplicities exact"))
}

fn criterion_3() -> Check {
    for (id, want) in [("ex21", 0), ("ex23", 1), ("ex51", 1), ("ex52", 2)] {
        let rep = rotation_belts(&catalog::by_id(id).unwrap()).map_err(|e| format!("{id}: {e}"))?;
        ensure!(rep.belts.len() == want, "{id}: {} belts, expected {want}", rep.belts.len());
        ensure!(rep.bound_satisfied, "{id}: bound violated");
    }
    let ex22 = catalog::ex22();
    ensure!(q_alpha(&ex22).map_err(|e| e.to_string())?.is_identically_zero, "ex22: Q not flagged zero");
    ensure!(
        matches!(rotation_belts(&ex22), Err(risp_dyn::Error::QIdenticallyZero)),
        "ex22: belts not refused"
    );
    let mut total = 0;
    for seed in 0..100 {
        let r = catalog::random_stable_simple(1000 + seed, 2);
        let rep = rotation_belts(&r).map_err(|e| format!("random {seed}: {e}"))?;
        ensure!(
            rep.bound_satisfied && rep.belts.len() <= rep.qa_circle_root_count_excl_flat / 2,
            "random {seed}: {} belts, bound {}",
            rep.belts.len(),
            rep.bound
        );
        total += rep.belts.len();
    }
    Ok(format!("0/QZ/1/1/2 belts; bound holds on 100 random inputs ({total} belts total)"))
}

fn criterion_4() -> Check {
    let r = catalog::ex22();
    let fp = &r.phi().numerator() - &r.phi().p().shift(1, 0);
    // (z1 - 1)^2 (z2 + 1), rows indexed by powers of z1
    let product = BiPoly::from_real(&[&[1.0, 1.0], &[-2.0, -2.0], &[1.0, 1.0]]);
    let err = fp.max_diff(&product);
    ensure!(err == 0.0, "e^(i alpha) p~ - z1 p differs from (z1-1)^2(z2+1) by {err:e}");
    // the literal reflection gives neither sign of the product
    let literal = r.phi().ptilde() - &r.phi().p().shift(1, 0);
    ensure!(
        literal.max_diff(&product.scale(c(-1.0, 0.0))) > 0.5 && literal.max_diff(&product) > 0.5,
        "literal p~ - z1 p unexpectedly factors"
    );

    let tr = trace_fixed_curves(&catalog::ex23(), 4096).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for b in &tr.branches {
        for s in &b.samples {
            let (z1, z2) = (s.z1, cis(s.lambda_angle));
            worst = worst.max((z2 * (4.0 * z1 - 1.0) - z1 * (4.0 - z1)).norm());
            n += 1;
        }
    }
    ensure!(worst <= 1e-8, "ex23 curve residual {worst:e}");
    Ok(format!("P_alpha = (z1-1)^2(z2+1) exactly (sign as in the ledger); curve residual {worst:.1e} over {n} samples"))
}

fn criterion_5() -> Check {
    let r = catalog::ex23();
    let one = c(1.0, 0.0);
    let k1 = fixed_point_multiplier(&r, one, one).map_err(|e| e.to_string())?;
    let k2 = fixed_point_multiplier(&r, one, -one).map_err(|e| e.to_string())?;
    ensure!((k1 - 3.0).norm() <= 1e-9 && (k2 - 1.0 / 3.0).norm() <= 1e-9, "ex23 multipliers {k1}, {k2}");

    let r = catalog::ex22();
    for k in 0..64 {
        let lam = cis(-PI + 2.0 * PI * (k as f64 + 0.5) / 64.0);
        let m = fixed_point_multiplier(&r, lam, one).map_err(|e| e.to_string())?;
        ensure!((m - 1.0).norm() <= 1e-6, "ex22 multiplier {m} at {lam}");
    }

    let r = catalog::ex21();
    let tr = trace_fixed_curves(&r, 4096).map_err(|e| e.to_string())?;
    let line = tr
        .branches
        .iter()
        .find(|b| b.samples.iter().all(|s| (s.z1 - 1.0).norm() < 1e-9))
        .ok_or("ex21: no branch on z1 = 1")?;
    let prof = multiplier_profile(&r, line).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for s in &prof.samples {
        let lam = cis(s.lambda_angle);
        // symbolic derivative of -((2 lam - 1) z1 - lam)/(2 - lam - z1) at z1 = 1
        let oracle = (-(2.0 * lam - 1.0) * (1.0 - lam) + (1.0 - lam)) / ((1.0 - lam) * (1.0 - lam));
        worst = worst.max((s.multiplier - oracle).norm()).max((s.multiplier - 2.0).norm());
    }
    ensure!(worst <= 1e-9, "ex21 multiplier error {worst:e}");

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut hyperbolic = 0;
    let mut worst_recip: f64 = 0.0;
    for i in 0..1000 {
        let r = catalog::random_stable_simple(2000 + i / 10, 1 + (i % 3) as usize);
        let m = r.fiber_map(cis(rng.gen_range(-PI..PI))).map_err(|e| e.to_string())?;
        if m.kind == MobiusKind::Hyperbolic {
            let k: Cpx = m.fixed_points.iter().map(|f| f.multiplier).product();
            worst_recip = worst_recip.max((k - 1.0).norm());
            hyperbolic += 1;
        }
    }
    ensure!(hyperbolic >= 100, "only {hyperbolic} hyperbolic fibers sampled");
    ensure!(worst_recip <= 1e-8, "reciprocity error {worst_recip:e}");
    Ok(format!(
        "{{3, 1/3}}, 1, 2 (err {worst:.1e}); reciprocity {worst_recip:.1e} on {hyperbolic}/1000 hyperbolic fibers"
    ))
}

fn criterion_6() -> Check {
    let r = catalog::ex21();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let z = (cis(rng.gen_range(-PI..PI)), cis(rng.gen_range(-PI..PI)));
        let a = closed_form_phi_n_ex21(z, 10).map_err(|e| e.to_string())?;
        let b = iterate_point(&r, z, 10).map_err(|e| e.to_string())?;
        worst = worst.max((a.0 - b.0).norm()).max((a.1 - b.1).norm());
    }
    ensure!(worst <= 1e-6, "closed form vs engine {worst:e}");

    let lines = [-0.9, -0.6, -0.3, 0.3, 0.6, 0.9];
    let ds = iterate_grid(&r, "ex21", &lines, 720, 40, GridOptions::default()).map_err(|e| e.to_string())?;
    let (sup, kept) = ds.frames[39]
        .iter()
        .zip(&ds.flags[39])
        .filter(|(_, f)| !**f)
        .fold((0.0f64, 0usize), |(m, n), (p, _)| (m.max(angle_dist(p.0, p.1)), n + 1));
    ensure!(sup <= 1e-3, "sup |t1 - t2| = {sup:e} at n = 40");
    Ok(format!("oracle error {worst:.1e}; sup |t1-t2| = {sup:.1e} over {kept} points at n = 40"))
}

fn criterion_7() -> Check {
    let sf = catalog::ex52().sf_points().map_err(|e| e.to_string())?;
    ensure!(sf.len() == 2, "ex52: {} SF-points", sf.len());
    let at = |lam: f64| sf.iter().find(|s| (s.lambda - lam).norm() < 1e-9);
    let p1 = at(1.0).ok_or("ex52: none on lambda = 1")?;
    let pm = at(-1.0).ok_or("ex52: none on lambda = -1")?;
    ensure!((p1.tau1 - 1.0).norm() < 1e-9, "ex52: tau1 {} on lambda = 1", p1.tau1);
    ensure!(p1.crossing == Crossing::SingleBranch, "ex52 at (1,1): {:?}", p1.crossing);
    ensure!(pm.crossing == Crossing::TwoBranch, "ex52 on lambda = -1: {:?}", pm.crossing);
    // the singular point on that fiber is (1,-1); p(-1,-1) = 8 (see ledger)
    let p = catalog::ex52().phi().p().clone();
    ensure!((p.eval(c(-1.0, 0.0), c(-1.0, 0.0)) - 8.0).norm() < 1e-12, "p(-1,-1) != 8");

    let sf = catalog::ex51().sf_points().map_err(|e| e.to_string())?;
    ensure!(sf.len() == 1, "ex51: {} SF-points", sf.len());
    ensure!(
        (sf[0].tau1 - 1.0).norm() < 1e-9 && (sf[0].lambda - 1.0).norm() < 1e-9 && sf[0].crossing == Crossing::TwoBranch,
        "ex51: {:?}",
        sf[0]
    );

    let mut maps: Vec<Risp> = ["ex21", "ex23", "ex51", "ex52"].iter().map(|id| catalog::by_id(id).unwrap()).collect();
    maps.extend((0..100).map(|s| catalog::random_stable_simple(1000 + s, 2)));
    let mut checked = 0;
    for r in &maps {
        let q = q_alpha(r).map_err(|e| e.to_string())?;
        for cr in &r.fibers().unwrap().lambda_flat.angles {
            let k = vanishing_order(&q.q, cr.point());
            if k > 0 {
                ensure!(k % 2 == 0, "odd order {k} at collapsing fiber {}", cr.angle);
                checked += 1;
            }
        }
    }
    Ok(format!(
        "ex52 single-branch (1,1) + two-branch on lambda=-1; ex51 two-branch (1,1); even order at {checked} collapsing fibers"
    ))
}

fn hash_dir(dir: &Path) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for e in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let e = e.map_err(|e| e.to_string())?;
        let bytes = std::fs::read(e.path()).map_err(|e| e.to_string())?;
        let h = Sha256::digest(&bytes);
        out.insert(e.file_name().to_string_lossy().into_owned(), format!("{h:x}"));
    }
    Ok(out)
}

fn cli_hashes(root: &Path, threads: usize) -> Result<BTreeMap<String, String>, String> {
    let bin = env!("CARGO_BIN_EXE_risp-dyn");
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/ex51.json");
    let mut all = BTreeMap::new();
    for cmd in ["analyze", "iterate", "branch-profile"] {
        let out = root.join(format!("{cmd}-{threads}"));
        let status = Command::new(bin)
            .arg(cmd)
            .arg("--input")
            .arg(&data)
            .arg("--out")
            .arg(&out)
            .args(["--threads", &threads.to_string(), "--overlay-belts", "--dump-roots"])
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("{cmd}: {}", String::from_utf8_lossy(&status.stderr)));
        }
        for (k, v) in hash_dir(&out)? {
            all.insert(format!("{cmd}/{k}"), v);
        }
    }
    Ok(all)
}

fn criterion_8() -> Check {
    // reflection involution, exact
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let (m, n) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let rows: Vec<Vec<Cpx>> = (0..=m)
            .map(|_| (0..=n).map(|_| c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect())
            .collect();
        let p = BiPoly::new(rows);
        let back = p.reflect(m, n).and_then(|q| q.reflect(m, n)).map_err(|e| e.to_string())?;
        ensure!(back == p, "reflection is not an involution for {p}");
    }

    let mut sym: f64 = 0.0;
    let mut inner: f64 = 0.0;
    let mut torus: f64 = 0.0;
    let mut prod: f64 = 0.0;
    let mut semi: f64 = 0.0;
    for seed in 0..60u64 {
        let r = catalog::random_stable_simple(3000 + seed, 1 + (seed % 3) as usize);
        let phi = r.phi();
        let other = catalog::random_stable_simple(4000 + seed, 2);
        let d = rim_fixed_data(phi, other.phi()).map_err(|e| e.to_string())?;
        sym = sym.max(d.symmetry_defect[0]).max(d.symmetry_defect[1]);

        for _ in 0..20 {
            let (r1, r2) = (rng.gen_range(0.0f64..1.0).sqrt(), rng.gen_range(0.0f64..1.0).sqrt());
            let z = (cis(rng.gen_range(-PI..PI)) * r1 * 0.999, cis(rng.gen_range(-PI..PI)) * r2 * 0.999);
            inner = inner.max(phi.eval(z.0, z.1).norm() - 1.0);
            let v = phi.eval(cis(rng.gen_range(-PI..PI)), cis(rng.gen_range(-PI..PI)));
            inner = inner.max((v.norm() - 1.0).abs());
        }

        let seed_pt = (cis(rng.gen_range(-PI..PI)), cis(rng.gen_range(-PI..PI)));
        let (pts, flagged) = orbit(&r, seed_pt, 50).map_err(|e| e.to_string())?;
        if !flagged {
            for (a, b) in &pts {
                torus = torus.max((a.norm() - 1.0).abs()).max((b.norm() - 1.0).abs());
            }
            let (m, n) = (rng.gen_range(0..=10), rng.gen_range(0..=10));
            let whole = iterate_point(&r, seed_pt, m + n).map_err(|e| e.to_string())?;
            let split = iterate_point(&r, iterate_point(&r, seed_pt, n).map_err(|e| e.to_string())?, m)
                .map_err(|e| e.to_string())?;
            semi = semi.max((whole.0 - split.0).norm()).max((whole.1 - split.1).norm());
        }

        for _ in 0..20 {
            let pp = psi_branches(&r, cis(rng.gen_range(-PI..PI))).map_err(|e| e.to_string())?;
            prod = prod.max(((pp.psi1 * pp.psi2).norm() - 1.0).abs());
        }
    }
    // also the twisted components
    let tw = Rif::build(catalog::ex51().phi().p().clone(), (1, 2), PI, (1, 0)).map_err(|e| e.to_string())?;
    let d = rim_fixed_data(&tw, &catalog::identity_z2()).map_err(|e| e.to_string())?;
    sym = sym.max(d.symmetry_defect[0]);

    ensure!(sym <= 1e-10, "essential symmetry defect {sym:e}");
    ensure!(inner <= 1e-9, "inner bound violated by {inner:e}");
    ensure!(torus <= 1e-7, "torus drift {torus:e}");
    ensure!(prod <= 1e-8, "psi product {prod:e}");
    ensure!(semi <= 1e-7, "semigroup {semi:e}");

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let h1 = cli_hashes(tmp.path(), 1)?;
    let h4 = cli_hashes(tmp.path(), 4)?;
    ensure!(!h1.is_empty() && h1 == h4, "CLI outputs differ between 1 and 4 threads");
    Ok(format!(
        "involution exact; symmetry {sym:.1e}; inner {inner:.1e}; torus {torus:.1e}; psi product {prod:.1e}; semigroup {semi:.1e}; {} CLI files hash-equal across thread counts",
        h1.len()
    ))
}

fn main() {
    let start = Instant::now();
    let criteria: [(u32, &str, fn() -> Check); 8] = [
        (1, "Q_alpha exactness", criterion_1),
        (2, "root recovery", criterion_2),
        (3, "belt counts and bound", criterion_3),
        (4, "fixed-point algebra", criterion_4),
        (5, "multipliers", criterion_5),
        (6, "iteration oracle", criterion_6),
        (7, "SF-point geometry", criterion_7),
        (8, "property suites", criterion_8),
    ];
    let mut failed = 0;
    for (k, name, f) in criteria {
        let t = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match res {
            Ok(detail) => println!("PASS criterion {k} ({name}): {detail} [{:.2}s]", t.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {k} ({name}): {why}");
            }
        }
    }
    println!("acceptance: {} of 8 passed in {:.1}s", 8 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! JSON map definitions and dataset serialization.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::analysis::CurveTrace;
use crate::error::{Error, Result};
use crate::iterate::OrbitDataset;
use crate::poly::{BiPoly, BiPolyJson, Cpx};
use crate::rif::{normalize_alpha_for_sf, Rif, Risp};

pub const SCHEMA: &str = "risp-dyn/1";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum AlphaSpec {
    Value(f64),
    AutoSf {
        #[serde(rename = "auto-sf")]
        auto_sf: [f64; 4],
    },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum KindSpec {
    #[default]
    Simple,
    MonomialTwisted,
    Rim,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub p: BiPolyJson,
    pub alpha: AlphaSpec,
    #[serde(default)]
    pub beta: [usize; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RispSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default)]
    pub kind: KindSpec,
    pub p: BiPolyJson,
    pub alpha: AlphaSpec,
    #[serde(default)]
    pub beta: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<ComponentSpec>,
}

fn build_component(p: &BiPolyJson, alpha: &AlphaSpec, beta: [usize; 2]) -> Result<Rif> {
    let (poly, decl) = p.parse()?;
    let alpha = match alpha {
        AlphaSpec::Value(a) => *a,
        AlphaSpec::AutoSf { auto_sf: [a, b, c, d] } => {
            let tau = (Cpx::new(*a, *b), Cpx::new(*c, *d));
            for z in [tau.0, tau.1] {
                if (z.norm() - 1.0).abs() > 1e-9 {
                    return Err(Error::Input(format!("auto-sf point {z} is not on the circle")));
                }
            }
            normalize_alpha_for_sf(&poly, decl, tau)?
        }
    };
    Rif::build(poly, decl, alpha, (beta[0], beta[1]))
}

impl RispSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn build(&self) -> Result<Risp> {
        let phi = build_component(&self.p, &self.alpha, self.beta)?;
        match self.kind {
            KindSpec::Simple => Risp::simple(phi),
            KindSpec::MonomialTwisted => Risp::monomial_twisted(phi),
            KindSpec::Rim => {
                let second = self
                    .second
                    .as_ref()
                    .ok_or_else(|| Error::Input("kind \"rim\" needs a \"second\" component".into()))?;
                let phi2 = build_component(&second.p, &second.alpha, second.beta)?;
                Ok(Risp::rim(phi, phi2))
            }
        }
    }

    /// Spec of an existing map, alpha written numerically.
    pub fn from_risp(id: Option<&str>, r: &Risp) -> Self {
        let comp = |rif: &Rif| -> (BiPolyJson, AlphaSpec, [usize; 2]) {
            (
                rif.p()
                    .to_json_at(rif.bidegree())
                    .expect("declared bidegree covers p"),
                AlphaSpec::Value(rif.alpha()),
                [rif.beta().0, rif.beta().1],
            )
        };
        let (p, alpha, beta) = comp(r.phi());
        let second = r.second().map(|s| {
            let (p, alpha, beta) = comp(s);
            ComponentSpec { p, alpha, beta }
        });
        RispSpec {
            id: id.map(str::to_string),
            kind: match r.kind() {
                crate::rif::RispKind::Simple => KindSpec::Simple,
                crate::rif::RispKind::MonomialTwisted => KindSpec::MonomialTwisted,
                crate::rif::RispKind::Rim => KindSpec::Rim,
            },
            p,
            alpha,
            beta,
            second,
        }
    }
}

/// Parses and validates a map definition.
pub fn load_risp(json: &str) -> Result<(Option<String>, Risp)> {
    let spec = RispSpec::from_json(json)?;
    let r = spec.build()?;
    Ok((spec.id, r))
}

/// Polynomial JSON helper.
pub fn bipoly_from_json(s: &str) -> Result<(BiPoly, (usize, usize))> {
    let js: BiPolyJson = serde_json::from_str(s)?;
    js.parse()
}

/// One JSON object per frame.
pub fn write_orbit_jsonl<W: Write>(ds: &OrbitDataset, mut w: W) -> std::io::Result<()> {
    #[derive(Serialize)]
    struct Header<'a> {
        schema: &'a str,
        map_id: &'a str,
        n_iters: usize,
        seeds: &'a [(f64, f64)],
    }
    #[derive(Serialize)]
    struct Frame<'a> {
        frame: usize,
        points: &'a [(f64, f64)],
        flags: &'a [bool],
    }
    serde_json::to_writer(
        &mut w,
        &Header {
            schema: SCHEMA,
            map_id: &ds.map_id,
            n_iters: ds.n_iters,
            seeds: &ds.seeds,
        },
    )?;
    writeln!(w)?;
    for (k, (pts, flags)) in ds.frames.iter().zip(&ds.flags).enumerate() {
        serde_json::to_writer(
            &mut w,
            &Frame {
                frame: k + 1,
                points: pts,
                flags,
            },
        )?;
        writeln!(w)?;
    }
    Ok(())
}

/// `frame,seed_index,t1,t2,flag`.
pub fn write_orbit_csv<W: Write>(ds: &OrbitDataset, mut w: W) -> std::io::Result<()> {
    writeln!(w, "frame,seed_index,t1,t2,flag")?;
    for (k, (pts, flags)) in ds.frames.iter().zip(&ds.flags).enumerate() {
        for (i, (p, f)) in pts.iter().zip(flags).enumerate() {
            writeln!(w, "{},{},{:?},{:?},{}", k + 1, i, p.0, p.1, u8::from(*f))?;
        }
    }
    Ok(())
}

/// `lambda_angle,re_z1,im_z1,class,re_mult,im_mult,branch`.
pub fn write_curves_csv<W: Write>(trace: Option<&CurveTrace>, mut w: W) -> std::io::Result<()> {
    writeln!(w, "lambda_angle,re_z1,im_z1,class,re_mult,im_mult,branch")?;
    if let Some(trace) = trace {
        for curve in &trace.branches {
            for s in &curve.samples {
                writeln!(
                    w,
                    "{:?},{:?},{:?},{},{:?},{:?},{}",
                    s.lambda_angle,
                    s.z1.re,
                    s.z1.im,
                    s.class.as_str(),
                    s.multiplier.re,
                    s.multiplier.im,
                    curve.branch
                )?;
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub lambda_angle: f64,
    pub z1: Cpx,
    pub class: String,
    pub multiplier: Cpx,
    pub branch: u8,
}

/// Reads back a file written by [`write_curves_csv`].
pub fn read_curves_csv(s: &str) -> Result<Vec<CurveRow>> {
    let mut lines = s.lines();
    match lines.next() {
        Some("lambda_angle,re_z1,im_z1,class,re_mult,im_mult,branch") => {}
        _ => return Err(Error::Input("unexpected curves.csv header".into())),
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 7 {
                return Err(Error::Input(format!("bad curves.csv row: {l}")));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Input(format!("bad number {s}: {e}")))
            };
            Ok(CurveRow {
                lambda_angle: num(f[0])?,
                z1: Cpx::new(num(f[1])?, num(f[2])?),
                class: f[3].to_string(),
                multiplier: Cpx::new(num(f[4])?, num(f[5])?),
                branch: f[6]
                    .parse()
                    .map_err(|e| Error::Input(format!("bad branch {}: {e}", f[6])))?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_numeric_and_auto_alpha() {
        let s = r#"{"p":{"bidegree":[1,1],"coeffs":[[[2,0],[-1,0]],[[-1,0],[0,0]]]},"alpha":3.141592653589793}"#;
        let (_, r) = load_risp(s).unwrap();
        assert_eq!(r.phase(), Cpx::new(-1.0, 0.0));
        let s = r#"{"p":{"bidegree":[1,1],"coeffs":[[[2,0],[-1,0]],[[-1,0],[0,0]]]},"alpha":{"auto-sf":[1,0,1,0]}}"#;
        let (_, r) = load_risp(s).unwrap();
        assert!((r.alpha() - std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn rejects_unknown_fields_and_unstable() {
        let s = r#"{"p":{"bidegree":[0,0],"coeffs":[[[1,0]]]},"alpha":0,"bogus":1}"#;
        assert!(load_risp(s).is_err());
        let s = r#"{"p":{"bidegree":[1,1],"coeffs":[[[1,0],[-1,0]],[[-1,0],[0,0]]]},"alpha":0}"#;
        assert!(matches!(load_risp(s), Err(Error::UnstableDenominator { .. })));
    }

    #[test]
    fn rim_needs_second() {
        let s = r#"{"kind":"rim","p":{"bidegree":[1,1],"coeffs":[[[2,0],[-1,0]],[[-1,0],[0,0]]]},"alpha":0}"#;
        assert!(matches!(load_risp(s), Err(Error::Input(_))));
    }
}
